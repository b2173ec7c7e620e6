//! Rendering an orbit to SVG, folded and unfolded side by side.
//!
//! The renderer draws the tessellation's line families in class colors,
//! the unfolded ray with its crossing ticks and fence contacts, and the
//! folded orbit inside the fundamental polygon — all from the same exact
//! data the engine computes, mapped to true (unscaled) coordinates.
//!
//! Run with: `cargo run --example render_orbit`

use obtuse_billiards::rat::rat;
use obtuse_billiards::{
    render, write_svg, DirectionPair, Offset, RenderMode, RenderSpec, ShapeId, Tessellation,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let out_dir = std::env::temp_dir();
    let cases = [
        (
            ShapeId::Triangle120,
            1u64,
            1u64,
            rat(1, 2),
            "triangle-1-1.svg",
        ),
        (ShapeId::Kite, 1, 2, rat(-1, 7), "kite-1-2.svg"),
        (ShapeId::Hexagon, 4, 3, rat(1, 25), "hexagon-4-3.svg"),
    ];

    for (shape, x, y, a, name) in cases {
        let tess = Tessellation::build(shape);
        let spec = RenderSpec {
            shape,
            a: Offset::new(a)?,
            d: DirectionPair::new(x, y)?,
            mode: RenderMode::Both,
            t_max: None,
        };
        let svg = render(&tess, &spec)?;
        let path = out_dir.join(name);
        write_svg(&svg, &path)?;
        println!(
            "{shape} ({x}, {y}): {} bytes → {}",
            svg.len(),
            path.display()
        );
    }
    Ok(())
}
