//! Anatomy of one orbit through the unfolding route.
//!
//! Instead of reflecting the trajectory at each wall, reflect the table:
//! the orbit straightens into the ray `t ↦ (a + t, (y/x)·t)` through the
//! edge tessellation, and each line crossing is one boundary strike.
//! This example traces the triangle orbit with direction pair (1, 2) at
//! offset 1/4 and prints every crossing, then reconciles the crossing
//! count with the closed-form decomposition N = strip_weight·y + m·b.
//!
//! Run with: `cargo run --example unfolding_trace`

use obtuse_billiards::rat::{rat, rint};
use obtuse_billiards::{
    contact_points, first_alignment, multiplicity_and_spacing, unfold_trace, DirectionPair, Offset,
    ShapeId, Tessellation,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let tess = Tessellation::build(ShapeId::Triangle120);
    let (x, y) = (1u64, 2u64);
    let d = DirectionPair::new(x, y)?;
    let a = Offset::new(rat(1, 4))?;

    // The first alignment extent: the smallest integer T after which the
    // unfolded ray meets the line arrangement the same way it started.
    let extent = first_alignment(x, y);
    println!("direction ({x}, {y}), offset 1/4, first alignment at T = {extent}");

    let trace = unfold_trace(&tess, &a, &d, &rint(extent as i64))?;
    for c in &trace.crossings {
        println!(
            "  t = {:>5}  {:?} line through offset {:>4}  at ({}, {})",
            c.t, c.line.class, c.line.offset, c.point.x, c.point.y
        );
    }
    println!(
        "{} proper crossings; terminal class {:?}",
        trace.edge_count, trace.terminal_class
    );

    // The same count, assembled without tracing anything: strips crossed
    // per unit rise, plus fence contacts that fall on barrier intervals.
    let profile = contact_points(&tess, &a, &d, extent);
    let (m, spacing) = multiplicity_and_spacing(x, y);
    let strip_weight = tess.strip_weight.unwrap() as u64;
    println!(
        "decomposition: {strip_weight}·{y} + {m}·{b} = {n}  (contact spacing {spacing})",
        b = profile.b,
        n = profile.n,
    );
    assert_eq!(trace.edge_count, profile.n);
    Ok(())
}
