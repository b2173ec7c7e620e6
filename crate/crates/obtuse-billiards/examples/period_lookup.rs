//! Closed-form period lookup, then realization by exact folding.
//!
//! For each obtuse shape and a few direction pairs, print the candidate
//! periods predicted by the counting formulas, then fold an actual orbit
//! at a sample offset and report which candidate it realizes.
//!
//! Run with: `cargo run --example period_lookup`

use obtuse_billiards::rat::rat;
use obtuse_billiards::{
    default_max_bounces, launch, period_formula, DirectionPair, Offset, OrbitStatus, ShapeId,
    Tessellation,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cases = [
        (ShapeId::Triangle120, 1u64, 1u64, rat(0, 1)),
        (ShapeId::Triangle120, 1, 1, rat(1, 2)),
        (ShapeId::Triangle120, 0, 1, rat(1, 2)),
        (ShapeId::Triangle120, 3, 5, rat(1, 4)),
        (ShapeId::Rhombus60, 1, 1, rat(1, 2)),
        (ShapeId::Rhombus60, 2, 5, rat(1, 23)),
        (ShapeId::Kite, 0, 1, rat(-1, 4)),
        (ShapeId::Kite, 1, 2, rat(-1, 7)),
    ];

    for (shape, x, y, a) in cases {
        let tess = Tessellation::build(shape);
        let prediction = period_formula(shape, x, y);
        let d = DirectionPair::new(x, y)?;
        let offset = Offset::new(a.clone())?;
        let orbit = launch(&tess, &offset, &d, default_max_bounces(&d))?;

        let realized = match orbit.status {
            OrbitStatus::Periodic => format!("period {}", orbit.period.unwrap()),
            OrbitStatus::Singular => "singular (hits a vertex)".to_string(),
            OrbitStatus::Truncated => "truncated".to_string(),
        };
        println!(
            "{shape} ({x}, {y})  candidates {:?}  at offset {}: {realized}",
            prediction.candidates, a,
        );
    }
    Ok(())
}
