//! Cross-verified period sweep over the 120° isosceles triangle.
//!
//! For every coprime direction pair with `x + y ≤ 20` the sweep computes
//! the closed-form candidate periods, folds orbits at several offsets,
//! independently re-derives each period by unfolding, and records any
//! disagreement. A clean run prints zero mismatches.
//!
//! Run with: `cargo run --example triangle_sweep`

use obtuse_billiards::{run_sweep, ShapeId, SweepConfig};

fn main() {
    let config = SweepConfig {
        shape: ShapeId::Triangle120,
        max_sum: 20,
        offsets_per_pair: 4,
        seed: 7,
        parallel: true,
    };
    let report = run_sweep(&config);

    for pair in report.pairs.iter().take(6) {
        println!(
            "({}, {:2})  candidates {:?}  realized {:?}",
            pair.x, pair.y, pair.prediction.candidates, pair.realized
        );
    }
    println!("... {} pairs total", report.pairs.len());

    let mismatches = report.mismatches();
    println!("{}", report.summary());
    assert!(mismatches.is_empty(), "mismatches: {mismatches:?}");
}
