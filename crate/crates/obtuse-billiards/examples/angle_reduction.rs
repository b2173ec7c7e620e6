//! Reducing an arbitrary direction pair into the standard wedge.
//!
//! The engine's counting formulas assume a direction pair with
//! `0 ≤ x < y` (or the diagonal (1, 1)). Any other pair is equivalent to
//! a standard one under the tessellation's symmetries; `reduce_angle`
//! finds the standard pair together with the exact affine frame map that
//! carries the original ray onto the reduced one.
//!
//! Run with: `cargo run --example angle_reduction`

use obtuse_billiards::geometry::ScaledPoint;
use obtuse_billiards::rat::{rat, rint};
use obtuse_billiards::reduce_angle;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for (x, y) in [(3u64, 1u64), (2, 1), (5, 2), (7, 1), (5, 4), (2, 3)] {
        let (reduced, frame) = reduce_angle(x, y)?;
        println!(
            "({x}, {y})  →  ({}, {}){}",
            reduced.x(),
            reduced.y(),
            if frame.reversed {
                "  (orientation reversed)"
            } else {
                ""
            }
        );

        // The frame map is exact: sample points of the original ray land
        // on the reduced ray, and the scaled metric is preserved.
        let p = ScaledPoint::new(rat(x as i64, 5), rat(y as i64, 5));
        let q = frame.apply(&p);
        let origin = frame.apply(&ScaledPoint::new(rint(0), rint(0)));
        let dx = &q.x - &origin.x;
        let dy = &q.y - &origin.y;
        // Direction of the image ray, as a cross-product check against
        // the reduced pair.
        let cross = &dx * rint(reduced.y() as i64) - &dy * rint(reduced.x() as i64);
        assert!(
            cross == rint(0),
            "image ray must be parallel to the reduced pair"
        );
        println!("    ({}, {}) ↦ ({}, {})", p.x, p.y, q.x, q.y);
    }
    Ok(())
}
