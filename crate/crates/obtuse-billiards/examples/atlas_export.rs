//! Exporting a period atlas and reading it back.
//!
//! An atlas is the flat record of a sweep: one row per probed orbit with
//! the direction pair, exact offset, candidate branch, realized period,
//! and extent. Rows serialize to versioned CSV (offsets as exact `p/q`
//! strings) or to JSON with the same schema, and both round-trip.
//!
//! Run with: `cargo run --example atlas_export`

use obtuse_billiards::atlas::{build_atlas, read_atlas, write_csv, write_json};
use obtuse_billiards::ShapeId;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let rows = build_atlas(ShapeId::Rhombus60, 12, 3, 11, false)?;
    println!("built {} rows for the rhombus, x + y ≤ 12", rows.len());

    let dir = std::env::temp_dir();
    let csv_path = dir.join("rhombus-atlas.csv");
    let json_path = dir.join("rhombus-atlas.json");
    write_csv(&rows, &csv_path)?;
    write_json(&rows, &json_path)?;

    let text = std::fs::read_to_string(&csv_path)?;
    for line in text.lines().take(4) {
        println!("  {line}");
    }
    println!("  ...");

    // Both formats parse back to the identical row set.
    let from_csv = read_atlas(&csv_path)?;
    let from_json = read_atlas(&json_path)?;
    assert_eq!(rows, from_csv);
    assert_eq!(rows, from_json);
    println!(
        "round-trip OK: {} rows from {} and {}",
        from_csv.len(),
        csv_path.display(),
        json_path.display()
    );
    Ok(())
}
