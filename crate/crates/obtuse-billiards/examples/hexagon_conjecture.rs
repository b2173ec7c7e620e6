//! Testing the hexagon period conjecture against exact measurement.
//!
//! For the regular hexagon the engine carries a conjectured table of
//! twelve period expressions, two per residue-and-parity class of the
//! direction pair. This example builds a measured dataset — every
//! admissible coprime pair with `x + y ≤ 24`, several exact offsets
//! each — and audits how the observed periods line up with the table.
//! The honest answer on this construction: mostly they don't, and the
//! audit says so rather than smoothing it over.
//!
//! Run with: `cargo run --example hexagon_conjecture`

use obtuse_billiards::hexlab::{audit_dataset, class_of, conjectured_expressions};
use obtuse_billiards::{build_dataset, BranchSide};

fn main() {
    let records = build_dataset(24, 4, 0, true);
    let findings = audit_dataset(&records);

    println!("{} observations (pair, period):", records.len());
    for r in records.iter().take(10) {
        let table = conjectured_expressions(r.x, r.y);
        let verdict = match r.side {
            BranchSide::A => "matches the first set",
            BranchSide::Complement => "matches the complement set",
            BranchSide::Ambiguous => "matches both sets",
            BranchSide::Neither => "matches neither set",
        };
        println!(
            "  ({:2}, {:2}) class {:?}: period {:3} vs {:?} / {:?} — {verdict}",
            r.x,
            r.y,
            class_of(r.x, r.y),
            r.period,
            table.a_values(),
            table.complement_values(),
        );
    }
    println!("  ...");

    let matched = records.len() - findings.unmatched.len();
    println!(
        "{matched} of {} observations match a conjectured expression; \
         {} match neither",
        records.len(),
        findings.unmatched.len()
    );
    println!(
        "pairs realizing more than two periods: {}",
        findings.multi_period_pairs.len()
    );
    if !findings.unmatched.is_empty() {
        println!(
            "the conjectured table does not describe the measured periods of \
             this construction; see `obtuse-billiards hexlab` for the full report"
        );
    }
}
