//! Atlas files: probe results serialized to CSV or JSON with exact
//! `p/q` rationals, a versioned header, deterministic row ordering, and
//! exact round-trips back into the hexagon laboratory's dataset form.

use std::fs;
use std::io::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{BilliardError, Result};
use crate::geometry::angle_of;
use crate::hexlab::{class_of, dataset_probes, BranchRecord};
use crate::rat::{parse_rat, to_f64, Rat};
use crate::sweep::{run_sweep, SweepConfig};
use crate::tessellation::ShapeId;

/// Version line written as the first line of every CSV atlas.
pub const ATLAS_HEADER: &str = "# obtuse-billiards atlas v1";

/// Column order of the CSV schema (fixed; versioned by [`ATLAS_HEADER`]).
pub const ATLAS_COLUMNS: [&str; 10] = [
    "shape",
    "x",
    "y",
    "a",
    "theta_degrees",
    "period",
    "T",
    "N",
    "branch",
    "status",
];

/// One probe of one `(shape, direction pair, offset)`, as written to
/// atlas files. The offset stays an exact rational in memory and is
/// serialized as a `p/q` string; `theta_degrees` is display-only.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AtlasRow {
    #[serde(with = "serde_shape")]
    pub shape: ShapeId,
    pub x: u64,
    pub y: u64,
    #[serde(with = "serde_rat")]
    pub a: Rat,
    pub theta_degrees: f64,
    /// Realized period at this offset; empty for non-periodic probes.
    pub period: Option<u64>,
    /// Horizontal unfolding extent (obtuse shapes only).
    #[serde(rename = "T")]
    pub extent: Option<u64>,
    /// Measured crossing count of the full unfolding (obtuse shapes only).
    #[serde(rename = "N")]
    pub edge_count: Option<u64>,
    /// Congruence-branch id, `"<x mod 3>-<parity relation>"`.
    pub branch: String,
    pub status: String,
}

mod serde_rat {
    use serde::{de, Deserialize, Deserializer, Serializer};

    use crate::rat::{fmt_rat, parse_rat, Rat};

    pub fn serialize<S: Serializer>(r: &Rat, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&fmt_rat(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rat, D::Error> {
        let s = String::deserialize(d)?;
        parse_rat(&s).ok_or_else(|| de::Error::custom(format!("malformed rational {s:?}")))
    }
}

mod serde_shape {
    use serde::{de, Deserialize, Deserializer, Serializer};

    use crate::tessellation::ShapeId;

    pub fn serialize<S: Serializer>(v: &ShapeId, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(v.name())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<ShapeId, D::Error> {
        let s = String::deserialize(d)?;
        ShapeId::parse(&s).ok_or_else(|| de::Error::custom(format!("unknown shape {s:?}")))
    }
}

fn branch_label(x: u64, y: u64) -> String {
    let (i, rel) = class_of(x, y);
    format!("{i}-{}", rel.label())
}

/// Probe every coprime pair of the shape's sweep range at
/// `offsets_per_pair` offsets each and collect one row per probe,
/// sorted by `(x, y, a)`.
///
/// Obtuse shapes run the full cross-checked sweep; a sweep mismatch
/// (formula route disagreeing with the folding route) aborts the atlas
/// with [`BilliardError::EngineDisagreement`]. The hexagon runs the
/// laboratory's folding probes with the laboratory's per-pair seeds, so
/// an atlas written with the same parameters as a dataset build
/// contains exactly that dataset.
pub fn build_atlas(
    shape: ShapeId,
    max_sum: u64,
    offsets_per_pair: u32,
    seed: u64,
    parallel: bool,
) -> Result<Vec<AtlasRow>> {
    let mut rows = match shape {
        ShapeId::Hexagon => hexagon_rows(max_sum, offsets_per_pair, seed, parallel),
        _ => obtuse_rows(shape, max_sum, offsets_per_pair, seed, parallel)?,
    };
    rows.sort_by(|l, r| (l.x, l.y).cmp(&(r.x, r.y)).then_with(|| l.a.cmp(&r.a)));
    Ok(rows)
}

fn obtuse_rows(
    shape: ShapeId,
    max_sum: u64,
    offsets_per_pair: u32,
    seed: u64,
    parallel: bool,
) -> Result<Vec<AtlasRow>> {
    let report = run_sweep(&SweepConfig {
        shape,
        max_sum,
        offsets_per_pair,
        seed,
        parallel,
    });
    if let Some((x, y, m)) = report.mismatches().first() {
        return Err(BilliardError::EngineDisagreement(format!(
            "pair ({x}, {y}): {m}"
        )));
    }
    Ok(report
        .pairs
        .iter()
        .flat_map(|pair| {
            pair.probes.iter().map(|probe| AtlasRow {
                shape,
                x: pair.x,
                y: pair.y,
                a: probe.a.value().clone(),
                theta_degrees: angle_of(pair.x, pair.y),
                period: probe.period,
                extent: probe.extent,
                edge_count: probe.edge_count,
                branch: branch_label(pair.x, pair.y),
                status: probe.status.to_string(),
            })
        })
        .collect())
}

fn hexagon_rows(max_sum: u64, offsets_per_pair: u32, seed: u64, parallel: bool) -> Vec<AtlasRow> {
    dataset_probes(max_sum, offsets_per_pair, seed, parallel)
        .into_iter()
        .flat_map(|(x, y, probes)| {
            probes.into_iter().map(move |probe| AtlasRow {
                shape: ShapeId::Hexagon,
                x,
                y,
                a: probe.a.value().clone(),
                theta_degrees: angle_of(x, y),
                period: probe.period,
                extent: None,
                edge_count: None,
                branch: branch_label(x, y),
                status: probe.status.to_string(),
            })
        })
        .collect()
}

/// Write rows as CSV: the version comment, the column header, then one
/// record per row. A partially written file is removed on error.
pub fn write_csv(rows: &[AtlasRow], path: &Path) -> Result<()> {
    let outcome = (|| -> Result<()> {
        let mut file = fs::File::create(path)?;
        writeln!(file, "{ATLAS_HEADER}")?;
        let mut w = csv::WriterBuilder::new()
            .has_headers(false)
            .from_writer(file);
        w.write_record(ATLAS_COLUMNS)?;
        for row in rows {
            w.serialize(row)?;
        }
        w.flush()?;
        Ok(())
    })();
    if outcome.is_err() {
        let _ = fs::remove_file(path);
    }
    outcome
}

/// Write rows as a JSON array of objects with the CSV's field names.
/// A partially written file is removed on error.
pub fn write_json(rows: &[AtlasRow], path: &Path) -> Result<()> {
    let outcome = (|| -> Result<()> {
        let mut file = fs::File::create(path)?;
        serde_json::to_writer_pretty(&mut file, rows)?;
        writeln!(file)?;
        Ok(())
    })();
    if outcome.is_err() {
        let _ = fs::remove_file(path);
    }
    outcome
}

/// Read an atlas back, dispatching on the file extension
/// (`.csv`/`.json`). CSV files must carry the version header.
pub fn read_atlas(path: &Path) -> Result<Vec<AtlasRow>> {
    match path.extension().and_then(|e| e.to_str()) {
        Some("csv") => read_csv(path),
        Some("json") => read_json(path),
        other => Err(BilliardError::Other(format!(
            "unrecognized atlas extension {other:?} (expected .csv or .json)"
        ))),
    }
}

fn read_csv(path: &Path) -> Result<Vec<AtlasRow>> {
    let text = fs::read_to_string(path)?;
    let first = text.lines().next().unwrap_or("");
    if first.trim() != ATLAS_HEADER {
        return Err(BilliardError::Other(format!(
            "{}: missing atlas version header (expected {ATLAS_HEADER:?}, found {first:?})",
            path.display()
        )));
    }
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let mut rows = Vec::new();
    for row in reader.deserialize() {
        rows.push(row?);
    }
    Ok(rows)
}

fn read_json(path: &Path) -> Result<Vec<AtlasRow>> {
    let file = fs::File::open(path)?;
    Ok(serde_json::from_reader(std::io::BufReader::new(file))?)
}

/// Distill hexagon rows into the laboratory's dataset form: one record
/// per distinct `(x, y, period)`, sorted — the inverse of exporting a
/// dataset through [`build_atlas`].
pub fn dataset_from_rows(rows: &[AtlasRow]) -> Vec<BranchRecord> {
    let mut seen = std::collections::BTreeSet::new();
    for row in rows {
        if row.shape == ShapeId::Hexagon {
            if let Some(p) = row.period {
                seen.insert((row.x, row.y, p));
            }
        }
    }
    seen.into_iter()
        .map(|(x, y, p)| BranchRecord::new(x, y, p))
        .collect()
}

/// Parse a user-supplied offset argument (`p/q` or integer) into an
/// exact rational.
pub fn parse_offset(s: &str) -> Result<Rat> {
    parse_rat(s).ok_or_else(|| BilliardError::Other(format!("malformed rational {s:?}")))
}

/// Display helper: the offset of a row as an `f64` (plots, summaries).
pub fn offset_display(row: &AtlasRow) -> f64 {
    to_f64(&row.a)
}
