//! Command-line interface.
//!
//! Exit codes: `0` success, `1` verification mismatch, `2` invalid
//! input, `3` the two period routes disagree, `4` a hexagon observation
//! matches neither conjectured expression.

use std::path::{Path, PathBuf};

use clap::{ArgGroup, Parser, Subcommand};

use crate::atlas::{self, parse_offset};
use crate::error::BilliardError;
use crate::fence::period_formula;
use crate::hexlab::{
    self, audit_dataset, build_dataset, class_of, closure_map_check, conjectured_expressions,
    modulus_grid_search, pair_labels, BranchRecord, BranchSide,
};
use crate::orbit::{
    default_max_bounces, detect_period_unfolding, launch, reduce_angle, DirectionPair, Offset,
    OrbitResult, OrbitStatus,
};
use crate::rat::{fmt_rat, gcd_u64, rat};
use crate::render::{render, write_svg, RenderMode, RenderSpec};
use crate::sweep::{run_sweep, SweepConfig};
use crate::tessellation::{ShapeId, Tessellation};

#[derive(Parser)]
#[command(
    name = "obtuse-billiards",
    version,
    about = "Exact periodic billiard orbits on edge-tessellating polygons",
    after_help = "Shapes: triangle (120-deg isosceles), rhombus (60-deg), kite \
                  (60-90-120), hexagon (regular).\nDirections are natural pairs \
                  (x, y); the launched slope is y*sqrt(3)/x, so (0, 1) is vertical.\n\
                  Offsets are exact rationals like 1/2 or -3/7 with -1 < a < 1."
)]
struct Cli {
    /// Seed for randomized offset draws.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Worker threads for sweeps: 0 = one per core, 1 = serial.
    #[arg(long, global = true, default_value_t = 0)]
    jobs: usize,

    /// Suppress secondary detail; results and failures still print.
    #[arg(long, global = true)]
    quiet: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Period candidates for a direction, cross-checked between the
    /// closed-form and unfolding routes; optionally the realized period
    /// at one offset.
    Period {
        /// triangle | rhombus | kite | hexagon
        shape: String,
        x: u64,
        y: u64,
        /// Launch offset `p/q` on the base line (default: survey several).
        #[arg(long, allow_hyphen_values = true)]
        offset: Option<String>,
    },

    /// Sweep every coprime standard-range pair, cross-checking the
    /// closed-form prediction against folded orbits at every probe.
    Verify {
        /// triangle | rhombus | kite (the hexagon has no closed form)
        shape: String,
        /// Probe pairs with `x + y` up to this bound.
        #[arg(long)]
        max_sum: u64,
        /// Offsets probed per pair.
        #[arg(long, default_value_t = 8)]
        offsets: u32,
    },

    /// Probe a pair range and write one row per launch as CSV or JSON.
    Atlas {
        /// triangle | rhombus | kite | hexagon
        shape: String,
        /// Probe pairs with `x + y` up to this bound.
        #[arg(long)]
        max_sum: u64,
        /// Offsets probed per pair.
        #[arg(long, default_value_t = 4)]
        offsets: u32,
        /// csv | json (default: inferred from the output extension).
        #[arg(long)]
        format: Option<String>,
        /// Output file.
        #[arg(long)]
        out: PathBuf,
    },

    /// Hexagon experiments: classify observed periods against the
    /// twelve-branch tables, list counterexamples, and optionally run
    /// the congruence grid search and the closure-map check.
    #[command(group(ArgGroup::new("source").args(["dataset", "max_sum"])))]
    Hexlab {
        /// Load observations from an atlas file instead of probing.
        #[arg(long)]
        dataset: Option<PathBuf>,
        /// Probe pairs with `x + y` up to this bound (default 40).
        #[arg(long)]
        max_sum: Option<u64>,
        /// Offsets probed per pair when building the dataset.
        #[arg(long, default_value_t = 6)]
        offsets: u32,
        /// Search linear congruences separating the observed sides.
        #[arg(long)]
        grid_search: bool,
        /// Push `3 | x` pairs through the closure map and classify the
        /// image pairs.
        #[arg(long)]
        closure: bool,
        /// Also write the full report as JSON.
        #[arg(long)]
        json: Option<PathBuf>,
    },

    /// Render the tessellation, the unfolded ray, and/or the folded
    /// orbit to SVG.
    Render {
        /// triangle | rhombus | kite | hexagon
        shape: String,
        x: u64,
        y: u64,
        /// Launch offset `p/q` (default 0; hexagon needs a non-corner
        /// offset such as 1/25).
        #[arg(long, default_value = "0", allow_hyphen_values = true)]
        offset: String,
        /// unfold | fold | both
        #[arg(long, default_value = "both")]
        mode: String,
        /// Output file.
        #[arg(long)]
        out: PathBuf,
        /// Horizontal extent of the unfolding layer (default: one full
        /// period cycle).
        #[arg(long)]
        t_max: Option<u64>,
    },
}

/// Exit status of one command.
fn error_code(e: &BilliardError) -> i32 {
    match e {
        BilliardError::EngineDisagreement(_) => 3,
        _ => 2,
    }
}

pub fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };

    if cli.jobs >= 1 {
        // Ignore the error: a pool may already be installed (tests).
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(cli.jobs)
            .build_global();
    }
    let parallel = cli.jobs != 1;

    let outcome = match &cli.command {
        Command::Period {
            shape,
            x,
            y,
            offset,
        } => cmd_period(&cli, shape, *x, *y, offset.as_deref()),
        Command::Verify {
            shape,
            max_sum,
            offsets,
        } => cmd_verify(&cli, shape, *max_sum, *offsets, parallel),
        Command::Atlas {
            shape,
            max_sum,
            offsets,
            format,
            out,
        } => cmd_atlas(
            &cli,
            shape,
            *max_sum,
            *offsets,
            format.as_deref(),
            out,
            parallel,
        ),
        Command::Hexlab {
            dataset,
            max_sum,
            offsets,
            grid_search,
            closure,
            json,
        } => cmd_hexlab(
            &cli,
            dataset.as_deref(),
            *max_sum,
            *offsets,
            *grid_search,
            *closure,
            json.as_deref(),
            parallel,
        ),
        Command::Render {
            shape,
            x,
            y,
            offset,
            mode,
            out,
            t_max,
        } => cmd_render(&cli, shape, *x, *y, offset, mode, out, *t_max),
    };

    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            error_code(&e)
        }
    }
}

fn parse_shape(s: &str) -> Result<ShapeId, BilliardError> {
    ShapeId::parse(s).ok_or_else(|| {
        BilliardError::Other(format!(
            "unknown shape {s:?} (expected triangle, rhombus, kite, or hexagon)"
        ))
    })
}

fn parse_offset_arg(s: &str) -> Result<Offset, BilliardError> {
    Offset::new(parse_offset(s)?)
}

/// Reduce a raw command-line pair by its common factor.
fn reduce_gcd(x: u64, y: u64) -> Result<(u64, u64), BilliardError> {
    if x == 0 && y == 0 {
        return Err(BilliardError::InvalidPair {
            x,
            y,
            reason: "both components are zero".into(),
        });
    }
    let g = gcd_u64(x, y);
    Ok((x / g, y / g))
}

// ---------------------------------------------------------------------------
// period
// ---------------------------------------------------------------------------

fn cmd_period(
    cli: &Cli,
    shape: &str,
    x: u64,
    y: u64,
    offset: Option<&str>,
) -> Result<i32, BilliardError> {
    let shape = parse_shape(shape)?;
    let (rx, ry) = reduce_gcd(x, y)?;

    if shape == ShapeId::Hexagon {
        return cmd_period_hexagon(cli, rx, ry, offset);
    }

    let (d, _frame) = reduce_angle(rx, ry)?;
    if (d.x(), d.y()) != (x, y) && !cli.quiet {
        println!("direction ({x}, {y}) reduces to {d}");
    }
    let prediction = period_formula(shape, d.x(), d.y());
    let (i, rel) = prediction.branch;
    println!(
        "{shape} {d}: branch ({i} mod 3, {} parity), candidate periods {:?}",
        rel.label(),
        prediction.candidates
    );

    let tess = Tessellation::build(shape);
    match offset {
        Some(text) => {
            let a = parse_offset_arg(text)?;
            let folded = launch(&tess, &a, &d, default_max_bounces(&d))?;
            let unfolded = detect_period_unfolding(&tess, &a, &d)?;
            report_realized(shape, &a, &folded)?;
            cross_check(&prediction.candidates, &folded, &unfolded)?;
        }
        None => {
            // Survey a few offsets so both candidates of a biperiodic
            // branch have a chance to realize.
            let mut realized = std::collections::BTreeSet::new();
            let mut singular = 0u32;
            for k in 0..8i64 {
                let a = Offset::new(rat(2 * k + 1, 17)).expect("interior offset");
                let folded = launch(&tess, &a, &d, default_max_bounces(&d))?;
                match folded.status {
                    OrbitStatus::Periodic => {
                        let unfolded = detect_period_unfolding(&tess, &a, &d)?;
                        cross_check(&prediction.candidates, &folded, &unfolded)?;
                        realized.insert(folded.period.expect("periodic"));
                    }
                    _ => singular += 1,
                }
            }
            if !cli.quiet {
                println!(
                    "  surveyed 8 offsets: realized periods {:?}, {singular} singular",
                    realized.iter().collect::<Vec<_>>()
                );
            }
        }
    }
    Ok(0)
}

fn report_realized(shape: ShapeId, a: &Offset, folded: &OrbitResult) -> Result<(), BilliardError> {
    match folded.status {
        OrbitStatus::Periodic => {
            println!(
                "{shape} at offset {}: period {}",
                fmt_rat(a.value()),
                folded.period.expect("periodic")
            );
            Ok(())
        }
        OrbitStatus::Singular => {
            println!(
                "{shape} at offset {}: singular (the orbit hits a vertex)",
                fmt_rat(a.value())
            );
            Ok(())
        }
        OrbitStatus::Truncated => Err(BilliardError::Other(
            "orbit did not close within the bounce budget".into(),
        )),
    }
}

/// Zero tolerance between the three period sources: the folded orbit,
/// the unfolding detection, and the closed-form candidate set.
fn cross_check(
    candidates: &[u64],
    folded: &OrbitResult,
    unfolded: &OrbitResult,
) -> Result<(), BilliardError> {
    if folded.status != unfolded.status {
        return Err(BilliardError::EngineDisagreement(format!(
            "folded orbit is {} but the unfolding route says {}",
            folded.status, unfolded.status
        )));
    }
    if folded.period != unfolded.period {
        return Err(BilliardError::EngineDisagreement(format!(
            "folded period {:?} != unfolded period {:?}",
            folded.period, unfolded.period
        )));
    }
    if let Some(p) = folded.period {
        if !candidates.contains(&p) {
            return Err(BilliardError::EngineDisagreement(format!(
                "realized period {p} is outside the closed-form candidates {candidates:?}"
            )));
        }
    }
    Ok(())
}

fn cmd_period_hexagon(
    cli: &Cli,
    x: u64,
    y: u64,
    offset: Option<&str>,
) -> Result<i32, BilliardError> {
    let d = DirectionPair::new(x, y)?;
    if !d.in_hexagon_range() {
        return Err(BilliardError::InvalidPair {
            x,
            y,
            reason: "hexagon directions need x/3 < y < x".into(),
        });
    }
    let (i, rel) = class_of(x, y);
    let table = conjectured_expressions(x, y);
    println!(
        "hexagon ({x}, {y}): class ({i} mod 3, {} parity)",
        rel.label()
    );
    if !cli.quiet {
        let fmt_side = |side: &hexlab::ExpressionList| {
            side.iter()
                .map(|(s, v)| format!("{s} = {v}"))
                .collect::<Vec<_>>()
                .join(", ")
        };
        println!("  conjectured first set: {}", fmt_side(&table.a_side));
        println!("  conjectured complement: {}", fmt_side(&table.complement));
    }
    match offset {
        Some(text) => {
            let a = parse_offset_arg(text)?;
            let result = hexlab::hexagon_period(&a, x, y)?;
            report_realized(ShapeId::Hexagon, &a, &result)?;
            if let Some(p) = result.period {
                let (formula, side) = hexlab::classify_period(x, y, p);
                println!("  conjecture match: {side} ({formula})");
            }
        }
        None => {
            let periods = hexlab::probe_pair(x, y, 8, cli.seed);
            println!("  observed periods {periods:?} over 8 offsets");
            for p in &periods {
                let (formula, side) = hexlab::classify_period(x, y, *p);
                println!("    period {p}: {side} ({formula})");
            }
        }
    }
    Ok(0)
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

fn cmd_verify(
    cli: &Cli,
    shape: &str,
    max_sum: u64,
    offsets: u32,
    parallel: bool,
) -> Result<i32, BilliardError> {
    let shape = parse_shape(shape)?;
    if shape == ShapeId::Hexagon {
        return Err(BilliardError::Other(
            "verify needs a closed-form period route; the hexagon has none \
             (use `hexlab` for its conjecture report)"
                .into(),
        ));
    }
    let report = run_sweep(&SweepConfig {
        shape,
        max_sum,
        offsets_per_pair: offsets,
        seed: cli.seed,
        parallel,
    });
    if !cli.quiet {
        for pair in &report.pairs {
            println!(
                "  ({}, {}): candidates {:?}, realized {:?}, {} singular",
                pair.x, pair.y, pair.prediction.candidates, pair.realized, pair.singular_probes
            );
        }
    }
    let mismatches = report.mismatches();
    if let Some((x, y, msg)) = mismatches.first() {
        println!("MISMATCH at ({x}, {y}): {msg}");
        return Ok(1);
    }
    println!("{}", report.summary());
    Ok(0)
}

// ---------------------------------------------------------------------------
// atlas
// ---------------------------------------------------------------------------

fn cmd_atlas(
    cli: &Cli,
    shape: &str,
    max_sum: u64,
    offsets: u32,
    format: Option<&str>,
    out: &Path,
    parallel: bool,
) -> Result<i32, BilliardError> {
    let shape = parse_shape(shape)?;
    let format = match format {
        Some(f) => f.to_ascii_lowercase(),
        None => match out.extension().and_then(|e| e.to_str()) {
            Some("json") => "json".to_string(),
            _ => "csv".to_string(),
        },
    };
    let rows = atlas::build_atlas(shape, max_sum, offsets, cli.seed, parallel)?;
    match format.as_str() {
        "csv" => atlas::write_csv(&rows, out)?,
        "json" => atlas::write_json(&rows, out)?,
        other => {
            return Err(BilliardError::Other(format!(
                "unknown atlas format {other:?} (expected csv or json)"
            )))
        }
    }
    if !cli.quiet {
        println!("wrote {} rows to {}", rows.len(), out.display());
    }
    Ok(0)
}

// ---------------------------------------------------------------------------
// hexlab
// ---------------------------------------------------------------------------

#[allow(clippy::too_many_arguments)]
fn cmd_hexlab(
    cli: &Cli,
    dataset: Option<&Path>,
    max_sum: Option<u64>,
    offsets: u32,
    grid_search: bool,
    closure: bool,
    json_out: Option<&Path>,
    parallel: bool,
) -> Result<i32, BilliardError> {
    let records: Vec<BranchRecord> = match dataset {
        Some(path) => {
            let rows = atlas::read_atlas(path)?;
            let records = atlas::dataset_from_rows(&rows);
            if records.is_empty() {
                return Err(BilliardError::Other(format!(
                    "{} holds no periodic hexagon rows",
                    path.display()
                )));
            }
            records
        }
        None => build_dataset(max_sum.unwrap_or(40), offsets, cli.seed, parallel),
    };

    let labels = pair_labels(&records);
    let findings = audit_dataset(&records);

    println!(
        "hexagon dataset: {} observations over {} pairs",
        records.len(),
        labels.len()
    );
    if !cli.quiet {
        for label in &labels {
            let periods: Vec<u64> = records
                .iter()
                .filter(|r| (r.x, r.y) == (label.x, label.y))
                .map(|r| r.period)
                .collect();
            let (i, rel) = label.class;
            println!(
                "  ({}, {}) class ({i} mod 3, {}): periods {periods:?} → {}",
                label.x,
                label.y,
                rel.label(),
                label.side
            );
        }
    }

    let side_count = |side: BranchSide| labels.iter().filter(|l| l.side == side).count();
    println!(
        "sides: {} first-set, {} complement, {} ambiguous, {} neither",
        side_count(BranchSide::A),
        side_count(BranchSide::Complement),
        side_count(BranchSide::Ambiguous),
        side_count(BranchSide::Neither)
    );

    if !findings.multi_period_pairs.is_empty() {
        println!("pairs with more than two periods:");
        for (x, y, periods) in &findings.multi_period_pairs {
            println!("  ({x}, {y}): {periods:?}");
        }
    }
    if !findings.unmatched.is_empty() {
        println!("counterexamples — observed periods matching neither conjectured expression:");
        for r in &findings.unmatched {
            let table = conjectured_expressions(r.x, r.y);
            println!(
                "  ({}, {}): period {} (conjectured first set {:?}, complement {:?})",
                r.x,
                r.y,
                r.period,
                table.a_values(),
                table.complement_values()
            );
        }
    }

    let conditions = if grid_search {
        let found = modulus_grid_search(&records);
        match found.first() {
            Some(c) => println!(
                "grid search: {} separating congruence(s), e.g. {c}",
                found.len()
            ),
            None => println!("grid search: no separating congruence found"),
        }
        found
    } else {
        Vec::new()
    };

    let closure_report = closure.then(|| {
        let report = closure_map_check(&records, cli.seed);
        println!(
            "closure map: {} images on the first set, {} ambiguous, {} off it, {} out of range",
            report.images_on_a_side,
            report.images_ambiguous,
            report.images_off_a_side,
            report.images_out_of_range
        );
        if !cli.quiet {
            for ((from, to), n) in &report.transitions {
                println!(
                    "  class ({} mod 3, {}) → ({} mod 3, {}): {n} pair(s)",
                    from.0,
                    from.1.label(),
                    to.0,
                    to.1.label()
                );
            }
        }
        report
    });

    if let Some(path) = json_out {
        let text = hexlab_json(&records, &findings, &conditions, closure_report.as_ref());
        let outcome = std::fs::write(path, text);
        if outcome.is_err() {
            let _ = std::fs::remove_file(path);
        }
        outcome?;
        if !cli.quiet {
            println!("wrote JSON report to {}", path.display());
        }
    }

    if findings.unmatched.is_empty() {
        println!("verdict: every observed period matches a conjectured expression");
        Ok(0)
    } else {
        println!(
            "verdict: {} observation(s) match neither conjectured expression",
            findings.unmatched.len()
        );
        Ok(4)
    }
}

fn hexlab_json(
    records: &[BranchRecord],
    findings: &hexlab::DatasetFindings,
    conditions: &[hexlab::ModulusCondition],
    closure: Option<&hexlab::ClosureReport>,
) -> String {
    use serde_json::json;
    let record_json = |r: &BranchRecord| {
        json!({
            "x": r.x,
            "y": r.y,
            "period": r.period,
            "class": { "residue": r.congruence_class.0, "parity": r.congruence_class.1.label() },
            "matched_formula": r.matched_formula,
            "side": r.side.to_string(),
        })
    };
    let value = json!({
        "observations": records.iter().map(record_json).collect::<Vec<_>>(),
        "unmatched": findings.unmatched.iter().map(record_json).collect::<Vec<_>>(),
        "multi_period_pairs": findings
            .multi_period_pairs
            .iter()
            .map(|(x, y, ps)| json!({ "x": x, "y": y, "periods": ps }))
            .collect::<Vec<_>>(),
        "congruences": conditions.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
        "closure": closure.map(|c| {
            json!({
                "images_on_a_side": c.images_on_a_side,
                "images_ambiguous": c.images_ambiguous,
                "images_off_a_side": c.images_off_a_side,
                "images_out_of_range": c.images_out_of_range,
            })
        }),
    });
    let mut text = serde_json::to_string_pretty(&value).expect("report serializes");
    text.push('\n');
    text
}

// ---------------------------------------------------------------------------
// render
// ---------------------------------------------------------------------------

#[allow(clippy::too_many_arguments)]
fn cmd_render(
    cli: &Cli,
    shape: &str,
    x: u64,
    y: u64,
    offset: &str,
    mode: &str,
    out: &Path,
    t_max: Option<u64>,
) -> Result<i32, BilliardError> {
    let shape = parse_shape(shape)?;
    let mode = RenderMode::parse(mode).ok_or_else(|| {
        BilliardError::Other(format!(
            "unknown render mode {mode:?} (expected unfold, fold, or both)"
        ))
    })?;
    let (rx, ry) = reduce_gcd(x, y)?;
    let d = if shape == ShapeId::Hexagon {
        DirectionPair::new(rx, ry)?
    } else {
        reduce_angle(rx, ry)?.0
    };
    let a = parse_offset_arg(offset)?;
    let tess = Tessellation::build(shape);
    let spec = RenderSpec {
        shape,
        a,
        d,
        mode,
        t_max,
    };
    let svg = render(&tess, &spec)?;
    write_svg(&svg, out)?;
    if !cli.quiet {
        println!("wrote {}", out.display());
    }
    Ok(0)
}
