//! Hexagon laboratory: mass period computation on the regular hexagon,
//! branch classification against the twelve conjectured period
//! expressions, the negative linear-modulus search, and the
//! `(27y−7x, 11y−3x)` closure check.
//!
//! The hexagon's reflection group contains rotations, which breaks the
//! crossing-count shortcut used on the obtuse shapes: knowing how many
//! tessellation lines a segment crosses no longer pins down where the
//! unfolding ends. Periods here therefore come from the folding engine
//! only, and nothing in this module assumes they are even.
//!
//! Directions live in the wedge `x/3 < y < x` (scaled slope between a
//! 30° and a 60° true inclination). Each coprime pair falls into one of
//! six congruence classes `(x mod 3, parity relation)`, and each class
//! carries two conjectured period expressions — an A-side and a
//! complement side, where "A-side" labels the first-listed expression
//! set. Classes with `x ≡ 1, 2 (mod 3)` list two expressions per side
//! with one shared between the sides, so a single observed period can be
//! decisive (an exclusive hit) or ambiguous (the shared value).

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::OnceLock;

use rayon::prelude::*;

use crate::error::Result;
use crate::fence::ParityRel;
use crate::orbit::{default_max_bounces, launch, DirectionPair, Offset, OrbitResult, OrbitStatus};
use crate::rat::{gcd_u64, rat};
use crate::sweep::OffsetStream;
use crate::tessellation::{ShapeId, Tessellation};

/// Congruence class of a wedge pair: `(x mod 3, parity relation)`.
pub type HexClass = (u8, ParityRel);

pub fn class_of(x: u64, y: u64) -> HexClass {
    ((x % 3) as u8, ParityRel::of(x, y))
}

/// Which side of the conjectured partition a period (or a pair) lands on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BranchSide {
    /// Matches an expression exclusive to the first-listed set.
    A,
    /// Matches an expression exclusive to the complement set.
    Complement,
    /// Matches only the expression the two sides share.
    Ambiguous,
    /// Matches nothing — a reportable finding against the conjecture.
    Neither,
}

impl fmt::Display for BranchSide {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            BranchSide::A => "A",
            BranchSide::Complement => "complement",
            BranchSide::Ambiguous => "ambiguous",
            BranchSide::Neither => "neither",
        };
        f.write_str(s)
    }
}

/// One side of a class's conjecture table: `(symbolic label, value)`
/// pairs evaluated at a concrete `(x, y)`.
pub type ExpressionList = Vec<(&'static str, u64)>;

/// The conjectured period expressions of one class, evaluated at `(x, y)`
/// as `(symbolic label, value)` pairs.
#[derive(Clone, Debug)]
pub struct ClassExpressions {
    pub a_side: ExpressionList,
    pub complement: ExpressionList,
}

impl ClassExpressions {
    pub fn a_values(&self) -> Vec<u64> {
        self.a_side.iter().map(|&(_, v)| v).collect()
    }

    pub fn complement_values(&self) -> Vec<u64> {
        self.complement.iter().map(|&(_, v)| v).collect()
    }

    /// Values listed on both sides.
    pub fn shared_values(&self) -> Vec<u64> {
        self.a_side
            .iter()
            .filter(|&&(_, v)| self.complement.iter().any(|&(_, w)| w == v))
            .map(|&(_, v)| v)
            .collect()
    }
}

fn third(n: u64) -> u64 {
    debug_assert!(n.is_multiple_of(3));
    n / 3
}

/// The twelve-branch conjecture table. Within each class the first tuple
/// element is the A-side; classes with `x ≡ 1, 2 (mod 3)` share their
/// A-side's first expression with the complement side's second.
pub fn conjectured_expressions(x: u64, y: u64) -> ClassExpressions {
    let (i, rel) = class_of(x, y);
    let (a_side, complement): (ExpressionList, ExpressionList) = match (i, rel) {
        (0, ParityRel::Equal) => (vec![("3y+x", 3 * y + x)], vec![("y+x/3", y + third(x))]),
        (0, ParityRel::Opposite) => (
            vec![("6y+2x", 6 * y + 2 * x)],
            vec![("2y+2x/3", 2 * y + third(2 * x))],
        ),
        (1, ParityRel::Equal) => (
            vec![
                ("2y+(2x-2)/3", 2 * y + third(2 * x - 2)),
                ("3y+x+2", 3 * y + x + 2),
            ],
            vec![
                ("y+(x+2)/3", y + third(x + 2)),
                ("2y+(2x-2)/3", 2 * y + third(2 * x - 2)),
            ],
        ),
        (1, ParityRel::Opposite) => (
            vec![
                ("4y+(4x+2)/3", 4 * y + third(4 * x + 2)),
                ("6y+2x-2", 6 * y + 2 * x - 2),
            ],
            vec![
                ("2y+(2x-2)/3", 2 * y + third(2 * x - 2)),
                ("4y+(4x+2)/3", 4 * y + third(4 * x + 2)),
            ],
        ),
        (2, ParityRel::Equal) => (
            vec![
                ("2y+(2x+2)/3", 2 * y + third(2 * x + 2)),
                ("3y+x-2", 3 * y + x - 2),
            ],
            vec![
                ("y+(x-2)/3", y + third(x - 2)),
                ("2y+(2x+2)/3", 2 * y + third(2 * x + 2)),
            ],
        ),
        (2, ParityRel::Opposite) => (
            vec![
                ("4y+(4x-2)/3", 4 * y + third(4 * x - 2)),
                ("6y+2x+2", 6 * y + 2 * x + 2),
            ],
            vec![
                ("2y+(2x+2)/3", 2 * y + third(2 * x + 2)),
                ("4y+(4x-2)/3", 4 * y + third(4 * x - 2)),
            ],
        ),
        _ => unreachable!("x mod 3 is 0, 1, or 2"),
    };
    ClassExpressions { a_side, complement }
}

/// Classify one observed period against its class's expressions:
/// `(matched symbolic label or "neither", side)`.
pub fn classify_period(x: u64, y: u64, period: u64) -> (String, BranchSide) {
    let exprs = conjectured_expressions(x, y);
    let a_hit = exprs.a_side.iter().find(|&&(_, v)| v == period);
    let c_hit = exprs.complement.iter().find(|&&(_, v)| v == period);
    match (a_hit, c_hit) {
        (Some(&(label, _)), Some(_)) => (label.to_string(), BranchSide::Ambiguous),
        (Some(&(label, _)), None) => (label.to_string(), BranchSide::A),
        (None, Some(&(label, _))) => (label.to_string(), BranchSide::Complement),
        (None, None) => ("neither".to_string(), BranchSide::Neither),
    }
}

/// One observed (pair, period) with its classification.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BranchRecord {
    pub x: u64,
    pub y: u64,
    pub period: u64,
    pub congruence_class: HexClass,
    pub matched_formula: String,
    pub side: BranchSide,
}

impl BranchRecord {
    pub fn new(x: u64, y: u64, period: u64) -> BranchRecord {
        let (matched_formula, side) = classify_period(x, y, period);
        BranchRecord {
            x,
            y,
            period,
            congruence_class: class_of(x, y),
            matched_formula,
            side,
        }
    }
}

fn hex_tess() -> &'static Tessellation {
    static HEX: OnceLock<Tessellation> = OnceLock::new();
    HEX.get_or_init(|| Tessellation::build(ShapeId::Hexagon))
}

/// Compute a hexagon orbit at one offset by the folding engine — the
/// only route available here, since the hexagon's rotational symmetries
/// defeat the crossing-count termination argument.
pub fn hexagon_period(a: &Offset, x: u64, y: u64) -> Result<OrbitResult> {
    let d = DirectionPair::new(x, y)?;
    let tess = hex_tess();
    launch(tess, a, &d, default_max_bounces(&d))
}

/// All coprime wedge pairs `x/3 < y < x` with `x + y ≤ max_sum`,
/// ordered by `(x, y)`.
pub fn hexagon_pairs(max_sum: u64) -> Vec<(u64, u64)> {
    let mut pairs = Vec::new();
    for x in 2..max_sum {
        for y in (x / 3 + 1)..x {
            if 3 * y > x && x + y <= max_sum && gcd_u64(x, y) == 1 {
                pairs.push((x, y));
            }
        }
    }
    pairs
}

/// Probe one wedge pair at `offsets_per_pair` non-singular offsets and
/// return its distinct observed periods, ascending.
///
/// The period is piecewise constant in the launch offset, so the
/// deterministic samples are spread evenly across the base (nudged off
/// the low-denominator rationals where singular walls sit) rather than
/// clustered near one end; singular or otherwise failed draws are
/// replaced from a seeded random stream. Truncated probes (budget
/// exhausted) are retried once with a tenfold budget before being
/// counted as observations.
pub fn probe_pair(x: u64, y: u64, offsets_per_pair: u32, seed: u64) -> Vec<u64> {
    let periods: BTreeSet<u64> = probe_pair_records(x, y, offsets_per_pair, seed)
        .into_iter()
        .filter_map(|r| r.period)
        .collect();
    periods.into_iter().collect()
}

/// One successful hexagon probe: the offset it ran at and what the
/// folding engine found there.
#[derive(Clone, Debug)]
pub struct HexProbe {
    pub a: Offset,
    pub status: OrbitStatus,
    pub period: Option<u64>,
}

/// The record-level form of [`probe_pair`]: one entry per retained
/// probe, in sampling order (spread grid first, then random draws).
pub fn probe_pair_records(x: u64, y: u64, offsets_per_pair: u32, seed: u64) -> Vec<HexProbe> {
    let d = DirectionPair::new(x, y).expect("wedge pairs are reduced");
    let tess = hex_tess();
    let n = offsets_per_pair.max(1);
    let nudge = rat(1, 12 * x as i64 + 13);
    let mut grid = (0..n as i64).map(|j| rat(j, n as i64) + &nudge);
    let mut stream = OffsetStream::new(x, seed);
    let mut probes = Vec::new();
    let mut attempts = 0u32;
    let budget = 40 * n;
    while probes.len() < n as usize && attempts < budget {
        attempts += 1;
        let value = grid.next().unwrap_or_else(|| stream.random_value());
        let a = match Offset::new(value) {
            Ok(a) => a,
            Err(_) => continue,
        };
        let result = match launch(tess, &a, &d, default_max_bounces(&d)) {
            Ok(r) => r,
            Err(_) => continue,
        };
        let result = if result.status == OrbitStatus::Truncated {
            match launch(tess, &a, &d, 10 * default_max_bounces(&d)) {
                Ok(r) => r,
                Err(_) => continue,
            }
        } else {
            result
        };
        match result.status {
            OrbitStatus::Singular => continue,
            OrbitStatus::Periodic | OrbitStatus::Truncated => probes.push(HexProbe {
                a,
                status: result.status,
                period: result.period,
            }),
        }
    }
    probes
}

fn pair_seed(seed: u64, x: u64, y: u64) -> u64 {
    seed ^ (x.wrapping_mul(0xA076_1D64_78BD_642F))
        .wrapping_add(y.wrapping_mul(0xE703_7ED1_A0B4_28DB))
}

/// Per-offset probes for every wedge pair up to the component-sum
/// bound, in pair order. This is the sampling layer shared by
/// [`build_dataset`] and atlas export, so a dataset rebuilt from an
/// atlas file written with the same parameters matches exactly.
pub fn dataset_probes(
    max_sum: u64,
    offsets_per_pair: u32,
    seed: u64,
    parallel: bool,
) -> Vec<(u64, u64, Vec<HexProbe>)> {
    let pairs = hexagon_pairs(max_sum);
    let work = |&(x, y): &(u64, u64)| -> (u64, u64, Vec<HexProbe>) {
        (
            x,
            y,
            probe_pair_records(x, y, offsets_per_pair, pair_seed(seed, x, y)),
        )
    };
    if parallel {
        pairs.par_iter().map(work).collect()
    } else {
        pairs.iter().map(work).collect()
    }
}

/// Build the branch dataset: every wedge pair up to the component-sum
/// bound, probed at several offsets, with one record per distinct
/// observed period, sorted by `(x, y, period)`.
pub fn build_dataset(
    max_sum: u64,
    offsets_per_pair: u32,
    seed: u64,
    parallel: bool,
) -> Vec<BranchRecord> {
    let pairs = hexagon_pairs(max_sum);
    let work = |&(x, y): &(u64, u64)| -> Vec<BranchRecord> {
        probe_pair(x, y, offsets_per_pair, pair_seed(seed, x, y))
            .into_iter()
            .map(|p| BranchRecord::new(x, y, p))
            .collect()
    };
    let mut records: Vec<BranchRecord> = if parallel {
        pairs.par_iter().flat_map_iter(work).collect()
    } else {
        pairs.iter().flat_map(work).collect()
    };
    records.sort_by_key(|r| (r.x, r.y, r.period));
    records
}

/// Conjecture audit of a dataset: records matching no expression, and
/// pairs realizing more than two distinct periods.
#[derive(Clone, Debug, Default)]
pub struct DatasetFindings {
    pub unmatched: Vec<BranchRecord>,
    pub multi_period_pairs: Vec<(u64, u64, Vec<u64>)>,
}

impl DatasetFindings {
    pub fn clean(&self) -> bool {
        self.unmatched.is_empty() && self.multi_period_pairs.is_empty()
    }
}

pub fn audit_dataset(records: &[BranchRecord]) -> DatasetFindings {
    let mut findings = DatasetFindings::default();
    let mut per_pair: BTreeMap<(u64, u64), Vec<u64>> = BTreeMap::new();
    for r in records {
        if r.side == BranchSide::Neither {
            findings.unmatched.push(r.clone());
        }
        per_pair.entry((r.x, r.y)).or_default().push(r.period);
    }
    for ((x, y), periods) in per_pair {
        if periods.len() > 2 {
            findings.multi_period_pairs.push((x, y, periods));
        }
    }
    findings
}

/// A pair-level branch label: the side whose exclusive expression the
/// pair's observed periods hit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabeledPair {
    pub x: u64,
    pub y: u64,
    pub class: HexClass,
    pub side: BranchSide,
}

/// Collapse per-period records into per-pair labels. A pair is on the
/// A-side (complement side) when some period hits an expression exclusive
/// to that side; hitting only the shared expression leaves it ambiguous,
/// and hitting exclusives of both sides at once is contradictory and
/// reported as `Neither`.
pub fn pair_labels(records: &[BranchRecord]) -> Vec<LabeledPair> {
    let mut per_pair: BTreeMap<(u64, u64), Vec<&BranchRecord>> = BTreeMap::new();
    for r in records {
        per_pair.entry((r.x, r.y)).or_default().push(r);
    }
    per_pair
        .into_iter()
        .map(|((x, y), rs)| {
            let a = rs.iter().any(|r| r.side == BranchSide::A);
            let c = rs.iter().any(|r| r.side == BranchSide::Complement);
            let unmatched = rs.iter().any(|r| r.side == BranchSide::Neither);
            let side = match (a, c, unmatched) {
                (_, _, true) | (true, true, _) => BranchSide::Neither,
                (true, false, _) => BranchSide::A,
                (false, true, _) => BranchSide::Complement,
                (false, false, _) => BranchSide::Ambiguous,
            };
            LabeledPair {
                x,
                y,
                class: class_of(x, y),
                side,
            }
        })
        .collect()
}

/// A candidate linear congruence `(c1·x + c2·y) mod c3`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct ModulusCondition {
    pub c1: i32,
    pub c2: i32,
    pub c3: u32,
}

impl ModulusCondition {
    pub fn residue(&self, x: u64, y: u64) -> u64 {
        let v = self.c1 as i64 * x as i64 + self.c2 as i64 * y as i64;
        v.rem_euclid(self.c3 as i64) as u64
    }
}

impl fmt::Display for ModulusCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}·x + {}·y) mod {}", self.c1, self.c2, self.c3)
    }
}

/// Exhaustive search over `c1, c2 ∈ [−36, 36]`, `c3 ∈ [2, 36]` for
/// conditions whose residue determines the branch side within every
/// congruence class that carries both labels. Classes with a single
/// label are vacuous and skipped; if no class carries both labels the
/// search reports nothing rather than everything. Ambiguous and
/// unmatched pairs contribute no separation constraints.
pub fn modulus_search_on(labels: &[LabeledPair]) -> Vec<ModulusCondition> {
    let mut classes: BTreeMap<HexClass, Vec<&LabeledPair>> = BTreeMap::new();
    for l in labels {
        if matches!(l.side, BranchSide::A | BranchSide::Complement) {
            classes.entry(l.class).or_default().push(l);
        }
    }
    classes.retain(|_, ls| {
        ls.iter().any(|l| l.side == BranchSide::A)
            && ls.iter().any(|l| l.side == BranchSide::Complement)
    });
    if classes.is_empty() {
        return Vec::new();
    }

    let survives = |cond: &ModulusCondition| -> bool {
        classes.values().all(|ls| {
            // No residue may be claimed by both sides.
            let mut a_residues = BTreeSet::new();
            let mut c_residues = BTreeSet::new();
            for l in ls {
                let r = cond.residue(l.x, l.y);
                match l.side {
                    BranchSide::A => {
                        a_residues.insert(r);
                    }
                    BranchSide::Complement => {
                        c_residues.insert(r);
                    }
                    _ => unreachable!("filtered above"),
                }
            }
            a_residues.is_disjoint(&c_residues)
        })
    };

    let mut found: Vec<ModulusCondition> = (2u32..=36)
        .into_par_iter()
        .flat_map_iter(|c3| {
            let mut local = Vec::new();
            for c1 in -36i32..=36 {
                for c2 in -36i32..=36 {
                    let cond = ModulusCondition { c1, c2, c3 };
                    if survives(&cond) {
                        local.push(cond);
                    }
                }
            }
            local
        })
        .collect();
    found.sort();
    found
}

/// Spec'd entry point: search directly from a record dataset.
pub fn modulus_grid_search(records: &[BranchRecord]) -> Vec<ModulusCondition> {
    modulus_search_on(&pair_labels(records))
}

/// One source pair's journey through the closure map.
#[derive(Clone, Debug)]
pub struct ClosurePairOutcome {
    pub source: (u64, u64),
    pub source_class: HexClass,
    /// Raw image `(27y−7x, 11y−3x)`.
    pub image: (u64, u64),
    /// Common factor removed to make the image coprime (1 when already).
    pub reduction_factor: u64,
    pub reduced: (u64, u64),
    pub in_range: bool,
    pub image_class: Option<HexClass>,
    /// Distinct periods observed for the (reduced) image pair.
    pub image_periods: Vec<u64>,
    pub image_side: Option<BranchSide>,
}

/// Closure-map report: per-pair outcomes plus the class transition table.
#[derive(Clone, Debug)]
pub struct ClosureReport {
    pub outcomes: Vec<ClosurePairOutcome>,
    pub transitions: BTreeMap<(HexClass, HexClass), u64>,
    pub images_on_a_side: u64,
    pub images_ambiguous: u64,
    pub images_off_a_side: u64,
    pub images_out_of_range: u64,
}

/// For every dataset pair with `3 ∣ x`, push it through
/// `(x, y) ↦ (27y−7x, 11y−3x)` and classify the image pair's branch —
/// reusing dataset records when the image is already covered, probing
/// fresh orbits otherwise. The conjecture predicts every in-range image
/// lands on the A-side of its class.
pub fn closure_map_check(records: &[BranchRecord], seed: u64) -> ClosureReport {
    let labels = pair_labels(records);
    let mut known: BTreeMap<(u64, u64), Vec<u64>> = BTreeMap::new();
    for r in records {
        known.entry((r.x, r.y)).or_default().push(r.period);
    }

    let sources: Vec<&LabeledPair> = labels.iter().filter(|l| l.x.is_multiple_of(3)).collect();
    let outcomes: Vec<ClosurePairOutcome> = sources
        .par_iter()
        .map(|l| {
            let (x, y) = (l.x, l.y);
            let ix = 27 * y - 7 * x;
            let iy = 11 * y - 3 * x;
            let g = gcd_u64(ix, iy);
            let reduced = (ix / g, iy / g);
            let in_range = 3 * reduced.1 > reduced.0 && reduced.1 < reduced.0;
            let mut outcome = ClosurePairOutcome {
                source: (x, y),
                source_class: l.class,
                image: (ix, iy),
                reduction_factor: g,
                reduced,
                in_range,
                image_class: None,
                image_periods: Vec::new(),
                image_side: None,
            };
            if in_range {
                outcome.image_class = Some(class_of(reduced.0, reduced.1));
                let periods = match known.get(&reduced) {
                    Some(ps) => ps.clone(),
                    None => probe_pair(
                        reduced.0,
                        reduced.1,
                        2,
                        pair_seed(seed ^ 0xC105, reduced.0, reduced.1),
                    ),
                };
                let image_records: Vec<BranchRecord> = periods
                    .iter()
                    .map(|&p| BranchRecord::new(reduced.0, reduced.1, p))
                    .collect();
                outcome.image_periods = periods;
                outcome.image_side = pair_labels(&image_records).first().map(|lp| lp.side);
            }
            outcome
        })
        .collect();

    let mut transitions: BTreeMap<(HexClass, HexClass), u64> = BTreeMap::new();
    let (mut on_a, mut ambiguous, mut off_a, mut out_of_range) = (0, 0, 0, 0);
    for o in &outcomes {
        match (o.in_range, o.image_class, o.image_side) {
            (false, _, _) => out_of_range += 1,
            (true, Some(ic), Some(side)) => {
                *transitions.entry((o.source_class, ic)).or_insert(0) += 1;
                match side {
                    BranchSide::A => on_a += 1,
                    BranchSide::Ambiguous => ambiguous += 1,
                    _ => off_a += 1,
                }
            }
            (true, _, _) => off_a += 1,
        }
    }
    ClosureReport {
        outcomes,
        transitions,
        images_on_a_side: on_a,
        images_ambiguous: ambiguous,
        images_off_a_side: off_a,
        images_out_of_range: out_of_range,
    }
}
