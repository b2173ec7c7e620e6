//! Fence calculus: contact points, barrier counts, and period formulas.
//!
//! Fold the plane onto a single tile column and every vertical line
//! `x = i` lands on one circle `ℝ/2ℤ` — the *fence*. The unfolded ray
//! touches the fence once per integer step; where the touch lands decides
//! whether that step cuts a vertical edge (the *barrier* arc) or slips
//! through a *gate*. Edge counts then decompose into a slope-independent
//! strip term plus the number of barrier touches, and the well-known
//! congruence branches of the period formulas fall out of counting how an
//! arithmetic progression meets the barrier arc.
//!
//! Everything here is closed-form arithmetic for the triangle, rhombus,
//! and kite; each formula is independently checkable against the crossing
//! tracer in [`crate::orbit`], and the unit tests do exactly that.

use crate::orbit::{DirectionPair, Offset};
use crate::rat::{floor_int, rat, rem_mod, rint, Rat};
use crate::tessellation::{ShapeId, Tessellation};

/// A position on the fence `ℝ/2ℤ`, stored as its representative in
/// `[0, 2)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct FenceCoord {
    value: Rat,
}

impl FenceCoord {
    /// Wrap any rational onto the fence.
    pub fn new(r: Rat) -> FenceCoord {
        FenceCoord {
            value: rem_mod(&r, &rint(2)),
        }
    }

    /// The fence image of a plane point `(α, β)`: `(α + β) mod 2`.
    pub fn of_point(alpha: &Rat, beta: &Rat) -> FenceCoord {
        FenceCoord::new(alpha + beta)
    }

    pub fn value(&self) -> &Rat {
        &self.value
    }
}

/// The parity relation between the components of a direction pair — the
/// second coordinate of a congruence branch.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ParityRel {
    /// `x ≡ y (mod 2)` (both odd, for coprime pairs).
    Equal,
    /// `x ≢ y (mod 2)`.
    Opposite,
}

impl ParityRel {
    pub fn of(x: u64, y: u64) -> ParityRel {
        if x % 2 == y % 2 {
            ParityRel::Equal
        } else {
            ParityRel::Opposite
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            ParityRel::Equal => "equal",
            ParityRel::Opposite => "opposite",
        }
    }
}

impl std::fmt::Display for ParityRel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

/// The congruence branch of a pair: `(x mod 3, parity relation)`.
pub fn branch_of(x: u64, y: u64) -> (u64, ParityRel) {
    (x % 3, ParityRel::of(x, y))
}

/// Residue constraint a tabulated edge count must satisfy.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ResidueClass {
    /// `N ≡ 0 (mod 4)`.
    Mod4Zero,
    /// `N ≡ 2 (mod 4)`.
    Mod4Two,
    /// `N` odd.
    Odd,
}

impl ResidueClass {
    pub fn matches(self, n: u64) -> bool {
        match self {
            ResidueClass::Mod4Zero => n.is_multiple_of(4),
            ResidueClass::Mod4Two => n % 4 == 2,
            ResidueClass::Odd => n % 2 == 1,
        }
    }
}

// ---------------------------------------------------------------------------
// Contact profiles (the enumeration oracle).
// ---------------------------------------------------------------------------

/// The multiset of fence touches of one unfolded segment, plus the edge
/// count it predicts.
#[derive(Clone, Debug)]
pub struct ContactProfile {
    /// Distinct fence coordinates in increasing order, with multiplicities.
    pub points: Vec<(Rat, u64)>,
    /// The common cyclic gap between consecutive points when they are
    /// equally spaced (always the case at aligned extents); otherwise the
    /// minimum gap. A single point has spacing 2 (the whole fence).
    pub spacing: Rat,
    /// Largest multiplicity (the common one on aligned profiles).
    pub m: u64,
    /// Distinct points on the shape's barrier.
    pub b: u64,
    /// Touches on the barrier counted with multiplicity (= `m·b` on
    /// aligned profiles).
    pub barrier_events: u64,
    /// Predicted edge count: `edges_per_strip · rise + barrier_events`.
    pub n: u64,
}

impl ContactProfile {
    /// Sum of all multiplicities (= the traced extent).
    pub fn total_contacts(&self) -> u64 {
        self.points.iter().map(|(_, k)| k).sum()
    }

    /// Are the distinct points equally spaced around the fence?
    pub fn equally_spaced(&self) -> bool {
        self.cyclic_gaps().iter().all(|g| *g == self.spacing)
    }

    /// Do all points carry the same multiplicity?
    pub fn uniform_multiplicity(&self) -> bool {
        self.points.iter().all(|(_, k)| *k == self.m)
    }

    fn cyclic_gaps(&self) -> Vec<Rat> {
        let k = self.points.len();
        if k <= 1 {
            return vec![rint(2)];
        }
        let mut gaps: Vec<Rat> = self.points.windows(2).map(|w| &w[1].0 - &w[0].0).collect();
        gaps.push(&self.points[0].0 + rint(2) - &self.points[k - 1].0);
        gaps
    }
}

/// The fence coordinate of the `i`-th touch of the unfolded ray launched
/// from `(a, 0)` with slope `y/x`: the ray meets the vertical `x = i` at
/// height `(y/x)(i − a)`, so the touch sits at `(i + (y/x)(i − a)) mod 2`.
pub fn contact_value(a: &Offset, d: &DirectionPair, i: i64) -> Rat {
    assert!(d.x() >= 1, "contact values need a non-vertical pair");
    let slope = rat(d.y() as i64, d.x() as i64);
    rem_mod(&(rint(i) + slope * (rint(i) - a.value())), &rint(2))
}

/// Enumerate the fence touches of the unfolded segment of horizontal
/// extent `extent` and derive the edge count they predict.
///
/// Requires a non-vertical pair, a shape with a fence (not the hexagon),
/// and an extent with integral rise (`x | y·extent`) — every multiple of
/// the alignment extent qualifies.
pub fn contact_points(
    tess: &Tessellation,
    a: &Offset,
    d: &DirectionPair,
    extent: u64,
) -> ContactProfile {
    let (x, y) = (d.x(), d.y());
    assert!(x >= 1, "contact profiles need a non-vertical pair");
    assert!(extent >= 1, "extent must be positive");
    assert!(
        (y * extent).is_multiple_of(x),
        "extent {extent} does not give pair ({x}, {y}) an integral rise"
    );
    let barrier = tess
        .barrier
        .as_ref()
        .expect("fence calculus is not defined for this shape");
    let per_strip = tess.edges_per_strip.expect("per-strip edge count") as u64;

    // Touches happen at integer first coordinates i with 0 < t ≤ extent,
    // i.e. i ∈ (a, extent + a]: exactly `extent` integers.
    let first: num::BigInt = floor_int(a.value()) + 1;
    let first: i64 = (&first).try_into().expect("offset in (-1, 1)");
    let mut counts: std::collections::BTreeMap<Rat, u64> = std::collections::BTreeMap::new();
    for step in 0..extent {
        let i = first + step as i64;
        let c = contact_value(a, d, i);
        *counts.entry(c).or_insert(0) += 1;
    }

    let points: Vec<(Rat, u64)> = counts.into_iter().collect();
    let m = points.iter().map(|(_, k)| *k).max().unwrap_or(0);
    let b = points.iter().filter(|(c, _)| barrier.contains(c)).count() as u64;
    let barrier_events: u64 = points
        .iter()
        .filter(|(c, _)| barrier.contains(c))
        .map(|(_, k)| k)
        .sum();
    let rise = y * extent / x;
    let n = per_strip * rise + barrier_events;

    let spacing = if points.len() <= 1 {
        rint(2)
    } else {
        let mut gaps: Vec<Rat> = points.windows(2).map(|w| &w[1].0 - &w[0].0).collect();
        gaps.push(&points[0].0 + rint(2) - &points[points.len() - 1].0);
        gaps.into_iter().min().expect("nonempty")
    };

    ContactProfile {
        points,
        spacing,
        m,
        b,
        barrier_events,
        n,
    }
}

// ---------------------------------------------------------------------------
// Closed forms.
// ---------------------------------------------------------------------------

/// Multiplicity and spacing of the full contact profile (extent `2x`):
/// `(2, 2/x)` when `x ≡ y (mod 2)`, else `(1, 1/x)`.
pub fn multiplicity_and_spacing(x: u64, y: u64) -> (u64, Rat) {
    assert!(x >= 1, "spacing needs a non-vertical pair");
    assert_eq!(crate::rat::gcd_u64(x, y), 1, "pair must be reduced");
    match ParityRel::of(x, y) {
        ParityRel::Equal => (2, rat(2, x as i64)),
        ParityRel::Opposite => (1, rat(1, x as i64)),
    }
}

/// The possible counts of distinct contact points on the barrier
/// `(1/3, 5/3]`, over all offsets: the arc has length `4/3`, so a
/// progression of spacing `s` meets it `4/(3s)` times when that is whole
/// (`3 | x`), and `⌊4/(3s)⌋` or one more otherwise.
pub fn barrier_count_range(x: u64, y: u64) -> Vec<u64> {
    let (_, s) = multiplicity_and_spacing(x, y);
    let q = rat(4, 3) / s;
    if x.is_multiple_of(3) {
        let exact = floor_int(&q);
        assert_eq!(rint(0), rem_mod(&q, &rint(1)), "4/(3s) must be whole");
        vec![(&exact).try_into().expect("small count")]
    } else {
        let lo: i64 = (&floor_int(&q)).try_into().expect("small count");
        vec![lo as u64, lo as u64 + 1]
    }
}

/// Distinct contact points on the kite's complemented barrier
/// `[0, 1/3] ∪ (5/3, 2)`: the total `2/s` minus the core-barrier count.
pub fn kite_barrier_count_range(x: u64, y: u64) -> Vec<u64> {
    let (_, s) = multiplicity_and_spacing(x, y);
    let total: i64 = (&floor_int(&(rint(2) / s))).try_into().expect("small");
    let mut counts: Vec<u64> = barrier_count_range(x, y)
        .into_iter()
        .map(|b| total as u64 - b)
        .collect();
    counts.sort_unstable();
    counts
}

/// The barrier count realized at a specific offset:
/// `⌊(5/3 + a·y/x)/s⌋ − ⌊(1/3 + a·y/x)/s⌋`. Counts the members of the
/// offset's contact progression inside the half-open barrier arc.
pub fn barrier_count_at(a: &Offset, x: u64, y: u64) -> u64 {
    let (_, s) = multiplicity_and_spacing(x, y);
    let shift = a.value() * rat(y as i64, x as i64);
    let hi = floor_int(&((rat(5, 3) + &shift) / &s));
    let lo = floor_int(&((rat(1, 3) + &shift) / &s));
    (&(hi - lo)).try_into().expect("nonnegative count")
}

/// Offset-resolved count on the kite's complemented barrier.
pub fn kite_barrier_count_at(a: &Offset, x: u64, y: u64) -> u64 {
    let (_, s) = multiplicity_and_spacing(x, y);
    let total: i64 = (&floor_int(&(rint(2) / s))).try_into().expect("small");
    total as u64 - barrier_count_at(a, x, y)
}

// ---------------------------------------------------------------------------
// Edge-count tables.
// ---------------------------------------------------------------------------

/// Exact `n/3` for table entries that are provably divisible.
fn third(n: i64) -> u64 {
    assert!(n >= 0 && n % 3 == 0, "table arithmetic broke: {n}/3");
    (n / 3) as u64
}

/// The tabulated deltas `m·b` added to the strip term for the triangle and
/// the rhombus (they share a barrier), keyed by congruence branch.
fn core_deltas(x: u64, rel: ParityRel) -> Vec<(u64, ResidueClass)> {
    use ParityRel::*;
    use ResidueClass::*;
    let x = x as i64;
    match (x % 3, rel) {
        (0, Equal) => vec![(third(4 * x), Mod4Zero)],
        (0, Opposite) => vec![(third(4 * x), Mod4Zero)],
        (1, Equal) => vec![(third(4 * x - 4), Mod4Zero), (third(4 * x + 2), Mod4Two)],
        (1, Opposite) => vec![(third(4 * x - 1), Odd), (third(4 * x + 2), Mod4Two)],
        (2, Equal) => vec![(third(4 * x + 4), Mod4Zero), (third(4 * x - 2), Mod4Two)],
        (2, Opposite) => vec![(third(4 * x + 1), Odd), (third(4 * x - 2), Mod4Two)],
        _ => unreachable!(),
    }
}

/// The kite's deltas over its complemented barrier.
fn kite_deltas(x: u64, rel: ParityRel) -> Vec<(u64, ResidueClass)> {
    use ParityRel::*;
    use ResidueClass::*;
    let x = x as i64;
    match (x % 3, rel) {
        (0, Equal) => vec![(third(2 * x), Mod4Zero)],
        (0, Opposite) => vec![(third(2 * x), Mod4Two)],
        (1, Equal) => vec![(third(2 * x + 4), Mod4Zero), (third(2 * x - 2), Mod4Two)],
        (1, Opposite) => vec![(third(2 * x - 2), Mod4Zero), (third(2 * x + 1), Odd)],
        (2, Equal) => vec![(third(2 * x - 4), Mod4Zero), (third(2 * x + 2), Mod4Two)],
        (2, Opposite) => vec![(third(2 * x + 2), Mod4Zero), (third(2 * x - 1), Odd)],
        _ => unreachable!(),
    }
}

fn strip_base(shape: ShapeId, y: u64) -> u64 {
    match shape {
        ShapeId::Triangle120 => 8 * y,
        ShapeId::Rhombus60 => 4 * y,
        ShapeId::Kite => 6 * y,
        ShapeId::Hexagon => panic!("the hexagon has no edge-count table"),
    }
}

/// The one or two possible full-profile edge counts `N` for the pair on
/// the shape, each with its residue `N mod 4`, sorted by `N`.
///
/// The values come from a stored table *and* are recomputed from the
/// barrier-count machinery (`strip · y + m·b` over the offset-independent
/// barrier range); any disagreement panics — the two derivations guard
/// each other. The vertical pair `(0, 1)` skips the recomputation (its
/// spacing is degenerate) and is cross-checked dynamically instead.
pub fn edge_count_options(shape: ShapeId, x: u64, y: u64) -> Vec<(u64, u64)> {
    let rel = ParityRel::of(x, y);
    let deltas = match shape {
        ShapeId::Triangle120 | ShapeId::Rhombus60 => core_deltas(x, rel),
        ShapeId::Kite => kite_deltas(x, rel),
        ShapeId::Hexagon => panic!("the hexagon has no edge-count table"),
    };
    let base = strip_base(shape, y);
    let mut table: Vec<(u64, ResidueClass)> = deltas.iter().map(|(d, r)| (base + d, *r)).collect();
    table.sort_unstable_by_key(|(n, _)| *n);

    for (n, class) in &table {
        assert!(
            class.matches(*n),
            "{shape:?} ({x}, {y}): tabulated N = {n} violates its residue class {class:?}"
        );
    }

    if x >= 1 {
        let (m, _) = multiplicity_and_spacing(x, y);
        let b_range = match shape {
            ShapeId::Kite => kite_barrier_count_range(x, y),
            _ => barrier_count_range(x, y),
        };
        let mut computed: Vec<u64> = b_range.iter().map(|b| base + m * b).collect();
        computed.sort_unstable();
        let tabled: Vec<u64> = table.iter().map(|(n, _)| *n).collect();
        assert_eq!(
            computed, tabled,
            "{shape:?} ({x}, {y}): table and barrier-count derivation disagree"
        );
    }

    table.into_iter().map(|(n, _)| (n, n % 4)).collect()
}

// ---------------------------------------------------------------------------
// Period formulas.
// ---------------------------------------------------------------------------

/// The closed-form period candidates for one congruence branch.
#[derive(Clone, Debug)]
pub struct PeriodPrediction {
    /// `(x mod 3, parity relation)`.
    pub branch: (u64, ParityRel),
    /// One or two candidate periods, increasing.
    pub candidates: Vec<u64>,
    /// Single-candidate branch?
    pub mono: bool,
}

impl PeriodPrediction {
    pub fn contains(&self, p: u64) -> bool {
        self.candidates.contains(&p)
    }
}

/// Closed-form period prediction for a standard-range pair (including the
/// boundary pairs `(1, 1)` and `(0, 1)`) on a shape with a fence.
///
/// Each tabulated edge count `N` yields a period by the termination case
/// analysis: with `x ≡ y (mod 2)` the segment closes at extent `x` when
/// `N ≡ 0 (mod 4)` (period `N/2`) and at `2x` when `N ≡ 2` (period `N`);
/// with opposite parities it closes at `2x` for even `N` (period `N`) and
/// at `4x` for odd `N` (period `2N`).
pub fn period_formula(shape: ShapeId, x: u64, y: u64) -> PeriodPrediction {
    let rel = ParityRel::of(x, y);
    let mut candidates: Vec<u64> = edge_count_options(shape, x, y)
        .into_iter()
        .map(|(n, _)| match (rel, n % 2, n % 4) {
            (ParityRel::Equal, _, 0) => n / 2,
            (ParityRel::Equal, _, 2) => n,
            (ParityRel::Opposite, 0, _) => n,
            (ParityRel::Opposite, 1, _) => 2 * n,
            _ => unreachable!("n = {n} has no termination case"),
        })
        .collect();
    candidates.sort_unstable();
    candidates.dedup();
    let mono = candidates.len() == 1;
    PeriodPrediction {
        branch: (x % 3, rel),
        candidates,
        mono,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::orbit::{detect_period_unfolding, unfold_trace, OrbitStatus};
    use crate::rat::gcd_u64;

    fn pair(x: u64, y: u64) -> DirectionPair {
        DirectionPair::new(x, y).unwrap()
    }

    fn off(n: i64, d: i64) -> Offset {
        Offset::from_ratio(n, d).unwrap()
    }

    #[test]
    fn fence_wraps_mod_two() {
        assert_eq!(FenceCoord::new(rat(7, 2)).value(), &rat(3, 2));
        assert_eq!(FenceCoord::new(rat(-1, 2)).value(), &rat(3, 2));
        assert_eq!(
            FenceCoord::of_point(&rint(3), &rat(1, 3)).value(),
            &rat(4, 3)
        );
    }

    #[test]
    fn branches() {
        assert_eq!(branch_of(3, 5), (0, ParityRel::Equal));
        assert_eq!(branch_of(2, 3), (2, ParityRel::Opposite));
        assert_eq!(branch_of(0, 1), (0, ParityRel::Opposite));
        assert_eq!(branch_of(1, 1), (1, ParityRel::Equal));
    }

    #[test]
    fn multiplicity_and_spacing_frozen() {
        assert_eq!(multiplicity_and_spacing(3, 5), (2, rat(2, 3)));
        assert_eq!(multiplicity_and_spacing(2, 3), (1, rat(1, 2)));
        assert_eq!(multiplicity_and_spacing(1, 1), (2, rint(2)));
    }

    #[test]
    fn profile_unit_pair_centre_offset() {
        let t = Tessellation::build(ShapeId::Triangle120);
        let p = contact_points(&t, &off(0, 1), &pair(1, 1), 2);
        assert_eq!(p.points, vec![(rint(0), 2)]);
        assert_eq!(p.b, 0, "the touch at 0 sits on a gate");
        assert_eq!(p.n, 8);
        assert_eq!(p.spacing, rint(2));
        assert!(p.equally_spaced() && p.uniform_multiplicity());
    }

    #[test]
    fn profile_unit_pair_half_offset() {
        let t = Tessellation::build(ShapeId::Triangle120);
        let p = contact_points(&t, &off(1, 2), &pair(1, 1), 2);
        assert_eq!(p.points, vec![(rat(3, 2), 2)]);
        assert_eq!(p.b, 1, "the touch at 3/2 sits on the barrier");
        assert_eq!(p.n, 10);
    }

    #[test]
    fn profile_three_five() {
        let t = Tessellation::build(ShapeId::Triangle120);
        for a in [off(0, 1), off(1, 4), off(-2, 7)] {
            let p = contact_points(&t, &a, &pair(3, 5), 6);
            assert_eq!(p.points.len(), 3, "a = {a}");
            assert_eq!(p.spacing, rat(2, 3));
            assert_eq!(p.m, 2);
            assert!(p.equally_spaced() && p.uniform_multiplicity());
            assert_eq!(p.total_contacts(), 6);
        }
        // At a = 0 the three points hold two barrier touches each: N = 44.
        let p = contact_points(&t, &off(0, 1), &pair(3, 5), 6);
        assert_eq!((p.b, p.n), (2, 44));
    }

    #[test]
    fn profile_matches_lemma_spacing_at_full_extent() {
        let t = Tessellation::build(ShapeId::Triangle120);
        for (x, y) in [(1u64, 2u64), (2, 3), (3, 5), (1, 3), (3, 4), (5, 6)] {
            let (m, s) = multiplicity_and_spacing(x, y);
            let p = contact_points(&t, &off(1, 7), &pair(x, y), 2 * x);
            assert!(p.equally_spaced(), "({x}, {y})");
            assert!(p.uniform_multiplicity(), "({x}, {y})");
            assert_eq!(p.spacing, s, "({x}, {y})");
            assert_eq!(p.m, m, "({x}, {y})");
            assert_eq!(p.barrier_events, m * p.b, "({x}, {y})");
        }
    }

    #[test]
    fn barrier_count_ranges_frozen() {
        assert_eq!(barrier_count_range(3, 5), vec![2]);
        assert_eq!(barrier_count_range(1, 1), vec![0, 1]);
        assert_eq!(barrier_count_range(6, 1), vec![8]);
        assert_eq!(kite_barrier_count_range(6, 1), vec![4]);
        assert_eq!(kite_barrier_count_range(1, 1), vec![0, 1]);
        assert_eq!(kite_barrier_count_range(3, 5), vec![1]);
    }

    #[test]
    fn barrier_count_at_frozen() {
        assert_eq!(barrier_count_at(&off(0, 1), 1, 1), 0);
        assert_eq!(barrier_count_at(&off(1, 2), 1, 1), 1);
        assert_eq!(barrier_count_at(&off(0, 1), 3, 5), 2);
    }

    #[test]
    fn barrier_count_at_matches_enumeration() {
        let tri = Tessellation::build(ShapeId::Triangle120);
        let kite = Tessellation::build(ShapeId::Kite);
        for (x, y) in [(1u64, 2u64), (2, 3), (3, 5), (1, 3), (4, 5), (5, 2)] {
            for k in [-5i64, -2, 1, 3, 6] {
                let a = off(k, 7);
                let p = contact_points(&tri, &a, &pair(x, y), 2 * x);
                assert_eq!(barrier_count_at(&a, x, y), p.b, "triangle ({x}, {y}) a={a}");
                let pk = contact_points(&kite, &a, &pair(x, y), 2 * x);
                assert_eq!(
                    kite_barrier_count_at(&a, x, y),
                    pk.b,
                    "kite ({x}, {y}) a={a}"
                );
            }
        }
    }

    #[test]
    fn edge_count_options_frozen() {
        assert_eq!(
            edge_count_options(ShapeId::Triangle120, 3, 5),
            vec![(44, 0)]
        );
        assert_eq!(
            edge_count_options(ShapeId::Triangle120, 1, 1),
            vec![(8, 0), (10, 2)]
        );
        assert_eq!(edge_count_options(ShapeId::Kite, 0, 1), vec![(6, 2)]);
        assert_eq!(edge_count_options(ShapeId::Rhombus60, 0, 1), vec![(4, 0)]);
        assert_eq!(
            edge_count_options(ShapeId::Rhombus60, 1, 1),
            vec![(4, 0), (6, 2)]
        );
        assert_eq!(edge_count_options(ShapeId::Triangle120, 0, 1), vec![(8, 0)]);
    }

    /// The table-vs-derivation assertion inside `edge_count_options` runs
    /// on every call; sweep it across the normalized range.
    #[test]
    fn tables_agree_with_barrier_derivation() {
        for shape in [ShapeId::Triangle120, ShapeId::Rhombus60, ShapeId::Kite] {
            for x in 0..=40u64 {
                for y in 1..=40u64 {
                    let standard = x < y || (x == 1 && y == 1);
                    if standard && gcd_u64(x, y) == 1 {
                        edge_count_options(shape, x, y);
                    }
                }
            }
        }
    }

    #[test]
    fn period_formula_frozen() {
        let p = period_formula(ShapeId::Triangle120, 1, 1);
        assert_eq!(p.candidates, vec![4, 10]);
        assert!(!p.mono);
        assert_eq!(p.branch, (1, ParityRel::Equal));

        let p = period_formula(ShapeId::Triangle120, 0, 1);
        assert_eq!(p.candidates, vec![8]);
        assert!(p.mono);

        assert_eq!(period_formula(ShapeId::Rhombus60, 0, 1).candidates, vec![4]);
        assert_eq!(period_formula(ShapeId::Kite, 0, 1).candidates, vec![6]);
        assert_eq!(
            period_formula(ShapeId::Triangle120, 3, 5).candidates,
            vec![22]
        );
        assert_eq!(
            period_formula(ShapeId::Rhombus60, 1, 1).candidates,
            vec![2, 6]
        );
        assert_eq!(
            period_formula(ShapeId::Triangle120, 2, 3).candidates,
            vec![26, 54]
        );
    }

    #[test]
    fn two_candidate_branches_satisfy_the_doubling_law() {
        for shape in [ShapeId::Triangle120, ShapeId::Rhombus60, ShapeId::Kite] {
            for x in 0..=60u64 {
                for y in 1..=60u64 {
                    let standard = x < y || (x == 1 && y == 1);
                    if !standard || gcd_u64(x, y) != 1 {
                        continue;
                    }
                    let p = period_formula(shape, x, y);
                    assert!(!p.candidates.is_empty() && p.candidates.len() <= 2);
                    for c in &p.candidates {
                        assert!(c % 2 == 0, "{shape:?} ({x}, {y}): odd period {c}");
                    }
                    if let [p1, p2] = p.candidates[..] {
                        assert!(
                            p2 == 2 * p1 + 2 || p2 == 2 * p1 - 2,
                            "{shape:?} ({x}, {y}): {p1} vs {p2}"
                        );
                    }
                }
            }
        }
    }

    /// The profile's predicted N must equal the tracer's measured crossing
    /// count, and land in the tabulated options.
    #[test]
    fn profile_n_matches_the_tracer() {
        for shape in [ShapeId::Triangle120, ShapeId::Rhombus60, ShapeId::Kite] {
            let t = Tessellation::build(shape);
            for (x, y) in [(1u64, 2u64), (2, 3), (1, 3), (3, 5), (1, 1), (3, 4), (2, 5)] {
                let d = pair(x, y);
                for k in [1i64, -2, 3] {
                    let a = off(k, 7);
                    let extent = 2 * x;
                    let p = contact_points(&t, &a, &d, extent);
                    let tr = unfold_trace(&t, &a, &d, &rint(extent as i64)).unwrap();
                    assert!(!tr.vertex_hit, "{shape:?} ({x}, {y}) a={a}");
                    assert_eq!(p.n, tr.edge_count, "{shape:?} ({x}, {y}) a={a}");
                    let options = edge_count_options(shape, x, y);
                    assert!(
                        options.iter().any(|(n, _)| *n == p.n),
                        "{shape:?} ({x}, {y}) a={a}: N={} not in {options:?}",
                        p.n
                    );
                }
            }
        }
    }

    /// Detected periods land in the closed-form candidate set.
    #[test]
    fn detected_periods_match_the_formula() {
        for shape in [ShapeId::Triangle120, ShapeId::Rhombus60, ShapeId::Kite] {
            let t = Tessellation::build(shape);
            for (x, y) in [(0u64, 1u64), (1, 1), (1, 2), (2, 3), (3, 5), (1, 4), (5, 6)] {
                let d = pair(x, y);
                let prediction = period_formula(shape, x, y);
                for k in [1i64, -3, 5] {
                    let a = off(k, 11);
                    let r = detect_period_unfolding(&t, &a, &d).unwrap();
                    if r.status == OrbitStatus::Periodic {
                        let p = r.period.unwrap();
                        assert!(
                            prediction.contains(p),
                            "{shape:?} ({x}, {y}) a={a}: period {p} not in {:?}",
                            prediction.candidates
                        );
                    }
                }
            }
        }
    }
}
