//! Edge tessellations as incline-line families with exact edge/vertex
//! structure.
//!
//! Each of the four shapes tiles the plane by repeated reflection across its
//! edges. All tile edges land on lines of the six incline classes, and within
//! each class the offsets form an arithmetic progression. Along each line the
//! covered portions (tile edges), the uncovered portions (tile interiors),
//! and the tile corners repeat with a fixed period.
//!
//! [`Tessellation::build`] derives all of that constructively: it closes the
//! fundamental polygon under edge reflections inside a bounding box, reads
//! the families off the collected edge lines, finds the translation lattice
//! that preserves the picture, and folds the collected edges and corners into
//! one periodic pattern per family. Nothing about the per-shape edge layout
//! is hard-coded; the unit tests pin the derived patterns against closed-form
//! descriptions obtained independently.

use crate::error::{BilliardError, Result};
use crate::geometry::{reflect_point, InclineClass, InclineLine, ScaledDirection, ScaledPoint};
use crate::rat::{fmt_rat, is_int, rat, rem_mod, rint, Rat};
use num::{One, Signed, ToPrimitive, Zero};
use std::collections::{BTreeMap, BTreeSet, VecDeque};

/// The four edge-tessellating obtuse shapes.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum ShapeId {
    /// 120°-isosceles triangle.
    Triangle120,
    /// 60°-rhombus (two such triangles glued along the long base).
    Rhombus60,
    /// 60°-90°-120°-kite.
    Kite,
    /// Regular hexagon.
    Hexagon,
}

impl ShapeId {
    pub const ALL: [ShapeId; 4] = [
        ShapeId::Triangle120,
        ShapeId::Rhombus60,
        ShapeId::Kite,
        ShapeId::Hexagon,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ShapeId::Triangle120 => "triangle",
            ShapeId::Rhombus60 => "rhombus",
            ShapeId::Kite => "kite",
            ShapeId::Hexagon => "hexagon",
        }
    }

    pub fn parse(s: &str) -> Option<ShapeId> {
        match s.to_ascii_lowercase().as_str() {
            "triangle" | "triangle120" => Some(ShapeId::Triangle120),
            "rhombus" | "rhombus60" => Some(ShapeId::Rhombus60),
            "kite" => Some(ShapeId::Kite),
            "hexagon" | "hex" => Some(ShapeId::Hexagon),
            _ => None,
        }
    }
}

impl std::fmt::Display for ShapeId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// How a point on a family line relates to the tessellation.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum CrossingKind {
    /// Interior of a tile edge.
    Edge,
    /// A tile corner.
    Vertex,
    /// On the line but interior to a tile (no edge there).
    Gap,
}

/// Periodic edge/vertex/gap pattern along the lines of one family.
///
/// Positions are measured along the line (x, or y for the vertical class).
/// `breaks` are the corner positions on the reference line folded into
/// `[0, period)`; `kinds[i]` classifies the open interval after `breaks[i]`
/// (the last one wraps around).
#[derive(Clone, Debug)]
struct FamilyPattern {
    period: Rat,
    shifter_pos: Rat,
    breaks: Vec<Rat>,
    kinds: Vec<CrossingKind>,
}

impl FamilyPattern {
    fn kind_at(&self, r: &Rat) -> CrossingKind {
        debug_assert!(!r.is_negative() && *r < self.period);
        match self.breaks.binary_search(r) {
            Ok(_) => CrossingKind::Vertex,
            Err(idx) => {
                // idx = number of breaks ≤ r; interval after break idx−1,
                // wrapping to the last interval for r before the first break.
                let i = if idx == 0 {
                    self.kinds.len() - 1
                } else {
                    idx - 1
                };
                self.kinds[i]
            }
        }
    }
}

/// One incline family: lines at offsets `start + k·step`, k ∈ ℤ, plus the
/// periodic pattern of edges and corners along them.
#[derive(Clone, Debug)]
pub struct Family {
    pub class: InclineClass,
    pub start: Rat,
    pub step: Rat,
    pattern: FamilyPattern,
}

impl Family {
    /// Is `offset` one of this family's lines?
    pub fn has_offset(&self, offset: &Rat) -> bool {
        is_int(&((offset - &self.start) / &self.step))
    }

    /// Classify the point at position `pos` along the family line `offset`.
    /// `None` when `offset` is not in the family.
    pub fn classify_pos(&self, offset: &Rat, pos: &Rat) -> Option<CrossingKind> {
        let j = (offset - &self.start) / &self.step;
        if !is_int(&j) {
            return None;
        }
        let pos_ref = pos - j * &self.pattern.shifter_pos;
        let r = rem_mod(&pos_ref, &self.pattern.period);
        Some(self.pattern.kind_at(&r))
    }

    #[cfg(test)]
    fn period(&self) -> &Rat {
        &self.pattern.period
    }
}

/// Half-open barrier interval on the fence circle [0, 2).
///
/// The core interval is (1/3, 5/3]; the kite uses its complement
/// [0, 1/3] ∪ (5/3, 2) with the same endpoint convention.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Barrier {
    pub complemented: bool,
}

impl Barrier {
    /// Membership for a fence coordinate already reduced into [0, 2).
    pub fn contains(&self, c: &Rat) -> bool {
        debug_assert!(!c.is_negative() && *c < rint(2));
        let in_core = *c > rat(1, 3) && *c <= rat(5, 3);
        in_core != self.complemented
    }
}

/// Integer translation lattice, stored as a 2-element basis.
#[derive(Clone, Debug)]
pub struct IntLattice {
    pub basis: [(i64, i64); 2],
}

impl IntLattice {
    fn det(&self) -> i64 {
        let [a, b] = self.basis;
        a.0 * b.1 - a.1 * b.0
    }

    /// Does the integer vector (p, q) belong to the lattice?
    pub fn contains_int(&self, p: i64, q: i64) -> bool {
        let [a, b] = self.basis;
        let det = self.det();
        let alpha = p * b.1 - q * b.0;
        let beta = a.0 * q - a.1 * p;
        alpha % det == 0 && beta % det == 0
    }

    /// Does the rational vector belong to the lattice (integer and divisible)?
    pub fn contains_rat(&self, x: &Rat, y: &Rat) -> bool {
        if !is_int(x) || !is_int(y) {
            return false;
        }
        let [a, b] = self.basis;
        let det = rint(self.det());
        let alpha = x * rint(b.1) - y * rint(b.0);
        let beta = rint(a.0) * y - rint(a.1) * x;
        is_int(&(alpha / &det)) && is_int(&(beta / det))
    }

    /// Reduce a rational point modulo the lattice into the fundamental
    /// parallelogram spanned by the basis.
    fn reduce(&self, x: &Rat, y: &Rat) -> (Rat, Rat) {
        let [a, b] = self.basis;
        let det = rint(self.det());
        let alpha = (x * rint(b.1) - y * rint(b.0)) / &det;
        let beta = (rint(a.0) * y - rint(a.1) * x) / det;
        let fa = alpha.floor();
        let fb = beta.floor();
        (
            x - &fa * rint(a.0) - &fb * rint(b.0),
            y - fa * rint(a.1) - fb * rint(b.1),
        )
    }
}

/// One edge of the fundamental polygon.
#[derive(Clone, Debug)]
pub struct BoundaryEdge {
    pub a: ScaledPoint,
    pub b: ScaledPoint,
    pub line: InclineLine,
}

/// A crossing of a traced ray with a tessellation edge (or corner).
#[derive(Clone, Debug)]
pub struct EdgeCrossing {
    pub t: Rat,
    pub point: ScaledPoint,
    pub line: InclineLine,
    pub is_vertex_hit: bool,
}

/// An edge tessellation: line families, fundamental polygon, vertex cosets,
/// translation lattice, and fence metadata. Immutable after [`build`]; all
/// queries are pure.
///
/// [`build`]: Tessellation::build
#[derive(Clone, Debug)]
pub struct Tessellation {
    pub shape: ShapeId,
    pub families: Vec<Family>,
    pub fundamental_polygon: Vec<ScaledPoint>,
    pub translations: IntLattice,
    /// Tile corners modulo the translation lattice.
    vertex_cosets: Vec<(Rat, Rat)>,
    /// Fence barrier; `None` for the hexagon, whose fence calculus is not
    /// defined here.
    pub barrier: Option<Barrier>,
    /// Non-vertical edges cut between consecutive horizontal levels; `None`
    /// for the hexagon.
    pub edges_per_strip: Option<u32>,
    /// Coefficient of the vertical rise in the edge-count formula; `None`
    /// for the hexagon.
    pub strip_weight: Option<u32>,
}

/// Position of a point along a line of the given class: x, or y for verticals.
fn pos_of(class: InclineClass, p: &ScaledPoint) -> Rat {
    match class {
        InclineClass::V90 => p.y.clone(),
        _ => p.x.clone(),
    }
}

/// Position component of an integer translation for the given class.
fn pos_of_int(class: InclineClass, v: (i64, i64)) -> i64 {
    match class {
        InclineClass::V90 => v.1,
        _ => v.0,
    }
}

fn fundamental_polygon(shape: ShapeId) -> Vec<ScaledPoint> {
    let p = |x: i64, y: i64| ScaledPoint::at(x, y);
    let r = |xn, xd, yn, yd| ScaledPoint::new(rat(xn, xd), rat(yn, yd));
    match shape {
        // Counter-clockwise; apex height is one third of a scaled unit.
        ShapeId::Triangle120 => vec![p(-1, 0), p(1, 0), r(0, 1, 1, 3)],
        ShapeId::Rhombus60 => vec![p(-1, 0), r(0, 1, -1, 3), p(1, 0), r(0, 1, 1, 3)],
        ShapeId::Kite => vec![p(-1, 0), p(0, 0), r(0, 1, 1, 3), r(-1, 2, 1, 2)],
        ShapeId::Hexagon => vec![p(-1, 0), p(1, 0), p(2, 1), p(1, 2), p(-1, 2), p(-2, 1)],
    }
}

/// Incline class of the segment a→b; panics if the segment lies on none of
/// the six classes (cannot happen for tile edges).
fn class_of_segment(a: &ScaledPoint, b: &ScaledPoint) -> InclineClass {
    let dx = &b.x - &a.x;
    let dy = &b.y - &a.y;
    if dx.is_zero() {
        return InclineClass::V90;
    }
    let slope = dy / dx;
    for class in InclineClass::ALL {
        if class.scaled_slope().as_ref() == Some(&slope) {
            return class;
        }
    }
    panic!("segment slope {slope} is not an incline class");
}

/// A collected tile edge: family class, line offset, and position interval.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct RawSegment {
    class: InclineClass,
    offset: Rat,
    lo: Rat,
    hi: Rat,
}

struct Closure {
    segments: BTreeSet<RawSegment>,
    corners: BTreeSet<ScaledPoint>,
}

/// Close the fundamental polygon under edge reflections inside a box of
/// half-width `bound` (on tile centroids), collecting all edges and corners.
fn reflect_closure(shape: ShapeId, bound: i64) -> Closure {
    let fund = fundamental_polygon(shape);
    let key = |poly: &[ScaledPoint]| {
        let mut k: Vec<ScaledPoint> = poly.to_vec();
        k.sort();
        k
    };
    let in_box = |poly: &[ScaledPoint]| {
        let n = rint(poly.len() as i64);
        let cx: Rat = poly.iter().map(|v| v.x.clone()).sum::<Rat>() / &n;
        let cy: Rat = poly.iter().map(|v| v.y.clone()).sum::<Rat>() / n;
        cx.abs() <= rint(bound) && cy.abs() <= rint(bound)
    };

    let mut seen = BTreeSet::new();
    seen.insert(key(&fund));
    let mut queue = VecDeque::new();
    queue.push_back(fund);
    let mut segments = BTreeSet::new();
    let mut corners = BTreeSet::new();

    while let Some(poly) = queue.pop_front() {
        let n = poly.len();
        for i in 0..n {
            let a = &poly[i];
            let b = &poly[(i + 1) % n];
            corners.insert(a.clone());
            let class = class_of_segment(a, b);
            let line = InclineLine::through(class, a);
            let (pa, pb) = (pos_of(class, a), pos_of(class, b));
            let (lo, hi) = if pa <= pb { (pa, pb) } else { (pb, pa) };
            segments.insert(RawSegment {
                class,
                offset: line.offset.clone(),
                lo,
                hi,
            });
            let image: Vec<ScaledPoint> = poly.iter().map(|v| reflect_point(v, &line)).collect();
            if in_box(&image) && seen.insert(key(&image)) {
                queue.push_back(image);
            }
        }
    }
    Closure { segments, corners }
}

/// Merged coverage intervals (closed, sorted, disjoint) on one line.
fn merge_intervals(mut pieces: Vec<(Rat, Rat)>) -> Vec<(Rat, Rat)> {
    pieces.sort();
    let mut out: Vec<(Rat, Rat)> = Vec::new();
    for (lo, hi) in pieces {
        if let Some(last) = out.last_mut() {
            if lo <= last.1 {
                if hi > last.1 {
                    last.1 = hi;
                }
                continue;
            }
        }
        out.push((lo, hi));
    }
    out
}

#[derive(PartialEq, Eq, Debug, Clone, Copy)]
enum Coverage {
    Full,
    Free,
}

/// Whether the open interval (lo, hi) is fully inside the merged coverage or
/// fully outside it; panics on a mixed answer (which would mean an edge ends
/// away from any corner).
fn coverage_of(merged: &[(Rat, Rat)], lo: &Rat, hi: &Rat) -> Coverage {
    debug_assert!(lo < hi);
    for (a, b) in merged {
        if a <= lo && hi <= b {
            return Coverage::Full;
        }
        if a < hi && lo < b {
            panic!("edge coverage is not aligned with corners on ({lo}, {hi})");
        }
    }
    Coverage::Free
}

impl Tessellation {
    /// Construct the tessellation for a shape.
    pub fn build(shape: ShapeId) -> Tessellation {
        let bound: i64 = match shape {
            ShapeId::Hexagon => 9,
            _ => 5,
        };
        let closure = reflect_closure(shape, bound);
        // Region in which the collected edges and corners are certainly
        // complete (tiles may poke at most their diameter past the box).
        let guaranteed = rint(bound - 2);

        // Families: offsets per class, then (start, step) from the gaps.
        let mut offsets_by_class: BTreeMap<InclineClass, BTreeSet<Rat>> = BTreeMap::new();
        for seg in &closure.segments {
            offsets_by_class
                .entry(seg.class)
                .or_default()
                .insert(seg.offset.clone());
        }
        let mut family_specs: Vec<(InclineClass, Rat, Rat)> = Vec::new();
        for class in InclineClass::ALL {
            let Some(offsets) = offsets_by_class.get(&class) else {
                continue;
            };
            let safe: Vec<&Rat> = offsets.iter().filter(|o| o.abs() <= guaranteed).collect();
            assert!(safe.len() >= 3, "{shape}: too few {class:?} offsets");
            let step = safe[1] - safe[0];
            assert!(step.is_positive());
            for w in safe.windows(2) {
                assert_eq!(w[1] - w[0], step, "{shape}: uneven {class:?} offsets");
            }
            let start = rem_mod(safe[0], &step);
            assert!(
                offsets.contains(&start) || offsets.contains(&(&start - &step)),
                "{shape}: family start not among collected offsets"
            );
            family_specs.push((class, start, step));
        }

        // Per-line merged coverage, for translation validation and patterns.
        let mut coverage: BTreeMap<(InclineClass, Rat), Vec<(Rat, Rat)>> = BTreeMap::new();
        for seg in &closure.segments {
            coverage
                .entry((seg.class, seg.offset.clone()))
                .or_default()
                .push((seg.lo.clone(), seg.hi.clone()));
        }
        let coverage: BTreeMap<(InclineClass, Rat), Vec<(Rat, Rat)>> = coverage
            .into_iter()
            .map(|(k, v)| (k, merge_intervals(v)))
            .collect();

        // Translation lattice: integer vectors that shift every family's
        // offsets by whole steps and map the collected picture into itself.
        let translations =
            Self::derive_translations(shape, &family_specs, &closure, &coverage, &guaranteed);

        // Vertex cosets: corners reduced modulo the lattice.
        let mut vertex_cosets: BTreeSet<(Rat, Rat)> = BTreeSet::new();
        for c in &closure.corners {
            vertex_cosets.insert(translations.reduce(&c.x, &c.y));
        }
        let vertex_cosets: Vec<(Rat, Rat)> = vertex_cosets.into_iter().collect();
        assert!(
            vertex_cosets.len() <= 16,
            "{shape}: unexpected corner coset count {}",
            vertex_cosets.len()
        );

        // Fold each family's reference line into a periodic pattern.
        let mut families = Vec::new();
        for (class, start, step) in &family_specs {
            let pattern = Self::build_pattern(
                shape,
                *class,
                start,
                step,
                &translations,
                &closure,
                &coverage,
            );
            families.push(Family {
                class: *class,
                start: start.clone(),
                step: step.clone(),
                pattern,
            });
        }

        let (barrier, edges_per_strip, strip_weight) = match shape {
            ShapeId::Triangle120 => (
                Some(Barrier {
                    complemented: false,
                }),
                Some(4),
                Some(8),
            ),
            ShapeId::Rhombus60 => (
                Some(Barrier {
                    complemented: false,
                }),
                Some(2),
                Some(4),
            ),
            ShapeId::Kite => (Some(Barrier { complemented: true }), Some(3), Some(6)),
            ShapeId::Hexagon => (None, None, None),
        };

        Tessellation {
            shape,
            families,
            fundamental_polygon: fundamental_polygon(shape),
            translations,
            vertex_cosets,
            barrier,
            edges_per_strip,
            strip_weight,
        }
    }

    fn derive_translations(
        shape: ShapeId,
        family_specs: &[(InclineClass, Rat, Rat)],
        closure: &Closure,
        coverage: &BTreeMap<(InclineClass, Rat), Vec<(Rat, Rat)>>,
        guaranteed: &Rat,
    ) -> IntLattice {
        let in_guard = |x: &Rat, y: &Rat| x.abs() <= *guaranteed && y.abs() <= *guaranteed;
        let mut valid: Vec<(i64, i64)> = Vec::new();
        for p in -6..=6i64 {
            'cand: for q in -6..=6i64 {
                if p == 0 && q == 0 {
                    continue;
                }
                // (a) each family's offset set must be shifted by whole steps
                for (class, _, step) in family_specs {
                    let delta = InclineLine::value_at(*class, &rint(p), &rint(q));
                    if !is_int(&(delta / step)) {
                        continue 'cand;
                    }
                }
                // (b) corners must map to corners...
                let mut checked_corners = 0usize;
                for c in &closure.corners {
                    let img = c.translate(&rint(p), &rint(q));
                    if !in_guard(&c.x, &c.y) || !in_guard(&img.x, &img.y) {
                        continue;
                    }
                    checked_corners += 1;
                    if !closure.corners.contains(&img) {
                        continue 'cand;
                    }
                }
                // ...and edges to covered portions of the target lines.
                let mut checked_segs = 0usize;
                for seg in &closure.segments {
                    let pos_shift = rint(pos_of_int(seg.class, (p, q)));
                    let delta = InclineLine::value_at(seg.class, &rint(p), &rint(q));
                    let (ilo, ihi) = (&seg.lo + &pos_shift, &seg.hi + &pos_shift);
                    let within = seg.lo.abs() <= *guaranteed
                        && seg.hi.abs() <= *guaranteed
                        && ilo.abs() <= *guaranteed
                        && ihi.abs() <= *guaranteed
                        && seg.offset.abs() <= *guaranteed
                        && (&seg.offset + &delta).abs() <= *guaranteed;
                    if !within {
                        continue;
                    }
                    checked_segs += 1;
                    let target = coverage.get(&(seg.class, &seg.offset + &delta));
                    let ok = target
                        .map(|m| coverage_of(m, &ilo, &ihi) == Coverage::Full)
                        .unwrap_or(false);
                    if !ok {
                        continue 'cand;
                    }
                }
                // Only accept candidates the box actually exercised.
                if checked_corners >= 5 && checked_segs >= 5 {
                    valid.push((p, q));
                }
            }
        }
        assert!(!valid.is_empty(), "{shape}: no translations found");
        valid.sort_by_key(|&(p, q)| (p.abs() + q.abs(), p, q));
        let v1 = valid[0];
        let v2 = *valid
            .iter()
            .find(|&&(p, q)| p * v1.1 - q * v1.0 != 0)
            .expect("translations span the plane");
        let mut lat = IntLattice { basis: [v1, v2] };
        if lat.det() < 0 {
            lat.basis.swap(0, 1);
        }
        for &(p, q) in &valid {
            assert!(
                lat.contains_int(p, q),
                "{shape}: translation ({p},{q}) outside the derived basis"
            );
        }
        lat
    }

    fn build_pattern(
        shape: ShapeId,
        class: InclineClass,
        start: &Rat,
        step: &Rat,
        translations: &IntLattice,
        closure: &Closure,
        coverage: &BTreeMap<(InclineClass, Rat), Vec<(Rat, Rat)>>,
    ) -> FamilyPattern {
        // Enumerate small lattice vectors once.
        let mut lattice_vecs: Vec<(i64, i64)> = Vec::new();
        for p in -8..=8i64 {
            for q in -8..=8i64 {
                if (p != 0 || q != 0) && translations.contains_int(p, q) {
                    lattice_vecs.push((p, q));
                }
            }
        }
        lattice_vecs.sort_by_key(|&(p, q)| (p.abs() + q.abs(), p, q));

        // Stabilizer period: shortest lattice shift along the line.
        let period = lattice_vecs
            .iter()
            .filter(|&&v| {
                InclineLine::value_at(class, &rint(v.0), &rint(v.1)).is_zero()
                    && pos_of_int(class, v) != 0
            })
            .map(|&v| pos_of_int(class, v).abs())
            .min()
            .unwrap_or_else(|| panic!("{shape}: no {class:?} line stabilizer"));
        let period = rint(period);

        // Shifter: lattice vector moving a line to the next offset.
        let shifter = lattice_vecs
            .iter()
            .find(|&&v| InclineLine::value_at(class, &rint(v.0), &rint(v.1)) == *step)
            .copied()
            .unwrap_or_else(|| panic!("{shape}: no {class:?} family shifter"));
        let shifter_pos = rint(pos_of_int(class, shifter));

        // Reference line: prefer offset = start, else start + step.
        let ref_offset = if coverage.contains_key(&(class, start.clone())) {
            start.clone()
        } else {
            start + step
        };

        // Fold corner positions on the reference line into [0, period).
        let mut breaks: BTreeSet<Rat> = BTreeSet::new();
        for c in &closure.corners {
            if InclineLine::value_at(class, &c.x, &c.y) == ref_offset {
                breaks.insert(rem_mod(&pos_of(class, c), &period));
            }
        }
        let breaks: Vec<Rat> = breaks.into_iter().collect();
        assert!(!breaks.is_empty(), "{shape}: {class:?} line has no corners");

        // Fold edge coverage into [0, period): split at period multiples.
        let mut pieces: Vec<(Rat, Rat)> = Vec::new();
        for seg in &closure.segments {
            if seg.class != class || seg.offset != ref_offset {
                continue;
            }
            let mut j = (&seg.lo / &period).floor();
            loop {
                let block_lo = &j * &period;
                let block_hi = &block_lo + &period;
                let lo = if seg.lo > block_lo {
                    seg.lo.clone()
                } else {
                    block_lo.clone()
                };
                let hi = if seg.hi < block_hi {
                    seg.hi.clone()
                } else {
                    block_hi.clone()
                };
                if lo < hi {
                    pieces.push((&lo - &block_lo, &hi - &block_lo));
                }
                if seg.hi <= block_hi {
                    break;
                }
                j += Rat::one();
            }
            // Segment endpoints are corners; make sure the fold saw them.
            for end in [&seg.lo, &seg.hi] {
                let r = rem_mod(end, &period);
                assert!(
                    breaks.binary_search(&r).is_ok(),
                    "{shape}: {class:?} edge endpoint off the corner set"
                );
            }
        }
        let merged = merge_intervals(pieces);

        // Classify the cyclic intervals between consecutive corners.
        let n = breaks.len();
        let mut kinds = Vec::with_capacity(n);
        for i in 0..n {
            let lo = &breaks[i];
            let hi = if i + 1 < n {
                breaks[i + 1].clone()
            } else {
                &breaks[0] + &period
            };
            // The wrap interval may extend past the period; check both parts.
            let mut parts: Vec<(Rat, Rat)> = Vec::new();
            if hi <= period {
                parts.push((lo.clone(), hi.clone()));
            } else {
                if *lo < period {
                    parts.push((lo.clone(), period.clone()));
                }
                if breaks[0].is_positive() {
                    parts.push((rint(0), breaks[0].clone()));
                }
            }
            let verdicts: Vec<Coverage> = parts
                .iter()
                .filter(|(a, b)| a < b)
                .map(|(a, b)| coverage_of(&merged, a, b))
                .collect();
            assert!(!verdicts.is_empty());
            assert!(
                verdicts.windows(2).all(|w| w[0] == w[1]),
                "{shape}: inconsistent wrap interval on {class:?}"
            );
            kinds.push(match verdicts[0] {
                Coverage::Full => CrossingKind::Edge,
                Coverage::Free => CrossingKind::Gap,
            });
        }

        // Re-anchor from the reference line back to offset = start.
        let j_ref = (&ref_offset - start) / step;
        let breaks = if j_ref.is_zero() {
            breaks
        } else {
            // Pattern of line `start` = pattern of ref line shifted back.
            let mut shifted: BTreeSet<Rat> = BTreeSet::new();
            for b in &breaks {
                shifted.insert(rem_mod(&(b - &j_ref * &shifter_pos), &period));
            }
            let shifted: Vec<Rat> = shifted.into_iter().collect();
            assert_eq!(shifted.len(), breaks.len());
            shifted
        };
        let kinds = if j_ref.is_zero() {
            kinds
        } else {
            // Recompute interval kinds against shifted coverage by probing
            // the original pattern at mapped midpoints.
            let probe = FamilyPattern {
                period: period.clone(),
                shifter_pos: shifter_pos.clone(),
                breaks: {
                    let mut b: BTreeSet<Rat> = BTreeSet::new();
                    for c in &closure.corners {
                        if InclineLine::value_at(class, &c.x, &c.y) == ref_offset {
                            b.insert(rem_mod(&pos_of(class, c), &period));
                        }
                    }
                    b.into_iter().collect()
                },
                kinds,
            };
            let n = breaks.len();
            let mut out = Vec::with_capacity(n);
            for i in 0..n {
                let lo = &breaks[i];
                let hi = if i + 1 < n {
                    breaks[i + 1].clone()
                } else {
                    &breaks[0] + &period
                };
                let mid = (lo + &hi) / rint(2);
                let mapped = rem_mod(&(&mid + &j_ref * &shifter_pos), &period);
                out.push(probe.kind_at(&mapped));
            }
            out
        };

        FamilyPattern {
            period,
            shifter_pos,
            breaks,
            kinds,
        }
    }

    pub fn family(&self, class: InclineClass) -> Option<&Family> {
        self.families.iter().find(|f| f.class == class)
    }

    /// Classify a point lying on the family line (class, offset).
    pub fn classify(
        &self,
        class: InclineClass,
        offset: &Rat,
        point: &ScaledPoint,
    ) -> Option<CrossingKind> {
        debug_assert_eq!(InclineLine::value_at(class, &point.x, &point.y), *offset);
        self.family(class)?
            .classify_pos(offset, &pos_of(class, point))
    }

    /// Is `p` a tessellation vertex (image of a fundamental-polygon corner)?
    pub fn is_vertex(&self, p: &ScaledPoint) -> bool {
        self.vertex_cosets
            .iter()
            .any(|(rx, ry)| self.translations.contains_rat(&(&p.x - rx), &(&p.y - ry)))
    }

    /// Is the rational vector a translation symmetry of the tessellation?
    pub fn aligned(&self, dx: &Rat, dy: &Rat) -> bool {
        self.translations.contains_rat(dx, dy)
    }

    pub fn boundary_edges(&self) -> Vec<BoundaryEdge> {
        let poly = &self.fundamental_polygon;
        let n = poly.len();
        (0..n)
            .map(|i| {
                let a = poly[i].clone();
                let b = poly[(i + 1) % n].clone();
                let class = class_of_segment(&a, &b);
                let line = InclineLine::through(class, &a);
                BoundaryEdge { a, b, line }
            })
            .collect()
    }

    /// All crossings of the ray `origin + t·dir` for t in (0, t_max] with
    /// tessellation edges, strictly ordered by t. Crossings through tile
    /// corners are flagged; crossings of family lines inside gaps are not
    /// crossings of edges and are omitted.
    pub fn crossings(
        &self,
        origin: &ScaledPoint,
        dir: &ScaledDirection,
        t_max: &Rat,
    ) -> Result<Vec<EdgeCrossing>> {
        if dir.is_zero() {
            return Err(BilliardError::ZeroDirection);
        }
        if self.is_vertex(origin) {
            return Err(BilliardError::OriginIsVertex {
                point: format!("({}, {})", fmt_rat(&origin.x), fmt_rat(&origin.y)),
            });
        }
        let mut hits: BTreeMap<Rat, EdgeCrossing> = BTreeMap::new();
        for family in &self.families {
            let class = family.class;
            let ld = InclineLine::value_at(class, &dir.dx, &dir.dy);
            let l0 = InclineLine::value_at(class, &origin.x, &origin.y);
            if ld.is_zero() {
                if family.has_offset(&l0) {
                    return Err(BilliardError::GrazingAlongIncline {
                        class: class.degrees(),
                        offset: fmt_rat(&l0),
                    });
                }
                continue;
            }
            let l1 = &l0 + &ld * t_max;
            // Offsets c = start + n·step with ℓ strictly after 0, up to t_max.
            let (n_lo, n_hi) = if ld.is_positive() {
                // c in (l0, l1]
                let a = ((&l0 - &family.start) / &family.step).floor() + Rat::one();
                let b = ((&l1 - &family.start) / &family.step).floor();
                (a, b)
            } else {
                // c in [l1, l0)
                let a = -((-(&l1 - &family.start) / &family.step).floor());
                let b = ((&l0 - &family.start) / &family.step).ceil() - Rat::one();
                (a, b)
            };
            let (n_lo, n_hi) = (
                n_lo.to_integer().to_i64().expect("offset index fits i64"),
                n_hi.to_integer().to_i64().expect("offset index fits i64"),
            );
            for n in n_lo..=n_hi {
                let c = &family.start + rint(n) * &family.step;
                let t = (&c - &l0) / &ld;
                debug_assert!(t.is_positive() && t <= *t_max);
                let point = origin.advance(dir, &t);
                let kind = family
                    .classify_pos(&c, &pos_of(class, &point))
                    .expect("constructed offset is in family");
                if kind == CrossingKind::Gap {
                    continue;
                }
                let crossing = EdgeCrossing {
                    t: t.clone(),
                    point,
                    line: InclineLine::new(class, c),
                    is_vertex_hit: kind == CrossingKind::Vertex,
                };
                match hits.get_mut(&t) {
                    None => {
                        hits.insert(t, crossing);
                    }
                    Some(existing) => {
                        debug_assert!(
                            existing.is_vertex_hit || crossing.is_vertex_hit,
                            "two distinct edges through a non-corner point"
                        );
                        if crossing.is_vertex_hit && !existing.is_vertex_hit {
                            *existing = crossing;
                        }
                    }
                }
            }
        }
        Ok(hits.into_values().collect())
    }
}
