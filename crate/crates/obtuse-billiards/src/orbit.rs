//! Billiard orbits, two independent ways.
//!
//! This module computes periodic orbits in a fundamental polygon by two
//! routes that share no code beyond exact arithmetic:
//!
//! * [`fold`] — the literal dynamical system: bounce a ray around the
//!   polygon, reflecting at each edge, and detect an exact state repeat.
//!   It is the reference oracle; it never consults the tessellation's line
//!   families, the translation lattice, or any closed form.
//! * [`detect_period_unfolding`] — the unfolding route: straighten the orbit
//!   into a ray through the edge tessellation, find the first alignment of
//!   the endpoints under the translation lattice, and count edge crossings.
//!
//! Agreement of the two routes on the same launch data is the backbone of
//! the verification sweeps in [`crate::sweep`].
//!
//! Launch data is a [`DirectionPair`] (a reduced integer direction) plus an
//! [`Offset`] along the base; [`reduce_angle`] maps steeper or shallower
//! directions into the range the period tables cover, together with the
//! exact affine [`FrameMap`] that conjugates the two unfoldings.

use num::{One, Signed, Zero};

use crate::error::{BilliardError, Result};
use crate::geometry::{angle_of, InclineClass, InclineLine, Mat2, ScaledDirection, ScaledPoint};
use crate::rat::{fmt_rat, gcd_u64, rat, rint, Rat};
use crate::tessellation::{BoundaryEdge, EdgeCrossing, ShapeId, Tessellation};

/// A launch direction with natural components `(x, y)`, reduced to lowest
/// terms. The slope of the launched ray is `y√3/x` in true coordinates,
/// i.e. `y/x` in scaled coordinates; `(0, 1)` is vertical.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DirectionPair {
    x: u64,
    y: u64,
}

impl DirectionPair {
    /// Build a pair, rejecting `(0, 0)` and non-coprime components.
    pub fn new(x: u64, y: u64) -> Result<DirectionPair> {
        if x == 0 && y == 0 {
            return Err(BilliardError::InvalidPair {
                x,
                y,
                reason: "both components are zero".into(),
            });
        }
        if gcd_u64(x, y) != 1 {
            return Err(BilliardError::InvalidPair {
                x,
                y,
                reason: format!("components share the factor {}", gcd_u64(x, y)),
            });
        }
        Ok(DirectionPair { x, y })
    }

    pub fn x(&self) -> u64 {
        self.x
    }

    pub fn y(&self) -> u64 {
        self.y
    }

    /// Does the pair lie in the range the three obtuse shapes' period
    /// tables cover: `x < y`, or one of the two boundary pairs `(1, 1)`
    /// and `(0, 1)`?
    pub fn in_standard_range(&self) -> bool {
        self.x < self.y || (self.x == 1 && self.y == 1)
    }

    /// Does the pair lie in the hexagon's admissible wedge `x/3 < y < x`?
    pub fn in_hexagon_range(&self) -> bool {
        3 * self.y > self.x && self.y < self.x
    }

    /// Launch angle above the horizontal, in degrees.
    pub fn theta_degrees(&self) -> f64 {
        angle_of(self.x, self.y)
    }

    /// The pair as an exact scaled direction vector.
    pub fn as_direction(&self) -> ScaledDirection {
        ScaledDirection::new(rint(self.x as i64), rint(self.y as i64))
    }
}

impl std::fmt::Display for DirectionPair {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// A base offset `a` with `-1 < a < 1`: the launch point is `(a, 0)` in
/// scaled coordinates (mirrored for the kite, whose base is `[-1, 0]`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Offset {
    a: Rat,
}

impl Offset {
    pub fn new(a: Rat) -> Result<Offset> {
        if a <= rint(-1) || a >= rint(1) {
            return Err(BilliardError::InvalidOffset {
                offset: fmt_rat(&a),
                interval: "(-1, 1)".into(),
            });
        }
        Ok(Offset { a })
    }

    /// Shorthand for `Offset::new(n/d)`.
    pub fn from_ratio(n: i64, d: i64) -> Result<Offset> {
        Offset::new(rat(n, d))
    }

    pub fn value(&self) -> &Rat {
        &self.a
    }
}

impl std::fmt::Display for Offset {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", fmt_rat(&self.a))
    }
}

/// How an orbit computation ended.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OrbitStatus {
    /// The orbit closed up exactly; `period` is the length of the
    /// primitive cycle in boundary strikes (equivalently, edge crossings
    /// of the unfolded ray).
    Periodic,
    /// The ray ran into a polygon corner / tessellation vertex (or rode
    /// along a mirror line, which reaches a vertex); the billiard flow is
    /// not defined past it.
    Singular,
    /// The bounce budget ran out before a repeat was detected.
    Truncated,
}

impl std::fmt::Display for OrbitStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            OrbitStatus::Periodic => "periodic",
            OrbitStatus::Singular => "singular",
            OrbitStatus::Truncated => "truncated",
        })
    }
}

/// The outcome of an orbit computation, by either route.
///
/// The folding route fills `bounce_points`; the unfolding route fills
/// `extent` (the horizontal length `T` of the straightened segment) and
/// `terminal_class`. Fields not produced by a route are `None`.
#[derive(Clone, Debug)]
pub struct OrbitResult {
    pub status: OrbitStatus,
    /// Primitive period: boundary strikes per cycle.
    pub period: Option<u64>,
    /// Horizontal extent `T` of one primitive cycle of the unfolded ray.
    pub extent: Option<u64>,
    /// Strike points of one primitive cycle (folding route only). For a
    /// boundary launch the final entry is the launch point itself.
    pub bounce_points: Option<Vec<ScaledPoint>>,
    /// Line class of the final edge crossed by the unfolded segment.
    pub terminal_class: Option<InclineClass>,
}

impl OrbitResult {
    fn singular(points: Option<Vec<ScaledPoint>>) -> OrbitResult {
        OrbitResult {
            status: OrbitStatus::Singular,
            period: None,
            extent: None,
            bounce_points: points,
            terminal_class: None,
        }
    }
}

// ---------------------------------------------------------------------------
// Alignment.
// ---------------------------------------------------------------------------

/// Least horizontal extent `T ≥ 1` after which the unfolded ray of slope
/// `y/x` returns to a lattice-equivalent position in the tessellations of
/// the three obtuse shapes: `T = x` when `x ≡ y (mod 2)`, else `2x`; the
/// vertical pair uses the rise instead and closes after `2`.
pub fn first_alignment(x: u64, y: u64) -> u64 {
    if x == 0 {
        2
    } else if x % 2 == y % 2 {
        x
    } else {
        2 * x
    }
}

/// Reference implementation of [`first_alignment`] by direct search: the
/// least `T ≥ 1` whose displacement `(T, Ty/x)` has integer components
/// with an even sum (the translation lattice shared by the triangle, the
/// rhombus, and the kite). Exposed for cross-checking only.
pub fn first_alignment_brute(x: u64, y: u64) -> u64 {
    if x == 0 {
        // Vertical ray: displacement (0, T); the sum is even at T = 2.
        return 2;
    }
    let mut t = 1u64;
    loop {
        if (t * y).is_multiple_of(x) && (t + t * y / x).is_multiple_of(2) {
            return t;
        }
        t += 1;
    }
}

/// Least `T ≥ 1` whose displacement along the pair's ray is a translation
/// symmetry of `tess`. Agrees with [`first_alignment`] on the three obtuse
/// shapes; for the hexagon it searches the (coarser) hexagon lattice.
pub fn alignment_extent(tess: &Tessellation, d: &DirectionPair) -> u64 {
    let (x, y) = (d.x, d.y);
    if x == 0 {
        let mut t = 1u64;
        loop {
            if tess.aligned(&Rat::zero(), &rint(t as i64)) {
                return t;
            }
            t += 1;
        }
    }
    let mut t = 1u64;
    loop {
        if (t * y).is_multiple_of(x) {
            let dx = rint(t as i64);
            let dy = rint((t * y / x) as i64);
            if tess.aligned(&dx, &dy) {
                return t;
            }
        }
        t += 1;
    }
}

// ---------------------------------------------------------------------------
// Folding route: the literal billiard.
// ---------------------------------------------------------------------------

/// Default bounce budget for a folded computation of the pair `(x, y)`:
/// ten times the largest period any branch table can produce.
pub fn default_max_bounces(d: &DirectionPair) -> u64 {
    10 * (16 * d.y + 8 * d.x)
}

/// Reduce an integer direction to a primitive vector with the same
/// orientation.
fn reduce_dir(dx: i64, dy: i64) -> (i64, i64) {
    let g = gcd_u64(dx.unsigned_abs(), dy.unsigned_abs()) as i64;
    debug_assert!(g > 0);
    (dx / g, dy / g)
}

/// Reflect an integer direction across a line of the given class, exactly.
fn reflect_dir_int(dx: i64, dy: i64, class: InclineClass) -> (i64, i64) {
    let (rx, ry) = class.reflection().apply_int_doubled(dx, dy);
    reduce_dir(rx, ry)
}

/// Is `q`, known to lie on the edge's line, within the closed segment?
fn on_closed_segment(edge: &BoundaryEdge, q: &ScaledPoint) -> bool {
    let (lo, hi, v) = if edge.a.x != edge.b.x {
        (&edge.a.x, &edge.b.x, &q.x)
    } else {
        (&edge.a.y, &edge.b.y, &q.y)
    };
    if lo <= hi {
        lo <= v && v <= hi
    } else {
        hi <= v && v <= lo
    }
}

/// 2D cross product of the edge vector with `w`.
fn edge_cross(edge: &BoundaryEdge, wx: &Rat, wy: &Rat) -> Rat {
    let ex = &edge.b.x - &edge.a.x;
    let ey = &edge.b.y - &edge.a.y;
    &ex * wy - &ey * wx
}

fn fmt_point(p: &ScaledPoint) -> String {
    format!("({}, {})", fmt_rat(&p.x), fmt_rat(&p.y))
}

/// One boundary strike: where the ray from `p` with direction `d` exits the
/// polygon, which line class it strikes, and whether it hit a corner.
fn next_strike(
    edges: &[BoundaryEdge],
    corners: &[ScaledPoint],
    p: &ScaledPoint,
    d: (i64, i64),
) -> Option<(ScaledPoint, InclineClass, bool)> {
    let dx = rint(d.0);
    let dy = rint(d.1);
    let mut best: Option<(Rat, ScaledPoint, InclineClass)> = None;
    for edge in edges {
        let class = edge.line.class;
        let ld = InclineLine::value_at(class, &dx, &dy);
        if ld.is_zero() {
            continue;
        }
        let l0 = edge.line.value(p);
        let t = (&edge.line.offset - &l0) / &ld;
        if !t.is_positive() {
            continue;
        }
        let q = ScaledPoint::new(&p.x + &t * &dx, &p.y + &t * &dy);
        if !on_closed_segment(edge, &q) {
            continue;
        }
        match &best {
            Some((tb, _, _)) if *tb <= t => {}
            _ => best = Some((t, q, class)),
        }
    }
    best.map(|(_, q, class)| {
        let corner = corners.contains(&q);
        (q, class, corner)
    })
}

/// Play the billiard literally: reflect the ray at each boundary strike of
/// the fundamental polygon of `tess` and report the primitive period via
/// exact state-repeat detection.
///
/// `start` may lie on the boundary (the usual launch) or strictly inside
/// (used for shapes whose natural launch chord is an interior diagonal);
/// anywhere else is rejected. A start at a polygon corner, a direction that
/// runs along the boundary, or a strike into a corner ends the computation
/// with [`OrbitStatus::Singular`]. If no repeat occurs within `max_bounces`
/// strikes the result is [`OrbitStatus::Truncated`].
///
/// The detected period is the number of strikes in the primitive cycle,
/// and `bounce_points` lists that cycle's strike points in order.
pub fn fold(
    tess: &Tessellation,
    start: &ScaledPoint,
    dir: (i64, i64),
    max_bounces: u64,
) -> Result<OrbitResult> {
    if dir == (0, 0) {
        return Err(BilliardError::ZeroDirection);
    }
    let edges = tess.boundary_edges();
    let corners = tess.fundamental_polygon.clone();
    let dir = reduce_dir(dir.0, dir.1);

    if corners.iter().any(|c| c == start) {
        return Ok(OrbitResult::singular(Some(vec![])));
    }

    let containing: Vec<&BoundaryEdge> = edges
        .iter()
        .filter(|e| e.line.contains(start) && on_closed_segment(e, start))
        .collect();
    let on_boundary = !containing.is_empty();
    if on_boundary {
        let dxr = rint(dir.0);
        let dyr = rint(dir.1);
        for edge in &containing {
            let cross = edge_cross(edge, &dxr, &dyr);
            if cross.is_negative() {
                return Err(BilliardError::OutwardDirection {
                    dir: format!("({}, {})", dir.0, dir.1),
                    point: fmt_point(start),
                });
            }
            if cross.is_zero() {
                // Riding the boundary edge: the ray reaches a corner.
                return Ok(OrbitResult::singular(Some(vec![])));
            }
        }
    } else {
        let inside = edges.iter().all(|e| {
            let wx = &start.x - &e.a.x;
            let wy = &start.y - &e.a.y;
            edge_cross(e, &wx, &wy).is_positive()
        });
        if !inside {
            return Err(BilliardError::StartOffBoundary {
                point: fmt_point(start),
            });
        }
    }

    // States are (strike point, outgoing direction). For a boundary start
    // the launch state itself is a strike state and the first return to it
    // is the period; for an interior start the first strike plays that role.
    let mut target: Option<(ScaledPoint, (i64, i64))> = if on_boundary {
        Some((start.clone(), dir))
    } else {
        None
    };
    let target_index: u64 = if on_boundary { 0 } else { 1 };

    let mut p = start.clone();
    let mut d = dir;
    let mut points: Vec<ScaledPoint> = Vec::new();
    for k in 1..=max_bounces {
        let Some((q, class, corner)) = next_strike(&edges, &corners, &p, d) else {
            return Err(BilliardError::Other(format!(
                "ray from {} with direction ({}, {}) left the polygon",
                fmt_point(&p),
                d.0,
                d.1
            )));
        };
        if corner {
            points.push(q);
            return Ok(OrbitResult::singular(Some(points)));
        }
        let d2 = reflect_dir_int(d.0, d.1, class);
        let state = (q.clone(), d2);
        points.push(q.clone());
        match &target {
            Some(t) if *t == state => {
                let period = k - target_index;
                points.truncate(period as usize);
                return Ok(OrbitResult {
                    status: OrbitStatus::Periodic,
                    period: Some(period),
                    extent: None,
                    bounce_points: Some(points),
                    terminal_class: None,
                });
            }
            None => target = Some(state.clone()),
            _ => {}
        }
        p = q;
        d = d2;
    }
    Ok(OrbitResult {
        status: OrbitStatus::Truncated,
        period: None,
        extent: None,
        bounce_points: Some(points),
        terminal_class: None,
    })
}

/// Launch a folded orbit from offset `a` with direction pair `d`, using
/// each shape's launch convention:
///
/// * triangle and hexagon: start `(a, 0)` on the base edge, direction
///   `(x, y)`;
/// * kite (base `[-1, 0]`): launches with positive `a` are mirrored to
///   `(-a, 0)` with direction `(-x, y)`, so that the folded orbit matches
///   the unfolding from `(a, 0)`; `a = 0` is the corner at the origin;
/// * rhombus: `(a, 0)` lies on the interior diagonal, so the fold starts
///   in interior mode.
pub fn launch(
    tess: &Tessellation,
    a: &Offset,
    d: &DirectionPair,
    max_bounces: u64,
) -> Result<OrbitResult> {
    let x = i64::try_from(d.x).map_err(|_| BilliardError::Other("pair too large".into()))?;
    let y = i64::try_from(d.y).map_err(|_| BilliardError::Other("pair too large".into()))?;
    let (start, dir) = match tess.shape {
        ShapeId::Kite if a.a.is_positive() => (ScaledPoint::new(-&a.a, Rat::zero()), (-x, y)),
        _ => (ScaledPoint::new(a.a.clone(), Rat::zero()), (x, y)),
    };
    fold(tess, &start, dir, max_bounces)
}

// ---------------------------------------------------------------------------
// Unfolding route: straighten, align, count.
// ---------------------------------------------------------------------------

/// Crossing data for the unfolded segment of horizontal extent `extent`
/// starting at `(a, 0)`.
#[derive(Clone, Debug)]
pub struct UnfoldTrace {
    /// Number of proper edge crossings (corner passages excluded).
    pub edge_count: u64,
    /// Did the segment pass through a tessellation vertex?
    pub vertex_hit: bool,
    /// Class of the last edge crossed, if any edge was crossed.
    pub terminal_class: Option<InclineClass>,
    /// The full ordered crossing list, for rendering and diagnostics.
    pub crossings: Vec<EdgeCrossing>,
}

/// Trace the unfolded ray `t ↦ (a + t, (y/x)·t)` for `0 < t ≤ extent` and
/// count its edge crossings. The vertical pair traces `(a, t)` instead,
/// with `extent` measuring the rise. `extent` may be any positive rational
/// (diagnostic traces need not stop at an alignment).
pub fn unfold_trace(
    tess: &Tessellation,
    a: &Offset,
    d: &DirectionPair,
    extent: &Rat,
) -> Result<UnfoldTrace> {
    if !extent.is_positive() {
        return Err(BilliardError::Other(format!(
            "trace extent must be positive, got {}",
            fmt_rat(extent)
        )));
    }
    let origin = ScaledPoint::new(a.a.clone(), Rat::zero());
    let dir = d.as_direction();
    // crossings() parameterizes by the direction vector; rescale the
    // horizontal extent (or the rise, for the vertical pair) accordingly.
    let t_max = if d.x == 0 {
        extent.clone()
    } else {
        extent / rint(d.x as i64)
    };
    let crossings = tess.crossings(&origin, &dir, &t_max)?;
    let edge_count = crossings.iter().filter(|c| !c.is_vertex_hit).count() as u64;
    let vertex_hit = crossings.iter().any(|c| c.is_vertex_hit);
    let terminal_class = crossings.last().map(|c| c.line.class);
    Ok(UnfoldTrace {
        edge_count,
        vertex_hit,
        terminal_class,
        crossings,
    })
}

/// Detect the primitive period of the orbit launched from `(a, 0)` with
/// direction pair `d`, by the unfolding route: trace to the first lattice
/// alignment `T₁`, then — if the crossing count is odd, meaning the holonomy
/// is a glide rather than a translation — re-trace the doubled extent from
/// scratch, doubling again at most once. The search never looks past
/// `4·T₁`; valid launches close within that bound, and the bound erroring
/// out loudly (rather than silently extending) is intentional.
///
/// A vertex passage, a grazing direction (riding a mirror line), or a
/// launch point that is itself a vertex yields `Singular`.
pub fn detect_period_unfolding(
    tess: &Tessellation,
    a: &Offset,
    d: &DirectionPair,
) -> Result<OrbitResult> {
    let t1 = alignment_extent(tess, d);
    for factor in [1u64, 2, 4] {
        let extent = t1 * factor;
        let trace = match unfold_trace(tess, a, d, &rint(extent as i64)) {
            Ok(trace) => trace,
            Err(
                BilliardError::GrazingAlongIncline { .. } | BilliardError::OriginIsVertex { .. },
            ) => {
                return Ok(OrbitResult::singular(None));
            }
            Err(e) => return Err(e),
        };
        if trace.vertex_hit {
            return Ok(OrbitResult::singular(None));
        }
        if trace.edge_count % 2 == 0 {
            return Ok(OrbitResult {
                status: OrbitStatus::Periodic,
                period: Some(trace.edge_count),
                extent: Some(extent),
                bounce_points: None,
                terminal_class: trace.terminal_class,
            });
        }
    }
    Err(BilliardError::SearchBoundExceeded {
        x: d.x,
        y: d.y,
        offset: fmt_rat(&a.a),
        bound: format!("{}", 4 * t1),
    })
}

// ---------------------------------------------------------------------------
// Angle reduction.
// ---------------------------------------------------------------------------

/// An exact affine map of the scaled plane, recorded when a launch
/// direction is reduced into standard range: it carries the original
/// unfolded segment onto the unfolding of the reduced pair.
#[derive(Clone, Debug)]
pub struct FrameMap {
    pub linear: Mat2,
    pub translation: (Rat, Rat),
    /// When set, the map reverses orientation along the ray: the image of
    /// a forward-traced segment is traversed backwards.
    pub reversed: bool,
}

impl FrameMap {
    pub fn identity() -> FrameMap {
        FrameMap {
            linear: Mat2::IDENTITY,
            translation: (Rat::zero(), Rat::zero()),
            reversed: false,
        }
    }

    /// A map with the given linear part that fixes the tile corner `(1, 0)`.
    fn fixing_unit(linear: Mat2, reversed: bool) -> FrameMap {
        let (cx, cy) = linear.apply_vec(&rint(1), &Rat::zero());
        FrameMap {
            linear,
            translation: (rint(1) - cx, -cy),
            reversed,
        }
    }

    pub fn apply(&self, p: &ScaledPoint) -> ScaledPoint {
        let (x, y) = self.linear.apply_vec(&p.x, &p.y);
        ScaledPoint::new(x + &self.translation.0, y + &self.translation.1)
    }

    pub fn apply_direction(&self, d: &ScaledDirection) -> ScaledDirection {
        let (dx, dy) = self.linear.apply_vec(&d.dx, &d.dy);
        ScaledDirection::new(dx, dy)
    }
}

/// Reduce a direction pair into the standard range `x < y` (or the
/// boundary pairs), together with the exact frame map conjugating the two
/// unfoldings.
///
/// Directions at or below 30° (`3y ≤ x`) rotate by +60° about `(1, 0)`;
/// directions strictly between 30° and 60° (`x/3 < y < x`) compose the
/// horizontal mirror with a −60° rotation about the same corner, which
/// reverses the traversal direction. In-range pairs get the identity.
pub fn reduce_angle(x: u64, y: u64) -> Result<(DirectionPair, FrameMap)> {
    let d = DirectionPair::new(x, y)?;
    if d.in_standard_range() {
        return Ok((d, FrameMap::identity()));
    }
    debug_assert!(x > 0);
    if 3 * y <= x {
        let g = gcd_u64(x - 3 * y, x + y);
        let reduced = DirectionPair::new((x - 3 * y) / g, (x + y) / g)?;
        Ok((
            d_assert(reduced),
            FrameMap::fixing_unit(Mat2::ROT_P60, false),
        ))
    } else {
        let g = gcd_u64(3 * y - x, x + y);
        let reduced = DirectionPair::new((3 * y - x) / g, (x + y) / g)?;
        let linear = Mat2::ROT_M60.compose(&Mat2::MIRROR_H);
        Ok((d_assert(reduced), FrameMap::fixing_unit(linear, true)))
    }
}

fn d_assert(d: DirectionPair) -> DirectionPair {
    debug_assert!(d.in_standard_range());
    d
}

// ---------------------------------------------------------------------------
// Closed-segment crossings (shared by tests and rendering).
// ---------------------------------------------------------------------------

/// All edge crossings of the closed segment from `from` to `to`, including
/// crossings at the endpoints themselves. Unlike ray tracing, which opens
/// the interval at the origin, this treats the segment as a set.
pub fn closed_segment_crossings(
    tess: &Tessellation,
    from: &ScaledPoint,
    to: &ScaledPoint,
) -> Result<Vec<EdgeCrossing>> {
    let dir = ScaledDirection::new(&to.x - &from.x, &to.y - &from.y);
    let mut all = Vec::new();
    for family in &tess.families {
        let l0 = InclineLine::value_at(family.class, &from.x, &from.y);
        if family.has_offset(&l0) {
            if let Some(kind) = tess.classify(family.class, &l0, from) {
                use crate::tessellation::CrossingKind;
                if kind != CrossingKind::Gap {
                    all.push(EdgeCrossing {
                        t: Rat::zero(),
                        point: from.clone(),
                        line: InclineLine::new(family.class, l0),
                        is_vertex_hit: kind == CrossingKind::Vertex,
                    });
                }
            }
        }
    }
    all.extend(tess.crossings(from, &dir, &Rat::one())?);
    Ok(all)
}
