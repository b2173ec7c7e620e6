//! Structural cross-checks between independent routes: the geometric and
//! analytic alignment tests, the contact enumeration against the counting
//! formulas, the frame map behind angle reduction, and the folded orbit
//! against the polygon boundary.

use num::Zero;
use obtuse_billiards::fence::{
    barrier_count_at, contact_points, edge_count_options, kite_barrier_count_at,
    multiplicity_and_spacing,
};
use obtuse_billiards::geometry::{reflect_direction, ScaledDirection, ScaledPoint};
use obtuse_billiards::orbit::{
    alignment_extent, default_max_bounces, first_alignment, first_alignment_brute, launch,
    reduce_angle, unfold_trace, DirectionPair, Offset, OrbitStatus,
};
use obtuse_billiards::rat::{gcd_u64, rat, rint, Rat};
use obtuse_billiards::sweep::alignment_dual_check;
use obtuse_billiards::tessellation::{ShapeId, Tessellation};

const OBTUSE: [ShapeId; 3] = [ShapeId::Triangle120, ShapeId::Rhombus60, ShapeId::Kite];

fn obtuse_pairs(max_sum: u64) -> Vec<(u64, u64)> {
    let mut pairs = Vec::new();
    for x in 1..max_sum {
        for y in (x + 1)..=(max_sum - x) {
            if gcd_u64(x, y) == 1 {
                pairs.push((x, y));
            }
        }
    }
    pairs.push((1, 1));
    pairs
}

/// A small deterministic offset grid avoiding 0 and the interval ends.
fn offsets(n: i64) -> Vec<Offset> {
    (0..n)
        .map(|k| Offset::new(rat(2 * k + 1, 2 * n + 1)).expect("interior"))
        .collect()
}

/// The geometric alignment route (translation symmetry of the
/// tessellation) and the analytic route (periodicity of the contact
/// sequence) agree on every tuple — including extents that are not
/// multiples of the alignment extent, where both must say "no".
#[test]
fn alignment_routes_agree_on_aligned_and_unaligned_extents() {
    let mut tuples = 0u64;
    for shape in OBTUSE {
        let tess = Tessellation::build(shape);
        for &(x, y) in &obtuse_pairs(9) {
            let d = DirectionPair::new(x, y).unwrap();
            for a in offsets(3) {
                for t in 1..=12u64 {
                    let (geometric, analytic) = alignment_dual_check(&tess, &a, &d, t);
                    assert_eq!(
                        geometric, analytic,
                        "{shape} ({x}, {y}) offset {:?} extent {t}",
                        a
                    );
                    tuples += 1;
                }
            }
        }
        // The detected alignment extent itself must pass both routes.
        for &(x, y) in &obtuse_pairs(9) {
            let d = DirectionPair::new(x, y).unwrap();
            let t1 = alignment_extent(&tess, &d);
            let a = Offset::new(rat(1, 5)).unwrap();
            let (geometric, analytic) = alignment_dual_check(&tess, &a, &d, t1);
            assert!(geometric && analytic, "{shape} ({x}, {y}) extent {t1}");
        }
    }
    assert!(tuples >= 1000, "coverage: {tuples} tuples");
}

/// The closed-form first alignment agrees with the brute-force search
/// over the whole standard range.
#[test]
fn first_alignment_matches_brute_force() {
    for &(x, y) in &obtuse_pairs(40) {
        assert_eq!(
            first_alignment(x, y),
            first_alignment_brute(x, y),
            "({x}, {y})"
        );
    }
}

/// The enumerated contact profile reproduces the counting formulas on
/// every probed offset: the barrier count, the multiplicity, and the
/// full edge-count decomposition `N = strip_weight·y + m·b`, which in
/// turn matches both the measured crossing count and the branch table.
#[test]
fn contact_enumeration_matches_the_counting_formulas() {
    for shape in OBTUSE {
        let tess = Tessellation::build(shape);
        let strip_weight = tess.strip_weight.expect("fence shape") as u64;
        for &(x, y) in &obtuse_pairs(10) {
            let d = DirectionPair::new(x, y).unwrap();
            let (m, _) = multiplicity_and_spacing(x, y);
            let table: Vec<u64> = edge_count_options(shape, x, y)
                .into_iter()
                .map(|(n, _)| n)
                .collect();
            for a in offsets(6) {
                let profile = contact_points(&tess, &a, &d, 2 * x);
                let b = match shape {
                    ShapeId::Kite => kite_barrier_count_at(&a, x, y),
                    _ => barrier_count_at(&a, x, y),
                };
                assert_eq!(profile.b, b, "{shape} ({x}, {y}) barrier count");
                assert_eq!(profile.m, m, "{shape} ({x}, {y}) multiplicity");
                assert_eq!(
                    profile.n,
                    strip_weight * y + m * b,
                    "{shape} ({x}, {y}) decomposition"
                );
                assert!(
                    table.contains(&profile.n),
                    "{shape} ({x}, {y}): N = {} outside table {table:?}",
                    profile.n
                );
                match unfold_trace(&tess, &a, &d, &rint(2 * x as i64)) {
                    Ok(trace) if !trace.vertex_hit => {
                        assert_eq!(
                            trace.edge_count, profile.n,
                            "{shape} ({x}, {y}): measured crossings"
                        );
                    }
                    _ => {} // singular ray: no clean crossing count
                }
            }
        }
    }
}

/// The frame map returned by angle reduction is an exact conjugation: it
/// is a scaled-metric isometry carrying the original ray onto the ray of
/// the reduced pair (reversed when recorded as such).
#[test]
fn angle_reduction_frame_map_is_exact() {
    let out_of_range: Vec<(u64, u64)> = vec![
        (3, 1),
        (2, 1),
        (5, 2),
        (5, 1),
        (7, 2),
        (7, 3),
        (8, 3),
        (9, 2),
        (11, 3),
        (10, 3),
        (6, 1),
        (13, 4),
    ];
    for &(x, y) in &out_of_range {
        let (reduced, frame) = reduce_angle(x, y).unwrap();
        assert!(reduced.in_standard_range(), "({x}, {y}) → {reduced}");

        // Isometry: squared lengths are preserved exactly.
        let v = ScaledDirection::at(x as i64, y as i64);
        let w = frame.apply_direction(&v);
        let norm = |u: &ScaledDirection| &u.dx * &u.dx + rint(3) * &u.dy * &u.dy;
        assert_eq!(norm(&w), norm(&v), "({x}, {y}) length");

        // Conjugation: the image of the original direction is the reduced
        // direction, up to the recorded orientation reversal.
        let target = reduced.as_direction();
        let image = if frame.reversed {
            ScaledDirection::new(-w.dx.clone(), -w.dy.clone())
        } else {
            w.clone()
        };
        assert!(
            image.same_ray(&target),
            "({x}, {y}): image ({}, {}) vs reduced {reduced}",
            w.dx,
            w.dy
        );

        // Affine exactness on a sample of ray points: mapping a point of
        // the original ray lands on the reduced launch ray.
        let a = rat(1, 7);
        let start = frame.apply(&ScaledPoint::new(a.clone(), Rat::zero()));
        for k in 1..=5i64 {
            let t = rat(k, 3);
            let p = ScaledPoint::new(&a + &t * rint(x as i64), &t * rint(y as i64));
            let q = frame.apply(&p);
            let along = ScaledDirection::new(&q.x - &start.x, &q.y - &start.y);
            let back = if frame.reversed {
                ScaledDirection::new(-along.dx.clone(), -along.dy.clone())
            } else {
                along
            };
            assert!(
                back.same_ray(&target),
                "({x}, {y}) t = {t}: ray image off course"
            );
        }
    }

    // In-range pairs get the identity map.
    let (d, frame) = reduce_angle(2, 3).unwrap();
    assert_eq!((d.x(), d.y()), (2, 3));
    let p = ScaledPoint::new(rat(5, 7), rat(-2, 9));
    assert_eq!(frame.apply(&p), p);
    assert!(!frame.reversed);
}

/// Every hexagon tessellation line belongs to the full six-family
/// arrangement: the hexagon uses exactly the three families whose
/// (start, step) data match the triangle's.
#[test]
fn hexagon_lines_are_a_sub_arrangement() {
    let hex = Tessellation::build(ShapeId::Hexagon);
    let tri = Tessellation::build(ShapeId::Triangle120);
    assert_eq!(hex.families.len(), 3);
    for family in &hex.families {
        let counterpart = tri
            .family(family.class)
            .unwrap_or_else(|| panic!("triangle lacks {:?}", family.class));
        assert_eq!(family.start, counterpart.start, "{:?}", family.class);
        assert_eq!(family.step, counterpart.step, "{:?}", family.class);
    }
}

/// Folded orbits are geometrically valid: every strike lies on the
/// polygon boundary, and each bounce obeys the reflection law across the
/// struck edge's incline class.
#[test]
fn folded_orbits_strike_the_boundary_and_obey_the_reflection_law() {
    let cases: Vec<(ShapeId, i64, i64, u64, u64)> = vec![
        (ShapeId::Triangle120, 0, 2, 1, 1),
        (ShapeId::Triangle120, 1, 2, 0, 1),
        (ShapeId::Triangle120, 1, 2, 1, 1),
        (ShapeId::Triangle120, 1, 4, 3, 5),
        (ShapeId::Triangle120, 1, 5, 2, 3),
        (ShapeId::Rhombus60, 1, 2, 1, 1),
        (ShapeId::Rhombus60, 1, 2, 0, 1),
        (ShapeId::Rhombus60, 1, 23, 2, 5),
        (ShapeId::Kite, -1, 4, 0, 1),
        (ShapeId::Kite, -1, 7, 1, 2),
        (ShapeId::Hexagon, 1, 25, 3, 2),
        (ShapeId::Hexagon, 1, 25, 4, 3),
        (ShapeId::Hexagon, 4, 5, 3, 2),
    ];
    for (shape, an, ad, x, y) in cases {
        let tess = Tessellation::build(shape);
        let a = Offset::new(rat(an, ad)).unwrap();
        let d = DirectionPair::new(x, y).unwrap();
        let result = launch(&tess, &a, &d, default_max_bounces(&d)).unwrap();
        assert_eq!(
            result.status,
            OrbitStatus::Periodic,
            "{shape} ({x}, {y}) at {an}/{ad}"
        );
        let points = result.bounce_points.as_ref().expect("periodic orbit");
        let edges = tess.boundary_edges();

        let on_edge = |p: &ScaledPoint| {
            edges.iter().position(|e| {
                if !e.line.contains(p) {
                    return false;
                }
                // Within the closed segment [a, b] of the edge.
                let between = |lo: &Rat, v: &Rat, hi: &Rat| (lo.min(hi) <= v) && (v <= lo.max(hi));
                between(&e.a.x, &p.x, &e.b.x) && between(&e.a.y, &p.y, &e.b.y)
            })
        };
        for p in points {
            assert!(
                on_edge(p).is_some(),
                "{shape} ({x}, {y}): strike off boundary"
            );
        }

        // Reflection law at each interior bounce of the closed polyline:
        // prepend the launch point (it equals the final entry) and walk
        // the triples. Skip strikes that sit on two edges at once (the
        // polygon corners never host a periodic strike).
        let mut walk: Vec<&ScaledPoint> = Vec::with_capacity(points.len() + 1);
        walk.push(points.last().unwrap());
        walk.extend(points.iter());
        for window in walk.windows(3) {
            let (prev, here, next) = (window[0], window[1], window[2]);
            let v_in = ScaledDirection::new(&here.x - &prev.x, &here.y - &prev.y);
            let v_out = ScaledDirection::new(&next.x - &here.x, &next.y - &here.y);
            assert!(!v_in.is_zero() && !v_out.is_zero(), "degenerate segment");
            let edge = &edges[on_edge(here).unwrap()];
            let bounced = reflect_direction(&v_in, edge.line.class);
            assert!(
                bounced.same_ray(&v_out),
                "{shape} ({x}, {y}): reflection law broken at ({}, {})",
                here.x,
                here.y
            );
        }
    }
}
