//! Property tests of the exact geometric kernel: reflections across the
//! six incline classes, the scaled metric, lattice closure, and the
//! composition laws the unfolding construction rests on.

use num::Zero;
use obtuse_billiards::geometry::{
    reflect_direction, reflect_point, InclineClass, InclineLine, Mat2, ScaledDirection, ScaledPoint,
};
use obtuse_billiards::rat::{rat, rint, Rat};
use proptest::prelude::*;

fn arb_rat() -> impl Strategy<Value = Rat> {
    (-3000i64..3000, 1i64..60).prop_map(|(n, d)| rat(n, d))
}

fn arb_point() -> impl Strategy<Value = ScaledPoint> {
    (arb_rat(), arb_rat()).prop_map(|(x, y)| ScaledPoint::new(x, y))
}

fn arb_class() -> impl Strategy<Value = InclineClass> {
    prop::sample::select(InclineClass::ALL.to_vec())
}

fn arb_line() -> impl Strategy<Value = InclineLine> {
    (arb_class(), arb_rat()).prop_map(|(class, offset)| InclineLine::new(class, offset))
}

fn arb_direction() -> impl Strategy<Value = ScaledDirection> {
    (arb_rat(), arb_rat())
        .prop_filter("nonzero", |(dx, dy)| !dx.is_zero() || !dy.is_zero())
        .prop_map(|(dx, dy)| ScaledDirection::new(dx, dy))
}

proptest! {
    /// Reflecting a point twice across the same line is the identity.
    #[test]
    fn reflection_is_involutive_on_points(p in arb_point(), line in arb_line()) {
        let twice = reflect_point(&reflect_point(&p, &line), &line);
        prop_assert_eq!(twice, p);
    }

    /// Reflecting a direction twice across the same class is the identity.
    #[test]
    fn reflection_is_involutive_on_directions(d in arb_direction(), class in arb_class()) {
        let twice = reflect_direction(&reflect_direction(&d, class), class);
        prop_assert_eq!(&twice.dx, &d.dx);
        prop_assert_eq!(&twice.dy, &d.dy);
    }

    /// Reflections are isometries of the scaled metric
    /// `d² = (Δx)² + 3(Δy)²` (the true squared distance).
    #[test]
    fn reflection_preserves_scaled_metric(
        p in arb_point(),
        q in arb_point(),
        line in arb_line(),
    ) {
        let (rp, rq) = (reflect_point(&p, &line), reflect_point(&q, &line));
        prop_assert_eq!(rp.dist_sq(&rq), p.dist_sq(&q));
    }

    /// A reflection negates the class functional around the line's
    /// offset: `value(reflected) = 2·offset − value(p)`. Points on the
    /// line itself are exactly fixed.
    #[test]
    fn reflection_negates_the_class_functional(p in arb_point(), line in arb_line()) {
        let r = reflect_point(&p, &line);
        let before = InclineLine::value_at(line.class, &p.x, &p.y);
        let after = InclineLine::value_at(line.class, &r.x, &r.y);
        prop_assert_eq!(after, rint(2) * &line.offset - before);
        if line.contains(&p) {
            prop_assert_eq!(reflect_point(&p, &line), p);
        }
    }

    /// The doubled reflection matrices and the two rotations preserve the
    /// even-sum integer lattice: integer vectors with `p + q` even map to
    /// integer vectors with even sum.
    #[test]
    fn symmetries_preserve_the_even_sum_lattice(
        p in -500i64..500,
        h in -250i64..250,
        class in arb_class(),
        rot in prop::sample::select(vec![Mat2::ROT_P60, Mat2::ROT_M60]),
    ) {
        // (p, q) with p + q even: take q = p - 2h.
        let q = p - 2 * h;
        for m in [class.reflection(), rot] {
            let (dx2, dy2) = m.apply_int_doubled(p, q);
            prop_assert_eq!(dx2 % 2, 0, "image x stays integral");
            prop_assert_eq!(dy2 % 2, 0, "image y stays integral");
            prop_assert_eq!((dx2 / 2 + dy2 / 2) % 2, 0, "image sum stays even");
        }
    }

    /// Composing reflections across two parallel lines is a translation:
    /// the displacement is independent of the point, and the class
    /// functional advances by twice the offset gap.
    #[test]
    fn parallel_reflections_compose_to_a_translation(
        p in arb_point(),
        q in arb_point(),
        class in arb_class(),
        c1 in arb_rat(),
        c2 in arb_rat(),
    ) {
        let l1 = InclineLine::new(class, c1.clone());
        let l2 = InclineLine::new(class, c2.clone());
        let shift = |v: &ScaledPoint| reflect_point(&reflect_point(v, &l1), &l2);
        let (sp, sq) = (shift(&p), shift(&q));
        prop_assert_eq!(&sp.x - &p.x, &sq.x - &q.x, "x-displacement is constant");
        prop_assert_eq!(&sp.y - &p.y, &sq.y - &q.y, "y-displacement is constant");
        let gain = InclineLine::value_at(class, &sp.x, &sp.y)
            - InclineLine::value_at(class, &p.x, &p.y);
        prop_assert_eq!(gain, rint(2) * (c2 - c1));
    }

    /// Rational arithmetic stays exact through a reflection chain: a
    /// point pushed through several reflections and back retraces to the
    /// start bit for bit.
    #[test]
    fn reflection_chains_are_exactly_reversible(
        p in arb_point(),
        lines in prop::collection::vec(arb_line(), 1..8),
    ) {
        let mut v = p.clone();
        for line in &lines {
            v = reflect_point(&v, line);
        }
        for line in lines.iter().rev() {
            v = reflect_point(&v, line);
        }
        prop_assert_eq!(v, p);
    }
}

#[test]
fn rotation_orders_are_exact() {
    let mut m = Mat2::IDENTITY;
    for _ in 0..6 {
        m = m.compose(&Mat2::ROT_P60);
    }
    assert_eq!(
        m.twice,
        Mat2::IDENTITY.twice,
        "a sixth of a turn, six times"
    );
    assert_eq!(
        Mat2::ROT_P60.compose(&Mat2::ROT_M60).twice,
        Mat2::IDENTITY.twice
    );
}

#[test]
fn reflections_square_to_the_identity_matrix() {
    for class in InclineClass::ALL {
        let m = class.reflection();
        assert_eq!(m.compose(&m).twice, Mat2::IDENTITY.twice, "{class:?}");
    }
}
