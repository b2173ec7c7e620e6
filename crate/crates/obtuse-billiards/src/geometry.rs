//! Scaled-frame geometry kernel.
//!
//! The engine works in a sheared coordinate frame: one horizontal unit is `u`,
//! one vertical unit is `u·√3`. In this frame every mirror the dynamics can
//! meet — the six incline directions 0°, 30°, 60°, 90°, 120°, 150° — becomes a
//! linear map with *half-integer* entries, so all geometric predicates are
//! exact rational tests and no irrational number ever appears.
//!
//! The true-metric squared distance between two points is
//! `(Δx)² + 3·(Δy)²` (in units of u²); reflections preserve that quadratic
//! form, which the property suites verify.

use crate::rat::{is_int, rat, rint, Rat};
use num::Zero;
use std::fmt;

/// A point in scaled coordinates.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ScaledPoint {
    pub x: Rat,
    pub y: Rat,
}

impl ScaledPoint {
    pub fn new(x: Rat, y: Rat) -> Self {
        ScaledPoint { x, y }
    }

    /// Integer-coordinate convenience constructor.
    pub fn at(x: i64, y: i64) -> Self {
        ScaledPoint::new(rint(x), rint(y))
    }

    pub fn translate(&self, dx: &Rat, dy: &Rat) -> Self {
        ScaledPoint::new(&self.x + dx, &self.y + dy)
    }

    pub fn advance(&self, dir: &ScaledDirection, t: &Rat) -> Self {
        ScaledPoint::new(&self.x + t * &dir.dx, &self.y + t * &dir.dy)
    }

    /// Squared true-metric distance to `other`, in units of u².
    pub fn dist_sq(&self, other: &ScaledPoint) -> Rat {
        let dx = &self.x - &other.x;
        let dy = &self.y - &other.y;
        &dx * &dx + rint(3) * &dy * &dy
    }
}

impl fmt::Debug for ScaledPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// A direction in scaled coordinates; meaning is projective up to positive
/// scaling, but the components are kept exactly as given.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ScaledDirection {
    pub dx: Rat,
    pub dy: Rat,
}

impl ScaledDirection {
    pub fn new(dx: Rat, dy: Rat) -> Self {
        let d = ScaledDirection { dx, dy };
        debug_assert!(!d.is_zero(), "zero direction");
        d
    }

    pub fn at(dx: i64, dy: i64) -> Self {
        ScaledDirection::new(rint(dx), rint(dy))
    }

    pub fn is_zero(&self) -> bool {
        self.dx.is_zero() && self.dy.is_zero()
    }

    /// Projective equality up to *positive* scaling.
    pub fn same_ray(&self, other: &ScaledDirection) -> bool {
        // cross product zero and dot product positive
        let cross = &self.dx * &other.dy - &self.dy * &other.dx;
        if !cross.is_zero() {
            return false;
        }
        let dot = &self.dx * &other.dx + rint(3) * &self.dy * &other.dy;
        dot > rint(0)
    }
}

impl fmt::Debug for ScaledDirection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{}, {}>", self.dx, self.dy)
    }
}

/// The six mirror direction classes, named by their true angle.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum InclineClass {
    H0,
    D30,
    D60,
    V90,
    D120,
    D150,
}

pub use InclineClass::*;

impl InclineClass {
    pub const ALL: [InclineClass; 6] = [H0, D30, D60, V90, D120, D150];

    /// Slope in scaled coordinates (`None` for the vertical class).
    /// The true slope is √3 times larger.
    pub fn scaled_slope(self) -> Option<Rat> {
        match self {
            H0 => Some(rint(0)),
            D30 => Some(rat(1, 3)),
            D60 => Some(rint(1)),
            V90 => None,
            D120 => Some(rint(-1)),
            D150 => Some(rat(-1, 3)),
        }
    }

    /// Linear part of the reflection across a line of this class, as a
    /// doubled-integer matrix (see [`Mat2`]).
    pub fn reflection(self) -> Mat2 {
        // Conjugate the true reflection by diag(1, 1/√3); entries are then
        // half-integers, stored doubled.
        match self {
            H0 => Mat2::new(2, 0, 0, -2),
            D30 => Mat2::new(1, 3, 1, -1),
            D60 => Mat2::new(-1, 3, 1, 1),
            V90 => Mat2::new(-2, 0, 0, 2),
            D120 => Mat2::new(-1, -3, -1, 1),
            D150 => Mat2::new(1, -3, -1, -1),
        }
    }

    /// Degrees, for labels only.
    pub fn degrees(self) -> u32 {
        match self {
            H0 => 0,
            D30 => 30,
            D60 => 60,
            V90 => 90,
            D120 => 120,
            D150 => 150,
        }
    }

    /// Class of the image of a `self`-direction line reflected across a
    /// `mirror`-direction line (angle 2·mirror − self mod 180°).
    pub fn reflected_across(self, mirror: InclineClass) -> InclineClass {
        let deg = (360 + 2 * mirror.degrees() as i32 - self.degrees() as i32) % 180;
        InclineClass::from_degrees(deg as u32).expect("closed under reflection")
    }

    pub fn from_degrees(deg: u32) -> Option<InclineClass> {
        match deg % 180 {
            0 => Some(H0),
            30 => Some(D30),
            60 => Some(D60),
            90 => Some(V90),
            120 => Some(D120),
            150 => Some(D150),
            _ => None,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            H0 => "0",
            D30 => "30",
            D60 => "60",
            V90 => "90",
            D120 => "120",
            D150 => "150",
        }
    }
}

/// A 2×2 rational matrix with half-integer entries, stored as `2·M` in `i64`.
///
/// All reflection and (±60°/120°) rotation maps of the scaled frame have this
/// shape, which lets the folding simulation stay in plain integers for
/// direction bookkeeping.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Mat2 {
    /// Row-major entries of 2·M.
    pub twice: [[i64; 2]; 2],
}

impl Mat2 {
    pub const fn new(a: i64, b: i64, c: i64, d: i64) -> Self {
        Mat2 {
            twice: [[a, b], [c, d]],
        }
    }

    pub const IDENTITY: Mat2 = Mat2::new(2, 0, 0, 2);
    /// Mirror across a horizontal line (linear part).
    pub const MIRROR_H: Mat2 = Mat2::new(2, 0, 0, -2);
    /// Rotation by +60° (counter-clockwise) in the scaled frame.
    pub const ROT_P60: Mat2 = Mat2::new(1, -3, 1, 1);
    /// Rotation by −60° in the scaled frame.
    pub const ROT_M60: Mat2 = Mat2::new(1, 3, -1, 1);

    /// Apply to a rational vector (exact; includes the implicit /2).
    pub fn apply_vec(&self, dx: &Rat, dy: &Rat) -> (Rat, Rat) {
        let m = &self.twice;
        let ox = (rint(m[0][0]) * dx + rint(m[0][1]) * dy) / rint(2);
        let oy = (rint(m[1][0]) * dx + rint(m[1][1]) * dy) / rint(2);
        (ox, oy)
    }

    /// Apply to an integer vector, returning *twice* the image (no division).
    pub fn apply_int_doubled(&self, dx: i64, dy: i64) -> (i64, i64) {
        let m = &self.twice;
        (m[0][0] * dx + m[0][1] * dy, m[1][0] * dx + m[1][1] * dy)
    }

    /// Matrix product (self ∘ other).
    pub fn compose(&self, other: &Mat2) -> Mat2 {
        let a = &self.twice;
        let b = &other.twice;
        let mut out = [[0i64; 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                // (2A/2)·(2B/2) = (2A·2B)/4, so halve once to keep doubling.
                out[i][j] = (a[i][0] * b[0][j] + a[i][1] * b[1][j]) / 2;
            }
        }
        Mat2 { twice: out }
    }
}

/// A full line of one of the six incline classes.
///
/// `offset` is the y-intercept in scaled coordinates, except for the vertical
/// class where it is the x-intercept.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct InclineLine {
    pub class: InclineClass,
    pub offset: Rat,
}

impl InclineLine {
    pub fn new(class: InclineClass, offset: Rat) -> Self {
        InclineLine { class, offset }
    }

    /// The linear functional whose level sets are lines of `class`; a point p
    /// lies on the line iff `line_value(class, p) == offset`.
    pub fn value_at(class: InclineClass, x: &Rat, y: &Rat) -> Rat {
        match class {
            H0 => y.clone(),
            D30 => y - x / rint(3),
            D60 => y - x,
            V90 => x.clone(),
            D120 => y + x,
            D150 => y + x / rint(3),
        }
    }

    pub fn value(&self, p: &ScaledPoint) -> Rat {
        InclineLine::value_at(self.class, &p.x, &p.y)
    }

    /// The line of `class` passing through `p`.
    pub fn through(class: InclineClass, p: &ScaledPoint) -> Self {
        InclineLine::new(class, InclineLine::value_at(class, &p.x, &p.y))
    }

    pub fn contains(&self, p: &ScaledPoint) -> bool {
        self.value(p) == self.offset
    }

    /// A fixed anchor point on the line.
    pub fn anchor(&self) -> ScaledPoint {
        match self.class {
            V90 => ScaledPoint::new(self.offset.clone(), rint(0)),
            _ => ScaledPoint::new(rint(0), self.offset.clone()),
        }
    }
}

/// True-metric reflection of a point across an incline line, in scaled
/// coordinates. Affine with rational coefficients for all six classes.
pub fn reflect_point(p: &ScaledPoint, line: &InclineLine) -> ScaledPoint {
    let a = line.anchor();
    let (vx, vy) = (&p.x - &a.x, &p.y - &a.y);
    let (rx, ry) = line.class.reflection().apply_vec(&vx, &vy);
    ScaledPoint::new(&a.x + rx, &a.y + ry)
}

/// Linear part of [`reflect_point`]; involutive and form-preserving.
pub fn reflect_direction(d: &ScaledDirection, class: InclineClass) -> ScaledDirection {
    let (dx, dy) = class.reflection().apply_vec(&d.dx, &d.dy);
    ScaledDirection::new(dx, dy)
}

/// Launch angle in degrees for a direction pair (x, y): arctan(y√3/x),
/// 90 when x = 0. Display only; decisions never consult this.
pub fn angle_of(x: u64, y: u64) -> f64 {
    if x == 0 {
        90.0
    } else {
        (y as f64 * 3f64.sqrt() / x as f64).atan().to_degrees()
    }
}

/// Does `p` lie strictly between `a` and `b` on their common line (exclusive)?
/// Callers guarantee collinearity.
pub fn strictly_between(p: &ScaledPoint, a: &ScaledPoint, b: &ScaledPoint) -> bool {
    debug_assert!(
        ((&b.x - &a.x) * (&p.y - &a.y) - (&b.y - &a.y) * (&p.x - &a.x)).is_zero(),
        "not collinear"
    );
    if p == a || p == b {
        return false;
    }
    let use_x = a.x != b.x;
    let (pa, aa, ba) = if use_x {
        (&p.x, &a.x, &b.x)
    } else {
        (&p.y, &a.y, &b.y)
    };
    (pa > aa) == (pa < ba) && (pa < aa) == (pa > ba)
}

/// Is an integer-coordinate test: both coordinates of `p` integral.
pub fn both_int(p: &ScaledPoint) -> bool {
    is_int(&p.x) && is_int(&p.y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat;

    fn pt(x: i64, y: i64) -> ScaledPoint {
        ScaledPoint::at(x, y)
    }

    #[test]
    fn axis_reflection_across_vertical() {
        let line = InclineLine::new(V90, rint(1));
        assert_eq!(reflect_point(&pt(0, 0), &line), pt(2, 0));
    }

    #[test]
    fn points_on_the_mirror_are_fixed() {
        for class in InclineClass::ALL {
            let line = InclineLine::new(class, rat(1, 3));
            let p = line.anchor();
            assert_eq!(reflect_point(&p, &line), p, "{class:?}");
        }
    }

    #[test]
    fn thirty_degree_mirror_through_origin() {
        let line = InclineLine::new(D30, rint(0));
        assert_eq!(
            reflect_point(&pt(1, 0), &line),
            ScaledPoint::new(rat(1, 2), rat(1, 2))
        );
    }

    #[test]
    fn direction_reflections_match_expectations() {
        let d = |a, b| ScaledDirection::at(a, b);
        assert_eq!(reflect_direction(&d(1, 0), H0), d(1, 0));
        assert_eq!(reflect_direction(&d(0, 1), H0), d(0, -1));
        // parallel to the mirror
        assert_eq!(reflect_direction(&d(1, 1), D60), d(1, 1));
        // doubled-matrix arithmetic: (2,1) across D150
        let r = reflect_direction(&d(2, 1), D150);
        assert_eq!((r.dx, r.dy), (rat(-1, 2), rat(-3, 2)));
    }

    #[test]
    fn involution_on_a_small_grid() {
        for class in InclineClass::ALL {
            let line = InclineLine::new(class, rat(2, 3));
            for ix in -3..=3 {
                for iy in -3..=3 {
                    let p = ScaledPoint::new(rat(ix, 2), rat(iy, 3));
                    assert_eq!(reflect_point(&reflect_point(&p, &line), &line), p);
                }
            }
        }
    }

    #[test]
    fn reflection_preserves_the_scaled_form() {
        let p = ScaledPoint::new(rat(5, 7), rat(-2, 3));
        let q = ScaledPoint::new(rat(-1, 2), rat(4, 5));
        for class in InclineClass::ALL {
            let line = InclineLine::new(class, rat(-5, 3));
            let pr = reflect_point(&p, &line);
            let qr = reflect_point(&q, &line);
            assert_eq!(p.dist_sq(&q), pr.dist_sq(&qr), "{class:?}");
        }
    }

    #[test]
    fn parallel_mirrors_compose_to_a_translation() {
        for class in InclineClass::ALL {
            let l1 = InclineLine::new(class, rint(0));
            let l2 = InclineLine::new(class, rint(1));
            let p = ScaledPoint::new(rat(3, 5), rat(1, 7));
            let q = ScaledPoint::new(rat(-2, 9), rat(5, 4));
            let tp = reflect_point(&reflect_point(&p, &l1), &l2);
            let tq = reflect_point(&reflect_point(&q, &l1), &l2);
            // same displacement for every point
            assert_eq!(&tp.x - &p.x, &tq.x - &q.x, "{class:?}");
            assert_eq!(&tp.y - &p.y, &tq.y - &q.y, "{class:?}");
        }
    }

    #[test]
    fn class_reflection_table_is_consistent() {
        // reflecting a class across itself fixes it; across the vertical,
        // 30 ↔ 150 and 60 ↔ 120 swap.
        for c in InclineClass::ALL {
            assert_eq!(c.reflected_across(c), c);
        }
        assert_eq!(D30.reflected_across(V90), D150);
        assert_eq!(D120.reflected_across(V90), D60);
        assert_eq!(H0.reflected_across(D30), D60);
        assert_eq!(D150.reflected_across(D30), V90);
    }

    #[test]
    fn angle_display_values() {
        assert!((angle_of(1, 1) - 60.0).abs() < 1e-9);
        assert!((angle_of(0, 1) - 90.0).abs() < 1e-9);
        assert!((angle_of(1, 3) - 79.1066).abs() < 1e-3);
        assert!((angle_of(3, 1) - 30.0).abs() < 1e-9);
    }

    #[test]
    fn rotation_matrices_have_order_six() {
        let mut m = Mat2::IDENTITY;
        for _ in 0..6 {
            m = m.compose(&Mat2::ROT_P60);
        }
        assert_eq!(m, Mat2::IDENTITY);
        let once = Mat2::ROT_P60.compose(&Mat2::ROT_M60);
        assert_eq!(once, Mat2::IDENTITY);
    }
}
