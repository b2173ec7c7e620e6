//! Exact rational scalars.
//!
//! Every quantity the engine reasons about — coordinates, offsets, ray
//! parameters, fence values — is an arbitrary-precision rational. `BigRational`
//! already guarantees the invariants we need (lowest terms, positive
//! denominator), so this module only adds the small constructors and the
//! mod-2 / floor helpers the rest of the crate leans on.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{Signed, Zero};

/// The one scalar type of the engine. Always in lowest terms, denominator > 0.
pub type Rat = BigRational;

/// Shorthand for an integer-valued rational.
pub fn rint(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Shorthand for `n/d`. Panics on `d == 0`.
pub fn rat(n: i64, d: i64) -> Rat {
    assert!(d != 0, "zero denominator");
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Floor of a rational as a `BigInt`.
pub fn floor_int(r: &Rat) -> BigInt {
    r.floor().to_integer()
}

/// True iff `r` is an integer.
#[inline]
pub fn is_int(r: &Rat) -> bool {
    r.is_integer()
}

/// True iff `r` is an even integer.
pub fn is_even_int(r: &Rat) -> bool {
    r.is_integer() && (r.to_integer() % 2) == BigInt::zero()
}

/// Reduce `r` into the half-open window `[0, m)` by subtracting multiples of `m`.
pub fn rem_mod(r: &Rat, m: &Rat) -> Rat {
    debug_assert!(m.is_positive());
    let q = (r / m).floor();
    let out = r - q * m;
    debug_assert!(!out.is_negative() && &out < m);
    out
}

/// Fence reduction: `r` mod 2 into `[0, 2)`.
pub fn mod2(r: &Rat) -> Rat {
    rem_mod(r, &rint(2))
}

/// Render as `p/q` (or a bare integer when q = 1). Exact; never a float.
pub fn fmt_rat(r: &Rat) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parse `p/q` or a bare integer. Inverse of [`fmt_rat`].
pub fn parse_rat(s: &str) -> Option<Rat> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                None
            } else {
                Some(Rat::new(n, d))
            }
        }
        None => {
            let n: BigInt = s.parse().ok()?;
            Some(Rat::from_integer(n))
        }
    }
}

/// Approximate value as `f64`, for display only (angles, SVG coordinates).
pub fn to_f64(r: &Rat) -> f64 {
    let n = r.numer();
    let d = r.denom();
    // Good enough for display; exact code paths never call this.
    let nf = n.to_string().parse::<f64>().unwrap_or(f64::NAN);
    let df = d.to_string().parse::<f64>().unwrap_or(f64::NAN);
    nf / df
}

/// gcd over u64, with gcd(0, n) = n.
pub fn gcd_u64(a: u64, b: u64) -> u64 {
    num::integer::gcd(a, b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mod2_wraps_into_window() {
        assert_eq!(mod2(&rat(7, 2)), rat(3, 2));
        assert_eq!(mod2(&rat(-1, 2)), rat(3, 2));
        assert_eq!(mod2(&rint(4)), rint(0));
        assert_eq!(mod2(&rat(-7, 3)), rat(5, 3));
    }

    #[test]
    fn parse_and_format_round_trip() {
        for s in ["3/4", "-3/4", "0", "17", "-5/3"] {
            let r = parse_rat(s).unwrap();
            assert_eq!(fmt_rat(&r), s);
        }
        assert_eq!(parse_rat("6/4").unwrap(), rat(3, 2));
        assert!(parse_rat("1/0").is_none());
        assert!(parse_rat("x").is_none());
    }

    #[test]
    fn floor_of_negatives_rounds_down() {
        assert_eq!(floor_int(&rat(-1, 2)), BigInt::from(-1));
        assert_eq!(floor_int(&rat(5, 2)), BigInt::from(2));
    }

    #[test]
    fn evenness_test() {
        assert!(is_even_int(&rint(-4)));
        assert!(!is_even_int(&rint(3)));
        assert!(!is_even_int(&rat(4, 3)));
    }
}
