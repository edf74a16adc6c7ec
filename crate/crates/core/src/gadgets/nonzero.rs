//! Nonzeroness of an integer as solvability of `m = (2r + 1)(3s + 1)`.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::GadgetError;
use crate::ring::Ring;

/// `(r, s)` with `(2r + 1)(3s + 1) = m`.
///
/// Writes `m = 2^a * q` with `q` odd and picks the sign `e` with
/// `e * 2^a = 1 (mod 3)`; then `3s + 1 = e * 2^a` and `2r + 1 = e * q`.
pub fn nonzero_witness(m: &BigInt) -> Result<(BigInt, BigInt), GadgetError> {
    if m.is_zero() {
        return Err(GadgetError::Zero("m"));
    }
    let a = m.trailing_zeros().expect("nonzero");
    let q = m >> a;
    let sign = if a.is_multiple_of(2) { BigInt::one() } else { -BigInt::one() };
    let s = (&sign * (BigInt::one() << a) - 1) / 3;
    let r = (&sign * &q - 1) / 2;
    if tung_product(&r, &s) != *m {
        return Err(GadgetError::Internal("nonzero witness does not reproduce m"));
    }
    Ok((r, s))
}

/// `(2r + 1)(3s + 1)`.
pub fn tung_product<R: Ring>(r: &R, s: &R) -> R {
    let one = r.pow_u32(0);
    let two_r1 = r.add_ref(r).add_ref(&one);
    let three_s1 = s.add_ref(s).add_ref(s).add_ref(&one);
    two_r1.mul_ref(&three_s1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::{FieldD, QuadInt};

    fn big(v: i64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn worked_cases() {
        assert_eq!(nonzero_witness(&big(6)).unwrap(), (big(-2), big(-1)));
        assert_eq!(nonzero_witness(&big(1)).unwrap(), (big(0), big(0)));
        assert_eq!(nonzero_witness(&big(-5)).unwrap(), (big(-3), big(0)));
        assert_eq!(nonzero_witness(&big(0)), Err(GadgetError::Zero("m")));
    }

    #[test]
    fn all_small_nonzero_integers() {
        for m in (-1000i64..=1000).filter(|&m| m != 0) {
            let (r, s) = nonzero_witness(&big(m)).unwrap();
            assert_eq!(tung_product(&r, &s), big(m));
        }
    }

    #[test]
    fn huge_power_of_two() {
        let m = -(BigInt::one() << 301u32) * 7;
        let (r, s) = nonzero_witness(&m).unwrap();
        assert_eq!(tung_product(&r, &s), m);
    }

    #[test]
    fn product_never_vanishes_on_gaussian_box() {
        let f = FieldD::GAUSSIAN;
        for r in QuadInt::enumerate_box(f, 3) {
            for s in QuadInt::enumerate_box(f, 3) {
                assert!(!tung_product(&r, &s).is_zero());
            }
        }
    }
}
