//! Integrality of quadratic integers through a single rationality test.
//!
//! For `x_1..x_n` in `O_K` and `y = 2 * prod(3x_k + 1)`, the number
//! `y + sum x_k / y^k` is rational exactly when every `x_k` is a rational
//! integer. The factor `3x + 1` never vanishes on `O_K` and its norm
//! dominates the norm of `x`, which bounds the surd part of the tail sum
//! below the smallest nonzero surd part an algebraic integer can have.

use alloc::format;
use alloc::vec::Vec;

use crate::circuit::{Circuit, CircuitBuilder, NodeId};
use crate::quad::{FieldD, QuadError, QuadInt, QuadRat};
use crate::ring::Ring;

use super::GadgetError;

/// `3x + 1`.
pub fn three_x_plus_one<R: Ring>(x: &R) -> R {
    x.add_ref(x).add_ref(x).add_ref(&x.pow_u32(0))
}

/// `2 * prod(3x_k + 1)` on node handles.
pub fn y_node(b: &mut CircuitBuilder, zs: &[NodeId]) -> NodeId {
    let factors: Vec<NodeId> = zs
        .iter()
        .map(|&z| {
            let z3 = b.scale(3, z);
            b.offset(z3, 1)
        })
        .collect();
    let prod = b.product(&factors);
    b.scale(2, prod)
}

/// Circuit for `2 * prod_{k=1..n} (3z_k + 1)` over variables `z1..zn`.
pub fn build_y(n: usize) -> Circuit {
    let mut b = CircuitBuilder::new();
    let zs: Vec<NodeId> = (1..=n).map(|k| b.named(&format!("z{k}"))).collect();
    let out = y_node(&mut b, &zs);
    b.finish(out)
}

/// `scale * prod(3x_k + 1)` in `O_K`.
fn y_value(field: FieldD, scale: &QuadInt, xs: &[QuadInt]) -> Result<QuadInt, QuadError> {
    let mut y = scale.clone();
    for x in xs {
        if x.field() != field {
            return Err(QuadError::FieldMismatch {
                left: field.d(),
                right: x.field().d(),
            });
        }
        y = y.checked_mul(&three_x_plus_one(x))?;
    }
    Ok(y)
}

/// `sum_k x_k / y^k` in `K`.
pub fn tail_sum(y: &QuadInt, xs: &[QuadInt]) -> Result<QuadRat, QuadError> {
    let field = y.field();
    let mut acc = QuadRat::from_int(field, 0);
    let mut y_pow = QuadInt::one(field);
    for x in xs {
        y_pow = y_pow.checked_mul(y)?;
        acc = acc.checked_add(&x.to_rat().checked_div(&y_pow.to_rat())?)?;
    }
    Ok(acc)
}

/// `y` and the tail sum `Z = sum x_k / y^k` for `y = 2 * prod(3x_k + 1)`.
pub fn thm12_parts(field: FieldD, xs: &[QuadInt]) -> Result<(QuadInt, QuadRat), QuadError> {
    let y = y_value(field, &QuadInt::from_int(field, 2), xs)?;
    let z = tail_sum(&y, xs)?;
    Ok((y, z))
}

/// `y + sum x_k / y^k`.
pub fn thm12_value(field: FieldD, xs: &[QuadInt]) -> Result<QuadRat, QuadError> {
    let (y, z) = thm12_parts(field, xs)?;
    y.to_rat().checked_add(&z)
}

/// Whether `y + sum x_k / y^k` is rational.
pub fn thm12_criterion(field: FieldD, xs: &[QuadInt]) -> Result<bool, QuadError> {
    Ok(thm12_value(field, xs)?.is_rational())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Lemma22Outcome {
    /// `z + sum x_k / y^k` is not rational.
    HypothesisFails,
    /// The hypothesis holds and `z` is a rational integer.
    Holds,
    /// The hypothesis holds but `z` is not rational; never expected.
    Violated,
}

/// With `y = 2 * x0 * prod(3x_k + 1)`: if `z + sum x_k / y^k` is rational,
/// is `z` a rational integer?
pub fn lemma22_check(
    x0: &QuadInt,
    xs: &[QuadInt],
    z: &QuadInt,
) -> Result<Lemma22Outcome, GadgetError> {
    if x0.is_zero() {
        return Err(GadgetError::Zero("x0"));
    }
    let field = x0.field();
    let y = y_value(field, &x0.scale(&2.into()), xs)?;
    let total = z.to_rat().checked_add(&tail_sum(&y, xs)?)?;
    Ok(if !total.is_rational() {
        Lemma22Outcome::HypothesisFails
    } else if z.as_integer().is_some() {
        Lemma22Outcome::Holds
    } else {
        Lemma22Outcome::Violated
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::VarName;
    use alloc::collections::BTreeMap;
    use num_bigint::BigInt;
    use num_rational::BigRational;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn y_circuit_values() {
        let eval = |zs: &[i64]| {
            let c = build_y(zs.len());
            let env: BTreeMap<VarName, BigInt> = zs
                .iter()
                .enumerate()
                .map(|(k, &z)| (VarName::new(format!("z{}", k + 1)).unwrap(), BigInt::from(z)))
                .collect();
            c.eval((), &env).unwrap()
        };
        assert_eq!(eval(&[-1]), BigInt::from(-4));
        assert_eq!(eval(&[1, 1]), BigInt::from(32));
        assert_eq!(eval(&[0; 10]), BigInt::from(2));
    }

    #[test]
    fn gaussian_examples() {
        let f = FieldD::GAUSSIAN;
        let v = thm12_value(f, &[QuadInt::one(f)]).unwrap();
        assert_eq!(v, QuadRat::new(f, rat(65, 8), rat(0, 1)));
        let i = QuadInt::sqrt_minus_d(f);
        let v = thm12_value(f, &[i]).unwrap();
        assert_eq!(v, QuadRat::new(f, rat(43, 20), rat(121, 20)));
        assert!(!v.is_rational());
    }

    #[test]
    fn eisenstein_unit_is_rejected() {
        let f = FieldD::new(3).unwrap();
        let omega = QuadInt::from_doubled(f, (-1).into(), 1.into()).unwrap();
        assert!(!thm12_criterion(f, &[omega]).unwrap());
    }

    #[test]
    fn lemma22_examples() {
        let f = FieldD::GAUSSIAN;
        let one = QuadInt::one(f);
        let zero = QuadInt::zero(f);
        let out = lemma22_check(&one, std::slice::from_ref(&zero), &QuadInt::from_int(f, 3)).unwrap();
        assert_eq!(out, Lemma22Outcome::Holds);
        let out = lemma22_check(&one, std::slice::from_ref(&zero), &QuadInt::sqrt_minus_d(f)).unwrap();
        assert_eq!(out, Lemma22Outcome::HypothesisFails);
        assert_eq!(lemma22_check(&zero, &[], &one), Err(GadgetError::Zero("x0")));
    }
}
