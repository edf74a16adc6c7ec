//! Relation combining: for `A1 != A2` and `S != 0` in `O_K`, the three
//! conditions "A1 is a square", "A2 is a square" and "S divides T" hold
//! together exactly when some `m` in `O_K` makes
//!
//! ```text
//! f(A1, A2, S, T, m) = (T - mS)^4 - 2(A1 + A2) S^2 (T - mS)^2 + (A1 - A2)^2 S^4
//! ```
//!
//! vanish. Dividing by `S^4`, `f/S^4 = ((T/S - m)^2 - (A1 + A2))^2 - 4 A1 A2`.

use crate::circuit::{Circuit, CircuitBuilder, NodeId};
use crate::quad::QuadInt;
use crate::ring::Ring;

use super::GadgetError;

pub fn relation_f<R: Ring>(a1: &R, a2: &R, s: &R, t: &R, m: &R) -> R {
    let u = t.sub_ref(&m.mul_ref(s));
    let u2 = u.mul_ref(&u);
    let s2 = s.mul_ref(s);
    let sum = a1.add_ref(a2);
    let diff = a1.sub_ref(a2);
    let middle = sum.add_ref(&sum).mul_ref(&s2).mul_ref(&u2);
    u2.mul_ref(&u2)
        .sub_ref(&middle)
        .add_ref(&diff.mul_ref(&diff).mul_ref(&s2.mul_ref(&s2)))
}

pub fn relation_node(
    b: &mut CircuitBuilder,
    a1: NodeId,
    a2: NodeId,
    s: NodeId,
    t: NodeId,
    m: NodeId,
) -> NodeId {
    let ms = b.mul(m, s);
    let u = b.sub(t, ms);
    let u4 = b.pow(u, 4);
    let u2 = b.pow(u, 2);
    let s2 = b.pow(s, 2);
    let s4 = b.pow(s, 4);
    let sum = b.add(a1, a2);
    let sum2 = b.scale(2, sum);
    let mid = b.product(&[sum2, s2, u2]);
    let diff = b.sub(a1, a2);
    let diff2 = b.pow(diff, 2);
    let last = b.mul(diff2, s4);
    let head = b.sub(u4, mid);
    b.add(head, last)
}

/// `f` as a circuit in the variables `A1, A2, S, T, m`.
pub fn relation_circuit() -> Circuit {
    let mut b = CircuitBuilder::new();
    let [a1, a2, s, t, m] = ["A1", "A2", "S", "T", "m"].map(|n| b.named(n));
    let out = relation_node(&mut b, a1, a2, s, t, m);
    b.finish(out)
}

/// `m = T/S - alpha1 - alpha2`, which makes `f(alpha1^2, alpha2^2, S, T, m)` vanish.
pub fn relation_m_witness(
    alpha1: &QuadInt,
    alpha2: &QuadInt,
    s: &QuadInt,
    t: &QuadInt,
) -> Result<QuadInt, GadgetError> {
    if s.is_zero() {
        return Err(GadgetError::Zero("S"));
    }
    let q = s.divides(t)?.ok_or(GadgetError::NotDivisible)?;
    let m = q.checked_sub(alpha1)?.checked_sub(alpha2)?;
    let a1 = alpha1 * alpha1;
    let a2 = alpha2 * alpha2;
    if !relation_f(&a1, &a2, s, t, &m).is_zero() {
        return Err(GadgetError::Internal("witness m does not annihilate f"));
    }
    Ok(m)
}

/// Certificate extracted from a zero of `f`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationDecode {
    /// Square root of `A1`.
    pub root1: QuadInt,
    /// Square root of `A2`.
    pub root2: QuadInt,
    /// `T/S`.
    pub quotient: QuadInt,
}

/// Recovers square roots of `A1`, `A2` and the quotient `T/S` from a zero of `f`.
///
/// With `x = T/S - m` and `y = (A1 - A2)/x`, the roots are `(x + y)/2` and
/// `(x - y)/2`. Integrality of each step is guaranteed once `f = 0`, so a
/// failure there is reported as [`GadgetError::Internal`].
pub fn relation_decode(
    a1: &QuadInt,
    a2: &QuadInt,
    s: &QuadInt,
    t: &QuadInt,
    m: &QuadInt,
) -> Result<RelationDecode, GadgetError> {
    if s.is_zero() {
        return Err(GadgetError::Zero("S"));
    }
    if a1 == a2 {
        return Err(GadgetError::EqualArguments);
    }
    for v in [a2, s, t, m] {
        a1.checked_add(v)?;
    }
    if !relation_f(a1, a2, s, t, m).is_zero() {
        return Err(GadgetError::RelationNonzero);
    }
    let quotient = s
        .divides(t)?
        .ok_or(GadgetError::Internal("T/S is not integral at a zero of f"))?;
    let x = &quotient - m;
    let y = x
        .divides(&(a1 - a2))?
        .ok_or(GadgetError::Internal("(A1 - A2)/x is not integral"))?;
    let field = a1.field();
    let root1 = QuadInt::from_int(field, 2)
        .divides(&(&x + &y))?
        .ok_or(GadgetError::Internal("(x + y)/2 is not integral"))?;
    let root2 = &root1 - &y;
    if &(&root1 * &root1) != a1 || &(&root2 * &root2) != a2 {
        return Err(GadgetError::Internal("decoded roots do not square to A1, A2"));
    }
    Ok(RelationDecode {
        root1,
        root2,
        quotient,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::VarName;
    use crate::quad::FieldD;
    use alloc::collections::BTreeMap;
    use num_bigint::BigInt;

    fn zi(v: i64) -> QuadInt {
        QuadInt::from_int(FieldD::GAUSSIAN, v)
    }

    fn f_int(a1: i64, a2: i64, s: i64, t: i64, m: i64) -> BigInt {
        let [a1, a2, s, t, m] = [a1, a2, s, t, m].map(BigInt::from);
        relation_f(&a1, &a2, &s, &t, &m)
    }

    #[test]
    fn worked_values() {
        assert_eq!(f_int(1, 4, 1, 5, 2), BigInt::from(0));
        assert_eq!(f_int(9, 4, 2, 10, 0), BigInt::from(0));
        // 5^4 - 2*5*5^2 + 9 = 625 - 250 + 9
        assert_eq!(f_int(1, 4, 1, 5, 0), BigInt::from(384));
    }

    #[test]
    fn circuit_matches_formula() {
        let c = relation_circuit();
        assert_eq!(c.degree_bound(), 8);
        let env: BTreeMap<VarName, BigInt> = [("A1", 1), ("A2", 4), ("S", 1), ("T", 5), ("m", 2)]
            .into_iter()
            .map(|(n, v)| (VarName::new(n).unwrap(), BigInt::from(v)))
            .collect();
        assert_eq!(c.eval((), &env).unwrap(), BigInt::from(0));
    }

    #[test]
    fn witnesses() {
        assert_eq!(relation_m_witness(&zi(1), &zi(2), &zi(1), &zi(5)).unwrap(), zi(2));
        assert_eq!(relation_m_witness(&zi(3), &zi(2), &zi(2), &zi(10)).unwrap(), zi(0));
        assert_eq!(relation_m_witness(&zi(0), &zi(0), &zi(1), &zi(0)).unwrap(), zi(0));
        assert_eq!(
            relation_m_witness(&zi(1), &zi(2), &zi(2), &zi(5)),
            Err(GadgetError::NotDivisible)
        );
    }

    #[test]
    fn decodes() {
        let d = relation_decode(&zi(1), &zi(4), &zi(1), &zi(5), &zi(2)).unwrap();
        assert_eq!((d.root1, d.root2, d.quotient), (zi(1), zi(2), zi(5)));
        let d = relation_decode(&zi(9), &zi(4), &zi(2), &zi(10), &zi(0)).unwrap();
        assert_eq!((d.root1, d.root2, d.quotient), (zi(3), zi(2), zi(5)));
        assert_eq!(
            relation_decode(&zi(4), &zi(4), &zi(1), &zi(4), &zi(0)),
            Err(GadgetError::EqualArguments)
        );
        assert_eq!(
            relation_decode(&zi(1), &zi(4), &zi(1), &zi(5), &zi(0)),
            Err(GadgetError::RelationNonzero)
        );
    }
}
