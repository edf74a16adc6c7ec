//! Conjunction of two vanishing conditions over `Z[i]`: `p = 0 and q = 0`
//! exactly when `p^2 + 2q^2 = 0`.
//!
//! This is specific to `Z[i]` (and any ring where `-2` is not a square of
//! an element of its fraction field); in `Q(sqrt(-2))` it fails.

use crate::circuit::{Circuit, CircuitBuilder, NodeId};
use crate::ring::Ring;

pub fn conj_node(b: &mut CircuitBuilder, p: NodeId, q: NodeId) -> NodeId {
    let p2 = b.pow(p, 2);
    let q2 = b.pow(q, 2);
    let q2x2 = b.scale(2, q2);
    b.add(p2, q2x2)
}

pub fn conj_combine(p: &Circuit, q: &Circuit) -> Circuit {
    let mut b = CircuitBuilder::new();
    let pn = b.import(p);
    let qn = b.import(q);
    let out = conj_node(&mut b, pn, qn);
    b.finish(out)
}

pub fn conj_value<R: Ring>(p: &R, q: &R) -> R {
    let q2 = q.mul_ref(q);
    p.mul_ref(p).add_ref(&q2).add_ref(&q2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::{FieldD, QuadInt};

    #[test]
    fn values() {
        let f = FieldD::GAUSSIAN;
        let v = conj_value(&QuadInt::new(f, 1, 1), &QuadInt::one(f));
        assert_eq!(v, QuadInt::new(f, 2, 2));
        assert!(conj_value(&QuadInt::zero(f), &QuadInt::zero(f)).is_zero());
    }

    #[test]
    fn fails_in_q_sqrt_minus_two() {
        // -2 = w^2 there, so w^2 + 2*1^2 = 0 with both arguments nonzero
        let f = FieldD::new(2).unwrap();
        let w = QuadInt::sqrt_minus_d(f);
        assert!(conj_value(&w, &QuadInt::one(f)).is_zero());
    }
}
