//! Gaussian integers with `i64` parts, for sweeps whose values provably stay
//! tiny. Every operation is overflow-checked; hits are re-checked with the
//! exact big-integer types.

use num_bigint::BigInt;
use zreduce_core::{QuadInt, Ring};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SmallGauss {
    pub re: i64,
    pub im: i64,
}

impl SmallGauss {
    pub fn from_quad(q: &QuadInt) -> Self {
        let (a, b) = (q.a2() / 2, q.b2() / 2);
        SmallGauss {
            re: i64::try_from(&a).expect("small coordinate"),
            im: i64::try_from(&b).expect("small coordinate"),
        }
    }
}

const OVERFLOW: &str = "small Gaussian arithmetic overflowed";

impl Ring for SmallGauss {
    type Ctx = ();

    fn constant(_: (), c: &BigInt) -> Self {
        SmallGauss {
            re: i64::try_from(c).expect(OVERFLOW),
            im: 0,
        }
    }

    fn in_context(&self, _: ()) -> bool {
        true
    }

    fn add_ref(&self, rhs: &Self) -> Self {
        SmallGauss {
            re: self.re.checked_add(rhs.re).expect(OVERFLOW),
            im: self.im.checked_add(rhs.im).expect(OVERFLOW),
        }
    }

    fn sub_ref(&self, rhs: &Self) -> Self {
        SmallGauss {
            re: self.re.checked_sub(rhs.re).expect(OVERFLOW),
            im: self.im.checked_sub(rhs.im).expect(OVERFLOW),
        }
    }

    fn mul_ref(&self, rhs: &Self) -> Self {
        let m = |a: i64, b: i64| a.checked_mul(b).expect(OVERFLOW);
        SmallGauss {
            re: m(self.re, rhs.re).checked_sub(m(self.im, rhs.im)).expect(OVERFLOW),
            im: m(self.re, rhs.im).checked_add(m(self.im, rhs.re)).expect(OVERFLOW),
        }
    }

    fn pow_u32(&self, e: u32) -> Self {
        let mut acc = SmallGauss { re: 1, im: 0 };
        for _ in 0..e {
            acc = acc.mul_ref(self);
        }
        acc
    }

    fn is_zero_elem(&self) -> bool {
        self.re == 0 && self.im == 0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use zreduce_core::gadgets::relation_f;
    use zreduce_core::FieldD;

    #[test]
    fn agrees_with_exact_arithmetic() {
        let f = FieldD::GAUSSIAN;
        let elems: Vec<QuadInt> = QuadInt::enumerate_box(f, 2).collect();
        for (i, a) in elems.iter().enumerate() {
            let b = &elems[(i * 7 + 3) % elems.len()];
            let c = &elems[(i * 11 + 5) % elems.len()];
            let exact = relation_f(a, b, c, a, b);
            let small = relation_f(
                &SmallGauss::from_quad(a),
                &SmallGauss::from_quad(b),
                &SmallGauss::from_quad(c),
                &SmallGauss::from_quad(a),
                &SmallGauss::from_quad(b),
            );
            assert_eq!(SmallGauss::from_quad(&exact), small);
        }
    }
}
