//! Exact arithmetic in an imaginary quadratic field `K = Q(sqrt(-d))` and its
//! ring of integers `O_K`.
//!
//! Integral elements are stored in doubled coordinates: the pair `(a2, b2)`
//! denotes `(a2 + b2*w)/2` with `w = sqrt(-d)`. When `d = 3 (mod 4)` the ring
//! contains half-integer points and `a2 = b2 (mod 2)`; otherwise both
//! coordinates are even. Field elements use a pair of exact rationals.

use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum QuadError {
    #[error("d = {0} is not a positive squarefree integer")]
    InvalidD(u64),
    #[error("field mismatch: d = {left} vs d = {right}")]
    FieldMismatch { left: u64, right: u64 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("({a2} + {b2}w)/2 is not an algebraic integer for d = {d}")]
    NotIntegral { d: u64, a2: BigInt, b2: BigInt },
}

/// The field `Q(sqrt(-d))`, identified by its squarefree `d >= 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldD {
    d: u64,
}

impl FieldD {
    /// `Z[i]`.
    pub const GAUSSIAN: FieldD = FieldD { d: 1 };

    pub fn new(d: u64) -> Result<Self, QuadError> {
        if d == 0 || !is_squarefree(d) {
            return Err(QuadError::InvalidD(d));
        }
        Ok(FieldD { d })
    }

    pub fn d(self) -> u64 {
        self.d
    }

    pub fn is_three_mod_four(self) -> bool {
        self.d % 4 == 3
    }

    /// Whether doubled coordinates `(a2, b2)` describe an element of `O_K`.
    pub fn admits(self, a2: &BigInt, b2: &BigInt) -> bool {
        if self.is_three_mod_four() {
            (a2 - b2).is_even()
        } else {
            a2.is_even() && b2.is_even()
        }
    }

    fn check(self, other: FieldD) -> Result<(), QuadError> {
        if self == other {
            Ok(())
        } else {
            Err(QuadError::FieldMismatch {
                left: self.d,
                right: other.d,
            })
        }
    }
}

impl fmt::Display for FieldD {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q(sqrt(-{}))", self.d)
    }
}

fn is_squarefree(d: u64) -> bool {
    let mut p = 2u64;
    while p <= d / p {
        if d.is_multiple_of(p * p) {
            return false;
        }
        p += 1;
    }
    true
}

/// Exact square root of a nonnegative integer, if it is a perfect square.
pub fn exact_sqrt(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    if &r * &r == *n {
        Some(r)
    } else {
        None
    }
}

/// An element `(a2 + b2*sqrt(-d))/2` of `O_K`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QuadInt {
    field: FieldD,
    a2: BigInt,
    b2: BigInt,
}

impl QuadInt {
    /// Builds `(a2 + b2*w)/2`, rejecting pairs outside `O_K`.
    pub fn from_doubled(field: FieldD, a2: BigInt, b2: BigInt) -> Result<Self, QuadError> {
        if !field.admits(&a2, &b2) {
            return Err(QuadError::NotIntegral {
                d: field.d,
                a2,
                b2,
            });
        }
        Ok(QuadInt { field, a2, b2 })
    }

    /// `a + b*w` with integer coordinates; always integral.
    pub fn new(field: FieldD, a: impl Into<BigInt>, b: impl Into<BigInt>) -> Self {
        QuadInt {
            field,
            a2: a.into() * 2,
            b2: b.into() * 2,
        }
    }

    pub fn from_int(field: FieldD, a: impl Into<BigInt>) -> Self {
        QuadInt::new(field, a, 0)
    }

    pub fn zero(field: FieldD) -> Self {
        QuadInt::from_int(field, 0)
    }

    pub fn one(field: FieldD) -> Self {
        QuadInt::from_int(field, 1)
    }

    /// `w = sqrt(-d)`.
    pub fn sqrt_minus_d(field: FieldD) -> Self {
        QuadInt::new(field, 0, 1)
    }

    pub fn field(&self) -> FieldD {
        self.field
    }

    pub fn a2(&self) -> &BigInt {
        &self.a2
    }

    pub fn b2(&self) -> &BigInt {
        &self.b2
    }

    pub fn is_zero(&self) -> bool {
        self.a2.is_zero() && self.b2.is_zero()
    }

    /// The element as a rational integer, when its surd part vanishes.
    pub fn as_integer(&self) -> Option<BigInt> {
        // b2 = 0 forces a2 even in every case
        if self.b2.is_zero() {
            Some(&self.a2 / 2)
        } else {
            None
        }
    }

    /// `(r, s)` with `self = r + s*sqrt(-d)`.
    pub fn parts(&self) -> (BigRational, BigRational) {
        let two = BigInt::from(2);
        (
            BigRational::new(self.a2.clone(), two.clone()),
            BigRational::new(self.b2.clone(), two),
        )
    }

    /// `r^2 + d*s^2`, a nonnegative integer.
    pub fn norm(&self) -> BigInt {
        (&self.a2 * &self.a2 + BigInt::from(self.field.d) * &self.b2 * &self.b2) / 4
    }

    pub fn conj(&self) -> Self {
        QuadInt {
            field: self.field,
            a2: self.a2.clone(),
            b2: -&self.b2,
        }
    }

    pub fn to_rat(&self) -> QuadRat {
        let (r, s) = self.parts();
        QuadRat {
            field: self.field,
            r,
            s,
        }
    }

    pub fn checked_add(&self, rhs: &Self) -> Result<Self, QuadError> {
        self.field.check(rhs.field)?;
        Ok(self.add_unchecked(rhs))
    }

    pub fn checked_sub(&self, rhs: &Self) -> Result<Self, QuadError> {
        self.field.check(rhs.field)?;
        Ok(self.sub_unchecked(rhs))
    }

    pub fn checked_mul(&self, rhs: &Self) -> Result<Self, QuadError> {
        self.field.check(rhs.field)?;
        Ok(self.mul_unchecked(rhs))
    }

    fn add_unchecked(&self, rhs: &Self) -> Self {
        QuadInt {
            field: self.field,
            a2: &self.a2 + &rhs.a2,
            b2: &self.b2 + &rhs.b2,
        }
    }

    fn sub_unchecked(&self, rhs: &Self) -> Self {
        QuadInt {
            field: self.field,
            a2: &self.a2 - &rhs.a2,
            b2: &self.b2 - &rhs.b2,
        }
    }

    fn mul_unchecked(&self, rhs: &Self) -> Self {
        // ((a + bw)/2)((c + ew)/2) = ((ac - d*be)/2 + (ae + bc)/2 * w)/2
        let d = BigInt::from(self.field.d);
        let a2 = (&self.a2 * &rhs.a2 - d * &self.b2 * &rhs.b2) / 2;
        let b2 = (&self.a2 * &rhs.b2 + &self.b2 * &rhs.a2) / 2;
        QuadInt {
            field: self.field,
            a2,
            b2,
        }
    }

    /// Multiplies by a rational integer.
    pub fn scale(&self, k: &BigInt) -> Self {
        QuadInt {
            field: self.field,
            a2: &self.a2 * k,
            b2: &self.b2 * k,
        }
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = QuadInt::one(self.field);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_unchecked(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_unchecked(&base);
            }
        }
        acc
    }

    /// The quotient `q` with `other = self * q`, if `self` divides `other` in `O_K`.
    pub fn divides(&self, other: &Self) -> Result<Option<QuadInt>, QuadError> {
        self.field.check(other.field)?;
        if self.is_zero() {
            return Err(QuadError::DivisionByZero);
        }
        // other/self = other*conj(self)/N(self); the product is integral, so
        // the quotient's doubled coordinates are those of the product over N.
        let n = self.norm();
        let p = other.mul_unchecked(&self.conj());
        let (qa, ra) = p.a2.div_rem(&n);
        let (qb, rb) = p.b2.div_rem(&n);
        if !ra.is_zero() || !rb.is_zero() || !self.field.admits(&qa, &qb) {
            return Ok(None);
        }
        Ok(Some(QuadInt {
            field: self.field,
            a2: qa,
            b2: qb,
        }))
    }

    /// A square root in `O_K`, if one exists.
    ///
    /// The root is normalized to `a2 > 0`, or `a2 = 0` and `b2 > 0`.
    pub fn sqrt(&self) -> Option<QuadInt> {
        if self.is_zero() {
            return Some(self.clone());
        }
        // A root (p + qw)/2 has norm m = sqrt(N(self)) and satisfies
        // p^2 + d q^2 = 4m, p^2 - d q^2 = 2*a2, pq = b2.
        let m = exact_sqrt(&self.norm())?;
        let p = exact_sqrt(&(&m * 2 + &self.a2))?;
        let dq2: BigInt = &m * 2 - &self.a2;
        let d = BigInt::from(self.field.d);
        if !dq2.is_multiple_of(&d) {
            return None;
        }
        let mut q = exact_sqrt(&(dq2 / d))?;
        if self.b2.is_negative() {
            q = -q;
        }
        let root = QuadInt::from_doubled(self.field, p, q).ok()?;
        if root.mul_unchecked(&root) != *self {
            return None;
        }
        Some(root.canonical_sign())
    }

    fn canonical_sign(self) -> Self {
        if self.a2.is_negative() || (self.a2.is_zero() && self.b2.is_negative()) {
            -self
        } else {
            self
        }
    }

    /// All elements with `|a2| <= 2B` and `|b2| <= 2B`, lexicographic in `(a2, b2)`.
    pub fn enumerate_box(field: FieldD, bound: u32) -> BoxIter {
        let lim = 2 * i64::from(bound);
        BoxIter {
            field,
            lim,
            a2: -lim,
            b2: -lim,
        }
    }
}

/// Iterator returned by [`QuadInt::enumerate_box`].
#[derive(Debug, Clone)]
pub struct BoxIter {
    field: FieldD,
    lim: i64,
    a2: i64,
    b2: i64,
}

impl Iterator for BoxIter {
    type Item = QuadInt;

    fn next(&mut self) -> Option<QuadInt> {
        while self.a2 <= self.lim {
            let (a2, b2) = (BigInt::from(self.a2), BigInt::from(self.b2));
            if self.b2 == self.lim {
                self.b2 = -self.lim;
                self.a2 += 1;
            } else {
                self.b2 += 1;
            }
            if self.field.admits(&a2, &b2) {
                return Some(QuadInt {
                    field: self.field,
                    a2,
                    b2,
                });
            }
        }
        None
    }
}

macro_rules! forward_binop {
    ($ty:ident, $trait:ident, $method:ident, $inner:ident) => {
        impl<'a> $trait<&'a $ty> for &'a $ty {
            type Output = $ty;
            fn $method(self, rhs: &'a $ty) -> $ty {
                assert_eq!(self.field, rhs.field, "quadratic field mismatch");
                self.$inner(rhs)
            }
        }
        impl $trait<$ty> for $ty {
            type Output = $ty;
            fn $method(self, rhs: $ty) -> $ty {
                (&self).$method(&rhs)
            }
        }
        impl<'a> $trait<&'a $ty> for $ty {
            type Output = $ty;
            fn $method(self, rhs: &'a $ty) -> $ty {
                (&self).$method(rhs)
            }
        }
    };
}

forward_binop!(QuadInt, Add, add, add_unchecked);
forward_binop!(QuadInt, Sub, sub, sub_unchecked);
forward_binop!(QuadInt, Mul, mul, mul_unchecked);

impl Neg for QuadInt {
    type Output = QuadInt;
    fn neg(self) -> QuadInt {
        QuadInt {
            field: self.field,
            a2: -self.a2,
            b2: -self.b2,
        }
    }
}

impl Neg for &QuadInt {
    type Output = QuadInt;
    fn neg(self) -> QuadInt {
        -self.clone()
    }
}

/// Canonical literal: `a`, `bw`, `a + bw`, `a - bw`, or `(a2 + b2w)/2`.
impl fmt::Display for QuadInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let half = self.a2.is_odd();
        let (a, b) = if half {
            (self.a2.clone(), self.b2.clone())
        } else {
            (&self.a2 / 2, &self.b2 / 2)
        };
        let body = |f: &mut fmt::Formatter<'_>| -> fmt::Result {
            if b.is_zero() {
                write!(f, "{a}")
            } else if a.is_zero() && !half {
                write!(f, "{b}w")
            } else if b.is_negative() {
                write!(f, "{a} - {}w", -&b)
            } else {
                write!(f, "{a} + {b}w")
            }
        };
        if half {
            f.write_str("(")?;
            body(f)?;
            f.write_str(")/2")
        } else {
            body(f)
        }
    }
}

/// An element `r + s*sqrt(-d)` of `K`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QuadRat {
    field: FieldD,
    r: BigRational,
    s: BigRational,
}

impl QuadRat {
    pub fn new(field: FieldD, r: BigRational, s: BigRational) -> Self {
        QuadRat { field, r, s }
    }

    pub fn from_int(field: FieldD, a: impl Into<BigInt>) -> Self {
        QuadRat {
            field,
            r: BigRational::from_integer(a.into()),
            s: BigRational::zero(),
        }
    }

    pub fn field(&self) -> FieldD {
        self.field
    }

    pub fn r(&self) -> &BigRational {
        &self.r
    }

    pub fn s(&self) -> &BigRational {
        &self.s
    }

    pub fn parts(&self) -> (BigRational, BigRational) {
        (self.r.clone(), self.s.clone())
    }

    pub fn is_zero(&self) -> bool {
        self.r.is_zero() && self.s.is_zero()
    }

    /// Whether the element lies in `Q`, i.e. its surd part vanishes.
    pub fn is_rational(&self) -> bool {
        self.s.is_zero()
    }

    pub fn norm(&self) -> BigRational {
        &self.r * &self.r + BigRational::from_integer(BigInt::from(self.field.d)) * &self.s * &self.s
    }

    /// The element as a member of `O_K`, when it is one.
    pub fn to_quadint(&self) -> Option<QuadInt> {
        let a2 = &self.r * BigInt::from(2);
        let b2 = &self.s * BigInt::from(2);
        if !a2.is_integer() || !b2.is_integer() {
            return None;
        }
        QuadInt::from_doubled(self.field, a2.to_integer(), b2.to_integer()).ok()
    }

    pub fn is_in_ok(&self) -> bool {
        self.to_quadint().is_some()
    }

    pub fn checked_add(&self, rhs: &Self) -> Result<Self, QuadError> {
        self.field.check(rhs.field)?;
        Ok(QuadRat {
            field: self.field,
            r: &self.r + &rhs.r,
            s: &self.s + &rhs.s,
        })
    }

    pub fn checked_sub(&self, rhs: &Self) -> Result<Self, QuadError> {
        self.field.check(rhs.field)?;
        Ok(QuadRat {
            field: self.field,
            r: &self.r - &rhs.r,
            s: &self.s - &rhs.s,
        })
    }

    pub fn checked_mul(&self, rhs: &Self) -> Result<Self, QuadError> {
        self.field.check(rhs.field)?;
        let d = BigRational::from_integer(BigInt::from(self.field.d));
        Ok(QuadRat {
            field: self.field,
            r: &self.r * &rhs.r - d * &self.s * &rhs.s,
            s: &self.r * &rhs.s + &self.s * &rhs.r,
        })
    }

    pub fn inv(&self) -> Result<Self, QuadError> {
        if self.is_zero() {
            return Err(QuadError::DivisionByZero);
        }
        let n = self.norm();
        Ok(QuadRat {
            field: self.field,
            r: &self.r / &n,
            s: -(&self.s / &n),
        })
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self, QuadError> {
        self.field.check(rhs.field)?;
        self.checked_mul(&rhs.inv()?)
    }
}

impl From<&QuadInt> for QuadRat {
    fn from(x: &QuadInt) -> Self {
        x.to_rat()
    }
}

impl<'a> Add<&'a QuadRat> for &'a QuadRat {
    type Output = QuadRat;
    fn add(self, rhs: &'a QuadRat) -> QuadRat {
        self.checked_add(rhs).expect("quadratic field mismatch")
    }
}

impl<'a> Sub<&'a QuadRat> for &'a QuadRat {
    type Output = QuadRat;
    fn sub(self, rhs: &'a QuadRat) -> QuadRat {
        self.checked_sub(rhs).expect("quadratic field mismatch")
    }
}

impl<'a> Mul<&'a QuadRat> for &'a QuadRat {
    type Output = QuadRat;
    fn mul(self, rhs: &'a QuadRat) -> QuadRat {
        self.checked_mul(rhs).expect("quadratic field mismatch")
    }
}

impl Neg for QuadRat {
    type Output = QuadRat;
    fn neg(self) -> QuadRat {
        QuadRat {
            field: self.field,
            r: -self.r,
            s: -self.s,
        }
    }
}

impl fmt::Display for QuadRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.s.is_zero() {
            write!(f, "{}", self.r)
        } else if self.r.is_zero() {
            write!(f, "({})w", self.s)
        } else if self.s.is_negative() {
            write!(f, "{} - ({})w", self.r, -&self.s)
        } else {
            write!(f, "{} + ({})w", self.r, self.s)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gadgets::integrality::three_x_plus_one;
    use num_traits::One;
    use alloc::vec::Vec;
    use proptest::prelude::*;

    const DS: [u64; 6] = [1, 2, 3, 5, 7, 11];

    fn field(d: u64) -> FieldD {
        FieldD::new(d).unwrap()
    }

    fn q(d: u64, a: i64, b: i64) -> QuadInt {
        QuadInt::new(field(d), a, b)
    }

    fn half(d: u64, a2: i64, b2: i64) -> QuadInt {
        QuadInt::from_doubled(field(d), a2.into(), b2.into()).unwrap()
    }

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    /// Square test by enumerating every element of norm `sqrt(N(alpha))`.
    fn sqrt_by_enumeration(alpha: &QuadInt) -> Option<QuadInt> {
        if alpha.is_zero() {
            return Some(alpha.clone());
        }
        let n = exact_sqrt(&alpha.norm())?;
        let target = n * 4;
        let d = BigInt::from(alpha.field().d());
        let mut b2 = BigInt::zero();
        let mut roots = Vec::new();
        while &d * &b2 * &b2 <= target {
            if let Some(a2) = exact_sqrt(&(&target - &d * &b2 * &b2)) {
                for (x, y) in [(a2.clone(), b2.clone()), (-a2.clone(), b2.clone()), (a2.clone(), -b2.clone()), (-a2.clone(), -b2.clone())] {
                    if let Ok(beta) = QuadInt::from_doubled(alpha.field(), x, y) {
                        if &(&beta * &beta) == alpha {
                            roots.push(beta);
                        }
                    }
                }
            }
            b2 += 1;
        }
        roots.into_iter().find(|r| r.a2.is_positive() || (r.a2.is_zero() && r.b2.is_positive()))
    }

    #[test]
    fn field_validation() {
        assert!(FieldD::new(0).is_err());
        assert!(FieldD::new(4).is_err());
        assert!(FieldD::new(12).is_err());
        assert!(FieldD::new(30).is_ok());
        assert!(field(3).is_three_mod_four());
        assert!(!field(5).is_three_mod_four());
        assert!(QuadInt::from_doubled(field(1), 1.into(), 1.into()).is_err());
        assert!(QuadInt::from_doubled(field(3), 1.into(), 2.into()).is_err());
    }

    #[test]
    fn arithmetic_examples() {
        assert_eq!(q(1, 2, 1) * q(1, 2, -1), q(1, 5, 0));
        let omega = half(3, -1, 1);
        assert_eq!(&omega * &omega, half(3, -1, -1));
        assert_eq!(q(1, 1, 1) + q(1, 1, -1), q(1, 2, 0));
        assert_eq!(q(1, 2, 1).norm(), BigInt::from(5));
        assert_eq!(omega.norm(), BigInt::from(1));
        assert_eq!(omega.pow(3), QuadInt::one(field(3)));
        assert!(QuadInt::zero(field(7)).norm().is_zero());
        assert_eq!(
            q(1, 1, 0).checked_add(&q(2, 1, 0)),
            Err(QuadError::FieldMismatch { left: 1, right: 2 })
        );
    }

    #[test]
    fn parts_and_membership() {
        assert_eq!(q(1, 2, 6).parts(), (rat(2, 1), rat(6, 1)));
        assert_eq!(half(3, -1, 1).parts(), (rat(-1, 2), rat(1, 2)));
        assert_eq!(q(5, 7, 0).parts(), (rat(7, 1), rat(0, 1)));
        assert!(QuadRat::new(field(3), rat(1, 2), rat(1, 2)).is_in_ok());
        assert!(!QuadRat::new(field(1), rat(1, 2), rat(1, 2)).is_in_ok());
        assert!(QuadRat::new(field(2), rat(3, 1), rat(-1, 1)).is_in_ok());
        assert!(!QuadRat::new(field(3), rat(1, 2), rat(1, 1)).is_in_ok());
    }

    #[test]
    fn rational_division() {
        let f = field(1);
        let a = QuadRat::new(f, rat(1, 1), rat(2, 1));
        assert_eq!(a.checked_div(&a).unwrap(), QuadRat::from_int(f, 1));
        assert_eq!(a.inv().unwrap().norm(), rat(1, 5));
        assert_eq!(a.checked_div(&QuadRat::from_int(f, 0)), Err(QuadError::DivisionByZero));
    }

    #[test]
    fn divides_examples() {
        assert_eq!(q(1, 1, 1).divides(&q(1, 2, 0)).unwrap(), Some(q(1, 1, -1)));
        assert_eq!(q(1, 3, 0).divides(&q(1, 2, 0)).unwrap(), None);
        // (1 + w)/2 is integral when d = 3 (mod 4)
        assert_eq!(q(3, 2, 0).divides(&q(3, 1, 1)).unwrap(), Some(half(3, 1, 1)));
        assert_eq!(q(7, 2, 0).divides(&q(7, 1, 1)).unwrap(), Some(half(7, 1, 1)));
        assert_eq!(q(5, 2, 0).divides(&q(5, 1, 1)).unwrap(), None);
        assert_eq!(q(3, 1, 1).divides(&q(3, 4, 0)).unwrap(), Some(q(3, 1, -1)));
        assert_eq!(q(3, 0, 0).divides(&q(3, 4, 0)), Err(QuadError::DivisionByZero));
    }

    #[test]
    fn sqrt_examples() {
        assert_eq!(q(1, 3, 4).sqrt(), Some(q(1, 2, 1)));
        assert_eq!(q(1, 0, 1).sqrt(), None);
        assert_eq!(QuadInt::zero(field(5)).sqrt(), Some(QuadInt::zero(field(5))));
        assert_eq!(q(1, 0, 2).sqrt(), Some(q(1, 1, 1)));
        assert_eq!(q(1, -1, 0).sqrt(), Some(q(1, 0, 1)));
        // omega^2 = omega conjugate, root of it is omega up to sign
        assert_eq!(half(3, -1, -1).sqrt(), Some(half(3, 1, -1)));
    }

    #[test]
    fn sqrt_matches_enumeration() {
        for d in DS {
            for alpha in QuadInt::enumerate_box(field(d), 12) {
                assert_eq!(alpha.sqrt(), sqrt_by_enumeration(&alpha), "d={d} alpha={alpha}");
            }
        }
    }

    #[test]
    fn box_examples() {
        assert_eq!(QuadInt::enumerate_box(field(1), 1).count(), 9);
        let b: Vec<QuadInt> = QuadInt::enumerate_box(field(3), 1).collect();
        for (a2, b2) in [(-1, 1), (1, -1), (-1, -1), (1, 1)] {
            assert!(b.contains(&half(3, a2, b2)));
        }
        for d in DS {
            let zero: Vec<QuadInt> = QuadInt::enumerate_box(field(d), 0).collect();
            assert_eq!(zero, [QuadInt::zero(field(d))]);
        }
        let keys: Vec<(BigInt, BigInt)> = b.iter().map(|x| (x.a2.clone(), x.b2.clone())).collect();
        let mut sorted = keys.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(keys, sorted);
    }

    #[test]
    fn literals() {
        assert_eq!(q(1, 3, 0).to_string(), "3");
        assert_eq!(q(1, 0, -2).to_string(), "-2w");
        assert_eq!(q(1, 1, 2).to_string(), "1 + 2w");
        assert_eq!(q(1, 1, -2).to_string(), "1 - 2w");
        assert_eq!(half(3, -1, 1).to_string(), "(-1 + 1w)/2");
    }

    #[test]
    fn norm_properties_on_boxes() {
        for d in DS {
            let f = field(d);
            let dd = BigRational::from_integer(d.into());
            let small: Vec<QuadInt> = QuadInt::enumerate_box(f, 3).collect();
            for a in &small {
                assert_eq!(a.norm().is_zero(), a.is_zero());
                for b in &small {
                    assert_eq!((a * b).norm(), a.norm() * b.norm());
                }
            }
            for a in QuadInt::enumerate_box(f, 5) {
                let (_, s) = a.parts();
                let n = BigRational::from_integer(a.norm());
                assert!(&dd * &s * &s <= &n * &n);
            }
            for x in QuadInt::enumerate_box(f, 8) {
                let y = three_x_plus_one(&x);
                assert!(y.norm() >= x.norm());
                assert!(y.norm() >= BigInt::one());
            }
        }
    }

    #[test]
    fn divides_and_sqrt_round_trips_on_boxes() {
        for d in DS {
            let elems: Vec<QuadInt> = QuadInt::enumerate_box(field(d), 3).collect();
            for a in elems.iter().filter(|a| !a.is_zero()) {
                for b in &elems {
                    if let Some(qt) = a.divides(b).unwrap() {
                        assert_eq!(&(a * &qt), b);
                    }
                    assert_eq!(a.divides(&(a * b)).unwrap().as_ref(), Some(b));
                }
            }
            for b in &elems {
                let root = (b * b).sqrt().expect("square has a root");
                assert_eq!(&root * &root, b * b);
            }
        }
    }

    fn member(f: FieldD, a2: i64, b2: i64) -> QuadInt {
        let b2 = if f.is_three_mod_four() { b2 } else { b2 & !1 };
        let a2 = if f.is_three_mod_four() { (a2 & !1) | (b2 & 1) } else { a2 & !1 };
        QuadInt::from_doubled(f, a2.into(), b2.into()).unwrap()
    }

    fn arb_quad() -> impl Strategy<Value = QuadInt> {
        (prop::sample::select(DS.to_vec()), any::<i64>(), any::<i64>())
            .prop_map(|(d, a2, b2)| member(field(d), a2, b2))
    }

    fn arb_pair() -> impl Strategy<Value = (QuadInt, QuadInt)> {
        (prop::sample::select(DS.to_vec()), any::<[i64; 4]>()).prop_map(|(d, c)| {
            (member(field(d), c[0], c[1]), member(field(d), c[2], c[3]))
        })
    }

    proptest! {
        #[test]
        fn norm_is_multiplicative(a in arb_quad(), b2 in any::<i64>(), a2 in any::<i64>()) {
            let f = a.field();
            let b = QuadInt::new(f, a2 >> 1, b2 >> 1);
            prop_assert_eq!((&a * &b).norm(), a.norm() * b.norm());
            prop_assert_eq!(a.norm(), (&a * &a.conj()).as_integer().unwrap());
        }

        #[test]
        fn squares_have_canonical_roots(a in arb_quad()) {
            let sq = &a * &a;
            let root = sq.sqrt().unwrap();
            prop_assert!(root == a || root == -&a);
            prop_assert!(root.a2().is_positive() || (root.a2().is_zero() && !root.b2().is_negative()));
        }

        #[test]
        fn exact_division_recovers_factor((a, b) in arb_pair()) {
            prop_assume!(!a.is_zero());
            prop_assert_eq!(a.divides(&(&a * &b)).unwrap(), Some(b));
        }
    }
}
