//! The value domains circuits and polynomials are evaluated over.

use num_bigint::BigInt;
use num_traits::{Pow, Zero};

use crate::quad::{FieldD, QuadInt};

/// A commutative ring with an embedding of `Z`.
///
/// `Ctx` carries whatever is needed to embed integer constants (the field
/// for quadratic integers); values from a different context are rejected
/// when an assignment is loaded.
pub trait Ring: Clone + PartialEq + core::fmt::Debug {
    type Ctx: Copy + core::fmt::Debug;

    fn constant(ctx: Self::Ctx, c: &BigInt) -> Self;
    fn in_context(&self, ctx: Self::Ctx) -> bool;
    fn add_ref(&self, rhs: &Self) -> Self;
    fn sub_ref(&self, rhs: &Self) -> Self;
    fn mul_ref(&self, rhs: &Self) -> Self;
    fn pow_u32(&self, e: u32) -> Self;
    fn is_zero_elem(&self) -> bool;
}

impl Ring for BigInt {
    type Ctx = ();

    fn constant(_: (), c: &BigInt) -> Self {
        c.clone()
    }

    fn in_context(&self, _: ()) -> bool {
        true
    }

    fn add_ref(&self, rhs: &Self) -> Self {
        self + rhs
    }

    fn sub_ref(&self, rhs: &Self) -> Self {
        self - rhs
    }

    fn mul_ref(&self, rhs: &Self) -> Self {
        self * rhs
    }

    fn pow_u32(&self, e: u32) -> Self {
        Pow::pow(self, e)
    }

    fn is_zero_elem(&self) -> bool {
        self.is_zero()
    }
}

impl Ring for QuadInt {
    type Ctx = FieldD;

    fn constant(ctx: FieldD, c: &BigInt) -> Self {
        QuadInt::from_int(ctx, c.clone())
    }

    fn in_context(&self, ctx: FieldD) -> bool {
        self.field() == ctx
    }

    fn add_ref(&self, rhs: &Self) -> Self {
        self + rhs
    }

    fn sub_ref(&self, rhs: &Self) -> Self {
        self - rhs
    }

    fn mul_ref(&self, rhs: &Self) -> Self {
        self * rhs
    }

    fn pow_u32(&self, e: u32) -> Self {
        self.pow(e)
    }

    fn is_zero_elem(&self) -> bool {
        self.is_zero()
    }
}
