//! Rational integrality of `t` in `Z[i]` through a Pell-type system: `t` is
//! in `Z` exactly when some `v != 0`, `x`, `y` satisfy
//!
//! ```text
//! 4(2v(2(2t+1)^2 + 1) - y)^2 - 3y^2 - 1 = 0          (Pell condition)
//! 3y^2 (2t + 1 - xy)^2 + 1  is a square              (square condition)
//! ```
//!
//! For integer `t` a witness is found by two period-complete searches over
//! `X^2 - 3Y^2 = 1`. With `M = 2(2t+1)^2 + 1`, the Pell condition reads
//! `X^2 - 3Y^2 = 1` for `X = 2(2vM - y)`, `Y = y`; so stage one looks for an
//! odd index (even `X`) with `X/2 + Y = 0 (mod 2M)` and sets
//! `v = (X/2 + Y)/(2M)`. The square condition holds once
//! `y(2t+1) - xy^2 = +-Y'` for a Pell value `Y'`; stage two looks for
//! `Y' = +-y(2t+1) (mod y^2)`.

use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use crate::circuit::{Circuit, CircuitBuilder, NodeId};
use crate::pell::{
    pell_at, period_search, period_search_first, FirstHit, LinearCondition, Parity, PellPair,
    SearchOutcome,
};
use crate::quad::QuadInt;
use crate::ring::Ring;

use super::GadgetError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchStage {
    Pell,
    Square,
}

impl fmt::Display for SearchStage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SearchStage::Pell => "Pell-condition",
            SearchStage::Square => "square-condition",
        })
    }
}

/// `4(2v(2(2t+1)^2 + 1) - y)^2 - 3y^2 - 1`.
pub fn pell_condition<R: Ring>(t: &R, v: &R, y: &R) -> R {
    let one = t.pow_u32(0);
    let u = t.add_ref(t).add_ref(&one);
    let big_m = u.mul_ref(&u);
    let big_m = big_m.add_ref(&big_m).add_ref(&one);
    let two_v = v.add_ref(v);
    let inner = two_v.mul_ref(&big_m).sub_ref(y);
    let sq = inner.mul_ref(&inner);
    let four_sq = sq.add_ref(&sq).add_ref(&sq).add_ref(&sq);
    let y2 = y.mul_ref(y);
    four_sq.sub_ref(&y2.add_ref(&y2).add_ref(&y2)).sub_ref(&one)
}

/// `3y^2 (2t + 1 - xy)^2 + 1`.
pub fn square_quantity<R: Ring>(t: &R, x: &R, y: &R) -> R {
    let one = t.pow_u32(0);
    let inner = t.add_ref(t).add_ref(&one).sub_ref(&x.mul_ref(y));
    let prod = y.mul_ref(&inner);
    let sq = prod.mul_ref(&prod);
    sq.add_ref(&sq).add_ref(&sq).add_ref(&one)
}

/// Pell condition with `2t + 1` replaced by `num/den` and cleared of the
/// denominator: `4(2v(2N^2 + D^2) - yD^2)^2 - (3y^2 + 1)D^4`. With no
/// denominator this is the literal `4(2v(2N^2 + 1) - y)^2 - 3y^2 - 1`.
pub fn pell_node(b: &mut CircuitBuilder, num: NodeId, den: Option<NodeId>, v: NodeId, y: NodeId) -> NodeId {
    let n2 = b.pow(num, 2);
    let two_n2 = b.scale(2, n2);
    let y2 = b.pow(y, 2);
    let three_y2 = b.scale(3, y2);
    match den {
        None => {
            let big_m = b.offset(two_n2, 1);
            let two_v = b.scale(2, v);
            let vm = b.mul(two_v, big_m);
            let inner = b.sub(vm, y);
            let sq = b.pow(inner, 2);
            let four_sq = b.scale(4, sq);
            let lhs = b.sub(four_sq, three_y2);
            let one = b.constant(1);
            b.sub(lhs, one)
        }
        Some(d) => {
            let d2 = b.pow(d, 2);
            let d4 = b.pow(d, 4);
            let big_m = b.add(two_n2, d2);
            let two_v = b.scale(2, v);
            let vm = b.mul(two_v, big_m);
            let yd2 = b.mul(y, d2);
            let inner = b.sub(vm, yd2);
            let sq = b.pow(inner, 2);
            let four_sq = b.scale(4, sq);
            let factor = b.offset(three_y2, 1);
            let rhs = b.mul(factor, d4);
            b.sub(four_sq, rhs)
        }
    }
}

/// Square-condition quantity with `2t + 1 = num/den`, scaled by `den^2`:
/// `3y^2 (N - xyD)^2 + D^2`; literal `3y^2 (N - xy)^2 + 1` without a denominator.
pub fn square_node(b: &mut CircuitBuilder, num: NodeId, den: Option<NodeId>, x: NodeId, y: NodeId) -> NodeId {
    let xy = b.mul(x, y);
    let (shift, tail) = match den {
        None => (xy, b.constant(1)),
        Some(d) => {
            let xyd = b.mul(xy, d);
            let d2 = b.pow(d, 2);
            (xyd, d2)
        }
    };
    let inner = b.sub(num, shift);
    let inner2 = b.pow(inner, 2);
    let y2 = b.pow(y, 2);
    let three_y2 = b.scale(3, y2);
    let head = b.mul(three_y2, inner2);
    b.add(head, tail)
}

/// Which form of the two conditions to emit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Lemma33Scale {
    /// The literal conditions in variables `t, v, x, y`.
    Literal,
    /// Denominator-cleared conditions for `2t + 1 = W/D`, in variables
    /// `W, D, v, x, y`; the reduction instantiates `D = y^n`.
    Cleared,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lemma33Templates {
    /// Must vanish.
    pub pell: Circuit,
    /// Must be a square.
    pub square: Circuit,
}

pub fn lemma33_build(scale: Lemma33Scale) -> Lemma33Templates {
    let build = |square: bool| {
        let mut b = CircuitBuilder::new();
        let (num, den) = match scale {
            Lemma33Scale::Literal => {
                let t = b.named("t");
                let t2 = b.scale(2, t);
                (b.offset(t2, 1), None)
            }
            Lemma33Scale::Cleared => (b.named("W"), Some(b.named("D"))),
        };
        let y = b.named("y");
        let out = if square {
            let x = b.named("x");
            square_node(&mut b, num, den, x, y)
        } else {
            let v = b.named("v");
            pell_node(&mut b, num, den, v, y)
        };
        b.finish(out)
    };
    Lemma33Templates {
        pell: build(false),
        square: build(true),
    }
}

/// An integer witness together with the Pell pairs it was read off.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lemma33Witness {
    pub t: BigInt,
    pub v: BigInt,
    pub x: BigInt,
    pub y: BigInt,
    /// Stage-one pair: `y = Y`, `X = 2(2vM - y)`.
    pub pell_pair: PellPair,
    /// Stage-two pair: `y(2t+1) - xy^2 = sign * Y'`.
    pub square_pair: PellPair,
    pub sign: i8,
}

impl Lemma33Witness {
    /// Nonnegative square root of `3y^2(2t+1 - xy)^2 + 1`.
    pub fn square_root(&self) -> &BigInt {
        &self.square_pair.x
    }
}

fn run_stage(
    stage: SearchStage,
    modulus: &BigInt,
    cond: &LinearCondition,
    parity: Parity,
    budget: u64,
) -> Result<Result<PellPair, GadgetError>, GadgetError> {
    Ok(match period_search(modulus, cond, parity, budget)? {
        SearchOutcome::Found(p) => Ok(p),
        SearchOutcome::ExhaustedPeriod { period } => Err(GadgetError::ExhaustedPeriod {
            stage,
            period,
            modulus: modulus.clone(),
        }),
        SearchOutcome::BudgetExceeded => Err(GadgetError::BudgetExceeded {
            stage,
            budget,
            modulus: modulus.clone(),
        }),
    })
}

/// Integer witness `(v, x, y)` for integer `t`, each search limited to `budget` steps.
pub fn lemma33_witness(t: &BigInt, budget: u64) -> Result<Lemma33Witness, GadgetError> {
    let u: BigInt = t * 2 + 1;
    let big_m: BigInt = &u * &u * 2 + 1;
    let modulus1 = &big_m * 2;
    let cond1 = LinearCondition::half_x_plus_y_zero();
    let pell_pair = run_stage(SearchStage::Pell, &modulus1, &cond1, Parity::Odd, budget)??;
    let half_sum: BigInt = &pell_pair.x / 2 + &pell_pair.y;
    let (v, rem) = half_sum.div_rem(&modulus1);
    if !rem.is_zero() || v.is_zero() {
        return Err(GadgetError::Internal("stage-one pair does not yield v"));
    }
    let y = pell_pair.y.clone();

    let target = &y * &u;
    let y2 = &y * &y;
    let (square_pair, sign) = if y2 < BigInt::from(2) {
        (pell_at(0), 1i8)
    } else {
        let conds = [
            LinearCondition::y_equals(target.clone()),
            LinearCondition::y_equals(-&target),
        ];
        match period_search_first(&y2, &conds, Parity::Any, budget)? {
            FirstHit::Found(p, k) => (p, if k == 0 { 1 } else { -1 }),
            FirstHit::ExhaustedPeriod { period } => {
                return Err(GadgetError::ExhaustedPeriod {
                    stage: SearchStage::Square,
                    period,
                    modulus: y2,
                })
            }
            FirstHit::BudgetExceeded => {
                return Err(GadgetError::BudgetExceeded {
                    stage: SearchStage::Square,
                    budget,
                    modulus: y2,
                })
            }
        }
    };
    let signed = if sign > 0 { square_pair.y.clone() } else { -&square_pair.y };
    let (x, rem) = (&target - signed).div_rem(&y2);
    if !rem.is_zero() {
        return Err(GadgetError::Internal("stage-two pair does not yield x"));
    }
    let w = Lemma33Witness {
        t: t.clone(),
        v,
        x,
        y,
        pell_pair,
        square_pair,
        sign,
    };
    if !pell_condition(t, &w.v, &w.y).is_zero() {
        return Err(GadgetError::Internal("Pell condition fails at the constructed witness"));
    }
    if square_quantity(t, &w.x, &w.y) != w.square_root() * w.square_root() {
        return Err(GadgetError::Internal("square condition fails at the constructed witness"));
    }
    Ok(w)
}

/// A triple `(v, x, y)` with `v != 0` from the box of radius `bound`
/// satisfying both conditions for a non-integer `t`, if any.
pub fn find_lemma33_in_box(
    t: &QuadInt,
    bound: u32,
) -> Result<Option<(QuadInt, QuadInt, QuadInt)>, GadgetError> {
    if let Some(k) = t.as_integer() {
        return Err(GadgetError::IntegerArgument(k));
    }
    let field = t.field();
    for v in QuadInt::enumerate_box(field, bound).filter(|v| !v.is_zero()) {
        for y in QuadInt::enumerate_box(field, bound) {
            if !pell_condition(t, &v, &y).is_zero() {
                continue;
            }
            for x in QuadInt::enumerate_box(field, bound) {
                if square_quantity(t, &x, &y).sqrt().is_some() {
                    return Ok(Some((v, x, y)));
                }
            }
        }
    }
    Ok(None)
}

/// `true` when no triple in the box witnesses integrality of `t`.
pub fn refute_lemma33_box(t: &QuadInt, bound: u32) -> Result<bool, GadgetError> {
    Ok(find_lemma33_in_box(t, bound)?.is_none())
}

/// Whether an integer triple `(v, x, y)` satisfies both conditions for integer `t`.
pub fn is_integer_witness(t: &BigInt, v: &BigInt, x: &BigInt, y: &BigInt) -> bool {
    !v.is_zero()
        && pell_condition(t, v, y).is_zero()
        && crate::quad::exact_sqrt(&square_quantity(t, x, y)).is_some()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::VarName;
    use crate::quad::FieldD;
    use alloc::collections::BTreeMap;

    fn big(v: i64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn t_zero_witness() {
        let w = lemma33_witness(&big(0), 100_000).unwrap();
        assert_eq!((w.v.clone(), w.x.clone(), w.y.clone()), (big(65), big(0), big(209)));
        assert_eq!(w.pell_pair.index, 5);
        assert_eq!(w.square_pair.index, 5);
        assert_eq!(big(4) * big(181 * 181) - big(3 * 209 * 209) - 1, big(0));
        assert_eq!(square_quantity(&big(0), &big(0), &big(209)), big(362 * 362));
    }

    #[test]
    fn literal_templates() {
        let tpl = lemma33_build(Lemma33Scale::Literal);
        let env = |pairs: &[(&str, i64)]| -> BTreeMap<VarName, BigInt> {
            pairs.iter().map(|(n, v)| (VarName::new(*n).unwrap(), big(*v))).collect()
        };
        let good = env(&[("t", 0), ("v", 65), ("x", 0), ("y", 209)]);
        assert_eq!(tpl.pell.eval((), &good).unwrap(), big(0));
        assert_eq!(tpl.square.eval((), &good).unwrap(), big(362 * 362));
        let bad = env(&[("t", 0), ("v", 1), ("x", 0), ("y", 1)]);
        assert_eq!(tpl.pell.eval((), &bad).unwrap(), big(96));
    }

    #[test]
    fn small_t_witnesses() {
        for t in -3..=3 {
            let w = lemma33_witness(&big(t), 1_000_000).unwrap();
            assert!(is_integer_witness(&big(t), &w.v, &w.x, &w.y), "t = {t}");
        }
    }

    #[test]
    fn budget_exceeded() {
        let err = lemma33_witness(&big(1_000_000), 3).unwrap_err();
        assert!(matches!(err, GadgetError::BudgetExceeded { stage: SearchStage::Pell, .. }));
    }

    #[test]
    fn refutes_non_integers() {
        let f = FieldD::GAUSSIAN;
        for t in [QuadInt::new(f, 0, 1), QuadInt::new(f, 1, 1)] {
            assert!(refute_lemma33_box(&t, 4).unwrap());
        }
        assert_eq!(
            refute_lemma33_box(&QuadInt::from_int(f, 2), 4),
            Err(GadgetError::IntegerArgument(big(2)))
        );
    }
}
