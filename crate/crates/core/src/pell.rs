//! The Pell equation `X^2 - 3Y^2 = 1`.
//!
//! Solutions with `X, Y >= 0` are `X_n + Y_n*sqrt(3) = (2 + sqrt(3))^n`,
//! generated by `X_{n+1} = 2X_n + 3Y_n`, `Y_{n+1} = X_n + 2Y_n`. The residue
//! engine in [`period_search`] decides congruence conditions on the sequence
//! by running the recurrence modulo `m` until the state cycles.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::quad::exact_sqrt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PellPair {
    pub index: u64,
    pub x: BigInt,
    pub y: BigInt,
}

impl PellPair {
    fn initial() -> Self {
        PellPair {
            index: 0,
            x: BigInt::one(),
            y: BigInt::zero(),
        }
    }

    fn step(&self) -> Self {
        PellPair {
            index: self.index + 1,
            x: &self.x * 2 + &self.y * 3,
            y: &self.x + &self.y * 2,
        }
    }

    pub fn satisfies_equation(&self) -> bool {
        &self.x * &self.x - BigInt::from(3) * &self.y * &self.y == BigInt::one()
    }
}

/// Unbounded stream `(1,0), (2,1), (7,4), ...`.
#[derive(Debug, Clone)]
pub struct PellIter {
    next: PellPair,
}

impl Iterator for PellIter {
    type Item = PellPair;

    fn next(&mut self) -> Option<PellPair> {
        let following = self.next.step();
        Some(core::mem::replace(&mut self.next, following))
    }
}

pub fn pell_iter() -> PellIter {
    PellIter {
        next: PellPair::initial(),
    }
}

/// The pair with the given index, by running the recurrence.
pub fn pell_at(index: u64) -> PellPair {
    let mut p = PellPair::initial();
    while p.index < index {
        p = p.step();
    }
    p
}

/// `X >= 0` with `X^2 = 3Y^2 + 1`, which exists exactly when `|Y|` is a Pell `Y`-value.
pub fn pell_x_for(y: &BigInt) -> Option<BigInt> {
    exact_sqrt(&(BigInt::from(3) * y * y + 1))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Odd,
    Even,
    Any,
}

impl Parity {
    fn admits(self, index: u64) -> bool {
        match self {
            Parity::Odd => index % 2 == 1,
            Parity::Even => index.is_multiple_of(2),
            Parity::Any => true,
        }
    }
}

/// `x_coeff * X' + y_coeff * Y = rhs (mod m)` where `X' = X/2` when
/// `halve_x` is set (only even `X` can then satisfy it) and `X' = X` otherwise.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearCondition {
    pub x_coeff: BigInt,
    pub y_coeff: BigInt,
    pub rhs: BigInt,
    pub halve_x: bool,
}

impl LinearCondition {
    /// `Y = rhs`.
    pub fn y_equals(rhs: BigInt) -> Self {
        LinearCondition {
            x_coeff: BigInt::zero(),
            y_coeff: BigInt::one(),
            rhs,
            halve_x: false,
        }
    }

    /// `X/2 + Y = 0`.
    pub fn half_x_plus_y_zero() -> Self {
        LinearCondition {
            x_coeff: BigInt::one(),
            y_coeff: BigInt::one(),
            rhs: BigInt::zero(),
            halve_x: true,
        }
    }

    /// Evaluates on residues modulo the working modulus (`2m` when halving).
    fn holds(&self, x_res: &BigInt, y_res: &BigInt, modulus: &BigInt) -> bool {
        let x = if self.halve_x {
            if x_res.is_odd() {
                return false;
            }
            x_res / 2
        } else {
            x_res.clone()
        };
        (&self.x_coeff * x + &self.y_coeff * y_res - &self.rhs).is_multiple_of(modulus)
    }

    /// Evaluates on the exact pair.
    pub fn holds_exact(&self, pair: &PellPair, modulus: &BigInt) -> bool {
        if self.halve_x && pair.x.is_odd() {
            return false;
        }
        let x = if self.halve_x { &pair.x / 2 } else { pair.x.clone() };
        (&self.x_coeff * x + &self.y_coeff * &pair.y - &self.rhs).is_multiple_of(modulus)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SearchOutcome {
    /// First admissible index satisfying the condition, with exact values.
    Found(PellPair),
    /// The residue state returned to its start without a hit: no index works.
    ExhaustedPeriod { period: u64 },
    BudgetExceeded,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PellError {
    #[error("modulus must be at least 2, got {0}")]
    ModulusTooSmall(BigInt),
    #[error("budget must be at least 1")]
    ZeroBudget,
}

/// Searches for the first index of the given parity whose pair satisfies
/// `cond` modulo `modulus`, examining at most `budget` indices.
pub fn period_search(
    modulus: &BigInt,
    cond: &LinearCondition,
    parity: Parity,
    budget: u64,
) -> Result<SearchOutcome, PellError> {
    Ok(match period_search_first(modulus, core::slice::from_ref(cond), parity, budget)? {
        FirstHit::Found(p, _) => SearchOutcome::Found(p),
        FirstHit::ExhaustedPeriod { period } => SearchOutcome::ExhaustedPeriod { period },
        FirstHit::BudgetExceeded => SearchOutcome::BudgetExceeded,
    })
}

/// Outcome of [`period_search_first`]; `Found` carries the position of the
/// first condition that matched.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FirstHit {
    Found(PellPair, usize),
    ExhaustedPeriod { period: u64 },
    BudgetExceeded,
}

/// Like [`period_search`] for several conditions scanned in one pass: the
/// smallest admissible index satisfying any of them wins, earlier
/// conditions winning ties.
pub fn period_search_first(
    modulus: &BigInt,
    conds: &[LinearCondition],
    parity: Parity,
    budget: u64,
) -> Result<FirstHit, PellError> {
    if modulus < &BigInt::from(2) {
        return Err(PellError::ModulusTooSmall(modulus.clone()));
    }
    if budget == 0 {
        return Err(PellError::ZeroBudget);
    }
    let work = if conds.iter().any(|c| c.halve_x) {
        modulus * 2
    } else {
        modulus.clone()
    };
    let one = BigInt::one() % &work;
    let (mut x, mut y) = (one.clone(), BigInt::zero());
    let mut index = 0u64;
    loop {
        if parity.admits(index) {
            if let Some(k) = conds.iter().position(|c| c.holds(&x, &y, modulus)) {
                return Ok(FirstHit::Found(pell_at(index), k));
            }
        }
        if index + 1 >= budget {
            return Ok(FirstHit::BudgetExceeded);
        }
        let nx = (&x * 2 + &y * 3) % &work;
        let ny = (&x + &y * 2) % &work;
        x = nx;
        y = ny;
        index += 1;
        // (residues, index parity) is the full state seen by the predicate
        if index.is_multiple_of(2) && x == one && y.is_zero() {
            return Ok(FirstHit::ExhaustedPeriod { period: index });
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec::Vec;

    fn big(v: i64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn first_pairs() {
        let got: Vec<(BigInt, BigInt)> = pell_iter().take(6).map(|p| (p.x, p.y)).collect();
        let want = [(1, 0), (2, 1), (7, 4), (26, 15), (97, 56), (362, 209)];
        for (g, w) in got.iter().zip(want) {
            assert_eq!(g, &(big(w.0), big(w.1)));
        }
        assert_eq!(big(26 * 26) - big(3 * 15 * 15), big(1));
    }

    #[test]
    fn pell_x_lookup() {
        assert_eq!(pell_x_for(&big(209)), Some(big(362)));
        assert_eq!(pell_x_for(&big(0)), Some(big(1)));
        assert_eq!(pell_x_for(&big(2)), None);
    }

    #[test]
    fn half_x_plus_y_mod_six() {
        let out = period_search(&big(6), &LinearCondition::half_x_plus_y_zero(), Parity::Odd, 1000).unwrap();
        let SearchOutcome::Found(p) = out else { panic!("{out:?}") };
        assert_eq!((p.index, p.x, p.y), (5, big(362), big(209)));
    }

    #[test]
    fn y_odd_mod_two() {
        let out = period_search(&big(2), &LinearCondition::y_equals(big(1)), Parity::Any, 10).unwrap();
        assert_eq!(out, SearchOutcome::Found(pell_at(1)));
    }

    #[test]
    fn budget_is_respected() {
        let m = big(1_000_000_007);
        let out = period_search(&m, &LinearCondition::y_equals(big(-5)), Parity::Any, 10).unwrap();
        assert_eq!(out, SearchOutcome::BudgetExceeded);
    }

    #[test]
    fn exhausted_period_is_sound() {
        for m in 2..40i64 {
            for target in 0..m {
                let cond = LinearCondition::y_equals(big(target));
                for parity in [Parity::Odd, Parity::Even, Parity::Any] {
                    let out = period_search(&big(m), &cond, parity, 1_000_000).unwrap();
                    match out {
                        SearchOutcome::ExhaustedPeriod { period } => {
                            for p in pell_iter().take(2 * period as usize + 2) {
                                assert!(!(parity.admits(p.index) && cond.holds_exact(&p, &big(m))));
                            }
                        }
                        SearchOutcome::Found(p) => {
                            assert!(parity.admits(p.index) && cond.holds_exact(&p, &big(m)));
                            for q in pell_iter().take(p.index as usize) {
                                assert!(!(parity.admits(q.index) && cond.holds_exact(&q, &big(m))));
                            }
                        }
                        SearchOutcome::BudgetExceeded => panic!("budget too small for m = {m}"),
                    }
                }
            }
        }
    }

    #[test]
    fn rejects_bad_arguments() {
        let cond = LinearCondition::y_equals(big(0));
        assert!(period_search(&big(1), &cond, Parity::Any, 5).is_err());
        assert!(period_search(&big(5), &cond, Parity::Any, 0).is_err());
    }
}
