//! Pell-sequence checks: the defining equation, the parity pattern, `Y`
//! membership, and soundness of the residue-period search against a
//! brute-force residue scan.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use zreduce_core::pell::{
    pell_iter, pell_x_for, period_search, LinearCondition, Parity, PellPair, SearchOutcome,
};

use super::{Draft, SuiteError, SuiteParams};

/// Every `Y <= MEMBERSHIP_SCAN` is tested for membership directly.
const MEMBERSHIP_SCAN: u64 = 100_000;
/// Moduli `2..=PERIOD_MODULI` are cross-checked against the residue scan.
const PERIOD_MODULI: i64 = 24;

/// First index of the given parity at which `cond` holds, scanning residues
/// modulo `work` for `limit` steps.
fn scan(modulus: i64, cond: &Scan, parity: Parity, limit: u64) -> Option<u64> {
    let work = if cond.halve_x { 2 * modulus } else { modulus };
    let (mut x, mut y) = (1 % work, 0i64);
    for index in 0..limit {
        let admitted = match parity {
            Parity::Odd => index % 2 == 1,
            Parity::Even => index % 2 == 0,
            Parity::Any => true,
        };
        if admitted {
            let xv = if cond.halve_x {
                (x % 2 == 0).then_some(x / 2)
            } else {
                Some(x)
            };
            if let Some(xv) = xv {
                if (cond.x * xv + cond.y * y - cond.rhs).rem_euclid(modulus) == 0 {
                    return Some(index);
                }
            }
        }
        (x, y) = ((2 * x + 3 * y) % work, (x + 2 * y) % work);
    }
    None
}

struct Scan {
    x: i64,
    y: i64,
    rhs: i64,
    halve_x: bool,
}

impl Scan {
    fn condition(&self) -> LinearCondition {
        LinearCondition {
            x_coeff: self.x.into(),
            y_coeff: self.y.into(),
            rhs: self.rhs.into(),
            halve_x: self.halve_x,
        }
    }
}

pub(super) fn pell(p: &SuiteParams, draft: &mut Draft) -> Result<(), SuiteError> {
    let count = p.limit.unwrap_or(50);
    if count < 31 {
        return Err(SuiteError::InvalidParameter(
            "the Pell suite needs at least 31 pairs for the parity check".into(),
        ));
    }
    draft.param("pairs", count);
    draft.param("membership scan", format!("Y <= {MEMBERSHIP_SCAN}"));
    draft.param("period moduli", format!("2..={PERIOD_MODULI}"));

    let pairs: Vec<PellPair> = pell_iter().take(count as usize).collect();
    let t = draft.tally();
    t.check(
        pairs[0].x.is_one() && pairs[0].y.is_zero(),
        || vec![0],
        || "index 0 is not (1, 0)".into(),
    );
    for pair in &pairs {
        let ok = pair.satisfies_equation() && pair.x > BigInt::zero() && pair.y >= BigInt::zero();
        t.check(ok, || vec![1, pair.index], || {
            format!("index {}: X^2 - 3Y^2 != 1 for ({}, {})", pair.index, pair.x, pair.y)
        });
    }
    for pair in pairs.iter().take(31) {
        let even_x = pair.x.is_even();
        t.check(even_x == (pair.index % 2 == 1), || vec![2, pair.index], || {
            format!("index {}: X = {} breaks the parity pattern", pair.index, pair.x)
        });
    }

    // membership: every small Y, then each Y_n and its neighbours
    let small_ys: Vec<u64> = pairs
        .iter()
        .map(|p| &p.y)
        .filter(|y| **y <= BigInt::from(MEMBERSHIP_SCAN))
        .map(|y| u64::try_from(y).expect("small"))
        .collect();
    for y in 0..=MEMBERSHIP_SCAN {
        let member = small_ys.contains(&y);
        let got = pell_x_for(&BigInt::from(y));
        t.check(got.is_some() == member, || vec![3, y], || {
            format!("Y = {y}: membership {member}, lookup {got:?}")
        });
    }
    for pair in &pairs {
        let got = pell_x_for(&pair.y);
        t.check(got.as_ref() == Some(&pair.x), || vec![4, pair.index], || {
            format!("Y_{} = {}: lookup {got:?}", pair.index, pair.y)
        });
        for delta in [-1i64, 1] {
            let y = &pair.y + delta;
            if y < BigInt::zero() || pairs.iter().any(|q| q.y == y) {
                continue;
            }
            let got = pell_x_for(&y);
            t.check(got.is_none(), || vec![5, pair.index], || format!("Y = {y}: lookup {got:?}"));
        }
    }

    // pinned search outcomes
    let half = LinearCondition::half_x_plus_y_zero();
    let found = period_search(&BigInt::from(6), &half, Parity::Odd, 1000);
    t.check(
        matches!(&found, Ok(SearchOutcome::Found(q)) if q.index == 5 && q.x == BigInt::from(362) && q.y == BigInt::from(209)),
        || vec![6, 0],
        || format!("modulus 6, X/2 + Y = 0, odd index: {found:?}"),
    );
    let found = period_search(&BigInt::from(2), &LinearCondition::y_equals(1.into()), Parity::Any, 1000);
    t.check(
        matches!(&found, Ok(SearchOutcome::Found(q)) if q.index == 1),
        || vec![6, 1],
        || format!("modulus 2, Y = 1: {found:?}"),
    );
    let found = period_search(&BigInt::from(1_000_000_007), &half, Parity::Odd, 10);
    t.check(
        found == Ok(SearchOutcome::BudgetExceeded),
        || vec![6, 2],
        || format!("modulus 10^9 + 7, budget 10: {found:?}"),
    );

    // soundness against the residue scan; 2 * (2m)^2 steps cover every
    // (residue pair, index parity) state
    let mut exhausted = 0u64;
    let mut hits = 0u64;
    for m in 2..=PERIOD_MODULI {
        let mut conds: Vec<Scan> = (0..m)
            .map(|rhs| Scan {
                x: 0,
                y: 1,
                rhs,
                halve_x: false,
            })
            .collect();
        conds.extend((0..m).map(|rhs| Scan {
            x: 1,
            y: 1,
            rhs,
            halve_x: true,
        }));
        conds.push(Scan {
            x: 1,
            y: -1,
            rhs: 0,
            halve_x: false,
        });
        let limit = 8 * (m as u64) * (m as u64) + 2;
        for (ci, cond) in conds.iter().enumerate() {
            for (pi, parity) in [Parity::Any, Parity::Odd, Parity::Even].into_iter().enumerate() {
                let expect = scan(m, cond, parity, limit);
                let got = period_search(&BigInt::from(m), &cond.condition(), parity, 1_000_000);
                let ok = match (&got, expect) {
                    (Ok(SearchOutcome::Found(q)), Some(i)) => {
                        hits += 1;
                        q.index == i && cond.condition().holds_exact(q, &BigInt::from(m))
                    }
                    (Ok(SearchOutcome::ExhaustedPeriod { .. }), None) => {
                        exhausted += 1;
                        true
                    }
                    _ => false,
                };
                t.check(ok, || vec![7, m as u64, ci as u64, pi as u64], || {
                    format!(
                        "modulus {m}, condition {}X' + {}Y = {} (halve {}), {parity:?}: search {got:?}, scan {expect:?}",
                        cond.x, cond.y, cond.rhs, cond.halve_x
                    )
                });
            }
        }
    }
    draft.finding(format!(
        "period search: {hits} hits and {exhausted} exhausted periods agree with the residue scan"
    ));
    Ok(())
}
