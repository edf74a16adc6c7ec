//! Sweeps for the Gaussian-integer gadgets: the relation polynomial, the
//! conjunction form, the integer-witness search and the nonzeroness form.

use num_bigint::BigInt;
use zreduce_core::gadgets::lemma33::is_integer_witness;
use zreduce_core::gadgets::nonzero::tung_product;
use zreduce_core::gadgets::{
    conj_value, find_lemma33_in_box, lemma33_witness, nonzero_witness, relation_decode, relation_f,
    relation_m_witness, GadgetError,
};
use zreduce_core::{FieldD, QuadInt, Ring};

use super::small::SmallGauss;
use super::{sharded, Draft, SuiteError, SuiteName, SuiteParams, Tally};

const G: FieldD = FieldD::GAUSSIAN;

fn g(a: i64, b: i64) -> QuadInt {
    QuadInt::new(G, a, b)
}

fn gbox(bound: u32) -> Vec<QuadInt> {
    QuadInt::enumerate_box(G, bound).collect()
}

/// Decimal text, shortened to a digit count past 40 characters.
pub(crate) fn brief(x: &BigInt) -> String {
    let s = x.to_string();
    if s.len() <= 40 {
        s
    } else {
        let digits = s.trim_start_matches('-').len();
        format!("{}<{digits} digits>", if x.sign() == num_bigint::Sign::Minus { "-" } else { "" })
    }
}

pub(super) fn lemma31(p: &SuiteParams, draft: &mut Draft) -> Result<(), SuiteError> {
    p.gaussian_only(SuiteName::Lemma31)?;
    let bound = p.box_bound.unwrap_or(2);
    draft.param("d", 1);
    draft.param("box", bound);

    for (args, roots, quotient) in [([1, 4, 1, 5, 2], (1, 2), 5), ([9, 4, 2, 10, 0], (3, 2), 5)] {
        let [a1, a2, s, t, m] = args.map(|v| g(v, 0));
        let ok = relation_f(&a1, &a2, &s, &t, &m).is_zero()
            && relation_decode(&a1, &a2, &s, &t, &m).is_ok_and(|d| {
                d.root1 == g(roots.0, 0) && d.root2 == g(roots.1, 0) && d.quotient == g(quotient, 0)
            });
        draft.tally().check(ok, Vec::new, || format!("worked example f{args:?} does not decode to {roots:?}"));
    }

    let elems = gbox(bound);
    let idx: Vec<usize> = (0..elems.len()).collect();

    let forward = sharded(&idx, p.threads, |&i| {
        let mut t = Tally::default();
        let mut equal = 0u64;
        let alpha1 = &elems[i];
        for (j, alpha2) in elems.iter().enumerate() {
            let (a1, a2) = (alpha1 * alpha1, alpha2 * alpha2);
            if a1 == a2 {
                equal += 1;
                continue;
            }
            for (k, s) in elems.iter().enumerate().filter(|(_, s)| !s.is_zero()) {
                for (l, q) in elems.iter().enumerate() {
                    let tt = s * q;
                    let res = relation_m_witness(alpha1, alpha2, s, &tt);
                    let ok = res.as_ref().is_ok_and(|m| relation_f(&a1, &a2, s, &tt, m).is_zero());
                    t.check(
                        ok,
                        || vec![0, i as u64, j as u64, k as u64, l as u64],
                        || format!("forward: alpha = ({alpha1}, {alpha2}), S = {s}, T = {tt}: {res:?}"),
                    );
                }
            }
        }
        (t, equal)
    });
    let mut equal_pairs = 0;
    for (t, e) in forward {
        draft.tally().merge(t);
        equal_pairs += e;
    }

    let small: Vec<SmallGauss> = elems.iter().map(SmallGauss::from_quad).collect();
    let backward = sharded(&idx, p.threads, |&i| {
        let mut t = Tally::default();
        let (mut decoded, mut equal) = (0u64, 0u64);
        for j in 0..small.len() {
            for k in (0..small.len()).filter(|&k| !small[k].is_zero_elem()) {
                for l in 0..small.len() {
                    for mi in 0..small.len() {
                        t.case();
                        let f = relation_f(&small[i], &small[j], &small[k], &small[l], &small[mi]);
                        if !f.is_zero_elem() {
                            continue;
                        }
                        if i == j {
                            equal += 1;
                            continue;
                        }
                        let (a1, a2, s, tt, m) = (&elems[i], &elems[j], &elems[k], &elems[l], &elems[mi]);
                        let ok = match relation_decode(a1, a2, s, tt, m) {
                            Ok(d) => {
                                &(&d.root1 * &d.root1) == a1
                                    && &(&d.root2 * &d.root2) == a2
                                    && &(s * &d.quotient) == tt
                            }
                            Err(_) => false,
                        };
                        if ok {
                            decoded += 1;
                        } else {
                            t.violation(
                                vec![1, i as u64, j as u64, k as u64, l as u64, mi as u64],
                                format!(
                                    "backward: f({a1}, {a2}, {s}, {tt}, {m}) = 0 but decoding fails: {:?}",
                                    relation_decode(a1, a2, s, tt, m)
                                ),
                            );
                        }
                    }
                }
            }
        }
        (t, decoded, equal)
    });
    let (mut decoded, mut equal_zeros) = (0, 0);
    for (t, d, e) in backward {
        draft.tally().merge(t);
        decoded += d;
        equal_zeros += e;
    }
    draft.finding(format!("forward: {equal_pairs} root pairs skipped because A1 = A2"));
    draft.finding(format!("backward: {decoded} zeros of f decoded"));
    draft.finding(format!("backward: {equal_zeros} zeros with A1 = A2 skipped"));
    Ok(())
}

pub(super) fn lemma32(p: &SuiteParams, draft: &mut Draft) -> Result<(), SuiteError> {
    p.gaussian_only(SuiteName::Lemma32)?;
    let bound = p.box_bound.unwrap_or(6);
    draft.param("d", 1);
    draft.param("box", bound);
    let elems = gbox(bound);
    let idx: Vec<usize> = (0..elems.len()).collect();
    let results = sharded(&idx, p.threads, |&i| {
        let mut t = Tally::default();
        let mut zeros = 0u64;
        for (j, y) in elems.iter().enumerate() {
            let x = &elems[i];
            let vanishes = conj_value(x, y).is_zero();
            zeros += u64::from(vanishes);
            t.check(
                vanishes == (x.is_zero() && y.is_zero()),
                || vec![i as u64, j as u64],
                || format!("x^2 + 2y^2 at ({x}, {y}): vanishes = {vanishes}"),
            );
        }
        (t, zeros)
    });
    let mut zeros = 0;
    for (t, z) in results {
        draft.tally().merge(t);
        zeros += z;
    }
    draft.finding(format!("x^2 + 2y^2 has {zeros} zero(s) in the box"));

    let (a, b, c) = (g(0, 2), g(0, 0), g(1, 0));
    let naive = &(&(&a * &a) + &b.pow(2).scale(&2.into())) + &c.pow(2).scale(&4.into());
    draft.tally().check(naive.is_zero(), Vec::new, || {
        format!("a^2 + 2b^2 + 4c^2 at ({a}, {b}, {c}) is {naive}, expected 0")
    });
    if naive.is_zero() {
        draft.finding(format!(
            "three-term extension a^2 + 2b^2 + 4c^2 vanishes at ({a}, {b}, {c}), so conjunctions combine pairwise"
        ));
    }
    Ok(())
}

pub(super) fn lemma33(p: &SuiteParams, draft: &mut Draft) -> Result<(), SuiteError> {
    p.gaussian_only(SuiteName::Lemma33)?;
    let (lo, hi) = p.t_range.unwrap_or((-3, 3));
    if lo > hi {
        return Err(SuiteError::InvalidParameter(format!("empty t range {lo}..{hi}")));
    }
    let bound = p.box_bound.unwrap_or(4);
    draft.param("t", format!("{lo}..={hi}"));
    draft.param("budget", p.budget);
    draft.param("box", bound);

    let ts: Vec<i64> = (lo..=hi).collect();
    let results = sharded(&ts, p.threads, |&t| (t, lemma33_witness(&BigInt::from(t), p.budget)));
    for (pos, (t, res)) in results.into_iter().enumerate() {
        let tb = BigInt::from(t);
        match res {
            Ok(w) => {
                let ok = is_integer_witness(&tb, &w.v, &w.x, &w.y)
                    && (t != 0 || [&w.v, &w.x, &w.y] == [&BigInt::from(65), &BigInt::from(0), &BigInt::from(209)]);
                draft.tally().check(ok, || vec![0, pos as u64], || {
                    format!("t = {t}: witness ({}, {}, {}) fails", w.v, w.x, w.y)
                });
                draft.finding(format!(
                    "t = {t}: (v, x, y) = ({}, {}, {}); Pell index {}, square index {} ({} branch)",
                    brief(&w.v),
                    brief(&w.x),
                    brief(&w.y),
                    w.pell_pair.index,
                    w.square_pair.index,
                    if w.sign > 0 { "+" } else { "-" }
                ));
            }
            Err(e @ (GadgetError::BudgetExceeded { .. } | GadgetError::ExhaustedPeriod { .. })) => {
                draft.tally().case();
                draft.finding(format!("t = {t}: {e}"));
            }
            Err(e) => {
                draft.tally().case();
                draft.tally().violation(vec![0, pos as u64], format!("t = {t}: {e}"));
            }
        }
    }

    let targets = [g(0, 1), g(0, -1), g(1, 1), g(0, 2)];
    let refuted = sharded(&targets, p.threads, |t| find_lemma33_in_box(t, bound));
    for (pos, (t, res)) in targets.iter().zip(refuted).enumerate() {
        match res {
            Ok(None) => {
                draft.tally().case();
                draft.finding(format!("t = {t}: no witness with |coordinates| <= {bound}"));
            }
            Ok(Some((v, x, y))) => {
                draft.tally().case();
                draft
                    .tally()
                    .violation(vec![1, pos as u64], format!("t = {t}: box witness (v, x, y) = ({v}, {x}, {y})"));
            }
            Err(e) => {
                draft.tally().case();
                draft.tally().violation(vec![1, pos as u64], format!("t = {t}: {e}"));
            }
        }
    }
    Ok(())
}

pub(super) fn lemma34(p: &SuiteParams, draft: &mut Draft) -> Result<(), SuiteError> {
    p.gaussian_only(SuiteName::Lemma34)?;
    let limit = p.limit.unwrap_or(1000);
    let bound = p.box_bound.unwrap_or(3);
    let limit_i = i64::try_from(limit)
        .map_err(|_| SuiteError::InvalidParameter(format!("limit {limit} is too large")))?;
    draft.param("limit", limit);
    draft.param("box", bound);

    let zero_rejected = matches!(nonzero_witness(&BigInt::from(0)), Err(GadgetError::Zero(_)));
    draft.tally().check(zero_rejected, || vec![0], || "m = 0 was not rejected".into());
    for (m, expected) in [(6, (-2, -1)), (1, (0, 0)), (-5, (-3, 0))] {
        let got = nonzero_witness(&BigInt::from(m));
        let want = (BigInt::from(expected.0), BigInt::from(expected.1));
        draft.tally().check(got.as_ref() == Ok(&want), || vec![0], || {
            format!("m = {m}: expected {expected:?}, got {got:?}")
        });
    }
    for (pos, m) in (-limit_i..=limit_i).filter(|&m| m != 0).enumerate() {
        let mb = BigInt::from(m);
        let res = nonzero_witness(&mb);
        let ok = res.as_ref().is_ok_and(|(r, s)| tung_product(r, s) == mb);
        draft
            .tally()
            .check(ok, || vec![1, pos as u64], || format!("m = {m}: {res:?}"));
    }

    let elems = gbox(bound);
    for (i, r) in elems.iter().enumerate() {
        for (j, s) in elems.iter().enumerate() {
            let v = tung_product(r, s);
            draft.tally().check(!v.is_zero(), || vec![2, i as u64, j as u64], || {
                format!("(2r+1)(3s+1) = 0 at r = {r}, s = {s}")
            });
        }
    }
    Ok(())
}
