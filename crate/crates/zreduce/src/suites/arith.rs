//! Sweeps over quadratic-integer boxes: the norm inequality for `3x + 1`,
//! the integrality criterion, its surd-part bound, and the rationality
//! lemma for `z`.

use num_bigint::BigInt;
use num_rational::BigRational;
use zreduce_core::gadgets::integrality::{thm12_parts, three_x_plus_one};
use zreduce_core::gadgets::{lemma22_check, Lemma22Outcome};
use zreduce_core::{FieldD, QuadInt};

use super::{join, sharded, Draft, SuiteError, SuiteParams, Tally, DEFAULT_DS};

/// All index tuples of length `n` over `0..len`, lexicographic.
pub(crate) fn tuples(len: usize, n: usize) -> impl Iterator<Item = Vec<usize>> {
    let mut next = (len > 0 || n == 0).then(|| vec![0; n]);
    std::iter::from_fn(move || {
        let cur = next.take()?;
        let mut succ = cur.clone();
        for i in (0..n).rev() {
            succ[i] += 1;
            if succ[i] < len {
                next = Some(succ);
                break;
            }
            succ[i] = 0;
        }
        Some(cur)
    })
}

fn key(prefix: &[usize], idx: &[usize]) -> Vec<u64> {
    prefix.iter().chain(idx).map(|&i| i as u64).collect()
}

fn show(xs: &[QuadInt]) -> String {
    format!("[{}]", xs.iter().map(ToString::to_string).collect::<Vec<_>>().join("; "))
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

pub(super) fn lemma21(p: &SuiteParams, draft: &mut Draft) -> Result<(), SuiteError> {
    let fields = p.fields(&DEFAULT_DS)?;
    let bound = p.box_bound.unwrap_or(8);
    draft.param("d", join(&fields.iter().map(|f| f.d()).collect::<Vec<_>>()));
    draft.param("box", bound);
    let jobs: Vec<(usize, FieldD)> = fields.into_iter().enumerate().collect();
    let tallies = sharded(&jobs, p.threads, |&(di, field)| {
        let mut t = Tally::default();
        for (i, x) in QuadInt::enumerate_box(field, bound).enumerate() {
            let nx = x.norm();
            let ny = three_x_plus_one(&x).norm();
            t.check(
                ny >= nx && ny >= BigInt::from(1),
                || key(&[di], &[i]),
                || format!("d = {}, x = {x}: N(3x+1) = {ny}, N(x) = {nx}", field.d()),
            );
        }
        t
    });
    draft.tally().merge(Tally::merged(tallies));
    Ok(())
}

/// One job per `(field, n, first coordinate)` of the integrality sweep.
struct SweepJob {
    di: usize,
    field: FieldD,
    n: usize,
    first: usize,
}

fn sweep_jobs(fields: &[FieldD], bound: u32, max_n: usize) -> (Vec<Vec<QuadInt>>, Vec<SweepJob>) {
    let boxes: Vec<Vec<QuadInt>> = fields
        .iter()
        .map(|&f| QuadInt::enumerate_box(f, bound).collect())
        .collect();
    let mut jobs = Vec::new();
    for (di, &field) in fields.iter().enumerate() {
        for n in 1..=max_n {
            for first in 0..boxes[di].len() {
                jobs.push(SweepJob { di, field, n, first });
            }
        }
    }
    (boxes, jobs)
}

/// Calls `f(job, index tuple, xs)` for every input of the job.
fn for_each_input(boxes: &[Vec<QuadInt>], job: &SweepJob, mut f: impl FnMut(&[usize], &[QuadInt])) {
    let elems = &boxes[job.di];
    for rest in tuples(elems.len(), job.n - 1) {
        let mut idx = Vec::with_capacity(job.n);
        idx.push(job.first);
        idx.extend(rest);
        let xs: Vec<QuadInt> = idx.iter().map(|&i| elems[i].clone()).collect();
        f(&idx, &xs);
    }
}

fn sweep_params(p: &SuiteParams, draft: &mut Draft) -> Result<(Vec<FieldD>, u32, usize), SuiteError> {
    let fields = p.fields(&DEFAULT_DS)?;
    let bound = p.box_bound.unwrap_or(2);
    let max_n = p.n.unwrap_or(2);
    if max_n == 0 {
        return Err(SuiteError::InvalidParameter("n must be at least 1".into()));
    }
    draft.param("d", join(&fields.iter().map(|f| f.d()).collect::<Vec<_>>()));
    draft.param("box", bound);
    draft.param("n", format!("1..={max_n}"));
    Ok((fields, bound, max_n))
}

pub(super) fn thm12(p: &SuiteParams, draft: &mut Draft) -> Result<(), SuiteError> {
    let (fields, bound, max_n) = sweep_params(p, draft)?;
    let (boxes, jobs) = sweep_jobs(&fields, bound, max_n);
    let tallies = sharded(&jobs, p.threads, |job| {
        let mut t = Tally::default();
        for_each_input(&boxes, job, |idx, xs| {
            let all_integer = xs.iter().all(|x| x.as_integer().is_some());
            match thm12_parts(job.field, xs) {
                Ok((y, z)) => {
                    let rational = y.to_rat().checked_add(&z).map(|v| v.is_rational());
                    t.check(
                        rational == Ok(all_integer),
                        || key(&[job.di, job.n], idx),
                        || {
                            format!(
                                "d = {}, xs = {}: rational = {rational:?}, all integers = {all_integer}",
                                job.field.d(),
                                show(xs)
                            )
                        },
                    );
                }
                Err(e) => t.violation(
                    key(&[job.di, job.n], idx),
                    format!("d = {}, xs = {}: {e}", job.field.d(), show(xs)),
                ),
            }
        });
        t
    });
    draft.tally().merge(Tally::merged(tallies));
    Ok(())
}

pub(super) fn bound22(p: &SuiteParams, draft: &mut Draft) -> Result<(), SuiteError> {
    let (fields, bound, max_n) = sweep_params(p, draft)?;
    let (boxes, jobs) = sweep_jobs(&fields, bound, max_n);
    let sharp = rat(49, 64) * rat(49, 64);
    let results = sharded(&jobs, p.threads, |job| {
        let mut t = Tally::default();
        let d = BigRational::from_integer(job.field.d().into());
        let mut max_scaled = rat(0, 1);
        for_each_input(&boxes, job, |idx, xs| {
            let (_, z) = match thm12_parts(job.field, xs) {
                Ok(v) => v,
                Err(e) => {
                    t.violation(
                        key(&[job.di, job.n], idx),
                        format!("d = {}, xs = {}: {e}", job.field.d(), show(xs)),
                    );
                    return;
                }
            };
            let scaled = &d * z.s() * z.s();
            t.check(
                scaled < rat(1, 1),
                || key(&[job.di, job.n], idx),
                || format!("d = {}, xs = {}: d*s(Z)^2 = {scaled} >= 1", job.field.d(), show(xs)),
            );
            if job.field.d() == 3 && xs.iter().all(|x| !x.is_zero()) {
                t.check(
                    scaled < sharp,
                    || key(&[job.di, job.n], idx),
                    || format!("d = 3, xs = {}: 3*s(Z)^2 = {scaled} >= (49/64)^2", show(xs)),
                );
            }
            if scaled > max_scaled {
                max_scaled = scaled;
            }
        });
        (job.di, t, max_scaled)
    });
    let mut maxima: Vec<BigRational> = vec![rat(0, 1); fields.len()];
    for (di, t, m) in results {
        draft.tally().merge(t);
        if m > maxima[di] {
            maxima[di] = m;
        }
    }
    for (field, m) in fields.iter().zip(maxima) {
        draft.finding(format!("d = {}: max d*s(Z)^2 = {m}", field.d()));
    }
    Ok(())
}

pub(super) fn lemma22(p: &SuiteParams, draft: &mut Draft) -> Result<(), SuiteError> {
    let fields = p.fields(&DEFAULT_DS)?;
    let bound = p.box_bound.unwrap_or(2);
    let n = p.n.unwrap_or(1);
    if n == 0 {
        return Err(SuiteError::InvalidParameter("n must be at least 1".into()));
    }
    draft.param("d", join(&fields.iter().map(|f| f.d()).collect::<Vec<_>>()));
    draft.param("box", bound);
    draft.param("n", n);
    let boxes: Vec<Vec<QuadInt>> = fields
        .iter()
        .map(|&f| QuadInt::enumerate_box(f, bound).collect())
        .collect();
    let jobs: Vec<(usize, usize)> = boxes
        .iter()
        .enumerate()
        .flat_map(|(di, b)| (0..b.len()).filter(|&i| !b[i].is_zero()).map(move |i| (di, i)))
        .collect();
    let results = sharded(&jobs, p.threads, |&(di, i0)| {
        let elems = &boxes[di];
        let x0 = &elems[i0];
        let mut t = Tally::default();
        let (mut holds, mut fails) = (0u64, 0u64);
        for idx in tuples(elems.len(), n) {
            let xs: Vec<QuadInt> = idx.iter().map(|&i| elems[i].clone()).collect();
            for (iz, z) in elems.iter().enumerate() {
                let k = || {
                    let mut k = key(&[di, i0], &idx);
                    k.push(iz as u64);
                    k
                };
                match lemma22_check(x0, &xs, z) {
                    Ok(Lemma22Outcome::Holds) => {
                        holds += 1;
                        t.case();
                    }
                    Ok(Lemma22Outcome::HypothesisFails) => {
                        fails += 1;
                        t.case();
                    }
                    Ok(Lemma22Outcome::Violated) => {
                        t.case();
                        t.violation(
                            k(),
                            format!("d = {}, x0 = {x0}, xs = {}, z = {z}: rational sum with z outside Z", fields[di].d(), show(&xs)),
                        );
                    }
                    Err(e) => {
                        t.case();
                        t.violation(k(), format!("d = {}, x0 = {x0}, xs = {}, z = {z}: {e}", fields[di].d(), show(&xs)));
                    }
                }
            }
        }
        (di, t, holds, fails)
    });
    let mut counts = vec![(0u64, 0u64); fields.len()];
    for (di, t, h, f) in results {
        draft.tally().merge(t);
        counts[di].0 += h;
        counts[di].1 += f;
    }
    for (field, (h, f)) in fields.iter().zip(counts) {
        draft.finding(format!("d = {}: hypothesis holds {h} times, fails {f} times", field.d()));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tuples_are_lexicographic() {
        let all: Vec<Vec<usize>> = tuples(3, 2).collect();
        assert_eq!(all.len(), 9);
        assert_eq!(all[0], [0, 0]);
        assert_eq!(all[1], [0, 1]);
        assert_eq!(all[8], [2, 2]);
        assert_eq!(tuples(5, 0).collect::<Vec<_>>(), [Vec::<usize>::new()]);
        assert_eq!(tuples(0, 2).count(), 0);
    }
}
