//! Exhaustive and sampled property sweeps, one per gadget family.
//!
//! Every suite is deterministic: work is sharded over contiguous chunks of a
//! fixed iteration order, and shard results are merged in that order, so the
//! report does not depend on the thread count.

mod arith;
mod gadgets;
mod pell;
pub mod pipeline;
pub mod small;

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use zreduce_core::FieldD;

/// Counterexamples kept per report.
pub const MAX_COUNTEREXAMPLES: usize = 10;

pub const DEFAULT_DS: [u64; 8] = [1, 2, 3, 5, 6, 7, 11, 13];
pub const DEFAULT_SEED: u64 = 0x5eed;
pub const DEFAULT_BUDGET: u64 = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum SuiteName {
    Lemma21,
    Bound22,
    Thm12,
    Lemma22,
    Lemma31,
    Lemma32,
    Lemma33,
    Lemma34,
    Pell,
    Pipeline,
}

impl SuiteName {
    pub const ALL: [SuiteName; 10] = [
        SuiteName::Lemma21,
        SuiteName::Bound22,
        SuiteName::Thm12,
        SuiteName::Lemma22,
        SuiteName::Lemma31,
        SuiteName::Lemma32,
        SuiteName::Lemma33,
        SuiteName::Lemma34,
        SuiteName::Pell,
        SuiteName::Pipeline,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            SuiteName::Lemma21 => "lemma21",
            SuiteName::Bound22 => "bound22",
            SuiteName::Thm12 => "thm12",
            SuiteName::Lemma22 => "lemma22",
            SuiteName::Lemma31 => "lemma31",
            SuiteName::Lemma32 => "lemma32",
            SuiteName::Lemma33 => "lemma33",
            SuiteName::Lemma34 => "lemma34",
            SuiteName::Pell => "pell",
            SuiteName::Pipeline => "pipeline",
        }
    }
}

impl fmt::Display for SuiteName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SuiteName {
    type Err = SuiteError;

    fn from_str(s: &str) -> Result<Self, SuiteError> {
        SuiteName::ALL
            .into_iter()
            .find(|n| n.as_str() == s)
            .ok_or_else(|| SuiteError::UnknownSuite(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SuiteError {
    #[error("unknown suite {0:?}; expected one of lemma21, bound22, thm12, lemma22, lemma31, lemma32, lemma33, lemma34, pell, pipeline")]
    UnknownSuite(String),
    #[error("d = {0} is not a positive squarefree integer")]
    InvalidD(u64),
    #[error("{0}")]
    InvalidParameter(String),
}

/// Sweep parameters. `None` selects the suite's own default, which the
/// report then lists explicitly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuiteParams {
    pub ds: Option<Vec<u64>>,
    pub box_bound: Option<u32>,
    pub n: Option<usize>,
    /// Inclusive range of `t` for the integer witness search.
    pub t_range: Option<(i64, i64)>,
    /// Largest `|m|` for nonzeroness witnesses, or the number of Pell pairs checked.
    pub limit: Option<u64>,
    pub budget: u64,
    pub seed: u64,
    pub threads: usize,
}

impl Default for SuiteParams {
    fn default() -> Self {
        SuiteParams {
            ds: None,
            box_bound: None,
            n: None,
            t_range: None,
            limit: None,
            budget: DEFAULT_BUDGET,
            seed: DEFAULT_SEED,
            threads: 1,
        }
    }
}

impl SuiteParams {
    fn fields(&self, default: &[u64]) -> Result<Vec<FieldD>, SuiteError> {
        let ds = self.ds.clone().unwrap_or_else(|| default.to_vec());
        ds.into_iter()
            .map(|d| FieldD::new(d).map_err(|_| SuiteError::InvalidD(d)))
            .collect()
    }

    /// The Gaussian-only suites accept `--d 1` or nothing.
    fn gaussian_only(&self, name: SuiteName) -> Result<(), SuiteError> {
        match &self.ds {
            Some(ds) if ds.as_slice() != [1] => Err(SuiteError::InvalidParameter(format!(
                "suite {name} works over the Gaussian integers only (d = 1)"
            ))),
            _ => Ok(()),
        }
    }
}

/// Outcome of one suite. `Display` omits the wall time, which the caller
/// reports separately, so equal parameters give byte-identical text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuiteReport {
    pub name: SuiteName,
    /// Resolved parameters as `key = value`.
    pub parameters: Vec<(String, String)>,
    pub cases: u64,
    pub violations: u64,
    /// Smallest failing inputs first.
    pub counterexamples: Vec<String>,
    pub findings: Vec<String>,
    pub elapsed: Duration,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "suite {}", self.name)?;
        for (k, v) in &self.parameters {
            writeln!(f, "  {k} = {v}")?;
        }
        writeln!(f, "cases: {}", self.cases)?;
        writeln!(f, "violations: {}", self.violations)?;
        if !self.counterexamples.is_empty() {
            writeln!(f, "counterexamples:")?;
            for c in &self.counterexamples {
                writeln!(f, "  {c}")?;
            }
        }
        if !self.findings.is_empty() {
            writeln!(f, "findings:")?;
            for x in &self.findings {
                writeln!(f, "  {x}")?;
            }
        }
        Ok(())
    }
}

/// Case counts and failures of a (partial) sweep. Counterexamples are keyed
/// by their position in the sweep order so merged shards stay sorted.
#[derive(Debug, Clone, Default)]
pub(crate) struct Tally {
    pub cases: u64,
    pub violations: u64,
    counterexamples: Vec<(Vec<u64>, String)>,
}

impl Tally {
    pub fn case(&mut self) {
        self.cases += 1;
    }

    /// Counts a case and records a violation unless `ok`.
    pub fn check(&mut self, ok: bool, key: impl FnOnce() -> Vec<u64>, message: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.violation(key(), message());
        }
    }

    pub fn violation(&mut self, key: Vec<u64>, message: String) {
        self.violations += 1;
        if self.counterexamples.len() < MAX_COUNTEREXAMPLES {
            self.counterexamples.push((key, message));
        }
    }

    pub fn merge(&mut self, other: Tally) {
        self.cases += other.cases;
        self.violations += other.violations;
        self.counterexamples.extend(other.counterexamples);
        self.counterexamples.sort_by(|a, b| a.0.cmp(&b.0));
        self.counterexamples.truncate(MAX_COUNTEREXAMPLES);
    }

    pub fn merged(tallies: impl IntoIterator<Item = Tally>) -> Tally {
        let mut out = Tally::default();
        for t in tallies {
            out.merge(t);
        }
        out
    }
}

/// Maps `f` over `items` on up to `threads` scoped threads, each taking one
/// contiguous chunk. Results keep the order of `items`.
pub(crate) fn sharded<T, R, F>(items: &[T], threads: usize, f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync,
{
    let threads = threads.max(1).min(items.len().max(1));
    if threads == 1 {
        return items.iter().map(&f).collect();
    }
    let chunk = items.len().div_ceil(threads);
    std::thread::scope(|scope| {
        let handles: Vec<_> = items
            .chunks(chunk)
            .map(|part| {
                let f = &f;
                scope.spawn(move || part.iter().map(f).collect::<Vec<R>>())
            })
            .collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().expect("suite worker panicked"))
            .collect()
    })
}

pub(crate) struct Draft {
    name: SuiteName,
    parameters: Vec<(String, String)>,
    tally: Tally,
    findings: Vec<String>,
}

impl Draft {
    fn new(name: SuiteName) -> Self {
        Draft {
            name,
            parameters: Vec::new(),
            tally: Tally::default(),
            findings: Vec::new(),
        }
    }

    pub fn param(&mut self, key: &str, value: impl fmt::Display) {
        self.parameters.push((key.to_string(), value.to_string()));
    }

    pub fn finding(&mut self, text: impl Into<String>) {
        self.findings.push(text.into());
    }

    pub fn tally(&mut self) -> &mut Tally {
        &mut self.tally
    }
}

pub(crate) fn join<T: fmt::Display>(items: &[T]) -> String {
    items.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
}

pub fn run_suite(name: SuiteName, params: &SuiteParams) -> Result<SuiteReport, SuiteError> {
    if params.threads == 0 {
        return Err(SuiteError::InvalidParameter("threads must be at least 1".into()));
    }
    let start = Instant::now();
    let mut draft = Draft::new(name);
    match name {
        SuiteName::Lemma21 => arith::lemma21(params, &mut draft)?,
        SuiteName::Bound22 => arith::bound22(params, &mut draft)?,
        SuiteName::Thm12 => arith::thm12(params, &mut draft)?,
        SuiteName::Lemma22 => arith::lemma22(params, &mut draft)?,
        SuiteName::Lemma31 => gadgets::lemma31(params, &mut draft)?,
        SuiteName::Lemma32 => gadgets::lemma32(params, &mut draft)?,
        SuiteName::Lemma33 => gadgets::lemma33(params, &mut draft)?,
        SuiteName::Lemma34 => gadgets::lemma34(params, &mut draft)?,
        SuiteName::Pell => pell::pell(params, &mut draft)?,
        SuiteName::Pipeline => pipeline::pipeline(params, &mut draft)?,
    }
    let Draft {
        name,
        parameters,
        tally,
        findings,
    } = draft;
    Ok(SuiteReport {
        name,
        parameters,
        cases: tally.cases,
        violations: tally.violations,
        counterexamples: tally.counterexamples.into_iter().map(|(_, m)| m).collect(),
        findings,
        elapsed: start.elapsed(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for n in SuiteName::ALL {
            assert_eq!(n.as_str().parse::<SuiteName>().unwrap(), n);
        }
        assert!(matches!("lemma99".parse::<SuiteName>(), Err(SuiteError::UnknownSuite(_))));
    }

    #[test]
    fn sharding_preserves_order() {
        let items: Vec<u32> = (0..103).collect();
        for threads in [1, 2, 3, 8, 200] {
            let out = sharded(&items, threads, |x| x * 2);
            assert_eq!(out, items.iter().map(|x| x * 2).collect::<Vec<_>>());
        }
        assert!(sharded(&[] as &[u32], 4, |x| *x).is_empty());
    }

    #[test]
    fn tally_keeps_smallest_counterexamples() {
        let mut a = Tally::default();
        let mut b = Tally::default();
        for k in (0..20u64).rev() {
            let t = if k % 2 == 0 { &mut a } else { &mut b };
            t.check(false, || vec![k], || format!("case {k}"));
        }
        a.merge(b);
        assert_eq!(a.violations, 20);
        assert_eq!(a.cases, 20);
        assert_eq!(a.counterexamples.len(), MAX_COUNTEREXAMPLES);
        assert!(a.counterexamples.windows(2).all(|w| w[0].0 <= w[1].0));
    }

    #[test]
    fn invalid_parameters() {
        let p = SuiteParams {
            ds: Some(vec![4]),
            ..SuiteParams::default()
        };
        assert_eq!(run_suite(SuiteName::Lemma21, &p), Err(SuiteError::InvalidD(4)));
        let p = SuiteParams {
            ds: Some(vec![2]),
            ..SuiteParams::default()
        };
        assert!(matches!(run_suite(SuiteName::Lemma32, &p), Err(SuiteError::InvalidParameter(_))));
    }
}
