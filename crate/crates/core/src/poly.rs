//! Sparse multivariate polynomials with big-integer coefficients.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::ring::Ring;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PolyError {
    #[error("invalid variable name `{0}`")]
    InvalidName(String),
    #[error("variable `{0}` declared twice")]
    DuplicateVariable(String),
    #[error("variable `{0}` is not in the manifest")]
    UnknownVariable(String),
    #[error("exponent vector has {got} entries, manifest has {expected}")]
    Arity { expected: usize, got: usize },
    #[error("operands have different variable manifests")]
    ManifestMismatch,
    #[error("no value for variable `{0}`")]
    MissingValue(String),
    #[error("value for `{0}` lives in a different ring context")]
    ContextMismatch(String),
}

/// An identifier `[A-Za-z][A-Za-z0-9_]*`.
///
/// Ordering is natural: names compare by their non-digit stem, then by the
/// numeric value of a trailing digit run, so `z2 < z10`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct VarName(String);

impl VarName {
    pub fn new(name: impl Into<String>) -> Result<Self, PolyError> {
        let name = name.into();
        if is_identifier(&name) {
            Ok(VarName(name))
        } else {
            Err(PolyError::InvalidName(name))
        }
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    fn split(&self) -> (&str, &str) {
        let stem_len = self.0.trim_end_matches(|c: char| c.is_ascii_digit()).len();
        self.0.split_at(stem_len)
    }
}

pub fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl Ord for VarName {
    fn cmp(&self, other: &Self) -> Ordering {
        let (sa, da) = self.split();
        let (sb, db) = other.split();
        let na = da.trim_start_matches('0');
        let nb = db.trim_start_matches('0');
        sa.cmp(sb)
            .then(na.len().cmp(&nb.len()))
            .then(na.cmp(nb))
            .then(self.0.cmp(&other.0))
    }
}

impl PartialOrd for VarName {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for VarName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Exponent vector, ordered graded-lexicographically.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn one(arity: usize) -> Self {
        Monomial(vec![0; arity])
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u64 {
        self.0.iter().map(|&e| u64::from(e)).sum()
    }

    fn mul(&self, other: &Self) -> Self {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A polynomial over a fixed, ordered variable manifest. No stored
/// coefficient is zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparsePoly {
    vars: Vec<VarName>,
    terms: BTreeMap<Monomial, BigInt>,
}

impl SparsePoly {
    pub fn zero(vars: Vec<VarName>) -> Result<Self, PolyError> {
        for (i, v) in vars.iter().enumerate() {
            if vars[..i].contains(v) {
                return Err(PolyError::DuplicateVariable(v.to_string()));
            }
        }
        Ok(SparsePoly {
            vars,
            terms: BTreeMap::new(),
        })
    }

    pub fn constant(vars: Vec<VarName>, c: impl Into<BigInt>) -> Result<Self, PolyError> {
        let mut p = SparsePoly::zero(vars)?;
        let arity = p.vars.len();
        p.add_term(Monomial::one(arity), c.into());
        Ok(p)
    }

    /// The polynomial consisting of the single variable `name`.
    pub fn variable(vars: Vec<VarName>, name: &str) -> Result<Self, PolyError> {
        let mut p = SparsePoly::zero(vars)?;
        let idx = p.index_of(name).ok_or_else(|| PolyError::UnknownVariable(name.to_string()))?;
        let mut m = Monomial::one(p.vars.len());
        m.0[idx] = 1;
        p.add_term(m, BigInt::one());
        Ok(p)
    }

    pub fn from_terms<I>(vars: Vec<VarName>, terms: I) -> Result<Self, PolyError>
    where
        I: IntoIterator<Item = (Vec<u32>, BigInt)>,
    {
        let mut p = SparsePoly::zero(vars)?;
        for (exps, c) in terms {
            if exps.len() != p.vars.len() {
                return Err(PolyError::Arity {
                    expected: p.vars.len(),
                    got: exps.len(),
                });
            }
            p.add_term(Monomial(exps), c);
        }
        Ok(p)
    }

    pub fn vars(&self) -> &[VarName] {
        &self.vars
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v.as_str() == name)
    }

    /// Terms in ascending graded-lexicographic order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &BigInt)> {
        self.terms.iter()
    }

    pub fn coeff(&self, exps: &[u32]) -> BigInt {
        self.terms
            .get(&Monomial(exps.to_vec()))
            .cloned()
            .unwrap_or_default()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree; the zero polynomial reports 0.
    pub fn total_degree(&self) -> u64 {
        self.terms.keys().next_back().map_or(0, Monomial::degree)
    }

    fn add_term(&mut self, m: Monomial, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(m.clone()).or_insert_with(BigInt::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&m);
        }
    }

    fn same_manifest(&self, other: &Self) -> Result<(), PolyError> {
        if self.vars == other.vars {
            Ok(())
        } else {
            Err(PolyError::ManifestMismatch)
        }
    }

    /// Re-expresses the polynomial over a manifest containing all of its variables.
    pub fn with_vars(&self, vars: Vec<VarName>) -> Result<Self, PolyError> {
        let mut out = SparsePoly::zero(vars)?;
        let map: Vec<usize> = self
            .vars
            .iter()
            .map(|v| {
                out.index_of(v.as_str())
                    .ok_or_else(|| PolyError::UnknownVariable(v.to_string()))
            })
            .collect::<Result<_, _>>()?;
        for (m, c) in &self.terms {
            let mut e = vec![0; out.vars.len()];
            for (i, &x) in m.0.iter().enumerate() {
                e[map[i]] = x;
            }
            out.add_term(Monomial(e), c.clone());
        }
        Ok(out)
    }

    pub fn add(&self, rhs: &Self) -> Result<Self, PolyError> {
        self.same_manifest(rhs)?;
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self, PolyError> {
        self.same_manifest(rhs)?;
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c);
        }
        Ok(out)
    }

    pub fn neg(&self) -> Self {
        SparsePoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn mul(&self, rhs: &Self) -> Result<Self, PolyError> {
        self.same_manifest(rhs)?;
        Ok(self.mul_limited(rhs, usize::MAX).expect("unbounded product"))
    }

    /// Product, abandoned as soon as the accumulator holds more than `limit` terms.
    pub(crate) fn mul_limited(&self, rhs: &Self, limit: usize) -> Option<Self> {
        let mut out = SparsePoly {
            vars: self.vars.clone(),
            terms: BTreeMap::new(),
        };
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca * cb);
                if out.terms.len() > limit {
                    return None;
                }
            }
        }
        Some(out)
    }

    pub fn pow(&self, e: u32) -> Self {
        self.pow_limited(e, usize::MAX).expect("unbounded power")
    }

    pub(crate) fn pow_limited(&self, mut e: u32, limit: usize) -> Option<Self> {
        let arity = self.vars.len();
        let mut acc = SparsePoly {
            vars: self.vars.clone(),
            terms: BTreeMap::new(),
        };
        acc.add_term(Monomial::one(arity), BigInt::one());
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_limited(&base, limit)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_limited(&base, limit)?;
            }
        }
        Some(acc)
    }

    /// Evaluates with `values[i]` bound to the `i`-th manifest variable.
    pub fn eval<R: Ring>(&self, ctx: R::Ctx, values: &[R]) -> Result<R, PolyError> {
        if values.len() != self.vars.len() {
            return Err(PolyError::Arity {
                expected: self.vars.len(),
                got: values.len(),
            });
        }
        for (v, x) in self.vars.iter().zip(values) {
            if !x.in_context(ctx) {
                return Err(PolyError::ContextMismatch(v.to_string()));
            }
        }
        let mut acc = R::constant(ctx, &BigInt::zero());
        for (m, c) in &self.terms {
            let mut t = R::constant(ctx, c);
            for (x, &e) in values.iter().zip(&m.0) {
                if e > 0 {
                    t = t.mul_ref(&x.pow_u32(e));
                }
            }
            acc = acc.add_ref(&t);
        }
        Ok(acc)
    }

    /// Evaluates with values looked up by name.
    pub fn eval_map<R: Ring>(&self, ctx: R::Ctx, values: &BTreeMap<VarName, R>) -> Result<R, PolyError> {
        let ordered: Vec<R> = self
            .vars
            .iter()
            .map(|v| values.get(v).cloned().ok_or_else(|| PolyError::MissingValue(v.to_string())))
            .collect::<Result<_, _>>()?;
        self.eval(ctx, &ordered)
    }
}

/// Canonical text: terms in descending graded-lexicographic order, e.g.
/// `x^2 + 2*x*y - 3`. Unit coefficients on non-constant terms are omitted.
impl fmt::Display for SparsePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            match (i, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let abs = c.abs();
            let mut wrote = false;
            if !abs.is_one() || m.degree() == 0 {
                write!(f, "{abs}")?;
                wrote = true;
            }
            for (v, &e) in self.vars.iter().zip(&m.0) {
                if e == 0 {
                    continue;
                }
                if wrote {
                    f.write_str("*")?;
                }
                write!(f, "{v}")?;
                if e > 1 {
                    write!(f, "^{e}")?;
                }
                wrote = true;
            }
        }
        Ok(())
    }
}
