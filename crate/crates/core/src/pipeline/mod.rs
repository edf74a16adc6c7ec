//! The reduction compiler: from `P(z0, z1..zn)` over `Z` to a single
//! circuit `F` over `Z[i]` whose solvability, with `z0` fixed to the
//! parameter `a`, matches that of `P(a, z) = 0` with `zn != 0`.
//!
//! With `y = 2 * prod(3z_k + 1)`, `S = sum z_k y^(n-k)` and
//! `W = 2t(y^(n+1) + S) + y^n`, the conditions are
//!
//! ```text
//! E1 = P(a, z1..zn)
//! E2 = 4(2v0(2(2t+1)^2 + 1) - y0)^2 - 3y0^2 - 1
//! E3 = 4(2v1(2W^2 + y^2n) - y1 y^2n)^2 - (3y1^2 + 1) y^4n
//! E4 = zn t v0 v1 - (2r + 1)(3s + 1)
//! E5 = f(A1, A2, Sf, Tf, m)
//! A1 = 9(3y0^2(2t + 1 - x0 y0)^2 + 1)
//! A2 = 3y1^2(W - x1 y1 y^n)^2 + y^2n
//! ```
//!
//! and `F = c(c(c(c(E1, E2), E3), E4), E5)` with `c(p, q) = p^2 + 2q^2`.
//! `E3` and `A2` are the integrality conditions for `tau = W/y^n` cleared of
//! denominators, where `2 tau + 1 = W / y^n`.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::circuit::{Circuit, CircuitBuilder, CircuitError, NodeId};
use crate::gadgets::conj::conj_node;
use crate::gadgets::integrality::y_node;
use crate::gadgets::lemma33::{pell_node, square_node, square_quantity};
use crate::gadgets::nonzero::{nonzero_witness, tung_product};
use crate::gadgets::relation::{relation_f, relation_node};
use crate::gadgets::{lemma33_witness, GadgetError, Lemma33Witness};
use crate::poly::{PolyError, SparsePoly, VarName};

pub mod flatten;

pub use flatten::{skolem_flatten, tree_combine, CombineReport, Flattening};

/// Name of the parameter variable that replaces `z0` in `F`.
pub const PARAMETER: &str = "a";

/// How the divisibility argument of the relation equation is encoded.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Encoding {
    /// `(Sf, Tf) = (t y^n, S)`: requires `t y^n | S`.
    Paper,
    /// `(Sf, Tf) = (y^n, t S)`: requires `y^n | t S`, met by `t = y^n`.
    Repaired,
}

impl fmt::Display for Encoding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Encoding::Paper => "paper",
            Encoding::Repaired => "repaired",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ReductionConfig {
    n: usize,
    encoding: Encoding,
}

impl ReductionConfig {
    pub fn new(n: usize, encoding: Encoding) -> Result<Self, PipelineError> {
        if n == 0 {
            return Err(PipelineError::InvalidConfig("n must be at least 1"));
        }
        Ok(ReductionConfig { n, encoding })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn encoding(&self) -> Encoding {
        self.encoding
    }
}

impl Default for ReductionConfig {
    fn default() -> Self {
        ReductionConfig {
            n: 10,
            encoding: Encoding::Repaired,
        }
    }
}

/// Why the paper encoding has no usable `t` for a witness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NoAdmissibleT {
    /// The candidate `t = y^n`.
    pub t: BigInt,
    pub y_n: BigInt,
    pub s: BigInt,
}

impl fmt::Display for NoAdmissibleT {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let t_yn = (&self.t * &self.y_n).abs();
        let s = self.s.abs();
        if t_yn > s {
            write!(f, "no admissible t: |t·yⁿ| = {t_yn} > |S| = {s}")?;
        } else {
            write!(f, "no admissible t: t·yⁿ = {t_yn} does not divide S = {}", self.s)?;
        }
        write!(f, " at t = yⁿ = {}; yⁿ ∤ S, so no t ≠ 0 has t·yⁿ | S", self.y_n)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PipelineError {
    #[error("invalid configuration: {0}")]
    InvalidConfig(&'static str),
    #[error("polynomial manifest must be z0..z{n}: {source}")]
    Manifest { n: usize, source: PolyError },
    #[error("expected {expected} witness values, got {got}")]
    WitnessLength { expected: usize, got: usize },
    #[error("precondition failed: z{0} = 0")]
    LastVariableZero(usize),
    #[error("precondition failed: P(a, z) = {0}, not 0")]
    NotASolution(BigInt),
    #[error("{0}")]
    NoAdmissibleT(NoAdmissibleT),
    #[error("witness search for {which} = {value}: {source}")]
    Search {
        which: &'static str,
        value: BigInt,
        source: GadgetError,
    },
    #[error(transparent)]
    Gadget(#[from] GadgetError),
    #[error("bundle does not match the circuit: {0}")]
    BundleMismatch(String),
    #[error(transparent)]
    Circuit(#[from] CircuitError),
    #[error("internal invariant violated: {0}")]
    Internal(&'static str),
}

impl PipelineError {
    /// Whether the failure is an exhausted search budget.
    pub fn is_budget(&self) -> bool {
        matches!(
            self,
            PipelineError::Search {
                source: GadgetError::BudgetExceeded { .. },
                ..
            } | PipelineError::Gadget(GadgetError::BudgetExceeded { .. })
        )
    }
}

fn var(name: &str) -> VarName {
    VarName::new(name).expect("static identifier")
}

fn z_name(k: usize) -> VarName {
    VarName::new(format!("z{k}")).expect("identifier")
}

/// The `n + 10` unknowns of `F`, in the order `z1..zn, m, r, s, t, v0, x0, y0, v1, x1, y1`.
pub fn unknowns(n: usize) -> Vec<VarName> {
    let mut out: Vec<VarName> = (1..=n).map(z_name).collect();
    out.extend(["m", "r", "s", "t", "v0", "x0", "y0", "v1", "x1", "y1"].map(var));
    out
}

/// `P` re-expressed over exactly `z0..zn`.
fn normalize_input(p: &SparsePoly, n: usize) -> Result<SparsePoly, PipelineError> {
    let manifest: Vec<VarName> = (0..=n).map(z_name).collect();
    p.with_vars(manifest)
        .map_err(|source| PipelineError::Manifest { n, source })
}

struct Nodes {
    e: [NodeId; 5],
    a1: NodeId,
    a2: NodeId,
    y: NodeId,
    s: NodeId,
    w: NodeId,
    y_n: NodeId,
    f: NodeId,
}

fn assemble(b: &mut CircuitBuilder, p: &SparsePoly, cfg: ReductionConfig) -> Nodes {
    let n = cfg.n;
    let a = b.named(PARAMETER);
    let zs: Vec<NodeId> = (1..=n).map(|k| b.var(z_name(k))).collect();
    let [m, r, s, t, v0, x0, y0, v1, x1, y1] =
        ["m", "r", "s", "t", "v0", "x0", "y0", "v1", "x1", "y1"].map(|name| b.named(name));

    let mut p_vars = Vec::with_capacity(n + 1);
    p_vars.push(a);
    p_vars.extend(&zs);
    let e1 = b.poly(p, &p_vars);

    let y = y_node(b, &zs);
    let y_n = b.pow(y, n as u32);
    let mut terms = Vec::with_capacity(n);
    for (k, &z) in zs.iter().enumerate() {
        let e = (n - 1 - k) as u32;
        terms.push(if e == 0 {
            z
        } else {
            let yp = b.pow(y, e);
            b.mul(z, yp)
        });
    }
    let s_sum = b.sum(&terms);
    let y_n1 = b.mul(y_n, y);
    let inner = b.add(y_n1, s_sum);
    let two_t = b.scale(2, t);
    let tw = b.mul(two_t, inner);
    let w = b.add(tw, y_n);

    let u = b.offset(two_t, 1);
    let e2 = pell_node(b, u, None, v0, y0);
    let q0 = square_node(b, u, None, x0, y0);
    let a1 = b.scale(9, q0);
    let e3 = pell_node(b, w, Some(y_n), v1, y1);
    let a2 = square_node(b, w, Some(y_n), x1, y1);

    let zn = zs[n - 1];
    let lhs = b.product(&[zn, t, v0, v1]);
    let two_r = b.scale(2, r);
    let r_fac = b.offset(two_r, 1);
    let three_s = b.scale(3, s);
    let s_fac = b.offset(three_s, 1);
    let rhs = b.mul(r_fac, s_fac);
    let e4 = b.sub(lhs, rhs);

    let (sf, tf) = match cfg.encoding {
        Encoding::Paper => (b.mul(t, y_n), s_sum),
        Encoding::Repaired => (y_n, b.mul(t, s_sum)),
    };
    let e5 = relation_node(b, a1, a2, sf, tf, m);

    let mut f = e1;
    for e in [e2, e3, e4, e5] {
        f = conj_node(b, f, e);
    }
    Nodes {
        e: [e1, e2, e3, e4, e5],
        a1,
        a2,
        y,
        s: s_sum,
        w,
        y_n,
        f,
    }
}

/// The compiled polynomial `F` with its variable manifest.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reduction {
    config: ReductionConfig,
    circuit: Circuit,
    unknowns: Vec<VarName>,
}

impl Reduction {
    pub fn config(&self) -> ReductionConfig {
        self.config
    }

    pub fn circuit(&self) -> &Circuit {
        &self.circuit
    }

    pub fn into_circuit(self) -> Circuit {
        self.circuit
    }

    /// `z1..zn, m, r, s, t, v0, x0, y0, v1, x1, y1`.
    pub fn unknowns(&self) -> &[VarName] {
        &self.unknowns
    }

    pub fn parameter(&self) -> VarName {
        var(PARAMETER)
    }

    /// Unknowns plus the parameter.
    pub fn variable_count(&self) -> usize {
        self.unknowns.len() + 1
    }

    pub fn degree_bound(&self) -> u64 {
        self.circuit.degree_bound()
    }

    /// `F` with the parameter fixed to `a`.
    pub fn instantiate(&self, a: &BigInt) -> Circuit {
        let mut binding = BTreeMap::new();
        let mut b = CircuitBuilder::new();
        let out = b.constant(a.clone());
        binding.insert(var(PARAMETER), b.finish(out));
        self.circuit.substitute(&binding)
    }
}

/// Compiles `P(z0, z1..zn)` into `F`, keeping `z0` as the symbolic parameter `a`.
pub fn reduce(p: &SparsePoly, cfg: ReductionConfig) -> Result<Reduction, PipelineError> {
    let p = normalize_input(p, cfg.n)?;
    let mut b = CircuitBuilder::new();
    let nodes = assemble(&mut b, &p, cfg);
    Ok(Reduction {
        config: cfg,
        circuit: b.finish(nodes.f),
        unknowns: unknowns(cfg.n),
    })
}

/// The named sub-circuits `F` is assembled from, each over the same variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Components {
    /// `E1..E5`.
    pub equations: [Circuit; 5],
    pub a1: Circuit,
    pub a2: Circuit,
    pub y: Circuit,
    pub s: Circuit,
    pub w: Circuit,
    pub y_n: Circuit,
}

pub fn components(p: &SparsePoly, cfg: ReductionConfig) -> Result<Components, PipelineError> {
    let p = normalize_input(p, cfg.n)?;
    let build = |pick: &dyn Fn(&Nodes) -> NodeId| {
        let mut b = CircuitBuilder::new();
        let nodes = assemble(&mut b, &p, cfg);
        let out = pick(&nodes);
        b.finish(out)
    };
    Ok(Components {
        equations: [0, 1, 2, 3, 4].map(|i| build(&|n: &Nodes| n.e[i])),
        a1: build(&|n| n.a1),
        a2: build(&|n| n.a2),
        y: build(&|n| n.y),
        s: build(&|n| n.s),
        w: build(&|n| n.w),
        y_n: build(&|n| n.y_n),
    })
}

/// Quantities recomputed from the unknowns of a bundle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Derived {
    pub y: BigInt,
    pub s: BigInt,
    /// `t(y^(n+1) + S) / y^n` when integral.
    pub tau: Option<BigInt>,
    pub a1: BigInt,
    pub a2: BigInt,
}

impl Derived {
    fn compute(zs: &[BigInt], get: impl Fn(&str) -> BigInt) -> Derived {
        let n = zs.len();
        let mut y = BigInt::from(2);
        for z in zs {
            y *= z * 3 + 1;
        }
        let y_n = num_traits::pow(y.clone(), n);
        let mut s = BigInt::zero();
        for z in zs {
            s = s * &y + z;
        }
        let t = get("t");
        let w: BigInt = &t * 2 * (&y_n * &y + &s) + &y_n;
        let (q, rem) = w.div_rem(&y_n);
        let tau = if rem.is_zero() && q.is_odd() {
            Some((q - 1) / 2)
        } else {
            None
        };
        let a1 = square_quantity(&t, &get("x0"), &get("y0")) * 9;
        let (x1, y1) = (get("x1"), get("y1"));
        let inner = &w - &x1 * &y1 * &y_n;
        let a2 = BigInt::from(3) * &y1 * &y1 * &inner * &inner + &y_n * &y_n;
        Derived { y, s, tau, a1, a2 }
    }

    /// `A1 = 0 (mod 3)` and `A2 = 1 (mod 3)`, which forces `A1 != A2`.
    pub fn separated_mod_three(&self) -> bool {
        let three = BigInt::from(3);
        self.a1.mod_floor(&three).is_zero() && self.a2.mod_floor(&three) == BigInt::from(1)
    }
}

/// Where a Lemma-3.3-type witness came from, for the bundle notes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchNote {
    pub which: &'static str,
    pub value: BigInt,
    pub pell_index: u64,
    pub pell_modulus: BigInt,
    pub square_index: u64,
    pub sign: i8,
}

impl fmt::Display for SearchNote {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} = {}: Pell index {} (modulus {}), square index {} ({} branch)",
            self.which,
            self.value,
            self.pell_index,
            self.pell_modulus,
            self.square_index,
            if self.sign > 0 { "+" } else { "-" }
        )
    }
}

fn search_note(which: &'static str, w: &Lemma33Witness) -> SearchNote {
    let u: BigInt = &w.t * 2 + 1;
    SearchNote {
        which,
        value: w.t.clone(),
        pell_index: w.pell_pair.index,
        pell_modulus: (&u * &u * 2 + 1) * 2,
        square_index: w.square_pair.index,
        sign: w.sign,
    }
}

/// A full integer assignment for `F` plus the parameter value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessBundle {
    pub a: BigInt,
    /// Unknowns in manifest order.
    pub values: Vec<(VarName, BigInt)>,
    pub derived: Derived,
    pub notes: Vec<String>,
    pub verified: bool,
}

impl WitnessBundle {
    pub fn get(&self, name: &str) -> Option<&BigInt> {
        self.values.iter().find(|(v, _)| v.as_str() == name).map(|(_, x)| x)
    }

    pub fn set(&mut self, name: &str, value: BigInt) -> bool {
        match self.values.iter_mut().find(|(v, _)| v.as_str() == name) {
            Some((_, x)) => {
                *x = value;
                true
            }
            None => false,
        }
    }

    /// The assignment for evaluating `F`, parameter included.
    pub fn assignment(&self) -> BTreeMap<VarName, BigInt> {
        let mut map: BTreeMap<VarName, BigInt> = self.values.iter().cloned().collect();
        map.insert(var(PARAMETER), self.a.clone());
        map
    }

    /// Number of `z` unknowns.
    pub fn n(&self) -> usize {
        (1..).take_while(|&k| self.get(&format!("z{k}")).is_some()).count()
    }

    fn zs(&self) -> Vec<BigInt> {
        (1..=self.n())
            .map(|k| self.get(&format!("z{k}")).cloned().expect("counted"))
            .collect()
    }

    /// Recomputes `y, S, tau, A1, A2` from the unknowns.
    pub fn rederive(&self) -> Result<Derived, PipelineError> {
        for name in ["t", "x0", "y0", "x1", "y1"] {
            if self.get(name).is_none() {
                return Err(PipelineError::BundleMismatch(format!("missing value for {name}")));
            }
        }
        if self.n() == 0 {
            return Err(PipelineError::BundleMismatch("no z values".into()));
        }
        Ok(Derived::compute(&self.zs(), |name| {
            self.get(name).cloned().expect("checked above")
        }))
    }
}

/// Everything a lift needs before the two witness searches.
#[derive(Debug, Clone)]
pub struct LiftPlan {
    reduction: Reduction,
    a: BigInt,
    zs: Vec<BigInt>,
    pub y: BigInt,
    pub s: BigInt,
    pub y_n: BigInt,
    pub t: BigInt,
    pub tau: BigInt,
}

/// Checks the preconditions of a lift and fixes `t` and `tau`.
pub fn plan_lift(
    p: &SparsePoly,
    a: &BigInt,
    zs: &[BigInt],
    cfg: ReductionConfig,
) -> Result<LiftPlan, PipelineError> {
    let n = cfg.n;
    if zs.len() != n {
        return Err(PipelineError::WitnessLength {
            expected: n,
            got: zs.len(),
        });
    }
    if zs[n - 1].is_zero() {
        return Err(PipelineError::LastVariableZero(n));
    }
    let pn = normalize_input(p, n)?;
    let mut point = Vec::with_capacity(n + 1);
    point.push(a.clone());
    point.extend(zs.iter().cloned());
    let value = pn
        .eval((), &point)
        .map_err(|source| PipelineError::Manifest { n, source })?;
    if !value.is_zero() {
        return Err(PipelineError::NotASolution(value));
    }

    let mut y = BigInt::from(2);
    for z in zs {
        y *= z * 3 + 1;
    }
    let y_n = num_traits::pow(y.clone(), n);
    let mut s = BigInt::zero();
    for z in zs {
        s = s * &y + z;
    }
    let t = match cfg.encoding {
        Encoding::Repaired => y_n.clone(),
        Encoding::Paper => {
            if s.is_multiple_of(&y_n) {
                BigInt::from(1)
            } else {
                return Err(PipelineError::NoAdmissibleT(NoAdmissibleT {
                    t: y_n.clone(),
                    y_n,
                    s,
                }));
            }
        }
    };
    let (tau, rem) = (&t * (&y_n * &y + &s)).div_rem(&y_n);
    if !rem.is_zero() {
        return Err(PipelineError::Internal("tau is not integral for the chosen t"));
    }
    Ok(LiftPlan {
        reduction: reduce(&pn, cfg)?,
        a: a.clone(),
        zs: zs.to_vec(),
        y,
        s,
        y_n,
        t,
        tau,
    })
}

impl LiftPlan {
    pub fn reduction(&self) -> &Reduction {
        &self.reduction
    }

    /// Assembles and verifies the bundle from witnesses for `t` and `tau`.
    pub fn complete(&self, w0: &Lemma33Witness, w1: &Lemma33Witness) -> Result<WitnessBundle, PipelineError> {
        if w0.t != self.t || w1.t != self.tau {
            return Err(PipelineError::Internal("witnesses are for the wrong targets"));
        }
        let n = self.zs.len();
        let root1 = w0.square_root() * 3;
        let root2 = &self.y_n * w1.square_root();
        let (sf, tf) = match self.reduction.config.encoding {
            Encoding::Paper => (&self.t * &self.y_n, self.s.clone()),
            Encoding::Repaired => (self.y_n.clone(), &self.t * &self.s),
        };
        let (quotient, rem) = tf.div_rem(&sf);
        if !rem.is_zero() {
            return Err(PipelineError::Internal("Sf does not divide Tf"));
        }
        let m = quotient - &root1 - &root2;
        let prod = &self.zs[n - 1] * &self.t * &w0.v * &w1.v;
        let (r, s_val) = nonzero_witness(&prod)?;
        if tung_product(&r, &s_val) != prod {
            return Err(PipelineError::Internal("nonzero witness mismatch"));
        }
        let a1 = &root1 * &root1;
        let a2 = &root2 * &root2;
        if !relation_f(&a1, &a2, &sf, &tf, &m).is_zero() {
            return Err(PipelineError::Internal("relation witness does not vanish"));
        }

        let mut values: Vec<(VarName, BigInt)> = (1..=n).map(z_name).zip(self.zs.iter().cloned()).collect();
        for (name, value) in [
            ("m", m),
            ("r", r),
            ("s", s_val),
            ("t", self.t.clone()),
            ("v0", w0.v.clone()),
            ("x0", w0.x.clone()),
            ("y0", w0.y.clone()),
            ("v1", w1.v.clone()),
            ("x1", w1.x.clone()),
            ("y1", w1.y.clone()),
        ] {
            values.push((var(name), value));
        }
        let mut bundle = WitnessBundle {
            a: self.a.clone(),
            values,
            derived: Derived {
                y: self.y.clone(),
                s: self.s.clone(),
                tau: Some(self.tau.clone()),
                a1,
                a2,
            },
            notes: alloc::vec![
                format!("encoding {}, t = y^n", self.reduction.config.encoding),
                search_note("t", w0).to_string(),
                search_note("tau", w1).to_string(),
            ],
            verified: false,
        };
        if bundle.rederive()? != bundle.derived {
            return Err(PipelineError::Internal("derived values disagree with the bundle"));
        }
        bundle.verified = verify_bundle(self.reduction.circuit(), &bundle)?;
        if !bundle.verified {
            return Err(PipelineError::Internal("lifted bundle does not satisfy F"));
        }
        Ok(bundle)
    }
}

/// Lifts a solution of `P(a, z) = 0` with `zn != 0` to a verified zero of `F`.
/// Each witness search examines at most `budget` Pell indices per stage.
pub fn lift_witness(
    p: &SparsePoly,
    a: &BigInt,
    zs: &[BigInt],
    cfg: ReductionConfig,
    budget: u64,
) -> Result<WitnessBundle, PipelineError> {
    let plan = plan_lift(p, a, zs, cfg)?;
    let w0 = search("t", &plan.t, budget)?;
    let w1 = search("tau", &plan.tau, budget)?;
    plan.complete(&w0, &w1)
}

/// [`lemma33_witness`] with the target named in errors.
pub fn search(which: &'static str, value: &BigInt, budget: u64) -> Result<Lemma33Witness, PipelineError> {
    lemma33_witness(value, budget).map_err(|source| PipelineError::Search {
        which,
        value: value.clone(),
        source,
    })
}

/// `F` vanishes at the bundle and the bundle's `A1, A2` are separated mod 3.
pub fn verify_bundle(f: &Circuit, bundle: &WitnessBundle) -> Result<bool, PipelineError> {
    let assignment = bundle.assignment();
    for v in f.variables() {
        if !assignment.contains_key(&v) {
            return Err(PipelineError::BundleMismatch(format!("missing value for {v}")));
        }
    }
    let value = f.eval((), &assignment)?;
    let derived = bundle.rederive()?;
    Ok(value.is_zero() && derived.separated_mod_three())
}
