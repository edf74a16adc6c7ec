//! Arithmetic circuits: straight-line programs over named variables and
//! integer constants.
//!
//! Nodes only reference earlier nodes, so a circuit is evaluated in one pass
//! over its node list. [`CircuitBuilder`] hash-conses nodes, folds constant
//! subexpressions and splits large powers, so structurally equal subterms are
//! shared.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Pow, Zero};

use crate::poly::{PolyError, SparsePoly, VarName};
use crate::ring::Ring;

/// Largest exponent a single `pow` node carries when built through [`CircuitBuilder`].
pub const MAX_POW: u32 = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId(u32);

impl NodeId {
    pub fn new(index: usize) -> Self {
        NodeId(u32::try_from(index).expect("circuit too large"))
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Node {
    Const(BigInt),
    Var(VarName),
    Add(NodeId, NodeId),
    Sub(NodeId, NodeId),
    Mul(NodeId, NodeId),
    Pow(NodeId, u32),
}

impl Node {
    fn operands(&self) -> (Option<NodeId>, Option<NodeId>) {
        match *self {
            Node::Const(_) | Node::Var(_) => (None, None),
            Node::Add(a, b) | Node::Sub(a, b) | Node::Mul(a, b) => (Some(a), Some(b)),
            Node::Pow(a, _) => (Some(a), None),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CircuitError {
    #[error("node n{node} references n{operand}, which is not an earlier node")]
    ForwardReference { node: usize, operand: usize },
    #[error("node n{0} has exponent 0")]
    ZeroExponent(usize),
    #[error("output n{0} does not exist")]
    BadOutput(usize),
    #[error("circuit has no nodes")]
    Empty,
    #[error("no value for variable `{0}`")]
    MissingVariable(String),
    #[error("value for `{0}` lives in a different ring context")]
    ContextMismatch(String),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExpandError {
    #[error("expansion exceeds {budget} terms (degree bound {degree_bound})")]
    BudgetExceeded { budget: usize, degree_bound: u64 },
    #[error(transparent)]
    Poly(#[from] PolyError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Circuit {
    nodes: Vec<Node>,
    output: NodeId,
}

impl Circuit {
    /// Validates topological order and exponents.
    pub fn from_parts(nodes: Vec<Node>, output: NodeId) -> Result<Self, CircuitError> {
        if nodes.is_empty() {
            return Err(CircuitError::Empty);
        }
        for (i, node) in nodes.iter().enumerate() {
            let (a, b) = node.operands();
            for op in [a, b].into_iter().flatten() {
                if op.index() >= i {
                    return Err(CircuitError::ForwardReference {
                        node: i,
                        operand: op.index(),
                    });
                }
            }
            if let Node::Pow(_, 0) = node {
                return Err(CircuitError::ZeroExponent(i));
            }
        }
        if output.index() >= nodes.len() {
            return Err(CircuitError::BadOutput(output.index()));
        }
        Ok(Circuit { nodes, output })
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn output(&self) -> NodeId {
        self.output
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Distinct variables, in natural order.
    pub fn variables(&self) -> Vec<VarName> {
        let set: BTreeSet<&VarName> = self
            .nodes
            .iter()
            .filter_map(|n| match n {
                Node::Var(v) => Some(v),
                _ => None,
            })
            .collect();
        set.into_iter().cloned().collect()
    }

    /// Evaluates every node in order; all circuit variables must be assigned.
    pub fn eval<R: Ring>(&self, ctx: R::Ctx, assignment: &BTreeMap<VarName, R>) -> Result<R, CircuitError> {
        let mut vals: Vec<R> = Vec::with_capacity(self.nodes.len());
        for node in &self.nodes {
            let v = match node {
                Node::Const(c) => R::constant(ctx, c),
                Node::Var(name) => {
                    let v = assignment
                        .get(name)
                        .ok_or_else(|| CircuitError::MissingVariable(name.to_string()))?;
                    if !v.in_context(ctx) {
                        return Err(CircuitError::ContextMismatch(name.to_string()));
                    }
                    v.clone()
                }
                Node::Add(a, b) => vals[a.index()].add_ref(&vals[b.index()]),
                Node::Sub(a, b) => vals[a.index()].sub_ref(&vals[b.index()]),
                Node::Mul(a, b) => vals[a.index()].mul_ref(&vals[b.index()]),
                Node::Pow(a, e) => vals[a.index()].pow_u32(*e),
            };
            vals.push(v);
        }
        Ok(vals.swap_remove(self.output.index()))
    }

    /// Upper bound on the total degree of the output, by structural recursion.
    pub fn degree_bound(&self) -> u64 {
        let mut deg: Vec<u64> = Vec::with_capacity(self.nodes.len());
        for node in &self.nodes {
            let d = match node {
                Node::Const(_) => 0,
                Node::Var(_) => 1,
                Node::Add(a, b) | Node::Sub(a, b) => deg[a.index()].max(deg[b.index()]),
                Node::Mul(a, b) => deg[a.index()].saturating_add(deg[b.index()]),
                Node::Pow(a, e) => deg[a.index()].saturating_mul(u64::from(*e)),
            };
            deg.push(d);
        }
        deg[self.output.index()]
    }

    /// Expands to a sparse polynomial over [`Circuit::variables`], failing
    /// once any intermediate polynomial exceeds `budget` terms.
    pub fn expand(&self, budget: usize) -> Result<SparsePoly, ExpandError> {
        let vars = self.variables();
        let exceeded = || ExpandError::BudgetExceeded {
            budget,
            degree_bound: self.degree_bound(),
        };
        // free each intermediate after its last use
        let mut last_use = vec![0usize; self.nodes.len()];
        for (i, node) in self.nodes.iter().enumerate() {
            let (a, b) = node.operands();
            for op in [a, b].into_iter().flatten() {
                last_use[op.index()] = i;
            }
        }
        last_use[self.output.index()] = usize::MAX;
        let mut polys: Vec<Option<SparsePoly>> = vec![None; self.nodes.len()];
        for (i, node) in self.nodes.iter().enumerate() {
            let get = |id: NodeId| polys[id.index()].as_ref().expect("operand freed early");
            let p = match node {
                Node::Const(c) => SparsePoly::constant(vars.clone(), c.clone())?,
                Node::Var(v) => SparsePoly::variable(vars.clone(), v.as_str())?,
                Node::Add(a, b) => get(*a).add(get(*b))?,
                Node::Sub(a, b) => get(*a).sub(get(*b))?,
                Node::Mul(a, b) => get(*a).mul_limited(get(*b), budget).ok_or_else(exceeded)?,
                Node::Pow(a, e) => get(*a).pow_limited(*e, budget).ok_or_else(exceeded)?,
            };
            if p.term_count() > budget {
                return Err(exceeded());
            }
            let (a, b) = node.operands();
            for op in [a, b].into_iter().flatten() {
                if last_use[op.index()] == i {
                    polys[op.index()] = None;
                }
            }
            polys[i] = Some(p);
        }
        Ok(polys[self.output.index()].take().expect("output retained"))
    }

    /// Replaces bound variables by circuits; unbound variables stay symbolic.
    pub fn substitute(&self, binding: &BTreeMap<VarName, Circuit>) -> Circuit {
        let mut b = CircuitBuilder::new();
        let bound: BTreeMap<VarName, NodeId> = binding
            .iter()
            .map(|(name, c)| (name.clone(), b.import(c)))
            .collect();
        let out = b.import_with(self, &bound);
        b.finish(out)
    }

    /// Builds the circuit for a polynomial: a sum of coefficient-weighted
    /// power products.
    pub fn from_poly(p: &SparsePoly) -> Circuit {
        let mut b = CircuitBuilder::new();
        let vars: Vec<NodeId> = p.vars().iter().map(|v| b.var(v.clone())).collect();
        let out = b.poly(p, &vars);
        b.finish(out)
    }
}

/// Incremental, deduplicating circuit construction.
#[derive(Debug, Default, Clone)]
pub struct CircuitBuilder {
    nodes: Vec<Node>,
    index: BTreeMap<Node, NodeId>,
}

impl CircuitBuilder {
    pub fn new() -> Self {
        CircuitBuilder::default()
    }

    fn push(&mut self, node: Node) -> NodeId {
        if let Some(&id) = self.index.get(&node) {
            return id;
        }
        let id = NodeId::new(self.nodes.len());
        self.nodes.push(node.clone());
        self.index.insert(node, id);
        id
    }

    fn const_of(&self, id: NodeId) -> Option<&BigInt> {
        match &self.nodes[id.index()] {
            Node::Const(c) => Some(c),
            _ => None,
        }
    }

    pub fn constant(&mut self, c: impl Into<BigInt>) -> NodeId {
        self.push(Node::Const(c.into()))
    }

    pub fn var(&mut self, name: VarName) -> NodeId {
        self.push(Node::Var(name))
    }

    /// Variable by string name.
    ///
    /// # Panics
    /// If `name` is not a valid identifier.
    pub fn named(&mut self, name: &str) -> NodeId {
        self.var(VarName::new(name).expect("valid identifier"))
    }

    pub fn add(&mut self, a: NodeId, b: NodeId) -> NodeId {
        if let (Some(x), Some(y)) = (self.const_of(a), self.const_of(b)) {
            let c = x + y;
            return self.constant(c);
        }
        self.push(Node::Add(a, b))
    }

    pub fn sub(&mut self, a: NodeId, b: NodeId) -> NodeId {
        if let (Some(x), Some(y)) = (self.const_of(a), self.const_of(b)) {
            let c = x - y;
            return self.constant(c);
        }
        self.push(Node::Sub(a, b))
    }

    pub fn mul(&mut self, a: NodeId, b: NodeId) -> NodeId {
        if let (Some(x), Some(y)) = (self.const_of(a), self.const_of(b)) {
            let c = x * y;
            return self.constant(c);
        }
        self.push(Node::Mul(a, b))
    }

    /// `a^e`; exponents above [`MAX_POW`] are split by repeated powering.
    ///
    /// # Panics
    /// If `e == 0`.
    pub fn pow(&mut self, a: NodeId, e: u32) -> NodeId {
        assert!(e >= 1, "pow exponent must be positive");
        if e == 1 {
            return a;
        }
        if let Some(x) = self.const_of(a) {
            let c = Pow::pow(x, e);
            return self.constant(c);
        }
        if e <= MAX_POW {
            return self.push(Node::Pow(a, e));
        }
        let (q, r) = (e / MAX_POW, e % MAX_POW);
        let big = self.push(Node::Pow(a, MAX_POW));
        let high = self.pow(big, q);
        if r == 0 {
            high
        } else {
            let low = self.pow(a, r);
            self.mul(high, low)
        }
    }

    /// `c * a`.
    pub fn scale(&mut self, c: impl Into<BigInt>, a: NodeId) -> NodeId {
        let c = c.into();
        if c.is_one() {
            return a;
        }
        let k = self.constant(c);
        self.mul(k, a)
    }

    /// `a + c`.
    pub fn offset(&mut self, a: NodeId, c: impl Into<BigInt>) -> NodeId {
        let c = c.into();
        if c.is_zero() {
            return a;
        }
        let k = self.constant(c);
        self.add(a, k)
    }

    pub fn sum(&mut self, items: &[NodeId]) -> NodeId {
        match items.split_first() {
            None => self.constant(0),
            Some((&first, rest)) => rest.iter().fold(first, |acc, &x| self.add(acc, x)),
        }
    }

    pub fn product(&mut self, items: &[NodeId]) -> NodeId {
        match items.split_first() {
            None => self.constant(1),
            Some((&first, rest)) => rest.iter().fold(first, |acc, &x| self.mul(acc, x)),
        }
    }

    /// Polynomial `p` with its manifest variables bound to `vars` (same order).
    pub fn poly(&mut self, p: &SparsePoly, vars: &[NodeId]) -> NodeId {
        assert_eq!(vars.len(), p.vars().len(), "one node per manifest variable");
        let mut acc: Option<NodeId> = None;
        for (m, c) in p.terms().rev() {
            let mut factors = Vec::new();
            for (&v, &e) in vars.iter().zip(m.exponents()) {
                if e > 0 {
                    factors.push(self.pow(v, e));
                }
            }
            let mono = self.product(&factors);
            let term = if factors.is_empty() {
                self.constant(c.clone())
            } else {
                self.scale(c.clone(), mono)
            };
            acc = Some(match acc {
                None => term,
                Some(a) => self.add(a, term),
            });
        }
        acc.unwrap_or_else(|| self.constant(0))
    }

    /// Copies `c` into this builder and returns its output node.
    pub fn import(&mut self, c: &Circuit) -> NodeId {
        self.import_with(c, &BTreeMap::new())
    }

    /// Copies `c`, replacing variables found in `binding` by the given nodes.
    pub fn import_with(&mut self, c: &Circuit, binding: &BTreeMap<VarName, NodeId>) -> NodeId {
        let mut map: Vec<NodeId> = Vec::with_capacity(c.nodes.len());
        for node in &c.nodes {
            let id = match node {
                Node::Const(k) => self.constant(k.clone()),
                Node::Var(v) => match binding.get(v) {
                    Some(&id) => id,
                    None => self.var(v.clone()),
                },
                Node::Add(a, b) => self.add(map[a.index()], map[b.index()]),
                Node::Sub(a, b) => self.sub(map[a.index()], map[b.index()]),
                Node::Mul(a, b) => self.mul(map[a.index()], map[b.index()]),
                Node::Pow(a, e) => self.pow(map[a.index()], *e),
            };
            map.push(id);
        }
        map[c.output.index()]
    }

    /// Freezes the builder, keeping only nodes reachable from `output`.
    pub fn finish(self, output: NodeId) -> Circuit {
        let mut live = vec![false; self.nodes.len()];
        live[output.index()] = true;
        for i in (0..self.nodes.len()).rev() {
            if live[i] {
                let (a, b) = self.nodes[i].operands();
                for op in [a, b].into_iter().flatten() {
                    live[op.index()] = true;
                }
            }
        }
        let mut renumber = vec![NodeId(0); self.nodes.len()];
        let mut nodes = Vec::new();
        for (i, node) in self.nodes.into_iter().enumerate() {
            if !live[i] {
                continue;
            }
            let r = |id: NodeId| renumber[id.index()];
            let node = match node {
                Node::Add(a, b) => Node::Add(r(a), r(b)),
                Node::Sub(a, b) => Node::Sub(r(a), r(b)),
                Node::Mul(a, b) => Node::Mul(r(a), r(b)),
                Node::Pow(a, e) => Node::Pow(r(a), e),
                leaf => leaf,
            };
            renumber[i] = NodeId::new(nodes.len());
            nodes.push(node);
        }
        Circuit {
            nodes,
            output: renumber[output.index()],
        }
    }
}
