//! Degree reduction utilities: flattening one equation into a system of
//! degree-2 equations, and folding a system back into one equation with
//! the conjunction gadget.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::circuit::{Circuit, CircuitBuilder};
use crate::gadgets::conj::conj_node;
use crate::poly::{PolyError, SparsePoly, VarName};

/// A degree-2 system equivalent to one polynomial equation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Flattening {
    vars: Vec<VarName>,
    original: usize,
    /// `(fresh, left, right)`: `vars[fresh] = vars[left] * vars[right]`.
    definitions: Vec<(usize, usize, usize)>,
    system: Vec<SparsePoly>,
}

impl Flattening {
    /// Definitions `u - a*b` first, then the rewritten equation.
    pub fn system(&self) -> &[SparsePoly] {
        &self.system
    }

    /// Original variables followed by the fresh ones.
    pub fn vars(&self) -> &[VarName] {
        &self.vars
    }

    pub fn fresh_vars(&self) -> &[VarName] {
        &self.vars[self.original..]
    }

    /// The unique extension of a point of the original variables to all of [`Flattening::vars`].
    pub fn extend(&self, point: &[BigInt]) -> Result<Vec<BigInt>, PolyError> {
        if point.len() != self.original {
            return Err(PolyError::Arity {
                expected: self.original,
                got: point.len(),
            });
        }
        let mut out = point.to_vec();
        for &(_, l, r) in &self.definitions {
            let v = &out[l] * &out[r];
            out.push(v);
        }
        Ok(out)
    }

    /// Whether every equation of the system vanishes at a full point.
    pub fn satisfied_at(&self, full: &[BigInt]) -> Result<bool, PolyError> {
        for eq in &self.system {
            if !eq.eval((), full)?.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Replaces every monomial of degree above 2 by a product of at most two
/// variables, introducing `u1, u2, ...` for subproducts.
///
/// Factors are paired in balanced rounds (`x*x*y*y` becomes `u1*u2` with
/// `u1 = x^2`, `u2 = y^2`), and equal subproducts share one fresh variable.
pub fn skolem_flatten(p: &SparsePoly) -> Flattening {
    let original = p.vars().len();
    if p.total_degree() <= 2 {
        return Flattening {
            vars: p.vars().to_vec(),
            original,
            definitions: Vec::new(),
            system: vec![p.clone()],
        };
    }
    let mut vars = p.vars().to_vec();
    let mut definitions: Vec<(usize, usize, usize)> = Vec::new();
    let mut memo: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    let mut counter = 0usize;
    let mut rewritten: Vec<(Vec<usize>, BigInt)> = Vec::new();

    for (m, c) in p.terms() {
        let mut atoms: Vec<usize> = Vec::new();
        for (i, &e) in m.exponents().iter().enumerate() {
            atoms.extend(core::iter::repeat_n(i, e as usize));
        }
        while atoms.len() > 2 {
            let mut next = Vec::with_capacity(atoms.len() / 2 + 1);
            for pair in atoms.chunks(2) {
                match *pair {
                    [l, r] => {
                        let key = (l.min(r), l.max(r));
                        let id = *memo.entry(key).or_insert_with(|| {
                            let name = loop {
                                counter += 1;
                                let candidate = VarName::new(format!("u{counter}")).expect("identifier");
                                if !vars.contains(&candidate) {
                                    break candidate;
                                }
                            };
                            vars.push(name);
                            let id = vars.len() - 1;
                            definitions.push((id, key.0, key.1));
                            id
                        });
                        next.push(id);
                    }
                    [single] => next.push(single),
                    _ => unreachable!("chunks of two"),
                }
            }
            atoms = next;
        }
        rewritten.push((atoms, c.clone()));
    }

    let arity = vars.len();
    let monomial = |atoms: &[usize]| {
        let mut e = vec![0u32; arity];
        for &a in atoms {
            e[a] += 1;
        }
        e
    };
    let mut system = Vec::with_capacity(definitions.len() + 1);
    for &(u, l, r) in &definitions {
        let eq = SparsePoly::from_terms(
            vars.clone(),
            [(monomial(&[u]), BigInt::one()), (monomial(&[l, r]), -BigInt::one())],
        )
        .expect("manifest is duplicate-free");
        system.push(eq);
    }
    let main = SparsePoly::from_terms(
        vars.clone(),
        rewritten.iter().map(|(atoms, c)| (monomial(atoms), c.clone())),
    )
    .expect("manifest is duplicate-free");
    system.push(main);
    Flattening {
        vars,
        original,
        definitions,
        system,
    }
}

/// A combined circuit and its degree accounting.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CombineReport {
    pub circuit: Circuit,
    /// [`Circuit::degree_bound`] of the result.
    pub degree_bound: u64,
    /// Degree bound after each fold, starting with the first input.
    pub level_bounds: Vec<u64>,
}

/// Left-nested fold `c(...c(c(e1, e2), e3)..., ek)` with `c(p, q) = p^2 + 2q^2`.
/// Over `Z[i]` the result vanishes exactly when every input does; each fold
/// can double the degree. `None` for an empty list.
pub fn tree_combine(eqs: &[Circuit]) -> Option<CombineReport> {
    let (first, rest) = eqs.split_first()?;
    if rest.is_empty() {
        return Some(CombineReport {
            circuit: first.clone(),
            degree_bound: first.degree_bound(),
            level_bounds: vec![first.degree_bound()],
        });
    }
    let mut b = CircuitBuilder::new();
    let mut acc = b.import(first);
    let mut level_bounds = vec![first.degree_bound()];
    let mut deg = first.degree_bound();
    for eq in rest {
        let next = b.import(eq);
        acc = conj_node(&mut b, acc, next);
        deg = (2 * deg).max(2 * eq.degree_bound());
        level_bounds.push(deg);
    }
    let circuit = b.finish(acc);
    let degree_bound = circuit.degree_bound();
    Some(CombineReport {
        circuit,
        degree_bound,
        level_bounds,
    })
}
