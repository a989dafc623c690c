//! Finite groups as multiplication tables.

mod analysis;
pub mod catalog;
mod closure;
mod construct;
mod extension;
mod iso;

use std::collections::VecDeque;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

pub use analysis::{analyze, GroupAnalysis};
pub use catalog::{analyze_catalog, build_catalog, classify_catalog, parse_catalog, resolve_group, CatalogEntry, Classification, ClassifiedGroup, BUNDLED_CATALOG};
pub use closure::{closure_from_generators, matrices_closure, perm_closure, GeneratorSet, Matrix, Perm};
pub use construct::{construct_group, GroupSpec};
pub use extension::{central_extension, cyclic_abelianization, decomposition_check, regular_representation, CentralExtension, PermRep};
pub use iso::{find_isomorphism, isomorphic};

/// Engine cap on group orders.
pub const ORDER_CAP: usize = 10_000;
/// Order cap for isomorphism testing.
pub const ISO_CAP: usize = 1000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("group exceeds the cap of {0} elements")]
    CapExceeded(usize),
    #[error("bad action: {0}")]
    BadAction(String),
    #[error("subset is not a normal subgroup")]
    NotNormal,
    #[error("abelianization is not cyclic")]
    NotWeightOne,
    #[error("invalid generators: {0}")]
    BadGenerators(String),
    #[error("invalid multiplication table: {0}")]
    BadTable(String),
    #[error("catalog line {line}: {msg}")]
    Catalog { line: usize, msg: String },
}

/// A finite group given by its full multiplication table. Element `0`
/// need not be the identity, but every constructor here puts it there.
#[derive(Clone)]
pub struct FiniteGroup {
    order: usize,
    mult: Arc<Vec<u16>>,
    inv: Arc<Vec<u16>>,
    identity: usize,
    generators: Vec<usize>,
    labels: Option<Arc<Vec<String>>>,
    provenance: String,
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiniteGroup(order {}, {})", self.order, self.provenance)
    }
}

impl FiniteGroup {
    /// Builds a group from a product function on indices `0..order`.
    /// The table is checked to be a Latin square with an identity;
    /// associativity is checked on generators (which implies it for the
    /// table when the product comes from an actual group law).
    pub fn from_fn(order: usize, provenance: impl Into<String>, f: impl Fn(usize, usize) -> usize) -> Result<Self, GroupError> {
        if order == 0 {
            return Err(GroupError::BadTable("empty group".into()));
        }
        if order > ORDER_CAP {
            return Err(GroupError::CapExceeded(ORDER_CAP));
        }
        let mut mult = vec![0u16; order * order];
        for a in 0..order {
            for b in 0..order {
                let c = f(a, b);
                if c >= order {
                    return Err(GroupError::BadTable(format!("product {a}*{b} out of range")));
                }
                mult[a * order + b] = c as u16;
            }
        }
        Self::from_table(order, mult, provenance.into())
    }

    pub fn from_table(order: usize, mult: Vec<u16>, provenance: String) -> Result<Self, GroupError> {
        if mult.len() != order * order {
            return Err(GroupError::BadTable("table size".into()));
        }
        let identity = (0..order)
            .find(|&e| (0..order).all(|a| mult[e * order + a] as usize == a && mult[a * order + e] as usize == a))
            .ok_or_else(|| GroupError::BadTable("no identity".into()))?;
        let mut seen = vec![false; order];
        for a in 0..order {
            seen.iter_mut().for_each(|s| *s = false);
            for b in 0..order {
                let c = mult[a * order + b] as usize;
                if seen[c] {
                    return Err(GroupError::BadTable(format!("row {a} repeats {c}")));
                }
                seen[c] = true;
            }
        }
        let mut inv = vec![0u16; order];
        for a in 0..order {
            inv[a] = (0..order).find(|&b| mult[a * order + b] as usize == identity).unwrap() as u16;
        }
        let mut g = FiniteGroup {
            order,
            mult: Arc::new(mult),
            inv: Arc::new(inv),
            identity,
            generators: Vec::new(),
            labels: None,
            provenance,
        };
        g.generators = g.greedy_generators();
        for &x in &g.generators {
            for a in 0..order {
                for &y in &g.generators {
                    if g.mul(g.mul(a, x), y) != g.mul(a, g.mul(x, y)) {
                        return Err(GroupError::BadTable("not associative".into()));
                    }
                }
            }
        }
        Ok(g)
    }

    pub fn trivial() -> Self {
        Self::from_fn(1, "trivial", |_, _| 0).unwrap()
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mult[a * self.order + b] as usize
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inv[a] as usize
    }

    #[inline]
    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order
    }

    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    /// Replaces the stored generating set (must generate the group).
    pub fn with_generators(mut self, gens: Vec<usize>) -> Result<Self, GroupError> {
        if self.subgroup(&gens).len() != self.order {
            return Err(GroupError::BadGenerators("do not generate".into()));
        }
        self.generators = gens;
        Ok(self)
    }

    pub fn provenance(&self) -> &str {
        &self.provenance
    }

    pub fn with_provenance(mut self, p: impl Into<String>) -> Self {
        self.provenance = p.into();
        self
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref().map(|v| v.as_slice())
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Self {
        assert_eq!(labels.len(), self.order);
        self.labels = Some(Arc::new(labels));
        self
    }

    pub fn label(&self, a: usize) -> String {
        match &self.labels {
            Some(l) => l[a].clone(),
            None => format!("g{a}"),
        }
    }

    /// `a^k` for any integer `k`.
    pub fn pow(&self, a: usize, k: i64) -> usize {
        let base = if k < 0 { self.inv(a) } else { a };
        let mut e = k.unsigned_abs();
        let mut acc = self.identity;
        let mut b = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, b);
            }
            b = self.mul(b, b);
            e >>= 1;
        }
        acc
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != self.identity {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    /// `x a x^-1`.
    pub fn conj(&self, a: usize, x: usize) -> usize {
        self.mul(self.mul(x, a), self.inv(x))
    }

    /// `a^-1 b^-1 a b`.
    pub fn commutator(&self, a: usize, b: usize) -> usize {
        self.mul(self.mul(self.inv(a), self.inv(b)), self.mul(a, b))
    }

    /// Sorted elements of the subgroup generated by `gens`.
    pub fn subgroup(&self, gens: &[usize]) -> Vec<usize> {
        let mut inside = vec![false; self.order];
        inside[self.identity] = true;
        let mut queue = VecDeque::from([self.identity]);
        while let Some(x) = queue.pop_front() {
            for &g in gens {
                let y = self.mul(x, g);
                if !inside[y] {
                    inside[y] = true;
                    queue.push_back(y);
                }
            }
        }
        (0..self.order).filter(|&i| inside[i]).collect()
    }

    pub fn is_subgroup(&self, subset: &[usize]) -> bool {
        let mut mask = vec![false; self.order];
        subset.iter().for_each(|&i| mask[i] = true);
        mask[self.identity] && subset.iter().all(|&a| subset.iter().all(|&b| mask[self.mul(a, b)]))
    }

    pub fn is_normal(&self, subset: &[usize]) -> bool {
        if !self.is_subgroup(subset) {
            return false;
        }
        let mut mask = vec![false; self.order];
        subset.iter().for_each(|&i| mask[i] = true);
        self.generators.iter().all(|&x| subset.iter().all(|&a| mask[self.conj(a, x)]))
    }

    /// Smallest normal subgroup containing `gens`.
    pub fn normal_closure(&self, gens: &[usize]) -> Vec<usize> {
        let mut current = self.subgroup(gens);
        loop {
            let mut extra: Vec<usize> = current.clone();
            for &a in &current {
                for &x in &self.generators {
                    extra.push(self.conj(a, x));
                }
            }
            extra.sort_unstable();
            extra.dedup();
            let next = self.subgroup(&extra);
            if next.len() == current.len() {
                return current;
            }
            current = next;
        }
    }

    pub fn is_abelian(&self) -> bool {
        self.generators.iter().all(|&a| self.generators.iter().all(|&b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Quotient by a normal subgroup, with the projection from `self`.
    pub fn quotient(&self, normal: &[usize]) -> Result<(FiniteGroup, Vec<usize>), GroupError> {
        if !self.is_normal(normal) {
            return Err(GroupError::NotNormal);
        }
        let mut coset = vec![usize::MAX; self.order];
        let mut reps = Vec::new();
        // identity coset first so that 0 is the identity of the quotient
        let mut order_of_visit: Vec<usize> = vec![self.identity];
        order_of_visit.extend((0..self.order).filter(|&a| a != self.identity));
        for a in order_of_visit {
            if coset[a] != usize::MAX {
                continue;
            }
            let id = reps.len();
            reps.push(a);
            for &h in normal {
                coset[self.mul(a, h)] = id;
            }
        }
        let q = FiniteGroup::from_fn(reps.len(), format!("{} / N({})", self.provenance, normal.len()), |i, j| {
            coset[self.mul(reps[i], reps[j])]
        })?;
        Ok((q, coset))
    }

    /// Elements commuting with everything.
    pub fn center(&self) -> Vec<usize> {
        (0..self.order)
            .filter(|&a| self.generators.iter().all(|&g| self.mul(a, g) == self.mul(g, a)))
            .collect()
    }

    /// Conjugacy class of `a`.
    pub fn conjugacy_class(&self, a: usize) -> Vec<usize> {
        let mut seen = vec![false; self.order];
        seen[a] = true;
        let mut queue = VecDeque::from([a]);
        let mut out = vec![a];
        while let Some(x) = queue.pop_front() {
            for &g in &self.generators {
                let y = self.conj(x, g);
                if !seen[y] {
                    seen[y] = true;
                    out.push(y);
                    queue.push_back(y);
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// Conjugacy classes, each sorted, listed by smallest element.
    pub fn conjugacy_classes(&self) -> Vec<Vec<usize>> {
        let mut done = vec![false; self.order];
        let mut classes = Vec::new();
        for a in 0..self.order {
            if !done[a] {
                let c = self.conjugacy_class(a);
                c.iter().for_each(|&x| done[x] = true);
                classes.push(c);
            }
        }
        classes
    }

    /// A small generating set: repeatedly add the highest-order element
    /// outside the current subgroup.
    fn greedy_generators(&self) -> Vec<usize> {
        let orders: Vec<usize> = (0..self.order).map(|a| self.element_order(a)).collect();
        let mut by_order: Vec<usize> = (0..self.order).collect();
        by_order.sort_by_key(|&a| (std::cmp::Reverse(orders[a]), a));
        let mut gens = Vec::new();
        let mut inside = vec![false; self.order];
        inside[self.identity] = true;
        let mut size = 1;
        while size < self.order {
            let mut best = None;
            let mut best_size = size;
            for &a in by_order.iter().filter(|&&a| !inside[a]).take(16) {
                let mut cand = gens.clone();
                cand.push(a);
                let s = self.subgroup(&cand).len();
                if s > best_size {
                    best_size = s;
                    best = Some(a);
                }
                if s == self.order {
                    break;
                }
            }
            let a = best.unwrap_or_else(|| *by_order.iter().find(|&&a| !inside[a]).unwrap());
            gens.push(a);
            let sub = self.subgroup(&gens);
            sub.iter().for_each(|&x| inside[x] = true);
            size = sub.len();
        }
        gens
    }

    /// Evaluates a word given as `(generator index, exponent)` pairs over
    /// the images `imgs`.
    pub fn eval_word(&self, imgs: &[usize], word: &[(usize, i64)]) -> usize {
        word.iter().fold(self.identity, |acc, &(g, e)| self.mul(acc, self.pow(imgs[g], e)))
    }
}
