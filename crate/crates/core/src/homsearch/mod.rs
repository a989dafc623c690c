//! Homomorphisms from finitely presented groups onto finite groups.

use std::fmt;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::groups::FiniteGroup;
use crate::knots::{GroupPresentation, Word};

/// Largest target handled by the search.
pub const TARGET_CAP: usize = 1000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HomError {
    #[error("target of order {0} exceeds the search cap {TARGET_CAP}")]
    TargetTooLarge(usize),
    #[error("node budget of {0} exhausted")]
    BudgetExhausted(u64),
    #[error("images do not satisfy relator {0}")]
    NotAHomomorphism(usize),
    #[error("wrong number of images: {got} for {expected} generators")]
    Arity { got: usize, expected: usize },
}

/// A homomorphism given by generator images.
#[derive(Clone)]
pub struct GroupHom {
    pub target: FiniteGroup,
    pub images: Vec<usize>,
}

impl fmt::Debug for GroupHom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GroupHom({:?} -> order {})", self.images, self.target.order())
    }
}

impl PartialEq for GroupHom {
    fn eq(&self, o: &Self) -> bool {
        self.images == o.images && self.target.order() == o.target.order()
    }
}

impl GroupHom {
    /// Checks that every relator maps to the identity.
    pub fn new(p: &GroupPresentation, target: FiniteGroup, images: Vec<usize>) -> Result<Self, HomError> {
        if images.len() != p.generator_count {
            return Err(HomError::Arity { got: images.len(), expected: p.generator_count });
        }
        let h = GroupHom { target, images };
        if let Some(i) = p.relators.iter().position(|r| h.eval(r) != h.target.identity()) {
            return Err(HomError::NotAHomomorphism(i));
        }
        Ok(h)
    }

    pub fn eval(&self, w: &[i32]) -> usize {
        let g = &self.target;
        w.iter().fold(g.identity(), |acc, &l| {
            let x = self.images[l.unsigned_abs() as usize - 1];
            g.mul(acc, if l > 0 { x } else { g.inv(x) })
        })
    }

    pub fn image(&self) -> Vec<usize> {
        self.target.subgroup(&self.images)
    }

    pub fn is_surjective(&self) -> bool {
        self.image().len() == self.target.order()
    }

    /// `x f x⁻¹`.
    pub fn conjugate(&self, x: usize) -> GroupHom {
        GroupHom { target: self.target.clone(), images: self.images.iter().map(|&a| self.target.conj(a, x)).collect() }
    }
}

/// True iff the subgroup generated by `images` is cyclic.
pub fn image_is_cyclic(g: &FiniteGroup, images: &[usize]) -> bool {
    let h = g.subgroup(images);
    h.iter().any(|&x| g.element_order(x) == h.len())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EpiSearchConfig {
    pub up_to_conjugacy: bool,
    pub require_surjective: bool,
    /// All meridian generators map into one conjugacy class.
    pub meridian_class_restriction: bool,
    pub node_budget: u64,
}

impl Default for EpiSearchConfig {
    fn default() -> Self {
        EpiSearchConfig { up_to_conjugacy: true, require_surjective: true, meridian_class_restriction: true, node_budget: 100_000_000 }
    }
}

impl EpiSearchConfig {
    /// Every homomorphism, one by one.
    pub fn all() -> Self {
        EpiSearchConfig { up_to_conjugacy: false, require_surjective: false, ..Self::default() }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SearchStats {
    pub nodes: u64,
    pub pruned: u64,
    pub found_before_dedup: u64,
}

#[derive(Clone, Debug)]
pub struct EpiResult {
    pub homs: Vec<GroupHom>,
    pub complete: bool,
    pub stats: SearchStats,
}

impl EpiResult {
    pub fn require_complete(self) -> Result<Self, HomError> {
        if self.complete {
            Ok(self)
        } else {
            Err(HomError::BudgetExhausted(self.stats.nodes))
        }
    }
}

struct Search<'a> {
    g: &'a FiniteGroup,
    rels: Vec<Word>,
    /// relators containing each generator
    by_gen: Vec<Vec<usize>>,
    order: Vec<usize>,
    meridian: Vec<bool>,
    class: Option<Vec<usize>>,
    budget: u64,
    stats: SearchStats,
    out: Vec<Vec<usize>>,
    exhausted: bool,
}

const UNSET: usize = usize::MAX;

impl Search<'_> {
    fn value(&self, a: &[usize], l: i32) -> usize {
        let x = a[l.unsigned_abs() as usize - 1];
        if l > 0 {
            x
        } else {
            self.g.inv(x)
        }
    }

    fn eval(&self, a: &[usize], w: &[i32]) -> usize {
        w.iter().fold(self.g.identity(), |acc, &l| self.g.mul(acc, self.value(a, l)))
    }

    /// Forces generators determined by relators; returns false on a
    /// violated relator. Newly set generators are pushed to `trail`.
    fn propagate(&mut self, a: &mut [usize], trail: &mut Vec<usize>, start: usize) -> bool {
        let mut queue = vec![start];
        while let Some(gen) = queue.pop() {
            for ri in 0..self.by_gen[gen].len() {
                let r = &self.rels[self.by_gen[gen][ri]];
                let mut missing = None;
                let mut count = 0;
                let mut distinct = true;
                for &l in r {
                    let h = l.unsigned_abs() as usize - 1;
                    if a[h] == UNSET {
                        match missing {
                            None => missing = Some(h),
                            Some(m) if m == h => {}
                            Some(_) => distinct = false,
                        }
                        if Some(h) == missing {
                            count += 1;
                        }
                    }
                }
                match missing {
                    None => {
                        if self.eval(a, r) != self.g.identity() {
                            self.stats.pruned += 1;
                            return false;
                        }
                    }
                    Some(h) if distinct && count == 1 => {
                        let k = r.iter().position(|&l| l.unsigned_abs() as usize - 1 == h).unwrap();
                        let e = r[k];
                        // A x^e B = 1  =>  x^e = (B A)^-1
                        let ba = self.g.mul(self.eval(a, &r[k + 1..]), self.eval(a, &r[..k]));
                        let xe = self.g.inv(ba);
                        let x = if e > 0 { xe } else { self.g.inv(xe) };
                        if let Some(c) = &self.class {
                            if self.meridian[h] && c.binary_search(&x).is_err() {
                                self.stats.pruned += 1;
                                return false;
                            }
                        }
                        a[h] = x;
                        trail.push(h);
                        queue.push(h);
                    }
                    _ => {}
                }
            }
        }
        true
    }

    fn candidates(&self, gen: usize) -> Vec<usize> {
        match &self.class {
            Some(c) if self.meridian[gen] => c.clone(),
            _ => self.g.elements().collect(),
        }
    }

    /// Most constrained unassigned generator with its candidates that
    /// satisfy every relator it would complete; falls back to the static
    /// order when no relator is one step from completion.
    fn choose(&self, a: &mut [usize]) -> Option<(usize, Vec<usize>)> {
        let mut best: Option<(usize, Vec<usize>)> = None;
        for &h in &self.order {
            if a[h] != UNSET {
                continue;
            }
            let closing: Vec<usize> = self.by_gen[h]
                .iter()
                .copied()
                .filter(|&ri| self.rels[ri].iter().all(|&l| {
                    let x = l.unsigned_abs() as usize - 1;
                    x == h || a[x] != UNSET
                }))
                .collect();
            if closing.is_empty() {
                continue;
            }
            let mut cands = Vec::new();
            for x in self.candidates(h) {
                a[h] = x;
                if closing.iter().all(|&ri| self.eval(a, &self.rels[ri]) == self.g.identity()) {
                    cands.push(x);
                }
            }
            a[h] = UNSET;
            if best.as_ref().is_none_or(|b| cands.len() < b.1.len()) {
                let done = cands.len() <= 1;
                best = Some((h, cands));
                if done {
                    break;
                }
            }
        }
        best.or_else(|| {
            let h = *self.order.iter().find(|&&h| a[h] == UNSET)?;
            Some((h, self.candidates(h)))
        })
    }

    fn run(&mut self, a: &mut Vec<usize>) {
        if self.exhausted {
            return;
        }
        let Some((gen, cands)) = self.choose(a) else {
            self.out.push(a.clone());
            return;
        };
        for x in cands {
            self.stats.nodes += 1;
            if self.stats.nodes > self.budget {
                self.exhausted = true;
                return;
            }
            let mut trail = vec![gen];
            a[gen] = x;
            if self.propagate(a, &mut trail, gen) {
                self.run(a);
            }
            for h in trail {
                a[h] = UNSET;
            }
            if self.exhausted {
                return;
            }
        }
    }
}

/// Branching order: breadth-first through shared relators from the first
/// meridian, so that relators close up early.
fn branch_order(p: &GroupPresentation, first: usize) -> Vec<usize> {
    let n = p.generator_count;
    let mut seen = vec![false; n];
    let mut order = Vec::with_capacity(n);
    let mut starts: Vec<usize> = std::iter::once(first).chain(0..n).collect();
    starts.dedup();
    for s in starts {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut queue = std::collections::VecDeque::from([s]);
        while let Some(g) = queue.pop_front() {
            order.push(g);
            for r in &p.relators {
                if r.iter().any(|&l| l.unsigned_abs() as usize - 1 == g) {
                    for &l in r {
                        let h = l.unsigned_abs() as usize - 1;
                        if !seen[h] {
                            seen[h] = true;
                            queue.push_back(h);
                        }
                    }
                }
            }
        }
    }
    order
}

/// Enumerates homomorphisms `p → g` by backtracking with relator
/// propagation. With `up_to_conjugacy`, one representative per
/// inner-automorphism orbit is kept (the lexicographically least
/// conjugate). Output is sorted by image vectors.
pub fn enumerate_homs(p: &GroupPresentation, g: &FiniteGroup, cfg: &EpiSearchConfig) -> Result<EpiResult, HomError> {
    if g.order() > TARGET_CAP {
        return Err(HomError::TargetTooLarge(g.order()));
    }
    let n = p.generator_count;
    let meridian: Vec<bool> = (0..n).map(|i| p.meridians.contains(&i)).collect();
    let restrict = cfg.meridian_class_restriction && !p.meridians.is_empty();
    let first = p.meridians.first().copied().unwrap_or(0);
    let rels: Vec<Word> = p.relators.iter().filter(|r| !r.is_empty()).cloned().collect();
    let mut by_gen = vec![Vec::new(); n];
    for (i, r) in rels.iter().enumerate() {
        for &l in r {
            let h = l.unsigned_abs() as usize - 1;
            if by_gen[h].last() != Some(&i) {
                by_gen[h].push(i);
            }
        }
    }
    let order = branch_order(p, first);
    // top-level branches: (class restriction, fixed image of the first generator)
    let classes: Vec<Option<Vec<usize>>> = if restrict {
        g.conjugacy_classes()
            .into_iter()
            .map(|mut c| {
                c.sort_unstable();
                Some(c)
            })
            .collect()
    } else {
        vec![None]
    };
    let mut branches: Vec<(Option<Vec<usize>>, usize)> = Vec::new();
    for c in &classes {
        let firsts: Vec<usize> = match (c, cfg.up_to_conjugacy) {
            (Some(c), true) => vec![c[0]],
            (Some(c), false) => c.clone(),
            (None, _) => g.elements().collect(),
        };
        branches.extend(firsts.into_iter().map(|x| (c.clone(), x)));
    }
    if n == 0 {
        branches = vec![(None, UNSET)];
    }
    let per_branch = cfg.node_budget;
    let results: Vec<(Vec<Vec<usize>>, SearchStats, bool)> = branches
        .par_iter()
        .map(|(class, x)| {
            let mut s = Search {
                g,
                rels: rels.clone(),
                by_gen: by_gen.clone(),
                order: order.clone(),
                meridian: meridian.clone(),
                class: class.clone(),
                budget: per_branch,
                stats: SearchStats::default(),
                out: Vec::new(),
                exhausted: false,
            };
            let mut a = vec![UNSET; n];
            if n > 0 {
                a[first] = *x;
                s.stats.nodes += 1;
                let mut trail = vec![first];
                if !s.propagate(&mut a, &mut trail, first) {
                    return (Vec::new(), s.stats, false);
                }
            }
            s.run(&mut a);
            (s.out, s.stats, s.exhausted)
        })
        .collect();
    let mut stats = SearchStats::default();
    let mut found = Vec::new();
    let mut exhausted = false;
    for (out, st, ex) in results {
        stats.nodes += st.nodes;
        stats.pruned += st.pruned;
        exhausted |= ex;
        found.extend(out);
    }
    if stats.nodes > cfg.node_budget {
        exhausted = true;
    }
    stats.found_before_dedup = found.len() as u64;
    let mut homs: Vec<Vec<usize>> = found
        .into_iter()
        .filter(|a| !cfg.require_surjective || g.subgroup(a).len() == g.order())
        .map(|a| if cfg.up_to_conjugacy { canonical_conjugate(g, &a) } else { a })
        .collect();
    homs.sort();
    homs.dedup();
    let homs = homs
        .into_iter()
        .map(|images| {
            let h = GroupHom { target: g.clone(), images };
            debug_assert!(p.relators.iter().all(|r| h.eval(r) == g.identity()));
            h
        })
        .collect();
    Ok(EpiResult { homs, complete: !exhausted, stats })
}

/// Lexicographically least image vector among all conjugates.
pub fn canonical_conjugate(g: &FiniteGroup, images: &[usize]) -> Vec<usize> {
    g.elements().map(|x| images.iter().map(|&a| g.conj(a, x)).collect::<Vec<_>>()).min().unwrap_or_default()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{construct_group, GroupSpec};
    use crate::knots::{torus_presentation, two_bridge_presentation, TwoBridgeSpec};

    fn trefoil() -> GroupPresentation {
        two_bridge_presentation(&TwoBridgeSpec::new(3, 1).unwrap()).unwrap()
    }

    #[test]
    fn trefoil_onto_s3() {
        let s3 = construct_group(&GroupSpec::Symmetric(3)).unwrap();
        let cfg = EpiSearchConfig { up_to_conjugacy: false, require_surjective: true, ..EpiSearchConfig::default() };
        let r = enumerate_homs(&trefoil(), &s3, &cfg).unwrap();
        assert_eq!(r.homs.len(), 6);
        assert!(r.complete);
        let all = enumerate_homs(&trefoil(), &s3, &EpiSearchConfig { meridian_class_restriction: false, ..EpiSearchConfig::all() }).unwrap();
        // 6 surjections, 3 with both images the same transposition, 3 into A3... brute force below
        let brute = (0..6).flat_map(|a| (0..6).map(move |b| vec![a, b])).filter(|v| {
            GroupHom::new(&trefoil(), s3.clone(), v.clone()).is_ok()
        }).count();
        assert_eq!(all.homs.len(), brute);
        let up = enumerate_homs(&trefoil(), &s3, &EpiSearchConfig::default()).unwrap();
        assert_eq!(up.homs.len(), 1);
        let orbit: usize = up.homs.iter().map(|h| {
            let mut c: Vec<Vec<usize>> = s3.elements().map(|x| h.conjugate(x).images).collect();
            c.sort();
            c.dedup();
            c.len()
        }).sum();
        assert_eq!(orbit, 6);
    }

    #[test]
    fn trivial_target() {
        let r = enumerate_homs(&trefoil(), &FiniteGroup::trivial(), &EpiSearchConfig::default()).unwrap();
        assert_eq!(r.homs.len(), 1);
    }

    #[test]
    fn cyclic_counts_are_euler_phi() {
        for n in [2usize, 5, 6, 12] {
            let c = construct_group(&GroupSpec::Cyclic(n)).unwrap();
            let cfg = EpiSearchConfig { up_to_conjugacy: false, ..EpiSearchConfig::default() };
            let r = enumerate_homs(&trefoil(), &c, &cfg).unwrap();
            let phi = (1..=n).filter(|&k| num_integer::gcd(k, n) == 1).count();
            assert_eq!(r.homs.len(), phi, "n = {n}");
        }
    }

    #[test]
    fn torus_presentation_without_meridians() {
        let s3 = construct_group(&GroupSpec::Symmetric(3)).unwrap();
        let p = torus_presentation(2, 3).unwrap();
        let r = enumerate_homs(&p, &s3, &EpiSearchConfig { up_to_conjugacy: false, ..EpiSearchConfig::default() }).unwrap();
        assert_eq!(r.homs.len(), 6);
    }

    #[test]
    fn cyclic_images() {
        let c6 = construct_group(&GroupSpec::Cyclic(6)).unwrap();
        assert!(image_is_cyclic(&c6, &[2, 4]));
        let s3 = construct_group(&GroupSpec::Dihedral(3)).unwrap();
        assert!(!image_is_cyclic(&s3, &[3, 4]));
        let g = construct_group(&GroupSpec::Pqr { p: 2, q: 3, r: 5, a: 2, b: 4 }).unwrap();
        // x, y generate the C_15 commutator subgroup
        assert!(image_is_cyclic(&g, &[1, 3]));
    }

    #[test]
    fn budget_is_reported() {
        let s4 = construct_group(&GroupSpec::Symmetric(4)).unwrap();
        let cfg = EpiSearchConfig { node_budget: 3, ..EpiSearchConfig::all() };
        let r = enumerate_homs(&trefoil(), &s4, &cfg).unwrap();
        assert!(!r.complete);
        let nodes = r.stats.nodes;
        assert_eq!(r.require_complete().unwrap_err(), HomError::BudgetExhausted(nodes));
    }
}
