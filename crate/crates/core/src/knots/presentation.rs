use num_integer::Integer;
use serde::{Deserialize, Serialize};

use super::pd::PDCode;
use super::KnotError;

/// A word in the generators: letter `±(g + 1)` is generator `g` or its
/// inverse.
pub type Word = Vec<i32>;

/// The letter for generator `g` to the power `e = ±1`.
pub fn letter(g: usize, e: i32) -> i32 {
    (g as i32 + 1) * e.signum()
}

fn gen_of(l: i32) -> usize {
    l.unsigned_abs() as usize - 1
}

pub(crate) fn inverse(w: &[i32]) -> Word {
    w.iter().rev().map(|l| -l).collect()
}

pub(crate) fn free_reduce(w: &[i32]) -> Word {
    let mut out: Word = Vec::with_capacity(w.len());
    for &l in w {
        if out.last() == Some(&-l) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    out
}

pub(crate) fn cyclic_reduce(w: &[i32]) -> Word {
    let mut w = free_reduce(w);
    while w.len() >= 2 && w[0] == -w[w.len() - 1] {
        w.pop();
        w.remove(0);
    }
    w
}

/// A finite presentation with an abelianization weight `phi` on the
/// generators and a set of meridional generators. `redundant` lists
/// relators that are consequences of the others.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupPresentation {
    pub generator_count: usize,
    pub relators: Vec<Word>,
    pub redundant: Vec<usize>,
    pub phi: Vec<i64>,
    pub meridians: Vec<usize>,
}

/// Result of Tietze elimination: the smaller presentation on the kept
/// generators, and each eliminated generator as a word in the original
/// indices.
#[derive(Clone, Debug)]
pub struct Simplified {
    pub presentation: GroupPresentation,
    pub kept: Vec<usize>,
    pub eliminated: Vec<(usize, Word)>,
}

impl GroupPresentation {
    /// Checks letters are in range and every relator has phi-weight 0.
    pub fn check(&self) -> Result<(), KnotError> {
        if self.phi.len() != self.generator_count {
            return Err(KnotError::Validation("phi has the wrong length".into()));
        }
        for (i, r) in self.relators.iter().enumerate() {
            if r.iter().any(|&l| l == 0 || gen_of(l) >= self.generator_count) {
                return Err(KnotError::Validation(format!("relator {i} uses an unknown generator")));
            }
            if self.weight(r) != 0 {
                return Err(KnotError::Validation(format!("relator {i} has nonzero phi-weight")));
            }
        }
        if self.redundant.iter().any(|&i| i >= self.relators.len()) || self.meridians.iter().any(|&g| g >= self.generator_count) {
            return Err(KnotError::Validation("index out of range".into()));
        }
        Ok(())
    }

    pub fn weight(&self, w: &[i32]) -> i64 {
        w.iter().map(|&l| self.phi[gen_of(l)] * l.signum() as i64).sum()
    }

    /// Relators that are not marked redundant.
    pub fn active_relators(&self) -> Vec<&Word> {
        self.relators.iter().enumerate().filter(|(i, _)| !self.redundant.contains(i)).map(|(_, r)| r).collect()
    }

    pub fn deficiency(&self) -> i64 {
        self.generator_count as i64 - self.active_relators().len() as i64
    }

    /// Invariant factors of the abelianization, `0` for each free factor.
    pub fn abelian_invariants(&self) -> Vec<u64> {
        let n = self.generator_count;
        let mut m: Vec<Vec<i128>> = self
            .relators
            .iter()
            .map(|r| {
                let mut row = vec![0i128; n];
                for &l in r {
                    row[gen_of(l)] += l.signum() as i128;
                }
                row
            })
            .collect();
        let diag = smith_diagonal(&mut m, n);
        let mut out: Vec<u64> = diag.iter().filter(|&&d| d != 1).map(|&d| d as u64).collect();
        out.extend(std::iter::repeat_n(0, n - diag.len()));
        out
    }

    /// Tietze elimination of generators occurring once in some relator.
    /// Redundant relators are dropped first; the first meridian (or
    /// generator 0) is never eliminated. Stops before the total relator
    /// length would exceed `max_len`.
    pub fn simplify(&self, max_len: usize) -> Simplified {
        let n = self.generator_count;
        let mut rels: Vec<Word> = self.active_relators().into_iter().map(|r| cyclic_reduce(r)).collect();
        let mut alive = vec![true; n];
        let protect = self.meridians.first().copied().unwrap_or(0);
        let mut eliminated = Vec::new();
        loop {
            let total: usize = rels.iter().map(|r| r.len()).sum();
            let mut occ = vec![0usize; n];
            for r in &rels {
                for &l in r {
                    occ[gen_of(l)] += 1;
                }
            }
            let mut best: Option<(usize, usize, usize)> = None;
            for (ri, r) in rels.iter().enumerate() {
                let mut here = vec![0usize; 0];
                for &l in r {
                    here.push(gen_of(l));
                }
                for &g in &here {
                    if g == protect || here.iter().filter(|&&h| h == g).count() != 1 {
                        continue;
                    }
                    let others = occ[g] - 1;
                    let cost = (r.len() - 1) * others;
                    let grown = total + cost - others - r.len();
                    if grown > max_len && grown > total {
                        continue;
                    }
                    if best.is_none_or(|b| (cost, ri, g) < b) {
                        best = Some((cost, ri, g));
                    }
                }
            }
            let Some((_, ri, g)) = best else { break };
            let r = rels.remove(ri);
            let k = r.iter().position(|&l| gen_of(l) == g).unwrap();
            let e = r[k].signum();
            // r = A g^e B = 1  =>  g^e = A^-1 B^-1  =>  g = (B A)^(-e)
            let mut ba: Word = r[k + 1..].to_vec();
            ba.extend_from_slice(&r[..k]);
            let expr = if e > 0 { inverse(&ba) } else { ba };
            let inv_expr = inverse(&expr);
            for w in rels.iter_mut() {
                let mut out = Vec::with_capacity(w.len());
                for &l in w.iter() {
                    if gen_of(l) == g {
                        out.extend_from_slice(if l > 0 { &expr } else { &inv_expr });
                    } else {
                        out.push(l);
                    }
                }
                *w = cyclic_reduce(&out);
            }
            alive[g] = false;
            eliminated.push((g, expr));
        }
        let kept: Vec<usize> = (0..n).filter(|&g| alive[g]).collect();
        let mut index = vec![usize::MAX; n];
        for (i, &g) in kept.iter().enumerate() {
            index[g] = i;
        }
        let relators = rels.iter().map(|r| r.iter().map(|&l| letter(index[gen_of(l)], l)).collect()).collect();
        let presentation = GroupPresentation {
            generator_count: kept.len(),
            relators,
            redundant: Vec::new(),
            phi: kept.iter().map(|&g| self.phi[g]).collect(),
            meridians: self.meridians.iter().filter(|&&g| alive[g]).map(|&g| index[g]).collect(),
        };
        Simplified { presentation, kept, eliminated }
    }
}

/// Diagonal of the Smith normal form (nonzero entries only).
fn smith_diagonal(m: &mut [Vec<i128>], cols: usize) -> Vec<i128> {
    let rows = m.len();
    let mut diag = Vec::new();
    let mut r0 = 0;
    let mut c0 = 0;
    while r0 < rows && c0 < cols {
        // pick the smallest nonzero entry in the remaining block
        let mut piv = None;
        for i in r0..rows {
            for j in c0..cols {
                if m[i][j] != 0 && piv.is_none_or(|(a, b): (usize, usize)| m[i][j].abs() < m[a][b].abs()) {
                    piv = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = piv else { break };
        m.swap(r0, pi);
        for row in m.iter_mut() {
            row.swap(c0, pj);
        }
        loop {
            let p = m[r0][c0];
            let mut clean = true;
            for i in r0 + 1..rows {
                let q = Integer::div_floor(&m[i][c0], &p);
                if q != 0 {
                    for j in c0..cols {
                        m[i][j] -= q * m[r0][j];
                    }
                }
                if m[i][c0] != 0 {
                    clean = false;
                }
            }
            for j in c0 + 1..cols {
                let q = Integer::div_floor(&m[r0][j], &p);
                if q != 0 {
                    for row in m.iter_mut() {
                        row[j] -= q * row[c0];
                    }
                }
                if m[r0][j] != 0 {
                    clean = false;
                }
            }
            if clean {
                // divisibility condition for the rest of the block
                let bad = (r0 + 1..rows).flat_map(|i| (c0 + 1..cols).map(move |j| (i, j))).find(|&(i, j)| m[i][j] % p != 0);
                match bad {
                    None => break,
                    Some((i, _)) => {
                        for j in c0..cols {
                            m[r0][j] += m[i][j];
                        }
                        continue;
                    }
                }
            }
            // move the smallest entry of the pivot row/column to the pivot
            let mut best = (r0, c0);
            for i in r0..rows {
                if m[i][c0] != 0 && m[i][c0].abs() < m[best.0][best.1].abs() {
                    best = (i, c0);
                }
            }
            for j in c0..cols {
                if m[r0][j] != 0 && m[r0][j].abs() < m[best.0][best.1].abs() {
                    best = (r0, j);
                }
            }
            m.swap(r0, best.0);
            for row in m.iter_mut() {
                row.swap(c0, best.1);
            }
        }
        diag.push(m[r0][c0].abs());
        r0 += 1;
        c0 += 1;
    }
    diag
}

/// The Wirtinger presentation: one meridional generator per arc and one
/// relator per crossing; the last relator is marked redundant.
pub fn wirtinger(pd: &PDCode) -> Result<GroupPresentation, KnotError> {
    if pd.components() != 1 {
        return Err(KnotError::MultiComponent(pd.components()));
    }
    let (arc, count) = pd.arcs();
    let relators: Vec<Word> = pd
        .crossings()
        .iter()
        .enumerate()
        .map(|(c, x)| {
            let a = arc[x[0] as usize - 1];
            let cc = arc[x[2] as usize - 1];
            let b = arc[x[1] as usize - 1];
            let d = pd.sign(c) as i32;
            // x_c = x_b^-d x_a x_b^d
            vec![letter(cc, 1), letter(b, -d), letter(a, -1), letter(b, d)]
        })
        .collect();
    let n = relators.len();
    Ok(GroupPresentation {
        generator_count: count,
        relators,
        redundant: vec![n - 1],
        phi: vec![1; count],
        meridians: (0..count).collect(),
    })
}

/// Schubert normal form `S(b, a)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwoBridgeSpec {
    pub b: i64,
    pub a: i64,
}

impl TwoBridgeSpec {
    pub fn new(b: i64, a: i64) -> Result<Self, KnotError> {
        if b <= 0 || b % 2 == 0 {
            return Err(KnotError::BadSpec(format!("b = {b} must be odd and positive")));
        }
        if a.abs() >= b.max(2) || a.gcd(&b) != 1 {
            return Err(KnotError::BadSpec(format!("a = {a} must be coprime to b = {b} with |a| < b")));
        }
        Ok(TwoBridgeSpec { b, a })
    }

    /// `ε_j = (-1)^⌊aj/b⌋` for `j = 1..b-1`.
    pub fn epsilons(&self) -> Vec<i32> {
        (1..self.b).map(|j| if Integer::div_floor(&(self.a * j), &self.b) % 2 == 0 { 1 } else { -1 }).collect()
    }
}

/// `⟨u, v | w u w⁻¹ v⁻¹⟩` with `w = u^{ε_1} v^{ε_2} ⋯ v^{ε_{b-1}}`; an even
/// `a` is replaced by the odd representative `a ∓ b`.
pub fn two_bridge_presentation(spec: &TwoBridgeSpec) -> Result<GroupPresentation, KnotError> {
    let spec = TwoBridgeSpec::new(spec.b, spec.a)?;
    // S(b, a) depends on a mod b; the palindromic form needs a odd
    let spec = if spec.a % 2 == 0 { TwoBridgeSpec { b: spec.b, a: spec.a - spec.b * spec.a.signum() } } else { spec };
    let eps = spec.epsilons();
    let k = eps.len();
    if (0..k).any(|j| eps[j] != eps[k - 1 - j]) {
        return Err(KnotError::BadSpec(format!("epsilon sequence of S({}, {}) is not a palindrome", spec.b, spec.a)));
    }
    let w: Word = eps.iter().enumerate().map(|(j, &e)| letter(j % 2, e)).collect();
    let mut r = w.clone();
    r.push(letter(0, 1));
    r.extend(inverse(&w));
    r.push(letter(1, -1));
    Ok(GroupPresentation { generator_count: 2, relators: vec![r], redundant: Vec::new(), phi: vec![1, 1], meridians: vec![0, 1] })
}

/// `⟨x, y | x^p y^{-q}⟩` with `phi(x) = q`, `phi(y) = p`.
pub fn torus_presentation(p: i64, q: i64) -> Result<GroupPresentation, KnotError> {
    if p.abs() < 2 || q.abs() < 2 {
        return Err(KnotError::BadSpec(format!("torus parameters {p}, {q} must have absolute value at least 2")));
    }
    if p.gcd(&q) != 1 {
        return Err(KnotError::NotCoprime(p, q));
    }
    let mut r: Word = std::iter::repeat_n(letter(0, p.signum() as i32), p.unsigned_abs() as usize).collect();
    r.extend(std::iter::repeat_n(letter(1, -q.signum() as i32), q.unsigned_abs() as usize));
    Ok(GroupPresentation { generator_count: 2, relators: vec![r], redundant: Vec::new(), phi: vec![q, p], meridians: Vec::new() })
}

/// `⟨x |⟩` with `x` a meridian.
pub fn unknot_presentation() -> GroupPresentation {
    GroupPresentation { generator_count: 1, relators: Vec::new(), redundant: Vec::new(), phi: vec![1], meridians: vec![0] }
}

/// Free product amalgamating the first marked meridian of each factor.
pub fn connected_sum(p1: &GroupPresentation, p2: &GroupPresentation) -> Result<GroupPresentation, KnotError> {
    let (&m1, &m2) = match (p1.meridians.first(), p2.meridians.first()) {
        (Some(a), Some(b)) => (a, b),
        _ => return Err(KnotError::NoMeridian),
    };
    let n1 = p1.generator_count;
    let shift = |w: &Word| -> Word { w.iter().map(|&l| letter(gen_of(l) + n1, l)).collect() };
    let mut relators = p1.relators.clone();
    relators.extend(p2.relators.iter().map(shift));
    relators.push(vec![letter(m1, 1), letter(m2 + n1, -1)]);
    let mut redundant = p1.redundant.clone();
    redundant.extend(p2.redundant.iter().map(|&i| i + p1.relators.len()));
    let mut phi = p1.phi.clone();
    phi.extend_from_slice(&p2.phi);
    let mut meridians = p1.meridians.clone();
    meridians.extend(p2.meridians.iter().map(|&g| g + n1));
    let out = GroupPresentation { generator_count: n1 + p2.generator_count, relators, redundant, phi, meridians };
    out.check()?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::knots::parse_pd;

    #[test]
    fn schubert_examples() {
        let t = two_bridge_presentation(&TwoBridgeSpec::new(3, 1).unwrap()).unwrap();
        // w = uv: relator u v u v^-1 u^-1 v^-1
        assert_eq!(t.relators, vec![vec![1, 2, 1, -2, -1, -2]]);
        let f = TwoBridgeSpec::new(5, 3).unwrap();
        assert_eq!(f.epsilons(), vec![1, -1, -1, 1]);
        assert!(matches!(TwoBridgeSpec::new(6, 1), Err(KnotError::BadSpec(_))));
        assert!(matches!(TwoBridgeSpec::new(9, 3), Err(KnotError::BadSpec(_))));
    }

    #[test]
    fn torus_relator() {
        let t = torus_presentation(2, 3).unwrap();
        assert_eq!(t.relators, vec![vec![1, 1, -2, -2, -2]]);
        assert_eq!(t.phi, vec![3, 2]);
        t.check().unwrap();
        assert_eq!(torus_presentation(4, 6), Err(KnotError::NotCoprime(4, 6)));
    }

    #[test]
    fn wirtinger_trefoil() {
        let p = wirtinger(&parse_pd("X[1,5,2,4] X[3,1,4,6] X[5,3,6,2]").unwrap()).unwrap();
        assert_eq!(p.generator_count, 3);
        assert_eq!(p.relators.len(), 3);
        p.check().unwrap();
        assert_eq!(p.abelian_invariants(), vec![0]);
        assert_eq!(p.deficiency(), 1);
    }

    #[test]
    fn abelian_invariants_of_small_groups() {
        let p = GroupPresentation {
            generator_count: 2,
            relators: vec![vec![1, 1, 1, 1], vec![2, 2, 2, 2, 2, 2], vec![1, 2, -1, -2]],
            redundant: vec![],
            phi: vec![0, 0],
            meridians: vec![],
        };
        assert_eq!(p.abelian_invariants(), vec![2, 12]);
    }

    #[test]
    fn connected_sum_shape() {
        let t = two_bridge_presentation(&TwoBridgeSpec::new(3, 1).unwrap()).unwrap();
        let s = connected_sum(&t, &t).unwrap();
        assert_eq!(s.generator_count, 4);
        assert_eq!(s.deficiency(), 1);
        assert_eq!(connected_sum(&t, &torus_presentation(2, 3).unwrap()), Err(KnotError::NoMeridian));
    }

    #[test]
    fn simplification_keeps_deficiency() {
        let p = wirtinger(&parse_pd("X[4,2,5,1] X[8,6,1,5] X[6,3,7,4] X[2,7,3,8]").unwrap()).unwrap();
        let s = p.simplify(1000);
        assert_eq!(s.presentation.deficiency(), 1);
        assert!(s.presentation.generator_count <= 2);
        assert_eq!(s.presentation.abelian_invariants(), vec![0]);
    }
}
