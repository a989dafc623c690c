use std::collections::HashMap;
use std::hash::Hash;

use super::{FiniteGroup, GroupError, ORDER_CAP};

/// A permutation of `0..n`; products compose left to right, so
/// `(p * q)(i) = q(p(i))`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm(pub Vec<u16>);

impl Perm {
    pub fn identity(n: usize) -> Self {
        Perm((0..n as u16).collect())
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn then(&self, q: &Perm) -> Perm {
        Perm(self.0.iter().map(|&i| q.0[i as usize]).collect())
    }

    pub fn inverse(&self) -> Perm {
        let mut out = vec![0u16; self.0.len()];
        for (i, &j) in self.0.iter().enumerate() {
            out[j as usize] = i as u16;
        }
        Perm(out)
    }

    /// Parses 1-based cycle notation such as `(1 2 3)(4 5)` or `()`, on
    /// `degree` points (at least the largest point mentioned).
    pub fn parse_cycles(text: &str, degree: usize) -> Result<Perm, GroupError> {
        let bad = |m: &str| GroupError::BadGenerators(format!("{m} in `{text}`"));
        let mut cycles: Vec<Vec<usize>> = Vec::new();
        let mut rest = text.trim();
        while !rest.is_empty() {
            let open = rest.strip_prefix('(').ok_or_else(|| bad("expected `(`"))?;
            let close = open.find(')').ok_or_else(|| bad("unclosed cycle"))?;
            let body = &open[..close];
            let pts: Result<Vec<usize>, _> =
                body.split([' ', ',']).filter(|s| !s.is_empty()).map(|s| s.parse::<usize>()).collect();
            let pts = pts.map_err(|_| bad("bad point"))?;
            if pts.contains(&0) {
                return Err(bad("points are 1-based"));
            }
            cycles.push(pts);
            rest = open[close + 1..].trim_start();
        }
        let n = cycles.iter().flatten().copied().max().unwrap_or(0).max(degree);
        let mut img: Vec<u16> = (0..n as u16).collect();
        let mut touched = vec![false; n];
        for c in &cycles {
            for (k, &p) in c.iter().enumerate() {
                if touched[p - 1] {
                    return Err(bad("point repeated"));
                }
                touched[p - 1] = true;
                img[p - 1] = (c[(k + 1) % c.len()] - 1) as u16;
            }
        }
        Ok(Perm(img))
    }

    /// 1-based cycle notation.
    pub fn to_cycles(&self) -> String {
        let mut seen = vec![false; self.0.len()];
        let mut s = String::new();
        for i in 0..self.0.len() {
            if seen[i] || self.0[i] as usize == i {
                continue;
            }
            let mut cyc = Vec::new();
            let mut j = i;
            while !seen[j] {
                seen[j] = true;
                cyc.push((j + 1).to_string());
                j = self.0[j] as usize;
            }
            s.push('(');
            s.push_str(&cyc.join(" "));
            s.push(')');
        }
        if s.is_empty() {
            s.push_str("()");
        }
        s
    }
}

/// A square matrix over `F_q`, `q` prime, entries in `0..q`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix {
    pub q: u32,
    pub dim: usize,
    pub entries: Vec<u32>,
}

impl Matrix {
    pub fn identity(q: u32, dim: usize) -> Self {
        let mut entries = vec![0; dim * dim];
        (0..dim).for_each(|i| entries[i * dim + i] = 1);
        Matrix { q, dim, entries }
    }

    pub fn from_rows(q: u32, rows: &[Vec<i64>]) -> Result<Self, GroupError> {
        let dim = rows.len();
        if rows.iter().any(|r| r.len() != dim) || dim == 0 {
            return Err(GroupError::BadGenerators("matrix must be square".into()));
        }
        let entries = rows.iter().flatten().map(|&v| v.rem_euclid(q as i64) as u32).collect();
        Ok(Matrix { q, dim, entries })
    }

    pub fn mul(&self, o: &Matrix) -> Matrix {
        let n = self.dim;
        let mut e = vec![0u32; n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.entries[i * n + k];
                if a == 0 {
                    continue;
                }
                for j in 0..n {
                    e[i * n + j] = ((e[i * n + j] as u64 + a as u64 * o.entries[k * n + j] as u64) % self.q as u64) as u32;
                }
            }
        }
        Matrix { q: self.q, dim: n, entries: e }
    }

    pub fn det(&self) -> u32 {
        let n = self.dim;
        let q = self.q as i64;
        let mut a: Vec<i64> = self.entries.iter().map(|&v| v as i64).collect();
        let mut det = 1i64;
        for c in 0..n {
            let Some(p) = (c..n).find(|&r| a[r * n + c] != 0) else { return 0 };
            if p != c {
                for j in 0..n {
                    a.swap(p * n + j, c * n + j);
                }
                det = (q - det) % q;
            }
            let pv = a[c * n + c];
            det = det * pv % q;
            let inv = mod_inv(pv, q);
            for r in c + 1..n {
                let f = a[r * n + c] * inv % q;
                for j in c..n {
                    a[r * n + j] = (a[r * n + j] - f * a[c * n + j]).rem_euclid(q);
                }
            }
        }
        det as u32
    }
}

fn mod_inv(a: i64, q: i64) -> i64 {
    let (mut r0, mut r1, mut s0, mut s1) = (q, a.rem_euclid(q), 0i64, 1i64);
    while r1 != 0 {
        let t = r0 / r1;
        (r0, r1) = (r1, r0 - t * r1);
        (s0, s1) = (s1, s0 - t * s1);
    }
    s0.rem_euclid(q)
}

/// Generators for [`closure_from_generators`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GeneratorSet {
    Perms(Vec<Perm>),
    Matrices { q: u32, gens: Vec<Matrix> },
}

/// Breadth-first closure of a generating set; element `0` is the
/// identity and `generators()` are the given generators (identity dropped).
pub fn closure_from_generators(gens: &GeneratorSet) -> Result<FiniteGroup, GroupError> {
    match gens {
        GeneratorSet::Perms(p) => perm_closure(p).map(|(g, _)| g),
        GeneratorSet::Matrices { q, gens } => matrices_closure(*q, gens).map(|(g, _)| g),
    }
}

pub fn perm_closure(gens: &[Perm]) -> Result<(FiniteGroup, Vec<Perm>), GroupError> {
    let n = gens.iter().map(|p| p.degree()).max().unwrap_or(0);
    let pad = |p: &Perm| {
        let mut v = p.0.clone();
        v.extend(v.len() as u16..n as u16);
        Perm(v)
    };
    let gens: Vec<Perm> = gens.iter().map(pad).collect();
    let prov = format!("perm: {}", gens.iter().map(|g| g.to_cycles()).collect::<Vec<_>>().join(";"));
    generic_closure(&gens, Perm::identity(n), |a, b| a.then(b), prov)
}

pub fn matrices_closure(q: u32, gens: &[Matrix]) -> Result<(FiniteGroup, Vec<Matrix>), GroupError> {
    if !(2..=16).contains(&q) || !super::super::poly::modp::is_prime(q as u64) {
        return Err(GroupError::BadGenerators(format!("field size {q} must be a prime <= 16")));
    }
    let dim = gens.first().map_or(1, |m| m.dim);
    if gens.iter().any(|m| m.dim != dim || m.q != q) || dim > 4 {
        return Err(GroupError::BadGenerators("matrices must share dimension <= 4 and field".into()));
    }
    if gens.iter().any(|m| m.det() == 0) {
        return Err(GroupError::BadGenerators("singular matrix".into()));
    }
    let prov = format!("matf q={q}: {} generators", gens.len());
    generic_closure(gens, Matrix::identity(q, dim), |a, b| a.mul(b), prov)
}

/// Closure for any concrete group law. The table is filled from the
/// right Cayley graph: writing `b = parent(b) * s`, `a*b = (a*parent(b))*s`.
fn generic_closure<E: Clone + Eq + Hash>(
    gens: &[E],
    one: E,
    mul: impl Fn(&E, &E) -> E,
    provenance: String,
) -> Result<(FiniteGroup, Vec<E>), GroupError> {
    let gens: Vec<E> = gens.iter().filter(|g| **g != one).cloned().collect();
    let mut index: HashMap<E, usize> = HashMap::new();
    let mut elems = vec![one.clone()];
    index.insert(one, 0);
    let mut parent: Vec<(usize, usize)> = vec![(0, usize::MAX)];
    let mut right: Vec<Vec<usize>> = Vec::new();
    let mut i = 0;
    while i < elems.len() {
        let mut row = Vec::with_capacity(gens.len());
        for (s, g) in gens.iter().enumerate() {
            let y = mul(&elems[i], g);
            let j = match index.get(&y) {
                Some(&j) => j,
                None => {
                    if elems.len() >= ORDER_CAP {
                        return Err(GroupError::CapExceeded(ORDER_CAP));
                    }
                    let j = elems.len();
                    index.insert(y.clone(), j);
                    elems.push(y);
                    parent.push((i, s));
                    j
                }
            };
            row.push(j);
        }
        right.push(row);
        i += 1;
    }
    let n = elems.len();
    let mut mult = vec![0u16; n * n];
    for a in 0..n {
        mult[a * n] = a as u16;
        for b in 1..n {
            let (pb, s) = parent[b];
            mult[a * n + b] = right[mult[a * n + pb] as usize][s] as u16;
        }
    }
    let gen_idx: Vec<usize> = gens.iter().map(|g| index[g]).collect();
    let mut g = FiniteGroup::from_table(n, mult, provenance)?;
    if !gen_idx.is_empty() {
        let mut dedup = gen_idx.clone();
        dedup.dedup();
        g = g.with_generators(dedup)?;
    }
    Ok((g, elems))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symmetric_four_from_two_cycles() {
        let a = Perm::parse_cycles("(1 2 3 4)", 4).unwrap();
        let b = Perm::parse_cycles("(1 2)", 4).unwrap();
        let g = closure_from_generators(&GeneratorSet::Perms(vec![a, b])).unwrap();
        assert_eq!(g.order(), 24);
        assert_eq!(g.generators().len(), 2);
    }

    #[test]
    fn empty_generators_give_trivial_group() {
        assert_eq!(closure_from_generators(&GeneratorSet::Perms(vec![])).unwrap().order(), 1);
    }

    #[test]
    fn sl2_f3() {
        let a = Matrix::from_rows(3, &[vec![1, 1], vec![0, 1]]).unwrap();
        let b = Matrix::from_rows(3, &[vec![0, -1], vec![1, 0]]).unwrap();
        let g = closure_from_generators(&GeneratorSet::Matrices { q: 3, gens: vec![a, b] }).unwrap();
        assert_eq!(g.order(), 24);
    }

    #[test]
    fn cycle_notation_round_trip() {
        let p = Perm::parse_cycles("(1 3 5)(2 4)", 6).unwrap();
        assert_eq!(p.to_cycles(), "(1 3 5)(2 4)");
        assert_eq!(p.then(&p.inverse()), Perm::identity(6));
        assert!(Perm::parse_cycles("(1 2)(2 3)", 3).is_err());
        assert_eq!(Perm::parse_cycles("()", 0).unwrap().to_cycles(), "()");
    }

    #[test]
    fn cap_is_enforced() {
        // S8 has 40320 elements
        let a = Perm::parse_cycles("(1 2 3 4 5 6 7 8)", 8).unwrap();
        let b = Perm::parse_cycles("(1 2)", 8).unwrap();
        assert_eq!(perm_closure(&[a, b]).unwrap_err(), GroupError::CapExceeded(ORDER_CAP));
    }
}
