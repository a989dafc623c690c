use num_integer::Integer;

use super::closure::{perm_closure, Perm};
use super::{FiniteGroup, GroupError};
use crate::poly::modp::is_prime;

/// Named constructions.
#[derive(Clone, Debug)]
pub enum GroupSpec {
    Cyclic(usize),
    /// Order `2n`.
    Dihedral(usize),
    /// `⟨x, y | x^{2n}, y^2 x^{-n}, y x y^{-1} x⟩`, order `4n`.
    Dicyclic(usize),
    Symmetric(usize),
    Alternating(usize),
    DirectProduct(Box<FiniteGroup>, Box<FiniteGroup>),
    /// `C_m ⋊ C_n` with `y x y^{-1} = x^a`.
    SemidirectCyclic { m: usize, n: usize, a: usize },
    /// `(C_q × C_r) ⋊ C_p` with `z x z^{-1} = x^a`, `z y z^{-1} = y^b`.
    Pqr { p: usize, q: usize, r: usize, a: usize, b: usize },
    Quotient(Box<FiniteGroup>, Vec<usize>),
}

fn pow_mod(a: usize, e: usize, m: usize) -> usize {
    let mut acc = 1 % m;
    for _ in 0..e {
        acc = acc * a % m;
    }
    acc
}

fn mult_order(a: usize, m: usize) -> Option<usize> {
    if m <= 1 || a.gcd(&m) != 1 {
        return None;
    }
    (1..=m).find(|&k| pow_mod(a, k, m) == 1)
}

pub fn construct_group(spec: &GroupSpec) -> Result<FiniteGroup, GroupError> {
    match spec {
        GroupSpec::Cyclic(n) => {
            let n = *n;
            if n == 0 {
                return Err(GroupError::BadGenerators("order must be positive".into()));
            }
            let g = FiniteGroup::from_fn(n, format!("cyclic n={n}"), |a, b| (a + b) % n)?;
            let labels = (0..n).map(|i| format!("x^{i}")).collect();
            Ok(if n > 1 { g.with_generators(vec![1])? } else { g }.with_labels(labels))
        }
        GroupSpec::Dihedral(n) => {
            let n = *n;
            if n == 0 {
                return Err(GroupError::BadGenerators("n must be positive".into()));
            }
            semidirect(n, 2, (n - 1) % n, format!("dihedral n={n}"))
        }
        GroupSpec::Dicyclic(n) => {
            let n = *n;
            if n == 0 {
                return Err(GroupError::BadGenerators("n must be positive".into()));
            }
            let m = 2 * n;
            // element x^i y^j  <->  index i + m j
            let g = FiniteGroup::from_fn(2 * m, format!("dicyclic n={n}"), |a, b| {
                let (i, j) = (a % m, a / m);
                let (k, l) = (b % m, b / m);
                match (j, l) {
                    (0, _) => (i + k) % m + m * l,
                    (1, 0) => (i + m - k) % m + m,
                    _ => (i + m - k + n) % m,
                }
            })?;
            let labels = (0..2 * m).map(|e| format!("x^{}y^{}", e % m, e / m)).collect();
            Ok(g.with_generators(vec![1, m])?.with_labels(labels))
        }
        GroupSpec::Symmetric(n) => {
            let n = *n;
            let gens = if n <= 1 {
                vec![]
            } else if n == 2 {
                vec![Perm::parse_cycles("(1 2)", 2)?]
            } else {
                let cyc: Vec<String> = (1..=n).map(|i| i.to_string()).collect();
                vec![Perm::parse_cycles(&format!("({})", cyc.join(" ")), n)?, Perm::parse_cycles("(1 2)", n)?]
            };
            Ok(perm_closure(&gens)?.0.with_provenance(format!("sym n={n}")))
        }
        GroupSpec::Alternating(n) => {
            let n = *n;
            let gens: Vec<Perm> =
                (3..=n).map(|k| Perm::parse_cycles(&format!("(1 2 {k})"), n)).collect::<Result<_, _>>()?;
            Ok(perm_closure(&gens)?.0.with_provenance(format!("alt n={n}")))
        }
        GroupSpec::DirectProduct(a, b) => {
            let (na, nb) = (a.order(), b.order());
            if na * nb > super::ORDER_CAP {
                return Err(GroupError::CapExceeded(super::ORDER_CAP));
            }
            // (x, y) <-> x * nb + y; identities are at index 0 for our constructors
            let ia = a.identity();
            let ib = b.identity();
            let enc = |x: usize, y: usize| {
                let x = if x == ia { 0 } else if x == 0 { ia } else { x };
                let y = if y == ib { 0 } else if y == 0 { ib } else { y };
                x * nb + y
            };
            let dec = |e: usize| {
                let (x, y) = (e / nb, e % nb);
                let x = if x == 0 { ia } else if x == ia { 0 } else { x };
                let y = if y == 0 { ib } else if y == ib { 0 } else { y };
                (x, y)
            };
            let g = FiniteGroup::from_fn(na * nb, format!("dprod ({}) x ({})", a.provenance(), b.provenance()), |s, t| {
                let (x1, y1) = dec(s);
                let (x2, y2) = dec(t);
                enc(a.mul(x1, x2), b.mul(y1, y2))
            })?;
            let mut gens: Vec<usize> = a.generators().iter().map(|&x| enc(x, ib)).collect();
            gens.extend(b.generators().iter().map(|&y| enc(ia, y)));
            if gens.is_empty() {
                Ok(g)
            } else {
                g.with_generators(gens)
            }
        }
        GroupSpec::SemidirectCyclic { m, n, a } => {
            let (m, n, a) = (*m, *n, *a);
            if m == 0 || n == 0 {
                return Err(GroupError::BadGenerators("orders must be positive".into()));
            }
            if m > 1 && (a.gcd(&m) != 1 || pow_mod(a, n, m) != 1) {
                return Err(GroupError::BadAction(format!("{a}^{n} is not 1 mod {m}")));
            }
            semidirect(m, n, a % m, format!("sdp m={m}, n={n}, a={a}"))
        }
        GroupSpec::Pqr { p, q, r, a, b } => {
            let (p, q, r, a, b) = (*p, *q, *r, *a, *b);
            if !(p < q && q < r && [p, q, r].iter().all(|&x| is_prime(x as u64))) {
                return Err(GroupError::BadAction(format!("need primes p < q < r, got {p},{q},{r}")));
            }
            if mult_order(a % q, q) != Some(p) {
                return Err(GroupError::BadAction(format!("{a} does not have order {p} mod {q}")));
            }
            if mult_order(b % r, r) != Some(p) {
                return Err(GroupError::BadAction(format!("{b} does not have order {p} mod {r}")));
            }
            let (a, b) = (a % q, b % r);
            // x^i y^j z^k  <->  i + q (j + r k)
            let dec = |e: usize| (e % q, (e / q) % r, e / (q * r));
            let g = FiniteGroup::from_fn(p * q * r, format!("pqr p={p}, q={q}, r={r}, a={a}, b={b}"), |s, t| {
                let (i1, j1, k1) = dec(s);
                let (i2, j2, k2) = dec(t);
                let i = (i1 + pow_mod(a, k1, q) * i2) % q;
                let j = (j1 + pow_mod(b, k1, r) * j2) % r;
                let k = (k1 + k2) % p;
                i + q * (j + r * k)
            })?;
            let labels = (0..p * q * r)
                .map(|e| {
                    let (i, j, k) = dec(e);
                    format!("x^{i}y^{j}z^{k}")
                })
                .collect();
            Ok(g.with_generators(vec![1, q, q * r])?.with_labels(labels))
        }
        GroupSpec::Quotient(g, subset) => {
            let mut s = subset.clone();
            s.sort_unstable();
            s.dedup();
            if s.iter().any(|&x| x >= g.order()) {
                return Err(GroupError::NotNormal);
            }
            let (q, proj) = g.quotient(&s)?;
            let mut gens: Vec<usize> = g.generators().iter().map(|&x| proj[x]).filter(|&x| x != q.identity()).collect();
            gens.dedup();
            let q = if gens.is_empty() { q } else { q.with_generators(gens)? };
            Ok(q.with_provenance(format!("quot of ({}) by {} elements", g.provenance(), s.len())))
        }
    }
}

/// `C_m ⋊ C_n`, element `x^i y^j <-> i + m j`, with `y x y^{-1} = x^a`.
fn semidirect(m: usize, n: usize, a: usize, provenance: String) -> Result<FiniteGroup, GroupError> {
    let g = FiniteGroup::from_fn(m * n, provenance, |s, t| {
        let (i1, j1) = (s % m, s / m);
        let (i2, j2) = (t % m, t / m);
        (i1 + pow_mod(a, j1, m) * i2) % m + m * ((j1 + j2) % n)
    })?;
    let labels = (0..m * n).map(|e| format!("x^{}y^{}", e % m, e / m)).collect();
    let mut gens: Vec<usize> = [1 % (m * n), if n > 1 { m } else { 0 }].into_iter().filter(|&x| x != 0).collect();
    gens.dedup();
    let g = if gens.is_empty() { g } else { g.with_generators(gens)? };
    Ok(g.with_labels(labels))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orders() {
        assert_eq!(construct_group(&GroupSpec::Dicyclic(3)).unwrap().order(), 12);
        assert_eq!(construct_group(&GroupSpec::Dihedral(15)).unwrap().order(), 30);
        assert_eq!(construct_group(&GroupSpec::Symmetric(5)).unwrap().order(), 120);
        assert_eq!(construct_group(&GroupSpec::Alternating(5)).unwrap().order(), 60);
        assert_eq!(construct_group(&GroupSpec::Alternating(2)).unwrap().order(), 1);
        let p = GroupSpec::Pqr { p: 2, q: 3, r: 5, a: 2, b: 4 };
        assert_eq!(construct_group(&p).unwrap().order(), 30);
    }

    #[test]
    fn dicyclic_relations() {
        let g = construct_group(&GroupSpec::Dicyclic(3)).unwrap();
        let (x, y) = (1, 6);
        assert_eq!(g.pow(x, 6), 0);
        assert_eq!(g.mul(g.pow(y, 2), g.pow(x, -3)), 0);
        assert_eq!(g.mul(g.conj(x, y), x), 0);
    }

    #[test]
    fn bad_actions() {
        assert!(matches!(
            construct_group(&GroupSpec::SemidirectCyclic { m: 7, n: 3, a: 3 }),
            Err(GroupError::BadAction(_))
        ));
        assert!(construct_group(&GroupSpec::SemidirectCyclic { m: 7, n: 3, a: 2 }).is_ok());
        assert!(matches!(
            construct_group(&GroupSpec::Pqr { p: 2, q: 3, r: 5, a: 2, b: 2 }),
            Err(GroupError::BadAction(_))
        ));
    }

    #[test]
    fn quotient_requires_normality() {
        let s3 = construct_group(&GroupSpec::Dihedral(3)).unwrap();
        // {1, y} is not normal in D3
        assert_eq!(construct_group(&GroupSpec::Quotient(Box::new(s3.clone()), vec![0, 3])).unwrap_err(), GroupError::NotNormal);
        let q = construct_group(&GroupSpec::Quotient(Box::new(s3), vec![0, 1, 2])).unwrap();
        assert_eq!(q.order(), 2);
    }
}
