use std::collections::{BTreeSet, VecDeque};

use num_integer::Integer;
use rayon::prelude::*;
use serde::Serialize;

use super::fox::fox_terms;
use super::wada::twisted_vanishing;
use super::{Representation, TwistedError, TwistedSetup};
use crate::groups::{perm_closure, FiniteGroup, Perm};
use crate::homsearch::{enumerate_homs, EpiSearchConfig, GroupHom};
use crate::knots::{two_bridge_presentation, GroupPresentation, TwoBridgeSpec};
use crate::poly::{Verdict, VerdictPolicy};

/// A 2×2 matrix over `F_2`, rows as bit pairs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct F2Matrix(pub [[u8; 2]; 2]);

impl F2Matrix {
    pub const IDENTITY: F2Matrix = F2Matrix([[1, 0], [0, 1]]);

    pub fn mul(&self, o: &F2Matrix) -> F2Matrix {
        let a = &self.0;
        let b = &o.0;
        let e = |i: usize, j: usize| (a[i][0] & b[0][j]) ^ (a[i][1] & b[1][j]);
        F2Matrix([[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]])
    }

    pub fn add(&self, o: &F2Matrix) -> F2Matrix {
        let e = |i: usize, j: usize| self.0[i][j] ^ o.0[i][j];
        F2Matrix([[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]])
    }

    pub fn transpose(&self) -> F2Matrix {
        let a = &self.0;
        F2Matrix([[a[0][0], a[1][0]], [a[0][1], a[1][1]]])
    }

    pub fn det(&self) -> u8 {
        let a = &self.0;
        (a[0][0] & a[1][1]) ^ (a[0][1] & a[1][0])
    }
}

/// `S_4` generated by `(1 2 3 4)` and `(1 2 4 3)`, with the mod-2
/// representation `τ'` sending them to `[[0,1],[1,0]]` and `[[1,1],[0,1]]`
/// (transposed if the multiplication order of the table requires it).
pub fn tau_prime() -> Result<(FiniteGroup, Vec<F2Matrix>), TwistedError> {
    let a = Perm::parse_cycles("(1 2 3 4)", 4)?;
    let b = Perm::parse_cycles("(1 2 4 3)", 4)?;
    let (g, perms) = perm_closure(&[a.clone(), b.clone()])?;
    let ia = perms.iter().position(|p| *p == a).expect("generator is an element");
    let ib = perms.iter().position(|p| *p == b).expect("generator is an element");
    let gens = [(ia, F2Matrix([[0, 1], [1, 0]])), (ib, F2Matrix([[1, 1], [0, 1]]))];
    for transpose in [false, true] {
        let mut m: Vec<Option<F2Matrix>> = vec![None; g.order()];
        m[g.identity()] = Some(F2Matrix::IDENTITY);
        let mut queue = VecDeque::from([g.identity()]);
        while let Some(x) = queue.pop_front() {
            for &(s, ms) in &gens {
                let ms = if transpose { ms.transpose() } else { ms };
                let y = g.mul(x, s);
                if m[y].is_none() {
                    m[y] = Some(m[x].unwrap().mul(&ms));
                    queue.push_back(y);
                }
            }
        }
        let m: Vec<F2Matrix> = m.into_iter().map(|x| x.expect("generators generate")).collect();
        if g.elements().all(|x| g.elements().all(|y| m[g.mul(x, y)] == m[x].mul(&m[y]))) {
            return Ok((g, m));
        }
    }
    unreachable!("τ' defines a representation in one of the two orders")
}

type F2Poly = BTreeSet<i64>;

fn f2_add(a: &mut F2Poly, e: i64) {
    if !a.remove(&e) {
        a.insert(e);
    }
}

fn f2_mul(a: &F2Poly, b: &F2Poly) -> F2Poly {
    let mut out = F2Poly::new();
    for &x in a {
        for &y in b {
            f2_add(&mut out, x + y);
        }
    }
    out
}

/// `det Ψ'(∂r/∂v)` over `F_2[t^{±1}]` for the two-bridge relator
/// `r = w u w⁻¹ v⁻¹`; returned as the set of exponents with coefficient 1.
pub fn mod2_determinant(p: &GroupPresentation, f: &GroupHom, tau: &[F2Matrix]) -> Vec<i64> {
    let r = &p.relators[0];
    let mut m: [[F2Poly; 2]; 2] = Default::default();
    for (coef, prefix) in fox_terms(r, 1) {
        if coef % 2 == 0 {
            continue;
        }
        let e = p.weight(prefix);
        let x = tau[f.eval(prefix)];
        for i in 0..2 {
            for j in 0..2 {
                if x.0[i][j] == 1 {
                    f2_add(&mut m[i][j], e);
                }
            }
        }
    }
    let mut det = f2_mul(&m[0][0], &m[1][1]);
    for e in f2_mul(&m[0][1], &m[1][0]) {
        f2_add(&mut det, e);
    }
    det.into_iter().collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct TwoBridgeRow {
    pub b: i64,
    pub a: i64,
    /// Surjections onto `S_4`, up to conjugacy.
    pub epimorphisms: usize,
    pub verdicts: Vec<Verdict>,
    pub mod2_nonzero: Vec<bool>,
}

#[derive(Clone, Debug, Serialize)]
pub struct TwoBridgeReport {
    pub b_max: i64,
    pub knots_scanned: usize,
    pub rows: Vec<TwoBridgeRow>,
    pub vanishing: usize,
    pub undecided: usize,
    pub mod2_zero: usize,
}

/// Every `S(b, a)` with `b ≤ b_max` odd and `a` odd, `0 < |a| < b`,
/// coprime to `b`; every surjection onto `S_4` up to conjugacy gets a
/// regular-representation verdict and the mod-2 determinant.
pub fn two_bridge_s4_scan(b_max: i64, policy: &VerdictPolicy) -> Result<TwoBridgeReport, TwistedError> {
    let (s4, tau) = tau_prime()?;
    let specs: Vec<TwoBridgeSpec> = (3..=b_max)
        .step_by(2)
        .flat_map(|b| (-b + 1..b).filter(move |&a| a % 2 != 0 && a.gcd(&b) == 1).map(move |a| (b, a)))
        .filter_map(|(b, a)| TwoBridgeSpec::new(b, a).ok())
        .collect();
    let rows: Vec<TwoBridgeRow> = specs
        .par_iter()
        .map(|s| -> Result<TwoBridgeRow, TwistedError> {
            let p = two_bridge_presentation(s)?;
            let homs = enumerate_homs(&p, &s4, &EpiSearchConfig::default())?.require_complete()?.homs;
            let mut verdicts = Vec::new();
            let mut mod2 = Vec::new();
            for f in &homs {
                let setup = TwistedSetup::new(p.clone(), f.clone(), Representation::Regular, 0)?;
                verdicts.push(twisted_vanishing(&setup, policy)?);
                mod2.push(!mod2_determinant(&p, f, &tau).is_empty());
            }
            Ok(TwoBridgeRow { b: s.b, a: s.a, epimorphisms: homs.len(), verdicts, mod2_nonzero: mod2 })
        })
        .collect::<Result<_, _>>()?;
    let knots_scanned = rows.len();
    let rows: Vec<TwoBridgeRow> = rows.into_iter().filter(|r| r.epimorphisms > 0).collect();
    let all = || rows.iter().flat_map(|r| r.verdicts.iter());
    Ok(TwoBridgeReport {
        b_max,
        knots_scanned,
        vanishing: all().filter(|v| v.is_vanishing() == Some(true)).count(),
        undecided: all().filter(|v| v.is_vanishing().is_none()).count(),
        mod2_zero: rows.iter().flat_map(|r| &r.mod2_nonzero).filter(|&&x| !x).count(),
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tau_prime_on_a4() {
        let (g, tau) = tau_prime().unwrap();
        assert_eq!(g.order(), 24);
        let a4: Vec<usize> = {
            let sq: Vec<usize> = g.elements().map(|x| g.mul(x, x)).collect();
            g.subgroup(&sq)
        };
        assert_eq!(a4.len(), 12);
        let image: BTreeSet<F2Matrix> = a4.iter().map(|&x| tau[x]).collect();
        let expect: BTreeSet<F2Matrix> =
            [F2Matrix::IDENTITY, F2Matrix([[1, 1], [1, 0]]), F2Matrix([[0, 1], [1, 1]])].into_iter().collect();
        assert_eq!(image, expect);
        // nonzero sums of the image stay in the image
        for x in &image {
            for y in &image {
                let s = x.add(y);
                assert!(s == F2Matrix([[0, 0], [0, 0]]) || image.contains(&s));
            }
        }
    }

    #[test]
    fn trefoil_onto_s4() {
        // meridians to 4-cycles: one surjection up to conjugacy, 24 in all
        let r = two_bridge_s4_scan(3, &VerdictPolicy::default()).unwrap();
        assert_eq!(r.knots_scanned, 2);
        assert!(r.rows.iter().all(|row| row.epimorphisms == 1));
        let (s4, _) = tau_prime().unwrap();
        let p = two_bridge_presentation(&TwoBridgeSpec::new(3, 1).unwrap()).unwrap();
        let cfg = EpiSearchConfig { up_to_conjugacy: false, ..EpiSearchConfig::default() };
        let homs = enumerate_homs(&p, &s4, &cfg).unwrap().homs;
        assert_eq!(homs.len(), 24);
        assert!(homs.iter().all(|h| s4.element_order(h.images[0]) == 4));
        assert_eq!(r.vanishing + r.mod2_zero, 0);
    }

    #[test]
    fn small_scan() {
        let r = two_bridge_s4_scan(9, &VerdictPolicy::default()).unwrap();
        assert!(!r.rows.is_empty());
        assert_eq!(r.vanishing, 0);
        assert_eq!(r.undecided, 0);
        assert_eq!(r.mod2_zero, 0);
    }
}
