use serde::Serialize;

use super::analysis::analyze;
use super::{FiniteGroup, GroupError};
use crate::poly::{cyclotomic, divides, ZPoly};

/// A permutation representation: `images[g][i]` is the image of basis
/// vector `i` under `g`. As a matrix, `ρ(g)[i][images[g][i]] = 1`, so
/// `ρ(gh) = ρ(g) ρ(h)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PermRep {
    pub degree: usize,
    pub images: Vec<Vec<u32>>,
}

impl PermRep {
    /// Right action on the right cosets `H x` of a subgroup.
    pub fn on_cosets(g: &FiniteGroup, subgroup: &[usize]) -> Result<Self, GroupError> {
        if !g.is_subgroup(subgroup) {
            return Err(GroupError::BadGenerators("not a subgroup".into()));
        }
        let mut coset = vec![usize::MAX; g.order()];
        let mut reps = Vec::new();
        for x in std::iter::once(g.identity()).chain(g.elements()) {
            if coset[x] != usize::MAX {
                continue;
            }
            for &h in subgroup {
                coset[g.mul(h, x)] = reps.len();
            }
            reps.push(x);
        }
        let images = g
            .elements()
            .map(|a| reps.iter().map(|&x| coset[g.mul(x, a)] as u32).collect())
            .collect();
        Ok(PermRep { degree: reps.len(), images })
    }

    pub fn matrix(&self, g: usize) -> Vec<Vec<i64>> {
        let mut m = vec![vec![0; self.degree]; self.degree];
        for (i, &j) in self.images[g].iter().enumerate() {
            m[i][j as usize] = 1;
        }
        m
    }

    /// Number of fixed points, the character value.
    pub fn character(&self, g: usize) -> usize {
        self.images[g].iter().enumerate().filter(|&(i, &j)| i == j as usize).count()
    }

    /// Exhaustive homomorphism check.
    pub fn is_homomorphism(&self, g: &FiniteGroup) -> bool {
        g.elements().all(|a| {
            g.elements().all(|b| {
                let ab = &self.images[g.mul(a, b)];
                (0..self.degree).all(|i| ab[i] == self.images[b][self.images[a][i] as usize])
            })
        })
    }

    pub fn is_transitive(&self) -> bool {
        let mut seen = vec![false; self.degree];
        seen[0] = true;
        let mut stack = vec![0usize];
        while let Some(i) = stack.pop() {
            for img in &self.images {
                let j = img[i] as usize;
                if !seen[j] {
                    seen[j] = true;
                    stack.push(j);
                }
            }
        }
        seen.iter().all(|&s| s)
    }
}

/// Right regular representation: basis indexed by elements, `r ↦ r g`.
pub fn regular_representation(g: &FiniteGroup) -> PermRep {
    let images = g.elements().map(|a| g.elements().map(|r| g.mul(r, a) as u32).collect()).collect();
    PermRep { degree: g.order(), images }
}

/// The pull-back `G_{k,n} = {(z, x^j) : π(z) = j mod k} ⊂ G × C_{kn}`.
#[derive(Clone, Debug)]
pub struct CentralExtension {
    pub base: FiniteGroup,
    pub k: u64,
    pub n: u64,
    pub total: FiniteGroup,
    /// total index -> base index
    pub pr: Vec<usize>,
    /// total index -> exponent `j` in `C_{kn}`
    pub abelianization_map: Vec<u64>,
    /// base index -> `π(z)` in `C_k`
    pub base_pi: Vec<u64>,
}

/// An explicit isomorphism `G/G' → Z/k` for a weight-one group, as a
/// table on elements.
pub fn cyclic_abelianization(g: &FiniteGroup) -> Result<(u64, Vec<u64>), GroupError> {
    let a = analyze(g);
    if !a.weight_one {
        return Err(GroupError::NotWeightOne);
    }
    let (q, proj) = g.quotient(&a.derived)?;
    let k = q.order() as u64;
    let gen = q.elements().find(|&x| q.element_order(x) as u64 == k).expect("cyclic quotient");
    let mut dlog = vec![0u64; q.order()];
    let mut x = q.identity();
    for i in 0..k {
        dlog[x] = i;
        x = q.mul(x, gen);
    }
    Ok((k, g.elements().map(|z| dlog[proj[z]]).collect()))
}

pub fn central_extension(base: &FiniteGroup, n: u64) -> Result<CentralExtension, GroupError> {
    if n == 0 {
        return Err(GroupError::BadGenerators("degree must be positive".into()));
    }
    let (k, pi) = cyclic_abelianization(base)?;
    let kn = k * n;
    let nn = n as usize;
    let order = base.order() * nn;
    if order > super::ORDER_CAP {
        return Err(GroupError::CapExceeded(super::ORDER_CAP));
    }
    let e = base.identity();
    // (z, π(z) + k t) <-> slot(z) * n + t, with the base identity in slot 0
    let slot = |z: usize| if z == e { 0 } else if z == 0 { e } else { z };
    let j_of = |idx: usize| -> (usize, u64) {
        let z = slot(idx / nn);
        (z, (pi[z] + k * (idx % nn) as u64) % kn)
    };
    let enc = |z: usize, j: u64| -> usize {
        let t = ((j + kn - pi[z]) % kn) / k;
        slot(z) * nn + t as usize
    };
    let total = FiniteGroup::from_fn(order, format!("cext n={n} of ({})", base.provenance()), |a, b| {
        let (z1, j1) = j_of(a);
        let (z2, j2) = j_of(b);
        enc(base.mul(z1, z2), (j1 + j2) % kn)
    })?;
    let mut gens: Vec<usize> = base.generators().iter().map(|&z| enc(z, pi[z])).collect();
    if n > 1 {
        gens.push(enc(e, k));
    }
    let total = if gens.is_empty() { total } else { total.with_generators(gens)? };
    let (pr, ab): (Vec<usize>, Vec<u64>) = (0..order).map(j_of).unzip();
    Ok(CentralExtension { base: base.clone(), k, n, total, pr, abelianization_map: ab, base_pi: pi })
}

/// Checks that `⊕_{l<n} τ_l ⊗ ρ̃_1` has the regular character of the
/// total group. Character values are kept as integer combinations of
/// powers of a primitive `kn`-th root `ω`, i.e. polynomials mod `Φ_{kn}`.
pub fn decomposition_check(ext: &CentralExtension) -> bool {
    let kn = ext.k * ext.n;
    let phi = cyclotomic(kn);
    let total = &ext.total;
    let base_order = ext.base.order() as i64;
    total.elements().all(|x| {
        let z = ext.pr[x];
        let j = ext.abelianization_map[x];
        let reg_base = if z == ext.base.identity() { base_order } else { 0 };
        let mut coeffs = vec![0i64; kn as usize];
        for l in 0..ext.n {
            coeffs[((l * j) % kn) as usize] += reg_base;
        }
        if x == total.identity() {
            coeffs[0] -= total.order() as i64;
        }
        let value = ZPoly::from_i64(0, &coeffs);
        value.is_zero() || divides(&phi, &value).expect("Φ is nonzero")
    })
}
