use std::collections::HashMap;
use std::sync::Arc;

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::fox::fox_terms;
use super::{TwistedError, TwistedSetup};
use crate::groups::PermRep;
use crate::poly::modp::prime_sequence;
use crate::poly::{vanishing_verdict, Fp, ImplicitPolyMatrix, Verdict, VerdictPolicy, ZPoly};

/// `coef * t^phi * ρ(g)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct Term {
    pub coef: i64,
    pub phi: i64,
    pub g: usize,
}

/// Sparse Fox blocks `Ψ(∂r_i/∂x_k)` for every active relator and every
/// generator (including the deleted one).
pub(crate) struct FoxBlocks {
    pub blocks: Vec<Vec<Vec<Term>>>,
    pub rep: Arc<PermRep>,
    pub gen_images: Vec<usize>,
    pub phi: Vec<i64>,
}

pub(crate) fn fox_blocks(setup: &TwistedSetup) -> Result<FoxBlocks, TwistedError> {
    let p = setup.presentation();
    let h = setup.hom();
    let g = &h.target;
    let rep = setup.rep().images(g)?;
    let blocks = p
        .active_relators()
        .into_iter()
        .map(|r| {
            (0..p.generator_count)
                .map(|k| {
                    let mut acc: HashMap<(i64, usize), i64> = HashMap::new();
                    for (coef, prefix) in fox_terms(r, k) {
                        *acc.entry((p.weight(prefix), h.eval(prefix))).or_insert(0) += coef;
                    }
                    let mut terms: Vec<Term> =
                        acc.into_iter().filter(|&(_, c)| c != 0).map(|((phi, g), coef)| Term { coef, phi, g }).collect();
                    terms.sort_by_key(|t| (t.phi, t.g));
                    terms
                })
                .collect()
        })
        .collect();
    Ok(FoxBlocks { blocks, rep, gen_images: h.images.clone(), phi: p.phi.clone() })
}

impl FoxBlocks {
    /// Checks `Σ_k Ψ(∂r/∂x_k) (Ψ(x_k) - I) = 0` on a random vector at a
    /// random point; returns the first failing relator.
    pub fn fox_identity(&self, seed: u64) -> Result<Option<usize>, TwistedError> {
        let prime = prime_sequence(seed, 1, 1)?[0];
        let fp = Fp::new(prime)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let t = fp.to_mont(rng.gen_range(2..prime));
        let d = self.rep.degree;
        let u: Vec<u64> = (0..d).map(|_| fp.to_mont(rng.gen_range(0..prime))).collect();
        let w: Vec<Vec<u64>> = (0..self.phi.len())
            .map(|k| {
                let img = &self.rep.images[self.gen_images[k]];
                let tk = fp.pow_signed(t, self.phi[k]);
                (0..d).map(|r| fp.sub(fp.mul(tk, u[img[r] as usize]), u[r])).collect()
            })
            .collect();
        for (i, row) in self.blocks.iter().enumerate() {
            let mut s = vec![0u64; d];
            for (k, terms) in row.iter().enumerate() {
                for term in terms {
                    let c = fp.mul(fp.from_i64(term.coef), fp.pow_signed(t, term.phi));
                    let img = &self.rep.images[term.g];
                    for r in 0..d {
                        s[r] = fp.add(s[r], fp.mul(c, w[k][img[r] as usize]));
                    }
                }
            }
            if s.iter().any(|&x| x != 0) {
                return Ok(Some(i));
            }
        }
        Ok(None)
    }

    /// The matrix with the column block of `deleted` removed.
    pub fn matrix(&self, deleted: usize) -> Result<ImplicitPolyMatrix, TwistedError> {
        let d = self.rep.degree;
        let gens = self.phi.len();
        let rows = self.blocks.len() * d;
        let cols = gens.saturating_sub(1) * d;
        if rows != cols {
            return Err(TwistedError::DeficiencyMismatch { rows, cols });
        }
        // per matrix row: (column, phi, coef)
        let mut entries: Vec<Vec<(usize, i64, i64)>> = Vec::with_capacity(rows);
        for row in &self.blocks {
            for r in 0..d {
                let mut e: Vec<(usize, i64, i64)> = Vec::new();
                for (k, terms) in row.iter().enumerate() {
                    if k == deleted {
                        continue;
                    }
                    let kk = if k > deleted { k - 1 } else { k };
                    for term in terms {
                        e.push((kk * d + self.rep.images[term.g][r] as usize, term.phi, term.coef));
                    }
                }
                e.sort_unstable();
                let mut merged: Vec<(usize, i64, i64)> = Vec::with_capacity(e.len());
                for (c, phi, coef) in e {
                    match merged.last_mut() {
                        Some(last) if last.0 == c && last.1 == phi => last.2 += coef,
                        _ => merged.push((c, phi, coef)),
                    }
                }
                merged.retain(|x| x.2 != 0);
                entries.push(merged);
            }
        }
        let spans: Vec<(i64, i64)> = entries
            .iter()
            .map(|e| {
                let lo = e.iter().map(|x| x.1).min().unwrap_or(0);
                let hi = e.iter().map(|x| x.1).max().unwrap_or(0);
                (lo, hi)
            })
            .collect();
        let l1: Vec<BigInt> = entries.iter().map(|e| BigInt::from(e.iter().map(|x| x.2.unsigned_abs()).sum::<u64>())).collect();
        let lo = spans.iter().map(|s| s.0).min().unwrap_or(0);
        let hi = spans.iter().map(|s| s.1).max().unwrap_or(0);
        let n = rows;
        let entry_spans: Vec<Vec<(usize, i64, i64)>> = entries
            .iter()
            .map(|e| {
                let mut out: Vec<(usize, i64, i64)> = Vec::new();
                for &(c, phi, _) in e {
                    match out.last_mut() {
                        Some(last) if last.0 == c => last.2 = phi,
                        _ => out.push((c, phi, phi)),
                    }
                }
                out
            })
            .collect();
        let eval = move |fp: &Fp, t: u64, out: &mut [u64]| {
            let tinv = fp.inv(t);
            let base = fp.pow(tinv, lo.min(0).unsigned_abs());
            let mut pows = Vec::with_capacity((hi - lo.min(0) + 1) as usize);
            let mut x = base;
            for _ in lo.min(0)..=hi.max(0) {
                pows.push(x);
                x = fp.mul(x, t);
            }
            let off = lo.min(0);
            out.iter_mut().for_each(|v| *v = 0);
            for (i, e) in entries.iter().enumerate() {
                let row = &mut out[i * n..(i + 1) * n];
                for &(c, phi, coef) in e {
                    let v = fp.mul(fp.from_i64(coef), pows[(phi - off) as usize]);
                    row[c] = fp.add(row[c], v);
                }
            }
        };
        Ok(ImplicitPolyMatrix::new(n, spans, l1, Arc::new(eval)).with_entry_spans(&entry_spans))
    }
}

/// The Wada matrix `[Ψ(∂r_i/∂x_k)]` over active relators and generators
/// other than the deleted one. The Fox fundamental identity is checked
/// at a random point on construction.
pub fn wada_matrix(setup: &TwistedSetup) -> Result<ImplicitPolyMatrix, TwistedError> {
    let fb = fox_blocks(setup)?;
    if let Some(i) = fb.fox_identity(0x0f0c5)? {
        return Err(TwistedError::FoxIdentity(i));
    }
    fb.matrix(setup.deleted_generator())
}

/// Fox identity check at a point chosen from `seed`.
pub fn fox_identity_holds(setup: &TwistedSetup, seed: u64) -> Result<bool, TwistedError> {
    Ok(fox_blocks(setup)?.fox_identity(seed)?.is_none())
}

/// `det(t^{φ(x_j)} ρ(f(x_j)) - I)` from the cycle type: an `ℓ`-cycle
/// contributes `(-1)^ℓ (1 - t^{φ ℓ})`.
pub fn denominator(setup: &TwistedSetup) -> Result<ZPoly, TwistedError> {
    let j = setup.deleted_generator();
    let rep = setup.rep().images(&setup.hom().target)?;
    let img = &rep.images[setup.hom().images[j]];
    let phi = setup.presentation().phi[j];
    let mut seen = vec![false; rep.degree];
    let mut out = ZPoly::one();
    for s in 0..rep.degree {
        if seen[s] {
            continue;
        }
        let mut len = 0i64;
        let mut x = s;
        while !seen[x] {
            seen[x] = true;
            x = img[x] as usize;
            len += 1;
        }
        let sign = if len % 2 == 0 { 1 } else { -1 };
        let f = &ZPoly::monomial(BigInt::from(sign), 0) - &ZPoly::monomial(BigInt::from(sign), phi * len);
        out = &out * &f;
    }
    Ok(out)
}

/// Vanishing verdict of the Wada numerator, which vanishes exactly when
/// the twisted polynomial does (the denominator is nonzero).
pub fn twisted_vanishing(setup: &TwistedSetup, policy: &VerdictPolicy) -> Result<Verdict, TwistedError> {
    Ok(vanishing_verdict(&wada_matrix(setup)?, policy)?)
}
