use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::Signed;
use rayon::prelude::*;

use super::det::{crt_symmetric, det_mod, hadamard_row_bound, interpolate_mod};
use super::laurent::ZPoly;
use super::modp::{prime_sequence, Fp};
use super::PolyError;

/// Fills a row-major `n×n` buffer with the matrix evaluated at `t`
/// (both in Montgomery form for the given field).
pub type EvalFn = dyn Fn(&Fp, u64, &mut [u64]) + Send + Sync;

/// A square matrix over `Z[t, t^-1]` known only through modular
/// evaluation, together with per-row exponent ranges and 1-norms.
#[derive(Clone)]
pub struct ImplicitPolyMatrix {
    n: usize,
    row_spans: Vec<(i64, i64)>,
    row_l1: Vec<BigInt>,
    shift: i64,
    degree: u64,
    eval: Arc<EvalFn>,
}

impl fmt::Debug for ImplicitPolyMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ImplicitPolyMatrix")
            .field("n", &self.n)
            .field("row_spans", &self.row_spans)
            .finish_non_exhaustive()
    }
}

impl ImplicitPolyMatrix {
    /// `row_spans[i] = (lo, hi)` must contain every exponent occurring in
    /// row `i`; `row_l1[i]` must bound the sum of absolute values of all
    /// coefficients in that row.
    pub fn new(n: usize, row_spans: Vec<(i64, i64)>, row_l1: Vec<BigInt>, eval: Arc<EvalFn>) -> Self {
        assert_eq!(row_spans.len(), n);
        assert_eq!(row_l1.len(), n);
        let shift = row_spans.iter().map(|s| s.0).sum();
        let degree = row_spans.iter().map(|&(lo, hi)| (hi - lo).max(0) as u64).sum();
        ImplicitPolyMatrix { n, row_spans, row_l1, shift, degree, eval }
    }

    /// Tightens shift and degree bound from per-entry exponent ranges
    /// `(column, lo, hi)` for each row: the lowest and highest exponents
    /// of the determinant are attained on some permutation, so optimal
    /// assignments bound them.
    pub fn with_entry_spans(mut self, entries: &[Vec<(usize, i64, i64)>]) -> Self {
        assert_eq!(entries.len(), self.n);
        if self.n == 0 {
            return self;
        }
        const MISSING: i64 = -(1 << 40);
        let best = |pick: &dyn Fn(i64, i64) -> i64| {
            let mut w = pathfinding::matrix::Matrix::new(self.n, self.n, MISSING);
            for (i, row) in entries.iter().enumerate() {
                for &(c, lo, hi) in row {
                    w[(i, c)] = pick(lo, hi);
                }
            }
            let (total, _) = pathfinding::kuhn_munkres::kuhn_munkres(&w);
            (total > MISSING / 2).then_some(total)
        };
        match (best(&|_, hi| hi), best(&|lo, _| -lo)) {
            (Some(top), Some(neg_bottom)) => {
                let bottom = -neg_bottom;
                if bottom > self.shift {
                    self.shift = bottom;
                }
                let hi = (self.shift + self.degree as i64).min(top);
                self.degree = (hi - self.shift).max(0) as u64;
            }
            _ => self.degree = 0,
        }
        self
    }

    pub fn from_dense(m: &[Vec<ZPoly>]) -> Result<Self, PolyError> {
        let n = m.len();
        if m.iter().any(|r| r.len() != n) {
            return Err(PolyError::NotSquare);
        }
        let mut spans = Vec::with_capacity(n);
        let mut l1 = Vec::with_capacity(n);
        for row in m {
            let lo = row.iter().filter_map(|p| p.low()).min().unwrap_or(0);
            let hi = row.iter().filter_map(|p| p.high()).max().unwrap_or(0);
            spans.push((lo, hi));
            l1.push(row.iter().flat_map(|p| p.coeffs().iter().map(|c| c.abs())).sum());
        }
        let entries: Vec<Vec<(i64, BigInt)>> = m
            .iter()
            .flatten()
            .map(|p| p.terms().map(|(e, c)| (e, c.clone())).collect())
            .collect();
        let eval = move |fp: &Fp, t: u64, out: &mut [u64]| {
            let pb = BigInt::from(fp.prime());
            let tinv = fp.inv(t);
            for (slot, terms) in out.iter_mut().zip(&entries) {
                let mut acc = 0;
                for (e, c) in terms {
                    let r = ((c % &pb) + &pb) % &pb;
                    let c = fp.to_mont(u64::try_from(r).unwrap());
                    let x = if *e >= 0 { fp.pow(t, *e as u64) } else { fp.pow(tinv, e.unsigned_abs()) };
                    acc = fp.add(acc, fp.mul(c, x));
                }
                *slot = acc;
            }
        };
        Ok(Self::new(n, spans, l1, Arc::new(eval)))
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn row_spans(&self) -> &[(i64, i64)] {
        &self.row_spans
    }

    /// Sum of the row low exponents: `det = t^shift * P(t)` with `P` an
    /// ordinary polynomial.
    pub fn shift(&self) -> i64 {
        self.shift
    }

    /// Degree bound for `P`: the sum of the row widths unless tightened.
    pub fn degree_bound(&self) -> u64 {
        self.degree
    }

    /// Bound on the absolute value of every coefficient of the determinant.
    pub fn coefficient_bound(&self) -> BigInt {
        hadamard_row_bound(self.row_l1.iter().cloned())
    }

    /// Entries at `t` (Montgomery form), row-major.
    pub fn eval_mod(&self, fp: &Fp, t: u64) -> Vec<u64> {
        let mut buf = vec![0u64; self.n * self.n];
        (self.eval)(fp, t, &mut buf);
        buf
    }

    /// `det M(t)` in Montgomery form.
    pub fn det_at(&self, fp: &Fp, t: u64) -> u64 {
        if self.n == 0 {
            return fp.one();
        }
        let mut buf = self.eval_mod(fp, t);
        det_mod(fp, &mut buf, self.n)
    }

    /// `P(t) = t^{-shift} det M(t)` in Montgomery form.
    pub fn shifted_det_at(&self, fp: &Fp, t: u64) -> u64 {
        let d = self.det_at(fp, t);
        fp.mul(d, fp.pow_signed(t, -self.shift()))
    }

    /// `P mod p` through `degree_bound() + 1` points `t = 1, 2, ...`,
    /// as plain residues.
    pub fn shifted_det_mod(&self, p: u64) -> Result<Vec<u64>, PolyError> {
        let fp = Fp::new(p)?;
        let k = self.degree_bound() + 1;
        if k > p - 1 {
            return Err(PolyError::InsufficientFieldSize { prime: p, needed: k });
        }
        let xs: Vec<u64> = (1..=k).collect();
        let ys: Vec<u64> = xs
            .par_iter()
            .map(|&x| fp.from_mont(self.shifted_det_at(&fp, fp.to_mont(x))))
            .collect();
        Ok(interpolate_mod(p, &xs, &ys))
    }

    /// Exact determinant by interpolation at enough primes to exceed twice
    /// the coefficient bound, combined by CRT. Unit-normalised.
    pub fn det_exact(&self, seed: u64) -> Result<ZPoly, PolyError> {
        let bound = self.coefficient_bound();
        let target = &bound * 2u32;
        let mut primes = Vec::new();
        let mut residues = Vec::new();
        let mut modulus = BigInt::from(1u32);
        let mut round = 0u64;
        while modulus <= target {
            let p = prime_sequence(seed.wrapping_add(round), 1, 1)?[0];
            round += 1;
            if primes.contains(&p) {
                continue;
            }
            residues.push(self.shifted_det_mod(p)?);
            primes.push(p);
            modulus *= p;
        }
        let coeffs = crt_symmetric(&primes, &residues);
        let p = ZPoly::from_coeffs(0, coeffs);
        Ok(if p.is_zero() { p } else { p.normalized() })
    }
}
