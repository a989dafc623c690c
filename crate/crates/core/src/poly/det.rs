use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::laurent::ZPoly;
use super::modp::Fp;
use super::PolyError;

/// Default size cap for [`det_exact`].
pub const EXACT_SIZE_CAP: usize = 64;

/// Determinant of an `n×n` row-major matrix over `F_p`, entries in
/// Montgomery form. The matrix is destroyed. Returns Montgomery form.
pub fn det_mod(fp: &Fp, a: &mut [u64], n: usize) -> u64 {
    debug_assert_eq!(a.len(), n * n);
    let mut det = fp.one();
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| a[r * n + col] != 0) else {
            return 0;
        };
        if piv != col {
            for j in col..n {
                a.swap(piv * n + j, col * n + j);
            }
            det = fp.neg(det);
        }
        let pv = a[col * n + col];
        det = fp.mul(det, pv);
        let inv = fp.inv(pv);
        let (top, bottom) = a.split_at_mut((col + 1) * n);
        let prow = &top[col * n..(col + 1) * n];
        for row in bottom.chunks_exact_mut(n) {
            let x = row[col];
            if x == 0 {
                continue;
            }
            let f = fp.mul(x, inv);
            for j in col + 1..n {
                let pj = prow[j];
                if pj != 0 {
                    row[j] = fp.sub(row[j], fp.mul(f, pj));
                }
            }
        }
    }
    det
}

/// Exact determinant of a square matrix of Laurent polynomials by
/// fraction-free (Bareiss) elimination, unit-normalised.
///
/// Each row is first multiplied by a power of `t` so that its entries are
/// ordinary polynomials; this only changes the result by a unit.
pub fn det_exact(m: &[Vec<ZPoly>]) -> Result<ZPoly, PolyError> {
    det_exact_with_cap(m, EXACT_SIZE_CAP)
}

pub fn det_exact_with_cap(m: &[Vec<ZPoly>], cap: usize) -> Result<ZPoly, PolyError> {
    let n = m.len();
    if n > cap {
        return Err(PolyError::SizeExceeded { size: n, cap });
    }
    if m.iter().any(|r| r.len() != n) {
        return Err(PolyError::NotSquare);
    }
    if n == 0 {
        return Ok(ZPoly::one());
    }
    let mut a: Vec<Vec<ZPoly>> = m
        .iter()
        .map(|row| {
            let lo = row.iter().filter_map(|p| p.low()).min().unwrap_or(0);
            row.iter().map(|p| p.shift(-lo)).collect()
        })
        .collect();
    let mut sign = false;
    let mut prev = ZPoly::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    sign = !sign;
                }
                None => return Ok(ZPoly::zero()),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &(&a[i][j] * &a[k][k]) - &(&a[i][k] * &a[k][j]);
                a[i][j] = num
                    .div_exact(&prev)
                    .expect("nonzero Bareiss pivot")
                    .expect("Bareiss division is exact");
            }
            a[i][k] = ZPoly::zero();
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    Ok(if sign { -d } else { d }.normalized())
}

/// Coefficient bound for a determinant of polynomial entries: the product
/// over rows of the sum of the 1-norms of the entries.
pub fn hadamard_row_bound(rows_l1: impl Iterator<Item = BigInt>) -> BigInt {
    rows_l1.fold(BigInt::one(), |acc, r| acc * r.max(BigInt::one()))
}

/// Newton interpolation over `F_p` (plain residues, not Montgomery):
/// returns coefficients `c_0..c_{k-1}` of the unique polynomial of degree
/// `< k` through the `k` points.
pub fn interpolate_mod(p: u64, xs: &[u64], ys: &[u64]) -> Vec<u64> {
    let fp = Fp::new(p).expect("interpolation prime");
    let k = xs.len();
    let x: Vec<u64> = xs.iter().map(|&v| fp.to_mont(v)).collect();
    let mut c: Vec<u64> = ys.iter().map(|&v| fp.to_mont(v)).collect();
    for j in 1..k {
        for i in (j..k).rev() {
            let num = fp.sub(c[i], c[i - 1]);
            let den = fp.sub(x[i], x[i - j]);
            c[i] = fp.mul(num, fp.inv(den));
        }
    }
    // expand Newton form into monomial coefficients
    let mut poly = vec![0u64; k];
    for i in (0..k).rev() {
        // poly = poly * (t - x_i) + c_i
        let mut next = vec![0u64; k];
        for d in (0..k).rev() {
            if poly[d] == 0 {
                continue;
            }
            if d + 1 < k {
                next[d + 1] = fp.add(next[d + 1], poly[d]);
            }
            next[d] = fp.sub(next[d], fp.mul(poly[d], x[i]));
        }
        next[0] = fp.add(next[0], c[i]);
        poly = next;
    }
    poly.into_iter().map(|v| fp.from_mont(v)).collect()
}

/// Chinese remaindering of residue vectors into symmetric integer
/// representatives modulo the product of the primes.
pub fn crt_symmetric(primes: &[u64], residues: &[Vec<u64>]) -> Vec<BigInt> {
    let len = residues.first().map_or(0, |r| r.len());
    let mut acc: Vec<BigInt> = vec![BigInt::zero(); len];
    let mut modulus = BigInt::one();
    for (pi, &p) in primes.iter().enumerate() {
        let pb = BigInt::from(p);
        let inv = modulus.mod_floor(&pb).modpow(&(pb.clone() - 2u32), &pb);
        for (i, a) in acc.iter_mut().enumerate() {
            let r = BigInt::from(residues[pi][i]);
            let diff = (r - (*a).mod_floor(&pb)).mod_floor(&pb);
            let step = (diff * &inv).mod_floor(&pb);
            *a += &modulus * step;
        }
        modulus *= pb;
    }
    let half = &modulus / 2;
    acc.into_iter().map(|a| if a > half { a - &modulus } else { a }).collect()
}

/// Integer vector bound check helper: true when every entry is within `bound`.
pub fn within_bound(v: &[BigInt], bound: &BigInt) -> bool {
    v.iter().all(|c| c.abs() <= *bound)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(lo: i64, c: &[i64]) -> ZPoly {
        ZPoly::from_i64(lo, c)
    }

    #[test]
    fn bareiss_small() {
        assert_eq!(det_exact(&[vec![z(0, &[-1, 1])]]).unwrap(), z(0, &[-1, 1]));
        let m = vec![vec![z(1, &[1]), ZPoly::one()], vec![ZPoly::one(), z(1, &[1])]];
        assert_eq!(det_exact(&m).unwrap(), z(0, &[-1, 0, 1]));
        assert_eq!(det_exact(&[]).unwrap(), ZPoly::one());
        let zero = vec![vec![ZPoly::zero(); 2]; 2];
        assert!(det_exact(&zero).unwrap().is_zero());
    }

    #[test]
    fn bareiss_cap() {
        let m = vec![vec![ZPoly::one(); 3]; 3];
        assert!(matches!(det_exact_with_cap(&m, 2), Err(PolyError::SizeExceeded { .. })));
    }

    #[test]
    fn modular_det_matches_cofactor() {
        let fp = Fp::new(101).unwrap();
        let vals = [[2i64, 3, 1], [4, 1, 5], [7, 2, 6]];
        let direct: i64 = 2 * (6 - 10) - 3 * (24 - 35) + (8 - 7);
        let mut a: Vec<u64> = vals.iter().flatten().map(|&v| fp.from_i64(v)).collect();
        let d = fp.from_mont(det_mod(&fp, &mut a, 3));
        assert_eq!(d as i64, direct.rem_euclid(101));
    }

    #[test]
    fn interpolation_and_crt() {
        let p = 1_000_003;
        let xs = [1, 2, 3, 4];
        let f = |x: u64| (5 + 3 * x + 7 * x * x * x) % p;
        let ys: Vec<u64> = xs.iter().map(|&x| f(x)).collect();
        assert_eq!(interpolate_mod(p, &xs, &ys), vec![5, 3, 0, 7]);
        let v = crt_symmetric(&[101, 103], &[vec![100, 5], vec![102, 5]]);
        assert_eq!(v, vec![BigInt::from(-1), BigInt::from(5)]);
    }
}
