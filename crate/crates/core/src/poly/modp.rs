//! Arithmetic in `F_p` for odd primes `p < 2^62`, in Montgomery form.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::PolyError;

pub const PRIME_BOUND: u64 = 1 << 62;

/// A prime field context. Values handed to [`Fp::mul`], [`Fp::add`] and
/// friends are in Montgomery form (`x * 2^64 mod p`); use [`Fp::to_mont`]
/// and [`Fp::from_mont`] at the boundary.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Fp {
    p: u64,
    /// `-p^{-1} mod 2^64`
    pneg_inv: u64,
    /// `2^128 mod p`
    r2: u64,
}

impl Fp {
    pub fn new(p: u64) -> Result<Self, PolyError> {
        if !(3..PRIME_BOUND).contains(&p) || !is_prime(p) {
            return Err(PolyError::NotPrime(p));
        }
        let mut inv: u64 = 1;
        for _ in 0..6 {
            inv = inv.wrapping_mul(2u64.wrapping_sub(p.wrapping_mul(inv)));
        }
        let r = ((1u128 << 64) % p as u128) as u64;
        let r2 = ((r as u128 * r as u128) % p as u128) as u64;
        Ok(Fp { p, pneg_inv: inv.wrapping_neg(), r2 })
    }

    #[inline]
    pub fn prime(&self) -> u64 {
        self.p
    }

    #[inline]
    fn redc(&self, x: u128) -> u64 {
        let m = (x as u64).wrapping_mul(self.pneg_inv);
        let t = ((x + m as u128 * self.p as u128) >> 64) as u64;
        if t >= self.p {
            t - self.p
        } else {
            t
        }
    }

    #[inline]
    pub fn to_mont(&self, x: u64) -> u64 {
        self.redc((x % self.p) as u128 * self.r2 as u128)
    }

    #[inline]
    pub fn from_mont(&self, x: u64) -> u64 {
        self.redc(x as u128)
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        self.redc(a as u128 * b as u128)
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    pub fn one(&self) -> u64 {
        self.to_mont(1)
    }

    pub fn pow(&self, a: u64, mut e: u64) -> u64 {
        let mut base = a;
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Inverse of a nonzero Montgomery-form element.
    pub fn inv(&self, a: u64) -> u64 {
        debug_assert!(a != 0);
        self.pow(a, self.p - 2)
    }

    /// `a^e` for a signed exponent; `a` must be nonzero when `e < 0`.
    pub fn pow_signed(&self, a: u64, e: i64) -> u64 {
        if e >= 0 {
            self.pow(a, e as u64)
        } else {
            self.inv(self.pow(a, e.unsigned_abs()))
        }
    }

    /// Montgomery form of a signed integer.
    pub fn from_i64(&self, x: i64) -> u64 {
        let r = x.rem_euclid(self.p as i64) as u64;
        self.to_mont(r)
    }

    /// An element of exact multiplicative order `n` (requires `n | p - 1`),
    /// found deterministically from `seed`.
    pub fn root_of_unity(&self, n: u64, seed: u64) -> Result<u64, PolyError> {
        if n == 0 || !(self.p - 1).is_multiple_of(n) {
            return Err(PolyError::NoSuitablePrime(n));
        }
        if n == 1 {
            return Ok(self.one());
        }
        let primes = prime_factors(n);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
        loop {
            let x = self.to_mont(rng.gen_range(2..self.p));
            let y = self.pow(x, (self.p - 1) / n);
            if primes.iter().all(|&q| self.pow(y, n / q) != self.one()) {
                return Ok(y);
            }
        }
    }
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut a: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    a %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, a, m);
        }
        a = mul_mod(a, a, m);
        e >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin, exact for all `u64`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// `count` distinct primes in `[2^61, 2^62)` with `p ≡ 1 (mod modulus)`,
/// drawn deterministically from `seed`.
pub fn prime_sequence(seed: u64, count: usize, modulus: u64) -> Result<Vec<u64>, PolyError> {
    let modulus = modulus.max(1);
    if modulus >= 1 << 40 {
        return Err(PolyError::NoSuitablePrime(modulus));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let lo = 1u64 << 61;
    let mut out: Vec<u64> = Vec::with_capacity(count);
    let step = if modulus.is_multiple_of(2) { modulus } else { 2 * modulus };
    while out.len() < count {
        let start = rng.gen_range(lo..PRIME_BOUND - (1 << 50));
        // first candidate >= start with c ≡ 1 mod step (so c is odd and ≡ 1 mod modulus)
        let mut c = start - start % step + 1;
        if c < start {
            c += step;
        }
        let mut tries = 0u32;
        while !is_prime(c) {
            c += step;
            tries += 1;
            if tries > 1_000_000 || c >= PRIME_BOUND {
                return Err(PolyError::NoSuitablePrime(modulus));
            }
        }
        if !out.contains(&c) {
            out.push(c);
        }
    }
    Ok(out)
}

/// An evaluation point: a prime and a nonzero residue for `t`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModPoint {
    pub prime: u64,
    pub t_value: u64,
}

impl ModPoint {
    pub fn new(prime: u64, t_value: u64) -> Result<Self, PolyError> {
        if !(3..PRIME_BOUND).contains(&prime) || !is_prime(prime) {
            return Err(PolyError::NotPrime(prime));
        }
        if t_value == 0 || t_value >= prime {
            return Err(PolyError::BadPoint { prime, t_value });
        }
        Ok(ModPoint { prime, t_value })
    }
}
