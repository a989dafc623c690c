use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::matrix::ImplicitPolyMatrix;
use super::modp::{prime_sequence, Fp};
use super::PolyError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VerdictMode {
    Probable,
    Exact,
}

/// How a determinant is decided to vanish.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerdictPolicy {
    /// Number of random primes when `explicit_primes` is empty.
    pub primes: usize,
    pub mode: VerdictMode,
    pub seed: u64,
    pub explicit_primes: Vec<u64>,
}

impl Default for VerdictPolicy {
    fn default() -> Self {
        VerdictPolicy { primes: 3, mode: VerdictMode::Probable, seed: 0, explicit_primes: Vec::new() }
    }
}

impl VerdictPolicy {
    pub fn exact() -> Self {
        VerdictPolicy { mode: VerdictMode::Exact, ..Self::default() }
    }

    fn prime_list(&self) -> Result<Vec<u64>, PolyError> {
        if self.explicit_primes.is_empty() {
            prime_sequence(self.seed, self.primes.max(1), 1)
        } else {
            for &p in &self.explicit_primes {
                Fp::new(p)?;
            }
            Ok(self.explicit_primes.clone())
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum Verdict {
    /// `det M(t) ≠ 0` at this point, so the determinant is nonzero.
    NonvanishingCertified { prime: u64, t: u64, residue: u64 },
    /// The determinant is zero modulo every listed prime.
    VanishingProbable { primes: Vec<u64>, points: Vec<u64> },
    /// Zero modulo primes whose product exceeds the coefficient bound.
    VanishingExact { primes: Vec<u64>, bound_bits: u64 },
    Unknown { reason: String },
}

impl Verdict {
    pub fn is_vanishing(&self) -> Option<bool> {
        match self {
            Verdict::NonvanishingCertified { .. } => Some(false),
            Verdict::VanishingProbable { .. } | Verdict::VanishingExact { .. } => Some(true),
            Verdict::Unknown { .. } => None,
        }
    }
}

/// Decides whether `det M` is the zero Laurent polynomial.
///
/// For each prime one random unit is tried first; a nonzero value certifies
/// nonvanishing. Otherwise the shifted determinant, of degree at most `D`,
/// is evaluated at `D + 1` points, which decides vanishing modulo that prime.
pub fn vanishing_verdict(m: &ImplicitPolyMatrix, policy: &VerdictPolicy) -> Result<Verdict, PolyError> {
    let mut rng = ChaCha8Rng::seed_from_u64(policy.seed ^ 0x5eed);
    let needed = m.degree_bound() + 1;
    let mut primes = policy.prime_list()?;
    let mut zero_primes = Vec::new();
    let mut points = Vec::new();
    let mut i = 0;
    while i < primes.len() {
        let p = primes[i];
        i += 1;
        let fp = Fp::new(p)?;
        if needed > p - 1 {
            return Err(PolyError::InsufficientFieldSize { prime: p, needed });
        }
        let t = rng.gen_range(1..p);
        let r = fp.from_mont(m.det_at(&fp, fp.to_mont(t)));
        if r != 0 {
            return Ok(Verdict::NonvanishingCertified { prime: p, t, residue: r });
        }
        let coeffs = m.shifted_det_mod(p)?;
        if let Some(x) = (1..p).take(needed as usize + 1).find(|&x| {
            let v = coeffs.iter().rev().fold(0u64, |acc, &c| {
                ((acc as u128 * x as u128 + c as u128) % p as u128) as u64
            });
            v != 0
        }) {
            let r = fp.from_mont(m.det_at(&fp, fp.to_mont(x)));
            return Ok(Verdict::NonvanishingCertified { prime: p, t: x, residue: r });
        }
        zero_primes.push(p);
        points.push(needed);
        if i == primes.len() && policy.mode == VerdictMode::Exact && policy.explicit_primes.is_empty() {
            let product: BigInt = zero_primes.iter().map(|&q| BigInt::from(q)).product();
            if product <= m.coefficient_bound() {
                let extra = prime_sequence(policy.seed.wrapping_add(primes.len() as u64 * 7919), 1, 1)?[0];
                if !primes.contains(&extra) {
                    primes.push(extra);
                }
            }
        }
    }
    match policy.mode {
        VerdictMode::Probable => Ok(Verdict::VanishingProbable { primes: zero_primes, points }),
        VerdictMode::Exact => {
            let product: BigInt = zero_primes.iter().map(|&q| BigInt::from(q)).product();
            let bound = m.coefficient_bound();
            if product > bound {
                Ok(Verdict::VanishingExact { primes: zero_primes, bound_bits: bound.bits() })
            } else {
                Ok(Verdict::Unknown {
                    reason: format!("prime product below coefficient bound of {} bits", bound.bits()),
                })
            }
        }
    }
}
