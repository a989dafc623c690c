use serde::Serialize;

use super::laurent::ZPoly;
use super::modp::{Fp, ModPoint};
use super::PolyError;

/// Result of an evaluation-based identity test.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdentityOutcome {
    pub holds: bool,
    pub witness: Option<ModPoint>,
    pub primes: Vec<u64>,
    pub points_per_prime: u64,
}

/// Compares two Laurent polynomials modulo each prime at
/// `degree_bound + 1` units, where `degree_bound` bounds the width of
/// `lhs - rhs`. Agreement at all points means `lhs ≡ rhs (mod p)`.
pub fn poly_identity_test(lhs: &ZPoly, rhs: &ZPoly, degree_bound: u64, primes: &[u64]) -> Result<IdentityOutcome, PolyError> {
    let l = lhs.clone();
    let r = rhs.clone();
    poly_identity_test_fn(
        |fp, t| Ok(eval_mod(&l, fp, t)),
        |fp, t| Ok(eval_mod(&r, fp, t)),
        degree_bound,
        1,
        primes,
    )
}

/// As [`poly_identity_test`] for sides given by modular evaluators. The
/// evaluators receive `t` in Montgomery form and may rely on a primitive
/// `root_order`-th root of unity, so each prime must be `1 mod root_order`.
pub fn poly_identity_test_fn<L, R>(
    lhs: L,
    rhs: R,
    degree_bound: u64,
    root_order: u64,
    primes: &[u64],
) -> Result<IdentityOutcome, PolyError>
where
    L: Fn(&Fp, u64) -> Result<u64, PolyError> + Sync,
    R: Fn(&Fp, u64) -> Result<u64, PolyError> + Sync,
{
    let needed = degree_bound + 1;
    for &p in primes {
        let fp = Fp::new(p)?;
        if (p - 1) % root_order.max(1) != 0 {
            return Err(PolyError::NoSuitablePrime(root_order));
        }
        if needed > p - 1 {
            return Err(PolyError::InsufficientFieldSize { prime: p, needed });
        }
        for x in 1..=needed {
            let t = fp.to_mont(x);
            if lhs(&fp, t)? != rhs(&fp, t)? {
                return Ok(IdentityOutcome {
                    holds: false,
                    witness: Some(ModPoint::new(p, x)?),
                    primes: primes.to_vec(),
                    points_per_prime: needed,
                });
            }
        }
    }
    Ok(IdentityOutcome { holds: true, witness: None, primes: primes.to_vec(), points_per_prime: needed })
}

/// Evaluates `f` at a Montgomery-form unit `t`, returning Montgomery form.
pub fn eval_mod(f: &ZPoly, fp: &Fp, t: u64) -> u64 {
    let tinv = fp.inv(t);
    f.residues(fp.prime())
        .into_iter()
        .fold(0, |acc, (e, c)| {
            let x = if e >= 0 { fp.pow(t, e as u64) } else { fp.pow(tinv, e.unsigned_abs()) };
            fp.add(acc, fp.mul(fp.to_mont(c), x))
        })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_offset_hidden_by_one_prime() {
        let p = 1_000_003;
        let lhs = ZPoly::from_i64(0, &[0, 0, 1]);
        let rhs = ZPoly::from_i64(0, &[p as i64, 0, 1]);
        assert!(poly_identity_test(&lhs, &rhs, 2, &[p]).unwrap().holds);
        let out = poly_identity_test(&lhs, &rhs, 2, &[p, 1_000_033]).unwrap();
        assert!(!out.holds);
        assert_eq!(out.witness.unwrap().prime, 1_000_033);
    }

    #[test]
    fn root_order_constrains_primes() {
        let f = ZPoly::one();
        let r = poly_identity_test_fn(|fp, _| Ok(eval_mod(&f, fp, fp.one())), |fp, _| Ok(fp.one()), 0, 4, &[7]);
        assert_eq!(r, Err(PolyError::NoSuitablePrime(4)));
    }
}
