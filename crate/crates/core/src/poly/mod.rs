//! Laurent polynomials over `Z` and `Q`, cyclotomic polynomials, exact and
//! modular determinants, vanishing verdicts and identity tests.

pub mod cyclotomic;
pub mod det;
pub mod identity;
pub mod laurent;
pub mod matrix;
pub mod modp;
pub mod verdict;

use thiserror::Error;

pub use cyclotomic::cyclotomic;
pub use det::det_exact;
pub use identity::{poly_identity_test, poly_identity_test_fn, IdentityOutcome};
pub use laurent::{Coeff, LaurentPoly, QPoly, ZPoly};
pub use matrix::ImplicitPolyMatrix;
pub use modp::{Fp, ModPoint};
pub use verdict::{vanishing_verdict, Verdict, VerdictMode, VerdictPolicy};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("division by the zero polynomial")]
    DivisorZero,
    #[error("cannot parse polynomial `{0}`")]
    Parse(String),
    #[error("{0} is not an odd prime below 2^62")]
    NotPrime(u64),
    #[error("no usable prime for root order {0}")]
    NoSuitablePrime(u64),
    #[error("t = {t_value} is not a unit modulo {prime}")]
    BadPoint { prime: u64, t_value: u64 },
    #[error("matrix of size {size} exceeds the cap {cap}")]
    SizeExceeded { size: usize, cap: usize },
    #[error("matrix is not square")]
    NotSquare,
    #[error("F_{prime} has too few units for {needed} evaluation points")]
    InsufficientFieldSize { prime: u64, needed: u64 },
}

/// Whether `a` divides `b` in `Q[t, t^-1]`.
pub fn divides(a: &ZPoly, b: &ZPoly) -> Result<bool, PolyError> {
    if a.is_zero() {
        return Err(PolyError::DivisorZero);
    }
    if b.is_zero() {
        return Ok(true);
    }
    let (_, r) = b
        .to_rational()
        .div_rem_shifted(&a.to_rational())?
        .expect("division over Q is always possible");
    Ok(r.is_zero())
}
