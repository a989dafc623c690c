use num_bigint::BigInt;
use num_traits::One;

use super::laurent::ZPoly;

fn divisors(n: u64) -> Vec<u64> {
    (1..=n).filter(|d| n.is_multiple_of(*d)).collect()
}

/// The `n`-th cyclotomic polynomial, by dividing `t^n - 1` by `Φ_d` for
/// every proper divisor `d` of `n`.
pub fn cyclotomic(n: u64) -> ZPoly {
    assert!(n >= 1, "cyclotomic index must be positive");
    let mut acc = &ZPoly::monomial(BigInt::one(), n as i64) - &ZPoly::one();
    for d in divisors(n) {
        if d == n {
            break;
        }
        acc = acc
            .div_exact(&cyclotomic(d))
            .expect("nonzero divisor")
            .expect("Φ_d divides t^n - 1");
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_indices() {
        assert_eq!(cyclotomic(1), ZPoly::from_i64(0, &[-1, 1]));
        assert_eq!(cyclotomic(2), ZPoly::from_i64(0, &[1, 1]));
        assert_eq!(cyclotomic(5), ZPoly::from_i64(0, &[1, 1, 1, 1, 1]));
        assert_eq!(cyclotomic(6), ZPoly::from_i64(0, &[1, -1, 1]));
    }
}
