use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Num, One, Signed, Zero};

use super::PolyError;

/// Coefficient ring for [`LaurentPoly`]. Any signed `num` type qualifies;
/// division is only used by the exact-division routines and must be exact
/// whenever the divisor's leading coefficient divides.
pub trait Coeff: Num + Signed + Clone + fmt::Debug + fmt::Display + Send + Sync {}
impl<T: Num + Signed + Clone + fmt::Debug + fmt::Display + Send + Sync> Coeff for T {}

/// A Laurent polynomial `sum c_i t^i` with finitely many nonzero terms.
///
/// Stored densely from the lowest exponent `lo`; the first and last stored
/// coefficients are nonzero, and the zero polynomial has no coefficients.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LaurentPoly<C> {
    lo: i64,
    coeffs: Vec<C>,
}

pub type ZPoly = LaurentPoly<BigInt>;
pub type QPoly = LaurentPoly<BigRational>;

impl<C: Coeff> LaurentPoly<C> {
    pub fn zero() -> Self {
        LaurentPoly { lo: 0, coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::monomial(C::one(), 0)
    }

    /// The variable `t`.
    pub fn t() -> Self {
        Self::monomial(C::one(), 1)
    }

    pub fn constant(c: C) -> Self {
        Self::monomial(c, 0)
    }

    pub fn monomial(c: C, exp: i64) -> Self {
        Self::from_coeffs(exp, vec![c])
    }

    /// Builds `sum coeffs[i] t^(lo+i)` and canonicalises.
    pub fn from_coeffs(lo: i64, coeffs: Vec<C>) -> Self {
        let mut p = LaurentPoly { lo, coeffs };
        p.trim();
        p
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
        let lead = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        if lead > 0 {
            self.coeffs.drain(..lead);
            self.lo += lead as i64;
        }
        if self.coeffs.is_empty() {
            self.lo = 0;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Lowest exponent with a nonzero coefficient (`None` for zero).
    pub fn low(&self) -> Option<i64> {
        (!self.is_zero()).then_some(self.lo)
    }

    /// Highest exponent with a nonzero coefficient (`None` for zero).
    pub fn high(&self) -> Option<i64> {
        (!self.is_zero()).then(|| self.lo + self.coeffs.len() as i64 - 1)
    }

    /// `high - low`, or `None` for the zero polynomial.
    pub fn width(&self) -> Option<i64> {
        Some(self.high()? - self.low()?)
    }

    pub fn coeff(&self, exp: i64) -> C {
        let i = exp - self.lo;
        if i < 0 || i as usize >= self.coeffs.len() {
            C::zero()
        } else {
            self.coeffs[i as usize].clone()
        }
    }

    /// Dense coefficients starting at `low()`.
    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    /// Nonzero terms as `(exponent, coefficient)` in increasing exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &C)> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(i, c)| (self.lo + i as i64, c))
    }

    pub fn leading(&self) -> Option<&C> {
        self.coeffs.last()
    }

    /// Leading coefficient is `±1`.
    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(|c| c.abs().is_one())
    }

    /// Multiplies by `t^k`.
    pub fn shift(&self, k: i64) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        LaurentPoly { lo: self.lo + k, coeffs: self.coeffs.clone() }
    }

    pub fn scale(&self, c: &C) -> Self {
        Self::from_coeffs(self.lo, self.coeffs.iter().map(|x| x.clone() * c.clone()).collect())
    }

    /// Substitutes `t -> t^k` for `k >= 1`.
    pub fn compose_power(&self, k: i64) -> Self {
        assert!(k >= 1, "compose_power needs a positive exponent");
        let mut out = Self::zero();
        for (e, c) in self.terms() {
            out = &out + &Self::monomial(c.clone(), e * k);
        }
        out
    }

    /// Substitutes `t -> -t`.
    pub fn negate_variable(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| if (self.lo + i as i64).rem_euclid(2) == 1 { -c.clone() } else { c.clone() })
            .collect();
        Self::from_coeffs(self.lo, coeffs)
    }

    /// Unit normalisation: lowest exponent moved to 0 and the leading
    /// coefficient made positive. Two Laurent polynomials agree up to
    /// `±t^k` exactly when their normalisations are equal.
    pub fn normalized(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let p = LaurentPoly { lo: 0, coeffs: self.coeffs.clone() };
        if self.coeffs.last().unwrap().is_negative() {
            -p
        } else {
            p
        }
    }

    pub fn pow(&self, mut k: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            k >>= 1;
        }
        acc
    }

    /// Evaluates at `t = x`. Negative exponents require `x` invertible in `C`.
    pub fn eval(&self, x: &C) -> C {
        let mut acc = C::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x.clone() + c.clone();
        }
        if self.lo >= 0 {
            acc * num_traits::pow(x.clone(), self.lo as usize)
        } else {
            acc / num_traits::pow(x.clone(), (-self.lo) as usize)
        }
    }

    /// Polynomial division with remainder after clearing powers of `t`:
    /// both operands are shifted to start at exponent 0 and divided as
    /// ordinary polynomials. Returns `None` when a quotient coefficient is
    /// not exact in `C` (only possible for non-field coefficients).
    pub fn div_rem_shifted(&self, d: &Self) -> Result<Option<(Self, Self)>, PolyError> {
        if d.is_zero() {
            return Err(PolyError::DivisorZero);
        }
        let dc = &d.coeffs;
        let dl = dc.last().unwrap().clone();
        let mut r: Vec<C> = self.coeffs.clone();
        if r.len() < dc.len() {
            return Ok(Some((Self::zero(), Self::from_coeffs(0, r))));
        }
        let qlen = r.len() - dc.len() + 1;
        let mut q = vec![C::zero(); qlen];
        for i in (0..qlen).rev() {
            let top = r[i + dc.len() - 1].clone();
            if top.is_zero() {
                continue;
            }
            let qc = top.clone() / dl.clone();
            if qc.clone() * dl.clone() != top {
                return Ok(None);
            }
            for (j, dj) in dc.iter().enumerate() {
                r[i + j] = r[i + j].clone() - qc.clone() * dj.clone();
            }
            q[i] = qc;
        }
        Ok(Some((Self::from_coeffs(0, q), Self::from_coeffs(0, r))))
    }

    /// Exact quotient `self / d` in the Laurent ring, if it exists with
    /// coefficients in `C`.
    pub fn div_exact(&self, d: &Self) -> Result<Option<Self>, PolyError> {
        if self.is_zero() {
            return if d.is_zero() { Err(PolyError::DivisorZero) } else { Ok(Some(Self::zero())) };
        }
        match self.div_rem_shifted(d)? {
            Some((q, r)) if r.is_zero() => Ok(Some(q.shift(self.lo - d.lo))),
            _ => Ok(None),
        }
    }
}

impl ZPoly {
    pub fn from_i64(lo: i64, coeffs: &[i64]) -> Self {
        Self::from_coeffs(lo, coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn to_rational(&self) -> QPoly {
        QPoly::from_coeffs(self.lo, self.coeffs.iter().map(|c| BigRational::from_integer(c.clone())).collect())
    }

    /// Coefficients reduced into `[0, p)`, for modular evaluation.
    pub fn residues(&self, p: u64) -> Vec<(i64, u64)> {
        let pb = BigInt::from(p);
        self.terms()
            .map(|(e, c)| {
                let r = ((c % &pb) + &pb) % &pb;
                (e, u64::try_from(r).expect("residue fits u64"))
            })
            .collect()
    }

    /// Parses text such as `2t^2 - 5t + 2` or `t^-1 + 3`. The variable must be `t`.
    pub fn parse(text: &str) -> Result<Self, PolyError> {
        let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(PolyError::Parse(text.to_string()));
        }
        let bad = || PolyError::Parse(text.to_string());
        let bytes = s.as_bytes();
        let mut i = 0;
        let mut out = ZPoly::zero();
        while i < bytes.len() {
            let mut sign = 1i64;
            if bytes[i] == b'+' || bytes[i] == b'-' {
                if bytes[i] == b'-' {
                    sign = -1;
                }
                i += 1;
            } else if i != 0 {
                return Err(bad());
            }
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let mut coeff: BigInt = if i > start { s[start..i].parse().map_err(|_| bad())? } else { BigInt::one() };
            let mut exp = 0i64;
            if i < bytes.len() && bytes[i] == b'*' {
                i += 1;
            }
            if i < bytes.len() && bytes[i] == b't' {
                i += 1;
                exp = 1;
                if i < bytes.len() && bytes[i] == b'^' {
                    i += 1;
                    let es = i;
                    if i < bytes.len() && (bytes[i] == b'-' || bytes[i] == b'+') {
                        i += 1;
                    }
                    while i < bytes.len() && bytes[i].is_ascii_digit() {
                        i += 1;
                    }
                    exp = s[es..i].parse().map_err(|_| bad())?;
                }
            } else if i == start {
                return Err(bad());
            }
            if sign < 0 {
                coeff = -coeff;
            }
            out = &out + &ZPoly::monomial(coeff, exp);
        }
        Ok(out)
    }
}

impl QPoly {
    /// Clears denominators and content, returning a primitive integer
    /// polynomial with the same roots (sign of the leading term kept).
    pub fn to_primitive_integer(&self) -> ZPoly {
        use num_integer::Integer;
        if self.is_zero() {
            return ZPoly::zero();
        }
        let mut l = BigInt::one();
        for c in &self.coeffs {
            l = l.lcm(c.denom());
        }
        let ints: Vec<BigInt> = self.coeffs.iter().map(|c| (c * BigRational::from_integer(l.clone())).to_integer()).collect();
        let mut g = BigInt::zero();
        for c in &ints {
            g = g.gcd(c);
        }
        ZPoly::from_coeffs(self.lo, ints.into_iter().map(|c| c / &g).collect())
    }
}

impl<C: Coeff> Default for LaurentPoly<C> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<'a, C: Coeff> Add<&'a LaurentPoly<C>> for &'a LaurentPoly<C> {
    type Output = LaurentPoly<C>;
    fn add(self, rhs: &LaurentPoly<C>) -> LaurentPoly<C> {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        let lo = self.lo.min(rhs.lo);
        let hi = self.high().unwrap().max(rhs.high().unwrap());
        let mut v = vec![C::zero(); (hi - lo + 1) as usize];
        for (i, c) in self.coeffs.iter().enumerate() {
            let k = (self.lo - lo) as usize + i;
            v[k] = v[k].clone() + c.clone();
        }
        for (i, c) in rhs.coeffs.iter().enumerate() {
            let k = (rhs.lo - lo) as usize + i;
            v[k] = v[k].clone() + c.clone();
        }
        LaurentPoly::from_coeffs(lo, v)
    }
}

impl<'a, C: Coeff> Sub<&'a LaurentPoly<C>> for &'a LaurentPoly<C> {
    type Output = LaurentPoly<C>;
    fn sub(self, rhs: &LaurentPoly<C>) -> LaurentPoly<C> {
        self + &(-rhs.clone())
    }
}

impl<'a, C: Coeff> Mul<&'a LaurentPoly<C>> for &'a LaurentPoly<C> {
    type Output = LaurentPoly<C>;
    fn mul(self, rhs: &LaurentPoly<C>) -> LaurentPoly<C> {
        if self.is_zero() || rhs.is_zero() {
            return LaurentPoly::zero();
        }
        let mut v = vec![C::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                v[i + j] = v[i + j].clone() + a.clone() * b.clone();
            }
        }
        LaurentPoly::from_coeffs(self.lo + rhs.lo, v)
    }
}

impl<C: Coeff> Add for LaurentPoly<C> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        &self + &rhs
    }
}

impl<C: Coeff> Sub for LaurentPoly<C> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        &self - &rhs
    }
}

impl<C: Coeff> Mul for LaurentPoly<C> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        &self * &rhs
    }
}

impl<C: Coeff> Neg for LaurentPoly<C> {
    type Output = Self;
    fn neg(self) -> Self {
        LaurentPoly { lo: self.lo, coeffs: self.coeffs.into_iter().map(|c| -c).collect() }
    }
}

impl<C: Coeff> fmt::Display for LaurentPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.terms().collect::<Vec<_>>().into_iter().rev() {
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let unit = mag.is_one();
            match e {
                0 => write!(f, "{mag}")?,
                _ => {
                    if !unit {
                        write!(f, "{mag}")?;
                    }
                    if e == 1 {
                        write!(f, "t")?;
                    } else {
                        write!(f, "t^{e}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

impl<C: Coeff> fmt::Debug for LaurentPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LaurentPoly({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(lo: i64, c: &[i64]) -> ZPoly {
        ZPoly::from_i64(lo, c)
    }

    #[test]
    fn canonical_form_drops_zeros() {
        let p = z(-2, &[0, 0, 1, 2, 0]);
        assert_eq!(p.low(), Some(0));
        assert_eq!(p.high(), Some(1));
        assert!(z(3, &[0, 0]).is_zero());
        assert_eq!(z(3, &[0]), ZPoly::zero());
    }

    #[test]
    fn arithmetic() {
        let a = z(0, &[-1, 1]);
        let b = z(0, &[1, 1]);
        assert_eq!(&a * &b, z(0, &[-1, 0, 1]));
        assert!((&a - &a).is_zero());
        assert_eq!((&a + &b), z(1, &[2]));
    }

    #[test]
    fn normalization_fixes_units() {
        let p = z(-3, &[-2, 5, -2]);
        assert_eq!(p.normalized(), z(0, &[2, -5, 2]));
        assert_eq!(p.shift(7).normalized(), p.normalized());
    }

    #[test]
    fn exact_division() {
        let a = z(0, &[-1, 0, 1]);
        let d = z(5, &[-1, 1]);
        assert_eq!(a.div_exact(&d).unwrap(), Some(z(-5, &[1, 1])));
        assert_eq!(z(0, &[1, -1, 1]).div_exact(&d).unwrap(), None);
        assert!(a.div_exact(&ZPoly::zero()).is_err());
    }

    #[test]
    fn display_and_parse_round_trip() {
        let p = z(0, &[2, -5, 2]);
        assert_eq!(p.to_string(), "2t^2 - 5t + 2");
        assert_eq!(ZPoly::parse("2t^2 - 5t + 2").unwrap(), p);
        assert_eq!(ZPoly::parse("t^-1+3").unwrap(), z(-1, &[1, 3]));
        assert_eq!(ZPoly::parse("1-3*t+ t^2").unwrap(), z(0, &[1, -3, 1]));
        assert!(ZPoly::parse("2x").is_err());
    }

    #[test]
    fn eval_with_negative_exponents() {
        let q = z(-1, &[1, 0, 1]).to_rational();
        let v = q.eval(&BigRational::from_integer(2.into()));
        assert_eq!(v, BigRational::new(5.into(), 2.into()));
    }
}
