use std::collections::BTreeMap;
use std::fmt;

use crate::knots::Word;

/// An element of `Z[F]`: integer combination of reduced free words.
#[derive(Clone, Default, PartialEq, Eq)]
pub struct FreeGroupRingElement {
    terms: BTreeMap<Word, i64>,
}

fn reduce(w: &[i32]) -> Word {
    let mut out: Word = Vec::with_capacity(w.len());
    for &l in w {
        if out.last() == Some(&-l) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    out
}

impl FreeGroupRingElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn word(w: &[i32]) -> Self {
        Self::from_terms([(w.to_vec(), 1)])
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Word, i64)>) -> Self {
        let mut e = Self::zero();
        for (w, c) in terms {
            e.add_term(&w, c);
        }
        e
    }

    fn add_term(&mut self, w: &[i32], c: i64) {
        if c == 0 {
            return;
        }
        let w = reduce(w);
        let slot = self.terms.entry(w.clone()).or_insert(0);
        *slot += c;
        if *slot == 0 {
            self.terms.remove(&w);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, i64)> {
        self.terms.iter().map(|(w, &c)| (w, c))
    }

    pub fn coeff(&self, w: &[i32]) -> i64 {
        self.terms.get(&reduce(w)).copied().unwrap_or(0)
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut e = self.clone();
        for (w, c) in o.terms() {
            e.add_term(w, c);
        }
        e
    }

    pub fn scale(&self, k: i64) -> Self {
        Self::from_terms(self.terms().map(|(w, c)| (w.clone(), c * k)))
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut e = Self::zero();
        for (a, x) in self.terms() {
            for (b, y) in o.terms() {
                let mut w = a.clone();
                w.extend_from_slice(b);
                e.add_term(&w, x * y);
            }
        }
        e
    }

    /// Augmentation: the sum of the coefficients.
    pub fn augmentation(&self) -> i64 {
        self.terms.values().sum()
    }
}

impl fmt::Display for FreeGroupRingElement {
    /// Generators print as `x1, x2, ...`; inverses as `x1^-1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (w, c)) in self.terms().enumerate() {
            match (i, c < 0) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let mag = c.abs();
            if w.is_empty() {
                write!(f, "{mag}")?;
                continue;
            }
            if mag != 1 {
                write!(f, "{mag}*")?;
            }
            let letters: Vec<String> =
                w.iter().map(|&l| if l > 0 { format!("x{l}") } else { format!("x{}^-1", -l) }).collect();
            write!(f, "{}", letters.join("*"))?;
        }
        Ok(())
    }
}

impl fmt::Debug for FreeGroupRingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// One term of a Fox derivative: `coef * prefix`.
pub(crate) fn fox_terms(word: &[i32], generator: usize) -> impl Iterator<Item = (i64, &[i32])> {
    let target = generator as i32 + 1;
    word.iter().enumerate().filter_map(move |(k, &l)| {
        if l == target {
            Some((1, &word[..k]))
        } else if l == -target {
            Some((-1, &word[..=k]))
        } else {
            None
        }
    })
}

/// `∂ word / ∂ x_generator` (generators 0-based).
pub fn fox_derivative(word: &[i32], generator: usize) -> FreeGroupRingElement {
    FreeGroupRingElement::from_terms(fox_terms(word, generator).map(|(c, w)| (w.to_vec(), c)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const U: i32 = 1;
    const V: i32 = 2;

    #[test]
    fn trefoil_relator() {
        let r = [U, V, U, -V, -U, -V];
        let d = fox_derivative(&r, 0);
        let expect = FreeGroupRingElement::from_terms([(vec![], 1), (vec![U, V], 1), (vec![U, V, U, -V, -U], -1)]);
        assert_eq!(d, expect);
    }

    #[test]
    fn figure_eight_word() {
        let w = [U, -V, -U, V];
        let d = fox_derivative(&w, 1);
        let expect = FreeGroupRingElement::from_terms([(vec![U, -V], -1), (vec![U, -V, -U], 1)]);
        assert_eq!(d, expect);
    }

    #[test]
    fn product_rule_instance() {
        let d = fox_derivative(&[U, V], 1);
        assert_eq!(d, FreeGroupRingElement::word(&[U]));
        assert_eq!(fox_derivative(&[-U], 0), FreeGroupRingElement::word(&[-U]).scale(-1));
        assert!(fox_derivative(&[U], 1).is_zero());
        assert_eq!(format!("{}", fox_derivative(&[U, V, -U], 0)), "1 - x1*x2*x1^-1");
    }

    fn word() -> impl Strategy<Value = Vec<i32>> {
        prop::collection::vec(prop_oneof![Just(1), Just(-1), Just(2), Just(-2), Just(3), Just(-3)], 0..10)
    }

    proptest! {
        #[test]
        fn fundamental_formula(w in word()) {
            // w - 1 = Σ_k (∂w/∂x_k)(x_k - 1)
            let mut rhs = FreeGroupRingElement::zero();
            for k in 0..3 {
                let xk = FreeGroupRingElement::word(&[k as i32 + 1]).add(&FreeGroupRingElement::word(&[]).scale(-1));
                rhs = rhs.add(&fox_derivative(&w, k).mul(&xk));
            }
            let lhs = FreeGroupRingElement::word(&w).add(&FreeGroupRingElement::word(&[]).scale(-1));
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn product_rule(u in word(), v in word(), k in 0usize..3) {
            let mut uv = u.clone();
            uv.extend_from_slice(&v);
            let rhs = fox_derivative(&u, k).add(&FreeGroupRingElement::word(&u).mul(&fox_derivative(&v, k)));
            prop_assert_eq!(fox_derivative(&uv, k), rhs);
        }
    }
}
