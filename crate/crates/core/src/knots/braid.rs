use std::fmt;

use super::pd::PDCode;
use super::presentation::{free_reduce, letter, GroupPresentation, Word};
use super::KnotError;

/// A braid on `strands` strands; letter `i` is `σ_|i|` with the sign of `i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BraidWord {
    pub strands: usize,
    pub letters: Vec<i32>,
}

impl fmt::Display for BraidWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "s={}:", self.strands)?;
        for l in &self.letters {
            write!(f, " {l}")?;
        }
        Ok(())
    }
}

impl BraidWord {
    pub fn new(strands: usize, letters: Vec<i32>) -> Result<Self, KnotError> {
        if strands < 2 {
            return Err(KnotError::Validation("a braid needs at least 2 strands".into()));
        }
        if let Some(l) = letters.iter().find(|&&l| l == 0 || l.unsigned_abs() as usize >= strands) {
            return Err(KnotError::Validation(format!("letter {l} out of range for {strands} strands")));
        }
        Ok(BraidWord { strands, letters })
    }

    /// Position permutation: strand starting at `i` ends at `perm[i]`.
    pub fn permutation(&self) -> Vec<usize> {
        let mut at: Vec<usize> = (0..self.strands).collect();
        for &l in &self.letters {
            let i = l.unsigned_abs() as usize;
            at.swap(i - 1, i);
        }
        let mut perm = vec![0; self.strands];
        for (pos, &start) in at.iter().enumerate() {
            perm[start] = pos;
        }
        perm
    }

    /// Number of components of the closure.
    pub fn closure_components(&self) -> usize {
        let perm = self.permutation();
        let mut seen = vec![false; self.strands];
        let mut count = 0;
        for i in 0..self.strands {
            if !seen[i] {
                count += 1;
                let mut j = i;
                while !seen[j] {
                    seen[j] = true;
                    j = perm[j];
                }
            }
        }
        count
    }

    pub fn exponent_sum(&self) -> i64 {
        self.letters.iter().map(|l| l.signum() as i64).sum()
    }
}

/// Parses `s=<n>: i1 i2 ...`; letters may be separated by spaces or commas.
pub fn parse_braid(text: &str) -> Result<BraidWord, KnotError> {
    let t = text.trim_start();
    let off = text.len() - t.len();
    let rest = t.strip_prefix("s=").ok_or(KnotError::Parse { pos: off, msg: "expected `s=`".into() })?;
    let colon = rest.find(':').ok_or(KnotError::Parse { pos: text.len(), msg: "expected `:`".into() })?;
    let strands: usize = rest[..colon]
        .trim()
        .parse()
        .map_err(|_| KnotError::Parse { pos: off + 2, msg: "bad strand count".into() })?;
    let body_start = off + 2 + colon + 1;
    let mut letters = Vec::new();
    let body = &text[body_start..];
    let mut pos = 0;
    for tok in body.split(|c: char| c.is_whitespace() || c == ',') {
        if !tok.is_empty() {
            let p = body_start + pos;
            letters.push(tok.parse::<i32>().map_err(|_| KnotError::Parse { pos: p, msg: format!("bad letter `{tok}`") })?);
        }
        pos += tok.len() + 1;
    }
    BraidWord::new(strands, letters)
}

/// The word repeated `k` times.
pub fn braid_power(b: &BraidWord, k: usize) -> BraidWord {
    BraidWord { strands: b.strands, letters: b.letters.repeat(k) }
}

/// The closure group from the Artin action on the free group of the
/// bottom strands: `⟨x_1..x_n | x_j⁻¹ β(x_j)⟩`, the last relator redundant.
/// `σ_i` sends `x_i ↦ x_i x_{i+1} x_i⁻¹`, `x_{i+1} ↦ x_i`.
pub fn braid_closure_presentation(b: &BraidWord) -> Result<GroupPresentation, KnotError> {
    let comps = b.closure_components();
    if comps != 1 {
        return Err(KnotError::MultiComponent(comps));
    }
    let n = b.strands;
    let mut images: Vec<Word> = (0..n).map(|j| vec![letter(j, 1)]).collect();
    for &l in &b.letters {
        let i = l.unsigned_abs() as usize - 1;
        let (a, c) = (letter(i, 1), letter(i + 1, 1));
        let sub: Box<dyn Fn(i32) -> Word> = if l > 0 {
            Box::new(move |x: i32| if x == a { vec![a, c, -a] } else if x == c { vec![a] } else { vec![x] })
        } else {
            Box::new(move |x: i32| if x == a { vec![c] } else if x == c { vec![-c, a, c] } else { vec![x] })
        };
        for w in images.iter_mut() {
            let next: Word = w
                .iter()
                .flat_map(|&x| if x > 0 { sub(x) } else { sub(-x).into_iter().rev().map(|y| -y).collect() })
                .collect();
            *w = free_reduce(&next);
        }
    }
    let relators: Vec<Word> = images
        .iter()
        .enumerate()
        .map(|(j, w)| free_reduce(&[vec![letter(j, -1)], w.clone()].concat()))
        .collect();
    Ok(GroupPresentation { generator_count: n, relators, redundant: vec![n - 1], phi: vec![1; n], meridians: (0..n).collect() })
}

/// PD code of the closure, strands drawn upward; a positive letter puts
/// the strand from the lower left over.
pub fn closure_pd(b: &BraidWord) -> Result<PDCode, KnotError> {
    let comps = b.closure_components();
    if comps != 1 {
        return Err(KnotError::MultiComponent(comps));
    }
    let n = b.strands;
    let mut cur: Vec<usize> = (0..n).collect();
    let mut next = n;
    let mut raw: Vec<[usize; 4]> = Vec::with_capacity(b.letters.len());
    for &l in &b.letters {
        let i = l.unsigned_abs() as usize - 1;
        let (bl, br) = (cur[i], cur[i + 1]);
        let (tl, tr) = (next, next + 1);
        next += 2;
        raw.push(if l > 0 { [br, tr, tl, bl] } else { [bl, br, tr, tl] });
        cur[i] = tl;
        cur[i + 1] = tr;
    }
    // close up: the top end at position i continues as the bottom edge i
    let close: std::collections::HashMap<usize, usize> = cur.iter().enumerate().map(|(i, &top)| (top, i)).collect();
    for x in raw.iter_mut() {
        for l in x.iter_mut() {
            if let Some(&bottom) = close.get(l) {
                *l = bottom;
            }
        }
    }
    Ok(PDCode::from_raw(&raw)?.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_display() {
        let b = parse_braid("s=3: 1 -2 1 -2").unwrap();
        assert_eq!(b.letters, vec![1, -2, 1, -2]);
        assert_eq!(b.to_string(), "s=3: 1 -2 1 -2");
        assert!(matches!(parse_braid("s=2: 1 x"), Err(KnotError::Parse { pos: 7, .. })));
        assert!(matches!(parse_braid("s=2: 2"), Err(KnotError::Validation(_))));
        assert!(matches!(parse_braid("t=2: 1"), Err(KnotError::Parse { pos: 0, .. })));
    }

    #[test]
    fn trefoil_closure() {
        let pd = closure_pd(&parse_braid("s=2: 1 1 1").unwrap()).unwrap();
        assert_eq!(pd.crossing_count(), 3);
        assert_eq!(pd.writhe(), 3);
        assert_eq!(pd.faces().len(), 5);
    }

    #[test]
    fn powers_and_components() {
        let t = parse_braid("s=2: 1 1 1").unwrap();
        assert!(matches!(closure_pd(&braid_power(&t, 2)), Err(KnotError::MultiComponent(2))));
        let b = parse_braid("s=3: 1 2 1 2").unwrap();
        let b2 = braid_power(&b, 2);
        assert_eq!(b2.letters.len(), 8);
        assert_eq!(closure_pd(&b2).unwrap().components(), 1);
    }
}
