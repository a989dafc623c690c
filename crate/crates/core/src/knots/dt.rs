use super::pd::PDCode;
use super::KnotError;

/// Largest DT code handled by the exhaustive realisation search.
const DT_CAP: usize = 22;

/// Parses a Dowker-Thistlethwaite code (signed even integers; brackets
/// and commas are ignored) and realises it as a PD code. A negative
/// entry marks an over-crossing at the even passage.
///
/// The cyclic order at each crossing is fixed up to one binary choice;
/// the choices giving a planar rotation system (`c + 2` faces) realise
/// the code. The first crossing's choice is fixed, which selects one of
/// a mirror pair of embeddings.
pub fn parse_dt(text: &str) -> Result<PDCode, KnotError> {
    let mut codes: Vec<i64> = Vec::new();
    let mut pos = 0;
    for tok in text.split(|c: char| c.is_whitespace() || c == ',' || c == '[' || c == ']' || c == '(' || c == ')') {
        if !tok.is_empty() {
            let v: i64 = tok.parse().map_err(|_| KnotError::Parse { pos, msg: format!("bad entry `{tok}`") })?;
            if v == 0 || v % 2 != 0 {
                return Err(KnotError::Parse { pos, msg: format!("entry {v} is not a nonzero even number") });
            }
            codes.push(v);
        }
        pos += tok.len() + 1;
    }
    let n = codes.len();
    if n == 0 {
        return Err(KnotError::Validation("empty DT code".into()));
    }
    if n > DT_CAP {
        return Err(KnotError::Parse { pos: 0, msg: format!("DT codes above {DT_CAP} crossings are not supported") });
    }
    let m = 2 * n;
    let mut evens = vec![false; m + 1];
    for &v in &codes {
        let e = v.unsigned_abs() as usize;
        if e > m || evens[e] {
            return Err(KnotError::Parse { pos: 0, msg: format!("entry {v} repeated or out of range") });
        }
        evens[e] = true;
    }
    // edge k (1..=m) runs from passage k to passage k+1
    let in_edge = |p: usize| if p == 1 { m } else { p - 1 };
    // darts: 2*(edge-1) is the tail end, 2*(edge-1)+1 the head end
    let tail = |e: usize| 2 * (e - 1);
    let head = |e: usize| 2 * (e - 1) + 1;
    let rotation = |c: usize, flip: bool| -> [usize; 4] {
        let o = 2 * c + 1;
        let e = codes[c].unsigned_abs() as usize;
        let (ino, outo, ine, oute) = (head(in_edge(o)), tail(o), head(in_edge(e)), tail(e));
        if flip {
            [ino, oute, outo, ine]
        } else {
            [ino, ine, outo, oute]
        }
    };
    let mut found = None;
    for mask in 0u64..(1u64 << (n - 1)) {
        let mut at = vec![(0usize, 0usize); 2 * m];
        let rots: Vec<[usize; 4]> = (0..n).map(|c| rotation(c, c > 0 && (mask >> (c - 1)) & 1 == 1)).collect();
        for (c, r) in rots.iter().enumerate() {
            for (s, &d) in r.iter().enumerate() {
                at[d] = (c, s);
            }
        }
        let mut seen = vec![false; 2 * m];
        let mut faces = 0;
        for d0 in 0..2 * m {
            if seen[d0] {
                continue;
            }
            faces += 1;
            let mut d = d0;
            while !seen[d] {
                seen[d] = true;
                let (c, s) = at[d ^ 1];
                d = rots[c][(s + 3) % 4];
            }
        }
        if faces == n + 2 {
            found = Some(rots);
            break;
        }
    }
    let rots = found.ok_or(KnotError::Parse { pos: 0, msg: "DT code is not realisable".into() })?;
    let label = |d: usize| (d / 2 + 1) as u32;
    let crossings = rots
        .iter()
        .enumerate()
        .map(|(c, r)| {
            let odd_under = codes[c] < 0;
            let start = if odd_under { 0 } else { r.iter().position(|&d| d == head(in_edge(codes[c].unsigned_abs() as usize))).unwrap() };
            [0, 1, 2, 3].map(|k| label(r[(start + k) % 4]))
        })
        .collect();
    PDCode::new(crossings)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trefoil_and_figure_eight() {
        let t = parse_dt("4 6 2").unwrap();
        assert_eq!(t.crossing_count(), 3);
        assert_eq!(t.writhe().abs(), 3);
        let f = parse_dt("[4, 6, 8, 2]").unwrap();
        assert_eq!(f.writhe(), 0);
        assert_eq!(f.faces().len(), 6);
    }

    #[test]
    fn errors() {
        assert!(matches!(parse_dt("4 5 2"), Err(KnotError::Parse { pos: 2, .. })));
        assert!(matches!(parse_dt(""), Err(KnotError::Validation(_))));
        assert!(matches!(parse_dt("4 4 2"), Err(KnotError::Parse { .. })));
    }
}
