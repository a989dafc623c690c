use std::collections::HashMap;
use std::fmt;

use super::KnotError;

/// A planar diagram code: each crossing lists its four edge labels
/// counterclockwise, starting from the incoming under-strand. Labels are
/// `1..=2c`. Orientation, components and faces are derived on
/// construction.
#[derive(Clone, PartialEq, Eq)]
pub struct PDCode {
    crossings: Vec<[u32; 4]>,
    /// Per edge (label - 1): the `(crossing, slot)` it leaves and enters.
    tail: Vec<(usize, usize)>,
    head: Vec<(usize, usize)>,
    components: usize,
}

/// A face of the diagram; edges are listed with the face on the left of
/// the traversal, `forward` telling whether that agrees with the edge
/// orientation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Face {
    pub edges: Vec<(u32, bool)>,
}

impl fmt::Debug for PDCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PDCode({self})")
    }
}

impl fmt::Display for PDCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, x) in self.crossings.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "X[{},{},{},{}]", x[0], x[1], x[2], x[3])?;
        }
        Ok(())
    }
}

struct Dsu(Vec<usize>);

impl Dsu {
    fn new(n: usize) -> Self {
        Dsu((0..n).collect())
    }
    fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }
    fn union(&mut self, a: usize, b: usize) {
        let (a, b) = (self.find(a), self.find(b));
        if a != b {
            self.0[a.max(b)] = a.min(b);
        }
    }
}

impl PDCode {
    pub fn new(crossings: Vec<[u32; 4]>) -> Result<Self, KnotError> {
        if crossings.is_empty() {
            return Err(KnotError::Validation("no crossings; enter the unknot as a presentation".into()));
        }
        let m = 2 * crossings.len();
        let mut occ: Vec<Vec<(usize, usize)>> = vec![Vec::new(); m];
        for (c, x) in crossings.iter().enumerate() {
            for (s, &l) in x.iter().enumerate() {
                if l == 0 || l as usize > m {
                    return Err(KnotError::Validation(format!("label {l} outside 1..={m}")));
                }
                occ[l as usize - 1].push((c, s));
            }
        }
        if let Some(e) = occ.iter().position(|o| o.len() != 2) {
            return Err(KnotError::Validation(format!("label {} occurs {} times", e + 1, occ[e].len())));
        }
        let mut dsu = Dsu::new(crossings.len());
        for o in &occ {
            dsu.union(o[0].0, o[1].0);
        }
        if (0..crossings.len()).any(|c| dsu.find(c) != 0) {
            return Err(KnotError::Validation("diagram is not connected".into()));
        }
        let unset = (usize::MAX, usize::MAX);
        let mut tail = vec![unset; m];
        let mut head = vec![unset; m];
        let mut components = 0;
        let other = |e: usize, o: (usize, usize)| if occ[e][0] == o { occ[e][1] } else { occ[e][0] };
        loop {
            // prefer starting on an incoming under-strand, whose direction is known
            let start = (0..m)
                .filter(|&e| head[e] == unset)
                .find_map(|e| occ[e].iter().find(|o| o.1 == 0).map(|&o| (e, o)))
                .or_else(|| (0..m).find(|&e| head[e] == unset).map(|e| (e, occ[e][0])));
            let Some((e0, h0)) = start else { break };
            components += 1;
            head[e0] = h0;
            tail[e0] = other(e0, h0);
            let mut cur = h0;
            loop {
                if cur.1 == 2 {
                    return Err(KnotError::Validation(format!("crossing {} is entered through slot 3", cur.0 + 1)));
                }
                let out = (cur.0, (cur.1 + 2) % 4);
                let e = crossings[out.0][out.1] as usize - 1;
                if head[e] != unset {
                    if e != e0 || tail[e] != out {
                        return Err(KnotError::Validation(format!("edge {} is traversed inconsistently", e + 1)));
                    }
                    break;
                }
                tail[e] = out;
                head[e] = other(e, out);
                cur = head[e];
            }
        }
        for (c, x) in crossings.iter().enumerate() {
            let in_over = [1, 3].iter().filter(|&&s| head[x[s] as usize - 1] == (c, s)).count();
            if in_over != 1 {
                return Err(KnotError::Validation(format!("over-strand at crossing {} is not oriented through", c + 1)));
            }
        }
        Ok(PDCode { crossings, tail, head, components })
    }

    /// Builds a one-component diagram from crossings with arbitrary edge
    /// ids, relabelling along the orientation starting from the incoming
    /// under-edge of the first crossing. Returns the id-to-label map.
    pub(crate) fn from_raw(raw: &[[usize; 4]]) -> Result<(Self, HashMap<usize, u32>), KnotError> {
        let mut occ: HashMap<usize, Vec<(usize, usize)>> = HashMap::new();
        for (c, x) in raw.iter().enumerate() {
            for (s, &l) in x.iter().enumerate() {
                occ.entry(l).or_default().push((c, s));
            }
        }
        if let Some((l, o)) = occ.iter().find(|(_, o)| o.len() != 2) {
            return Err(KnotError::Validation(format!("edge id {l} occurs {} times", o.len())));
        }
        if raw.is_empty() {
            return Err(KnotError::Validation("no crossings".into()));
        }
        let mut label: HashMap<usize, u32> = HashMap::new();
        let mut cur = (0usize, 0usize);
        let e0 = raw[0][0];
        label.insert(e0, 1);
        loop {
            let out = (cur.0, (cur.1 + 2) % 4);
            let e = raw[out.0][out.1];
            if label.contains_key(&e) {
                break;
            }
            label.insert(e, label.len() as u32 + 1);
            let o = &occ[&e];
            cur = if o[0] == out { o[1] } else { o[0] };
        }
        if label.len() != occ.len() {
            let mut ids: Vec<usize> = occ.keys().copied().collect();
            ids.sort_unstable();
            let any: HashMap<usize, u32> = ids.iter().enumerate().map(|(i, &l)| (l, i as u32 + 1)).collect();
            let pd = PDCode::new(raw.iter().map(|x| x.map(|l| any[&l])).collect())?;
            return Err(KnotError::MultiComponent(pd.components()));
        }
        let crossings = raw.iter().map(|x| x.map(|l| label[&l])).collect();
        Ok((PDCode::new(crossings)?, label))
    }

    pub fn crossings(&self) -> &[[u32; 4]] {
        &self.crossings
    }

    pub fn crossing_count(&self) -> usize {
        self.crossings.len()
    }

    pub fn edge_count(&self) -> usize {
        self.tail.len()
    }

    pub fn components(&self) -> usize {
        self.components
    }

    /// `(crossing, slot)` where the edge starts.
    pub fn tail(&self, label: u32) -> (usize, usize) {
        self.tail[label as usize - 1]
    }

    /// `(crossing, slot)` where the edge ends.
    pub fn head(&self, label: u32) -> (usize, usize) {
        self.head[label as usize - 1]
    }

    /// `+1` when the over-strand enters through slot 4 (right-handed).
    pub fn sign(&self, c: usize) -> i64 {
        if self.head[self.crossings[c][3] as usize - 1] == (c, 3) {
            1
        } else {
            -1
        }
    }

    pub fn writhe(&self) -> i64 {
        (0..self.crossings.len()).map(|c| self.sign(c)).sum()
    }

    /// Wirtinger arcs: the arc index of every edge (by label - 1), arcs
    /// numbered by their smallest label, and the arc count.
    pub fn arcs(&self) -> (Vec<usize>, usize) {
        let m = self.edge_count();
        let mut dsu = Dsu::new(m);
        for x in &self.crossings {
            dsu.union(x[1] as usize - 1, x[3] as usize - 1);
        }
        let mut ids = HashMap::new();
        let arc: Vec<usize> = (0..m)
            .map(|e| {
                let r = dsu.find(e);
                let k = ids.len();
                *ids.entry(r).or_insert(k)
            })
            .collect();
        (arc, ids.len())
    }

    pub fn faces(&self) -> Vec<Face> {
        let n = self.crossings.len();
        let mut seen = vec![false; 4 * n];
        let mut faces = Vec::new();
        for d0 in 0..4 * n {
            if seen[d0] {
                continue;
            }
            let mut edges = Vec::new();
            let mut d = d0;
            while !seen[d] {
                seen[d] = true;
                let (c, s) = (d / 4, d % 4);
                let l = self.crossings[c][s];
                let e = l as usize - 1;
                let forward = self.tail[e] == (c, s);
                let far = if forward { self.head[e] } else { self.tail[e] };
                edges.push((l, forward));
                d = 4 * far.0 + (far.1 + 3) % 4;
            }
            faces.push(Face { edges });
        }
        faces
    }

    /// The mirror image: every crossing switched.
    pub fn mirror(&self) -> PDCode {
        let crossings = (0..self.crossings.len())
            .map(|c| {
                let [a, b, cc, d] = self.crossings[c];
                if self.sign(c) > 0 {
                    [d, a, b, cc]
                } else {
                    [b, cc, d, a]
                }
            })
            .collect();
        PDCode::new(crossings).expect("mirror of a valid diagram")
    }
}

/// Parses `X[a,b,c,d]` tuples separated by whitespace (commas between
/// tuples and an optional `PD[...]` wrapper are accepted).
pub fn parse_pd(text: &str) -> Result<PDCode, KnotError> {
    let bytes = text.as_bytes();
    let mut i = 0;
    let skip = |i: &mut usize| {
        while *i < bytes.len() && (bytes[*i].is_ascii_whitespace() || bytes[*i] == b',') {
            *i += 1;
        }
    };
    let err = |pos: usize, msg: &str| KnotError::Parse { pos, msg: msg.into() };
    skip(&mut i);
    let wrapped = text[i..].starts_with("PD[");
    if wrapped {
        i += 3;
    }
    let mut crossings = Vec::new();
    loop {
        skip(&mut i);
        if i >= bytes.len() || (wrapped && bytes[i] == b']') {
            break;
        }
        if !text[i..].starts_with("X[") {
            return Err(err(i, "expected `X[`"));
        }
        i += 2;
        let mut x = [0u32; 4];
        for (k, slot) in x.iter_mut().enumerate() {
            while i < bytes.len() && bytes[i] == b' ' {
                i += 1;
            }
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            *slot = text[start..i].parse().map_err(|_| err(start, "expected a label"))?;
            while i < bytes.len() && bytes[i] == b' ' {
                i += 1;
            }
            let want = if k == 3 { b']' } else { b',' };
            if i >= bytes.len() || bytes[i] != want {
                return Err(err(i, &format!("expected `{}`", want as char)));
            }
            i += 1;
        }
        crossings.push(x);
    }
    if wrapped {
        if i >= bytes.len() {
            return Err(err(i, "missing `]`"));
        }
        i += 1;
        skip(&mut i);
        if i < bytes.len() {
            return Err(err(i, "trailing input"));
        }
    }
    PDCode::new(crossings)
}
