use std::collections::HashMap;

use super::pd::PDCode;
use super::KnotError;

/// Where an edge of an infected diagram comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EdgeOrigin {
    /// A piece of this base edge.
    Base(u32),
    /// A pushoff of this companion edge; strand 1 follows the companion
    /// orientation, strand 2 runs against it.
    Companion { edge: u32, strand: u8 },
    /// Inside a doubled companion crossing or a framing twist.
    Internal,
}

#[derive(Clone, Debug)]
pub struct Infection {
    pub pd: PDCode,
    /// Indexed by label - 1.
    pub origin: Vec<EdgeOrigin>,
    /// For every companion edge, the labels of its strand-1 and strand-2
    /// pushoffs; a loop around such a pair is a companion meridian.
    pub companion_pairs: Vec<(u32, u32)>,
}

const RIGHT: u8 = 0;
const LEFT: u8 = 1;

/// Splices the reverse-parallel 2-cable of the companion, cut open at
/// edge `cut`, into the base edges `site = (e1, e2)`. The two site edges
/// must lie on a common face with opposite orientations; `e1` continues
/// as strand 1. The cable is corrected to the 0-framing by `|writhe|`
/// full twists.
pub fn infect(base: &PDCode, site: (u32, u32), companion: &PDCode, cut: u32, framing: i64) -> Result<Infection, KnotError> {
    if framing != 0 {
        return Err(KnotError::FramingUnsupported(framing));
    }
    if base.components() != 1 || companion.components() != 1 {
        return Err(KnotError::MultiComponent(base.components().max(companion.components())));
    }
    let (e1, e2) = site;
    let m = base.edge_count() as u32;
    if e1 == e2 || !(1..=m).contains(&e1) || !(1..=m).contains(&e2) {
        return Err(KnotError::SiteInvalid(format!("edges {e1}, {e2} are not two distinct edges")));
    }
    if !(1..=companion.edge_count() as u32).contains(&cut) {
        return Err(KnotError::SiteInvalid(format!("cut edge {cut} is not a companion edge")));
    }
    let faces = base.faces();
    let side = faces.iter().find_map(|f| {
        let a: Vec<bool> = f.edges.iter().filter(|x| x.0 == e1).map(|x| x.1).collect();
        let b: Vec<bool> = f.edges.iter().filter(|x| x.0 == e2).map(|x| x.1).collect();
        a.iter().find(|&&fa| b.contains(&fa)).copied()
    });
    let Some(e1_forward) = side else {
        return Err(KnotError::SiteInvalid(format!("edges {e1}, {e2} do not bound a common face antiparallel")));
    };
    // the face lies left of e1 exactly when e1 was traversed forward; then
    // strand 2 is on the left and strand 1 is the right pushoff
    let p1 = if e1_forward { RIGHT } else { LEFT };
    let p2 = 1 - p1;

    let mut next = base.edge_count() + 1;
    let mut fresh = || {
        next += 1;
        next - 1
    };
    let mut ext: HashMap<(u32, u8, bool), usize> = HashMap::new();
    let mut origin: HashMap<usize, EdgeOrigin> = HashMap::new();
    let cut_head = companion.head(cut);
    let mut extid = |f: u32, p: u8, at: (usize, usize), fresh: &mut dyn FnMut() -> usize| -> usize {
        let key = (f, p, f == cut && at == cut_head);
        *ext.entry(key).or_insert_with(fresh)
    };

    let mut raw: Vec<[usize; 4]> = Vec::new();
    let t1 = fresh();
    let b2 = fresh();
    let e1_end = extid(cut, p1, companion.tail(cut), &mut fresh);
    let e2_start = extid(cut, p2, companion.tail(cut), &mut fresh);
    origin.insert(t1, EdgeOrigin::Base(e1));
    origin.insert(b2, EdgeOrigin::Base(e2));
    origin.insert(e1_end, EdgeOrigin::Base(e1));
    origin.insert(e2_start, EdgeOrigin::Base(e2));
    for (c, x) in base.crossings().iter().enumerate() {
        let mut y = [0usize; 4];
        for s in 0..4 {
            let l = x[s];
            y[s] = if l == e1 {
                if base.tail(l) == (c, s) {
                    t1
                } else {
                    e1_end
                }
            } else if l == e2 {
                if base.tail(l) == (c, s) {
                    e2_start
                } else {
                    b2
                }
            } else {
                origin.insert(l as usize, EdgeOrigin::Base(l));
                l as usize
            };
        }
        raw.push(y);
    }

    // doubled companion crossings
    for (c, x) in companion.crossings().iter().enumerate() {
        let [a, b, cc, d] = *x;
        let over_east = companion.sign(c) > 0;
        let iv = [fresh(), fresh()];
        let ih = [fresh(), fresh()];
        for &e in iv.iter().chain(&ih) {
            origin.insert(e, EdgeOrigin::Internal);
        }
        for vpos in 0..2 {
            // vpos 0 = west, 1 = east; hpos 0 = south, 1 = north
            let xv = if vpos == 1 { RIGHT } else { LEFT };
            for hpos in 0..2 {
                let yh = if (hpos == 0) == over_east { RIGHT } else { LEFT };
                let s = if hpos == 0 { extid(a, xv, (c, 0), &mut fresh) } else { iv[vpos] };
                let n = if hpos == 1 { extid(cc, xv, (c, 2), &mut fresh) } else { iv[vpos] };
                let w = if vpos == 0 { extid(d, yh, (c, 3), &mut fresh) } else { ih[hpos] };
                let e = if vpos == 1 { extid(b, yh, (c, 1), &mut fresh) } else { ih[hpos] };
                raw.push(if xv == p1 { [s, e, n, w] } else { [n, w, s, e] });
            }
        }
    }

    // framing correction between the base and the start of the cable
    let w = companion.writhe();
    let top1 = extid(cut, p1, cut_head, &mut fresh);
    let top2 = extid(cut, p2, cut_head, &mut fresh);
    let twists = 2 * w.unsigned_abs() as usize;
    let (mut s1, mut s2) = (t1, b2);
    let mut pos = p1;
    for i in 0..twists {
        let (u1, u2) = if i + 1 == twists { (top1, top2) } else { (fresh(), fresh()) };
        if i + 1 < twists {
            origin.insert(u1, EdgeOrigin::Internal);
            origin.insert(u2, EdgeOrigin::Internal);
        }
        let (bl, br) = if pos == LEFT { (s1, s2) } else { (s2, s1) };
        let (tl, tr) = if pos == LEFT { (u2, u1) } else { (u1, u2) };
        // strand at the lower left is over exactly when the writhe is negative
        let a_is_1 = pos == LEFT;
        let under_is_1 = (w > 0) == a_is_1;
        raw.push(match (under_is_1, pos == LEFT) {
            (true, true) => [bl, br, tr, tl],
            (true, false) => [br, tr, tl, bl],
            (false, true) => [tl, bl, br, tr],
            (false, false) => [tr, tl, bl, br],
        });
        (s1, s2) = (u1, u2);
        pos = 1 - pos;
    }
    if twists == 0 {
        for x in raw.iter_mut() {
            for l in x.iter_mut() {
                if *l == t1 {
                    *l = top1;
                } else if *l == b2 {
                    *l = top2;
                }
            }
        }
        origin.insert(top1, EdgeOrigin::Base(e1));
        origin.insert(top2, EdgeOrigin::Base(e2));
    }

    let mut pairs_raw = Vec::new();
    for f in 1..=companion.edge_count() as u32 {
        let at = if f == cut { cut_head } else { (usize::MAX, 0) };
        let a = extid(f, p1, at, &mut fresh);
        let b = extid(f, p2, at, &mut fresh);
        origin.entry(a).or_insert(EdgeOrigin::Companion { edge: f, strand: 1 });
        origin.entry(b).or_insert(EdgeOrigin::Companion { edge: f, strand: 2 });
        pairs_raw.push((a, b));
    }
    for (&(f, p, _), &id) in &ext {
        origin.entry(id).or_insert(EdgeOrigin::Companion { edge: f, strand: if p == p1 { 1 } else { 2 } });
    }

    let (pd, label) = PDCode::from_raw(&raw)?;
    let mut origins = vec![EdgeOrigin::Internal; pd.edge_count()];
    for (id, &l) in &label {
        origins[l as usize - 1] = origin.get(id).copied().unwrap_or(EdgeOrigin::Internal);
    }
    let companion_pairs = pairs_raw.iter().map(|(a, b)| (label[a], label[b])).collect();
    Ok(Infection { pd, origin: origins, companion_pairs })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::knots::{closure_pd, parse_braid, parse_pd};

    fn site_candidates(pd: &PDCode) -> Vec<(u32, u32)> {
        let mut out = Vec::new();
        for f in pd.faces() {
            for &(a, fa) in &f.edges {
                for &(b, fb) in &f.edges {
                    if a != b && fa == fb {
                        out.push((a, b));
                    }
                }
            }
        }
        out
    }

    #[test]
    fn infection_is_a_knot_of_expected_size() {
        let base = parse_pd("X[4,2,5,1] X[8,6,1,5] X[6,3,7,4] X[2,7,3,8]").unwrap();
        let j = closure_pd(&parse_braid("s=2: 1 1 1").unwrap()).unwrap();
        let sites = site_candidates(&base);
        assert!(!sites.is_empty());
        for &s in &sites {
            let inf = infect(&base, s, &j, 1, 0).unwrap();
            assert_eq!(inf.pd.components(), 1);
            // 4 base + 4 per companion crossing + 2 per unit of writhe
            assert_eq!(inf.pd.crossing_count(), 4 + 12 + 6);
            assert_eq!(inf.pd.faces().len(), inf.pd.crossing_count() + 2);
            assert_eq!(inf.companion_pairs.len(), 6);
        }
    }

    #[test]
    fn bad_sites_and_framings() {
        let base = parse_pd("X[1,5,2,4] X[3,1,4,6] X[5,3,6,2]").unwrap();
        let j = base.clone();
        assert_eq!(infect(&base, (1, 2), &j, 1, 1).unwrap_err(), KnotError::FramingUnsupported(1));
        assert!(matches!(infect(&base, (1, 1), &j, 1, 0), Err(KnotError::SiteInvalid(_))));
        assert!(matches!(infect(&base, (1, 9), &j, 1, 0), Err(KnotError::SiteInvalid(_))));
        // consecutive edges are never antiparallel on a face
        assert!(matches!(infect(&base, (1, 2), &j, 1, 0), Err(KnotError::SiteInvalid(_))));
    }
}
