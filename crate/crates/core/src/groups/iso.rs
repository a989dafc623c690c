use std::collections::BTreeMap;

use super::analysis::analyze;
use super::{FiniteGroup, GroupError, ISO_CAP};

/// Cheap isomorphism invariants: order statistics of elements and
/// conjugacy classes, abelianization, derived length data, center size.
fn fingerprint(g: &FiniteGroup) -> (BTreeMap<(usize, usize), usize>, Vec<u64>, Vec<usize>, usize) {
    let mut classes = BTreeMap::new();
    for c in g.conjugacy_classes() {
        *classes.entry((g.element_order(c[0]), c.len())).or_insert(0) += 1;
    }
    let a = analyze(g);
    let mut series = vec![g.order()];
    let mut current = g.clone();
    loop {
        let d = analyze(&current).derived;
        series.push(d.len());
        if d.len() == current.order() || d.len() == 1 {
            break;
        }
        current = restrict(&current, &d);
    }
    (classes, a.abelianization, series, a.center.len())
}

/// The subgroup on the listed elements as a group in its own right.
pub(crate) fn restrict(g: &FiniteGroup, elems: &[usize]) -> FiniteGroup {
    let mut pos = vec![usize::MAX; g.order()];
    // identity first
    let mut order: Vec<usize> = vec![g.identity()];
    order.extend(elems.iter().copied().filter(|&x| x != g.identity()));
    for (i, &x) in order.iter().enumerate() {
        pos[x] = i;
    }
    FiniteGroup::from_fn(order.len(), format!("subgroup of order {}", order.len()), |a, b| pos[g.mul(order[a], order[b])])
        .expect("closed subset")
}

pub fn isomorphic(g: &FiniteGroup, h: &FiniteGroup) -> Result<bool, GroupError> {
    Ok(find_isomorphism(g, h)?.is_some())
}

/// An isomorphism `g → h` as an element table, if one exists.
pub fn find_isomorphism(g: &FiniteGroup, h: &FiniteGroup) -> Result<Option<Vec<usize>>, GroupError> {
    if g.order() > ISO_CAP || h.order() > ISO_CAP {
        return Err(GroupError::CapExceeded(ISO_CAP));
    }
    if g.order() != h.order() {
        return Ok(None);
    }
    if fingerprint(g) != fingerprint(h) {
        return Ok(None);
    }
    let gens = g.generators().to_vec();
    let class_of = |x: &FiniteGroup| {
        let mut size = vec![0usize; x.order()];
        let mut rep = vec![false; x.order()];
        for c in x.conjugacy_classes() {
            rep[c[0]] = true;
            for &e in &c {
                size[e] = c.len();
            }
        }
        (size, rep)
    };
    let (gsize, _) = class_of(g);
    let (hsize, hrep) = class_of(h);
    let candidates: Vec<Vec<usize>> = gens
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let o = g.element_order(x);
            h.elements()
                .filter(|&y| h.element_order(y) == o && hsize[y] == gsize[x] && (i > 0 || hrep[y]))
                .collect()
        })
        .collect();
    let mut images = Vec::with_capacity(gens.len());
    Ok(search(g, h, &gens, &candidates, &mut images))
}

fn search(g: &FiniteGroup, h: &FiniteGroup, gens: &[usize], cands: &[Vec<usize>], images: &mut Vec<usize>) -> Option<Vec<usize>> {
    let k = images.len();
    if k == gens.len() {
        let map = extend(g, h, gens, images)?;
        return (map.iter().filter(|&&m| m != usize::MAX).count() == g.order()).then_some(map);
    }
    for &y in &cands[k] {
        images.push(y);
        if extend(g, h, &gens[..=k], images).is_some() {
            if let Some(m) = search(g, h, gens, cands, images) {
                return Some(m);
            }
        }
        images.pop();
    }
    None
}

/// Extends `gens[i] ↦ images[i]` over the generated subgroup, failing on
/// any inconsistency or collision.
fn extend(g: &FiniteGroup, h: &FiniteGroup, gens: &[usize], images: &[usize]) -> Option<Vec<usize>> {
    let mut map = vec![usize::MAX; g.order()];
    let mut used = vec![false; h.order()];
    map[g.identity()] = h.identity();
    used[h.identity()] = true;
    let mut queue = vec![g.identity()];
    let mut i = 0;
    while i < queue.len() {
        let x = queue[i];
        i += 1;
        for (s, &gen) in gens.iter().enumerate() {
            let y = g.mul(x, gen);
            let fy = h.mul(map[x], images[s]);
            if map[y] == usize::MAX {
                if used[fy] {
                    return None;
                }
                map[y] = fy;
                used[fy] = true;
                queue.push(y);
            } else if map[y] != fy {
                return None;
            }
        }
    }
    Some(map)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{construct_group, GroupSpec};

    fn build(s: GroupSpec) -> FiniteGroup {
        construct_group(&s).unwrap()
    }

    #[test]
    fn small_cases() {
        let dic3 = build(GroupSpec::Dicyclic(3));
        let a4 = build(GroupSpec::Alternating(4));
        assert!(!isomorphic(&dic3, &a4).unwrap());
        let d15 = build(GroupSpec::Dihedral(15));
        let p = build(GroupSpec::Pqr { p: 2, q: 3, r: 5, a: 2, b: 4 });
        let map = find_isomorphism(&p, &d15).unwrap().unwrap();
        for a in p.elements() {
            for b in p.elements() {
                assert_eq!(map[p.mul(a, b)], d15.mul(map[a], map[b]));
            }
        }
        let s3 = build(GroupSpec::Symmetric(3));
        assert!(isomorphic(&s3, &build(GroupSpec::Dihedral(3))).unwrap());
        let y2 = dic3.pow(6, 2);
        let q = build(GroupSpec::Quotient(Box::new(dic3.clone()), dic3.subgroup(&[y2])));
        assert!(isomorphic(&q, &build(GroupSpec::Dihedral(3))).unwrap());
    }

    #[test]
    fn order_273_classes() {
        // a = 2 has order 3 mod 7, b = 3 has order 3 mod 13
        let g = |a, b| build(GroupSpec::Pqr { p: 3, q: 7, r: 13, a, b });
        assert!(isomorphic(&g(2, 3), &g(4, 9)).unwrap());
        assert!(!isomorphic(&g(2, 3), &g(2, 9)).unwrap());
    }

    #[test]
    fn cap() {
        let big = build(GroupSpec::Cyclic(1001));
        assert_eq!(isomorphic(&big, &big).unwrap_err(), GroupError::CapExceeded(ISO_CAP));
    }
}
