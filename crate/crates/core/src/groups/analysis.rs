use serde::Serialize;

use super::FiniteGroup;
use crate::poly::modp::prime_factors;

/// Structural data driving the TAV and seed predicates.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GroupAnalysis {
    pub order: usize,
    /// Sorted element indices of the commutator subgroup.
    pub derived: Vec<usize>,
    /// Invariant factors `d_1 | d_2 | ...` of `G/G'`, each `> 1`.
    pub abelianization: Vec<u64>,
    pub center: Vec<usize>,
    pub weight_one: bool,
    /// `|G'|` is a prime power, counting `|G'| = 1`.
    pub derived_is_p_group: bool,
    pub derived_prime: Option<u64>,
    pub is_tav: bool,
    /// Weight one, and no nontrivial central cyclic subgroup meets `G'` trivially.
    pub is_seed: bool,
}

pub fn analyze(g: &FiniteGroup) -> GroupAnalysis {
    let comms: Vec<usize> = g
        .generators()
        .iter()
        .flat_map(|&a| g.generators().iter().map(move |&b| (a, b)))
        .map(|(a, b)| g.commutator(a, b))
        .collect();
    let derived = g.normal_closure(&comms);
    let abelianization = abelian_invariants_of_quotient(g, &derived);
    let center = g.center();
    let weight_one = abelianization.len() <= 1;
    let primes = prime_factors(derived.len() as u64);
    let derived_is_p_group = primes.len() <= 1;
    let derived_prime = if primes.len() == 1 { Some(primes[0]) } else { None };
    let mut in_derived = vec![false; g.order()];
    derived.iter().for_each(|&x| in_derived[x] = true);
    let splits_off = center.iter().any(|&z| {
        let o = g.element_order(z) as u64;
        o > 1 && prime_factors(o) == vec![o] && !in_derived[z]
    });
    GroupAnalysis {
        order: g.order(),
        derived,
        abelianization,
        center,
        weight_one,
        derived_is_p_group,
        derived_prime,
        is_tav: weight_one && !derived_is_p_group,
        is_seed: weight_one && !splits_off,
    }
}

fn abelian_invariants_of_quotient(g: &FiniteGroup, normal: &[usize]) -> Vec<u64> {
    let (q, _) = g.quotient(normal).expect("derived subgroup is normal");
    abelian_invariants(&q)
}

/// Invariant factors of an abelian group, ascending.
pub(crate) fn abelian_invariants(q: &FiniteGroup) -> Vec<u64> {
    let m = q.order() as u64;
    let orders: Vec<u64> = q.elements().map(|x| q.element_order(x) as u64).collect();
    // per prime, the exponents e_i of the p-primary part, descending
    let mut primary: Vec<(u64, Vec<u32>)> = Vec::new();
    for p in prime_factors(m) {
        let mut counts = vec![1u64];
        let mut pk = 1u64;
        loop {
            pk *= p;
            let c = orders.iter().filter(|&&o| pk.is_multiple_of(o)).count() as u64;
            counts.push(c);
            if c == *counts.iter().rev().nth(1).unwrap() {
                counts.pop();
                break;
            }
        }
        // r_k = number of cyclic factors with exponent >= k
        let r: Vec<u32> = counts.windows(2).map(|w| (w[1] / w[0]).ilog(p)).collect();
        let mut exps = Vec::new();
        for (k, &rk) in r.iter().enumerate() {
            let next = r.get(k + 1).copied().unwrap_or(0);
            exps.extend(std::iter::repeat_n(k as u32 + 1, (rk - next) as usize));
        }
        exps.sort_unstable_by(|a, b| b.cmp(a));
        primary.push((p, exps));
    }
    let len = primary.iter().map(|(_, e)| e.len()).max().unwrap_or(0);
    let mut out: Vec<u64> = (0..len)
        .map(|i| primary.iter().map(|(p, e)| e.get(i).map_or(1, |&k| p.pow(k))).product())
        .collect();
    out.reverse();
    out
}
