use num_bigint::BigInt;
use num_integer::Integer;

use super::wada::{denominator, wada_matrix};
use super::{default_deletion, Representation, TwistedError, TwistedSetup};
use crate::groups::{central_extension, construct_group, cyclic_abelianization, regular_representation, CentralExtension, FiniteGroup, GroupSpec, PermRep};
use crate::homsearch::GroupHom;
use crate::knots::GroupPresentation;
use crate::poly::modp::prime_sequence;
use crate::poly::{divides, poly_identity_test_fn, Fp, ImplicitPolyMatrix, VerdictPolicy, ZPoly};

/// Numerator and denominator of the Wada quotient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwistedPolynomial {
    pub numerator: ZPoly,
    pub denominator: ZPoly,
}

impl TwistedPolynomial {
    /// `numerator * h0 / denominator` when the division is exact; with
    /// `h0` the order of the zeroth twisted homology this is the order of
    /// the first.
    pub fn order_with(&self, h0: &ZPoly) -> Result<Option<ZPoly>, TwistedError> {
        let num = &self.numerator * h0;
        Ok(num.div_exact(&self.denominator)?.map(|q| if q.is_zero() { q } else { q.normalized() }))
    }
}

/// Exact numerator (unit-normalised) and denominator of a setup.
pub fn twisted_alexander(setup: &TwistedSetup, seed: u64) -> Result<TwistedPolynomial, TwistedError> {
    let numerator = wada_matrix(setup)?.det_exact(seed)?;
    Ok(TwistedPolynomial { numerator, denominator: denominator(setup)? })
}

fn t_power_minus_one(k: i64) -> ZPoly {
    &ZPoly::monomial(BigInt::from(1), k) - &ZPoly::one()
}

fn trivial_hom(p: &GroupPresentation) -> GroupHom {
    GroupHom { target: FiniteGroup::trivial(), images: vec![0; p.generator_count] }
}

/// The Alexander polynomial from the Wada matrix of the trivial
/// representation: `det A_j · (t - 1) / (t^{φ(x_j)} - 1)`, unit-normalised.
pub fn classical_alexander(p: &GroupPresentation) -> Result<ZPoly, TwistedError> {
    let setup = TwistedSetup::with_default_deletion(p.clone(), trivial_hom(p), Representation::Trivial)?;
    let num = wada_matrix(&setup)?.det_exact(1)?;
    let phi = p.phi[setup.deleted_generator()].abs();
    let q = (&num * &t_power_minus_one(1)).div_exact(&t_power_minus_one(phi))?;
    Ok(q.map(|q| q.normalized()).unwrap_or_else(|| num.normalized()))
}

fn identity_primes(policy: &VerdictPolicy, root_order: u64) -> Result<Vec<u64>, TwistedError> {
    let usable: Vec<u64> = policy.explicit_primes.iter().copied().filter(|p| (p - 1) % root_order == 0).collect();
    if usable.len() >= 2 {
        return Ok(usable);
    }
    Ok(prime_sequence(policy.seed, policy.primes.max(2), root_order)?)
}

/// Tests `det L(t) = Π_{e ∈ powers} det R(ω^e t)` for `ω` a primitive
/// `root_order`-th root of unity, exactly modulo each prime: both sides
/// are brought to polynomials of degree at most `bound` and compared at
/// `bound + 1` points.
fn product_identity(
    lhs: &ImplicitPolyMatrix,
    rhs: &ImplicitPolyMatrix,
    powers: &[u64],
    root_order: u64,
    policy: &VerdictPolicy,
) -> Result<bool, TwistedError> {
    let m = powers.len() as i64;
    let (sl, dl) = (lhs.shift(), lhs.degree_bound() as i64);
    let (sr, dr) = (rhs.shift(), rhs.degree_bound() as i64);
    let s = m * sr - sl;
    let lo = s.min(0);
    let hi = dl.max(s + m * dr);
    let bound = (hi - lo) as u64;
    let norm = -(sl + lo);
    let primes = identity_primes(policy, root_order)?;
    let seed = policy.seed;
    let left = |fp: &Fp, t: u64| Ok(fp.mul(lhs.det_at(fp, t), fp.pow_signed(t, norm)));
    let right = |fp: &Fp, t: u64| {
        let w = fp.root_of_unity(root_order, seed)?;
        let mut acc = fp.pow_signed(t, norm);
        for &e in powers {
            acc = fp.mul(acc, rhs.det_at(fp, fp.mul(fp.pow(w, e), t)));
        }
        Ok(acc)
    };
    Ok(poly_identity_test_fn(left, right, bound, root_order, &primes)?.holds)
}

/// The cyclic closed form `Δ^{ρ∘f}(t) = Π_{j=1}^{n} Δ(α^j t)` for the
/// regular representation of `C_n` and `f` the mod-`n` abelianization,
/// tested on Wada numerators with the same deleted column.
pub fn cyclic_formula_check(p: &GroupPresentation, n: u64, policy: &VerdictPolicy) -> Result<bool, TwistedError> {
    let cn = construct_group(&GroupSpec::Cyclic(n as usize))?;
    let images = p.phi.iter().map(|&x| x.rem_euclid(n as i64) as usize).collect();
    let f = GroupHom::new(p, cn, images)?;
    let j = default_deletion(p).ok_or(TwistedError::DegenerateDeletion(0))?;
    let lhs = wada_matrix(&TwistedSetup::new(p.clone(), f, Representation::Regular, j)?)?;
    let rhs = wada_matrix(&TwistedSetup::new(p.clone(), trivial_hom(p), Representation::Trivial, j)?)?;
    let powers: Vec<u64> = (1..=n).collect();
    product_identity(&lhs, &rhs, &powers, n, policy)
}

/// Lifts `f1` onto the base of `ext` to `f_n(u) = (f1(u), c φ(u) mod kn)`
/// with `c` a unit matching the chosen identification `G/G' ≅ Z/k`.
pub fn lift_epimorphism(p: &GroupPresentation, f1: &GroupHom, ext: &CentralExtension) -> Result<GroupHom, TwistedError> {
    let (k, kn) = (ext.k, ext.k * ext.n);
    let pi = |u: usize| ext.base_pi[f1.images[u]];
    let phi = |u: usize| p.phi[u].rem_euclid(kn as i64) as u64;
    let c = (0..k.max(1))
        .filter(|&c| c.gcd(&k) == 1)
        .find(|&c| (0..p.generator_count).all(|u| (c * phi(u)) % k == pi(u) % k))
        .ok_or(TwistedError::Incompatible)?;
    let c = (0..kn.max(1)).map(|s| c + k * s).find(|c| c.gcd(&kn) == 1).ok_or(TwistedError::Incompatible)?;
    let mut lookup = std::collections::HashMap::new();
    for x in ext.total.elements() {
        lookup.insert((ext.pr[x], ext.abelianization_map[x]), x);
    }
    let images = (0..p.generator_count)
        .map(|u| lookup.get(&(f1.images[u], (c * phi(u)) % kn)).copied().ok_or(TwistedError::Incompatible))
        .collect::<Result<Vec<_>, _>>()?;
    let f = GroupHom::new(p, ext.total.clone(), images)?;
    if !f.is_surjective() {
        return Err(TwistedError::NotSurjective);
    }
    debug_assert!((0..p.generator_count).all(|u| ext.pr[f.images[u]] == f1.images[u]));
    Ok(f)
}

/// The product formula for the central extension `G_{k,n}`:
/// `Δ^{ρ_n∘f_n}(t) = Π_{l<n} Δ^{ρ̃_1∘f_n}(ω^l t)` with `ω` of order `kn`
/// and `ρ̃_1` the regular representation of `G` pulled back along the
/// projection. Compared on Wada numerators with a common deleted column.
pub fn extension_formula_check(p: &GroupPresentation, f1: &GroupHom, n: u64, policy: &VerdictPolicy) -> Result<bool, TwistedError> {
    if !f1.is_surjective() {
        return Err(TwistedError::NotSurjective);
    }
    let ext = central_extension(&f1.target, n)?;
    let fnn = lift_epimorphism(p, f1, &ext)?;
    let reg = regular_representation(&ext.base);
    let pulled = PermRep { degree: reg.degree, images: ext.pr.iter().map(|&z| reg.images[z].clone()).collect() };
    let j = default_deletion(p).ok_or(TwistedError::DegenerateDeletion(0))?;
    let lhs = wada_matrix(&TwistedSetup::new(p.clone(), fnn.clone(), Representation::Regular, j)?)?;
    let rhs = wada_matrix(&TwistedSetup::new(p.clone(), fnn, Representation::Perm(pulled), j)?)?;
    let powers: Vec<u64> = (0..n).collect();
    product_identity(&lhs, &rhs, &powers, ext.k * n, policy)
}

/// Whether the polynomial of the regular representation of `G/H`
/// divides that of `G`. Both sides are orders of first twisted homology,
/// `numerator · (t^k - 1) / denominator` with `k` the order of the
/// abelianization of the acting group.
pub fn quotient_divisibility_check(p: &GroupPresentation, f: &GroupHom, normal: &[usize], seed: u64) -> Result<bool, TwistedError> {
    let g = &f.target;
    if !g.is_normal(normal) {
        return Err(TwistedError::NotNormal);
    }
    if !f.is_surjective() {
        return Err(TwistedError::NotSurjective);
    }
    let (q, _) = g.quotient(normal)?;
    let j = default_deletion(p).ok_or(TwistedError::DegenerateDeletion(0))?;
    let order = |rep: Representation, acting: &FiniteGroup| -> Result<ZPoly, TwistedError> {
        let setup = TwistedSetup::new(p.clone(), f.clone(), rep, j)?;
        let (k, _) = cyclic_abelianization(acting)?;
        let tp = twisted_alexander(&setup, seed)?;
        tp.order_with(&t_power_minus_one(k as i64))?.ok_or(TwistedError::Incompatible)
    };
    let full = order(Representation::Regular, g)?;
    let part = order(Representation::Perm(PermRep::on_cosets(g, normal)?), &q)?;
    if part.is_zero() {
        return Ok(full.is_zero());
    }
    Ok(divides(&part, &full)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homsearch::{enumerate_homs, EpiSearchConfig};
    use crate::knots::{torus_presentation, two_bridge_presentation, unknot_presentation, TwoBridgeSpec};

    fn tb(b: i64, a: i64) -> GroupPresentation {
        two_bridge_presentation(&TwoBridgeSpec::new(b, a).unwrap()).unwrap()
    }

    fn epis(p: &GroupPresentation, g: &FiniteGroup) -> Vec<GroupHom> {
        enumerate_homs(p, g, &EpiSearchConfig::default()).unwrap().homs
    }

    #[test]
    fn alexander_examples() {
        assert_eq!(classical_alexander(&tb(3, 1)).unwrap(), ZPoly::from_i64(0, &[1, -1, 1]));
        assert_eq!(classical_alexander(&tb(9, 7)).unwrap(), ZPoly::from_i64(0, &[2, -5, 2]));
        assert_eq!(classical_alexander(&torus_presentation(3, 5).unwrap()).unwrap(), crate::poly::cyclotomic(15));
        assert_eq!(classical_alexander(&unknot_presentation()).unwrap(), ZPoly::one());
    }

    #[test]
    fn cyclic_formula() {
        let policy = VerdictPolicy::default();
        for n in 1..=4 {
            assert!(cyclic_formula_check(&tb(3, 1), n, &policy).unwrap(), "trefoil n = {n}");
        }
        assert!(cyclic_formula_check(&tb(9, 7), 3, &policy).unwrap());
        assert!(cyclic_formula_check(&torus_presentation(2, 5).unwrap(), 2, &policy).unwrap());
    }

    #[test]
    fn lifts_onto_dicyclic() {
        let s3 = construct_group(&GroupSpec::Symmetric(3)).unwrap();
        let p = tb(3, 1);
        let f1 = epis(&p, &s3).remove(0);
        let ext = central_extension(&s3, 2).unwrap();
        let f2 = lift_epimorphism(&p, &f1, &ext).unwrap();
        assert_eq!(f2.target.order(), 12);
        assert!(crate::groups::isomorphic(&f2.target, &construct_group(&GroupSpec::Dicyclic(3)).unwrap()).unwrap());
        let e1 = central_extension(&s3, 1).unwrap();
        let same = lift_epimorphism(&p, &f1, &e1).unwrap();
        assert_eq!(same.images.iter().map(|&x| e1.pr[x]).collect::<Vec<_>>(), f1.images);
    }

    #[test]
    fn extension_formula() {
        let s3 = construct_group(&GroupSpec::Symmetric(3)).unwrap();
        let p = tb(3, 1);
        let f1 = epis(&p, &s3).remove(0);
        for n in 1..=3 {
            assert!(extension_formula_check(&p, &f1, n, &VerdictPolicy::default()).unwrap(), "n = {n}");
        }
    }

    #[test]
    fn quotient_divisibility() {
        let s3 = construct_group(&GroupSpec::Symmetric(3)).unwrap();
        let p = tb(3, 1);
        let f = epis(&p, &s3).remove(0);
        let a3 = s3.subgroup(&[s3.elements().find(|&x| s3.element_order(x) == 3).unwrap()]);
        assert!(quotient_divisibility_check(&p, &f, &a3, 1).unwrap());
        assert!(quotient_divisibility_check(&p, &f, &[s3.identity()], 1).unwrap());
        let all: Vec<usize> = s3.elements().collect();
        assert!(quotient_divisibility_check(&p, &f, &all, 1).unwrap());
        assert_eq!(quotient_divisibility_check(&p, &f, &[s3.identity(), 1], 1).unwrap_err(), TwistedError::NotNormal);
    }
}
