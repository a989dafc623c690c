use proptest::prelude::*;
use tavforge::groups::{central_extension, construct_group, decomposition_check, perm_closure, GroupSpec, Perm};
use tavforge::homsearch::{enumerate_homs, EpiSearchConfig, GroupHom};
use tavforge::knots::{braid_closure_presentation, closure_pd, two_bridge_presentation, wirtinger, BraidWord, TwoBridgeSpec};
use tavforge::poly::{cyclotomic, VerdictPolicy, ZPoly};
use tavforge::twisted::{classical_alexander, twisted_vanishing, Representation, TwistedSetup};

fn zpoly() -> impl Strategy<Value = ZPoly> {
    (-4i64..4, prop::collection::vec(-9i64..10, 0..7)).prop_map(|(lo, c)| ZPoly::from_i64(lo, &c))
}

fn perm(n: usize) -> impl Strategy<Value = Perm> {
    Just((0..n as u16).collect::<Vec<_>>()).prop_shuffle().prop_map(Perm)
}

fn two_bridge() -> impl Strategy<Value = TwoBridgeSpec> {
    (1i64..12)
        .prop_map(|k| 2 * k + 1)
        .prop_flat_map(|b| (Just(b), 1..b))
        .prop_filter_map("coprime", |(b, a)| TwoBridgeSpec::new(b, a).ok())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn exact_division_inverts_multiplication(a in zpoly(), b in zpoly()) {
        prop_assume!(!b.is_zero());
        prop_assert_eq!((&a * &b).div_exact(&b).unwrap(), Some(a));
    }

    #[test]
    fn text_roundtrip(a in zpoly()) {
        prop_assert_eq!(ZPoly::parse(&a.to_string()).unwrap(), a);
    }

    #[test]
    fn cyclotomic_products(n in 1u64..=200) {
        let prod = (1..=n).filter(|d| n % d == 0).fold(ZPoly::one(), |acc, d| &acc * &cyclotomic(d));
        prop_assert_eq!(prod, &ZPoly::monomial(1.into(), n as i64) - &ZPoly::one());
    }

    #[test]
    fn permutation_closures_are_groups(gens in prop::collection::vec(perm(5), 1..3), x in 0usize..1000, y in 0usize..1000, z in 0usize..1000) {
        let (g, _) = perm_closure(&gens).unwrap();
        let n = g.order();
        prop_assert_eq!(120 % n, 0);
        let (x, y, z) = (x % n, y % n, z % n);
        prop_assert_eq!(g.mul(g.mul(x, y), z), g.mul(x, g.mul(y, z)));
        prop_assert_eq!(g.mul(x, g.inv(x)), g.identity());
        prop_assert_eq!(n % g.subgroup(&[x]).len(), 0);
    }

    #[test]
    fn surjections_are_homomorphisms(spec in two_bridge(), which in 0usize..3) {
        let g = construct_group(&[GroupSpec::Symmetric(3), GroupSpec::Dihedral(5), GroupSpec::Alternating(4)][which].clone()).unwrap();
        let p = two_bridge_presentation(&spec).unwrap();
        for f in enumerate_homs(&p, &g, &EpiSearchConfig::default()).unwrap().homs {
            prop_assert!(f.is_surjective());
            prop_assert!(GroupHom::new(&p, g.clone(), f.images.clone()).is_ok());
        }
    }

    #[test]
    fn verdicts_independent_of_deletion_and_mode(spec in two_bridge()) {
        let p = two_bridge_presentation(&spec).unwrap();
        let d5 = construct_group(&GroupSpec::Dihedral(5)).unwrap();
        for f in enumerate_homs(&p, &d5, &EpiSearchConfig::default()).unwrap().homs {
            let a = TwistedSetup::new(p.clone(), f, Representation::Regular, 0).unwrap();
            let b = a.with_deleted(1).unwrap();
            let va = twisted_vanishing(&a, &VerdictPolicy::default()).unwrap().is_vanishing();
            prop_assert!(va.is_some());
            prop_assert_eq!(va, twisted_vanishing(&b, &VerdictPolicy::default()).unwrap().is_vanishing());
            prop_assert_eq!(va, twisted_vanishing(&a, &VerdictPolicy::exact()).unwrap().is_vanishing());
        }
    }

    #[test]
    fn braid_presentations_agree(letters in prop::collection::vec(prop_oneof![Just(1), Just(-1), Just(2), Just(-2)], 2..9)) {
        let b = BraidWord::new(3, letters).unwrap();
        prop_assume!(b.closure_components() == 1);
        let direct = classical_alexander(&braid_closure_presentation(&b).unwrap()).unwrap();
        let diagram = classical_alexander(&wirtinger(&closure_pd(&b).unwrap()).unwrap()).unwrap();
        prop_assert_eq!(direct.normalized(), diagram.normalized());
    }

    #[test]
    fn dihedral_extensions_decompose(m in (1usize..8).prop_map(|k| 2 * k + 1), n in 1u64..4) {
        let g = construct_group(&GroupSpec::Dihedral(m)).unwrap();
        prop_assert!(decomposition_check(&central_extension(&g, n).unwrap()));
    }
}
