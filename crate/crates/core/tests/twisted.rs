use std::collections::HashMap;

use tavforge::groups::{construct_group, GroupSpec};
use tavforge::homsearch::{enumerate_homs, EpiSearchConfig, GroupHom};
use tavforge::knots::{braid_closure_presentation, braid_power, bundled_table, parse_braid};
use tavforge::poly::{VerdictPolicy, ZPoly};
use tavforge::twisted::{classical_alexander, twisted_alexander, cyclic_formula_check, fox_identity_holds, twisted_vanishing, wada_matrix, Representation, TwistedSetup};

fn fixture() -> HashMap<String, ZPoly> {
    include_str!("data/alexander.txt")
        .lines()
        .map(|l| {
            let mut it = l.split_whitespace();
            let name = it.next().unwrap().to_string();
            let c: Vec<i64> = it.map(|x| x.parse().unwrap()).collect();
            (name, ZPoly::from_i64(0, &c).normalized())
        })
        .collect()
}

#[test]
fn wirtinger_alexander_matches_fixture() {
    let fx = fixture();
    let table = bundled_table();
    let mut checked = 0;
    for e in &table.entries {
        let Some(expect) = fx.get(&e.name) else { continue };
        let d = classical_alexander(&e.presentation()).unwrap();
        assert_eq!(&d, expect, "{}", e.name);
        let at_one: num_bigint::BigInt = d.coeffs().iter().sum();
        assert_eq!(at_one.magnitude(), &1u32.into(), "{}", e.name);
        checked += 1;
    }
    assert_eq!(checked, fx.len());
}

#[test]
fn two_bridge_and_braid_presentations_agree() {
    for e in bundled_table().entries.iter().filter(|e| e.crossings <= 8) {
        let d = classical_alexander(&e.presentation()).unwrap();
        if let Some(tb) = e.two_bridge {
            let p = tavforge::knots::two_bridge_presentation(&tb).unwrap();
            assert_eq!(classical_alexander(&p).unwrap(), d, "{}", e.name);
        }
        if let Some(b) = &e.braid {
            let pd = tavforge::knots::closure_pd(b).unwrap();
            let p = tavforge::knots::wirtinger(&pd).unwrap();
            assert_eq!(classical_alexander(&p).unwrap(), d, "{}", e.name);
            let p = braid_closure_presentation(b).unwrap();
            assert_eq!(classical_alexander(&p).unwrap(), d, "{}", e.name);
        }
    }
}

#[test]
fn nine_46_vanishes_for_s4() {
    let e = bundled_table().get("9_46").unwrap();
    let p = e.presentation();
    let s4 = construct_group(&GroupSpec::Symmetric(4)).unwrap();
    let homs = enumerate_homs(&p, &s4, &EpiSearchConfig::default()).unwrap().homs;
    assert!(!homs.is_empty());
    let mut vanishing = 0;
    for f in homs {
        let setup = TwistedSetup::new(p.clone(), f, Representation::Regular, 0).unwrap();
        let m = wada_matrix(&setup).unwrap();
        assert_eq!(m.size(), 192);
        assert!(m.row_spans().iter().all(|&(lo, hi)| hi - lo <= 1));
        let v = twisted_vanishing(&setup, &VerdictPolicy::default()).unwrap().is_vanishing().unwrap();
        vanishing += v as usize;
        // column deletion independence
        let other = setup.with_deleted(p.generator_count - 1).unwrap();
        assert_eq!(twisted_vanishing(&other, &VerdictPolicy::default()).unwrap().is_vanishing(), Some(v));
    }
    assert!(vanishing > 0);
}

#[test]
fn deletion_independence_nonvanishing() {
    let s3 = construct_group(&GroupSpec::Symmetric(3)).unwrap();
    for name in ["3_1", "6_1", "7_4", "8_5"] {
        let p = bundled_table().get(name).unwrap().presentation();
        for f in enumerate_homs(&p, &s3, &EpiSearchConfig::default()).unwrap().homs {
            for j in [0, p.generator_count - 1] {
                let s = TwistedSetup::new(p.clone(), f.clone(), Representation::Regular, j).unwrap();
                assert!(fox_identity_holds(&s, 7).unwrap());
                assert_eq!(twisted_vanishing(&s, &VerdictPolicy::default()).unwrap().is_vanishing(), Some(false), "{name}");
            }
        }
    }
}

#[test]
fn fox_identity_for_table_knots() {
    let d5 = construct_group(&GroupSpec::Dihedral(5)).unwrap();
    let s3 = construct_group(&GroupSpec::Symmetric(3)).unwrap();
    for e in bundled_table().entries.iter().filter(|e| e.crossings <= 9) {
        let p = e.presentation();
        for g in [&s3, &d5] {
            for f in enumerate_homs(&p, g, &EpiSearchConfig::default()).unwrap().homs {
                let s = TwistedSetup::new(p.clone(), f, Representation::Regular, 0).unwrap();
                assert!(fox_identity_holds(&s, 11).unwrap(), "{}", e.name);
            }
        }
    }
}

#[test]
fn cyclic_formula_regression() {
    let policy = VerdictPolicy::default();
    for e in bundled_table().entries.iter().filter(|e| e.crossings <= 7) {
        let p = e.presentation();
        for n in 1..=4 {
            assert!(cyclic_formula_check(&p, n, &policy).unwrap(), "{} n = {n}", e.name);
        }
    }
}

#[test]
fn braid_power_divisibility() {
    // the closure of b^k maps onto the closure of b by the identity on
    // strand generators, so the same images define ρ∘f∘p_k
    for (braid, spec, k) in [("s=2: 1 1 1", GroupSpec::Symmetric(3), 3), ("s=3: 1 -2 1 -2", GroupSpec::Dihedral(5), 2)] {
        let b = parse_braid(braid).unwrap();
        let p = braid_closure_presentation(&b).unwrap();
        let pk = braid_closure_presentation(&braid_power(&b, k)).unwrap();
        let g = construct_group(&spec).unwrap();
        let homs = enumerate_homs(&p, &g, &EpiSearchConfig::default()).unwrap().homs;
        assert!(!homs.is_empty(), "{braid}");
        for f in homs {
            let fk = GroupHom::new(&pk, g.clone(), f.images.clone()).unwrap();
            let base = TwistedSetup::new(p.clone(), f, Representation::Regular, 0).unwrap();
            let power = TwistedSetup::new(pk.clone(), fk, Representation::Regular, 0).unwrap();
            let d = twisted_alexander(&base, 3).unwrap();
            let dk = twisted_alexander(&power, 3).unwrap();
            assert_eq!(d.denominator, dk.denominator);
            assert!(!d.numerator.is_zero());
            assert!(dk.numerator.div_exact(&d.numerator).unwrap().is_some(), "{braid}: {} ∤ {}", d.numerator, dk.numerator);
        }
    }
}
