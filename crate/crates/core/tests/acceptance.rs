use std::io::Write;
use std::time::{Duration, Instant};

use tavforge::groups::{
    central_extension, classify_catalog, construct_group, decomposition_check, isomorphic, FiniteGroup, GroupSpec, BUNDLED_CATALOG,
};
use tavforge::homsearch::{enumerate_homs, EpiSearchConfig, GroupHom};
use tavforge::knots::{braid_closure_presentation, braid_power, bundled_table, parse_braid};
use tavforge::poly::{cyclotomic, Verdict, VerdictPolicy, ZPoly};
use tavforge::tavorder::{
    crossing_stat, evaluate_group, pqr_program, tav_check, tav_order, EngineConfig, KnotData, TavOrder, TavQuery,
};
use tavforge::twisted::{
    classical_alexander, extension_formula_check, fox_identity_holds, quotient_divisibility_check, twisted_alexander,
    twisted_vanishing, two_bridge_s4_scan, Representation, TwistedSetup,
};

const TAV_ORDERS: [usize; 35] = [
    24, 30, 42, 48, 60, 66, 70, 72, 78, 84, 90, 96, 102, 110, 114, 120, 126, 130, 132, 138, 140, 144, 150, 154, 156, 160, 168, 170,
    174, 180, 182, 186, 190, 192, 198,
];

const LIMIT_CATALOG: Duration = Duration::from_secs(10);
const LIMIT_NINE: Duration = Duration::from_secs(60);
const LIMIT_FIBERED: Duration = Duration::from_secs(300);
const LIMIT_TWO_BRIDGE: Duration = Duration::from_secs(600);
const LIMIT_EXTENSION: Duration = Duration::from_secs(300);
const LIMIT_DECOMPOSITION: Duration = Duration::from_secs(1);
const LIMIT_SATELLITE: Duration = Duration::from_secs(1800);
const LIMIT_PQR: Duration = Duration::from_secs(60);
const LIMIT_QUOTIENT: Duration = Duration::from_secs(60);
const LIMIT_PROPERTIES: Duration = Duration::from_secs(300);
/// Primes per modular identity in the formula checks.
const IDENTITY_PRIMES: usize = 2;

/// Writes past the test harness capture so every run shows the line.
fn report(n: u32, name: &str, pass: bool, detail: String) {
    let tag = if pass { "PASS" } else { "FAIL" };
    let mut out = std::io::stdout().lock();
    writeln!(out, "[acceptance] {tag} criterion {n:>2} {name}: {detail}").unwrap();
    out.flush().unwrap();
    assert!(pass, "criterion {n} ({name}) failed: {detail}");
}

fn group(spec: GroupSpec) -> FiniteGroup {
    construct_group(&spec).unwrap()
}

fn knot(name: &str) -> KnotData {
    KnotData::from_entry(bundled_table().get(name).unwrap()).unwrap()
}

fn surjections(name: &str, g: &FiniteGroup) -> Vec<GroupHom> {
    enumerate_homs(&bundled_table().get(name).unwrap().presentation(), g, &EpiSearchConfig::default()).unwrap().require_complete().unwrap().homs
}

#[test]
fn c01_catalog_classification() {
    let t = Instant::now();
    let c = classify_catalog(BUNDLED_CATALOG).unwrap();
    let orders_ok = c.tav_orders() == TAV_ORDERS;
    let only = |order: usize, expect: &FiniteGroup| {
        let gs = &c.tav_by_order[&order];
        gs.len() == 1 && isomorphic(&gs[0].group, expect).unwrap()
    };
    let s4 = only(24, &group(GroupSpec::Symmetric(4)));
    let dic33 = only(132, &group(GroupSpec::Dicyclic(33)));
    let d15 = only(30, &group(GroupSpec::Dihedral(15)));
    let el = t.elapsed();
    report(
        1,
        "catalog classification",
        orders_ok && s4 && dic33 && d15 && c.errors.is_empty() && el < LIMIT_CATALOG,
        format!("{} TAV orders, list match {orders_ok}, S4 {s4}, Dic33 {dic33}, D15 {d15}, {} errors, {el:.2?}", c.tav_orders().len(), c.errors.len()),
    );
}

#[test]
fn c02_nine_35_and_nine_46() {
    let t = Instant::now();
    let c = classify_catalog(BUNDLED_CATALOG).unwrap();
    let mut details = Vec::new();
    let mut pass = true;
    for name in ["9_46", "9_35"] {
        let q = TavQuery { knot: knot(name), catalog: &c, order_bound: 24, config: EngineConfig::default() };
        let r = tav_order(&q).unwrap();
        let witness_s4 = !r.witnesses.is_empty() && r.witnesses.iter().all(|w| w.group == "24.12/S4");
        pass &= r.tav_order == TavOrder::Finite(24) && witness_s4;
        details.push(format!("O({name}) = {} with {} witness(es)", r.tav_order, r.witnesses.len()));
    }
    let el = t.elapsed();
    report(2, "O(9_46) = O(9_35) = 24", pass && el < LIMIT_NINE, format!("{}, {el:.2?}", details.join("; ")));
}

#[test]
fn c03_fibered_gate() {
    let t = Instant::now();
    let c = classify_catalog(BUNDLED_CATALOG).unwrap();
    let cfg = EngineConfig { stop_at_first_witness: false, ..EngineConfig::default() };
    let (mut epis, mut bad) = (0, 0);
    for name in ["3_1", "4_1", "5_1"] {
        let k = knot(name);
        for cg in c.tav_by_order.range(..=48).flat_map(|(_, gs)| gs) {
            let out = evaluate_group(&k, &cg.group, &cg.name, &cfg).unwrap();
            epis += out.epimorphisms;
            bad += out.entries.iter().filter(|e| !matches!(e.verdict, Some(Verdict::NonvanishingCertified { .. }))).count();
        }
    }
    let el = t.elapsed();
    report(3, "fibered gate", bad == 0 && el < LIMIT_FIBERED, format!("{epis} surjections, {bad} without certificate, {el:.2?}"));
}

#[test]
fn c04_two_bridge_s4() {
    let t = Instant::now();
    let r = two_bridge_s4_scan(45, &VerdictPolicy::default()).unwrap();
    let epis: usize = r.rows.iter().map(|x| x.epimorphisms).sum();
    let certified = r.rows.iter().flat_map(|x| &x.verdicts).all(|v| matches!(v, Verdict::NonvanishingCertified { .. }));
    let el = t.elapsed();
    report(
        4,
        "two-bridge knots onto S4",
        r.vanishing == 0 && r.undecided == 0 && r.mod2_zero == 0 && certified && el < LIMIT_TWO_BRIDGE,
        format!(
            "{} knots, {} with S4 quotients, {epis} surjections, {} vanishing, {} mod-2 zero, {el:.2?}",
            r.knots_scanned,
            r.rows.len(),
            r.vanishing,
            r.mod2_zero
        ),
    );
}

#[test]
fn c05_extension_formula() {
    let t = Instant::now();
    let policy = VerdictPolicy { primes: IDENTITY_PRIMES, seed: 5, ..VerdictPolicy::default() };
    let s3 = group(GroupSpec::Symmetric(3));
    let d5 = group(GroupSpec::Dihedral(5));
    let cases = [("3_1", &s3, "S3", 2), ("3_1", &s3, "S3", 3), ("6_1", &s3, "S3", 2), ("4_1", &d5, "D5", 2)];
    let mut held = 0;
    let mut lines = Vec::new();
    for (k, g, gname, n) in cases {
        let f = &surjections(k, g)[0];
        let p = bundled_table().get(k).unwrap().presentation();
        let ok = extension_formula_check(&p, f, n, &policy).unwrap();
        held += ok as usize;
        lines.push(format!("({k}, {gname}, n={n}) {ok}"));
    }
    let el = t.elapsed();
    report(
        5,
        "extension product formula",
        held == cases.len() && cases.len() >= 3 && el < LIMIT_EXTENSION,
        format!("{} over {IDENTITY_PRIMES} primes each, {el:.2?}", lines.join(", ")),
    );
}

#[test]
fn c06_decomposition() {
    let t = Instant::now();
    let d3 = group(GroupSpec::Dihedral(3));
    let d15 = group(GroupSpec::Dihedral(15));
    let cases = [(&d3, "D3", 1), (&d3, "D3", 2), (&d3, "D3", 3), (&d15, "D15", 2)];
    let results: Vec<String> =
        cases.iter().map(|&(g, name, n)| format!("({name}, n={n}) {}", decomposition_check(&central_extension(g, n).unwrap()))).collect();
    let pass = results.iter().all(|s| s.ends_with("true"));
    let el = t.elapsed();
    report(6, "decomposition character identity", pass && el < LIMIT_DECOMPOSITION, format!("{}, {el:.2?}", results.join(", ")));
}

#[test]
fn c07_satellite_program() {
    let t = Instant::now();
    let c = classify_catalog(BUNDLED_CATALOG).unwrap();
    let r = pqr_program((2, 3, 5, 2, 4), bundled_table(), &c, &EngineConfig::default()).unwrap();
    let oracle = !r.oracle.is_empty() && r.oracle.iter().all(|o| o.vanishing);
    let lower: Vec<String> = r.lower.iter().map(|o| format!("{} vanishing {}", o.group, o.vanishing)).collect();
    let s4_only = r.lower.len() == 1 && r.lower[0].group == "24.12/S4" && !r.lower[0].vanishing;
    let el = t.elapsed();
    report(
        7,
        "satellite program for K_2_3_5",
        r.direct.vanishing && oracle && r.agree && s4_only && r.tav_order == Some(30) && el < LIMIT_SATELLITE,
        format!(
            "direct D15 vanishing {}, oracle vanishing on {}/{} surjections, agree {}, lower [{}], O = {:?}, {el:.2?}",
            r.direct.vanishing,
            r.oracle.iter().filter(|o| o.vanishing).count(),
            r.oracle.len(),
            r.agree,
            lower.join(", "),
            r.tav_order
        ),
    );
}

#[test]
fn c08_order_273() {
    let t = Instant::now();
    let (p, q, r) = (3, 7, 13);
    let units = |m: usize| (2..m).filter(move |&x| (1..p).all(|i| x.pow(i as u32) % m != 1) && x.pow(p as u32) % m == 1);
    let groups: Vec<(usize, usize, FiniteGroup)> = units(q)
        .flat_map(|a| units(r).map(move |b| (a, b)))
        .map(|(a, b)| (a, b, group(GroupSpec::Pqr { p, q, r, a, b })))
        .collect();
    let mut classes: Vec<&FiniteGroup> = Vec::new();
    for (_, _, g) in &groups {
        if !classes.iter().any(|h| isomorphic(g, h).unwrap()) {
            classes.push(g);
        }
    }
    let el = t.elapsed();
    report(
        8,
        "G(273) classes",
        groups.len() == 4 && classes.len() == p - 1 && el < LIMIT_PQR,
        format!("{} parameter pairs, {} isomorphism classes (p - 1 = {}), {el:.2?}", groups.len(), classes.len(), p - 1),
    );
}

#[test]
fn c09_quotient_divisibility() {
    let t = Instant::now();
    let s3 = group(GroupSpec::Symmetric(3));
    let a3: Vec<usize> = s3.elements().filter(|&x| s3.element_order(x) != 2).collect();
    let s4 = group(GroupSpec::Symmetric(4));
    let v4: Vec<usize> = s4.elements().filter(|&x| s4.element_order(x) <= 2 && s4.conjugacy_class(x).len() <= 3).collect();
    let cases = [("3_1", &s3, &a3, "S3/A3"), ("6_1", &s3, &a3, "S3/A3"), ("9_46", &s4, &v4, "S4/V4")];
    let mut lines = Vec::new();
    let mut pass = v4.len() == 4 && a3.len() == 3;
    for (k, g, n, label) in cases {
        let p = bundled_table().get(k).unwrap().presentation();
        let f = &surjections(k, g)[0];
        let ok = quotient_divisibility_check(&p, f, n, 9).unwrap();
        pass &= ok;
        lines.push(format!("({k}, {label}) {ok}"));
    }
    let el = t.elapsed();
    report(9, "quotient divisibility", pass && el < LIMIT_QUOTIENT, format!("{}, {el:.2?}", lines.join(", ")));
}

#[test]
#[ignore = "hours of computation"]
fn c10_slow_suite() {
    let t = Instant::now();
    let c = classify_catalog(BUNDLED_CATALOG).unwrap();
    let table = bundled_table();
    let order = |name: &str, bound| tav_order(&TavQuery { knot: knot(name), catalog: &c, order_bound: bound, config: EngineConfig::default() }).unwrap();
    let o815 = order("8_15", 120);
    let o74 = order("7_4", 168);
    let mut knots: Vec<_> = table.entries.iter().filter(|e| e.infect.is_none() && e.name.starts_with(|c: char| c.is_ascii_digit())).collect();
    knots.sort_by_key(|e| e.crossings);
    let stat = |label: &str| {
        let cg = c.tav_by_order.values().flatten().find(|g| g.name.ends_with(&format!("/{label}"))).unwrap();
        let mut witnesses = Vec::new();
        let mut first = None;
        for e in &knots {
            if first.is_some_and(|c| e.crossings > c) {
                break;
            }
            let r = tav_check(&KnotData::from_entry(e).unwrap(), &cg.group, &cg.name, &EngineConfig::default()).unwrap();
            if r.is_tav_group {
                first.get_or_insert(e.crossings);
            }
            witnesses.extend(r.witness_pairs());
        }
        crossing_stat(&cg.name, table, &witnesses).ok()
    };
    let c_s4 = stat("S4");
    let c_gl = stat("PSL(3,2)");
    let el = t.elapsed();
    report(
        10,
        "slow suite",
        o815.tav_order == TavOrder::Finite(120) && o74.tav_order == TavOrder::Finite(168) && c_s4 == Some(9) && c_gl == Some(7),
        format!("O(8_15) = {}, O(7_4) = {}, c(S4) = {c_s4:?}, c(GL3(F2)) = {c_gl:?}, {el:.2?}", o815.tav_order, o74.tav_order),
    );
}

#[test]
fn c11_property_suite() {
    let t = Instant::now();
    let table = bundled_table();
    let s3 = group(GroupSpec::Symmetric(3));
    let d5 = group(GroupSpec::Dihedral(5));
    let policy = VerdictPolicy::default();

    // Fox identity on every Wada matrix built here, at several points
    let mut fox = 0;
    let mut fox_ok = true;
    let mut deletion_ok = true;
    for e in table.entries.iter().filter(|e| e.crossings <= 8) {
        let p = e.presentation();
        for g in [&s3, &d5] {
            for f in enumerate_homs(&p, g, &EpiSearchConfig::default()).unwrap().homs {
                let setup = TwistedSetup::with_default_deletion(p.clone(), f, Representation::Regular).unwrap();
                fox_ok &= (0..3).all(|s| fox_identity_holds(&setup, 17 + s).unwrap());
                fox += 1;
                let a = twisted_vanishing(&setup, &policy).unwrap().is_vanishing();
                let last = setup.with_deleted(p.generator_count - 1).unwrap();
                deletion_ok &= a.is_some() && a == twisted_vanishing(&last, &policy).unwrap().is_vanishing();
            }
        }
    }

    let cyclo_ok = (1..=200u64).all(|n| {
        let prod = (1..=n).filter(|d| n % d == 0).fold(ZPoly::one(), |acc, d| &acc * &cyclotomic(d));
        prod == &ZPoly::monomial(1.into(), n as i64) - &ZPoly::one()
    });

    let infection_pairs = [("K_2_3_5", "T2_15"), ("K_2_3_7", "T2_21"), ("4_1^3_1", "4_1")];
    let infection_ok = infection_pairs.iter().all(|(k, b)| {
        classical_alexander(&table.get(k).unwrap().presentation()).unwrap() == classical_alexander(&table.get(b).unwrap().presentation()).unwrap()
    });

    let b = parse_braid("s=2: 1 1 1").unwrap();
    let p = braid_closure_presentation(&b).unwrap();
    let pk = braid_closure_presentation(&braid_power(&b, 3)).unwrap();
    let mut braid_ok = true;
    for f in enumerate_homs(&p, &s3, &EpiSearchConfig::default()).unwrap().homs {
        let fk = GroupHom::new(&pk, s3.clone(), f.images.clone()).unwrap();
        let d = twisted_alexander(&TwistedSetup::new(p.clone(), f, Representation::Regular, 0).unwrap(), 1).unwrap();
        let dk = twisted_alexander(&TwistedSetup::new(pk.clone(), fk, Representation::Regular, 0).unwrap(), 1).unwrap();
        braid_ok &= !d.numerator.is_zero() && dk.numerator.div_exact(&d.numerator).unwrap().is_some();
    }

    let el = t.elapsed();
    report(
        11,
        "property suite",
        fox_ok && deletion_ok && cyclo_ok && infection_ok && braid_ok && el < LIMIT_PROPERTIES,
        format!(
            "Fox identity {fox_ok} on {fox} matrices, deletion independence {deletion_ok}, cyclotomic products {cyclo_ok}, infection preserves Δ {infection_ok}, braid-power divisibility {braid_ok}, {el:.2?}"
        ),
    );
}
