use tavforge::groups::{analyze, central_extension, construct_group, GroupSpec};
use tavforge::homsearch::{enumerate_homs, EpiSearchConfig};
use tavforge::knots::bundled_table;
use tavforge::tavorder::{group_digest, hom_verdict, is_tav_group_of, satellite_spec_for, satellite_vanishing, EngineConfig, KnotData};

#[test]
fn satellite_rule_matches_direct_verdicts() {
    let table = bundled_table();
    let entry = table.get("4_1^3_1").unwrap();
    let knot = KnotData::from_entry(entry).unwrap();
    let cfg = EngineConfig::default();
    let mut checked = 0;
    for spec in [
        GroupSpec::Symmetric(3),
        GroupSpec::Dihedral(5),
        GroupSpec::Alternating(4),
        GroupSpec::Symmetric(4),
        GroupSpec::Dihedral(15),
    ] {
        let g = construct_group(&spec).unwrap();
        let digest = group_digest(&g);
        let homs = enumerate_homs(&knot.presentation, &g, &EpiSearchConfig::default()).unwrap().require_complete().unwrap().homs;
        for f in homs {
            let predicted = satellite_vanishing(&satellite_spec_for(table, &entry.name, &f, &cfg).unwrap()).unwrap();
            let direct = hom_verdict(&knot, &f, &digest, &cfg).unwrap().is_vanishing();
            assert_eq!(direct, Some(predicted.vanishing), "{spec:?} images {:?}", f.images);
            checked += 1;
        }
    }
    assert!(checked > 0);
}

#[test]
fn tav_property_survives_central_extensions() {
    let table = bundled_table();
    let cfg = EngineConfig::default();
    let s4 = construct_group(&GroupSpec::Symmetric(4)).unwrap();
    let ext = central_extension(&s4, 2).unwrap();
    assert!(analyze(&ext.total).is_tav);
    for name in ["9_46", "8_20", "3_1"] {
        let k = KnotData::from_entry(table.get(name).unwrap()).unwrap();
        let (base, _) = is_tav_group_of(&k, &s4, "S4", &cfg).unwrap();
        let (total, _) = is_tav_group_of(&k, &ext.total, "S4 ext", &cfg).unwrap();
        assert_eq!(base, total, "{name}");
    }
}
