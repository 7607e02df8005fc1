use super::*;
use crate::instances::{
    gq22_flag_building, pg2_coordinate_collineation, pg2_flag_building, rank1_building,
};

#[test]
fn thin_hypothesis_is_refused() {
    let b = pg2_flag_building(2).unwrap();
    assert!(matches!(
        verify_theorem1(&b),
        Err(Error::ThicknessTooSmall {
            needed: 4,
            found: 3
        })
    ));
}

#[test]
fn obstruction_is_vacuous_without_thin_panels() {
    let b = pg2_flag_building(3).unwrap();
    let r = verify_thickness3_obstruction(&b);
    assert!(r.passed());
    assert_eq!(r.instances, 0);
}

#[test]
fn obstruction_holds_on_gq22() {
    let b = gq22_flag_building().unwrap();
    let r = verify_thickness3_obstruction(&b);
    assert!(r.passed());
    assert_eq!(r.instances, 90 * 4);
}

#[test]
fn rank_one_adjacent_pairs() {
    let b = rank1_building(4).unwrap();
    let r = verify_adjacent_pairs(&b, &b.apartments());
    assert!(r.passed());
    assert_eq!(r.instances, 6);
}

#[test]
fn corrupted_table_fails_with_replayable_witness() {
    let b = rank1_building(3).unwrap();
    let mut table = Vec::new();
    for c in 0..3 {
        for d in 0..3 {
            table.push(b.delta_id(c, d));
        }
    }
    table[5] = 0;
    let bad = Building::from_delta_table(b.system().clone(), 3, table).unwrap();
    let r = verify_building_axioms(&bad);
    assert!(!r.passed());
    assert!(replay(&bad, Suite::BuildingAxioms, &r.failures[0]).unwrap());
    assert!(!replay(&b, Suite::BuildingAxioms, &r.failures[0]).unwrap());
}

#[test]
fn apartment_maps_on_fano() {
    let b = pg2_flag_building(2).unwrap();
    let aps = b.apartments();
    let identity: Vec<Chamber> = b.chambers().collect();
    assert!(verify_apartment_map(&b, &b, &aps, &aps, &identity)
        .unwrap()
        .passed());
    let phi = pg2_coordinate_collineation(2, [2, 0, 1]).unwrap();
    assert_ne!(phi, identity);
    assert!(verify_apartment_map(&b, &b, &aps, &aps, &phi)
        .unwrap()
        .passed());

    let mut collapse = identity.clone();
    collapse[1] = 0;
    let r = verify_apartment_map(&b, &b, &aps, &aps, &collapse).unwrap();
    assert!(!r.passed());
    let mut both = 0;
    for f in &r.failures {
        let Witness::MappedApartment { apartment, .. } = &f.witness else {
            panic!("{f:?}");
        };
        assert!(apartment.contains(1));
        both += usize::from(apartment.contains(0));
    }
    assert!(both > 0);
    assert!(verify_apartment_map(&b, &b, &aps, &aps, &identity[..5]).is_err());
}

#[test]
fn spherical_and_affine_scans_are_covered() {
    assert!(scan_condition_iv(&CoxeterSystem::a2(), 3, 3)
        .unwrap()
        .passed());
    assert!(scan_condition_iv(&CoxeterSystem::affine_a1(), 5, 5)
        .unwrap()
        .passed());
    assert!(scan_condition_iv(&CoxeterSystem::a2(), 3, 2).is_err());
}

#[test]
fn hyperbolic_triples_replay() {
    let sys = CoxeterSystem::triangle(3, 3, 4);
    let r = scan_condition_iv(&sys, 3, 6).unwrap();
    assert!(!r.passed());
    assert!(r
        .failures
        .iter()
        .all(|f| f.message == "no witness within radius 6"));
    assert!(replay_triple(&sys, 6, &r.failures[0]).unwrap());
}

#[test]
fn report_json_roundtrip() {
    let b = pg2_flag_building(2).unwrap();
    let r = verify_glue_roots(&b);
    let text = r.to_json();
    assert!(text.contains(REPORT_SCHEMA));
    assert!(!text.contains("elapsed"));
    let back = VerificationReport::from_json(&text).unwrap();
    assert_eq!(back.instances, r.instances);
    assert_eq!(back.building, r.building);
    let wrong = text.replace(REPORT_SCHEMA, "chambers.report/v0");
    assert!(VerificationReport::from_json(&wrong).is_err());
}

#[test]
fn realization_failures_replay() {
    let b = pg2_flag_building(3).unwrap();
    let sigma = b.apartments()[0].clone();
    let c = sigma.at(0);
    let d = sigma.at(b.group().longest());
    let f = Failure {
        witness: Witness::Realization {
            host: sigma,
            target: SubComplex::of_chambers(&b, [c, d]),
        },
        message: String::new(),
    };
    assert!(replay(&b, Suite::Theorem1, &f).unwrap());
    assert!(replay(&b, Suite::GlueRoots, &f).is_err());
}

#[test]
fn suite_names_roundtrip() {
    for s in Suite::ALL {
        assert_eq!(s.name().parse::<Suite>().unwrap(), s);
    }
    assert!("nope".parse::<Suite>().is_err());
}
