use super::*;
use crate::instances::{pg2_flag_building, rank1_building};

fn naive_convex(b: &Building, sigma: &Apartment) -> BTreeSet<SubComplex> {
    let roots: Vec<SubComplex> = b.roots_of(sigma).iter().map(|r| r.complex(b)).collect();
    let mut out = BTreeSet::new();
    for mask in 0u32..(1 << roots.len()) {
        let mut cur = sigma.complex(b);
        for (i, r) in roots.iter().enumerate() {
            if mask >> i & 1 == 1 {
                cur = cur.intersect(r);
            }
        }
        out.insert(cur);
    }
    out
}

#[test]
fn convex_subcomplexes_match_naive_enumeration() {
    let b = pg2_flag_building(2).unwrap();
    let sigma = b.apartments()[0].clone();
    let fast: BTreeSet<SubComplex> = convex_subcomplexes(&b, &sigma).into_iter().collect();
    assert_eq!(fast, naive_convex(&b, &sigma));
    assert!(fast.contains(&SubComplex::empty()));
    assert!(fast.contains(&sigma.complex(&b)));
    for c in sigma.chambers() {
        assert!(fast.contains(&SubComplex::of_chambers(&b, [*c])));
    }
    for k in &fast {
        assert!(k.is_face_closed(&b));
        assert!(is_convex_in(&b, &sigma, k));
    }
}

#[test]
fn chamber_subcomplexes_of_fano() {
    let b = pg2_flag_building(2).unwrap();
    for sigma in b.apartments().iter().take(4) {
        for k in convex_subcomplexes(&b, sigma) {
            if k.codimension(&b) != 0 {
                continue;
            }
            let cert = realize_chamber_subcomplex(&b, sigma, &k).unwrap();
            assert_eq!(cert.checked, k);
            cert.validate(&b).unwrap();
        }
    }
}

#[test]
fn realizing_sigma_returns_sigma() {
    let b = pg2_flag_building(2).unwrap();
    let sigma = b.apartments()[5].clone();
    let cert = realize_chamber_subcomplex(&b, &sigma, &sigma.complex(&b)).unwrap();
    assert_eq!(cert.witness, sigma);
}

#[test]
fn root_extension_and_gluing() {
    let b = pg2_flag_building(3).unwrap();
    let sigma = b.apartments()[0].clone();
    let alpha = b.roots_of(&sigma)[0].clone();
    let wall = b.wall_of(&alpha);
    let p = wall.panels[0];
    // The home chamber across P gives back the home apartment.
    let d = sigma
        .chambers_through(&b, &p)
        .into_iter()
        .find(|&c| !alpha.contains(c))
        .unwrap();
    assert_eq!(
        apartment_with_root_and_chamber(&b, &alpha, d).unwrap(),
        sigma
    );
    for &c in b.residue(&p) {
        if alpha.contains(c) {
            assert!(apartment_with_root_and_chamber(&b, &alpha, c).is_err());
            continue;
        }
        let ap = apartment_with_root_and_chamber(&b, &alpha, c).unwrap();
        assert!(ap.contains(c));
        assert!(alpha.chambers().iter().all(|&x| ap.contains(x)));
    }
    assert_eq!(
        glue_roots(&b, &alpha, &alpha).unwrap(),
        GlueOutcome::Refused { panel: p }
    );
    match glue_roots(&b, &alpha, &b.opposite_root(&alpha)).unwrap() {
        GlueOutcome::Glued(ap) => assert_eq!(ap, sigma),
        other => panic!("{other:?}"),
    }
    let other_wall = b
        .roots_of(&sigma)
        .into_iter()
        .find(|r| b.wall_of(r) != wall)
        .unwrap();
    assert!(matches!(
        glue_roots(&b, &alpha, &other_wall),
        Err(Error::WallsDiffer)
    ));
}

#[test]
fn root_family_on_pg23() {
    let b = pg2_flag_building(3).unwrap();
    let sigma = b.apartments()[7].clone();
    for wall in walls_of(&b, &sigma) {
        for p in &wall.panels {
            let family = root_family(&b, p, &wall).unwrap();
            assert_eq!(family.len(), 4);
            for (c, r) in &family {
                assert!(r.contains(*c));
            }
        }
    }
}

#[test]
fn wall_avoidance_on_pg23() {
    let b = pg2_flag_building(3).unwrap();
    let aps = b.apartments();
    for sigma in aps.iter().step_by(37) {
        for other in aps.iter().step_by(23) {
            for wall in walls_of(&b, other) {
                let out = wall_avoiding_apartment(&b, sigma, &wall).unwrap();
                let meet = wall.complex.intersect(&sigma.complex(&b));
                assert_eq!(out.complex(&b).intersect(&sigma.complex(&b)), meet);
                assert!(wall.complex.is_subset(&out.complex(&b)));
            }
        }
    }
}

#[test]
fn wall_avoidance_in_rank_one() {
    let b = rank1_building(5).unwrap();
    let aps = b.apartments();
    for sigma in aps.iter() {
        let wall = walls_of(&b, &aps[0]).pop().unwrap();
        let out = wall_avoiding_apartment(&b, sigma, &wall).unwrap();
        assert!(out.chambers().iter().all(|&c| !sigma.contains(c)));
    }
}

#[test]
fn realization_on_pg23() {
    let b = pg2_flag_building(3).unwrap();
    for sigma in b.apartments().iter().step_by(61) {
        for k in convex_subcomplexes(&b, sigma) {
            let cert = realize_convex_subcomplex(&b, sigma, &k).unwrap();
            assert_eq!(cert.checked, k);
            if k.dimension(&b) < 1 {
                let (m, m2) = wall_pair_representation(&b, sigma, &k).unwrap();
                assert_eq!(m.complex.intersect(&m2.complex), k);
            }
        }
    }
}

#[test]
fn thin_panels_are_rejected() {
    let b = pg2_flag_building(2).unwrap();
    let sigma = b.apartments()[0].clone();
    let err = realize_convex_subcomplex(&b, &sigma, &SubComplex::empty()).unwrap_err();
    assert!(matches!(
        err,
        Error::ThicknessTooSmall {
            needed: 4,
            found: 3
        }
    ));
}

#[test]
fn non_convex_target_is_rejected() {
    let b = pg2_flag_building(3).unwrap();
    let sigma = b.apartments()[0].clone();
    let c = sigma.at(0);
    let d = sigma.at(b.group().longest());
    let k = SubComplex::of_chambers(&b, [c, d]);
    assert!(matches!(
        realize_convex_subcomplex(&b, &sigma, &k),
        Err(Error::Precondition(_))
    ));
}

#[test]
fn adjacent_pairs_in_fano() {
    let b = pg2_flag_building(2).unwrap();
    let aps = b.apartments();
    let d = b.neighbours(0).next().unwrap();
    let r = adjacent_pair_intersection(&b, &aps, 0, d).unwrap();
    assert!(r.equals_pair);
    assert!(r.thick);
    let far = b
        .chambers()
        .find(|&x| b.gallery_distance(0, x) == 2)
        .unwrap();
    assert!(adjacent_pair_intersection(&b, &aps, 0, far).is_err());
}
