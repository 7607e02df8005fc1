use std::collections::{BTreeMap, VecDeque};

use super::*;
use crate::coxeter::Side;
use crate::instances::{pg2_flag_building, projective_plane, rank1_building};

fn bfs_distances(b: &Building, c: Chamber) -> Vec<usize> {
    let mut dist = vec![usize::MAX; b.chamber_count()];
    dist[c as usize] = 0;
    let mut queue = VecDeque::from([c]);
    while let Some(d) = queue.pop_front() {
        for e in b.neighbours(d) {
            if dist[e as usize] == usize::MAX {
                dist[e as usize] = dist[d as usize] + 1;
                queue.push_back(e);
            }
        }
    }
    dist
}

#[test]
fn rank1_is_valid() {
    let b = rank1_building(4).unwrap();
    assert!(b.validate().is_valid());
    assert_eq!(b.min_thickness(), 4);
    assert_eq!(b.enumerate_apartments().len(), 6);
}

#[test]
fn asymmetric_table_is_caught() {
    let b = rank1_building(3).unwrap();
    let g = b.group();
    let mut table: Vec<ElemId> = Vec::new();
    for c in 0..3 {
        for d in 0..3 {
            table.push(b.delta_id(c, d));
        }
    }
    assert!(
        Building::from_delta_table(b.system().clone(), 3, table.clone())
            .unwrap()
            .validate()
            .is_valid()
    );
    // Break δ(0,1) only.
    table[1] = 0;
    let bad = Building::from_delta_table(b.system().clone(), 3, table).unwrap();
    let v = bad.validate().violation.unwrap();
    assert_eq!(v.chambers, vec![0, 1]);
    assert_eq!(g.order(), 2);
}

#[test]
fn fano_flags() {
    let b = pg2_flag_building(2).unwrap();
    assert_eq!(b.chamber_count(), 21);
    assert!(b.validate().is_valid());
    assert_eq!(b.min_thickness(), 3);
    for c in b.chambers() {
        let dist = bfs_distances(&b, c);
        for d in b.chambers() {
            assert_eq!(b.gallery_distance(c, d), dist[d as usize]);
        }
        assert_eq!(dist.iter().max(), Some(&3));
    }
}

#[test]
fn general_position_flags_are_opposite() {
    let geo = projective_plane(2).unwrap();
    let b = pg2_flag_building(2).unwrap();
    let on = |p: u32, l: u32| geo.incidence.binary_search(&(p, l)).is_ok();
    let flags = &geo.incidence;
    let mut seen = 0;
    for (i, &(p, l)) in flags.iter().enumerate() {
        for (j, &(q, m)) in flags.iter().enumerate() {
            if p != q && l != m && !on(p, m) && !on(q, l) {
                assert_eq!(b.gallery_distance(i as Chamber, j as Chamber), 3);
                seen += 1;
            }
        }
    }
    assert!(seen > 0);
}

#[test]
fn minimal_galleries_are_complete() {
    let b = pg2_flag_building(2).unwrap();
    assert_eq!(b.minimal_galleries(5, 5), vec![vec![5]]);
    for d in b.chambers() {
        let gs = b.minimal_galleries(0, d);
        let len = b.gallery_distance(0, d);
        // Each minimal gallery type is a reduced word of δ; in A₂ the longest
        // element has two reduced words, everything else one.
        let expect = if len == 3 { 2 } else { 1 };
        assert_eq!(gs.len(), expect, "{d}");
        for g in gs {
            assert_eq!(g.len(), len + 1);
            assert!(g.windows(2).all(|w| b.adjacent(w[0], w[1])));
        }
    }
}

#[test]
fn gate_property_on_fano() {
    let b = pg2_flag_building(2).unwrap();
    let g = b.group();
    for p in b.all_panels() {
        for d in b.chambers() {
            let e = b.projection_chamber(&p, d).unwrap();
            assert!(b.contains(&p, e));
            for &c in b.residue(&p) {
                assert_eq!(
                    b.gallery_distance(c, d),
                    b.gallery_distance(c, e) + b.gallery_distance(e, d)
                );
                assert_eq!(b.delta_id(c, d), g.mul(b.delta_id(c, e), b.delta_id(e, d)));
            }
        }
    }
    let c = b.face(7, 0);
    assert_eq!(b.projection_chamber(&b.face(7, 1), 7).unwrap(), 7);
    assert_eq!(b.projection(&b.face(7, 1), &c).unwrap(), c);
}

#[test]
fn simplex_projection_of_vertex() {
    let b = pg2_flag_building(2).unwrap();
    // Projecting a vertex onto a vertex: a chamber or the vertex itself.
    for a in b.all_panels() {
        for x in b.all_panels() {
            let p = b.projection(&a, &x).unwrap();
            assert!(b.is_face(&a, &p));
        }
    }
}

#[test]
fn links_of_vertices() {
    for (q, size) in [(2usize, 3usize), (3, 4)] {
        let b = pg2_flag_building(q).unwrap();
        // Cotype {s1}: the chambers through a point.
        let point = b.face(0, 0b10);
        let link = b.link(&point).unwrap();
        assert_eq!(link.building.chamber_count(), size);
        assert_eq!(link.building.rank(), 1);
        assert!(link.building.validate().is_valid());
    }
    let b = pg2_flag_building(2).unwrap();
    assert!(matches!(b.link(&b.face(0, 0)), Err(Error::ChamberLink)));
}

fn triangle_flags(b: &Building) -> Vec<Chamber> {
    let geo = projective_plane(2).unwrap();
    // Points 0, 1, 2 are (0,0,1), (0,1,0), (0,1,1): collinear. Use 0, 1, 3.
    let pts = [0u32, 1, 3];
    let lines: Vec<u32> = (0..7)
        .filter(|&l| {
            pts.iter()
                .filter(|&&p| geo.incidence.binary_search(&(p, l)).is_ok())
                .count()
                == 2
        })
        .collect();
    assert_eq!(lines.len(), 3);
    let mut out: Vec<Chamber> = geo
        .incidence
        .iter()
        .enumerate()
        .filter(|(_, (p, l))| pts.contains(p) && lines.contains(l))
        .map(|(i, _)| i as Chamber)
        .collect();
    out.sort();
    assert_eq!(out.len(), 6);
    assert!(b.chamber_count() == 21);
    out
}

#[test]
fn triangle_is_an_apartment() {
    let b = pg2_flag_building(2).unwrap();
    let t = triangle_flags(&b);
    let ap = b.is_apartment(&t).unwrap();
    assert_eq!(ap.chambers(), t.as_slice());
    assert!(b.is_apartment(&t[..5]).is_none());
    let rebuilt = b.is_apartment(ap.chambers()).unwrap();
    assert_eq!(rebuilt.chart(), ap.chart());
}

#[test]
fn extension_is_deterministic_and_certified() {
    let b = pg2_flag_building(2).unwrap();
    let one = b.extend_isometry(&BTreeMap::from([(0, 4)])).unwrap();
    assert_eq!(one.at(0), 4);
    assert!(b.is_apartment(one.chambers()).is_some());
    assert_eq!(one, b.extend_isometry(&BTreeMap::from([(0, 4)])).unwrap());

    let t = b.is_apartment(&triangle_flags(&b)).unwrap();
    let full: BTreeMap<ElemId, Chamber> = t
        .chart()
        .iter()
        .enumerate()
        .map(|(w, &c)| (w as ElemId, c))
        .collect();
    assert_eq!(b.extend_isometry(&full).unwrap().chart(), t.chart());

    // Two chambers at the wrong distance are not an isometry.
    let far = b
        .chambers()
        .find(|&d| b.gallery_distance(0, d) == 3)
        .unwrap();
    let err = b
        .extend_isometry(&BTreeMap::from([(0, 0), (1, far)]))
        .unwrap_err();
    assert!(matches!(err, Error::NotIsometry(_)));
}

#[test]
fn fano_apartments() {
    let b = pg2_flag_building(2).unwrap();
    let aps = b.enumerate_apartments();
    assert_eq!(aps.len(), 28);
    for a in &aps {
        assert_eq!(a.base(), a.chambers()[0]);
        assert!(b.is_apartment(a.chambers()).is_some());
    }
    for c in b.chambers() {
        for d in b.chambers() {
            assert!(aps.iter().any(|a| a.contains(c) && a.contains(d)));
        }
    }
}

#[test]
fn roots_and_walls_of_a_hexagon() {
    let b = pg2_flag_building(2).unwrap();
    let ap = b.apartments()[0].clone();
    let roots = b.roots_of(&ap);
    assert_eq!(roots.len(), 6);
    let mut walls: Vec<BWall> = Vec::new();
    for r in &roots {
        assert_eq!(r.chambers().len(), 3);
        let opp = b.opposite_root(r);
        let mut both: Vec<Chamber> = r.chambers().iter().chain(opp.chambers()).copied().collect();
        both.sort();
        assert_eq!(both, ap.chambers());
        let w = b.wall_of(r);
        assert_eq!(w, b.wall_of(&opp));
        // A wall of a hexagon is two opposite vertices.
        assert_eq!(w.panels.len(), 2);
        assert_eq!(w.complex.len(), 2);
        if !walls.contains(&w) {
            walls.push(w);
        }
        let closure = b.convex_closure_chambers(r.chambers());
        assert_eq!(closure, r.chambers());
    }
    assert_eq!(walls.len(), 3);
    assert_eq!(roots[0].side, Side::Positive);
}

#[test]
fn convex_closure_examples() {
    let b = pg2_flag_building(2).unwrap();
    let ap = b.apartments()[3].clone();
    let c = ap.at(0);
    let d = ap.at(b.group().longest());
    assert_eq!(b.convex_closure_chambers(&[c, d]), ap.chambers());
    let e = ap.at(1);
    assert_eq!(b.convex_closure_chambers(&[c, e]), {
        let mut v = vec![c, e];
        v.sort();
        v
    });
}

#[test]
fn subcomplex_algebra() {
    let b = pg2_flag_building(2).unwrap();
    let aps = b.apartments();
    let x = aps[0].complex(&b);
    assert_eq!(x.intersect(&x), x);
    assert_eq!(x.dimension(&b), 1);
    assert_eq!(x.codimension(&b), 0);
    assert_eq!(x.chambers(), aps[0].chambers());
    assert_eq!(x.len(), 12);
    let disjoint = aps
        .iter()
        .find(|a| a.chambers().iter().all(|&c| !aps[0].contains(c)));
    if let Some(d) = disjoint {
        let both = x.intersect(&d.complex(&b));
        assert!(both.chambers().is_empty());
    }
    assert_eq!(SubComplex::empty().dimension(&b), -1);
}

#[test]
fn isomorphism_fixes_intersection() {
    let b = pg2_flag_building(2).unwrap();
    let aps = b.apartments();
    let same = b.apartment_isomorphism(&aps[0], &aps[0]).unwrap();
    assert_eq!(same.shift, 0);
    for a in aps.iter() {
        let map = b.apartment_isomorphism(&aps[0], a).unwrap();
        let common = aps[0].complex(&b).intersect(&a.complex(&b));
        for c in common.chambers() {
            assert_eq!(map.apply(c), Some(c));
        }
    }
}

#[test]
fn json_roundtrip_and_hash() {
    let b = pg2_flag_building(2).unwrap();
    let again = Building::from_json(&b.to_json()).unwrap();
    assert_eq!(content_hash(&b), content_hash(&again));
    assert_eq!(content_hash(&b).len(), 64);
    for c in b.chambers() {
        for d in b.chambers() {
            assert_eq!(b.delta_id(c, d), again.delta_id(c, d));
        }
    }
}

#[test]
fn apartment_cache_roundtrip() {
    let dir = tempfile::tempdir().unwrap();
    let b = pg2_flag_building(2).unwrap();
    let first = b.apartments_cached(dir.path()).unwrap();
    let fresh = pg2_flag_building(2).unwrap();
    let second = fresh.apartments_cached(dir.path()).unwrap();
    assert_eq!(*first, *second);
    let file = dir.path().join(format!("{}.chap", content_hash(&b)));
    assert_eq!(&std::fs::read(file).unwrap()[..4], APARTMENT_CACHE_MAGIC);
}
