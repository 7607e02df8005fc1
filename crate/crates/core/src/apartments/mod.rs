//! Constructions of apartments with prescribed intersections.
//!
//! Each construction follows a constructive proof: the apartment sought is
//! assembled as a partial isometry `W → chambers` and completed with
//! [`Building::extend_isometry`]. Every apartment returned here has been
//! re-certified with [`Building::is_apartment`], and every claimed
//! intersection is recomputed from plain simplex sets.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::building::{Apartment, BRoot, BWall, Building, Chamber, Link, SimplexRef, SubComplex};
use crate::coxeter::{ElemId, Side};
use crate::error::{Error, Result};

/// `Σ ∩ Σ′ = κ`, with the intersection recomputed independently.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RealizationCertificate {
    pub target: SubComplex,
    pub host: Apartment,
    pub witness: Apartment,
    pub checked: SubComplex,
}

impl RealizationCertificate {
    fn issue(
        b: &Building,
        target: &SubComplex,
        host: &Apartment,
        witness: Apartment,
    ) -> Result<Self> {
        let cert = RealizationCertificate {
            target: target.clone(),
            host: host.clone(),
            checked: host.complex(b).intersect(&witness.complex(b)),
            witness,
        };
        cert.validate(b)?;
        Ok(cert)
    }

    /// Re-checks both apartments and the intersection from scratch.
    pub fn validate(&self, b: &Building) -> Result<()> {
        for (name, ap) in [("host", &self.host), ("witness", &self.witness)] {
            if b.is_apartment(ap.chambers()).as_ref() != Some(ap) {
                return Err(Error::Certificate(format!("{name} is not an apartment")));
            }
        }
        let meet = intersect_chamber_sets(b, self.host.chambers(), self.witness.chambers());
        if meet != self.checked {
            return Err(Error::Certificate("recorded intersection is stale".into()));
        }
        if meet != self.target {
            return Err(Error::Certificate(format!(
                "Σ ∩ Σ′ has {} simplices, target has {}",
                meet.len(),
                self.target.len()
            )));
        }
        Ok(())
    }
}

/// Intersection of the face closures of two chamber sets, computed simplex
/// by simplex without going through [`Apartment::complex`].
fn intersect_chamber_sets(b: &Building, x: &[Chamber], y: &[Chamber]) -> SubComplex {
    let mut out = BTreeSet::new();
    for &c in x {
        for a in b.chamber_faces(c) {
            if b.residue(&a).iter().any(|d| y.binary_search(d).is_ok()) {
                out.insert(a);
            }
        }
    }
    SubComplex::from_set(out)
}

/// Result of gluing two roots along their common wall.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum GlueOutcome {
    Glued(Apartment),
    /// At every wall panel the two roots use the same chamber; `panel` is
    /// the first of them.
    Refused {
        panel: SimplexRef,
    },
}

fn certify(b: &Building, chambers: &[Chamber]) -> Result<Apartment> {
    b.is_apartment(chambers)
        .ok_or_else(|| Error::construction("constructed chamber set is not an apartment"))
}

fn sorted(mut v: Vec<Chamber>) -> Vec<Chamber> {
    v.sort_unstable();
    v.dedup();
    v
}

/// Whether `κ` is an intersection of roots of `Σ` (the empty intersection
/// being `Σ`).
pub fn is_convex_in(b: &Building, sigma: &Apartment, kappa: &SubComplex) -> bool {
    hull_in(b, sigma, kappa.iter()) == *kappa && kappa.is_subset(&sigma.complex(b))
}

/// The convex hull in `Σ` of some of its simplices: the intersection of all
/// roots of `Σ` containing them.
pub fn hull_in<'a>(
    b: &Building,
    sigma: &Apartment,
    simplices: impl IntoIterator<Item = &'a SimplexRef>,
) -> SubComplex {
    let simplices: Vec<&SimplexRef> = simplices.into_iter().collect();
    let mut hull = sigma.complex(b);
    for root in b.roots_of(sigma) {
        let rc = root.complex(b);
        if simplices.iter().all(|a| rc.contains(a)) {
            hull = hull.intersect(&rc);
        }
    }
    hull
}

/// Every convex subcomplex of `Σ`: all intersections of sets of roots,
/// deduplicated, including `Σ` itself and the empty complex when it occurs.
pub fn convex_subcomplexes(b: &Building, sigma: &Apartment) -> Vec<SubComplex> {
    let roots: Vec<SubComplex> = b.roots_of(sigma).iter().map(|r| r.complex(b)).collect();
    let mut found: BTreeSet<SubComplex> = BTreeSet::new();
    let whole = sigma.complex(b);
    let mut stack = vec![(0usize, whole)];
    // Depth-first over subsets, pruning repeated partial intersections.
    let mut seen: BTreeSet<(usize, SubComplex)> = BTreeSet::new();
    while let Some((i, cur)) = stack.pop() {
        if !seen.insert((i, cur.clone())) {
            continue;
        }
        if i == roots.len() {
            found.insert(cur);
            continue;
        }
        stack.push((i + 1, cur.intersect(&roots[i])));
        stack.push((i + 1, cur));
    }
    found.into_iter().collect()
}

/// The wall of `Σ` through panel `p`.
pub fn wall_through(b: &Building, sigma: &Apartment, p: &SimplexRef) -> Result<BWall> {
    if !p.is_panel() {
        return Err(Error::WrongSimplexKind("panel"));
    }
    let c = *sigma
        .chambers_through(b, p)
        .first()
        .ok_or_else(|| Error::precondition("panel is not in the apartment"))?;
    let g = b.group();
    let s = p.cotype.trailing_zeros() as usize;
    let w = sigma.element_of(c).expect("chamber of Σ");
    let t = g.mul(g.mul(w, g.gen(s)), g.inv(w));
    let side = if g.len(g.mul(t, w)) > g.len(w) {
        Side::Positive
    } else {
        Side::Negative
    };
    Ok(b.wall_of(&b.root(sigma, t, side)))
}

/// One wall per reflection of `Σ`.
pub fn walls_of(b: &Building, sigma: &Apartment) -> Vec<BWall> {
    b.group()
        .reflections()
        .into_iter()
        .map(|t| b.wall_of(&b.root(sigma, t, Side::Positive)))
        .collect()
}

/// Realizes a nonempty convex chamber subcomplex `κ ⊆ Σ` as `Σ ∩ Σ′`.
///
/// For each wall `M_j` cut by a boundary panel `P_j` of `κ` (with `C_j ∈ κ`
/// and `D_j ∉ κ` the chambers of `Σ` on `P_j`), a third chamber `D′_j` on
/// `P_j` replaces `D_j`; the map fixing `κ` and sending `D_j ↦ D′_j` is an
/// isometry and extends to `Σ′`.
pub fn realize_chamber_subcomplex(
    b: &Building,
    sigma: &Apartment,
    kappa: &SubComplex,
) -> Result<RealizationCertificate> {
    let whole = sigma.complex(b);
    let chambers = kappa.chambers();
    if chambers.is_empty() {
        return Err(Error::precondition("κ has no chambers"));
    }
    if !kappa.is_subset(&whole) {
        return Err(Error::precondition("κ is not contained in Σ"));
    }
    if SubComplex::of_chambers(b, chambers.iter().copied()) != *kappa {
        return Err(Error::precondition("κ is not a chamber subcomplex"));
    }
    if !is_convex_in(b, sigma, kappa) {
        return Err(Error::precondition("κ is not convex in Σ"));
    }
    if *kappa == whole {
        return RealizationCertificate::issue(b, kappa, sigma, sigma.clone());
    }
    let in_kappa = |c: Chamber| chambers.binary_search(&c).is_ok();
    let g = b.group();
    // One boundary panel per wall, least panel first.
    let mut boundary: BTreeMap<ElemId, (SimplexRef, Chamber, Chamber)> = BTreeMap::new();
    for p in sigma.panels(b) {
        let through = sigma.chambers_through(b, &p);
        let inside: Vec<Chamber> = through.iter().copied().filter(|&c| in_kappa(c)).collect();
        if inside.len() != 1 {
            continue;
        }
        let c = inside[0];
        let d = *through
            .iter()
            .find(|&&x| x != c)
            .expect("two chambers on a panel");
        let w = sigma.element_of(c).expect("chamber of Σ");
        let s = p.cotype.trailing_zeros() as usize;
        let t = g.mul(g.mul(w, g.gen(s)), g.inv(w));
        boundary.entry(t).or_insert((p, c, d));
    }
    let mut partial: BTreeMap<ElemId, Chamber> = chambers
        .iter()
        .map(|&c| (sigma.element_of(c).expect("chamber of Σ"), c))
        .collect();
    for (p, c, d) in boundary.values() {
        let residue = b.residue(p);
        let third = residue
            .iter()
            .copied()
            .find(|&x| x != *c && x != *d)
            .ok_or(Error::ThicknessTooSmall {
                needed: 3,
                found: residue.len(),
            })?;
        partial.insert(sigma.element_of(*d).expect("chamber of Σ"), third);
    }
    let witness = b.extend_isometry(&partial)?;
    RealizationCertificate::issue(b, kappa, sigma, witness)
}

/// An apartment containing the root `α` and a chamber `C ∉ α` on a panel of
/// its wall: the isometry fixing `α` and sending the chamber `D` of the
/// home apartment across that panel to `C` is extended.
pub fn apartment_with_root_and_chamber(
    b: &Building,
    alpha: &BRoot,
    c: Chamber,
) -> Result<Apartment> {
    b.check_chamber(c)?;
    if alpha.contains(c) {
        return Err(Error::precondition(format!("chamber {c} lies in the root")));
    }
    let wall = b.wall_of(alpha);
    let p = wall
        .panels
        .iter()
        .find(|p| b.contains(p, c))
        .ok_or_else(|| Error::precondition(format!("chamber {c} contains no panel of the wall")))?;
    let home = &alpha.home;
    let d = home
        .chambers_through(b, p)
        .into_iter()
        .find(|&x| !alpha.contains(x))
        .expect("the wall panel has a chamber on the other side");
    if d == c {
        return Ok(home.clone());
    }
    let mut partial: BTreeMap<ElemId, Chamber> = alpha
        .chambers()
        .iter()
        .map(|&x| (home.element_of(x).expect("root chamber"), x))
        .collect();
    partial.insert(home.element_of(d).expect("home chamber"), c);
    let ap = b.extend_isometry(&partial)?;
    certify(b, ap.chambers())?;
    if !alpha.chambers().iter().all(|&x| ap.contains(x)) || !ap.contains(c) {
        return Err(Error::construction("extension lost a prescribed chamber"));
    }
    Ok(ap)
}

/// Glues `α₁ ∪ α₂` when the roots share their wall and differ at some
/// wall panel.
pub fn glue_roots(b: &Building, a1: &BRoot, a2: &BRoot) -> Result<GlueOutcome> {
    let w1 = b.wall_of(a1);
    let w2 = b.wall_of(a2);
    if w1 != w2 {
        return Err(Error::WallsDiffer);
    }
    let on = |r: &BRoot, p: &SimplexRef| r.chambers().iter().copied().find(|&c| b.contains(p, c));
    let differing = w1.panels.iter().find(|p| on(a1, p) != on(a2, p));
    match differing {
        None => Ok(GlueOutcome::Refused {
            panel: w1.panels[0],
        }),
        Some(_) => {
            let union = sorted(a1.chambers().iter().chain(a2.chambers()).copied().collect());
            Ok(GlueOutcome::Glued(certify(b, &union)?))
        }
    }
}

/// Roots `α_C`, one per chamber `C` on panel `p ∈ M`, with `C ∈ α_C`,
/// wall `M`, and `α_C ∪ α_D` an apartment whenever `C ≠ D`.
pub fn root_family(b: &Building, p: &SimplexRef, wall: &BWall) -> Result<Vec<(Chamber, BRoot)>> {
    if !wall.contains_panel(p) {
        return Err(Error::precondition("panel is not on the wall"));
    }
    let home = &wall.root.home;
    let through = home.chambers_through(b, p);
    let c0 = through[0];
    let r = &wall.root;
    let alpha_c0 = if r.contains(c0) {
        r.clone()
    } else {
        b.opposite_root(r)
    };
    let alpha_d0 = b.opposite_root(&alpha_c0);
    let mut family = Vec::new();
    for &c in b.residue(p) {
        let root = if alpha_c0.contains(c) {
            alpha_c0.clone()
        } else if alpha_d0.contains(c) {
            alpha_d0.clone()
        } else {
            let sigma_c = apartment_with_root_and_chamber(b, &alpha_c0, c)?;
            b.roots_with_wall(&sigma_c, wall)
                .into_iter()
                .find(|x| x.contains(c))
                .ok_or_else(|| Error::construction("no root through C with wall M"))?
        };
        family.push((c, root));
    }
    for (i, (c, r)) in family.iter().enumerate() {
        if !r.contains(*c) || b.wall_of(r) != *wall {
            return Err(Error::construction("root family property (1) or (2) fails"));
        }
        for (_, s) in &family[i + 1..] {
            if !matches!(glue_roots(b, r, s)?, GlueOutcome::Glued(_)) {
                return Err(Error::construction("root family property (3) fails"));
            }
        }
    }
    Ok(family)
}

/// Link chambers (local ids) of ambient chambers through the link's simplex.
fn to_local(link: &Link, chambers: &[Chamber]) -> Vec<Chamber> {
    sorted(chambers.iter().filter_map(|&c| link.to_local(c)).collect())
}

/// The apartment `Σ ∩ L_A` of the link, for `A ∈ Σ`.
fn local_apartment(link: &Link, sigma: &Apartment) -> Result<Apartment> {
    let local = to_local(link, sigma.chambers());
    link.building
        .is_apartment(&local)
        .ok_or_else(|| Error::construction("Σ ∩ L_A is not an apartment of the link"))
}

/// The root `α̂ ∩ L_A` of the link, with `α̂` the home root of `wall`.
fn local_root(link: &Link, wall: &BWall) -> Result<BRoot> {
    let home = local_apartment(link, &wall.root.home)?;
    let want = to_local(link, wall.root.chambers());
    link.building
        .roots_of(&home)
        .into_iter()
        .find(|r| r.chambers() == want.as_slice())
        .ok_or_else(|| Error::construction("α̂ ∩ L_A is not a root of the link"))
}

/// First lifting step: with `α` a root bounded by `M` and `Σ_A` an
/// apartment of the link, if one of the two roots `α₁, α₂` of `Σ_A` cut out
/// by `M` lies in `α`, then `α ∪` (the other one) lies in an apartment.
fn lift_step_one(
    b: &Building,
    link: &Link,
    wall: &BWall,
    alpha: &[Chamber],
    sigma_a: &Apartment,
) -> Result<Option<Apartment>> {
    let (c1, c2, a1, a2) = split_link_apartment(b, link, wall, sigma_a)?;
    let _ = (c1, c2);
    let inside = |x: &[Chamber]| x.iter().all(|c| alpha.binary_search(c).is_ok());
    let other = if inside(&a1) {
        a2
    } else if inside(&a2) {
        a1
    } else {
        return Ok(None);
    };
    let k = sorted(alpha.iter().chain(&other).copied().collect());
    if !b.satisfies_star(&k) {
        return Err(Error::construction(
            "chamber set fails the product condition while lifting",
        ));
    }
    let base = k[0];
    let partial: BTreeMap<ElemId, Chamber> = k.iter().map(|&c| (b.delta_id(base, c), c)).collect();
    let ap = b.extend_isometry(&partial)?;
    certify(b, ap.chambers())?;
    Ok(Some(ap))
}

/// The panel `P ∈ M` with `A ⊆ P` and `P ∖ A ∈ Σ_A`, the two chambers
/// `C₁ < C₂` of `Σ_A` through it (ambient ids), and the roots
/// `α_i = {C ∈ Σ_A : d(C, C_i) < d(C, C_{3−i})}`.
#[allow(clippy::type_complexity)]
fn split_link_apartment(
    b: &Building,
    link: &Link,
    wall: &BWall,
    sigma_a: &Apartment,
) -> Result<(Chamber, Chamber, Vec<Chamber>, Vec<Chamber>)> {
    let global: Vec<Chamber> = sigma_a
        .chambers()
        .iter()
        .map(|&c| link.to_global(c))
        .collect();
    for p in &wall.panels {
        if !b.is_face(&link.simplex, p) {
            continue;
        }
        let through: Vec<Chamber> = global
            .iter()
            .copied()
            .filter(|&c| b.contains(p, c))
            .collect();
        if through.len() != 2 {
            continue;
        }
        let (c1, c2) = (through[0], through[1]);
        let mut a1 = Vec::new();
        let mut a2 = Vec::new();
        for &c in &global {
            if b.gallery_distance(c, c1) < b.gallery_distance(c, c2) {
                a1.push(c);
            } else {
                a2.push(c);
            }
        }
        return Ok((c1, c2, sorted(a1), sorted(a2)));
    }
    Err(Error::precondition("no wall panel through A lies in Σ_A"))
}

/// Given a wall `M`, a simplex `A ∈ M` and an apartment `Σ_A` of the link
/// of `A` containing `M ∩ L_A`, an apartment `Σ ⊇ M` with `Σ ∩ L_A = Σ_A`.
pub fn lift_link_apartment(
    b: &Building,
    wall: &BWall,
    a: &SimplexRef,
    sigma_a: &Apartment,
) -> Result<Apartment> {
    if !wall.complex.contains(a) && !wall.panels.contains(a) {
        return Err(Error::precondition("A is not a simplex of M"));
    }
    let link = b.link(a)?;
    if link.building.is_apartment(sigma_a.chambers()).is_none() {
        return Err(Error::precondition("Σ_A is not an apartment of the link"));
    }
    let local_complex = sigma_a.complex(&link.building);
    if !link.restrict(b, &wall.complex).is_subset(&local_complex) {
        return Err(Error::precondition("M ∩ L_A is not contained in Σ_A"));
    }
    let alpha: Vec<Chamber> = wall.root.chambers().to_vec();
    let sigma = match lift_step_one(b, &link, wall, &alpha, sigma_a)? {
        Some(ap) => ap,
        None => {
            // Second lifting step: glue α̂ ∩ L_A to α₁ inside the link, lift that, and
            // continue from the root opposite α̂.
            let (c1, c2, a1, a2) = split_link_apartment(b, &link, wall, sigma_a)?;
            let p = wall
                .panels
                .iter()
                .find(|p| b.is_face(a, p) && b.contains(p, c1) && b.contains(p, c2))
                .expect("panel found by the split");
            let c = *alpha
                .iter()
                .find(|&&x| b.contains(p, x))
                .expect("the root has a chamber on each wall panel");
            let alpha_1 = if c != c1 { a1 } else { a2 };
            let hat = local_root(&link, wall)?;
            let want = to_local(&link, &alpha_1);
            let r1 = link
                .building
                .roots_of(sigma_a)
                .into_iter()
                .find(|r| r.chambers() == want.as_slice())
                .ok_or_else(|| Error::construction("α₁ is not a root of Σ_A"))?;
            let tilde_a = match glue_roots(&link.building, &hat, &r1)? {
                GlueOutcome::Glued(ap) => ap,
                GlueOutcome::Refused { .. } => {
                    return Err(Error::construction("gluing in the link was refused"))
                }
            };
            let tilde = lift_step_one(b, &link, wall, &alpha, &tilde_a)?.ok_or_else(|| {
                Error::construction("first lifting step does not apply to the glued link apartment")
            })?;
            let opposite: Vec<Chamber> = tilde
                .chambers()
                .iter()
                .copied()
                .filter(|c| alpha.binary_search(c).is_err())
                .collect();
            lift_step_one(b, &link, wall, &opposite, sigma_a)?.ok_or_else(|| {
                Error::construction("first lifting step does not apply to the opposite root")
            })?
        }
    };
    if !wall.complex.is_subset(&sigma.complex(b)) {
        return Err(Error::construction("lifted apartment misses M"));
    }
    if link.restrict(b, &sigma.complex(b)) != local_complex {
        return Err(Error::construction(
            "lifted apartment meets L_A outside Σ_A",
        ));
    }
    Ok(sigma)
}

fn require_thickness(b: &Building, needed: usize) -> Result<()> {
    let found = b.min_thickness();
    if found < needed {
        return Err(Error::ThicknessTooSmall { needed, found });
    }
    Ok(())
}

/// An apartment `Σ′ ⊇ M` with `Σ′ ∩ Σ = M ∩ Σ`. Needs every panel in at
/// least four chambers.
pub fn wall_avoiding_apartment(b: &Building, sigma: &Apartment, wall: &BWall) -> Result<Apartment> {
    require_thickness(b, 4)?;
    let meet = wall.complex.intersect(&sigma.complex(b));
    let out = if meet.is_empty() {
        // Case I: among the apartments glued from the root family at four
        // chambers of a wall panel, one misses Σ entirely.
        let p = wall.panels[0];
        let family = root_family(b, &p, wall)?;
        let four = &family[..4];
        let mut found = None;
        'scan: for (i, (_, ri)) in four.iter().enumerate() {
            for (_, rj) in &four[i + 1..] {
                if let GlueOutcome::Glued(ap) = glue_roots(b, ri, rj)? {
                    if ap.complex(b).intersect(&sigma.complex(b)).is_empty() {
                        found = Some(ap);
                        break 'scan;
                    }
                }
            }
        }
        found.ok_or_else(|| Error::construction("no glued apartment misses Σ"))?
    } else {
        // Case II: work in the link of a maximal simplex of M ∩ Σ.
        let a = meet.maximal_simplices(b)[0];
        let link = b.link(&a)?;
        let sigma_a = local_apartment(&link, sigma)?;
        let wall_a = link.building.wall_of(&local_root(&link, wall)?);
        let avoid_a = wall_avoiding_apartment(&link.building, &sigma_a, &wall_a)?;
        lift_link_apartment(b, wall, &a, &avoid_a)?
    };
    let out_complex = out.complex(b);
    if !wall.complex.is_subset(&out_complex) || out_complex.intersect(&sigma.complex(b)) != meet {
        return Err(Error::construction(
            "wall-avoiding apartment fails its certificate",
        ));
    }
    Ok(out)
}

/// Realizes any convex subcomplex `κ ⊆ Σ` as `Σ ∩ Σ′`, by induction on the
/// codimension. Needs every panel in at least four chambers.
pub fn realize_convex_subcomplex(
    b: &Building,
    sigma: &Apartment,
    kappa: &SubComplex,
) -> Result<RealizationCertificate> {
    require_thickness(b, 4)?;
    let whole = sigma.complex(b);
    if !kappa.is_subset(&whole) {
        return Err(Error::precondition("κ is not contained in Σ"));
    }
    if !is_convex_in(b, sigma, kappa) {
        return Err(Error::precondition("κ is not convex in Σ"));
    }
    if kappa.is_empty() {
        let wall = disjoint_wall(b, sigma)?;
        let witness = wall_avoiding_apartment(b, sigma, &wall)?;
        return RealizationCertificate::issue(b, kappa, sigma, witness);
    }
    if kappa.codimension(b) == 0 {
        return realize_chamber_subcomplex(b, sigma, kappa);
    }
    let a = kappa.maximal_simplices(b)[0];
    let p = *sigma
        .panels(b)
        .iter()
        .find(|p| b.is_face(&a, p))
        .ok_or_else(|| Error::construction("no panel of Σ contains A"))?;
    let s = p.cotype;
    let c1 = sigma.chambers_through(b, &p)[0];
    // A₁ = A ∪ {x₁}, x₁ the vertex of C₁ off P (its type is s).
    let a1 = b.face(c1, a.cotype & !s);
    let kappa1 = hull_in(b, sigma, kappa.iter().chain([&a1]));
    if kappa1.dimension(b) != b.simplex_dimension(&a1) {
        return Err(Error::construction(
            "hull of κ ∪ {A₁} has the wrong dimension",
        ));
    }
    let sigma1 = realize_convex_subcomplex(b, sigma, &kappa1)?.witness;
    let d1 = *sigma1
        .chambers()
        .iter()
        .find(|&&c| b.contains(&a1, c))
        .ok_or_else(|| Error::construction("Σ₁ does not contain A₁"))?;
    let p1 = b.face(d1, s);
    let m1 = wall_through(b, &sigma1, &p1)?;
    if m1.complex.intersect(&kappa1) != *kappa {
        return Err(Error::construction("M₁ ∩ κ₁ ≠ κ"));
    }
    let witness = wall_avoiding_apartment(b, sigma, &m1)?;
    RealizationCertificate::issue(b, kappa, sigma, witness)
}

/// A wall of some apartment of the complete system that misses `Σ`.
fn disjoint_wall(b: &Building, sigma: &Apartment) -> Result<BWall> {
    let whole = sigma.complex(b);
    for ap in b.apartments().iter() {
        for wall in walls_of(b, ap) {
            if wall.complex.intersect(&whole).is_empty() {
                return Ok(wall);
            }
        }
    }
    Err(Error::construction("every wall of the building meets Σ"))
}

/// `κ = M ∩ M′` with `M` a wall of `Σ` and `M′` a wall of the apartment
/// realizing `κ`.
pub fn wall_pair_representation(
    b: &Building,
    sigma: &Apartment,
    kappa: &SubComplex,
) -> Result<(BWall, BWall)> {
    if kappa.dimension(b) >= b.rank() as i32 - 1 {
        return Err(Error::precondition("κ must have smaller dimension than Σ"));
    }
    let cert = realize_convex_subcomplex(b, sigma, kappa)?;
    let through = |ap: &Apartment| -> Result<BWall> {
        let walls = walls_of(b, ap);
        match kappa.maximal_simplices(b).first() {
            Some(a) => walls
                .into_iter()
                .find(|w| w.complex.contains(a))
                .ok_or_else(|| Error::construction("no wall through A")),
            None => Ok(walls.into_iter().next().expect("apartments have walls")),
        }
    };
    let m = through(&cert.host)?;
    let m2 = through(&cert.witness)?;
    if m.complex.intersect(&m2.complex) != *kappa {
        return Err(Error::construction("M ∩ M′ ≠ κ"));
    }
    Ok((m, m2))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdjacentPairIntersection {
    pub intersection: SubComplex,
    /// Whether the intersection is exactly the face closure of the pair.
    pub equals_pair: bool,
    /// Whether every panel lies in at least three chambers.
    pub thick: bool,
}

/// `∩{Σ ∈ 𝒜 : C, D ∈ Σ}` for adjacent `C, D`.
pub fn adjacent_pair_intersection(
    b: &Building,
    system: &[Apartment],
    c: Chamber,
    d: Chamber,
) -> Result<AdjacentPairIntersection> {
    b.check_chamber(c)?;
    b.check_chamber(d)?;
    if !b.adjacent(c, d) {
        return Err(Error::precondition(format!(
            "chambers {c} and {d} are not adjacent"
        )));
    }
    for x in b.chambers() {
        for y in b.chambers() {
            if !system.iter().any(|a| a.contains(x) && a.contains(y)) {
                return Err(Error::precondition(format!(
                    "no apartment contains chambers {x} and {y}"
                )));
            }
        }
    }
    let mut meet: Option<SubComplex> = None;
    for a in system.iter().filter(|a| a.contains(c) && a.contains(d)) {
        let ac = a.complex(b);
        meet = Some(match meet {
            None => ac,
            Some(m) => m.intersect(&ac),
        });
    }
    let intersection = meet.expect("covered pair");
    let pair = SubComplex::of_chambers(b, [c, d]);
    Ok(AdjacentPairIntersection {
        equals_pair: intersection == pair,
        intersection,
        thick: b.min_thickness() >= 3,
    })
}

#[cfg(test)]
mod tests;
