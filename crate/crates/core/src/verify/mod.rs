//! Exhaustive verification suites with replayable failure witnesses.
//!
//! Each suite walks its instances in a fixed order (apartment order, then
//! simplex order, ShortLex for Coxeter elements). Parallel suites split the
//! outer loop and merge results in that same order, so reports depend only
//! on their inputs.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::apartments::{
    adjacent_pair_intersection, convex_subcomplexes, glue_roots, realize_chamber_subcomplex,
    realize_convex_subcomplex, walls_of, GlueOutcome,
};
use crate::building::{content_hash, Apartment, BRoot, Building, Chamber, SimplexRef, SubComplex};
use crate::coxeter::{Ball, CoxeterSystem};
use crate::error::{Error, Result};

pub const REPORT_SCHEMA: &str = "chambers.report/v1";

/// Above this many candidate subsets the apartment test restricts its pool
/// to the chambers of apartments through the fixed pair.
pub const APARTMENT_TEST_LIMIT: u64 = 1 << 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    Theorem1,
    Thickness3Obstruction,
    ChamberSubcomplexes,
    GlueRoots,
    AdjacentPairs,
    ApartmentMap,
    ConditionIv,
    BuildingAxioms,
    ProjectionGates,
    ApartmentTest,
}

impl Suite {
    pub const ALL: [Suite; 10] = [
        Suite::Theorem1,
        Suite::Thickness3Obstruction,
        Suite::ChamberSubcomplexes,
        Suite::GlueRoots,
        Suite::AdjacentPairs,
        Suite::ApartmentMap,
        Suite::ConditionIv,
        Suite::BuildingAxioms,
        Suite::ProjectionGates,
        Suite::ApartmentTest,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Theorem1 => "theorem1",
            Suite::Thickness3Obstruction => "thickness3_obstruction",
            Suite::ChamberSubcomplexes => "chamber_subcomplexes",
            Suite::GlueRoots => "glue_roots",
            Suite::AdjacentPairs => "adjacent_pairs",
            Suite::ApartmentMap => "apartment_map",
            Suite::ConditionIv => "condition_iv",
            Suite::BuildingAxioms => "building_axioms",
            Suite::ProjectionGates => "projection_gates",
            Suite::ApartmentTest => "apartment_test",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::precondition(format!("unknown suite {s:?}")))
    }
}

/// The input that made an instance fail, enough to re-run it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    Realization {
        host: Apartment,
        target: SubComplex,
    },
    Wall {
        host: Apartment,
        panels: Vec<SimplexRef>,
        other: Option<Apartment>,
    },
    RootPair {
        first: BRoot,
        second: BRoot,
    },
    AdjacentPair {
        first: Chamber,
        second: Chamber,
    },
    MappedApartment {
        apartment: Apartment,
        image: Vec<Chamber>,
    },
    ChamberPair {
        first: Chamber,
        second: Chamber,
    },
    Triple {
        words: [Vec<u8>; 3],
    },
    Axiom {
        axiom: String,
        chambers: Vec<Chamber>,
    },
    Gate {
        simplex: SimplexRef,
        chamber: Chamber,
    },
    ChamberSet {
        chambers: Vec<Chamber>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Failure {
    pub witness: Witness,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub schema: String,
    pub suite: Suite,
    /// Content hash of the building, when the suite runs on one.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub building: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub radii: Option<[usize; 2]>,
    pub instances: u64,
    pub failures: Vec<Failure>,
    #[serde(skip)]
    pub elapsed: Duration,
}

impl VerificationReport {
    fn start(suite: Suite, b: Option<&Building>) -> Self {
        VerificationReport {
            schema: REPORT_SCHEMA.into(),
            suite,
            building: b.map(content_hash),
            radii: None,
            instances: 0,
            failures: Vec::new(),
            elapsed: Duration::ZERO,
        }
    }

    fn finish(mut self, started: Instant) -> Self {
        self.elapsed = started.elapsed();
        self
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let r: VerificationReport = serde_json::from_str(text)?;
        if r.schema != REPORT_SCHEMA {
            return Err(Error::precondition(format!(
                "unsupported report schema {:?}",
                r.schema
            )));
        }
        Ok(r)
    }

    /// One line: suite, verdict and counts.
    pub fn summary(&self) -> String {
        format!(
            "{}: {} ({} instances, {} failures)",
            self.suite,
            if self.passed() { "pass" } else { "FAIL" },
            self.instances,
            self.failures.len()
        )
    }
}

fn fail(witness: Witness, message: impl Into<String>) -> Failure {
    Failure {
        witness,
        message: message.into(),
    }
}

/// Runs `check` on every item in parallel and keeps the failures in item
/// order. Returns the instance count too.
fn ordered<T: Sync, F>(items: &[T], check: F) -> (u64, Vec<Failure>)
where
    F: Fn(&T) -> (u64, Vec<Failure>) + Sync + Send,
{
    let parts: Vec<(u64, Vec<Failure>)> = items.par_iter().map(check).collect();
    let mut count = 0;
    let mut failures = Vec::new();
    for (n, f) in parts {
        count += n;
        failures.extend(f);
    }
    (count, failures)
}

/// `Σ ∩ Σ′ = κ` via the codimension induction.
pub fn check_realization(b: &Building, host: &Apartment, target: &SubComplex) -> Option<String> {
    match realize_convex_subcomplex(b, host, target) {
        Ok(cert) => cert.validate(b).err().map(|e| e.to_string()),
        Err(e) => Some(e.to_string()),
    }
}

/// Every apartment against every convex subcomplex of it.
pub fn verify_theorem1(b: &Building) -> Result<VerificationReport> {
    let started = Instant::now();
    let found = b.min_thickness();
    if found < 4 {
        return Err(Error::ThicknessTooSmall { needed: 4, found });
    }
    let mut report = VerificationReport::start(Suite::Theorem1, Some(b));
    let aps = b.apartments();
    let (n, failures) = ordered(&aps, |sigma| {
        let mut failures = Vec::new();
        let targets = convex_subcomplexes(b, sigma);
        for k in &targets {
            if let Some(msg) = check_realization(b, sigma, k) {
                failures.push(fail(
                    Witness::Realization {
                        host: sigma.clone(),
                        target: k.clone(),
                    },
                    msg,
                ));
            }
        }
        (targets.len() as u64, failures)
    });
    report.instances = n;
    report.failures = failures;
    Ok(report.finish(started))
}

/// The chamber-subcomplex case, which only needs thickness 3.
pub fn check_chamber_realization(
    b: &Building,
    host: &Apartment,
    target: &SubComplex,
) -> Option<String> {
    match realize_chamber_subcomplex(b, host, target) {
        Ok(cert) => cert.validate(b).err().map(|e| e.to_string()),
        Err(e) => Some(e.to_string()),
    }
}

pub fn verify_chamber_subcomplexes(b: &Building) -> Result<VerificationReport> {
    let started = Instant::now();
    let found = b.min_thickness();
    if found < 3 {
        return Err(Error::ThicknessTooSmall { needed: 3, found });
    }
    let mut report = VerificationReport::start(Suite::ChamberSubcomplexes, Some(b));
    let aps = b.apartments();
    let (n, failures) = ordered(&aps, |sigma| {
        let mut n = 0;
        let mut failures = Vec::new();
        for k in convex_subcomplexes(b, sigma) {
            if k.is_empty() || k.codimension(b) != 0 {
                continue;
            }
            n += 1;
            if let Some(msg) = check_chamber_realization(b, sigma, &k) {
                failures.push(fail(
                    Witness::Realization {
                        host: sigma.clone(),
                        target: k,
                    },
                    msg,
                ));
            }
        }
        (n, failures)
    });
    report.instances = n;
    report.failures = failures;
    Ok(report.finish(started))
}

/// First apartment `Σ′` of the complete system with `Σ ∩ Σ′ = M`.
pub fn realizing_apartment(b: &Building, host: &Apartment, wall: &SubComplex) -> Option<Apartment> {
    let hc = host.complex(b);
    b.apartments()
        .iter()
        .find(|other| other.complex(b).intersect(&hc) == *wall)
        .cloned()
}

/// No wall through a 3-chamber panel is the intersection of two apartments.
pub fn verify_thickness3_obstruction(b: &Building) -> VerificationReport {
    let started = Instant::now();
    let mut report = VerificationReport::start(Suite::Thickness3Obstruction, Some(b));
    let aps = b.apartments();
    let complexes: Vec<SubComplex> = aps.iter().map(|a| a.complex(b)).collect();
    let (n, failures) = ordered(&aps, |sigma| {
        let hc = sigma.complex(b);
        let meets: Vec<SubComplex> = complexes.iter().map(|c| c.intersect(&hc)).collect();
        let mut n = 0;
        let mut failures = Vec::new();
        for wall in walls_of(b, sigma) {
            if !wall.panels.iter().any(|p| b.residue(p).len() == 3) {
                continue;
            }
            n += 1;
            if let Some(i) = meets.iter().position(|m| *m == wall.complex) {
                failures.push(fail(
                    Witness::Wall {
                        host: sigma.clone(),
                        panels: wall.panels.clone(),
                        other: Some(aps[i].clone()),
                    },
                    "a wall through a 3-chamber panel is an intersection of apartments",
                ));
            }
        }
        (n, failures)
    });
    report.instances = n;
    report.failures = failures;
    report.finish(started)
}

/// Whether some wall panel carries different chambers of the two roots.
pub fn panel_criterion(b: &Building, a1: &BRoot, a2: &BRoot) -> bool {
    let wall = b.wall_of(a1);
    wall.panels.iter().any(|p| {
        let c1 = a1.chambers().iter().find(|&&c| b.contains(p, c));
        let c2 = a2.chambers().iter().find(|&&c| b.contains(p, c));
        c1 != c2
    })
}

/// Both directions of the gluing criterion for one root pair.
pub fn check_root_pair(b: &Building, a1: &BRoot, a2: &BRoot) -> Option<String> {
    let criterion = panel_criterion(b, a1, a2);
    let mut union: Vec<Chamber> = a1.chambers().iter().chain(a2.chambers()).copied().collect();
    union.sort_unstable();
    union.dedup();
    let is_apartment = b.is_apartment(&union).is_some();
    let glued = match glue_roots(b, a1, a2) {
        Ok(GlueOutcome::Glued(_)) => true,
        Ok(GlueOutcome::Refused { .. }) => false,
        Err(e) => return Some(e.to_string()),
    };
    if criterion != is_apartment || glued != is_apartment {
        return Some(format!(
            "criterion {criterion}, union is apartment {is_apartment}, glue_roots {glued}"
        ));
    }
    None
}

/// Every ordered pair of distinct roots with a common wall.
pub fn verify_glue_roots(b: &Building) -> VerificationReport {
    let started = Instant::now();
    let mut report = VerificationReport::start(Suite::GlueRoots, Some(b));
    let mut by_wall: BTreeMap<Vec<SimplexRef>, BTreeMap<Vec<Chamber>, BRoot>> = BTreeMap::new();
    for ap in b.apartments().iter() {
        for r in b.roots_of(ap) {
            let wall = b.wall_of(&r).panels;
            by_wall
                .entry(wall)
                .or_default()
                .entry(r.chambers().to_vec())
                .or_insert(r);
        }
    }
    let groups: Vec<Vec<BRoot>> = by_wall
        .into_values()
        .map(|m| m.into_values().collect())
        .collect();
    let (n, failures) = ordered(&groups, |roots| {
        let mut n = 0;
        let mut failures = Vec::new();
        for (i, r1) in roots.iter().enumerate() {
            for (j, r2) in roots.iter().enumerate() {
                if i == j {
                    continue;
                }
                n += 1;
                if let Some(msg) = check_root_pair(b, r1, r2) {
                    failures.push(fail(
                        Witness::RootPair {
                            first: r1.clone(),
                            second: r2.clone(),
                        },
                        msg,
                    ));
                }
            }
        }
        (n, failures)
    });
    report.instances = n;
    report.failures = failures;
    report.finish(started)
}

pub fn check_adjacent_pair(
    b: &Building,
    system: &[Apartment],
    c: Chamber,
    d: Chamber,
) -> Option<String> {
    match adjacent_pair_intersection(b, system, c, d) {
        Ok(r) if r.equals_pair => None,
        Ok(r) => Some(format!(
            "intersection has {} simplices, the pair spans {}",
            r.intersection.len(),
            SubComplex::of_chambers(b, [c, d]).len()
        )),
        Err(e) => Some(e.to_string()),
    }
}

/// Every adjacent pair is cut out by the apartments containing it.
pub fn verify_adjacent_pairs(b: &Building, system: &[Apartment]) -> VerificationReport {
    let started = Instant::now();
    let mut report = VerificationReport::start(Suite::AdjacentPairs, Some(b));
    let pairs: Vec<(Chamber, Chamber)> = b
        .chambers()
        .flat_map(|c| b.neighbours(c).filter(move |&d| c < d).map(move |d| (c, d)))
        .collect();
    let mut pairs = pairs;
    pairs.sort_unstable();
    pairs.dedup();
    let (n, failures) = ordered(&pairs, |&(c, d)| {
        let f = check_adjacent_pair(b, system, c, d).map(|msg| {
            fail(
                Witness::AdjacentPair {
                    first: c,
                    second: d,
                },
                msg,
            )
        });
        (1, f.into_iter().collect())
    });
    report.instances = n;
    report.failures = failures;
    report.finish(started)
}

/// Checks a chamber map `φ: Ch(b) → Ch(b′)`. The hypothesis is that every
/// apartment of `𝒜` maps bijectively onto one of `𝒜′`; when it holds, `φ`
/// must be injective and preserve adjacency in both directions.
pub fn verify_apartment_map(
    b: &Building,
    target: &Building,
    system: &[Apartment],
    target_system: &[Apartment],
    phi: &[Chamber],
) -> Result<VerificationReport> {
    let started = Instant::now();
    if phi.len() != b.chamber_count() {
        return Err(Error::precondition(format!(
            "the map has {} values for {} chambers",
            phi.len(),
            b.chamber_count()
        )));
    }
    for &d in phi {
        target.check_chamber(d)?;
    }
    let mut report = VerificationReport::start(Suite::ApartmentMap, Some(b));
    let images: std::collections::BTreeSet<&[Chamber]> =
        target_system.iter().map(|a| a.chambers()).collect();
    for ap in system {
        report.instances += 1;
        let mut image: Vec<Chamber> = ap.chambers().iter().map(|&c| phi[c as usize]).collect();
        image.sort_unstable();
        let bijective = image.windows(2).all(|w| w[0] != w[1]);
        if !bijective || !images.contains(image.as_slice()) {
            report.failures.push(fail(
                Witness::MappedApartment {
                    apartment: ap.clone(),
                    image,
                },
                if bijective {
                    "hypothesis: image of an apartment is not an apartment"
                } else {
                    "hypothesis: map is not injective on an apartment"
                },
            ));
        }
    }
    if !report.passed() {
        return Ok(report.finish(started));
    }
    for c in b.chambers() {
        for d in b.chambers().filter(|&d| d > c) {
            report.instances += 1;
            let (x, y) = (phi[c as usize], phi[d as usize]);
            let message = if x == y {
                "not injective"
            } else if b.adjacent(c, d) != target.adjacent(x, y) {
                "adjacency not preserved"
            } else {
                continue;
            };
            report.failures.push(fail(
                Witness::ChamberPair {
                    first: c,
                    second: d,
                },
                message,
            ));
        }
    }
    Ok(report.finish(started))
}

/// Every triple of the `triple_radius` ball must lie in the hull of two
/// chambers of the `witness_radius` ball. Triples are taken with
/// `x ≤ y ≤ z` in ShortLex order.
pub fn scan_condition_iv(
    system: &CoxeterSystem,
    triple_radius: usize,
    witness_radius: usize,
) -> Result<VerificationReport> {
    let started = Instant::now();
    if witness_radius < triple_radius {
        return Err(Error::RadiusTooSmall {
            radius: witness_radius,
            needed: triple_radius,
        });
    }
    let mut report = VerificationReport::start(Suite::ConditionIv, None);
    report.radii = Some([triple_radius, witness_radius]);
    let ball = Ball::new(system, witness_radius)?;
    let inner = ball
        .elements()
        .iter()
        .take_while(|w| w.len() <= triple_radius)
        .count();
    let firsts: Vec<usize> = (0..inner).collect();
    let (n, failures) = ordered(&firsts, |&x| {
        let mut n = 0;
        let mut failures = Vec::new();
        for y in x..inner {
            for z in y..inner {
                n += 1;
                if ball.witness(&[x, y, z]).is_none() {
                    let words = [x, y, z].map(|i| ball.element(i).word().to_vec());
                    failures.push(fail(
                        Witness::Triple { words },
                        format!("no witness within radius {witness_radius}"),
                    ));
                }
            }
        }
        (n, failures)
    });
    report.instances = n;
    report.failures = failures;
    Ok(report.finish(started))
}

pub fn verify_building_axioms(b: &Building) -> VerificationReport {
    let started = Instant::now();
    let mut report = VerificationReport::start(Suite::BuildingAxioms, Some(b));
    let v = b.validate();
    report.instances = v.chambers as u64;
    if let Some(v) = v.violation {
        report.failures.push(fail(
            Witness::Axiom {
                axiom: v.axiom,
                chambers: v.chambers,
            },
            v.message,
        ));
    }
    report.finish(started)
}

/// The gate equation for one simplex and chamber.
pub fn check_gate(b: &Building, a: &SimplexRef, d: Chamber) -> Option<String> {
    let g = b.group();
    let e = match b.projection_chamber(a, d) {
        Ok(e) => e,
        Err(err) => return Some(err.to_string()),
    };
    for &c in b.residue(a) {
        if b.delta_id(c, d) != g.mul(b.delta_id(c, e), b.delta_id(e, d))
            || b.gallery_distance(c, d) != b.gallery_distance(c, e) + b.gallery_distance(e, d)
        {
            return Some(format!(
                "gate equation fails at chamber {c} with projection {e}"
            ));
        }
    }
    None
}

pub fn verify_projection_gates(b: &Building) -> VerificationReport {
    let started = Instant::now();
    let mut report = VerificationReport::start(Suite::ProjectionGates, Some(b));
    let simplices = b.simplices();
    let (n, failures) = ordered(&simplices, |a| {
        let failures: Vec<Failure> = b
            .chambers()
            .filter_map(|d| {
                check_gate(b, a, d).map(|msg| {
                    fail(
                        Witness::Gate {
                            simplex: *a,
                            chamber: d,
                        },
                        msg,
                    )
                })
            })
            .collect();
        (b.chamber_count() as u64, failures)
    });
    report.instances = n;
    report.failures = failures;
    report.finish(started)
}

fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u64, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}

/// `is_apartment` agrees with membership in the enumerated system on every
/// `|W|`-subset containing chamber 0 and its least neighbour.
pub fn verify_apartment_test(b: &Building) -> VerificationReport {
    let started = Instant::now();
    let mut report = VerificationReport::start(Suite::ApartmentTest, Some(b));
    let aps = b.apartments();
    let known: std::collections::BTreeSet<&[Chamber]> = aps.iter().map(|a| a.chambers()).collect();
    let k = b.group().order();
    let Some(second) = b.neighbours(0).min() else {
        return report.finish(started);
    };
    let mut pool: Vec<Chamber> =
        if binomial(b.chamber_count() as u64 - 2, k as u64 - 2) <= APARTMENT_TEST_LIMIT {
            b.chambers().collect()
        } else {
            aps.iter()
                .filter(|a| a.contains(0) && a.contains(second))
                .flat_map(|a| a.chambers().iter().copied())
                .collect()
        };
    pool.sort_unstable();
    pool.dedup();
    pool.retain(|&c| c != 0 && c != second);
    let mut pick: Vec<usize> = (0..k - 2).collect();
    if k < 2 || pool.len() < k - 2 {
        return report.finish(started);
    }
    loop {
        let mut set: Vec<Chamber> = pick.iter().map(|&i| pool[i]).chain([0, second]).collect();
        set.sort_unstable();
        report.instances += 1;
        let tested = b.is_apartment(&set).is_some();
        if tested != known.contains(set.as_slice()) {
            report.failures.push(fail(
                Witness::ChamberSet { chambers: set },
                format!("is_apartment says {tested}, enumeration disagrees"),
            ));
        }
        // Next combination in lexicographic order.
        let m = pick.len();
        let Some(i) = (0..m).rev().find(|&i| pick[i] < pool.len() - m + i) else {
            break;
        };
        pick[i] += 1;
        for j in i + 1..m {
            pick[j] = pick[j - 1] + 1;
        }
    }
    report.finish(started)
}

/// Re-runs the check behind a failure on a building suite. `Ok(true)` means
/// the failure reproduces.
pub fn replay(b: &Building, suite: Suite, failure: &Failure) -> Result<bool> {
    let reproduces = match (suite, &failure.witness) {
        (Suite::Theorem1, Witness::Realization { host, target }) => {
            check_realization(b, host, target).is_some()
        }
        (Suite::ChamberSubcomplexes, Witness::Realization { host, target }) => {
            check_chamber_realization(b, host, target).is_some()
        }
        (Suite::Thickness3Obstruction, Witness::Wall { host, panels, .. }) => {
            let wall = SubComplex::face_closure(b, panels);
            realizing_apartment(b, host, &wall).is_some()
        }
        (Suite::GlueRoots, Witness::RootPair { first, second }) => {
            check_root_pair(b, first, second).is_some()
        }
        (Suite::AdjacentPairs, Witness::AdjacentPair { first, second }) => {
            check_adjacent_pair(b, &b.apartments(), *first, *second).is_some()
        }
        (Suite::BuildingAxioms, Witness::Axiom { .. }) => !b.validate().is_valid(),
        (Suite::ProjectionGates, Witness::Gate { simplex, chamber }) => {
            check_gate(b, simplex, *chamber).is_some()
        }
        (Suite::ApartmentTest, Witness::ChamberSet { chambers }) => {
            let known = b
                .apartments()
                .iter()
                .any(|a| a.chambers() == chambers.as_slice());
            b.is_apartment(chambers).is_some() != known
        }
        _ => {
            return Err(Error::precondition(format!(
                "witness does not belong to a building-level {suite} suite"
            )))
        }
    };
    Ok(reproduces)
}

/// Re-runs the witness search for an uncovered triple.
pub fn replay_triple(
    system: &CoxeterSystem,
    witness_radius: usize,
    failure: &Failure,
) -> Result<bool> {
    let Witness::Triple { words } = &failure.witness else {
        return Err(Error::precondition("not a triple witness"));
    };
    let [x, y, z] = words.clone().map(|w| {
        system.element_from_normal_word(&w.iter().map(|&s| s as usize).collect::<Vec<_>>())
    });
    Ok(crate::coxeter::condition_iv_witness(system, &x?, &y?, &z?, witness_radius)?.is_none())
}

#[cfg(test)]
mod tests;
