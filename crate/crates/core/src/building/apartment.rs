use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::hash::{Hash, Hasher};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{Building, Chamber, SimplexRef, SubComplex};
use crate::coxeter::{CoxRoot, ElemId, Side};
use crate::error::{Error, Result};

/// An apartment, stored as a chart `W → chambers` that is an isometry:
/// `δ(chart(u), chart(v)) = u⁻¹v`. Two apartments are equal when they
/// have the same chambers, whatever their charts.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(from = "Vec<Chamber>", into = "Vec<Chamber>")]
pub struct Apartment {
    chart: Vec<Chamber>,
    chambers: Vec<Chamber>,
    elements: Vec<ElemId>,
}

impl From<Vec<Chamber>> for Apartment {
    fn from(chart: Vec<Chamber>) -> Self {
        let mut pairs: Vec<(Chamber, ElemId)> = chart
            .iter()
            .enumerate()
            .map(|(w, &c)| (c, w as ElemId))
            .collect();
        pairs.sort_unstable();
        Apartment {
            chambers: pairs.iter().map(|p| p.0).collect(),
            elements: pairs.iter().map(|p| p.1).collect(),
            chart,
        }
    }
}

impl From<Apartment> for Vec<Chamber> {
    fn from(a: Apartment) -> Self {
        a.chart
    }
}

impl PartialEq for Apartment {
    fn eq(&self, other: &Self) -> bool {
        self.chambers == other.chambers
    }
}

impl Eq for Apartment {}

impl Hash for Apartment {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.chambers.hash(state);
    }
}

impl PartialOrd for Apartment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Apartment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.chambers.cmp(&other.chambers)
    }
}

impl Apartment {
    pub fn chart(&self) -> &[Chamber] {
        &self.chart
    }

    pub fn base(&self) -> Chamber {
        self.chart[0]
    }

    /// Chambers in increasing order.
    pub fn chambers(&self) -> &[Chamber] {
        &self.chambers
    }

    pub fn at(&self, w: ElemId) -> Chamber {
        self.chart[w as usize]
    }

    pub fn contains(&self, c: Chamber) -> bool {
        self.chambers.binary_search(&c).is_ok()
    }

    /// The element `w` with `chart(w) = c`.
    pub fn element_of(&self, c: Chamber) -> Option<ElemId> {
        self.chambers
            .binary_search(&c)
            .ok()
            .map(|i| self.elements[i])
    }

    /// All nonempty simplices of the apartment.
    pub fn complex(&self, b: &Building) -> SubComplex {
        SubComplex::of_chambers(b, self.chambers.iter().copied())
    }

    /// The same apartment charted from `chart(x)`: `w ↦ chart(x·w)`.
    pub fn rebased(&self, b: &Building, x: ElemId) -> Apartment {
        let g = b.group();
        Apartment::from(
            (0..g.order())
                .map(|w| self.chart[g.mul(x, w as ElemId) as usize])
                .collect::<Vec<_>>(),
        )
    }

    /// The chart based at the least chamber.
    pub fn canonical(&self, b: &Building) -> Apartment {
        self.rebased(b, self.elements[0])
    }

    /// Panels of the apartment.
    pub fn panels(&self, b: &Building) -> Vec<SimplexRef> {
        let mut out: Vec<SimplexRef> = self
            .chambers
            .iter()
            .flat_map(|&c| (0..b.rank()).map(move |s| b.face(c, 1 << s)))
            .collect();
        out.sort();
        out.dedup();
        out
    }

    /// The two chambers of the apartment containing panel `p`.
    pub fn chambers_through(&self, b: &Building, p: &SimplexRef) -> Vec<Chamber> {
        self.chambers
            .iter()
            .copied()
            .filter(|&c| b.contains(p, c))
            .collect()
    }
}

/// A root of an apartment: the chambers `chart(w)` with `w` on one side of
/// the reflection `t`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BRoot {
    pub home: Apartment,
    pub reflection: ElemId,
    pub side: Side,
    chambers: Vec<Chamber>,
}

impl PartialEq for BRoot {
    fn eq(&self, other: &Self) -> bool {
        self.chambers == other.chambers
    }
}

impl Eq for BRoot {}

impl BRoot {
    pub fn chambers(&self) -> &[Chamber] {
        &self.chambers
    }

    pub fn contains(&self, c: Chamber) -> bool {
        self.chambers.binary_search(&c).is_ok()
    }

    pub fn complex(&self, b: &Building) -> SubComplex {
        SubComplex::of_chambers(b, self.chambers.iter().copied())
    }

    pub fn cox_root(&self, b: &Building) -> Result<CoxRoot> {
        let t = b
            .system()
            .as_reflection(b.group().element(self.reflection))?;
        Ok(b.system().root(&t, self.side))
    }
}

/// The boundary of a root: the panels of the home apartment lying in
/// exactly one chamber of the root, with all their faces.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BWall {
    pub panels: Vec<SimplexRef>,
    pub complex: SubComplex,
    pub root: BRoot,
}

impl PartialEq for BWall {
    fn eq(&self, other: &Self) -> bool {
        self.panels == other.panels
    }
}

impl Eq for BWall {}

impl BWall {
    pub fn contains_panel(&self, p: &SimplexRef) -> bool {
        self.panels.binary_search(p).is_ok()
    }
}

/// An isomorphism of apartments `chart(w) ↦ chart′(x·w)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ApartmentMap {
    pub shift: ElemId,
    pub pairs: Vec<(Chamber, Chamber)>,
}

impl ApartmentMap {
    pub fn apply(&self, c: Chamber) -> Option<Chamber> {
        self.pairs.iter().find(|p| p.0 == c).map(|p| p.1)
    }
}

impl Building {
    fn check_isometry(&self, pairs: &[(ElemId, Chamber)]) -> Result<()> {
        let g = self.group();
        for &(u, c) in pairs {
            if u as usize >= g.order() {
                return Err(Error::NotIsometry(format!("element id {u} out of range")));
            }
            self.check_chamber(c)?;
        }
        for &(u, c) in pairs {
            for &(v, d) in pairs {
                if self.delta_id(c, d) != g.delta(u, v) {
                    return Err(Error::NotIsometry(format!(
                        "δ({c},{d}) = {:?} but u⁻¹v = {:?}",
                        g.element(self.delta_id(c, d)),
                        g.element(g.delta(u, v))
                    )));
                }
            }
        }
        Ok(())
    }

    /// The product condition on every triple: `δ(C,E) = δ(C,D)·δ(D,E)`.
    pub fn satisfies_star(&self, k: &[Chamber]) -> bool {
        let g = self.group();
        k.iter().all(|&c| {
            k.iter().all(|&d| {
                let cd = self.delta_id(c, d);
                k.iter()
                    .all(|&e| self.delta_id(c, e) == g.mul(cd, self.delta_id(d, e)))
            })
        })
    }

    /// The apartment with chamber set `k`, if there is one: `k` satisfies
    /// the product condition and `|k| = |W|`.
    pub fn is_apartment(&self, k: &[Chamber]) -> Option<Apartment> {
        let mut k = k.to_vec();
        k.sort_unstable();
        k.dedup();
        let g = self.group();
        if k.len() != g.order() || k.iter().any(|&c| c as usize >= self.n) {
            return None;
        }
        let base = k[0];
        let mut chart = vec![Chamber::MAX; g.order()];
        for &c in &k {
            let w = self.delta_id(base, c) as usize;
            if chart[w] != Chamber::MAX {
                return None;
            }
            chart[w] = c;
        }
        if !self.satisfies_star(&k) {
            return None;
        }
        Some(Apartment::from(chart))
    }

    /// Accepts a full chart after checking it is an isometry.
    pub fn apartment_from_chart(&self, chart: Vec<Chamber>) -> Result<Apartment> {
        if chart.len() != self.group().order() {
            return Err(Error::NotIsometry(format!(
                "chart has {} entries",
                chart.len()
            )));
        }
        let pairs: Vec<(ElemId, Chamber)> = chart
            .iter()
            .enumerate()
            .map(|(w, &c)| (w as ElemId, c))
            .collect();
        self.check_isometry(&pairs)?;
        Ok(Apartment::from(chart))
    }

    /// Extends a partial isometry `W ⊇ dom → chambers` to an apartment.
    /// Elements are placed in ShortLex order; `w = w′s` goes to the least
    /// chamber of the `s`-panel of `chart(w′)` consistent with everything
    /// placed so far.
    pub fn extend_isometry(&self, partial: &BTreeMap<ElemId, Chamber>) -> Result<Apartment> {
        if partial.is_empty() {
            return Err(Error::precondition("empty partial isometry"));
        }
        let pairs: Vec<(ElemId, Chamber)> = partial.iter().map(|(&w, &c)| (w, c)).collect();
        self.check_isometry(&pairs)?;
        let g = self.group();
        let mut chart: Vec<Option<Chamber>> = vec![None; g.order()];
        for (&w, &c) in partial {
            chart[w as usize] = Some(c);
        }
        let all: Vec<Chamber> = self.chambers().collect();
        for w in 0..g.order() {
            if chart[w].is_some() {
                continue;
            }
            let w = w as ElemId;
            let candidates: &[Chamber] = match g.split_last(w) {
                Some((p, s)) => {
                    self.panel(s, chart[p as usize].expect("prefixes are placed first"))
                }
                None => &all,
            };
            let found = candidates.iter().copied().find(|&e| {
                chart.iter().enumerate().all(|(u, c)| match c {
                    Some(c) => self.delta_id(*c, e) == g.delta(u as ElemId, w),
                    None => true,
                })
            });
            match found {
                Some(e) => chart[w as usize] = Some(e),
                None => {
                    return Err(Error::ExtensionFailed {
                        element: w as usize,
                    })
                }
            }
        }
        let chart: Vec<Chamber> = chart.into_iter().map(|c| c.expect("all placed")).collect();
        let ap = Apartment::from(chart);
        match self.is_apartment(ap.chambers()) {
            Some(_) => Ok(ap),
            None => Err(Error::construction(
                "extended chart fails the product condition",
            )),
        }
    }

    /// Every apartment of the complete system, once each, charted from its
    /// least chamber, sorted by chamber set.
    pub fn enumerate_apartments(&self) -> Vec<Apartment> {
        let mut out: Vec<Apartment> = (0..self.n as Chamber)
            .into_par_iter()
            .flat_map_iter(|base| {
                let mut found = Vec::new();
                let mut chart = vec![base];
                self.grow(&mut chart, base, &mut found);
                found
            })
            .collect();
        out.sort();
        out
    }

    fn grow(&self, chart: &mut Vec<Chamber>, base: Chamber, out: &mut Vec<Apartment>) {
        let g = self.group();
        let w = chart.len();
        if w == g.order() {
            out.push(Apartment::from(chart.clone()));
            return;
        }
        let w = w as ElemId;
        let (p, s) = g.split_last(w).expect("not the identity");
        let anchor = chart[p as usize];
        for &e in self.panel(s, anchor) {
            if e <= base {
                continue;
            }
            let fits = chart
                .iter()
                .enumerate()
                .all(|(u, &c)| self.delta_id(c, e) == g.delta(u as ElemId, w));
            if fits {
                chart.push(e);
                self.grow(chart, base, out);
                chart.pop();
            }
        }
    }

    /// Apartments of the complete system containing all of `chambers`.
    pub fn apartments_containing(&self, chambers: &[Chamber]) -> Vec<Apartment> {
        self.apartments()
            .iter()
            .filter(|a| chambers.iter().all(|&c| a.contains(c)))
            .cloned()
            .collect()
    }

    pub fn root(&self, ap: &Apartment, reflection: ElemId, side: Side) -> BRoot {
        let g = self.group();
        let mut chambers: Vec<Chamber> = (0..g.order() as ElemId)
            .filter(|&w| (g.len(g.mul(reflection, w)) > g.len(w)) == (side == Side::Positive))
            .map(|w| ap.at(w))
            .collect();
        chambers.sort_unstable();
        BRoot {
            home: ap.clone(),
            reflection,
            side,
            chambers,
        }
    }

    /// One root per reflection and side.
    pub fn roots_of(&self, ap: &Apartment) -> Vec<BRoot> {
        self.group()
            .reflections()
            .into_iter()
            .flat_map(|t| [Side::Positive, Side::Negative].map(|side| self.root(ap, t, side)))
            .collect()
    }

    pub fn opposite_root(&self, root: &BRoot) -> BRoot {
        self.root(&root.home, root.reflection, root.side.flip())
    }

    pub fn wall_of(&self, root: &BRoot) -> BWall {
        let mut count: BTreeMap<SimplexRef, usize> = BTreeMap::new();
        for &c in root.chambers() {
            for s in 0..self.rank() {
                *count.entry(self.face(c, 1 << s)).or_default() += 1;
            }
        }
        let panels: Vec<SimplexRef> = count
            .into_iter()
            .filter(|&(_, n)| n == 1)
            .map(|(p, _)| p)
            .collect();
        BWall {
            complex: SubComplex::face_closure(self, &panels),
            panels,
            root: root.clone(),
        }
    }

    /// Roots of `ap` bounded by `wall` (both sides), if `ap` contains it.
    pub fn roots_with_wall(&self, ap: &Apartment, wall: &BWall) -> Vec<BRoot> {
        self.roots_of(ap)
            .into_iter()
            .filter(|r| self.wall_of(r) == *wall)
            .collect()
    }

    /// A type-preserving isomorphism `Σ → Σ′` fixing `Σ ∩ Σ′` pointwise,
    /// least shift first.
    pub fn apartment_isomorphism(&self, a: &Apartment, b: &Apartment) -> Result<ApartmentMap> {
        let g = self.group();
        let common = a.complex(self).intersect(&b.complex(self));
        for x in 0..g.order() as ElemId {
            let image = |c: Chamber| {
                let w = a.element_of(c).expect("chamber of Σ");
                b.at(g.mul(x, w))
            };
            let fixes = common.iter().all(|s| {
                let c = a
                    .chambers()
                    .iter()
                    .copied()
                    .find(|&c| self.contains(s, c))
                    .expect("simplex of Σ lies in a chamber of Σ");
                self.face(image(c), s.cotype) == *s
            });
            if fixes {
                return Ok(ApartmentMap {
                    shift: x,
                    pairs: a.chambers().iter().map(|&c| (c, image(c))).collect(),
                });
            }
        }
        Err(Error::construction("no chart composition fixes Σ ∩ Σ′"))
    }
}
