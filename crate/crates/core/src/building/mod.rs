//! Finite W-metric buildings.
//!
//! A building is given by its panel partitions, one per generator. The Weyl
//! distance is recovered by breadth-first search: along a minimal gallery of
//! type `(s₁,…,sₖ)` from `C`, the distance grows as `s₁⋯sₖ`.

mod apartment;
mod io;
mod subcomplex;

use std::collections::VecDeque;
use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};

use crate::coxeter::{CoxeterSystem, ElemId, FiniteGroup, GenSet, WeylElement};
use crate::error::{Error, Result};

pub use apartment::{Apartment, ApartmentMap, BRoot, BWall};
pub use io::{content_hash, BuildingDoc, PanelClasses, APARTMENT_CACHE_MAGIC};
pub use subcomplex::{SimplexRef, SubComplex};

/// Chambers are numbered `0..n`.
pub type Chamber = u32;

/// Above this many chambers, rows of δ are computed on first use.
pub const DENSE_LIMIT: usize = 1000;

enum DeltaTable {
    Dense(Vec<ElemId>),
    Lazy(Vec<OnceLock<Box<[ElemId]>>>),
}

pub struct Building {
    system: CoxeterSystem,
    group: Arc<FiniteGroup>,
    n: usize,
    /// `panel_of[s][C]` is the index of the `s`-panel of `C` in `panels[s]`.
    panel_of: Vec<Vec<u32>>,
    panels: Vec<Vec<Vec<Chamber>>>,
    delta: DeltaTable,
    /// Indexed by cotype `J`: residue index per chamber, and the members of
    /// each residue in increasing order.
    residue_of: Vec<Vec<u32>>,
    residues: Vec<Vec<Vec<Chamber>>>,
    apartments: OnceLock<Arc<Vec<Apartment>>>,
}

impl std::fmt::Debug for Building {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Building")
            .field("system", &self.system)
            .field("chambers", &self.n)
            .finish()
    }
}

/// First violated building axiom, with the chambers involved.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub axiom: String,
    pub chambers: Vec<Chamber>,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub chambers: usize,
    pub violation: Option<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violation.is_none()
    }
}

struct UnionFind(Vec<u32>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n as u32).collect())
    }

    fn find(&mut self, x: u32) -> u32 {
        let mut r = x;
        while self.0[r as usize] != r {
            r = self.0[r as usize];
        }
        let mut x = x;
        while self.0[x as usize] != r {
            let next = self.0[x as usize];
            self.0[x as usize] = r;
            x = next;
        }
        r
    }

    fn union(&mut self, a: u32, b: u32) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.0[hi as usize] = lo;
        }
    }
}

fn partition_index(n: usize, classes: &[Vec<Chamber>]) -> Result<Vec<u32>> {
    let mut of = vec![u32::MAX; n];
    for (k, class) in classes.iter().enumerate() {
        for &c in class {
            let slot = of.get_mut(c as usize).ok_or(Error::InvalidChamber(c))?;
            if *slot != u32::MAX {
                return Err(Error::InvalidBuilding(format!(
                    "chamber {c} lies in two panels of one type"
                )));
            }
            *slot = k as u32;
        }
    }
    if let Some(c) = of.iter().position(|&k| k == u32::MAX) {
        return Err(Error::InvalidBuilding(format!(
            "chamber {c} lies in no panel of some type"
        )));
    }
    Ok(of)
}

impl Building {
    /// Builds from one chamber partition per generator. δ is derived by
    /// breadth-first search; run [`Building::validate`] to check the axioms.
    pub fn from_panels(
        system: CoxeterSystem,
        n: usize,
        panels: Vec<Vec<Vec<Chamber>>>,
    ) -> Result<Self> {
        if panels.len() != system.rank() {
            return Err(Error::InvalidBuilding(format!(
                "{} panel partitions for rank {}",
                panels.len(),
                system.rank()
            )));
        }
        if n == 0 {
            return Err(Error::InvalidBuilding("no chambers".into()));
        }
        let group = Arc::new(FiniteGroup::new(&system)?);
        let mut sorted = Vec::with_capacity(panels.len());
        for classes in panels {
            let mut classes: Vec<Vec<Chamber>> = classes
                .into_iter()
                .map(|mut c| {
                    c.sort_unstable();
                    c
                })
                .collect();
            classes.sort();
            sorted.push(classes);
        }
        let panel_of = sorted
            .iter()
            .map(|classes| partition_index(n, classes))
            .collect::<Result<Vec<_>>>()?;
        let mut b = Building {
            system,
            group,
            n,
            panel_of,
            panels: sorted,
            delta: DeltaTable::Dense(Vec::new()),
            residue_of: Vec::new(),
            residues: Vec::new(),
            apartments: OnceLock::new(),
        };
        b.delta = if n <= DENSE_LIMIT {
            let mut table = vec![0; n * n];
            for c in 0..n {
                let row = b.bfs_row(c as Chamber)?;
                table[c * n..(c + 1) * n].copy_from_slice(&row);
            }
            DeltaTable::Dense(table)
        } else {
            b.bfs_row(0)?;
            DeltaTable::Lazy((0..n).map(|_| OnceLock::new()).collect())
        };
        b.build_residues();
        Ok(b)
    }

    /// Builds from an explicit δ table (row-major, element ids of the finite
    /// group). Nothing is checked beyond the table shape; panels are read off
    /// as `{D : δ(C,D) ∈ {1, s}}`.
    pub fn from_delta_table(system: CoxeterSystem, n: usize, table: Vec<ElemId>) -> Result<Self> {
        if table.len() != n * n || n == 0 {
            return Err(Error::InvalidBuilding("δ table has the wrong shape".into()));
        }
        let group = Arc::new(FiniteGroup::new(&system)?);
        if table.iter().any(|&w| w as usize >= group.order()) {
            return Err(Error::InvalidBuilding("δ table entry out of range".into()));
        }
        let rank = system.rank();
        let mut panel_of = Vec::with_capacity(rank);
        let mut panels = Vec::with_capacity(rank);
        for s in 0..rank {
            let g = group.gen(s);
            let mut uf = UnionFind::new(n);
            for c in 0..n {
                for d in 0..n {
                    if table[c * n + d] == g {
                        uf.union(c as u32, d as u32);
                    }
                }
            }
            let (of, classes) = classes_of(&mut uf, n);
            panel_of.push(of);
            panels.push(classes);
        }
        let mut b = Building {
            system,
            group,
            n,
            panel_of,
            panels,
            delta: DeltaTable::Dense(table),
            residue_of: Vec::new(),
            residues: Vec::new(),
            apartments: OnceLock::new(),
        };
        b.build_residues();
        Ok(b)
    }

    fn bfs_row(&self, c: Chamber) -> Result<Box<[ElemId]>> {
        const UNSEEN: ElemId = ElemId::MAX;
        let mut row = vec![UNSEEN; self.n];
        row[c as usize] = 0;
        let mut queue = VecDeque::from([c]);
        while let Some(d) = queue.pop_front() {
            let w = row[d as usize];
            for s in 0..self.rank() {
                for &e in self.panel(s, d) {
                    if row[e as usize] == UNSEEN {
                        row[e as usize] = self.group.mul_gen(w, s);
                        queue.push_back(e);
                    }
                }
            }
        }
        if let Some(e) = row.iter().position(|&w| w == UNSEEN) {
            return Err(Error::InvalidBuilding(format!(
                "chamber {e} is not connected to chamber {c}"
            )));
        }
        Ok(row.into_boxed_slice())
    }

    fn build_residues(&mut self) {
        let rank = self.rank();
        let mut residue_of = Vec::with_capacity(1 << rank);
        let mut residues = Vec::with_capacity(1 << rank);
        for j in 0..(1u64 << rank) {
            let mut uf = UnionFind::new(self.n);
            for s in 0..rank {
                if j & (1 << s) == 0 {
                    continue;
                }
                for class in &self.panels[s] {
                    for w in class.windows(2) {
                        uf.union(w[0], w[1]);
                    }
                }
            }
            let (of, classes) = classes_of(&mut uf, self.n);
            residue_of.push(of);
            residues.push(classes);
        }
        self.residue_of = residue_of;
        self.residues = residues;
    }

    pub fn system(&self) -> &CoxeterSystem {
        &self.system
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn rank(&self) -> usize {
        self.system.rank()
    }

    pub fn chamber_count(&self) -> usize {
        self.n
    }

    pub fn chambers(&self) -> impl Iterator<Item = Chamber> {
        0..self.n as Chamber
    }

    pub fn check_chamber(&self, c: Chamber) -> Result<()> {
        if (c as usize) < self.n {
            Ok(())
        } else {
            Err(Error::InvalidChamber(c))
        }
    }

    /// Members of the `s`-panel of `c`, including `c`.
    pub fn panel(&self, s: usize, c: Chamber) -> &[Chamber] {
        &self.panels[s][self.panel_of[s][c as usize] as usize]
    }

    /// All `s`-panels as chamber lists.
    pub fn panels_of_type(&self, s: usize) -> &[Vec<Chamber>] {
        &self.panels[s]
    }

    /// Weyl distance as a group element id.
    pub fn delta_id(&self, c: Chamber, d: Chamber) -> ElemId {
        match &self.delta {
            DeltaTable::Dense(t) => t[c as usize * self.n + d as usize],
            DeltaTable::Lazy(rows) => rows[c as usize].get_or_init(|| {
                self.bfs_row(c)
                    .expect("connectivity checked at construction")
            })[d as usize],
        }
    }

    pub fn delta(&self, c: Chamber, d: Chamber) -> WeylElement {
        self.group.element(self.delta_id(c, d)).clone()
    }

    pub fn gallery_distance(&self, c: Chamber, d: Chamber) -> usize {
        self.group.len(self.delta_id(c, d))
    }

    /// Chambers `s`-adjacent to `c` (excluding `c`).
    pub fn neighbours(&self, c: Chamber) -> impl Iterator<Item = Chamber> + '_ {
        (0..self.rank())
            .flat_map(move |s| self.panel(s, c).iter().copied().filter(move |&e| e != c))
    }

    pub fn adjacent(&self, c: Chamber, d: Chamber) -> bool {
        c != d && self.gallery_distance(c, d) == 1
    }

    /// Every minimal gallery from `c` to `d`, in lexicographic order.
    pub fn minimal_galleries(&self, c: Chamber, d: Chamber) -> Vec<Vec<Chamber>> {
        let mut out = Vec::new();
        let mut path = vec![c];
        self.galleries_from(d, &mut path, &mut out);
        out
    }

    fn galleries_from(&self, d: Chamber, path: &mut Vec<Chamber>, out: &mut Vec<Vec<Chamber>>) {
        let cur = *path.last().expect("nonempty path");
        if cur == d {
            out.push(path.clone());
            return;
        }
        let dist = self.gallery_distance(cur, d);
        let mut next: Vec<Chamber> = self
            .neighbours(cur)
            .filter(|&e| self.gallery_distance(e, d) + 1 == dist)
            .collect();
        next.sort_unstable();
        next.dedup();
        for e in next {
            path.push(e);
            self.galleries_from(d, path, out);
            path.pop();
        }
    }

    /// Whether `x` lies on a minimal gallery from `c` to `d`.
    pub fn between(&self, c: Chamber, x: Chamber, d: Chamber) -> bool {
        self.gallery_distance(c, x) + self.gallery_distance(x, d) == self.gallery_distance(c, d)
    }

    /// The cotype-`j` face of chamber `c`.
    pub fn face(&self, c: Chamber, j: GenSet) -> SimplexRef {
        let j = j & self.system.all_generators();
        let k = self.residue_of[j as usize][c as usize];
        SimplexRef {
            cotype: j,
            least: self.residues[j as usize][k as usize][0],
        }
    }

    /// Chambers containing `a`, in increasing order.
    pub fn residue(&self, a: &SimplexRef) -> &[Chamber] {
        let k = self.residue_of[a.cotype as usize][a.least as usize];
        &self.residues[a.cotype as usize][k as usize]
    }

    pub fn contains(&self, a: &SimplexRef, c: Chamber) -> bool {
        self.residue_of[a.cotype as usize][c as usize]
            == self.residue_of[a.cotype as usize][a.least as usize]
    }

    /// Whether `a` is a face of `b`.
    pub fn is_face(&self, a: &SimplexRef, b: &SimplexRef) -> bool {
        a.cotype & b.cotype == b.cotype && self.contains(a, b.least)
    }

    /// Nonempty faces of chamber `c`, i.e. cotypes `J ≠ S`.
    pub fn chamber_faces(&self, c: Chamber) -> impl Iterator<Item = SimplexRef> + '_ {
        let all = self.system.all_generators();
        (0..all).map(move |j| self.face(c, j))
    }

    /// Nonempty faces of `a`, including `a`.
    pub fn faces(&self, a: &SimplexRef) -> impl Iterator<Item = SimplexRef> + '_ {
        let all = self.system.all_generators();
        let j0 = a.cotype;
        let c = a.least;
        (0..all)
            .filter(move |j| j & j0 == j0)
            .map(move |j| self.face(c, j))
    }

    /// Every nonempty simplex of the building.
    pub fn simplices(&self) -> Vec<SimplexRef> {
        let all = self.system.all_generators();
        let mut out = Vec::new();
        for j in 0..all {
            for class in &self.residues[j as usize] {
                out.push(SimplexRef {
                    cotype: j,
                    least: class[0],
                });
            }
        }
        out.sort();
        out
    }

    /// Every panel of the building.
    pub fn all_panels(&self) -> Vec<SimplexRef> {
        let mut out: Vec<SimplexRef> = (0..self.rank())
            .flat_map(|s| {
                self.panels[s].iter().map(move |class| SimplexRef {
                    cotype: 1 << s,
                    least: class[0],
                })
            })
            .collect();
        out.sort();
        out
    }

    /// Dimension of a simplex; chambers have dimension `rank − 1`.
    pub fn simplex_dimension(&self, a: &SimplexRef) -> i32 {
        self.rank() as i32 - a.cotype.count_ones() as i32 - 1
    }

    pub fn thickness(&self, p: &SimplexRef) -> Result<usize> {
        if p.cotype.count_ones() != 1 {
            return Err(Error::WrongSimplexKind("panel"));
        }
        Ok(self.residue(p).len())
    }

    pub fn min_thickness(&self) -> usize {
        self.panels
            .iter()
            .flat_map(|classes| classes.iter().map(Vec::len))
            .min()
            .unwrap_or(0)
    }

    /// The chamber of the residue of `a` nearest to `d` (the gate).
    pub fn projection_chamber(&self, a: &SimplexRef, d: Chamber) -> Result<Chamber> {
        self.check_chamber(d)?;
        let members = self.residue(a);
        let best = members
            .iter()
            .map(|&e| self.gallery_distance(e, d))
            .min()
            .expect("residues are nonempty");
        let mut hits = members
            .iter()
            .filter(|&&e| self.gallery_distance(e, d) == best);
        let e = *hits.next().expect("minimum is attained");
        if hits.next().is_some() {
            return Err(Error::construction("projection is not unique"));
        }
        Ok(e)
    }

    /// `proj_A B`: the face shared by the chambers through `a` that are
    /// nearest to `b`.
    pub fn projection(&self, a: &SimplexRef, b: &SimplexRef) -> Result<SimplexRef> {
        let targets = self.residue(b);
        let dist = |c: Chamber| {
            targets
                .iter()
                .map(|&d| self.gallery_distance(c, d))
                .min()
                .unwrap_or(0)
        };
        let members = self.residue(a);
        let best = members.iter().map(|&c| dist(c)).min().expect("nonempty");
        let near: Vec<Chamber> = members
            .iter()
            .copied()
            .filter(|&c| dist(c) == best)
            .collect();
        let j = near
            .iter()
            .fold(0, |m, &c| m | self.group.support(self.delta_id(near[0], c)));
        let p = self.face(near[0], j);
        if self.residue(&p) != near.as_slice() {
            return Err(Error::construction(
                "nearest chambers do not form a residue",
            ));
        }
        Ok(p)
    }

    /// Chambers on minimal galleries between members, closed under iteration.
    pub fn convex_closure_chambers(&self, k: &[Chamber]) -> Vec<Chamber> {
        let mut inside = vec![false; self.n];
        let mut set: Vec<Chamber> = k.to_vec();
        set.sort_unstable();
        set.dedup();
        for &c in &set {
            inside[c as usize] = true;
        }
        loop {
            let mut added = Vec::new();
            for (i, &c) in set.iter().enumerate() {
                for &d in &set[i + 1..] {
                    for x in self.chambers() {
                        if !inside[x as usize] && self.between(c, x, d) {
                            inside[x as usize] = true;
                            added.push(x);
                        }
                    }
                }
            }
            if added.is_empty() {
                return set;
            }
            set.extend(added);
            set.sort_unstable();
        }
    }

    /// Checks every axiom exhaustively and reports the first violation.
    pub fn validate(&self) -> ValidationReport {
        ValidationReport {
            chambers: self.n,
            violation: self.first_violation(),
        }
    }

    fn first_violation(&self) -> Option<Violation> {
        let g = &*self.group;
        let bad = |axiom: &str, chambers: Vec<Chamber>, message: String| {
            Some(Violation {
                axiom: axiom.into(),
                chambers,
                message,
            })
        };
        for s in 0..self.rank() {
            for class in &self.panels[s] {
                if class.len() < 2 {
                    return bad(
                        "thickness",
                        class.clone(),
                        format!("s{s}-panel with one chamber"),
                    );
                }
            }
        }
        for c in self.chambers() {
            for d in self.chambers() {
                let w = self.delta_id(c, d);
                if (w == 0) != (c == d) {
                    return bad(
                        "WD1",
                        vec![c, d],
                        format!("δ({c},{d}) = {:?}", g.element(w)),
                    );
                }
                if self.delta_id(d, c) != g.inv(w) {
                    return bad("symmetry", vec![c, d], format!("δ({d},{c}) ≠ δ({c},{d})⁻¹"));
                }
                for s in 0..self.rank() {
                    let same_panel = self.panel_of[s][c as usize] == self.panel_of[s][d as usize];
                    if (w == g.gen(s)) != (same_panel && c != d) {
                        return bad(
                            "panels",
                            vec![c, d],
                            format!("s{s}-adjacency disagrees with δ"),
                        );
                    }
                }
            }
        }
        for c in self.chambers() {
            for d in self.chambers() {
                let w = self.delta_id(c, d);
                for s in 0..self.rank() {
                    let ws = g.mul_gen(w, s);
                    let up = g.len(ws) > g.len(w);
                    let mut reached = false;
                    for &e in self.panel(s, d) {
                        if e == d {
                            continue;
                        }
                        let x = self.delta_id(c, e);
                        if x != w && x != ws {
                            return bad("WD2", vec![c, d, e], format!("δ({c},{e}) ∉ {{w, ws}}"));
                        }
                        if up && x != ws {
                            return bad(
                                "WD2",
                                vec![c, d, e],
                                format!("δ({c},{e}) ≠ ws although ℓ(ws) > ℓ(w)"),
                            );
                        }
                        reached |= x == ws;
                    }
                    if !reached {
                        return bad(
                            "WD3",
                            vec![c, d],
                            format!("no s{s}-neighbour of {d} at δ = ws"),
                        );
                    }
                }
            }
        }
        None
    }

    /// All apartments of the complete system, computed once.
    pub fn apartments(&self) -> Arc<Vec<Apartment>> {
        self.apartments
            .get_or_init(|| Arc::new(self.enumerate_apartments()))
            .clone()
    }

    /// Seeds the apartment memo (from a cache file, say). Ignored if already set.
    pub fn set_apartments(&self, list: Vec<Apartment>) {
        let _ = self.apartments.set(Arc::new(list));
    }

    /// The restriction to the residue of `a`: a building of type `(W_J, J)`.
    pub fn link(&self, a: &SimplexRef) -> Result<Link> {
        if a.cotype == 0 {
            return Err(Error::ChamberLink);
        }
        let chambers: Vec<Chamber> = self.residue(a).to_vec();
        let generators: Vec<usize> = (0..self.rank())
            .filter(|s| a.cotype & (1 << s) != 0)
            .collect();
        let system = self.system.parabolic(a.cotype)?;
        let local = |c: Chamber| chambers.binary_search(&c).expect("residue member") as Chamber;
        let mut panels = Vec::with_capacity(generators.len());
        for &s in &generators {
            let mut classes: Vec<Vec<Chamber>> = Vec::new();
            for class in &self.panels[s] {
                if self.contains(a, class[0]) {
                    classes.push(class.iter().map(|&c| local(c)).collect());
                }
            }
            panels.push(classes);
        }
        let building = Building::from_panels(system, chambers.len(), panels)?;
        Ok(Link {
            simplex: *a,
            building,
            chambers,
            generators,
        })
    }
}

fn classes_of(uf: &mut UnionFind, n: usize) -> (Vec<u32>, Vec<Vec<Chamber>>) {
    let mut index = vec![u32::MAX; n];
    let mut of = vec![0u32; n];
    let mut classes: Vec<Vec<Chamber>> = Vec::new();
    for c in 0..n as u32 {
        let r = uf.find(c) as usize;
        if index[r] == u32::MAX {
            index[r] = classes.len() as u32;
            classes.push(Vec::new());
        }
        of[c as usize] = index[r];
        classes[index[r] as usize].push(c);
    }
    (of, classes)
}

/// The link of a simplex, with the maps back to the ambient building.
#[derive(Debug)]
pub struct Link {
    pub simplex: SimplexRef,
    pub building: Building,
    /// Ambient chamber of each local chamber.
    pub chambers: Vec<Chamber>,
    /// Ambient generator of each local generator.
    pub generators: Vec<usize>,
}

impl Link {
    pub fn to_global(&self, c: Chamber) -> Chamber {
        self.chambers[c as usize]
    }

    pub fn to_local(&self, c: Chamber) -> Option<Chamber> {
        self.chambers.binary_search(&c).ok().map(|i| i as Chamber)
    }

    /// Translates a local cotype into ambient generator labels.
    pub fn global_cotype(&self, j: GenSet) -> GenSet {
        self.generators
            .iter()
            .enumerate()
            .filter(|(i, _)| j & (1 << i) != 0)
            .fold(0, |m, (_, &s)| m | (1 << s))
    }

    pub fn local_cotype(&self, j: GenSet) -> GenSet {
        self.generators
            .iter()
            .enumerate()
            .filter(|(_, &s)| j & (1 << s) != 0)
            .fold(0, |m, (i, _)| m | (1 << i))
    }

    /// The ambient simplex `A ∪ B` for a simplex `B` of the link.
    pub fn simplex_to_global(&self, ambient: &Building, b: &SimplexRef) -> SimplexRef {
        ambient.face(self.to_global(b.least), self.global_cotype(b.cotype))
    }

    /// The link simplex `B` for an ambient simplex `A ∪ B` having the link's
    /// simplex `A` as a face. `A` itself maps to the empty simplex of the link.
    pub fn simplex_to_local(&self, ambient: &Building, a: &SimplexRef) -> Option<SimplexRef> {
        if !ambient.is_face(&self.simplex, a) {
            return None;
        }
        let c = self.to_local(a.least)?;
        Some(self.building.face(c, self.local_cotype(a.cotype)))
    }

    /// The part of an ambient subcomplex inside the link, in link terms.
    pub fn restrict(&self, ambient: &Building, k: &SubComplex) -> SubComplex {
        let all = self.building.system().all_generators();
        SubComplex::from_set(
            k.iter()
                .filter_map(|a| self.simplex_to_local(ambient, a))
                .filter(|b| b.cotype != all)
                .collect(),
        )
    }
}

#[cfg(test)]
mod tests;
