//! Concrete buildings: rank 1, flag complexes of small projective planes and
//! of the generalized quadrangle GQ(2,2), and geometries read from files.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::building::{Building, Chamber};
use crate::coxeter::CoxeterSystem;
use crate::error::{Error, Result};

/// A point-line geometry.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IncidenceGeometry {
    pub points: usize,
    pub lines: usize,
    /// Sorted `(point, line)` pairs without repeats.
    pub incidence: Vec<(u32, u32)>,
}

impl IncidenceGeometry {
    pub fn new(
        points: usize,
        lines: usize,
        pairs: impl IntoIterator<Item = (u32, u32)>,
    ) -> Result<Self> {
        let set: BTreeSet<(u32, u32)> = pairs.into_iter().collect();
        for &(p, l) in &set {
            if p as usize >= points || l as usize >= lines {
                return Err(Error::InvalidBuilding(format!(
                    "incidence ({p}, {l}) out of range"
                )));
            }
        }
        Ok(IncidenceGeometry {
            points,
            lines,
            incidence: set.into_iter().collect(),
        })
    }

    /// Incidence graph: points are vertices `0..points`, lines follow.
    fn graph(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.points + self.lines];
        for &(p, l) in &self.incidence {
            adj[p as usize].push(self.points + l as usize);
            adj[self.points + l as usize].push(p as usize);
        }
        adj
    }

    fn label(&self, v: usize) -> String {
        if v < self.points {
            format!("p{v}")
        } else {
            format!("L{}", v - self.points)
        }
    }

    /// Checks that the geometry is a generalized `gon`-gon: every element
    /// on at least two others, incidence graph of girth `2·gon` and diameter
    /// `gon`.
    pub fn check_polygon(&self, gon: usize) -> Result<()> {
        let fail = |reason: String| Err(Error::NotPolygon { gon, reason });
        if gon < 2 {
            return fail("gon must be at least 2".into());
        }
        let adj = self.graph();
        if let Some(v) = adj.iter().position(|n| n.len() < 2) {
            return fail(format!(
                "{} is incident with fewer than two elements",
                self.label(v)
            ));
        }
        if let Some(cycle) = self.short_cycle(&adj, 2 * gon) {
            let names: Vec<String> = cycle.iter().map(|&v| self.label(v)).collect();
            return fail(format!(
                "cycle of length {}: {}",
                cycle.len(),
                names.join(" - ")
            ));
        }
        for v in 0..adj.len() {
            let (dist, parent) = bfs(&adj, v);
            for (w, &d) in dist.iter().enumerate() {
                if d == usize::MAX {
                    return fail(format!(
                        "{} and {} are not connected",
                        self.label(v),
                        self.label(w)
                    ));
                }
                if d > gon {
                    let mut path = vec![w];
                    while let Some(&p) = path.last().and_then(|&x| parent[x].as_ref()) {
                        path.push(p);
                    }
                    let names: Vec<String> = path.iter().rev().map(|&x| self.label(x)).collect();
                    return fail(format!("distance {d} > {gon} along {}", names.join(" - ")));
                }
            }
        }
        Ok(())
    }

    /// A shortest cycle, if shorter than `bound`.
    fn short_cycle(&self, adj: &[Vec<usize>], bound: usize) -> Option<Vec<usize>> {
        let mut best: Option<Vec<usize>> = None;
        for v in 0..adj.len() {
            let (dist, parent) = bfs(adj, v);
            for u in 0..adj.len() {
                for &w in &adj[u] {
                    if u > w || parent[u] == Some(w) || parent[w] == Some(u) {
                        continue;
                    }
                    if dist[u] == usize::MAX || dist[w] == usize::MAX {
                        continue;
                    }
                    let len = dist[u] + dist[w] + 1;
                    if len >= bound || best.as_ref().is_some_and(|b| b.len() <= len) {
                        continue;
                    }
                    let walk = |mut x: usize| {
                        let mut path = vec![x];
                        while let Some(p) = parent[x] {
                            path.push(p);
                            x = p;
                        }
                        path
                    };
                    let pu = walk(u);
                    let pw = walk(w);
                    // u up to the root, then down to w.
                    let mut full: Vec<usize> = pu.clone();
                    full.extend(pw.iter().rev().skip(1));
                    let distinct: BTreeSet<usize> = full.iter().copied().collect();
                    if distinct.len() == full.len() && full.len() == len {
                        best = Some(full);
                    }
                }
            }
        }
        best
    }

    /// The flag building: chambers are incident pairs in `(point, line)`
    /// order; `s0` changes the point along the line, `s1` changes the line
    /// through the point.
    pub fn flag_building(&self, gon: usize) -> Result<Building> {
        self.check_polygon(gon)?;
        let flags = &self.incidence;
        let mut by_line: Vec<Vec<Chamber>> = vec![Vec::new(); self.lines];
        let mut by_point: Vec<Vec<Chamber>> = vec![Vec::new(); self.points];
        for (i, &(p, l)) in flags.iter().enumerate() {
            by_line[l as usize].push(i as Chamber);
            by_point[p as usize].push(i as Chamber);
        }
        let system = CoxeterSystem::dihedral(gon as u32);
        Building::from_panels(system, flags.len(), vec![by_line, by_point])
    }
}

fn bfs(adj: &[Vec<usize>], start: usize) -> (Vec<usize>, Vec<Option<usize>>) {
    let mut dist = vec![usize::MAX; adj.len()];
    let mut parent = vec![None; adj.len()];
    dist[start] = 0;
    let mut queue = VecDeque::from([start]);
    while let Some(v) = queue.pop_front() {
        for &w in &adj[v] {
            if dist[w] == usize::MAX {
                dist[w] = dist[v] + 1;
                parent[w] = Some(v);
                queue.push_back(w);
            }
        }
    }
    (dist, parent)
}

/// The rank-1 building on `n` chambers: every two chambers are `s`-adjacent.
pub fn rank1_building(n: usize) -> Result<Building> {
    if n < 2 {
        return Err(Error::precondition(
            "a rank-1 building needs at least two chambers",
        ));
    }
    Building::from_panels(
        CoxeterSystem::a1(),
        n,
        vec![vec![(0..n as Chamber).collect()]],
    )
}

/// Addition and multiplication tables of GF(q) for q = 2, 3, 4. GF(4) is
/// `{0, 1, a, a+1}` with `a² = a + 1`.
/// Addition and multiplication tables.
type FieldTables = (Vec<Vec<u8>>, Vec<Vec<u8>>);

fn field(q: usize) -> Result<FieldTables> {
    match q {
        2 | 3 => {
            let add = (0..q)
                .map(|x| (0..q).map(|y| ((x + y) % q) as u8).collect())
                .collect();
            let mul = (0..q)
                .map(|x| (0..q).map(|y| ((x * y) % q) as u8).collect())
                .collect();
            Ok((add, mul))
        }
        4 => {
            let add = (0..4u8)
                .map(|x| (0..4u8).map(|y| x ^ y).collect())
                .collect();
            let mul = vec![
                vec![0, 0, 0, 0],
                vec![0, 1, 2, 3],
                vec![0, 2, 3, 1],
                vec![0, 3, 1, 2],
            ];
            Ok((add, mul))
        }
        _ => Err(Error::precondition(format!(
            "PG(2,{q}) is not supported (q ∈ {{2,3,4}})"
        ))),
    }
}

/// The projective plane PG(2,q): points and lines are the normalized
/// nonzero vectors of GF(q)³ (first nonzero coordinate 1) in lexicographic
/// order; `p` lies on `L` when `p·L = 0`.
pub fn projective_plane(q: usize) -> Result<IncidenceGeometry> {
    let (add, mul) = field(q)?;
    let vectors = plane_vectors(q);
    let dot = |u: &[u8; 3], v: &[u8; 3]| {
        (0..3).fold(0u8, |acc, i| {
            add[acc as usize][mul[u[i] as usize][v[i] as usize] as usize]
        })
    };
    let mut pairs = Vec::new();
    for (i, p) in vectors.iter().enumerate() {
        for (j, l) in vectors.iter().enumerate() {
            if dot(p, l) == 0 {
                pairs.push((i as u32, j as u32));
            }
        }
    }
    IncidenceGeometry::new(vectors.len(), vectors.len(), pairs)
}

fn plane_vectors(q: usize) -> Vec<[u8; 3]> {
    let mut vectors: Vec<[u8; 3]> = Vec::new();
    for a in 0..q as u8 {
        for b in 0..q as u8 {
            for c in 0..q as u8 {
                let v = [a, b, c];
                if v.iter().find(|&&x| x != 0) == Some(&1) {
                    vectors.push(v);
                }
            }
        }
    }
    vectors
}

/// The chamber map of PG(2,q) induced by permuting coordinates: point and
/// line vectors both have their coordinates permuted, which preserves
/// `p·L = 0`.
pub fn pg2_coordinate_collineation(q: usize, perm: [usize; 3]) -> Result<Vec<Chamber>> {
    let mut check = perm;
    check.sort_unstable();
    if check != [0, 1, 2] {
        return Err(Error::precondition(format!(
            "{perm:?} is not a permutation of 0..3"
        )));
    }
    let (_, mul) = field(q)?;
    let geo = projective_plane(q)?;
    let vectors = plane_vectors(q);
    let index: HashMap<[u8; 3], u32> = vectors
        .iter()
        .enumerate()
        .map(|(i, v)| (*v, i as u32))
        .collect();
    let normalize = |v: [u8; 3]| {
        let lead = *v.iter().find(|&&x| x != 0).expect("nonzero vector") as usize;
        let inv = (1..q).find(|&y| mul[lead][y] == 1).expect("field inverse");
        v.map(|x| mul[inv][x as usize])
    };
    let image = |i: u32| index[&normalize([0, 1, 2].map(|k| vectors[i as usize][perm[k]]))];
    Ok(geo
        .incidence
        .iter()
        .map(|&(p, l)| {
            geo.incidence
                .binary_search(&(image(p), image(l)))
                .expect("collineation preserves incidence") as Chamber
        })
        .collect())
}

pub fn pg2_flag_building(q: usize) -> Result<Building> {
    projective_plane(q)?.flag_building(3)
}

/// GQ(2,2): points are the 15 pairs from `{0..5}`, lines the 15 partitions
/// of `{0..5}` into three pairs.
pub fn gq22() -> IncidenceGeometry {
    let mut duads: Vec<(u8, u8)> = Vec::new();
    for a in 0..6 {
        for b in a + 1..6 {
            duads.push((a, b));
        }
    }
    let mut synthemes: Vec<[usize; 3]> = Vec::new();
    for (i, x) in duads.iter().enumerate() {
        for (j, y) in duads.iter().enumerate().skip(i + 1) {
            for (k, z) in duads.iter().enumerate().skip(j + 1) {
                let mut pts = [x.0, x.1, y.0, y.1, z.0, z.1];
                pts.sort_unstable();
                if pts == [0, 1, 2, 3, 4, 5] {
                    synthemes.push([i, j, k]);
                }
            }
        }
    }
    let pairs = synthemes
        .iter()
        .enumerate()
        .flat_map(|(l, s)| s.iter().map(move |&p| (p as u32, l as u32)));
    IncidenceGeometry::new(duads.len(), synthemes.len(), pairs).expect("in range")
}

pub fn gq22_flag_building() -> Result<Building> {
    gq22().flag_building(4)
}

/// Parses the line format `points n`, `lines m`, `type gon k`, then one
/// `p i j` per incidence of point `i` with line `j` (0-based). `#` starts a
/// comment.
pub fn parse_incidence(text: &str) -> Result<(IncidenceGeometry, usize)> {
    let mut points = None;
    let mut lines = None;
    let mut gon = None;
    let mut pairs = Vec::new();
    for (no, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |message: String| Error::Parse {
            line: no + 1,
            message,
        };
        let words: Vec<&str> = line.split_whitespace().collect();
        let num = |w: &str| {
            w.parse::<usize>()
                .map_err(|_| err(format!("expected a number, found {w:?}")))
        };
        match words.as_slice() {
            ["points", n] => points = Some(num(n)?),
            ["lines", n] => lines = Some(num(n)?),
            ["type", "gon", k] => gon = Some(num(k)?),
            ["p", i, j] => {
                let (i, j) = (num(i)?, num(j)?);
                let (np, nl) = match (points, lines) {
                    (Some(p), Some(l)) => (p, l),
                    _ => return Err(err("incidence before the points/lines header".into())),
                };
                if i >= np || j >= nl {
                    return Err(err(format!("incidence ({i}, {j}) out of range")));
                }
                pairs.push((i as u32, j as u32));
            }
            _ => return Err(err(format!("unrecognized line {line:?}"))),
        }
    }
    let missing = |what: &str| Error::Parse {
        line: 0,
        message: format!("missing `{what}` header"),
    };
    let geometry = IncidenceGeometry::new(
        points.ok_or_else(|| missing("points"))?,
        lines.ok_or_else(|| missing("lines"))?,
        pairs,
    )?;
    Ok((geometry, gon.ok_or_else(|| missing("type gon"))?))
}

pub fn from_incidence_file(path: &Path) -> Result<Building> {
    let text = std::fs::read_to_string(path)?;
    let (geometry, gon) = parse_incidence(&text)?;
    geometry.flag_building(gon)
}

/// Writes a geometry in the incidence file format.
pub fn format_incidence(g: &IncidenceGeometry, gon: usize) -> String {
    let mut out = format!("points {}\nlines {}\ntype gon {gon}\n", g.points, g.lines);
    for &(p, l) in &g.incidence {
        out.push_str(&format!("p {p} {l}\n"));
    }
    out
}

/// A type-preserving isomorphism `a → b` (chamber map), if any.
pub fn find_isomorphism(a: &Building, b: &Building) -> Option<Vec<Chamber>> {
    if a.chamber_count() != b.chamber_count() || a.system().matrix() != b.system().matrix() {
        return None;
    }
    let n = a.chamber_count();
    // Chambers of `a` in BFS order, each with an already-placed neighbour.
    let mut order: Vec<(Chamber, Option<(Chamber, usize)>)> = vec![(0, None)];
    let mut seen = vec![false; n];
    seen[0] = true;
    let mut i = 0;
    while i < order.len() {
        let c = order[i].0;
        for s in 0..a.rank() {
            for &e in a.panel(s, c) {
                if !seen[e as usize] {
                    seen[e as usize] = true;
                    order.push((e, Some((c, s))));
                }
            }
        }
        i += 1;
    }
    let mut image = vec![Chamber::MAX; n];
    let mut used = vec![false; n];
    for start in 0..n as Chamber {
        image[0] = start;
        used[start as usize] = true;
        if extend_iso(a, b, &order, 1, &mut image, &mut used) {
            return Some(image);
        }
        used[start as usize] = false;
    }
    None
}

fn extend_iso(
    a: &Building,
    b: &Building,
    order: &[(Chamber, Option<(Chamber, usize)>)],
    k: usize,
    image: &mut Vec<Chamber>,
    used: &mut Vec<bool>,
) -> bool {
    if k == order.len() {
        return true;
    }
    let (c, Some((parent, s))) = order[k] else {
        unreachable!("only the root lacks a parent")
    };
    let candidates: Vec<Chamber> = b.panel(s, image[parent as usize]).to_vec();
    for e in candidates {
        if used[e as usize] {
            continue;
        }
        let fits = order[..k]
            .iter()
            .all(|&(x, _)| a.delta_id(x, c) == b.delta_id(image[x as usize], e));
        if fits {
            image[c as usize] = e;
            used[e as usize] = true;
            if extend_iso(a, b, order, k + 1, image, used) {
                return true;
            }
            used[e as usize] = false;
        }
    }
    false
}

/// What to build: `{"kind": "pg2", "q": 3}` and friends. The short forms
/// `rank1:4`, `pg2:3`, `gq22` and `file:<path>` parse too.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum BuildingSpec {
    Rank1 { chambers: usize },
    Pg2 { q: usize },
    Gq22,
    File { path: String },
}

impl BuildingSpec {
    pub fn build(&self) -> Result<Building> {
        match self {
            BuildingSpec::Rank1 { chambers } => rank1_building(*chambers),
            BuildingSpec::Pg2 { q } => pg2_flag_building(*q),
            BuildingSpec::Gq22 => gq22_flag_building(),
            BuildingSpec::File { path } => from_incidence_file(Path::new(path)),
        }
    }
}

impl fmt::Display for BuildingSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BuildingSpec::Rank1 { chambers } => write!(f, "rank1:{chambers}"),
            BuildingSpec::Pg2 { q } => write!(f, "pg2:{q}"),
            BuildingSpec::Gq22 => write!(f, "gq22"),
            BuildingSpec::File { path } => write!(f, "file:{path}"),
        }
    }
}

impl FromStr for BuildingSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse {
            line: 1,
            message: format!("unknown building {s:?}"),
        };
        let (kind, arg) = s.split_once(':').unwrap_or((s, ""));
        match kind {
            "rank1" => Ok(BuildingSpec::Rank1 {
                chambers: arg.parse().map_err(|_| bad())?,
            }),
            "pg2" => Ok(BuildingSpec::Pg2 {
                q: arg.parse().map_err(|_| bad())?,
            }),
            "gq22" if arg.is_empty() => Ok(BuildingSpec::Gq22),
            "file" if !arg.is_empty() => Ok(BuildingSpec::File { path: arg.into() }),
            _ => Err(bad()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plane_sizes() {
        for (q, n) in [(2, 7), (3, 13), (4, 21)] {
            let g = projective_plane(q).unwrap();
            assert_eq!(g.points, n);
            assert_eq!(g.incidence.len(), n * (q + 1));
        }
    }

    #[test]
    fn coordinate_collineations_are_automorphisms() {
        for q in [2, 3] {
            let b = pg2_flag_building(q).unwrap();
            let phi = pg2_coordinate_collineation(q, [1, 2, 0]).unwrap();
            let mut image = phi.clone();
            image.sort_unstable();
            image.dedup();
            assert_eq!(image.len(), b.chamber_count());
            assert!(phi.iter().enumerate().any(|(c, &d)| c as Chamber != d));
            for c in b.chambers() {
                for d in b.chambers() {
                    assert_eq!(
                        b.delta_id(c, d),
                        b.delta_id(phi[c as usize], phi[d as usize])
                    );
                }
            }
        }
        assert!(pg2_coordinate_collineation(2, [0, 0, 1]).is_err());
    }

    #[test]
    fn gq_sizes() {
        let g = gq22();
        assert_eq!((g.points, g.lines, g.incidence.len()), (15, 15, 45));
        g.check_polygon(4).unwrap();
    }

    #[test]
    fn four_cycle_rejected() {
        let g = IncidenceGeometry::new(2, 2, [(0, 0), (0, 1), (1, 0), (1, 1)]).unwrap();
        let err = g.check_polygon(3).unwrap_err();
        let Error::NotPolygon { reason, .. } = err else {
            panic!("{err}")
        };
        assert!(reason.contains("cycle of length 4"), "{reason}");
    }

    #[test]
    fn spec_forms() {
        assert_eq!(
            "pg2:3".parse::<BuildingSpec>().unwrap(),
            BuildingSpec::Pg2 { q: 3 }
        );
        assert_eq!("gq22".parse::<BuildingSpec>().unwrap(), BuildingSpec::Gq22);
        assert!("pg2:x".parse::<BuildingSpec>().is_err());
        let json = serde_json::to_string(&BuildingSpec::Rank1 { chambers: 4 }).unwrap();
        assert_eq!(json, r#"{"kind":"rank1","chambers":4}"#);
    }

    #[test]
    fn parse_errors_have_lines() {
        let err = parse_incidence("points 3\nlines x\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
    }
}
