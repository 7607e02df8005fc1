use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::{Building, Chamber};
use crate::coxeter::GenSet;

/// A nonempty simplex, stored as its cotype `J` and the least chamber of
/// the `J`-residue of chambers containing it. Cotype `∅` is a chamber; in
/// rank 2 a simplex of cotype `{s}` is a vertex and also a panel.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SimplexRef {
    pub cotype: GenSet,
    pub least: Chamber,
}

impl SimplexRef {
    pub fn is_chamber(&self) -> bool {
        self.cotype == 0
    }

    pub fn is_panel(&self) -> bool {
        self.cotype.count_ones() == 1
    }
}

/// A face-closed set of nonempty simplices. The empty complex is a valid
/// value.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SubComplex {
    simplices: BTreeSet<SimplexRef>,
}

impl SubComplex {
    pub fn empty() -> Self {
        SubComplex::default()
    }

    /// Wraps a set already known to be face-closed.
    pub fn from_set(simplices: BTreeSet<SimplexRef>) -> Self {
        SubComplex { simplices }
    }

    /// All nonempty faces of the given simplices.
    pub fn face_closure<'a>(
        b: &Building,
        simplices: impl IntoIterator<Item = &'a SimplexRef>,
    ) -> Self {
        let all = b.system().all_generators();
        let mut out = BTreeSet::new();
        for a in simplices {
            if a.cotype == all {
                continue;
            }
            out.extend(b.faces(a));
        }
        SubComplex { simplices: out }
    }

    /// Face closure of a chamber set.
    pub fn of_chambers(b: &Building, chambers: impl IntoIterator<Item = Chamber>) -> Self {
        let mut out = BTreeSet::new();
        for c in chambers {
            out.extend(b.chamber_faces(c));
        }
        SubComplex { simplices: out }
    }

    pub fn intersect(&self, other: &SubComplex) -> SubComplex {
        SubComplex {
            simplices: self
                .simplices
                .intersection(&other.simplices)
                .copied()
                .collect(),
        }
    }

    pub fn union(&self, other: &SubComplex) -> SubComplex {
        SubComplex {
            simplices: self.simplices.union(&other.simplices).copied().collect(),
        }
    }

    pub fn contains(&self, a: &SimplexRef) -> bool {
        self.simplices.contains(a)
    }

    pub fn is_subset(&self, other: &SubComplex) -> bool {
        self.simplices.is_subset(&other.simplices)
    }

    pub fn iter(&self) -> impl Iterator<Item = &SimplexRef> {
        self.simplices.iter()
    }

    pub fn len(&self) -> usize {
        self.simplices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.simplices.is_empty()
    }

    pub fn simplices(&self) -> &BTreeSet<SimplexRef> {
        &self.simplices
    }

    pub fn chambers(&self) -> Vec<Chamber> {
        self.simplices
            .iter()
            .filter(|a| a.is_chamber())
            .map(|a| a.least)
            .collect()
    }

    /// Largest simplex dimension; `-1` for the empty complex.
    pub fn dimension(&self, b: &Building) -> i32 {
        self.simplices
            .iter()
            .map(|a| b.simplex_dimension(a))
            .max()
            .unwrap_or(-1)
    }

    /// `dim Δ − dim κ`.
    pub fn codimension(&self, b: &Building) -> i32 {
        b.rank() as i32 - 1 - self.dimension(b)
    }

    /// Simplices not a proper face of another member.
    pub fn maximal_simplices(&self, b: &Building) -> Vec<SimplexRef> {
        self.simplices
            .iter()
            .filter(|a| !self.simplices.iter().any(|x| x != *a && b.is_face(a, x)))
            .copied()
            .collect()
    }

    /// Whether every face of every member is a member.
    pub fn is_face_closed(&self, b: &Building) -> bool {
        self.simplices
            .iter()
            .all(|a| b.faces(a).all(|f| self.simplices.contains(&f)))
    }
}

impl FromIterator<SimplexRef> for SubComplex {
    fn from_iter<I: IntoIterator<Item = SimplexRef>>(iter: I) -> Self {
        SubComplex {
            simplices: iter.into_iter().collect(),
        }
    }
}
