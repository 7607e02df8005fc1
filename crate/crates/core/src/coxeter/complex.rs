//! The Coxeter complex `Σ(W,S)`: chambers are elements of `W`, simplices are
//! parabolic cosets `wW_J`. Roots and walls are kept intensionally as
//! reflections, so everything here works for infinite `W` as well.

use std::collections::{BTreeSet, HashSet, VecDeque};

use serde::{Deserialize, Serialize};

use super::system::{CoxeterSystem, GenSet, WeylElement};
use crate::error::{Error, Result};

/// A reflection `w·s·w⁻¹`; identifies a wall of `Σ(W,S)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Reflection {
    element: WeylElement,
}

impl Reflection {
    pub fn element(&self) -> &WeylElement {
        &self.element
    }
}

/// Which half of `Σ(W,S)` a root is. The positive root of `t` is
/// `{w : ℓ(tw) > ℓ(w)}` and contains the identity chamber.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Positive,
    Negative,
}

impl Side {
    pub fn flip(self) -> Side {
        match self {
            Side::Positive => Side::Negative,
            Side::Negative => Side::Positive,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CoxRoot {
    pub reflection: Reflection,
    pub side: Side,
}

impl CoxRoot {
    pub fn opposite(&self) -> CoxRoot {
        CoxRoot {
            reflection: self.reflection.clone(),
            side: self.side.flip(),
        }
    }
}

/// The simplex `wW_J`, stored with its minimal coset representative. `J` is
/// the cotype: `J = ∅` is a chamber, `J = S` the empty simplex.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CoxSimplex {
    pub cotype: GenSet,
    pub representative: WeylElement,
}

/// Support of a simplex: the intersection of the walls through it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Support {
    /// No wall contains the simplex (it is a chamber), so the intersection
    /// over the empty family is the whole complex.
    Whole,
    Walls(Vec<Reflection>),
}

impl CoxeterSystem {
    /// The reflection `w·s·w⁻¹`, i.e. the wall crossed between `w` and `ws`.
    pub fn reflection(&self, w: &WeylElement, s: usize) -> Result<Reflection> {
        let g = self.generator(s)?;
        Ok(Reflection {
            element: self.conjugate(w, &g)?,
        })
    }

    /// Accepts `t` if it is a reflection of `W` (an odd-length involution of
    /// the form `w·s·w⁻¹`).
    pub fn as_reflection(&self, t: &WeylElement) -> Result<Reflection> {
        if t.len() % 2 != 1 {
            return Err(Error::precondition(format!("{t:?} has even length")));
        }
        // The normal form need not be a palindrome, so peel conjugations
        // s·t·s by the first letter until a generator is left.
        let mut cur = t.clone();
        while cur.len() > 1 {
            let s = cur.word()[0] as usize;
            let next = self.mul_gen(&self.gen_mul(s, &cur)?, s)?;
            if next.len() >= cur.len() {
                return Err(Error::precondition(format!("{t:?} is not a reflection")));
            }
            cur = next;
        }
        Ok(Reflection { element: t.clone() })
    }

    pub fn root(&self, reflection: &Reflection, side: Side) -> CoxRoot {
        CoxRoot {
            reflection: reflection.clone(),
            side,
        }
    }

    /// Whether chamber `w` lies in `root`.
    pub fn root_side(&self, root: &CoxRoot, w: &WeylElement) -> Result<bool> {
        let tw = self.multiply(root.reflection.element(), w)?;
        let positive = tw.len() > w.len();
        Ok(positive == (root.side == Side::Positive))
    }

    /// Left inversion set `{t : ℓ(tw) < ℓ(w)}`: the walls separating the
    /// identity chamber from `w`, listed along the normal-form gallery.
    pub fn inversion_walls(&self, w: &WeylElement) -> Result<Vec<Reflection>> {
        let mut out = Vec::with_capacity(w.len());
        let mut prefix = self.identity();
        for &g in w.word() {
            out.push(self.reflection(&prefix, g as usize)?);
            prefix = self.mul_gen(&prefix, g as usize)?;
        }
        Ok(out)
    }

    /// Walls crossed by a minimal gallery from `u` to `v`.
    pub fn separating_walls(
        &self,
        u: &WeylElement,
        v: &WeylElement,
    ) -> Result<BTreeSet<Reflection>> {
        let x = self.delta(u, v)?;
        let mut out = BTreeSet::new();
        for t in self.inversion_walls(&x)? {
            out.insert(Reflection {
                element: self.conjugate(u, t.element())?,
            });
        }
        Ok(out)
    }

    /// Convex hull of a finite chamber set: the intersection of all roots
    /// containing `F`.
    ///
    /// A chamber `w` is in the hull iff every wall separating `w` from a
    /// fixed `f₀ ∈ F` also separates two members of `F`; only the finitely
    /// many walls separating pairs of `F` matter. The hull is materialized
    /// by walking outward from `f₀` across those walls only.
    pub fn convex_hull(&self, f: &[WeylElement]) -> Result<BTreeSet<WeylElement>> {
        let Some(f0) = f.iter().min() else {
            return Ok(BTreeSet::new());
        };
        let f0_inv = self.inverse(f0)?;
        let mut walls: HashSet<WeylElement> = HashSet::new();
        for x in f {
            let rel = self.multiply(&f0_inv, x)?;
            for t in self.inversion_walls(&rel)? {
                walls.insert(t.element);
            }
        }
        let mut seen: BTreeSet<WeylElement> = BTreeSet::new();
        let mut queue = VecDeque::new();
        seen.insert(self.identity());
        queue.push_back(self.identity());
        while let Some(w) = queue.pop_front() {
            let desc = self.right_descents(&w);
            for s in 0..self.rank() {
                if desc & (1 << s) != 0 {
                    continue;
                }
                let t = self.reflection(&w, s)?;
                if !walls.contains(t.element()) {
                    continue;
                }
                let ws = self.mul_gen(&w, s)?;
                if seen.insert(ws.clone()) {
                    queue.push_back(ws);
                }
            }
        }
        seen.iter().map(|w| self.multiply(f0, w)).collect()
    }

    pub fn is_convex_chamber_set(&self, k: &[WeylElement]) -> Result<bool> {
        let set: BTreeSet<WeylElement> = k.iter().cloned().collect();
        Ok(self.convex_hull(k)? == set)
    }

    /// The simplex `wW_J` with its minimal coset representative.
    pub fn simplex(&self, cotype: GenSet, w: &WeylElement) -> Result<CoxSimplex> {
        let mut rep = w.clone();
        loop {
            let desc = self.right_descents(&rep) & cotype;
            if desc == 0 {
                break;
            }
            rep = self.mul_gen(&rep, desc.trailing_zeros() as usize)?;
        }
        Ok(CoxSimplex {
            cotype: cotype & self.all_generators(),
            representative: rep,
        })
    }

    /// Whether chamber `w` has `a` as a face.
    pub fn simplex_contains_chamber(&self, a: &CoxSimplex, w: &WeylElement) -> Result<bool> {
        let x = self.delta(&a.representative, w)?;
        Ok(self.in_parabolic(&x, a.cotype))
    }

    /// Whether the wall of `t` contains the simplex `a`: `t` fixes `wW_J`
    /// iff `w⁻¹tw ∈ W_J`.
    pub fn wall_contains(&self, t: &Reflection, a: &CoxSimplex) -> Result<bool> {
        let winv = self.inverse(&a.representative)?;
        let c = self.conjugate(&winv, t.element())?;
        Ok(self.in_parabolic(&c, a.cotype))
    }

    /// Support of `a`. Requires finite `W` to list the walls.
    pub fn cox_support(&self, a: &CoxSimplex) -> Result<Support> {
        if a.cotype == 0 {
            return Ok(Support::Whole);
        }
        let mut walls = Vec::new();
        for t in self.finite_reflections()? {
            if self.wall_contains(&t, a)? {
                walls.push(t);
            }
        }
        Ok(Support::Walls(walls))
    }

    /// All reflections of a finite `W`, sorted.
    pub fn finite_reflections(&self) -> Result<Vec<Reflection>> {
        let group = self.finite_elements()?;
        let mut out = BTreeSet::new();
        for w in &group {
            for s in 0..self.rank() {
                out.insert(self.reflection(w, s)?);
            }
        }
        Ok(out.into_iter().collect())
    }

    /// Every element of a finite `W` in ShortLex order.
    pub fn finite_elements(&self) -> Result<Vec<WeylElement>> {
        const LIMIT: usize = 1 << 14;
        let m = self.matrix();
        if (0..self.rank()).any(|s| (0..self.rank()).any(|t| m.order(s, t).is_none())) {
            return Err(Error::InfiniteGroup { limit: LIMIT });
        }
        let mut out = vec![self.identity()];
        let mut layer = vec![self.identity()];
        loop {
            let mut next = BTreeSet::new();
            for w in &layer {
                let desc = self.right_descents(w);
                for s in 0..self.rank() {
                    if desc & (1 << s) == 0 {
                        next.insert(self.mul_gen(w, s)?);
                    }
                }
            }
            if next.is_empty() {
                return Ok(out);
            }
            out.extend(next.iter().cloned());
            if out.len() > LIMIT {
                return Err(Error::InfiniteGroup { limit: LIMIT });
            }
            layer = next.into_iter().collect();
        }
    }

    /// All simplices of `Σ(W,S)` for finite `W`, including the empty simplex.
    pub fn finite_simplices(&self) -> Result<BTreeSet<CoxSimplex>> {
        let elems = self.finite_elements()?;
        let mut out = BTreeSet::new();
        for j in 0..=self.all_generators() {
            for w in &elems {
                out.insert(self.simplex(j, w)?);
            }
        }
        Ok(out)
    }

    /// Projection of chamber `from` onto the residue `target`: the chamber of
    /// `wW_J` nearest to `from`.
    pub fn cox_projection(&self, target: &CoxSimplex, from: &WeylElement) -> Result<WeylElement> {
        let mut x = self.delta(&target.representative, from)?;
        let mut u = self.identity();
        loop {
            let desc = self.left_descents(&x) & target.cotype;
            if desc == 0 {
                break;
            }
            let s = desc.trailing_zeros() as usize;
            x = self.gen_mul(s, &x)?;
            u = self.mul_gen(&u, s)?;
        }
        self.multiply(&target.representative, &u)
    }
}

impl Support {
    pub fn is_whole(&self) -> bool {
        matches!(self, Support::Whole)
    }

    pub fn contains(&self, system: &CoxeterSystem, a: &CoxSimplex) -> Result<bool> {
        match self {
            Support::Whole => Ok(true),
            Support::Walls(ws) => {
                for t in ws {
                    if !system.wall_contains(t, a)? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
        }
    }

    /// Lists the simplices of the support (finite `W` only).
    pub fn simplices(&self, system: &CoxeterSystem) -> Result<BTreeSet<CoxSimplex>> {
        let mut out = BTreeSet::new();
        for a in system.finite_simplices()? {
            if self.contains(system, &a)? {
                out.insert(a);
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn el(sys: &CoxeterSystem, w: &[usize]) -> WeylElement {
        sys.normal_form(w).unwrap()
    }

    #[test]
    fn generator_root_contains_identity() {
        let sys = CoxeterSystem::a2();
        let t = sys.reflection(&sys.identity(), 0).unwrap();
        let root = sys.root(&t, Side::Positive);
        assert!(sys.root_side(&root, &sys.identity()).unwrap());
        assert!(!sys.root_side(&root, &el(&sys, &[0])).unwrap());
        assert!(sys.root_side(&root.opposite(), &el(&sys, &[0])).unwrap());
    }

    #[test]
    fn a2_roots_have_three_chambers() {
        let sys = CoxeterSystem::a2();
        let elems = sys.finite_elements().unwrap();
        let refl = sys.finite_reflections().unwrap();
        assert_eq!(refl.len(), 3);
        for t in &refl {
            for side in [Side::Positive, Side::Negative] {
                let root = sys.root(t, side);
                let n = elems
                    .iter()
                    .filter(|w| sys.root_side(&root, w).unwrap())
                    .count();
                assert_eq!(n, 3);
            }
        }
    }

    #[test]
    fn separating_walls_basic() {
        let sys = CoxeterSystem::a2();
        let w = el(&sys, &[0, 1]);
        assert!(sys.separating_walls(&w, &w).unwrap().is_empty());
        let s0 = sys
            .separating_walls(&sys.identity(), &el(&sys, &[0]))
            .unwrap();
        assert_eq!(s0.len(), 1);
        assert_eq!(s0.iter().next().unwrap().element().indices(), vec![0]);
        let w0 = el(&sys, &[0, 1, 0]);
        let all = sys.separating_walls(&sys.identity(), &w0).unwrap();
        assert_eq!(all.len(), 3);
        assert_eq!(
            all.into_iter().collect::<Vec<_>>(),
            sys.finite_reflections().unwrap()
        );
    }

    #[test]
    fn as_reflection_checks() {
        let sys = CoxeterSystem::a2();
        assert!(sys.as_reflection(&el(&sys, &[0, 1, 0])).is_ok());
        assert!(sys.as_reflection(&el(&sys, &[0, 1])).is_err());
        let b2 = CoxeterSystem::b2();
        assert!(b2.as_reflection(&el(&b2, &[0, 1, 0])).is_ok());
    }

    #[test]
    fn hull_examples() {
        let sys = CoxeterSystem::a2();
        let w = el(&sys, &[1]);
        assert_eq!(sys.convex_hull(std::slice::from_ref(&w)).unwrap().len(), 1);
        let hull = sys
            .convex_hull(&[sys.identity(), el(&sys, &[0, 1, 0])])
            .unwrap();
        assert_eq!(hull.len(), 6);
        assert!(!sys
            .is_convex_chamber_set(&[sys.identity(), el(&sys, &[0, 1, 0])])
            .unwrap());
        assert!(sys
            .is_convex_chamber_set(&[sys.identity(), el(&sys, &[1])])
            .unwrap());
    }

    #[test]
    fn hull_on_the_line() {
        // Alcove n of Ã₁ is the alternating word s0 s1 s0 ... of length n.
        let sys = CoxeterSystem::affine_a1();
        let alcove = |n: usize| el(&sys, &(0..n).map(|i| i % 2).collect::<Vec<_>>());
        let hull = sys.convex_hull(&[alcove(0), alcove(3)]).unwrap();
        let want: BTreeSet<_> = (0..=3).map(alcove).collect();
        assert_eq!(hull, want);
    }

    #[test]
    fn support_of_panel_vertex_and_empty() {
        let sys = CoxeterSystem::a2();
        let chamber = sys.simplex(0, &sys.identity()).unwrap();
        assert!(sys.cox_support(&chamber).unwrap().is_whole());

        // In rank 2 a panel is a vertex; exactly one wall passes through it.
        let v = sys.simplex(0b01, &sys.identity()).unwrap();
        let Support::Walls(walls) = sys.cox_support(&v).unwrap() else {
            panic!("panel support must be a wall")
        };
        assert_eq!(walls.len(), 1);
        let simplices = sys.cox_support(&v).unwrap().simplices(&sys).unwrap();
        let vertices: Vec<_> = simplices
            .iter()
            .filter(|a| a.cotype.count_ones() == 1)
            .collect();
        assert_eq!(vertices.len(), 2);
        assert!(vertices.contains(&&v));

        let empty = sys.simplex(0b11, &sys.identity()).unwrap();
        let Support::Walls(all) = sys.cox_support(&empty).unwrap() else {
            panic!()
        };
        assert_eq!(all.len(), 3);
        let s = sys.cox_support(&empty).unwrap().simplices(&sys).unwrap();
        assert!(s.iter().all(|a| a.cotype == 0b11));
    }

    #[test]
    fn projection_inside_and_gate() {
        let sys = CoxeterSystem::a2();
        let panel = sys.simplex(0b01, &sys.identity()).unwrap();
        assert_eq!(
            sys.cox_projection(&panel, &el(&sys, &[0])).unwrap(),
            el(&sys, &[0])
        );
        let from = el(&sys, &[1, 0, 1]);
        let p = sys.cox_projection(&panel, &from).unwrap();
        let d0 = sys.distance(&sys.identity(), &from).unwrap();
        let d1 = sys.distance(&el(&sys, &[0]), &from).unwrap();
        let want = if d0 < d1 {
            sys.identity()
        } else {
            el(&sys, &[0])
        };
        assert_eq!(p, want);
    }
}
