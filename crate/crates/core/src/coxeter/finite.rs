//! Finite Coxeter groups as dense tables. Element ids follow ShortLex order,
//! so id 0 is the identity and comparisons of ids agree with comparisons of
//! normal forms.

use std::collections::HashMap;

use super::system::{CoxeterSystem, GenSet, WeylElement};
use crate::error::{Error, Result};

/// Index of an element in a [`FiniteGroup`].
pub type ElemId = u16;

/// Groups larger than this are rejected as too big for dense tables.
pub const MAX_ORDER: usize = 4096;

#[derive(Clone, Debug)]
pub struct FiniteGroup {
    system: CoxeterSystem,
    elements: Vec<WeylElement>,
    index: HashMap<WeylElement, ElemId>,
    mul: Vec<ElemId>,
    inv: Vec<ElemId>,
    right_gen: Vec<ElemId>,
    desc: Vec<GenSet>,
}

impl FiniteGroup {
    pub fn new(system: &CoxeterSystem) -> Result<Self> {
        let elements = system.finite_elements()?;
        let n = elements.len();
        if n > MAX_ORDER {
            return Err(Error::InfiniteGroup { limit: MAX_ORDER });
        }
        let index: HashMap<WeylElement, ElemId> = elements
            .iter()
            .enumerate()
            .map(|(i, w)| (w.clone(), i as ElemId))
            .collect();
        let rank = system.rank();
        let mut right_gen = vec![0; n * rank];
        let mut desc = vec![0; n];
        for (i, w) in elements.iter().enumerate() {
            for s in 0..rank {
                right_gen[i * rank + s] = index[&system.mul_gen(w, s)?];
            }
            desc[i] = system.right_descents(w);
        }
        // u·v by walking the letters of v through the generator table.
        let mut mul = vec![0; n * n];
        for u in 0..n {
            for (v, w) in elements.iter().enumerate() {
                let mut x = u as ElemId;
                for &g in w.word() {
                    x = right_gen[x as usize * rank + g as usize];
                }
                mul[u * n + v] = x;
            }
        }
        let mut inv = vec![0; n];
        for u in 0..n {
            for v in 0..n {
                if mul[u * n + v] == 0 {
                    inv[u] = v as ElemId;
                    break;
                }
            }
        }
        Ok(FiniteGroup {
            system: system.clone(),
            elements,
            index,
            mul,
            inv,
            right_gen,
            desc,
        })
    }

    pub fn system(&self) -> &CoxeterSystem {
        &self.system
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn rank(&self) -> usize {
        self.system.rank()
    }

    pub fn element(&self, id: ElemId) -> &WeylElement {
        &self.elements[id as usize]
    }

    pub fn elements(&self) -> &[WeylElement] {
        &self.elements
    }

    pub fn id(&self, w: &WeylElement) -> Result<ElemId> {
        self.index.get(w).copied().ok_or(Error::MixedSystems)
    }

    pub fn mul(&self, a: ElemId, b: ElemId) -> ElemId {
        self.mul[a as usize * self.order() + b as usize]
    }

    pub fn inv(&self, a: ElemId) -> ElemId {
        self.inv[a as usize]
    }

    /// `a⁻¹·b`.
    pub fn delta(&self, a: ElemId, b: ElemId) -> ElemId {
        self.mul(self.inv(a), b)
    }

    pub fn mul_gen(&self, a: ElemId, s: usize) -> ElemId {
        self.right_gen[a as usize * self.rank() + s]
    }

    pub fn gen(&self, s: usize) -> ElemId {
        self.mul_gen(0, s)
    }

    pub fn len(&self, a: ElemId) -> usize {
        self.elements[a as usize].len()
    }

    pub fn right_descents(&self, a: ElemId) -> GenSet {
        self.desc[a as usize]
    }

    /// The longest element `w₀`.
    pub fn longest(&self) -> ElemId {
        (self.order() - 1) as ElemId
    }

    /// The ShortLex normal word of `a` minus its last letter, and that letter.
    /// `None` for the identity.
    pub fn split_last(&self, a: ElemId) -> Option<(ElemId, usize)> {
        let w = self.element(a);
        let &last = w.word().last()?;
        let s = last as usize;
        Some((self.mul_gen(a, s), s))
    }

    pub fn in_parabolic(&self, a: ElemId, j: GenSet) -> bool {
        self.system.in_parabolic(self.element(a), j)
    }

    /// Letters occurring in any reduced word of `a`.
    pub fn support(&self, a: ElemId) -> GenSet {
        self.element(a).word().iter().fold(0, |m, &g| m | (1 << g))
    }

    /// Reflections of `W` as element ids, sorted.
    pub fn reflections(&self) -> Vec<ElemId> {
        let mut out: Vec<ElemId> = (0..self.order())
            .filter(|&t| {
                let t = t as ElemId;
                self.len(t) % 2 == 1 && self.mul(t, t) == 0 && self.is_reflection(t)
            })
            .map(|t| t as ElemId)
            .collect();
        out.sort_unstable();
        out
    }

    fn is_reflection(&self, t: ElemId) -> bool {
        (0..self.order()).any(|w| {
            (0..self.rank()).any(|s| {
                let w = w as ElemId;
                self.mul(self.mul(w, self.gen(s)), self.inv(w)) == t
            })
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn a2_table() {
        let g = FiniteGroup::new(&CoxeterSystem::a2()).unwrap();
        assert_eq!(g.order(), 6);
        assert_eq!(g.len(g.longest()), 3);
        assert_eq!(g.reflections().len(), 3);
        for a in 0..6 {
            assert_eq!(g.mul(a, g.inv(a)), 0);
        }
    }

    #[test]
    fn b2_table() {
        let g = FiniteGroup::new(&CoxeterSystem::b2()).unwrap();
        assert_eq!(g.order(), 8);
        assert_eq!(g.reflections().len(), 4);
        assert_eq!(g.len(g.longest()), 4);
    }

    #[test]
    fn infinite_rejected() {
        assert!(FiniteGroup::new(&CoxeterSystem::affine_a1()).is_err());
    }

    #[test]
    fn split_last_matches_word() {
        let g = FiniteGroup::new(&CoxeterSystem::b2()).unwrap();
        for a in 1..8u16 {
            let (p, s) = g.split_last(a).unwrap();
            assert_eq!(g.mul_gen(p, s), a);
            assert_eq!(g.len(p) + 1, g.len(a));
        }
    }
}
