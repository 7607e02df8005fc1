//! Coxeter systems and the word problem.
//!
//! Elements are carried as ShortLex-least reduced words. Reduction follows
//! Tits' solution: a word is reduced iff no sequence of braid moves produces
//! two equal adjacent letters, and all reduced words of an element are
//! connected by braid moves. The cache below memoizes, per element, its
//! normal form, descent sets and the neighbours `w·s`, so every word is
//! normalized one letter at a time against already-known elements.

use std::cmp::Ordering;
use std::collections::hash_map::DefaultHasher;
use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::{Arc, RwLock};

use serde::{Deserialize, Serialize};

use super::matrix::CoxeterMatrix;
use crate::error::{Error, Result};

/// Bitmask of generators.
pub type GenSet = u64;

const NONE: u32 = u32::MAX;

/// An element of `W`, stored as its ShortLex-least reduced word.
///
/// Ordering is ShortLex: by length, then lexicographically by word.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct WeylElement {
    word: Box<[u8]>,
    tag: u64,
}

impl WeylElement {
    pub fn word(&self) -> &[u8] {
        &self.word
    }

    pub fn indices(&self) -> Vec<usize> {
        self.word.iter().map(|&g| g as usize).collect()
    }

    /// Length `ℓ(w)`.
    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_identity(&self) -> bool {
        self.word.is_empty()
    }

    pub fn system_tag(&self) -> u64 {
        self.tag
    }
}

impl Ord for WeylElement {
    fn cmp(&self, other: &Self) -> Ordering {
        self.word
            .len()
            .cmp(&other.word.len())
            .then_with(|| self.word.cmp(&other.word))
            .then_with(|| self.tag.cmp(&other.tag))
    }
}

impl PartialOrd for WeylElement {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for WeylElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.word.is_empty() {
            return write!(f, "1");
        }
        for (i, g) in self.word.iter().enumerate() {
            if i > 0 {
                write!(f, ".")?;
            }
            write!(f, "s{g}")?;
        }
        Ok(())
    }
}

/// JSON form of a Coxeter system: `{"generators": [...], "matrix": [[...]]}`
/// with `0` encoding infinity.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct SystemDoc {
    pub generators: Vec<String>,
    pub matrix: CoxeterMatrix,
}

struct Entry {
    word: Box<[u8]>,
    right_desc: GenSet,
    left_desc: GenSet,
    /// `step[s]` is the id of `w·s`, or `NONE` until first requested.
    step: Box<[u32]>,
    /// For each right descent `s`, a reduced word of `w·s`.
    tails: Vec<(u8, Box<[u8]>)>,
}

#[derive(Default)]
struct WordCache {
    ids: HashMap<Box<[u8]>, u32>,
    entries: Vec<Entry>,
}

struct Inner {
    matrix: CoxeterMatrix,
    generators: Vec<String>,
    tag: u64,
    cache: RwLock<WordCache>,
}

/// A Coxeter system `(W, S)`. Cheap to clone; clones share the word cache,
/// which is grow-only and safe to fill from several threads.
#[derive(Clone)]
pub struct CoxeterSystem {
    inner: Arc<Inner>,
}

impl fmt::Debug for CoxeterSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CoxeterSystem")
            .field("generators", &self.inner.generators)
            .field("matrix", &self.inner.matrix.rows())
            .finish()
    }
}

impl PartialEq for CoxeterSystem {
    fn eq(&self, other: &Self) -> bool {
        self.inner.tag == other.inner.tag
            && self.inner.matrix == other.inner.matrix
            && self.inner.generators == other.inner.generators
    }
}

impl Eq for CoxeterSystem {}

/// Result of exploring the braid class of a reduced word.
struct ClassInfo {
    normal_form: Box<[u8]>,
    right_desc: GenSet,
    left_desc: GenSet,
    tails: Vec<(u8, Box<[u8]>)>,
}

impl CoxeterSystem {
    pub fn new(matrix: CoxeterMatrix, generators: Vec<String>) -> Result<Self> {
        if generators.len() != matrix.rank() {
            return Err(Error::InvalidMatrix(format!(
                "{} generator labels for a rank-{} matrix",
                generators.len(),
                matrix.rank()
            )));
        }
        let mut h = DefaultHasher::new();
        matrix.hash(&mut h);
        generators.hash(&mut h);
        let tag = h.finish();
        let rank = matrix.rank();
        let mut cache = WordCache::default();
        cache.ids.insert(Box::new([]), 0);
        cache.entries.push(Entry {
            word: Box::new([]),
            right_desc: 0,
            left_desc: 0,
            step: vec![NONE; rank].into_boxed_slice(),
            tails: Vec::new(),
        });
        Ok(CoxeterSystem {
            inner: Arc::new(Inner {
                matrix,
                generators,
                tag,
                cache: RwLock::new(cache),
            }),
        })
    }

    /// System with generators labelled `s0, s1, ...`.
    pub fn from_matrix(matrix: CoxeterMatrix) -> Result<Self> {
        let gens = (0..matrix.rank()).map(|i| format!("s{i}")).collect();
        CoxeterSystem::new(matrix, gens)
    }

    pub fn from_doc(doc: SystemDoc) -> Result<Self> {
        CoxeterSystem::new(doc.matrix, doc.generators)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        CoxeterSystem::from_doc(serde_json::from_str(text)?)
    }

    pub fn to_doc(&self) -> SystemDoc {
        SystemDoc {
            generators: self.inner.generators.clone(),
            matrix: self.inner.matrix.clone(),
        }
    }

    pub fn a1() -> Self {
        CoxeterSystem::from_matrix(CoxeterMatrix::new(vec![vec![1]]).unwrap()).unwrap()
    }

    pub fn dihedral(m: u32) -> Self {
        CoxeterSystem::from_matrix(CoxeterMatrix::dihedral(m).expect("m >= 2 or 0")).unwrap()
    }

    pub fn a2() -> Self {
        CoxeterSystem::dihedral(3)
    }

    pub fn b2() -> Self {
        CoxeterSystem::dihedral(4)
    }

    /// The infinite dihedral group, type `Ã₁`.
    pub fn affine_a1() -> Self {
        CoxeterSystem::dihedral(0)
    }

    /// Type `Ã₂`: the (3,3,3) triangle group.
    pub fn affine_a2() -> Self {
        CoxeterSystem::triangle(3, 3, 3)
    }

    pub fn triangle(a: u32, b: u32, c: u32) -> Self {
        CoxeterSystem::from_matrix(CoxeterMatrix::triangle(a, b, c).expect("valid orders")).unwrap()
    }

    /// Short names understood by the CLI: `A1`, `A2`, `B2`, `G2`, `A1~`,
    /// `A2~`, `I2(m)`, and triangle groups written `a,b,c`.
    pub fn named(name: &str) -> Option<Self> {
        let n = name.trim();
        match n.to_ascii_uppercase().as_str() {
            "A1" => return Some(CoxeterSystem::a1()),
            "A2" => return Some(CoxeterSystem::a2()),
            "B2" | "C2" => return Some(CoxeterSystem::b2()),
            "G2" => return Some(CoxeterSystem::dihedral(6)),
            "A1~" | "AFFINE-A1" => return Some(CoxeterSystem::affine_a1()),
            "A2~" | "AFFINE-A2" => return Some(CoxeterSystem::affine_a2()),
            _ => {}
        }
        if let Some(m) = n.strip_prefix("I2(").and_then(|r| r.strip_suffix(')')) {
            let m: u32 = m.parse().ok()?;
            return CoxeterMatrix::dihedral(m)
                .ok()
                .map(|x| CoxeterSystem::from_matrix(x).unwrap());
        }
        let parts: Vec<&str> = n
            .trim_matches(|c| c == '(' || c == ')')
            .split(',')
            .collect();
        if parts.len() == 3 {
            let v: Vec<u32> = parts.iter().filter_map(|p| p.trim().parse().ok()).collect();
            if v.len() == 3 {
                return CoxeterMatrix::triangle(v[0], v[1], v[2])
                    .ok()
                    .map(|x| CoxeterSystem::from_matrix(x).unwrap());
            }
        }
        None
    }

    pub fn rank(&self) -> usize {
        self.inner.matrix.rank()
    }

    pub fn matrix(&self) -> &CoxeterMatrix {
        &self.inner.matrix
    }

    pub fn generators(&self) -> &[String] {
        &self.inner.generators
    }

    pub fn tag(&self) -> u64 {
        self.inner.tag
    }

    pub fn all_generators(&self) -> GenSet {
        if self.rank() == 64 {
            u64::MAX
        } else {
            (1u64 << self.rank()) - 1
        }
    }

    pub fn identity(&self) -> WeylElement {
        WeylElement {
            word: Box::new([]),
            tag: self.inner.tag,
        }
    }

    pub fn generator(&self, s: usize) -> Result<WeylElement> {
        self.check_gen(s)?;
        Ok(WeylElement {
            word: Box::new([s as u8]),
            tag: self.inner.tag,
        })
    }

    fn check_gen(&self, s: usize) -> Result<()> {
        if s >= self.rank() {
            Err(Error::InvalidGenerator {
                index: s,
                rank: self.rank(),
            })
        } else {
            Ok(())
        }
    }

    fn check_tag(&self, w: &WeylElement) -> Result<()> {
        if w.tag != self.inner.tag {
            Err(Error::MixedSystems)
        } else {
            Ok(())
        }
    }

    /// ShortLex-least reduced word of the element represented by `word`.
    pub fn normal_form(&self, word: &[usize]) -> Result<WeylElement> {
        for &g in word {
            self.check_gen(g)?;
        }
        let mut id = 0;
        for &g in word {
            id = self.step_id(id, g);
        }
        Ok(self.element_of(id))
    }

    pub fn multiply(&self, a: &WeylElement, b: &WeylElement) -> Result<WeylElement> {
        self.check_tag(a)?;
        self.check_tag(b)?;
        let mut id = self.id_of(a);
        for &g in b.word.iter() {
            id = self.step_id(id, g as usize);
        }
        Ok(self.element_of(id))
    }

    pub fn inverse(&self, a: &WeylElement) -> Result<WeylElement> {
        self.check_tag(a)?;
        let mut id = 0;
        for &g in a.word.iter().rev() {
            id = self.step_id(id, g as usize);
        }
        Ok(self.element_of(id))
    }

    pub fn length(&self, a: &WeylElement) -> usize {
        a.word.len()
    }

    /// `w·s`.
    pub fn mul_gen(&self, w: &WeylElement, s: usize) -> Result<WeylElement> {
        self.check_tag(w)?;
        self.check_gen(s)?;
        let id = self.id_of(w);
        Ok(self.element_of(self.step_id(id, s)))
    }

    /// `s·w`.
    pub fn gen_mul(&self, s: usize, w: &WeylElement) -> Result<WeylElement> {
        self.check_tag(w)?;
        self.check_gen(s)?;
        let mut id = self.step_id(0, s);
        for &g in w.word.iter() {
            id = self.step_id(id, g as usize);
        }
        Ok(self.element_of(id))
    }

    /// `a⁻¹·b`, the Weyl distance between chambers `a` and `b` of `Σ(W,S)`.
    pub fn delta(&self, a: &WeylElement, b: &WeylElement) -> Result<WeylElement> {
        self.check_tag(a)?;
        self.check_tag(b)?;
        let mut id = 0;
        for &g in a.word.iter().rev() {
            id = self.step_id(id, g as usize);
        }
        for &g in b.word.iter() {
            id = self.step_id(id, g as usize);
        }
        Ok(self.element_of(id))
    }

    /// Gallery distance `ℓ(a⁻¹b)`.
    pub fn distance(&self, a: &WeylElement, b: &WeylElement) -> Result<usize> {
        Ok(self.delta(a, b)?.len())
    }

    /// Generators `s` with `ℓ(ws) < ℓ(w)`.
    pub fn right_descents(&self, w: &WeylElement) -> GenSet {
        let id = self.id_of(w);
        self.inner.cache.read().unwrap().entries[id as usize].right_desc
    }

    /// Generators `s` with `ℓ(sw) < ℓ(w)`.
    pub fn left_descents(&self, w: &WeylElement) -> GenSet {
        let id = self.id_of(w);
        self.inner.cache.read().unwrap().entries[id as usize].left_desc
    }

    /// Whether `word` is a reduced expression.
    pub fn is_reduced(&self, word: &[usize]) -> Result<bool> {
        Ok(self.normal_form(word)?.len() == word.len())
    }

    /// Conjugation `w·x·w⁻¹`.
    pub fn conjugate(&self, w: &WeylElement, x: &WeylElement) -> Result<WeylElement> {
        self.check_tag(w)?;
        self.check_tag(x)?;
        let mut id = self.id_of(w);
        for &g in x.word.iter() {
            id = self.step_id(id, g as usize);
        }
        for &g in w.word.iter().rev() {
            id = self.step_id(id, g as usize);
        }
        Ok(self.element_of(id))
    }

    /// Whether `w` lies in the parabolic subgroup `W_J`. Every reduced word
    /// of an element of `W_J` only uses letters of `J`.
    pub fn in_parabolic(&self, w: &WeylElement, j: GenSet) -> bool {
        w.word.iter().all(|&g| j & (1 << g) != 0)
    }

    /// All elements with `ℓ(w) <= radius`, in ShortLex order.
    pub fn ball(&self, radius: usize) -> Vec<WeylElement> {
        let mut out = vec![self.identity()];
        let mut layer = vec![0u32];
        for _ in 0..radius {
            let mut next: Vec<u32> = Vec::new();
            let mut seen = HashSet::new();
            for &id in &layer {
                let desc = self.inner.cache.read().unwrap().entries[id as usize].right_desc;
                for s in 0..self.rank() {
                    if desc & (1 << s) == 0 {
                        let up = self.step_id(id, s);
                        if seen.insert(up) {
                            next.push(up);
                        }
                    }
                }
            }
            if next.is_empty() {
                break;
            }
            let mut elems: Vec<WeylElement> = next.iter().map(|&i| self.element_of(i)).collect();
            elems.sort();
            out.extend(elems);
            layer = next;
        }
        out
    }

    /// Builds an element from a word already known to be in ShortLex normal form
    /// for this system (checked).
    pub fn element_from_normal_word(&self, word: &[usize]) -> Result<WeylElement> {
        let w = self.normal_form(word)?;
        if w.indices() != word {
            return Err(Error::precondition(format!(
                "{word:?} is not in normal form"
            )));
        }
        Ok(w)
    }

    fn element_of(&self, id: u32) -> WeylElement {
        let cache = self.inner.cache.read().unwrap();
        WeylElement {
            word: cache.entries[id as usize].word.clone(),
            tag: self.inner.tag,
        }
    }

    fn id_of(&self, w: &WeylElement) -> u32 {
        if let Some(&id) = self.inner.cache.read().unwrap().ids.get(&w.word) {
            return id;
        }
        let mut id = 0;
        for &g in w.word.iter() {
            id = self.step_id(id, g as usize);
        }
        id
    }

    fn step_id(&self, id: u32, s: usize) -> u32 {
        let target = {
            let cache = self.inner.cache.read().unwrap();
            let e = &cache.entries[id as usize];
            let known = e.step[s];
            if known != NONE {
                return known;
            }
            if e.right_desc & (1 << s) != 0 {
                let tail = e
                    .tails
                    .iter()
                    .find(|(g, _)| *g as usize == s)
                    .map(|(_, w)| w.clone())
                    .expect("every right descent has a recorded tail");
                tail
            } else {
                let mut w = e.word.to_vec();
                w.push(s as u8);
                w.into_boxed_slice()
            }
        };
        let found = {
            let cache = self.inner.cache.read().unwrap();
            cache.ids.get(&target).copied()
        };
        let info = if found.is_none() {
            Some(self.braid_class(&target))
        } else {
            None
        };
        let mut cache = self.inner.cache.write().unwrap();
        let new_id = match found {
            Some(x) => x,
            None => {
                let info = info.unwrap();
                match cache.ids.get(&info.normal_form) {
                    Some(&x) => x,
                    None => {
                        let x = cache.entries.len() as u32;
                        cache.ids.insert(info.normal_form.clone(), x);
                        cache.entries.push(Entry {
                            word: info.normal_form,
                            right_desc: info.right_desc,
                            left_desc: info.left_desc,
                            step: vec![NONE; self.rank()].into_boxed_slice(),
                            tails: info.tails,
                        });
                        x
                    }
                }
            }
        };
        cache.entries[id as usize].step[s] = new_id;
        cache.entries[new_id as usize].step[s] = id;
        new_id
    }

    /// Explores all words reachable from the reduced word `start` by braid
    /// moves. All of them are reduced words of the same element.
    fn braid_class(&self, start: &[u8]) -> ClassInfo {
        let m = &self.inner.matrix;
        let n = start.len();
        let mut seen: HashSet<Box<[u8]>> = HashSet::new();
        let mut queue: VecDeque<Box<[u8]>> = VecDeque::new();
        seen.insert(start.into());
        queue.push_back(start.into());
        let mut best: Box<[u8]> = start.into();
        let mut right_desc = 0;
        let mut left_desc = 0;
        let mut tails: Vec<(u8, Box<[u8]>)> = Vec::new();
        while let Some(w) = queue.pop_front() {
            if n > 0 {
                left_desc |= 1 << w[0];
                let last = w[n - 1];
                if right_desc & (1 << last) == 0 {
                    right_desc |= 1 << last;
                    tails.push((last, w[..n - 1].into()));
                }
            }
            if w < best {
                best = w.clone();
            }
            for i in 0..n.saturating_sub(1) {
                let a = w[i];
                let b = w[i + 1];
                debug_assert_ne!(a, b, "braid class of a non-reduced word");
                let Some(order) = m.order(a as usize, b as usize) else {
                    continue;
                };
                let order = order as usize;
                if i + order > n {
                    continue;
                }
                let alternates = (0..order).all(|k| w[i + k] == if k % 2 == 0 { a } else { b });
                if !alternates {
                    continue;
                }
                let mut v = w.to_vec();
                for k in 0..order {
                    v[i + k] = if k % 2 == 0 { b } else { a };
                }
                let v: Box<[u8]> = v.into_boxed_slice();
                if seen.insert(v.clone()) {
                    queue.push_back(v);
                }
            }
        }
        tails.sort();
        ClassInfo {
            normal_form: best,
            right_desc,
            left_desc,
            tails,
        }
    }

    /// Sub-system on the generators of `j`, labelled as in this system, in
    /// increasing generator order.
    pub fn parabolic(&self, j: GenSet) -> Result<CoxeterSystem> {
        let subset: Vec<usize> = (0..self.rank()).filter(|s| j & (1 << s) != 0).collect();
        if subset.is_empty() {
            return Err(Error::precondition("empty parabolic subsystem"));
        }
        let matrix = self.inner.matrix.restrict(&subset)?;
        let gens = subset
            .iter()
            .map(|&s| self.inner.generators[s].clone())
            .collect();
        CoxeterSystem::new(matrix, gens)
    }

    /// Number of cached elements; exposed for diagnostics.
    pub fn cached_elements(&self) -> usize {
        self.inner.cache.read().unwrap().entries.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_cancels() {
        let a2 = CoxeterSystem::a2();
        assert!(a2.normal_form(&[0, 0]).unwrap().is_identity());
    }

    #[test]
    fn braid_relation() {
        let a2 = CoxeterSystem::a2();
        let x = a2.normal_form(&[0, 1, 0]).unwrap();
        let y = a2.normal_form(&[1, 0, 1]).unwrap();
        assert_eq!(x, y);
        assert_eq!(x.len(), 3);
        assert_eq!(x.indices(), vec![0, 1, 0]);
    }

    #[test]
    fn invalid_generator() {
        let a2 = CoxeterSystem::a2();
        assert!(matches!(
            a2.normal_form(&[0, 2]),
            Err(Error::InvalidGenerator { index: 2, rank: 2 })
        ));
    }

    #[test]
    fn mixed_systems_rejected() {
        let a2 = CoxeterSystem::a2();
        let b2 = CoxeterSystem::b2();
        let x = a2.generator(0).unwrap();
        let y = b2.generator(0).unwrap();
        assert!(matches!(a2.multiply(&x, &y), Err(Error::MixedSystems)));
    }

    #[test]
    fn group_laws_small() {
        let a2 = CoxeterSystem::a2();
        let w = a2.normal_form(&[0, 1]).unwrap();
        assert_eq!(a2.multiply(&w, &a2.identity()).unwrap(), w);
        assert_eq!(a2.inverse(&w).unwrap().indices(), vec![1, 0]);
        let all = a2.ball(10);
        assert_eq!(all.len(), 6);
        assert_eq!(all.iter().map(|w| w.len()).max(), Some(3));
    }

    #[test]
    fn ball_sizes() {
        assert_eq!(CoxeterSystem::a2().ball(0).len(), 1);
        assert_eq!(CoxeterSystem::a2().ball(3).len(), 6);
        assert_eq!(CoxeterSystem::affine_a1().ball(4).len(), 9);
        assert_eq!(CoxeterSystem::b2().ball(8).len(), 8);
    }

    #[test]
    fn descents_and_lengths() {
        let sys = CoxeterSystem::affine_a2();
        for w in sys.ball(5) {
            for s in 0..3 {
                let ws = sys.mul_gen(&w, s).unwrap();
                let down = sys.right_descents(&w) & (1 << s) != 0;
                if down {
                    assert_eq!(ws.len() + 1, w.len());
                } else {
                    assert_eq!(ws.len(), w.len() + 1);
                }
            }
        }
    }

    #[test]
    fn named_systems() {
        assert_eq!(
            CoxeterSystem::named("3,3,4").unwrap().matrix().order(0, 2),
            Some(4)
        );
        assert_eq!(CoxeterSystem::named("I2(5)").unwrap().ball(10).len(), 10);
        assert!(CoxeterSystem::named("nope").is_none());
    }

    #[test]
    fn json_roundtrip() {
        let sys =
            CoxeterSystem::from_json(r#"{"generators":["a","b"],"matrix":[[1,0],[0,1]]}"#).unwrap();
        assert_eq!(sys.matrix().order(0, 1), None);
        let doc = serde_json::to_string(&sys.to_doc()).unwrap();
        assert_eq!(doc, r#"{"generators":["a","b"],"matrix":[[1,0],[0,1]]}"#);
    }
}
