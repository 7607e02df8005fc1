//! Finite windows into `W` for the two-chamber hull conditions.
//!
//! Every element of a ball carries its left inversion set `N(w)` as a bitset
//! over the walls met inside the ball. Walls separating `u` and `v` are
//! `N(u) Δ N(v)`, and `x` lies on a minimal gallery from `C` to `D` (the hull
//! of `{C, D}`) iff the walls separating `C` from `x` all separate `C` from `D`.

use std::collections::HashMap;

use super::system::{CoxeterSystem, WeylElement};
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct Ball {
    radius: usize,
    elements: Vec<WeylElement>,
    index: HashMap<WeylElement, usize>,
    words: usize,
    inversions: Vec<u64>,
    walls: usize,
}

impl Ball {
    pub fn new(system: &CoxeterSystem, radius: usize) -> Result<Self> {
        let elements = system.ball(radius);
        let index: HashMap<WeylElement, usize> = elements
            .iter()
            .enumerate()
            .map(|(i, w)| (w.clone(), i))
            .collect();
        let mut walls: HashMap<WeylElement, u32> = HashMap::new();
        let mut lists: Vec<Vec<u32>> = Vec::with_capacity(elements.len());
        lists.push(Vec::new());
        for w in elements.iter().skip(1) {
            let s = *w.word().last().expect("non-identity") as usize;
            let prefix = system.mul_gen(w, s)?;
            let t = system.reflection(&prefix, s)?;
            let next = walls.len() as u32;
            let id = *walls.entry(t.element().clone()).or_insert(next);
            let mut list = lists[index[&prefix]].clone();
            list.push(id);
            lists.push(list);
        }
        let nwalls = walls.len();
        let words = nwalls.div_ceil(64).max(1);
        let mut inversions = vec![0u64; words * elements.len()];
        for (i, list) in lists.iter().enumerate() {
            for &t in list {
                inversions[i * words + t as usize / 64] |= 1 << (t % 64);
            }
        }
        Ok(Ball {
            radius,
            elements,
            index,
            words,
            inversions,
            walls: nwalls,
        })
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn elements(&self) -> &[WeylElement] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn wall_count(&self) -> usize {
        self.walls
    }

    pub fn index_of(&self, w: &WeylElement) -> Result<usize> {
        self.index.get(w).copied().ok_or(Error::RadiusTooSmall {
            radius: self.radius,
            needed: w.len(),
        })
    }

    fn inv(&self, i: usize) -> &[u64] {
        &self.inversions[i * self.words..(i + 1) * self.words]
    }

    /// Number of walls separating elements `i` and `j`.
    pub fn distance(&self, i: usize, j: usize) -> usize {
        self.inv(i)
            .iter()
            .zip(self.inv(j))
            .map(|(a, b)| (a ^ b).count_ones() as usize)
            .sum()
    }

    /// Whether element `x` lies in the hull of `{c, d}`.
    pub fn in_interval(&self, c: usize, x: usize, d: usize) -> bool {
        let (nc, nx, nd) = (self.inv(c), self.inv(x), self.inv(d));
        (0..self.words).all(|k| (nc[k] ^ nx[k]) & !(nc[k] ^ nd[k]) == 0)
    }

    /// First pair `(C, D)` whose hull contains all of `targets`. Pairs drawn
    /// from `targets` are tried first; then all pairs `C <= D` of the ball
    /// in ShortLex order.
    pub fn witness(&self, targets: &[usize]) -> Option<(usize, usize)> {
        let mut own: Vec<usize> = targets.to_vec();
        own.sort_unstable();
        own.dedup();
        for (a, &c) in own.iter().enumerate() {
            for &d in &own[a..] {
                if own.iter().all(|&x| self.in_interval(c, x, d)) {
                    return Some((c, d));
                }
            }
        }
        let mut need = vec![0u64; self.words];
        for c in 0..self.len() {
            let nc = self.inv(c);
            need.iter_mut().for_each(|w| *w = 0);
            for &x in &own {
                for (k, (a, b)) in nc.iter().zip(self.inv(x)).enumerate() {
                    need[k] |= a ^ b;
                }
            }
            for d in c..self.len() {
                let nd = self.inv(d);
                if (0..self.words).all(|k| need[k] & !(nc[k] ^ nd[k]) == 0) {
                    return Some((c, d));
                }
            }
        }
        None
    }

    pub fn element(&self, i: usize) -> &WeylElement {
        &self.elements[i]
    }
}

/// A pair of chambers whose convex hull contains `X`, `Y` and `Z`, searched
/// inside the ball of the given radius. `None` only means no witness exists
/// within that radius.
pub fn condition_iv_witness(
    system: &CoxeterSystem,
    x: &WeylElement,
    y: &WeylElement,
    z: &WeylElement,
    radius: usize,
) -> Result<Option<(WeylElement, WeylElement)>> {
    let needed = x.len().max(y.len()).max(z.len());
    if needed > radius {
        return Err(Error::RadiusTooSmall { radius, needed });
    }
    let ball = Ball::new(system, radius)?;
    let ids = [ball.index_of(x)?, ball.index_of(y)?, ball.index_of(z)?];
    Ok(ball
        .witness(&ids)
        .map(|(c, d)| (ball.element(c).clone(), ball.element(d).clone())))
}

/// Two chambers whose hull contains the finite set `f`, built by induction:
/// remove the ShortLex-greatest chamber `X`, enclose the rest in the hull of
/// `(C, D)`, then ask the oracle for a pair enclosing `{C, D, X}`.
pub fn enclose_finite_set<O>(
    f: &[WeylElement],
    oracle: &mut O,
) -> Result<Option<(WeylElement, WeylElement)>>
where
    O: FnMut(
        &WeylElement,
        &WeylElement,
        &WeylElement,
    ) -> Result<Option<(WeylElement, WeylElement)>>,
{
    let mut set: Vec<WeylElement> = f.to_vec();
    set.sort();
    set.dedup();
    match set.len() {
        0 => Err(Error::precondition("cannot enclose an empty set")),
        1 => Ok(Some((set[0].clone(), set[0].clone()))),
        2 => Ok(Some((set[0].clone(), set[1].clone()))),
        _ => {
            let x = set.pop().expect("nonempty");
            match enclose_finite_set(&set, oracle)? {
                Some((c, d)) => oracle(&c, &d, &x),
                None => Ok(None),
            }
        }
    }
}
