use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Symmetric Coxeter matrix. Off-diagonal entries are `m(s,t) >= 2`, with `0`
/// standing for infinity (the same encoding as the JSON format).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<u32>>", into = "Vec<Vec<u32>>")]
pub struct CoxeterMatrix {
    rank: usize,
    entries: Vec<u32>,
}

/// Generators are stored as `u8` and sets of generators as `u64` bitmasks.
pub const MAX_RANK: usize = 64;

impl CoxeterMatrix {
    pub fn new(rows: Vec<Vec<u32>>) -> Result<Self> {
        let rank = rows.len();
        if rank == 0 {
            return Err(Error::InvalidMatrix("empty matrix".into()));
        }
        if rank > MAX_RANK {
            return Err(Error::InvalidMatrix(format!(
                "rank {rank} exceeds {MAX_RANK}"
            )));
        }
        let mut entries = Vec::with_capacity(rank * rank);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != rank {
                return Err(Error::InvalidMatrix(format!(
                    "row {i} has {} entries, expected {rank}",
                    row.len()
                )));
            }
            entries.extend_from_slice(row);
        }
        for s in 0..rank {
            if entries[s * rank + s] != 1 {
                return Err(Error::InvalidMatrix(format!("m({s},{s}) must be 1")));
            }
            for t in 0..rank {
                if s == t {
                    continue;
                }
                let m = entries[s * rank + t];
                if m != entries[t * rank + s] {
                    return Err(Error::InvalidMatrix(format!("m({s},{t}) != m({t},{s})")));
                }
                if m == 1 {
                    return Err(Error::InvalidMatrix(format!(
                        "m({s},{t}) must be >= 2 or 0 (infinity)"
                    )));
                }
            }
        }
        Ok(CoxeterMatrix { rank, entries })
    }

    /// Rank-`m` dihedral matrix `I2(m)`; `m = 0` gives the infinite dihedral group.
    pub fn dihedral(m: u32) -> Result<Self> {
        CoxeterMatrix::new(vec![vec![1, m], vec![m, 1]])
    }

    /// Triangle group matrix with `m(0,1) = a`, `m(1,2) = b`, `m(0,2) = c`.
    pub fn triangle(a: u32, b: u32, c: u32) -> Result<Self> {
        CoxeterMatrix::new(vec![vec![1, a, c], vec![a, 1, b], vec![c, b, 1]])
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// `m(s,t)`, or `None` for infinity.
    pub fn order(&self, s: usize, t: usize) -> Option<u32> {
        match self.entries[s * self.rank + t] {
            0 => None,
            m => Some(m),
        }
    }

    /// Raw entry with `0` for infinity.
    pub fn raw(&self, s: usize, t: usize) -> u32 {
        self.entries[s * self.rank + t]
    }

    pub fn rows(&self) -> Vec<Vec<u32>> {
        self.entries.chunks(self.rank).map(|r| r.to_vec()).collect()
    }

    /// Restriction to the generators in `subset` (in increasing order).
    pub fn restrict(&self, subset: &[usize]) -> Result<Self> {
        let rows = subset
            .iter()
            .map(|&s| subset.iter().map(|&t| self.raw(s, t)).collect())
            .collect();
        CoxeterMatrix::new(rows)
    }
}

impl TryFrom<Vec<Vec<u32>>> for CoxeterMatrix {
    type Error = Error;

    fn try_from(rows: Vec<Vec<u32>>) -> Result<Self> {
        CoxeterMatrix::new(rows)
    }
}

impl From<CoxeterMatrix> for Vec<Vec<u32>> {
    fn from(m: CoxeterMatrix) -> Self {
        m.rows()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_asymmetric() {
        assert!(CoxeterMatrix::new(vec![vec![1, 3], vec![4, 1]]).is_err());
    }

    #[test]
    fn rejects_bad_diagonal_and_one() {
        assert!(CoxeterMatrix::new(vec![vec![2, 3], vec![3, 1]]).is_err());
        assert!(CoxeterMatrix::new(vec![vec![1, 1], vec![1, 1]]).is_err());
    }

    #[test]
    fn zero_is_infinity() {
        let m = CoxeterMatrix::dihedral(0).unwrap();
        assert_eq!(m.order(0, 1), None);
        assert_eq!(m.order(0, 0), Some(1));
    }

    #[test]
    fn restrict_picks_submatrix() {
        let m = CoxeterMatrix::triangle(3, 3, 4).unwrap();
        let r = m.restrict(&[0, 2]).unwrap();
        assert_eq!(r.order(0, 1), Some(4));
    }
}
