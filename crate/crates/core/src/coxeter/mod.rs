mod ball;
mod complex;
mod finite;
mod matrix;
mod system;

pub use ball::{condition_iv_witness, enclose_finite_set, Ball};
pub use complex::{CoxRoot, CoxSimplex, Reflection, Side, Support};
pub use finite::{ElemId, FiniteGroup, MAX_ORDER};
pub use matrix::{CoxeterMatrix, MAX_RANK};
pub use system::{CoxeterSystem, GenSet, SystemDoc, WeylElement};
