//! Exact computations with the Lie algebras attached to a countable linear
//! system: the finitary algebras `sl(inf) ⊂ gl(inf)` and the Mackey algebra
//! `gl^M(inf)` of row- and column-finite matrices.
//!
//! All arithmetic is over the rationals and every result is exact. Indices
//! are 1-based throughout, so `e_1, e_2, ...` is the standard basis of `V`
//! and `e^1, e^2, ...` the dual basis of `V_*`.
//!
//! Infinite objects are handled in one of two ways:
//!
//! * Mackey matrices are restricted to a decidable class: finitely many
//!   diagonals, each an eventually constant sequence (see [`mackey`]). This
//!   class is closed under sums, products and transposes and contains the
//!   identity, the shifts and every finitary matrix.
//! * Statements about infinite spaces (perpendicular complements, large
//!   annihilators, intertwiners) are certified on a finite [`Window`] of
//!   indices `1..=n`.

pub mod aut;
pub mod base;
pub mod cli;
pub mod dualize;
pub mod error;
pub mod finitary;
pub mod gen;
pub mod linalg;
pub mod mackey;
pub mod pairing;

pub use base::{vec_pair_std, DualOracle, FinVec, Index, Rational, SparseVec, Window};
pub use error::{Error, Result};
pub use finitary::{FinitaryOp, PureTensor, TensorElement};
pub use mackey::{DiagonalSeq, MackeyOp};
