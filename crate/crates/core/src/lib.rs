//! Recognition of the minimal-vector family of the root lattice `A_n`.
//!
//! Given a finite family `S` of vectors in a free Z-module of rank `n`, this
//! crate decides whether some unimodular change of basis turns `S` into
//!
//! ```text
//! S(A_n) = {±e_i : 1 ≤ i ≤ n} ∪ {±(e_i - e_j) : 1 ≤ i < j ≤ n}
//! ```
//!
//! and, when it does, constructs that basis. The modules are layered:
//!
//! - [`linalg`]: exact integer vectors, matrices, determinants, unimodular bases.
//! - [`vectorset`] and [`setfile`]: the family itself and its text format.
//! - [`hypotheses`]: the five conditions under which recognition succeeds.
//! - [`audit`]: executable versions of the structural lemmas the normalizer
//!   relies on, plus demonstrators of where a naive induction breaks.
//! - [`normalize`]: the basis construction.
//! - [`generate`]: canonical sets, scrambles and mutants for testing.

pub mod audit;
pub mod generate;
pub mod hypotheses;
pub mod linalg;
pub mod normalize;
pub mod setfile;
pub mod vectorset;

pub use linalg::{BasisChange, IntMatrix, IntVector, LinalgError};
pub use normalize::{
    normalize, normalize_all_choices, normalize_with_e1, twin_basis, NormalizationResult, NormalizeError,
};
pub use setfile::{read_set, write_set, ParseError};
pub use vectorset::{HalfSystem, VectorSet, VectorSetError};
