//! Butterfly-based linear fast algorithms for the Walsh-Hadamard transform.
//!
//! An algorithm on `2^n` points is a sequence `P = (P_0, ..., P_n)` of
//! invertible bit-matrices; it computes
//! `pi(P_0) (I ⊗ F_2) pi(P_1) ... (I ⊗ F_2) pi(P_n)` where `pi(Q)` moves index
//! `i` to the index whose bits are `Q i_b`. This crate decides in polynomial
//! time whether such a sequence computes `WHT_n` ([`characterizer`]),
//! parametrizes all that do ([`factory`]), and checks both against a dense
//! reference evaluation ([`oracle`]).
//!
//! The dense oracle is generic over its entry type; [`SignedMatrix`] is the
//! exact `i32` instance used throughout.

pub mod catalog;
pub mod characterizer;
pub mod dot;
pub mod error;
pub mod factory;
pub mod gf2;
pub mod group;
pub mod limits;
pub mod oracle;
pub mod scalar;
pub mod sequence;
pub mod text;

pub use catalog::{iterative_ct, pease, pease_transpose, to_sequency, CatalogName};
pub use characterizer::{check_lemma2, check_theorem1, predict_dplus, spreading_matrix, CheckReport, Violation};
pub use error::{Error, Result};
pub use factory::{build, factorize, sample_member, FactorTuple};
pub use gf2::{BitMatrix, BitVector, N_MAX};
pub use group::BigCount;
pub use oracle::{DenseMatrix, DependencySet};
pub use scalar::Scalar;
pub use sequence::AlgorithmSeq;

/// Exact signed entries, as produced by the oracle for `W(P)` and `WHT_n`.
pub type SignedMatrix = DenseMatrix<i32>;
/// Wider exact entries for products of oracle matrices.
pub type WideMatrix = DenseMatrix<i64>;
/// Floating entries, e.g. for scaled (orthogonal) variants.
pub type RealMatrix = DenseMatrix<f64>;
