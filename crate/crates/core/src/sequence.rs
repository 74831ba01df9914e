//! Sequences of linear permutations interleaved with butterfly arrays.

use std::fmt;

use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, BitVector, N_MAX};

/// An ordered tuple `(P_0, ..., P_n)` of invertible `n x n` bit-matrices.
///
/// It stands for the computation
/// `pi(P_0) (I ⊗ F_2) pi(P_1) ... (I ⊗ F_2) pi(P_n)` on `2^n` points.
/// Membership in the set of fast WHT algorithms is not implied.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AlgorithmSeq {
    n: usize,
    matrices: Vec<BitMatrix>,
}

impl AlgorithmSeq {
    /// Validates shape and invertibility of every matrix.
    pub fn new(matrices: Vec<BitMatrix>) -> Result<Self> {
        if matrices.len() < 2 {
            return Err(Error::Dimension(format!(
                "a sequence needs n + 1 >= 2 matrices, got {}",
                matrices.len()
            )));
        }
        let n = matrices.len() - 1;
        if n > N_MAX {
            return Err(Error::range("n", n, 1, N_MAX));
        }
        for (k, p) in matrices.iter().enumerate() {
            if p.rows() != n || p.cols() != n {
                return Err(Error::Dimension(format!(
                    "P_{k} is {}x{}, expected {n}x{n}",
                    p.rows(),
                    p.cols()
                )));
            }
            let rank = p.rank();
            if rank != n {
                return Err(Error::Singular {
                    rank,
                    dim: n,
                    context: Some(format!("P_{k}")),
                });
            }
        }
        Ok(AlgorithmSeq { n, matrices })
    }

    /// Caller guarantees the invariants.
    pub(crate) fn from_trusted(matrices: Vec<BitMatrix>) -> Self {
        let n = matrices.len() - 1;
        debug_assert!(matrices.iter().all(|p| p.rows() == n && p.is_invertible()));
        AlgorithmSeq { n, matrices }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn matrices(&self) -> &[BitMatrix] {
        &self.matrices
    }

    pub fn get(&self, k: usize) -> &BitMatrix {
        &self.matrices[k]
    }

    pub fn into_matrices(self) -> Vec<BitMatrix> {
        self.matrices
    }

    /// `P_{i:j} = P_i P_{i+1} ... P_j`, the identity when `j < i`.
    pub fn product(&self, i: usize, j: usize) -> Result<BitMatrix> {
        for v in [i, j] {
            if v > self.n {
                return Err(Error::range("sequence index", v, 0, self.n));
            }
        }
        Ok(self.product_unchecked(i, j))
    }

    pub(crate) fn product_unchecked(&self, i: usize, j: usize) -> BitMatrix {
        if j < i {
            return BitMatrix::identity(self.n);
        }
        self.matrices[i + 1..=j]
            .iter()
            .fold(self.matrices[i].clone(), |acc, p| &acc * p)
    }

    /// Prefix products `P_{0:k}` for `k = 0..=n`.
    pub fn prefix_products(&self) -> Vec<BitMatrix> {
        let mut out: Vec<BitMatrix> = Vec::with_capacity(self.n + 1);
        for p in &self.matrices {
            let next = match out.last() {
                Some(prev) => prev * p,
                None => p.clone(),
            };
            out.push(next);
        }
        out
    }

    /// The reversed-and-inverted sequence `(P_n^{-1}, ..., P_0^{-1})`, which computes `W(P)^T`.
    pub fn transposed(&self) -> AlgorithmSeq {
        let matrices = self
            .matrices
            .iter()
            .rev()
            .map(|p| p.invert().expect("sequence matrices are invertible"))
            .collect();
        AlgorithmSeq::from_trusted(matrices)
    }

    /// True when every `P_k` is a permutation matrix (a bit-index permuted algorithm).
    pub fn is_bit_index(&self) -> bool {
        self.matrices.iter().all(BitMatrix::is_permutation)
    }

    /// `1_b` in this sequence's dimension.
    pub(crate) fn one(&self) -> BitVector {
        BitVector::one(self.n)
    }
}

/// `P_{i:j}` of a sequence.
pub fn seq_product(p: &AlgorithmSeq, i: usize, j: usize) -> Result<BitMatrix> {
    p.product(i, j)
}

impl fmt::Debug for AlgorithmSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "AlgorithmSeq({self})")
    }
}

impl fmt::Display for AlgorithmSeq {
    /// The canonical one-line text form, e.g. `n=2; 10/01; 01/10; 01/10`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n={}", self.n)?;
        for p in &self.matrices {
            write!(f, "; {p}")?;
        }
        Ok(())
    }
}
