//! The factor-tuple parametrization of fast WHT algorithms.
//!
//! Every member `P` corresponds to exactly one tuple `(B, Q_1, ..., Q_n)` with
//! `B` in `GL_n(F2)` and every `Q_i` in `GL_{n-1}(F2)`:
//!
//! ```text
//! P_0 = B diag(Q_1, 1)
//! P_i = diag(Q_i^{-1}, 1) C_n diag(Q_{i+1}, 1)     0 < i < n
//! P_n = diag(Q_n^{-1}, 1) C_n B^T
//! ```
//!
//! With this parametrization the spreading matrix of `P` is `B` itself and
//! `P_{0:i-1} = B C_n^{i-1} diag(Q_i, 1)`, which is what [`factorize`] inverts.

use std::collections::HashSet;
use std::fmt;
use std::ops::Range;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::characterizer::{check_theorem1, spreading_matrix};
use crate::error::{Error, Result};
use crate::gf2::{rotation_matrix, BitMatrix, N_MAX};
use crate::group::{gl_iter_unchecked, perm_iter_unchecked, sample_gl_with, sample_perm_with};
use crate::sequence::AlgorithmSeq;

/// Largest `n` for which all of `GL_n x GL_{n-1}^n` may be enumerated.
pub const MEMBER_ENUM_MAX_N: usize = 3;
/// Largest `n` for which the bit-index permuted members may be enumerated.
pub const BIT_INDEX_ENUM_MAX_N: usize = 4;

/// Coordinates `(B, Q_1, ..., Q_n)` of a fast algorithm.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FactorTuple {
    b: BitMatrix,
    qs: Vec<BitMatrix>,
}

impl FactorTuple {
    pub fn new(b: BitMatrix, qs: Vec<BitMatrix>) -> Result<Self> {
        let n = b.rows();
        if n == 0 || n > N_MAX || !b.is_square() {
            return Err(Error::Dimension(format!("B must be n x n with 1 <= n <= {N_MAX}")));
        }
        if qs.len() != n {
            return Err(Error::Dimension(format!("expected {n} Q matrices, got {}", qs.len())));
        }
        let rank = b.rank();
        if rank != n {
            return Err(Error::Singular {
                rank,
                dim: n,
                context: Some("B".into()),
            });
        }
        for (i, q) in qs.iter().enumerate() {
            if q.rows() != n - 1 || q.cols() != n - 1 {
                return Err(Error::Dimension(format!(
                    "Q_{} is {}x{}, expected {m}x{m}",
                    i + 1,
                    q.rows(),
                    q.cols(),
                    m = n - 1
                )));
            }
            let rank = q.rank();
            if rank != n - 1 {
                return Err(Error::Singular {
                    rank,
                    dim: n - 1,
                    context: Some(format!("Q_{}", i + 1)),
                });
            }
        }
        Ok(FactorTuple { b, qs })
    }

    pub fn n(&self) -> usize {
        self.b.rows()
    }

    pub fn b(&self) -> &BitMatrix {
        &self.b
    }

    /// `Q_1, ..., Q_n`.
    pub fn qs(&self) -> &[BitMatrix] {
        &self.qs
    }
}

impl fmt::Display for FactorTuple {
    /// `n=2; B=10/01; Q=1; Q=1`; empty `Q` blocks print as `-`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n={}; B={}", self.n(), self.b)?;
        for q in &self.qs {
            write!(f, "; Q={q}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for FactorTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FactorTuple({self})")
    }
}

/// Maps a factor tuple to its algorithm. The result is always a member.
pub fn build(f: &FactorTuple) -> AlgorithmSeq {
    let n = f.n();
    let c = rotation_matrix(n);
    let bordered: Vec<BitMatrix> = f.qs.iter().map(BitMatrix::bordered).collect();
    let bordered_inv: Vec<BitMatrix> = f
        .qs
        .iter()
        .map(|q| q.invert().expect("validated invertible").bordered())
        .collect();

    let mut ms = Vec::with_capacity(n + 1);
    ms.push(&f.b * &bordered[0]);
    for i in 1..n {
        ms.push(&(&bordered_inv[i - 1] * &c) * &bordered[i]);
    }
    ms.push(&(&bordered_inv[n - 1] * &c) * &f.b.transpose());
    AlgorithmSeq::from_trusted(ms)
}

/// Recovers `(B, Q_1, ..., Q_n)` from a member: `B = X` and `Q_i` is the
/// top-left block of `C_n^{1-i} X^{-1} P_{0:i-1}`.
pub fn factorize(p: &AlgorithmSeq) -> Result<FactorTuple> {
    let report = check_theorem1(p);
    if !report.passed {
        return Err(Error::NotMember(report.witness.unwrap_or_default()));
    }
    let n = p.n();
    let x = spreading_matrix(p);
    let x_inv = x.invert()?;
    let c_inv = rotation_matrix(n).transpose();
    let prefix = p.prefix_products();

    let mut qs = Vec::with_capacity(n);
    // running C^{1-i} X^{-1} P_{0:i-1}
    let mut shift = BitMatrix::identity(n);
    for i in 1..=n {
        let q_tilde = &(&shift * &x_inv) * &prefix[i - 1];
        let last = n - 1;
        let bordered = q_tilde.column(last).index() == 1 && q_tilde.row_word(last) == 1;
        if !bordered {
            return Err(Error::Internal(format!(
                "C^(1-{i}) X^-1 P_0:{} = {q_tilde} is not of the form diag(Q, 1)",
                i - 1
            )));
        }
        qs.push(q_tilde.top_left(n - 1));
        shift = &c_inv * &shift;
    }
    FactorTuple::new(x, qs)
}

/// A finite product space `Bs x Qs^n` of factor tuples, indexed in mixed radix
/// (`B` most significant, then `Q_1`, ..., `Q_n`).
#[derive(Clone, Debug)]
pub struct FactorSpace {
    n: usize,
    bs: Vec<BitMatrix>,
    qs: Vec<BitMatrix>,
}

impl FactorSpace {
    /// `GL_n x GL_{n-1}^n`.
    pub fn general(n: usize) -> Result<Self> {
        if !(1..=MEMBER_ENUM_MAX_N).contains(&n) {
            return Err(Error::range("n for member enumeration", n, 1, MEMBER_ENUM_MAX_N));
        }
        Ok(FactorSpace {
            n,
            bs: gl_iter_unchecked(n).collect(),
            qs: gl_iter_unchecked(n - 1).collect(),
        })
    }

    /// `S_n x S_{n-1}^n`, the bit-index permuted algorithms.
    pub fn bit_index(n: usize) -> Result<Self> {
        if !(1..=BIT_INDEX_ENUM_MAX_N).contains(&n) {
            return Err(Error::range("n for bit-index enumeration", n, 1, BIT_INDEX_ENUM_MAX_N));
        }
        Ok(FactorSpace {
            n,
            bs: perm_iter_unchecked(n).collect(),
            qs: perm_iter_unchecked(n - 1).collect(),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> u64 {
        self.bs.len() as u64 * (self.qs.len() as u64).pow(self.n as u32)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn get(&self, index: u64) -> FactorTuple {
        assert!(index < self.len());
        let radix = self.qs.len() as u64;
        let mut digits = vec![0u64; self.n];
        let mut rest = index;
        for d in digits.iter_mut().rev() {
            *d = rest % radix;
            rest /= radix;
        }
        FactorTuple {
            b: self.bs[rest as usize].clone(),
            qs: digits.iter().map(|&d| self.qs[d as usize].clone()).collect(),
        }
    }

    /// Members built from the tuples in `range`, in index order.
    pub fn members(&self, range: Range<u64>) -> impl Iterator<Item = AlgorithmSeq> + '_ {
        let end = range.end.min(self.len());
        (range.start..end).map(move |k| build(&self.get(k)))
    }
}

/// Stream of built members with optional de-duplication.
pub struct MemberStream {
    space: FactorSpace,
    next: u64,
    end: u64,
    dedupe: Option<HashSet<String>>,
    raw: u64,
}

impl MemberStream {
    pub fn new(space: FactorSpace, range: Option<Range<u64>>, dedupe: bool) -> Self {
        let range = range.unwrap_or(0..space.len());
        MemberStream {
            end: range.end.min(space.len()),
            next: range.start,
            space,
            dedupe: dedupe.then(HashSet::new),
            raw: 0,
        }
    }

    /// Tuples consumed so far.
    pub fn raw_count(&self) -> u64 {
        self.raw
    }

    /// Distinct sequences seen so far (equal to the raw count without de-duplication).
    pub fn distinct_count(&self) -> u64 {
        self.dedupe.as_ref().map_or(self.raw, |s| s.len() as u64)
    }
}

impl Iterator for MemberStream {
    type Item = AlgorithmSeq;

    fn next(&mut self) -> Option<AlgorithmSeq> {
        while self.next < self.end {
            let p = build(&self.space.get(self.next));
            self.next += 1;
            self.raw += 1;
            match &mut self.dedupe {
                None => return Some(p),
                Some(seen) => {
                    if seen.insert(p.to_string()) {
                        return Some(p);
                    }
                }
            }
        }
        None
    }
}

/// Streams `build(f)` over all of `GL_n x GL_{n-1}^n` (`n <= 3`).
pub fn enumerate_members(n: usize, dedupe: bool) -> Result<MemberStream> {
    Ok(MemberStream::new(FactorSpace::general(n)?, None, dedupe))
}

/// Streams the members whose matrices are all permutation matrices (`n <= 4`).
pub fn enumerate_bit_index_members(n: usize, dedupe: bool) -> Result<MemberStream> {
    Ok(MemberStream::new(FactorSpace::bit_index(n)?, None, dedupe))
}

/// Uniform random factor tuple.
pub fn sample_factors_with<R: Rng + ?Sized>(rng: &mut R, n: usize) -> FactorTuple {
    assert!((1..=N_MAX).contains(&n));
    let b = sample_gl_with(rng, n).0;
    let qs = (0..n).map(|_| sample_gl_with(rng, n - 1).0).collect();
    FactorTuple { b, qs }
}

/// Uniform random member, deterministic in `seed`.
pub fn sample_member(n: usize, seed: u64) -> AlgorithmSeq {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    build(&sample_factors_with(&mut rng, n))
}

/// Uniform random bit-index permuted member.
pub fn sample_bit_index_member_with<R: Rng + ?Sized>(rng: &mut R, n: usize) -> AlgorithmSeq {
    assert!((1..=N_MAX).contains(&n));
    let b = sample_perm_with(rng, n);
    let qs = (0..n).map(|_| sample_perm_with(rng, n - 1)).collect();
    build(&FactorTuple { b, qs })
}
