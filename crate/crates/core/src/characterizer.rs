//! Polynomial-time membership tests for fast WHT algorithms.
//!
//! A sequence `P = (P_0, ..., P_n)` computes `WHT_n` exactly when
//!
//! * `P_{0:n} = X X^T`, and
//! * `X^{-1}` has `1_b^T P_{0:n-k}^{-1}` as its row `k` (`k = 1..n`),
//!
//! where `X` is the spreading matrix. Both conditions cost `O(n^4)` bit
//! operations, against `O(n 2^{3n})` for the dense comparison.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, BitVector};
use crate::group::sample_gl_with;
use crate::limits::oracle_max_n;
use crate::oracle::DependencySet;
use crate::sequence::AlgorithmSeq;

/// Outcome of the two-condition membership check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckReport {
    pub passed: bool,
    pub x_invertible: bool,
    /// `P_{0:n} = X X^T`.
    pub cond_product: bool,
    /// `X^{-1}` has the last rows of `P_{0:n-k}^{-1}` as rows.
    pub cond_inverse: bool,
    /// First failing sub-check, if any.
    pub witness: Option<String>,
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.passed {
            return f.write_str("PASS theorem1");
        }
        write!(f, "FAIL theorem1")?;
        if let Some(w) = &self.witness {
            write!(f, " ({w})")?;
        }
        Ok(())
    }
}

/// `X = (P_{0:n-1} 1_b | P_{0:n-2} 1_b | ... | P_0 1_b)`.
pub fn spreading_matrix(p: &AlgorithmSeq) -> BitMatrix {
    spreading_from_prefix(&p.prefix_products(), p.n())
}

fn spreading_from_prefix(prefix: &[BitMatrix], n: usize) -> BitMatrix {
    let last = n - 1;
    let columns: Vec<BitVector> = (1..=n).map(|k| prefix[n - k].column(last)).collect();
    BitMatrix::from_columns(&columns).expect("n columns of length n")
}

/// Stacks `1_b^T P_{0:n-k}^{-1}` for `k = 1..n`; equals `X^{-1}` for members.
fn stacked_last_rows(prefix: &[BitMatrix], n: usize) -> BitMatrix {
    let words: Vec<u64> = (1..=n)
        .map(|k| {
            let inv = prefix[n - k].invert().expect("products of invertible matrices");
            inv.row_word(n - 1)
        })
        .collect();
    BitMatrix::from_row_words(n, &words).expect("n rows of n bits")
}

/// Evaluates both conditions and reports each one.
pub fn check_theorem1(p: &AlgorithmSeq) -> CheckReport {
    let n = p.n();
    let prefix = p.prefix_products();
    let x = spreading_from_prefix(&prefix, n);
    let xt = x.transpose();
    let x_invertible = x.is_invertible();

    let full = &prefix[n];
    let xxt = &x * &xt;
    let cond_product = *full == xxt;

    let cond_inverse = x_invertible && (&x * &stacked_last_rows(&prefix, n)).is_identity();

    let witness = if !x_invertible {
        Some(format!("spreading matrix X = {x} is singular (rank {})", x.rank()))
    } else if !cond_inverse {
        Some(format!("X^-1 = {} differs from the stacked last rows of P_0:k^-1", x.invert().expect("invertible")))
    } else if !cond_product {
        Some(format!("P_0:n = {full} but X X^T = {xxt}"))
    } else {
        None
    };

    CheckReport {
        passed: cond_product && cond_inverse,
        x_invertible,
        cond_product,
        cond_inverse,
        witness,
    }
}

/// Shorthand for `check_theorem1(p).passed`.
pub fn is_member(p: &AlgorithmSeq) -> bool {
    check_theorem1(p).passed
}

/// A violation of the central-product conditions: `(k, l, inverse)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Lemma2Violation {
    pub k: usize,
    pub l: usize,
    pub inverse: bool,
}

/// First `(k, l)` with `0 < k <= l < n` where the bottom-right entry of
/// `P_{k:l}` (or of its inverse) is 1.
pub fn lemma2_violation(p: &AlgorithmSeq) -> Option<Lemma2Violation> {
    let n = p.n();
    let inverses: Vec<BitMatrix> = p
        .matrices()
        .iter()
        .map(|m| m.invert().expect("sequence matrices are invertible"))
        .collect();
    let one = p.one();
    for k in 1..n {
        // row vector 1_b^T P_{k:l}
        let mut row = p.get(k).row(n - 1);
        // column vector P_{k:l}^{-1} 1_b = P_l^{-1} ... P_k^{-1} 1_b
        let mut col = inverses[k].mul_vec(&one);
        for l in k..n {
            if l > k {
                row = p.get(l).transpose().mul_vec(&row);
                col = inverses[l].mul_vec(&col);
            }
            if row.dot(&one) {
                return Some(Lemma2Violation { k, l, inverse: false });
            }
            if col.dot(&one) {
                return Some(Lemma2Violation { k, l, inverse: true });
            }
        }
    }
    None
}

/// True iff no central product `P_{k:l}`, `0 < k <= l < n`, nor its inverse,
/// has a 1 in the bottom-right corner.
pub fn check_lemma2(p: &AlgorithmSeq) -> bool {
    lemma2_violation(p).is_none()
}

/// The row vector `r^T = i_b^T P_{0:n}^T (X X^T)^{-1}`; the positive
/// dependencies of input `i` are the kernel of `r^T`.
pub fn dplus_functional(p: &AlgorithmSeq, i: u64) -> Result<BitVector> {
    if let Some(v) = lemma2_violation(p) {
        return Err(Error::Condition(format!(
            "central product P_{}:{}{} has a 1 in the bottom-right corner",
            v.k,
            v.l,
            if v.inverse { " inverse" } else { "" }
        )));
    }
    let n = p.n();
    let ib = BitVector::from_index(i, n)?;
    let prefix = p.prefix_products();
    let x = spreading_from_prefix(&prefix, n);
    let gram_inv = (&x * &x.transpose()).invert()?;
    // (X X^T)^{-1} is symmetric, so r = (X X^T)^{-1} P_{0:n} i_b
    Ok(gram_inv.mul_vec(&prefix[n].mul_vec(&ib)))
}

/// `D^+(i) = { j_b : i_b^T P_{0:n}^T (X X^T)^{-1} j_b = 0 }`.
///
/// Requires [`check_lemma2`]; the set has `2^n` or `2^{n-1}` elements, so `n`
/// is bounded by the oracle guard.
pub fn predict_dplus(p: &AlgorithmSeq, i: u64) -> Result<DependencySet> {
    let n = p.n();
    if n > oracle_max_n() {
        return Err(Error::Guard {
            what: "dependency set enumeration",
            n,
            limit: oracle_max_n(),
        });
    }
    let r = dplus_functional(p, i)?;
    let members = (0..1u64 << n)
        .map(|j| BitVector::from_word(j, n))
        .filter(|j| !r.dot(j))
        .collect();
    Ok(DependencySet {
        input_index: i,
        members,
    })
}

/// Which membership condition a counterexample should break.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Violation {
    /// Satisfies the inverse condition, breaks `P_{0:n} = X X^T`.
    Eq4,
    /// Satisfies `P_{0:n} = X X^T`, breaks the inverse condition.
    Eq5,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Violation::Eq4 => "violates_eq4",
            Violation::Eq5 => "violates_eq5",
        })
    }
}

impl std::str::FromStr for Violation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "violates_eq4" | "eq4" | "product" => Ok(Violation::Eq4),
            "violates_eq5" | "eq5" | "inverse" => Ok(Violation::Eq5),
            other => Err(Error::Parse {
                line: 1,
                column: 1,
                message: format!("unknown violation kind {other:?}"),
            }),
        }
    }
}

/// A sequence satisfying exactly one of the two membership conditions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Counterexample {
    pub sequence: AlgorithmSeq,
    pub which: Violation,
    /// Number of random draws spent, including the successful one.
    pub draws: usize,
}

/// Seeded random search for a sequence meeting one condition but not the other.
///
/// For [`Violation::Eq4`], `P_0, ..., P_n` are drawn uniformly. For
/// [`Violation::Eq5`], `P_0, ..., P_{n-1}` are drawn uniformly and `P_n` is
/// completed to `P_{0:n-1}^{-1} X X^T` whenever `X` is invertible (`X` does not
/// depend on `P_n`). Returns `None` once `budget` draws are exhausted.
pub fn find_minimality_counterexample(
    n: usize,
    which: Violation,
    budget: usize,
    seed: u64,
) -> Option<Counterexample> {
    assert!(n >= 2, "the two conditions coincide below n = 2");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for draw in 1..=budget {
        let candidate = match which {
            Violation::Eq4 => Some(random_sequence(&mut rng, n)),
            Violation::Eq5 => complete_product_condition(&mut rng, n),
        };
        let Some(candidate) = candidate else { continue };
        let report = check_theorem1(&candidate);
        let hit = match which {
            Violation::Eq4 => report.cond_inverse && !report.cond_product,
            Violation::Eq5 => report.cond_product && !report.cond_inverse,
        };
        if hit {
            return Some(Counterexample {
                sequence: candidate,
                which,
                draws: draw,
            });
        }
    }
    None
}

/// Checks that `c` still has the advertised condition pattern.
pub fn verify_counterexample(sequence: &AlgorithmSeq, which: Violation) -> bool {
    let r = check_theorem1(sequence);
    match which {
        Violation::Eq4 => r.cond_inverse && !r.cond_product,
        Violation::Eq5 => r.cond_product && !r.cond_inverse,
    }
}

fn random_sequence<R: Rng>(rng: &mut R, n: usize) -> AlgorithmSeq {
    AlgorithmSeq::from_trusted((0..=n).map(|_| sample_gl_with(rng, n).0).collect())
}

fn complete_product_condition<R: Rng>(rng: &mut R, n: usize) -> Option<AlgorithmSeq> {
    let mut ms: Vec<BitMatrix> = (0..n).map(|_| sample_gl_with(rng, n).0).collect();
    ms.push(BitMatrix::identity(n));
    let prefix = AlgorithmSeq::from_trusted(ms.clone()).prefix_products();
    let x = spreading_from_prefix(&prefix, n);
    if !x.is_invertible() {
        return None;
    }
    let head_inv = prefix[n - 1].invert().ok()?;
    ms[n] = &head_inv * &(&x * &x.transpose());
    Some(AlgorithmSeq::from_trusted(ms))
}
