//! Dense reference evaluation of `W(P)`, the Hadamard matrix and the
//! per-stage dependency sets.
//!
//! Everything here is quadratic or worse in `2^n` and exists to validate the
//! polynomial-time checks; sizes are bounded by [`crate::limits::oracle_max_n`].

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, BitVector};
use crate::limits::oracle_max_n;
use crate::scalar::Scalar;
use crate::sequence::AlgorithmSeq;

/// A square dense matrix, row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct DenseMatrix<T> {
    dim: usize,
    data: Vec<T>,
}

impl<T: Scalar> DenseMatrix<T> {
    pub fn zeros(dim: usize) -> Self {
        DenseMatrix {
            dim,
            data: vec![T::zero(); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.data[i * dim + i] = T::one();
        }
        m
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let data = (0..dim * dim).map(|k| f(k / dim, k % dim)).collect();
        DenseMatrix { dim, data }
    }

    pub fn from_columns(columns: Vec<Vec<T>>) -> Self {
        let dim = columns.len();
        assert!(columns.iter().all(|c| c.len() == dim));
        Self::from_fn(dim, |r, c| columns[c][r])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, r: usize, c: usize) -> T {
        self.data[r * self.dim + c]
    }

    pub fn row(&self, r: usize) -> &[T] {
        &self.data[r * self.dim..(r + 1) * self.dim]
    }

    pub fn column(&self, c: usize) -> Vec<T> {
        (0..self.dim).map(|r| self.get(r, c)).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.dim, |r, c| self.get(c, r))
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        let n = self.dim;
        let mut out = Self::zeros(n);
        for r in 0..n {
            for k in 0..n {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..n {
                    out.data[r * n + c] += a * other.get(k, c);
                }
            }
        }
        out
    }

    pub fn scale(&self, s: T) -> Self {
        DenseMatrix {
            dim: self.dim,
            data: self.data.iter().map(|&v| v * s).collect(),
        }
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kronecker(&self, other: &Self) -> Self {
        let (a, b) = (self.dim, other.dim);
        Self::from_fn(a * b, |r, c| self.get(r / b, c / b) * other.get(r % b, c % b))
    }

    /// Same matrix with row `r` moved to row `perm[r]`.
    pub fn permute_rows(&self, perm: &[usize]) -> Self {
        let mut out = Self::zeros(self.dim);
        for (r, &to) in perm.iter().enumerate() {
            out.data[to * self.dim..(to + 1) * self.dim].copy_from_slice(self.row(r));
        }
        out
    }

    pub fn nonzeros_in_row(&self, r: usize) -> usize {
        self.row(r).iter().filter(|v| !v.is_zero()).count()
    }

    pub fn entries(&self) -> &[T] {
        &self.data
    }
}

impl<T: Scalar + fmt::Display> fmt::Display for DenseMatrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.dim {
            let row: Vec<String> = self.row(r).iter().map(|v| format!("{v:>3}")).collect();
            writeln!(f, "{}", row.join(" "))?;
        }
        Ok(())
    }
}

impl<T: Scalar> fmt::Debug for DenseMatrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DenseMatrix")
            .field("dim", &self.dim)
            .field("data", &self.data)
            .finish()
    }
}

fn guard(n: usize) -> Result<()> {
    let limit = oracle_max_n();
    if n > limit {
        return Err(Error::Guard {
            what: "dense oracle",
            n,
            limit,
        });
    }
    Ok(())
}

/// `WHT_n`, entry `(i, j) = (-1)^{i_b^T j_b}`.
pub fn hadamard<T: Scalar>(n: usize) -> Result<DenseMatrix<T>> {
    if n == 0 {
        return Err(Error::range("n", 0, 1, oracle_max_n()));
    }
    guard(n)?;
    Ok(DenseMatrix::from_fn(1 << n, |i, j| {
        if (i & j).count_ones() % 2 == 0 {
            T::one()
        } else {
            -T::one()
        }
    }))
}

/// `I_{2^{k-1}} ⊗ F_2 ⊗ I_{2^{n-k}}`: butterflies across index bit `k` (1 = most significant).
pub fn butterfly_stage_kron<T: Scalar>(n: usize, k: usize) -> Result<DenseMatrix<T>> {
    if !(1..=n).contains(&k) {
        return Err(Error::range("butterfly bit", k, 1, n));
    }
    guard(n)?;
    let f2 = hadamard::<T>(1)?;
    Ok(DenseMatrix::identity(1 << (k - 1))
        .kronecker(&f2)
        .kronecker(&DenseMatrix::identity(1 << (n - k))))
}

/// The index map of `pi(Q)`: entry `i` is the integer whose bits are `Q i_b`.
pub fn permutation_table(q: &BitMatrix) -> Result<Vec<usize>> {
    if !q.is_invertible() {
        return Err(Error::Singular {
            rank: q.rank(),
            dim: q.rows(),
            context: Some("linear permutation".into()),
        });
    }
    guard(q.rows())?;
    let n = q.rows();
    Ok((0..1u64 << n)
        .map(|i| q.mul_vec(&BitVector::from_word(i, n)).index() as usize)
        .collect())
}

/// `pi(Q) x`: moves `x[i]` to position `Q i_b`.
pub fn apply_linear_perm<T: Scalar>(q: &BitMatrix, x: &[T]) -> Result<Vec<T>> {
    if x.len() != 1usize << q.rows() {
        return Err(Error::Dimension(format!(
            "vector of length {} for a permutation on 2^{} points",
            x.len(),
            q.rows()
        )));
    }
    let table = permutation_table(q)?;
    Ok(permute(&table, x))
}

fn permute<T: Scalar>(table: &[usize], x: &[T]) -> Vec<T> {
    let mut y = vec![T::zero(); x.len()];
    for (i, &v) in x.iter().enumerate() {
        y[table[i]] = v;
    }
    y
}

/// `(I ⊗ F_2) x`: every consecutive pair `(a, b)` becomes `(a + b, a - b)`.
pub fn apply_butterfly_array<T: Scalar>(x: &[T]) -> Result<Vec<T>> {
    if !x.len().is_multiple_of(2) {
        return Err(Error::Dimension(format!("butterfly array on odd length {}", x.len())));
    }
    let mut y = x.to_vec();
    butterflies_in_place(&mut y);
    Ok(y)
}

fn butterflies_in_place<T: Scalar>(x: &mut [T]) {
    for pair in x.chunks_exact_mut(2) {
        let (a, b) = (pair[0], pair[1]);
        pair[0] = a + b;
        pair[1] = a - b;
    }
}

/// Stage tables for `P_k, ..., P_n`, in application order (rightmost first).
fn stage_tables(p: &AlgorithmSeq, k: usize) -> Result<Vec<Vec<usize>>> {
    (k..=p.n())
        .rev()
        .map(|s| permutation_table(p.get(s)))
        .collect()
}

fn run_stages<T: Scalar>(tables: &[Vec<usize>], i: usize, dim: usize) -> Vec<T> {
    let mut x = vec![T::zero(); dim];
    x[i] = T::one();
    for t in tables {
        x = permute(t, &x);
        butterflies_in_place(&mut x);
    }
    x
}

/// `W_k(P) = (I ⊗ F_2) pi(P_k) ... (I ⊗ F_2) pi(P_n)`, with `W_{n+1}(P) = I`.
pub fn evaluate_partial<T: Scalar>(p: &AlgorithmSeq, k: usize) -> Result<DenseMatrix<T>> {
    let n = p.n();
    if !(1..=n + 1).contains(&k) {
        return Err(Error::range("stage", k, 1, n + 1));
    }
    guard(n)?;
    let tables = stage_tables(p, k)?;
    let dim = 1usize << n;
    Ok(DenseMatrix::from_columns(
        (0..dim).map(|i| run_stages(&tables, i, dim)).collect(),
    ))
}

/// `W(P) = pi(P_0) W_1(P)`, evaluated one column (basis vector) at a time.
pub fn evaluate<T: Scalar>(p: &AlgorithmSeq) -> Result<DenseMatrix<T>> {
    guard(p.n())?;
    let tables = stage_tables(p, 1)?;
    let first = permutation_table(p.get(0))?;
    let dim = 1usize << p.n();
    let columns = (0..dim)
        .map(|i| {
            let x = run_stages::<T>(&tables, i, dim);
            permute(&first, &x)
        })
        .collect();
    Ok(DenseMatrix::from_columns(columns))
}

/// True when `W(P)` equals `WHT_n` exactly.
pub fn computes_wht(p: &AlgorithmSeq) -> Result<bool> {
    Ok(evaluate::<i32>(p)? == hadamard::<i32>(p.n())?)
}

/// A set of output indices (as bit-vectors) attached to one input index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DependencySet {
    pub input_index: u64,
    pub members: BTreeSet<BitVector>,
}

impl DependencySet {
    pub fn indices(&self) -> Vec<u64> {
        self.members.iter().map(BitVector::index).collect()
    }
}

/// Reads `(D_k(i), D_k^+(i), D_k^-(i))` off column `i` of `W_k(P)`;
/// `k = 0` reads the full `W(P)`.
pub fn dependency_sets(
    p: &AlgorithmSeq,
    k: usize,
    i: u64,
) -> Result<(DependencySet, DependencySet, DependencySet)> {
    let n = p.n();
    if k > n + 1 {
        return Err(Error::range("stage", k, 0, n + 1));
    }
    guard(n)?;
    let dim = 1u64 << n;
    if i >= dim {
        return Err(Error::range("input index", i, 0, dim as usize - 1));
    }
    let column = if k == 0 {
        let tables = stage_tables(p, 1)?;
        let x = run_stages::<i32>(&tables, i as usize, dim as usize);
        permute(&permutation_table(p.get(0))?, &x)
    } else {
        let tables = stage_tables(p, k)?;
        run_stages::<i32>(&tables, i as usize, dim as usize)
    };
    Ok(split_column(&column, n, i))
}

pub(crate) fn split_column(
    column: &[i32],
    n: usize,
    i: u64,
) -> (DependencySet, DependencySet, DependencySet) {
    let pick = |pred: &dyn Fn(i32) -> bool| DependencySet {
        input_index: i,
        members: column
            .iter()
            .enumerate()
            .filter(|(_, &v)| pred(v))
            .map(|(j, _)| BitVector::from_word(j as u64, n))
            .collect(),
    };
    (pick(&|v| v != 0), pick(&|v| v == 1), pick(&|v| v == -1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf2::{reversal_matrix, rotation_matrix};

    fn seq(ms: &[&str]) -> AlgorithmSeq {
        AlgorithmSeq::new(ms.iter().map(|s| s.parse().unwrap()).collect()).unwrap()
    }

    fn pease2() -> AlgorithmSeq {
        seq(&["10/01", "01/10", "01/10"])
    }

    #[test]
    fn hadamard_small() {
        let h1 = hadamard::<i32>(1).unwrap();
        assert_eq!(h1.entries(), &[1, 1, 1, -1]);
        let h3 = hadamard::<i32>(3).unwrap();
        let expected: [[i32; 8]; 8] = [
            [1, 1, 1, 1, 1, 1, 1, 1],
            [1, -1, 1, -1, 1, -1, 1, -1],
            [1, 1, -1, -1, 1, 1, -1, -1],
            [1, -1, -1, 1, 1, -1, -1, 1],
            [1, 1, 1, 1, -1, -1, -1, -1],
            [1, -1, 1, -1, -1, 1, -1, 1],
            [1, 1, -1, -1, -1, -1, 1, 1],
            [1, -1, -1, 1, -1, 1, 1, -1],
        ];
        for (r, row) in expected.iter().enumerate() {
            assert_eq!(h3.row(r), row);
        }
    }

    #[test]
    fn hadamard_squares_to_scaled_identity() {
        for n in 1..=6 {
            let h = hadamard::<i64>(n).unwrap();
            assert_eq!(h.mul(&h), DenseMatrix::identity(1 << n).scale(1 << n));
        }
    }

    #[test]
    fn hadamard_is_kronecker_power() {
        for total in 2..=6 {
            for p in 1..total {
                let lhs = hadamard::<i32>(total).unwrap();
                let rhs = hadamard::<i32>(p).unwrap().kronecker(&hadamard(total - p).unwrap());
                assert_eq!(lhs, rhs, "p={p} q={}", total - p);
            }
        }
    }

    #[test]
    fn linear_permutations() {
        let x = [10, 11, 12, 13];
        assert_eq!(apply_linear_perm(&BitMatrix::identity(2), &x).unwrap(), x);
        assert_eq!(apply_linear_perm(&rotation_matrix(2), &x).unwrap(), [10, 12, 11, 13]);
        let mut e6 = [0i32; 8];
        e6[6] = 1;
        let y = apply_linear_perm(&reversal_matrix(3), &e6).unwrap();
        assert_eq!(y.iter().position(|&v| v == 1), Some(3));
        assert!(apply_linear_perm(&BitMatrix::identity(2), &[1, 2, 3]).is_err());
        assert!(matches!(
            apply_linear_perm(&"11/11".parse().unwrap(), &x),
            Err(Error::Singular { .. })
        ));
    }

    #[test]
    fn perfect_shuffle_interleaves_halves() {
        let x: Vec<i32> = (0..16).collect();
        let y = apply_linear_perm(&rotation_matrix(4), &x).unwrap();
        assert_eq!(y, vec![0, 8, 1, 9, 2, 10, 3, 11, 4, 12, 5, 13, 6, 14, 7, 15]);
    }

    #[test]
    fn butterflies() {
        assert_eq!(apply_butterfly_array(&[1, 0]).unwrap(), [1, 1]);
        assert_eq!(apply_butterfly_array(&[1, 1]).unwrap(), [2, 0]);
        assert_eq!(apply_butterfly_array(&[1, 2, 3, 4]).unwrap(), [3, -1, 7, -1]);
        assert!(apply_butterfly_array(&[1, 2, 3]).is_err());
    }

    #[test]
    fn evaluate_pease_and_trivial() {
        assert_eq!(evaluate::<i32>(&pease2()).unwrap(), hadamard(2).unwrap());
        let one = seq(&["1", "1"]);
        assert_eq!(evaluate::<i32>(&one).unwrap().entries(), &[1, 1, 1, -1]);
        let ident = seq(&["10/01", "10/01", "10/01"]);
        let w = evaluate::<i32>(&ident).unwrap();
        assert_ne!(w, hadamard(2).unwrap());
        assert!(w.entries().contains(&0));
    }

    #[test]
    fn evaluate_generic_scalars_agree() {
        let p = pease2();
        let wi = evaluate::<i64>(&p).unwrap();
        let wf = evaluate::<f64>(&p).unwrap();
        for (a, b) in wi.entries().iter().zip(wf.entries()) {
            assert_eq!(*a as f64, *b);
        }
    }

    #[test]
    fn partial_products() {
        let p = pease2();
        assert_eq!(evaluate_partial::<i32>(&p, 3).unwrap(), DenseMatrix::identity(4));
        let w1 = evaluate_partial::<i32>(&p, 1).unwrap();
        let p0 = DenseMatrix::<i32>::identity(4).permute_rows(&permutation_table(p.get(0)).unwrap());
        assert_eq!(p0.mul(&w1), evaluate(&p).unwrap());
        // single stage (I ⊗ F_2) pi(C_2), by hand
        let shuffle = DenseMatrix::<i32>::identity(4).permute_rows(&permutation_table(&rotation_matrix(2)).unwrap());
        let bf = DenseMatrix::<i32>::identity(2).kronecker(&hadamard(1).unwrap());
        assert_eq!(evaluate_partial::<i32>(&p, 2).unwrap(), bf.mul(&shuffle));
        assert!(evaluate_partial::<i32>(&p, 0).is_err());
        assert!(evaluate_partial::<i32>(&p, 4).is_err());
    }

    #[test]
    fn dependency_read_off() {
        let p = pease2();
        for i in 0..4 {
            let (d, dp, dm) = dependency_sets(&p, 3, i).unwrap();
            assert_eq!(d.indices(), vec![i]);
            assert_eq!(dp.indices(), vec![i]);
            assert!(dm.members.is_empty());
        }
        let (d, dp, dm) = dependency_sets(&p, 1, 0).unwrap();
        assert_eq!(d.indices(), vec![0, 1, 2, 3]);
        assert_eq!(dp.indices(), vec![0, 1, 2, 3]);
        assert!(dm.members.is_empty());
        assert!(dependency_sets(&p, 4, 0).is_err());
        assert!(dependency_sets(&p, 1, 4).is_err());
    }

    #[test]
    fn guard_refuses_large_n() {
        let n = oracle_max_n() + 1;
        let big = AlgorithmSeq::new(vec![BitMatrix::identity(n); n + 1]).unwrap();
        assert!(matches!(evaluate::<i32>(&big), Err(Error::Guard { .. })));
        assert!(matches!(hadamard::<i32>(n), Err(Error::Guard { .. })));
    }

    #[test]
    fn stage_kron_is_conjugated_butterfly() {
        // bit n is the least significant bit: I ⊗ F_2 itself
        let direct = DenseMatrix::<i32>::identity(4).kronecker(&hadamard(1).unwrap());
        assert_eq!(butterfly_stage_kron::<i32>(3, 3).unwrap(), direct);
    }
}
