//! Bit-vectors and bit-matrices over the two-element field.
//!
//! Indexing is most-significant-bit first everywhere: position 0 of a
//! [`BitVector`] is the top of the column vector, and column 0 of a
//! [`BitMatrix`] multiplies that top bit. Each matrix row is packed into a
//! `u64` whose integer value equals the row read left to right as a binary
//! number, so the text form `"01/10"` is stored as the words `[1, 2]`.

use std::fmt;
use std::ops::{Add, Mul};
use std::str::FromStr;

use crate::error::{Error, Result};

/// Largest supported dimension (one packed word per row).
pub const N_MAX: usize = 64;

#[inline]
pub(crate) fn mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

#[inline]
fn parity(w: u64) -> bool {
    w.count_ones() & 1 == 1
}

fn check_dim(n: usize) -> Result<()> {
    if n > N_MAX {
        return Err(Error::range("dimension", n, 0, N_MAX));
    }
    Ok(())
}

/// A column vector in F2^n, stored as the integer it represents.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitVector {
    n: usize,
    word: u64,
}

impl BitVector {
    /// The binary representation `i_b` of `index` on `n` bits.
    pub fn from_index(index: u64, n: usize) -> Result<Self> {
        check_dim(n)?;
        if index & !mask(n) != 0 {
            return Err(Error::Range {
                what: "index",
                value: i64::try_from(index).unwrap_or(i64::MAX),
                range: format!("[0, 2^{n})"),
            });
        }
        Ok(BitVector { n, word: index })
    }

    pub(crate) fn from_word(word: u64, n: usize) -> Self {
        debug_assert!(word & !mask(n) == 0);
        BitVector { n, word }
    }

    pub fn zero(n: usize) -> Self {
        BitVector { n, word: 0 }
    }

    /// `1_b = (0, ..., 0, 1)^T`, the least significant bit.
    pub fn one(n: usize) -> Self {
        BitVector {
            n,
            word: u64::from(n > 0),
        }
    }

    /// Canonical basis vector with a single 1 at position `k` (0 = top).
    pub fn unit(n: usize, k: usize) -> Self {
        assert!(k < n, "unit vector position {k} out of range for n = {n}");
        BitVector {
            n,
            word: 1u64 << (n - 1 - k),
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// The integer whose binary representation this is.
    pub fn index(&self) -> u64 {
        self.word
    }

    pub fn get(&self, k: usize) -> bool {
        assert!(k < self.n);
        (self.word >> (self.n - 1 - k)) & 1 == 1
    }

    pub fn is_zero(&self) -> bool {
        self.word == 0
    }

    /// Inner product `self^T other` over F2.
    pub fn dot(&self, other: &BitVector) -> bool {
        assert_eq!(self.n, other.n);
        parity(self.word & other.word)
    }

    /// Bits top to bottom.
    pub fn bits(&self) -> Vec<u8> {
        (0..self.n).map(|k| u8::from(self.get(k))).collect()
    }
}

impl Add for BitVector {
    type Output = BitVector;

    fn add(self, rhs: BitVector) -> BitVector {
        assert_eq!(self.n, rhs.n);
        BitVector {
            n: self.n,
            word: self.word ^ rhs.word,
        }
    }
}

impl fmt::Debug for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVector({self})")
    }
}

impl fmt::Display for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.bits() {
            write!(f, "{b}")?;
        }
        Ok(())
    }
}

/// `i_b`: the n-bit column vector of `i`, most significant bit on top.
pub fn int_to_bits(i: u64, n: usize) -> Result<BitVector> {
    BitVector::from_index(i, n)
}

pub fn bits_to_int(v: &BitVector) -> u64 {
    v.index()
}

/// A dense bit-matrix over F2 with one packed word per row.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows <= N_MAX && cols <= N_MAX, "dimension exceeds {N_MAX}");
        BitMatrix {
            rows,
            cols,
            data: vec![0; rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for r in 0..n {
            m.data[r] = 1u64 << (n - 1 - r);
        }
        m
    }

    /// Builds a matrix from packed row words (row `r` read as a binary number, MSB = column 0).
    pub fn from_row_words(cols: usize, words: &[u64]) -> Result<Self> {
        check_dim(cols)?;
        check_dim(words.len())?;
        if let Some(r) = words.iter().position(|w| w & !mask(cols) != 0) {
            return Err(Error::Dimension(format!(
                "row {r} has bits beyond column {cols}"
            )));
        }
        Ok(BitMatrix {
            rows: words.len(),
            cols,
            data: words.to_vec(),
        })
    }

    /// Builds a square matrix whose columns are the given vectors.
    pub fn from_columns(columns: &[BitVector]) -> Result<Self> {
        let cols = columns.len();
        check_dim(cols)?;
        let rows = columns.first().map_or(0, BitVector::dim);
        if columns.iter().any(|c| c.dim() != rows) {
            return Err(Error::Dimension("columns of unequal length".into()));
        }
        let mut m = Self::zeros(rows, cols);
        for (c, v) in columns.iter().enumerate() {
            for r in 0..rows {
                if v.get(r) {
                    m.set(r, c, true);
                }
            }
        }
        Ok(m)
    }

    /// Permutation matrix with a 1 at `(r, perm[r])` for every row `r`.
    pub fn from_permutation(perm: &[usize]) -> Result<Self> {
        let n = perm.len();
        check_dim(n)?;
        let mut seen = vec![false; n];
        let mut m = Self::zeros(n, n);
        for (r, &c) in perm.iter().enumerate() {
            if c >= n || seen[c] {
                return Err(Error::Dimension(format!("{perm:?} is not a permutation")));
            }
            seen[c] = true;
            m.set(r, c, true);
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        assert!(r < self.rows && c < self.cols);
        (self.data[r] >> (self.cols - 1 - c)) & 1 == 1
    }

    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        assert!(r < self.rows && c < self.cols);
        let bit = 1u64 << (self.cols - 1 - c);
        if value {
            self.data[r] |= bit;
        } else {
            self.data[r] &= !bit;
        }
    }

    pub fn row_word(&self, r: usize) -> u64 {
        self.data[r]
    }

    pub fn row_words(&self) -> &[u64] {
        &self.data
    }

    pub fn row(&self, r: usize) -> BitVector {
        BitVector::from_word(self.data[r], self.cols)
    }

    pub fn column(&self, c: usize) -> BitVector {
        assert!(c < self.cols);
        let shift = self.cols - 1 - c;
        let word = self
            .data
            .iter()
            .fold(0u64, |acc, w| (acc << 1) | ((w >> shift) & 1));
        BitVector::from_word(word, self.rows)
    }

    pub fn transpose(&self) -> BitMatrix {
        let mut t = BitMatrix::zeros(self.cols, self.rows);
        for c in 0..self.cols {
            t.data[c] = self.column(c).index();
        }
        t
    }

    /// Matrix product over F2.
    pub fn mul(&self, other: &BitMatrix) -> Result<BitMatrix> {
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let data = self
            .data
            .iter()
            .map(|&row| {
                (0..self.cols)
                    .filter(|&c| (row >> (self.cols - 1 - c)) & 1 == 1)
                    .fold(0u64, |acc, c| acc ^ other.data[c])
            })
            .collect();
        Ok(BitMatrix {
            rows: self.rows,
            cols: other.cols,
            data,
        })
    }

    pub fn mul_vec(&self, v: &BitVector) -> BitVector {
        assert_eq!(self.cols, v.dim(), "matrix-vector dimension mismatch");
        let word = self
            .data
            .iter()
            .fold(0u64, |acc, &row| (acc << 1) | u64::from(parity(row & v.index())));
        BitVector::from_word(word, self.rows)
    }

    /// `self^k`; `k = 0` gives the identity.
    pub fn pow(&self, k: u32) -> BitMatrix {
        assert!(self.is_square());
        (0..k).fold(BitMatrix::identity(self.rows), |acc, _| &acc * self)
    }

    /// Row rank over F2.
    pub fn rank(&self) -> usize {
        let mut rows = self.data.clone();
        let mut rank = 0;
        for c in 0..self.cols {
            let bit = 1u64 << (self.cols - 1 - c);
            let Some(p) = (rank..rows.len()).find(|&r| rows[r] & bit != 0) else {
                continue;
            };
            rows.swap(rank, p);
            let pivot = rows[rank];
            for (r, row) in rows.iter_mut().enumerate() {
                if r != rank && *row & bit != 0 {
                    *row ^= pivot;
                }
            }
            rank += 1;
        }
        rank
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }

    /// Inverse by Gauss-Jordan elimination; the pivot is the first row with a 1.
    pub fn invert(&self) -> Result<BitMatrix> {
        if !self.is_square() {
            return Err(Error::Dimension(format!(
                "cannot invert a {}x{} matrix",
                self.rows, self.cols
            )));
        }
        let n = self.rows;
        let mut a = self.data.clone();
        let mut inv = BitMatrix::identity(n).data;
        for c in 0..n {
            let bit = 1u64 << (n - 1 - c);
            let Some(p) = (c..n).find(|&r| a[r] & bit != 0) else {
                return Err(Error::Singular {
                    rank: self.rank(),
                    dim: n,
                    context: None,
                });
            };
            a.swap(c, p);
            inv.swap(c, p);
            let (pa, pi) = (a[c], inv[c]);
            for r in 0..n {
                if r != c && a[r] & bit != 0 {
                    a[r] ^= pa;
                    inv[r] ^= pi;
                }
            }
        }
        Ok(BitMatrix {
            rows: n,
            cols: n,
            data: inv,
        })
    }

    pub fn is_identity(&self) -> bool {
        self.is_square() && *self == BitMatrix::identity(self.rows)
    }

    /// True when every row and every column holds exactly one 1.
    pub fn is_permutation(&self) -> bool {
        self.is_square()
            && self.data.iter().all(|w| w.count_ones() == 1)
            && self.data.iter().fold(0u64, |acc, w| acc | w) == mask(self.cols)
    }

    /// The bordered matrix `diag(Q, 1)`: `self` in the top-left block, 1 in the bottom-right corner.
    pub fn bordered(&self) -> BitMatrix {
        assert!(self.is_square());
        let n = self.rows + 1;
        let mut data: Vec<u64> = self.data.iter().map(|w| w << 1).collect();
        data.push(1);
        BitMatrix {
            rows: n,
            cols: n,
            data,
        }
    }

    /// Top-left `k x k` block.
    pub fn top_left(&self, k: usize) -> BitMatrix {
        assert!(k <= self.rows && k <= self.cols);
        let shift = self.cols - k;
        BitMatrix {
            rows: k,
            cols: k,
            data: self.data[..k].iter().map(|w| (w >> shift) & mask(k)).collect(),
        }
    }
}

impl Mul for &BitMatrix {
    type Output = BitMatrix;

    /// Panics on a dimension mismatch; use [`BitMatrix::mul`] for a checked product.
    fn mul(self, rhs: &BitMatrix) -> BitMatrix {
        BitMatrix::mul(self, rhs).expect("bit-matrix dimension mismatch")
    }
}

impl Mul<&BitVector> for &BitMatrix {
    type Output = BitVector;

    fn mul(self, rhs: &BitVector) -> BitVector {
        self.mul_vec(rhs)
    }
}

/// `C_n`: ones at `(k, k+1)` and `(n, 1)`; rotates index bits up, i.e. the perfect shuffle.
pub fn rotation_matrix(n: usize) -> BitMatrix {
    assert!((1..=N_MAX).contains(&n));
    let perm: Vec<usize> = (0..n).map(|r| (r + 1) % n).collect();
    BitMatrix::from_permutation(&perm).expect("rotation is a permutation")
}

/// `J_n`: the anti-diagonal matrix, reversing the order of index bits.
pub fn reversal_matrix(n: usize) -> BitMatrix {
    assert!((1..=N_MAX).contains(&n));
    let perm: Vec<usize> = (0..n).map(|r| n - 1 - r).collect();
    BitMatrix::from_permutation(&perm).expect("reversal is a permutation")
}

impl fmt::Display for BitMatrix {
    /// Rows joined by `/`, each row MSB-left; the empty matrix prints as `-`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.rows == 0 {
            return f.write_str("-");
        }
        for r in 0..self.rows {
            if r > 0 {
                f.write_str("/")?;
            }
            for c in 0..self.cols {
                f.write_str(if self.get(r, c) { "1" } else { "0" })?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitMatrix({self})")
    }
}

impl FromStr for BitMatrix {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_matrix_at(s, 1, 1)
    }
}

/// Parses a `0`/`1` row text form; `line`/`column` locate `s` in a larger document for diagnostics.
pub(crate) fn parse_matrix_at(s: &str, line: usize, column: usize) -> Result<BitMatrix> {
    let err = |offset: usize, message: String| Error::Parse {
        line,
        column: column + offset,
        message,
    };
    if s == "-" {
        return Ok(BitMatrix::zeros(0, 0));
    }
    if s.is_empty() {
        return Err(err(0, "empty matrix".into()));
    }
    let mut words = Vec::new();
    let mut cols = None;
    let mut offset = 0;
    for row in s.split('/') {
        if row.is_empty() {
            return Err(err(offset, "empty row".into()));
        }
        if row.len() > N_MAX {
            return Err(err(offset, format!("row longer than {N_MAX} bits")));
        }
        let mut word = 0u64;
        for (k, ch) in row.chars().enumerate() {
            word = (word << 1)
                | match ch {
                    '0' => 0,
                    '1' => 1,
                    other => return Err(err(offset + k, format!("unexpected character {other:?}"))),
                };
        }
        match cols {
            None => cols = Some(row.len()),
            Some(c) if c != row.len() => {
                return Err(err(offset, format!("row has {} bits, expected {c}", row.len())));
            }
            _ => {}
        }
        words.push(word);
        offset += row.len() + 1;
    }
    if words.len() > N_MAX {
        return Err(err(0, format!("more than {N_MAX} rows")));
    }
    BitMatrix::from_row_words(cols.unwrap_or(0), &words)
}
