//! Enumeration, sampling and exact counting of `GL_n(F2)` and the permutation matrices `S_n`.

use std::fmt;
use std::ops::Range;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::gf2::{mask, BitMatrix, N_MAX};

/// Largest `n` for which `GL_n(F2)` may be enumerated in full.
pub const GL_ENUM_MAX_N: usize = 5;
/// Largest `n` for which `S_n` may be enumerated in full.
pub const PERM_ENUM_MAX_N: usize = 10;

/// An exact nonnegative count.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct BigCount(pub BigUint);

impl BigCount {
    pub fn value(&self) -> &BigUint {
        &self.0
    }

    pub fn to_u64(&self) -> Option<u64> {
        self.0.to_u64()
    }

    /// Number of decimal digits.
    pub fn digits(&self) -> usize {
        self.0.to_str_radix(10).len()
    }
}

impl From<u64> for BigCount {
    fn from(v: u64) -> Self {
        BigCount(BigUint::from(v))
    }
}

impl fmt::Display for BigCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

fn pow2(k: usize) -> BigUint {
    BigUint::one() << k
}

/// `|GL_n(F2)| = prod_{i<n} (2^n - 2^i)`; 1 for `n = 0`.
pub fn count_gl(n: usize) -> BigCount {
    BigCount((0..n).map(|i| pow2(n) - pow2(i)).product())
}

/// `|S_n| = n!`.
pub fn count_perm(n: usize) -> BigCount {
    BigCount((1..=n as u64).map(BigUint::from).product())
}

/// Number of fast algorithms implied by the factor-tuple bijection:
/// `|GL_n| * |GL_{n-1}|^n`.
pub fn count_algorithms(n: usize) -> BigCount {
    assert!(n >= 1);
    BigCount(count_gl(n).0 * count_gl(n - 1).0.pow(n as u32))
}

/// The simplified closed form `(2^{n+1} - 2) prod_{i<n-1} (2^{n-1} - 2^i)^{n+1}`.
///
/// It differs from [`count_algorithms`] by a factor `2^{n-2}` for `n >= 3`,
/// and is reported only as a diagnostic.
pub fn paper_closed_form(n: usize) -> BigCount {
    assert!(n >= 1);
    let head = pow2(n + 1) - BigUint::from(2u8);
    let tail: BigUint = (0..n - 1)
        .map(|i| (pow2(n - 1) - pow2(i)).pow(n as u32 + 1))
        .product();
    BigCount(head * tail)
}

/// Number of bit-index permuted fast algorithms, `n ((n-1)!)^{n+1}`.
pub fn count_bit_index_algorithms(n: usize) -> BigCount {
    assert!(n >= 1);
    BigCount(BigUint::from(n) * count_perm(n - 1).0.pow(n as u32 + 1))
}

/// The three counts reported together by the CLI.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgorithmCounts {
    pub n: usize,
    pub gl: BigCount,
    pub bijection: BigCount,
    pub paper_closed_form: BigCount,
    pub bit_index: BigCount,
}

pub fn algorithm_counts(n: usize) -> AlgorithmCounts {
    AlgorithmCounts {
        n,
        gl: count_gl(n),
        bijection: count_algorithms(n),
        paper_closed_form: paper_closed_form(n),
        bit_index: count_bit_index_algorithms(n),
    }
}

/// Reduces `v` against an echelon basis; zero iff `v` lies in the span.
fn reduce(basis: &[u64], mut v: u64) -> u64 {
    for &b in basis {
        let lead = 63 - b.leading_zeros();
        if (v >> lead) & 1 == 1 {
            v ^= b;
        }
    }
    v
}

fn insert(basis: &[u64], v: u64) -> Vec<u64> {
    let r = reduce(basis, v);
    debug_assert!(r != 0);
    let mut out = basis.to_vec();
    out.push(r);
    out.sort_unstable_by(|a, b| b.cmp(a));
    out
}

/// Iterator over `GL_n(F2)`: rows chosen top to bottom, each in increasing
/// integer order among vectors outside the span of the rows above it.
pub struct GlIter {
    n: usize,
    rows: Vec<u64>,
    bases: Vec<Vec<u64>>,
    cursor: u64,
    done: bool,
}

impl Iterator for GlIter {
    type Item = BitMatrix;

    fn next(&mut self) -> Option<BitMatrix> {
        let limit = mask(self.n);
        while !self.done {
            let depth = self.rows.len();
            if depth == self.n {
                let m = BitMatrix::from_row_words(self.n, &self.rows).expect("rows fit");
                self.backtrack();
                return Some(m);
            }
            let basis = &self.bases[depth];
            let found = (self.cursor..=limit).find(|&v| v != 0 && reduce(basis, v) != 0);
            match found {
                Some(v) => {
                    let next = insert(basis, v);
                    self.bases.truncate(depth + 1);
                    self.bases.push(next);
                    self.rows.push(v);
                    self.cursor = 1;
                }
                None => self.backtrack(),
            }
        }
        None
    }
}

impl GlIter {
    fn backtrack(&mut self) {
        match self.rows.pop() {
            Some(r) => {
                self.bases.truncate(self.rows.len() + 1);
                self.cursor = r + 1;
            }
            None => self.done = true,
        }
    }
}

/// Streams every invertible `n x n` bit-matrix exactly once.
pub fn enumerate_gl(n: usize) -> Result<GlIter> {
    if !(1..=GL_ENUM_MAX_N).contains(&n) {
        return Err(Error::range("n for GL enumeration", n, 1, GL_ENUM_MAX_N));
    }
    if n == GL_ENUM_MAX_N {
        log::warn!("enumerating GL_{n}(F2): {} matrices", count_gl(n));
    }
    Ok(gl_iter_unchecked(n))
}

/// Same as [`enumerate_gl`] but also accepts `n = 0` (the single empty matrix).
pub(crate) fn gl_iter_unchecked(n: usize) -> GlIter {
    GlIter {
        n,
        rows: Vec::new(),
        bases: vec![Vec::new()],
        cursor: 1,
        done: false,
    }
}

/// Iterator over permutation matrices in lexicographic order of the permutation.
pub struct PermIter {
    perm: Vec<usize>,
    done: bool,
}

impl Iterator for PermIter {
    type Item = BitMatrix;

    fn next(&mut self) -> Option<BitMatrix> {
        if self.done {
            return None;
        }
        let out = BitMatrix::from_permutation(&self.perm).expect("valid permutation");
        // next permutation in lexicographic order
        let p = &mut self.perm;
        match (1..p.len()).rev().find(|&i| p[i - 1] < p[i]) {
            Some(i) => {
                let j = (i..p.len()).rev().find(|&j| p[j] > p[i - 1]).expect("pivot exists");
                p.swap(i - 1, j);
                p[i..].reverse();
            }
            None => self.done = true,
        }
        Some(out)
    }
}

/// Streams the `n!` permutation matrices of `S_n`.
pub fn enumerate_perm(n: usize) -> Result<PermIter> {
    if !(1..=PERM_ENUM_MAX_N).contains(&n) {
        return Err(Error::range("n for permutation enumeration", n, 1, PERM_ENUM_MAX_N));
    }
    Ok(perm_iter_unchecked(n))
}

pub(crate) fn perm_iter_unchecked(n: usize) -> PermIter {
    PermIter {
        perm: (0..n).collect(),
        done: false,
    }
}

/// Draws a uniform random matrix until it is invertible; returns it with the number of draws.
pub fn sample_gl_with<R: Rng + ?Sized>(rng: &mut R, n: usize) -> (BitMatrix, usize) {
    assert!(n <= N_MAX);
    let mut attempts = 0;
    loop {
        attempts += 1;
        let rows: Vec<u64> = (0..n).map(|_| rng.gen::<u64>() & mask(n)).collect();
        let m = BitMatrix::from_row_words(n, &rows).expect("rows fit");
        if m.is_invertible() {
            return (m, attempts);
        }
    }
}

/// A uniformly distributed element of `GL_n(F2)`, deterministic in `seed`.
pub fn sample_gl(n: usize, seed: u64) -> BitMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    sample_gl_with(&mut rng, n).0
}

/// Uniform random permutation matrix.
pub fn sample_perm_with<R: Rng + ?Sized>(rng: &mut R, n: usize) -> BitMatrix {
    let mut perm: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        perm.swap(i, rng.gen_range(0..=i));
    }
    BitMatrix::from_permutation(&perm).expect("valid permutation")
}

/// Splits `0..total` into `parts` contiguous ranges of near-equal size, in index order.
pub fn partition(total: u64, parts: usize) -> Vec<Range<u64>> {
    let parts = parts.max(1) as u64;
    let base = total / parts;
    let extra = total % parts;
    let mut start = 0;
    (0..parts)
        .map(|k| {
            let len = base + u64::from(k < extra);
            let r = start..start + len;
            start += len;
            r
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use std::collections::HashSet;

    use super::*;

    /// Brute force: every n x n matrix, filtered by rank.
    fn brute_force_gl(n: usize) -> Vec<BitMatrix> {
        let total = 1u64 << (n * n);
        (0..total)
            .map(|code| {
                let rows: Vec<u64> = (0..n).map(|r| (code >> (r * n)) & mask(n)).collect();
                BitMatrix::from_row_words(n, &rows).unwrap()
            })
            .filter(BitMatrix::is_invertible)
            .collect()
    }

    #[test]
    fn gl_enumeration_matches_brute_force() {
        for n in 1..=3 {
            let listed: Vec<BitMatrix> = enumerate_gl(n).unwrap().collect();
            let unique: HashSet<_> = listed.iter().cloned().collect();
            assert_eq!(unique.len(), listed.len(), "duplicates at n={n}");
            let brute: HashSet<_> = brute_force_gl(n).into_iter().collect();
            assert_eq!(unique, brute);
            assert_eq!(BigCount::from(listed.len() as u64), count_gl(n));
        }
        assert_eq!(enumerate_gl(1).unwrap().collect::<Vec<_>>(), vec!["1".parse().unwrap()]);
        assert_eq!(brute_force_gl(2).len(), 6);
        assert_eq!(brute_force_gl(3).len(), 168);
    }

    #[test]
    fn gl_enumeration_order_is_row_lexicographic() {
        let words: Vec<Vec<u64>> = enumerate_gl(3).unwrap().map(|m| m.row_words().to_vec()).collect();
        let mut sorted = words.clone();
        sorted.sort();
        assert_eq!(words, sorted);
        let first = enumerate_gl(3).unwrap().next().unwrap();
        assert_eq!(first.to_string(), "001/010/100");
    }

    #[test]
    fn gl4_count() {
        let n4 = enumerate_gl(4).unwrap().inspect(|m| assert!(m.is_invertible())).count();
        assert_eq!(n4, 20160);
        assert_eq!(count_gl(4).to_u64(), Some(20160));
    }

    #[test]
    fn enumeration_bounds() {
        assert!(enumerate_gl(0).is_err());
        assert!(enumerate_gl(6).is_err());
        assert!(enumerate_perm(0).is_err());
    }

    #[test]
    fn permutations() {
        let two: Vec<BitMatrix> = enumerate_perm(2).unwrap().collect();
        assert_eq!(two, vec![BitMatrix::identity(2), "01/10".parse().unwrap()]);
        assert_eq!(enumerate_perm(3).unwrap().count(), 6);
        let four: Vec<BitMatrix> = enumerate_perm(4).unwrap().collect();
        assert_eq!(four.len(), 24);
        assert!(four.iter().all(BitMatrix::is_permutation));
        assert_eq!(four.iter().collect::<HashSet<_>>().len(), 24);
    }

    #[test]
    fn counts() {
        assert_eq!(count_gl(0).to_u64(), Some(1));
        assert_eq!(count_gl(2).to_u64(), Some(6));
        assert_eq!(count_gl(3).to_u64(), Some(168));
        assert_eq!(count_algorithms(1).to_u64(), Some(1));
        assert_eq!(count_algorithms(2).to_u64(), Some(6));
        assert_eq!(count_algorithms(3).to_u64(), Some(36288));
        assert_eq!(paper_closed_form(2).to_u64(), Some(6));
        assert_eq!(paper_closed_form(3).to_u64(), Some(18144));
        assert_eq!(count_bit_index_algorithms(2).to_u64(), Some(2));
        assert_eq!(count_bit_index_algorithms(3).to_u64(), Some(48));
        assert_eq!(count_bit_index_algorithms(4).to_u64(), Some(31104));
    }

    #[test]
    fn closed_form_ratio() {
        for n in 3..=8 {
            let ratio = count_algorithms(n).0 / paper_closed_form(n).0;
            assert_eq!(ratio, pow2(n - 2));
            assert_eq!(count_algorithms(n).0 % paper_closed_form(n).0, BigUint::from(0u8));
        }
    }

    #[test]
    fn bit_index_identity() {
        for n in 1..=8 {
            let alt = count_perm(n).0 * count_perm(n - 1).0.pow(n as u32);
            assert_eq!(count_bit_index_algorithms(n).0, alt);
        }
    }

    #[test]
    fn large_counts_are_exact() {
        assert_eq!(paper_closed_form(8).digits(), 131);
        assert_eq!(count_algorithms(8).digits(), 133);
        assert_eq!(paper_closed_form(8).to_string().chars().next(), Some('4'));
    }

    #[test]
    fn sampling_is_deterministic_and_invertible() {
        assert_eq!(sample_gl(1, 99), BitMatrix::identity(1));
        assert_eq!(sample_gl(8, 7), sample_gl(8, 7));
        assert_ne!(sample_gl(8, 7), sample_gl(8, 8));
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for n in 1..=16 {
            assert!(sample_gl_with(&mut rng, n).0.is_invertible());
        }
    }

    #[test]
    fn partition_covers() {
        let ranges = partition(36288, 7);
        assert_eq!(ranges.len(), 7);
        assert_eq!(ranges[0].start, 0);
        assert_eq!(ranges.last().unwrap().end, 36288);
        assert!(ranges.windows(2).all(|w| w[0].end == w[1].start));
    }
}
