//! Named reference algorithms and the sequency-ordered variant.

use std::fmt;
use std::str::FromStr;

use crate::characterizer::is_member;
use crate::error::{Error, Result};
use crate::gf2::{reversal_matrix, rotation_matrix, BitMatrix};
use crate::sequence::AlgorithmSeq;

/// Pease: `n` perfect shuffles, each followed by a butterfly array.
/// `P_0 = I` and `P_i = C_n` for `1 <= i <= n`.
pub fn pease(n: usize) -> AlgorithmSeq {
    let mut ms = vec![BitMatrix::identity(n)];
    ms.extend(std::iter::repeat_n(rotation_matrix(n), n));
    AlgorithmSeq::from_trusted(ms)
}

/// The transpose of Pease, `(P_n^{-1}, ..., P_0^{-1})`.
pub fn pease_transpose(n: usize) -> AlgorithmSeq {
    pease(n).transposed()
}

/// `T_k`: swaps bit positions `k` and `n` (1-based, `T_n = I`).
fn bit_swap(n: usize, k: usize) -> BitMatrix {
    let mut perm: Vec<usize> = (0..n).collect();
    perm.swap(k - 1, n - 1);
    BitMatrix::from_permutation(&perm).expect("transposition")
}

/// Iterative Cooley-Tukey: stage `k` butterflies across index bit `k`.
///
/// Each stage `I_{2^{k-1}} ⊗ F_2 ⊗ I_{2^{n-k}}` equals
/// `pi(T_k) (I ⊗ F_2) pi(T_k)`; fusing neighbouring swaps gives
/// `P_0 = T_1`, `P_i = T_i T_{i+1}` and `P_n = T_n`.
pub fn iterative_ct(n: usize) -> AlgorithmSeq {
    assert!(n >= 1);
    let mut ms = Vec::with_capacity(n + 1);
    ms.push(bit_swap(n, 1));
    for i in 1..n {
        ms.push(&bit_swap(n, i) * &bit_swap(n, i + 1));
    }
    ms.push(bit_swap(n, n));
    AlgorithmSeq::from_trusted(ms)
}

/// Toggles between natural (Hadamard) and sequency (Walsh) output order by
/// replacing `P_0` with `J_n P_0`.
///
/// The input must compute either the Hadamard or the Walsh matrix; applying
/// this twice returns the original sequence.
pub fn to_sequency(p: &AlgorithmSeq) -> Result<AlgorithmSeq> {
    let reordered = reorder_outputs(p);
    if !is_member(p) && !is_member(&reordered) {
        return Err(Error::NotMember(
            "neither the sequence nor its bit-reversed output order computes WHT_n".into(),
        ));
    }
    Ok(reordered)
}

fn reorder_outputs(p: &AlgorithmSeq) -> AlgorithmSeq {
    let mut ms = p.matrices().to_vec();
    ms[0] = &reversal_matrix(p.n()) * &ms[0];
    AlgorithmSeq::from_trusted(ms)
}

/// Catalog entries addressable by name.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CatalogName {
    Pease,
    PeaseTranspose,
    IterativeCooleyTukey,
}

impl CatalogName {
    pub const ALL: [CatalogName; 3] = [
        CatalogName::Pease,
        CatalogName::PeaseTranspose,
        CatalogName::IterativeCooleyTukey,
    ];

    pub fn build(self, n: usize) -> AlgorithmSeq {
        match self {
            CatalogName::Pease => pease(n),
            CatalogName::PeaseTranspose => pease_transpose(n),
            CatalogName::IterativeCooleyTukey => iterative_ct(n),
        }
    }
}

impl fmt::Display for CatalogName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CatalogName::Pease => "pease",
            CatalogName::PeaseTranspose => "pease-t",
            CatalogName::IterativeCooleyTukey => "ict",
        })
    }
}

impl FromStr for CatalogName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        CatalogName::ALL
            .into_iter()
            .find(|c| c.to_string() == s)
            .ok_or_else(|| Error::Parse {
                line: 1,
                column: 1,
                message: format!("unknown catalog entry {s:?} (expected pease, pease-t or ict)"),
            })
    }
}

/// Builds a catalog entry, optionally in sequency order.
pub fn catalog(name: CatalogName, n: usize, sequency: bool) -> Result<AlgorithmSeq> {
    if n == 0 {
        return Err(Error::range("n", 0, 1, crate::gf2::N_MAX));
    }
    let p = name.build(n);
    if sequency {
        to_sequency(&p)
    } else {
        Ok(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::characterizer::check_theorem1;
    use crate::factory::factorize;

    #[test]
    fn pease_n2_is_first_table_row() {
        assert_eq!(pease(2).to_string(), "n=2; 10/01; 01/10; 01/10");
        assert_eq!(pease_transpose(2).to_string(), "n=2; 01/10; 01/10; 10/01");
    }

    #[test]
    fn catalog_members_pass_fast_check() {
        for n in 1..=8 {
            for name in CatalogName::ALL {
                assert!(check_theorem1(&name.build(n)).passed, "{name} n={n}");
            }
        }
    }

    #[test]
    fn ict_small() {
        assert_eq!(iterative_ct(1).to_string(), "n=1; 1; 1");
        // n = 2: P_0 = T_1 = swap, P_1 = T_1 T_2 = swap, P_2 = I
        assert_eq!(iterative_ct(2), pease_transpose(2));
    }

    #[test]
    fn pease_factors_have_equal_qs() {
        for n in 2..=6 {
            let f = factorize(&pease(n)).unwrap();
            assert!(f.b().is_identity());
            assert!(f.qs().windows(2).all(|w| w[0] == w[1]), "n={n}: {f}");
            assert!(f.qs()[0].is_identity());
        }
    }

    #[test]
    fn sequency_toggle() {
        let p = pease(3);
        let s = to_sequency(&p).unwrap();
        assert_ne!(s, p);
        assert_eq!(to_sequency(&s).unwrap(), p);
        assert_eq!(to_sequency(&pease(1)).unwrap(), pease(1));
        let ident = AlgorithmSeq::new(vec![BitMatrix::identity(2); 3]).unwrap();
        assert!(matches!(to_sequency(&ident), Err(Error::NotMember(_))));
    }

    #[test]
    fn names_round_trip() {
        for name in CatalogName::ALL {
            assert_eq!(name.to_string().parse::<CatalogName>().unwrap(), name);
        }
        assert!("fft".parse::<CatalogName>().is_err());
    }
}
