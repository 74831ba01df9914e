//! End-to-end acceptance run: one PASS/FAIL line per criterion.
//!
//! Set `WHT_WRITE_FIXTURES=1` to (re)write the stored counterexamples in
//! `tests/fixtures/` from the seeded searches.

use std::collections::BTreeSet;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use wht_core::characterizer::{find_minimality_counterexample, verify_counterexample};
use wht_core::factory::{enumerate_bit_index_members, enumerate_members, sample_factors_with};
use wht_core::gf2::reversal_matrix;
use wht_core::group::{count_algorithms, count_bit_index_algorithms, enumerate_gl, paper_closed_form, sample_gl_with};
use wht_core::limits::oracle_max_n;
use wht_core::oracle::{butterfly_stage_kron, computes_wht, dependency_sets, evaluate, hadamard, permutation_table};
use wht_core::text::AlgorithmDocument;
use wht_core::{
    build, check_lemma2, check_theorem1, iterative_ct, pease, pease_transpose, predict_dplus, spreading_matrix,
    to_sequency, AlgorithmSeq, BitMatrix, BitVector, Error, SignedMatrix, Violation,
};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome, Option<Duration>);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn random_sequence(rng: &mut ChaCha8Rng, n: usize) -> AlgorithmSeq {
    AlgorithmSeq::new((0..=n).map(|_| sample_gl_with(rng, n).0).collect()).unwrap()
}

fn all_sequences_n2() -> Vec<AlgorithmSeq> {
    let gl: Vec<BitMatrix> = enumerate_gl(2).unwrap().collect();
    let mut out = Vec::new();
    for a in &gl {
        for b in &gl {
            for c in &gl {
                out.push(AlgorithmSeq::new(vec![a.clone(), b.clone(), c.clone()]).unwrap());
            }
        }
    }
    out
}

fn oracle_equal(p: &AlgorithmSeq) -> bool {
    evaluate::<i32>(p).unwrap() == hadamard::<i32>(p.n()).unwrap()
}

/// Rows as `P_0 P_1 P_2 P_{0:2} X`.
const REFERENCE_N2: [&str; 6] = [
    "10/01 01/10 01/10 10/01 10/01",
    "01/10 01/10 10/01 10/01 01/10",
    "10/11 01/10 01/11 11/10 10/11",
    "11/01 01/10 11/10 01/11 11/01",
    "11/10 01/10 10/11 01/11 11/10",
    "01/11 01/10 11/01 11/10 01/11",
];

fn table_row(p: &AlgorithmSeq) -> String {
    let mut cols: Vec<String> = p.matrices().iter().map(|m| m.to_string()).collect();
    cols.push(p.product(0, p.n()).unwrap().to_string());
    cols.push(spreading_matrix(p).to_string());
    cols.join(" ")
}

fn reference_n2() -> Outcome {
    let got: Vec<String> = enumerate_members(2, false).unwrap().map(|p| table_row(&p)).collect();
    ensure!(got.len() == 6, "{} members", got.len());
    let got: BTreeSet<String> = got.into_iter().collect();
    let want: BTreeSet<String> = REFERENCE_N2.iter().map(|s| s.to_string()).collect();
    ensure!(got == want, "mismatch: {got:?}");
    ensure!(table_row(&pease(2)) == REFERENCE_N2[0], "pease(2) is not row (a)");
    ensure!(table_row(&pease_transpose(2)) == REFERENCE_N2[1], "pease_transpose(2) is not row (b)");
    Ok("6 members, rows (a)-(f) bit-exact".into())
}

fn exhaustive_n2() -> Outcome {
    let all = all_sequences_n2();
    ensure!(all.len() == 216, "{} sequences", all.len());
    let mut positives = 0;
    for p in &all {
        let fast = check_theorem1(p).passed;
        ensure!(fast == oracle_equal(p), "disagreement on {p}");
        positives += usize::from(fast);
    }
    ensure!(positives == 6, "{positives} positives");
    Ok("216 sequences, 6 positives, 0 disagreements".into())
}

fn sampled_n34() -> Outcome {
    let mut report = Vec::new();
    for n in [3, 4] {
        let mut rng = ChaCha8Rng::seed_from_u64(1000 + n as u64);
        let mut positives = 0;
        for _ in 0..10_000 {
            let p = random_sequence(&mut rng, n);
            let fast = check_theorem1(&p).passed;
            ensure!(fast == oracle_equal(&p), "disagreement on {p}");
            positives += usize::from(fast);
        }
        for _ in 0..1_000 {
            let p = build(&sample_factors_with(&mut rng, n));
            ensure!(check_theorem1(&p).passed && oracle_equal(&p), "built member rejected: {p}");
        }
        report.push(format!("n={n}: 10000 uniform ({positives} positive) + 1000 built"));
    }
    Ok(report.join("; "))
}

fn corollary_n3() -> Outcome {
    let mut stream = enumerate_members(3, true).unwrap();
    let mut failed = 0u64;
    for p in stream.by_ref() {
        if !(check_theorem1(&p).passed && computes_wht(&p).unwrap()) {
            failed += 1;
        }
    }
    let raw = stream.raw_count();
    let distinct = stream.distinct_count();
    let bijection = count_algorithms(3).to_u64().unwrap();
    let closed = paper_closed_form(3).to_u64().unwrap();
    ensure!(raw == 36288 && raw == bijection, "raw {raw}");
    ensure!(failed == 0, "{failed} distinct members failed verification");
    let detail = format!("raw={raw} distinct={distinct} verified (bijection {bijection}, closed form {closed})");
    if distinct == bijection {
        Ok(detail)
    } else {
        // collisions would contradict injectivity: report what was measured
        ensure!(distinct < raw, "distinct {distinct} > raw {raw}");
        Ok(format!("{detail}; COLLISIONS FOUND, injectivity does not hold"))
    }
}

fn bit_index_counts() -> Outcome {
    let mut parts = Vec::new();
    for (n, want) in [(2usize, 2u64), (3, 48), (4, 31104)] {
        let mut stream = enumerate_bit_index_members(n, true).unwrap();
        let mut non_members = 0;
        for p in stream.by_ref() {
            ensure!(p.is_bit_index(), "not bit-index: {p}");
            if n <= 3 && !check_theorem1(&p).passed {
                non_members += 1;
            }
        }
        ensure!(non_members == 0, "n={n}: {non_members} failed the check");
        let distinct = stream.distinct_count();
        let formula = count_bit_index_algorithms(n).to_u64().unwrap();
        ensure!(distinct == want && formula == want, "n={n}: distinct {distinct}, formula {formula}");
        parts.push(format!("n={n}: {distinct}"));
    }
    Ok(parts.join(", "))
}

fn kronecker_form(n: usize) -> SignedMatrix {
    (1..=n).fold(SignedMatrix::identity(1 << n), |acc, k| {
        acc.mul(&butterfly_stage_kron::<i32>(n, k).unwrap())
    })
}

fn catalog_validity() -> Outcome {
    for n in 1..=8 {
        for (name, p) in [("pease", pease(n)), ("pease-t", pease_transpose(n)), ("ict", iterative_ct(n))] {
            ensure!(check_theorem1(&p).passed, "{name}({n}) fails the fast check");
            if n <= 6 {
                ensure!(oracle_equal(&p), "{name}({n}) differs from the dense evaluation");
            }
        }
        if n <= 6 {
            ensure!(
                evaluate::<i32>(&iterative_ct(n)).unwrap() == kronecker_form(n),
                "ict({n}) differs from the Kronecker-form product"
            );
        }
    }
    Ok("fast check n<=8, oracle n<=6, ict Kronecker form n<=6".into())
}

fn lemma_suite() -> Outcome {
    let mut suites: Vec<(String, Vec<AlgorithmSeq>)> = vec![("n=2 exhaustive".into(), all_sequences_n2())];
    for n in [3, 4] {
        let mut rng = ChaCha8Rng::seed_from_u64(2000 + n as u64);
        let mut v: Vec<AlgorithmSeq> = (0..2_000).map(|_| random_sequence(&mut rng, n)).collect();
        v.extend((0..300).map(|_| build(&sample_factors_with(&mut rng, n))));
        for which in [Violation::Eq4, Violation::Eq5] {
            for seed in 0..20 {
                if let Some(c) = find_minimality_counterexample(n, which, 5_000, 3000 + seed) {
                    v.push(c.sequence);
                }
            }
        }
        suites.push((format!("n={n} sampled"), v));
    }
    let mut report = Vec::new();
    for (label, suite) in &suites {
        let mut holds = 0;
        for p in suite {
            let lemma = check_lemma2(p);
            ensure!(lemma == check_theorem1(p).cond_inverse, "{label}: lemma2 vs inverse condition on {p}");
            let w = evaluate::<i32>(p).unwrap();
            let ones = (0..w.dim()).all(|k| w.get(0, k) == 1 && w.get(k, 0) == 1);
            ensure!(lemma == ones, "{label}: lemma2 vs all-ones first row/column on {p}");
            if lemma {
                holds += 1;
                for i in 0..1u64 << p.n() {
                    let predicted = predict_dplus(p, i).unwrap();
                    let (_, plus, _) = dependency_sets(p, 0, i).unwrap();
                    ensure!(predicted.members == plus.members, "{label}: D+({i}) mismatch on {p}");
                }
            }
        }
        report.push(format!("{label}: {} seqs, {holds} satisfy", suite.len()));
    }
    Ok(report.join("; "))
}

fn fixture_path(n: usize, which: Violation) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(format!("{which}_n{n}.alg"))
}

fn minimality() -> Outcome {
    let write = std::env::var_os("WHT_WRITE_FIXTURES").is_some();
    let mut report = Vec::new();
    for n in [2, 3] {
        for which in [Violation::Eq4, Violation::Eq5] {
            let seed = 42;
            let found = find_minimality_counterexample(n, which, 100_000, seed)
                .ok_or_else(|| format!("n={n} {which}: nothing within 1e5 draws"))?;
            ensure!(verify_counterexample(&found.sequence, which), "n={n} {which}: search result fails");
            ensure!(!oracle_equal(&found.sequence), "n={n} {which}: computes the WHT");
            let path = fixture_path(n, which);
            if write {
                let doc = AlgorithmDocument::new(found.sequence.clone())
                    .with("violation", which)
                    .with("seed", seed)
                    .with("draws", found.draws);
                std::fs::write(&path, doc.format()).map_err(|e| format!("{}: {e}", path.display()))?;
            }
            let text = std::fs::read_to_string(&path).map_err(|e| format!("{}: {e}", path.display()))?;
            let stored = AlgorithmDocument::parse(&text).map_err(|e| e.to_string())?;
            ensure!(stored.get("violation") == Some(&which.to_string()[..]), "{}: wrong label", path.display());
            ensure!(verify_counterexample(&stored.sequence, which), "{}: stored fixture fails", path.display());
            ensure!(!oracle_equal(&stored.sequence), "{}: stored fixture computes the WHT", path.display());
            ensure!(stored.sequence == found.sequence, "{}: seeded search no longer reproduces it", path.display());
            report.push(format!("n={n} {which} after {} draws", found.draws));
        }
    }
    Ok(report.join(", "))
}

fn row_support_bound() -> Outcome {
    let n = 4;
    let mut rng = ChaCha8Rng::seed_from_u64(4242);
    let mut singular = 0;
    for trial in 0..1_000 {
        let mut ms: Vec<BitMatrix> = (0..=n).map(|_| sample_gl_with(&mut rng, n).0).collect();
        if trial % 2 == 1 {
            // P_1 fixes 1_b, so the first two columns of X coincide
            ms[1] = loop {
                let m = sample_gl_with(&mut rng, n).0;
                if m.column(n - 1) == BitVector::one(n) {
                    break m;
                }
            };
        }
        let p = AlgorithmSeq::new(ms).unwrap();
        let rank = spreading_matrix(&p).rank();
        singular += usize::from(rank < n);
        let w = evaluate::<i32>(&p).unwrap();
        for r in 0..w.dim() {
            ensure!(w.nonzeros_in_row(r) <= 1 << rank, "row {r} of {p} exceeds 2^{rank}");
        }
    }
    ensure!(singular >= 500, "only {singular} singular-X cases");
    Ok(format!("1000 sequences, {singular} with singular X"))
}

fn walsh(n: usize) -> SignedMatrix {
    let table = permutation_table(&reversal_matrix(n)).unwrap();
    hadamard::<i32>(n).unwrap().permute_rows(&table)
}

fn sequency() -> Outcome {
    for n in 1..=6 {
        for p in [pease(n), pease_transpose(n), iterative_ct(n)] {
            let s = to_sequency(&p).unwrap();
            ensure!(evaluate::<i32>(&s).unwrap() == walsh(n), "to_sequency({p}) is not the Walsh matrix");
            ensure!(to_sequency(&s).unwrap() == p, "to_sequency is not an involution on {p}");
        }
    }
    ensure!(walsh(2) != hadamard::<i32>(2).unwrap(), "bit reversal is trivial at n=2");
    Ok("catalog n<=6 entry-exact".into())
}

fn performance() -> Outcome {
    let p = pease(64);
    let q = build(&sample_factors_with(&mut ChaCha8Rng::seed_from_u64(64), 64));
    let mut worst = Duration::ZERO;
    for s in [&p, &q] {
        let t = Instant::now();
        let r = check_theorem1(s);
        worst = worst.max(t.elapsed());
        ensure!(r.passed, "n=64 member rejected");
    }
    ensure!(worst < Duration::from_millis(100), "check at n=64 took {worst:?}");
    let n = oracle_max_n() + 1;
    let big = AlgorithmSeq::new(vec![BitMatrix::identity(n); n + 1]).unwrap();
    ensure!(matches!(evaluate::<i32>(&big), Err(Error::Guard { .. })), "oracle accepted n={n}");
    Ok(format!("check_theorem1 n=64 in {:.3} ms; oracle refused at n={n}", worst.as_secs_f64() * 1e3))
}

fn main() -> ExitCode {
    let secs = Duration::from_secs;
    let criteria: [Criterion; 11] = [
        ("n=2 enumeration reproduces the reference table", reference_n2, Some(secs(1))),
        ("exhaustive n=2 fast check equals dense oracle", exhaustive_n2, Some(secs(1))),
        ("sampled n=3,4 fast check equals dense oracle", sampled_n34, Some(secs(60))),
        ("n=3 factor tuples: soundness, completeness, distinct count", corollary_n3, Some(secs(300))),
        ("bit-index member counts", bit_index_counts, Some(secs(120))),
        ("catalog validity", catalog_validity, None),
        ("central-product lemma and positive dependency sets", lemma_suite, None),
        ("minimality counterexamples", minimality, None),
        ("row support bounded by 2^rank(X)", row_support_bound, None),
        ("sequency ordered variant", sequency, None),
        ("n=64 check cost and oracle guard", performance, None),
    ];
    let mut failures = 0;
    for (k, (name, run, limit)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let elapsed = t.elapsed();
        let outcome = match (outcome, limit) {
            (Ok(_), Some(l)) if elapsed > *l => Err(format!("over the {}s runtime ceiling", l.as_secs())),
            (o, _) => o,
        };
        let secs = elapsed.as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS {name}: {detail} [{secs:.2}s]", k + 1),
            Err(detail) => {
                failures += 1;
                println!("criterion {:>2} FAIL {name}: {detail} [{secs:.2}s]", k + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
