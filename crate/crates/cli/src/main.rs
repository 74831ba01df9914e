//! `wht`: check, count, enumerate, sample and export fast WHT algorithms.

mod input;

use std::collections::HashSet;
use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::thread;
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand, ValueEnum};
use wht_core::characterizer::lemma2_violation;
use wht_core::factory::{FactorSpace, MemberStream};
use wht_core::group::{algorithm_counts, partition};
use wht_core::limits::oracle_max_n;
use wht_core::oracle::computes_wht;
use wht_core::text::{format_factors, AlgorithmDocument};
use wht_core::{
    build, catalog::catalog, check_theorem1, factorize, sample_member, spreading_matrix, AlgorithmSeq,
    CatalogName, Error,
};

use input::Source;

#[derive(Parser)]
#[command(name = "wht", version, about = "Butterfly-based linear fast WHT algorithms over GF(2)")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct InputArgs {
    /// Input file (`-` or omitted for stdin)
    file: Option<PathBuf>,
    /// Inline text instead of a file
    #[arg(short = 'e', long = "expr", conflicts_with = "file")]
    expr: Option<String>,
}

impl InputArgs {
    fn source(&self) -> Source {
        Source {
            file: self.file.clone(),
            expr: self.expr.clone(),
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether each sequence computes WHT_n
    Check {
        #[command(flatten)]
        mode: CheckMode,
        #[command(flatten)]
        input: InputArgs,
    },
    /// Print the number of algorithms for one n
    Count {
        #[arg(short)]
        n: usize,
    },
    /// List every algorithm (n <= 3) or every bit-index algorithm (n <= 4)
    Enumerate {
        #[arg(short)]
        n: usize,
        #[arg(long)]
        bit_index: bool,
        #[arg(long)]
        dedupe: bool,
        /// Compare every member against the dense evaluation
        #[arg(long)]
        verify_oracle: bool,
        #[arg(long, value_enum, default_value_t = Format::Alg)]
        format: Format,
        /// Worker threads (default: available parallelism)
        #[arg(short, long)]
        jobs: Option<usize>,
    },
    /// Draw uniform random algorithms
    Sample {
        #[arg(short)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        count: u64,
    },
    /// Recover the factor tuple (B, Q_1, ..., Q_n) of an algorithm
    Factorize {
        #[command(flatten)]
        input: InputArgs,
    },
    /// Build the algorithm of a factor tuple
    Build {
        #[command(flatten)]
        input: InputArgs,
    },
    /// Print a named algorithm
    Catalog {
        #[arg(value_parser = parse_catalog_name)]
        name: CatalogName,
        #[arg(short)]
        n: usize,
        /// Sequency (Walsh) ordered outputs
        #[arg(long)]
        sequency: bool,
    },
    /// Graphviz dataflow of one sequence
    ExportDot {
        #[command(flatten)]
        input: InputArgs,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Time the membership check against the dense evaluation
    Bench {
        #[arg(long, default_value_t = 4)]
        from: usize,
        #[arg(long, default_value_t = 64)]
        to: usize,
        #[arg(long, default_value_t = 4)]
        step: usize,
        #[arg(long, default_value_t = 20)]
        reps: usize,
        /// Largest n for which the dense evaluation is timed
        #[arg(long, default_value_t = 8)]
        oracle_upto: usize,
    },
}

#[derive(Args)]
#[group(multiple = false)]
struct CheckMode {
    /// Polynomial-time check (default)
    #[arg(long)]
    fast: bool,
    /// Dense evaluation compared with the Hadamard matrix
    #[arg(long)]
    oracle: bool,
    /// Central-product conditions only
    #[arg(long)]
    lemma2: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Alg,
    Table,
}

fn parse_catalog_name(s: &str) -> Result<CatalogName, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// A command outcome other than success.
#[derive(Debug)]
pub enum Failure {
    /// A sequence was checked and rejected; already reported on stdout.
    Check,
    Usage(String),
}

impl Failure {
    pub fn usage(msg: impl Into<String>) -> Self {
        Failure::Usage(msg.into())
    }

    pub fn from_core(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }

    pub fn context(self, label: &str) -> Self {
        match self {
            Failure::Usage(m) => Failure::Usage(format!("{label}: {m}")),
            other => other,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::NotMember(m) => {
                eprintln!("wht: {m}");
                Failure::Check
            }
            other => Failure::from_core(other),
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check) => ExitCode::from(1),
        Err(Failure::Usage(m)) => {
            eprintln!("wht: {m}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::Check { mode, input } => check(&mode, &input.source()),
        Command::Count { n } => count(n),
        Command::Enumerate {
            n,
            bit_index,
            dedupe,
            verify_oracle,
            format,
            jobs,
        } => enumerate(n, bit_index, dedupe, verify_oracle, format, jobs),
        Command::Sample { n, seed, count } => sample(n, seed, count),
        Command::Factorize { input } => {
            let p = input.source().sequence()?;
            let f = factorize(&p)?;
            println!("{}", format_factors(&f));
            Ok(())
        }
        Command::Build { input } => {
            let f = input.source().factors()?;
            println!("{}", build(&f));
            Ok(())
        }
        Command::Catalog { name, n, sequency } => {
            let p = catalog(name, n, sequency)?;
            let doc = AlgorithmDocument::new(p)
                .with("name", name)
                .with("order", if sequency { "sequency" } else { "natural" });
            print!("{}", doc.format());
            Ok(())
        }
        Command::ExportDot { input, output } => {
            let p = input.source().sequence()?;
            let dot = wht_core::dot::export_dot(&p)?;
            match output {
                Some(path) => fs::write(&path, dot)
                    .map_err(|e| Failure::usage(format!("{}: {e}", path.display()))),
                None => {
                    print!("{dot}");
                    Ok(())
                }
            }
        }
        Command::Bench {
            from,
            to,
            step,
            reps,
            oracle_upto,
        } => bench(from, to, step, reps, oracle_upto),
    }
}

fn check_one(mode: &CheckMode, p: &AlgorithmSeq) -> Result<(bool, String), Failure> {
    if mode.oracle {
        let ok = computes_wht(p)?;
        return Ok((ok, format!("{} oracle", if ok { "PASS" } else { "FAIL" })));
    }
    if mode.lemma2 {
        if p.n() < 2 {
            return Ok((true, "PASS lemma2".into()));
        }
        return Ok(match lemma2_violation(p) {
            None => (true, "PASS lemma2".into()),
            Some(v) => {
                let which = if v.inverse { "P_{k:l}^-1" } else { "P_{k:l}" };
                (false, format!("FAIL lemma2 ({which} bottom-right is 1 at k={}, l={})", v.k, v.l))
            }
        });
    }
    let report = check_theorem1(p);
    Ok((report.passed, report.to_string()))
}

fn check(mode: &CheckMode, source: &Source) -> Result<(), Failure> {
    let all = source.sequences()?;
    let mut failed = false;
    for (k, p) in all.iter().enumerate() {
        let (ok, line) = check_one(mode, p)?;
        failed |= !ok;
        if all.len() == 1 {
            println!("{line}");
        } else {
            println!("[{k}] {line}");
        }
    }
    if failed {
        Err(Failure::Check)
    } else {
        Ok(())
    }
}

fn count(n: usize) -> Result<(), Failure> {
    if !(1..=wht_core::N_MAX).contains(&n) {
        return Err(Failure::usage(format!("n = {n} outside [1, {}]", wht_core::N_MAX)));
    }
    let c = algorithm_counts(n);
    println!("n = {n}");
    println!("GL_n(F2)                 {}", c.gl);
    println!("algorithms (bijection)   {}", c.bijection);
    println!("closed form              {}", c.paper_closed_form);
    println!("bit-index algorithms     {}", c.bit_index);
    Ok(())
}

/// One worker's share: members in index order and how many passed the oracle.
struct Chunk {
    members: Vec<AlgorithmSeq>,
    verified: u64,
}

fn enumerate(
    n: usize,
    bit_index: bool,
    dedupe: bool,
    verify: bool,
    format: Format,
    jobs: Option<usize>,
) -> Result<(), Failure> {
    let space = if bit_index {
        FactorSpace::bit_index(n)?
    } else {
        FactorSpace::general(n)?
    };
    let jobs = jobs
        .unwrap_or_else(|| thread::available_parallelism().map_or(1, |j| j.get()))
        .max(1);
    let ranges = partition(space.len(), jobs);
    let chunks: Vec<Chunk> = thread::scope(|s| {
        let handles: Vec<_> = ranges
            .into_iter()
            .map(|r| {
                let space = &space;
                s.spawn(move || {
                    let members: Vec<AlgorithmSeq> =
                        MemberStream::new(space.clone(), Some(r), false).collect();
                    let verified = if verify {
                        members
                            .iter()
                            .filter(|p| check_theorem1(p).passed && computes_wht(p).unwrap_or(false))
                            .count() as u64
                    } else {
                        0
                    };
                    Chunk { members, verified }
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("worker panicked")).collect()
    });

    let raw: u64 = chunks.iter().map(|c| c.members.len() as u64).sum();
    let verified: u64 = chunks.iter().map(|c| c.verified).sum();
    let mut seen = HashSet::new();
    let mut out = String::new();
    if format == Format::Table {
        let mut header: Vec<String> = (0..=n).map(|k| format!("P_{k}")).collect();
        header.push(format!("P_0:{n}"));
        header.push("X".into());
        let _ = writeln!(out, "# {}", header.join(" "));
    }
    let mut distinct = 0u64;
    for p in chunks.iter().flat_map(|c| &c.members) {
        let line = p.to_string();
        if dedupe && !seen.insert(line.clone()) {
            continue;
        }
        distinct += 1;
        match format {
            Format::Alg => out.push_str(&line),
            Format::Table => {
                let mut cols: Vec<String> = p.matrices().iter().map(|m| m.to_string()).collect();
                cols.push(p.product(0, n).expect("in range").to_string());
                cols.push(spreading_matrix(p).to_string());
                out.push_str(&cols.join(" "));
            }
        }
        out.push('\n');
    }
    let status = if verify {
        format!("{verified}/{raw}")
    } else {
        "skipped".into()
    };
    let distinct = if dedupe { distinct.to_string() } else { "n/a".into() };
    let _ = writeln!(out, "# raw={raw} distinct={distinct} verified={status}");
    print!("{out}");
    if verify && verified != raw {
        return Err(Failure::Check);
    }
    Ok(())
}

fn sample(n: usize, seed: u64, count: u64) -> Result<(), Failure> {
    if !(1..=wht_core::N_MAX).contains(&n) {
        return Err(Failure::usage(format!("n = {n} outside [1, {}]", wht_core::N_MAX)));
    }
    for k in 0..count {
        let s = seed.wrapping_add(k);
        let p = sample_member(n, s);
        let status = if check_theorem1(&p).passed { "PASS" } else { "FAIL" };
        let doc = AlgorithmDocument::new(p).with("seed", s).with("check", status);
        print!("{}", doc.format());
    }
    Ok(())
}

fn median(mut v: Vec<Duration>) -> Duration {
    v.sort();
    v[v.len() / 2]
}

fn time<F: FnMut()>(reps: usize, mut f: F) -> Duration {
    median(
        (0..reps.max(1))
            .map(|_| {
                let t = Instant::now();
                f();
                t.elapsed()
            })
            .collect(),
    )
}

fn bench(from: usize, to: usize, step: usize, reps: usize, oracle_upto: usize) -> Result<(), Failure> {
    if from == 0 || to > wht_core::N_MAX || from > to {
        return Err(Failure::usage(format!(
            "need 1 <= from <= to <= {}",
            wht_core::N_MAX
        )));
    }
    let mut ns: Vec<usize> = (from..=to).step_by(step.max(1)).collect();
    if ns.last() != Some(&to) {
        ns.push(to);
    }
    let guard = oracle_max_n();
    println!("{:>3} {:>14} {:>14} {:>16}", "n", "check_pease_us", "check_rand_us", "oracle");
    let mut last = Duration::ZERO;
    for &n in &ns {
        let pease = wht_core::pease(n);
        let random = sample_member(n, n as u64);
        let t_pease = time(reps, || {
            std::hint::black_box(check_theorem1(std::hint::black_box(&pease)));
        });
        let t_rand = time(reps, || {
            std::hint::black_box(check_theorem1(std::hint::black_box(&random)));
        });
        last = t_pease.max(t_rand);
        let oracle = if n <= oracle_upto {
            let t = time(reps.min(3), || {
                std::hint::black_box(computes_wht(&pease).ok());
            });
            format!("{:.1} us", t.as_secs_f64() * 1e6)
        } else {
            match computes_wht(&pease) {
                Err(Error::Guard { limit, .. }) => format!("refused (n > {limit})"),
                Err(e) => format!("error: {e}"),
                Ok(_) => "skipped".into(),
            }
        };
        println!(
            "{n:>3} {:>14.1} {:>14.1} {oracle:>16}",
            t_pease.as_secs_f64() * 1e6,
            t_rand.as_secs_f64() * 1e6
        );
    }
    let verdict = if last < Duration::from_millis(100) { "under" } else { "OVER" };
    println!(
        "# n={} check_theorem1 {:.3} ms ({verdict} 100 ms); dense oracle guard n <= {guard}",
        to,
        last.as_secs_f64() * 1e3
    );
    Ok(())
}
