//! The `.alg` text grammar.
//!
//! ```text
//! # comment lines start with '#'; "# key: value" lines are metadata
//! n=2; 10/01; 01/10; 01/10
//! ```
//!
//! `n=<int>;` is followed by `n + 1` bit-matrices separated by `;`. Each matrix
//! lists its rows top to bottom joined by `/`, most significant bit on the
//! left. Whitespace is insignificant. Factor tuples use the same layout with
//! labelled entries: `n=2; B=10/01; Q=1; Q=1` (an empty `Q` is written `-`).

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::factory::FactorTuple;
use crate::gf2::{parse_matrix_at, BitMatrix, N_MAX};
use crate::sequence::AlgorithmSeq;

/// A character of significant input with its 1-based source position.
#[derive(Clone, Copy)]
struct Located {
    ch: char,
    line: usize,
    column: usize,
}

fn significant(text: &str) -> Vec<Located> {
    let mut out = Vec::new();
    for (l, line) in text.lines().enumerate() {
        for (c, ch) in line.chars().enumerate() {
            if ch == '#' {
                break;
            }
            if !ch.is_whitespace() {
                out.push(Located {
                    ch,
                    line: l + 1,
                    column: c + 1,
                });
            }
        }
    }
    out
}

struct Segment {
    text: String,
    line: usize,
    column: usize,
}

fn segments(chars: &[Located]) -> Vec<Segment> {
    let mut out = Vec::new();
    let mut current = String::new();
    let mut start: Option<(usize, usize)> = None;
    for loc in chars {
        if loc.ch == ';' {
            let (line, column) = start.unwrap_or((loc.line, loc.column));
            out.push(Segment {
                text: std::mem::take(&mut current),
                line,
                column,
            });
            start = None;
        } else {
            start.get_or_insert((loc.line, loc.column));
            current.push(loc.ch);
        }
    }
    if let Some((line, column)) = start {
        out.push(Segment {
            text: current,
            line,
            column,
        });
    }
    out
}

fn parse_err(seg: &Segment, message: impl Into<String>) -> Error {
    Error::Parse {
        line: seg.line,
        column: seg.column,
        message: message.into(),
    }
}

fn parse_header(seg: &Segment) -> Result<usize> {
    let value = seg
        .text
        .strip_prefix("n=")
        .ok_or_else(|| parse_err(seg, format!("expected `n=<int>`, found {:?}", seg.text)))?;
    let n: usize = value
        .parse()
        .map_err(|_| parse_err(seg, format!("invalid dimension {value:?}")))?;
    if !(1..=N_MAX).contains(&n) {
        return Err(parse_err(seg, format!("n = {n} outside [1, {N_MAX}]")));
    }
    Ok(n)
}

fn matrix_of(seg: &Segment, body: &str, offset: usize, n: usize, label: &str) -> Result<BitMatrix> {
    let m = parse_matrix_at(body, seg.line, seg.column + offset)?;
    if m.rows() != n || m.cols() != n {
        return Err(parse_err(
            seg,
            format!("{label} is {}x{}, expected {n}x{n}", m.rows(), m.cols()),
        ));
    }
    Ok(m)
}

fn sequence_from_segments(segs: &[Segment]) -> Result<AlgorithmSeq> {
    let header = segs.first().ok_or_else(|| Error::Parse {
        line: 1,
        column: 1,
        message: "empty input".into(),
    })?;
    let n = parse_header(header)?;
    let body = &segs[1..];
    if body.len() != n + 1 {
        let at = body.last().unwrap_or(header);
        return Err(parse_err(
            at,
            format!("expected {} matrices for n = {n}, found {}", n + 1, body.len()),
        ));
    }
    let mut ms = Vec::with_capacity(n + 1);
    for (k, seg) in body.iter().enumerate() {
        ms.push(matrix_of(seg, &seg.text, 0, n, &format!("P_{k}"))?);
    }
    AlgorithmSeq::new(ms).map_err(|e| match e {
        Error::Singular { rank, context, .. } => {
            let k: usize = context
                .as_deref()
                .and_then(|c| c.strip_prefix("P_"))
                .and_then(|k| k.parse().ok())
                .unwrap_or(0);
            parse_err(
                &body[k],
                format!("P_{k} is not invertible (rank {rank} < {n})"),
            )
        }
        other => other,
    })
}

/// Parses one sequence.
pub fn parse_sequence(text: &str) -> Result<AlgorithmSeq> {
    let chars = significant(text);
    let segs = segments(&chars);
    sequence_from_segments(&segs)
}

/// Parses any number of sequences, each starting on a new line with `n=`.
pub fn parse_sequences(text: &str) -> Result<Vec<AlgorithmSeq>> {
    let chars = significant(text);
    let starts: Vec<usize> = (0..chars.len())
        .filter(|&k| {
            chars[k].ch == 'n'
                && chars.get(k + 1).is_some_and(|c| c.ch == '=')
                && (k == 0 || chars[k - 1].line != chars[k].line)
        })
        .collect();
    if let Some(first) = chars.first() {
        if starts.first() != Some(&0) {
            return Err(Error::Parse {
                line: first.line,
                column: first.column,
                message: "expected `n=<int>` at the start of a sequence".into(),
            });
        }
    }
    starts
        .iter()
        .enumerate()
        .map(|(k, &start)| {
            let end = starts.get(k + 1).copied().unwrap_or(chars.len());
            sequence_from_segments(&segments(&chars[start..end]))
        })
        .collect()
}

/// The canonical one-line form, `n=2; 10/01; 01/10; 01/10`.
pub fn format_sequence(p: &AlgorithmSeq) -> String {
    p.to_string()
}

/// A sequence with optional `# key: value` metadata.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgorithmDocument {
    pub sequence: AlgorithmSeq,
    pub metadata: Vec<(String, String)>,
}

impl AlgorithmDocument {
    pub fn new(sequence: AlgorithmSeq) -> Self {
        AlgorithmDocument {
            sequence,
            metadata: Vec::new(),
        }
    }

    pub fn with(mut self, key: &str, value: impl ToString) -> Self {
        self.metadata.push((key.to_string(), value.to_string()));
        self
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.metadata
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    pub fn parse(text: &str) -> Result<Self> {
        let metadata = text
            .lines()
            .filter_map(|line| {
                let rest = line.trim_start().strip_prefix('#')?.trim();
                let (key, value) = rest.split_once(':')?;
                let key = key.trim();
                let valid = !key.is_empty()
                    && key.chars().all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-');
                valid.then(|| (key.to_string(), value.trim().to_string()))
            })
            .collect();
        Ok(AlgorithmDocument {
            sequence: parse_sequence(text)?,
            metadata,
        })
    }

    /// Metadata lines, then the sequence, each newline-terminated.
    pub fn format(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.metadata {
            let _ = writeln!(out, "# {k}: {v}");
        }
        let _ = writeln!(out, "{}", self.sequence);
        out
    }
}

/// Parses `n=<int>; B=<matrix>; Q=<matrix>; ...`.
pub fn parse_factors(text: &str) -> Result<FactorTuple> {
    let chars = significant(text);
    let segs = segments(&chars);
    let header = segs.first().ok_or_else(|| Error::Parse {
        line: 1,
        column: 1,
        message: "empty input".into(),
    })?;
    let n = parse_header(header)?;
    let body = &segs[1..];
    if body.len() != n + 1 {
        let at = body.last().unwrap_or(header);
        return Err(parse_err(at, format!("expected B and {n} Q matrices, found {} entries", body.len())));
    }
    let labelled = |seg: &Segment, label: &str, dim: usize| -> Result<BitMatrix> {
        let prefix = format!("{label}=");
        let rest = seg
            .text
            .strip_prefix(&prefix)
            .ok_or_else(|| parse_err(seg, format!("expected `{prefix}<matrix>`, found {:?}", seg.text)))?;
        matrix_of(seg, rest, prefix.len(), dim, label)
    };
    let b = labelled(&body[0], "B", n)?;
    let qs = body[1..]
        .iter()
        .map(|seg| labelled(seg, "Q", n - 1))
        .collect::<Result<Vec<_>>>()?;
    FactorTuple::new(b, qs)
}

pub fn format_factors(f: &FactorTuple) -> String {
    f.to_string()
}
