//! Butterfly dataflow graphs and their Graphviz export.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::limits::export_max_n;
use crate::oracle::permutation_table;
use crate::sequence::AlgorithmSeq;

/// A node of the dataflow: an input, a butterfly `s{stage}b{index}`, or an output.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Node {
    Input(usize),
    Butterfly { stage: usize, index: usize },
    Output(usize),
}

impl Node {
    pub fn name(&self) -> String {
        match *self {
            Node::Input(i) => format!("x{i}"),
            Node::Butterfly { stage, index } => format!("s{stage}b{index}"),
            Node::Output(j) => format!("y{j}"),
        }
    }
}

/// One wire: leaves `from` on port `from_port`, enters `to` on port `to_port`.
///
/// `wire` is the index position of the signal before the linear permutation
/// that the wire realizes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Edge {
    pub from: Node,
    pub from_port: u8,
    pub to: Node,
    pub to_port: u8,
    pub wire: usize,
}

/// The graph of `W(P)`: `2^n` inputs, `n` columns of `2^{n-1}` butterflies, `2^n` outputs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dataflow {
    pub n: usize,
    pub edges: Vec<Edge>,
}

impl Dataflow {
    /// Wires realizing `pi(P_k)` right to left: inputs feed stage `n` through
    /// `pi(P_n)`, stage `k + 1` feeds stage `k` through `pi(P_k)`, and stage 1
    /// feeds the outputs through `pi(P_0)`.
    pub fn new(p: &AlgorithmSeq) -> Result<Self> {
        let n = p.n();
        let limit = export_max_n();
        if n > limit {
            return Err(Error::Guard {
                what: "dataflow export",
                n,
                limit,
            });
        }
        let size = 1usize << n;
        let mut edges = Vec::with_capacity(size * (n + 1));
        for k in (0..=n).rev() {
            let table = permutation_table(p.get(k))?;
            for (wire, &target) in table.iter().enumerate() {
                let (from, from_port) = if k == n {
                    (Node::Input(wire), 0)
                } else {
                    (
                        Node::Butterfly {
                            stage: k + 1,
                            index: wire / 2,
                        },
                        (wire % 2) as u8,
                    )
                };
                let (to, to_port) = if k == 0 {
                    (Node::Output(target), 0)
                } else {
                    (
                        Node::Butterfly {
                            stage: k,
                            index: target / 2,
                        },
                        (target % 2) as u8,
                    )
                };
                edges.push(Edge {
                    from,
                    from_port,
                    to,
                    to_port,
                    wire,
                });
            }
        }
        Ok(Dataflow { n, edges })
    }

    /// Edges entering the butterflies of one stage, ordered by butterfly then port.
    pub fn stage_inputs(&self, stage: usize) -> Vec<Edge> {
        let mut v: Vec<Edge> = self
            .edges
            .iter()
            .filter(|e| matches!(e.to, Node::Butterfly { stage: s, .. } if s == stage))
            .copied()
            .collect();
        v.sort_by_key(|e| (e.to, e.to_port));
        v
    }

    pub fn to_dot(&self) -> String {
        let n = self.n;
        let size = 1usize << n;
        let mut out = String::new();
        let _ = writeln!(out, "digraph wht{n} {{");
        let _ = writeln!(out, "  rankdir=LR;");
        let _ = writeln!(out, "  node [fontname=\"Helvetica\"];");
        let _ = writeln!(out, "  subgraph inputs {{ rank=same;");
        for i in 0..size {
            let _ = writeln!(out, "    x{i} [shape=plaintext, label=\"x{i}\"];");
        }
        let _ = writeln!(out, "  }}");
        for stage in (1..=n).rev() {
            let _ = writeln!(out, "  subgraph stage{stage} {{ rank=same;");
            for b in 0..size / 2 {
                let _ = writeln!(
                    out,
                    "    s{stage}b{b} [shape=record, label=\"{{<i0>|<i1>}}|F2|{{<o0>|<o1>}}\"];"
                );
            }
            let _ = writeln!(out, "  }}");
        }
        let _ = writeln!(out, "  subgraph outputs {{ rank=same;");
        for j in 0..size {
            let _ = writeln!(out, "    y{j} [shape=plaintext, label=\"y{j}\"];");
        }
        let _ = writeln!(out, "  }}");
        for e in &self.edges {
            let from = match e.from {
                Node::Butterfly { .. } => format!("{}:o{}", e.from.name(), e.from_port),
                _ => e.from.name(),
            };
            let to = match e.to {
                Node::Butterfly { .. } => format!("{}:i{}", e.to.name(), e.to_port),
                _ => e.to.name(),
            };
            let _ = writeln!(out, "  {from} -> {to};");
        }
        out.push_str("}\n");
        out
    }
}

/// DOT text of the dataflow of `W(P)`; `n` is bounded by the export guard.
pub fn export_dot(p: &AlgorithmSeq) -> Result<String> {
    Ok(Dataflow::new(p)?.to_dot())
}
