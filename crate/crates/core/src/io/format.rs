//! hMETIS-style hypergraph files.
//!
//! ```text
//! % comment
//! m n fmt
//! [u_1] v v v      (m edge lines, 1-based vertex ids)
//! [w_1]            (n vertex weight lines when fmt is 10 or 11)
//! ```
//!
//! `fmt` is 0 (unit weights), 1 (edge weights), 10 (vertex weights) or 11
//! (both).

use std::fmt::Write as _;

use serde::Serialize;
use thiserror::Error;

use crate::hypergraph::{EdgeId, HypergraphError, WeightedHypergraph};

#[derive(Debug, Error, PartialEq)]
pub enum FormatError {
    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error("line {line}: {source}")]
    Hypergraph {
        line: usize,
        #[source]
        source: HypergraphError,
    },
    #[error("{0}")]
    Invalid(#[from] HypergraphError),
}

impl FormatError {
    pub fn line(&self) -> Option<usize> {
        match self {
            FormatError::Parse { line, .. } | FormatError::Hypergraph { line, .. } => Some(*line),
            FormatError::Invalid(_) => None,
        }
    }
}

/// Items dropped by degenerate-input stripping, as 0-based ids of the file.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct StripReport {
    pub removed_edges: Vec<usize>,
    pub removed_vertices: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Parsed {
    pub hypergraph: WeightedHypergraph,
    pub stripped: StripReport,
}

fn parse_err(line: usize, reason: impl Into<String>) -> FormatError {
    FormatError::Parse {
        line,
        reason: reason.into(),
    }
}

fn parse_weight(tok: &str, line: usize, what: &str) -> Result<f64, FormatError> {
    let w: f64 = tok
        .parse()
        .map_err(|_| parse_err(line, format!("invalid {what} weight {tok:?}")))?;
    if !(w.is_finite() && w > 0.0) {
        return Err(parse_err(line, format!("{what} weight {tok} must be finite and positive")));
    }
    Ok(w)
}

/// Parses a hypergraph file.
///
/// With `strip_degenerate`, empty edge lines and vertices left without edges
/// are dropped (remaining ids are renumbered in order) instead of being
/// errors.
pub fn parse_hypergraph(text: &str, strip_degenerate: bool) -> Result<Parsed, FormatError> {
    // Comment lines vanish; blank lines are kept because in the edge section
    // they denote an empty support.
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(k, l)| (k + 1, l.trim()))
        .filter(|(_, l)| !l.starts_with('%'));

    let (hline, header) = lines
        .by_ref()
        .find(|(_, l)| !l.is_empty())
        .ok_or_else(|| parse_err(1, "missing header line"))?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    if fields.len() < 2 || fields.len() > 3 {
        return Err(parse_err(hline, "header must be `m n [fmt]`"));
    }
    let count = |tok: &str, what: &str| -> Result<usize, FormatError> {
        tok.parse()
            .map_err(|_| parse_err(hline, format!("invalid {what} {tok:?}")))
    };
    let m = count(fields[0], "edge count")?;
    let n = count(fields[1], "vertex count")?;
    let fmt = fields.get(2).map_or(Ok(0), |f| count(f, "fmt"))?;
    let (edge_weighted, vertex_weighted) = match fmt {
        0 => (false, false),
        1 => (true, false),
        10 => (false, true),
        11 => (true, true),
        _ => return Err(parse_err(hline, format!("fmt must be 0, 1, 10 or 11, got {fmt}"))),
    };

    let mut edge_weights = Vec::with_capacity(m);
    let mut offsets = Vec::with_capacity(m + 1);
    let mut vertices: Vec<u32> = Vec::new();
    let mut edge_lines: Vec<usize> = Vec::with_capacity(m);
    offsets.push(0);
    let mut last_line = hline;
    for i in 0..m {
        let (line, text) = lines
            .next()
            .ok_or_else(|| parse_err(last_line + 1, format!("expected {m} edge lines, found {i}")))?;
        last_line = line;
        edge_lines.push(line);
        let mut toks = text.split_whitespace();
        let u = if edge_weighted {
            match toks.next() {
                Some(t) => parse_weight(t, line, "edge")?,
                None => 1.0,
            }
        } else {
            1.0
        };
        edge_weights.push(u);
        for t in toks {
            let id: usize = t
                .parse()
                .map_err(|_| parse_err(line, format!("invalid vertex id {t:?}")))?;
            if id == 0 || id > n {
                return Err(parse_err(line, format!("vertex id {id} outside 1..={n}")));
            }
            vertices.push((id - 1) as u32);
        }
        if vertices.len() == offsets[i] && !strip_degenerate {
            return Err(FormatError::Hypergraph {
                line,
                source: HypergraphError::EmptySupport { edge: i },
            });
        }
        offsets.push(vertices.len());
    }

    let mut vertex_weights = Vec::with_capacity(n);
    let mut vertex_lines = Vec::with_capacity(n);
    if vertex_weighted {
        for j in 0..n {
            let (line, text) = lines
                .by_ref()
                .find(|(_, l)| !l.is_empty())
                .ok_or_else(|| {
                    parse_err(last_line + 1, format!("expected {n} vertex weights, found {j}"))
                })?;
            last_line = line;
            let mut toks = text.split_whitespace();
            let w = parse_weight(toks.next().expect("non-empty line"), line, "vertex")?;
            if toks.next().is_some() {
                return Err(parse_err(line, "expected one vertex weight per line"));
            }
            vertex_weights.push(w);
            vertex_lines.push(line);
        }
    } else {
        vertex_weights.resize(n, 1.0);
    }
    if let Some((line, _)) = lines.find(|(_, l)| !l.is_empty()) {
        return Err(parse_err(line, "unexpected content after the last section"));
    }

    let mut stripped = StripReport::default();
    if strip_degenerate {
        strip(
            &mut vertex_weights,
            &mut edge_weights,
            &mut offsets,
            &mut vertices,
            &mut stripped,
        );
        let removed = &stripped.removed_edges;
        edge_lines = (0..m)
            .filter(|i| removed.binary_search(i).is_err())
            .map(|i| edge_lines[i])
            .collect();
        vertex_lines.clear();
    }

    let hypergraph = WeightedHypergraph::from_csr(vertex_weights, edge_weights, offsets, vertices)
        .map_err(|e| {
            let line = match &e {
                HypergraphError::EmptySupport { edge }
                | HypergraphError::DuplicateVertexInSupport { edge, .. }
                | HypergraphError::IndexOutOfRange { edge, .. } => edge_lines.get(*edge).copied(),
                HypergraphError::IsolatedVertex { vertex } => vertex_lines.get(*vertex).copied(),
                _ => None,
            };
            match line {
                Some(line) => FormatError::Hypergraph { line, source: e },
                None => FormatError::Invalid(e),
            }
        })?;
    Ok(Parsed {
        hypergraph,
        stripped,
    })
}

fn strip(
    vertex_weights: &mut Vec<f64>,
    edge_weights: &mut Vec<f64>,
    offsets: &mut Vec<usize>,
    vertices: &mut [u32],
    report: &mut StripReport,
) {
    let m = edge_weights.len();
    let mut kept_weights = Vec::with_capacity(m);
    let mut kept_offsets = vec![0];
    for i in 0..m {
        if offsets[i] == offsets[i + 1] {
            report.removed_edges.push(i);
        } else {
            kept_weights.push(edge_weights[i]);
            kept_offsets.push(offsets[i + 1]);
        }
    }
    // Empty edges contribute no entries, so the surviving offsets are the
    // original end offsets unchanged.
    *edge_weights = kept_weights;
    *offsets = kept_offsets;

    let n = vertex_weights.len();
    let mut covered = vec![false; n];
    for &v in vertices.iter() {
        covered[v as usize] = true;
    }
    let mut new_id = vec![u32::MAX; n];
    let mut kept = Vec::with_capacity(n);
    for j in 0..n {
        if covered[j] {
            new_id[j] = kept.len() as u32;
            kept.push(vertex_weights[j]);
        } else {
            report.removed_vertices.push(j);
        }
    }
    *vertex_weights = kept;
    for v in vertices.iter_mut() {
        *v = new_id[*v as usize];
    }
}

/// Renders `h` so that [`parse_hypergraph`] reproduces it exactly. The
/// narrowest `fmt` that carries the weights is used.
pub fn serialize_hypergraph(h: &WeightedHypergraph) -> String {
    let edge_weighted = h.edge_weights().iter().any(|&u| u != 1.0);
    let vertex_weighted = h.vertex_weights().iter().any(|&w| w != 1.0);
    let fmt = match (edge_weighted, vertex_weighted) {
        (false, false) => 0,
        (true, false) => 1,
        (false, true) => 10,
        (true, true) => 11,
    };
    let mut out = String::with_capacity(h.total_degree() * 4 + 16);
    writeln!(out, "{} {} {}", h.m(), h.n(), fmt).unwrap();
    for i in 0..h.m() {
        let e = EdgeId(i as u32);
        let mut first = true;
        if edge_weighted {
            // `Display` for f64 prints the shortest string that parses back
            // to the same value.
            write!(out, "{}", h.edge_weight(e)).unwrap();
            first = false;
        }
        for &v in h.support(e) {
            if !first {
                out.push(' ');
            }
            write!(out, "{}", v + 1).unwrap();
            first = false;
        }
        out.push('\n');
    }
    if vertex_weighted {
        for &w in h.vertex_weights() {
            writeln!(out, "{w}").unwrap();
        }
    }
    out
}
