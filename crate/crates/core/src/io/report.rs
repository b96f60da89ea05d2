//! JSON report sections, the support-matrix dump and trace lines.
//!
//! Every section is optional so one [`Report`] type serves all commands.
//! Ids are 0-based and sorted ascending.

use std::io::{self, Write};

use serde::Serialize;

use crate::decomposition::{Certificate, DMDecomposition, Factor, SpectralDecomposition};
use crate::equalize::{SolveOutcome, StopReason, SweepRecord};
use crate::hypergraph::{EdgeId, SubgraphSelection, VertexId, WeightedHypergraph};
use crate::io::format::StripReport;
use crate::rational::Ratio;
use crate::support::{EigenEstimate, SupportMatrix};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InstanceSummary {
    pub n: usize,
    pub m: usize,
    #[serde(rename = "D")]
    pub total_degree: usize,
    pub integral: bool,
}

impl InstanceSummary {
    pub fn of(h: &WeightedHypergraph) -> Self {
        InstanceSummary {
            n: h.n(),
            m: h.m(),
            total_degree: h.total_degree(),
            integral: h.has_integral_weights(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SubgraphReport {
    pub density: f64,
    pub exact_density: Option<Ratio>,
    pub vertex_ids: Vec<VertexId>,
    pub edge_ids: Vec<EdgeId>,
}

impl SubgraphReport {
    pub fn new(density: f64, exact_density: Option<Ratio>, sel: &SubgraphSelection) -> Self {
        SubgraphReport {
            density,
            exact_density,
            vertex_ids: sel.vertices.clone(),
            edge_ids: sel.edges.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CertificateReport {
    pub upper_bound: f64,
    pub gap: f64,
    pub threshold: Option<f64>,
    pub optimal: bool,
}

impl From<&Certificate> for CertificateReport {
    fn from(c: &Certificate) -> Self {
        CertificateReport {
            upper_bound: c.upper_bound,
            gap: c.gap,
            threshold: c.threshold,
            optimal: c.optimal,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TraceSummary {
    pub sweeps: usize,
    pub wall_ms: f64,
    pub stop_reason: StopReason,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FactorReport {
    pub density: f64,
    pub exact_density: Option<Ratio>,
    pub vertex_ids: Vec<VertexId>,
    pub edge_ids: Vec<EdgeId>,
    pub certified: bool,
}

impl From<&Factor> for FactorReport {
    fn from(f: &Factor) -> Self {
        FactorReport {
            density: f.density,
            exact_density: f.exact_density,
            vertex_ids: f.vertices.clone(),
            edge_ids: f.edges.clone(),
            certified: f.certified,
        }
    }
}

pub fn factor_reports(dec: &SpectralDecomposition) -> Vec<FactorReport> {
    dec.factors.iter().map(FactorReport::from).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EigenReport {
    pub lambda: f64,
    pub residual: f64,
    pub iterations: usize,
    pub converged: bool,
    pub density: f64,
    pub difference: f64,
}

impl EigenReport {
    pub fn new(e: &EigenEstimate, density: f64) -> Self {
        EigenReport {
            lambda: e.lambda,
            residual: e.residual,
            iterations: e.iterations,
            converged: e.converged,
            density,
            difference: e.lambda - density,
        }
    }
}

/// Result of comparing solver output with the exhaustive oracles.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub matches: bool,
    pub mismatches: Vec<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Report {
    pub schema_version: u32,
    pub command: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub instance: Option<InstanceSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stripped: Option<StripReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub result: Option<SubgraphReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<CertificateReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trace: Option<TraceSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub decomposition: Option<Vec<FactorReport>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dm: Option<DMDecomposition>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eigen: Option<EigenReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verify: Option<VerifyReport>,
}

/// Exhaustive results; sections are absent when the instance is outside
/// an oracle's limits or preconditions.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct OracleReport {
    pub densest: Option<SubgraphReport>,
    pub decomposition: Option<Vec<FactorReport>>,
    pub dm: Option<DMDecomposition>,
    pub skipped: Vec<String>,
}

impl Report {
    pub fn new(command: &str, h: &WeightedHypergraph) -> Self {
        Report {
            schema_version: SCHEMA_VERSION,
            command: command.to_string(),
            instance: Some(InstanceSummary::of(h)),
            ..Default::default()
        }
    }

    /// Fills `result`, `certificate` and `trace` from a solver run.
    pub fn with_solve(mut self, out: &SolveOutcome<'_>) -> Self {
        let c = &out.certificate;
        self.result = Some(SubgraphReport::new(c.density, c.exact_density, &c.selection));
        self.certificate = Some(c.into());
        self.trace = Some(TraceSummary {
            sweeps: out.trace.sweeps(),
            wall_ms: out.trace.records.last().map_or(0.0, |r| r.wall_ms),
            stop_reason: out.stop_reason,
        });
        self
    }
}

/// Support matrix as `(edge, vertex, value)` triplets in edge-major order,
/// with the column sums recomputed from the values.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MatrixDump {
    pub n: usize,
    pub m: usize,
    pub entries: Vec<(EdgeId, VertexId, f64)>,
    pub column_sums: Vec<f64>,
    pub s_max: f64,
}

impl MatrixDump {
    pub fn of(a: &SupportMatrix<'_>) -> Self {
        let h = a.hypergraph();
        let mut entries = Vec::with_capacity(h.total_degree());
        for i in 0..h.m() {
            let e = EdgeId(i as u32);
            for (&j, &x) in h.support(e).iter().zip(a.row(e)) {
                entries.push((e, VertexId(j), x));
            }
        }
        let column_sums = a.fresh_column_sums();
        let s_max = column_sums.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        MatrixDump {
            n: h.n(),
            m: h.m(),
            entries,
            column_sums,
            s_max,
        }
    }
}

/// Writes one JSON object per sweep record.
pub fn write_trace<W: Write>(records: &[SweepRecord], mut out: W) -> io::Result<()> {
    for r in records {
        serde_json::to_writer(&mut out, r)?;
        out.write_all(b"\n")?;
    }
    Ok(())
}
