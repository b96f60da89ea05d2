//! Maximum-density subhypergraphs of weighted hypergraphs.
//!
//! The solver works on *support matrices*: nonnegative matrices on the
//! incidence pattern whose weighted row sums equal the edge weights. The
//! largest column sum of any support matrix bounds the density of every
//! subhypergraph from above, and repeatedly waterfilling each row drives that
//! bound down to the maximum density. For integer weights the bound closes
//! far enough to prove the extracted subhypergraph optimal.
//!
//! On top of the solver the crate computes the spectral decomposition (the
//! chain of maximal densest factors), transports it to the dual hypergraph,
//! and derives the Dulmage-Mendelsohn decomposition. [`oracle`] holds exact
//! brute-force references for all of these.

// `!(x > 0.0)` deliberately rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod decomposition;
pub mod equalize;
pub mod hypergraph;
pub mod io;
pub mod oracle;
pub mod rational;
pub mod support;

pub use decomposition::{
    certify, dm_decompose, extract_densest, extract_level_set, optimal_support_matrix,
    spectral_decompose, spectral_decompose_detailed, transport_dual, Certificate,
    DMDecomposition, DecompositionError, Factor, SpectralDecomposition, StageReport,
};
pub use equalize::{
    equalize_row, parallel_sweep, solve, sweep, RowProblem, RowSolution, SolveError, SolveOutcome,
    SolveTrace, SolverConfig, StopReason, SweepMode, SweepRecord, SweepStats,
};
pub use hypergraph::{
    EdgeId, HypergraphError, Quotient, SubgraphSelection, VertexId, WeightedHypergraph,
};
pub use rational::Ratio;
pub use support::{dual_support_matrix, EigenEstimate, SupportError, SupportMatrix, ValidationReport};
