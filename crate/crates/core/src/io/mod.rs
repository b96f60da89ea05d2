//! Text format, JSON reports and random instances.

pub mod format;
pub mod generate;
pub mod report;

pub use format::{parse_hypergraph, serialize_hypergraph, FormatError, Parsed, StripReport};
pub use generate::{generate_random, GenerateError, GeneratorParams};
