//! Learning bounded-degree graphs from maximal-independent-set queries.
//!
//! A query is a vertex subset `Q`; the oracle answers with some maximal
//! independent set of the induced subgraph `G[Q]`. This crate builds query
//! schemes, simulates oracles, decodes transcripts and measures the counting
//! arguments that bound how many queries are needed.

pub mod caps;
pub mod cli;
pub mod count;
pub mod coverfree;
pub mod error;
pub mod experiment;
pub mod graph;
pub mod lowerbound;
pub mod oracle;
pub mod reconstruction;
pub mod report;
pub mod rng;
pub mod scheme;
pub mod vertex_set;

pub use caps::Caps;
pub use coverfree::{is_cover_free, CoverFreeVerdict, SetFamily};
pub use error::{Error, Result};
pub use graph::{AdversarialFamilyDesc, Graph};
pub use oracle::{run_scheme, OraclePolicy, Transcript};
pub use reconstruction::{consistency_check, decode, Decoded};
pub use report::ExperimentReport;
pub use scheme::{cff_scheme, is_query_scheme, randomized_scheme, QueryScheme};
pub use vertex_set::VertexSet;
