//! Command-line plumbing around `qwt-core`: corpus ingestion, index files,
//! reproducible workloads and the benchmark loop.

pub mod bench;
pub mod corpus;
pub mod error;
pub mod index_file;
pub mod ingest;
pub mod selftest;
pub mod workload;

pub use error::{CliError, Result};
