//! Command-line driver, JSON formats and parallel batch verification on top
//! of `kronecker-core`.

pub mod batch;
pub mod cli;
pub mod format;
