//! File formats, property suites and the command line for the reduction
//! compiler in `zreduce-core`.

pub mod cli;
pub mod formats;
pub mod suites;
