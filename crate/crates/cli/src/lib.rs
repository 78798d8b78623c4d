//! Instance files, random instances, the fixture corpus, the equivalence
//! suite and the `ordrep` command line.

pub mod commands;
pub mod fixtures;
pub mod format;
pub mod generate;
pub mod suite;
