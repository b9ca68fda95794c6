//! File formats, random instance generation, property suites and the
//! command-line front end for `eqbundle-core`.

pub mod cli;
pub mod error;
pub mod format;
pub mod gen;
pub mod suite;

pub use error::CliError;
