//! Text formats and JSON reports around [`geotype_core`], plus the
//! command-line front end.

pub mod cli;
pub mod format;
pub mod parallel;
pub mod report;

pub use geotype_core as core;
