//! File formats, text reports and the command line front end for
//! `sampling-core`.

pub mod cli;
pub mod format;
pub mod report;
