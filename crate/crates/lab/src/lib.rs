//! Definition files, builtin instances, a theorem registry and the
//! `hyperring-lab` command line built on `hyperring-core`.

pub mod cli;
pub mod format;
pub mod registry;
pub mod report;
pub mod theorems;
