//! Front end for `dyndeg-core`: input files, seeded generators, reports in
//! text, JSON and CSV.

pub mod cli;
pub mod input;
pub mod random;
pub mod render;
pub mod report;
pub mod run;
