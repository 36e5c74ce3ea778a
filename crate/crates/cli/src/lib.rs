//! Presentation-file parsing, the builtin model library, command dispatch
//! and report rendering for the `loopcalc` binary.

pub mod commands;
pub mod parser;
pub mod report;
