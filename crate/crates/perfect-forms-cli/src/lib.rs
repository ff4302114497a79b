//! Command-line front end for the perfect-forms library: run configuration,
//! JSONL checkpoints and cell databases with exact-string number encoding,
//! paper-style text tables, and machine-readable run documents.

pub mod config;
pub mod formats;
pub mod pipeline;
pub mod tables;
