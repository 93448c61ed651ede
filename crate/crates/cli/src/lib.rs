//! Library half of the `eshrink` command-line tool: experiment-file
//! ingestion, the analysis pipeline, and table rendering. The binary in
//! `main.rs` is a thin argument-parsing layer over these modules.

pub mod format;
pub mod pipeline;
pub mod render;
