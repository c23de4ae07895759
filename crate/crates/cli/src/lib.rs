//! Library side of the `upl` command: the analysis pipeline, renderers and
//! subcommand implementations.

pub mod commands;
pub mod pipeline;
pub mod plot;
pub mod render;

pub use commands::{CliError, Output, OutputFormat};
pub use pipeline::{analyze, AnalysisReport, AnalyzeOptions, Status};
