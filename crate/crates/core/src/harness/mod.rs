//! Configuration, corpus execution, and report generation.

pub mod config;
pub mod report;
pub mod runner;

pub use config::{parse_config, CorpusConfig, Tolerances};
pub use report::{
    format_f64, render_report, render_structured, render_tabular, to_json_17, OutputFormat,
    ReportRow, ResidualRow, RunReport, Summary,
};
pub use runner::{config_digest, run_corpus, run_corpus_mode};
