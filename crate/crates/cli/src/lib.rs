//! JSON problem files in, JSON or markdown reports out.
//!
//! Exit codes: 0 when every check passes, 2 when a mathematical check fails (a report is
//! still written), 1 for unreadable or invalid input.

pub mod markdown;
pub mod problem;
pub mod report;
pub mod run;

pub use problem::{InputError, Kind, ProblemFile, SCHEMA_VERSION};
pub use report::Report;
pub use run::{exit_code, run, run_text, Flags};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Markdown,
}

pub fn emit(report: &Report, format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(report).expect("reports serialize");
            s.push('\n');
            s
        }
        Format::Markdown => markdown::render(report),
    }
}

pub fn parse_report(json: &str) -> Result<Report, serde_json::Error> {
    serde_json::from_str(json)
}
