//! Problem files, orchestration, the bundled fixture corpus and report output.

pub mod fixtures;
pub mod index;
pub mod problem;
pub mod report;

pub use fixtures::{fixture, Fixture, FIXTURES};
pub use problem::{eval_form, parse_override, parse_problem, parse_problem_with, LepageMode, ProblemDocument, ProblemError, ProblemErrorKind};
pub use report::{analyze, emit, emit_structured, emit_text, exit_code, Analysis, Format, ReportDocument, ReportExtras, StepReport};

/// JSON schema of the structured report.
pub const REPORT_SCHEMA: &str = include_str!("../../../../schema/report.schema.json");
