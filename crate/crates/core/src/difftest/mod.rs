//! Differential testing of the interpreter against a reference compiler.

mod corpus;
mod observe;
mod report;

pub use corpus::{
    check_expectation, corpus_files, known_divergences, lint_corpus, parse_annotations,
    ExpectKind, Expectation, LintEntry, KNOWN_DIVERGENCES,
};
pub use observe::{
    compare, observe_interpreter, observe_reference, observe_source, Dimension, HarnessError,
    ObservedBehavior, Phase, ToolchainConfig, Verdict, DEFAULT_TEMPLATE, PANIC_STATUS,
};
pub use report::{run_corpus, run_corpus_with, EntryResult, Report, ReportEntry, Summary};
