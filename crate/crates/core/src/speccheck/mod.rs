//! Call-count specifications and their bounded checker.

mod check;
mod spec;

pub use check::{calls_at, check, check_with, summary, CheckResult};
pub use spec::{parse_spec, Bindings, CallCountSpec, Cmp, Condition, SpecError, Term};
