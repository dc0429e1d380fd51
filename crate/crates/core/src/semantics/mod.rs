//! The rewrite engine: rules, operators, program loading and running.

pub mod boot;
pub mod machine;
pub mod ops;
pub mod rules;
pub mod run;

pub use boot::{boot, load_program, Booted};
pub use machine::{step, Applied, StepResult};
pub use ops::{coerce, eval_binop, eval_unary};
pub use rules::RuleTag;
pub use run::{classify, max_steps_from_env, run, run_source, run_with, Outcome, Status, DEFAULT_MAX_STEPS};
