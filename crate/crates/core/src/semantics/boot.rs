//! Program loading: item definitions first, then the call of `main`.

use crate::state::{Category, Configuration, Diagnostic, Kont, Value};
use crate::syntax::{Program, Span};

use super::machine::{definition_frames, step, StepResult};
use super::rules::RuleTag;
use super::run::DEFAULT_MAX_STEPS;

/// A configuration with every top-level item defined.
#[derive(Clone, Debug)]
pub struct Booted {
    pub config: Configuration,
    pub tags: Vec<RuleTag>,
}

fn main_span(program: &Program) -> Span {
    program
        .function("main")
        .map(|f| f.span)
        .unwrap_or(Span::new(1, 1))
}

fn entry_frames(program: &Program) -> [Kont; 2] {
    let span = main_span(program);
    [
        Kont::Discard { span },
        Kont::Invoke {
            name: "main".into(),
            args: Vec::new(),
            entry: true,
            span,
        },
    ]
}

/// The configuration `run` starts from: definitions on top of the call of
/// `main`.
pub fn entry_configuration(program: &Program) -> Configuration {
    let mut cfg = Configuration::fresh();
    cfg.k.extend(entry_frames(program));
    cfg.k.extend(definition_frames(&program.items));
    cfg
}

/// Defines every top-level function, struct and constant, binding them in
/// `genv`. Functions and structs come first so constants may call
/// functions.
pub fn boot(program: &Program) -> Result<Booted, Diagnostic> {
    let mut config = Configuration::fresh();
    config.k = definition_frames(&program.items);
    let mut tags = Vec::new();
    loop {
        if tags.len() as u64 >= DEFAULT_MAX_STEPS {
            return Err(Diagnostic::new(
                Category::Stuck,
                "evaluation of top-level items did not terminate",
            ));
        }
        match step(&mut config) {
            StepResult::Continue(a) => tags.push(a.rule),
            StepResult::Done => return Ok(Booted { config, tags }),
            StepResult::Failed(d) => return Err(d),
        }
    }
}

/// [`boot`], then seeds `k` with the call of a zero-parameter `main`.
pub fn load_program(program: &Program) -> Result<Booted, Diagnostic> {
    let mut booted = boot(program)?;
    let cfg = &mut booted.config;
    let main = cfg.genv.get("main").map(|l| cfg.value_at(*l));
    match main {
        Some(Value::Closure(c)) if c.params.is_empty() => {}
        Some(Value::Closure(_)) => {
            return Err(Diagnostic::new(
                Category::MissingMain,
                "`main` function takes no arguments",
            )
            .at(main_span(program)))
        }
        _ => {
            return Err(Diagnostic::new(
                Category::MissingMain,
                "`main` function not found",
            ))
        }
    }
    cfg.k.extend(entry_frames(program));
    Ok(booted)
}
