use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use krust_core::difftest::{check_expectation, parse_annotations};
use krust_core::runner::{DebugSession, SessionState};
use krust_core::semantics::{self, DEFAULT_MAX_STEPS};
use krust_core::speccheck::{self, CheckResult};
use krust_core::state::render_cell;
use krust_core::syntax::{parse_source, pretty, Program};

fn parse_program(source: &str) -> PyResult<Program> {
    parse_source(source).map_err(|e| PyValueError::new_err(e.to_string()))
}

/// Parses `source` and returns it pretty-printed.
#[pyfunction]
fn parse(source: &str) -> PyResult<String> {
    Ok(pretty::program(&parse_program(source)?))
}

#[pyclass(frozen, get_all)]
struct Outcome {
    status: String,
    exit_code: i32,
    output: String,
    steps: u64,
    category: Option<String>,
    line: Option<u32>,
    message: Option<String>,
}

#[pymethods]
impl Outcome {
    fn __repr__(&self) -> String {
        match (&self.category, self.line) {
            (Some(c), Some(l)) => format!("Outcome({}, {c} at line {l})", self.status),
            (Some(c), None) => format!("Outcome({}, {c})", self.status),
            _ => format!("Outcome({}, steps={})", self.status, self.steps),
        }
    }
}

impl From<semantics::Outcome> for Outcome {
    fn from(o: semantics::Outcome) -> Self {
        Outcome {
            status: o.status.name().to_string(),
            exit_code: o.status.exit_code(),
            output: o.output,
            steps: o.steps,
            category: o.diagnostic.as_ref().map(|d| d.category.name().to_string()),
            line: o.diagnostic.as_ref().and_then(|d| d.line()),
            message: o.diagnostic.map(|d| d.message),
        }
    }
}

/// Runs a program to completion; parse errors become a `parse_error`
/// outcome rather than an exception.
#[pyfunction]
#[pyo3(signature = (source, max_steps = DEFAULT_MAX_STEPS))]
fn run(py: Python<'_>, source: &str, max_steps: u64) -> Outcome {
    let source = source.to_string();
    py.detach(move || semantics::run_source(&source, max_steps)).into()
}

/// Checks a program's `// expect:` annotations; returns the problem or None.
#[pyfunction]
#[pyo3(signature = (source, max_steps = DEFAULT_MAX_STEPS))]
fn lint(source: &str, max_steps: u64) -> Option<String> {
    parse_annotations(source)
        .and_then(|exp| check_expectation(&exp, &semantics::run_source(source, max_steps)))
        .err()
}

#[pyclass(unsendable)]
struct Debugger {
    session: DebugSession,
}

#[pymethods]
impl Debugger {
    #[new]
    #[pyo3(signature = (source, max_steps = DEFAULT_MAX_STEPS))]
    fn new(source: &str, max_steps: u64) -> PyResult<Self> {
        let program = parse_program(source)?;
        let session = DebugSession::new(&program, max_steps)
            .map_err(|d| PyRuntimeError::new_err(d.to_string()))?;
        Ok(Debugger { session })
    }

    /// Runs one debugger command and returns its output.
    fn execute(&mut self, command: &str) -> String {
        self.session.execute(command).0
    }

    /// Applies up to `n` rules and returns their names.
    #[pyo3(signature = (n = 1))]
    fn step(&mut self, n: u64) -> Vec<String> {
        (0..n)
            .map_while(|_| self.session.step_once())
            .map(|t| t.name().to_string())
            .collect()
    }

    fn cell(&self, name: &str) -> PyResult<String> {
        render_cell(&self.session.config, name).map_err(|e| PyValueError::new_err(e.to_string()))
    }

    #[getter]
    fn steps(&self) -> u64 {
        self.session.steps()
    }

    #[getter]
    fn line(&self) -> Option<u32> {
        self.session.current_line()
    }

    #[getter]
    fn state(&self) -> String {
        match &self.session.state {
            SessionState::Running => "running".into(),
            SessionState::Done => "done".into(),
            SessionState::Failed(d) => format!("failed: {d}"),
            SessionState::Timeout => "timeout".into(),
        }
    }

    #[getter]
    fn output(&self) -> String {
        self.session.config.out.clone()
    }
}

#[pyclass(frozen, get_all)]
struct Check {
    /// `verified`, `falsified` or `inapplicable`.
    kind: String,
    cases: Option<u64>,
    assignment: Option<Vec<(String, i128)>>,
    calls: Option<u64>,
    reason: Option<String>,
    machine_line: String,
}

#[pymethods]
impl Check {
    fn __repr__(&self) -> String {
        format!("Check({})", self.machine_line)
    }
}

/// Checks a call-count specification against a program.
#[pyfunction]
fn check(py: Python<'_>, source: &str, spec: &str) -> PyResult<Check> {
    let program = parse_program(source)?;
    let spec = speccheck::parse_spec(spec).map_err(|e| PyValueError::new_err(e.to_string()))?;
    let r = py.detach(|| speccheck::check(&program, &spec));
    let machine_line = r.machine_line();
    Ok(match r {
        CheckResult::Verified { cases } => Check {
            kind: "verified".into(),
            cases: Some(cases),
            assignment: None,
            calls: None,
            reason: None,
            machine_line,
        },
        CheckResult::Falsified { assignment, calls } => Check {
            kind: "falsified".into(),
            cases: None,
            assignment: Some(assignment),
            calls: Some(calls),
            reason: None,
            machine_line,
        },
        CheckResult::Inapplicable { reason } => Check {
            kind: "inapplicable".into(),
            cases: None,
            assignment: None,
            calls: None,
            reason: Some(reason),
            machine_line,
        },
    })
}

#[pymodule]
fn krust(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(parse, m)?)?;
    m.add_function(wrap_pyfunction!(run, m)?)?;
    m.add_function(wrap_pyfunction!(lint, m)?)?;
    m.add_function(wrap_pyfunction!(check, m)?)?;
    m.add_class::<Outcome>()?;
    m.add_class::<Debugger>()?;
    m.add_class::<Check>()?;
    Ok(())
}
