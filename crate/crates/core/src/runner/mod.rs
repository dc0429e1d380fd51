//! Command-line front ends.

pub mod debugger;

use std::io::{self, BufRead, Write};
use std::path::Path;

use crate::difftest::{lint_corpus, run_corpus, HarnessError, ToolchainConfig};
use crate::semantics::{Outcome, Status};
use crate::speccheck::{check, parse_spec, summary, CheckResult};
use crate::state::{Category, Diagnostic};
use crate::syntax::parse_source;

pub use debugger::{Control, DebugSession, SessionState, HELP};

/// Exit code for I/O failures.
pub const EXIT_IO: i32 = 1;
/// `difftest` found unexpected mismatches or `lint` found drift.
pub const EXIT_FINDINGS: i32 = 6;
/// `difftest` could not observe some program.
pub const EXIT_HARNESS: i32 = 7;
pub const EXIT_FALSIFIED: i32 = 8;
pub const EXIT_INAPPLICABLE: i32 = 9;

/// Parses and runs a source text.
pub fn run_text(source: &str, max_steps: u64) -> Outcome {
    crate::semantics::run_source(source, max_steps)
}

fn describe(outcome: &Outcome, diag: bool) -> Option<String> {
    match (&outcome.diagnostic, outcome.status) {
        (Some(d), _) if diag => Some(d.to_string()),
        (Some(d), _) => Some(format!("error: {}", d.message)),
        (None, Status::Timeout) => Some(format!("timeout: step budget exhausted after {} steps", outcome.steps)),
        _ => None,
    }
}

/// `krust run`: program output to `stdout`, diagnostics to `stderr`.
pub fn cmd_run(
    path: &Path,
    diag: bool,
    max_steps: u64,
    stdout: &mut impl Write,
    stderr: &mut impl Write,
) -> i32 {
    let source = match std::fs::read_to_string(path) {
        Ok(s) => s,
        Err(e) => {
            let _ = writeln!(stderr, "error: cannot read {}: {e}", path.display());
            return EXIT_IO;
        }
    };
    let outcome = run_text(&source, max_steps);
    let _ = stdout.write_all(outcome.output.as_bytes());
    let _ = stdout.flush();
    if let Some(msg) = describe(&outcome, diag) {
        let _ = writeln!(stderr, "{msg}");
    }
    outcome.status.exit_code()
}

fn load_session(path: &Path, max_steps: u64) -> Result<DebugSession, (i32, String)> {
    let source = std::fs::read_to_string(path)
        .map_err(|e| (EXIT_IO, format!("error: cannot read {}: {e}", path.display())))?;
    let program = parse_source(&source).map_err(|e| {
        let d = Diagnostic::new(Category::ParseError, e.to_string()).at(e.span());
        (Status::ParseError.exit_code(), d.to_string())
    })?;
    DebugSession::new(&program, max_steps).map_err(|d| (Status::SemanticError.exit_code(), d.to_string()))
}

/// `krust debug`: commands come from `script` when given, else from
/// `input` with a prompt.
pub fn cmd_debug(
    path: &Path,
    script: Option<&Path>,
    max_steps: u64,
    input: &mut impl BufRead,
    stdout: &mut impl Write,
    stderr: &mut impl Write,
) -> i32 {
    let mut session = match load_session(path, max_steps) {
        Ok(s) => s,
        Err((code, msg)) => {
            let _ = writeln!(stderr, "{msg}");
            return code;
        }
    };
    let commands: Box<dyn Iterator<Item = io::Result<String>> + '_> = match script {
        Some(p) => match std::fs::read_to_string(p) {
            Ok(text) => Box::new(text.lines().map(|l| Ok(l.to_string())).collect::<Vec<_>>().into_iter()),
            Err(e) => {
                let _ = writeln!(stderr, "error: cannot read {}: {e}", p.display());
                return EXIT_IO;
            }
        },
        None => Box::new(input.lines()),
    };
    let interactive = script.is_none();
    if interactive {
        let _ = write!(stdout, "(krust) ");
        let _ = stdout.flush();
    }
    for line in commands {
        let Ok(line) = line else { return EXIT_IO };
        let (out, control) = session.execute(&line);
        let _ = stdout.write_all(out.as_bytes());
        if control == Control::Quit {
            break;
        }
        if interactive {
            let _ = write!(stdout, "(krust) ");
        }
        let _ = stdout.flush();
    }
    0
}

/// `krust check`: a summary, then `VERIFIED n`, `FALSIFIED ...` or
/// `INAPPLICABLE`.
pub fn cmd_check(
    program_path: &Path,
    spec_path: &Path,
    stdout: &mut impl Write,
    stderr: &mut impl Write,
) -> i32 {
    let read = |p: &Path| {
        std::fs::read_to_string(p).map_err(|e| format!("error: cannot read {}: {e}", p.display()))
    };
    let (source, spec_text) = match (read(program_path), read(spec_path)) {
        (Ok(a), Ok(b)) => (a, b),
        (Err(e), _) | (_, Err(e)) => {
            let _ = writeln!(stderr, "{e}");
            return EXIT_IO;
        }
    };
    let program = match parse_source(&source) {
        Ok(p) => p,
        Err(e) => {
            let _ = writeln!(stderr, "{}: {e}", program_path.display());
            return Status::ParseError.exit_code();
        }
    };
    let spec = match parse_spec(&spec_text) {
        Ok(s) => s,
        Err(e) => {
            let _ = writeln!(stderr, "{}: {e}", spec_path.display());
            return Status::ParseError.exit_code();
        }
    };
    let result = check(&program, &spec);
    let _ = writeln!(stdout, "{}", summary(&spec, &result));
    let _ = writeln!(stdout, "{}", result.machine_line());
    match result {
        CheckResult::Verified { .. } => 0,
        CheckResult::Falsified { .. } => EXIT_FALSIFIED,
        CheckResult::Inapplicable { .. } => EXIT_INAPPLICABLE,
    }
}

fn harness_exit(e: &HarnessError) -> i32 {
    match e {
        HarnessError::Io { .. } | HarnessError::Usage(_) | HarnessError::Config(..) | HarnessError::BadTemplate(_) => EXIT_IO,
        _ => EXIT_HARNESS,
    }
}

/// `krust difftest`: a per-program TSV report (to `report` or `stdout`)
/// and a summary on `stderr`.
pub fn cmd_difftest(
    corpus: &Path,
    cfg: &ToolchainConfig,
    jobs: usize,
    max_steps: u64,
    report: Option<&Path>,
    stdout: &mut impl Write,
    stderr: &mut impl Write,
) -> i32 {
    if let Err(e) = cfg.validate() {
        let _ = writeln!(stderr, "error: {e}");
        return harness_exit(&e);
    }
    if !cfg.toolchain_available() {
        let e = HarnessError::ToolchainMissing(cfg.compile_template.clone());
        let _ = writeln!(stderr, "error: {e}");
        return EXIT_HARNESS;
    }
    let r = match run_corpus(corpus, cfg, jobs, max_steps) {
        Ok(r) => r,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return harness_exit(&e);
        }
    };
    let tsv = r.to_tsv();
    match report {
        Some(p) => {
            if let Err(e) = std::fs::write(p, &tsv) {
                let _ = writeln!(stderr, "error: cannot write {}: {e}", p.display());
                return EXIT_IO;
            }
        }
        None => {
            let _ = stdout.write_all(tsv.as_bytes());
        }
    }
    let s = r.summary();
    let _ = writeln!(
        stderr,
        "{} programs: {} agree, {} mismatch, {} known divergence, {} harness error",
        r.entries.len(),
        s.agree,
        s.mismatch,
        s.known_mismatch,
        s.harness_error
    );
    for e in &r.entries {
        if let Some(reason) = &e.known {
            if e.verdict_name() == "known_mismatch" {
                let _ = writeln!(stderr, "  known: {} ({reason})", e.path.display());
            }
        }
    }
    for p in r.stale_known() {
        let _ = writeln!(stderr, "  note: {} is listed as divergent but agrees", p.display());
    }
    if s.mismatch > 0 {
        EXIT_FINDINGS
    } else if s.harness_error > 0 {
        EXIT_HARNESS
    } else {
        0
    }
}

/// `krust lint`: checks every program's annotations against the
/// interpreter.
pub fn cmd_lint(corpus: &Path, max_steps: u64, stdout: &mut impl Write, stderr: &mut impl Write) -> i32 {
    let entries = match lint_corpus(corpus, max_steps) {
        Ok(e) => e,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return harness_exit(&e);
        }
    };
    let mut bad = 0;
    for e in &entries {
        match &e.problem {
            None => {
                let _ = writeln!(stdout, "ok    {}", e.path.display());
            }
            Some(p) => {
                bad += 1;
                let _ = writeln!(stdout, "FAIL  {}: {p}", e.path.display());
            }
        }
    }
    let _ = writeln!(stderr, "{} programs, {bad} with drift", entries.len());
    if bad > 0 {
        EXIT_FINDINGS
    } else {
        0
    }
}
