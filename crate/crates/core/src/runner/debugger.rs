//! Single-step debugger over the machine configuration.

use std::collections::BTreeSet;
use std::fmt::Write;

use crate::semantics::{load_program, step, RuleTag, StepResult};
use crate::state::{render_all, render_cell, Configuration, Diagnostic, Kont};
use crate::syntax::Program;

pub const HELP: &str = "\
commands:
  step [n]          apply n rules (default 1), printing each rule name
  print <cell>      print one configuration cell
  print all         print every cell
  break <line>      stop `run` when a statement on <line> is next
  run               step until a breakpoint, the end, or an error
  where             show the source line of the next computation
  quit              leave the debugger";

#[derive(Clone, Debug, PartialEq)]
pub enum SessionState {
    Running,
    Done,
    Failed(Diagnostic),
    Timeout,
}

#[derive(Clone, Debug)]
pub struct DebugSession {
    pub config: Configuration,
    pub history: Vec<RuleTag>,
    pub breakpoints: BTreeSet<u32>,
    pub state: SessionState,
    pub max_steps: u64,
}

/// What the caller should do after a command.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Control {
    Continue,
    Quit,
}

impl DebugSession {
    /// Loads `program` and stops just before the call of `main`.
    pub fn new(program: &Program, max_steps: u64) -> Result<Self, Diagnostic> {
        let booted = load_program(program)?;
        Ok(DebugSession {
            config: booted.config,
            history: Vec::new(),
            breakpoints: BTreeSet::new(),
            state: SessionState::Running,
            max_steps,
        })
    }

    pub fn steps(&self) -> u64 {
        self.history.len() as u64
    }

    /// Source line of the frame at the head of `k`.
    pub fn current_line(&self) -> Option<u32> {
        self.config.k.iter().rev().find_map(Kont::span).map(|s| s.line)
    }

    fn at_breakpoint(&self) -> Option<u32> {
        match self.config.k.last() {
            Some(Kont::Stmt(s)) if self.breakpoints.contains(&s.span.line) => Some(s.span.line),
            _ => None,
        }
    }

    /// One rule. Returns the tag applied, if any.
    pub fn step_once(&mut self) -> Option<RuleTag> {
        if self.state != SessionState::Running {
            return None;
        }
        if self.steps() >= self.max_steps {
            self.state = SessionState::Timeout;
            return None;
        }
        match step(&mut self.config) {
            StepResult::Continue(a) => {
                self.history.push(a.rule);
                Some(a.rule)
            }
            StepResult::Done => {
                self.state = SessionState::Done;
                None
            }
            StepResult::Failed(d) => {
                self.state = SessionState::Failed(d);
                None
            }
        }
    }

    fn state_report(&self, out: &mut String) {
        match &self.state {
            SessionState::Running => {}
            SessionState::Done => {
                let _ = writeln!(out, "program finished after {} steps", self.steps());
            }
            SessionState::Failed(d) => {
                let _ = writeln!(out, "error: {d}");
            }
            SessionState::Timeout => {
                let _ = writeln!(out, "step budget of {} exhausted", self.max_steps);
            }
        }
    }

    /// Runs one command line, returning its output.
    pub fn execute(&mut self, line: &str) -> (String, Control) {
        let mut out = String::new();
        let words: Vec<&str> = line.split_whitespace().collect();
        match words.as_slice() {
            [] => {}
            ["step"] | ["step", _] => {
                let n = match words.get(1).map(|w| w.parse::<u64>()) {
                    None => 1,
                    Some(Ok(n)) => n,
                    Some(Err(_)) => {
                        let _ = writeln!(out, "step: expected a number\n{HELP}");
                        return (out, Control::Continue);
                    }
                };
                for _ in 0..n {
                    match self.step_once() {
                        Some(tag) => {
                            let _ = writeln!(out, "{tag}");
                        }
                        None => break,
                    }
                }
                self.state_report(&mut out);
            }
            ["print", "all"] => {
                out.push_str(&render_all(&self.config));
                out.push('\n');
            }
            ["print", cell] => match render_cell(&self.config, cell) {
                Ok(s) => {
                    out.push_str(&s);
                    out.push('\n');
                }
                Err(e) => {
                    let _ = writeln!(out, "{e}");
                }
            },
            ["break", n] => match n.parse::<u32>() {
                Ok(n) => {
                    self.breakpoints.insert(n);
                    let _ = writeln!(out, "breakpoint at line {n}");
                }
                Err(_) => {
                    let _ = writeln!(out, "break: expected a line number\n{HELP}");
                }
            },
            ["run"] => {
                let mut first = true;
                while self.state == SessionState::Running {
                    if !first {
                        if let Some(line) = self.at_breakpoint() {
                            let _ = writeln!(out, "stopped at line {line}");
                            break;
                        }
                    }
                    first = false;
                    self.step_once();
                }
                self.state_report(&mut out);
            }
            ["where"] => match (&self.state, self.current_line()) {
                (SessionState::Running, Some(l)) => {
                    let head = self.config.k.last().map(|k| k.to_string()).unwrap_or_default();
                    let _ = writeln!(out, "line {l}: {head}");
                }
                (SessionState::Running, None) => {
                    let _ = writeln!(out, "no pending computation");
                }
                _ => self.state_report(&mut out),
            },
            ["quit"] | ["exit"] => return (out, Control::Quit),
            ["help"] => {
                let _ = writeln!(out, "{HELP}");
            }
            _ => {
                let _ = writeln!(out, "unknown command `{}`\n{HELP}", line.trim());
            }
        }
        (out, Control::Continue)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_source;

    const WHILE: &str = "fn main() {\n    let mut x: i32 = 10;\n    while x > 0 {\n        x = x - 1;\n    }\n}\n";

    fn session() -> DebugSession {
        DebugSession::new(&parse_source(WHILE).unwrap(), 1_000_000).unwrap()
    }

    #[test]
    fn breakpoint_after_one_iteration() {
        let mut s = session();
        for cmd in ["break 3", "run", "run"] {
            s.execute(cmd);
        }
        assert_eq!(s.execute("print store").0, "<store> 1 |-> 9 </store>\n");
        assert_eq!(s.execute("where").0.split(':').next(), Some("line 3"));
    }

    #[test]
    fn step_counts_match_history() {
        let mut s = session();
        let (out, _) = s.execute("step 5");
        assert_eq!(out.lines().count(), 5);
        assert_eq!(s.steps(), 5);
        let before = s.config.clone();
        s.execute("step 0");
        assert_eq!(s.config, before);
    }

    #[test]
    fn run_to_completion_and_unknown_commands() {
        let mut s = session();
        let (out, _) = s.execute("run");
        assert!(out.starts_with("program finished"));
        assert_eq!(s.state, SessionState::Done);
        assert!(s.execute("frobnicate").0.contains("commands:"));
        assert_eq!(s.execute("quit").1, Control::Quit);
    }
}
