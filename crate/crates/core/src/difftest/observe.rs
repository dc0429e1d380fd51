//! Observing one program under the interpreter and under a reference
//! toolchain.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Stdio};
use std::time::Duration;

use thiserror::Error;
use wait_timeout::ChildExt;

use crate::semantics::{run_source, Status};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Phase {
    CompileReject,
    Ran,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ObservedBehavior {
    pub phase: Phase,
    pub stdout: Vec<u8>,
    /// `None` exactly when the program was rejected or timed out.
    pub exit_status: Option<i32>,
    pub timed_out: bool,
}

impl ObservedBehavior {
    pub fn rejected() -> Self {
        ObservedBehavior {
            phase: Phase::CompileReject,
            stdout: Vec::new(),
            exit_status: None,
            timed_out: false,
        }
    }

    pub fn ran(stdout: impl Into<Vec<u8>>, exit_status: i32) -> Self {
        ObservedBehavior {
            phase: Phase::Ran,
            stdout: stdout.into(),
            exit_status: Some(exit_status),
            timed_out: false,
        }
    }

    pub fn timeout(stdout: impl Into<Vec<u8>>) -> Self {
        ObservedBehavior {
            phase: Phase::Ran,
            stdout: stdout.into(),
            exit_status: None,
            timed_out: true,
        }
    }
}

/// One-line form used in reports: `reject`, `timeout`, or
/// `ran exit=N stdout="..."`.
impl fmt::Display for ObservedBehavior {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let out = String::from_utf8_lossy(&self.stdout).escape_debug().to_string();
        match (self.phase, self.timed_out) {
            (Phase::CompileReject, _) => f.write_str("reject"),
            (Phase::Ran, true) => write!(f, "timeout stdout=\"{out}\""),
            (Phase::Ran, false) => write!(
                f,
                "ran exit={} stdout=\"{out}\"",
                self.exit_status.unwrap_or(-1)
            ),
        }
    }
}

/// Exit status the interpreter reports for a runtime error, matching the
/// status of a panicking Rust binary.
pub const PANIC_STATUS: i32 = 101;

pub fn observe_source(source: &str, max_steps: u64) -> ObservedBehavior {
    let o = run_source(source, max_steps);
    match o.status {
        Status::Ok => ObservedBehavior::ran(o.output, 0),
        Status::RuntimeError => ObservedBehavior::ran(o.output, PANIC_STATUS),
        Status::SemanticError | Status::ParseError => ObservedBehavior::rejected(),
        Status::Timeout => ObservedBehavior::timeout(o.output),
    }
}

pub fn observe_interpreter(path: &Path, max_steps: u64) -> Result<ObservedBehavior, HarnessError> {
    let source = fs::read_to_string(path).map_err(|source| HarnessError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    Ok(observe_source(&source, max_steps))
}

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("compiler template must contain {{src}} and {{bin}} exactly once each: `{0}`")]
    BadTemplate(String),
    #[error("reference toolchain not found (`{0}`)")]
    ToolchainMissing(String),
    #[error("compilation of {} exceeded {secs} s", path.display())]
    CompileTimeout { path: PathBuf, secs: u64 },
    #[error("{0}")]
    Usage(String),
    #[error("config line {0}: {1}")]
    Config(usize, String),
}

impl HarnessError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        HarnessError::Io {
            path: path.into(),
            source,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ToolchainConfig {
    /// Shell command with `{src}` and `{bin}` placeholders.
    pub compile_template: String,
    pub run_timeout_s: u64,
    pub compile_timeout_s: u64,
    /// Parent of the per-program scratch directories; the system temp dir
    /// when unset.
    pub work_dir: Option<PathBuf>,
}

pub const DEFAULT_TEMPLATE: &str = "rustc --edition 2021 -C overflow-checks=on -o {bin} {src}";

impl Default for ToolchainConfig {
    fn default() -> Self {
        ToolchainConfig {
            compile_template: DEFAULT_TEMPLATE.into(),
            run_timeout_s: 10,
            compile_timeout_s: 120,
            work_dir: None,
        }
    }
}

impl ToolchainConfig {
    pub fn new(template: impl Into<String>) -> Result<Self, HarnessError> {
        let cfg = ToolchainConfig {
            compile_template: template.into(),
            ..Default::default()
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        let t = &self.compile_template;
        if t.matches("{src}").count() != 1 || t.matches("{bin}").count() != 1 {
            return Err(HarnessError::BadTemplate(t.clone()));
        }
        Ok(())
    }

    /// Reads `key = value` lines: `compiler_cmd`, `timeout_s`,
    /// `compile_timeout_s`, `work_dir`. `#` starts a comment line.
    pub fn from_kv(text: &str) -> Result<Self, HarnessError> {
        let mut cfg = ToolchainConfig::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((k, v)) = line.split_once('=') else {
                return Err(HarnessError::Config(i + 1, "expected `key = value`".into()));
            };
            let v = v.trim();
            let secs = || {
                v.parse::<u64>()
                    .map_err(|_| HarnessError::Config(i + 1, format!("`{v}` is not a number of seconds")))
            };
            match k.trim() {
                "compiler_cmd" => cfg.compile_template = v.to_string(),
                "timeout_s" => cfg.run_timeout_s = secs()?,
                "compile_timeout_s" => cfg.compile_timeout_s = secs()?,
                "work_dir" => cfg.work_dir = Some(PathBuf::from(v)),
                other => return Err(HarnessError::Config(i + 1, format!("unknown key `{other}`"))),
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }

    /// Whether the first word of the template can be started at all.
    pub fn toolchain_available(&self) -> bool {
        let Some(program) = self.compile_template.split_whitespace().next() else {
            return false;
        };
        Command::new(program)
            .arg("--version")
            .stdout(Stdio::null())
            .stderr(Stdio::null())
            .status()
            .is_ok()
    }
}

fn shell_quote(p: &Path) -> String {
    format!("'{}'", p.display().to_string().replace('\'', r"'\''"))
}

/// Exit code of a finished child; signals map to `128 + signal`.
fn exit_code(status: std::process::ExitStatus) -> i32 {
    #[cfg(unix)]
    {
        use std::os::unix::process::ExitStatusExt;
        if let Some(sig) = status.signal() {
            return 128 + sig;
        }
    }
    status.code().unwrap_or(-1)
}

/// Runs `cmd` with stdout sent to `stdout_path`, killing it after `secs`.
/// Returns `None` on timeout.
fn run_limited(
    mut cmd: Command,
    stdout_path: &Path,
    secs: u64,
) -> Result<Option<i32>, std::io::Error> {
    let out = fs::File::create(stdout_path)?;
    let mut child = cmd
        .stdin(Stdio::null())
        .stdout(out)
        .stderr(Stdio::null())
        .spawn()?;
    match child.wait_timeout(Duration::from_secs(secs))? {
        Some(status) => Ok(Some(exit_code(status))),
        None => {
            let _ = child.kill();
            let _ = child.wait();
            Ok(None)
        }
    }
}

pub fn observe_reference(path: &Path, cfg: &ToolchainConfig) -> Result<ObservedBehavior, HarnessError> {
    cfg.validate()?;
    let io = |p: &Path| {
        let p = p.to_path_buf();
        move |source| HarnessError::Io { path: p, source }
    };
    let scratch = match &cfg.work_dir {
        Some(dir) => tempfile::tempdir_in(dir).map_err(io(dir))?,
        None => tempfile::tempdir().map_err(io(Path::new("<tempdir>")))?,
    };
    let src = scratch.path().join("main.rs");
    let bin = scratch.path().join("main.bin");
    fs::copy(path, &src).map_err(io(path))?;
    let command = cfg
        .compile_template
        .replace("{src}", &shell_quote(&src))
        .replace("{bin}", &shell_quote(&bin));
    let mut compile = Command::new("sh");
    compile.arg("-c").arg(&command).current_dir(scratch.path());
    let log = scratch.path().join("compile.log");
    let status = run_limited(compile, &log, cfg.compile_timeout_s).map_err(io(scratch.path()))?;
    match status {
        None => return Err(HarnessError::CompileTimeout {
            path: path.to_path_buf(),
            secs: cfg.compile_timeout_s,
        }),
        Some(127) => return Err(HarnessError::ToolchainMissing(cfg.compile_template.clone())),
        Some(0) if bin.exists() => {}
        Some(_) => return Ok(ObservedBehavior::rejected()),
    }
    let stdout_path = scratch.path().join("stdout");
    let status = run_limited(Command::new(&bin), &stdout_path, cfg.run_timeout_s)
        .map_err(io(&bin))?;
    let stdout = fs::read(&stdout_path).map_err(io(&stdout_path))?;
    Ok(match status {
        Some(code) => ObservedBehavior::ran(stdout, code),
        None => ObservedBehavior::timeout(stdout),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Dimension {
    Phase,
    Stdout,
    ExitStatus,
}

impl Dimension {
    pub fn name(self) -> &'static str {
        match self {
            Dimension::Phase => "phase",
            Dimension::Stdout => "stdout",
            Dimension::ExitStatus => "exit_status",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Agree,
    Mismatch {
        dimension: Dimension,
        interpreter: ObservedBehavior,
        reference: ObservedBehavior,
    },
}

/// Phase first, then exact stdout, then zero/nonzero exit class. A timeout
/// on one side only is a phase mismatch.
pub fn compare(i: &ObservedBehavior, r: &ObservedBehavior) -> Verdict {
    let dimension = if i.timed_out || r.timed_out {
        (i.timed_out != r.timed_out).then_some(Dimension::Phase)
    } else if i.phase != r.phase {
        Some(Dimension::Phase)
    } else if i.phase == Phase::CompileReject {
        None
    } else if i.stdout != r.stdout {
        Some(Dimension::Stdout)
    } else if (i.exit_status == Some(0)) != (r.exit_status == Some(0)) {
        Some(Dimension::ExitStatus)
    } else {
        None
    };
    match dimension {
        None => Verdict::Agree,
        Some(dimension) => Verdict::Mismatch {
            dimension,
            interpreter: i.clone(),
            reference: r.clone(),
        },
    }
}
