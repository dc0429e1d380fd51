use std::io;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use krust::difftest::ToolchainConfig;
use krust::runner::{cmd_check, cmd_debug, cmd_difftest, cmd_lint, EXIT_IO};
use krust::semantics::max_steps_from_env;

#[derive(Parser)]
#[command(name = "krust", version, about = "Small-step interpreter for a Rust subset")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run a program.
    Run {
        file: PathBuf,
        /// Print full diagnostics with category and position.
        #[arg(long)]
        diag: bool,
        /// Step budget; overrides KRUST_MAX_STEPS.
        #[arg(long)]
        max_steps: Option<u64>,
    },
    /// Step through a program and inspect its configuration.
    Debug {
        file: PathBuf,
        /// Read debugger commands from a file instead of stdin.
        #[arg(long)]
        script: Option<PathBuf>,
    },
    /// Compare the interpreter with a reference compiler over a corpus.
    Difftest {
        #[arg(long)]
        corpus: PathBuf,
        /// Compile command with {src} and {bin} placeholders.
        #[arg(long)]
        compiler_cmd: Option<String>,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// Run timeout for reference binaries.
        #[arg(long)]
        timeout_s: Option<u64>,
        /// Write the TSV report here instead of stdout.
        #[arg(long)]
        report: Option<PathBuf>,
        /// key = value file with compiler_cmd, timeout_s, compile_timeout_s, work_dir.
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Check a call-count specification over bounded domains.
    Check {
        program: PathBuf,
        #[arg(long)]
        spec: PathBuf,
    },
    /// Verify corpus annotations against the interpreter.
    Lint {
        #[arg(long)]
        corpus: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut out = io::stdout().lock();
    let mut err = io::stderr();
    let budget = max_steps_from_env();
    let code = match cli.command {
        Cmd::Run { file, diag, max_steps } => {
            krust::runner::cmd_run(&file, diag, max_steps.unwrap_or(budget), &mut out, &mut err)
        }
        Cmd::Debug { file, script } => {
            let stdin = io::stdin();
            cmd_debug(&file, script.as_deref(), budget, &mut stdin.lock(), &mut out, &mut err)
        }
        Cmd::Difftest {
            corpus,
            compiler_cmd,
            jobs,
            timeout_s,
            report,
            config,
        } => {
            let mut cfg = match config {
                Some(p) => match std::fs::read_to_string(&p).map_err(|e| e.to_string()).and_then(|t| {
                    ToolchainConfig::from_kv(&t).map_err(|e| e.to_string())
                }) {
                    Ok(c) => c,
                    Err(e) => {
                        eprintln!("error: {}: {e}", p.display());
                        return ExitCode::from(EXIT_IO as u8);
                    }
                },
                None => ToolchainConfig::default(),
            };
            if let Some(t) = compiler_cmd {
                cfg.compile_template = t;
            }
            if let Some(t) = timeout_s {
                cfg.run_timeout_s = t;
            }
            cmd_difftest(&corpus, &cfg, jobs, budget, report.as_deref(), &mut out, &mut err)
        }
        Cmd::Check { program, spec } => cmd_check(&program, &spec, &mut out, &mut err),
        Cmd::Lint { corpus } => cmd_lint(&corpus, budget, &mut out, &mut err),
    };
    ExitCode::from(code as u8)
}
