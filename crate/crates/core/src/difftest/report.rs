//! Corpus runs and their tab-separated reports.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use super::corpus::{corpus_files, known_divergences};
use super::observe::{
    compare, observe_interpreter, observe_reference, HarnessError, ObservedBehavior,
    ToolchainConfig, Verdict,
};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EntryResult {
    Compared {
        verdict: Verdict,
        interpreter: ObservedBehavior,
        reference: ObservedBehavior,
    },
    HarnessError(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReportEntry {
    /// Relative to the corpus directory.
    pub path: PathBuf,
    pub result: EntryResult,
    /// Reason from the known-divergence manifest, if listed there.
    pub known: Option<String>,
}

impl ReportEntry {
    /// `agree`, `mismatch`, `known_mismatch` or `harness_error`.
    pub fn verdict_name(&self) -> &'static str {
        match (&self.result, &self.known) {
            (EntryResult::HarnessError(_), _) => "harness_error",
            (EntryResult::Compared { verdict: Verdict::Agree, .. }, _) => "agree",
            (EntryResult::Compared { .. }, None) => "mismatch",
            (EntryResult::Compared { .. }, Some(_)) => "known_mismatch",
        }
    }

    fn record(&self) -> String {
        let clean = |s: String| s.replace(['\t', '\n'], " ");
        let (dimension, i, r) = match &self.result {
            EntryResult::HarnessError(e) => ("-", clean(e.clone()), "-".to_string()),
            EntryResult::Compared { verdict, interpreter, reference } => (
                match verdict {
                    Verdict::Agree => "-",
                    Verdict::Mismatch { dimension, .. } => dimension.name(),
                },
                clean(interpreter.to_string()),
                clean(reference.to_string()),
            ),
        };
        format!("{}\t{}\t{dimension}\t{i}\t{r}", self.path.display(), self.verdict_name())
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Summary {
    pub agree: usize,
    pub mismatch: usize,
    pub known_mismatch: usize,
    pub harness_error: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Report {
    /// Sorted by path.
    pub entries: Vec<ReportEntry>,
}

impl Report {
    pub fn summary(&self) -> Summary {
        let mut s = Summary::default();
        for e in &self.entries {
            match e.verdict_name() {
                "agree" => s.agree += 1,
                "mismatch" => s.mismatch += 1,
                "known_mismatch" => s.known_mismatch += 1,
                _ => s.harness_error += 1,
            }
        }
        s
    }

    /// One tab-separated record per program: path, verdict, dimension,
    /// interpreter behaviour, reference behaviour.
    pub fn to_tsv(&self) -> String {
        self.entries.iter().map(|e| e.record() + "\n").collect()
    }

    /// Known divergences whose programs now agree.
    pub fn stale_known(&self) -> Vec<&Path> {
        self.entries
            .iter()
            .filter(|e| e.known.is_some() && e.verdict_name() == "agree")
            .map(|e| e.path.as_path())
            .collect()
    }
}

/// Observes every program under both implementations, `jobs` at a time.
pub fn run_corpus(
    dir: &Path,
    cfg: &ToolchainConfig,
    jobs: usize,
    max_steps: u64,
) -> Result<Report, HarnessError> {
    run_corpus_with(dir, jobs, max_steps, |p| observe_reference(p, cfg))
}

/// [`run_corpus`] with a custom reference observer.
pub fn run_corpus_with<F>(
    dir: &Path,
    jobs: usize,
    max_steps: u64,
    reference: F,
) -> Result<Report, HarnessError>
where
    F: Fn(&Path) -> Result<ObservedBehavior, HarnessError> + Sync,
{
    let files = corpus_files(dir)?;
    let known: BTreeMap<PathBuf, String> = known_divergences(dir)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| HarnessError::Usage(e.to_string()))?;
    let entries = pool.install(|| {
        files
            .par_iter()
            .map(|path| {
                let full = dir.join(path);
                let result = observe_interpreter(&full, max_steps)
                    .and_then(|i| Ok((i, reference(&full)?)))
                    .map(|(interpreter, reference)| EntryResult::Compared {
                        verdict: compare(&interpreter, &reference),
                        interpreter,
                        reference,
                    })
                    .unwrap_or_else(|e| EntryResult::HarnessError(e.to_string()));
                ReportEntry {
                    path: path.clone(),
                    result,
                    known: known.get(path).cloned(),
                }
            })
            .collect::<Vec<_>>()
    });
    Ok(Report { entries })
}
