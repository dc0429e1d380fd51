//! Corpus files, their expectation annotations and the known-divergence
//! manifest.

use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use crate::semantics::{run_source, Outcome, Status};
use crate::state::Category;

use super::observe::HarnessError;

/// Name of the per-directory list of programs expected to mismatch.
pub const KNOWN_DIVERGENCES: &str = "known_divergences.txt";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExpectKind {
    Accept,
    /// The line is absent for diagnostics without a position.
    Reject(Category, Option<u32>),
    Panic(Category, Option<u32>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Expectation {
    pub kind: ExpectKind,
    /// Expected stdout, one entry per line.
    pub out: Vec<String>,
}

impl fmt::Display for ExpectKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExpectKind::Accept => f.write_str("accept"),
            ExpectKind::Reject(c, l) => write!(f, "reject {c}{}", at(*l)),
            ExpectKind::Panic(c, l) => write!(f, "panic {c}{}", at(*l)),
        }
    }
}

fn at(line: Option<u32>) -> String {
    line.map(|l| format!(" @{l}")).unwrap_or_default()
}

/// Reads `// expect: ...` and `// out: ...` comments. The expect line is
/// `accept`, `reject <Category> [@<line>]` or `panic <Category> [@<line>]`; it
/// may trail code so that annotating a file does not move its lines.
pub fn parse_annotations(source: &str) -> Result<Expectation, String> {
    let mut kind = None;
    let mut out = Vec::new();
    for (i, line) in source.lines().enumerate() {
        let Some(pos) = line.find("//") else { continue };
        let comment = &line[pos + 2..];
        let comment = comment.strip_prefix(' ').unwrap_or(comment);
        if let Some(text) = comment.strip_prefix("out:") {
            out.push(text.strip_prefix(' ').unwrap_or(text).to_string());
        } else if let Some(text) = comment.strip_prefix("expect:") {
            if kind.is_some() {
                return Err(format!("line {}: second `expect:` annotation", i + 1));
            }
            kind = Some(parse_kind(text.trim()).map_err(|e| format!("line {}: {e}", i + 1))?);
        }
    }
    let kind = kind.ok_or("missing `// expect:` annotation")?;
    Ok(Expectation { kind, out })
}

fn parse_kind(text: &str) -> Result<ExpectKind, String> {
    let words: Vec<_> = text.split_whitespace().collect();
    match words.as_slice() {
        ["accept"] => Ok(ExpectKind::Accept),
        [k @ ("reject" | "panic"), cat, rest @ ..] if rest.len() <= 1 => {
            let cat = Category::from_name(cat).ok_or(format!("unknown category `{cat}`"))?;
            let line = match rest {
                [at] => Some(
                    at.strip_prefix('@')
                        .and_then(|l| l.parse().ok())
                        .ok_or(format!("expected `@<line>`, found `{at}`"))?,
                ),
                _ => None,
            };
            if cat.is_runtime() != (*k == "panic") {
                return Err(format!("{cat} is not a {k} category"));
            }
            Ok(if *k == "reject" {
                ExpectKind::Reject(cat, line)
            } else {
                ExpectKind::Panic(cat, line)
            })
        }
        _ => Err(format!("cannot read expectation `{text}`")),
    }
}

/// Why an outcome does not meet its expectation, if it does not.
pub fn check_expectation(exp: &Expectation, outcome: &Outcome) -> Result<(), String> {
    let got = match (&outcome.status, &outcome.diagnostic) {
        (Status::Ok, _) => "accept".to_string(),
        (Status::Timeout, _) => "timeout".to_string(),
        (status, Some(d)) => {
            let k = if *status == Status::RuntimeError { "panic" } else { "reject" };
            format!("{k} {}{}", d.category, at(d.line()))
        }
        (status, None) => status.name().to_string(),
    };
    if got != exp.kind.to_string() {
        let detail = outcome
            .diagnostic
            .as_ref()
            .map(|d| format!(" ({})", d.message))
            .unwrap_or_default();
        return Err(format!("expected {}, got {got}{detail}", exp.kind));
    }
    if !matches!(exp.kind, ExpectKind::Reject(..)) {
        let want: String = exp.out.iter().map(|l| format!("{l}\n")).collect();
        if outcome.output != want {
            return Err(format!("expected output {want:?}, got {:?}", outcome.output));
        }
    }
    Ok(())
}

/// Every `*.rs` file below `dir`, as sorted paths relative to `dir`.
pub fn corpus_files(dir: &Path) -> Result<Vec<PathBuf>, HarnessError> {
    fn walk(root: &Path, dir: &Path, acc: &mut Vec<PathBuf>) -> Result<(), HarnessError> {
        let entries = fs::read_dir(dir).map_err(|e| HarnessError::io(dir.to_path_buf(), e))?;
        for entry in entries {
            let path = entry.map_err(|e| HarnessError::io(dir.to_path_buf(), e))?.path();
            if path.is_dir() {
                walk(root, &path, acc)?;
            } else if path.extension().is_some_and(|e| e == "rs") {
                acc.push(path.strip_prefix(root).expect("below root").to_path_buf());
            }
        }
        Ok(())
    }
    if !dir.is_dir() {
        return Err(HarnessError::Usage(format!("{} is not a directory", dir.display())));
    }
    let mut files = Vec::new();
    walk(dir, dir, &mut files)?;
    if files.is_empty() {
        return Err(HarnessError::Usage(format!("no .rs files in {}", dir.display())));
    }
    files.sort();
    Ok(files)
}

/// Known divergences below `dir`: relative path to reason. Each manifest
/// line is `<file> <reason>`, relative to the manifest's own directory.
pub fn known_divergences(dir: &Path) -> Result<BTreeMap<PathBuf, String>, HarnessError> {
    fn walk(root: &Path, dir: &Path, acc: &mut BTreeMap<PathBuf, String>) -> Result<(), HarnessError> {
        let manifest = dir.join(KNOWN_DIVERGENCES);
        if manifest.is_file() {
            let text = fs::read_to_string(&manifest).map_err(|e| HarnessError::io(manifest.clone(), e))?;
            let base = dir.strip_prefix(root).expect("below root");
            for line in text.lines().map(str::trim) {
                if line.is_empty() || line.starts_with('#') {
                    continue;
                }
                let (file, reason) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
                acc.insert(base.join(file), reason.trim().to_string());
            }
        }
        let entries = fs::read_dir(dir).map_err(|e| HarnessError::io(dir.to_path_buf(), e))?;
        for entry in entries {
            let path = entry.map_err(|e| HarnessError::io(dir.to_path_buf(), e))?.path();
            if path.is_dir() {
                walk(root, &path, acc)?;
            }
        }
        Ok(())
    }
    let mut acc = BTreeMap::new();
    walk(dir, dir, &mut acc)?;
    Ok(acc)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LintEntry {
    pub path: PathBuf,
    pub problem: Option<String>,
}

/// Runs every corpus program and checks it against its annotations.
pub fn lint_corpus(dir: &Path, max_steps: u64) -> Result<Vec<LintEntry>, HarnessError> {
    let files = corpus_files(dir)?;
    let mut entries = Vec::with_capacity(files.len());
    for path in files {
        let full = dir.join(&path);
        let source = fs::read_to_string(&full).map_err(|e| HarnessError::io(full.clone(), e))?;
        let problem = parse_annotations(&source)
            .and_then(|exp| check_expectation(&exp, &run_source(&source, max_steps)))
            .err();
        entries.push(LintEntry { path, problem });
    }
    Ok(entries)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn annotations() {
        let e = parse_annotations("// expect: panic Overflow @4\n// out: 1\n// out:\nfn main() {}").unwrap();
        assert_eq!(e.kind, ExpectKind::Panic(Category::Overflow, Some(4)));
        assert_eq!(e.out, ["1", ""]);
        let trailing = parse_annotations("fn main() { // expect: reject AssignToImmutable @3\n").unwrap();
        assert_eq!(trailing.kind, ExpectKind::Reject(Category::AssignToImmutable, Some(3)));
        let bare = parse_annotations("// expect: reject MissingMain\n").unwrap();
        assert_eq!(bare.kind, ExpectKind::Reject(Category::MissingMain, None));
        assert!(parse_annotations("fn main() {}").is_err());
        assert!(parse_annotations("// expect: reject Overflow @3").is_err());
        assert!(parse_annotations("// expect: reject Nope @3").is_err());
        assert!(parse_annotations("// expect: accept\n// expect: accept").is_err());
    }

    #[test]
    fn expectation_checks() {
        let src = "// expect: accept\n// out: 3\nfn main() { println!(\"{}\", 3); }";
        let exp = parse_annotations(src).unwrap();
        assert!(check_expectation(&exp, &run_source(src, 1000)).is_ok());
        let wrong = Expectation { out: vec!["4".into()], ..exp };
        assert!(check_expectation(&wrong, &run_source(src, 1000)).is_err());
        let src = "fn main() { // expect: reject AssignToImmutable @3\n let x = 9;\n x = 10;\n}";
        assert!(check_expectation(&parse_annotations(src).unwrap(), &run_source(src, 1000)).is_ok());
        let moved = src.replace("@3", "@2");
        assert!(check_expectation(&parse_annotations(&moved).unwrap(), &run_source(&moved, 1000)).is_err());
    }

    #[test]
    fn corpus_discovery() {
        let dir = tempfile::tempdir().unwrap();
        assert!(corpus_files(dir.path()).is_err());
        assert!(corpus_files(&dir.path().join("nope")).is_err());
        fs::create_dir(dir.path().join("sub")).unwrap();
        fs::write(dir.path().join("b.rs"), "").unwrap();
        fs::write(dir.path().join("sub/a.rs"), "").unwrap();
        fs::write(dir.path().join("notes.txt"), "").unwrap();
        fs::write(dir.path().join("sub").join(KNOWN_DIVERGENCES), "# why\na.rs NLL accepts\n").unwrap();
        assert_eq!(corpus_files(dir.path()).unwrap(), [PathBuf::from("b.rs"), PathBuf::from("sub/a.rs")]);
        let known = known_divergences(dir.path()).unwrap();
        assert_eq!(known[Path::new("sub/a.rs")], "NLL accepts");
    }
}
