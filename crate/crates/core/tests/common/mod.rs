#![allow(dead_code)]

pub mod generate;
pub mod invariants;
pub mod productions;

use std::path::{Path, PathBuf};

pub fn corpus_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("corpus")
}

pub fn walkthrough(name: &str) -> PathBuf {
    corpus_dir().join("walkthrough").join(name)
}

/// Every corpus program as `(relative path, source)`.
pub fn corpus_sources() -> Vec<(PathBuf, String)> {
    let dir = corpus_dir();
    krust::difftest::corpus_files(&dir)
        .unwrap()
        .into_iter()
        .map(|p| {
            let src = std::fs::read_to_string(dir.join(&p)).unwrap();
            (p, src)
        })
        .collect()
}

pub fn conformance_sources() -> Vec<(PathBuf, String)> {
    corpus_sources()
        .into_iter()
        .filter(|(p, _)| p.starts_with("conformance"))
        .collect()
}
