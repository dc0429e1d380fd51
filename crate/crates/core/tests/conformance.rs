mod common;

use std::collections::BTreeSet;

use krust::difftest::lint_corpus;
use krust::semantics::{run_with, RuleTag};
use krust::syntax::parse_source;

#[test]
fn at_least_twenty_five_annotated_programs() {
    assert!(common::conformance_sources().len() >= 25);
}

#[test]
fn every_annotation_matches() {
    let entries = lint_corpus(&common::corpus_dir(), 10_000_000).unwrap();
    let bad: Vec<_> = entries.iter().filter(|e| e.problem.is_some()).collect();
    assert!(bad.is_empty(), "{bad:#?}");
}

#[test]
fn corpus_covers_every_production() {
    let mut seen = BTreeSet::new();
    for (_, src) in common::conformance_sources() {
        seen.extend(common::productions::productions_of(&src));
    }
    let missing: Vec<_> = common::productions::all_productions()
        .difference(&seen)
        .cloned()
        .collect();
    assert!(missing.is_empty(), "uncovered: {missing:?}");
}

#[test]
fn corpus_covers_every_core_rule() {
    let mut seen = BTreeSet::new();
    for (_, src) in common::conformance_sources() {
        let program = parse_source(&src).unwrap();
        run_with(&program, 10_000_000, |_, a| {
            seen.insert(a.rule);
        });
    }
    let missing: Vec<_> = RuleTag::CORE.iter().filter(|r| !seen.contains(r)).collect();
    assert!(missing.is_empty(), "never applied: {missing:?}");
}
