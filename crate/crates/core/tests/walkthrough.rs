mod common;

use std::time::Instant;

use krust::semantics::{run, run_source, RuleTag, Status};
use krust::state::Category;
use krust::syntax::parse_source;

fn expect_at(file: &str, category: Category, line: u32) {
    let src = std::fs::read_to_string(common::walkthrough(file)).unwrap();
    let o = run_source(&src, 100_000);
    let d = o
        .diagnostic
        .unwrap_or_else(|| panic!("{file}: expected {category}, got {:?}", o.status));
    assert_eq!((d.category, d.line()), (category, Some(line)), "{file}: {d}");
    assert_eq!(o.status, Status::SemanticError, "{file}");
}

fn expect_ok(file: &str) -> String {
    let src = std::fs::read_to_string(common::walkthrough(file)).unwrap();
    let o = run_source(&src, 100_000);
    assert_eq!(o.status, Status::Ok, "{file}: {:?}", o.diagnostic);
    src
}

#[test]
fn mutability_line_3() {
    expect_at("mutability_line3.rs", Category::AssignToImmutable, 3);
}

#[test]
fn ownership_line_10() {
    expect_at("ownership_line10.rs", Category::UseAfterMove, 10);
}

#[test]
fn ownership_line_12() {
    expect_at("ownership_line12.rs", Category::UnboundIdentifier, 12);
}

#[test]
fn borrowing_line_5() {
    expect_at("borrowing_line5.rs", Category::WriteThroughSharedRef, 5);
}

#[test]
fn borrowing_line_6() {
    expect_at("borrowing_line6.rs", Category::MutBorrowOfImmutable, 6);
}

#[test]
fn borrowing_line_11() {
    expect_at("borrowing_line11.rs", Category::WriteThroughSharedRef, 11);
}

#[test]
fn borrowing_line_15() {
    expect_at("borrowing_line15.rs", Category::BorrowConflict, 15);
}

#[test]
fn borrowing_line_16_writes_through_the_mutable_reference() {
    let src = expect_ok("borrowing_line16.rs");
    let program = parse_source(&src).unwrap();
    let mut seen = None;
    let (o, _) = krust::semantics::run_with(&program, 100_000, |cfg, a| {
        if a.rule == RuleTag::DerefAssignment {
            let x3 = cfg.env["x3"];
            assert_eq!(a.subject, Some(x3));
            seen = Some(cfg.value_at(x3).display());
        }
    });
    assert_eq!(o.status, Status::Ok);
    assert_eq!(seen.as_deref(), Some("2"));
}

#[test]
fn borrowing_line_17() {
    expect_at("borrowing_line17.rs", Category::BorrowConflict, 17);
}

#[test]
fn lifetime_line_5() {
    expect_at("lifetime_line5.rs", Category::LifetimeError, 5);
}

#[test]
fn lifetime_line_8() {
    expect_ok("lifetime_line8.rs");
}

#[test]
fn whole_walkthrough_is_fast() {
    let start = Instant::now();
    for (path, src) in common::corpus_sources() {
        if path.starts_with("walkthrough") {
            run(&parse_source(&src).unwrap(), 100_000);
        }
    }
    assert!(start.elapsed().as_secs_f64() < 1.0, "{:?}", start.elapsed());
}
