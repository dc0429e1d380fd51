mod common;

use common::generate::{from_choices, from_seed};
use common::invariants::check_program;
use krust::semantics::{Status, DEFAULT_MAX_STEPS};
use krust::syntax::parse_source;
use proptest::prelude::*;

fn assert_clean(src: &str) -> Status {
    let program = parse_source(src).unwrap_or_else(|e| panic!("{e}\n{src}"));
    let (outcome, violations) = check_program(&program, 200_000);
    assert!(violations.is_empty(), "{violations:#?}\n{src}");
    outcome.status
}

#[test]
fn corpus_programs_keep_every_invariant() {
    for (path, src) in common::corpus_sources() {
        let program = parse_source(&src).unwrap();
        let (_, violations) = check_program(&program, DEFAULT_MAX_STEPS);
        assert!(violations.is_empty(), "{}: {violations:#?}", path.display());
    }
}

#[test]
fn seeded_programs_mostly_run_to_completion() {
    let mut ok = 0;
    for seed in 0..300 {
        if assert_clean(&from_seed(seed)) == Status::Ok {
            ok += 1;
        }
    }
    assert!(ok > 200, "only {ok} of 300 generated programs ran cleanly");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn generated_programs_keep_every_invariant(choices in prop::collection::vec(any::<u32>(), 1..120)) {
        let src = from_choices(&choices);
        let program = parse_source(&src).unwrap();
        let (_, violations) = check_program(&program, 200_000);
        prop_assert!(violations.is_empty(), "{:#?}\n{}", violations, src);
    }
}

#[test]
fn monitor_detects_broken_states() {
    use common::invariants::check_state;
    use krust::state::{BorrowFlag, Configuration, Value};
    use krust::syntax::{IntTy, RefKind, TypeExpr};

    let i32t = TypeExpr::Int(IntTy::I32);
    let mut c = Configuration::fresh();
    let x = c.allocate(i32t.clone(), true);
    let r = c.allocate(TypeExpr::Ref(RefKind::Exclusive, Box::new(i32t.clone())), false);
    c.store.insert(x, Value::int(1, IntTy::I32));
    assert!(check_state(&c).is_empty());

    let mut bad = c.clone();
    bad.ref_cell.insert(x, r);
    bad.ref_type.insert(x, Some(RefKind::Shared));
    let names: Vec<_> = check_state(&bad).iter().map(|v| v.invariant).collect();
    assert!(names.contains(&"refCell ordering"), "{names:?}");
    assert!(names.contains(&"borrow exclusivity"), "{names:?}");

    let mut bad = c.clone();
    bad.store.insert(x, Value::Bool(true));
    assert_eq!(check_state(&bad)[0].invariant, "type preservation");

    let mut bad = c.clone();
    bad.borrow.insert(x, BorrowFlag::Exclusive);
    assert_eq!(check_state(&bad)[0].invariant, "borrow exclusivity");

    let mut bad = c;
    bad.next_loc = 1;
    assert_eq!(check_state(&bad)[0].invariant, "nextLoc monotonicity");
}
