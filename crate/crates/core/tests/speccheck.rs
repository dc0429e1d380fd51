mod common;

use std::time::Instant;

use krust::speccheck::{calls_at, check, parse_spec, CheckResult};
use krust::syntax::parse_source;

fn gcd_program() -> krust::syntax::Program {
    parse_source(&std::fs::read_to_string(common::walkthrough("gcd.rs")).unwrap()).unwrap()
}

fn spec(file: &str) -> krust::speccheck::CallCountSpec {
    parse_spec(&std::fs::read_to_string(common::walkthrough(file)).unwrap()).unwrap()
}

/// Calls made by subtraction-based gcd, counted directly.
fn oracle_calls(mut a: i128, mut b: i128) -> u64 {
    let mut n = 1;
    while a != b {
        if a > b {
            a -= b;
        } else {
            b -= a;
        }
        n += 1;
    }
    n
}

#[test]
fn gcd_bound_holds_on_the_full_grid() {
    let start = Instant::now();
    let r = check(&gcd_program(), &spec("gcd.spec"));
    assert_eq!(r, CheckResult::Verified { cases: 50 * 50 });
    assert_eq!(r.machine_line(), "VERIFIED 2500");
    assert!(start.elapsed().as_secs() < 10);
    let oracle_max = (1..=50)
        .flat_map(|a| (1..=50).map(move |b| (a, b)))
        .all(|(a, b)| oracle_calls(a, b) <= a.max(b) as u64);
    assert!(oracle_max);
}

#[test]
fn tight_bound_is_falsified() {
    let p = gcd_program();
    let r = check(&p, &spec("gcd_tight.spec"));
    let CheckResult::Falsified { assignment, calls } = &r else {
        panic!("{r}");
    };
    let args: Vec<i128> = assignment.iter().map(|(_, v)| *v).collect();
    assert_eq!(args, [1, 2]);
    assert_eq!(*calls, oracle_calls(1, 2));
    assert_eq!(calls_at(&p, "gcd", &args).unwrap(), *calls);
    // gcd(2, 1) -> gcd(1, 1): also a counterexample, just not the first.
    assert_eq!(calls_at(&p, "gcd", &[2, 1]).unwrap(), 2);
}

#[test]
fn counts_agree_with_direct_computation() {
    let p = gcd_program();
    for (a, b) in [(1, 1), (1, 50), (50, 1), (17, 31), (48, 36)] {
        assert_eq!(calls_at(&p, "gcd", &[a, b]).unwrap(), oracle_calls(a, b), "gcd({a}, {b})");
    }
}

#[test]
fn subdomains_of_a_verified_domain_verify() {
    let p = gcd_program();
    for (hi_x, hi_y) in [(1, 1), (7, 3), (20, 50)] {
        let text = format!(
            "gcd(X:Int, Y:Int)\n<time> T1 => T2 </time>\nrequires X > 0 , Y > 0\nensures T2 - T1 <= maxInt(X,Y)\ndomain X in 1..={hi_x}, Y in 1..={hi_y}\n"
        );
        let r = check(&p, &parse_spec(&text).unwrap());
        assert_eq!(r, CheckResult::Verified { cases: (hi_x * hi_y) as u64 });
    }
}

#[test]
fn every_checked_call_counts_itself() {
    let p = gcd_program();
    let s = parse_spec("gcd(X:Int, Y:Int)\nensures calls(gcd) >= 1\ndomain X in 1..=12, Y in 1..=12\n").unwrap();
    assert_eq!(check(&p, &s), CheckResult::Verified { cases: 144 });
}

#[test]
fn requires_filters_cases() {
    let p = gcd_program();
    // The time line may come after the clauses that use it.
    let s = parse_spec("gcd(X:Int, Y:Int)\nrequires X >= Y\nensures T2 <= X\n<time> T1 => T2 </time>\ndomain X in 1..=10, Y in 1..=10\n").unwrap();
    assert_eq!(check(&p, &s), CheckResult::Verified { cases: 55 });
}
