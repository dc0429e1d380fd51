//! Bounded concrete checking: every assignment in the domain product is run
//! in its own configuration with the `time` cell switched on.

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;

use crate::semantics::{boot, step, StepResult, DEFAULT_MAX_STEPS};
use crate::state::{Kont, Value};
use crate::syntax::{Program, TypeExpr};

use super::spec::{Bindings, CallCountSpec};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CheckResult {
    Verified {
        cases: u64,
    },
    Falsified {
        /// `(parameter, value)` in declaration order.
        assignment: Vec<(String, i128)>,
        calls: u64,
    },
    Inapplicable {
        reason: String,
    },
}

impl CheckResult {
    /// `VERIFIED n`, `FALSIFIED p1=v1 ...` or `INAPPLICABLE`.
    pub fn machine_line(&self) -> String {
        match self {
            CheckResult::Verified { cases } => format!("VERIFIED {cases}"),
            CheckResult::Falsified { assignment, .. } => {
                let mut s = String::from("FALSIFIED");
                for (p, v) in assignment {
                    s.push_str(&format!(" {p}={v}"));
                }
                s
            }
            CheckResult::Inapplicable { .. } => "INAPPLICABLE".into(),
        }
    }
}

impl fmt::Display for CheckResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CheckResult::Verified { cases } => write!(f, "verified over {cases} cases"),
            CheckResult::Falsified { assignment, calls } => {
                let args: Vec<_> = assignment.iter().map(|(p, v)| format!("{p}={v}")).collect();
                write!(f, "falsified at {} with {calls} calls", args.join(", "))
            }
            CheckResult::Inapplicable { reason } => write!(f, "inapplicable: {reason}"),
        }
    }
}

fn inapplicable(reason: impl Into<String>) -> CheckResult {
    CheckResult::Inapplicable {
        reason: reason.into(),
    }
}

/// Per-assignment verdicts that stop the enumeration.
enum Stop {
    Falsified(u64),
    Broken(String),
}

/// Calls `function` with `args` from a booted configuration and returns
/// how many times it was entered.
fn count_calls(
    base: &crate::state::Configuration,
    function: &str,
    args: Vec<Value>,
    max_steps: u64,
) -> Result<u64, String> {
    let mut cfg = base.clone();
    cfg.time_enabled = true;
    cfg.time.clear();
    let span = crate::syntax::Span::new(1, 1);
    cfg.k = vec![
        Kont::Discard { span },
        Kont::Invoke {
            name: function.to_string(),
            args,
            entry: false,
            span,
        },
    ];
    for _ in 0..max_steps {
        match step(&mut cfg) {
            StepResult::Continue(_) => {}
            StepResult::Done => return Ok(cfg.time.get(function).copied().unwrap_or(0)),
            StepResult::Failed(d) => return Err(d.to_string()),
        }
    }
    Err(format!("no result within {max_steps} steps"))
}

/// Checks `spec` against `program` using the default per-run step budget.
pub fn check(program: &Program, spec: &CallCountSpec) -> CheckResult {
    check_with(program, spec, DEFAULT_MAX_STEPS)
}

pub fn check_with(program: &Program, spec: &CallCountSpec, max_steps: u64) -> CheckResult {
    let Some(decl) = program.function(&spec.function) else {
        return inapplicable(format!("function `{}` is not defined", spec.function));
    };
    if decl.params.len() != spec.params.len() {
        return inapplicable(format!(
            "`{}` takes {} parameters but the spec declares {}",
            spec.function,
            decl.params.len(),
            spec.params.len()
        ));
    }
    let mut types = Vec::new();
    let mut ranges = Vec::new();
    for (name, param) in spec.params.iter().zip(&decl.params) {
        let TypeExpr::Int(ty) = param.ty else {
            return inapplicable(format!(
                "parameter `{}` of `{}` has non-integer type `{}`",
                param.name, spec.function, param.ty
            ));
        };
        let Some(&(lo, hi)) = spec
            .domains
            .get(name)
            .or_else(|| spec.domains.get(&param.name))
        else {
            return inapplicable(format!("no domain given for `{name}`"));
        };
        if !ty.contains(lo) || !ty.contains(hi) {
            return inapplicable(format!("domain {lo}..={hi} of `{name}` does not fit `{}`", param.ty));
        }
        types.push(ty);
        ranges.push((lo, hi));
    }
    let booted = match boot(program) {
        Ok(b) => b,
        Err(d) => return inapplicable(format!("program does not load: {d}")),
    };
    let Some(total) = ranges
        .iter()
        .try_fold(1u64, |acc, (lo, hi)| acc.checked_mul(u64::try_from(hi - lo + 1).ok()?))
    else {
        return inapplicable("domain is too large");
    };

    // Index `i` decodes to an assignment in lexicographic order, the first
    // parameter varying slowest.
    let decode = |mut i: u64| -> Vec<i128> {
        let mut vals = vec![0; ranges.len()];
        for (slot, (lo, hi)) in vals.iter_mut().zip(&ranges).rev() {
            let width = (hi - lo + 1) as u64;
            *slot = lo + (i % width) as i128;
            i /= width;
        }
        vals
    };
    let bind = |vals: &[i128]| -> BTreeMap<String, i128> {
        spec.params.iter().cloned().zip(vals.iter().copied()).collect()
    };

    let stop = (0..total).into_par_iter().find_map_first(|i| {
        let vals = decode(i);
        let params = bind(&vals);
        if !spec.requires.holds(spec, &Bindings { params: &params, calls: 0 }) {
            return None;
        }
        let args = vals
            .iter()
            .zip(&types)
            .map(|(v, ty)| Value::int(*v, *ty))
            .collect();
        match count_calls(&booted.config, &spec.function, args, max_steps) {
            Err(e) => Some((i, Stop::Broken(e))),
            Ok(calls) => {
                let b = Bindings {
                    params: &params,
                    calls: calls as i128,
                };
                (!spec.ensures.holds(spec, &b)).then_some((i, Stop::Falsified(calls)))
            }
        }
    });
    match stop {
        Some((i, stop)) => {
            let assignment: Vec<_> = spec.params.iter().cloned().zip(decode(i)).collect();
            match stop {
                Stop::Falsified(calls) => CheckResult::Falsified { assignment, calls },
                Stop::Broken(e) => {
                    let args: Vec<_> = assignment.iter().map(|(p, v)| format!("{p}={v}")).collect();
                    inapplicable(format!("run at {} failed: {e}", args.join(", ")))
                }
            }
        }
        None => {
            let cases = (0..total)
                .filter(|i| {
                    let params = bind(&decode(*i));
                    spec.requires.holds(spec, &Bindings { params: &params, calls: 0 })
                })
                .count() as u64;
            CheckResult::Verified { cases }
        }
    }
}

/// Calls observed for one assignment, for re-running a counterexample.
pub fn calls_at(program: &Program, function: &str, args: &[i128]) -> Result<u64, String> {
    let decl = program
        .function(function)
        .ok_or_else(|| format!("function `{function}` is not defined"))?;
    let mut values = Vec::new();
    for (v, p) in args.iter().zip(&decl.params) {
        match p.ty {
            TypeExpr::Int(ty) if ty.contains(*v) => values.push(Value::int(*v, ty)),
            _ => return Err(format!("{v} is not a valid `{}`", p.ty)),
        }
    }
    if values.len() != decl.params.len() || args.len() != values.len() {
        return Err("wrong number of arguments".into());
    }
    let booted = boot(program).map_err(|d| d.to_string())?;
    count_calls(&booted.config, function, values, DEFAULT_MAX_STEPS)
}

/// A report naming the function, the checked domain and the verdict.
pub fn summary(spec: &CallCountSpec, result: &CheckResult) -> String {
    let domain: Vec<_> = spec
        .domains
        .iter()
        .map(|(p, (lo, hi))| format!("{p} in {lo}..={hi}"))
        .collect();
    format!(
        "{}: requires {}; ensures {}; domain {}\n{result}",
        spec.function,
        spec.requires,
        spec.ensures,
        domain.join(", ")
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::speccheck::parse_spec;
    use crate::syntax::parse_source;

    const GCD: &str = "fn gcd(a: i32, b : i32) -> i32 {
    if a!=b {
        if a>b { return gcd(a-b, b); } else { return gcd(a, b-a); }
    } else { return a; }
}
fn main() {}
";

    fn oracle_calls(a: i128, b: i128) -> u64 {
        if a == b {
            1
        } else if a > b {
            1 + oracle_calls(a - b, b)
        } else {
            1 + oracle_calls(a, b - a)
        }
    }

    #[test]
    fn small_domain_verified() {
        let p = parse_source(GCD).unwrap();
        let s = parse_spec(
            "gcd(X:Int, Y:Int)\n<time> T1 => T2 </time>\nrequires X > 0 , Y > 0\nensures T2 - T1 <= maxInt(X,Y)\ndomain X in 0..=8, Y in 1..=8\n",
        )
        .unwrap();
        assert_eq!(check(&p, &s), CheckResult::Verified { cases: 64 });
    }

    #[test]
    fn counts_match_recursion() {
        let p = parse_source(GCD).unwrap();
        for (a, b) in [(1, 1), (2, 1), (1, 2), (7, 3), (12, 18)] {
            assert_eq!(calls_at(&p, "gcd", &[a, b]).unwrap(), oracle_calls(a, b));
        }
    }

    #[test]
    fn tight_bound_falsified_at_smallest() {
        let p = parse_source(GCD).unwrap();
        let s = parse_spec("fn gcd(a: Int, b: Int)\nensures calls(gcd) <= 1\ndomain a in 1..=5, b in 1..=5\n")
            .unwrap();
        let r = check(&p, &s);
        assert_eq!(
            r,
            CheckResult::Falsified {
                assignment: vec![("a".into(), 1), ("b".into(), 2)],
                calls: 2
            }
        );
        assert_eq!(r.machine_line(), "FALSIFIED a=1 b=2");
    }

    #[test]
    fn positional_domain_names() {
        let p = parse_source(GCD).unwrap();
        let s = parse_spec("gcd(X:Int, Y:Int)\nensures calls(gcd) >= 1\ndomain a in 1..=3, b in 1..=3\n").unwrap();
        assert_eq!(check(&p, &s), CheckResult::Verified { cases: 9 });
    }

    #[test]
    fn inapplicable_cases() {
        let p = parse_source(GCD).unwrap();
        let missing = parse_spec("lcm(X:Int)\nensures X > 0\ndomain X in 1..=2\n").unwrap();
        assert!(matches!(check(&p, &missing), CheckResult::Inapplicable { .. }));
        let arity = parse_spec("gcd(X:Int)\nensures X > 0\ndomain X in 1..=2\n").unwrap();
        assert!(matches!(check(&p, &arity), CheckResult::Inapplicable { .. }));
        // gcd(0, 1) never terminates
        let diverge = parse_spec("gcd(X:Int, Y:Int)\nensures X >= 0\ndomain X in 0..=1, Y in 1..=1\n").unwrap();
        let r = check_with(&p, &diverge, 10_000);
        assert!(matches!(&r, CheckResult::Inapplicable { reason } if reason.contains("X=0")), "{r}");
        let wide = parse_spec("gcd(X:Int, Y:Int)\nensures X >= 0\ndomain X in 1..=3000000000, Y in 1..=1\n").unwrap();
        assert!(matches!(check(&p, &wide), CheckResult::Inapplicable { .. }));
    }
}
