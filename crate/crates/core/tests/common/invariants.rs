//! Engine invariants checked after every step of a run.

use std::collections::{BTreeMap, BTreeSet};

use krust::semantics::{run_with, Applied, Outcome, RuleTag, Status};
use krust::state::{BorrowFlag, Configuration, Location, Value};
use krust::syntax::{Program, RefKind, TypeExpr};

/// Invariant names, as reported in violations.
pub const NAMES: [&str; 7] = [
    "determinism",
    "nextLoc monotonicity",
    "refCell ordering",
    "type preservation",
    "move soundness",
    "borrow exclusivity",
    "frame balance",
];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub invariant: &'static str,
    pub step: u64,
    pub detail: String,
}

#[derive(Default)]
struct Monitor {
    step: u64,
    next_loc: u64,
    moved: BTreeSet<Location>,
    open_calls: usize,
    violations: Vec<Violation>,
}

impl Monitor {
    fn fail(&mut self, invariant: &'static str, detail: String) {
        if self.violations.len() < 20 {
            self.violations.push(Violation {
                invariant,
                step: self.step,
                detail,
            });
        }
    }

    fn observe(&mut self, cfg: &Configuration, a: &Applied) {
        self.step += 1;

        if cfg.next_loc < self.next_loc {
            self.fail("nextLoc monotonicity", format!("{} -> {}", self.next_loc, cfg.next_loc));
        }
        self.next_loc = cfg.next_loc;
        let keys = cfg
            .store
            .keys()
            .chain(cfg.type_env.keys())
            .chain(cfg.mut_type.keys())
            .chain(cfg.borrow.keys())
            .chain(cfg.ref_cell.keys())
            .chain(cfg.ref_type.keys())
            .chain(cfg.moved.keys());
        for l in keys {
            if l.0 >= cfg.next_loc {
                self.fail("nextLoc monotonicity", format!("location {l} at or past nextLoc {}", cfg.next_loc));
                break;
            }
        }

        for (l1, l2) in &cfg.ref_cell {
            if l1 <= l2 {
                self.fail("refCell ordering", format!("refCell({l1}) = {l2}"));
            }
        }

        self.types(cfg);

        if matches!(
            a.rule,
            RuleTag::EvaluationOfStructField | RuleTag::UpdatingOfStructField
        ) {
            if let Some(owner) = a.subject {
                if self.moved.contains(&owner) {
                    self.fail("move soundness", format!("{} on moved {owner}", a.rule));
                }
            }
        }
        self.moved = cfg
            .moved
            .iter()
            .filter(|(_, m)| **m)
            .map(|(l, _)| *l)
            .collect();

        self.borrows(cfg);

        match a.rule {
            RuleTag::FunctionCall => self.open_calls += 1,
            RuleTag::Return => self.open_calls = self.open_calls.saturating_sub(1),
            _ => {}
        }
        if cfg.fstack.len() != self.open_calls {
            self.fail(
                "frame balance",
                format!("fstack depth {} with {} open calls", cfg.fstack.len(), self.open_calls),
            );
        }
    }

    fn types(&mut self, cfg: &Configuration) {
        for (l, ty) in &cfg.type_env {
            let check = |loc: Location, want: &TypeExpr| -> Option<String> {
                let v = cfg.value_at(loc);
                let got = v.get_type()?;
                if let Value::Int { flex: true, .. } | Value::Float { flex: true, .. } = v {
                    return Some(format!("unsettled literal {v} at {loc}"));
                }
                (got != *want).then(|| format!("store({loc}) : {got} but typeEnv says {want}"))
            };
            let problem = match ty {
                TypeExpr::Array(elem, n) => (0..*n).find_map(|i| check(Location(l.0 + i), elem)),
                TypeExpr::Infer if !cfg.value_at(*l).is_undefined() => {
                    Some(format!("{l} holds a value but has no type"))
                }
                TypeExpr::Infer => None,
                _ => check(*l, ty),
            };
            if let Some(p) = problem {
                self.fail("type preservation", p);
            }
        }
    }

    fn borrows(&mut self, cfg: &Configuration) {
        let mut holders: BTreeMap<Location, Vec<RefKind>> = BTreeMap::new();
        for (r, t) in &cfg.ref_cell {
            if let Some(kind) = cfg.ref_type.get(r).copied().flatten() {
                holders.entry(*t).or_default().push(kind);
            }
        }
        for (l, flag) in &cfg.borrow {
            let kinds = holders.get(l).map(Vec::as_slice).unwrap_or(&[]);
            let exclusive = kinds.iter().filter(|k| **k == RefKind::Exclusive).count();
            let ok = match flag {
                BorrowFlag::Exclusive => exclusive == 1 && kinds.len() == 1,
                BorrowFlag::Shared => !kinds.is_empty() && exclusive == 0,
                BorrowFlag::None => kinds.is_empty(),
            };
            if !ok {
                self.fail(
                    "borrow exclusivity",
                    format!("borrow({l}) = {} with live references {kinds:?}", flag.symbol()),
                );
            }
        }
    }
}

/// Runs `program` twice, checking every invariant after every step.
pub fn check_program(program: &Program, max_steps: u64) -> (Outcome, Vec<Violation>) {
    let mut m = Monitor::default();
    let (outcome, cfg) = run_with(program, max_steps, |c, a| m.observe(c, a));
    if outcome.status == Status::Ok && (!cfg.fstack.is_empty() || !cfg.k.is_empty()) {
        m.fail(
            "frame balance",
            format!("done with {} frames and {} continuations", cfg.fstack.len(), cfg.k.len()),
        );
    }
    let (again, cfg2) = run_with(program, max_steps, |_, _| {});
    if again != outcome || cfg2 != cfg {
        m.fail("determinism", format!("{:?} vs {:?}", outcome.status, again.status));
    }
    (outcome, m.violations)
}

/// The invariants that depend on a single configuration only.
pub fn check_state(cfg: &Configuration) -> Vec<Violation> {
    let mut m = Monitor {
        next_loc: cfg.next_loc,
        ..Monitor::default()
    };
    m.observe(
        cfg,
        &Applied {
            rule: RuleTag::Literal,
            subject: None,
        },
    );
    m.violations
}
