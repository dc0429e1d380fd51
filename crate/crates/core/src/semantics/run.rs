//! Whole-program execution and outcome classification.

use crate::state::{Category, Configuration, Diagnostic};
use crate::syntax::{parse_source, Program};

use super::boot::entry_configuration;
use super::machine::{step, Applied, StepResult};

pub const DEFAULT_MAX_STEPS: u64 = 10_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Status {
    Ok,
    /// The analog of a compile-time rejection.
    SemanticError,
    /// The analog of a panic.
    RuntimeError,
    ParseError,
    Timeout,
}

impl Status {
    pub fn name(self) -> &'static str {
        match self {
            Status::Ok => "ok",
            Status::SemanticError => "semantic_error",
            Status::RuntimeError => "runtime_error",
            Status::ParseError => "parse_error",
            Status::Timeout => "timeout",
        }
    }

    pub fn exit_code(self) -> i32 {
        match self {
            Status::Ok => 0,
            Status::ParseError => 2,
            Status::SemanticError => 3,
            Status::RuntimeError => 4,
            Status::Timeout => 5,
        }
    }
}

impl std::fmt::Display for Status {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub status: Status,
    pub diagnostic: Option<Diagnostic>,
    pub output: String,
    pub steps: u64,
}

pub fn classify(d: &Diagnostic) -> Status {
    if d.category == Category::ParseError {
        Status::ParseError
    } else if d.category.is_runtime() {
        Status::RuntimeError
    } else {
        Status::SemanticError
    }
}

pub fn run(program: &Program, max_steps: u64) -> Outcome {
    run_with(program, max_steps, |_, _| {}).0
}

/// Runs `program`, calling `observer` after every successful step. Returns
/// the final configuration alongside the outcome.
pub fn run_with<F>(program: &Program, max_steps: u64, mut observer: F) -> (Outcome, Configuration)
where
    F: FnMut(&Configuration, &Applied),
{
    let mut cfg = entry_configuration(program);
    let mut steps = 0u64;
    let (status, diagnostic) = loop {
        if steps >= max_steps {
            break (Status::Timeout, None);
        }
        match step(&mut cfg) {
            StepResult::Continue(applied) => {
                steps += 1;
                observer(&cfg, &applied);
            }
            StepResult::Done => break (Status::Ok, None),
            StepResult::Failed(d) => break (classify(&d), Some(d)),
        }
    };
    let outcome = Outcome {
        status,
        diagnostic,
        output: cfg.out.clone(),
        steps,
    };
    (outcome, cfg)
}

pub fn run_source(source: &str, max_steps: u64) -> Outcome {
    match parse_source(source) {
        Ok(program) => run(&program, max_steps),
        Err(e) => Outcome {
            status: Status::ParseError,
            diagnostic: Some(Diagnostic::new(Category::ParseError, e.to_string()).at(e.span())),
            output: String::new(),
            steps: 0,
        },
    }
}

/// The step budget: `KRUST_MAX_STEPS` when set to a number, else the default.
pub fn max_steps_from_env() -> u64 {
    std::env::var("KRUST_MAX_STEPS")
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_MAX_STEPS)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn go(src: &str) -> Outcome {
        run_source(src, 100_000)
    }

    fn fails(src: &str, cat: Category, line: u32) {
        let o = go(src);
        let d = o.diagnostic.unwrap_or_else(|| panic!("expected {cat}, got {:?}", o.status));
        assert_eq!((d.category, d.line()), (cat, Some(line)), "{d}");
    }

    fn prints(src: &str, out: &str) {
        let o = go(src);
        assert_eq!(o.status, Status::Ok, "{:?}", o.diagnostic);
        assert_eq!(o.output, out);
    }

    #[test]
    fn declarations_and_assignment() {
        fails("fn main() {\n let x = 9;\n x = 10;\n}", Category::AssignToImmutable, 3);
        prints("fn main() { let a = 1; let b = a; println!(\"{}\", b); }", "1\n");
        prints("fn main() { let x = 1; let x = 2; println!(\"{}\", x); }", "2\n");
        fails("fn main() {\n let z: bool;\n let w = !z;\n}", Category::UninitializedRead, 3);
        fails("fn main() {\n let mut y: i32 = 0;\n y = true;\n}", Category::TypeMismatch, 3);
        prints("fn main() { let x; x = 4; println!(\"{}\", x); }", "4\n");
        prints("fn main() { let mut s = 0; s += 5; s -= 1; s *= 3; s /= 2; println!(\"{}\", s); }", "6\n");
    }

    #[test]
    fn functions() {
        prints(
            "fn main() { println!(\"{}\", foo(1, 2)); }\nfn foo(x: i32, y: i32) -> i32 { x + y }",
            "3\n",
        );
        fails("fn foo(x: i32) -> i32 { x }\nfn main() {\n foo(1, 2);\n}", Category::ArityMismatch, 3);
        prints("fn f() -> i32 { return 1; let x = 2; }\nfn main() { println!(\"{}\", f()); }", "1\n");
        fails("fn f() -> i32 { }\nfn main() {\n f();\n}", Category::TypeMismatch, 1);
        prints(
            "fn gcd(a: i32, b: i32) -> i32 { if a != b { if a > b { return gcd(a - b, b); } else { return gcd(a, b - a); } } else { return a; } }\nfn main() { println!(\"{}\", gcd(6, 4)); }",
            "2\n",
        );
        fails("fn helper() {}", Category::MissingMain, 1);
        assert_eq!(go("fn main() {}\nfn main() {}").status, Status::SemanticError);
    }

    #[test]
    fn arrays() {
        prints("fn main() { let mut a = [1, 2, 3]; a[1] = 7; println!(\"{}\", a[1]); }", "7\n");
        fails("fn main() {\n let a = [1, 2, 3];\n let b = a[3];\n}", Category::IndexOutOfBounds, 3);
        fails("fn main() {\n let a = [1, 2, 3];\n a[0] = 1;\n}", Category::AssignToImmutable, 3);
        prints("fn main() { let a: [u8; 4] = [0; 4]; let b = a; println!(\"{}\", b[3]); }", "0\n");
    }

    #[test]
    fn references() {
        prints(
            "fn main() { let mut x3 = 1; let p3 = &mut x3; *p3 = 2; println!(\"{}\", *p3); }",
            "2\n",
        );
        fails("fn main() {\n let x1 = 1;\n let y = &mut x1;\n}", Category::MutBorrowOfImmutable, 3);
        fails(
            "fn main() {\n let mut x3 = 1;\n let p3 = &mut x3;\n let p4 = &mut x3;\n}",
            Category::BorrowConflict,
            4,
        );
        fails("fn main() {\n let x = 1;\n let p = &x;\n *p = 2;\n}", Category::WriteThroughSharedRef, 4);
        fails("fn main() {\n let n = 1;\n let m = *n;\n}", Category::NotAReference, 3);
        fails(
            "fn main() {\n let x;\n {\n let y = 1;\n x = &y;\n }\n}",
            Category::LifetimeError,
            5,
        );
        prints(
            "fn main() { let mut x = 1; { let p = &mut x; *p = 5; } let q = &mut x; *q += 1; println!(\"{}\", x); }",
            "6\n",
        );
    }

    #[test]
    fn structs() {
        let base = "struct Point { x: i32, y: i32 }\nfn main() {\n let p = Point { x: 1, y: 2 };\n";
        prints(&format!("{base} println!(\"{{}}\", p.x);\n}}"), "1\n");
        fails(
            &format!("{base} let mut q = p;\n q.x = 2;\n println!(\"{{}}\", p.x);\n}}"),
            Category::UseAfterMove,
            6,
        );
        prints(&format!("{base} let mut q = p;\n q.x = 2;\n println!(\"{{}}\", q.x);\n}}"), "2\n");
        fails(&format!("{base} p.x = 3;\n}}"), Category::AssignToImmutable, 4);
        fails(
            "struct P { x: i32, y: i32 }\nfn main() {\n let p = P { x: 1 };\n}",
            Category::TypeMismatch,
            3,
        );
        fails(
            &format!("{base} let q = p;\n let r = p;\n}}"),
            Category::UseAfterMove,
            5,
        );
    }

    #[test]
    fn control_flow_and_operators() {
        prints("fn main() { let mut s = 0; for i in 0..3 { s = s + i; } println!(\"{}\", s); }", "3\n");
        prints("fn main() { let mut x: i32 = 10; while x > 0 { x = x - 1; } println!(\"{}\", x); }", "0\n");
        fails("fn main() {\n if 1 {}\n}", Category::TypeMismatch, 2);
        prints("fn main() { let b = false && (1 / 0 == 0); println!(\"{}\", b); }", "false\n");
        fails("fn main() {\n let x: i32 = 2147483647;\n let y = x + 1;\n}", Category::Overflow, 3);
        assert_eq!(go("fn main() { loop {} }").status, Status::Timeout);
        prints("fn main() { let c = 'z'; let s = \"hi\"; println!(\"{} {} {}\", c, s, 1.5); }", "z hi 1.5\n");
        prints("const N: i32 = 4;\nfn main() { println!(\"{}\", N * 2); }", "8\n");
    }
}
