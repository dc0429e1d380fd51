//! Random well-formed straight-line programs. The builder tracks a small
//! model of ownership and borrowing so that most programs run to
//! completion; a few deliberately break a rule.

use std::fmt::Write;

#[derive(Clone, Debug)]
enum Kind {
    Int,
    Ref { target: usize, exclusive: bool },
    Struct,
    Array(usize),
}

#[derive(Clone, Debug)]
struct Var {
    name: String,
    kind: Kind,
    mutable: bool,
    depth: usize,
    moved: bool,
    shared: usize,
    exclusive: bool,
}

impl Var {
    fn borrowed(&self) -> bool {
        self.shared > 0 || self.exclusive
    }
}

struct Builder<F: FnMut() -> u32> {
    pick: F,
    vars: Vec<Var>,
    depth: usize,
    counter: usize,
    out: String,
}

impl<F: FnMut() -> u32> Builder<F> {
    fn below(&mut self, n: usize) -> usize {
        ((self.pick)() as usize) % n.max(1)
    }

    fn chance(&mut self, percent: usize) -> bool {
        self.below(100) < percent
    }

    fn fresh(&mut self, prefix: &str) -> String {
        self.counter += 1;
        format!("{prefix}{}", self.counter)
    }

    fn line(&mut self, text: &str) {
        let indent = "    ".repeat(self.depth + 1);
        let _ = writeln!(self.out, "{indent}{text}");
    }

    fn choose(&mut self, ok: impl Fn(&Var) -> bool) -> Option<usize> {
        let idx: Vec<usize> = (0..self.vars.len()).filter(|i| ok(&self.vars[*i])).collect();
        if idx.is_empty() {
            return None;
        }
        let k = self.below(idx.len());
        Some(idx[k])
    }

    /// A bounded i32 term: a literal, `v % 97` or `*r % 97`.
    fn term(&mut self) -> String {
        match self.below(3) {
            0 => {
                if let Some(i) = self.choose(|v| matches!(v.kind, Kind::Int) && !v.moved) {
                    return format!("{} % 97", self.vars[i].name);
                }
            }
            1 => {
                if let Some(i) = self.choose(|v| matches!(v.kind, Kind::Ref { .. })) {
                    return format!("*{} % 97", self.vars[i].name);
                }
            }
            _ => {
                if let Some(i) = self.choose(|v| matches!(v.kind, Kind::Struct) && !v.moved) {
                    let f = if self.chance(50) { "x" } else { "y" };
                    return format!("{}.{f} % 97", self.vars[i].name);
                }
            }
        }
        format!("{}", self.below(50))
    }

    fn expr(&mut self) -> String {
        match self.below(4) {
            0 => self.term(),
            1 => format!("{} + {}", self.term(), self.term()),
            2 => format!("({}) - {}", self.term(), self.term()),
            _ => format!("{} * {}", self.below(9), self.term()),
        }
    }

    fn declare(&mut self, name: String, kind: Kind, mutable: bool) {
        self.vars.push(Var {
            name,
            kind,
            mutable,
            depth: self.depth,
            moved: false,
            shared: 0,
            exclusive: false,
        });
    }

    fn mut_kw(&mut self) -> (bool, &'static str) {
        if self.chance(60) {
            (true, "mut ")
        } else {
            (false, "")
        }
    }

    fn stmt(&mut self) {
        match self.below(15) {
            0 | 1 => {
                let (m, kw) = self.mut_kw();
                let name = self.fresh("v");
                let e = self.expr();
                let ty = if self.chance(50) { ": i32" } else { "" };
                self.line(&format!("let {kw}{name}{ty} = {e};"));
                self.declare(name, Kind::Int, m);
            }
            2 => {
                let Some(i) = self.choose(|v| matches!(v.kind, Kind::Int) && v.mutable && !v.borrowed())
                else {
                    return;
                };
                let op = ["=", "+=", "-="][self.below(3)];
                let e = self.expr();
                let name = self.vars[i].name.clone();
                self.line(&format!("{name} {op} {e};"));
            }
            3 => {
                let Some(i) = self.choose(|v| matches!(v.kind, Kind::Int) && !v.exclusive) else {
                    return;
                };
                let name = self.fresh("r");
                let target = self.vars[i].name.clone();
                self.line(&format!("let {name} = &{target};"));
                self.vars[i].shared += 1;
                self.declare(name, Kind::Ref { target: i, exclusive: false }, false);
            }
            4 => {
                let Some(i) = self.choose(|v| matches!(v.kind, Kind::Int) && v.mutable && !v.borrowed())
                else {
                    return;
                };
                let name = self.fresh("r");
                let target = self.vars[i].name.clone();
                self.line(&format!("let {name} = &mut {target};"));
                self.vars[i].exclusive = true;
                self.declare(name, Kind::Ref { target: i, exclusive: true }, false);
            }
            5 => {
                let Some(i) = self.choose(|v| matches!(v.kind, Kind::Ref { exclusive: true, .. })) else {
                    return;
                };
                let e = self.expr();
                let name = self.vars[i].name.clone();
                let op = if self.chance(70) { "=" } else { "+=" };
                self.line(&format!("*{name} {op} {e};"));
            }
            6 => {
                let e = self.expr();
                self.line(&format!("println!(\"{{}}\", {e});"));
            }
            7 => {
                let (m, kw) = self.mut_kw();
                let name = self.fresh("s");
                let (x, y) = (self.expr(), self.expr());
                self.line(&format!("let {kw}{name} = P {{ x: {x}, y: {y} }};"));
                self.declare(name, Kind::Struct, m);
            }
            8 => {
                let Some(i) = self.choose(|v| matches!(v.kind, Kind::Struct) && !v.moved) else {
                    return;
                };
                let (m, kw) = self.mut_kw();
                let name = self.fresh("s");
                let src = self.vars[i].name.clone();
                self.line(&format!("let {kw}{name} = {src};"));
                self.vars[i].moved = true;
                self.declare(name, Kind::Struct, m);
            }
            9 => {
                let Some(i) = self.choose(|v| matches!(v.kind, Kind::Struct) && v.mutable && !v.moved)
                else {
                    return;
                };
                let f = if self.chance(50) { "x" } else { "y" };
                let e = self.expr();
                let name = self.vars[i].name.clone();
                self.line(&format!("{name}.{f} = {e};"));
            }
            10 => {
                let (m, kw) = self.mut_kw();
                let name = self.fresh("a");
                let n = 1 + self.below(4);
                let init = if self.chance(50) {
                    format!("[{}; {n}]", self.expr())
                } else {
                    let items: Vec<String> = (0..n).map(|_| self.expr()).collect();
                    format!("[{}]", items.join(", "))
                };
                self.line(&format!("let {kw}{name}: [i32; {n}] = {init};"));
                self.declare(name, Kind::Array(n), m);
            }
            11 => {
                let Some(i) = self.choose(|v| matches!(v.kind, Kind::Array(_))) else {
                    return;
                };
                let Kind::Array(n) = self.vars[i].kind else { unreachable!() };
                let k = self.below(n);
                let name = self.vars[i].name.clone();
                if self.vars[i].mutable && self.chance(50) {
                    let e = self.expr();
                    self.line(&format!("{name}[{k}] = {e};"));
                } else {
                    let v = self.fresh("v");
                    self.line(&format!("let {v} = {name}[{k}];"));
                    self.declare(v, Kind::Int, false);
                }
            }
            12 if self.depth < 3 => {
                self.line("{");
                self.depth += 1;
            }
            13 if self.depth > 0 => self.close(),
            14 if self.chance(15) => self.fault(),
            _ => {
                let e = self.expr();
                let (m, kw) = self.mut_kw();
                let name = self.fresh("v");
                self.line(&format!("let {kw}{name} = {{ {e} }};"));
                self.declare(name, Kind::Int, m);
            }
        }
    }

    fn close(&mut self) {
        let depth = self.depth;
        let dropped: Vec<Var> = self.vars.iter().filter(|v| v.depth == depth).cloned().collect();
        self.vars.retain(|v| v.depth < depth);
        for v in dropped {
            if let Kind::Ref { target, exclusive } = v.kind {
                if let Some(t) = self.vars.get_mut(target) {
                    if exclusive {
                        t.exclusive = false;
                    } else {
                        t.shared = t.shared.saturating_sub(1);
                    }
                }
            }
        }
        self.depth -= 1;
        self.line("}");
    }

    /// A statement breaking one ownership or borrowing rule.
    fn fault(&mut self) {
        let text = match self.below(4) {
            0 => self
                .choose(|v| matches!(v.kind, Kind::Int) && !v.mutable)
                .map(|i| format!("{} = 1;", self.vars[i].name)),
            1 => self
                .choose(|v| matches!(v.kind, Kind::Struct) && v.moved)
                .map(|i| format!("println!(\"{{}}\", {}.x);", self.vars[i].name)),
            2 => self
                .choose(|v| matches!(v.kind, Kind::Ref { exclusive: false, .. }))
                .map(|i| format!("*{} = 0;", self.vars[i].name)),
            _ => self
                .choose(|v| matches!(v.kind, Kind::Int) && v.borrowed() && v.mutable)
                .map(|i| format!("{} = 0;", self.vars[i].name)),
        };
        if let Some(t) = text {
            self.line(&t);
        }
    }
}

/// Builds a program from a stream of choices, with `len` statements.
pub fn straight_line(len: usize, pick: impl FnMut() -> u32) -> String {
    let mut b = Builder {
        pick,
        vars: Vec::new(),
        depth: 0,
        counter: 0,
        out: String::from("struct P {\n    x: i32,\n    y: i32,\n}\nfn main() {\n"),
    };
    for _ in 0..len {
        b.stmt();
    }
    while b.depth > 0 {
        b.close();
    }
    b.out.push_str("}\n");
    b.out
}

/// [`straight_line`] driven by a seeded ChaCha generator.
pub fn from_seed(seed: u64) -> String {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let len = rng.random_range(5..40);
    straight_line(len, move || rng.random())
}

/// [`straight_line`] driven by a fixed choice list, cycling when exhausted.
pub fn from_choices(choices: &[u32]) -> String {
    let mut i = 0;
    let len = choices.len();
    straight_line(len, move || {
        let c = if len == 0 { 0 } else { choices[i % len] };
        i += 1;
        c
    })
}
