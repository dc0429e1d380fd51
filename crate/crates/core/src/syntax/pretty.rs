//! Source printer. Output re-parses to the same tree (modulo spans).

use std::fmt::Write;

use super::ast::*;

pub fn program(p: &Program) -> String {
    let mut pr = Printer::multiline();
    for (i, item) in p.items.iter().enumerate() {
        if i > 0 {
            pr.out.push('\n');
        }
        pr.item(item);
        pr.newline();
    }
    pr.out
}

pub fn expr(e: &Expr) -> String {
    let mut pr = Printer::compact();
    pr.expr(e);
    pr.out
}

/// One-line rendering of a statement, used by the `k` cell.
pub fn stmt(s: &Stmt) -> String {
    let mut pr = Printer::compact();
    pr.stmt(s);
    pr.out
}

pub fn block(b: &Block) -> String {
    let mut pr = Printer::compact();
    pr.block(b);
    pr.out
}

pub fn item(i: &Item) -> String {
    let mut pr = Printer::compact();
    pr.item(i);
    pr.out
}

struct Printer {
    out: String,
    indent: usize,
    compact: bool,
}

impl Printer {
    fn multiline() -> Self {
        Printer {
            out: String::new(),
            indent: 0,
            compact: false,
        }
    }

    fn compact() -> Self {
        Printer {
            out: String::new(),
            indent: 0,
            compact: true,
        }
    }

    fn newline(&mut self) {
        if self.compact {
            self.out.push(' ');
        } else {
            self.out.push('\n');
            for _ in 0..self.indent {
                self.out.push_str("    ");
            }
        }
    }

    fn typed_ids(&mut self, ids: &[TypedId]) {
        for (i, t) in ids.iter().enumerate() {
            if i > 0 {
                self.out.push_str(", ");
            }
            let _ = write!(self.out, "{}: {}", t.name, t.ty);
        }
    }

    fn item(&mut self, item: &Item) {
        match item {
            Item::Function(f) => {
                let _ = write!(self.out, "fn {}(", f.name);
                self.typed_ids(&f.params);
                self.out.push(')');
                if let Some(ret) = &f.ret {
                    let _ = write!(self.out, " -> {ret}");
                }
                self.out.push(' ');
                self.block(&f.body);
            }
            Item::Struct(s) => {
                let _ = write!(self.out, "struct {} {{ ", s.name);
                self.typed_ids(&s.fields);
                self.out.push_str(" }");
            }
            Item::ConstStatic(c) => {
                self.out.push_str(match c.kind {
                    StaticKind::Const => "const ",
                    StaticKind::Static => "static ",
                });
                if c.mutable {
                    self.out.push_str("mut ");
                }
                let _ = write!(self.out, "{}: {} = ", c.name, c.ty);
                self.expr(&c.init);
                self.out.push(';');
            }
        }
    }

    fn block(&mut self, b: &Block) {
        if b.stmts.is_empty() && b.tail.is_none() {
            self.out.push_str("{}");
            return;
        }
        self.out.push('{');
        self.indent += 1;
        for s in &b.stmts {
            self.newline();
            self.stmt(s);
        }
        if let Some(t) = &b.tail {
            self.newline();
            self.expr(t);
        }
        self.indent -= 1;
        self.newline();
        self.out.push('}');
    }

    fn stmt(&mut self, s: &Stmt) {
        match &s.kind {
            StmtKind::Let {
                mutable,
                name,
                ty,
                init,
            } => {
                self.out.push_str("let ");
                if *mutable {
                    self.out.push_str("mut ");
                }
                self.out.push_str(name);
                if let Some(ty) = ty {
                    let _ = write!(self.out, ": {ty}");
                }
                if let Some(init) = init {
                    self.out.push_str(" = ");
                    self.expr(init);
                }
                self.out.push(';');
            }
            StmtKind::Assign { target, op, value } => {
                match target {
                    AssignTarget::Var(n) => self.out.push_str(n),
                    AssignTarget::Index(n, i) => {
                        let _ = write!(self.out, "{n}[");
                        self.expr(i);
                        self.out.push(']');
                    }
                    AssignTarget::Deref(n) => {
                        let _ = write!(self.out, "*{n}");
                    }
                    AssignTarget::Field(v, f) => {
                        let _ = write!(self.out, "{v}.{f}");
                    }
                }
                let _ = write!(self.out, " {} ", op.symbol());
                self.expr(value);
                self.out.push(';');
            }
            StmtKind::Expr(e) => {
                self.expr(e);
                self.out.push(';');
            }
            StmtKind::Return(v) => {
                self.out.push_str("return");
                if let Some(v) = v {
                    self.out.push(' ');
                    self.expr(v);
                }
                self.out.push(';');
            }
            StmtKind::If {
                cond,
                then,
                otherwise,
            } => {
                self.out.push_str("if ");
                self.expr(cond);
                self.out.push(' ');
                self.block(then);
                if let Some(o) = otherwise {
                    self.out.push_str(" else ");
                    self.block(o);
                }
            }
            StmtKind::While { cond, body } => {
                self.out.push_str("while ");
                self.expr(cond);
                self.out.push(' ');
                self.block(body);
            }
            StmtKind::Loop { body } => {
                self.out.push_str("loop ");
                self.block(body);
            }
            StmtKind::For { var, lo, hi, body } => {
                let _ = write!(self.out, "for {var} in ");
                self.expr(lo);
                self.out.push_str("..");
                self.expr(hi);
                self.out.push(' ');
                self.block(body);
            }
            StmtKind::Block(b) => self.block(b),
            StmtKind::Item(i) => self.item(i),
        }
    }

    fn exprs(&mut self, es: &[std::sync::Arc<Expr>]) {
        for (i, e) in es.iter().enumerate() {
            if i > 0 {
                self.out.push_str(", ");
            }
            self.expr(e);
        }
    }

    fn expr(&mut self, e: &Expr) {
        match &e.kind {
            ExprKind::Int(v) => {
                let _ = write!(self.out, "{v}");
            }
            ExprKind::Float(v) => {
                let _ = write!(self.out, "{v:?}");
            }
            ExprKind::Bool(b) => {
                let _ = write!(self.out, "{b}");
            }
            ExprKind::Str(s) => {
                let _ = write!(self.out, "{s:?}");
            }
            ExprKind::Char(c) => {
                let _ = write!(self.out, "{c:?}");
            }
            ExprKind::Unit => self.out.push_str("()"),
            ExprKind::Ident(n) => self.out.push_str(n),
            ExprKind::Deref(n) => {
                let _ = write!(self.out, "*{n}");
            }
            ExprKind::Array(es) => {
                self.out.push('[');
                self.exprs(es);
                self.out.push(']');
            }
            ExprKind::Repeat { elem, count } => {
                self.out.push('[');
                self.expr(elem);
                self.out.push_str("; ");
                self.expr(count);
                self.out.push(']');
            }
            ExprKind::Vec(es) => {
                self.out.push_str("vec![");
                self.exprs(es);
                self.out.push(']');
            }
            ExprKind::Paren(inner) => {
                self.out.push('(');
                self.expr(inner);
                self.out.push(')');
            }
            ExprKind::Index { name, index } => {
                let _ = write!(self.out, "{name}[");
                self.expr(index);
                self.out.push(']');
            }
            ExprKind::Block(b) => self.block(b),
            ExprKind::Borrow { kind, operand } => {
                self.out.push_str(match kind {
                    RefKind::Shared => "&",
                    RefKind::Exclusive => "&mut ",
                });
                if matches!(operand.kind, ExprKind::Borrow { .. }) && *kind == RefKind::Shared {
                    self.out.push(' ');
                }
                self.expr(operand);
            }
            ExprKind::StructLit { name, fields } => {
                let _ = write!(self.out, "{name} {{ ");
                for (i, (f, v)) in fields.iter().enumerate() {
                    if i > 0 {
                        self.out.push_str(", ");
                    }
                    let _ = write!(self.out, "{f}: ");
                    self.expr(v);
                }
                self.out.push_str(" }");
            }
            ExprKind::Call { callee, args } => {
                match callee {
                    Callee::Named(n) => self.out.push_str(n),
                    Callee::Println => self.out.push_str("println!"),
                }
                self.out.push('(');
                self.exprs(args);
                self.out.push(')');
            }
            ExprKind::Unary { op, operand } => {
                self.out.push(match op {
                    UnOp::Neg => '-',
                    UnOp::Not => '!',
                });
                self.expr(operand);
            }
            ExprKind::Binary { op, lhs, rhs } => {
                self.expr(lhs);
                let _ = write!(self.out, " {} ", op.symbol());
                self.expr(rhs);
            }
            ExprKind::Field { var, field } => {
                let _ = write!(self.out, "{var}.{field}");
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use crate::syntax::parse_source;

    fn round_trip(src: &str) {
        let a = parse_source(src).unwrap();
        let printed = super::program(&a);
        let b = parse_source(&printed).unwrap_or_else(|e| panic!("{e}\n{printed}"));
        assert_eq!(a, b, "{printed}");
    }

    #[test]
    fn round_trips() {
        round_trip("fn foo(x:i32, y:i32) -> i32 { x+y }");
        round_trip("struct Point{ x: i32, y: i32, } fn main(){ let p = Point{x:1,y:2}; }");
        round_trip("const N: usize = 3; static mut G: i64 = -4; fn main() { let a = [1.5; 3]; }");
        round_trip(
            "fn main() { let mut x: [i32; 2] = [1, 2]; x[0] += 1; if x[0] > 1 { } else if true { } \
             for i in 0..2 { println!(\"{} {}\", i, 'c'); } loop { return; } }",
        );
        round_trip("fn main() { let a = &&x; let b = & &x; let c = &mut y; *c = -(1 - 2) * 3; }");
        round_trip("fn main() { let s = \"a\\n\\\"b\"; let t = { 1 }; { 2 } }");
    }

    #[test]
    fn compact_statement() {
        let p = parse_source("fn main() { while x > 0 {\n x = x - 1;\n } }").unwrap();
        let s = &p.function("main").unwrap().body.stmts[0];
        assert_eq!(super::stmt(s), "while x > 0 { x = x - 1; }");
    }
}
