//! Which grammar productions a program exercises.

use std::collections::BTreeSet;

use krust::syntax::*;

/// Labels for every production alternative of the surface grammar.
pub fn all_productions() -> BTreeSet<String> {
    let mut s: BTreeSet<String> = [
        "type i8", "type u8", "type i16", "type u16", "type i32", "type u32", "type i64",
        "type u64", "type f32", "type f64", "type isize", "type usize", "type char", "type &str",
        "type bool", "type Id", "type ()", "type [Type;Exp]", "type fn(Types)->Type",
        "TypedIds", "const", "static", "static mut", "let", "let mut", "let : Type", "let = Exp",
        "exp Int", "exp Bool", "exp Float", "exp String", "exp Char", "exp Id", "exp *Id",
        "exp [Exps]", "exp [Exp;Exp]", "exp vec![Exps]", "exp (Exp)", "exp Exp[Exp]",
        "exp {Exp}", "exp Ref Exp", "exp StructInstance", "exp Exp(Exp)", "exp -Exp",
        "exp !Exp", "exp Exp Op Exp", "assign Id", "assign Id[Exp]", "assign *Id",
        "assign Id.Id", "assignop =", "assignop +=", "assignop -=", "assignop *=",
        "assignop /=", "if", "if else", "while", "loop", "block {}", "block {Stmts}",
        "block {Stmts Exp}", "ref &", "ref &mut", "struct", "for", "fn -> Type", "fn",
        "stmt DeclExp", "stmt AssignStmt", "stmt Block", "stmt Exp;", "stmt return;",
        "stmt return Exp;", "stmt Loop;", "stmt Loop", "stmt Function", "stmt Struct",
        "stmt For",
    ]
    .into_iter()
    .map(String::from)
    .collect();
    for op in BinOp::ALL {
        s.insert(format!("op {}", op.symbol()));
    }
    s
}

#[derive(Default)]
struct Cover(BTreeSet<String>);

impl Cover {
    fn add(&mut self, label: impl Into<String>) {
        self.0.insert(label.into());
    }

    fn ty(&mut self, t: &TypeExpr) {
        match t {
            TypeExpr::Int(i) => self.add(format!("type {}", TypeExpr::Int(*i))),
            TypeExpr::Float(f) => self.add(format!("type {}", TypeExpr::Float(*f))),
            TypeExpr::Char => self.add("type char"),
            TypeExpr::Str => self.add("type &str"),
            TypeExpr::Bool => self.add("type bool"),
            TypeExpr::Unit => self.add("type ()"),
            TypeExpr::Named(_) => self.add("type Id"),
            TypeExpr::Array(e, _) => {
                self.add("type [Type;Exp]");
                self.ty(e);
            }
            TypeExpr::Fn(ps, r) => {
                self.add("type fn(Types)->Type");
                ps.iter().for_each(|p| self.ty(p));
                self.ty(r);
            }
            TypeExpr::Ref(_, t) => self.ty(t),
            TypeExpr::Infer => {}
        }
    }

    fn item(&mut self, item: &Item) {
        match item {
            Item::Function(f) => {
                self.add(if f.ret.is_some() { "fn -> Type" } else { "fn" });
                if !f.params.is_empty() {
                    self.add("TypedIds");
                }
                f.params.iter().for_each(|p| self.ty(&p.ty));
                if let Some(r) = &f.ret {
                    self.ty(r);
                }
                self.block(&f.body);
            }
            Item::Struct(s) => {
                self.add("struct");
                if !s.fields.is_empty() {
                    self.add("TypedIds");
                }
                s.fields.iter().for_each(|f| self.ty(&f.ty));
            }
            Item::ConstStatic(c) => {
                self.add(match (c.kind, c.mutable) {
                    (StaticKind::Const, _) => "const",
                    (StaticKind::Static, false) => "static",
                    (StaticKind::Static, true) => "static mut",
                });
                self.ty(&c.ty);
                self.expr(&c.init);
            }
        }
    }

    fn block(&mut self, b: &Block) {
        self.add(match (b.stmts.is_empty(), &b.tail) {
            (true, None) => "block {}",
            (_, Some(_)) => "block {Stmts Exp}",
            (false, None) => "block {Stmts}",
        });
        b.stmts.iter().for_each(|s| self.stmt(s));
        if let Some(t) = &b.tail {
            self.expr(t);
        }
    }

    fn stmt(&mut self, s: &Stmt) {
        match &s.kind {
            StmtKind::Let {
                mutable, ty, init, ..
            } => {
                self.add("stmt DeclExp");
                self.add(if *mutable { "let mut" } else { "let" });
                if let Some(t) = ty {
                    self.add("let : Type");
                    self.ty(t);
                }
                if let Some(e) = init {
                    self.add("let = Exp");
                    self.expr(e);
                }
            }
            StmtKind::Assign { target, op, value } => {
                self.add("stmt AssignStmt");
                self.add(format!("assignop {}", op.symbol()));
                self.add(match target {
                    AssignTarget::Var(_) => "assign Id",
                    AssignTarget::Index(..) => "assign Id[Exp]",
                    AssignTarget::Deref(_) => "assign *Id",
                    AssignTarget::Field(..) => "assign Id.Id",
                });
                if let AssignTarget::Index(_, i) = target {
                    self.expr(i);
                }
                self.expr(value);
            }
            StmtKind::Expr(e) => {
                self.add("stmt Exp;");
                self.expr(e);
            }
            StmtKind::Return(e) => match e {
                None => self.add("stmt return;"),
                Some(e) => {
                    self.add("stmt return Exp;");
                    self.expr(e);
                }
            },
            StmtKind::If {
                cond,
                then,
                otherwise,
            } => {
                self.add("stmt Loop");
                self.add(if otherwise.is_some() { "if else" } else { "if" });
                self.expr(cond);
                self.block(then);
                if let Some(b) = otherwise {
                    self.block(b);
                }
            }
            StmtKind::While { cond, body } => {
                self.add("stmt Loop");
                self.add("while");
                self.expr(cond);
                self.block(body);
            }
            StmtKind::Loop { body } => {
                self.add("stmt Loop");
                self.add("loop");
                self.block(body);
            }
            StmtKind::For { lo, hi, body, .. } => {
                self.add("stmt For");
                self.add("for");
                self.expr(lo);
                self.expr(hi);
                self.block(body);
            }
            StmtKind::Block(b) => {
                self.add("stmt Block");
                self.block(b);
            }
            StmtKind::Item(item) => {
                match item {
                    Item::Function(_) => self.add("stmt Function"),
                    Item::Struct(_) => self.add("stmt Struct"),
                    Item::ConstStatic(_) => self.add("stmt DeclExp"),
                }
                self.item(item);
            }
        }
    }

    fn expr(&mut self, e: &Expr) {
        match &e.kind {
            ExprKind::Int(_) => self.add("exp Int"),
            ExprKind::Float(_) => self.add("exp Float"),
            ExprKind::Bool(_) => self.add("exp Bool"),
            ExprKind::Str(_) => self.add("exp String"),
            ExprKind::Char(_) => self.add("exp Char"),
            ExprKind::Unit => {}
            ExprKind::Ident(_) => self.add("exp Id"),
            ExprKind::Deref(_) => self.add("exp *Id"),
            ExprKind::Array(items) => {
                self.add("exp [Exps]");
                items.iter().for_each(|i| self.expr(i));
            }
            ExprKind::Repeat { elem, count } => {
                self.add("exp [Exp;Exp]");
                self.expr(elem);
                self.expr(count);
            }
            ExprKind::Vec(items) => {
                self.add("exp vec![Exps]");
                items.iter().for_each(|i| self.expr(i));
            }
            ExprKind::Paren(inner) => {
                self.add("exp (Exp)");
                self.expr(inner);
            }
            ExprKind::Index { index, .. } => {
                self.add("exp Exp[Exp]");
                self.expr(index);
            }
            ExprKind::Block(b) => {
                self.add("exp {Exp}");
                self.block(b);
            }
            ExprKind::Borrow { kind, operand } => {
                self.add("exp Ref Exp");
                self.add(match kind {
                    RefKind::Shared => "ref &",
                    RefKind::Exclusive => "ref &mut",
                });
                self.expr(operand);
            }
            ExprKind::StructLit { fields, .. } => {
                self.add("exp StructInstance");
                fields.iter().for_each(|(_, e)| self.expr(e));
            }
            ExprKind::Call { callee, args } => {
                if let Callee::Named(_) = callee {
                    self.add("exp Exp(Exp)");
                }
                args.iter().for_each(|a| self.expr(a));
            }
            ExprKind::Unary { op, operand } => {
                self.add(match op {
                    UnOp::Neg => "exp -Exp",
                    UnOp::Not => "exp !Exp",
                });
                self.expr(operand);
            }
            ExprKind::Binary { op, lhs, rhs } => {
                self.add("exp Exp Op Exp");
                self.add(format!("op {}", op.symbol()));
                self.expr(lhs);
                self.expr(rhs);
            }
            ExprKind::Field { .. } => {}
        }
    }
}

/// `while`/`loop`/`if` bodies followed by `;`, found at the token level
/// since the AST drops the separator.
fn loop_semicolon(source: &str) -> bool {
    let Ok(tokens) = tokenize(source) else {
        return false;
    };
    for (i, t) in tokens.iter().enumerate() {
        if !matches!(t.kind, TokenKind::While | TokenKind::Loop | TokenKind::If) {
            continue;
        }
        // The body is the first brace at depth zero of the header; for `if`
        // skip over chained `else` blocks.
        let mut j = i + 1;
        let mut depth = 0usize;
        let mut closed_any = false;
        while j < tokens.len() {
            match tokens[j].kind {
                TokenKind::LBrace => depth += 1,
                TokenKind::RBrace => {
                    depth -= 1;
                    if depth == 0 {
                        closed_any = true;
                        if !matches!(tokens.get(j + 1).map(|t| &t.kind), Some(TokenKind::Else)) {
                            break;
                        }
                    }
                }
                _ => {}
            }
            j += 1;
        }
        if closed_any && matches!(tokens.get(j + 1).map(|t| &t.kind), Some(TokenKind::Semi)) {
            return true;
        }
    }
    false
}

pub fn productions_of(source: &str) -> BTreeSet<String> {
    let program = parse_source(source).expect("corpus program parses");
    let mut c = Cover::default();
    for item in &program.items {
        c.item(item);
    }
    if loop_semicolon(source) {
        c.add("stmt Loop;");
    }
    c.0
}
