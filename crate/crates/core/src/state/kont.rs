//! Continuation frames: the contents of the `k` cell.

use std::collections::VecDeque;
use std::fmt;
use std::sync::Arc;

use crate::syntax::{pretty, BinOp, Block, Expr, Item, IntTy, Span, Stmt, TypeExpr, TypedId, UnOp};

use super::value::{Location, Value};

/// What a [`Kont::Collect`] does once every operand has a value.
#[derive(Clone, Debug, PartialEq)]
pub enum Purpose {
    /// `done[0]` is the callee, the rest are arguments.
    Call,
    Println { format: Arc<str> },
    ArrayLit,
    /// `let [mut] var[: ty] = Name { .. };` with operands in source order.
    StructDecl {
        mutable: bool,
        var: String,
        ty: Option<TypeExpr>,
        struct_name: String,
        fields: Vec<String>,
    },
}

#[derive(Clone, Debug, PartialEq)]
pub enum Kont {
    Stmt(Arc<Stmt>),
    /// Block entry; `value` keeps the tail's value for the surrounding
    /// expression.
    Enter { block: Arc<Block>, value: bool },
    ExitScope { value: bool, span: Span },
    Eval(Arc<Expr>),
    Val(Value),
    Define { item: Item, global: bool },
    ConstBind { item: Item, global: bool },
    BinRhs { op: BinOp, rhs: Arc<Expr>, span: Span },
    BinApply { op: BinOp, lhs: Value, span: Span },
    ShortCircuit { op: BinOp, rhs: Arc<Expr>, span: Span },
    LogicRhs { op: BinOp, span: Span },
    Unary { op: UnOp, span: Span },
    Collect {
        purpose: Purpose,
        done: Vec<Value>,
        rest: VecDeque<Arc<Expr>>,
        span: Span,
    },
    RepeatCount { count: Arc<Expr>, span: Span },
    RepeatApply { elem: Value, span: Span },
    IndexRead { name: String, span: Span },
    LetBind {
        mutable: bool,
        name: String,
        ty: Option<TypeExpr>,
        span: Span,
    },
    AssignVar { name: String, span: Span },
    AssignIndex {
        name: String,
        index: Arc<Expr>,
        value: Option<Value>,
        span: Span,
    },
    AssignDeref { name: String, span: Span },
    AssignField { var: String, field: String, span: Span },
    IfBranch {
        then: Arc<Block>,
        otherwise: Option<Arc<Block>>,
        span: Span,
    },
    /// Condition of the `while` statement `stmt` has been heated.
    WhileTest { stmt: Arc<Stmt>, body: Arc<Block>, span: Span },
    ForLo {
        var: String,
        hi: Arc<Expr>,
        body: Arc<Block>,
        span: Span,
    },
    ForHi {
        var: String,
        lo: Value,
        body: Arc<Block>,
        span: Span,
    },
    ForIter {
        var: String,
        next: i128,
        hi: i128,
        ty: IntTy,
        body: Arc<Block>,
        span: Span,
    },
    Discard { span: Span },
    ReturnValue { span: Span },
    MkDecls {
        params: VecDeque<TypedId>,
        args: VecDeque<Value>,
        span: Span,
    },
    /// Field initialisation of a freshly declared struct variable.
    F2 {
        var: String,
        owner: Location,
        fields: VecDeque<(TypedId, Value)>,
        span: Span,
    },
    /// `X = Y;` on struct variables, with `Y`'s fields resolved up front.
    Move {
        dst: String,
        src: Location,
        src_fields: Vec<(String, Location)>,
        span: Span,
    },
    /// Remaining field copies `(field, dst field loc, src field loc)`.
    F3 {
        dst: Location,
        src: Location,
        fields: VecDeque<(String, Location, Location)>,
        init: bool,
        span: Span,
    },
    FieldRead { owner: Location, loc: Location, span: Span },
    FieldWrite {
        owner: Location,
        loc: Location,
        init: bool,
        span: Span,
    },
    F4 { owner: Location, span: Span },
    /// Direct call of a global function; `entry` marks the call of `main`.
    Invoke {
        name: String,
        args: Vec<Value>,
        entry: bool,
        span: Span,
    },
}

impl Kont {
    /// Source position of the construct this frame works on.
    pub fn span(&self) -> Option<Span> {
        Some(match self {
            Kont::Stmt(s) => s.span,
            Kont::Enter { block, .. } => block.span,
            Kont::Eval(e) => e.span,
            Kont::Val(_) => return None,
            Kont::Define { item, .. } | Kont::ConstBind { item, .. } => item.span(),
            Kont::ExitScope { span, .. }
            | Kont::BinRhs { span, .. }
            | Kont::BinApply { span, .. }
            | Kont::ShortCircuit { span, .. }
            | Kont::LogicRhs { span, .. }
            | Kont::Unary { span, .. }
            | Kont::Collect { span, .. }
            | Kont::RepeatCount { span, .. }
            | Kont::RepeatApply { span, .. }
            | Kont::IndexRead { span, .. }
            | Kont::LetBind { span, .. }
            | Kont::AssignVar { span, .. }
            | Kont::AssignIndex { span, .. }
            | Kont::AssignDeref { span, .. }
            | Kont::AssignField { span, .. }
            | Kont::IfBranch { span, .. }
            | Kont::WhileTest { span, .. }
            | Kont::ForLo { span, .. }
            | Kont::ForHi { span, .. }
            | Kont::ForIter { span, .. }
            | Kont::Discard { span }
            | Kont::ReturnValue { span }
            | Kont::MkDecls { span, .. }
            | Kont::F2 { span, .. }
            | Kont::Move { span, .. }
            | Kont::F3 { span, .. }
            | Kont::FieldRead { span, .. }
            | Kont::FieldWrite { span, .. }
            | Kont::F4 { span, .. }
            | Kont::Invoke { span, .. } => *span,
        })
    }
}

fn list<T: fmt::Display>(f: &mut fmt::Formatter<'_>, items: impl IntoIterator<Item = T>) -> fmt::Result {
    for (i, x) in items.into_iter().enumerate() {
        if i > 0 {
            f.write_str(", ")?;
        }
        write!(f, "{x}")?;
    }
    Ok(())
}

impl fmt::Display for Kont {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        const HOLE: &str = "□";
        match self {
            Kont::Stmt(s) => f.write_str(&pretty::stmt(s)),
            Kont::Enter { block, .. } => f.write_str(&pretty::block(block)),
            Kont::ExitScope { .. } => f.write_str("exitScope"),
            Kont::Eval(e) => f.write_str(&pretty::expr(e)),
            Kont::Val(v) => write!(f, "{v}"),
            Kont::Define { item, .. } => f.write_str(&pretty::item(item)),
            Kont::ConstBind { item, .. } => write!(f, "{} = {HOLE}", item.name()),
            Kont::BinRhs { op, rhs, .. } => {
                write!(f, "{HOLE} {} {}", op.symbol(), pretty::expr(rhs))
            }
            Kont::BinApply { op, lhs, .. } => write!(f, "{lhs} {} {HOLE}", op.symbol()),
            Kont::ShortCircuit { op, rhs, .. } => {
                write!(f, "{HOLE} {} {}", op.symbol(), pretty::expr(rhs))
            }
            Kont::LogicRhs { op, .. } => write!(f, "_ {} {HOLE}", op.symbol()),
            Kont::Unary { op, .. } => match op {
                UnOp::Neg => write!(f, "-{HOLE}"),
                UnOp::Not => write!(f, "!{HOLE}"),
            },
            Kont::Collect {
                purpose,
                done,
                rest,
                ..
            } => {
                let (open, close, skip) = match purpose {
                    Purpose::Call => match done.first() {
                        Some(Value::Closure(c)) => {
                            f.write_str(&c.name)?;
                            ("(", ")", 1)
                        }
                        _ => ("call(", ")", 0),
                    },
                    Purpose::Println { .. } => ("println!(", ")", 0),
                    Purpose::ArrayLit => ("[", "]", 0),
                    Purpose::StructDecl { struct_name, .. } => {
                        write!(f, "{struct_name} ")?;
                        ("{", "}", 0)
                    }
                };
                f.write_str(open)?;
                let mut parts: Vec<String> = done.iter().skip(skip).map(|v| v.to_string()).collect();
                parts.push(HOLE.to_string());
                parts.extend(rest.iter().map(|e| pretty::expr(e)));
                list(f, parts)?;
                f.write_str(close)
            }
            Kont::RepeatCount { count, .. } => write!(f, "[{HOLE}; {}]", pretty::expr(count)),
            Kont::RepeatApply { elem, .. } => write!(f, "[{elem}; {HOLE}]"),
            Kont::IndexRead { name, .. } => write!(f, "{name}[{HOLE}]"),
            Kont::LetBind {
                mutable, name, ty, ..
            } => {
                f.write_str("let ")?;
                if *mutable {
                    f.write_str("mut ")?;
                }
                f.write_str(name)?;
                if let Some(ty) = ty {
                    write!(f, ": {ty}")?;
                }
                write!(f, " = {HOLE};")
            }
            Kont::AssignVar { name, .. } => write!(f, "{name} = {HOLE};"),
            Kont::AssignIndex {
                name, index, value, ..
            } => match value {
                None => write!(f, "{name}[{}] = {HOLE};", pretty::expr(index)),
                Some(v) => write!(f, "{name}[{HOLE}] = {v};"),
            },
            Kont::AssignDeref { name, .. } => write!(f, "*{name} = {HOLE};"),
            Kont::AssignField { var, field, .. } => write!(f, "{var}.{field} = {HOLE};"),
            Kont::IfBranch {
                then, otherwise, ..
            } => {
                write!(f, "if {HOLE} {}", pretty::block(then))?;
                if let Some(o) = otherwise {
                    write!(f, " else {}", pretty::block(o))?;
                }
                Ok(())
            }
            Kont::WhileTest { body, .. } => write!(f, "while {HOLE} {}", pretty::block(body)),
            Kont::ForLo { var, hi, .. } => write!(f, "for {var} in {HOLE}..{}", pretty::expr(hi)),
            Kont::ForHi { var, lo, .. } => write!(f, "for {var} in {lo}..{HOLE}"),
            Kont::ForIter { var, next, hi, .. } => write!(f, "for {var} in {next}..{hi}"),
            Kont::Discard { .. } => write!(f, "{HOLE};"),
            Kont::ReturnValue { .. } => write!(f, "return {HOLE};"),
            Kont::MkDecls { params, args, .. } => {
                f.write_str("mkDecls((")?;
                list(f, params.iter().map(|p| format!("{}: {}", p.name, p.ty)))?;
                f.write_str("), (")?;
                list(f, args.iter())?;
                f.write_str("))")
            }
            Kont::F2 { var, fields, .. } => {
                f.write_str("F2(F1(")?;
                list(f, fields.iter().map(|(t, _)| format!("{}: {}", t.name, t.ty)))?;
                write!(f, "), {var}, (")?;
                list(f, fields.iter().map(|(t, v)| format!("{}: {v}", t.name)))?;
                f.write_str("))")
            }
            Kont::Move { dst, src, .. } => write!(f, "{dst} = @{src};"),
            Kont::F3 {
                dst, src, fields, ..
            } => {
                write!(f, "F3(@{dst}, @{src}, (")?;
                list(f, fields.iter().map(|(n, _, _)| n))?;
                f.write_str("))")
            }
            Kont::FieldRead { loc, .. } => write!(f, "@{loc}"),
            Kont::FieldWrite { loc, .. } => write!(f, "@{loc} = {HOLE};"),
            Kont::F4 { owner, .. } => write!(f, "F4(@{owner})"),
            Kont::Invoke { name, args, .. } => {
                write!(f, "{name}(")?;
                list(f, args.iter())?;
                f.write_str(")")
            }
        }
    }
}
