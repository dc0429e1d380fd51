//! The step function: one rewrite at the head of the `k` cell.

use std::collections::VecDeque;
use std::sync::Arc;

use crate::state::{
    BorrowFlag, Category, Closure, Configuration, Diagnostic, Frame, Kont, Location, Purpose,
    ScopeRecord, StructDesc, Value,
};
use crate::syntax::{
    AssignOp, AssignTarget, BinOp, Block, Callee, Expr, ExprKind, FnDecl, IntTy, Item, RefKind,
    Span, StaticKind, Stmt, StmtKind, TypeExpr,
};

use super::ops::{coerce, eval_binop, eval_unary, format_args};
use super::rules::RuleTag;

/// What a successful step did. `subject` is the struct owner touched by
/// field rules, or the location written by assignments and declarations.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Applied {
    pub rule: RuleTag,
    pub subject: Option<Location>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum StepResult {
    Continue(Applied),
    Done,
    /// No rule applies. The configuration is left as it was before the step.
    Failed(Diagnostic),
}

type Step = Result<Applied, Diagnostic>;

fn rule(rule: RuleTag) -> Step {
    Ok(Applied {
        rule,
        subject: None,
    })
}

fn rule_at(rule: RuleTag, subject: Location) -> Step {
    Ok(Applied {
        rule,
        subject: Some(subject),
    })
}

fn err<T>(category: Category, message: impl Into<String>) -> Result<T, Diagnostic> {
    Err(Diagnostic::new(category, message))
}

const MAX_ARRAY_LEN: i128 = 1 << 20;

/// Applies exactly one rule. On failure the continuation is restored, and
/// no other cell has been touched.
pub fn step(cfg: &mut Configuration) -> StepResult {
    let Some(head) = cfg.k.pop() else {
        if cfg.fstack.is_empty() {
            return StepResult::Done;
        }
        return StepResult::Failed(Diagnostic::new(
            Category::Stuck,
            "continuation exhausted inside a function call",
        ));
    };
    let outcome = if let Kont::Val(v) = head {
        let Some(ctx) = cfg.k.pop() else {
            cfg.k.push(Kont::Val(v));
            return StepResult::Failed(Diagnostic::new(
                Category::Stuck,
                "value with nothing to consume it",
            ));
        };
        let span = ctx.span();
        let saved = (ctx.clone(), v.clone());
        consume(cfg, v, ctx).map_err(|d| {
            cfg.k.push(saved.0);
            cfg.k.push(Kont::Val(saved.1));
            (d, span)
        })
    } else {
        let span = head.span();
        let saved = head.clone();
        exec(cfg, head).map_err(|d| {
            cfg.k.push(saved);
            (d, span)
        })
    };
    match outcome {
        Ok(applied) => StepResult::Continue(applied),
        Err((d, Some(span))) => StepResult::Failed(d.at(span)),
        Err((d, None)) => StepResult::Failed(d),
    }
}

fn exec(cfg: &mut Configuration, frame: Kont) -> Step {
    match frame {
        Kont::Stmt(s) => exec_stmt(cfg, &s),
        Kont::Enter { block, value } => {
            enter_block(cfg, &block, value);
            rule(RuleTag::BlockEntry)
        }
        Kont::ExitScope { value: false, .. } => {
            exit_scope(cfg)?;
            rule(RuleTag::BlockExit)
        }
        Kont::Eval(e) => eval(cfg, &e),
        Kont::Define { item, global } => define(cfg, item, global),
        Kont::ForIter {
            var,
            next,
            hi,
            ty,
            body,
            span,
        } => {
            if next < hi {
                cfg.scopes.push(ScopeRecord {
                    saved_env: cfg.env.clone(),
                    ..ScopeRecord::default()
                });
                let l = cfg.allocate(TypeExpr::Int(ty), false);
                cfg.store.insert(l, Value::int(next, ty));
                cfg.bind_local(&var, l);
                cfg.k.push(Kont::ForIter {
                    var,
                    next: next + 1,
                    hi,
                    ty,
                    body: body.clone(),
                    span,
                });
                cfg.k.push(Kont::ExitScope { value: false, span });
                enter_block(cfg, &body, false);
            }
            rule(RuleTag::ForLoop)
        }
        Kont::MkDecls {
            mut params,
            mut args,
            span,
        } => {
            if let (Some(p), Some(a)) = (params.pop_front(), args.pop_front()) {
                cfg.k.push(Kont::MkDecls { params, args, span });
                cfg.k.push(Kont::LetBind {
                    mutable: false,
                    name: p.name,
                    ty: Some(p.ty),
                    span,
                });
                cfg.k.push(Kont::Val(a));
            }
            rule(RuleTag::MkDeclsHelperFunction)
        }
        Kont::F2 {
            var,
            owner,
            mut fields,
            span,
        } => {
            if let Some((tid, value)) = fields.pop_front() {
                let mutable = cfg.is_mutable(owner);
                let l = cfg.allocate(tid.ty, mutable);
                cfg.store.insert(l, value);
                cfg.env.insert(format!("{var}.{}", tid.name), l);
                cfg.k.push(Kont::F2 {
                    var,
                    owner,
                    fields,
                    span,
                });
            }
            rule_at(RuleTag::F1F2HelperFunction, owner)
        }
        Kont::Move {
            dst,
            src,
            src_fields,
            span,
        } => ownership_move(cfg, &dst, src, src_fields, span),
        Kont::F3 {
            dst,
            src,
            mut fields,
            init,
            span,
        } => {
            if let Some((_, dloc, sloc)) = fields.pop_front() {
                cfg.k.push(Kont::F3 {
                    dst,
                    src,
                    fields,
                    init,
                    span,
                });
                cfg.k.push(Kont::FieldWrite {
                    owner: dst,
                    loc: dloc,
                    init,
                    span,
                });
                cfg.k.push(Kont::FieldRead {
                    owner: src,
                    loc: sloc,
                    span,
                });
            }
            rule(RuleTag::F3HelperFunction)
        }
        Kont::FieldRead { owner, loc, .. } => {
            if cfg.is_moved(owner) {
                return err(Category::UseAfterMove, "use of moved value");
            }
            let v = cfg.value_at(loc).clone();
            if v.is_undefined() {
                return err(Category::UninitializedRead, "used a field that isn't initialized");
            }
            cfg.k.push(Kont::Val(v));
            rule_at(RuleTag::EvaluationOfStructField, owner)
        }
        Kont::F4 { owner, .. } => {
            if cfg.is_moved(owner) {
                return err(Category::UseAfterMove, "use of moved value");
            }
            cfg.moved.insert(owner, true);
            rule_at(RuleTag::F4HelperFunction, owner)
        }
        Kont::Invoke {
            name,
            args,
            entry,
            span,
        } => {
            let closure = match cfg.genv.get(&name).map(|l| cfg.value_at(*l)) {
                Some(Value::Closure(c)) => c.clone(),
                _ if entry => return err(Category::MissingMain, "`main` function not found"),
                _ => {
                    return err(
                        Category::UnboundIdentifier,
                        format!("cannot find function `{name}`"),
                    )
                }
            };
            if entry {
                if !closure.params.is_empty() {
                    return err(Category::MissingMain, "`main` function takes no arguments");
                }
                if closure.ret != TypeExpr::Unit {
                    return err(
                        Category::TypeMismatch,
                        format!("`main` has invalid return type `{}`", closure.ret),
                    );
                }
            }
            let mut done = Vec::with_capacity(args.len() + 1);
            done.push(Value::Closure(closure));
            done.extend(args);
            function_call(cfg, done, span)
        }
        Kont::Collect {
            purpose,
            done,
            rest,
            span,
        } => collect(cfg, purpose, done, rest, span),
        other => err(Category::Stuck, format!("no rule applies to `{other}`")),
    }
}

fn consume(cfg: &mut Configuration, v: Value, ctx: Kont) -> Step {
    match ctx {
        Kont::ExitScope { value: true, .. } => {
            if let Value::Ref { target, .. } = &v {
                let local = cfg
                    .scopes
                    .last()
                    .is_some_and(|s| s.allocations.contains(target));
                if local {
                    return err(
                        Category::LifetimeError,
                        "borrowed value does not live long enough",
                    );
                }
            }
            exit_scope(cfg)?;
            cfg.k.push(Kont::Val(v));
            rule(RuleTag::BlockExit)
        }
        Kont::Discard { .. } => rule(RuleTag::ExpressionStatement),
        Kont::BinRhs { op, rhs, span } => {
            cfg.k.push(Kont::BinApply { op, lhs: v, span });
            cfg.k.push(Kont::Eval(rhs));
            rule(RuleTag::BinaryOperation)
        }
        Kont::BinApply { op, lhs, .. } => {
            let result = eval_binop(op, lhs, v)?;
            cfg.k.push(Kont::Val(result));
            rule(RuleTag::BinaryOperation)
        }
        Kont::ShortCircuit { op, rhs, span } => {
            let Value::Bool(b) = v else {
                return mismatch_bool(&v);
            };
            if b == (op == BinOp::Or) {
                cfg.k.push(Kont::Val(Value::Bool(b)));
            } else {
                cfg.k.push(Kont::LogicRhs { op, span });
                cfg.k.push(Kont::Eval(rhs));
            }
            rule(RuleTag::ShortCircuit)
        }
        Kont::LogicRhs { .. } => {
            if !matches!(v, Value::Bool(_)) {
                return mismatch_bool(&v);
            }
            cfg.k.push(Kont::Val(v));
            rule(RuleTag::ShortCircuit)
        }
        Kont::Unary { op, .. } => {
            let result = eval_unary(op, v)?;
            cfg.k.push(Kont::Val(result));
            rule(RuleTag::UnaryOperation)
        }
        Kont::Collect {
            purpose,
            mut done,
            rest,
            span,
        } => {
            done.push(v);
            collect(cfg, purpose, done, rest, span)
        }
        Kont::RepeatCount { count, span } => {
            cfg.k.push(Kont::RepeatApply { elem: v, span });
            cfg.k.push(Kont::Eval(count));
            rule(RuleTag::ArrayRepeat)
        }
        Kont::RepeatApply { elem, .. } => {
            let n = index_value(&v)?;
            if n < 0 {
                return err(Category::Overflow, "negative array length");
            }
            if n > MAX_ARRAY_LEN {
                return err(Category::Stuck, format!("array length {n} exceeds the supported maximum"));
            }
            check_element(&elem)?;
            cfg.k.push(Kont::Val(Value::Array(vec![elem; n as usize])));
            rule(RuleTag::ArrayRepeat)
        }
        Kont::IndexRead { name, .. } => array_read(cfg, &name, &v),
        Kont::LetBind {
            mutable, name, ty, ..
        } => declare(cfg, mutable, &name, ty, v),
        Kont::AssignVar { name, .. } => assign_var(cfg, &name, v),
        Kont::AssignIndex {
            name,
            index,
            value: None,
            span,
        } => {
            cfg.k.push(Kont::AssignIndex {
                name,
                index: index.clone(),
                value: Some(v),
                span,
            });
            cfg.k.push(Kont::Eval(index));
            rule(RuleTag::IndexOperand)
        }
        Kont::AssignIndex {
            name,
            value: Some(value),
            ..
        } => array_write(cfg, &name, &v, value),
        Kont::AssignDeref { name, .. } => deref_write(cfg, &name, v),
        Kont::AssignField { var, field, .. } => field_write(cfg, &var, &field, v),
        Kont::IfBranch {
            then, otherwise, ..
        } => {
            let Value::Bool(b) = v else {
                return mismatch_bool(&v);
            };
            if b {
                enter_block(cfg, &then, false);
            } else if let Some(o) = otherwise {
                enter_block(cfg, &o, false);
            }
            rule(RuleTag::IfBranch)
        }
        Kont::WhileTest { stmt, body, .. } => {
            let Value::Bool(b) = v else {
                return mismatch_bool(&v);
            };
            if b {
                cfg.k.push(Kont::Stmt(stmt));
                enter_block(cfg, &body, false);
            }
            rule(RuleTag::IfBranch)
        }
        Kont::ForLo { var, hi, body, span } => {
            cfg.k.push(Kont::ForHi {
                var,
                lo: v,
                body,
                span,
            });
            cfg.k.push(Kont::Eval(hi));
            rule(RuleTag::ForLoop)
        }
        Kont::ForHi { var, lo, body, span } => {
            let (lo, hi) = match (&lo, &v) {
                (Value::Int { .. }, Value::Int { .. }) => range_bounds(lo, v)?,
                _ => {
                    return err(
                        Category::TypeMismatch,
                        "range bounds must be integers of the same type",
                    )
                }
            };
            cfg.k.push(Kont::ForIter {
                var,
                next: lo.0,
                hi: hi.0,
                ty: lo.1,
                body,
                span,
            });
            rule(RuleTag::ForLoop)
        }
        Kont::ReturnValue { .. } => return_from(cfg, v),
        Kont::ConstBind { item, global } => const_bind(cfg, item, global, v),
        Kont::FieldWrite {
            owner, loc, init, ..
        } => {
            if cfg.is_moved(owner) {
                return err(Category::UseAfterMove, "assignment to a moved value");
            }
            if !init && !cfg.is_mutable(owner) {
                return err(
                    Category::AssignToImmutable,
                    format!("cannot assign to a field of immutable `{}`", name_of(cfg, owner)),
                );
            }
            let ty = cfg.type_env.get(&loc).cloned().unwrap_or(TypeExpr::Infer);
            let v = coerce(v, &ty)?;
            cfg.store.insert(loc, v);
            rule_at(RuleTag::UpdatingOfStructField, owner)
        }
        other => err(
            Category::Stuck,
            format!("no rule consumes the value {v} in `{other}`"),
        ),
    }
}

fn mismatch_bool(v: &Value) -> Step {
    err(
        Category::TypeMismatch,
        format!(
            "mismatched types: expected `bool`, found `{}`",
            v.get_type().map(|t| t.to_string()).unwrap_or_default()
        ),
    )
}

/// `(value, type)` pairs for the two ends of a `for` range, unified.
fn range_bounds(lo: Value, hi: Value) -> Result<((i128, IntTy), (i128, IntTy)), Diagnostic> {
    let ty = match (&lo, &hi) {
        (Value::Int { flex: false, ty, .. }, _) | (_, Value::Int { flex: false, ty, .. }) => {
            TypeExpr::Int(*ty)
        }
        _ => TypeExpr::Int(IntTy::I32),
    };
    let (Value::Int { value: a, ty: t, .. }, Value::Int { value: b, .. }) =
        (coerce(lo, &ty)?, coerce(hi, &ty)?)
    else {
        unreachable!("coerced to an integer type");
    };
    Ok(((a, t), (b, t)))
}

fn collect(
    cfg: &mut Configuration,
    purpose: Purpose,
    done: Vec<Value>,
    mut rest: VecDeque<Arc<Expr>>,
    span: Span,
) -> Step {
    match rest.pop_front() {
        Some(next) => {
            let tag = match purpose {
                Purpose::Call | Purpose::Println { .. } => RuleTag::CallArguments,
                Purpose::ArrayLit => RuleTag::ArrayLiteral,
                Purpose::StructDecl { .. } => RuleTag::StructLiteral,
            };
            cfg.k.push(Kont::Collect {
                purpose,
                done,
                rest,
                span,
            });
            cfg.k.push(Kont::Eval(next));
            rule(tag)
        }
        None => match purpose {
            Purpose::Call => function_call(cfg, done, span),
            Purpose::Println { format } => {
                let args = done
                    .into_iter()
                    .map(|v| match v {
                        Value::Ref { target, .. } => read_location(cfg, target),
                        v => Ok(v),
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                let line = format_args(&format, &args)?;
                cfg.out.push_str(&line);
                cfg.out.push('\n');
                cfg.k.push(Kont::Val(Value::Unit));
                rule(RuleTag::Println)
            }
            Purpose::ArrayLit => {
                let array = array_value(done)?;
                cfg.k.push(Kont::Val(array));
                rule(RuleTag::ArrayLiteral)
            }
            Purpose::StructDecl {
                mutable,
                var,
                ty: _,
                struct_name,
                fields,
            } => {
                let desc = lookup_struct(cfg, &struct_name)?;
                let mut inits = VecDeque::new();
                for tid in &desc.fields {
                    let i = fields
                        .iter()
                        .position(|f| *f == tid.name)
                        .ok_or_else(|| missing_field(&struct_name, &tid.name))?;
                    inits.push_back((tid.clone(), coerce(done[i].clone(), &tid.ty)?));
                }
                let l = cfg.allocate(TypeExpr::Named(struct_name.clone()), mutable);
                cfg.store.insert(l, Value::StructInst(Arc::from(struct_name.as_str())));
                cfg.bind_local(&var, l);
                cfg.k.push(Kont::F2 {
                    var,
                    owner: l,
                    fields: inits,
                    span,
                });
                rule_at(RuleTag::DeclarationOfStructInstance, l)
            }
        },
    }
}

fn missing_field(name: &str, field: &str) -> Diagnostic {
    Diagnostic::new(
        Category::TypeMismatch,
        format!("missing field `{field}` in initializer of `{name}`"),
    )
}

fn check_element(v: &Value) -> Result<(), Diagnostic> {
    match v {
        Value::Int { .. }
        | Value::Float { .. }
        | Value::Bool(_)
        | Value::Char(_)
        | Value::Str(_)
        | Value::Unit => Ok(()),
        Value::Undefined => err(Category::UninitializedRead, "use of an uninitialized value"),
        _ => err(
            Category::Stuck,
            "array elements must be scalar values (nested arrays, references, structs and functions are not supported)",
        ),
    }
}

fn array_value(items: Vec<Value>) -> Result<Value, Diagnostic> {
    for v in &items {
        check_element(v)?;
    }
    let fixed = items.iter().find_map(|v| match v {
        Value::Int { flex: true, .. } | Value::Float { flex: true, .. } => None,
        v => v.get_type(),
    });
    let items = match fixed {
        Some(t) => items
            .into_iter()
            .map(|v| coerce(v, &t))
            .collect::<Result<Vec<_>, _>>()?,
        None => {
            let ints = items.iter().all(|v| matches!(v, Value::Int { .. }));
            let floats = items.iter().all(|v| matches!(v, Value::Float { .. }));
            if !ints && !floats {
                return err(Category::TypeMismatch, "mismatched types in array literal");
            }
            items
        }
    };
    Ok(Value::Array(items))
}

/// Integer used as an index or length: a literal or a `usize`.
fn index_value(v: &Value) -> Result<i128, Diagnostic> {
    match v {
        Value::Int { value, flex: true, .. }
        | Value::Int {
            value,
            ty: IntTy::Usize,
            ..
        } => Ok(*value),
        other => err(
            Category::TypeMismatch,
            format!(
                "the type `[_]` cannot be indexed by `{}`",
                other.get_type().map(|t| t.to_string()).unwrap_or_default()
            ),
        ),
    }
}

/// Some name currently bound to `loc`, for messages.
fn name_of(cfg: &Configuration, loc: Location) -> String {
    cfg.env
        .iter()
        .chain(cfg.genv.iter())
        .find(|(_, l)| **l == loc)
        .map(|(n, _)| n.clone())
        .unwrap_or_else(|| format!("@{loc}"))
}

fn resolve(cfg: &Configuration, name: &str) -> Result<Location, Diagnostic> {
    cfg.resolve(name).ok_or_else(|| {
        Diagnostic::new(
            Category::UnboundIdentifier,
            format!("cannot find value `{name}` in this scope"),
        )
    })
}

fn lookup_struct(cfg: &Configuration, name: &str) -> Result<Arc<StructDesc>, Diagnostic> {
    match cfg.resolve(name).map(|l| cfg.value_at(l)) {
        Some(Value::StructDesc(d)) => Ok(d.clone()),
        _ => err(
            Category::UnboundIdentifier,
            format!("cannot find struct `{name}` in this scope"),
        ),
    }
}

/// The struct type of a variable, if it is a struct instance.
fn struct_var(cfg: &Configuration, name: &str) -> Option<(Location, Arc<StructDesc>)> {
    let l = cfg.resolve(name)?;
    if cfg.is_code(l) {
        return None;
    }
    let TypeExpr::Named(z) = cfg.type_env.get(&l)? else {
        return None;
    };
    Some((l, lookup_struct(cfg, z).ok()?))
}

fn field_locations(
    cfg: &Configuration,
    var: &str,
    desc: &StructDesc,
) -> Result<Vec<(String, Location)>, Diagnostic> {
    desc.fields
        .iter()
        .map(|f| {
            cfg.env
                .get(&format!("{var}.{}", f.name))
                .map(|l| (f.name.clone(), *l))
                .ok_or_else(|| {
                    Diagnostic::new(
                        Category::Stuck,
                        format!("field `{}` of `{var}` has no location", f.name),
                    )
                })
        })
        .collect()
}

/// Reads the value stored at `loc`, gathering arrays element-wise.
fn read_location(cfg: &Configuration, loc: Location) -> Result<Value, Diagnostic> {
    if let Some(TypeExpr::Array(_, n)) = cfg.type_env.get(&loc) {
        let mut items = Vec::with_capacity(*n as usize);
        for i in 0..*n {
            let v = cfg.value_at(Location(loc.0 + i));
            if v.is_undefined() {
                return err(Category::UninitializedRead, "used an array that isn't initialized");
            }
            items.push(v.clone());
        }
        return Ok(Value::Array(items));
    }
    match cfg.value_at(loc) {
        Value::Undefined => err(
            Category::UninitializedRead,
            format!("used binding `{}` isn't initialized", name_of(cfg, loc)),
        ),
        Value::StructInst(z) => err(
            Category::Stuck,
            format!("a value of struct type `{z}` can only be moved by `let` or assignment"),
        ),
        Value::StructDesc(d) => err(
            Category::Stuck,
            format!("struct name `{}` used as a value", d.name),
        ),
        v => Ok(v.clone()),
    }
}

fn read_var(cfg: &Configuration, name: &str) -> Result<Value, Diagnostic> {
    let l = resolve(cfg, name)?;
    if cfg.is_moved(l) {
        return err(Category::UseAfterMove, format!("use of moved value: `{name}`"));
    }
    read_location(cfg, l)
}

fn enter_block(cfg: &mut Configuration, block: &Arc<Block>, value: bool) {
    cfg.scopes.push(ScopeRecord {
        saved_env: cfg.env.clone(),
        ..ScopeRecord::default()
    });
    cfg.k.push(Kont::ExitScope {
        value,
        span: block.span,
    });
    match &block.tail {
        Some(tail) if value => cfg.k.push(Kont::Eval(tail.clone())),
        Some(tail) => {
            cfg.k.push(Kont::Discard { span: tail.span });
            cfg.k.push(Kont::Eval(tail.clone()));
        }
        None if value => cfg.k.push(Kont::Val(Value::Unit)),
        None => {}
    }
    for s in block.stmts.iter().rev() {
        if !matches!(s.kind, StmtKind::Item(_)) {
            cfg.k.push(Kont::Stmt(s.clone()));
        }
    }
    for s in block.stmts.iter().rev() {
        if let StmtKind::Item(item) = &s.kind {
            cfg.k.push(Kont::Define {
                item: item.clone(),
                global: false,
            });
        }
    }
}

fn exit_scope(cfg: &mut Configuration) -> Result<(), Diagnostic> {
    let Some(scope) = cfg.scopes.pop() else {
        return err(Category::Stuck, "block exit without a matching entry");
    };
    for loc in &scope.allocations {
        cfg.kill_reference(*loc);
    }
    cfg.env = scope.saved_env;
    Ok(())
}

fn eval(cfg: &mut Configuration, e: &Arc<Expr>) -> Step {
    let push = |cfg: &mut Configuration, v: Value| cfg.k.push(Kont::Val(v));
    match &e.kind {
        ExprKind::Int(n) => {
            let v = i128::try_from(*n)
                .ok()
                .and_then(Value::int_literal)
                .ok_or_else(|| Diagnostic::new(Category::Overflow, "integer literal is too large"))?;
            push(cfg, v);
            rule(RuleTag::Literal)
        }
        ExprKind::Float(x) => {
            push(cfg, Value::float_literal(*x));
            rule(RuleTag::Literal)
        }
        ExprKind::Bool(b) => {
            push(cfg, Value::Bool(*b));
            rule(RuleTag::Literal)
        }
        ExprKind::Str(s) => {
            push(cfg, Value::Str(Arc::from(s.as_str())));
            rule(RuleTag::Literal)
        }
        ExprKind::Char(c) => {
            push(cfg, Value::Char(*c));
            rule(RuleTag::Literal)
        }
        ExprKind::Unit => {
            push(cfg, Value::Unit);
            rule(RuleTag::Literal)
        }
        ExprKind::Ident(x) => {
            let v = read_var(cfg, x)?;
            push(cfg, v);
            rule(RuleTag::LookupOfVariable)
        }
        ExprKind::Deref(x) => {
            let l1 = resolve(cfg, x)?;
            if cfg.is_moved(l1) {
                return err(Category::UseAfterMove, format!("use of moved value: `{x}`"));
            }
            let Some(l2) = cfg.ref_cell.get(&l1).copied() else {
                return err(Category::NotAReference, not_a_reference(cfg, x, l1));
            };
            let v = read_location(cfg, l2)?;
            push(cfg, v);
            rule_at(RuleTag::Dereference, l1)
        }
        ExprKind::Array(items) | ExprKind::Vec(items) => {
            collect(cfg, Purpose::ArrayLit, Vec::new(), items.iter().cloned().collect(), e.span)
        }
        ExprKind::Repeat { elem, count } => {
            cfg.k.push(Kont::RepeatCount {
                count: count.clone(),
                span: e.span,
            });
            cfg.k.push(Kont::Eval(elem.clone()));
            rule(RuleTag::ArrayRepeat)
        }
        ExprKind::Paren(inner) => {
            cfg.k.push(Kont::Eval(inner.clone()));
            rule(RuleTag::Parenthesis)
        }
        ExprKind::Index { name, index } => {
            cfg.k.push(Kont::IndexRead {
                name: name.clone(),
                span: e.span,
            });
            cfg.k.push(Kont::Eval(index.clone()));
            rule(RuleTag::IndexOperand)
        }
        ExprKind::Block(b) => {
            enter_block(cfg, b, true);
            rule(RuleTag::BlockEntry)
        }
        ExprKind::Borrow { kind, operand } => {
            let (target, ty) = borrow_operand(cfg, operand)?;
            push(
                cfg,
                Value::Ref {
                    target,
                    kind: *kind,
                    ty: Arc::new(ty),
                },
            );
            rule(RuleTag::BorrowExpression)
        }
        ExprKind::StructLit { name, .. } => err(
            Category::Stuck,
            format!("struct literal `{name} {{ .. }}` is only supported as a `let` initializer"),
        ),
        ExprKind::Call {
            callee: Callee::Named(f),
            args,
        } => {
            cfg.k.push(Kont::Collect {
                purpose: Purpose::Call,
                done: Vec::new(),
                rest: args.iter().cloned().collect(),
                span: e.span,
            });
            cfg.k.push(Kont::Eval(Arc::new(Expr::new(ExprKind::Ident(f.clone()), e.span))));
            rule(RuleTag::CallArguments)
        }
        ExprKind::Call {
            callee: Callee::Println,
            args,
        } => {
            let Some(ExprKind::Str(format)) = args.first().map(|a| &a.kind) else {
                return err(Category::Stuck, "`println!` requires a string literal format");
            };
            let purpose = Purpose::Println {
                format: Arc::from(format.as_str()),
            };
            collect(cfg, purpose, Vec::new(), args[1..].iter().cloned().collect(), e.span)
        }
        ExprKind::Unary { op, operand } => {
            cfg.k.push(Kont::Unary {
                op: *op,
                span: e.span,
            });
            cfg.k.push(Kont::Eval(operand.clone()));
            rule(RuleTag::UnaryOperation)
        }
        ExprKind::Binary { op, lhs, rhs } => {
            if matches!(op, BinOp::And | BinOp::Or) {
                cfg.k.push(Kont::ShortCircuit {
                    op: *op,
                    rhs: rhs.clone(),
                    span: e.span,
                });
                cfg.k.push(Kont::Eval(lhs.clone()));
                rule(RuleTag::ShortCircuit)
            } else {
                cfg.k.push(Kont::BinRhs {
                    op: *op,
                    rhs: rhs.clone(),
                    span: e.span,
                });
                cfg.k.push(Kont::Eval(lhs.clone()));
                rule(RuleTag::BinaryOperation)
            }
        }
        ExprKind::Field { var, field } => {
            let (owner, loc) = field_place(cfg, var, field)?;
            if cfg.is_moved(owner) {
                return err(Category::UseAfterMove, format!("use of moved value: `{var}`"));
            }
            let v = cfg.value_at(loc).clone();
            if v.is_undefined() {
                return err(
                    Category::UninitializedRead,
                    format!("used field `{var}.{field}` isn't initialized"),
                );
            }
            push(cfg, v);
            rule_at(RuleTag::EvaluationOfStructField, owner)
        }
    }
}

fn not_a_reference(cfg: &Configuration, name: &str, loc: Location) -> String {
    match cfg.type_env.get(&loc) {
        Some(t) => format!("type `{t}` of `{name}` cannot be dereferenced"),
        None => format!("`{name}` cannot be dereferenced"),
    }
}

/// `(owner, field location)` for `var.field`.
fn field_place(cfg: &Configuration, var: &str, field: &str) -> Result<(Location, Location), Diagnostic> {
    let owner = resolve(cfg, var)?;
    match cfg.env.get(&format!("{var}.{field}")) {
        Some(l) => Ok((owner, *l)),
        None => err(
            Category::UnboundIdentifier,
            format!("no field `{field}` on `{var}`"),
        ),
    }
}

fn borrow_operand(cfg: &Configuration, operand: &Expr) -> Result<(Location, TypeExpr), Diagnostic> {
    match &operand.kind {
        ExprKind::Ident(x) => {
            let l = resolve(cfg, x)?;
            if cfg.is_code(l) {
                return err(Category::Stuck, format!("cannot borrow function or struct name `{x}`"));
            }
            if cfg.ref_cell.contains_key(&l) || matches!(cfg.value_at(l), Value::Ref { .. }) {
                return err(Category::Stuck, "references to references are not supported");
            }
            if cfg.is_moved(l) {
                return err(Category::UseAfterMove, format!("borrow of moved value: `{x}`"));
            }
            Ok((l, cfg.type_env.get(&l).cloned().unwrap_or(TypeExpr::Infer)))
        }
        ExprKind::Field { var, field } => {
            let (owner, l) = field_place(cfg, var, field)?;
            if cfg.is_moved(owner) {
                return err(Category::UseAfterMove, format!("borrow of moved value: `{var}`"));
            }
            Ok((l, cfg.type_env.get(&l).cloned().unwrap_or(TypeExpr::Infer)))
        }
        ExprKind::Borrow { .. } => err(Category::Stuck, "references to references are not supported"),
        _ => err(Category::Stuck, "only variables and struct fields can be borrowed"),
    }
}

/// The borrow flag of `target` counting every live reference except `holder`.
fn flag_without(cfg: &Configuration, target: Location, holder: Option<Location>) -> BorrowFlag {
    let mut flag = BorrowFlag::None;
    for (r, t) in &cfg.ref_cell {
        if *t != target || Some(*r) == holder {
            continue;
        }
        match cfg.ref_type.get(r).copied().flatten() {
            Some(RefKind::Exclusive) => return BorrowFlag::Exclusive,
            Some(RefKind::Shared) => flag = BorrowFlag::Shared,
            None => {}
        }
    }
    flag
}

/// Preconditions shared by both forms of Mutable-/Immutable-Reference.
/// `holder` is the reference location in assignment form.
fn check_borrow(
    cfg: &Configuration,
    target: Location,
    kind: RefKind,
    holder: Option<Location>,
) -> Result<(), Diagnostic> {
    let name = name_of(cfg, target);
    if cfg.is_moved(target) {
        return err(Category::UseAfterMove, format!("borrow of moved value: `{name}`"));
    }
    if kind == RefKind::Exclusive && !cfg.is_mutable(target) {
        return err(
            Category::MutBorrowOfImmutable,
            format!("cannot borrow `{name}` as mutable, as it is not declared as mutable"),
        );
    }
    match (flag_without(cfg, target, holder), kind) {
        (BorrowFlag::Exclusive, k) => {
            return err(
                Category::BorrowConflict,
                format!(
                    "cannot borrow `{name}` as {} more than once at a time",
                    if k == RefKind::Exclusive {
                        "mutable"
                    } else {
                        "immutable because it is also borrowed as mutable; borrowed"
                    }
                ),
            )
        }
        (BorrowFlag::Shared, RefKind::Exclusive) => {
            return err(
                Category::BorrowConflict,
                format!("cannot borrow `{name}` as mutable because it is also borrowed as immutable"),
            )
        }
        _ => {}
    }
    if let Some(l1) = holder {
        if l1 <= target {
            return err(
                Category::LifetimeError,
                format!("`{name}` does not live long enough"),
            );
        }
    }
    Ok(())
}

fn reference_rule(kind: RefKind) -> RuleTag {
    match kind {
        RefKind::Exclusive => RuleTag::MutableReference,
        RefKind::Shared => RuleTag::ImmutableReference,
    }
}

fn declare(
    cfg: &mut Configuration,
    mutable: bool,
    name: &str,
    ty: Option<TypeExpr>,
    v: Value,
) -> Step {
    match v {
        Value::Ref { target, kind, ty: rty } => {
            let ref_ty = TypeExpr::Ref(kind, Box::new((*rty).clone()));
            if let Some(t) = &ty {
                if *t != ref_ty {
                    return err(
                        Category::TypeMismatch,
                        format!("mismatched types: expected `{t}`, found `{ref_ty}`"),
                    );
                }
            }
            check_borrow(cfg, target, kind, None)?;
            let l = cfg.allocate(ref_ty, mutable);
            cfg.store.insert(l, Value::Ref { target, kind, ty: rty });
            cfg.ref_cell.insert(l, target);
            cfg.ref_type.insert(l, Some(kind));
            cfg.recompute_borrow(target);
            cfg.bind_local(name, l);
            rule_at(reference_rule(kind), l)
        }
        Value::Array(items) => {
            let v = coerce(Value::Array(items), ty.as_ref().unwrap_or(&TypeExpr::Infer))?;
            let Value::Array(items) = v else {
                unreachable!("coercing an array yields an array");
            };
            for x in &items {
                check_element(x)?;
            }
            let elem = match &ty {
                Some(TypeExpr::Array(elem, _)) => (**elem).clone(),
                _ => items
                    .first()
                    .and_then(Value::get_type)
                    .unwrap_or(TypeExpr::Infer),
            };
            let base = cfg.allocate_array(elem, items.len() as u64, mutable);
            for (i, x) in items.into_iter().enumerate() {
                cfg.store.insert(Location(base.0 + i as u64), x);
            }
            cfg.bind_local(name, base);
            rule_at(
                if mutable {
                    RuleTag::DeclarationOfMutableArray
                } else {
                    RuleTag::DeclarationOfImmutableArray
                },
                base,
            )
        }
        Value::Undefined | Value::StructInst(_) | Value::StructDesc(_) => err(
            Category::Stuck,
            format!("cannot bind `{name}` to {v}"),
        ),
        v => {
            let v = coerce(v, ty.as_ref().unwrap_or(&TypeExpr::Infer))?;
            let t = v.get_type().unwrap_or(TypeExpr::Infer);
            let l = cfg.allocate(t, mutable);
            cfg.store.insert(l, v);
            cfg.bind_local(name, l);
            rule_at(
                if mutable {
                    RuleTag::DeclarationOfMutableVariable
                } else {
                    RuleTag::DeclarationOfImmutableVariable
                },
                l,
            )
        }
    }
}

/// Rejects type annotations that name something other than a supported type.
fn check_declared_type(cfg: &Configuration, ty: &TypeExpr) -> Result<(), Diagnostic> {
    match ty {
        TypeExpr::Named(z) => lookup_struct(cfg, z).map(|_| ()),
        TypeExpr::Array(elem, _) => match &**elem {
            TypeExpr::Array(..) | TypeExpr::Named(_) | TypeExpr::Ref(..) | TypeExpr::Fn(..) => err(
                Category::Stuck,
                format!("arrays of `{elem}` are not supported"),
            ),
            _ => Ok(()),
        },
        _ => Ok(()),
    }
}

fn exec_stmt(cfg: &mut Configuration, s: &Arc<Stmt>) -> Step {
    let span = s.span;
    match &s.kind {
        StmtKind::Let {
            mutable,
            name,
            ty,
            init,
        } => {
            if let Some(t) = ty {
                check_declared_type(cfg, t)?;
            }
            let mutable = *mutable;
            match init.as_deref().map(|e| &e.kind) {
                None => match ty {
                    Some(TypeExpr::Array(elem, n)) => {
                        let base = cfg.allocate_array((**elem).clone(), *n, mutable);
                        cfg.bind_local(name, base);
                        rule_at(
                            if mutable {
                                RuleTag::DeclarationOfMutableArray
                            } else {
                                RuleTag::DeclarationOfImmutableArray
                            },
                            base,
                        )
                    }
                    Some(TypeExpr::Named(z)) => {
                        let desc = lookup_struct(cfg, z)?;
                        declare_struct_shell(cfg, name, &desc, mutable, span)
                    }
                    _ => {
                        let l = cfg.allocate(ty.clone().unwrap_or(TypeExpr::Infer), mutable);
                        cfg.bind_local(name, l);
                        rule_at(
                            if mutable {
                                RuleTag::DeclarationOfMutableVariable
                            } else {
                                RuleTag::DeclarationOfImmutableVariable
                            },
                            l,
                        )
                    }
                },
                Some(ExprKind::StructLit {
                    name: struct_name,
                    fields,
                }) => {
                    let desc = lookup_struct(cfg, struct_name)?;
                    if let Some(t) = ty {
                        if *t != TypeExpr::Named(struct_name.clone()) {
                            return err(
                                Category::TypeMismatch,
                                format!("mismatched types: expected `{t}`, found `{struct_name}`"),
                            );
                        }
                    }
                    let mut seen: Vec<&str> = Vec::new();
                    for (f, _) in fields {
                        if seen.contains(&f.as_str()) {
                            return err(
                                Category::TypeMismatch,
                                format!("field `{f}` specified more than once"),
                            );
                        }
                        if !desc.fields.iter().any(|d| d.name == *f) {
                            return err(
                                Category::TypeMismatch,
                                format!("struct `{struct_name}` has no field named `{f}`"),
                            );
                        }
                        seen.push(f);
                    }
                    if let Some(m) = desc.fields.iter().find(|d| !seen.contains(&d.name.as_str())) {
                        return Err(missing_field(struct_name, &m.name));
                    }
                    collect(
                        cfg,
                        Purpose::StructDecl {
                            mutable,
                            var: name.clone(),
                            ty: ty.clone(),
                            struct_name: struct_name.clone(),
                            fields: fields.iter().map(|(f, _)| f.clone()).collect(),
                        },
                        Vec::new(),
                        fields.iter().map(|(_, e)| e.clone()).collect(),
                        span,
                    )
                }
                Some(ExprKind::Ident(y)) if struct_var(cfg, y).is_some() => {
                    let (src, desc) = struct_var(cfg, y).expect("checked above");
                    if let Some(t) = ty {
                        if *t != TypeExpr::Named(desc.name.clone()) {
                            return err(
                                Category::TypeMismatch,
                                format!("mismatched types: expected `{t}`, found `{}`", desc.name),
                            );
                        }
                    }
                    let src_fields = field_locations(cfg, y, &desc)?;
                    cfg.k.push(Kont::Move {
                        dst: name.clone(),
                        src,
                        src_fields,
                        span,
                    });
                    declare_struct_shell(cfg, name, &desc, mutable, span)
                }
                Some(_) => {
                    cfg.k.push(Kont::LetBind {
                        mutable,
                        name: name.clone(),
                        ty: ty.clone(),
                        span,
                    });
                    cfg.k.push(Kont::Eval(init.clone().expect("matched Some")));
                    rule(RuleTag::LetInitializer)
                }
            }
        }
        StmtKind::Assign { target, op, value } => {
            if let Some(bop) = op.binop() {
                let current = match target {
                    AssignTarget::Var(x) => ExprKind::Ident(x.clone()),
                    AssignTarget::Index(x, i) => ExprKind::Index {
                        name: x.clone(),
                        index: i.clone(),
                    },
                    AssignTarget::Deref(x) => ExprKind::Deref(x.clone()),
                    AssignTarget::Field(v, f) => ExprKind::Field {
                        var: v.clone(),
                        field: f.clone(),
                    },
                };
                let rhs = Expr::new(
                    ExprKind::Binary {
                        op: bop,
                        lhs: Arc::new(Expr::new(current, span)),
                        rhs: value.clone(),
                    },
                    value.span,
                );
                cfg.k.push(Kont::Stmt(Arc::new(Stmt {
                    kind: StmtKind::Assign {
                        target: target.clone(),
                        op: AssignOp::Assign,
                        value: Arc::new(rhs),
                    },
                    span,
                })));
                return rule(RuleTag::CompoundAssignment);
            }
            let frame = match target {
                AssignTarget::Var(x) => {
                    if let ExprKind::Ident(y) = &value.kind {
                        if let Some((src, desc)) = struct_var(cfg, y) {
                            let src_fields = field_locations(cfg, y, &desc)?;
                            return ownership_move(cfg, x, src, src_fields, span);
                        }
                    }
                    Kont::AssignVar {
                        name: x.clone(),
                        span,
                    }
                }
                AssignTarget::Index(x, i) => Kont::AssignIndex {
                    name: x.clone(),
                    index: i.clone(),
                    value: None,
                    span,
                },
                AssignTarget::Deref(x) => Kont::AssignDeref {
                    name: x.clone(),
                    span,
                },
                AssignTarget::Field(v, f) => Kont::AssignField {
                    var: v.clone(),
                    field: f.clone(),
                    span,
                },
            };
            if let ExprKind::StructLit { name, .. } = &value.kind {
                return err(
                    Category::Stuck,
                    format!("struct literal `{name} {{ .. }}` is only supported as a `let` initializer"),
                );
            }
            cfg.k.push(frame);
            cfg.k.push(Kont::Eval(value.clone()));
            rule(RuleTag::AssignmentOperand)
        }
        StmtKind::Expr(e) => {
            cfg.k.push(Kont::Discard { span });
            cfg.k.push(Kont::Eval(e.clone()));
            rule(RuleTag::ExpressionStatement)
        }
        StmtKind::Return(e) => {
            cfg.k.push(Kont::ReturnValue { span });
            match e {
                Some(e) => cfg.k.push(Kont::Eval(e.clone())),
                None => cfg.k.push(Kont::Val(Value::Unit)),
            }
            rule(RuleTag::ReturnStatement)
        }
        StmtKind::If {
            cond,
            then,
            otherwise,
        } => {
            cfg.k.push(Kont::IfBranch {
                then: then.clone(),
                otherwise: otherwise.clone(),
                span,
            });
            cfg.k.push(Kont::Eval(cond.clone()));
            rule(RuleTag::IfStatement)
        }
        StmtKind::While { cond, body } => {
            cfg.k.push(Kont::WhileTest {
                stmt: s.clone(),
                body: body.clone(),
                span,
            });
            cfg.k.push(Kont::Eval(cond.clone()));
            rule(RuleTag::WhileLoop)
        }
        StmtKind::Loop { body } => {
            cfg.k.push(Kont::Stmt(s.clone()));
            enter_block(cfg, body, false);
            rule(RuleTag::LoopUnfold)
        }
        StmtKind::For { var, lo, hi, body } => {
            cfg.k.push(Kont::ForLo {
                var: var.clone(),
                hi: hi.clone(),
                body: body.clone(),
                span,
            });
            cfg.k.push(Kont::Eval(lo.clone()));
            rule(RuleTag::ForLoop)
        }
        StmtKind::Block(b) => {
            enter_block(cfg, b, false);
            rule(RuleTag::BlockEntry)
        }
        StmtKind::Item(item) => define(cfg, item.clone(), false),
    }
}

/// Declaration-of-Struct-Instance with every field ⊥: the `let` of a move
/// target, or a struct declared without initializer.
fn declare_struct_shell(
    cfg: &mut Configuration,
    name: &str,
    desc: &StructDesc,
    mutable: bool,
    span: Span,
) -> Step {
    let l = cfg.allocate(TypeExpr::Named(desc.name.clone()), mutable);
    cfg.bind_local(name, l);
    cfg.k.push(Kont::F2 {
        var: name.to_string(),
        owner: l,
        fields: desc
            .fields
            .iter()
            .map(|f| (f.clone(), Value::Undefined))
            .collect(),
        span,
    });
    rule_at(RuleTag::DeclarationOfStructInstance, l)
}

fn ownership_move(
    cfg: &mut Configuration,
    dst: &str,
    src: Location,
    src_fields: Vec<(String, Location)>,
    span: Span,
) -> Step {
    let l1 = resolve(cfg, dst)?;
    let t1 = cfg.type_env.get(&l1).cloned().unwrap_or(TypeExpr::Infer);
    let t2 = cfg.type_env.get(&src).cloned().unwrap_or(TypeExpr::Infer);
    if t1 != t2 || !matches!(t1, TypeExpr::Named(_)) {
        return err(
            Category::TypeMismatch,
            format!("mismatched types: expected `{t1}`, found `{t2}`"),
        );
    }
    let TypeExpr::Named(z) = t1 else {
        unreachable!("checked above");
    };
    let init = cfg.value_at(l1).is_undefined();
    if !init && !cfg.is_mutable(l1) {
        return err(
            Category::AssignToImmutable,
            format!("cannot assign twice to immutable variable `{dst}`"),
        );
    }
    let mut fields = VecDeque::new();
    for (f, sloc) in &src_fields {
        let Some(dloc) = cfg.env.get(&format!("{dst}.{f}")).copied() else {
            return err(Category::Stuck, format!("field `{f}` of `{dst}` has no location"));
        };
        fields.push_back((f.clone(), dloc, *sloc));
    }
    let borrowed = |l: Location| cfg.borrow_flag(l) != BorrowFlag::None;
    if !init && (borrowed(l1) || fields.iter().any(|(_, d, _)| borrowed(*d))) {
        return err(
            Category::BorrowConflict,
            format!("cannot assign to `{dst}` because it is borrowed"),
        );
    }
    if borrowed(src) || fields.iter().any(|(_, _, s)| borrowed(*s)) {
        return err(
            Category::BorrowConflict,
            format!("cannot move out of `{}` because it is borrowed", name_of(cfg, src)),
        );
    }
    cfg.store.insert(l1, Value::StructInst(Arc::from(z.as_str())));
    cfg.k.push(Kont::F4 { owner: src, span });
    cfg.k.push(Kont::F3 {
        dst: l1,
        src,
        fields,
        init,
        span,
    });
    rule_at(RuleTag::OwnershipMove, l1)
}

fn assign_var(cfg: &mut Configuration, name: &str, v: Value) -> Step {
    let l = resolve(cfg, name)?;
    let init = cfg.value_at(l).is_undefined();
    if !cfg.is_mutable(l) && !init {
        return err(
            Category::AssignToImmutable,
            format!("cannot assign twice to immutable variable `{name}`"),
        );
    }
    let declared = cfg.type_env.get(&l).cloned().unwrap_or(TypeExpr::Infer);
    if let Value::Ref { target, kind, ty } = v {
        let ref_ty = TypeExpr::Ref(kind, Box::new((*ty).clone()));
        if declared != TypeExpr::Infer && declared != ref_ty {
            return err(
                Category::TypeMismatch,
                format!("mismatched types: expected `{declared}`, found `{ref_ty}`"),
            );
        }
        check_borrow(cfg, target, kind, Some(l))?;
        let old = cfg.ref_cell.insert(l, target);
        cfg.ref_type.insert(l, Some(kind));
        cfg.type_env.insert(l, ref_ty);
        cfg.store.insert(l, Value::Ref { target, kind, ty });
        cfg.recompute_borrow(target);
        if let Some(old) = old.filter(|o| *o != target) {
            cfg.recompute_borrow(old);
        }
        return rule_at(reference_rule(kind), l);
    }
    if cfg.borrow_flag(l) != BorrowFlag::None {
        return err(
            Category::BorrowConflict,
            format!("cannot assign to `{name}` because it is borrowed"),
        );
    }
    match declared {
        TypeExpr::Infer => {
            if matches!(v, Value::Array(_)) {
                return err(Category::Stuck, "deferred initialization of arrays is not supported");
            }
            check_element(&v).or_else(|e| match v {
                Value::Closure(_) => Ok(()),
                _ => Err(e),
            })?;
            let v = v.settle();
            cfg.type_env
                .insert(l, v.get_type().unwrap_or(TypeExpr::Infer));
            cfg.store.insert(l, v);
        }
        TypeExpr::Array(..) => {
            let Value::Array(items) = coerce(v, &declared)? else {
                unreachable!("coercing to an array type yields an array");
            };
            for (i, x) in items.into_iter().enumerate() {
                cfg.store.insert(Location(l.0 + i as u64), x);
            }
        }
        t => {
            let v = coerce(v, &t)?;
            cfg.store.insert(l, v);
        }
    }
    rule_at(RuleTag::Assignment, l)
}

/// Array base for `name[..]`, looking through a reference to an array.
fn array_place(
    cfg: &Configuration,
    name: &str,
) -> Result<(Location, TypeExpr, u64), Diagnostic> {
    let mut l = resolve(cfg, name)?;
    if let Some(t) = cfg.ref_cell.get(&l) {
        l = *t;
    }
    match cfg.type_env.get(&l) {
        Some(TypeExpr::Array(elem, n)) => Ok((l, (**elem).clone(), *n)),
        other => err(
            Category::TypeMismatch,
            format!(
                "cannot index into a value of type `{}`",
                other.cloned().unwrap_or(TypeExpr::Infer)
            ),
        ),
    }
}

fn out_of_bounds(n: u64, i: i128) -> Diagnostic {
    Diagnostic::new(
        Category::IndexOutOfBounds,
        format!("index out of bounds: the len is {n} but the index is {i}"),
    )
}

fn array_read(cfg: &mut Configuration, name: &str, index: &Value) -> Step {
    let (base, _, n) = array_place(cfg, name)?;
    let i = index_value(index)?;
    if i < 0 || i >= n as i128 {
        return Err(out_of_bounds(n, i));
    }
    let v = cfg.value_at(Location(base.0 + i as u64)).clone();
    if v.is_undefined() {
        return err(
            Category::UninitializedRead,
            format!("used `{name}[{i}]` before it was initialized"),
        );
    }
    cfg.k.push(Kont::Val(v));
    rule_at(RuleTag::EvaluationOfArrayElement, base)
}

fn array_write(cfg: &mut Configuration, name: &str, index: &Value, v: Value) -> Step {
    let l = resolve(cfg, name)?;
    if cfg.ref_cell.contains_key(&l) {
        return err(Category::Stuck, "element assignment through a reference is not supported");
    }
    let (base, elem, n) = array_place(cfg, name)?;
    if !cfg.is_mutable(base) {
        return err(
            Category::AssignToImmutable,
            format!("cannot assign to `{name}[_]`, as `{name}` is not declared as mutable"),
        );
    }
    if cfg.borrow_flag(base) != BorrowFlag::None {
        return err(
            Category::BorrowConflict,
            format!("cannot assign to `{name}[_]` because it is borrowed"),
        );
    }
    let i = index_value(index)?;
    let v = coerce(v, &elem)?;
    if i < 0 || i >= n as i128 {
        return Err(out_of_bounds(n, i));
    }
    cfg.store.insert(Location(base.0 + i as u64), v);
    rule_at(RuleTag::UpdatingOfArrayElement, base)
}

fn deref_write(cfg: &mut Configuration, name: &str, v: Value) -> Step {
    let l1 = resolve(cfg, name)?;
    let Some(l2) = cfg.ref_cell.get(&l1).copied() else {
        return err(Category::NotAReference, not_a_reference(cfg, name, l1));
    };
    if cfg.ref_type.get(&l1).copied().flatten() != Some(RefKind::Exclusive) {
        return err(
            Category::WriteThroughSharedRef,
            format!("cannot assign to `*{name}`, which is behind a `&` reference"),
        );
    }
    let ty = cfg.type_env.get(&l2).cloned().unwrap_or(TypeExpr::Infer);
    match coerce(v, &ty)? {
        Value::Array(items) => {
            for (i, x) in items.into_iter().enumerate() {
                cfg.store.insert(Location(l2.0 + i as u64), x);
            }
        }
        v => {
            if ty == TypeExpr::Infer {
                cfg.type_env.insert(l2, v.get_type().unwrap_or(TypeExpr::Infer));
            }
            cfg.store.insert(l2, v);
        }
    }
    rule_at(RuleTag::DerefAssignment, l2)
}

fn field_write(cfg: &mut Configuration, var: &str, field: &str, v: Value) -> Step {
    let (owner, loc) = field_place(cfg, var, field)?;
    if cfg.is_moved(owner) {
        return err(Category::UseAfterMove, format!("assign to part of moved value: `{var}`"));
    }
    if !cfg.is_mutable(owner) {
        return err(
            Category::AssignToImmutable,
            format!("cannot assign to `{var}.{field}`, as `{var}` is not declared as mutable"),
        );
    }
    if cfg.borrow_flag(owner) != BorrowFlag::None || cfg.borrow_flag(loc) != BorrowFlag::None {
        return err(
            Category::BorrowConflict,
            format!("cannot assign to `{var}.{field}` because it is borrowed"),
        );
    }
    let ty = cfg.type_env.get(&loc).cloned().unwrap_or(TypeExpr::Infer);
    let v = coerce(v, &ty)?;
    cfg.store.insert(loc, v);
    rule_at(RuleTag::UpdatingOfStructField, owner)
}

fn function_call(cfg: &mut Configuration, mut done: Vec<Value>, _span: Span) -> Step {
    let args = done.split_off(1);
    let closure = match done.pop() {
        Some(Value::Closure(c)) => c,
        other => {
            return err(
                Category::TypeMismatch,
                format!(
                    "expected function, found `{}`",
                    other
                        .and_then(|v| v.get_type())
                        .map(|t| t.to_string())
                        .unwrap_or_default()
                ),
            )
        }
    };
    if args.len() != closure.params.len() {
        return err(
            Category::ArityMismatch,
            format!(
                "function `{}` takes {} argument(s) but {} were supplied",
                closure.name,
                closure.params.len(),
                args.len()
            ),
        );
    }
    if cfg.time_enabled {
        *cfg.time.entry(closure.name.clone()).or_insert(0) += 1;
    }
    let frame = Frame {
        saved_env: std::mem::take(&mut cfg.env),
        saved_scopes: std::mem::take(&mut cfg.scopes),
        saved_kont: std::mem::take(&mut cfg.k),
        return_type: closure.ret.clone(),
        function: closure.name.clone(),
    };
    cfg.fstack.push(frame);
    cfg.scopes.push(ScopeRecord::default());
    let body_span = closure.body.span;
    cfg.k.push(Kont::Stmt(Arc::new(Stmt {
        kind: StmtKind::Return(None),
        span: body_span,
    })));
    cfg.k.push(Kont::Enter {
        block: closure.body.clone(),
        value: false,
    });
    cfg.k.push(Kont::MkDecls {
        params: closure.params.iter().cloned().collect(),
        args: args.into(),
        span: body_span,
    });
    rule(RuleTag::FunctionCall)
}

fn return_from(cfg: &mut Configuration, v: Value) -> Step {
    let Some(frame) = cfg.fstack.last() else {
        return err(Category::Stuck, "`return` outside of a function");
    };
    let v = coerce(v, &frame.return_type).map_err(|d| {
        if d.category == Category::UninitializedRead {
            d
        } else {
            Diagnostic::new(
                Category::TypeMismatch,
                format!("mismatched return type in `{}`: {}", frame.function, d.message),
            )
        }
    })?;
    if matches!(v, Value::Ref { .. }) {
        return err(Category::Stuck, "returning references is not supported");
    }
    let frame = cfg.fstack.pop().expect("checked above");
    for scope in std::mem::take(&mut cfg.scopes) {
        for loc in scope.allocations {
            cfg.kill_reference(loc);
        }
    }
    cfg.env = frame.saved_env;
    cfg.scopes = frame.saved_scopes;
    cfg.k = frame.saved_kont;
    cfg.k.push(Kont::Val(v));
    rule(RuleTag::Return)
}

fn check_fresh_name(cfg: &Configuration, name: &str, global: bool) -> Result<(), Diagnostic> {
    let taken = if global {
        cfg.genv.contains_key(name)
    } else {
        cfg.scopes.last().is_some_and(|s| s.items.contains(name))
    };
    if taken {
        return err(
            Category::Stuck,
            format!("the name `{name}` is defined multiple times"),
        );
    }
    Ok(())
}

fn bind_item(cfg: &mut Configuration, name: &str, loc: Location, global: bool) {
    if global {
        cfg.genv.insert(name.to_string(), loc);
    } else {
        if let Some(scope) = cfg.scopes.last_mut() {
            scope.items.insert(name.to_string());
        }
        cfg.bind_local(name, loc);
    }
}

fn scalar_field_type(t: &TypeExpr) -> bool {
    matches!(
        t,
        TypeExpr::Int(_) | TypeExpr::Float(_) | TypeExpr::Bool | TypeExpr::Char | TypeExpr::Str
    )
}

fn define(cfg: &mut Configuration, item: Item, global: bool) -> Step {
    match item {
        Item::Function(f) => {
            if f.ret.is_none() {
                let desugared = FnDecl {
                    ret: Some(TypeExpr::Unit),
                    ..(*f).clone()
                };
                cfg.k.push(Kont::Define {
                    item: Item::Function(Arc::new(desugared)),
                    global,
                });
                return rule(RuleTag::FunctionDefinitionWithoutReturnType);
            }
            if let Some(tail) = &f.body.tail {
                let mut stmts = f.body.stmts.clone();
                stmts.push(Arc::new(Stmt {
                    kind: StmtKind::Return(Some(tail.clone())),
                    span: tail.span,
                }));
                let desugared = FnDecl {
                    body: Arc::new(Block {
                        stmts,
                        tail: None,
                        span: f.body.span,
                    }),
                    ..(*f).clone()
                };
                cfg.k.push(Kont::Define {
                    item: Item::Function(Arc::new(desugared)),
                    global,
                });
                return rule(RuleTag::FunctionDefinitionReturnByLastExpression);
            }
            check_fresh_name(cfg, &f.name, global)?;
            for (i, p) in f.params.iter().enumerate() {
                if f.params[..i].iter().any(|q| q.name == p.name) {
                    return err(
                        Category::Stuck,
                        format!("identifier `{}` is bound more than once in the parameter list", p.name),
                    );
                }
                if matches!(p.ty, TypeExpr::Named(_)) {
                    return err(
                        Category::Stuck,
                        format!("struct-typed parameter `{}` is not supported", p.name),
                    );
                }
            }
            let closure = Closure {
                name: f.name.clone(),
                params: f.params.clone(),
                body: f.body.clone(),
                ret: f.ret.clone().expect("desugared above"),
            };
            let l = cfg.allocate(closure.fn_type(), false);
            cfg.store.insert(l, Value::Closure(Arc::new(closure)));
            bind_item(cfg, &f.name, l, global);
            rule(RuleTag::FunctionDefinitionWithReturnType)
        }
        Item::Struct(s) => {
            check_fresh_name(cfg, &s.name, global)?;
            for (i, field) in s.fields.iter().enumerate() {
                if !scalar_field_type(&field.ty) {
                    return err(
                        Category::Stuck,
                        format!("field `{}` of type `{}` is not supported", field.name, field.ty),
                    );
                }
                if s.fields[..i].iter().any(|g| g.name == field.name) {
                    return err(
                        Category::Stuck,
                        format!("field `{}` is already declared", field.name),
                    );
                }
            }
            let l = cfg.allocate(TypeExpr::Named(s.name.clone()), false);
            cfg.store.insert(
                l,
                Value::StructDesc(Arc::new(StructDesc {
                    name: s.name.clone(),
                    fields: s.fields.clone(),
                })),
            );
            bind_item(cfg, &s.name, l, global);
            rule(RuleTag::StructDefinition)
        }
        Item::ConstStatic(ref c) => {
            check_fresh_name(cfg, &c.name, global)?;
            let init = c.init.clone();
            cfg.k.push(Kont::ConstBind { item, global });
            cfg.k.push(Kont::Eval(init));
            rule(RuleTag::ConstDeclaration)
        }
    }
}

fn const_bind(cfg: &mut Configuration, item: Item, global: bool, v: Value) -> Step {
    let Item::ConstStatic(c) = item else {
        return err(Category::Stuck, "constant binding of a non-constant item");
    };
    check_fresh_name(cfg, &c.name, global)?;
    check_declared_type(cfg, &c.ty)?;
    let mutable = c.kind == StaticKind::Static && c.mutable;
    let loc = match coerce(v, &c.ty)? {
        Value::Array(items) => {
            let TypeExpr::Array(elem, n) = &c.ty else {
                unreachable!("coerced to an array type");
            };
            let base = cfg.allocate_array((**elem).clone(), *n, mutable);
            for (i, x) in items.into_iter().enumerate() {
                cfg.store.insert(Location(base.0 + i as u64), x);
            }
            base
        }
        v @ (Value::Int { .. }
        | Value::Float { .. }
        | Value::Bool(_)
        | Value::Char(_)
        | Value::Str(_)
        | Value::Unit) => {
            let l = cfg.allocate(c.ty.clone(), mutable);
            cfg.store.insert(l, v);
            l
        }
        other => {
            return err(
                Category::Stuck,
                format!("constant `{}` cannot hold {other}", c.name),
            )
        }
    };
    bind_item(cfg, &c.name, loc, global);
    rule(RuleTag::ConstDeclaration)
}

/// Item declarations that [`boot`](super::boot) runs before `main`.
pub fn definition_frames(items: &[Item]) -> Vec<Kont> {
    let mut frames: Vec<Kont> = items
        .iter()
        .filter(|i| matches!(i, Item::ConstStatic(_)))
        .rev()
        .chain(
            items
                .iter()
                .filter(|i| !matches!(i, Item::ConstStatic(_)))
                .rev(),
        )
        .map(|i| Kont::Define {
            item: i.clone(),
            global: true,
        })
        .collect();
    frames.shrink_to_fit();
    frames
}
