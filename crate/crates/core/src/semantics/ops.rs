//! Operators, literal typing and `println!` formatting.

use crate::state::{Category, Diagnostic, Value};
use crate::syntax::{BinOp, FloatTy, IntTy, TypeExpr, UnOp};

fn mismatch(msg: impl Into<String>) -> Diagnostic {
    Diagnostic::new(Category::TypeMismatch, msg)
}

fn overflow(msg: impl Into<String>) -> Diagnostic {
    Diagnostic::new(Category::Overflow, msg)
}

fn type_name(v: &Value) -> String {
    v.get_type().map(|t| t.to_string()).unwrap_or_else(|| "⊥".into())
}

fn round_to(value: f64, ty: FloatTy) -> f64 {
    match ty {
        FloatTy::F32 => value as f32 as f64,
        FloatTy::F64 => value,
    }
}

/// Fits `v` to the type `target`, fixing the type of literals. `Infer`
/// accepts anything and commits literals to their default type.
pub fn coerce(v: Value, target: &TypeExpr) -> Result<Value, Diagnostic> {
    match (v, target) {
        (v, TypeExpr::Infer) => Ok(v.settle()),
        (
            Value::Int {
                value, flex: true, ..
            },
            TypeExpr::Int(t),
        ) => {
            if t.contains(value) {
                Ok(Value::int(value, *t))
            } else {
                Err(overflow(format!("literal `{value}` out of range for `{}`", t.name())))
            }
        }
        (
            Value::Float {
                value, flex: true, ..
            },
            TypeExpr::Float(t),
        ) => Ok(Value::Float {
            value: round_to(value, *t),
            ty: *t,
            flex: false,
        }),
        (Value::Array(items), TypeExpr::Array(elem, n)) => {
            if items.len() as u64 != *n {
                return Err(mismatch(format!(
                    "expected an array with {n} elements, found one with {} elements",
                    items.len()
                )));
            }
            items
                .into_iter()
                .map(|x| coerce(x, elem))
                .collect::<Result<Vec<_>, _>>()
                .map(Value::Array)
        }
        (v, t) => match v.get_type() {
            Some(vt) if &vt == t => Ok(v.settle()),
            Some(vt) if matches!(vt, TypeExpr::Array(_, 0)) && matches!(t, TypeExpr::Array(_, 0)) => {
                Ok(Value::Array(Vec::new()))
            }
            Some(vt) => Err(mismatch(format!("expected `{t}`, found `{vt}`"))),
            None => Err(Diagnostic::new(
                Category::UninitializedRead,
                "use of an uninitialized value",
            )),
        },
    }
}

/// Brings both operands to a common type.
fn unify(l: Value, r: Value) -> Result<(Value, Value), Diagnostic> {
    match (&l, &r) {
        (Value::Int { flex: true, .. }, Value::Int { flex: true, .. })
        | (Value::Float { flex: true, .. }, Value::Float { flex: true, .. }) => Ok((l, r)),
        (Value::Int { flex: true, .. }, Value::Int { ty, .. }) => {
            let t = TypeExpr::Int(*ty);
            Ok((coerce(l, &t)?, r))
        }
        (Value::Int { ty, .. }, Value::Int { flex: true, .. }) => {
            let t = TypeExpr::Int(*ty);
            Ok((l, coerce(r, &t)?))
        }
        (Value::Float { flex: true, .. }, Value::Float { ty, .. }) => {
            let t = TypeExpr::Float(*ty);
            Ok((coerce(l, &t)?, r))
        }
        (Value::Float { ty, .. }, Value::Float { flex: true, .. }) => {
            let t = TypeExpr::Float(*ty);
            Ok((l, coerce(r, &t)?))
        }
        _ => {
            if l.get_type() == r.get_type() {
                Ok((l, r))
            } else {
                Err(mismatch(format!(
                    "mismatched operand types `{}` and `{}`",
                    type_name(&l),
                    type_name(&r)
                )))
            }
        }
    }
}

fn int_result(value: Option<i128>, ty: IntTy, flex: bool, what: &str) -> Result<Value, Diagnostic> {
    let value = value.ok_or_else(|| overflow(format!("attempt to {what} with overflow")))?;
    if flex {
        return Value::int_literal(value)
            .ok_or_else(|| overflow(format!("attempt to {what} with overflow")));
    }
    if ty.contains(value) {
        Ok(Value::int(value, ty))
    } else {
        Err(overflow(format!("attempt to {what} with overflow")))
    }
}

fn shift(op: BinOp, l: Value, r: Value) -> Result<Value, Diagnostic> {
    let (Value::Int { value, ty, flex }, Value::Int { value: amount, .. }) = (&l, &r) else {
        return Err(mismatch(format!(
            "no implementation for `{} {} {}`",
            type_name(&l),
            op.symbol(),
            type_name(&r)
        )));
    };
    let (value, ty, flex) = (*value, *ty, *flex);
    let bits = ty.bits();
    let what = if op == BinOp::Shl {
        "shift left"
    } else {
        "shift right"
    };
    if *amount < 0 || *amount >= bits as i128 {
        return Err(overflow(format!("attempt to {what} with overflow")));
    }
    let s = *amount as u32;
    let result = if op == BinOp::Shl {
        let mask = if bits == 128 { u128::MAX } else { (1u128 << bits) - 1 };
        let raw = ((value as u128) << s) & mask;
        if ty.signed() && raw >> (bits - 1) == 1 {
            raw as i128 - (1i128 << bits)
        } else {
            raw as i128
        }
    } else {
        value >> s
    };
    Ok(Value::Int {
        value: result,
        ty,
        flex,
    })
}

pub fn eval_binop(op: BinOp, l: Value, r: Value) -> Result<Value, Diagnostic> {
    if matches!(op, BinOp::Shl | BinOp::Shr) {
        return shift(op, l, r);
    }
    let (l, r) = unify(l, r)?;
    let bad = |l: &Value, r: &Value| {
        Err(mismatch(format!(
            "no implementation for `{} {} {}`",
            type_name(l),
            op.symbol(),
            type_name(r)
        )))
    };
    if op.is_comparison() {
        let ord = match (&l, &r) {
            (Value::Int { value: a, .. }, Value::Int { value: b, .. }) => a.partial_cmp(b),
            (Value::Float { value: a, .. }, Value::Float { value: b, .. }) => a.partial_cmp(b),
            (Value::Bool(a), Value::Bool(b)) => a.partial_cmp(b),
            (Value::Char(a), Value::Char(b)) => a.partial_cmp(b),
            (Value::Str(a), Value::Str(b)) => a.partial_cmp(b),
            (Value::Unit, Value::Unit) => Some(std::cmp::Ordering::Equal),
            _ => return bad(&l, &r),
        };
        use std::cmp::Ordering::*;
        let result = match op {
            BinOp::Lt => ord == Some(Less),
            BinOp::Le => matches!(ord, Some(Less | Equal)),
            BinOp::Gt => ord == Some(Greater),
            BinOp::Ge => matches!(ord, Some(Greater | Equal)),
            BinOp::Eq => ord == Some(Equal),
            BinOp::Ne => ord != Some(Equal),
            _ => unreachable!(),
        };
        return Ok(Value::Bool(result));
    }
    match (&l, &r) {
        (
            Value::Int {
                value: a,
                ty,
                flex,
            },
            Value::Int { value: b, .. },
        ) => {
            let (a, b, ty, flex) = (*a, *b, *ty, *flex);
            match op {
                BinOp::Add => int_result(a.checked_add(b), ty, flex, "add"),
                BinOp::Sub => int_result(a.checked_sub(b), ty, flex, "subtract"),
                BinOp::Mul => int_result(a.checked_mul(b), ty, flex, "multiply"),
                BinOp::Div | BinOp::Rem => {
                    let what = if op == BinOp::Div {
                        "divide"
                    } else {
                        "calculate the remainder"
                    };
                    if b == 0 {
                        return Err(Diagnostic::new(
                            Category::DivideByZero,
                            format!("attempt to {what} with a divisor of zero"),
                        ));
                    }
                    let effective = if flex { IntTy::I32 } else { ty };
                    if effective.signed() && a == effective.min() && b == -1 && !flex {
                        return Err(overflow(format!("attempt to {what} with overflow")));
                    }
                    let v = if op == BinOp::Div { a / b } else { a % b };
                    int_result(Some(v), ty, flex, what)
                }
                BinOp::BitAnd => Ok(Value::Int {
                    value: a & b,
                    ty,
                    flex,
                }),
                BinOp::BitOr => Ok(Value::Int {
                    value: a | b,
                    ty,
                    flex,
                }),
                _ => bad(&l, &r),
            }
        }
        (
            Value::Float {
                value: a,
                ty,
                flex,
            },
            Value::Float { value: b, .. },
        ) => {
            let v = match op {
                BinOp::Add => a + b,
                BinOp::Sub => a - b,
                BinOp::Mul => a * b,
                BinOp::Div => a / b,
                BinOp::Rem => a % b,
                _ => return bad(&l, &r),
            };
            Ok(Value::Float {
                value: round_to(v, *ty),
                ty: *ty,
                flex: *flex,
            })
        }
        (Value::Bool(a), Value::Bool(b)) => match op {
            BinOp::BitAnd | BinOp::And => Ok(Value::Bool(*a && *b)),
            BinOp::BitOr | BinOp::Or => Ok(Value::Bool(*a || *b)),
            _ => bad(&l, &r),
        },
        _ => bad(&l, &r),
    }
}

pub fn eval_unary(op: UnOp, v: Value) -> Result<Value, Diagnostic> {
    match (op, v) {
        (UnOp::Neg, Value::Int { value, ty, flex }) => {
            if flex {
                return Value::int_literal(-value)
                    .ok_or_else(|| overflow("attempt to negate with overflow"));
            }
            if !ty.signed() {
                return Err(overflow(format!(
                    "cannot negate a value of unsigned type `{}`",
                    ty.name()
                )));
            }
            int_result(Some(-value), ty, false, "negate")
        }
        (UnOp::Neg, Value::Float { value, ty, flex }) => Ok(Value::Float {
            value: -value,
            ty,
            flex,
        }),
        (UnOp::Not, Value::Bool(b)) => Ok(Value::Bool(!b)),
        (UnOp::Not, Value::Int { value, ty, .. }) => {
            let result = if ty.signed() { !value } else { ty.max() - value };
            Ok(Value::int(result, ty))
        }
        (op, v) => Err(mismatch(format!(
            "cannot apply unary operator `{}` to type `{}`",
            match op {
                UnOp::Neg => "-",
                UnOp::Not => "!",
            },
            type_name(&v)
        ))),
    }
}

/// Expands `{}` placeholders; `{{` and `}}` are literal braces.
pub fn format_args(format: &str, args: &[Value]) -> Result<String, Diagnostic> {
    let mut out = String::new();
    let mut chars = format.chars().peekable();
    let mut next = args.iter();
    let mut used = 0usize;
    while let Some(c) = chars.next() {
        match c {
            '{' if chars.peek() == Some(&'{') => {
                chars.next();
                out.push('{');
            }
            '}' if chars.peek() == Some(&'}') => {
                chars.next();
                out.push('}');
            }
            '{' => {
                if chars.next() != Some('}') {
                    return Err(Diagnostic::new(
                        Category::Stuck,
                        "only `{}` placeholders are supported in format strings",
                    ));
                }
                used += 1;
                let Some(arg) = next.next() else {
                    return Err(Diagnostic::new(
                        Category::ArityMismatch,
                        format!(
                            "{used} positional argument(s) in format string, but there are {} argument(s)",
                            args.len()
                        ),
                    ));
                };
                match arg {
                    Value::Int { .. }
                    | Value::Float { .. }
                    | Value::Bool(_)
                    | Value::Char(_)
                    | Value::Str(_)
                    | Value::Unit => out.push_str(&arg.display()),
                    other => {
                        return Err(mismatch(format!(
                            "`{}` cannot be formatted with the default formatter",
                            type_name(other)
                        )))
                    }
                }
            }
            '}' => {
                return Err(Diagnostic::new(
                    Category::Stuck,
                    "unmatched `}` in format string",
                ))
            }
            c => out.push(c),
        }
    }
    if used != args.len() {
        return Err(Diagnostic::new(
            Category::ArityMismatch,
            format!(
                "{used} positional argument(s) in format string, but there are {} argument(s)",
                args.len()
            ),
        ));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn i32v(v: i128) -> Value {
        Value::int(v, IntTy::I32)
    }

    fn lit(v: i128) -> Value {
        Value::int_literal(v).unwrap()
    }

    #[test]
    fn addition() {
        assert_eq!(eval_binop(BinOp::Add, i32v(1), i32v(2)).unwrap(), i32v(3));
        assert_eq!(eval_binop(BinOp::Add, lit(1), i32v(2)).unwrap(), i32v(3));
    }

    #[test]
    fn checked_arithmetic() {
        let e = eval_binop(BinOp::Add, i32v(i32::MAX as i128), lit(1)).unwrap_err();
        assert_eq!(e.category, Category::Overflow);
        let e = eval_binop(BinOp::Div, i32v(1), i32v(0)).unwrap_err();
        assert_eq!(e.category, Category::DivideByZero);
        let e = eval_binop(BinOp::Rem, i32v(i32::MIN as i128), i32v(-1)).unwrap_err();
        assert_eq!(e.category, Category::Overflow);
        let u = Value::int(0, IntTy::U8);
        assert_eq!(eval_binop(BinOp::Sub, u, lit(1)).unwrap_err().category, Category::Overflow);
        assert_eq!(
            eval_unary(UnOp::Neg, Value::int(1, IntTy::U32)).unwrap_err().category,
            Category::Overflow
        );
    }

    #[test]
    fn division_truncates_toward_zero() {
        assert_eq!(eval_binop(BinOp::Div, i32v(-7), i32v(2)).unwrap(), i32v(-3));
        assert_eq!(eval_binop(BinOp::Rem, i32v(-7), i32v(2)).unwrap(), i32v(-1));
    }

    #[test]
    fn shifts_follow_reference_semantics() {
        assert_eq!(eval_binop(BinOp::Shl, i32v(1), lit(31)).unwrap(), i32v(i32::MIN as i128));
        assert_eq!(eval_binop(BinOp::Shr, i32v(-8), lit(1)).unwrap(), i32v(-4));
        assert_eq!(
            eval_binop(BinOp::Shl, i32v(1), lit(32)).unwrap_err().category,
            Category::Overflow
        );
        let u = Value::int(0x81, IntTy::U8);
        assert_eq!(
            eval_binop(BinOp::Shl, u, Value::int(1, IntTy::U32)).unwrap(),
            Value::int(2, IntTy::U8)
        );
    }

    #[test]
    fn mismatched_types() {
        let e = eval_binop(BinOp::Add, i32v(1), Value::Bool(true)).unwrap_err();
        assert_eq!(e.category, Category::TypeMismatch);
        let e = eval_binop(BinOp::Add, i32v(1), Value::int(1, IntTy::I64)).unwrap_err();
        assert_eq!(e.category, Category::TypeMismatch);
        assert_eq!(
            eval_unary(UnOp::Neg, Value::Bool(true)).unwrap_err().category,
            Category::TypeMismatch
        );
    }

    #[test]
    fn comparisons_and_bitwise_not() {
        assert_eq!(eval_binop(BinOp::Le, i32v(2), i32v(2)).unwrap(), Value::Bool(true));
        assert_eq!(eval_binop(BinOp::Ne, Value::Char('a'), Value::Char('b')).unwrap(), Value::Bool(true));
        assert_eq!(eval_unary(UnOp::Not, i32v(0)).unwrap(), i32v(-1));
        assert_eq!(eval_unary(UnOp::Not, Value::int(1, IntTy::U8)).unwrap(), Value::int(254, IntTy::U8));
    }

    #[test]
    fn literal_retyping() {
        assert_eq!(coerce(lit(5), &TypeExpr::Int(IntTy::I8)).unwrap(), Value::int(5, IntTy::I8));
        assert_eq!(
            coerce(lit(300), &TypeExpr::Int(IntTy::U8)).unwrap_err().category,
            Category::Overflow
        );
        assert_eq!(
            coerce(i32v(5), &TypeExpr::Int(IntTy::I8)).unwrap_err().category,
            Category::TypeMismatch
        );
        assert_eq!(
            coerce(Value::Bool(true), &TypeExpr::Int(IntTy::I32)).unwrap_err().category,
            Category::TypeMismatch
        );
    }

    #[test]
    fn f32_arithmetic_rounds() {
        let a = coerce(Value::float_literal(0.1), &TypeExpr::Float(FloatTy::F32)).unwrap();
        let b = coerce(Value::float_literal(0.2), &TypeExpr::Float(FloatTy::F32)).unwrap();
        let s = eval_binop(BinOp::Add, a, b).unwrap();
        assert_eq!(s.display(), format!("{}", 0.1f32 + 0.2f32));
    }

    #[test]
    fn println_formatting() {
        assert_eq!(format_args("{}", &[lit(5)]).unwrap(), "5");
        assert_eq!(format_args("x={} y={}", &[lit(1), lit(2)]).unwrap(), "x=1 y=2");
        assert_eq!(format_args("{{}}", &[]).unwrap(), "{}");
        assert_eq!(format_args("{}", &[]).unwrap_err().category, Category::ArityMismatch);
        assert_eq!(format_args("", &[lit(1)]).unwrap_err().category, Category::ArityMismatch);
        assert_eq!(format_args("{:?}", &[lit(1)]).unwrap_err().category, Category::Stuck);
    }
}
