use std::fmt;
use std::sync::Arc;

use crate::syntax::{Block, FloatTy, IntTy, RefKind, TypeExpr, TypedId};

/// Abstract memory address. Allocated from `nextLoc`, never reused.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Location(pub u64);

impl fmt::Display for Location {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// `λ(TIDs, S, T)`: a function body after definition-time desugaring.
#[derive(Clone, Debug, PartialEq)]
pub struct Closure {
    pub name: String,
    pub params: Vec<TypedId>,
    pub body: Arc<Block>,
    pub ret: TypeExpr,
}

impl Closure {
    pub fn fn_type(&self) -> TypeExpr {
        TypeExpr::Fn(
            self.params.iter().map(|p| p.ty.clone()).collect(),
            Box::new(self.ret.clone()),
        )
    }
}

/// `F1(TIDs)`: the field list of a struct definition.
#[derive(Clone, Debug, PartialEq)]
pub struct StructDesc {
    pub name: String,
    pub fields: Vec<TypedId>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Value {
    /// `flex` marks an integer literal whose type has not been fixed by
    /// context yet; it adopts the type of whatever it meets first.
    Int { value: i128, ty: IntTy, flex: bool },
    Float { value: f64, ty: FloatTy, flex: bool },
    Bool(bool),
    Char(char),
    Str(Arc<str>),
    Unit,
    /// ⊥
    Undefined,
    Closure(Arc<Closure>),
    StructDesc(Arc<StructDesc>),
    /// Marker stored at a struct variable's own location.
    StructInst(Arc<str>),
    /// Transient array value. Arrays live in the store element-wise.
    Array(Vec<Value>),
    /// Transient or stored reference. `ty` is the referent's type.
    Ref {
        target: Location,
        kind: RefKind,
        ty: Arc<TypeExpr>,
    },
}

impl Value {
    pub fn int(value: i128, ty: IntTy) -> Value {
        Value::Int {
            value,
            ty,
            flex: false,
        }
    }

    /// An unsuffixed integer literal. Defaults to i32, widening when the
    /// magnitude does not fit.
    pub fn int_literal(value: i128) -> Option<Value> {
        let ty = [IntTy::I32, IntTy::I64, IntTy::U64]
            .into_iter()
            .find(|t| t.contains(value))?;
        Some(Value::Int {
            value,
            ty,
            flex: true,
        })
    }

    pub fn float_literal(value: f64) -> Value {
        Value::Float {
            value,
            ty: FloatTy::F64,
            flex: true,
        }
    }

    pub fn is_undefined(&self) -> bool {
        matches!(self, Value::Undefined)
    }

    /// The `getType` of the rules; `None` for ⊥.
    pub fn get_type(&self) -> Option<TypeExpr> {
        Some(match self {
            Value::Int { ty, .. } => TypeExpr::Int(*ty),
            Value::Float { ty, .. } => TypeExpr::Float(*ty),
            Value::Bool(_) => TypeExpr::Bool,
            Value::Char(_) => TypeExpr::Char,
            Value::Str(_) => TypeExpr::Str,
            Value::Unit => TypeExpr::Unit,
            Value::Undefined => return None,
            Value::Closure(c) => c.fn_type(),
            Value::StructDesc(d) => TypeExpr::Named(d.name.clone()),
            Value::StructInst(name) => TypeExpr::Named(name.to_string()),
            Value::Array(items) => {
                let elem = items
                    .first()
                    .and_then(|v| v.get_type())
                    .unwrap_or(TypeExpr::Infer);
                TypeExpr::Array(Box::new(elem), items.len() as u64)
            }
            Value::Ref { kind, ty, .. } => TypeExpr::Ref(*kind, Box::new((**ty).clone())),
        })
    }

    /// Drops the literal flag, committing to the default type.
    pub fn settle(self) -> Value {
        match self {
            Value::Int { value, ty, .. } => Value::int(value, ty),
            Value::Float { value, ty, .. } => Value::Float {
                value,
                ty,
                flex: false,
            },
            Value::Array(items) => Value::Array(items.into_iter().map(Value::settle).collect()),
            other => other,
        }
    }

    /// Text produced by `{}` in a format string.
    pub fn display(&self) -> String {
        match self {
            Value::Int { value, .. } => value.to_string(),
            Value::Float { value, ty, .. } => match ty {
                FloatTy::F32 => format!("{}", *value as f32),
                FloatTy::F64 => format!("{value}"),
            },
            Value::Bool(b) => b.to_string(),
            Value::Char(c) => c.to_string(),
            Value::Str(s) => s.to_string(),
            Value::Unit => "()".to_string(),
            other => other.to_string(),
        }
    }
}

/// Cell notation used by the debugger.
impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Int { value, .. } => write!(f, "{value}"),
            Value::Float { value, ty, .. } => match ty {
                FloatTy::F32 => write!(f, "{:?}", *value as f32),
                FloatTy::F64 => write!(f, "{value:?}"),
            },
            Value::Bool(b) => write!(f, "{b}"),
            Value::Char(c) => write!(f, "{c:?}"),
            Value::Str(s) => write!(f, "{:?}", &**s),
            Value::Unit => f.write_str("()"),
            Value::Undefined => f.write_str("⊥"),
            Value::Closure(c) => {
                f.write_str("λ((")?;
                write_tids(f, &c.params)?;
                write!(
                    f,
                    "), {}, {})",
                    crate::syntax::pretty::block(&c.body),
                    c.ret
                )
            }
            Value::StructDesc(d) => {
                f.write_str("F1(")?;
                write_tids(f, &d.fields)?;
                f.write_str(")")
            }
            Value::StructInst(name) => write!(f, "{name}"),
            Value::Array(items) => {
                f.write_str("[")?;
                for (i, v) in items.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{v}")?;
                }
                f.write_str("]")
            }
            Value::Ref { target, kind, .. } => match kind {
                RefKind::Shared => write!(f, "&{target}"),
                RefKind::Exclusive => write!(f, "&mut {target}"),
            },
        }
    }
}

fn write_tids(f: &mut fmt::Formatter<'_>, tids: &[TypedId]) -> fmt::Result {
    for (i, t) in tids.iter().enumerate() {
        if i > 0 {
            f.write_str(", ")?;
        }
        write!(f, "{}: {}", t.name, t.ty)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn literal_defaults() {
        assert_eq!(Value::int_literal(5).unwrap().get_type(), Some(TypeExpr::Int(IntTy::I32)));
        assert_eq!(
            Value::int_literal(1 << 40).unwrap().get_type(),
            Some(TypeExpr::Int(IntTy::I64))
        );
        assert_eq!(
            Value::int_literal(u64::MAX as i128).unwrap().get_type(),
            Some(TypeExpr::Int(IntTy::U64))
        );
        assert!(Value::int_literal(u64::MAX as i128 + 1).is_none());
    }

    #[test]
    fn get_type_projects_tags() {
        assert_eq!(Value::int(5, IntTy::I32).get_type(), Some(TypeExpr::Int(IntTy::I32)));
        assert_eq!(Value::Bool(true).get_type(), Some(TypeExpr::Bool));
        assert_eq!(
            Value::StructInst("Point".into()).get_type(),
            Some(TypeExpr::Named("Point".into()))
        );
        assert_eq!(Value::Undefined.get_type(), None);
    }

    #[test]
    fn display_matches_reference_formatting() {
        assert_eq!(Value::float_literal(1.0).display(), "1");
        assert_eq!(Value::float_literal(0.1 + 0.2).display(), format!("{}", 0.1 + 0.2));
        let f32v = Value::Float {
            value: (0.1f32 as f64),
            ty: FloatTy::F32,
            flex: false,
        };
        assert_eq!(f32v.display(), "0.1");
        assert_eq!(Value::Char('q').display(), "q");
        assert_eq!(Value::Undefined.to_string(), "⊥");
    }
}
