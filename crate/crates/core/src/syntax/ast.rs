//! Abstract syntax for the supported Rust subset.
//!
//! Sub-trees are reference counted so the machine can hold pieces of the
//! program in its continuation without copying them.

use std::fmt;
use std::sync::Arc;

/// Line/column position (both 1-based) of a token or node.
///
/// Spans never take part in AST equality: two trees that differ only in
/// their positions compare equal.
#[derive(Clone, Copy, Debug, Default, Eq, Hash)]
pub struct Span {
    pub line: u32,
    pub col: u32,
}

impl Span {
    pub fn new(line: u32, col: u32) -> Self {
        Span { line, col }
    }
}

impl PartialEq for Span {
    fn eq(&self, _other: &Self) -> bool {
        true
    }
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum IntTy {
    I8,
    U8,
    I16,
    U16,
    I32,
    U32,
    I64,
    U64,
    Isize,
    Usize,
}

impl IntTy {
    pub const ALL: [IntTy; 10] = [
        IntTy::I8,
        IntTy::U8,
        IntTy::I16,
        IntTy::U16,
        IntTy::I32,
        IntTy::U32,
        IntTy::I64,
        IntTy::U64,
        IntTy::Isize,
        IntTy::Usize,
    ];

    pub fn name(self) -> &'static str {
        match self {
            IntTy::I8 => "i8",
            IntTy::U8 => "u8",
            IntTy::I16 => "i16",
            IntTy::U16 => "u16",
            IntTy::I32 => "i32",
            IntTy::U32 => "u32",
            IntTy::I64 => "i64",
            IntTy::U64 => "u64",
            IntTy::Isize => "isize",
            IntTy::Usize => "usize",
        }
    }

    pub fn from_name(name: &str) -> Option<IntTy> {
        IntTy::ALL.into_iter().find(|t| t.name() == name)
    }

    pub fn bits(self) -> u32 {
        match self {
            IntTy::I8 | IntTy::U8 => 8,
            IntTy::I16 | IntTy::U16 => 16,
            IntTy::I32 | IntTy::U32 => 32,
            IntTy::I64 | IntTy::U64 | IntTy::Isize | IntTy::Usize => 64,
        }
    }

    pub fn signed(self) -> bool {
        matches!(
            self,
            IntTy::I8 | IntTy::I16 | IntTy::I32 | IntTy::I64 | IntTy::Isize
        )
    }

    pub fn min(self) -> i128 {
        if self.signed() {
            -(1i128 << (self.bits() - 1))
        } else {
            0
        }
    }

    pub fn max(self) -> i128 {
        if self.signed() {
            (1i128 << (self.bits() - 1)) - 1
        } else {
            (1i128 << self.bits()) - 1
        }
    }

    pub fn contains(self, v: i128) -> bool {
        v >= self.min() && v <= self.max()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FloatTy {
    F32,
    F64,
}

impl FloatTy {
    pub fn name(self) -> &'static str {
        match self {
            FloatTy::F32 => "f32",
            FloatTy::F64 => "f64",
        }
    }
}

/// Shared (`&`) or exclusive (`&mut`) reference.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RefKind {
    Shared,
    Exclusive,
}

impl RefKind {
    /// Cell encoding: 0 for shared, 1 for exclusive.
    pub fn flag(self) -> u8 {
        match self {
            RefKind::Shared => 0,
            RefKind::Exclusive => 1,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum TypeExpr {
    Int(IntTy),
    Float(FloatTy),
    Char,
    /// `&str`
    Str,
    Bool,
    Unit,
    /// A struct name.
    Named(String),
    Array(Box<TypeExpr>, u64),
    Fn(Vec<TypeExpr>, Box<TypeExpr>),
    /// Type of a reference variable. Never written in source; assigned by
    /// the borrow rules.
    Ref(RefKind, Box<TypeExpr>),
    /// Not yet known (`let x;`). Fixed by the first store.
    Infer,
}

impl TypeExpr {
    pub fn is_int(&self) -> bool {
        matches!(self, TypeExpr::Int(_))
    }
}

impl fmt::Display for TypeExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TypeExpr::Int(t) => f.write_str(t.name()),
            TypeExpr::Float(t) => f.write_str(t.name()),
            TypeExpr::Char => f.write_str("char"),
            TypeExpr::Str => f.write_str("&str"),
            TypeExpr::Bool => f.write_str("bool"),
            TypeExpr::Unit => f.write_str("()"),
            TypeExpr::Named(n) => f.write_str(n),
            TypeExpr::Array(t, n) => write!(f, "[{t}; {n}]"),
            TypeExpr::Fn(params, ret) => {
                f.write_str("fn(")?;
                for (i, p) in params.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{p}")?;
                }
                write!(f, ") -> {ret}")
            }
            TypeExpr::Ref(RefKind::Shared, t) => write!(f, "&{t}"),
            TypeExpr::Ref(RefKind::Exclusive, t) => write!(f, "&mut {t}"),
            TypeExpr::Infer => f.write_str("_"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Program {
    pub items: Vec<Item>,
}

impl Program {
    pub fn function(&self, name: &str) -> Option<&Arc<FnDecl>> {
        self.items.iter().find_map(|item| match item {
            Item::Function(f) if f.name == name => Some(f),
            _ => None,
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Item {
    Function(Arc<FnDecl>),
    Struct(Arc<StructDecl>),
    ConstStatic(Arc<ConstStatic>),
}

impl Item {
    pub fn name(&self) -> &str {
        match self {
            Item::Function(f) => &f.name,
            Item::Struct(s) => &s.name,
            Item::ConstStatic(c) => &c.name,
        }
    }

    pub fn span(&self) -> Span {
        match self {
            Item::Function(f) => f.span,
            Item::Struct(s) => s.span,
            Item::ConstStatic(c) => c.span,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TypedId {
    pub name: String,
    pub ty: TypeExpr,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FnDecl {
    pub name: String,
    pub params: Vec<TypedId>,
    pub ret: Option<TypeExpr>,
    pub body: Arc<Block>,
    pub span: Span,
}

#[derive(Clone, Debug, PartialEq)]
pub struct StructDecl {
    pub name: String,
    pub fields: Vec<TypedId>,
    pub span: Span,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StaticKind {
    Const,
    Static,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConstStatic {
    pub kind: StaticKind,
    pub mutable: bool,
    pub name: String,
    pub ty: TypeExpr,
    pub init: Arc<Expr>,
    pub span: Span,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Block {
    pub stmts: Vec<Arc<Stmt>>,
    pub tail: Option<Arc<Expr>>,
    pub span: Span,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Stmt {
    pub kind: StmtKind,
    pub span: Span,
}

#[derive(Clone, Debug, PartialEq)]
pub enum StmtKind {
    Let {
        mutable: bool,
        name: String,
        ty: Option<TypeExpr>,
        init: Option<Arc<Expr>>,
    },
    Assign {
        target: AssignTarget,
        op: AssignOp,
        value: Arc<Expr>,
    },
    Expr(Arc<Expr>),
    Return(Option<Arc<Expr>>),
    If {
        cond: Arc<Expr>,
        then: Arc<Block>,
        otherwise: Option<Arc<Block>>,
    },
    While {
        cond: Arc<Expr>,
        body: Arc<Block>,
    },
    Loop {
        body: Arc<Block>,
    },
    For {
        var: String,
        lo: Arc<Expr>,
        hi: Arc<Expr>,
        body: Arc<Block>,
    },
    Block(Arc<Block>),
    Item(Item),
}

/// The four assignable places.
#[derive(Clone, Debug, PartialEq)]
pub enum AssignTarget {
    Var(String),
    Index(String, Arc<Expr>),
    Deref(String),
    Field(String, String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AssignOp {
    Assign,
    Add,
    Sub,
    Mul,
    Div,
}

impl AssignOp {
    pub fn symbol(self) -> &'static str {
        match self {
            AssignOp::Assign => "=",
            AssignOp::Add => "+=",
            AssignOp::Sub => "-=",
            AssignOp::Mul => "*=",
            AssignOp::Div => "/=",
        }
    }

    /// The binary operator a compound assignment desugars to.
    pub fn binop(self) -> Option<BinOp> {
        match self {
            AssignOp::Assign => None,
            AssignOp::Add => Some(BinOp::Add),
            AssignOp::Sub => Some(BinOp::Sub),
            AssignOp::Mul => Some(BinOp::Mul),
            AssignOp::Div => Some(BinOp::Div),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Rem,
    BitOr,
    BitAnd,
    Shr,
    Shl,
    Lt,
    Le,
    Gt,
    Ge,
    Eq,
    Ne,
    Or,
    And,
}

impl BinOp {
    pub const ALL: [BinOp; 17] = [
        BinOp::Add,
        BinOp::Sub,
        BinOp::Mul,
        BinOp::Div,
        BinOp::Rem,
        BinOp::BitOr,
        BinOp::BitAnd,
        BinOp::Shr,
        BinOp::Shl,
        BinOp::Lt,
        BinOp::Le,
        BinOp::Gt,
        BinOp::Ge,
        BinOp::Eq,
        BinOp::Ne,
        BinOp::Or,
        BinOp::And,
    ];

    pub fn symbol(self) -> &'static str {
        match self {
            BinOp::Add => "+",
            BinOp::Sub => "-",
            BinOp::Mul => "*",
            BinOp::Div => "/",
            BinOp::Rem => "%",
            BinOp::BitOr => "|",
            BinOp::BitAnd => "&",
            BinOp::Shr => ">>",
            BinOp::Shl => "<<",
            BinOp::Lt => "<",
            BinOp::Le => "<=",
            BinOp::Gt => ">",
            BinOp::Ge => ">=",
            BinOp::Eq => "==",
            BinOp::Ne => "!=",
            BinOp::Or => "||",
            BinOp::And => "&&",
        }
    }

    /// Binding strength; larger binds tighter.
    pub fn precedence(self) -> u8 {
        match self {
            BinOp::Or => 1,
            BinOp::And => 2,
            BinOp::Lt | BinOp::Le | BinOp::Gt | BinOp::Ge | BinOp::Eq | BinOp::Ne => 3,
            BinOp::BitOr => 4,
            BinOp::BitAnd => 5,
            BinOp::Shl | BinOp::Shr => 6,
            BinOp::Add | BinOp::Sub => 7,
            BinOp::Mul | BinOp::Div | BinOp::Rem => 8,
        }
    }

    pub fn is_comparison(self) -> bool {
        self.precedence() == 3
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum UnOp {
    Neg,
    Not,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Callee {
    Named(String),
    /// `println!`; the first argument is the format string.
    Println,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Expr {
    pub kind: ExprKind,
    pub span: Span,
}

impl Expr {
    pub fn new(kind: ExprKind, span: Span) -> Self {
        Expr { kind, span }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum ExprKind {
    Int(u128),
    Float(f64),
    Bool(bool),
    Str(String),
    Char(char),
    /// `()`
    Unit,
    Ident(String),
    Deref(String),
    Array(Vec<Arc<Expr>>),
    Repeat {
        elem: Arc<Expr>,
        count: Arc<Expr>,
    },
    Vec(Vec<Arc<Expr>>),
    Paren(Arc<Expr>),
    Index {
        name: String,
        index: Arc<Expr>,
    },
    Block(Arc<Block>),
    Borrow {
        kind: RefKind,
        operand: Arc<Expr>,
    },
    StructLit {
        name: String,
        fields: Vec<(String, Arc<Expr>)>,
    },
    Call {
        callee: Callee,
        args: Vec<Arc<Expr>>,
    },
    Unary {
        op: UnOp,
        operand: Arc<Expr>,
    },
    Binary {
        op: BinOp,
        lhs: Arc<Expr>,
        rhs: Arc<Expr>,
    },
    Field {
        var: String,
        field: String,
    },
}
