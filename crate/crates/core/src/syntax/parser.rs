use std::sync::Arc;

use thiserror::Error;

use super::ast::*;
use super::lexer::{Token, TokenKind};

#[derive(Clone, Debug, PartialEq, Error)]
#[error("{span}: expected {expected}, found {found}")]
pub struct ParseError {
    pub span: Span,
    pub expected: String,
    pub found: String,
}

type PResult<T> = Result<T, ParseError>;

pub fn parse(tokens: &[Token]) -> Result<Program, ParseError> {
    let mut p = Parser {
        tokens,
        pos: 0,
        no_struct: false,
    };
    p.program()
}

struct Parser<'t> {
    tokens: &'t [Token],
    pos: usize,
    /// Set while parsing `if`/`while` conditions and `for` bounds, where
    /// `name {` opens the body rather than a struct literal.
    no_struct: bool,
}

impl<'t> Parser<'t> {
    fn peek(&self) -> Option<&TokenKind> {
        self.tokens.get(self.pos).map(|t| &t.kind)
    }

    fn peek_at(&self, n: usize) -> Option<&TokenKind> {
        self.tokens.get(self.pos + n).map(|t| &t.kind)
    }

    fn span(&self) -> Span {
        match self.tokens.get(self.pos) {
            Some(t) => t.span,
            None => self
                .tokens
                .last()
                .map(|t| Span::new(t.span.line, t.span.col + 1))
                .unwrap_or(Span::new(1, 1)),
        }
    }

    fn at(&self, kind: &TokenKind) -> bool {
        self.peek() == Some(kind)
    }

    fn eat(&mut self, kind: &TokenKind) -> bool {
        if self.at(kind) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn error<T>(&self, expected: impl Into<String>) -> PResult<T> {
        Err(ParseError {
            span: self.span(),
            expected: expected.into(),
            found: match self.peek() {
                Some(k) => k.to_string(),
                None => "end of input".to_string(),
            },
        })
    }

    fn expect(&mut self, kind: TokenKind) -> PResult<()> {
        if self.eat(&kind) {
            Ok(())
        } else {
            self.error(kind.to_string())
        }
    }

    fn ident(&mut self) -> PResult<String> {
        match self.peek() {
            Some(TokenKind::Ident(name)) => {
                let name = name.clone();
                self.pos += 1;
                Ok(name)
            }
            _ => self.error("identifier"),
        }
    }

    fn program(&mut self) -> PResult<Program> {
        let mut items = Vec::new();
        while self.peek().is_some() {
            match self.item()? {
                Some(item) => items.push(item),
                None => return self.error("`fn`, `struct`, `const` or `static`"),
            }
        }
        Ok(Program { items })
    }

    /// Parses an item if one starts here.
    fn item(&mut self) -> PResult<Option<Item>> {
        let item = match self.peek() {
            Some(TokenKind::Fn) => Item::Function(Arc::new(self.function()?)),
            Some(TokenKind::Struct) => Item::Struct(Arc::new(self.struct_decl()?)),
            Some(TokenKind::Const) | Some(TokenKind::Static) => {
                Item::ConstStatic(Arc::new(self.const_static()?))
            }
            _ => return Ok(None),
        };
        Ok(Some(item))
    }

    fn function(&mut self) -> PResult<FnDecl> {
        let span = self.span();
        self.expect(TokenKind::Fn)?;
        let name = self.ident()?;
        self.expect(TokenKind::LParen)?;
        let params = self.typed_ids(TokenKind::RParen)?;
        let ret = if self.eat(&TokenKind::Arrow) {
            Some(self.type_expr()?)
        } else {
            None
        };
        let body = Arc::new(self.block()?);
        Ok(FnDecl {
            name,
            params,
            ret,
            body,
            span,
        })
    }

    fn typed_ids(&mut self, close: TokenKind) -> PResult<Vec<TypedId>> {
        let mut out = Vec::new();
        while !self.eat(&close) {
            let name = self.ident()?;
            self.expect(TokenKind::Colon)?;
            let ty = self.type_expr()?;
            out.push(TypedId { name, ty });
            if !self.eat(&TokenKind::Comma) {
                self.expect(close)?;
                break;
            }
        }
        Ok(out)
    }

    fn struct_decl(&mut self) -> PResult<StructDecl> {
        let span = self.span();
        self.expect(TokenKind::Struct)?;
        let name = self.ident()?;
        self.expect(TokenKind::LBrace)?;
        let fields = self.typed_ids(TokenKind::RBrace)?;
        Ok(StructDecl { name, fields, span })
    }

    fn const_static(&mut self) -> PResult<ConstStatic> {
        let span = self.span();
        let kind = if self.eat(&TokenKind::Const) {
            StaticKind::Const
        } else {
            self.expect(TokenKind::Static)?;
            StaticKind::Static
        };
        let mutable = kind == StaticKind::Static && self.eat(&TokenKind::Mut);
        let name = self.ident()?;
        self.expect(TokenKind::Colon)?;
        let ty = self.type_expr()?;
        self.expect(TokenKind::Eq)?;
        let init = Arc::new(self.expr()?);
        self.expect(TokenKind::Semi)?;
        Ok(ConstStatic {
            kind,
            mutable,
            name,
            ty,
            init,
            span,
        })
    }

    fn type_expr(&mut self) -> PResult<TypeExpr> {
        match self.peek().cloned() {
            Some(TokenKind::Ident(name)) => {
                self.pos += 1;
                Ok(match name.as_str() {
                    "f32" => TypeExpr::Float(FloatTy::F32),
                    "f64" => TypeExpr::Float(FloatTy::F64),
                    "char" => TypeExpr::Char,
                    "bool" => TypeExpr::Bool,
                    other => match IntTy::from_name(other) {
                        Some(t) => TypeExpr::Int(t),
                        None => TypeExpr::Named(name),
                    },
                })
            }
            Some(TokenKind::Amp) => {
                self.pos += 1;
                match self.peek() {
                    Some(TokenKind::Ident(s)) if s == "str" => {
                        self.pos += 1;
                        Ok(TypeExpr::Str)
                    }
                    _ => self.error("`str` (only `&str` is a reference type)"),
                }
            }
            Some(TokenKind::LParen) => {
                self.pos += 1;
                self.expect(TokenKind::RParen)?;
                Ok(TypeExpr::Unit)
            }
            Some(TokenKind::LBracket) => {
                self.pos += 1;
                let elem = self.type_expr()?;
                self.expect(TokenKind::Semi)?;
                let len = match self.peek() {
                    Some(TokenKind::Int(n)) => {
                        let n = u64::try_from(*n).map_err(|_| ParseError {
                            span: self.span(),
                            expected: "array length".into(),
                            found: "oversized literal".into(),
                        })?;
                        self.pos += 1;
                        n
                    }
                    _ => return self.error("integer literal array length"),
                };
                self.expect(TokenKind::RBracket)?;
                Ok(TypeExpr::Array(Box::new(elem), len))
            }
            Some(TokenKind::Fn) => {
                self.pos += 1;
                self.expect(TokenKind::LParen)?;
                let mut params = Vec::new();
                while !self.eat(&TokenKind::RParen) {
                    params.push(self.type_expr()?);
                    if !self.eat(&TokenKind::Comma) {
                        self.expect(TokenKind::RParen)?;
                        break;
                    }
                }
                let ret = if self.eat(&TokenKind::Arrow) {
                    self.type_expr()?
                } else {
                    TypeExpr::Unit
                };
                Ok(TypeExpr::Fn(params, Box::new(ret)))
            }
            _ => self.error("type"),
        }
    }

    fn block(&mut self) -> PResult<Block> {
        let span = self.span();
        self.expect(TokenKind::LBrace)?;
        let saved = std::mem::replace(&mut self.no_struct, false);
        let result = self.block_body(span);
        self.no_struct = saved;
        result
    }

    fn block_body(&mut self, span: Span) -> PResult<Block> {
        let mut stmts: Vec<Arc<Stmt>> = Vec::new();
        loop {
            if self.eat(&TokenKind::RBrace) {
                return Ok(Block {
                    stmts,
                    tail: None,
                    span,
                });
            }
            if self.peek().is_none() {
                return self.error("`}`");
            }
            match self.stmt_or_tail()? {
                Either::Stmt(s) => stmts.push(Arc::new(s)),
                Either::Tail(e) => {
                    self.expect(TokenKind::RBrace)?;
                    return Ok(Block {
                        stmts,
                        tail: Some(Arc::new(e)),
                        span,
                    });
                }
            }
        }
    }

    fn stmt_or_tail(&mut self) -> PResult<Either> {
        let span = self.span();
        let stmt = |kind| Ok(Either::Stmt(Stmt { kind, span }));
        match self.peek() {
            Some(TokenKind::Let) => {
                self.pos += 1;
                let mutable = self.eat(&TokenKind::Mut);
                let name = self.ident()?;
                let ty = if self.eat(&TokenKind::Colon) {
                    Some(self.type_expr()?)
                } else {
                    None
                };
                let init = if self.eat(&TokenKind::Eq) {
                    Some(Arc::new(self.expr()?))
                } else {
                    None
                };
                self.expect(TokenKind::Semi)?;
                stmt(StmtKind::Let {
                    mutable,
                    name,
                    ty,
                    init,
                })
            }
            Some(TokenKind::Fn) | Some(TokenKind::Struct) | Some(TokenKind::Const)
            | Some(TokenKind::Static) => {
                let item = self.item()?.expect("item keyword");
                stmt(StmtKind::Item(item))
            }
            Some(TokenKind::Return) => {
                self.pos += 1;
                let value = if self.at(&TokenKind::Semi) {
                    None
                } else {
                    Some(Arc::new(self.expr()?))
                };
                self.expect(TokenKind::Semi)?;
                stmt(StmtKind::Return(value))
            }
            Some(TokenKind::If) => {
                let s = self.if_stmt()?;
                self.eat(&TokenKind::Semi);
                Ok(Either::Stmt(s))
            }
            Some(TokenKind::While) => {
                self.pos += 1;
                let cond = Arc::new(self.cond_expr()?);
                let body = Arc::new(self.block()?);
                self.eat(&TokenKind::Semi);
                stmt(StmtKind::While { cond, body })
            }
            Some(TokenKind::Loop) => {
                self.pos += 1;
                let body = Arc::new(self.block()?);
                self.eat(&TokenKind::Semi);
                stmt(StmtKind::Loop { body })
            }
            Some(TokenKind::For) => {
                self.pos += 1;
                let var = self.ident()?;
                self.expect(TokenKind::In)?;
                let saved = std::mem::replace(&mut self.no_struct, true);
                let lo = self.expr();
                let hi = lo.and_then(|lo| {
                    self.expect(TokenKind::DotDot)?;
                    Ok((lo, self.expr()?))
                });
                self.no_struct = saved;
                let (lo, hi) = hi?;
                let body = Arc::new(self.block()?);
                self.eat(&TokenKind::Semi);
                stmt(StmtKind::For {
                    var,
                    lo: Arc::new(lo),
                    hi: Arc::new(hi),
                    body,
                })
            }
            Some(TokenKind::LBrace) => {
                let block = Arc::new(self.block()?);
                // `{ ... e }` right before the closing brace is the value.
                if block.tail.is_some() && self.at(&TokenKind::RBrace) {
                    return Ok(Either::Tail(Expr::new(ExprKind::Block(block), span)));
                }
                self.eat(&TokenKind::Semi);
                stmt(StmtKind::Block(block))
            }
            _ => {
                let e = self.expr()?;
                let op = match self.peek() {
                    Some(TokenKind::Eq) => Some(AssignOp::Assign),
                    Some(TokenKind::PlusEq) => Some(AssignOp::Add),
                    Some(TokenKind::MinusEq) => Some(AssignOp::Sub),
                    Some(TokenKind::StarEq) => Some(AssignOp::Mul),
                    Some(TokenKind::SlashEq) => Some(AssignOp::Div),
                    _ => None,
                };
                if let Some(op) = op {
                    let target = match &e.kind {
                        ExprKind::Ident(n) => AssignTarget::Var(n.clone()),
                        ExprKind::Index { name, index } => {
                            AssignTarget::Index(name.clone(), index.clone())
                        }
                        ExprKind::Deref(n) => AssignTarget::Deref(n.clone()),
                        ExprKind::Field { var, field } => {
                            AssignTarget::Field(var.clone(), field.clone())
                        }
                        _ => {
                            return Err(ParseError {
                                span: e.span,
                                expected: "assignable place (`x`, `x[i]`, `*x` or `x.f`)".into(),
                                found: "expression".into(),
                            })
                        }
                    };
                    self.pos += 1;
                    let value = Arc::new(self.expr()?);
                    self.expect(TokenKind::Semi)?;
                    return stmt(StmtKind::Assign { target, op, value });
                }
                if self.eat(&TokenKind::Semi) {
                    return stmt(StmtKind::Expr(Arc::new(e)));
                }
                if self.at(&TokenKind::RBrace) {
                    return Ok(Either::Tail(e));
                }
                self.error("`;`")
            }
        }
    }

    fn if_stmt(&mut self) -> PResult<Stmt> {
        let span = self.span();
        self.expect(TokenKind::If)?;
        let cond = Arc::new(self.cond_expr()?);
        let then = Arc::new(self.block()?);
        let otherwise = if self.eat(&TokenKind::Else) {
            if self.at(&TokenKind::If) {
                let nested_span = self.span();
                let nested = self.if_stmt()?;
                Some(Arc::new(Block {
                    stmts: vec![Arc::new(nested)],
                    tail: None,
                    span: nested_span,
                }))
            } else {
                Some(Arc::new(self.block()?))
            }
        } else {
            None
        };
        Ok(Stmt {
            kind: StmtKind::If {
                cond,
                then,
                otherwise,
            },
            span,
        })
    }

    fn cond_expr(&mut self) -> PResult<Expr> {
        let saved = std::mem::replace(&mut self.no_struct, true);
        let e = self.expr();
        self.no_struct = saved;
        e
    }

    pub fn expr(&mut self) -> PResult<Expr> {
        self.binary(1)
    }

    fn binop_here(&self) -> Option<BinOp> {
        Some(match self.peek()? {
            TokenKind::Plus => BinOp::Add,
            TokenKind::Minus => BinOp::Sub,
            TokenKind::Star => BinOp::Mul,
            TokenKind::Slash => BinOp::Div,
            TokenKind::Percent => BinOp::Rem,
            TokenKind::Pipe => BinOp::BitOr,
            TokenKind::Amp => BinOp::BitAnd,
            TokenKind::Shr => BinOp::Shr,
            TokenKind::Shl => BinOp::Shl,
            TokenKind::Lt => BinOp::Lt,
            TokenKind::Le => BinOp::Le,
            TokenKind::Gt => BinOp::Gt,
            TokenKind::Ge => BinOp::Ge,
            TokenKind::EqEq => BinOp::Eq,
            TokenKind::Ne => BinOp::Ne,
            TokenKind::PipePipe => BinOp::Or,
            TokenKind::AmpAmp => BinOp::And,
            _ => return None,
        })
    }

    /// Precedence climbing over the left-associative binary operators.
    fn binary(&mut self, min_prec: u8) -> PResult<Expr> {
        let mut lhs = self.unary()?;
        while let Some(op) = self.binop_here() {
            let prec = op.precedence();
            if prec < min_prec {
                break;
            }
            let span = self.span();
            self.pos += 1;
            let rhs = self.binary(prec + 1)?;
            if op.is_comparison() {
                if let Some(next) = self.binop_here() {
                    if next.is_comparison() {
                        return Err(ParseError {
                            span: self.span(),
                            expected: "parentheses around chained comparison".into(),
                            found: next.symbol().to_string(),
                        });
                    }
                }
            }
            lhs = Expr::new(
                ExprKind::Binary {
                    op,
                    lhs: Arc::new(lhs),
                    rhs: Arc::new(rhs),
                },
                span,
            );
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> PResult<Expr> {
        let span = self.span();
        match self.peek() {
            Some(TokenKind::Minus) => {
                self.pos += 1;
                let operand = Arc::new(self.unary()?);
                Ok(Expr::new(
                    ExprKind::Unary {
                        op: UnOp::Neg,
                        operand,
                    },
                    span,
                ))
            }
            Some(TokenKind::Bang) => {
                self.pos += 1;
                let operand = Arc::new(self.unary()?);
                Ok(Expr::new(
                    ExprKind::Unary {
                        op: UnOp::Not,
                        operand,
                    },
                    span,
                ))
            }
            Some(TokenKind::Amp) => {
                self.pos += 1;
                self.borrow_rest(span)
            }
            Some(TokenKind::AmpAmp) => {
                // `&&x` is two borrows.
                self.pos += 1;
                let inner_span = Span::new(span.line, span.col + 1);
                let inner = self.borrow_rest(inner_span)?;
                Ok(Expr::new(
                    ExprKind::Borrow {
                        kind: RefKind::Shared,
                        operand: Arc::new(inner),
                    },
                    span,
                ))
            }
            Some(TokenKind::Star) => {
                self.pos += 1;
                let name = self.ident()?;
                Ok(Expr::new(ExprKind::Deref(name), span))
            }
            _ => self.primary(),
        }
    }

    fn borrow_rest(&mut self, span: Span) -> PResult<Expr> {
        let kind = if self.eat(&TokenKind::Mut) {
            RefKind::Exclusive
        } else {
            RefKind::Shared
        };
        let operand = Arc::new(self.unary()?);
        Ok(Expr::new(ExprKind::Borrow { kind, operand }, span))
    }

    fn expr_list(&mut self, close: TokenKind) -> PResult<Vec<Arc<Expr>>> {
        let mut out = Vec::new();
        while !self.eat(&close) {
            out.push(Arc::new(self.expr()?));
            if !self.eat(&TokenKind::Comma) {
                self.expect(close)?;
                break;
            }
        }
        Ok(out)
    }

    /// Runs `f` with the struct-literal restriction lifted (inside
    /// delimiters the restriction no longer applies).
    fn nested<T>(&mut self, f: impl FnOnce(&mut Self) -> PResult<T>) -> PResult<T> {
        let saved = std::mem::replace(&mut self.no_struct, false);
        let r = f(self);
        self.no_struct = saved;
        r
    }

    fn primary(&mut self) -> PResult<Expr> {
        let span = self.span();
        let Some(tok) = self.peek().cloned() else {
            return self.error("expression");
        };
        let kind = match tok {
            TokenKind::Int(v) => {
                self.pos += 1;
                ExprKind::Int(v)
            }
            TokenKind::Float(v) => {
                self.pos += 1;
                ExprKind::Float(v)
            }
            TokenKind::True => {
                self.pos += 1;
                ExprKind::Bool(true)
            }
            TokenKind::False => {
                self.pos += 1;
                ExprKind::Bool(false)
            }
            TokenKind::Str(s) => {
                self.pos += 1;
                ExprKind::Str(s)
            }
            TokenKind::Char(c) => {
                self.pos += 1;
                ExprKind::Char(c)
            }
            TokenKind::LParen => {
                self.pos += 1;
                if self.eat(&TokenKind::RParen) {
                    ExprKind::Unit
                } else {
                    let inner = self.nested(|p| p.expr())?;
                    self.expect(TokenKind::RParen)?;
                    ExprKind::Paren(Arc::new(inner))
                }
            }
            TokenKind::LBracket => {
                self.pos += 1;
                self.nested(|p| {
                    if p.eat(&TokenKind::RBracket) {
                        return Ok(ExprKind::Array(Vec::new()));
                    }
                    let first = Arc::new(p.expr()?);
                    if p.eat(&TokenKind::Semi) {
                        let count = Arc::new(p.expr()?);
                        p.expect(TokenKind::RBracket)?;
                        return Ok(ExprKind::Repeat { elem: first, count });
                    }
                    let mut elems = vec![first];
                    if p.eat(&TokenKind::Comma) {
                        elems.extend(p.expr_list(TokenKind::RBracket)?);
                    } else {
                        p.expect(TokenKind::RBracket)?;
                    }
                    Ok(ExprKind::Array(elems))
                })?
            }
            TokenKind::Macro(name) if name == "vec" => {
                self.pos += 1;
                self.expect(TokenKind::LBracket)?;
                ExprKind::Vec(self.nested(|p| p.expr_list(TokenKind::RBracket))?)
            }
            TokenKind::Macro(name) if name == "println" => {
                self.pos += 1;
                self.expect(TokenKind::LParen)?;
                if !matches!(self.peek(), Some(TokenKind::Str(_))) {
                    return self.error("format string literal");
                }
                let args = self.nested(|p| p.expr_list(TokenKind::RParen))?;
                ExprKind::Call {
                    callee: Callee::Println,
                    args,
                }
            }
            TokenKind::Macro(_) => return self.error("`println!` or `vec!`"),
            TokenKind::LBrace => ExprKind::Block(Arc::new(self.block()?)),
            TokenKind::Ident(name) => {
                self.pos += 1;
                match self.peek() {
                    Some(TokenKind::LParen) => {
                        self.pos += 1;
                        let args = self.nested(|p| p.expr_list(TokenKind::RParen))?;
                        ExprKind::Call {
                            callee: Callee::Named(name),
                            args,
                        }
                    }
                    Some(TokenKind::LBracket) => {
                        self.pos += 1;
                        let index = Arc::new(self.nested(|p| p.expr())?);
                        self.expect(TokenKind::RBracket)?;
                        ExprKind::Index { name, index }
                    }
                    Some(TokenKind::Dot) => {
                        self.pos += 1;
                        let field = self.ident()?;
                        ExprKind::Field { var: name, field }
                    }
                    Some(TokenKind::LBrace)
                        if !self.no_struct && self.looks_like_struct_literal() =>
                    {
                        self.pos += 1;
                        let fields = self.nested(|p| p.field_inits())?;
                        ExprKind::StructLit { name, fields }
                    }
                    _ => ExprKind::Ident(name),
                }
            }
            _ => return self.error("expression"),
        };
        Ok(Expr::new(kind, span))
    }

    /// `Name {` followed by `}` or `field:`.
    fn looks_like_struct_literal(&self) -> bool {
        matches!(
            (self.peek_at(1), self.peek_at(2)),
            (Some(TokenKind::RBrace), _) | (Some(TokenKind::Ident(_)), Some(TokenKind::Colon))
        )
    }

    fn field_inits(&mut self) -> PResult<Vec<(String, Arc<Expr>)>> {
        let mut out = Vec::new();
        while !self.eat(&TokenKind::RBrace) {
            let name = self.ident()?;
            self.expect(TokenKind::Colon)?;
            let value = Arc::new(self.expr()?);
            out.push((name, value));
            if !self.eat(&TokenKind::Comma) {
                self.expect(TokenKind::RBrace)?;
                break;
            }
        }
        Ok(out)
    }
}

enum Either {
    Stmt(Stmt),
    Tail(Expr),
}
