use std::fmt;

use thiserror::Error;

use super::ast::Span;

#[derive(Clone, Debug, PartialEq)]
pub enum TokenKind {
    Ident(String),
    Int(u128),
    Float(f64),
    Str(String),
    Char(char),
    /// `name!`, e.g. `println!` or `vec!`.
    Macro(String),

    Let,
    Mut,
    Fn,
    Struct,
    Const,
    Static,
    If,
    Else,
    While,
    Loop,
    For,
    In,
    Return,
    True,
    False,

    LBrace,
    RBrace,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Semi,
    Colon,
    Comma,
    Dot,
    DotDot,
    Arrow,
    Eq,
    EqEq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
    Shl,
    Shr,
    Plus,
    Minus,
    Star,
    Slash,
    Percent,
    Amp,
    AmpAmp,
    Pipe,
    PipePipe,
    Bang,
    PlusEq,
    MinusEq,
    StarEq,
    SlashEq,
}

impl fmt::Display for TokenKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use TokenKind::*;
        let s = match self {
            Ident(name) => return write!(f, "identifier `{name}`"),
            Int(v) => return write!(f, "integer `{v}`"),
            Float(v) => return write!(f, "float `{v:?}`"),
            Str(_) => "string literal",
            Char(_) => "char literal",
            Macro(name) => return write!(f, "`{name}!`"),
            Let => "`let`",
            Mut => "`mut`",
            Fn => "`fn`",
            Struct => "`struct`",
            Const => "`const`",
            Static => "`static`",
            If => "`if`",
            Else => "`else`",
            While => "`while`",
            Loop => "`loop`",
            For => "`for`",
            In => "`in`",
            Return => "`return`",
            True => "`true`",
            False => "`false`",
            LBrace => "`{`",
            RBrace => "`}`",
            LParen => "`(`",
            RParen => "`)`",
            LBracket => "`[`",
            RBracket => "`]`",
            Semi => "`;`",
            Colon => "`:`",
            Comma => "`,`",
            Dot => "`.`",
            DotDot => "`..`",
            Arrow => "`->`",
            Eq => "`=`",
            EqEq => "`==`",
            Ne => "`!=`",
            Lt => "`<`",
            Le => "`<=`",
            Gt => "`>`",
            Ge => "`>=`",
            Shl => "`<<`",
            Shr => "`>>`",
            Plus => "`+`",
            Minus => "`-`",
            Star => "`*`",
            Slash => "`/`",
            Percent => "`%`",
            Amp => "`&`",
            AmpAmp => "`&&`",
            Pipe => "`|`",
            PipePipe => "`||`",
            Bang => "`!`",
            PlusEq => "`+=`",
            MinusEq => "`-=`",
            StarEq => "`*=`",
            SlashEq => "`/=`",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Token {
    pub kind: TokenKind,
    pub span: Span,
}

#[derive(Clone, Debug, PartialEq, Error)]
#[error("{span}: {message}")]
pub struct LexError {
    pub span: Span,
    pub message: String,
}

fn keyword(word: &str) -> Option<TokenKind> {
    Some(match word {
        "let" => TokenKind::Let,
        "mut" => TokenKind::Mut,
        "fn" => TokenKind::Fn,
        "struct" => TokenKind::Struct,
        "const" => TokenKind::Const,
        "static" => TokenKind::Static,
        "if" => TokenKind::If,
        "else" => TokenKind::Else,
        "while" => TokenKind::While,
        "loop" => TokenKind::Loop,
        "for" => TokenKind::For,
        "in" => TokenKind::In,
        "return" => TokenKind::Return,
        "true" => TokenKind::True,
        "false" => TokenKind::False,
        _ => return None,
    })
}

struct Lexer<'a> {
    chars: Vec<char>,
    pos: usize,
    line: u32,
    col: u32,
    _src: &'a str,
}

impl<'a> Lexer<'a> {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn peek_at(&self, n: usize) -> Option<char> {
        self.chars.get(self.pos + n).copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.get(self.pos).copied()?;
        self.pos += 1;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn here(&self) -> Span {
        Span::new(self.line, self.col)
    }

    fn skip_trivia(&mut self) -> Result<(), LexError> {
        loop {
            match (self.peek(), self.peek_at(1)) {
                (Some(c), _) if c.is_whitespace() => {
                    self.bump();
                }
                (Some('/'), Some('/')) => {
                    while let Some(c) = self.peek() {
                        if c == '\n' {
                            break;
                        }
                        self.bump();
                    }
                }
                (Some('/'), Some('*')) => {
                    let start = self.here();
                    self.bump();
                    self.bump();
                    let mut depth = 1;
                    while depth > 0 {
                        match (self.peek(), self.peek_at(1)) {
                            (Some('*'), Some('/')) => {
                                self.bump();
                                self.bump();
                                depth -= 1;
                            }
                            (Some('/'), Some('*')) => {
                                self.bump();
                                self.bump();
                                depth += 1;
                            }
                            (Some(_), _) => {
                                self.bump();
                            }
                            (None, _) => {
                                return Err(LexError {
                                    span: start,
                                    message: "unterminated block comment".into(),
                                })
                            }
                        }
                    }
                }
                _ => return Ok(()),
            }
        }
    }

    fn escape(&mut self, start: Span) -> Result<char, LexError> {
        let err = |message: &str| LexError {
            span: start,
            message: message.to_string(),
        };
        match self.bump() {
            Some('n') => Ok('\n'),
            Some('t') => Ok('\t'),
            Some('r') => Ok('\r'),
            Some('0') => Ok('\0'),
            Some('\\') => Ok('\\'),
            Some('\'') => Ok('\''),
            Some('"') => Ok('"'),
            Some('u') => {
                if self.bump() != Some('{') {
                    return Err(err("malformed unicode escape"));
                }
                let mut hex = String::new();
                loop {
                    match self.bump() {
                        Some('}') => break,
                        Some(c) if c.is_ascii_hexdigit() => hex.push(c),
                        _ => return Err(err("malformed unicode escape")),
                    }
                }
                u32::from_str_radix(&hex, 16)
                    .ok()
                    .and_then(char::from_u32)
                    .ok_or_else(|| err("invalid unicode escape"))
            }
            Some(c) => Err(err(&format!("unknown escape `\\{c}`"))),
            None => Err(err("unterminated literal")),
        }
    }

    fn number(&mut self, start: Span) -> Result<TokenKind, LexError> {
        let mut text = String::new();
        while let Some(c) = self.peek() {
            if c.is_ascii_digit() {
                text.push(c);
                self.bump();
            } else if c == '_' {
                self.bump();
            } else {
                break;
            }
        }
        let mut float = false;
        // `1..3` is a range, not a float.
        if self.peek() == Some('.') && self.peek_at(1).is_some_and(|c| c.is_ascii_digit()) {
            float = true;
            text.push('.');
            self.bump();
            while let Some(c) = self.peek() {
                if c.is_ascii_digit() {
                    text.push(c);
                    self.bump();
                } else if c == '_' {
                    self.bump();
                } else {
                    break;
                }
            }
        }
        if matches!(self.peek(), Some('e' | 'E')) {
            let signed = matches!(self.peek_at(1), Some('+' | '-'));
            let digit_at = if signed { 2 } else { 1 };
            if self.peek_at(digit_at).is_some_and(|c| c.is_ascii_digit()) {
                float = true;
                text.push('e');
                self.bump();
                if signed {
                    text.push(self.bump().unwrap());
                }
                while let Some(c) = self.peek() {
                    if c.is_ascii_digit() {
                        text.push(c);
                        self.bump();
                    } else {
                        break;
                    }
                }
            }
        }
        if self.peek().is_some_and(|c| c.is_alphabetic() || c == '_') {
            return Err(LexError {
                span: self.here(),
                message: "literal suffixes are not supported".into(),
            });
        }
        if float {
            text.parse::<f64>()
                .map(TokenKind::Float)
                .map_err(|_| LexError {
                    span: start,
                    message: format!("malformed float literal `{text}`"),
                })
        } else {
            text.parse::<u128>()
                .map(TokenKind::Int)
                .map_err(|_| LexError {
                    span: start,
                    message: format!("integer literal `{text}` is too large"),
                })
        }
    }

    fn next_token(&mut self) -> Result<Option<Token>, LexError> {
        self.skip_trivia()?;
        let span = self.here();
        let Some(c) = self.bump() else {
            return Ok(None);
        };
        use TokenKind::*;
        let kind = match c {
            'a'..='z' | 'A'..='Z' | '_' => {
                let mut word = String::from(c);
                while let Some(c) = self.peek() {
                    if c.is_ascii_alphanumeric() || c == '_' {
                        word.push(c);
                        self.bump();
                    } else {
                        break;
                    }
                }
                if self.peek() == Some('!') && self.peek_at(1) != Some('=') {
                    self.bump();
                    Macro(word)
                } else {
                    keyword(&word).unwrap_or(Ident(word))
                }
            }
            '0'..='9' => {
                self.pos -= 1;
                self.col -= 1;
                self.number(span)?
            }
            '"' => {
                let mut s = String::new();
                loop {
                    match self.bump() {
                        Some('"') => break,
                        Some('\\') => s.push(self.escape(span)?),
                        Some(c) => s.push(c),
                        None => {
                            return Err(LexError {
                                span,
                                message: "unterminated string literal".into(),
                            })
                        }
                    }
                }
                Str(s)
            }
            '\'' => {
                let ch = match self.bump() {
                    Some('\\') => self.escape(span)?,
                    Some('\'') | Some('\n') | None => {
                        return Err(LexError {
                            span,
                            message: "unterminated char literal".into(),
                        })
                    }
                    Some(c) => c,
                };
                if self.bump() != Some('\'') {
                    return Err(LexError {
                        span,
                        message: "unterminated char literal".into(),
                    });
                }
                Char(ch)
            }
            '{' => LBrace,
            '}' => RBrace,
            '(' => LParen,
            ')' => RParen,
            '[' => LBracket,
            ']' => RBracket,
            ';' => Semi,
            ':' => Colon,
            ',' => Comma,
            '.' => {
                if self.peek() == Some('.') {
                    self.bump();
                    DotDot
                } else {
                    Dot
                }
            }
            '-' => match self.peek() {
                Some('>') => {
                    self.bump();
                    Arrow
                }
                Some('=') => {
                    self.bump();
                    MinusEq
                }
                _ => Minus,
            },
            '=' => {
                if self.peek() == Some('=') {
                    self.bump();
                    EqEq
                } else {
                    Eq
                }
            }
            '!' => {
                if self.peek() == Some('=') {
                    self.bump();
                    Ne
                } else {
                    Bang
                }
            }
            '<' => match self.peek() {
                Some('=') => {
                    self.bump();
                    Le
                }
                Some('<') => {
                    self.bump();
                    Shl
                }
                _ => Lt,
            },
            '>' => match self.peek() {
                Some('=') => {
                    self.bump();
                    Ge
                }
                Some('>') => {
                    self.bump();
                    Shr
                }
                _ => Gt,
            },
            '+' => {
                if self.peek() == Some('=') {
                    self.bump();
                    PlusEq
                } else {
                    Plus
                }
            }
            '*' => {
                if self.peek() == Some('=') {
                    self.bump();
                    StarEq
                } else {
                    Star
                }
            }
            '/' => {
                if self.peek() == Some('=') {
                    self.bump();
                    SlashEq
                } else {
                    Slash
                }
            }
            '%' => Percent,
            '&' => {
                if self.peek() == Some('&') {
                    self.bump();
                    AmpAmp
                } else {
                    Amp
                }
            }
            '|' => {
                if self.peek() == Some('|') {
                    self.bump();
                    PipePipe
                } else {
                    Pipe
                }
            }
            other => {
                return Err(LexError {
                    span,
                    message: format!("unrecognized character `{other}`"),
                })
            }
        };
        Ok(Some(Token { kind, span }))
    }
}

/// Splits source text into tokens. Whitespace and comments are dropped.
pub fn tokenize(source: &str) -> Result<Vec<Token>, LexError> {
    let mut lexer = Lexer {
        chars: source.chars().collect(),
        pos: 0,
        line: 1,
        col: 1,
        _src: source,
    };
    let mut tokens = Vec::new();
    while let Some(tok) = lexer.next_token()? {
        tokens.push(tok);
    }
    Ok(tokens)
}

#[cfg(test)]
mod tests {
    use super::*;
    use TokenKind::*;

    fn kinds(src: &str) -> Vec<TokenKind> {
        tokenize(src).unwrap().into_iter().map(|t| t.kind).collect()
    }

    #[test]
    fn let_statement() {
        assert_eq!(
            kinds("let mut y = 0;"),
            vec![Let, Mut, Ident("y".into()), Eq, Int(0), Semi]
        );
    }

    #[test]
    fn line_comment_dropped() {
        assert_eq!(
            kinds("x+y // return x+y;"),
            vec![Ident("x".into()), Plus, Ident("y".into())]
        );
    }

    #[test]
    fn unterminated_string() {
        let err = tokenize("let s = \"abc").unwrap_err();
        assert!(err.message.contains("unterminated string"), "{err}");
        assert_eq!(err.span.line, 1);
        assert_eq!(err.span.col, 9);
    }

    #[test]
    fn unterminated_char() {
        assert!(tokenize("'a").unwrap_err().message.contains("char"));
    }

    #[test]
    fn unrecognized_character() {
        let err = tokenize("let a = 1 @ 2;").unwrap_err();
        assert!(err.message.contains('@'));
    }

    #[test]
    fn macros_versus_not_equal() {
        assert_eq!(
            kinds("println!(a!=b)"),
            vec![
                Macro("println".into()),
                LParen,
                Ident("a".into()),
                Ne,
                Ident("b".into()),
                RParen
            ]
        );
    }

    #[test]
    fn ranges_are_not_floats() {
        assert_eq!(kinds("0..3"), vec![Int(0), DotDot, Int(3)]);
        assert_eq!(kinds("1.5 2e3"), vec![Float(1.5), Float(2000.0)]);
    }

    #[test]
    fn positions_track_lines() {
        let toks = tokenize("fn main() {\n  let x = 1;\n}").unwrap();
        let x = toks.iter().find(|t| t.kind == Ident("x".into())).unwrap();
        assert_eq!((x.span.line, x.span.col), (2, 7));
    }

    #[test]
    fn escapes() {
        assert_eq!(kinds(r#""a\n\"b""#), vec![Str("a\n\"b".into())]);
        assert_eq!(kinds(r"'\''"), vec![Char('\'')]);
    }
}
