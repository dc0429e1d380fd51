//! Call-count specifications: a function signature, `requires`, `ensures`
//! and integer domains.
//!
//! ```text
//! gcd(X:Int, Y:Int)
//! <time> T1 => T2 </time>
//! requires X > 0 , Y > 0
//! ensures T2 - T1 <= maxInt(X,Y)
//! domain X in 1..=50, Y in 1..=50
//! ```

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("spec line {line}: {message}")]
pub struct SpecError {
    pub line: usize,
    pub message: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Cmp {
    Lt,
    Le,
    Gt,
    Ge,
    Eq,
    Ne,
}

impl Cmp {
    fn symbol(self) -> &'static str {
        match self {
            Cmp::Lt => "<",
            Cmp::Le => "<=",
            Cmp::Gt => ">",
            Cmp::Ge => ">=",
            Cmp::Eq => "==",
            Cmp::Ne => "!=",
        }
    }

    fn holds(self, a: i128, b: i128) -> bool {
        match self {
            Cmp::Lt => a < b,
            Cmp::Le => a <= b,
            Cmp::Gt => a > b,
            Cmp::Ge => a >= b,
            Cmp::Eq => a == b,
            Cmp::Ne => a != b,
        }
    }
}

/// Integer-valued terms.
#[derive(Clone, Debug, PartialEq)]
pub enum Term {
    Num(i128),
    Var(String),
    Calls(String),
    Max(Box<Term>, Box<Term>),
    Min(Box<Term>, Box<Term>),
    Add(Box<Term>, Box<Term>),
    Sub(Box<Term>, Box<Term>),
    Mul(Box<Term>, Box<Term>),
}

/// A conjunction of comparisons; empty means true.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Condition(pub Vec<(Term, Cmp, Term)>);

#[derive(Clone, Debug, PartialEq)]
pub struct CallCountSpec {
    pub function: String,
    pub params: Vec<String>,
    /// Domains keyed by spec parameter name or by the program's name for
    /// the parameter in the same position.
    pub domains: BTreeMap<String, (i128, i128)>,
    /// Names bound to the time counter before and after the call.
    pub time_vars: Option<(String, String)>,
    pub requires: Condition,
    pub ensures: Condition,
}

/// Values visible to a condition.
pub struct Bindings<'a> {
    pub params: &'a BTreeMap<String, i128>,
    pub calls: i128,
}

impl Term {
    pub fn eval(&self, spec: &CallCountSpec, b: &Bindings<'_>) -> i128 {
        let bin = |x: &Term, y: &Term| (x.eval(spec, b), y.eval(spec, b));
        match self {
            Term::Num(n) => *n,
            Term::Var(v) => match &spec.time_vars {
                Some((t1, _)) if t1 == v => 0,
                Some((_, t2)) if t2 == v => b.calls,
                _ => b.params[v],
            },
            Term::Calls(_) => b.calls,
            Term::Max(x, y) => {
                let (x, y) = bin(x, y);
                x.max(y)
            }
            Term::Min(x, y) => {
                let (x, y) = bin(x, y);
                x.min(y)
            }
            Term::Add(x, y) => {
                let (x, y) = bin(x, y);
                x.saturating_add(y)
            }
            Term::Sub(x, y) => {
                let (x, y) = bin(x, y);
                x.saturating_sub(y)
            }
            Term::Mul(x, y) => {
                let (x, y) = bin(x, y);
                x.saturating_mul(y)
            }
        }
    }
}

impl Condition {
    pub fn holds(&self, spec: &CallCountSpec, b: &Bindings<'_>) -> bool {
        self.0
            .iter()
            .all(|(l, c, r)| c.holds(l.eval(spec, b), r.eval(spec, b)))
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Num(n) => write!(f, "{n}"),
            Term::Var(v) => f.write_str(v),
            Term::Calls(g) => write!(f, "calls({g})"),
            Term::Max(x, y) => write!(f, "maxInt({x}, {y})"),
            Term::Min(x, y) => write!(f, "minInt({x}, {y})"),
            Term::Add(x, y) => write!(f, "({x} + {y})"),
            Term::Sub(x, y) => write!(f, "({x} - {y})"),
            Term::Mul(x, y) => write!(f, "({x} * {y})"),
        }
    }
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("true");
        }
        for (i, (l, c, r)) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{l} {} {r}", c.symbol())?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Num(i128),
    Sym(&'static str),
}

const SYMBOLS: [&str; 18] = [
    "..=", "<=", ">=", "==", "!=", "&&", "=>", "</", "<", ">", "(", ")", ",", ":", "+", "-", "*", "/",
];

fn lex(text: &str, line: usize) -> Result<Vec<Tok>, SpecError> {
    let mut toks = Vec::new();
    let mut rest = text.trim_start();
    while !rest.is_empty() {
        let c = rest.chars().next().expect("non-empty");
        if c.is_ascii_digit() {
            let end = rest.find(|c: char| !c.is_ascii_digit()).unwrap_or(rest.len());
            let n = rest[..end].parse().map_err(|_| SpecError {
                line,
                message: format!("number `{}` is too large", &rest[..end]),
            })?;
            toks.push(Tok::Num(n));
            rest = &rest[end..];
        } else if c.is_alphabetic() || c == '_' {
            let end = rest
                .find(|c: char| !(c.is_alphanumeric() || c == '_'))
                .unwrap_or(rest.len());
            toks.push(Tok::Ident(rest[..end].to_string()));
            rest = &rest[end..];
        } else if let Some(s) = SYMBOLS.iter().find(|s| rest.starts_with(**s)) {
            toks.push(Tok::Sym(s));
            rest = &rest[s.len()..];
        } else {
            return Err(SpecError {
                line,
                message: format!("unexpected character `{c}`"),
            });
        }
        rest = rest.trim_start();
    }
    Ok(toks)
}

struct Cursor {
    toks: Vec<Tok>,
    pos: usize,
    line: usize,
}

impl Cursor {
    fn err<T>(&self, message: impl Into<String>) -> Result<T, SpecError> {
        Err(SpecError {
            line: self.line,
            message: message.into(),
        })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn eat(&mut self, sym: &str) -> bool {
        if matches!(self.peek(), Some(Tok::Sym(s)) if *s == sym) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, sym: &str) -> Result<(), SpecError> {
        if self.eat(sym) {
            Ok(())
        } else {
            self.err(format!("expected `{sym}`"))
        }
    }

    fn ident(&mut self) -> Result<String, SpecError> {
        match self.peek().cloned() {
            Some(Tok::Ident(s)) => {
                self.pos += 1;
                Ok(s)
            }
            _ => self.err("expected a name"),
        }
    }

    fn number(&mut self) -> Result<i128, SpecError> {
        let neg = self.eat("-");
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok(if neg { -n } else { n })
            }
            _ => self.err("expected a number"),
        }
    }

    fn done(&self) -> Result<(), SpecError> {
        match self.peek() {
            None => Ok(()),
            Some(t) => self.err(format!("unexpected `{t:?}`")),
        }
    }

    fn condition(&mut self) -> Result<Condition, SpecError> {
        let mut parts = Vec::new();
        if self.peek().is_none() {
            return Ok(Condition(parts));
        }
        loop {
            let l = self.term()?;
            let cmp = match self.peek() {
                Some(Tok::Sym("<")) => Cmp::Lt,
                Some(Tok::Sym("<=")) => Cmp::Le,
                Some(Tok::Sym(">")) => Cmp::Gt,
                Some(Tok::Sym(">=")) => Cmp::Ge,
                Some(Tok::Sym("==")) => Cmp::Eq,
                Some(Tok::Sym("!=")) => Cmp::Ne,
                _ => return self.err("expected a comparison"),
            };
            self.pos += 1;
            let r = self.term()?;
            parts.push((l, cmp, r));
            if !(self.eat(",") || self.eat("&&")) {
                break;
            }
        }
        self.done()?;
        Ok(Condition(parts))
    }

    fn term(&mut self) -> Result<Term, SpecError> {
        let mut t = self.product()?;
        loop {
            if self.eat("+") {
                t = Term::Add(Box::new(t), Box::new(self.product()?));
            } else if self.eat("-") {
                t = Term::Sub(Box::new(t), Box::new(self.product()?));
            } else {
                return Ok(t);
            }
        }
    }

    fn product(&mut self) -> Result<Term, SpecError> {
        let mut t = self.atom()?;
        while self.eat("*") {
            t = Term::Mul(Box::new(t), Box::new(self.atom()?));
        }
        Ok(t)
    }

    fn atom(&mut self) -> Result<Term, SpecError> {
        if self.eat("(") {
            let t = self.term()?;
            self.expect(")")?;
            return Ok(t);
        }
        if matches!(self.peek(), Some(Tok::Num(_)) | Some(Tok::Sym("-"))) {
            return Ok(Term::Num(self.number()?));
        }
        let name = self.ident()?;
        if !self.eat("(") {
            return Ok(Term::Var(name));
        }
        let t = match name.as_str() {
            "calls" => Term::Calls(self.ident()?),
            "maxInt" | "minInt" => {
                let a = self.term()?;
                self.expect(",")?;
                let b = self.term()?;
                if name == "maxInt" {
                    Term::Max(Box::new(a), Box::new(b))
                } else {
                    Term::Min(Box::new(a), Box::new(b))
                }
            }
            other => return self.err(format!("unknown function `{other}`")),
        };
        self.expect(")")?;
        Ok(t)
    }
}

fn check_names(
    cond: &Condition,
    spec: &CallCountSpec,
    line: usize,
    post: bool,
) -> Result<(), SpecError> {
    fn walk(t: &Term, spec: &CallCountSpec, line: usize, post: bool) -> Result<(), SpecError> {
        match t {
            Term::Num(_) => Ok(()),
            Term::Var(v) => {
                let time = match &spec.time_vars {
                    Some((t1, _)) if t1 == v => true,
                    Some((_, t2)) if t2 == v => {
                        if !post {
                            return Err(SpecError {
                                line,
                                message: format!("`{v}` is only known after the call"),
                            });
                        }
                        true
                    }
                    _ => false,
                };
                if time || spec.params.contains(v) {
                    Ok(())
                } else {
                    Err(SpecError {
                        line,
                        message: format!("`{v}` is not a parameter of `{}`", spec.function),
                    })
                }
            }
            Term::Calls(_) if !post => Err(SpecError {
                line,
                message: "calls(..) is only known after the call".into(),
            }),
            Term::Calls(g) if *g == spec.function => Ok(()),
            Term::Calls(g) => Err(SpecError {
                line,
                message: format!("only calls({}) can be observed, not calls({g})", spec.function),
            }),
            Term::Max(a, b) | Term::Min(a, b) | Term::Add(a, b) | Term::Sub(a, b) | Term::Mul(a, b) => {
                walk(a, spec, line, post)?;
                walk(b, spec, line, post)
            }
        }
    }
    for (l, _, r) in &cond.0 {
        walk(l, spec, line, post)?;
        walk(r, spec, line, post)?;
    }
    Ok(())
}

/// Parses a spec file. Blank lines and `#`/`//` comments are ignored.
pub fn parse_spec(text: &str) -> Result<CallCountSpec, SpecError> {
    let mut spec: Option<CallCountSpec> = None;
    let mut pending: Vec<(usize, &str, Vec<Tok>)> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let s = raw.trim();
        if s.is_empty() || s.starts_with('#') || s.starts_with("//") {
            continue;
        }
        let (keyword, rest) = match s.split_once(char::is_whitespace) {
            Some((k, r)) => (k, r),
            None => (s, ""),
        };
        match keyword {
            "requires" | "ensures" | "domain" => {
                pending.push((line, keyword, lex(rest, line)?));
            }
            _ if spec.is_some() => {
                let mut c = Cursor {
                    toks: lex(s, line)?,
                    pos: 0,
                    line,
                };
                // <time> T1 => T2 </time>
                c.expect("<")?;
                if c.ident()? != "time" {
                    return c.err("expected `<time>`");
                }
                c.expect(">")?;
                let t1 = c.ident()?;
                c.expect("=>")?;
                let t2 = c.ident()?;
                c.expect("</")?;
                if c.ident()? != "time" {
                    return c.err("expected `</time>`");
                }
                c.expect(">")?;
                c.done()?;
                spec.as_mut().expect("checked").time_vars = Some((t1, t2));
            }
            _ => {
                let text = s.strip_prefix("fn ").unwrap_or(s);
                let mut c = Cursor {
                    toks: lex(text, line)?,
                    pos: 0,
                    line,
                };
                let function = c.ident()?;
                c.expect("(")?;
                let mut params = Vec::new();
                if !c.eat(")") {
                    loop {
                        let p = c.ident()?;
                        c.expect(":")?;
                        let ty = c.ident()?;
                        if ty != "Int" && crate::syntax::IntTy::from_name(&ty).is_none() {
                            return c.err(format!("parameter `{p}` must be an integer, not `{ty}`"));
                        }
                        if params.contains(&p) {
                            return c.err(format!("parameter `{p}` declared twice"));
                        }
                        params.push(p);
                        if c.eat(")") {
                            break;
                        }
                        c.expect(",")?;
                    }
                }
                c.done()?;
                spec = Some(CallCountSpec {
                    function,
                    params,
                    time_vars: None,
                    requires: Condition::default(),
                    ensures: Condition::default(),
                    domains: BTreeMap::new(),
                });
            }
        }
    }
    let Some(mut spec) = spec else {
        return Err(SpecError {
            line: 1,
            message: "missing function signature".into(),
        });
    };
    let mut saw_ensures = false;
    for (line, keyword, toks) in pending {
        let mut c = Cursor { toks, pos: 0, line };
        match keyword {
            "requires" => {
                let cond = c.condition()?;
                check_names(&cond, &spec, line, false)?;
                spec.requires.0.extend(cond.0);
            }
            "ensures" => {
                let cond = c.condition()?;
                check_names(&cond, &spec, line, true)?;
                spec.ensures.0.extend(cond.0);
                saw_ensures = true;
            }
            _ => loop {
                let p = c.ident()?;
                if c.ident()? != "in" {
                    return c.err("expected `in`");
                }
                let lo = c.number()?;
                c.expect("..=")?;
                let hi = c.number()?;
                if lo > hi {
                    return c.err(format!("empty domain {lo}..={hi}"));
                }
                if spec.domains.insert(p.clone(), (lo, hi)).is_some() {
                    return c.err(format!("domain of `{p}` given twice"));
                }
                if !c.eat(",") {
                    c.done()?;
                    break;
                }
            },
        }
    }
    if !saw_ensures {
        return Err(SpecError {
            line: text.lines().count().max(1),
            message: "missing `ensures` clause".into(),
        });
    }
    Ok(spec)
}

#[cfg(test)]
mod tests {
    use super::*;

    const GCD: &str = "gcd(X:Int, Y:Int)\n<time> T1 => T2 </time>\nrequires X > 0 , Y > 0\nensures T2 - T1 <= maxInt(X,Y)\ndomain X in 1..=50, Y in 1..=50\n";

    #[test]
    fn parses_the_gcd_spec() {
        let s = parse_spec(GCD).unwrap();
        assert_eq!(s.function, "gcd");
        assert_eq!(s.params, ["X", "Y"]);
        assert_eq!(s.requires.0.len(), 2);
        assert_eq!(s.domains["Y"], (1, 50));
        let params = BTreeMap::from([("X".to_string(), 3), ("Y".to_string(), 7)]);
        assert!(s.ensures.holds(&s, &Bindings { params: &params, calls: 7 }));
        assert!(!s.ensures.holds(&s, &Bindings { params: &params, calls: 8 }));
    }

    #[test]
    fn calls_form_and_line_per_domain() {
        let s = parse_spec("fn gcd(a: i32, b: i32)\nensures calls(gcd) <= 1\ndomain a in 1..=3\ndomain b in 1..=3").unwrap();
        assert_eq!(s.requires, Condition::default());
        assert_eq!(s.domains.len(), 2);
    }

    #[test]
    fn rejects_unknown_names() {
        let e = parse_spec("gcd(X:Int, Y:Int)\nensures c <= X\n").unwrap_err();
        assert_eq!(e.line, 2);
        assert!(parse_spec("gcd(X:Int)\nensures calls(foo) <= X\n").is_err());
        assert!(parse_spec("gcd(X:Int)\nrequires X > 0\n").is_err());
        assert!(parse_spec("gcd(X:Int)\nrequires calls(gcd) > 0\nensures X > 0\n").is_err());
        assert!(parse_spec("gcd(X:Int)\nensures X > 0\ndomain X in 3..=1\n").is_err());
    }
}
