use std::fmt;

use thiserror::Error;

use crate::syntax::Span;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Category {
    ParseError,
    UnboundIdentifier,
    AssignToImmutable,
    TypeMismatch,
    UseAfterMove,
    MutBorrowOfImmutable,
    BorrowConflict,
    LifetimeError,
    WriteThroughSharedRef,
    NotAReference,
    UninitializedRead,
    IndexOutOfBounds,
    ArityMismatch,
    Overflow,
    DivideByZero,
    MissingMain,
    Stuck,
}

impl Category {
    pub const ALL: [Category; 17] = [
        Category::ParseError,
        Category::UnboundIdentifier,
        Category::AssignToImmutable,
        Category::TypeMismatch,
        Category::UseAfterMove,
        Category::MutBorrowOfImmutable,
        Category::BorrowConflict,
        Category::LifetimeError,
        Category::WriteThroughSharedRef,
        Category::NotAReference,
        Category::UninitializedRead,
        Category::IndexOutOfBounds,
        Category::ArityMismatch,
        Category::Overflow,
        Category::DivideByZero,
        Category::MissingMain,
        Category::Stuck,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Category::ParseError => "ParseError",
            Category::UnboundIdentifier => "UnboundIdentifier",
            Category::AssignToImmutable => "AssignToImmutable",
            Category::TypeMismatch => "TypeMismatch",
            Category::UseAfterMove => "UseAfterMove",
            Category::MutBorrowOfImmutable => "MutBorrowOfImmutable",
            Category::BorrowConflict => "BorrowConflict",
            Category::LifetimeError => "LifetimeError",
            Category::WriteThroughSharedRef => "WriteThroughSharedRef",
            Category::NotAReference => "NotAReference",
            Category::UninitializedRead => "UninitializedRead",
            Category::IndexOutOfBounds => "IndexOutOfBounds",
            Category::ArityMismatch => "ArityMismatch",
            Category::Overflow => "Overflow",
            Category::DivideByZero => "DivideByZero",
            Category::MissingMain => "MissingMain",
            Category::Stuck => "Stuck",
        }
    }

    pub fn from_name(name: &str) -> Option<Category> {
        Category::ALL.into_iter().find(|c| c.name() == name)
    }

    /// Panics of the compiled program, as opposed to compile-time rejects.
    pub fn is_runtime(self) -> bool {
        matches!(
            self,
            Category::IndexOutOfBounds
                | Category::Overflow
                | Category::DivideByZero
                | Category::UninitializedRead
        )
    }
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub struct Diagnostic {
    pub category: Category,
    pub message: String,
    pub span: Option<Span>,
}

impl Diagnostic {
    pub fn new(category: Category, message: impl Into<String>) -> Self {
        Diagnostic {
            category,
            message: message.into(),
            span: None,
        }
    }

    pub fn at(mut self, span: Span) -> Self {
        if self.span.is_none() {
            self.span = Some(span);
        }
        self
    }

    pub fn line(&self) -> Option<u32> {
        self.span.map(|s| s.line)
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.span {
            Some(span) => write!(
                f,
                "{} at line {}: {}",
                self.category, span.line, self.message
            ),
            None => write!(f, "{}: {}", self.category, self.message),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for c in Category::ALL {
            assert_eq!(Category::from_name(c.name()), Some(c));
        }
    }

    #[test]
    fn first_span_wins() {
        let d = Diagnostic::new(Category::Stuck, "x")
            .at(Span::new(3, 1))
            .at(Span::new(9, 9));
        assert_eq!(d.line(), Some(3));
        assert_eq!(d.to_string(), "Stuck at line 3: x");
    }
}
