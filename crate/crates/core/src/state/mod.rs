//! Machine configuration and the bookkeeping shared by all rules.

pub mod config;
pub mod diagnostic;
pub mod kont;
pub mod render;
pub mod value;

pub use config::{BorrowFlag, Configuration, Env, Frame, ScopeRecord};
pub use diagnostic::{Category, Diagnostic};
pub use kont::{Kont, Purpose};
pub use render::{render_all, render_cell, UnknownCell, CELL_NAMES};
pub use value::{Closure, Location, StructDesc, Value};
