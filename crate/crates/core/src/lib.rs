//! An executable small-step semantics for a subset of Rust, with an
//! interpreter, a cell-printing debugger, a differential tester and a
//! bounded call-count checker built on top.

pub mod difftest;
pub mod runner;
pub mod semantics;
pub mod speccheck;
pub mod state;
pub mod syntax;
