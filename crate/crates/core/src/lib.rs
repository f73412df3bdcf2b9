//! Rewriting specifications with a strategy language, the state spaces they
//! induce, and model checking of LTL, CTL, CTL* and mu-calculus properties
//! on them.

pub mod cli;
pub mod error;
pub mod formula;
pub mod kripke;
pub mod ltl;
pub mod module;
pub mod mucalc;
pub mod strategy;
pub mod syntax;
pub mod term;

pub use error::{Error, Pos, Result};
pub use formula::{ActionSpec, Formula, LogicClass, STUTTER};
pub use module::Module;
pub use strategy::{ExecState, Semantics, Strategy};
pub use term::{Signature, Term};
