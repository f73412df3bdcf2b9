//! Concrete syntax: specification files, terms, strategies and formulas.

mod formula;
pub mod lexer;
mod resolve;
mod spec;
mod strategy;
mod term;

pub use formula::parse_formula;
pub use resolve::resolve_module;
pub use spec::{parse_spec, ImportMode, Item, ModuleDecl, ModuleKind, OpAttrSpec, SourceSpec, StmtAttrs};
pub use strategy::{parse_condition, parse_strategy, parse_strategy_tokens};
pub use term::{parse_term, parse_term_tokens, VarEnv};
