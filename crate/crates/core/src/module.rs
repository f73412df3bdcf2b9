use std::sync::Arc;

use crate::error::Result;
use crate::formula::{Formula, LogicClass};
use crate::strategy::{StratTable, Strategy};
use crate::syntax::{self, VarEnv};
use crate::term::{normalize, Signature, Term};

/// A flattened module: its signature with equations and rules, its named
/// strategies, and the variables declared in it.
#[derive(Debug, Clone)]
pub struct Module {
    pub name: String,
    pub sig: Arc<Signature>,
    pub strategies: StratTable,
    pub vars: VarEnv,
}

impl Module {
    /// Loads a module from specification text; `None` selects the last one.
    pub fn from_source(text: &str, name: Option<&str>) -> Result<Module> {
        let spec = syntax::parse_spec(text)?;
        syntax::resolve_module(&spec, name)
    }

    pub fn parse_term(&self, text: &str) -> Result<Term> {
        syntax::parse_term(&self.sig, &self.vars, text, None)
    }

    /// Parses and normalizes a ground term.
    pub fn parse_ground(&self, text: &str) -> Result<Term> {
        let t = self.parse_term(text)?;
        normalize(&self.sig, &t)
    }

    pub fn parse_strategy(&self, text: &str) -> Result<Strategy> {
        syntax::parse_strategy(&self.sig, &self.vars, &self.strategies, text)
    }

    pub fn parse_formula(&self, text: &str) -> Result<(Formula, LogicClass)> {
        syntax::parse_formula(&self.sig, text)
    }

    pub fn show(&self, t: &Term) -> String {
        self.sig.display(t).without_sorts().to_string()
    }
}
