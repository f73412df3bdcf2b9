//! The strategy language: expressions, named strategy tables, execution
//! states and their small-step semantics.

mod semantics;

use std::fmt;
use std::sync::Arc;

use indexmap::IndexMap;

use crate::term::{CondFragment, Condition, Signature, SortId, Term, Var};

pub use semantics::{cterm, srewrite, ExecState, Frame, Labeled, Semantics, Step, DEFAULT_STATE_BUDGET};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Strategy {
    Idle,
    Fail,
    /// A rule application; `label` is `None` for `all`.
    Rule {
        label: Option<Arc<str>>,
        subst: Vec<(Arc<str>, Term)>,
        top: bool,
    },
    Match {
        anywhere: bool,
        pattern: Term,
        cond: Condition,
    },
    Concat(Arc<Strategy>, Arc<Strategy>),
    Union(Arc<Strategy>, Arc<Strategy>),
    Iter(Arc<Strategy>),
    Cond(Arc<Strategy>, Arc<Strategy>, Arc<Strategy>),
    MatchRew {
        anywhere: bool,
        pattern: Term,
        cond: Condition,
        using: Vec<(Var, Arc<Strategy>)>,
    },
    Call {
        name: Arc<str>,
        args: Vec<Term>,
    },
}

impl Strategy {
    pub fn rule(label: &str) -> Self {
        Strategy::Rule { label: Some(label.into()), subst: Vec::new(), top: false }
    }

    pub fn call(name: &str) -> Self {
        Strategy::Call { name: name.into(), args: Vec::new() }
    }

    pub fn concat(a: Strategy, b: Strategy) -> Self {
        Strategy::Concat(Arc::new(a), Arc::new(b))
    }

    pub fn union(a: Strategy, b: Strategy) -> Self {
        Strategy::Union(Arc::new(a), Arc::new(b))
    }

    pub fn iter(a: Strategy) -> Self {
        Strategy::Iter(Arc::new(a))
    }

    pub fn cond(c: Strategy, yes: Strategy, no: Strategy) -> Self {
        Strategy::Cond(Arc::new(c), Arc::new(yes), Arc::new(no))
    }

    /// `not(α) = α ? fail : idle`
    #[allow(clippy::should_implement_trait)]
    pub fn not(a: Strategy) -> Self {
        Strategy::cond(a, Strategy::Fail, Strategy::Idle)
    }

    /// `α or-else β = α ? idle : β`
    pub fn or_else(a: Strategy, b: Strategy) -> Self {
        Strategy::cond(a, Strategy::Idle, b)
    }

    /// `try(α) = α ? idle : idle`
    pub fn try_(a: Strategy) -> Self {
        Strategy::cond(a, Strategy::Idle, Strategy::Idle)
    }

    /// `test(α) = not(not(α))`
    pub fn test(a: Strategy) -> Self {
        Strategy::not(Strategy::not(a))
    }

    /// `α+ = α ; α*`
    pub fn plus(a: Strategy) -> Self {
        Strategy::concat(a.clone(), Strategy::iter(a))
    }

    /// `α! = α* ; not(α)`
    pub fn normal_form(a: Strategy) -> Self {
        Strategy::concat(Strategy::iter(a.clone()), Strategy::not(a))
    }

    /// Restricts every rule application inside to the top position.
    pub fn top(self) -> Self {
        let rec = |s: &Arc<Strategy>| Arc::new((**s).clone().top());
        match self {
            Strategy::Rule { label, subst, .. } => Strategy::Rule { label, subst, top: true },
            Strategy::Concat(a, b) => Strategy::Concat(rec(&a), rec(&b)),
            Strategy::Union(a, b) => Strategy::Union(rec(&a), rec(&b)),
            Strategy::Iter(a) => Strategy::Iter(rec(&a)),
            Strategy::Cond(a, b, c) => Strategy::Cond(rec(&a), rec(&b), rec(&c)),
            other => other,
        }
    }

    pub fn display<'a>(&'a self, sig: &'a Signature) -> StrategyDisplay<'a> {
        StrategyDisplay { sig, strat: self }
    }
}

/// One `sd`/`csd` definition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StratDef {
    pub params: Vec<Term>,
    pub body: Arc<Strategy>,
    pub cond: Condition,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StratDecl {
    pub name: Arc<str>,
    pub params: Vec<SortId>,
    pub subject: SortId,
    pub defs: Vec<StratDef>,
}

/// Named strategies of a module, in declaration order.
#[derive(Debug, Clone, Default)]
pub struct StratTable {
    decls: IndexMap<Arc<str>, StratDecl>,
}

impl StratTable {
    pub fn get(&self, name: &str) -> Option<&StratDecl> {
        self.decls.get(name)
    }

    pub fn contains(&self, name: &str) -> bool {
        self.decls.contains_key(name)
    }

    pub fn names(&self) -> impl Iterator<Item = &Arc<str>> {
        self.decls.keys()
    }

    pub fn len(&self) -> usize {
        self.decls.len()
    }

    pub fn is_empty(&self) -> bool {
        self.decls.is_empty()
    }

    pub(crate) fn declare(&mut self, decl: StratDecl) -> bool {
        if self.decls.contains_key(&decl.name) {
            return false;
        }
        self.decls.insert(decl.name.clone(), decl);
        true
    }

    pub(crate) fn add_def(&mut self, name: &str, def: StratDef) -> bool {
        match self.decls.get_mut(name) {
            Some(d) => {
                d.defs.push(def);
                true
            }
            None => false,
        }
    }
}

/// Concrete-syntax printer for strategies.
pub struct StrategyDisplay<'a> {
    sig: &'a Signature,
    strat: &'a Strategy,
}

// Binding strength, loosest first.
const LVL_COND: u8 = 1;
const LVL_UNION: u8 = 2;
const LVL_CONCAT: u8 = 3;
const LVL_POSTFIX: u8 = 4;
const LVL_ATOM: u8 = 5;

fn level(s: &Strategy) -> u8 {
    match s {
        // patterns extend as far right as possible, so these are always
        // parenthesized inside other expressions
        Strategy::Match { .. } | Strategy::MatchRew { .. } => 0,
        Strategy::Cond(..) => LVL_COND,
        Strategy::Union(..) => LVL_UNION,
        Strategy::Concat(..) => LVL_CONCAT,
        Strategy::Iter(..) => LVL_POSTFIX,
        _ => LVL_ATOM,
    }
}

pub(crate) fn write_condition(f: &mut fmt::Formatter<'_>, sig: &Signature, cond: &Condition) -> fmt::Result {
    for (i, frag) in cond.0.iter().enumerate() {
        if i > 0 {
            f.write_str(" /\\ ")?;
        }
        match frag {
            CondFragment::Equal(a, b) => write!(f, "{} = {}", sig.display(a), sig.display(b))?,
            CondFragment::Match(p, t) => write!(f, "{} := {}", sig.display(p), sig.display(t))?,
            CondFragment::Bool(t) => write!(f, "{}", sig.display(t))?,
        }
    }
    Ok(())
}

impl StrategyDisplay<'_> {
    fn write(&self, f: &mut fmt::Formatter<'_>, s: &Strategy, min: u8) -> fmt::Result {
        let paren = level(s) < min;
        if paren {
            f.write_str("(")?;
        }
        let sig = self.sig;
        match s {
            Strategy::Idle => f.write_str("idle")?,
            Strategy::Fail => f.write_str("fail")?,
            Strategy::Rule { label, subst, top } => {
                if *top {
                    f.write_str("top(")?;
                }
                f.write_str(label.as_deref().unwrap_or("all"))?;
                if !subst.is_empty() {
                    f.write_str("[")?;
                    for (i, (x, t)) in subst.iter().enumerate() {
                        if i > 0 {
                            f.write_str(", ")?;
                        }
                        write!(f, "{x} <- {}", sig.display(t))?;
                    }
                    f.write_str("]")?;
                }
                if *top {
                    f.write_str(")")?;
                }
            }
            Strategy::Match { anywhere, pattern, cond } => {
                let kw = if *anywhere { "amatch" } else { "match" };
                write!(f, "{kw} {}", sig.display(pattern))?;
                if !cond.is_empty() {
                    f.write_str(" s.t. ")?;
                    write_condition(f, sig, cond)?;
                }
            }
            Strategy::Concat(a, b) => {
                self.write(f, a, LVL_CONCAT + 1)?;
                f.write_str(" ; ")?;
                self.write(f, b, LVL_CONCAT)?;
            }
            Strategy::Union(a, b) => {
                self.write(f, a, LVL_UNION + 1)?;
                f.write_str(" | ")?;
                self.write(f, b, LVL_UNION)?;
            }
            Strategy::Iter(a) => {
                self.write(f, a, LVL_ATOM)?;
                f.write_str(" *")?;
            }
            Strategy::Cond(c, y, n) => {
                self.write(f, c, LVL_COND + 1)?;
                f.write_str(" ? ")?;
                self.write(f, y, LVL_COND + 1)?;
                f.write_str(" : ")?;
                self.write(f, n, LVL_COND)?;
            }
            Strategy::MatchRew { anywhere, pattern, cond, using } => {
                let kw = if *anywhere { "amatchrew" } else { "matchrew" };
                write!(f, "{kw} {}", sig.display(pattern))?;
                if !cond.is_empty() {
                    f.write_str(" s.t. ")?;
                    write_condition(f, sig, cond)?;
                }
                f.write_str(" by ")?;
                for (i, (v, a)) in using.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{} using ", sig.display(&Term::Var(v.clone())))?;
                    self.write(f, a, LVL_COND)?;
                }
            }
            Strategy::Call { name, args } => {
                f.write_str(name)?;
                if !args.is_empty() {
                    f.write_str("(")?;
                    for (i, a) in args.iter().enumerate() {
                        if i > 0 {
                            f.write_str(", ")?;
                        }
                        write!(f, "{}", sig.display(a))?;
                    }
                    f.write_str(")")?;
                }
            }
        }
        if paren {
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl fmt::Display for StrategyDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write(f, self.strat, 0)
    }
}
