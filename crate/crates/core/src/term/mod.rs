//! Order-sorted terms modulo associativity, commutativity and identity.
//!
//! Terms are always kept in a canonical flattened form (see
//! [`Signature::make`]): associative symbols never have a direct child with
//! the same symbol, identity elements are absorbed, and the arguments of
//! associative-commutative symbols are sorted by the total order on terms.
//! Equality of canonical terms is therefore equality modulo the axioms.

mod matching;
mod rewrite;
mod signature;

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::sync::Arc;

pub(crate) use matching::for_each_match;
pub use matching::{match_all, match_first, match_term};
pub use rewrite::{eval_condition, eval_prop, normalize, rule_applications, RuleFilter};
pub(crate) use rewrite::{positions, replace, subterm, with_extension};
pub use signature::{
    Equation, MixfixPiece, OpAttrs, OpDecl, Rule, Signature, SignatureBuilder, TermDisplay, DEFAULT_NORMALIZE_BUDGET,
};

/// Index of a sort in its signature.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SortId(pub u32);

impl SortId {
    /// The universal sort, above every declared sort. Only used internally
    /// for extension variables.
    pub const ANY: SortId = SortId(u32::MAX);
}

/// Index of an operator declaration. Ids follow declaration order, which
/// is also the order of arguments under commutative operators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OpId(pub u32);

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Var {
    pub name: Arc<str>,
    pub sort: SortId,
}

impl Var {
    pub fn new(name: impl Into<Arc<str>>, sort: SortId) -> Self {
        Var { name: name.into(), sort }
    }

    /// Extension variables absorb the unmatched arguments of an associative
    /// symbol when rewriting inside a flattened term. They may be empty.
    pub(crate) fn extension(tag: &str) -> Self {
        Var { name: format!("%ext{tag}").into(), sort: SortId::ANY }
    }

    pub(crate) fn is_extension(&self) -> bool {
        self.sort == SortId::ANY
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Term {
    Var(Var),
    App(OpId, Vec<Term>),
}

impl Term {
    pub fn constant(op: OpId) -> Self {
        Term::App(op, Vec::new())
    }

    pub fn is_ground(&self) -> bool {
        match self {
            Term::Var(_) => false,
            Term::App(_, args) => args.iter().all(Term::is_ground),
        }
    }

    pub fn head(&self) -> Option<OpId> {
        match self {
            Term::App(op, _) => Some(*op),
            Term::Var(_) => None,
        }
    }

    pub fn args(&self) -> &[Term] {
        match self {
            Term::App(_, args) => args,
            Term::Var(_) => &[],
        }
    }

    /// Collects the variables of the term, in order of first occurrence.
    pub fn vars(&self) -> Vec<Var> {
        let mut out = Vec::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut Vec<Var>) {
        match self {
            Term::Var(v) => {
                if !out.contains(v) {
                    out.push(v.clone());
                }
            }
            Term::App(_, args) => args.iter().for_each(|a| a.collect_vars(out)),
        }
    }

    pub fn size(&self) -> usize {
        1 + self.args().iter().map(Term::size).sum::<usize>()
    }
}

impl Ord for Term {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Term::Var(a), Term::Var(b)) => a.cmp(b),
            (Term::Var(_), Term::App(..)) => Ordering::Less,
            (Term::App(..), Term::Var(_)) => Ordering::Greater,
            (Term::App(f, xs), Term::App(g, ys)) => f.cmp(g).then(xs.len().cmp(&ys.len())).then_with(|| xs.cmp(ys)),
        }
    }
}

impl PartialOrd for Term {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A finite, sort-preserving assignment of terms to variables.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Substitution(BTreeMap<Var, Term>);

impl Substitution {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, var: &Var) -> Option<&Term> {
        self.0.get(var)
    }

    pub fn insert(&mut self, var: Var, value: Term) -> Option<Term> {
        self.0.insert(var, value)
    }

    pub fn remove(&mut self, var: &Var) -> Option<Term> {
        self.0.remove(var)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Var, &Term)> {
        self.0.iter()
    }

    pub fn contains(&self, var: &Var) -> bool {
        self.0.contains_key(var)
    }

    /// Looks a variable up by name only, as in `rule[x <- t]`.
    pub fn get_by_name(&self, name: &str) -> Option<(&Var, &Term)> {
        self.0.iter().find(|(v, _)| &*v.name == name)
    }

    /// Replaces every assigned variable of `term` and re-canonicalizes.
    pub fn apply(&self, sig: &Signature, term: &Term) -> Term {
        if self.is_empty() {
            return term.clone();
        }
        match term {
            Term::Var(v) => self.0.get(v).cloned().unwrap_or_else(|| term.clone()),
            Term::App(op, args) => sig.make(*op, args.iter().map(|a| self.apply(sig, a)).collect()),
        }
    }

    /// `self ∘ inner`: first `inner`, then `self`.
    pub fn compose(&self, sig: &Signature, inner: &Substitution) -> Substitution {
        let mut out = BTreeMap::new();
        for (v, t) in &inner.0 {
            out.insert(v.clone(), self.apply(sig, t));
        }
        for (v, t) in &self.0 {
            out.entry(v.clone()).or_insert_with(|| t.clone());
        }
        Substitution(out)
    }

    /// Union of two substitutions; bindings of `other` win on conflicts.
    pub fn merged(&self, other: &Substitution) -> Substitution {
        let mut out = self.0.clone();
        out.extend(other.0.iter().map(|(v, t)| (v.clone(), t.clone())));
        Substitution(out)
    }

    /// Drops the bindings of the given variables.
    pub fn without(&self, vars: &[Var]) -> Substitution {
        Substitution(self.0.iter().filter(|(v, _)| !vars.contains(v)).map(|(v, t)| (v.clone(), t.clone())).collect())
    }
}

impl FromIterator<(Var, Term)> for Substitution {
    fn from_iter<I: IntoIterator<Item = (Var, Term)>>(iter: I) -> Self {
        Substitution(iter.into_iter().collect())
    }
}

/// One fragment of an equational condition.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CondFragment {
    /// `lhs = rhs`, compared after normalization.
    Equal(Term, Term),
    /// `pattern := subject`, may bind new variables.
    Match(Term, Term),
    /// A term of sort `Bool` that must normalize to `true`.
    Bool(Term),
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Condition(pub Vec<CondFragment>);

impl Condition {
    pub fn empty() -> Self {
        Condition(Vec::new())
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn instantiate(&self, sig: &Signature, s: &Substitution) -> Condition {
        Condition(
            self.0
                .iter()
                .map(|f| match f {
                    CondFragment::Equal(a, b) => CondFragment::Equal(s.apply(sig, a), s.apply(sig, b)),
                    CondFragment::Match(p, t) => CondFragment::Match(s.apply(sig, p), s.apply(sig, t)),
                    CondFragment::Bool(t) => CondFragment::Bool(s.apply(sig, t)),
                })
                .collect(),
        )
    }
}
