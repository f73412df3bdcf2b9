//! Temporal formulas shared by all the checkers: LTL, CTL, CTL* and the
//! modal μ-calculus with action specifications.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::term::{Signature, Term};

/// Label of the stutter transitions added to make graphs total. It cannot
/// be written by users, but `.` and complemented action lists include it.
pub const STUTTER: &str = "%stutter%";

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ActionSpec {
    Dot,
    Labels(Vec<Arc<str>>),
    Complement(Vec<Arc<str>>),
}

impl ActionSpec {
    pub fn admits(&self, label: &str) -> bool {
        match self {
            ActionSpec::Dot => true,
            ActionSpec::Labels(ls) => ls.iter().any(|l| &**l == label),
            ActionSpec::Complement(ls) => !ls.iter().any(|l| &**l == label),
        }
    }
}

impl fmt::Display for ActionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ActionSpec::Dot => f.write_str("."),
            ActionSpec::Labels(ls) => f.write_str(&ls.join(" ")),
            ActionSpec::Complement(ls) => write!(f, "~ {}", ls.join(" ")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    True,
    False,
    Atom(Term),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
    Next(Box<Formula>),
    Eventually(Box<Formula>),
    Always(Box<Formula>),
    Until(Box<Formula>, Box<Formula>),
    Release(Box<Formula>, Box<Formula>),
    WeakUntil(Box<Formula>, Box<Formula>),
    All(Box<Formula>),
    Exists(Box<Formula>),
    Diamond(ActionSpec, Box<Formula>),
    BoxOp(ActionSpec, Box<Formula>),
    Mu(Arc<str>, Box<Formula>),
    Nu(Arc<str>, Box<Formula>),
    Var(Arc<str>),
}

/// The least general logic a formula belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LogicClass {
    Prop,
    Ltl,
    Ctl,
    CtlStar,
    MuCalc,
}

impl fmt::Display for LogicClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LogicClass::Prop => "propositional",
            LogicClass::Ltl => "LTL",
            LogicClass::Ctl => "CTL",
            LogicClass::CtlStar => "CTL*",
            LogicClass::MuCalc => "mu-calculus",
        })
    }
}

fn bx(f: Formula) -> Box<Formula> {
    Box::new(f)
}

impl Formula {
    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Formula {
        Formula::Not(bx(f))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(bx(a), bx(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(bx(a), bx(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(bx(a), bx(b))
    }

    pub fn next(a: Formula) -> Formula {
        Formula::Next(bx(a))
    }

    pub fn eventually(a: Formula) -> Formula {
        Formula::Eventually(bx(a))
    }

    pub fn always(a: Formula) -> Formula {
        Formula::Always(bx(a))
    }

    pub fn until(a: Formula, b: Formula) -> Formula {
        Formula::Until(bx(a), bx(b))
    }

    pub fn all(a: Formula) -> Formula {
        Formula::All(bx(a))
    }

    pub fn exists(a: Formula) -> Formula {
        Formula::Exists(bx(a))
    }

    pub fn diamond(spec: ActionSpec, a: Formula) -> Formula {
        Formula::Diamond(spec, bx(a))
    }

    pub fn box_op(spec: ActionSpec, a: Formula) -> Formula {
        Formula::BoxOp(spec, bx(a))
    }

    pub fn mu(x: &str, a: Formula) -> Formula {
        Formula::Mu(x.into(), bx(a))
    }

    pub fn nu(x: &str, a: Formula) -> Formula {
        Formula::Nu(x.into(), bx(a))
    }

    pub fn children(&self) -> Vec<&Formula> {
        use Formula::*;
        match self {
            True | False | Atom(_) | Var(_) => vec![],
            Not(a)
            | Next(a)
            | Eventually(a)
            | Always(a)
            | All(a)
            | Exists(a)
            | Diamond(_, a)
            | BoxOp(_, a)
            | Mu(_, a)
            | Nu(_, a) => vec![a],
            And(a, b) | Or(a, b) | Implies(a, b) | Iff(a, b) | Until(a, b) | Release(a, b) | WeakUntil(a, b) => {
                vec![a, b]
            }
        }
    }

    fn any(&self, p: &dyn Fn(&Formula) -> bool) -> bool {
        p(self) || self.children().into_iter().any(|c| c.any(p))
    }

    pub fn is_temporal(&self) -> bool {
        matches!(
            self,
            Formula::Next(_)
                | Formula::Eventually(_)
                | Formula::Always(_)
                | Formula::Until(..)
                | Formula::Release(..)
                | Formula::WeakUntil(..)
        )
    }

    pub fn is_quantifier(&self) -> bool {
        matches!(self, Formula::All(_) | Formula::Exists(_))
    }

    pub fn is_mu_construct(&self) -> bool {
        matches!(self, Formula::Diamond(..) | Formula::BoxOp(..) | Formula::Mu(..) | Formula::Nu(..) | Formula::Var(_))
    }

    /// Atomic propositions, without repetitions, in order of occurrence.
    pub fn atoms(&self) -> Vec<Term> {
        let mut out = Vec::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms(&self, out: &mut Vec<Term>) {
        if let Formula::Atom(t) = self {
            if !out.contains(t) {
                out.push(t.clone());
            }
        }
        for c in self.children() {
            c.collect_atoms(out);
        }
    }

    /// Whether the formula is a CTL state formula.
    fn is_ctl_state(&self) -> bool {
        use Formula::*;
        match self {
            True | False | Atom(_) => true,
            Not(a) => a.is_ctl_state(),
            And(a, b) | Or(a, b) | Implies(a, b) | Iff(a, b) => a.is_ctl_state() && b.is_ctl_state(),
            All(p) | Exists(p) => match &**p {
                Next(a) | Eventually(a) | Always(a) => a.is_ctl_state(),
                Until(a, b) | Release(a, b) | WeakUntil(a, b) => a.is_ctl_state() && b.is_ctl_state(),
                _ => false,
            },
            _ => false,
        }
    }

    pub fn classify(&self) -> LogicClass {
        if self.any(&Formula::is_mu_construct) {
            LogicClass::MuCalc
        } else if !self.any(&Formula::is_quantifier) {
            if self.any(&Formula::is_temporal) {
                LogicClass::Ltl
            } else {
                LogicClass::Prop
            }
        } else if self.is_ctl_state() {
            LogicClass::Ctl
        } else {
            LogicClass::CtlStar
        }
    }

    /// Drops every path quantifier.
    pub fn strip_quantifiers(&self) -> Formula {
        self.map_children(&|f| match f {
            Formula::All(a) | Formula::Exists(a) => Some(a.strip_quantifiers()),
            _ => None,
        })
    }

    /// Rebuilds the formula bottom-up, letting `f` replace any node.
    pub fn map_children(&self, f: &dyn Fn(&Formula) -> Option<Formula>) -> Formula {
        use Formula::*;
        if let Some(r) = f(self) {
            return r;
        }
        let m = |a: &Formula| bx(a.map_children(f));
        match self {
            True | False | Atom(_) | Var(_) => self.clone(),
            Not(a) => Not(m(a)),
            And(a, b) => And(m(a), m(b)),
            Or(a, b) => Or(m(a), m(b)),
            Implies(a, b) => Implies(m(a), m(b)),
            Iff(a, b) => Iff(m(a), m(b)),
            Next(a) => Next(m(a)),
            Eventually(a) => Eventually(m(a)),
            Always(a) => Always(m(a)),
            Until(a, b) => Until(m(a), m(b)),
            Release(a, b) => Release(m(a), m(b)),
            WeakUntil(a, b) => WeakUntil(m(a), m(b)),
            All(a) => All(m(a)),
            Exists(a) => Exists(m(a)),
            Diamond(s, a) => Diamond(s.clone(), m(a)),
            BoxOp(s, a) => BoxOp(s.clone(), m(a)),
            Mu(x, a) => Mu(x.clone(), m(a)),
            Nu(x, a) => Nu(x.clone(), m(a)),
        }
    }

    /// Checks that every fixpoint variable occurs under an even number of
    /// negations below its binder. Both sides of `<->` count as mixed.
    pub fn check_monotone(&self) -> Result<()> {
        fn walk(f: &Formula, neg: bool, scope: &mut Vec<(Arc<str>, bool)>) -> Result<()> {
            use Formula::*;
            match f {
                Var(x) => match scope.iter().rev().find(|(y, _)| y == x) {
                    Some((_, at)) if *at != neg => Err(Error::NonMonotoneFixpoint(x.to_string())),
                    _ => Ok(()),
                },
                Not(a) => walk(a, !neg, scope),
                Implies(a, b) => {
                    walk(a, !neg, scope)?;
                    walk(b, neg, scope)
                }
                Iff(a, b) => {
                    for side in [a, b] {
                        walk(side, neg, scope)?;
                        walk(side, !neg, scope)?;
                    }
                    Ok(())
                }
                Mu(x, a) | Nu(x, a) => {
                    scope.push((x.clone(), neg));
                    let r = walk(a, neg, scope);
                    scope.pop();
                    r
                }
                _ => f.children().into_iter().try_for_each(|c| walk(c, neg, scope)),
            }
        }
        walk(self, false, &mut Vec::new())
    }

    pub fn display<'a>(&'a self, sig: &'a Signature) -> FormulaDisplay<'a> {
        FormulaDisplay { sig, formula: self }
    }
}

pub struct FormulaDisplay<'a> {
    sig: &'a Signature,
    formula: &'a Formula,
}

impl FormulaDisplay<'_> {
    fn write(&self, f: &mut fmt::Formatter<'_>, x: &Formula) -> fmt::Result {
        use Formula::*;
        let sub = |f: &mut fmt::Formatter<'_>, y: &Formula| -> fmt::Result {
            let atomic = matches!(y, True | False | Atom(_) | Var(_));
            if atomic {
                self.write(f, y)
            } else {
                f.write_str("(")?;
                self.write(f, y)?;
                f.write_str(")")
            }
        };
        match x {
            True => f.write_str("True"),
            False => f.write_str("False"),
            Atom(t) => {
                let s = self.sig.display(t).without_sorts().to_string();
                if s.contains(' ') {
                    write!(f, "({s})")
                } else {
                    f.write_str(&s)
                }
            }
            Var(v) => f.write_str(v),
            Not(a) => {
                f.write_str("~ ")?;
                sub(f, a)
            }
            And(a, b) | Or(a, b) | Implies(a, b) | Iff(a, b) | Until(a, b) | Release(a, b) | WeakUntil(a, b) => {
                let op = match x {
                    And(..) => "/\\",
                    Or(..) => "\\/",
                    Implies(..) => "->",
                    Iff(..) => "<->",
                    Until(..) => "U",
                    Release(..) => "R",
                    _ => "W",
                };
                sub(f, a)?;
                write!(f, " {op} ")?;
                sub(f, b)
            }
            Next(a) | Eventually(a) | Always(a) | All(a) | Exists(a) => {
                let op = match x {
                    Next(_) => "O",
                    Eventually(_) => "<>",
                    Always(_) => "[]",
                    All(_) => "A",
                    _ => "E",
                };
                write!(f, "{op} ")?;
                sub(f, a)
            }
            Diamond(s, a) => {
                write!(f, "< {s} > ")?;
                sub(f, a)
            }
            BoxOp(s, a) => {
                write!(f, "[ {s} ] ")?;
                sub(f, a)
            }
            Mu(v, a) | Nu(v, a) => {
                let op = if matches!(x, Mu(..)) { "mu" } else { "nu" };
                write!(f, "{op} {v} . ")?;
                sub(f, a)
            }
        }
    }
}

impl fmt::Display for FormulaDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write(f, self.formula)
    }
}
