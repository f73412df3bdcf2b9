//! Equational normalization, condition evaluation and one-step rule
//! rewriting.

use std::cell::Cell;
use std::sync::Arc;

use super::matching::{for_each_match, match_term};
use super::{CondFragment, Condition, Signature, Substitution, Term, Var};
use crate::error::{Error, Result};

/// Which rules a rewrite step may use.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RuleFilter<'a> {
    Any,
    Label(&'a str),
}

impl RuleFilter<'_> {
    fn admits(&self, label: &str) -> bool {
        match self {
            RuleFilter::Any => true,
            RuleFilter::Label(l) => *l == label,
        }
    }
}

/// For a left-hand side headed by an associative symbol, the pattern with
/// extension variables and the matching right-hand side template, so that
/// the equation or rule also applies to fragments of a flattened term.
pub(crate) fn with_extension(sig: &Signature, lhs: &Term, rhs: &Term) -> Option<(Term, Term)> {
    let Term::App(f, ps) = lhs else { return None };
    let attrs = &sig.op(*f).attrs;
    if !attrs.assoc {
        return None;
    }
    if attrs.comm {
        let ext = Term::Var(Var::extension(""));
        let mut pat = ps.clone();
        pat.push(ext.clone());
        Some((Term::App(*f, pat), Term::App(*f, vec![rhs.clone(), ext])))
    } else {
        let left = Term::Var(Var::extension("l"));
        let right = Term::Var(Var::extension("r"));
        let mut pat = vec![left.clone()];
        pat.extend(ps.iter().cloned());
        pat.push(right.clone());
        Some((Term::App(*f, pat), Term::App(*f, vec![left, rhs.clone(), right])))
    }
}

struct Normalizer<'a> {
    sig: &'a Signature,
    steps: Cell<usize>,
}

impl Normalizer<'_> {
    fn norm(&self, t: &Term) -> Result<Term> {
        match t {
            Term::Var(v) => Err(Error::IllFormed(format!("unbound variable {} during reduction", v.name))),
            Term::App(op, args) => {
                let args = args.iter().map(|a| self.norm(a)).collect::<Result<Vec<_>>>()?;
                let t = self.sig.make(*op, args);
                match self.top_step(&t)? {
                    Some(next) => {
                        let n = self.steps.get() + 1;
                        if n > self.sig.normalize_budget {
                            return Err(Error::NonTermination(self.sig.normalize_budget));
                        }
                        self.steps.set(n);
                        self.norm(&next)
                    }
                    None => Ok(t),
                }
            }
        }
    }

    /// Applies one equation at the root, ordinary equations before `owise`
    /// ones, in declaration order.
    fn top_step(&self, t: &Term) -> Result<Option<Term>> {
        for owise in [false, true] {
            for eq in self.sig.equations().iter().filter(|e| e.owise == owise) {
                if eq.lhs.head() != t.head() {
                    continue;
                }
                let (pat, rhs) =
                    with_extension(self.sig, &eq.lhs, &eq.rhs).unwrap_or_else(|| (eq.lhs.clone(), eq.rhs.clone()));
                let mut result = Ok(None);
                for_each_match(self.sig, &pat, t, &Substitution::new(), &mut |s| match self.condition(&eq.cond, s) {
                    Ok(sols) => match sols.into_iter().next() {
                        Some(s2) => {
                            result = Ok(Some(s2.apply(self.sig, &rhs)));
                            true
                        }
                        None => false,
                    },
                    Err(e) => {
                        result = Err(e);
                        true
                    }
                });
                if !matches!(result, Ok(None)) {
                    return result;
                }
            }
        }
        Ok(None)
    }

    fn condition(&self, cond: &Condition, s: &Substitution) -> Result<Vec<Substitution>> {
        let mut current = vec![s.clone()];
        for frag in &cond.0 {
            let mut next = Vec::new();
            for s in current {
                match frag {
                    CondFragment::Equal(a, b) => {
                        if self.norm(&s.apply(self.sig, a))? == self.norm(&s.apply(self.sig, b))? {
                            next.push(s);
                        }
                    }
                    CondFragment::Bool(t) => {
                        if self.norm(&s.apply(self.sig, t))? == self.sig.true_term() {
                            next.push(s);
                        }
                    }
                    CondFragment::Match(p, t) => {
                        let subject = self.norm(&s.apply(self.sig, t))?;
                        for s2 in match_term(self.sig, p, &subject, &s) {
                            if !next.contains(&s2) {
                                next.push(s2);
                            }
                        }
                    }
                }
            }
            if next.is_empty() {
                return Ok(next);
            }
            current = next;
        }
        Ok(current)
    }
}

/// Reduces a ground term to its equational normal form.
pub fn normalize(sig: &Signature, t: &Term) -> Result<Term> {
    Normalizer { sig, steps: Cell::new(0) }.norm(t)
}

/// All extensions of `s` satisfying every fragment of `cond`.
pub fn eval_condition(sig: &Signature, cond: &Condition, s: &Substitution) -> Result<Vec<Substitution>> {
    Normalizer { sig, steps: Cell::new(0) }.condition(cond, s)
}

/// Whether `state |= prop` reduces to `true`.
pub fn eval_prop(sig: &Signature, state: &Term, prop: &Term) -> Result<bool> {
    let sat = Term::App(sig.builtins().sat_op, vec![state.clone(), prop.clone()]);
    Ok(normalize(sig, &sat)? == sig.true_term())
}

/// Positions of a term as index paths, in preorder.
pub(crate) fn positions(t: &Term, path: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    out.push(path.clone());
    for (i, a) in t.args().iter().enumerate() {
        path.push(i);
        positions(a, path, out);
        path.pop();
    }
}

pub(crate) fn subterm<'t>(t: &'t Term, path: &[usize]) -> &'t Term {
    path.iter().fold(t, |t, &i| &t.args()[i])
}

pub(crate) fn replace(sig: &Signature, t: &Term, path: &[usize], new: Term) -> Term {
    match path.split_first() {
        None => new,
        Some((&i, rest)) => {
            let Term::App(op, args) = t else { unreachable!() };
            let mut args = args.clone();
            args[i] = replace(sig, &args[i], rest, new);
            sig.make(*op, args)
        }
    }
}

/// Every one-step rewrite of `t` by a rule admitted by `filter`, with the
/// rule variables named in `init` pre-bound. Results are normalized and
/// reported once per (label, result).
pub fn rule_applications(
    sig: &Signature,
    t: &Term,
    filter: RuleFilter<'_>,
    init: &Substitution,
    top_only: bool,
) -> Result<Vec<(Arc<str>, Term)>> {
    if !t.is_ground() {
        return Err(Error::IllFormed("rewriting a term with variables".into()));
    }
    let mut paths = Vec::new();
    if top_only {
        paths.push(Vec::new());
    } else {
        positions(t, &mut Vec::new(), &mut paths);
    }
    let mut out: Vec<(Arc<str>, Term)> = Vec::new();
    for rule in sig.rules().iter().filter(|r| filter.admits(&r.label)) {
        // bind the variables given by name in `rule[x <- t]`
        let mut start = Substitution::new();
        let mut vars = rule.lhs.vars();
        vars.extend(rule.rhs.vars());
        let mut ok = true;
        for (v, value) in init.iter() {
            if let Some(rv) = vars.iter().find(|rv| rv.name == v.name) {
                if !sig.leq(sig.sort_of(value), rv.sort) {
                    ok = false;
                }
                start.insert(rv.clone(), value.clone());
            }
        }
        if !ok {
            continue;
        }
        let lhs = start.apply(sig, &rule.lhs);
        let rhs = start.apply(sig, &rule.rhs);
        let cond = rule.cond.instantiate(sig, &start);
        for path in &paths {
            let sub = subterm(t, path);
            if lhs.head().is_some() && lhs.head() != sub.head() {
                continue;
            }
            let (pat, template) = with_extension(sig, &lhs, &rhs).unwrap_or_else(|| (lhs.clone(), rhs.clone()));
            for s in match_term(sig, &pat, sub, &Substitution::new()) {
                for s2 in eval_condition(sig, &cond, &s)? {
                    let replaced = replace(sig, t, path, s2.apply(sig, &template));
                    let result = normalize(sig, &replaced)?;
                    if !out.iter().any(|(l, r)| *l == rule.label && *r == result) {
                        out.push((rule.label.clone(), result));
                    }
                }
            }
        }
    }
    Ok(out)
}
