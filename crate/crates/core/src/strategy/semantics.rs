//! Small-step operational semantics of strategies.
//!
//! An execution state pairs a subject term with a stack of pending
//! strategies and substitutions (the top of the stack is the end of the
//! vector), or it is a composite `Subterm` state created by `matchrew` that
//! runs one nested state per rewritten subterm.
//!
//! Steps are either control steps, which only advance the strategy, or
//! system steps, which apply one rule. The relation `=>` used for model
//! checking is any number of control steps followed by one system step.

use std::cell::RefCell;
use std::collections::{HashMap, HashSet, VecDeque};
use std::sync::Arc;

use super::{StratTable, Strategy};
use crate::error::{Error, Result};
use crate::module::Module;
use crate::term::{
    eval_condition, for_each_match, match_term, normalize, positions, replace, rule_applications, subterm,
    with_extension, Condition, RuleFilter, Signature, SortId, Substitution, Term, Var,
};

/// A successor state with the label of the rule that produced it.
pub type Labeled = (Arc<str>, ExecState);

/// Default bound on the number of states of a single exploration.
pub const DEFAULT_STATE_BUDGET: usize = 100_000;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Frame {
    Strat(Arc<Strategy>),
    Subst(Arc<Substitution>),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ExecState {
    Simple {
        term: Term,
        stack: Vec<Frame>,
    },
    Subterm {
        members: Vec<(Var, ExecState)>,
        /// The matched pattern with the rewritten variables left as holes.
        context: Term,
        stack: Vec<Frame>,
    },
}

impl ExecState {
    pub fn is_solution(&self) -> bool {
        matches!(self, ExecState::Simple { stack, .. } if stack.is_empty())
    }

    pub fn stack(&self) -> &[Frame] {
        match self {
            ExecState::Simple { stack, .. } | ExecState::Subterm { stack, .. } => stack,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Step {
    Control,
    System(Arc<str>),
}

/// The subject term of an execution state.
pub fn cterm(sig: &Signature, q: &ExecState) -> Term {
    match q {
        ExecState::Simple { term, .. } => term.clone(),
        ExecState::Subterm { members, context, .. } => {
            let s: Substitution = members.iter().map(|(x, m)| (x.clone(), cterm(sig, m))).collect();
            let t = s.apply(sig, context);
            normalize(sig, &t).unwrap_or(t)
        }
    }
}

/// The substitution giving value to the variables of the strategy on top:
/// the topmost substitution frame below it.
fn theta(rest: &[Frame]) -> Option<&Arc<Substitution>> {
    rest.iter().rev().find_map(|f| match f {
        Frame::Subst(s) => Some(s),
        Frame::Strat(_) => None,
    })
}

/// Pushes a substitution frame. Substitution frames directly below it would
/// be popped right after it without scoping anything, so they are dropped;
/// this keeps tail-recursive strategies from growing the stack.
fn push_subst(mut stack: Vec<Frame>, s: Substitution) -> Vec<Frame> {
    while matches!(stack.last(), Some(Frame::Subst(_))) {
        stack.pop();
    }
    stack.push(Frame::Subst(Arc::new(s)));
    stack
}

fn with_frames(rest: &[Frame], frames: impl IntoIterator<Item = Frame>) -> Vec<Frame> {
    let mut v = rest.to_vec();
    v.extend(frames);
    v
}

type CondKey = (Term, Arc<Strategy>, Option<Arc<Substitution>>);

/// Evaluates the semantics over one module. Conditional branches are
/// decided by nested explorations whose results are cached.
pub struct Semantics<'m> {
    pub module: &'m Module,
    pub budget: usize,
    cond_cache: RefCell<HashMap<CondKey, bool>>,
}

impl<'m> Semantics<'m> {
    pub fn new(module: &'m Module) -> Self {
        Semantics { module, budget: DEFAULT_STATE_BUDGET, cond_cache: RefCell::new(HashMap::new()) }
    }

    pub fn with_budget(mut self, budget: usize) -> Self {
        self.budget = budget;
        self
    }

    fn sig(&self) -> &'m Signature {
        &self.module.sig
    }

    fn table(&self) -> &'m StratTable {
        &self.module.strategies
    }

    /// `normalize(t) @ α`
    pub fn initial(&self, t: &Term, strat: &Strategy) -> Result<ExecState> {
        Ok(ExecState::Simple { term: normalize(self.sig(), t)?, stack: vec![Frame::Strat(Arc::new(strat.clone()))] })
    }

    pub fn cterm(&self, q: &ExecState) -> Term {
        cterm(self.sig(), q)
    }

    /// All one-step successors of `q` with the kind of step taken.
    pub fn step_successors(&self, q: &ExecState) -> Result<Vec<(Step, ExecState)>> {
        match q {
            ExecState::Simple { term, stack } => {
                let Some((top, rest)) = stack.split_last() else {
                    return Ok(Vec::new());
                };
                match top {
                    Frame::Subst(_) => {
                        Ok(vec![(Step::Control, ExecState::Simple { term: term.clone(), stack: rest.to_vec() })])
                    }
                    Frame::Strat(s) => self.strat_step(term, s, rest),
                }
            }
            ExecState::Subterm { members, context, stack } => {
                if members.iter().all(|(_, m)| m.is_solution()) {
                    let term = normalize(self.sig(), &cterm(self.sig(), q))?;
                    return Ok(vec![(Step::Control, ExecState::Simple { term, stack: stack.clone() })]);
                }
                let mut out = Vec::new();
                for (i, (_, m)) in members.iter().enumerate() {
                    for (step, m2) in self.step_successors(m)? {
                        let mut members2 = members.clone();
                        members2[i].1 = m2;
                        out.push((
                            step,
                            ExecState::Subterm { members: members2, context: context.clone(), stack: stack.clone() },
                        ));
                    }
                }
                Ok(out)
            }
        }
    }

    fn strat_step(&self, t: &Term, s: &Arc<Strategy>, rest: &[Frame]) -> Result<Vec<(Step, ExecState)>> {
        let sig = self.sig();
        let th = theta(rest);
        let inst = |x: &Term| match th {
            Some(th) => th.apply(sig, x),
            None => x.clone(),
        };
        let inst_cond = |c: &Condition| match th {
            Some(th) => c.instantiate(sig, th),
            None => c.clone(),
        };
        let simple = |stack: Vec<Frame>| ExecState::Simple { term: t.clone(), stack };
        let control = |stack: Vec<Frame>| (Step::Control, simple(stack));
        Ok(match &**s {
            Strategy::Idle => vec![control(rest.to_vec())],
            Strategy::Fail => Vec::new(),
            Strategy::Rule { label, subst, top } => {
                let init: Substitution =
                    subst.iter().map(|(x, v)| (Var::new(x.clone(), SortId::ANY), inst(v))).collect();
                let filter = match label {
                    Some(l) => RuleFilter::Label(l),
                    None => RuleFilter::Any,
                };
                rule_applications(sig, t, filter, &init, *top)?
                    .into_iter()
                    .map(|(l, t2)| (Step::System(l), ExecState::Simple { term: t2, stack: rest.to_vec() }))
                    .collect()
            }
            Strategy::Match { anywhere, pattern, cond } => {
                let init = th.map(|a| (**a).clone()).unwrap_or_default();
                let found = self.find_matches(t, &inst(pattern), &inst_cond(cond), &init, *anywhere, true)?;
                if found.is_empty() {
                    Vec::new()
                } else {
                    vec![control(rest.to_vec())]
                }
            }
            Strategy::Concat(a, b) => {
                vec![control(with_frames(rest, [Frame::Strat(b.clone()), Frame::Strat(a.clone())]))]
            }
            Strategy::Union(a, b) => vec![
                control(with_frames(rest, [Frame::Strat(a.clone())])),
                control(with_frames(rest, [Frame::Strat(b.clone())])),
            ],
            Strategy::Iter(a) => vec![
                control(rest.to_vec()),
                control(with_frames(rest, [Frame::Strat(s.clone()), Frame::Strat(a.clone())])),
            ],
            Strategy::Cond(c, yes, no) => {
                let mut out = vec![control(with_frames(rest, [Frame::Strat(yes.clone()), Frame::Strat(c.clone())]))];
                if self.condition_fails(t, c, th)? {
                    out.push(control(with_frames(rest, [Frame::Strat(no.clone())])));
                }
                out
            }
            Strategy::MatchRew { anywhere, pattern, cond, using } => {
                let init = th.map(|a| (**a).clone()).unwrap_or_default();
                let vars: Vec<Var> = using.iter().map(|(x, _)| x.clone()).collect();
                let mut out = Vec::new();
                for (sigma, path, template) in
                    self.find_matches(t, &inst(pattern), &inst_cond(cond), &init, *anywhere, false)?
                {
                    let mut members = Vec::with_capacity(using.len());
                    for (x, a) in using {
                        let value = sigma.get(x).cloned().ok_or_else(|| {
                            Error::IllFormed(format!("matchrew variable {} is not in the pattern", x.name))
                        })?;
                        members.push((
                            x.clone(),
                            ExecState::Simple {
                                term: value,
                                stack: vec![Frame::Subst(Arc::new(sigma.clone())), Frame::Strat(a.clone())],
                            },
                        ));
                    }
                    let hole = sigma.without(&vars).apply(sig, &template);
                    let context = replace(sig, t, &path, hole);
                    out.push((Step::Control, ExecState::Subterm { members, context, stack: rest.to_vec() }));
                }
                out
            }
            Strategy::Call { name, args } => {
                let decl = self.table().get(name).ok_or_else(|| Error::UnknownStrategy(name.to_string()))?;
                let args = args.iter().map(|a| normalize(sig, &inst(a))).collect::<Result<Vec<_>>>()?;
                let mut out = Vec::new();
                for def in &decl.defs {
                    if def.params.len() != args.len() {
                        continue;
                    }
                    let mut sigmas = vec![Substitution::new()];
                    for (p, a) in def.params.iter().zip(&args) {
                        sigmas = sigmas.iter().flat_map(|s| match_term(sig, p, a, s)).collect();
                    }
                    for s in sigmas {
                        for s2 in eval_condition(sig, &def.cond, &s)? {
                            let stack = push_subst(rest.to_vec(), s2);
                            out.push(control(with_frames(&stack, [Frame::Strat(def.body.clone())])));
                        }
                    }
                }
                out
            }
        })
    }

    /// Matches of `pattern` in `t` (at the top, or anywhere) satisfying
    /// `cond`, as (substitution, position, template) where the template is
    /// the pattern extended to the whole flattened argument list at that
    /// position. With `first_only`, stops after the first one.
    fn find_matches(
        &self,
        t: &Term,
        pattern: &Term,
        cond: &Condition,
        init: &Substitution,
        anywhere: bool,
        first_only: bool,
    ) -> Result<Vec<(Substitution, Vec<usize>, Term)>> {
        let sig = self.sig();
        let mut paths = Vec::new();
        if anywhere {
            positions(t, &mut Vec::new(), &mut paths);
        } else {
            paths.push(Vec::new());
        }
        let mut out = Vec::new();
        for path in paths {
            let sub = subterm(t, &path);
            let (pat, template) = match (anywhere, with_extension(sig, pattern, pattern)) {
                (true, Some(ext)) if pattern.head() == sub.head() => ext,
                _ => (pattern.clone(), pattern.clone()),
            };
            let mut err = None;
            let mut stop = false;
            for_each_match(sig, &pat, sub, init, &mut |s| match eval_condition(sig, cond, s) {
                Ok(sols) => {
                    for s2 in sols {
                        let entry = (s2, path.clone(), template.clone());
                        if !out.contains(&entry) {
                            out.push(entry);
                        }
                        if first_only {
                            stop = true;
                            return true;
                        }
                    }
                    false
                }
                Err(e) => {
                    err = Some(e);
                    true
                }
            });
            if let Some(e) = err {
                return Err(e);
            }
            if stop {
                break;
            }
        }
        Ok(out)
    }

    /// Whether `t @ α θ` has finitely many reachable states and none of them
    /// is a solution, which enables the negative branch of a conditional.
    fn condition_fails(&self, t: &Term, c: &Arc<Strategy>, th: Option<&Arc<Substitution>>) -> Result<bool> {
        let key = (t.clone(), c.clone(), th.cloned());
        if let Some(&r) = self.cond_cache.borrow().get(&key) {
            return Ok(r);
        }
        let mut stack = Vec::new();
        if let Some(th) = th {
            stack.push(Frame::Subst(th.clone()));
        }
        stack.push(Frame::Strat(c.clone()));
        let start = ExecState::Simple { term: t.clone(), stack };
        let mut seen = HashSet::new();
        let mut todo = vec![start.clone()];
        seen.insert(start);
        let mut fails = true;
        while let Some(q) = todo.pop() {
            if q.is_solution() {
                fails = false;
                break;
            }
            for (_, q2) in self.step_successors(&q)? {
                if seen.insert(q2.clone()) {
                    if seen.len() > self.budget {
                        return Err(Error::NonTermination(self.budget));
                    }
                    todo.push(q2);
                }
            }
        }
        self.cond_cache.borrow_mut().insert(key, fails);
        Ok(fails)
    }

    /// The `=>` successors of `q`: every system step reachable through
    /// control steps, labeled by its rule. The flag tells whether a solution
    /// is reachable by control steps alone.
    pub fn opsem_successors(&self, q: &ExecState) -> Result<(Vec<Labeled>, bool)> {
        let mut seen = HashSet::new();
        let mut queue = VecDeque::new();
        seen.insert(q.clone());
        queue.push_back(q.clone());
        let mut solution = false;
        let mut out: Vec<(Arc<str>, ExecState)> = Vec::new();
        while let Some(r) = queue.pop_front() {
            if r.is_solution() {
                solution = true;
            }
            for (step, r2) in self.step_successors(&r)? {
                match step {
                    Step::Control => {
                        if seen.insert(r2.clone()) {
                            if seen.len() > self.budget {
                                return Err(Error::NonTermination(self.budget));
                            }
                            queue.push_back(r2);
                        }
                    }
                    Step::System(label) => {
                        if !out.iter().any(|(l, s)| *l == label && *s == r2) {
                            out.push((label, r2));
                        }
                    }
                }
            }
        }
        Ok((out, solution))
    }
}

/// The results of rewriting `t` with `strat`: the subject terms of every
/// reachable solution, in breadth-first discovery order, at most `max` of
/// them.
pub fn srewrite(module: &Module, t: &Term, strat: &Strategy, max: Option<usize>, budget: usize) -> Result<Vec<Term>> {
    let sem = Semantics::new(module).with_budget(budget);
    let start = sem.initial(t, strat)?;
    let mut seen = HashSet::new();
    let mut queue = VecDeque::new();
    seen.insert(start.clone());
    queue.push_back(start);
    let mut results: Vec<Term> = Vec::new();
    while let Some(q) = queue.pop_front() {
        if q.is_solution() {
            let r = sem.cterm(&q);
            if !results.contains(&r) {
                results.push(r);
                if max.is_some_and(|m| results.len() >= m) {
                    break;
                }
            }
        }
        for (_, q2) in sem.step_successors(&q)? {
            if seen.insert(q2.clone()) {
                if seen.len() > budget {
                    return Err(Error::NonTermination(budget));
                }
                queue.push_back(q2);
            }
        }
    }
    Ok(results)
}
