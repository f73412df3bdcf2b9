//! CTL model checking by bottom-up labeling with the `EX`, `EU` and `EG`
//! fixpoints; the universal operators are reduced to them.

use crate::error::{Error, Result};
use crate::formula::Formula;
use crate::kripke::{sccs, KripkeGraph};

fn not(v: Vec<bool>) -> Vec<bool> {
    v.into_iter().map(|x| !x).collect()
}

fn zip(a: &[bool], b: &[bool], f: impl Fn(bool, bool) -> bool) -> Vec<bool> {
    a.iter().zip(b).map(|(&x, &y)| f(x, y)).collect()
}

pub(crate) struct Labeler<'g> {
    pub graph: &'g KripkeGraph,
    preds: Vec<Vec<usize>>,
    /// States starting some infinite path.
    fair: Vec<bool>,
}

impl<'g> Labeler<'g> {
    pub fn new(graph: &'g KripkeGraph) -> Self {
        let mut preds = vec![Vec::new(); graph.len()];
        for (s, es) in graph.edges.iter().enumerate() {
            for e in es {
                if !preds[e.target].contains(&s) {
                    preds[e.target].push(s);
                }
            }
        }
        let mut l = Labeler { graph, preds, fair: Vec::new() };
        l.fair = l.eg(&vec![true; graph.len()]);
        l
    }

    pub fn ex(&self, a: &[bool]) -> Vec<bool> {
        (0..self.graph.len()).map(|s| self.graph.successors(s).any(|t| a[t] && self.fair[t])).collect()
    }

    pub fn eu(&self, a: &[bool], b: &[bool]) -> Vec<bool> {
        let b = if self.fair.is_empty() { b.to_vec() } else { zip(b, &self.fair, |x, y| x && y) };
        self.reach_back(a, b)
    }

    fn reach_back(&self, a: &[bool], mut out: Vec<bool>) -> Vec<bool> {
        let mut stack: Vec<usize> = (0..out.len()).filter(|&s| out[s]).collect();
        while let Some(s) = stack.pop() {
            for &p in &self.preds[s] {
                if !out[p] && a[p] {
                    out[p] = true;
                    stack.push(p);
                }
            }
        }
        out
    }

    /// States with an infinite path staying in `a`.
    pub fn eg(&self, a: &[bool]) -> Vec<bool> {
        let n = self.graph.len();
        let mut core = vec![false; n];
        let succ = |s: usize| -> Vec<usize> {
            if a[s] {
                self.graph.successors(s).filter(|&t| a[t]).collect()
            } else {
                Vec::new()
            }
        };
        for scc in sccs(n, succ) {
            let s0 = scc[0];
            let cyclic = scc.len() > 1 || (a[s0] && self.graph.successors(s0).any(|t| t == s0));
            if cyclic {
                scc.iter().for_each(|&s| core[s] = true);
            }
        }
        self.reach_back(a, core)
    }

    pub fn au(&self, a: &[bool], b: &[bool]) -> Vec<bool> {
        let nb = not(b.to_vec());
        let stop = zip(&not(a.to_vec()), &nb, |x, y| x && y);
        let bad = zip(&self.eu(&nb, &stop), &self.eg(&nb), |x, y| x || y);
        not(bad)
    }

    pub fn label(&self, f: &Formula) -> Result<Vec<bool>> {
        use Formula as F;
        let n = self.graph.len();
        Ok(match f {
            F::True => vec![true; n],
            F::False => vec![false; n],
            F::Atom(p) => (0..n).map(|s| self.graph.holds(s, p)).collect::<Result<_>>()?,
            F::Not(a) => not(self.label(a)?),
            F::And(a, b) => zip(&self.label(a)?, &self.label(b)?, |x, y| x && y),
            F::Or(a, b) => zip(&self.label(a)?, &self.label(b)?, |x, y| x || y),
            F::Implies(a, b) => zip(&self.label(a)?, &self.label(b)?, |x, y| !x || y),
            F::Iff(a, b) => zip(&self.label(a)?, &self.label(b)?, |x, y| x == y),
            F::Exists(p) => match &**p {
                F::Next(a) => self.ex(&self.label(a)?),
                F::Eventually(a) => self.eu(&vec![true; n], &self.label(a)?),
                F::Always(a) => self.eg(&self.label(a)?),
                F::Until(a, b) => self.eu(&self.label(a)?, &self.label(b)?),
                // E[a R b] = E[b U (a /\ b)] \/ EG b
                F::Release(a, b) => {
                    let (a, b) = (self.label(a)?, self.label(b)?);
                    zip(&self.eu(&b, &zip(&a, &b, |x, y| x && y)), &self.eg(&b), |x, y| x || y)
                }
                F::WeakUntil(a, b) => {
                    let (a, b) = (self.label(a)?, self.label(b)?);
                    zip(&self.eu(&a, &b), &self.eg(&a), |x, y| x || y)
                }
                _ => return Err(not_ctl()),
            },
            F::All(p) => match &**p {
                F::Next(a) => not(self.ex(&not(self.label(a)?))),
                F::Eventually(a) => self.au(&vec![true; n], &self.label(a)?),
                F::Always(a) => not(self.eu(&vec![true; n], &not(self.label(a)?))),
                F::Until(a, b) => self.au(&self.label(a)?, &self.label(b)?),
                // A[a R b] = ~E[~a U ~b]
                F::Release(a, b) => not(self.eu(&not(self.label(a)?), &not(self.label(b)?))),
                // A[a W b] = ~E[~b U (~a /\ ~b)]
                F::WeakUntil(a, b) => {
                    let (na, nb) = (not(self.label(a)?), not(self.label(b)?));
                    not(self.eu(&nb, &zip(&na, &nb, |x, y| x && y)))
                }
                _ => return Err(not_ctl()),
            },
            _ => return Err(not_ctl()),
        })
    }
}

fn not_ctl() -> Error {
    Error::UnsupportedFeature("formula outside CTL given to the CTL checker".into())
}

/// States satisfying a CTL formula. Quantifiers range over infinite paths;
/// states without successors satisfy no `E` path formula.
pub fn ctl_states(graph: &KripkeGraph, f: &Formula) -> Result<Vec<bool>> {
    Labeler::new(graph).label(f)
}

pub fn check_ctl(graph: &KripkeGraph, f: &Formula) -> Result<bool> {
    Ok(ctl_states(graph, f)?[graph.initial])
}
