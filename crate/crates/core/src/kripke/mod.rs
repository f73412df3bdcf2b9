//! Materialized Kripke structures: the rewrite graph of a term, the graph of
//! the strategy semantics, and its adaptations for branching-time logics.

mod bisim;
mod build;
mod dot;
mod unwind;

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use crate::error::Result;
use crate::strategy::ExecState;
use crate::term::{eval_prop, Signature, Term};

pub use bisim::bisimilar;
pub use build::{build_controlled, build_uncontrolled, BuildOptions, Merge, DEFAULT_GRAPH_BUDGET};
pub use dot::to_dot;
pub use unwind::{bounded_unwinding, Unwinding};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Payload {
    Term(Term),
    /// Execution states sharing one subject term, sorted and deduplicated.
    Group(Vec<ExecState>),
}

#[derive(Debug, Clone)]
pub struct State {
    pub payload: Payload,
    /// Stutter twin standing for a finished execution.
    pub terminal: bool,
    pub term: Term,
    /// Some member reaches a solution by control steps.
    pub solution: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Edge {
    pub label: Arc<str>,
    pub target: usize,
}

#[derive(Debug)]
pub struct KripkeGraph {
    pub sig: Arc<Signature>,
    pub states: Vec<State>,
    pub edges: Vec<Vec<Edge>>,
    pub initial: usize,
    /// States from which neither a solution nor an infinite execution is
    /// reachable. All false after purging.
    pub failed: Vec<bool>,
    labels: Mutex<HashMap<(usize, Term), bool>>,
}

impl KripkeGraph {
    pub(crate) fn new(sig: Arc<Signature>, states: Vec<State>, edges: Vec<Vec<Edge>>, initial: usize) -> Self {
        let failed = vec![false; states.len()];
        KripkeGraph { sig, states, edges, initial, failed, labels: Mutex::new(HashMap::new()) }
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn successors(&self, s: usize) -> impl Iterator<Item = usize> + '_ {
        self.edges[s].iter().map(|e| e.target)
    }

    pub fn edge_count(&self) -> usize {
        self.edges.iter().map(Vec::len).sum()
    }

    /// Whether `prop` holds in state `s`. Results are cached per graph.
    pub fn holds(&self, s: usize, prop: &Term) -> Result<bool> {
        let key = (s, prop.clone());
        if let Some(&v) = self.labels.lock().unwrap().get(&key) {
            return Ok(v);
        }
        let v = eval_prop(&self.sig, &self.states[s].term, prop)?;
        self.labels.lock().unwrap().insert(key, v);
        Ok(v)
    }

    /// Truth values of the given propositions, indexed by state then atom.
    pub fn valuation(&self, atoms: &[Term]) -> Result<Vec<Vec<bool>>> {
        (0..self.len()).map(|s| atoms.iter().map(|p| self.holds(s, p)).collect()).collect()
    }

    /// Whether every state has a successor.
    pub fn is_total(&self) -> bool {
        self.edges.iter().all(|e| !e.is_empty())
    }

    /// States from which a solution or an infinite path is reachable.
    pub fn valid_states(&self) -> Vec<bool> {
        let n = self.len();
        let mut good: Vec<bool> = (0..n).map(|s| self.states[s].solution || self.states[s].terminal).collect();
        // States on a cycle of system steps start an infinite execution.
        for scc in sccs(n, |s| self.edges[s].iter().filter(|e| &*e.label != crate::STUTTER).map(|e| e.target).collect())
        {
            let cyclic =
                scc.len() > 1 || self.edges[scc[0]].iter().any(|e| e.target == scc[0] && &*e.label != crate::STUTTER);
            if cyclic {
                scc.iter().for_each(|&s| good[s] = true);
            }
        }
        let mut preds = vec![Vec::new(); n];
        for (s, es) in self.edges.iter().enumerate() {
            es.iter().for_each(|e| preds[e.target].push(s));
        }
        let mut stack: Vec<usize> = (0..n).filter(|&s| good[s]).collect();
        while let Some(s) = stack.pop() {
            for &p in &preds[s] {
                if !good[p] {
                    good[p] = true;
                    stack.push(p);
                }
            }
        }
        good
    }

    /// Short text for a state: its subject term.
    pub fn show_state(&self, s: usize) -> String {
        self.sig.display(&self.states[s].term).without_sorts().to_string()
    }
}

/// Strongly connected components (Tarjan, iterative), in reverse
/// topological order.
pub(crate) fn sccs(n: usize, succ: impl Fn(usize) -> Vec<usize>) -> Vec<Vec<usize>> {
    let mut index = vec![usize::MAX; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut out = Vec::new();
    let mut counter = 0;
    for root in 0..n {
        if index[root] != usize::MAX {
            continue;
        }
        let mut work: Vec<(usize, Vec<usize>, usize)> = vec![(root, succ(root), 0)];
        index[root] = counter;
        low[root] = counter;
        counter += 1;
        stack.push(root);
        on_stack[root] = true;
        while let Some((v, ss, i)) = work.last_mut() {
            let v = *v;
            if *i < ss.len() {
                let w = ss[*i];
                *i += 1;
                if index[w] == usize::MAX {
                    index[w] = counter;
                    low[w] = counter;
                    counter += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    let sw = succ(w);
                    work.push((w, sw, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                work.pop();
                if let Some((u, _, _)) = work.last() {
                    low[*u] = low[*u].min(low[v]);
                }
                if low[v] == index[v] {
                    let mut comp = Vec::new();
                    loop {
                        let w = stack.pop().unwrap();
                        on_stack[w] = false;
                        comp.push(w);
                        if w == v {
                            break;
                        }
                    }
                    out.push(comp);
                }
            }
        }
    }
    out
}
