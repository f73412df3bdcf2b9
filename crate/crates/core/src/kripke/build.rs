use std::collections::{BTreeSet, HashMap, VecDeque};
use std::sync::Arc;

use indexmap::IndexMap;

use super::{Edge, KripkeGraph, Payload, State};
use crate::error::{Error, Result};
use crate::formula::STUTTER;
use crate::module::Module;
use crate::strategy::{ExecState, Semantics, Strategy, DEFAULT_STATE_BUDGET};
use crate::term::{normalize, rule_applications, RuleFilter, Signature, Substitution, Term};

/// Default bound on the number of states of a built graph.
pub const DEFAULT_GRAPH_BUDGET: usize = 1_000_000;

/// How the successors of a state are grouped into new states.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Merge {
    /// One state per execution state.
    #[default]
    No,
    /// Successors with the same subject term share a state.
    State,
    /// Successors with the same subject term and rule label share a state.
    Edge,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BuildOptions {
    pub purge_fails: bool,
    pub merge: Merge,
    /// Maximum number of graph states.
    pub budget: usize,
    /// Maximum number of states of the nested explorations that decide
    /// conditionals and control closures.
    pub semantics_budget: usize,
}

impl Default for BuildOptions {
    fn default() -> Self {
        BuildOptions {
            purge_fails: false,
            merge: Merge::No,
            budget: DEFAULT_GRAPH_BUDGET,
            semantics_budget: DEFAULT_STATE_BUDGET,
        }
    }
}

fn stutter() -> Arc<str> {
    Arc::from(STUTTER)
}

struct Interner {
    index: HashMap<(Payload, bool), usize>,
    states: Vec<State>,
    queue: VecDeque<usize>,
    budget: usize,
}

impl Interner {
    fn intern(&mut self, payload: Payload, terminal: bool, term: Term) -> Result<usize> {
        if let Some(&i) = self.index.get(&(payload.clone(), terminal)) {
            return Ok(i);
        }
        let i = self.states.len();
        if i >= self.budget {
            return Err(Error::StateBudgetExceeded(self.budget));
        }
        self.index.insert((payload.clone(), terminal), i);
        self.states.push(State { payload, terminal, term, solution: terminal });
        self.queue.push_back(i);
        Ok(i)
    }
}

/// Drops repeated edges, keeping the order in which they were found.
fn dedup_edges(edges: &mut Vec<Edge>) {
    let mut seen = std::collections::HashSet::new();
    edges.retain(|e| seen.insert(e.clone()));
}

/// The rewrite graph reachable from `t`, with stutter loops on deadlocks.
pub fn build_uncontrolled(sig: &Arc<Signature>, t: &Term, budget: usize) -> Result<KripkeGraph> {
    let start = normalize(sig, t)?;
    let mut it = Interner { index: HashMap::new(), states: Vec::new(), queue: VecDeque::new(), budget };
    it.intern(Payload::Term(start.clone()), false, start)?;
    let mut edges: Vec<Vec<Edge>> = Vec::new();
    while let Some(s) = it.queue.pop_front() {
        let term = it.states[s].term.clone();
        let mut out = Vec::new();
        for (label, r) in rule_applications(sig, &term, RuleFilter::Any, &Substitution::new(), false)? {
            let target = it.intern(Payload::Term(r.clone()), false, r)?;
            out.push(Edge { label, target });
        }
        if out.is_empty() {
            out.push(Edge { label: stutter(), target: s });
        }
        dedup_edges(&mut out);
        if edges.len() <= s {
            edges.resize(s + 1, Vec::new());
        }
        edges[s] = out;
    }
    edges.resize(it.states.len(), Vec::new());
    Ok(KripkeGraph::new(sig.clone(), it.states, edges, 0))
}

/// The graph of `t` controlled by `strat`, optionally merged and purged.
pub fn build_controlled(module: &Module, t: &Term, strat: &Strategy, opts: BuildOptions) -> Result<KripkeGraph> {
    let sem = Semantics::new(module).with_budget(opts.semantics_budget);
    let q0 = sem.initial(t, strat)?;
    let term0 = sem.cterm(&q0);
    let mut it = Interner { index: HashMap::new(), states: Vec::new(), queue: VecDeque::new(), budget: opts.budget };
    it.intern(Payload::Group(vec![q0]), false, term0)?;
    let mut edges: Vec<Vec<Edge>> = Vec::new();
    while let Some(s) = it.queue.pop_front() {
        if edges.len() <= s {
            edges.resize(s + 1, Vec::new());
        }
        if it.states[s].terminal {
            edges[s] = vec![Edge { label: stutter(), target: s }];
            continue;
        }
        let Payload::Group(members) = it.states[s].payload.clone() else {
            unreachable!("controlled states hold execution states")
        };
        let mut solution = false;
        let mut succs: Vec<(Arc<str>, ExecState)> = Vec::new();
        for q in &members {
            let (next, sol) = sem.opsem_successors(q)?;
            solution |= sol;
            succs.extend(next);
        }
        let mut out = Vec::new();
        match opts.merge {
            Merge::No => {
                for (label, q) in succs {
                    let term = sem.cterm(&q);
                    let target = it.intern(Payload::Group(vec![q]), false, term)?;
                    out.push(Edge { label, target });
                }
            }
            Merge::State | Merge::Edge => {
                // (label if merging by edge, term) -> (labels, members)
                type Blocks = IndexMap<(Option<Arc<str>>, Term), (BTreeSet<Arc<str>>, BTreeSet<ExecState>)>;
                let mut blocks = Blocks::new();
                for (label, q) in succs {
                    let term = sem.cterm(&q);
                    let key_label = (opts.merge == Merge::Edge).then(|| label.clone());
                    let block = blocks.entry((key_label, term)).or_default();
                    block.0.insert(label);
                    block.1.insert(q);
                }
                for ((_, term), (labels, qs)) in blocks {
                    let target = it.intern(Payload::Group(qs.into_iter().collect()), false, term)?;
                    out.extend(labels.into_iter().map(|label| Edge { label, target }));
                }
            }
        }
        if solution {
            it.states[s].solution = true;
            let target = if out.is_empty() {
                s
            } else {
                let st = &it.states[s];
                let (payload, term) = (st.payload.clone(), st.term.clone());
                it.intern(payload, true, term)?
            };
            out.push(Edge { label: stutter(), target });
        }
        dedup_edges(&mut out);
        edges[s] = out;
    }
    edges.resize(it.states.len(), Vec::new());
    let mut g = KripkeGraph::new(module.sig.clone(), it.states, edges, 0);
    g.failed = g.valid_states().into_iter().map(|v| !v).collect();
    if opts.purge_fails {
        g = purge(g)?;
    }
    Ok(g)
}

/// Removes the failed states and the edges leading to them.
fn purge(g: KripkeGraph) -> Result<KripkeGraph> {
    if g.failed[g.initial] {
        return Err(Error::EmptyBehavior);
    }
    let mut renum = vec![usize::MAX; g.len()];
    let mut states = Vec::new();
    for (i, st) in g.states.iter().enumerate() {
        if !g.failed[i] {
            renum[i] = states.len();
            states.push(st.clone());
        }
    }
    let edges = g
        .edges
        .iter()
        .enumerate()
        .filter(|(i, _)| !g.failed[*i])
        .map(|(_, es)| {
            es.iter()
                .filter(|e| !g.failed[e.target])
                .map(|e| Edge { label: e.label.clone(), target: renum[e.target] })
                .collect()
        })
        .collect();
    Ok(KripkeGraph::new(g.sig.clone(), states, edges, renum[g.initial]))
}
