//! LTL model checking: emptiness of the product of the graph with the
//! automaton of the negated formula, by nested depth-first search.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::sync::Arc;

use super::buchi::{ltl_to_buchi, Buchi, Ltl};
use crate::error::Result;
use crate::formula::{Formula, STUTTER};
use crate::kripke::KripkeGraph;
use crate::term::Term;

/// An infinite path `prefix cycle^ω` of graph states, each paired with the
/// action of the edge leaving it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lasso {
    pub prefix: Vec<(usize, Arc<str>)>,
    pub cycle: Vec<(usize, Arc<str>)>,
}

impl Lasso {
    /// Renders the path as `counterexample({term,'label} ..., {term,'label} ...)`.
    pub fn render(&self, graph: &KripkeGraph) -> String {
        let item = |(s, l): &(usize, Arc<str>)| {
            let l = if &**l == STUTTER { "deadlock" } else { l };
            format!("{{{},'{l}}}", graph.show_state(*s))
        };
        let mut out = String::from("counterexample(");
        let part = |v: &[(usize, Arc<str>)]| v.iter().map(item).collect::<Vec<_>>().join("\n  ");
        write!(out, "{}", part(&self.prefix)).unwrap();
        if !self.prefix.is_empty() {
            out.push_str(",\n  ");
        } else {
            out.push_str("nil,\n  ");
        }
        write!(out, "{})", part(&self.cycle)).unwrap();
        out
    }

    /// States of the path, prefix then cycle.
    pub fn states(&self) -> impl Iterator<Item = usize> + '_ {
        self.prefix.iter().chain(&self.cycle).map(|(s, _)| *s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LtlVerdict {
    Holds,
    Fails(Lasso),
}

impl LtlVerdict {
    pub fn holds(&self) -> bool {
        matches!(self, LtlVerdict::Holds)
    }
}

/// Numbers the atomic propositions of a quantifier-free formula.
pub(crate) fn atom_leaf(atoms: &mut Vec<Term>) -> impl FnMut(&Formula) -> Result<usize> + '_ {
    move |f| match f {
        Formula::Atom(t) => Ok(match atoms.iter().position(|a| a == t) {
            Some(i) => i,
            None => {
                atoms.push(t.clone());
                atoms.len() - 1
            }
        }),
        _ => Err(crate::error::Error::UnsupportedFeature("path quantifiers in an LTL formula".into())),
    }
}

type ProdState = (usize, usize, usize);

struct Product<'a> {
    graph: &'a KripkeGraph,
    aut: &'a Buchi,
    val: &'a [Vec<bool>],
    ids: HashMap<ProdState, usize>,
    states: Vec<ProdState>,
}

impl Product<'_> {
    fn sets(&self) -> usize {
        self.aut.acceptance.len().max(1)
    }

    fn in_set(&self, q: usize, i: usize) -> bool {
        self.aut.acceptance.get(i).is_none_or(|set| set[q])
    }

    fn id(&mut self, p: ProdState) -> usize {
        let n = self.states.len();
        *self.ids.entry(p).or_insert_with(|| {
            self.states.push(p);
            n
        })
    }

    fn accepting(&self, v: usize) -> bool {
        let (_, q, i) = self.states[v];
        i == 0 && self.in_set(q, 0)
    }

    fn successors(&mut self, v: usize) -> Vec<usize> {
        let (s, q, i) = self.states[v];
        let j = if self.in_set(q, i) { (i + 1) % self.sets() } else { i };
        let mut out = Vec::new();
        for e in &self.graph.edges[s] {
            for &q2 in &self.aut.nodes[q].successors {
                if self.aut.nodes[q2].admits(&self.val[e.target]) {
                    out.push((e.target, q2, j));
                }
            }
        }
        out.into_iter().map(|p| self.id(p)).collect()
    }
}

/// Checks that every infinite path from the initial state satisfies `f`.
/// States without successors start no infinite path and are ignored.
pub fn check_ltl(graph: &KripkeGraph, f: &Formula) -> Result<LtlVerdict> {
    let mut atoms = Vec::new();
    let neg = Ltl::from_formula(f, true, &mut atom_leaf(&mut atoms))?;
    let val = graph.valuation(&atoms)?;
    let aut = ltl_to_buchi(&neg);
    check_automaton(graph, &aut, &val)
}

pub(crate) fn check_automaton(graph: &KripkeGraph, aut: &Buchi, val: &[Vec<bool>]) -> Result<LtlVerdict> {
    let mut prod = Product { graph, aut, val, ids: HashMap::new(), states: Vec::new() };
    let s0 = graph.initial;
    let roots: Vec<usize> = (0..aut.nodes.len())
        .filter(|&q| aut.nodes[q].initial && aut.nodes[q].admits(&val[s0]))
        .map(|q| prod.id((s0, q, 0)))
        .collect();

    let mut blue: Vec<bool> = Vec::new();
    let mut red: Vec<bool> = Vec::new();
    let mut on_stack: Vec<bool> = Vec::new();
    let grow = |v: &mut Vec<bool>, n: usize| {
        if v.len() < n {
            v.resize(n, false);
        }
    };
    for root in roots {
        grow(&mut blue, prod.states.len());
        if blue[root] {
            continue;
        }
        // outer search; each frame is a node with its pending successors
        let mut stack: Vec<(usize, Vec<usize>, usize)> = Vec::new();
        blue[root] = true;
        let succ = prod.successors(root);
        stack.push((root, succ, 0));
        grow(&mut on_stack, prod.states.len());
        on_stack[root] = true;
        while let Some(top) = stack.last_mut() {
            if top.2 < top.1.len() {
                let w = top.1[top.2];
                top.2 += 1;
                grow(&mut blue, prod.states.len());
                if !blue[w] {
                    blue[w] = true;
                    let succ = prod.successors(w);
                    grow(&mut on_stack, prod.states.len());
                    on_stack[w] = true;
                    stack.push((w, succ, 0));
                }
                continue;
            }
            let v = top.0;
            if prod.accepting(v) {
                if let Some(path) = inner(&mut prod, v, &mut red, &on_stack) {
                    let outer: Vec<usize> = stack.iter().map(|f| f.0).collect();
                    return Ok(LtlVerdict::Fails(lasso(&prod, &outer, &path)));
                }
            }
            on_stack[v] = false;
            stack.pop();
        }
    }
    Ok(LtlVerdict::Holds)
}

/// Inner search from an accepting seed: a path to any node on the outer
/// stack closes an accepting cycle.
fn inner(prod: &mut Product, seed: usize, red: &mut Vec<bool>, on_stack: &[bool]) -> Option<Vec<usize>> {
    let mut stack: Vec<(usize, Vec<usize>, usize)> = vec![(seed, prod.successors(seed), 0)];
    while let Some(top) = stack.last_mut() {
        if top.2 < top.1.len() {
            let w = top.1[top.2];
            top.2 += 1;
            if on_stack.get(w).copied().unwrap_or(false) {
                let mut path: Vec<usize> = stack.iter().map(|f| f.0).collect();
                path.push(w);
                return Some(path);
            }
            if red.len() < prod.states.len() {
                red.resize(prod.states.len(), false);
            }
            if !red[w] {
                red[w] = true;
                let succ = prod.successors(w);
                stack.push((w, succ, 0));
            }
            continue;
        }
        stack.pop();
    }
    None
}

/// Builds the lasso from the outer stack (ending at the seed) and the inner
/// path (seed ... t) where `t` is on the outer stack.
fn lasso(prod: &Product, outer: &[usize], inner: &[usize]) -> Lasso {
    let t = *inner.last().unwrap();
    let k = outer.iter().position(|&v| v == t).unwrap();
    let prefix_nodes = &outer[..k];
    let mut cycle_nodes: Vec<usize> = outer[k..].to_vec();
    cycle_nodes.extend(&inner[1..inner.len() - 1]);
    let g = prod.graph;
    let st = |v: usize| prod.states[v].0;
    let label = |a: usize, b: usize| -> Arc<str> {
        g.edges[a].iter().find(|e| e.target == b).map(|e| e.label.clone()).expect("product edge")
    };
    let mut all: Vec<usize> = prefix_nodes.iter().chain(&cycle_nodes).map(|&v| st(v)).collect();
    all.push(st(t));
    let with_labels = |range: std::ops::Range<usize>| -> Vec<(usize, Arc<str>)> {
        range.map(|i| (all[i], label(all[i], all[i + 1]))).collect()
    };
    let mut prefix = with_labels(0..prefix_nodes.len());
    let mut cycle = with_labels(prefix_nodes.len()..all.len() - 1);
    // Shorten the cycle to its period and the prefix as far as possible.
    for p in 1..=cycle.len() {
        if cycle.len() % p == 0 && (p..cycle.len()).all(|i| cycle[i] == cycle[i - p]) {
            cycle.truncate(p);
            break;
        }
    }
    while prefix.last().is_some_and(|x| Some(x) == cycle.last()) {
        let x = prefix.pop().unwrap();
        cycle.pop();
        cycle.insert(0, x);
    }
    Lasso { prefix, cycle }
}
