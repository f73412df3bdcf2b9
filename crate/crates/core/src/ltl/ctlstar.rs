//! CTL* model checking. Innermost path-quantified subformulas are decided
//! for every state at once by LTL emptiness on the product of the whole
//! graph with a Büchi automaton, then replaced by fresh atoms.

use std::collections::HashMap;

use super::buchi::{fair_nodes, ltl_to_buchi, Ltl};
use crate::error::{Error, Result};
use crate::formula::Formula;
use crate::kripke::KripkeGraph;

struct Checker<'g> {
    graph: &'g KripkeGraph,
    cache: HashMap<Formula, Vec<bool>>,
}

impl Checker<'_> {
    fn state(&mut self, f: &Formula) -> Result<Vec<bool>> {
        use Formula as F;
        if let Some(v) = self.cache.get(f) {
            return Ok(v.clone());
        }
        let n = self.graph.len();
        let pointwise = |a: Vec<bool>, b: Vec<bool>, op: fn(bool, bool) -> bool| -> Vec<bool> {
            a.into_iter().zip(b).map(|(x, y)| op(x, y)).collect()
        };
        let v = match f {
            F::True => vec![true; n],
            F::False => vec![false; n],
            F::Atom(p) => (0..n).map(|s| self.graph.holds(s, p)).collect::<Result<_>>()?,
            F::Not(a) => self.state(a)?.into_iter().map(|x| !x).collect(),
            F::And(a, b) => pointwise(self.state(a)?, self.state(b)?, |x, y| x && y),
            F::Or(a, b) => pointwise(self.state(a)?, self.state(b)?, |x, y| x || y),
            F::Implies(a, b) => pointwise(self.state(a)?, self.state(b)?, |x, y| !x || y),
            F::Iff(a, b) => pointwise(self.state(a)?, self.state(b)?, |x, y| x == y),
            F::Exists(p) => self.exists(p, false)?,
            F::All(p) => self.exists(p, true)?.into_iter().map(|x| !x).collect(),
            _ => {
                return Err(Error::UnsupportedFeature("path or mu-calculus operator outside a path quantifier".into()))
            }
        };
        self.cache.insert(f.clone(), v.clone());
        Ok(v)
    }

    /// States with an infinite path satisfying `p` (its negation if `neg`).
    fn exists(&mut self, p: &Formula, neg: bool) -> Result<Vec<bool>> {
        let mut columns: Vec<Vec<bool>> = Vec::new();
        let mut keys: Vec<Formula> = Vec::new();
        let mut failure = None;
        let ltl = {
            let mut leaf = |f: &Formula| -> Result<usize> {
                if let Some(i) = keys.iter().position(|k| k == f) {
                    return Ok(i);
                }
                match self.state(f) {
                    Ok(col) => {
                        keys.push(f.clone());
                        columns.push(col);
                        Ok(keys.len() - 1)
                    }
                    Err(e) => {
                        failure = Some(e.clone());
                        Err(e)
                    }
                }
            };
            Ltl::from_formula(p, neg, &mut leaf)
        };
        if let Some(e) = failure {
            return Err(e);
        }
        let ltl = ltl?;
        let aut = ltl_to_buchi(&ltl);
        let n = self.graph.len();
        let val: Vec<Vec<bool>> = (0..n).map(|s| columns.iter().map(|c| c[s]).collect()).collect();

        let mut ids: HashMap<(usize, usize), usize> = HashMap::new();
        let mut nodes = Vec::new();
        for (s, letter) in val.iter().enumerate() {
            for (q, node) in aut.nodes.iter().enumerate() {
                if node.admits(letter) {
                    ids.insert((s, q), nodes.len());
                    nodes.push((s, q));
                }
            }
        }
        let succ: Vec<Vec<usize>> = nodes
            .iter()
            .map(|&(s, q)| {
                let mut out = Vec::new();
                for t in self.graph.successors(s) {
                    for &q2 in &aut.nodes[q].successors {
                        if let Some(&id) = ids.get(&(t, q2)) {
                            out.push(id);
                        }
                    }
                }
                out
            })
            .collect();
        let acceptance: Vec<Vec<bool>> =
            aut.acceptance.iter().map(|set| nodes.iter().map(|&(_, q)| set[q]).collect()).collect();
        let fair = fair_nodes(&succ, &acceptance);
        let mut out = vec![false; n];
        for (i, &(s, q)) in nodes.iter().enumerate() {
            if fair[i] && aut.nodes[q].initial {
                out[s] = true;
            }
        }
        Ok(out)
    }
}

fn has_free_path_operator(f: &Formula) -> bool {
    if f.is_quantifier() {
        return false;
    }
    f.is_temporal() || f.children().into_iter().any(has_free_path_operator)
}

/// States satisfying a CTL* state formula.
pub fn ctl_star_states(graph: &KripkeGraph, f: &Formula) -> Result<Vec<bool>> {
    Checker { graph, cache: HashMap::new() }.state(f)
}

/// Whether the initial state satisfies `f`. Path operators outside any
/// quantifier are read universally, as in LTL.
pub fn check_ctl_star(graph: &KripkeGraph, f: &Formula) -> Result<bool> {
    let f = if has_free_path_operator(f) { Formula::all(f.clone()) } else { f.clone() };
    Ok(ctl_star_states(graph, &f)?[graph.initial])
}
