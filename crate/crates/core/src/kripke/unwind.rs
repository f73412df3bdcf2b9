use std::sync::Arc;

use super::KripkeGraph;

/// A finite prefix of the execution tree of a graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Unwinding {
    pub state: usize,
    pub children: Vec<(Arc<str>, Unwinding)>,
}

impl Unwinding {
    pub fn size(&self) -> usize {
        1 + self.children.iter().map(|(_, c)| c.size()).sum::<usize>()
    }

    /// Label sequences of all root paths of exactly the given length.
    pub fn traces(&self, depth: usize) -> Vec<Vec<Arc<str>>> {
        if depth == 0 {
            return vec![Vec::new()];
        }
        let mut out = Vec::new();
        for (l, c) in &self.children {
            for mut t in c.traces(depth - 1) {
                t.insert(0, l.clone());
                out.push(t);
            }
        }
        out
    }
}

/// The executions of `graph` from its initial state, cut at depth `k`.
pub fn bounded_unwinding(graph: &KripkeGraph, k: usize) -> Unwinding {
    fn go(g: &KripkeGraph, s: usize, k: usize) -> Unwinding {
        let children = if k == 0 {
            Vec::new()
        } else {
            g.edges[s].iter().map(|e| (e.label.clone(), go(g, e.target, k - 1))).collect()
        };
        Unwinding { state: s, children }
    }
    go(graph, graph.initial, k)
}
