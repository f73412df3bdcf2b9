use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use super::KripkeGraph;
use crate::error::Result;
use crate::term::Term;

/// Whether the initial states of both graphs are bisimilar with respect to
/// `props`, and to the edge labels when `use_actions` is set. Computed by
/// partition refinement on the disjoint union of the graphs.
pub fn bisimilar(g1: &KripkeGraph, g2: &KripkeGraph, props: &[Term], use_actions: bool) -> Result<bool> {
    let n1 = g1.len();
    let n = n1 + g2.len();
    let mut succ: Vec<Vec<(Option<Arc<str>>, usize)>> = Vec::with_capacity(n);
    for (g, offset) in [(g1, 0), (g2, n1)] {
        for es in &g.edges {
            succ.push(es.iter().map(|e| (use_actions.then(|| e.label.clone()), e.target + offset)).collect());
        }
    }
    let mut keys: HashMap<Vec<bool>, usize> = HashMap::new();
    let mut block = Vec::with_capacity(n);
    for row in g1.valuation(props)?.into_iter().chain(g2.valuation(props)?) {
        let next = keys.len();
        block.push(*keys.entry(row).or_insert(next));
    }
    let mut count = keys.len();
    loop {
        // block of a state with the blocks it can step to
        type Key = (usize, BTreeSet<(Option<Arc<str>>, usize)>);
        let mut sigs: HashMap<Key, usize> = HashMap::new();
        let mut refined = Vec::with_capacity(n);
        for s in 0..n {
            let sig: BTreeSet<_> = succ[s].iter().map(|(l, t)| (l.clone(), block[*t])).collect();
            let next = sigs.len();
            refined.push(*sigs.entry((block[s], sig)).or_insert(next));
        }
        let new_count = sigs.len();
        block = refined;
        if new_count == count {
            break;
        }
        count = new_count;
    }
    Ok(block[g1.initial] == block[n1 + g2.initial])
}
