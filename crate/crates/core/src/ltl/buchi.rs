//! Translation of LTL formulas to generalized Büchi automata, following the
//! on-the-fly tableau of Gerth, Peled, Vardi and Wolper.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::formula::Formula;

/// LTL in negation normal form over numbered atoms.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Ltl {
    True,
    False,
    /// Atom index and polarity.
    Lit(usize, bool),
    And(Box<Ltl>, Box<Ltl>),
    Or(Box<Ltl>, Box<Ltl>),
    Next(Box<Ltl>),
    Until(Box<Ltl>, Box<Ltl>),
    Release(Box<Ltl>, Box<Ltl>),
}

fn b(f: Ltl) -> Box<Ltl> {
    Box::new(f)
}

impl Ltl {
    /// Converts a path formula, negated if `neg`. Subformulas that are not
    /// LTL connectives (atoms and path-quantified formulas) are numbered by
    /// `leaf`.
    pub fn from_formula(f: &Formula, neg: bool, leaf: &mut dyn FnMut(&Formula) -> Result<usize>) -> Result<Ltl> {
        use Formula as F;
        Ok(match f {
            F::True => {
                if neg {
                    Ltl::False
                } else {
                    Ltl::True
                }
            }
            F::False => {
                if neg {
                    Ltl::True
                } else {
                    Ltl::False
                }
            }
            F::Not(a) => Ltl::from_formula(a, !neg, leaf)?,
            F::And(x, y) | F::Or(x, y) => {
                let (x, y) = (Ltl::from_formula(x, neg, leaf)?, Ltl::from_formula(y, neg, leaf)?);
                if matches!(f, F::And(..)) != neg {
                    Ltl::And(b(x), b(y))
                } else {
                    Ltl::Or(b(x), b(y))
                }
            }
            F::Implies(x, y) => {
                let alt = F::Or(Box::new(F::Not(x.clone())), y.clone());
                Ltl::from_formula(&alt, neg, leaf)?
            }
            F::Iff(x, y) => {
                let both = F::and((**x).clone(), (**y).clone());
                let neither = F::and(F::not((**x).clone()), F::not((**y).clone()));
                Ltl::from_formula(&F::or(both, neither), neg, leaf)?
            }
            F::Next(a) => Ltl::Next(b(Ltl::from_formula(a, neg, leaf)?)),
            F::Eventually(a) => {
                let a = Ltl::from_formula(a, neg, leaf)?;
                if neg {
                    Ltl::Release(b(Ltl::False), b(a))
                } else {
                    Ltl::Until(b(Ltl::True), b(a))
                }
            }
            F::Always(a) => {
                let a = Ltl::from_formula(a, neg, leaf)?;
                if neg {
                    Ltl::Until(b(Ltl::True), b(a))
                } else {
                    Ltl::Release(b(Ltl::False), b(a))
                }
            }
            F::Until(x, y) | F::Release(x, y) => {
                let (x, y) = (Ltl::from_formula(x, neg, leaf)?, Ltl::from_formula(y, neg, leaf)?);
                if matches!(f, F::Until(..)) != neg {
                    Ltl::Until(b(x), b(y))
                } else {
                    Ltl::Release(b(x), b(y))
                }
            }
            // a W b = b R (a \/ b)
            F::WeakUntil(x, y) => {
                let alt = F::Release(y.clone(), Box::new(F::Or(x.clone(), y.clone())));
                Ltl::from_formula(&alt, neg, leaf)?
            }
            F::Atom(_) | F::All(_) | F::Exists(_) => Ltl::Lit(leaf(f)?, !neg),
            F::Diamond(..) | F::BoxOp(..) | F::Mu(..) | F::Nu(..) | F::Var(_) => {
                return Err(Error::UnsupportedFeature("mu-calculus operators inside a path formula".into()))
            }
        })
    }
}

/// A state-labeled generalized Büchi automaton: a run reads the letter of a
/// position in the state it enters, which must satisfy its literals.
#[derive(Debug, Clone)]
pub struct Buchi {
    pub nodes: Vec<BuchiNode>,
    /// One membership vector per acceptance set; runs must visit every set
    /// infinitely often. No sets means every infinite run accepts.
    pub acceptance: Vec<Vec<bool>>,
}

#[derive(Debug, Clone)]
pub struct BuchiNode {
    pub literals: Vec<(usize, bool)>,
    pub successors: Vec<usize>,
    pub initial: bool,
}

impl BuchiNode {
    pub fn admits(&self, letter: &[bool]) -> bool {
        self.literals.iter().all(|&(a, pol)| letter[a] == pol)
    }
}

#[derive(Clone)]
struct Tableau {
    incoming: BTreeSet<usize>,
    new: BTreeSet<Ltl>,
    old: BTreeSet<Ltl>,
    next: BTreeSet<Ltl>,
}

const INIT: usize = usize::MAX;

fn expand(mut node: Tableau, done: &mut Vec<Tableau>) {
    let Some(f) = node.new.pop_first() else {
        if let Some(d) = done.iter_mut().find(|d| d.old == node.old && d.next == node.next) {
            d.incoming.extend(node.incoming);
            return;
        }
        let id = done.len();
        let next = node.next.clone();
        done.push(node);
        expand(
            Tableau { incoming: BTreeSet::from([id]), new: next, old: BTreeSet::new(), next: BTreeSet::new() },
            done,
        );
        return;
    };
    if node.old.contains(&f) {
        return expand(node, done);
    }
    let add_new = |n: &mut Tableau, g: &Ltl| {
        if !n.old.contains(g) {
            n.new.insert(g.clone());
        }
    };
    match &f {
        Ltl::False => {}
        Ltl::True => {
            node.old.insert(f);
            expand(node, done);
        }
        Ltl::Lit(a, pol) => {
            if node.old.contains(&Ltl::Lit(*a, !pol)) {
                return;
            }
            node.old.insert(f);
            expand(node, done);
        }
        Ltl::And(x, y) => {
            add_new(&mut node, x);
            add_new(&mut node, y);
            node.old.insert(f);
            expand(node, done);
        }
        Ltl::Next(x) => {
            node.next.insert((**x).clone());
            node.old.insert(f);
            expand(node, done);
        }
        Ltl::Or(x, y) | Ltl::Until(x, y) | Ltl::Release(x, y) => {
            let mut n1 = node.clone();
            let mut n2 = node;
            match &f {
                Ltl::Or(..) => {
                    add_new(&mut n1, x);
                    add_new(&mut n2, y);
                }
                Ltl::Until(..) => {
                    add_new(&mut n1, x);
                    n1.next.insert(f.clone());
                    add_new(&mut n2, y);
                }
                _ => {
                    add_new(&mut n1, y);
                    n1.next.insert(f.clone());
                    add_new(&mut n2, x);
                    add_new(&mut n2, y);
                }
            }
            n1.old.insert(f.clone());
            n2.old.insert(f);
            expand(n1, done);
            expand(n2, done);
        }
    }
}

fn untils(f: &Ltl, out: &mut BTreeSet<Ltl>) {
    match f {
        Ltl::Until(x, y) => {
            out.insert(f.clone());
            untils(x, out);
            untils(y, out);
        }
        Ltl::And(x, y) | Ltl::Or(x, y) | Ltl::Release(x, y) => {
            untils(x, out);
            untils(y, out);
        }
        Ltl::Next(x) => untils(x, out),
        _ => {}
    }
}

pub fn ltl_to_buchi(f: &Ltl) -> Buchi {
    let mut done = Vec::new();
    expand(
        Tableau {
            incoming: BTreeSet::from([INIT]),
            new: BTreeSet::from([f.clone()]),
            old: BTreeSet::new(),
            next: BTreeSet::new(),
        },
        &mut done,
    );
    let mut nodes: Vec<BuchiNode> = done
        .iter()
        .map(|t| BuchiNode {
            literals: t
                .old
                .iter()
                .filter_map(|g| match g {
                    Ltl::Lit(a, p) => Some((*a, *p)),
                    _ => None,
                })
                .collect(),
            successors: Vec::new(),
            initial: t.incoming.contains(&INIT),
        })
        .collect();
    for (j, t) in done.iter().enumerate() {
        for &i in &t.incoming {
            if i != INIT {
                nodes[i].successors.push(j);
            }
        }
    }
    let mut us = BTreeSet::new();
    untils(f, &mut us);
    let acceptance = us
        .iter()
        .map(|u| {
            let Ltl::Until(_, y) = u else { unreachable!() };
            done.iter().map(|t| !t.old.contains(u) || t.old.contains(&**y)).collect()
        })
        .collect();
    Buchi { nodes, acceptance }
}

/// Nodes of a finite graph from which some cycle visiting every acceptance
/// set is reachable.
pub(crate) fn fair_nodes(succ: &[Vec<usize>], acceptance: &[Vec<bool>]) -> Vec<bool> {
    let n = succ.len();
    let mut good = vec![false; n];
    for scc in crate::kripke::sccs(n, |v| succ[v].clone()) {
        let nontrivial = scc.len() > 1 || succ[scc[0]].contains(&scc[0]);
        if nontrivial && acceptance.iter().all(|set| scc.iter().any(|&v| set[v])) {
            scc.iter().for_each(|&v| good[v] = true);
        }
    }
    let mut preds = vec![Vec::new(); n];
    for (v, ss) in succ.iter().enumerate() {
        ss.iter().for_each(|&w| preds[w].push(v));
    }
    let mut stack: Vec<usize> = (0..n).filter(|&v| good[v]).collect();
    while let Some(v) = stack.pop() {
        for &p in &preds[v] {
            if !good[p] {
                good[p] = true;
                stack.push(p);
            }
        }
    }
    good
}

impl Buchi {
    /// Whether the automaton accepts `prefix cycle^ω`.
    pub fn accepts(&self, prefix: &[Vec<bool>], cycle: &[Vec<bool>]) -> bool {
        let len = prefix.len() + cycle.len();
        let letter = |i: usize| if i < prefix.len() { &prefix[i] } else { &cycle[i - prefix.len()] };
        let next = |i: usize| if i + 1 < len { i + 1 } else { prefix.len() };
        let m = self.nodes.len();
        let id = |pos: usize, node: usize| pos * m + node;
        let mut succ = vec![Vec::new(); len * m];
        for pos in 0..len {
            for (q, node) in self.nodes.iter().enumerate() {
                if !node.admits(letter(pos)) {
                    continue;
                }
                let p2 = next(pos);
                for &q2 in &node.successors {
                    if self.nodes[q2].admits(letter(p2)) {
                        succ[id(pos, q)].push(id(p2, q2));
                    }
                }
            }
        }
        let acc: Vec<Vec<bool>> =
            self.acceptance.iter().map(|set| (0..len * m).map(|v| set[v % m]).collect()).collect();
        let fair = fair_nodes(&succ, &acc);
        self.nodes.iter().enumerate().any(|(q, node)| node.initial && node.admits(letter(0)) && fair[id(0, q)])
    }
}
