use std::collections::HashMap;

use crate::error::Result;
use crate::formula::Formula;
use crate::kripke::KripkeGraph;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Player {
    Even,
    Odd,
}

impl Player {
    pub fn opponent(self) -> Player {
        match self {
            Player::Even => Player::Odd,
            Player::Odd => Player::Even,
        }
    }

    /// The player favoured by a priority under the max-parity condition.
    pub fn of_priority(p: usize) -> Player {
        if p.is_multiple_of(2) {
            Player::Even
        } else {
            Player::Odd
        }
    }
}

/// A max-parity game: a play is won by Even iff the highest priority seen
/// infinitely often is even. Every vertex has a successor.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ParityGame {
    pub owner: Vec<Player>,
    pub priority: Vec<usize>,
    pub edges: Vec<Vec<usize>>,
}

impl ParityGame {
    pub fn len(&self) -> usize {
        self.owner.len()
    }

    pub fn is_empty(&self) -> bool {
        self.owner.is_empty()
    }

    pub fn add_vertex(&mut self, owner: Player, priority: usize) -> usize {
        self.owner.push(owner);
        self.priority.push(priority);
        self.edges.push(Vec::new());
        self.owner.len() - 1
    }
}

/// Subformula tree of a positive-normal-form formula, variables resolved
/// to the node of their binder.
struct Node {
    kind: Kind,
    priority: usize,
}

enum Kind {
    Const(bool),
    Lit(crate::term::Term, bool),
    Or(usize, usize),
    And(usize, usize),
    Diamond(crate::formula::ActionSpec, usize),
    Box(crate::formula::ActionSpec, usize),
    Fix(usize),
    Var(usize),
}

fn index(f: &Formula, nodes: &mut Vec<Node>, scope: &mut Vec<(std::sync::Arc<str>, usize)>) -> Result<usize> {
    use Formula as F;
    let id = nodes.len();
    nodes.push(Node { kind: Kind::Const(false), priority: 0 });
    let kind = match f {
        F::True => Kind::Const(true),
        F::False => Kind::Const(false),
        F::Atom(t) => Kind::Lit(t.clone(), true),
        F::Not(a) => match &**a {
            F::Atom(t) => Kind::Lit(t.clone(), false),
            _ => unreachable!("negation below an atom in positive normal form"),
        },
        F::And(a, b) => Kind::And(index(a, nodes, scope)?, index(b, nodes, scope)?),
        F::Or(a, b) => Kind::Or(index(a, nodes, scope)?, index(b, nodes, scope)?),
        F::Diamond(spec, a) => Kind::Diamond(spec.clone(), index(a, nodes, scope)?),
        F::BoxOp(spec, a) => Kind::Box(spec.clone(), index(a, nodes, scope)?),
        F::Mu(x, a) | F::Nu(x, a) => {
            scope.push((x.clone(), id));
            let body = index(a, nodes, scope);
            scope.pop();
            let body = body?;
            // Least value of the right parity dominating every inner binder.
            let inner = nodes[body..].iter().map(|n| n.priority).max().unwrap_or(0);
            let want = if matches!(f, F::Mu(..)) { 1 } else { 0 };
            nodes[id].priority = if inner % 2 == want { inner } else { inner + 1 };
            Kind::Fix(body)
        }
        F::Var(x) => match scope.iter().rev().find(|(y, _)| y == x) {
            Some(&(_, b)) => Kind::Var(b),
            None => return Err(crate::error::Error::UnboundMuVariable(x.to_string())),
        },
        _ => unreachable!("only mu-calculus formulas reach the game construction"),
    };
    nodes[id].kind = kind;
    Ok(id)
}

/// The evaluation game of a positive-normal-form formula on a graph, built
/// from the vertex (initial state, formula), which is returned as well.
pub fn build_parity_game(graph: &KripkeGraph, f: &Formula) -> Result<(ParityGame, usize)> {
    let mut nodes = Vec::new();
    let top = index(f, &mut nodes, &mut Vec::new())?;
    let mut game = ParityGame::default();
    let mut ids: HashMap<(usize, usize), usize> = HashMap::new();
    let mut queue = Vec::new();
    let mut vertex = |game: &mut ParityGame, queue: &mut Vec<(usize, usize, usize)>, s: usize, n: usize| -> usize {
        *ids.entry((s, n)).or_insert_with(|| {
            let v = game.add_vertex(Player::Even, 0);
            queue.push((v, s, n));
            v
        })
    };
    let root = vertex(&mut game, &mut queue, graph.initial, top);
    while let Some((v, s, n)) = queue.pop() {
        let (owner, succ): (Player, Vec<(usize, usize)>) = match &nodes[n].kind {
            Kind::Const(b) => (if *b { Player::Odd } else { Player::Even }, Vec::new()),
            Kind::Lit(t, pol) => {
                let b = graph.holds(s, t)? == *pol;
                (if b { Player::Odd } else { Player::Even }, Vec::new())
            }
            Kind::Or(a, b) => (Player::Even, vec![(s, *a), (s, *b)]),
            Kind::And(a, b) => (Player::Odd, vec![(s, *a), (s, *b)]),
            Kind::Diamond(spec, a) | Kind::Box(spec, a) => {
                let owner = if matches!(nodes[n].kind, Kind::Diamond(..)) { Player::Even } else { Player::Odd };
                let mut ts: Vec<usize> =
                    graph.edges[s].iter().filter(|e| spec.admits(&e.label)).map(|e| e.target).collect();
                ts.sort_unstable();
                ts.dedup();
                (owner, ts.into_iter().map(|t| (t, *a)).collect())
            }
            Kind::Fix(a) => (Player::Even, vec![(s, *a)]),
            Kind::Var(b) => (Player::Even, vec![(s, *b)]),
        };
        game.owner[v] = owner;
        if succ.is_empty() {
            // A stuck player loses: the self-loop favours the other one.
            game.priority[v] = if owner == Player::Even { 1 } else { 0 };
            game.edges[v] = vec![v];
        } else {
            game.priority[v] = nodes[n].priority;
            game.edges[v] = succ.into_iter().map(|(t, m)| vertex(&mut game, &mut queue, t, m)).collect();
        }
    }
    Ok((game, root))
}
