//! Fixtures and independent oracles shared by the integration tests.
#![allow(dead_code)]

pub mod suites;

use std::collections::{BTreeSet, HashSet};
use std::sync::Arc;

use stratmc::kripke::{build_controlled, build_uncontrolled, BuildOptions, KripkeGraph, Merge, DEFAULT_GRAPH_BUDGET};
use stratmc::ltl::Ltl;
use stratmc::mucalc::{ParityGame, Player};
use stratmc::{Formula, Module, Term};

pub const RIVER: &str = include_str!("../../specs/river.spec");
pub const VENDING: &str = include_str!("../../specs/vending.spec");

pub const ALPHA: &str = "put1 ; apple | put1 ; put1 ; cake";
pub const BETA: &str = "put1 ; (apple | put1 ; cake)";

pub fn river() -> Module {
    Module::from_source(RIVER, None).unwrap()
}

pub fn vending() -> Module {
    Module::from_source(VENDING, None).unwrap()
}

pub fn ground(m: &Module, text: &str) -> Term {
    m.parse_ground(text).unwrap()
}

pub fn formula(m: &Module, text: &str) -> Formula {
    m.parse_formula(text).unwrap().0
}

pub fn opts(purge_fails: bool, merge: Merge) -> BuildOptions {
    BuildOptions { purge_fails, merge, ..Default::default() }
}

pub fn controlled(m: &Module, term: &str, strat: &str, purge_fails: bool, merge: Merge) -> KripkeGraph {
    let s = m.parse_strategy(strat).unwrap();
    build_controlled(m, &ground(m, term), &s, opts(purge_fails, merge)).unwrap()
}

pub fn uncontrolled(m: &Module, term: &str) -> KripkeGraph {
    build_uncontrolled(&m.sig, &ground(m, term), DEFAULT_GRAPH_BUDGET).unwrap()
}

fn purge_name(purged: bool) -> &'static str {
    if purged {
        "purged"
    } else {
        "unpurged"
    }
}

/// Every graph of the corpus with a name, in the variants the checkers use.
pub fn corpus_graphs() -> Vec<(String, Module, KripkeGraph)> {
    let mut out = Vec::new();
    let r = river();
    out.push(("river uncontrolled".into(), r.clone(), uncontrolled(&r, "initial")));
    for s in ["safe", "eagerEating"] {
        for (p, mg) in [(false, Merge::No), (true, Merge::State), (true, Merge::Edge)] {
            out.push((format!("river {s} {} {mg:?}", purge_name(p)), r.clone(), controlled(&r, "initial", s, p, mg)));
        }
    }
    let v = vending();
    out.push(("vending uncontrolled".into(), v.clone(), uncontrolled(&v, "initial")));
    for s in [ALPHA, BETA] {
        for (p, mg) in [(false, Merge::No), (true, Merge::No), (true, Merge::State), (true, Merge::Edge)] {
            out.push((format!("vending {s} {} {mg:?}", purge_name(p)), v.clone(), controlled(&v, "initial", s, p, mg)));
        }
    }
    out
}

/// Whether `f` holds on the word `prefix cycle^ω`, by direct fixpoint
/// evaluation over the positions of the lasso.
pub fn word_holds(f: &Ltl, prefix: &[Vec<bool>], cycle: &[Vec<bool>]) -> bool {
    let len = prefix.len() + cycle.len();
    let letter = |i: usize| if i < prefix.len() { &prefix[i] } else { &cycle[i - prefix.len()] };
    let next = |i: usize| if i + 1 < len { i + 1 } else { prefix.len() };
    fn eval(f: &Ltl, len: usize, letter: &dyn Fn(usize) -> Vec<bool>, next: &dyn Fn(usize) -> usize) -> Vec<bool> {
        match f {
            Ltl::True => vec![true; len],
            Ltl::False => vec![false; len],
            Ltl::Lit(a, pol) => (0..len).map(|i| letter(i)[*a] == *pol).collect(),
            Ltl::And(x, y) | Ltl::Or(x, y) => {
                let (x, y) = (eval(x, len, letter, next), eval(y, len, letter, next));
                let and = matches!(f, Ltl::And(..));
                (0..len).map(|i| if and { x[i] && y[i] } else { x[i] || y[i] }).collect()
            }
            Ltl::Next(x) => {
                let x = eval(x, len, letter, next);
                (0..len).map(|i| x[next(i)]).collect()
            }
            Ltl::Until(x, y) | Ltl::Release(x, y) => {
                let (x, y) = (eval(x, len, letter, next), eval(y, len, letter, next));
                let until = matches!(f, Ltl::Until(..));
                let mut v = vec![!until; len];
                loop {
                    let w: Vec<bool> = (0..len)
                        .map(|i| if until { y[i] || (x[i] && v[next(i)]) } else { y[i] && (x[i] || v[next(i)]) })
                        .collect();
                    if w == v {
                        return v;
                    }
                    v = w;
                }
            }
        }
    }
    let letter_owned = |i: usize| letter(i).clone();
    eval(f, len, &letter_owned, &next)[0]
}

/// Greatest fixpoint over state pairs: the naive bisimilarity oracle.
pub fn naive_bisimilar(g1: &KripkeGraph, g2: &KripkeGraph, props: &[Term], use_actions: bool) -> bool {
    let v1 = g1.valuation(props).unwrap();
    let v2 = g2.valuation(props).unwrap();
    let mut rel: HashSet<(usize, usize)> = HashSet::new();
    for (s, l1) in v1.iter().enumerate() {
        for (t, l2) in v2.iter().enumerate() {
            if l1 == l2 {
                rel.insert((s, t));
            }
        }
    }
    let label_ok = |a: &Arc<str>, b: &Arc<str>| !use_actions || a == b;
    loop {
        let keep: HashSet<(usize, usize)> = rel
            .iter()
            .copied()
            .filter(|&(s, t)| {
                g1.edges[s].iter().all(|e| {
                    g2.edges[t].iter().any(|f| label_ok(&e.label, &f.label) && rel.contains(&(e.target, f.target)))
                }) && g2.edges[t].iter().all(|f| {
                    g1.edges[s].iter().any(|e| label_ok(&e.label, &f.label) && rel.contains(&(e.target, f.target)))
                })
            })
            .collect();
        if keep.len() == rel.len() {
            return rel.contains(&(g1.initial, g2.initial));
        }
        rel = keep;
    }
}

/// Winner of every vertex by enumerating the positional strategies of both
/// players (positional determinacy makes this exact).
pub fn brute_force_parity(g: &ParityGame) -> Vec<Player> {
    let n = g.len();
    let choices = |p: Player| -> Vec<Vec<usize>> {
        let mut all: Vec<Vec<usize>> = vec![Vec::new()];
        for v in 0..n {
            let opts: Vec<usize> = if g.owner[v] == p { g.edges[v].clone() } else { vec![usize::MAX] };
            all = all
                .into_iter()
                .flat_map(|s| {
                    opts.iter().map(move |&o| {
                        let mut s = s.clone();
                        s.push(o);
                        s
                    })
                })
                .collect();
        }
        all
    };
    let even_strats = choices(Player::Even);
    let odd_strats = choices(Player::Odd);
    let winner = |v0: usize, se: &[usize], so: &[usize]| -> bool {
        let mut seen = vec![usize::MAX; n];
        let mut path = Vec::new();
        let mut v = v0;
        while seen[v] == usize::MAX {
            seen[v] = path.len();
            path.push(v);
            v = if g.owner[v] == Player::Even { se[v] } else { so[v] };
        }
        let top = path[seen[v]..].iter().map(|&u| g.priority[u]).max().unwrap();
        top % 2 == 0
    };
    (0..n)
        .map(|v| {
            let even_wins = even_strats.iter().any(|se| odd_strats.iter().all(|so| winner(v, se, so)));
            if even_wins {
                Player::Even
            } else {
                Player::Odd
            }
        })
        .collect()
}

/// Label sequences of length at most `k` of the graph's executions, cut at
/// the first stutter edge.
pub fn graph_traces(g: &KripkeGraph, k: usize) -> BTreeSet<Vec<Arc<str>>> {
    let mut out = BTreeSet::new();
    fn go(g: &KripkeGraph, s: usize, k: usize, trace: &mut Vec<Arc<str>>, out: &mut BTreeSet<Vec<Arc<str>>>) {
        out.insert(trace.clone());
        if trace.len() == k {
            return;
        }
        for e in &g.edges[s] {
            if &*e.label == stratmc::STUTTER {
                continue;
            }
            trace.push(e.label.clone());
            go(g, e.target, k, trace, out);
            trace.pop();
        }
    }
    go(g, g.initial, k, &mut Vec::new(), &mut out);
    out
}

/// Minimal checker for the subset of the DOT language: `digraph { ... }`
/// with node, edge and default-attribute statements.
pub fn parse_dot(text: &str) -> Result<(usize, usize), String> {
    let mut toks: Vec<String> = Vec::new();
    let cs: Vec<char> = text.chars().collect();
    let mut i = 0;
    while i < cs.len() {
        let c = cs[i];
        if c.is_whitespace() {
            i += 1;
        } else if c == '"' {
            let mut s = String::from("\"");
            i += 1;
            loop {
                match cs.get(i) {
                    None => return Err("unterminated string".into()),
                    Some('\\') => {
                        s.push(cs[i + 1]);
                        i += 2;
                    }
                    Some('"') => {
                        i += 1;
                        break;
                    }
                    Some(&ch) => {
                        s.push(ch);
                        i += 1;
                    }
                }
            }
            toks.push(s);
        } else if c == '-' && cs.get(i + 1) == Some(&'>') {
            toks.push("->".into());
            i += 2;
        } else if "{}[];=,".contains(c) {
            toks.push(c.to_string());
            i += 1;
        } else if c.is_alphanumeric() || c == '_' {
            let start = i;
            while i < cs.len() && (cs[i].is_alphanumeric() || cs[i] == '_' || cs[i] == '.') {
                i += 1;
            }
            toks.push(cs[start..i].iter().collect());
        } else {
            return Err(format!("unexpected character {c:?}"));
        }
    }
    let mut p = 0;
    let expect = |p: &mut usize, t: &str| -> Result<(), String> {
        if toks.get(*p).map(String::as_str) == Some(t) {
            *p += 1;
            Ok(())
        } else {
            Err(format!("expected {t} at token {p}"))
        }
    };
    expect(&mut p, "digraph")?;
    if toks.get(p).is_some_and(|t| t != "{") {
        p += 1;
    }
    expect(&mut p, "{")?;
    let is_id = |t: &str| t.starts_with('"') || t.chars().all(|c| c.is_alphanumeric() || c == '_' || c == '.');
    let (mut nodes, mut edges) = (0, 0);
    while toks.get(p).map(String::as_str) != Some("}") {
        let Some(id) = toks.get(p).cloned() else { return Err("unexpected end".into()) };
        if !is_id(&id) {
            return Err(format!("bad statement start {id}"));
        }
        p += 1;
        let mut is_edge = false;
        while toks.get(p).map(String::as_str) == Some("->") {
            p += 1;
            let t = toks.get(p).ok_or("missing edge target")?;
            if !is_id(t) {
                return Err("bad edge target".into());
            }
            p += 1;
            is_edge = true;
        }
        if toks.get(p).map(String::as_str) == Some("[") {
            p += 1;
            while toks.get(p).map(String::as_str) != Some("]") {
                let k = toks.get(p).ok_or("unterminated attributes")?.clone();
                if !is_id(&k) {
                    return Err("bad attribute name".into());
                }
                p += 1;
                expect(&mut p, "=")?;
                let v = toks.get(p).ok_or("missing attribute value")?;
                if !is_id(v) {
                    return Err("bad attribute value".into());
                }
                p += 1;
                if toks.get(p).map(String::as_str) == Some(",") {
                    p += 1;
                }
            }
            p += 1;
        }
        if toks.get(p).map(String::as_str) == Some(";") {
            p += 1;
        }
        if is_edge {
            edges += 1;
        } else if !["node", "edge", "graph"].contains(&id.as_str()) {
            nodes += 1;
        }
    }
    p += 1;
    if p != toks.len() {
        return Err("trailing tokens".into());
    }
    Ok((nodes, edges))
}
