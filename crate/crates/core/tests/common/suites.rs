//! The checks behind the acceptance criteria. Each function panics on the
//! first disagreement; the module tests and the acceptance target both run
//! them.

use std::collections::BTreeSet;
use std::sync::Arc;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use stratmc::kripke::{bisimilar, KripkeGraph, Merge};
use stratmc::ltl::{
    check_ctl, check_ctl_star, check_ltl, ctl_star_states, ctl_states, ltl_to_buchi, Lasso, Ltl, LtlVerdict,
};
use stratmc::mucalc::{check_mu, zielonka, ParityGame, Player};
use stratmc::strategy::{srewrite, Step, DEFAULT_STATE_BUDGET};
use stratmc::term::{match_all, rule_applications, RuleFilter, Substitution};
use stratmc::{ExecState, Formula, Module, Semantics, Strategy, Term};

use super::*;

pub fn lasso_of(v: LtlVerdict) -> Lasso {
    match v {
        LtlVerdict::Fails(l) => l,
        LtlVerdict::Holds => panic!("expected a counterexample"),
    }
}

/// The lasso is a path of the graph and its word violates `f`.
pub fn assert_genuine(g: &KripkeGraph, f: &Formula, l: &Lasso) {
    assert!(!l.cycle.is_empty());
    let all: Vec<_> = l.prefix.iter().chain(&l.cycle).collect();
    assert_eq!(all[0].0, g.initial);
    for (i, (s, label)) in all.iter().enumerate() {
        let next = if i + 1 < all.len() { all[i + 1].0 } else { l.cycle[0].0 };
        assert!(g.edges[*s].iter().any(|e| e.target == next && &e.label == label));
    }
    let mut atoms: Vec<Term> = Vec::new();
    let ltl = numbered_ltl(f, &mut atoms);
    let letters = |v: &[(usize, Arc<str>)]| -> Vec<Vec<bool>> {
        v.iter().map(|(s, _)| atoms.iter().map(|a| g.holds(*s, a).unwrap()).collect()).collect()
    };
    assert!(!word_holds(&ltl, &letters(&l.prefix), &letters(&l.cycle)));
}

/// The LTL form of a quantifier-free formula, numbering atoms into `atoms`.
pub fn numbered_ltl(f: &Formula, atoms: &mut Vec<Term>) -> Ltl {
    let mut leaf = |f: &Formula| -> stratmc::Result<usize> {
        let Formula::Atom(t) = f else { unreachable!() };
        Ok(atoms.iter().position(|a| a == t).unwrap_or_else(|| {
            atoms.push(t.clone());
            atoms.len() - 1
        }))
    };
    Ltl::from_formula(f, false, &mut leaf).unwrap()
}

pub fn river_ltl() {
    let r = river();
    let f = |s: &str| formula(&r, s);
    let eager = controlled(&r, "initial", "eagerEating", false, Merge::No);
    assert!(check_ltl(&eager, &f("[] (risky -> O death)")).unwrap().holds());

    let safe = controlled(&r, "initial", "safe", false, Merge::No);
    let goal = f("<> goal");
    let l = lasso_of(check_ltl(&safe, &goal).unwrap());
    assert_genuine(&safe, &goal, &l);
    let cycle: Vec<(Term, &str)> = l.cycle.iter().map(|(s, a)| (safe.states[*s].term.clone(), &**a)).collect();
    assert_eq!(
        cycle,
        vec![
            (ground(&r, "left goat | right shepherd wolf cabbage"), "alone"),
            (ground(&r, "left shepherd goat | right wolf cabbage"), "alone"),
        ]
    );

    let unc = uncontrolled(&r, "initial");
    assert!(check_ltl(&unc, &f("[] (death -> [] ~ goal)")).unwrap().holds());
}

fn within_twice(n: usize, anchor: usize) -> bool {
    2 * n >= anchor && n <= 2 * anchor
}

pub fn river_ctl() {
    let r = river();
    let f = formula(&r, "A [] E <> goal");
    let safe = controlled(&r, "initial", "safe", true, Merge::State);
    let eager = controlled(&r, "initial", "eagerEating", true, Merge::State);
    let unc = uncontrolled(&r, "initial");
    assert!(check_ctl(&safe, &f).unwrap());
    assert!(!check_ctl(&eager, &f).unwrap());
    assert!(!check_ctl(&unc, &f).unwrap());
    let g = formula(&r, "A [] (risky \\/ death \\/ E <> goal)");
    assert!(check_ctl(&eager, &g).unwrap());
    for (graph, anchor) in [(&safe, 16), (&eager, 43), (&unc, 36)] {
        assert!(within_twice(graph.len(), anchor), "{} states against {anchor}", graph.len());
    }
}

pub fn river_mu() {
    let r = river();
    let unc = uncontrolled(&r, "initial");
    let eager = controlled(&r, "initial", "eagerEating", true, Merge::Edge);
    let f1 = formula(&r, "[ alone wolf cabbage ] risky /\\ < goat > ~ risky");
    let f2 = formula(&r, "[ goat ] (mu Z . goal \\/ < ~ goat > Z)");
    assert!(check_mu(&unc, &f1).unwrap().holds);
    assert!(!check_mu(&eager, &f2).unwrap().holds);
    assert!(check_mu(&unc, &f2).unwrap().holds);
}

pub fn vending_discrepancy() {
    let v = vending();
    let f = formula(&v, "A O E <> hasCake");
    let graph = |s: &str, merge: Merge| controlled(&v, "initial", s, true, merge);
    assert!(!check_ctl(&graph(ALPHA, Merge::No), &f).unwrap());
    assert!(check_ctl(&graph(BETA, Merge::No), &f).unwrap());
    assert!(check_ctl(&graph(ALPHA, Merge::State), &f).unwrap());
    assert!(check_ctl(&graph(BETA, Merge::State), &f).unwrap());
    assert!(!check_ctl_star(&graph(ALPHA, Merge::No), &f).unwrap());
}

pub fn vending_bisimulation() {
    let v = vending();
    let cake = vec![v.parse_term("hasCake").unwrap()];
    let a = controlled(&v, "initial", ALPHA, true, Merge::State);
    let b = controlled(&v, "initial", BETA, true, Merge::State);
    assert!(bisimilar(&a, &b, &cake, false).unwrap());
    assert!(naive_bisimilar(&a, &b, &cake, false));
    for purge in [false, true] {
        let a = controlled(&v, "initial", ALPHA, purge, Merge::No);
        let b = controlled(&v, "initial", BETA, purge, Merge::No);
        assert!(!bisimilar(&a, &b, &cake, false).unwrap());
        assert!(!naive_bisimilar(&a, &b, &cake, false));
    }
}

pub fn random_strategy(rng: &mut StdRng, labels: &[&str], depth: u32) -> Strategy {
    if depth == 0 || rng.gen_bool(0.3) {
        return match rng.gen_range(0..8) {
            0 => Strategy::Idle,
            1 => Strategy::Fail,
            2 => Strategy::Rule { label: None, subst: vec![], top: false },
            _ => Strategy::rule(labels[rng.gen_range(0..labels.len())]),
        };
    }
    let sub = |rng: &mut StdRng| random_strategy(rng, labels, depth - 1);
    match rng.gen_range(0..7) {
        0 | 1 => Strategy::concat(sub(rng), sub(rng)),
        2 | 3 => Strategy::union(sub(rng), sub(rng)),
        4 => Strategy::iter(sub(rng)),
        5 => Strategy::cond(sub(rng), sub(rng), sub(rng)),
        _ => Strategy::not(sub(rng)),
    }
}

/// Random (module, term, strategy, strategy) instances over both corpus
/// systems.
pub fn instances(count: usize, seed: u64) -> Vec<(Module, Term, Strategy, Strategy)> {
    let mut rng = StdRng::seed_from_u64(seed);
    let (r, v) = (river(), vending());
    let river_terms = ["initial", "left wolf cabbage | right shepherd goat", "left wolf goat | right shepherd cabbage"];
    let vending_terms = ["e e [empty]", "e [e]", "e e e [empty]", "a [e e]"];
    (0..count)
        .map(|i| {
            let (m, term, labels): (&Module, &str, &[&str]) = if i % 2 == 0 {
                (
                    &r,
                    river_terms[rng.gen_range(0..river_terms.len())],
                    &["alone", "wolf", "goat", "cabbage", "wolf-eats", "goat-eats"],
                )
            } else {
                (&v, vending_terms[rng.gen_range(0..vending_terms.len())], &["put1", "apple", "cake"])
            };
            let a = random_strategy(&mut rng, labels, 3);
            let b = random_strategy(&mut rng, labels, 3);
            (m.clone(), ground(m, term), a, b)
        })
        .collect()
}

pub fn results(m: &Module, t: &Term, s: &Strategy) -> BTreeSet<Term> {
    srewrite(m, t, s, None, DEFAULT_STATE_BUDGET).unwrap().into_iter().collect()
}

pub fn srewrite_algebra(count: usize, seed: u64) {
    for (m, t, a, b) in instances(count, seed) {
        let ra = results(&m, &t, &a);
        let rb = results(&m, &t, &b);
        let union = results(&m, &t, &Strategy::union(a.clone(), b.clone()));
        assert_eq!(union, ra.union(&rb).cloned().collect(), "union of {a:?} and {b:?}");
        let seq = results(&m, &t, &Strategy::concat(a.clone(), b.clone()));
        let composed: BTreeSet<Term> = ra.iter().flat_map(|u| results(&m, u, &b)).collect();
        assert_eq!(seq, composed, "concatenation of {a:?} and {b:?}");
        assert_eq!(results(&m, &t, &Strategy::concat(Strategy::Idle, a.clone())), ra);
        assert_eq!(results(&m, &t, &Strategy::concat(a.clone(), Strategy::Idle)), ra);
        assert_eq!(
            results(&m, &t, &Strategy::cond(a.clone(), Strategy::Idle, Strategy::Idle)),
            results(&m, &t, &Strategy::try_(a.clone()))
        );
    }
}

/// Control steps keep the subject term; system steps are rule rewrites.
pub fn step_projection(count: usize, seed: u64) {
    for (m, t, a, _) in instances(count, seed) {
        let sem = Semantics::new(&m);
        let mut seen = BTreeSet::new();
        let mut stack = vec![sem.initial(&t, &a).unwrap()];
        while let Some(q) = stack.pop() {
            if !seen.insert(q.clone()) || seen.len() > 2000 {
                continue;
            }
            let before = sem.cterm(&q);
            let rewrites = rule_applications(&m.sig, &before, RuleFilter::Any, &Substitution::new(), false).unwrap();
            for (k, q2) in sem.step_successors(&q).unwrap() {
                let after = sem.cterm(&q2);
                match k {
                    Step::Control => assert_eq!(after, before),
                    Step::System(l) => assert!(rewrites.contains(&(l, after))),
                }
                stack.push(q2);
            }
        }
    }
}

/// System-label traces of length at most `k` by expanding single steps
/// without any memoization; runs of control steps are cut at `fuel`.
fn naive_traces(
    sem: &Semantics,
    q: &ExecState,
    k: usize,
    fuel: usize,
    prefix: &mut Vec<Arc<str>>,
    out: &mut BTreeSet<Vec<Arc<str>>>,
) {
    out.insert(prefix.clone());
    if fuel == 0 {
        return;
    }
    for (step, q2) in sem.step_successors(q).unwrap() {
        match step {
            Step::Control => naive_traces(sem, &q2, k, fuel - 1, prefix, out),
            Step::System(l) if prefix.len() < k => {
                prefix.push(l);
                naive_traces(sem, &q2, k, 40, prefix, out);
                prefix.pop();
            }
            Step::System(_) => {}
        }
    }
}

pub fn bounded_traces() {
    let (r, v) = (river(), vending());
    let cases: Vec<(&Module, &str, &str, usize)> = vec![
        (&v, "initial", ALPHA, 8),
        (&v, "initial", BETA, 8),
        (&v, "e e e [empty]", "(put1 | apple | cake) *", 8),
        (&r, "initial", "eagerEating", 8),
        (&r, "initial", "safe", 8),
        (&r, "initial", "oneCrossing * ; goat", 5),
    ];
    for (m, term, strat, k) in cases {
        let g = controlled(m, term, strat, false, Merge::No);
        let sem = Semantics::new(m);
        let q = sem.initial(&ground(m, term), &m.parse_strategy(strat).unwrap()).unwrap();
        let mut naive = BTreeSet::new();
        naive_traces(&sem, &q, k, 40, &mut Vec::new(), &mut naive);
        assert_eq!(graph_traces(&g, k), naive, "{strat}");
    }
}

pub fn ltl_corpus(m: &Module) -> Vec<&'static str> {
    if m.name == "RIVER-CHECK" {
        vec![
            "[] (risky -> O death)",
            "<> goal",
            "[] (death -> [] ~ goal)",
            "[] <> goal",
            "<> [] goal",
            "~ death U goal",
            "risky R ~ goal",
            "O O risky",
            "goal \\/ ~ goal",
            "[] ~ death",
        ]
    } else {
        vec![
            "<> hasCake",
            "[] ~ hasCake",
            "O ~ hasCake",
            "<> [] hasCake",
            "~ hasCake U hasCake",
            "[] (hasCake -> [] hasCake)",
        ]
    }
}

pub fn ctl_corpus(m: &Module) -> Vec<&'static str> {
    if m.name == "RIVER-CHECK" {
        vec![
            "A [] E <> goal",
            "A [] (risky \\/ death \\/ E <> goal)",
            "E <> goal",
            "A <> goal",
            "E [] ~ goal",
            "A (~ death U goal)",
            "E (~ death U goal)",
            "A O risky",
            "E O E O death",
            "A (risky R ~ goal)",
            "E (risky R ~ goal)",
            "A [] (death -> A [] death)",
        ]
    } else {
        vec![
            "A O E <> hasCake",
            "E <> hasCake",
            "A <> hasCake",
            "A [] ~ hasCake",
            "E [] ~ hasCake",
            "A O A O ~ hasCake",
        ]
    }
}

pub fn props(m: &Module) -> Vec<&'static str> {
    if m.name == "RIVER-CHECK" {
        vec!["goal", "risky", "death"]
    } else {
        vec!["hasCake"]
    }
}

pub fn ltl_vs_ctl_star(graphs: &[(String, Module, KripkeGraph)]) {
    for (name, m, g) in graphs {
        for text in ltl_corpus(m) {
            let f = formula(m, text);
            let ltl = check_ltl(g, &f).unwrap().holds();
            assert_eq!(ltl, check_ctl_star(g, &f).unwrap(), "{name}: {text}");
            assert_eq!(ltl, check_ctl_star(g, &Formula::all(f)).unwrap(), "{name}: {text}");
        }
    }
}

pub fn ctl_vs_ctl_star(graphs: &[(String, Module, KripkeGraph)]) {
    for (name, m, g) in graphs {
        for text in ctl_corpus(m) {
            let f = formula(m, text);
            let states = ctl_states(g, &f).unwrap();
            assert_eq!(states, ctl_star_states(g, &f).unwrap(), "{name}: {text}");
            assert_eq!(check_ctl(g, &f).unwrap(), check_ctl_star(g, &f).unwrap(), "{name}: {text}");
        }
    }
}

/// Least and greatest fixpoints against `E <>` and `A []` on the total
/// graphs, which are the ones the branching-time checkers take. Unpurged
/// graphs with failed dead ends are skipped: there the path quantifiers
/// see only infinite paths while the modalities also see finite ones.
/// Returns the number of comparisons.
pub fn mu_vs_ctl(graphs: &[(String, Module, KripkeGraph)]) -> usize {
    let mut compared = 0;
    for (name, m, g) in graphs {
        let unpurged = name.contains("unpurged");
        assert!(unpurged || g.is_total(), "{name} is not total");
        if !g.is_total() {
            continue;
        }
        for p in props(m) {
            let ef = check_ctl(g, &formula(m, &format!("E <> {p}"))).unwrap();
            let mu = check_mu(g, &formula(m, &format!("mu Z . {p} \\/ < . > Z"))).unwrap().holds;
            let ag = check_ctl(g, &formula(m, &format!("A [] {p}"))).unwrap();
            let nu = check_mu(g, &formula(m, &format!("nu Z . {p} /\\ [ . ] Z"))).unwrap().holds;
            assert_eq!(ef, mu, "{name}: {p}");
            assert_eq!(ag, nu, "{name}: {p}");
            compared += 2;
        }
    }
    compared
}

pub fn random_ltl(rng: &mut StdRng, depth: u32) -> Ltl {
    if depth == 0 || rng.gen_bool(0.25) {
        return match rng.gen_range(0..6) {
            0 => Ltl::True,
            1 => Ltl::False,
            k => Ltl::Lit(k % 2, k < 4),
        };
    }
    let b = |rng: &mut StdRng| Box::new(random_ltl(rng, depth - 1));
    match rng.gen_range(0..5) {
        0 => Ltl::And(b(rng), b(rng)),
        1 => Ltl::Or(b(rng), b(rng)),
        2 => Ltl::Next(b(rng)),
        3 => Ltl::Until(b(rng), b(rng)),
        _ => Ltl::Release(b(rng), b(rng)),
    }
}

/// Letters over two propositions, one per number.
pub fn word(bits: &[u8]) -> Vec<Vec<bool>> {
    bits.iter().map(|&b| vec![b & 1 != 0, b & 2 != 0]).collect()
}

/// Returns the number of words checked.
pub fn buchi_vs_words(formulas: usize, words_each: usize, seed: u64) -> usize {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut words = 0;
    for _ in 0..formulas {
        let f = random_ltl(&mut rng, 4);
        let aut = ltl_to_buchi(&f);
        for _ in 0..words_each {
            let p: Vec<u8> = (0..rng.gen_range(0..4)).map(|_| rng.gen_range(0..4)).collect();
            let c: Vec<u8> = (0..rng.gen_range(1..4)).map(|_| rng.gen_range(0..4)).collect();
            let (p, c) = (word(&p), word(&c));
            assert_eq!(aut.accepts(&p, &c), word_holds(&f, &p, &c), "{f:?} on {p:?} {c:?}");
            words += 1;
        }
    }
    words
}

pub fn random_game(rng: &mut StdRng, n: usize, max_priority: usize) -> ParityGame {
    let mut g = ParityGame::default();
    for _ in 0..n {
        let owner = if rng.gen_bool(0.5) { Player::Even } else { Player::Odd };
        g.add_vertex(owner, rng.gen_range(0..=max_priority));
    }
    for v in 0..n {
        let k = rng.gen_range(1..=3.min(n));
        let mut succ: Vec<usize> = (0..k).map(|_| rng.gen_range(0..n)).collect();
        succ.sort_unstable();
        succ.dedup();
        g.edges[v] = succ;
    }
    g
}

/// Every game on one or two vertices with priorities up to 4, then random
/// games on up to eight. Returns the number of games solved.
pub fn zielonka_vs_brute_force(samples: usize, seed: u64) -> usize {
    let mut games = 0;
    let players = [Player::Even, Player::Odd];
    let edge_sets: [&[usize]; 3] = [&[0], &[1], &[0, 1]];
    for o in players {
        for p in 0..=4 {
            let g = ParityGame { owner: vec![o], priority: vec![p], edges: vec![vec![0]] };
            assert_eq!(zielonka(&g), brute_force_parity(&g), "{g:?}");
            games += 1;
        }
    }
    for o0 in players {
        for o1 in players {
            for p0 in 0..=4 {
                for p1 in 0..=4 {
                    for e0 in edge_sets {
                        for e1 in edge_sets {
                            let g = ParityGame {
                                owner: vec![o0, o1],
                                priority: vec![p0, p1],
                                edges: vec![e0.to_vec(), e1.to_vec()],
                            };
                            assert_eq!(zielonka(&g), brute_force_parity(&g), "{g:?}");
                            games += 1;
                        }
                    }
                }
            }
        }
    }
    let mut rng = StdRng::seed_from_u64(seed);
    for round in 0..samples {
        let n = 3 + round % 6;
        let g = random_game(&mut rng, n, 4);
        let w = zielonka(&g);
        assert_eq!(w.len(), n);
        assert_eq!(w, brute_force_parity(&g), "{g:?}");
        games += 1;
    }
    games
}

pub const BAGS: &str = "
fmod BAGS is
  sorts Elem Bag Pair .
  subsort Elem < Bag .
  ops a b c : -> Elem [ctor] .
  op none : -> Bag [ctor] .
  op __ : Bag Bag -> Bag [ctor assoc comm id: none] .
  op _+_ : Bag Bag -> Bag [ctor assoc comm] .
  op f : Bag -> Bag .
  op loop : -> Elem .
  eq loop = loop' .
  op loop' : -> Elem .
  eq loop' = loop .
endfm
";

pub fn bags() -> Module {
    Module::from_source(BAGS, None).unwrap()
}

/// Substitutions as sorted (name, term) lists, for set comparisons.
pub fn named(s: &Substitution) -> Vec<(String, Term)> {
    s.iter().map(|(v, t)| (v.name.to_string(), t.clone())).collect()
}

fn sub_multisets(items: &[&'static str]) -> BTreeSet<Vec<&'static str>> {
    let mut out = BTreeSet::new();
    for mask in 0u32..(1 << items.len()) {
        let mut v: Vec<&str> = (0..items.len()).filter(|i| mask & (1 << i) != 0).map(|i| items[i]).collect();
        v.sort();
        out.insert(v);
    }
    out
}

/// Brute force: try every assignment of sub-multisets to the variables.
fn brute_force_match(
    m: &Module,
    op: &str,
    pattern: &[&str],
    subject: &[&'static str],
) -> BTreeSet<Vec<(String, Term)>> {
    let join = |parts: &[&str]| -> String {
        if op == "__" {
            parts.join(" ")
        } else {
            parts.join(" + ")
        }
    };
    let vars: Vec<&str> = pattern.iter().copied().filter(|p| p.contains(':')).collect();
    let subj = m.parse_term(&join(subject)).unwrap();
    let pat = m.parse_term(&join(pattern)).unwrap();
    let mut values: Vec<Vec<Term>> = Vec::new();
    for v in &vars {
        let elem = v.ends_with("Elem");
        let mut cands = Vec::new();
        for set in sub_multisets(subject) {
            if set.is_empty() {
                if op == "__" && !elem {
                    cands.push(m.parse_term("none").unwrap());
                }
                continue;
            }
            if elem && set.len() > 1 {
                continue;
            }
            cands.push(m.parse_term(&join(&set)).unwrap());
        }
        values.push(cands);
    }
    let mut out = BTreeSet::new();
    let mut idx = vec![0usize; vars.len()];
    loop {
        if values.iter().all(|v| !v.is_empty()) {
            let s: Substitution = pat
                .vars()
                .into_iter()
                .map(|var| {
                    let k = vars.iter().position(|v| v.split(':').next() == Some(&*var.name)).unwrap();
                    (var, values[k][idx[k]].clone())
                })
                .collect();
            if s.apply(&m.sig, &pat) == subj {
                out.insert(named(&s));
            }
        }
        let mut k = 0;
        loop {
            if k == vars.len() {
                return out;
            }
            idx[k] += 1;
            if idx[k] < values[k].len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

/// Random patterns against subjects of one to six AC children, with and
/// without an identity. Returns the number of instances.
pub fn ac_vs_brute_force(rounds: usize, seed: u64) -> usize {
    let m = bags();
    let mut rng = StdRng::seed_from_u64(seed);
    let consts = ["a", "b", "c"];
    let var_pool = ["X:Bag", "Y:Bag", "Z:Bag", "E:Elem"];
    for round in 0..rounds {
        let op = if round % 2 == 0 { "__" } else { "_+_" };
        let n = 1 + (round / 2) % 6;
        let subject: Vec<&'static str> = (0..n).map(|_| consts[rng.gen_range(0..3)]).collect();
        let mut pattern: Vec<&str> = Vec::new();
        let nv = rng.gen_range(1..=if n <= 4 { 3 } else { 2 });
        let mut pool: Vec<&str> = var_pool.to_vec();
        for _ in 0..nv {
            let i = rng.gen_range(0..pool.len());
            pattern.push(pool.remove(i));
        }
        for _ in 0..rng.gen_range(0..=2) {
            pattern.push(consts[rng.gen_range(0..3)]);
        }
        if pattern.len() < 2 {
            pattern.push(consts[rng.gen_range(0..3)]);
        }
        let join = |parts: &[&str]| if op == "__" { parts.join(" ") } else { parts.join(" + ") };
        let pat = m.parse_term(&join(&pattern)).unwrap();
        let subj = m.parse_term(&join(&subject)).unwrap();
        let got: BTreeSet<Vec<(String, Term)>> = match_all(&m.sig, &pat, &subj).iter().map(named).collect();
        let want = brute_force_match(&m, op, &pattern, &subject);
        assert_eq!(got, want, "pattern {pattern:?} subject {subject:?} op {op}");
        for s in match_all(&m.sig, &pat, &subj) {
            assert_eq!(s.apply(&m.sig, &pat), subj);
        }
    }
    rounds
}
