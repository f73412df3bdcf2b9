mod common;

use std::collections::BTreeSet;

use common::suites::{self, bags, named};
use common::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use stratmc::syntax::{lexer::tokenize, parse_condition};
use stratmc::term::{eval_condition, eval_prop, match_all, normalize, rule_applications, RuleFilter, Substitution};
use stratmc::{Error, Module, Term};

fn river_rules() -> Module {
    Module::from_source(RIVER, Some("RIVER")).unwrap()
}

#[test]
fn variable_matches_anything_of_its_sort() {
    let m = river();
    let p = m.parse_term("X:Group").unwrap();
    let t = ground(&m, "left wolf");
    let r = match_all(&m.sig, &p, &t);
    assert_eq!(r.len(), 1);
    assert_eq!(named(&r[0]), vec![("X".into(), t)]);
}

#[test]
fn ac_match_across_commutative_bar() {
    let m = river_rules();
    let p = m.parse_term("shepherd L | R").unwrap();
    let t = ground(&m, "left shepherd wolf goat cabbage | right");
    let r = match_all(&m.sig, &p, &t);
    assert_eq!(r.len(), 1);
    let want = vec![("L".to_string(), ground(&m, "left wolf goat cabbage")), ("R".to_string(), ground(&m, "right"))];
    assert_eq!(named(&r[0]), want);
}

#[test]
fn identity_match_binds_empty() {
    let m = vending();
    let p = m.parse_term("O e [I]").unwrap();
    let t = ground(&m, "e e [empty]");
    let r = match_all(&m.sig, &p, &t);
    assert_eq!(r.len(), 1);
    assert_eq!(named(&r[0]), vec![("I".into(), ground(&m, "empty")), ("O".into(), ground(&m, "e"))]);
}

#[test]
fn no_match_gives_empty_sequence() {
    let m = river_rules();
    let p = m.parse_term("shepherd wolf L | R").unwrap();
    let t = ground(&m, "left wolf | right shepherd");
    assert!(match_all(&m.sig, &p, &t).is_empty());
}

#[test]
fn empty_substitution_is_identity() {
    let m = river_rules();
    let t = m.parse_term("L | R shepherd").unwrap();
    assert_eq!(Substitution::new().apply(&m.sig, &t), t);
}

#[test]
fn substitution_recanonicalizes() {
    let m = river_rules();
    let t = m.parse_term("L | R shepherd").unwrap();
    let sub: Substitution = t
        .vars()
        .into_iter()
        .map(|v| {
            let value = if &*v.name == "L" { "wolf" } else { "right" };
            (v, ground(&m, value))
        })
        .collect();
    assert_eq!(sub.apply(&m.sig, &t), ground(&m, "wolf | right shepherd"));
    assert_eq!(sub.apply(&m.sig, &t), ground(&m, "shepherd right | wolf"));
}

#[test]
fn composition_agrees_with_sequential_application() {
    let m = bags();
    let sig = &m.sig;
    let x = m.parse_term("X:Bag").unwrap();
    let y = m.parse_term("Y:Bag").unwrap();
    let (vx, vy) = (x.vars()[0].clone(), y.vars()[0].clone());
    let mut rng = StdRng::seed_from_u64(7);
    let pieces = ["a", "b", "c", "none", "X:Bag", "Y:Bag"];
    let random = |rng: &mut StdRng| -> Term {
        let n = rng.gen_range(1..4);
        let parts: Vec<&str> = (0..n).map(|_| pieces[rng.gen_range(0..pieces.len())]).collect();
        m.parse_term(&parts.join(" ")).unwrap()
    };
    for _ in 0..100 {
        let t = random(&mut rng);
        let s1: Substitution = vec![(vx.clone(), random(&mut rng))].into_iter().collect();
        let s2: Substitution =
            vec![(vy.clone(), random(&mut rng)), (vx.clone(), random(&mut rng))].into_iter().collect();
        let seq = s2.apply(sig, &s1.apply(sig, &t));
        assert_eq!(seq, s2.compose(sig, &s1).apply(sig, &t));
        assert_eq!(sig.canonical(&seq), seq);
    }
}

#[test]
fn normalize_leaves_irreducible_terms() {
    let m = river();
    let t = ground(&m, "left wolf | right shepherd goat cabbage");
    assert_eq!(normalize(&m.sig, &t).unwrap(), t);
}

#[test]
fn normalize_uses_owise_for_risky() {
    let m = river();
    let t = m.parse_term("risky(left shepherd wolf goat cabbage | right)").unwrap();
    assert_eq!(normalize(&m.sig, &t).unwrap(), m.sig.false_term());
    let t = m.parse_term("risky(left wolf goat | right shepherd cabbage)").unwrap();
    assert_eq!(normalize(&m.sig, &t).unwrap(), m.sig.true_term());
}

#[test]
fn normalize_initial() {
    let m = river();
    let t = m.parse_term("initial").unwrap();
    assert_eq!(normalize(&m.sig, &t).unwrap(), m.parse_term("left shepherd wolf goat cabbage | right").unwrap());
}

#[test]
fn normalize_detects_nontermination() {
    let mut m = bags();
    std::sync::Arc::make_mut(&mut m.sig).normalize_budget = 1000;
    let t = m.parse_term("loop").unwrap();
    assert_eq!(normalize(&m.sig, &t), Err(Error::NonTermination(1000)));
}

#[test]
fn normalize_is_deterministic() {
    let m = river();
    let t = m.parse_term("risky(initial)").unwrap();
    let a = normalize(&m.sig, &t).unwrap();
    for _ in 0..5 {
        assert_eq!(normalize(&m.sig, &t).unwrap(), a);
    }
}

fn condition(m: &Module, text: &str) -> stratmc::term::Condition {
    parse_condition(&m.sig, &m.vars, &tokenize(text)).unwrap()
}

#[test]
fn empty_condition_yields_once() {
    let m = river();
    let s = Substitution::new();
    assert_eq!(eval_condition(&m.sig, &stratmc::term::Condition::empty(), &s).unwrap(), vec![s]);
}

#[test]
fn boolean_condition_fails_on_false() {
    let m = river();
    let c = condition(&m, "risky(R:River)");
    let r = m.parse_term("R:River").unwrap();
    let s: Substitution = vec![(r.vars()[0].clone(), ground(&m, "initial"))].into_iter().collect();
    assert!(eval_condition(&m.sig, &c, &s).unwrap().is_empty());
}

#[test]
fn match_condition_binds() {
    let m = river();
    let c = condition(&m, "G:Group goat := left wolf goat");
    let out = eval_condition(&m.sig, &c, &Substitution::new()).unwrap();
    assert_eq!(out.len(), 1);
    assert_eq!(named(&out[0]), vec![("G".into(), ground(&m, "left wolf"))]);
}

#[test]
fn goat_rule_on_initial() {
    let m = river();
    let t = ground(&m, "initial");
    let r = rule_applications(&m.sig, &t, RuleFilter::Label("goat"), &Substitution::new(), false).unwrap();
    assert_eq!(r.len(), 1);
    assert_eq!(&*r[0].0, "goat");
    assert_eq!(r[0].1, ground(&m, "left wolf cabbage | right shepherd goat"));
}

#[test]
fn four_moves_from_initial() {
    let m = river();
    let t = ground(&m, "initial");
    let r = rule_applications(&m.sig, &t, RuleFilter::Any, &Substitution::new(), false).unwrap();
    let labels: BTreeSet<&str> = r.iter().map(|(l, _)| &**l).collect();
    assert_eq!(r.len(), 4);
    assert_eq!(labels, BTreeSet::from(["alone", "wolf", "goat", "cabbage"]));
    for (_, u) in &r {
        assert_eq!(&normalize(&m.sig, u).unwrap(), u);
    }
}

#[test]
fn no_rules_no_applications() {
    let m = bags();
    let t = ground(&m, "a");
    assert!(rule_applications(&m.sig, &t, RuleFilter::Any, &Substitution::new(), false).unwrap().is_empty());
}

#[test]
fn propositions() {
    let m = river();
    let goal = m.parse_term("goal").unwrap();
    let death = m.parse_term("death").unwrap();
    assert!(eval_prop(&m.sig, &ground(&m, "left | right shepherd wolf goat cabbage"), &goal).unwrap());
    assert!(!eval_prop(&m.sig, &ground(&m, "initial"), &death).unwrap());
    assert!(!eval_prop(&m.sig, &ground(&m, "initial"), &goal).unwrap());
}

#[test]
fn canonicalization_is_idempotent() {
    let m = bags();
    let mut rng = StdRng::seed_from_u64(3);
    let pieces = ["a", "b", "c", "none", "f(a b)", "f(none)", "(a + b)", "(c + c + a)"];
    for _ in 0..200 {
        let n = rng.gen_range(1..6);
        let parts: Vec<&str> = (0..n).map(|_| pieces[rng.gen_range(0..pieces.len())]).collect();
        let t = m.parse_term(&parts.join(" ")).unwrap();
        let c = m.sig.canonical(&t);
        assert_eq!(m.sig.canonical(&c), c);
    }
}

#[test]
fn ac_matching_agrees_with_brute_force() {
    assert_eq!(suites::ac_vs_brute_force(300, 42), 300);
}
