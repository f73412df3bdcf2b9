mod common;

use std::sync::Arc;

use common::*;
use stratmc::syntax::{lexer::tokenize, parse_spec, resolve_module, Item};
use stratmc::{ActionSpec, Error, Formula, LogicClass, Module, Strategy};

fn texts(s: &str) -> Vec<String> {
    tokenize(s).into_iter().map(|t| t.text).collect()
}

#[test]
fn river_module_has_six_rules() {
    let spec = parse_spec(RIVER).unwrap();
    let m = spec.module("RIVER").unwrap();
    let labels: Vec<&str> = m
        .items
        .iter()
        .filter_map(|i| match i {
            Item::Rule { label, .. } => Some(label.as_str()),
            _ => None,
        })
        .collect();
    assert_eq!(labels, ["alone", "wolf", "goat", "cabbage", "wolf-eats", "goat-eats"]);
}

#[test]
fn empty_input() {
    assert!(parse_spec("").unwrap().modules.is_empty());
    assert!(parse_spec("*** only a comment\n").unwrap().modules.is_empty());
}

#[test]
fn safe_definition_is_a_conditional() {
    let m = river();
    let decl = m.strategies.get("safe").unwrap();
    assert_eq!(decl.defs.len(), 1);
    match &*decl.defs[0].body {
        Strategy::Cond(c, yes, no) => {
            assert!(matches!(**c, Strategy::Match { anywhere: false, .. }));
            assert_eq!(**yes, Strategy::Idle);
            assert!(matches!(**no, Strategy::Concat(..)));
        }
        other => panic!("unexpected body {other:?}"),
    }
}

#[test]
fn syntax_errors_carry_positions() {
    let err = parse_spec("mod M is\n  sort S\nendm").unwrap_err();
    assert!(matches!(err, Error::Syntax { .. }), "{err:?}");
    let err = parse_spec("mod M is\n  sort S .\n  op a : -> S .\n").unwrap_err();
    match err {
        Error::Syntax { pos, .. } => assert!(pos.line >= 1),
        other => panic!("{other:?}"),
    }
}

#[test]
fn duplicate_strategy_is_rejected() {
    let text = "smod M is\n sort S .\n op a : -> S .\n strat s @ S .\n strat s @ S .\n sd s := idle .\nendsm";
    assert!(matches!(Module::from_source(text, None), Err(Error::DuplicateDeclaration { .. })));
}

#[test]
fn resolve_flattens_imports() {
    let m = river();
    assert_eq!(m.name, "RIVER-CHECK");
    assert_eq!(m.sig.rules().len(), 6);
    assert!(m.strategies.contains("safe") && m.strategies.contains("eagerEating"));
    let goal = m.parse_term("goal").unwrap();
    assert!(stratmc::term::eval_prop(&m.sig, &ground(&m, "left | right shepherd wolf goat cabbage"), &goal).unwrap());
}

#[test]
fn module_without_imports_gets_the_prelude() {
    let m = Module::from_source("fmod M is\n sort S .\n op a : -> S .\nendfm", None).unwrap();
    assert!(m.sig.sort("S").is_some());
    assert!(m.sig.sort("Bool").is_some() && m.sig.sort("Prop").is_some() && m.sig.sort("State").is_some());
}

#[test]
fn unknown_import() {
    let r = Module::from_source("mod M is\n protecting NOPE .\nendm", None);
    assert!(matches!(r, Err(Error::UnknownModule(n)) if n == "NOPE"));
    let spec = parse_spec(RIVER).unwrap();
    assert!(matches!(resolve_module(&spec, Some("MISSING")), Err(Error::UnknownModule(_))));
}

#[test]
fn ill_sorted_statement() {
    let text = "mod M is\n sorts S T .\n op a : -> S .\n op b : -> T .\n rl [r] : a => b .\nendm";
    assert!(matches!(Module::from_source(text, None), Err(Error::SortCheck { .. })));
}

#[test]
fn identity_requires_assoc_or_comm() {
    let text = "fmod M is\n sort S .\n op e : -> S .\n op f : S S -> S [id: e] .\nendfm";
    assert!(matches!(Module::from_source(text, None), Err(Error::SortCheck { .. })));
}

#[test]
fn parse_terms() {
    let r = river();
    let t = r.parse_term("left shepherd wolf goat cabbage | right").unwrap();
    assert_eq!(r.sig.sort_name(r.sig.sort_of(&t)), "River");
    let v = vending();
    let t = v.parse_term("e e [empty]").unwrap();
    assert_eq!(v.sig.sort_name(v.sig.sort_of(&t)), "Machine");
    let g = r.parse_term("goal").unwrap();
    assert_eq!(r.sig.sort_name(r.sig.sort_of(&g)), "Prop");
}

#[test]
fn term_syntax_errors() {
    let r = river();
    assert!(matches!(r.parse_term("left | | right"), Err(Error::Syntax { .. })));
    assert!(matches!(r.parse_term("nonsense"), Err(Error::Syntax { .. })));
}

#[test]
fn parse_strategies() {
    let v = vending();
    let s = v.parse_strategy(BETA).unwrap();
    let r = Strategy::rule;
    let want = Strategy::concat(r("put1"), Strategy::union(r("apple"), Strategy::concat(r("put1"), r("cake"))));
    assert_eq!(s, want);
    assert_eq!(v.parse_strategy("idle").unwrap(), Strategy::Idle);
    let rv = river();
    assert_eq!(
        rv.parse_strategy("eagerEating").unwrap(),
        Strategy::Call { name: Arc::from("eagerEating"), args: vec![] }
    );
}

#[test]
fn strategy_precedence_and_derived_forms() {
    let v = vending();
    let r = Strategy::rule;
    assert_eq!(
        v.parse_strategy(ALPHA).unwrap(),
        Strategy::union(
            Strategy::concat(r("put1"), r("apple")),
            Strategy::concat(r("put1"), Strategy::concat(r("put1"), r("cake")))
        )
    );
    assert_eq!(v.parse_strategy("not(put1)").unwrap(), Strategy::cond(r("put1"), Strategy::Fail, Strategy::Idle));
    assert_eq!(v.parse_strategy("try(put1)").unwrap(), Strategy::cond(r("put1"), Strategy::Idle, Strategy::Idle));
    assert_eq!(v.parse_strategy("put1 +").unwrap(), Strategy::concat(r("put1"), Strategy::iter(r("put1"))));
    assert_eq!(
        v.parse_strategy("put1 !").unwrap(),
        Strategy::concat(Strategy::iter(r("put1")), Strategy::not(r("put1")))
    );
    assert_eq!(v.parse_strategy("put1 or-else apple").unwrap(), Strategy::cond(r("put1"), Strategy::Idle, r("apple")));
    assert!(v.parse_strategy("put1 ? apple : cake").is_ok());
    assert!(v.parse_strategy("top(put1)").is_ok());
    assert!(v.parse_strategy("put1[I <- e]").is_ok());
    assert!(v.parse_strategy("matchrew M:Machine s.t. O:Soup [I:Soup] := M:Machine by M:Machine using put1").is_ok());
    assert!(v.parse_strategy("match O:Soup [empty] s.t. O:Soup = e e").is_ok());
}

#[test]
fn strategy_errors() {
    let v = vending();
    assert!(matches!(v.parse_strategy("steal"), Err(Error::UnknownRuleLabel(_))));
    assert!(matches!(v.parse_strategy("xmatch M:Machine"), Err(Error::UnsupportedFeature(_))));
    assert!(matches!(v.parse_strategy("put1 ;"), Err(Error::Syntax { .. })));
    let text = "smod M is\n sort S .\n op a : -> S .\n strat s @ S .\n sd s := t .\nendsm";
    assert!(matches!(Module::from_source(text, None), Err(Error::UnknownRuleLabel(_) | Error::UnknownStrategy(_))));
    let text = "smod M is\n sort S .\n op a : -> S .\n sd s := idle .\nendsm";
    assert!(matches!(Module::from_source(text, None), Err(Error::UnknownStrategy(_))));
}

#[test]
fn formula_classification() {
    let r = river();
    let class = |s: &str| r.parse_formula(s).unwrap().1;
    assert_eq!(class("A [] E <> goal"), LogicClass::Ctl);
    assert_eq!(class("[] (risky -> O death)"), LogicClass::Ltl);
    assert_eq!(class("[ goat ] (mu Z . goal \\/ < ~ goat > Z)"), LogicClass::MuCalc);
    assert_eq!(class("goal /\\ ~ death"), LogicClass::Prop);
    assert_eq!(class("A (<> goal \\/ [] risky)"), LogicClass::CtlStar);
    assert_eq!(class("E [] <> goal"), LogicClass::CtlStar);
    assert_eq!(class("<.> goal"), LogicClass::MuCalc);
}

#[test]
fn formula_structure() {
    let r = river();
    let (f, _) = r.parse_formula("[ goat ] (mu Z . goal \\/ < ~ goat > Z)").unwrap();
    let goal = Formula::Atom(r.parse_term("goal").unwrap());
    let goat: Vec<Arc<str>> = vec![Arc::from("goat")];
    let want = Formula::box_op(
        ActionSpec::Labels(goat.clone()),
        Formula::mu(
            "Z",
            Formula::or(goal, Formula::diamond(ActionSpec::Complement(goat), Formula::Var(Arc::from("Z")))),
        ),
    );
    assert_eq!(f, want);
    let (f, _) =
        r.parse_formula("a U b U c".replace('a', "goal").replace('b', "risky").replace('c', "death").as_str()).unwrap();
    assert!(matches!(f, Formula::Until(_, ref rhs) if matches!(**rhs, Formula::Until(..))));
    let (f, _) = r.parse_formula("goal \\/ risky /\\ death -> goal").unwrap();
    assert!(matches!(f, Formula::Implies(ref lhs, _) if matches!(**lhs, Formula::Or(..))));
}

#[test]
fn formula_errors() {
    let r = river();
    assert!(matches!(r.parse_formula("mu Z . goal \\/ < goat > Y"), Err(Error::UnboundMuVariable(_))));
    assert!(matches!(r.parse_formula("mu Z . ~ Z"), Err(Error::NonMonotoneFixpoint(_))));
    assert!(matches!(r.parse_formula("[] (goal"), Err(Error::Syntax { .. })));
    assert!(r.parse_formula("< swim > goal").is_err());
}

#[test]
fn stripping_quantifiers_of_ctl_gives_ltl() {
    let r = river();
    for text in ["A [] E <> goal", "A [] (risky \\/ death \\/ E <> goal)", "E (goal U death)", "A O E <> goal"] {
        let (f, class) = r.parse_formula(text).unwrap();
        assert_eq!(class, LogicClass::Ctl);
        assert_eq!(f.strip_quantifiers().classify(), LogicClass::Ltl, "{text}");
    }
}

#[test]
fn atoms_have_sort_prop() {
    let r = river();
    let (f, _) = r.parse_formula("A [] (risky \\/ death \\/ E <> goal)").unwrap();
    for a in f.atoms() {
        assert_eq!(r.sig.sort_name(r.sig.sort_of(&a)), "Prop");
    }
}

#[test]
fn corpus_round_trips() {
    for text in [RIVER, VENDING] {
        let spec = parse_spec(text).unwrap();
        let printed = spec.to_text();
        assert_eq!(texts(&printed), texts(text));
        assert_eq!(parse_spec(&printed).unwrap().to_text(), printed);
    }
}
