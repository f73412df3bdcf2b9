//! Import flattening: turns one module of a [`SourceSpec`] into a
//! [`Module`] with a single signature and strategy table.

use std::collections::HashSet;
use std::sync::Arc;

use super::lexer::Token;
use super::spec::{Item, ModuleDecl, SourceSpec};
use super::strategy::{parse_condition, parse_strategy_tokens};
use super::term::{parse_term_tokens, VarEnv};
use crate::error::{Error, Pos, Result};
use crate::module::Module;
use crate::strategy::{StratDecl, StratDef, StratTable};
use crate::term::{
    Condition, Equation, OpAttrs, Rule, Signature, SignatureBuilder, SortId, Term, DEFAULT_NORMALIZE_BUDGET,
};

/// Library modules whose content is covered by the builtin prelude.
const BUILTIN_MODULES: &[&str] =
    &["BOOL", "TRUTH-VALUE", "SATISFACTION", "LTL", "MODEL-CHECKER", "STRATEGY-MODEL-CHECKER", "QID"];

fn collect<'s>(
    spec: &'s SourceSpec,
    index: usize,
    seen: &mut HashSet<usize>,
    out: &mut Vec<&'s ModuleDecl>,
) -> Result<()> {
    if !seen.insert(index) {
        return Ok(());
    }
    let module = &spec.modules[index];
    for item in &module.items {
        if let Item::Import { name, .. } = item {
            if BUILTIN_MODULES.contains(&name.as_str()) {
                continue;
            }
            let dep = spec.modules[..index]
                .iter()
                .position(|m| &m.name == name)
                .ok_or_else(|| Error::UnknownModule(name.clone()))?;
            collect(spec, dep, seen, out)?;
        }
    }
    out.push(module);
    Ok(())
}

fn sort_error(pos: Pos, message: impl Into<String>) -> Error {
    Error::SortCheck { pos, message: message.into() }
}

fn module_vars(sig: &Signature, module: &ModuleDecl) -> Result<VarEnv> {
    let mut env = VarEnv::new();
    for item in &module.items {
        if let Item::Vars { names, sort, pos } = item {
            let s = sig.sort(sort).ok_or_else(|| sort_error(*pos, format!("unknown sort {sort}")))?;
            for n in names {
                if env.insert(n.clone(), s).is_some_and(|old| old != s) {
                    return Err(Error::DuplicateDeclaration { name: n.clone(), pos: *pos });
                }
            }
        }
    }
    Ok(env)
}

fn sort_named(sig: &Signature, name: &str, pos: Pos) -> Result<SortId> {
    sig.sort(name).ok_or_else(|| sort_error(pos, format!("unknown sort {name}")))
}

fn statement_sides(sig: &Signature, vars: &VarEnv, lhs: &[Token], rhs: &[Token], pos: Pos) -> Result<(Term, Term)> {
    let l = parse_term_tokens(sig, vars, lhs, None)?;
    if matches!(l, Term::Var(_)) {
        return Err(sort_error(pos, "the lefthand side cannot be a variable"));
    }
    // Prefer the reading of the righthand side within the lefthand side's sort.
    let r = match parse_term_tokens(sig, vars, rhs, Some(sig.sort_of(&l))) {
        Ok(r) => r,
        Err(Error::SortCheck { .. }) => parse_term_tokens(sig, vars, rhs, None)?,
        Err(e) => return Err(e),
    };
    let (a, b) = (sig.sort_of(&l), sig.sort_of(&r));
    if !sig.sorts().any(|c| sig.leq(a, c) && sig.leq(b, c)) {
        return Err(sort_error(
            pos,
            format!("the sides have unrelated sorts {} and {}", sig.sort_name(a), sig.sort_name(b)),
        ));
    }
    Ok((l, r))
}

fn condition(sig: &Signature, vars: &VarEnv, cond: &Option<Vec<Token>>) -> Result<Condition> {
    match cond {
        Some(c) => parse_condition(sig, vars, c),
        None => Ok(Condition::empty()),
    }
}

/// Flattens the named module (the last one when `None`) with everything it
/// imports, transitively.
pub fn resolve_module(spec: &SourceSpec, name: Option<&str>) -> Result<Module> {
    let index = match name {
        Some(n) => spec.modules.iter().position(|m| m.name == n).ok_or_else(|| Error::UnknownModule(n.to_string()))?,
        None => {
            spec.modules.len().checked_sub(1).ok_or_else(|| Error::UnknownModule("(no modules in input)".into()))?
        }
    };
    let mut order = Vec::new();
    collect(spec, index, &mut HashSet::new(), &mut order)?;

    let mut builder = SignatureBuilder::new();
    for m in &order {
        for item in &m.items {
            if let Item::Sorts { names, .. } = item {
                names.iter().for_each(|s| builder.add_sort(s));
            }
        }
    }
    let mut identities = Vec::new();
    for m in &order {
        for item in &m.items {
            match item {
                Item::Subsorts { chain, pos } => {
                    for pair in chain.windows(2) {
                        for sub in &pair[0] {
                            for sup in &pair[1] {
                                builder.add_subsort(sub, sup, *pos);
                            }
                        }
                    }
                }
                Item::Ops { names, args, result, attrs, pos } => {
                    if attrs.id.is_some() && !attrs.assoc && !attrs.comm {
                        return Err(sort_error(*pos, "an identity element requires assoc or comm"));
                    }
                    let op_attrs = OpAttrs {
                        assoc: attrs.assoc,
                        comm: attrs.comm,
                        ctor: attrs.ctor,
                        identity: None,
                        prec: attrs.prec.unwrap_or(0),
                    };
                    let args: Vec<&str> = args.iter().map(String::as_str).collect();
                    for n in names {
                        builder.add_op(n, &args, result, op_attrs.clone(), *pos);
                        if let Some(id) = &attrs.id {
                            identities.push((n.clone(), args.len(), id.clone(), *pos));
                        }
                    }
                }
                _ => {}
            }
        }
    }
    let mut sig = builder.build()?;
    sig.normalize_budget = DEFAULT_NORMALIZE_BUDGET;

    for (name, arity, tokens, pos) in identities {
        let op = sig.lookup_op(&name, arity).expect("declared operator");
        let id = parse_term_tokens(&sig, &VarEnv::new(), &tokens, None)?;
        let decl = sig.op(op);
        if !id.is_ground() || !sig.leq(sig.sort_of(&id), decl.result) {
            return Err(sort_error(pos, format!("invalid identity element for {name}")));
        }
        sig.set_identity(op, id);
    }

    let mut envs = Vec::with_capacity(order.len());
    for m in &order {
        envs.push(module_vars(&sig, m)?);
    }

    // Equations first: identities are in place, so every term parsed below
    // is already in canonical form.
    for (m, vars) in order.iter().zip(&envs) {
        for item in &m.items {
            match item {
                Item::Eq { lhs, rhs, cond, attrs, pos } => {
                    let (lhs, rhs) = statement_sides(&sig, vars, lhs, rhs, *pos)?;
                    let cond = condition(&sig, vars, cond)?;
                    sig.add_equation(Equation { lhs, rhs, cond, owise: attrs.owise });
                }
                Item::Rule { label, lhs, rhs, cond, pos } => {
                    let (lhs, rhs) = statement_sides(&sig, vars, lhs, rhs, *pos)?;
                    let cond = condition(&sig, vars, cond)?;
                    sig.add_rule(Rule { label: label.as_str().into(), lhs, rhs, cond });
                }
                _ => {}
            }
        }
    }

    let mut table = StratTable::default();
    for m in &order {
        for item in &m.items {
            if let Item::Strats { names, params, subject, pos } = item {
                let params = params.iter().map(|p| sort_named(&sig, p, *pos)).collect::<Result<Vec<_>>>()?;
                let subject = sort_named(&sig, subject, *pos)?;
                for n in names {
                    let decl = StratDecl { name: n.as_str().into(), params: params.clone(), subject, defs: Vec::new() };
                    if !table.declare(decl) {
                        return Err(Error::DuplicateDeclaration { name: n.clone(), pos: *pos });
                    }
                }
            }
        }
    }
    let mut defs = Vec::new();
    for (m, vars) in order.iter().zip(&envs) {
        for item in &m.items {
            if let Item::StratDef { name, args, body, cond, pos } = item {
                let decl = table.get(name).ok_or_else(|| Error::UnknownStrategy(name.clone()))?;
                if args.len() != decl.params.len() {
                    return Err(Error::syntax(
                        *pos,
                        format!("strategy {name} expects {} arguments", decl.params.len()),
                    ));
                }
                let params = args
                    .iter()
                    .zip(&decl.params)
                    .map(|(a, &s)| parse_term_tokens(&sig, vars, a, Some(s)))
                    .collect::<Result<Vec<_>>>()?;
                let cond = condition(&sig, vars, cond)?;
                let body = parse_strategy_tokens(&sig, vars, &table, body)?;
                defs.push((name.clone(), StratDef { params, body: Arc::new(body), cond }));
            }
        }
    }
    for (name, def) in defs {
        table.add_def(&name, def);
    }

    let top = order.last().expect("at least the requested module");
    Ok(Module { name: top.name.clone(), sig: Arc::new(sig), strategies: table, vars: envs.pop().unwrap_or_default() })
}
