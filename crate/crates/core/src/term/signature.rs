use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use indexmap::IndexSet;

use super::{Condition, OpId, SortId, Term};
use crate::error::{Error, Pos, Result};

/// Default bound on equational reduction steps per normalization.
pub const DEFAULT_NORMALIZE_BUDGET: usize = 100_000;

/// Default precedence of mixfix operators, as in Maude.
const MIXFIX_PREC: u32 = 41;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MixfixPiece {
    Hole,
    Token(String),
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct OpAttrs {
    pub assoc: bool,
    pub comm: bool,
    pub ctor: bool,
    pub identity: Option<Term>,
    pub prec: u32,
}

#[derive(Debug, Clone)]
pub struct OpDecl {
    pub name: Arc<str>,
    pub args: Vec<SortId>,
    pub result: SortId,
    pub attrs: OpAttrs,
    /// Concrete syntax: the name split at underscores, or `f ( _ , _ )` for
    /// prefix operators.
    pub pieces: Vec<MixfixPiece>,
}

impl OpDecl {
    pub fn arity(&self) -> usize {
        self.args.len()
    }

    pub fn is_mixfix(&self) -> bool {
        self.name.contains('_')
    }
}

#[derive(Debug, Clone)]
pub struct Rule {
    pub label: Arc<str>,
    pub lhs: Term,
    pub rhs: Term,
    pub cond: Condition,
}

#[derive(Debug, Clone)]
pub struct Equation {
    pub lhs: Term,
    pub rhs: Term,
    pub cond: Condition,
    pub owise: bool,
}

/// Builtin symbols always present in every signature.
#[derive(Debug, Clone, Copy)]
pub struct Builtins {
    pub bool_sort: SortId,
    pub prop_sort: SortId,
    pub state_sort: SortId,
    pub true_op: OpId,
    pub false_op: OpId,
    pub sat_op: OpId,
}

#[derive(Debug, Clone)]
struct PendingOp {
    name: Arc<str>,
    args: Vec<Arc<str>>,
    result: Arc<str>,
    attrs: OpAttrs,
    pos: Pos,
}

/// Collects sorts, subsorts and operator declarations; equations and rules
/// are added to the finished [`Signature`].
#[derive(Debug, Clone)]
pub struct SignatureBuilder {
    sorts: IndexSet<Arc<str>>,
    subsorts: Vec<(Arc<str>, Arc<str>, Pos)>,
    ops: Vec<PendingOp>,
}

impl Default for SignatureBuilder {
    fn default() -> Self {
        Self::new()
    }
}

impl SignatureBuilder {
    /// A builder already containing the prelude: sorts `Bool`, `Prop` and
    /// `State`, constants `true` and `false`, and `_|=_ : State Prop -> Bool`.
    pub fn new() -> Self {
        let mut b = SignatureBuilder { sorts: IndexSet::new(), subsorts: Vec::new(), ops: Vec::new() };
        for s in ["Bool", "Prop", "State"] {
            b.add_sort(s);
        }
        let ctor = OpAttrs { ctor: true, ..OpAttrs::default() };
        b.add_op("true", &[], "Bool", ctor.clone(), Pos::default());
        b.add_op("false", &[], "Bool", ctor, Pos::default());
        b.add_op("_|=_", &["State", "Prop"], "Bool", OpAttrs::default(), Pos::default());
        b
    }

    pub fn add_sort(&mut self, name: &str) {
        self.sorts.insert(name.into());
    }

    pub fn has_sort(&self, name: &str) -> bool {
        self.sorts.contains(name)
    }

    pub fn add_subsort(&mut self, sub: &str, sup: &str, pos: Pos) {
        self.subsorts.push((sub.into(), sup.into(), pos));
    }

    pub fn add_op(&mut self, name: &str, args: &[&str], result: &str, attrs: OpAttrs, pos: Pos) {
        self.ops.push(PendingOp {
            name: name.into(),
            args: args.iter().map(|&a| a.into()).collect(),
            result: result.into(),
            attrs,
            pos,
        });
    }

    pub fn build(self) -> Result<Signature> {
        let sorts: Vec<Arc<str>> = self.sorts.into_iter().collect();
        let sort_index: HashMap<Arc<str>, SortId> =
            sorts.iter().enumerate().map(|(i, s)| (s.clone(), SortId(i as u32))).collect();
        let lookup = |name: &Arc<str>, pos: Pos| -> Result<SortId> {
            sort_index
                .get(name)
                .copied()
                .ok_or_else(|| Error::SortCheck { pos, message: format!("unknown sort {name}") })
        };

        let n = sorts.len();
        let mut leq = vec![vec![false; n]; n];
        for (i, row) in leq.iter_mut().enumerate() {
            row[i] = true;
        }
        for (sub, sup, pos) in &self.subsorts {
            let a = lookup(sub, *pos)?.0 as usize;
            let b = lookup(sup, *pos)?.0 as usize;
            if a == b {
                return Err(Error::SortCheck { pos: *pos, message: format!("cyclic subsort {sub} < {sup}") });
            }
            leq[a][b] = true;
        }
        for k in 0..n {
            let via = leq[k].clone();
            for row in leq.iter_mut().filter(|row| row[k]) {
                row.iter_mut().zip(&via).for_each(|(r, &v)| *r |= v);
            }
        }
        for (i, row) in leq.iter().enumerate() {
            for (j, &le) in row.iter().enumerate() {
                if i != j && le && leq[j][i] {
                    return Err(Error::SortCheck {
                        pos: Pos::default(),
                        message: format!("cyclic subsort relation between {} and {}", sorts[i], sorts[j]),
                    });
                }
            }
        }

        // Deduplicate identical redeclarations, reject conflicting ones.
        let mut pending: Vec<PendingOp> = Vec::new();
        for op in self.ops {
            if let Some(prev) = pending.iter().find(|p| p.name == op.name && p.args.len() == op.args.len()) {
                if prev.args == op.args && prev.result == op.result {
                    continue;
                }
                return Err(Error::DuplicateDeclaration { name: format!("operator {}", op.name), pos: op.pos });
            }
            pending.push(op);
        }

        let mut ops = Vec::with_capacity(pending.len());
        let mut op_index = HashMap::new();
        for (i, p) in pending.into_iter().enumerate() {
            let args = p.args.iter().map(|a| lookup(a, p.pos)).collect::<Result<Vec<_>>>()?;
            let result = lookup(&p.result, p.pos)?;
            let underscores = p.name.matches('_').count();
            if p.name.contains('_') && underscores != args.len() {
                return Err(Error::SortCheck {
                    pos: p.pos,
                    message: format!(
                        "operator {} has {} arguments but {} underscores",
                        p.name,
                        args.len(),
                        underscores
                    ),
                });
            }
            if p.attrs.assoc && args.len() != 2 {
                return Err(Error::SortCheck {
                    pos: p.pos,
                    message: format!("associative operator {} must be binary", p.name),
                });
            }
            if p.attrs.comm && args.len() != 2 {
                return Err(Error::SortCheck {
                    pos: p.pos,
                    message: format!("commutative operator {} must be binary", p.name),
                });
            }
            if p.attrs.assoc
                && !(leq[result.0 as usize][args[0].0 as usize] && leq[result.0 as usize][args[1].0 as usize])
            {
                return Err(Error::SortCheck {
                    pos: p.pos,
                    message: format!(
                        "associative operator {} must have a result sort below its argument sorts",
                        p.name
                    ),
                });
            }
            let mut attrs = p.attrs.clone();
            if attrs.prec == 0 && p.name.contains('_') {
                attrs.prec = MIXFIX_PREC;
            }
            let pieces = mixfix_pieces(&p.name, args.len());
            op_index.insert((p.name.clone(), args.len()), OpId(i as u32));
            ops.push(OpDecl { name: p.name, args, result, attrs, pieces });
        }

        let sort = |s: &str| sort_index[s];
        let op = |s: &str, n: usize| op_index[&(Arc::from(s), n)];
        let builtins = Builtins {
            bool_sort: sort("Bool"),
            prop_sort: sort("Prop"),
            state_sort: sort("State"),
            true_op: op("true", 0),
            false_op: op("false", 0),
            sat_op: op("_|=_", 2),
        };

        Ok(Signature {
            sorts,
            sort_index,
            leq,
            ops,
            op_index,
            rules: Vec::new(),
            equations: Vec::new(),
            builtins,
            normalize_budget: DEFAULT_NORMALIZE_BUDGET,
        })
    }
}

fn mixfix_pieces(name: &str, arity: usize) -> Vec<MixfixPiece> {
    if name.contains('_') {
        let mut pieces = Vec::new();
        for (i, part) in name.split('_').enumerate() {
            if i > 0 {
                pieces.push(MixfixPiece::Hole);
            }
            pieces.extend(crate::syntax::lexer::split_name(part).into_iter().map(MixfixPiece::Token));
        }
        pieces
    } else if arity == 0 {
        vec![MixfixPiece::Token(name.to_string())]
    } else {
        let mut pieces = vec![MixfixPiece::Token(name.to_string()), MixfixPiece::Token("(".into())];
        for i in 0..arity {
            if i > 0 {
                pieces.push(MixfixPiece::Token(",".into()));
            }
            pieces.push(MixfixPiece::Hole);
        }
        pieces.push(MixfixPiece::Token(")".into()));
        pieces
    }
}

/// An order-sorted signature together with its equations and rules.
#[derive(Debug, Clone)]
pub struct Signature {
    sorts: Vec<Arc<str>>,
    sort_index: HashMap<Arc<str>, SortId>,
    leq: Vec<Vec<bool>>,
    ops: Vec<OpDecl>,
    op_index: HashMap<(Arc<str>, usize), OpId>,
    pub(crate) rules: Vec<Rule>,
    pub(crate) equations: Vec<Equation>,
    builtins: Builtins,
    pub normalize_budget: usize,
}

impl Signature {
    pub fn builtins(&self) -> &Builtins {
        &self.builtins
    }

    pub fn sort(&self, name: &str) -> Option<SortId> {
        self.sort_index.get(name).copied()
    }

    pub fn sort_name(&self, s: SortId) -> &str {
        if s == SortId::ANY {
            "%Any"
        } else {
            &self.sorts[s.0 as usize]
        }
    }

    pub fn sorts(&self) -> impl Iterator<Item = SortId> + '_ {
        (0..self.sorts.len()).map(|i| SortId(i as u32))
    }

    /// Subsort test, reflexive and transitive.
    pub fn leq(&self, a: SortId, b: SortId) -> bool {
        if b == SortId::ANY {
            return true;
        }
        if a == SortId::ANY {
            return false;
        }
        self.leq[a.0 as usize][b.0 as usize]
    }

    pub fn op(&self, id: OpId) -> &OpDecl {
        &self.ops[id.0 as usize]
    }

    pub fn ops(&self) -> impl Iterator<Item = (OpId, &OpDecl)> {
        self.ops.iter().enumerate().map(|(i, d)| (OpId(i as u32), d))
    }

    pub fn lookup_op(&self, name: &str, arity: usize) -> Option<OpId> {
        self.op_index.get(&(Arc::from(name), arity)).copied()
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn equations(&self) -> &[Equation] {
        &self.equations
    }

    pub fn has_rule_label(&self, label: &str) -> bool {
        self.rules.iter().any(|r| &*r.label == label)
    }

    /// Rule labels in declaration order, without repetitions.
    pub fn rule_labels(&self) -> Vec<Arc<str>> {
        let mut out: Vec<Arc<str>> = Vec::new();
        for r in &self.rules {
            if !out.contains(&r.label) {
                out.push(r.label.clone());
            }
        }
        out
    }

    pub fn true_term(&self) -> Term {
        Term::constant(self.builtins.true_op)
    }

    pub fn false_term(&self) -> Term {
        Term::constant(self.builtins.false_op)
    }

    pub(crate) fn set_identity(&mut self, op: OpId, id: Term) {
        self.ops[op.0 as usize].attrs.identity = Some(id);
    }

    pub(crate) fn add_rule(&mut self, rule: Rule) {
        self.rules.push(rule);
    }

    pub(crate) fn add_equation(&mut self, eq: Equation) {
        self.equations.push(eq);
    }

    /// Least sort of a term (operators are not overloaded on sorts).
    pub fn sort_of(&self, t: &Term) -> SortId {
        match t {
            Term::Var(v) => v.sort,
            Term::App(op, _) => self.op(*op).result,
        }
    }

    /// Checks that every argument sort is below the declared one.
    pub fn check_sorts(&self, t: &Term) -> std::result::Result<(), String> {
        if let Term::App(op, args) = t {
            let decl = self.op(*op);
            if !decl.attrs.assoc && args.len() != decl.arity() {
                return Err(format!("{} expects {} arguments", decl.name, decl.arity()));
            }
            for (i, a) in args.iter().enumerate() {
                self.check_sorts(a)?;
                // flattened associative arguments all share the first argument sort
                let expected = if decl.attrs.assoc { decl.args[0] } else { decl.args[i] };
                let got = self.sort_of(a);
                if !self.leq(got, expected) {
                    return Err(format!(
                        "argument {} of {} has sort {} but {} was expected",
                        self.display(a),
                        decl.name,
                        self.sort_name(got),
                        self.sort_name(expected)
                    ));
                }
            }
        }
        Ok(())
    }

    /// Builds `op(args)` in canonical form: flattening associative symbols,
    /// absorbing identities and sorting commutative arguments.
    pub fn make(&self, op: OpId, args: Vec<Term>) -> Term {
        let decl = self.op(op);
        let attrs = &decl.attrs;
        if attrs.assoc {
            let mut flat = Vec::with_capacity(args.len());
            for a in args {
                match a {
                    Term::App(g, inner) if g == op => flat.extend(inner),
                    other => flat.push(other),
                }
            }
            if let Some(id) = &attrs.identity {
                flat.retain(|a| a != id);
                if flat.is_empty() {
                    return id.clone();
                }
            }
            if flat.len() == 1 {
                return flat.pop().unwrap();
            }
            if attrs.comm {
                flat.sort();
            }
            Term::App(op, flat)
        } else if attrs.comm {
            let mut args = args;
            if let Some(id) = &attrs.identity {
                if args.len() == 2 {
                    if &args[0] == id {
                        return args.pop().unwrap();
                    }
                    if &args[1] == id {
                        return args.swap_remove(0);
                    }
                }
            }
            args.sort();
            Term::App(op, args)
        } else {
            Term::App(op, args)
        }
    }

    /// Re-canonicalizes a term bottom-up.
    pub fn canonical(&self, t: &Term) -> Term {
        match t {
            Term::Var(_) => t.clone(),
            Term::App(op, args) => self.make(*op, args.iter().map(|a| self.canonical(a)).collect()),
        }
    }

    /// The arguments of `t` viewed as a flattened `op`-list: its arguments if
    /// `t` is headed by `op`, nothing if `t` is the identity, and `[t]`
    /// otherwise.
    pub(crate) fn assoc_view(&self, op: OpId, t: &Term) -> Vec<Term> {
        match t {
            Term::App(g, args) if *g == op => args.clone(),
            _ => {
                if self.op(op).attrs.identity.as_ref() == Some(t) {
                    Vec::new()
                } else {
                    vec![t.clone()]
                }
            }
        }
    }

    pub fn display<'a>(&'a self, term: &'a Term) -> TermDisplay<'a> {
        TermDisplay { sig: self, term, show_sorts: true }
    }
}

/// Mixfix pretty-printer for terms.
pub struct TermDisplay<'a> {
    sig: &'a Signature,
    term: &'a Term,
    show_sorts: bool,
}

impl TermDisplay<'_> {
    /// Prints variables by name only.
    pub fn without_sorts(mut self) -> Self {
        self.show_sorts = false;
        self
    }
}

struct Emitter {
    out: String,
}

impl Emitter {
    fn push(&mut self, tok: &str, glue: bool) {
        let glue_left = matches!(tok, ")" | "]" | "," | "}");
        let after_open = self.out.ends_with('(') || self.out.ends_with('[') || self.out.ends_with('{');
        if !self.out.is_empty() && !glue && !glue_left && !after_open {
            self.out.push(' ');
        }
        self.out.push_str(tok);
    }
}

impl TermDisplay<'_> {
    fn emit(&self, e: &mut Emitter, t: &Term, parent_prec: Option<u32>) {
        match t {
            Term::Var(v) => {
                if self.show_sorts && !v.is_extension() {
                    e.push(&format!("{}:{}", v.name, self.sig.sort_name(v.sort)), false);
                } else {
                    e.push(&v.name, false);
                }
            }
            Term::App(op, args) => {
                let decl = self.sig.op(*op);
                let parens = decl.is_mixfix() && !args.is_empty() && parent_prec.is_some_and(|p| decl.attrs.prec > p);
                if parens {
                    e.push("(", false);
                }
                if !decl.is_mixfix() {
                    e.push(&decl.name, false);
                    if !args.is_empty() {
                        e.push("(", true);
                        for (i, a) in args.iter().enumerate() {
                            if i > 0 {
                                e.push(",", false);
                            }
                            self.emit(e, a, None);
                        }
                        e.push(")", false);
                    }
                } else if args.len() > decl.arity() {
                    // flattened associative operator: repeat the infix part
                    let pieces = &decl.pieces;
                    let first_hole = pieces.iter().position(|p| *p == MixfixPiece::Hole).unwrap();
                    let last_hole = pieces.iter().rposition(|p| *p == MixfixPiece::Hole).unwrap();
                    for p in &pieces[..first_hole] {
                        if let MixfixPiece::Token(tok) = p {
                            e.push(tok, false);
                        }
                    }
                    for (i, a) in args.iter().enumerate() {
                        if i > 0 {
                            for p in &pieces[first_hole + 1..last_hole] {
                                if let MixfixPiece::Token(tok) = p {
                                    e.push(tok, false);
                                }
                            }
                        }
                        self.emit(e, a, Some(decl.attrs.prec));
                    }
                    for p in &pieces[last_hole + 1..] {
                        if let MixfixPiece::Token(tok) = p {
                            e.push(tok, false);
                        }
                    }
                } else {
                    let pieces = &decl.pieces;
                    let mut k = 0;
                    for (i, p) in pieces.iter().enumerate() {
                        match p {
                            MixfixPiece::Token(tok) => e.push(tok, false),
                            MixfixPiece::Hole => {
                                let enclosed = i > 0
                                    && i + 1 < pieces.len()
                                    && matches!(pieces[i - 1], MixfixPiece::Token(_))
                                    && matches!(pieces[i + 1], MixfixPiece::Token(_));
                                let prec = if enclosed { None } else { Some(decl.attrs.prec) };
                                self.emit(e, &args[k], prec);
                                k += 1;
                            }
                        }
                    }
                }
                if parens {
                    e.push(")", false);
                }
            }
        }
    }
}

impl fmt::Display for TermDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut e = Emitter { out: String::new() };
        self.emit(&mut e, self.term, None);
        f.write_str(&e.out)
    }
}
