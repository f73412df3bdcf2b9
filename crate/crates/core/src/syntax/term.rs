//! Mixfix term parser.
//!
//! A memoized chart parser over token spans: every operator's concrete
//! syntax is tried on every span, holes are filled with the parses of the
//! sub-spans whose sort fits, and readings are deduplicated by their
//! canonical form (so the many bracketings of an associative juxtaposition
//! collapse into one). Readings that violate operator precedences are only
//! used when no other reading exists.

use std::collections::HashMap;
use std::rc::Rc;

use super::lexer::{join, tokenize, Token};
use crate::error::{Error, Result};
use crate::term::{MixfixPiece, OpId, Signature, SortId, Term, Var};

/// Variables in scope, by name.
pub type VarEnv = HashMap<String, SortId>;

#[derive(Debug, Clone)]
struct Reading {
    term: Term,
    /// Precedence of the top operator, 0 for atoms and parenthesized terms.
    prec: u32,
    clean: bool,
}

struct Chart<'a> {
    sig: &'a Signature,
    vars: &'a VarEnv,
    tokens: &'a [Token],
    /// Parenthesis depth before each token, and after the last one.
    depth: Vec<i32>,
    memo: HashMap<(usize, usize), Rc<Vec<Reading>>>,
    /// Operators with arguments, grouped by whether their syntax starts
    /// with a token (then indexed by it) or with a hole.
    by_first: HashMap<String, Vec<OpId>>,
    hole_first: Vec<OpId>,
}

impl<'a> Chart<'a> {
    fn new(sig: &'a Signature, vars: &'a VarEnv, tokens: &'a [Token]) -> Self {
        let mut depth = vec![0];
        let mut d = 0;
        for t in tokens {
            match t.text.as_str() {
                "(" | "[" | "{" => d += 1,
                ")" | "]" | "}" => d -= 1,
                _ => {}
            }
            depth.push(d);
        }
        let mut by_first: HashMap<String, Vec<OpId>> = HashMap::new();
        let mut hole_first = Vec::new();
        for (id, decl) in sig.ops() {
            if decl.arity() == 0 {
                continue;
            }
            match &decl.pieces[0] {
                MixfixPiece::Token(t) => by_first.entry(t.clone()).or_default().push(id),
                MixfixPiece::Hole => hole_first.push(id),
            }
        }
        Chart { sig, vars, tokens, depth, memo: HashMap::new(), by_first, hole_first }
    }

    fn balanced(&self, i: usize, j: usize) -> bool {
        let base = self.depth[i];
        self.depth[j] == base && self.depth[i..j].iter().all(|&d| d >= base)
    }

    fn parse(&mut self, i: usize, j: usize) -> Rc<Vec<Reading>> {
        if let Some(r) = self.memo.get(&(i, j)) {
            return r.clone();
        }
        // Guard against left recursion through hole-first operators.
        self.memo.insert((i, j), Rc::new(Vec::new()));
        let mut out: Vec<Reading> = Vec::new();
        if self.balanced(i, j) {
            if j - i == 1 {
                self.atoms(&self.tokens[i].text.clone(), &mut out);
            }
            if j - i >= 2 && self.tokens[i].is("(") && self.tokens[j - 1].is(")") && self.balanced(i + 1, j - 1) {
                for r in self.parse(i + 1, j - 1).iter() {
                    push(&mut out, Reading { prec: 0, ..r.clone() });
                }
            }
            let mut candidates = self.hole_first.clone();
            if let Some(ops) = self.by_first.get(&self.tokens[i].text) {
                candidates.extend(ops.iter().copied());
            }
            for op in candidates {
                self.apply_op(op, i, j, &mut out);
            }
        }
        let out = Rc::new(out);
        self.memo.insert((i, j), out.clone());
        out
    }

    fn atoms(&self, text: &str, out: &mut Vec<Reading>) {
        if let Some(op) = self.sig.lookup_op(text, 0) {
            push(out, Reading { term: Term::constant(op), prec: 0, clean: true });
        }
        if let Some(&sort) = self.vars.get(text) {
            push(out, Reading { term: Term::Var(Var::new(text, sort)), prec: 0, clean: true });
        }
        if let Some((name, sort)) = text.rsplit_once(':') {
            if !name.is_empty() {
                if let Some(sort) = self.sig.sort(sort) {
                    push(out, Reading { term: Term::Var(Var::new(name, sort)), prec: 0, clean: true });
                }
            }
        }
    }

    fn apply_op(&mut self, op: OpId, i: usize, j: usize, out: &mut Vec<Reading>) {
        let decl = self.sig.op(op);
        let pieces = decl.pieces.clone();
        let prec = decl.attrs.prec;
        let mut assignments = Vec::new();
        self.split(&pieces, 0, i, j, &mut Vec::new(), &mut assignments);
        for spans in assignments {
            // readings per hole, filtered by the declared argument sort
            let mut per_hole: Vec<Vec<Reading>> = Vec::with_capacity(spans.len());
            for (k, &(a, b, enclosed)) in spans.iter().enumerate() {
                let want = self.sig.op(op).args[k];
                let rs: Vec<Reading> = self
                    .parse(a, b)
                    .iter()
                    .filter(|r| self.sig.leq(self.sig.sort_of(&r.term), want))
                    .map(|r| Reading { clean: r.clean && (enclosed || r.prec <= prec), ..r.clone() })
                    .collect();
                if rs.is_empty() {
                    break;
                }
                per_hole.push(rs);
            }
            if per_hole.len() != spans.len() {
                continue;
            }
            let mut combos: Vec<(Vec<Term>, bool)> = vec![(Vec::new(), true)];
            for rs in &per_hole {
                let mut next = Vec::with_capacity(combos.len() * rs.len());
                for (args, clean) in &combos {
                    for r in rs {
                        let mut a = args.clone();
                        a.push(r.term.clone());
                        next.push((a, *clean && r.clean));
                    }
                }
                combos = next;
            }
            for (args, clean) in combos {
                let term = self.sig.make(op, args);
                push(out, Reading { term, prec, clean });
            }
        }
    }

    /// Enumerates the ways of matching `pieces[k..]` against tokens `i..j`,
    /// collecting hole spans with a flag telling whether the hole is
    /// enclosed between two tokens.
    fn split(
        &self,
        pieces: &[MixfixPiece],
        k: usize,
        i: usize,
        j: usize,
        acc: &mut Vec<(usize, usize, bool)>,
        out: &mut Vec<Vec<(usize, usize, bool)>>,
    ) {
        if k == pieces.len() {
            if i == j {
                out.push(acc.clone());
            }
            return;
        }
        match &pieces[k] {
            MixfixPiece::Token(t) => {
                if i < j && self.tokens[i].text == *t {
                    self.split(pieces, k + 1, i + 1, j, acc, out);
                }
            }
            MixfixPiece::Hole => {
                let enclosed = k > 0
                    && k + 1 < pieces.len()
                    && matches!(pieces[k - 1], MixfixPiece::Token(_))
                    && matches!(pieces[k + 1], MixfixPiece::Token(_));
                // remaining pieces need at least one token each
                let min_rest = pieces.len() - k - 1;
                if j < i + 1 + min_rest {
                    return;
                }
                let last = k + 1 == pieces.len();
                for end in i + 1..=j - min_rest {
                    if last && end != j {
                        continue;
                    }
                    if !self.balanced(i, end) {
                        continue;
                    }
                    if let Some(MixfixPiece::Token(next)) = pieces.get(k + 1) {
                        if self.tokens[end].text != *next {
                            continue;
                        }
                    }
                    acc.push((i, end, enclosed));
                    self.split(pieces, k + 1, end, j, acc, out);
                    acc.pop();
                }
            }
        }
    }
}

fn push(out: &mut Vec<Reading>, r: Reading) {
    match out.iter_mut().find(|x| x.term == r.term) {
        Some(x) => {
            if r.clean && !x.clean {
                *x = r;
            }
        }
        None => out.push(r),
    }
}

/// Parses a token span as a term, optionally of (a subsort of) `expected`.
pub fn parse_term_tokens(sig: &Signature, vars: &VarEnv, tokens: &[Token], expected: Option<SortId>) -> Result<Term> {
    let text = join(tokens);
    let Some(first) = tokens.first() else {
        return Err(Error::syntax(Default::default(), "expected a term"));
    };
    let mut chart = Chart::new(sig, vars, tokens);
    let readings = chart.parse(0, tokens.len());
    let mut fitting: Vec<&Reading> =
        readings.iter().filter(|r| expected.is_none_or(|s| sig.leq(sig.sort_of(&r.term), s))).collect();
    if fitting.iter().any(|r| r.clean) {
        fitting.retain(|r| r.clean);
    }
    match fitting.len() {
        0 => {
            let message = match (expected, readings.is_empty()) {
                (Some(s), false) => format!("`{text}` does not have sort {}", sig.sort_name(s)),
                _ => format!("no parse for `{text}`"),
            };
            if readings.is_empty() {
                Err(Error::syntax(first.pos, message))
            } else {
                Err(Error::SortCheck { pos: first.pos, message })
            }
        }
        1 => Ok(fitting[0].term.clone()),
        _ => Err(Error::AmbiguousParse {
            text,
            candidates: fitting.iter().map(|r| sig.display(&r.term).to_string()).collect(),
        }),
    }
}

/// Parses a term from text.
pub fn parse_term(sig: &Signature, vars: &VarEnv, text: &str, expected: Option<SortId>) -> Result<Term> {
    parse_term_tokens(sig, vars, &tokenize(text), expected)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Pos;
    use crate::term::{OpAttrs, SignatureBuilder};

    fn river() -> Signature {
        let mut b = SignatureBuilder::new();
        for s in ["Being", "Side", "Group", "River"] {
            b.add_sort(s);
        }
        b.add_subsort("Being", "Group", Pos::default());
        b.add_subsort("Side", "Group", Pos::default());
        for c in ["shepherd", "wolf", "goat", "cabbage"] {
            b.add_op(c, &[], "Being", OpAttrs::default(), Pos::default());
        }
        for c in ["left", "right"] {
            b.add_op(c, &[], "Side", OpAttrs::default(), Pos::default());
        }
        b.add_op(
            "__",
            &["Group", "Group"],
            "Group",
            OpAttrs { assoc: true, comm: true, ..Default::default() },
            Pos::default(),
        );
        b.add_op(
            "_|_",
            &["Group", "Group"],
            "River",
            OpAttrs { comm: true, prec: 50, ..Default::default() },
            Pos::default(),
        );
        b.add_op("risky", &["River"], "Bool", OpAttrs::default(), Pos::default());
        b.build().unwrap()
    }

    #[test]
    fn juxtaposition_and_infix() {
        let sig = river();
        let t = parse_term(&sig, &VarEnv::new(), "left shepherd wolf goat cabbage | right", None).unwrap();
        assert_eq!(sig.sort_name(sig.sort_of(&t)), "River");
        let u = parse_term(&sig, &VarEnv::new(), "right | cabbage goat wolf shepherd left", None).unwrap();
        assert_eq!(t, u);
    }

    #[test]
    fn prefix_call_with_variables() {
        let sig = river();
        let mut vars = VarEnv::new();
        vars.insert("G1".into(), sig.sort("Group").unwrap());
        let t = parse_term(&sig, &vars, "risky(shepherd G1 | G2:Group)", None).unwrap();
        assert_eq!(t.vars().len(), 2);
        assert_eq!(sig.sort_of(&t), sig.builtins().bool_sort);
    }

    #[test]
    fn errors() {
        let sig = river();
        let env = VarEnv::new();
        assert!(matches!(parse_term(&sig, &env, "left | dragon", None), Err(Error::Syntax { .. })));
        let group = sig.sort("Group");
        assert!(matches!(parse_term(&sig, &env, "left | right", group), Err(Error::SortCheck { .. })));
    }
}
