//! Temporal formula parser.
//!
//! Unary operators (`~`, `O`, `<>`, `[]`, `A`, `E` and the modalities) bind
//! tightest, then `/\`, `\/`, the binary path operators `U`, `R`, `W`
//! (right associative) and finally `->` and `<->`. Fixpoint binders extend
//! as far to the right as possible.

use std::sync::Arc;

use super::lexer::{tokenize, Token};
use super::term::{parse_term_tokens, VarEnv};
use crate::error::{Error, Pos, Result};
use crate::formula::{ActionSpec, Formula, LogicClass};
use crate::term::Signature;

const RESERVED: &[&str] = &[
    "~", "O", "<>", "A", "E", "/\\", "\\/", "->", "<->", "U", "R", "W", "(", ")", "[", "]", "<", ">", "<.>", "mu",
    "nu", ".", "True", "False",
];

struct Parser<'a> {
    sig: &'a Signature,
    toks: Vec<Token>,
    pos: usize,
    bound: Vec<Arc<str>>,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&str> {
        self.toks.get(self.pos).map(|t| t.text.as_str())
    }

    fn here(&self) -> Pos {
        self.toks.get(self.pos).or_else(|| self.toks.last()).map(|t| t.pos).unwrap_or_default()
    }

    fn expect(&mut self, s: &str) -> Result<()> {
        if self.peek() == Some(s) {
            self.pos += 1;
            Ok(())
        } else {
            let found = self.peek().map(|t| format!("`{t}`")).unwrap_or_else(|| "end of input".into());
            Err(Error::syntax(self.here(), format!("expected `{s}`, found {found}")))
        }
    }

    fn iff(&mut self) -> Result<Formula> {
        let a = self.path()?;
        match self.peek() {
            Some("->") => {
                self.pos += 1;
                Ok(Formula::implies(a, self.iff()?))
            }
            Some("<->") => {
                self.pos += 1;
                Ok(Formula::Iff(Box::new(a), Box::new(self.iff()?)))
            }
            _ => Ok(a),
        }
    }

    fn path(&mut self) -> Result<Formula> {
        let a = self.disj()?;
        let ctor: fn(Box<Formula>, Box<Formula>) -> Formula = match self.peek() {
            Some("U") => Formula::Until,
            Some("R") => Formula::Release,
            Some("W") => Formula::WeakUntil,
            _ => return Ok(a),
        };
        self.pos += 1;
        Ok(ctor(Box::new(a), Box::new(self.path()?)))
    }

    fn disj(&mut self) -> Result<Formula> {
        let mut a = self.conj()?;
        while self.peek() == Some("\\/") {
            self.pos += 1;
            a = Formula::or(a, self.conj()?);
        }
        Ok(a)
    }

    fn conj(&mut self) -> Result<Formula> {
        let mut a = self.unary()?;
        while self.peek() == Some("/\\") {
            self.pos += 1;
            a = Formula::and(a, self.unary()?);
        }
        Ok(a)
    }

    fn unary(&mut self) -> Result<Formula> {
        let Some(tok) = self.toks.get(self.pos).cloned() else {
            return Err(Error::syntax(self.here(), "expected a formula"));
        };
        let next = self.toks.get(self.pos + 1).cloned();
        let wrap = |this: &mut Self, f: fn(Formula) -> Formula| -> Result<Formula> {
            this.pos += 1;
            Ok(f(this.unary()?))
        };
        match tok.text.as_str() {
            "~" => wrap(self, Formula::not),
            "O" => wrap(self, Formula::next),
            "<>" => wrap(self, Formula::eventually),
            "A" => wrap(self, Formula::all),
            "E" => wrap(self, Formula::exists),
            "<.>" => {
                self.pos += 1;
                Ok(Formula::diamond(ActionSpec::Dot, self.unary()?))
            }
            "[" if next.as_ref().is_some_and(|n| n.is("]") && !n.spaced) => {
                self.pos += 2;
                Ok(Formula::always(self.unary()?))
            }
            "[" => {
                self.pos += 1;
                let spec = self.action_spec("]")?;
                Ok(Formula::box_op(spec, self.unary()?))
            }
            "<" => {
                self.pos += 1;
                let spec = self.action_spec(">")?;
                Ok(Formula::diamond(spec, self.unary()?))
            }
            "mu" | "nu" => self.fixpoint(&tok),
            "(" => {
                self.pos += 1;
                let f = self.iff()?;
                self.expect(")")?;
                Ok(f)
            }
            "True" => {
                self.pos += 1;
                Ok(Formula::True)
            }
            "False" => {
                self.pos += 1;
                Ok(Formula::False)
            }
            _ => self.atom(),
        }
    }

    fn action_spec(&mut self, close: &str) -> Result<ActionSpec> {
        let start = self.here();
        if self.peek() == Some(".") {
            self.pos += 1;
            self.expect(close)?;
            return Ok(ActionSpec::Dot);
        }
        let complement = self.peek() == Some("~");
        if complement {
            self.pos += 1;
        }
        let mut labels: Vec<Arc<str>> = Vec::new();
        while let Some(t) = self.peek() {
            if t == close {
                break;
            }
            if !self.sig.has_rule_label(t) {
                return Err(Error::UnknownRuleLabel(t.to_string()));
            }
            labels.push(t.into());
            self.pos += 1;
        }
        self.expect(close)?;
        if labels.is_empty() {
            return Err(Error::syntax(start, "expected rule labels"));
        }
        Ok(if complement { ActionSpec::Complement(labels) } else { ActionSpec::Labels(labels) })
    }

    fn fixpoint(&mut self, kw: &Token) -> Result<Formula> {
        self.pos += 1;
        let var =
            self.toks.get(self.pos).cloned().ok_or_else(|| Error::syntax(kw.pos, "expected a fixpoint variable"))?;
        // `Z.` written without a space
        let name = match var.text.strip_suffix('.') {
            Some(stem) if !stem.is_empty() => {
                self.pos += 1;
                stem.to_string()
            }
            _ => {
                self.pos += 1;
                self.expect(".")?;
                var.text.clone()
            }
        };
        if RESERVED.contains(&name.as_str()) || !name.chars().next().is_some_and(char::is_alphabetic) {
            return Err(Error::syntax(var.pos, format!("`{name}` is not a valid fixpoint variable")));
        }
        self.bound.push(name.as_str().into());
        let body = self.iff();
        self.bound.pop();
        let body = body?;
        Ok(if kw.is("mu") { Formula::mu(&name, body) } else { Formula::nu(&name, body) })
    }

    fn atom(&mut self) -> Result<Formula> {
        let start = self.pos;
        let mut depth = 0usize;
        while let Some(t) = self.toks.get(self.pos) {
            if depth == 0 {
                let glued_call = t.is("(") && !t.spaced && self.pos > start;
                if !glued_call && RESERVED.contains(&t.text.as_str()) {
                    break;
                }
            }
            match t.text.as_str() {
                "(" => depth += 1,
                ")" => depth -= 1,
                _ => {}
            }
            self.pos += 1;
        }
        let toks = &self.toks[start..self.pos];
        let Some(first) = toks.first() else {
            let found = self.peek().map(|t| format!("`{t}`")).unwrap_or_else(|| "end of input".into());
            return Err(Error::syntax(self.here(), format!("expected a formula, found {found}")));
        };
        if toks.len() == 1 && self.bound.iter().any(|b| **b == *first.text) {
            return Ok(Formula::Var(first.text.as_str().into()));
        }
        let prop = self.sig.builtins().prop_sort;
        match parse_term_tokens(self.sig, &VarEnv::new(), toks, Some(prop)) {
            Ok(t) if t.is_ground() => Ok(Formula::Atom(t)),
            Ok(_) => Err(Error::syntax(first.pos, "atomic propositions must be ground")),
            Err(e) => {
                let looks_like_var = toks.len() == 1 && first.text.chars().next().is_some_and(char::is_uppercase);
                if looks_like_var && matches!(e, Error::Syntax { .. }) {
                    Err(Error::UnboundMuVariable(first.text.clone()))
                } else {
                    Err(e)
                }
            }
        }
    }
}

/// Splits a leading `~` glued to an identifier, as in `~goal`.
fn presplit(toks: Vec<Token>) -> Vec<Token> {
    let mut out = Vec::with_capacity(toks.len());
    for t in toks {
        if t.text.len() > 1 && t.text.starts_with('~') && !t.text.starts_with("~>") {
            out.push(Token { text: "~".into(), pos: t.pos, spaced: t.spaced });
            let pos = Pos { line: t.pos.line, col: t.pos.col + 1 };
            out.extend(presplit(vec![Token { text: t.text[1..].into(), pos, spaced: false }]));
        } else {
            out.push(t);
        }
    }
    out
}

/// Parses a formula and classifies it by the least general logic it belongs to.
pub fn parse_formula(sig: &Signature, text: &str) -> Result<(Formula, LogicClass)> {
    let mut p = Parser { sig, toks: presplit(tokenize(text)), pos: 0, bound: Vec::new() };
    let f = p.iff()?;
    if let Some(t) = p.toks.get(p.pos) {
        return Err(Error::syntax(t.pos, format!("unexpected `{}`", t.text)));
    }
    f.check_monotone()?;
    let class = f.classify();
    Ok((f, class))
}
