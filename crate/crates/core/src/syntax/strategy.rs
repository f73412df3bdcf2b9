//! Strategy expression parser.
//!
//! Binding strength, tightest first: the postfix operators `*`, `+` and `!`,
//! then `;`, `|`, `or-else` and finally `? :`. Binary operators associate to
//! the right. Derived combinators (`not`, `try`, `test`, `or-else`, `+`,
//! `!`) are expanded into the core language while parsing.

use std::sync::Arc;

use super::lexer::{tokenize, Token};
use super::spec::{find_top, split_top};
use super::term::{parse_term_tokens, VarEnv};
use crate::error::{Error, Pos, Result};
use crate::strategy::{StratTable, Strategy};
use crate::term::{CondFragment, Condition, Signature, Term, Var};

/// Parses an equational condition `C1 /\ ... /\ Cn`.
pub fn parse_condition(sig: &Signature, vars: &VarEnv, tokens: &[Token]) -> Result<Condition> {
    let mut frags = Vec::new();
    for part in split_top(tokens, "/\\") {
        let pos = part.first().map(|t| t.pos).unwrap_or_default();
        if part.is_empty() {
            return Err(Error::syntax(pos, "empty condition fragment"));
        }
        if find_top(&part, "=>").is_some() {
            return Err(Error::UnsupportedFeature("rewriting conditions".into()));
        }
        if let Some(i) = find_top(&part, ":=") {
            let p = parse_term_tokens(sig, vars, &part[..i], None)?;
            let t = parse_term_tokens(sig, vars, &part[i + 1..], None)?;
            frags.push(CondFragment::Match(p, t));
        } else if let Some(i) = find_top(&part, "=") {
            let a = parse_term_tokens(sig, vars, &part[..i], None)?;
            let b = parse_term_tokens(sig, vars, &part[i + 1..], None)?;
            frags.push(CondFragment::Equal(a, b));
        } else {
            let t = parse_term_tokens(sig, vars, &part, Some(sig.builtins().bool_sort))?;
            frags.push(CondFragment::Bool(t));
        }
    }
    Ok(Condition(frags))
}

const PATTERN_STOPS: &[&str] = &["s.t.", "?", ":", ";", "or-else", "by", ")", ",", "]"];

struct Parser<'a> {
    sig: &'a Signature,
    vars: &'a VarEnv,
    table: &'a StratTable,
    toks: Vec<Token>,
    pos: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Token> {
        self.toks.get(self.pos)
    }

    fn peek_is(&self, s: &str) -> bool {
        self.peek().is_some_and(|t| t.is(s))
    }

    fn here(&self) -> Pos {
        self.peek().or_else(|| self.toks.last()).map(|t| t.pos).unwrap_or_default()
    }

    fn expect(&mut self, s: &str) -> Result<()> {
        if self.peek_is(s) {
            self.pos += 1;
            Ok(())
        } else {
            let found = self.peek().map(|t| format!("`{}`", t.text)).unwrap_or_else(|| "end of input".into());
            Err(Error::syntax(self.here(), format!("expected `{s}`, found {found}")))
        }
    }

    fn known(&self, name: &str) -> bool {
        name == "all" || self.table.contains(name) || self.sig.has_rule_label(name)
    }

    /// Splits identifiers with glued postfix operators, like `a*`.
    fn split_postfix(&mut self) {
        let mut out = Vec::with_capacity(self.toks.len());
        for t in std::mem::take(&mut self.toks) {
            let stem = t.text.trim_end_matches(['*', '+', '!']);
            if stem.len() < t.text.len() && !stem.is_empty() && !self.known(&t.text) && self.known(stem) {
                let mut col = t.pos.col;
                out.push(Token { text: stem.to_string(), pos: t.pos, spaced: t.spaced });
                col += stem.chars().count();
                for c in t.text[stem.len()..].chars() {
                    out.push(Token { text: c.to_string(), pos: Pos { line: t.pos.line, col }, spaced: false });
                    col += 1;
                }
            } else {
                out.push(t);
            }
        }
        self.toks = out;
    }

    fn cond(&mut self) -> Result<Strategy> {
        let c = self.or_else()?;
        if self.peek_is("?") {
            self.pos += 1;
            let yes = self.cond()?;
            self.expect(":")?;
            let no = self.cond()?;
            return Ok(Strategy::cond(c, yes, no));
        }
        Ok(c)
    }

    fn or_else(&mut self) -> Result<Strategy> {
        let a = self.union()?;
        if self.peek_is("or-else") {
            self.pos += 1;
            let b = self.or_else()?;
            return Ok(Strategy::or_else(a, b));
        }
        Ok(a)
    }

    fn union(&mut self) -> Result<Strategy> {
        let a = self.concat()?;
        if self.peek_is("|") {
            self.pos += 1;
            let b = self.union()?;
            return Ok(Strategy::union(a, b));
        }
        Ok(a)
    }

    fn concat(&mut self) -> Result<Strategy> {
        let a = self.postfix()?;
        if self.peek_is(";") {
            self.pos += 1;
            let b = self.concat()?;
            return Ok(Strategy::concat(a, b));
        }
        Ok(a)
    }

    fn postfix(&mut self) -> Result<Strategy> {
        let mut a = self.atom()?;
        loop {
            match self.peek().map(|t| t.text.as_str()) {
                Some("*") => a = Strategy::iter(a),
                Some("+") => a = Strategy::plus(a),
                Some("!") => a = Strategy::normal_form(a),
                _ => return Ok(a),
            }
            self.pos += 1;
        }
    }

    /// Tokens up to the next depth-0 stop word.
    fn take_until(&mut self, stops: &[&str]) -> Vec<Token> {
        let start = self.pos;
        let mut depth = 0;
        while let Some(t) = self.peek() {
            if depth == 0 && stops.contains(&t.text.as_str()) {
                break;
            }
            match t.text.as_str() {
                "(" | "[" | "{" => depth += 1,
                ")" | "]" | "}" => depth -= 1,
                _ => {}
            }
            self.pos += 1;
        }
        self.toks[start..self.pos].to_vec()
    }

    fn term(&self, tokens: &[Token], pos: Pos) -> Result<Term> {
        if tokens.is_empty() {
            return Err(Error::syntax(pos, "expected a term"));
        }
        parse_term_tokens(self.sig, self.vars, tokens, None)
    }

    fn pattern_and_condition(&mut self, kw: &Token) -> Result<(Term, Condition)> {
        let ptoks = self.take_until(PATTERN_STOPS);
        let pattern = self.term(&ptoks, kw.pos)?;
        let cond = if self.peek_is("s.t.") {
            self.pos += 1;
            let ctoks = self.take_until(&PATTERN_STOPS[1..]);
            parse_condition(self.sig, self.vars, &ctoks)?
        } else {
            Condition::empty()
        };
        Ok((pattern, cond))
    }

    fn parenthesized(&mut self) -> Result<Strategy> {
        self.expect("(")?;
        let s = self.cond()?;
        self.expect(")")?;
        Ok(s)
    }

    fn atom(&mut self) -> Result<Strategy> {
        let Some(tok) = self.peek().cloned() else {
            return Err(Error::syntax(self.here(), "expected a strategy"));
        };
        let next_is_paren = self.toks.get(self.pos + 1).is_some_and(|t| t.is("("));
        match tok.text.as_str() {
            "(" => self.parenthesized(),
            "idle" => {
                self.pos += 1;
                Ok(Strategy::Idle)
            }
            "fail" => {
                self.pos += 1;
                Ok(Strategy::Fail)
            }
            "match" | "amatch" => {
                self.pos += 1;
                let (pattern, cond) = self.pattern_and_condition(&tok)?;
                Ok(Strategy::Match { anywhere: tok.is("amatch"), pattern, cond })
            }
            "matchrew" | "amatchrew" => {
                self.pos += 1;
                self.matchrew(&tok)
            }
            "xmatch" | "xmatchrew" => Err(Error::UnsupportedFeature(format!("{} (matching with extension)", tok.text))),
            "one" if next_is_paren => Err(Error::UnsupportedFeature("one(...)".into())),
            "not" | "try" | "test" | "top" if next_is_paren && !self.table.contains(&tok.text) => {
                self.pos += 1;
                let inner = self.parenthesized()?;
                Ok(match tok.text.as_str() {
                    "not" => Strategy::not(inner),
                    "try" => Strategy::try_(inner),
                    "test" => Strategy::test(inner),
                    _ => inner.top(),
                })
            }
            "{" => Err(Error::UnsupportedFeature("rewriting condition strategies".into())),
            _ => self.named(tok),
        }
    }

    fn matchrew(&mut self, kw: &Token) -> Result<Strategy> {
        let (pattern, cond) = self.pattern_and_condition(kw)?;
        self.expect("by")?;
        let pvars = pattern.vars();
        let mut using: Vec<(Var, Arc<Strategy>)> = Vec::new();
        loop {
            let vt = self.peek().cloned().ok_or_else(|| Error::syntax(self.here(), "expected a pattern variable"))?;
            let name = vt.text.split(':').next().unwrap_or_default();
            let var = pvars.iter().find(|v| &*v.name == name).cloned().ok_or_else(|| {
                Error::syntax(vt.pos, format!("{} is not a variable of the matchrew pattern", vt.text))
            })?;
            if using.iter().any(|(v, _)| *v == var) {
                return Err(Error::syntax(vt.pos, format!("variable {} is rewritten twice", vt.text)));
            }
            self.pos += 1;
            self.expect("using")?;
            let s = self.cond()?;
            using.push((var, Arc::new(s)));
            if self.peek_is(",") {
                self.pos += 1;
            } else {
                break;
            }
        }
        Ok(Strategy::MatchRew { anywhere: kw.is("amatchrew"), pattern, cond, using })
    }

    fn named(&mut self, tok: Token) -> Result<Strategy> {
        let name = tok.text.clone();
        self.pos += 1;
        if self.peek_is("(") && !self.peek().unwrap().spaced {
            let decl = self.table.get(&name).ok_or_else(|| Error::UnknownStrategy(name.clone()))?;
            let open = self.pos;
            self.pos += 1;
            let inner = self.take_until(&[")"]);
            self.expect(")")?;
            let parts = if inner.is_empty() { Vec::new() } else { split_top(&inner, ",") };
            if parts.len() != decl.params.len() {
                return Err(Error::syntax(
                    self.toks[open].pos,
                    format!("strategy {name} expects {} arguments", decl.params.len()),
                ));
            }
            let args = parts
                .iter()
                .zip(&decl.params)
                .map(|(p, &s)| {
                    if p.is_empty() {
                        return Err(Error::syntax(tok.pos, "empty argument"));
                    }
                    parse_term_tokens(self.sig, self.vars, p, Some(s))
                })
                .collect::<Result<Vec<_>>>()?;
            return Ok(Strategy::Call { name: name.as_str().into(), args });
        }
        if self.peek_is("[") {
            if name != "all" && !self.sig.has_rule_label(&name) {
                return Err(Error::UnknownRuleLabel(name));
            }
            self.pos += 1;
            let inner = self.take_until(&["]"]);
            self.expect("]")?;
            let mut subst = Vec::new();
            for part in split_top(&inner, ",") {
                if part.len() < 3 || !part[1].is("<-") {
                    let pos = part.first().map(|t| t.pos).unwrap_or(tok.pos);
                    return Err(Error::syntax(pos, "expected `variable <- term`"));
                }
                let value = parse_term_tokens(self.sig, self.vars, &part[2..], None)?;
                subst.push((Arc::from(part[0].text.as_str()), value));
            }
            let label = (name != "all").then(|| Arc::from(name.as_str()));
            return Ok(Strategy::Rule { label, subst, top: false });
        }
        // A name that is both a strategy and a rule label denotes the strategy.
        if let Some(decl) = self.table.get(&name) {
            if !decl.params.is_empty() {
                return Err(Error::syntax(tok.pos, format!("strategy {name} expects {} arguments", decl.params.len())));
            }
            return Ok(Strategy::call(&name));
        }
        if name == "all" {
            return Ok(Strategy::Rule { label: None, subst: Vec::new(), top: false });
        }
        if self.sig.has_rule_label(&name) {
            return Ok(Strategy::rule(&name));
        }
        if PATTERN_STOPS.contains(&name.as_str()) || ["|", "*", "+", "!", "?"].contains(&name.as_str()) {
            return Err(Error::syntax(tok.pos, format!("unexpected `{name}`")));
        }
        Err(Error::UnknownRuleLabel(name))
    }
}

pub fn parse_strategy_tokens(sig: &Signature, vars: &VarEnv, table: &StratTable, toks: &[Token]) -> Result<Strategy> {
    let mut p = Parser { sig, vars, table, toks: toks.to_vec(), pos: 0 };
    p.split_postfix();
    let s = p.cond()?;
    if let Some(t) = p.peek() {
        return Err(Error::syntax(t.pos, format!("unexpected `{}`", t.text)));
    }
    Ok(s)
}

pub fn parse_strategy(sig: &Signature, vars: &VarEnv, table: &StratTable, text: &str) -> Result<Strategy> {
    parse_strategy_tokens(sig, vars, table, &tokenize(text))
}
