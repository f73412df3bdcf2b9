//! Specification files: modules with their declarations and statements.
//!
//! Statements are kept as token spans here; terms and strategies inside them
//! can only be parsed once the flattened signature of the module being
//! resolved is known.

use std::fmt::Write as _;

use super::lexer::{join, tokenize, Token};
use crate::error::{Error, Pos, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModuleKind {
    Functional,
    System,
    Strategy,
}

impl ModuleKind {
    fn keywords(self) -> (&'static str, &'static str) {
        match self {
            ModuleKind::Functional => ("fmod", "endfm"),
            ModuleKind::System => ("mod", "endm"),
            ModuleKind::Strategy => ("smod", "endsm"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ImportMode {
    Protecting,
    Extending,
    Including,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OpAttrSpec {
    pub assoc: bool,
    pub comm: bool,
    pub ctor: bool,
    pub id: Option<Vec<Token>>,
    pub prec: Option<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StmtAttrs {
    pub owise: bool,
    pub label: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Item {
    Import {
        mode: ImportMode,
        name: String,
        pos: Pos,
    },
    Sorts {
        names: Vec<String>,
        pos: Pos,
    },
    /// `subsorts A B < C < D .` as its chain of groups.
    Subsorts {
        chain: Vec<Vec<String>>,
        pos: Pos,
    },
    Ops {
        names: Vec<String>,
        args: Vec<String>,
        result: String,
        attrs: OpAttrSpec,
        pos: Pos,
    },
    Vars {
        names: Vec<String>,
        sort: String,
        pos: Pos,
    },
    Eq {
        lhs: Vec<Token>,
        rhs: Vec<Token>,
        cond: Option<Vec<Token>>,
        attrs: StmtAttrs,
        pos: Pos,
    },
    Rule {
        label: String,
        lhs: Vec<Token>,
        rhs: Vec<Token>,
        cond: Option<Vec<Token>>,
        pos: Pos,
    },
    Strats {
        names: Vec<String>,
        params: Vec<String>,
        subject: String,
        pos: Pos,
    },
    StratDef {
        name: String,
        args: Vec<Vec<Token>>,
        body: Vec<Token>,
        cond: Option<Vec<Token>>,
        pos: Pos,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModuleDecl {
    pub kind: ModuleKind,
    pub name: String,
    pub pos: Pos,
    pub items: Vec<Item>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SourceSpec {
    pub modules: Vec<ModuleDecl>,
}

impl SourceSpec {
    pub fn module(&self, name: &str) -> Option<&ModuleDecl> {
        self.modules.iter().find(|m| m.name == name)
    }
}

/// Depth of parentheses and brackets at each token, counted before it.
fn depth_scan(tokens: &[Token]) -> Vec<i32> {
    let mut d = 0;
    tokens
        .iter()
        .map(|t| {
            let here = d;
            match t.text.as_str() {
                "(" | "[" | "{" => d += 1,
                ")" | "]" | "}" => d -= 1,
                _ => {}
            }
            here
        })
        .collect()
}

/// Index of the first depth-0 token equal to `what`.
pub(crate) fn find_top(tokens: &[Token], what: &str) -> Option<usize> {
    let depth = depth_scan(tokens);
    tokens.iter().zip(&depth).position(|(t, &d)| d == 0 && t.is(what))
}

/// Splits at every depth-0 token equal to `sep`.
pub(crate) fn split_top(tokens: &[Token], sep: &str) -> Vec<Vec<Token>> {
    let depth = depth_scan(tokens);
    let mut out = vec![Vec::new()];
    for (t, &d) in tokens.iter().zip(&depth) {
        if d == 0 && t.is(sep) {
            out.push(Vec::new());
        } else {
            out.last_mut().unwrap().push(t.clone());
        }
    }
    out
}

const STMT_ATTR_WORDS: &[&str] = &["owise", "otherwise", "label", "nonexec", "metadata", "print", "variant"];

/// Separates a trailing `[attrs]` block from a statement, if the bracket
/// contents start with an attribute keyword.
fn take_stmt_attrs(tokens: &[Token]) -> Result<(Vec<Token>, StmtAttrs)> {
    let mut attrs = StmtAttrs { owise: false, label: None };
    if tokens.last().is_some_and(|t| t.is("]")) {
        let depth = depth_scan(tokens);
        let last = tokens.len() - 1;
        if let Some(open) = (0..last).rev().find(|&i| tokens[i].is("[") && depth[i] == depth[last] - 1) {
            let inner = &tokens[open + 1..last];
            if inner.first().is_some_and(|t| STMT_ATTR_WORDS.contains(&t.text.as_str())) {
                let mut i = 0;
                while i < inner.len() {
                    match inner[i].text.as_str() {
                        "owise" | "otherwise" => attrs.owise = true,
                        "nonexec" | "variant" => {
                            return Err(Error::UnsupportedFeature(format!("statement attribute {}", inner[i].text)))
                        }
                        "label" => {
                            i += 1;
                            let l = inner.get(i).ok_or_else(|| Error::syntax(inner[i - 1].pos, "expected a label"))?;
                            attrs.label = Some(l.text.clone());
                        }
                        "metadata" | "print" => {
                            // skip the argument
                            i += 1;
                        }
                        other => {
                            return Err(Error::syntax(inner[i].pos, format!("unknown statement attribute {other}")))
                        }
                    }
                    i += 1;
                }
                return Ok((tokens[..open].to_vec(), attrs));
            }
        }
    }
    Ok((tokens.to_vec(), attrs))
}

fn expect_nonempty(tokens: &[Token], pos: Pos, what: &str) -> Result<()> {
    if tokens.is_empty() {
        Err(Error::syntax(pos, format!("expected {what}")))
    } else {
        Ok(())
    }
}

/// Glues adjacent tokens (no blank between them) into names.
fn glue_names(tokens: &[Token]) -> Vec<String> {
    let mut out: Vec<String> = Vec::new();
    for (i, t) in tokens.iter().enumerate() {
        if i > 0 && !t.spaced {
            out.last_mut().unwrap().push_str(&t.text);
        } else {
            out.push(t.text.clone());
        }
    }
    out
}

fn parse_op_attrs(tokens: &[Token], pos: Pos) -> Result<OpAttrSpec> {
    let mut attrs = OpAttrSpec { assoc: false, comm: false, ctor: false, id: None, prec: None };
    let mut i = 0;
    while i < tokens.len() {
        let t = &tokens[i];
        match t.text.as_str() {
            "assoc" => attrs.assoc = true,
            "comm" => attrs.comm = true,
            "ctor" => attrs.ctor = true,
            "prec" => {
                i += 1;
                let n = tokens
                    .get(i)
                    .and_then(|t| t.text.parse().ok())
                    .ok_or_else(|| Error::syntax(t.pos, "expected a number after prec"))?;
                attrs.prec = Some(n);
            }
            "id:" => {
                let start = i + 1;
                let mut end = start;
                while end < tokens.len() && !OP_ATTR_WORDS.contains(&tokens[end].text.as_str()) {
                    end += 1;
                }
                expect_nonempty(&tokens[start..end], t.pos, "an identity element")?;
                attrs.id = Some(tokens[start..end].to_vec());
                i = end;
                continue;
            }
            other => return Err(Error::syntax(t.pos, format!("unknown operator attribute {other}"))),
        }
        i += 1;
    }
    if attrs.id.is_some() && !attrs.assoc && !attrs.comm {
        return Err(Error::SortCheck { pos, message: "id: requires assoc or comm".into() });
    }
    Ok(attrs)
}

const OP_ATTR_WORDS: &[&str] = &["assoc", "comm", "ctor", "prec", "id:"];

fn parse_statement(kw: &Token, body: &[Token]) -> Result<Item> {
    let pos = kw.pos;
    let texts: Vec<&str> = body.iter().map(|t| t.text.as_str()).collect();
    match kw.text.as_str() {
        "protecting" | "pr" | "extending" | "ex" | "including" | "inc" => {
            let mode = match kw.text.as_str() {
                "protecting" | "pr" => ImportMode::Protecting,
                "extending" | "ex" => ImportMode::Extending,
                _ => ImportMode::Including,
            };
            if body.len() != 1 {
                return Err(Error::syntax(pos, "expected a single module name"));
            }
            Ok(Item::Import { mode, name: body[0].text.clone(), pos })
        }
        "sort" | "sorts" => {
            expect_nonempty(body, pos, "sort names")?;
            if texts.contains(&"<") {
                return Err(Error::syntax(pos, "subsort declarations use the subsort keyword"));
            }
            Ok(Item::Sorts { names: texts.iter().map(|s| s.to_string()).collect(), pos })
        }
        "subsort" | "subsorts" => {
            let chain: Vec<Vec<String>> =
                split_top(body, "<").into_iter().map(|g| g.into_iter().map(|t| t.text).collect()).collect();
            if chain.len() < 2 || chain.iter().any(Vec::is_empty) {
                return Err(Error::syntax(pos, "malformed subsort declaration"));
            }
            Ok(Item::Subsorts { chain, pos })
        }
        "op" | "ops" => {
            let colon =
                find_top(body, ":").ok_or_else(|| Error::syntax(pos, "expected `:` in operator declaration"))?;
            let arrow = body
                .iter()
                .position(|t| t.is("->"))
                .ok_or_else(|| Error::syntax(pos, "expected `->` in operator declaration"))?;
            if arrow < colon {
                return Err(Error::syntax(pos, "malformed operator declaration"));
            }
            let name_toks = &body[..colon];
            expect_nonempty(name_toks, pos, "an operator name")?;
            let names = glue_names(name_toks);
            if kw.is("op") && names.len() != 1 {
                return Err(Error::syntax(name_toks[0].pos, "use ops to declare several operators"));
            }
            let args = body[colon + 1..arrow].iter().map(|t| t.text.clone()).collect();
            let rest = &body[arrow + 1..];
            let result = rest.first().ok_or_else(|| Error::syntax(pos, "expected a result sort"))?;
            let attrs = match rest.get(1) {
                None => parse_op_attrs(&[], pos)?,
                Some(t) if t.is("[") && rest.last().is_some_and(|t| t.is("]")) => {
                    parse_op_attrs(&rest[2..rest.len() - 1], pos)?
                }
                Some(t) => return Err(Error::syntax(t.pos, format!("unexpected `{}`", t.text))),
            };
            Ok(Item::Ops { names, args, result: result.text.clone(), attrs, pos })
        }
        "var" | "vars" => {
            let colon =
                find_top(body, ":").ok_or_else(|| Error::syntax(pos, "expected `:` in variable declaration"))?;
            let names: Vec<String> = body[..colon].iter().map(|t| t.text.clone()).collect();
            expect_nonempty(&body[..colon], pos, "variable names")?;
            if body.len() != colon + 2 {
                return Err(Error::syntax(pos, "expected a single sort"));
            }
            Ok(Item::Vars { names, sort: body[colon + 1].text.clone(), pos })
        }
        "eq" | "ceq" => {
            let (body, attrs) = take_stmt_attrs(body)?;
            let (main, cond) = split_condition(&body, kw.is("ceq"), pos)?;
            let eq = find_top(&main, "=").ok_or_else(|| Error::syntax(pos, "expected `=` in equation"))?;
            let lhs = main[..eq].to_vec();
            let rhs = main[eq + 1..].to_vec();
            expect_nonempty(&lhs, pos, "a lefthand side")?;
            expect_nonempty(&rhs, pos, "a righthand side")?;
            Ok(Item::Eq { lhs, rhs, cond, attrs, pos })
        }
        "rl" | "crl" => {
            let (body, attrs) = take_stmt_attrs(body)?;
            let (label, start) = if body.len() >= 4 && body[0].is("[") && body[2].is("]") && body[3].is(":") {
                (Some(body[1].text.clone()), 4)
            } else {
                (None, 0)
            };
            let label = label.or(attrs.label).ok_or_else(|| Error::syntax(pos, "rules must be labeled"))?;
            let (main, cond) = split_condition(&body[start..], kw.is("crl"), pos)?;
            let arrow = find_top(&main, "=>").ok_or_else(|| Error::syntax(pos, "expected `=>` in rule"))?;
            let lhs = main[..arrow].to_vec();
            let rhs = main[arrow + 1..].to_vec();
            expect_nonempty(&lhs, pos, "a lefthand side")?;
            expect_nonempty(&rhs, pos, "a righthand side")?;
            Ok(Item::Rule { label, lhs, rhs, cond, pos })
        }
        "strat" | "strats" => {
            let at = find_top(body, "@").ok_or_else(|| Error::syntax(pos, "expected `@` in strategy declaration"))?;
            if body.len() != at + 2 {
                return Err(Error::syntax(pos, "expected a single subject sort after `@`"));
            }
            let head = &body[..at];
            let (names, params) = match find_top(head, ":") {
                Some(c) => (&head[..c], head[c + 1..].iter().map(|t| t.text.clone()).collect()),
                None => (head, Vec::new()),
            };
            expect_nonempty(names, pos, "strategy names")?;
            if kw.is("strat") && names.len() != 1 {
                return Err(Error::syntax(pos, "use strats to declare several strategies"));
            }
            Ok(Item::Strats {
                names: names.iter().map(|t| t.text.clone()).collect(),
                params,
                subject: body[at + 1].text.clone(),
                pos,
            })
        }
        "sd" | "csd" => {
            let def = find_top(body, ":=").ok_or_else(|| Error::syntax(pos, "expected `:=` in strategy definition"))?;
            let head = &body[..def];
            let name = head.first().ok_or_else(|| Error::syntax(pos, "expected a strategy name"))?;
            let args = if head.len() > 1 {
                if !head[1].is("(") || !head.last().unwrap().is(")") {
                    return Err(Error::syntax(head[1].pos, "malformed strategy definition head"));
                }
                split_top(&head[2..head.len() - 1], ",")
            } else {
                Vec::new()
            };
            let (body, cond) = split_condition(&body[def + 1..], kw.is("csd"), pos)?;
            expect_nonempty(&body, pos, "a strategy expression")?;
            Ok(Item::StratDef { name: name.text.clone(), args, body, cond, pos })
        }
        "mb" | "cmb" => Err(Error::UnsupportedFeature("membership axioms".into())),
        other => Err(Error::syntax(pos, format!("unknown declaration keyword {other}"))),
    }
}

fn split_condition(tokens: &[Token], conditional: bool, pos: Pos) -> Result<(Vec<Token>, Option<Vec<Token>>)> {
    if !conditional {
        return Ok((tokens.to_vec(), None));
    }
    let i = find_top(tokens, "if").ok_or_else(|| Error::syntax(pos, "expected `if` in conditional statement"))?;
    let cond = tokens[i + 1..].to_vec();
    expect_nonempty(&cond, pos, "a condition")?;
    Ok((tokens[..i].to_vec(), Some(cond)))
}

const ITEM_KEYWORDS: &[&str] = &[
    "protecting",
    "pr",
    "extending",
    "ex",
    "including",
    "inc",
    "sort",
    "sorts",
    "subsort",
    "subsorts",
    "op",
    "ops",
    "var",
    "vars",
    "eq",
    "ceq",
    "rl",
    "crl",
    "strat",
    "strats",
    "sd",
    "csd",
    "mb",
    "cmb",
];

pub fn parse_spec(text: &str) -> Result<SourceSpec> {
    let tokens = tokenize(text);
    let mut spec = SourceSpec::default();
    let mut i = 0;
    while i < tokens.len() {
        let head = &tokens[i];
        let kind = match head.text.as_str() {
            "fmod" => ModuleKind::Functional,
            "mod" => ModuleKind::System,
            "smod" => ModuleKind::Strategy,
            _ => return Err(Error::syntax(head.pos, format!("expected a module, found `{}`", head.text))),
        };
        let name = tokens.get(i + 1).ok_or_else(|| Error::syntax(head.pos, "expected a module name"))?;
        if !tokens.get(i + 2).is_some_and(|t| t.is("is")) {
            return Err(Error::syntax(name.pos, "expected `is` after the module name"));
        }
        if spec.module(&name.text).is_some() {
            return Err(Error::DuplicateDeclaration { name: format!("module {}", name.text), pos: name.pos });
        }
        let end_kw = kind.keywords().1;
        let mut module = ModuleDecl { kind, name: name.text.clone(), pos: head.pos, items: Vec::new() };
        i += 3;
        loop {
            let Some(kw) = tokens.get(i) else {
                return Err(Error::syntax(head.pos, format!("module {} is not closed with {end_kw}", module.name)));
            };
            if kw.is(end_kw) {
                i += 1;
                break;
            }
            if !ITEM_KEYWORDS.contains(&kw.text.as_str()) {
                return Err(Error::syntax(kw.pos, format!("unexpected `{}`", kw.text)));
            }
            let start = i + 1;
            let mut end = start;
            while end < tokens.len() && !tokens[end].is(".") {
                if tokens[end].is(end_kw)
                    || (ITEM_KEYWORDS.contains(&tokens[end].text.as_str())
                        && tokens[end].spaced
                        && is_line_start(&tokens, end))
                {
                    return Err(Error::syntax(tokens[end].pos, "expected `.` at the end of the statement"));
                }
                end += 1;
            }
            if end == tokens.len() {
                return Err(Error::syntax(kw.pos, "expected `.` at the end of the statement"));
            }
            module.items.push(parse_statement(kw, &tokens[start..end])?);
            i = end + 1;
        }
        spec.modules.push(module);
    }
    Ok(spec)
}

/// Whether the token is the first one on its line, a heuristic used only to
/// report missing periods close to where they are missing.
fn is_line_start(tokens: &[Token], i: usize) -> bool {
    i > 0 && tokens[i - 1].pos.line < tokens[i].pos.line
}

fn attrs_text(attrs: &OpAttrSpec) -> String {
    let mut parts = Vec::new();
    if attrs.ctor {
        parts.push("ctor".to_string());
    }
    if attrs.assoc {
        parts.push("assoc".to_string());
    }
    if attrs.comm {
        parts.push("comm".to_string());
    }
    if let Some(id) = &attrs.id {
        parts.push(format!("id: {}", join(id)));
    }
    if let Some(p) = attrs.prec {
        parts.push(format!("prec {p}"));
    }
    if parts.is_empty() {
        String::new()
    } else {
        format!(" [{}]", parts.join(" "))
    }
}

fn cond_text(cond: &Option<Vec<Token>>) -> String {
    match cond {
        Some(c) => format!(" if {}", join(c)),
        None => String::new(),
    }
}

impl SourceSpec {
    /// Prints the specification back in concrete syntax.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (mi, m) in self.modules.iter().enumerate() {
            if mi > 0 {
                out.push('\n');
            }
            let (open, close) = m.kind.keywords();
            let _ = writeln!(out, "{open} {} is", m.name);
            for item in &m.items {
                out.push_str("  ");
                match item {
                    Item::Import { mode, name, .. } => {
                        let kw = match mode {
                            ImportMode::Protecting => "protecting",
                            ImportMode::Extending => "extending",
                            ImportMode::Including => "including",
                        };
                        let _ = write!(out, "{kw} {name} .");
                    }
                    Item::Sorts { names, .. } => {
                        let kw = if names.len() == 1 { "sort" } else { "sorts" };
                        let _ = write!(out, "{kw} {} .", names.join(" "));
                    }
                    Item::Subsorts { chain, .. } => {
                        let many = chain.iter().map(Vec::len).sum::<usize>() > 2;
                        let kw = if many { "subsorts" } else { "subsort" };
                        let groups: Vec<String> = chain.iter().map(|g| g.join(" ")).collect();
                        let _ = write!(out, "{kw} {} .", groups.join(" < "));
                    }
                    Item::Ops { names, args, result, attrs, .. } => {
                        let kw = if names.len() == 1 { "op" } else { "ops" };
                        let _ = write!(out, "{kw} {} : ", names.join(" "));
                        for a in args {
                            let _ = write!(out, "{a} ");
                        }
                        let _ = write!(out, "-> {result}{} .", attrs_text(attrs));
                    }
                    Item::Vars { names, sort, .. } => {
                        let kw = if names.len() == 1 { "var" } else { "vars" };
                        let _ = write!(out, "{kw} {} : {sort} .", names.join(" "));
                    }
                    Item::Eq { lhs, rhs, cond, attrs, .. } => {
                        let kw = if cond.is_some() { "ceq" } else { "eq" };
                        let _ = write!(out, "{kw} {} = {}{}", join(lhs), join(rhs), cond_text(cond));
                        let mut a = Vec::new();
                        if attrs.owise {
                            a.push("owise".to_string());
                        }
                        if let Some(l) = &attrs.label {
                            a.push(format!("label {l}"));
                        }
                        if !a.is_empty() {
                            let _ = write!(out, " [{}]", a.join(" "));
                        }
                        out.push_str(" .");
                    }
                    Item::Rule { label, lhs, rhs, cond, .. } => {
                        let kw = if cond.is_some() { "crl" } else { "rl" };
                        let _ = write!(out, "{kw} [{label}] : {} => {}{} .", join(lhs), join(rhs), cond_text(cond));
                    }
                    Item::Strats { names, params, subject, .. } => {
                        let kw = if names.len() == 1 { "strat" } else { "strats" };
                        let _ = write!(out, "{kw} {}", names.join(" "));
                        if !params.is_empty() {
                            let _ = write!(out, " : {}", params.join(" "));
                        }
                        let _ = write!(out, " @ {subject} .");
                    }
                    Item::StratDef { name, args, body, cond, .. } => {
                        let kw = if cond.is_some() { "csd" } else { "sd" };
                        let _ = write!(out, "{kw} {name}");
                        if !args.is_empty() {
                            let args: Vec<String> = args.iter().map(|a| join(a)).collect();
                            let _ = write!(out, "({})", args.join(", "));
                        }
                        let _ = write!(out, " := {}{} .", join(body), cond_text(cond));
                    }
                }
                out.push('\n');
            }
            let _ = writeln!(out, "{close}");
        }
        out
    }
}
