use std::fmt::Write as _;

use super::KripkeGraph;
use crate::error::Result;
use crate::formula::STUTTER;
use crate::term::Term;

fn quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' | '\\' => {
                out.push('\\');
                out.push(c);
            }
            '\n' => out.push_str("\\n"),
            _ => out.push(c),
        }
    }
    out.push('"');
    out
}

/// Renders the graph in the DOT language. Nodes show their subject term and
/// the given propositions that hold there; terminal twins are dashed and
/// failed states are drawn in blue.
pub fn to_dot(graph: &KripkeGraph, props: &[Term]) -> Result<String> {
    let sig = &graph.sig;
    let mut out = String::from("digraph {\n\tnode [shape=box];\n");
    for s in 0..graph.len() {
        let mut text = graph.show_state(s);
        let sat: Vec<String> = props
            .iter()
            .filter_map(|p| match graph.holds(s, p) {
                Ok(true) => Some(Ok(sig.display(p).without_sorts().to_string())),
                Ok(false) => None,
                Err(e) => Some(Err(e)),
            })
            .collect::<Result<_>>()?;
        if !sat.is_empty() {
            write!(text, "\n{}", sat.join(" ")).unwrap();
        }
        let mut attrs = vec![format!("label={}", quote(&text))];
        if graph.states[s].terminal {
            attrs.push("style=dashed".into());
        }
        if graph.failed[s] {
            attrs.push("color=blue".into());
            attrs.push("fontcolor=blue".into());
        }
        if s == graph.initial {
            attrs.push("penwidth=2".into());
        }
        writeln!(out, "\t{s} [{}];", attrs.join(", ")).unwrap();
    }
    for (s, es) in graph.edges.iter().enumerate() {
        for e in es {
            let style = if &*e.label == STUTTER { ", style=dashed" } else { "" };
            writeln!(out, "\t{s} -> {} [label={}{style}];", e.target, quote(&e.label)).unwrap();
        }
    }
    out.push_str("}\n");
    Ok(out)
}
