//! The command-line front end: `check`, `graph` and `srewrite`.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::error::{Error, Result};
use crate::formula::LogicClass;
use crate::kripke::{
    build_controlled, build_uncontrolled, to_dot, BuildOptions, KripkeGraph, Merge, DEFAULT_GRAPH_BUDGET,
};
use crate::ltl::{check_ctl, check_ctl_star, check_ltl, LtlVerdict};
use crate::module::Module;
use crate::mucalc::check_mu;
use crate::strategy::srewrite;
use crate::term::Term;

#[derive(Debug, Parser)]
#[command(name = "stratmc", version, about = "Model checking of rewriting specifications controlled by strategies")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check a temporal property of the system, optionally under a strategy.
    Check(CheckArgs),
    /// Print the state graph in DOT format.
    Graph(GraphArgs),
    /// List the results of rewriting a term with a strategy.
    Srewrite(SrewriteArgs),
}

#[derive(Debug, clap::Args)]
pub struct Common {
    /// Specification file.
    pub file: PathBuf,
    /// Initial term.
    pub term: String,
    /// Module to use (the last one in the file by default).
    #[arg(long)]
    pub module: Option<String>,
    /// Maximum number of states to explore.
    #[arg(long, env = "STRATMC_BUDGET", default_value_t = DEFAULT_GRAPH_BUDGET)]
    pub budget: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Purge {
    Auto,
    Yes,
    No,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MergeArg {
    Auto,
    No,
    State,
    Edge,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, clap::Args)]
pub struct CheckArgs {
    #[command(flatten)]
    pub common: Common,
    /// Temporal formula.
    pub formula: String,
    /// Strategy name or expression.
    pub strategy: Option<String>,
    /// Remove states that reach neither a solution nor an infinite execution.
    #[arg(long, value_enum, default_value_t = Purge::Auto)]
    pub purge_fails: Purge,
    /// Group successors sharing a term (and, with `edge`, an action).
    #[arg(long, value_enum, default_value_t = MergeArg::Auto)]
    pub merge_states: MergeArg,
    /// Print a counterexample when the property fails.
    #[arg(long)]
    pub counterexample: bool,
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Debug, clap::Args)]
pub struct GraphArgs {
    #[command(flatten)]
    pub common: Common,
    /// Strategy name or expression.
    pub strategy: Option<String>,
    /// Remove failed states.
    #[arg(long, value_enum, default_value_t = Purge::No)]
    pub purge_fails: Purge,
    /// Group successors sharing a term.
    #[arg(long, value_enum, default_value_t = MergeArg::No)]
    pub merge_states: MergeArg,
    /// Atomic proposition to show in the node labels; may be repeated.
    #[arg(long = "prop")]
    pub props: Vec<String>,
}

#[derive(Debug, clap::Args)]
pub struct SrewriteArgs {
    #[command(flatten)]
    pub common: Common,
    /// Strategy name or expression.
    pub strategy: String,
    /// Stop after this many solutions.
    #[arg(long)]
    pub max: Option<usize>,
}

/// Branching logics need the adapted graph; LTL is checked on the plain one.
pub fn resolve_options(class: LogicClass, purge: Purge, merge: MergeArg) -> (bool, Merge) {
    let (auto_purge, auto_merge) = match class {
        LogicClass::Prop | LogicClass::Ltl => (false, Merge::No),
        LogicClass::Ctl | LogicClass::CtlStar => (true, Merge::State),
        LogicClass::MuCalc => (true, Merge::Edge),
    };
    let purge = match purge {
        Purge::Auto => auto_purge,
        Purge::Yes => true,
        Purge::No => false,
    };
    let merge = match merge {
        MergeArg::Auto => auto_merge,
        MergeArg::No => Merge::No,
        MergeArg::State => Merge::State,
        MergeArg::Edge => Merge::Edge,
    };
    (purge, merge)
}

/// Runs the tool on `args` (including the program name) and returns the
/// exit status: 0 when a property holds or a command succeeds, 1 when a
/// property fails, 2 on errors.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    let result = match &cli.command {
        Command::Check(a) => check(a, out, err),
        Command::Graph(a) => graph(a, out).map(|_| 0),
        Command::Srewrite(a) => rewrite(a, out).map(|_| 0),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}

fn load(c: &Common) -> Result<(Module, Term)> {
    let text = std::fs::read_to_string(&c.file)
        .map_err(|e| Error::UnsupportedFeature(format!("cannot read {}: {e}", c.file.display())))?;
    let module = Module::from_source(&text, c.module.as_deref())?;
    let term = module.parse_ground(&c.term)?;
    Ok((module, term))
}

fn build(
    module: &Module,
    t: &Term,
    strategy: Option<&str>,
    purge_fails: bool,
    merge: Merge,
    budget: usize,
) -> Result<KripkeGraph> {
    match strategy {
        None => build_uncontrolled(&module.sig, t, budget),
        Some(s) => {
            let strat = module.parse_strategy(s)?;
            let opts = BuildOptions { purge_fails, merge, budget, semantics_budget: budget };
            build_controlled(module, t, &strat, opts)
        }
    }
}

fn io(e: std::io::Error) -> Error {
    Error::UnsupportedFeature(format!("output error: {e}"))
}

fn check(a: &CheckArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let (module, t) = load(&a.common)?;
    let (formula, class) = module.parse_formula(&a.formula)?;
    let (purge, merge) = resolve_options(class, a.purge_fails, a.merge_states);
    let graph = match build(&module, &t, a.strategy.as_deref(), purge, merge, a.common.budget) {
        Err(Error::EmptyBehavior) if class <= LogicClass::Ltl => {
            writeln!(err, "warning: the strategy admits no execution, so the property holds vacuously").map_err(io)?;
            report(a, out, true, 0, None, None)?;
            return Ok(0);
        }
        other => other?,
    };
    let mut game_states = None;
    let mut lasso = None;
    let holds = match class {
        LogicClass::Prop | LogicClass::Ctl => check_ctl(&graph, &formula)?,
        LogicClass::Ltl => match check_ltl(&graph, &formula)? {
            LtlVerdict::Holds => true,
            LtlVerdict::Fails(l) => {
                lasso = Some(l);
                false
            }
        },
        LogicClass::CtlStar => check_ctl_star(&graph, &formula)?,
        LogicClass::MuCalc => {
            let v = check_mu(&graph, &formula)?;
            game_states = Some(v.game_states);
            v.holds
        }
    };
    let cex = lasso.map(|l| {
        let items = |v: &[(usize, std::sync::Arc<str>)]| -> Vec<serde_json::Value> {
            v.iter()
                .map(|(s, label)| {
                    let label = if &**label == crate::STUTTER { "deadlock" } else { label };
                    json!({ "state": graph.show_state(*s), "action": label })
                })
                .collect()
        };
        (json!({ "prefix": items(&l.prefix), "cycle": items(&l.cycle) }), l.render(&graph))
    });
    report(a, out, holds, graph.len(), game_states, cex)?;
    Ok(if holds { 0 } else { 1 })
}

fn report(
    a: &CheckArgs,
    out: &mut dyn Write,
    holds: bool,
    states: usize,
    game_states: Option<usize>,
    cex: Option<(serde_json::Value, String)>,
) -> Result<()> {
    match a.format {
        Format::Json => {
            let mut v = json!({ "satisfied": holds, "states": states });
            if let Some(g) = game_states {
                v["gameStates"] = json!(g);
            }
            if let (true, Some((c, _))) = (a.counterexample, &cex) {
                v["counterexample"] = c.clone();
            }
            writeln!(out, "{v}").map_err(io)
        }
        Format::Text => {
            let verdict = if holds { "satisfied" } else { "not satisfied" };
            let games = game_states.map(|g| format!(", {g} game states")).unwrap_or_default();
            writeln!(out, "The property is {verdict} in the initial state ({states} system states{games}).")
                .map_err(io)?;
            if let (true, Some((_, text))) = (a.counterexample, &cex) {
                writeln!(out, "{text}").map_err(io)?;
            }
            Ok(())
        }
    }
}

fn graph(a: &GraphArgs, out: &mut dyn Write) -> Result<()> {
    let (module, t) = load(&a.common)?;
    let (purge, merge) = resolve_options(LogicClass::Ltl, a.purge_fails, a.merge_states);
    let g = build(&module, &t, a.strategy.as_deref(), purge, merge, a.common.budget)?;
    let props = a.props.iter().map(|p| module.parse_term(p)).collect::<Result<Vec<_>>>()?;
    out.write_all(to_dot(&g, &props)?.as_bytes()).map_err(io)
}

fn rewrite(a: &SrewriteArgs, out: &mut dyn Write) -> Result<()> {
    let (module, t) = load(&a.common)?;
    let strat = module.parse_strategy(&a.strategy)?;
    let results = srewrite(&module, &t, &strat, a.max, a.common.budget)?;
    for (k, r) in results.iter().enumerate() {
        let sort = module.sig.sort_name(module.sig.sort_of(r));
        writeln!(out, "Solution {}\nresult {sort}: {}\n", k + 1, module.show(r)).map_err(io)?;
    }
    writeln!(out, "No more solutions.").map_err(io)
}
