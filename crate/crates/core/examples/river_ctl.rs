//! CTL and CTL* on the purged and merged river graphs. Whether the goal
//! stays reachable depends on the strategy.

use stratmc::kripke::{build_controlled, build_uncontrolled, BuildOptions, KripkeGraph, Merge, DEFAULT_GRAPH_BUDGET};
use stratmc::ltl::{check_ctl, check_ctl_star};
use stratmc::Module;

fn main() -> stratmc::Result<()> {
    let m = Module::from_source(include_str!("../specs/river.spec"), None)?;
    let t = m.parse_ground("initial")?;
    let opts = BuildOptions { purge_fails: true, merge: Merge::State, ..Default::default() };

    let mut graphs: Vec<(&str, KripkeGraph)> = Vec::new();
    for s in ["safe", "eagerEating"] {
        graphs.push((s, build_controlled(&m, &t, &m.parse_strategy(s)?, opts)?));
    }
    graphs.push(("uncontrolled", build_uncontrolled(&m.sig, &t, DEFAULT_GRAPH_BUDGET)?));

    let ctl = m.parse_formula("A [] E <> goal")?.0;
    let star = m.parse_formula("E ([] ~ goal /\\ [] ~ death)")?.0;
    for (name, g) in &graphs {
        println!(
            "{name:>12}: {} states, A [] E <> goal = {}, E ([] ~ goal /\\ [] ~ death) = {}",
            g.len(),
            check_ctl(g, &ctl)?,
            check_ctl_star(g, &star)?
        );
    }
    Ok(())
}
