//! Modal mu-calculus on the river: which moves are risky, and whether the
//! goal stays reachable after taking the goat across.

use stratmc::kripke::{build_controlled, build_uncontrolled, BuildOptions, Merge, DEFAULT_GRAPH_BUDGET};
use stratmc::mucalc::check_mu;
use stratmc::Module;

fn main() -> stratmc::Result<()> {
    let m = Module::from_source(include_str!("../specs/river.spec"), None)?;
    let t = m.parse_ground("initial")?;
    let free = build_uncontrolled(&m.sig, &t, DEFAULT_GRAPH_BUDGET)?;
    let opts = BuildOptions { purge_fails: true, merge: Merge::Edge, ..Default::default() };
    let eager = build_controlled(&m, &t, &m.parse_strategy("eagerEating")?, opts)?;

    let formulas = ["[ alone wolf cabbage ] risky /\\ < goat > ~ risky", "[ goat ] (mu Z . goal \\/ < ~ goat > Z)"];
    for text in formulas {
        let (f, _) = m.parse_formula(text)?;
        for (name, g) in [("uncontrolled", &free), ("eagerEating", &eager)] {
            let v = check_mu(g, &f)?;
            println!("{text}\n  {name}: {} ({} game states)", v.holds, v.game_states);
        }
    }
    Ok(())
}
