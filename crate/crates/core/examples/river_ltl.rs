//! LTL properties of the river crossing under two strategies, with the
//! counterexample printed when a property fails.

use stratmc::kripke::{build_controlled, build_uncontrolled, BuildOptions, DEFAULT_GRAPH_BUDGET};
use stratmc::ltl::{check_ltl, LtlVerdict};
use stratmc::Module;

fn main() -> stratmc::Result<()> {
    let m = Module::from_source(include_str!("../specs/river.spec"), None)?;
    let t = m.parse_ground("initial")?;

    let cases =
        [(Some("eagerEating"), "[] (risky -> O death)"), (Some("safe"), "<> goal"), (None, "[] (death -> [] ~ goal)")];
    for (strategy, text) in cases {
        let graph = match strategy {
            Some(s) => build_controlled(&m, &t, &m.parse_strategy(s)?, BuildOptions::default())?,
            None => build_uncontrolled(&m.sig, &t, DEFAULT_GRAPH_BUDGET)?,
        };
        let (f, _) = m.parse_formula(text)?;
        print!("{text} under {}: ", strategy.unwrap_or("no strategy"));
        match check_ltl(&graph, &f)? {
            LtlVerdict::Holds => println!("holds ({} states)", graph.len()),
            LtlVerdict::Fails(lasso) => println!("fails\n{}", lasso.render(&graph)),
        }
    }
    Ok(())
}
