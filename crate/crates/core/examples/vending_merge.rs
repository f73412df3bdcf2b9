//! Two strategies with the same executions but different branching. They
//! only agree on a branching-time property once successors sharing a term
//! are merged.

use stratmc::kripke::{build_controlled, BuildOptions, Merge};
use stratmc::ltl::check_ctl;
use stratmc::Module;

fn main() -> stratmc::Result<()> {
    let m = Module::from_source(include_str!("../specs/vending.spec"), None)?;
    let t = m.parse_ground("initial")?;
    let (f, _) = m.parse_formula("A O E <> hasCake")?;
    for strategy in ["put1 ; apple | put1 ; put1 ; cake", "put1 ; (apple | put1 ; cake)"] {
        let s = m.parse_strategy(strategy)?;
        for merge in [Merge::No, Merge::State] {
            let opts = BuildOptions { purge_fails: true, merge, ..Default::default() };
            let g = build_controlled(&m, &t, &s, opts)?;
            println!("{strategy:<36} merge={merge:?}: {} ({} states)", check_ctl(&g, &f)?, g.len());
        }
    }
    Ok(())
}
