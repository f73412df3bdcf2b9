//! Bisimilarity of strategy-controlled graphs, with and without merging.

use stratmc::kripke::{bisimilar, build_controlled, BuildOptions, Merge};
use stratmc::Module;

fn main() -> stratmc::Result<()> {
    let m = Module::from_source(include_str!("../specs/vending.spec"), None)?;
    let t = m.parse_ground("initial")?;
    let props = [m.parse_term("hasCake")?];
    let alpha = m.parse_strategy("put1 ; apple | put1 ; put1 ; cake")?;
    let beta = m.parse_strategy("put1 ; (apple | put1 ; cake)")?;
    for merge in [Merge::No, Merge::State, Merge::Edge] {
        let opts = BuildOptions { purge_fails: true, merge, ..Default::default() };
        let a = build_controlled(&m, &t, &alpha, opts)?;
        let b = build_controlled(&m, &t, &beta, opts)?;
        println!(
            "merge={merge:?}: {} and {} states, bisimilar: {}, with actions: {}",
            a.len(),
            b.len(),
            bisimilar(&a, &b, &props, false)?,
            bisimilar(&a, &b, &props, true)?
        );
    }
    Ok(())
}
