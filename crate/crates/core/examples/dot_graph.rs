//! Prints the purged graph of the safe river strategy in DOT format, with
//! the goal proposition in the node labels.

use stratmc::kripke::{build_controlled, to_dot, BuildOptions};
use stratmc::Module;

fn main() -> stratmc::Result<()> {
    let m = Module::from_source(include_str!("../specs/river.spec"), None)?;
    let t = m.parse_ground("initial")?;
    let opts = BuildOptions { purge_fails: true, ..Default::default() };
    let g = build_controlled(&m, &t, &m.parse_strategy("safe")?, opts)?;
    print!("{}", to_dot(&g, &[m.parse_term("goal")?])?);
    Ok(())
}
