//! Results of rewriting a term with a strategy.

use stratmc::strategy::{srewrite, DEFAULT_STATE_BUDGET};
use stratmc::Module;

fn main() -> stratmc::Result<()> {
    let m = Module::from_source(include_str!("../specs/vending.spec"), None)?;
    let t = m.parse_ground("e e e [empty]")?;
    for text in ["put1 ; apple", "put1 * ; (apple | cake)", "put1 ! ; cake !", "not(cake) ; put1"] {
        let s = m.parse_strategy(text)?;
        let results = srewrite(&m, &t, &s, None, DEFAULT_STATE_BUDGET)?;
        let shown: Vec<String> = results.iter().map(|r| m.show(r)).collect();
        println!("{text:<24} {}", if shown.is_empty() { "no solutions".into() } else { shown.join(", ") });
    }
    Ok(())
}
