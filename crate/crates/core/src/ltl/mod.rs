//! Linear and branching-time checking: LTL through Büchi automata, CTL by
//! fixpoint labeling, and CTL* by reduction to LTL emptiness.

mod buchi;
mod ctl;
mod ctlstar;
mod ndfs;

pub use buchi::{ltl_to_buchi, Buchi, BuchiNode, Ltl};
pub use ctl::{check_ctl, ctl_states};
pub use ctlstar::{check_ctl_star, ctl_star_states};
pub use ndfs::{check_ltl, Lasso, LtlVerdict};
