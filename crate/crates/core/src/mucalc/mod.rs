//! Modal μ-calculus with action specifications, decided by reduction to a
//! parity game solved with Zielonka's algorithm.

mod game;
mod pnf;
mod zielonka;

pub use game::{build_parity_game, ParityGame, Player};
pub use pnf::positive_normal_form;
pub use zielonka::zielonka;

use crate::error::Result;
use crate::formula::Formula;
use crate::kripke::KripkeGraph;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MuVerdict {
    pub holds: bool,
    /// Number of vertices of the evaluation game.
    pub game_states: usize,
}

/// Whether the initial state satisfies the closed formula `f`.
pub fn check_mu(graph: &KripkeGraph, f: &Formula) -> Result<MuVerdict> {
    let f = positive_normal_form(f)?;
    let (game, root) = build_parity_game(graph, &f)?;
    let winners = zielonka(&game);
    Ok(MuVerdict { holds: winners[root] == Player::Even, game_states: game.len() })
}
