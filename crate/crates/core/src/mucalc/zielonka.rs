use super::game::{ParityGame, Player};

/// Winner of every vertex, by Zielonka's recursive algorithm.
pub fn zielonka(g: &ParityGame) -> Vec<Player> {
    let n = g.len();
    let mut preds = vec![Vec::new(); n];
    for (v, ws) in g.edges.iter().enumerate() {
        for &w in ws {
            preds[w].push(v);
        }
    }
    let even = solve(g, &preds, &vec![true; n]);
    even.into_iter().map(|e| if e { Player::Even } else { Player::Odd }).collect()
}

/// Attractor of `target` for `player` inside the subgame `active`.
fn attractor(g: &ParityGame, preds: &[Vec<usize>], active: &[bool], target: &[bool], player: Player) -> Vec<bool> {
    let mut set: Vec<bool> = target.to_vec();
    let mut escapes: Vec<usize> = (0..g.len()).map(|v| g.edges[v].iter().filter(|&&w| active[w]).count()).collect();
    let mut stack: Vec<usize> = (0..g.len()).filter(|&v| set[v]).collect();
    while let Some(w) = stack.pop() {
        for &v in &preds[w] {
            if !active[v] || set[v] {
                continue;
            }
            let pulled = if g.owner[v] == player {
                true
            } else {
                escapes[v] -= 1;
                escapes[v] == 0
            };
            if pulled {
                set[v] = true;
                stack.push(v);
            }
        }
    }
    set
}

/// Even's winning region of the subgame `active`, which must be a trap for
/// both players.
fn solve(g: &ParityGame, preds: &[Vec<usize>], active: &[bool]) -> Vec<bool> {
    let n = g.len();
    let Some(d) = (0..n).filter(|&v| active[v]).map(|v| g.priority[v]).max() else {
        return vec![false; n];
    };
    let p = Player::of_priority(d);
    let top: Vec<bool> = (0..n).map(|v| active[v] && g.priority[v] == d).collect();
    let a = attractor(g, preds, active, &top, p);
    let rest: Vec<bool> = (0..n).map(|v| active[v] && !a[v]).collect();
    let sub_even = solve(g, preds, &rest);
    let opp_wins: Vec<bool> = (0..n).map(|v| rest[v] && (sub_even[v] == (p == Player::Odd))).collect();
    if !opp_wins.iter().any(|&x| x) {
        return (0..n).map(|v| active[v] && p == Player::Even).collect();
    }
    let b = attractor(g, preds, active, &opp_wins, p.opponent());
    let rest: Vec<bool> = (0..n).map(|v| active[v] && !b[v]).collect();
    let sub_even = solve(g, preds, &rest);
    (0..n).map(|v| if b[v] { p.opponent() == Player::Even } else { active[v] && sub_even[v] }).collect()
}
