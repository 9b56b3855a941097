#![allow(dead_code)]

pub mod arck;
pub mod cl;

use arck_core::cl::{legal_flips, ClEdgeId, ClInstance};
use arck_core::Player;

/// Most flips `p` can make among `within` if the opponent never moves and
/// every other arc stays put. Exhaustive.
pub fn solo_flips(inst: &ClInstance, p: Player, within: &[ClEdgeId]) -> usize {
    let mut cur = inst.clone();
    cur.to_move = p;
    let mut best = 0;
    for e in legal_flips(&cur).into_iter().filter(|e| within.contains(e)) {
        let next = forced(&cur, e);
        best = best.max(1 + solo_flips(&next, p, within));
    }
    best
}

/// Reverses `e` without checking legality.
pub fn forced(inst: &ClInstance, e: ClEdgeId) -> ClInstance {
    let mut next = inst.clone();
    let arc = next.edges.iter_mut().find(|x| x.id == e).expect("edge exists");
    std::mem::swap(&mut arc.tail, &mut arc.head);
    arc.flipped = true;
    next
}
