use arck_core::cl::{apply_flip, legal_flips, terminal_outcome, ClEdge, ClInstance, ClOutcome, ClVariant};
use arck_core::Player;
use proptest::prelude::*;

/// Score for `p`: 2 win, 1 draw, 0 loss.
pub fn score(o: ClOutcome, p: Player) -> u8 {
    match o {
        ClOutcome::Draw => 1,
        o if o == ClOutcome::win_for(p) => 2,
        _ => 0,
    }
}

/// Plain recursion through the public move rules. Returns the outcome and
/// the lowest-id optimal first flip.
pub fn oracle(inst: &ClInstance) -> (ClOutcome, Option<usize>) {
    if let Some(o) = terminal_outcome(inst) {
        return (o, None);
    }
    let me = inst.to_move;
    let mut best: Option<(ClOutcome, usize)> = None;
    for e in legal_flips(inst) {
        let (next, end) = apply_flip(inst, e).unwrap();
        let o = end.unwrap_or_else(|| oracle(&next).0);
        if best.is_none_or(|(b, _)| score(o, me) > score(b, me)) {
            best = Some((o, e));
        }
    }
    let (o, e) = best.unwrap();
    (o, Some(e))
}

pub fn instance() -> impl Strategy<Value = ClInstance> {
    let variant = prop_oneof![
        Just(ClVariant::Standard),
        Just(ClVariant::BuilderBlocker),
        Just(ClVariant::NormalPlay),
        Just(ClVariant::MiserePlay)
    ];
    let edge = (0usize..5, 0usize..5, any::<bool>(), 1u8..=2);
    (
        variant,
        any::<bool>(),
        proptest::collection::vec(edge, 2..=10),
        proptest::collection::vec(any::<bool>(), 5),
        any::<proptest::sample::Index>(),
        any::<proptest::sample::Index>(),
    )
        .prop_map(|(variant, blue_first, raw, term, gi, ri)| {
            let mut edges: Vec<ClEdge> = raw
                .into_iter()
                .filter(|&(a, b, _, _)| a != b)
                .enumerate()
                .map(|(i, (a, b, blue, w))| ClEdge::new(i, a, b, if blue { Player::Blue } else { Player::Red }, w))
                .collect();
            let n = edges.len();
            // Guarantee both colours exist so goals can be placed.
            edges.push(ClEdge::new(n, 5, 6, Player::Blue, 2));
            edges.push(ClEdge::new(n + 1, 7, 6, Player::Red, 2));
            let blues: Vec<usize> = edges.iter().filter(|e| e.colour == Player::Blue).map(|e| e.id).collect();
            let reds: Vec<usize> = edges.iter().filter(|e| e.colour == Player::Red).map(|e| e.id).collect();
            if variant != ClVariant::NormalPlay && variant != ClVariant::MiserePlay {
                let g = blues[gi.index(blues.len())];
                edges[g].goal_for = Some(Player::Blue);
            }
            if variant == ClVariant::Standard {
                let g = reds[ri.index(reds.len())];
                edges[g].goal_for = Some(Player::Red);
            }
            let mut inst = ClInstance::from_edges(
                variant,
                if blue_first { Player::Blue } else { Player::Red },
                edges,
                &[5, 7],
            );
            for v in &mut inst.vertices {
                let low = inst.edges.iter().filter(|e| e.head == v.id).map(|e| e.weight as u32).sum::<u32>() < 2;
                if low || (v.id < 5 && term[v.id]) {
                    v.terminal = true;
                }
            }
            inst
        })
}
