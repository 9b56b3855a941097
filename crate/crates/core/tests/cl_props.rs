use arck_core::cl::{
    apply_flip, legal_flips, solve_cl, terminal_outcome, validate_instance, ClEdge, ClInstance, ClOutcome,
    ClVariant,
};
use arck_core::Player;
use std::collections::HashMap;

use proptest::prelude::*;

mod common;
use common::cl::{instance, oracle, score};

/// The same recursion, memoised on the raw orientation with no symmetry
/// reduction.
fn memo_oracle(inst: &ClInstance, memo: &mut HashMap<(Vec<bool>, Player), ClOutcome>) -> (ClOutcome, Option<usize>) {
    if let Some(o) = terminal_outcome(inst) {
        return (o, None);
    }
    let me = inst.to_move;
    let mut best: Option<(ClOutcome, usize)> = None;
    for e in legal_flips(inst) {
        let (next, end) = apply_flip(inst, e).unwrap();
        let o = end.unwrap_or_else(|| {
            let key = (next.edges.iter().map(|x| x.flipped).collect(), next.to_move);
            if let Some(&o) = memo.get(&key) {
                return o;
            }
            let o = memo_oracle(&next, memo).0;
            memo.insert(key, o);
            o
        });
        if best.is_none_or(|(b, _)| score(o, me) > score(b, me)) {
            best = Some((o, e));
        }
    }
    let (o, e) = best.unwrap();
    (o, Some(e))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn solver_matches_oracle(inst in instance()) {
        prop_assert!(validate_instance(&inst).is_valid(), "{:?}", validate_instance(&inst));
        let r = solve_cl(&inst).unwrap();
        let (o, first) = oracle(&inst);
        prop_assert_eq!(r.outcome, o);
        prop_assert_eq!(r.principal_line.first().copied(), first);
        if inst.variant != ClVariant::Standard {
            prop_assert_ne!(r.outcome, ClOutcome::Draw);
        }
    }

    #[test]
    fn principal_line_replays(inst in instance()) {
        let r = solve_cl(&inst).unwrap();
        let mut cur = inst.clone();
        let mut end = terminal_outcome(&cur);
        for (i, &e) in r.principal_line.iter().enumerate() {
            prop_assert!(end.is_none());
            let (next, o) = apply_flip(&cur, e).unwrap();
            for v in &next.vertices {
                prop_assert!(v.terminal || next.in_weight(v.id) >= 2);
            }
            cur = next;
            end = o;
            prop_assert!(i < inst.edges.len());
        }
        prop_assert_eq!(end, Some(r.outcome));
    }
}

#[test]
fn goal_beats_opponent_stuck() {
    // Blue's goal flip would also leave Red stuck (a draw in standard play),
    // but the goal ends the game first.
    let inst = ClInstance::from_edges(
        ClVariant::Standard,
        Player::Blue,
        vec![ClEdge::new(0, 0, 1, Player::Blue, 2).goal(Player::Blue), ClEdge::new(1, 2, 3, Player::Red, 2).goal(Player::Red), ClEdge::new(2, 4, 3, Player::Red, 2)],
        &[0, 1, 2, 4],
    );
    let mut inst = inst;
    // Red's goal needs in-weight 4 at 3 to flip; drop the helper so Red is stuck.
    inst.edges.pop();
    inst.vertices.retain(|v| v.id != 4);
    let (_, end) = apply_flip(&inst, 0).unwrap();
    assert_eq!(end, Some(ClOutcome::BlueWin));
}

#[test]
fn micro_misere_variable() {
    // Variable vertex 0: blue output to terminal 1 (weight 2), red tail from 2.
    // Blue tail chain: 1 -> 3 blue, Red: 4 -> 5 red.
    let inst = ClInstance::from_edges(
        ClVariant::MiserePlay,
        Player::Blue,
        vec![
            ClEdge::new(0, 1, 0, Player::Blue, 2),
            ClEdge::new(1, 2, 0, Player::Red, 2),
            ClEdge::new(2, 3, 6, Player::Blue, 2),
            ClEdge::new(3, 4, 6, Player::Blue, 2),
            ClEdge::new(4, 5, 7, Player::Red, 2),
            ClEdge::new(5, 8, 7, Player::Red, 2),
        ],
        &[1, 2, 3, 4, 5, 8],
    );
    assert!(validate_instance(&inst).is_valid());
    let r = solve_cl(&inst).unwrap();
    assert_eq!(r.outcome, oracle(&inst).0);
}

/// Copies of one small component, so isomorphic parts share memo entries.
fn repeated() -> impl Strategy<Value = ClInstance> {
    let edge = (0usize..3, 0usize..3, any::<bool>(), 1u8..=2);
    (instance(), proptest::collection::vec(edge, 1..=3), 2usize..=3, any::<u8>()).prop_map(
        |(mut inst, raw, copies, flipped_mask)| {
            let base = inst.vertices.iter().map(|v| v.id + 1).max().unwrap_or(0);
            let raw: Vec<_> = raw.into_iter().filter(|&(a, b, _, _)| a != b).collect();
            let mut terminals = Vec::new();
            for c in 0..copies {
                let off = base + 3 * c;
                for (j, &(a, b, blue, w)) in raw.iter().enumerate() {
                    let id = inst.edges.len();
                    let mut e = ClEdge::new(id, off + a, off + b, if blue { Player::Blue } else { Player::Red }, w);
                    // Pre-flipped arcs make some copies differ.
                    e.flipped = c == 0 && flipped_mask >> j & 1 == 1;
                    inst.edges.push(e);
                }
                terminals.extend(off..off + 3);
            }
            for v in terminals {
                if inst.edges.iter().any(|e| e.tail == v || e.head == v) {
                    inst.vertices.push(arck_core::cl::ClVertex { id: v, terminal: true });
                }
            }
            inst
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn folding_isomorphic_components_is_exact(inst in repeated()) {
        prop_assert!(validate_instance(&inst).is_valid(), "{:?}", validate_instance(&inst));
        let r = solve_cl(&inst).unwrap();
        let (o, first) = memo_oracle(&inst, &mut HashMap::new());
        prop_assert_eq!(r.outcome, o);
        prop_assert_eq!(r.principal_line.first().copied(), first);
    }
}
