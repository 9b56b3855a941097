use std::collections::BTreeSet;

use arck_core::arck::Convention;
use arck_core::graph::{build_graph, ColouredGraph, EdgeColour, Lattice, RawEdge, RawVertex};
use arck_core::Player;
use proptest::prelude::*;

/// Plain recursion over graph values, no tables, no bitsets.
pub fn oracle_wins(g: &ColouredGraph, conv: Convention, mover: Player) -> bool {
    let moves: Vec<_> = g
        .edges()
        .iter()
        .filter(|e| e.colour == EdgeColour::Either || e.colour == mover.colour())
        .collect();
    if moves.is_empty() {
        return conv == Convention::Misere;
    }
    moves.iter().any(|e| {
        let gone: BTreeSet<_> = [e.u, e.v].into_iter().collect();
        !oracle_wins(&g.remove_vertices(&gone), conv, mover.opponent())
    })
}

pub fn oracle_best(g: &ColouredGraph, conv: Convention, mover: Player) -> Option<usize> {
    let moves: Vec<_> = g
        .edges()
        .iter()
        .filter(|e| e.colour == EdgeColour::Either || e.colour == mover.colour())
        .collect();
    let winning = moves.iter().find(|e| {
        let gone: BTreeSet<_> = [e.u, e.v].into_iter().collect();
        !oracle_wins(&g.remove_vertices(&gone), conv, mover.opponent())
    });
    winning.or(moves.first()).map(|e| e.id)
}

pub fn random_graph(max_edges: usize, either: bool) -> impl Strategy<Value = ColouredGraph> {
    (2usize..=7).prop_flat_map(move |n| {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
        let ncol = if either { 3u8 } else { 2 };
        (proptest::sample::subsequence(pairs.clone(), 0..=max_edges.min(pairs.len())), proptest::collection::vec(0..ncol, max_edges))
            .prop_map(move |(chosen, cols)| {
                let vs: Vec<_> = (0..n as i64).map(|id| RawVertex { id, coord: None }).collect();
                let es: Vec<_> = chosen
                    .iter()
                    .zip(cols)
                    .enumerate()
                    .map(|(i, (&(u, v), c))| {
                        let colour = [EdgeColour::Blue, EdgeColour::Red, EdgeColour::Either][c as usize];
                        RawEdge::new(i as i64, u as i64, v as i64, colour)
                    })
                    .collect();
                build_graph(&vs, &es, Lattice::None).unwrap()
            })
    })
}
