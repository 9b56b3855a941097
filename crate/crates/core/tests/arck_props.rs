use arck_core::arck::{apply_move, best_move, solve, solve_with, ArcKPosition, Convention, SolverConfig};
use arck_core::graph::{build_graph, ColouredGraph, EdgeColour, Lattice, RawEdge, RawVertex};
use arck_core::Player;
use proptest::prelude::*;

mod common;
use common::arck::{oracle_best, oracle_wins, random_graph};

fn path(colours: &[EdgeColour]) -> ColouredGraph {
    let vs: Vec<_> = (0..=colours.len() as i64).map(|id| RawVertex { id, coord: None }).collect();
    let es: Vec<_> =
        colours.iter().enumerate().map(|(i, &c)| RawEdge::new(i as i64, i as i64, i as i64 + 1, c)).collect();
    build_graph(&vs, &es, Lattice::None).unwrap()
}

fn conv() -> impl Strategy<Value = Convention> {
    prop_oneof![Just(Convention::Normal), Just(Convention::Misere)]
}

fn player() -> impl Strategy<Value = Player> {
    prop_oneof![Just(Player::Blue), Just(Player::Red)]
}

#[test]
fn brb_path_matches_oracle() {
    use EdgeColour::{Blue as B, Red as R};
    let g = path(&[B, R, B]);
    let pos = ArcKPosition::new(g.clone(), Convention::Misere, Player::Blue);
    let r = solve(&pos).unwrap();
    let want = if oracle_wins(&g, Convention::Misere, Player::Blue) { Player::Blue } else { Player::Red };
    assert_eq!(r.winner, want);
    assert_eq!(best_move(&pos).unwrap(), oracle_best(&g, Convention::Misere, Player::Blue));
}

#[test]
fn single_blue_edge_normal_best_move() {
    let pos = ArcKPosition::new(path(&[EdgeColour::Blue]), Convention::Normal, Player::Blue);
    assert_eq!(best_move(&pos).unwrap(), Some(0));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn solver_matches_oracle(g in random_graph(8, true), c in conv(), p in player()) {
        let pos = ArcKPosition::new(g.clone(), c, p);
        let r = solve(&pos).unwrap();
        let wins = oracle_wins(&g, c, p);
        prop_assert_eq!(r.winner, if wins { p } else { p.opponent() });
        prop_assert_eq!(r.principal_move, oracle_best(&g, c, p));
    }

    #[test]
    fn colour_swap_symmetry(g in random_graph(10, false), c in conv(), p in player()) {
        let a = solve(&ArcKPosition::new(g.clone(), c, p)).unwrap();
        let b = solve(&ArcKPosition::new(g.recoloured(), c, p.opponent())).unwrap();
        prop_assert_eq!(a.winner, b.winner.opponent());
    }

    #[test]
    fn parallel_agrees(g in random_graph(12, true), c in conv(), p in player()) {
        let pos = ArcKPosition::new(g, c, p);
        let a = solve(&pos).unwrap();
        let b = solve_with(&pos, &SolverConfig { parallel: true, ..SolverConfig::default() }).unwrap();
        prop_assert_eq!((a.winner, a.principal_move), (b.winner, b.principal_move));
        prop_assert_eq!(solve(&pos).unwrap(), a);
    }

    #[test]
    fn moves_shrink_the_graph(g in random_graph(10, true), p in player()) {
        let pos = ArcKPosition::new(g, Convention::Misere, p);
        for e in arck_core::arck::legal_moves(&pos) {
            let next = apply_move(&pos, e).unwrap();
            prop_assert_eq!(next.graph.vertex_count() + 2, pos.graph.vertex_count());
            prop_assert!(next.graph.edge_count() < pos.graph.edge_count());
        }
    }
}

#[test]
fn handles_thirty_edges() {
    // Alternating path of 30 edges: well past the size the naive oracle manages.
    let colours: Vec<_> = (0..30).map(|i| if i % 2 == 0 { EdgeColour::Blue } else { EdgeColour::Red }).collect();
    let pos = ArcKPosition::new(path(&colours), Convention::Misere, Player::Blue);
    let r = solve(&pos).unwrap();
    assert!(r.principal_move.is_some());
}
