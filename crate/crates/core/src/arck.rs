//! Partizan Arc Kayles under normal or misère play.
//!
//! A move picks an edge of the mover's colour (or an Either edge) and deletes
//! both endpoints with every incident edge. Under misère play a player who
//! starts their turn with no legal move wins.

use std::cell::RefCell;
use std::collections::BTreeSet;
use std::sync::atomic::{AtomicU64, Ordering};

use dashmap::DashMap;
use rayon::prelude::*;
use rustc_hash::{FxBuildHasher, FxHashMap};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{json::parse_error, ColouredGraph, EdgeColour, EdgeId, GraphError, GraphJson};
use crate::bits::Bits;
use crate::Player;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Convention {
    Normal,
    Misere,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArcKPosition {
    pub graph: ColouredGraph,
    pub convention: Convention,
    pub to_move: Player,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolveResult {
    pub winner: Player,
    pub principal_move: Option<EdgeId>,
    /// Positions expanded by the search (memo hits are not counted).
    pub nodes_searched: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IllegalReason {
    WrongColour,
    Absent,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArcKError {
    #[error("illegal move on edge {edge}: {reason:?}")]
    IllegalMove { edge: EdgeId, reason: IllegalReason },
    #[error("search budget of {0} nodes exceeded")]
    BudgetExceeded(u64),
    #[error("{0} edges is beyond the solver's capacity")]
    TooManyEdges(usize),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SolverConfig {
    pub node_budget: u64,
    /// Evaluate the root's children on the rayon pool with a shared table.
    pub parallel: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig { node_budget: 50_000_000, parallel: false }
    }
}

fn playable(colour: EdgeColour, p: Player) -> bool {
    colour == EdgeColour::Either || colour == p.colour()
}

impl ArcKPosition {
    pub fn new(graph: ColouredGraph, convention: Convention, to_move: Player) -> Self {
        ArcKPosition { graph, convention, to_move }
    }
}

pub fn legal_moves(pos: &ArcKPosition) -> Vec<EdgeId> {
    pos.graph.edges().iter().filter(|e| playable(e.colour, pos.to_move)).map(|e| e.id).collect()
}

pub fn apply_move(pos: &ArcKPosition, edge: EdgeId) -> Result<ArcKPosition, ArcKError> {
    let e = pos.graph.edge(edge).ok_or(ArcKError::IllegalMove { edge, reason: IllegalReason::Absent })?;
    if !playable(e.colour, pos.to_move) {
        return Err(ArcKError::IllegalMove { edge, reason: IllegalReason::WrongColour });
    }
    let gone: BTreeSet<_> = [e.u, e.v].into_iter().collect();
    Ok(ArcKPosition {
        graph: pos.graph.remove_vertices(&gone),
        convention: pos.convention,
        to_move: pos.to_move.opponent(),
    })
}

pub fn solve(pos: &ArcKPosition) -> Result<SolveResult, ArcKError> {
    solve_with(pos, &SolverConfig::default())
}

/// Lowest-id move that keeps the solved outcome for the mover; `None` when
/// the mover has no move.
pub fn best_move(pos: &ArcKPosition) -> Result<Option<EdgeId>, ArcKError> {
    Ok(solve(pos)?.principal_move)
}

pub fn solve_with(pos: &ArcKPosition, config: &SolverConfig) -> Result<SolveResult, ArcKError> {
    let m = pos.graph.edge_count();
    match m.div_ceil(64) {
        0 | 1 => run::<1>(pos, config),
        2 => run::<2>(pos, config),
        3 | 4 => run::<4>(pos, config),
        5..=8 => run::<8>(pos, config),
        9..=16 => run::<16>(pos, config),
        17..=64 => run::<64>(pos, config),
        _ => Err(ArcKError::TooManyEdges(m)),
    }
}

trait Memo<const W: usize> {
    fn get(&self, key: &(Bits<W>, Player)) -> Option<bool>;
    fn put(&self, key: (Bits<W>, Player), value: bool);
}

struct LocalMemo<const W: usize>(RefCell<FxHashMap<(Bits<W>, Player), bool>>);

impl<const W: usize> Memo<W> for LocalMemo<W> {
    fn get(&self, key: &(Bits<W>, Player)) -> Option<bool> {
        self.0.borrow().get(key).copied()
    }
    fn put(&self, key: (Bits<W>, Player), value: bool) {
        self.0.borrow_mut().insert(key, value);
    }
}

impl<const W: usize> Memo<W> for DashMap<(Bits<W>, Player), bool, FxBuildHasher> {
    fn get(&self, key: &(Bits<W>, Player)) -> Option<bool> {
        DashMap::get(self, key).map(|v| *v)
    }
    fn put(&self, key: (Bits<W>, Player), value: bool) {
        self.insert(key, value);
    }
}

struct Search<'a, const W: usize, M: Memo<W>> {
    kill: Vec<Bits<W>>,
    legal: [Bits<W>; 2],
    convention: Convention,
    memo: &'a M,
    nodes: &'a AtomicU64,
    budget: u64,
}

fn side(p: Player) -> usize {
    match p {
        Player::Blue => 0,
        Player::Red => 1,
    }
}

impl<const W: usize, M: Memo<W>> Search<'_, W, M> {
    /// Does `mover` win from `state`?
    fn wins(&self, state: Bits<W>, mover: Player) -> Result<bool, ArcKError> {
        let moves = state.and(&self.legal[side(mover)]);
        if moves.is_zero() {
            return Ok(self.convention == Convention::Misere);
        }
        let key = (state, mover);
        if let Some(v) = self.memo.get(&key) {
            return Ok(v);
        }
        if self.nodes.fetch_add(1, Ordering::Relaxed) >= self.budget {
            return Err(ArcKError::BudgetExceeded(self.budget));
        }
        let mut result = false;
        for e in moves.ones() {
            if !self.wins(state.and_not(&self.kill[e]), mover.opponent())? {
                result = true;
                break;
            }
        }
        self.memo.put(key, result);
        Ok(result)
    }
}

fn run<const W: usize>(pos: &ArcKPosition, config: &SolverConfig) -> Result<SolveResult, ArcKError> {
    let edges = pos.graph.edges();
    let mut kill = vec![Bits::<W>::zero(); edges.len()];
    let mut legal = [Bits::<W>::zero(); 2];
    let mut all = Bits::<W>::zero();
    for (i, e) in edges.iter().enumerate() {
        all.set(i);
        for (j, f) in edges.iter().enumerate() {
            if f.touches(e.u) || f.touches(e.v) {
                kill[i].set(j);
            }
        }
        for p in [Player::Blue, Player::Red] {
            if playable(e.colour, p) {
                legal[side(p)].set(i);
            }
        }
    }
    let mover = pos.to_move;
    let root_moves: Vec<usize> = all.and(&legal[side(mover)]).ones().collect();
    let nodes = AtomicU64::new(0);
    let loser = |won: bool| if won { mover } else { mover.opponent() };

    if root_moves.is_empty() {
        let won = pos.convention == Convention::Misere;
        return Ok(SolveResult { winner: loser(won), principal_move: None, nodes_searched: 0 });
    }

    let winning_child = if config.parallel {
        let memo: DashMap<(Bits<W>, Player), bool, FxBuildHasher> = DashMap::with_hasher(FxBuildHasher);
        let search = Search { kill, legal, convention: pos.convention, memo: &memo, nodes: &nodes, budget: config.node_budget };
        nodes.fetch_add(1, Ordering::Relaxed);
        let outcomes: Vec<Result<bool, ArcKError>> = root_moves
            .par_iter()
            .map(|&e| search.wins(all.and_not(&search.kill[e]), mover.opponent()))
            .collect();
        let mut found = None;
        for (&e, r) in root_moves.iter().zip(outcomes) {
            if !r? && found.is_none() {
                found = Some(e);
            }
        }
        found
    } else {
        let memo = LocalMemo::<W>(RefCell::new(FxHashMap::default()));
        let search = Search { kill, legal, convention: pos.convention, memo: &memo, nodes: &nodes, budget: config.node_budget };
        nodes.fetch_add(1, Ordering::Relaxed);
        let mut found = None;
        for &e in &root_moves {
            if !search.wins(all.and_not(&search.kill[e]), mover.opponent())? {
                found = Some(e);
                break;
            }
        }
        found
    };

    let principal = winning_child.unwrap_or(root_moves[0]);
    Ok(SolveResult {
        winner: loser(winning_child.is_some()),
        principal_move: Some(edges[principal].id),
        nodes_searched: nodes.load(Ordering::Relaxed),
    })
}

/// JSON form: the graph document plus `convention` and `to_move`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PositionJson {
    #[serde(flatten)]
    pub graph: GraphJson,
    pub convention: Convention,
    pub to_move: Player,
}

pub fn encode_position(pos: &ArcKPosition) -> String {
    let j = PositionJson { graph: GraphJson::from(&pos.graph), convention: pos.convention, to_move: pos.to_move };
    serde_json::to_string_pretty(&j).expect("position serialisation cannot fail")
}

pub fn decode_position(text: &str) -> Result<ArcKPosition, GraphError> {
    let j: PositionJson = serde_json::from_str(text).map_err(parse_error)?;
    Ok(ArcKPosition { graph: ColouredGraph::try_from(j.graph)?, convention: j.convention, to_move: j.to_move })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_graph, Lattice, RawEdge, RawVertex};

    fn path(colours: &[EdgeColour]) -> ColouredGraph {
        let vs: Vec<_> = (0..=colours.len() as i64).map(|id| RawVertex { id, coord: None }).collect();
        let es: Vec<_> =
            colours.iter().enumerate().map(|(i, &c)| RawEdge::new(i as i64, i as i64, i as i64 + 1, c)).collect();
        build_graph(&vs, &es, Lattice::None).unwrap()
    }

    use EdgeColour::{Blue as B, Either as E, Red as R};

    #[test]
    fn legal_move_filtering() {
        let pos = ArcKPosition::new(path(&[B, B, R]), Convention::Misere, Player::Blue);
        assert_eq!(legal_moves(&pos), vec![0, 1]);
        let pos = ArcKPosition::new(ColouredGraph::empty(), Convention::Misere, Player::Red);
        assert!(legal_moves(&pos).is_empty());
        let pos = ArcKPosition::new(path(&[E]), Convention::Misere, Player::Red);
        assert_eq!(legal_moves(&pos), vec![0]);
    }

    #[test]
    fn applying_moves() {
        let pos = ArcKPosition::new(path(&[B, R]), Convention::Misere, Player::Blue);
        let next = apply_move(&pos, 0).unwrap();
        assert_eq!((next.graph.vertex_count(), next.graph.edge_count()), (1, 0));
        assert_eq!(next.to_move, Player::Red);
        assert_eq!(
            apply_move(&pos, 1),
            Err(ArcKError::IllegalMove { edge: 1, reason: IllegalReason::WrongColour })
        );
        assert_eq!(apply_move(&pos, 7), Err(ArcKError::IllegalMove { edge: 7, reason: IllegalReason::Absent }));

        let brb = ArcKPosition::new(path(&[B, R, B]), Convention::Misere, Player::Blue);
        let next = apply_move(&brb, 0).unwrap();
        assert_eq!(next.graph.edges().iter().map(|e| (e.id, e.colour)).collect::<Vec<_>>(), vec![(2, B)]);
    }

    #[test]
    fn base_cases() {
        let empty = ArcKPosition::new(ColouredGraph::empty(), Convention::Misere, Player::Blue);
        assert_eq!(solve(&empty).unwrap().winner, Player::Blue);
        assert_eq!(best_move(&empty).unwrap(), None);
        let normal = ArcKPosition { convention: Convention::Normal, ..empty };
        assert_eq!(solve(&normal).unwrap().winner, Player::Red);

        let one = ArcKPosition::new(path(&[B]), Convention::Misere, Player::Blue);
        assert_eq!(solve(&one).unwrap().winner, Player::Red);
        let one_normal = ArcKPosition { convention: Convention::Normal, ..one };
        assert_eq!(solve(&one_normal).unwrap(), SolveResult { winner: Player::Blue, principal_move: Some(0), nodes_searched: 1 });
    }

    #[test]
    fn budget_is_enforced() {
        let pos = ArcKPosition::new(path(&[B, R, B, R, B, R, B, R, B]), Convention::Misere, Player::Blue);
        let tight = SolverConfig { node_budget: 2, parallel: false };
        assert_eq!(solve_with(&pos, &tight), Err(ArcKError::BudgetExceeded(2)));
    }

    #[test]
    fn json_round_trip() {
        let pos = ArcKPosition::new(path(&[B, R]), Convention::Normal, Player::Red);
        let text = encode_position(&pos);
        assert!(text.contains("\"to_move\": \"red\"") && text.contains("\"convention\": \"normal\""));
        assert_eq!(decode_position(&text).unwrap(), pos);
    }
}
