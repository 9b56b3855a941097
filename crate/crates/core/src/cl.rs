//! Bounded two-player constraint logic and its goal-free variants.
//!
//! Arcs are coloured by owner and weigh 1 or 2. A move flips one unflipped arc
//! of the mover's colour, provided the vertex it stops pointing into keeps an
//! in-weight of at least 2. Every arc flips at most once, so play is bounded
//! by the arc count.
//!
//! Vertices may be marked `terminal`: free arc ends that carry no in-weight
//! constraint. They stand for the unattached arc ends drawn in constructions.

use std::cell::RefCell;
use std::collections::BTreeMap;
use std::fmt::Write;
use std::sync::atomic::{AtomicU64, Ordering};

use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bits::Bits;
use crate::graph::json::parse_error;
use crate::graph::GraphError;
use crate::Player;

pub type ClVertexId = usize;
pub type ClEdgeId = usize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClVariant {
    /// Both players have a goal arc; a stuck player ends the game in a draw.
    Standard,
    /// Blue goal only; a stuck player hands the win to Red.
    BuilderBlocker,
    /// No goals; a stuck player loses.
    NormalPlay,
    /// No goals; a stuck player wins.
    MiserePlay,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClOutcome {
    BlueWin,
    RedWin,
    Draw,
}

impl ClOutcome {
    pub fn win_for(p: Player) -> Self {
        match p {
            Player::Blue => ClOutcome::BlueWin,
            Player::Red => ClOutcome::RedWin,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClVertex {
    pub id: ClVertexId,
    #[serde(default)]
    pub terminal: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClEdge {
    pub id: ClEdgeId,
    pub tail: ClVertexId,
    /// The vertex this arc currently points into.
    pub head: ClVertexId,
    pub colour: Player,
    pub weight: u8,
    #[serde(default)]
    pub flipped: bool,
    #[serde(default)]
    pub goal_for: Option<Player>,
}

impl ClEdge {
    pub fn new(id: ClEdgeId, tail: ClVertexId, head: ClVertexId, colour: Player, weight: u8) -> Self {
        ClEdge { id, tail, head, colour, weight, flipped: false, goal_for: None }
    }

    pub fn goal(mut self, p: Player) -> Self {
        self.goal_for = Some(p);
        self
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClInstance {
    pub variant: ClVariant,
    pub to_move: Player,
    #[serde(default)]
    pub vertices: Vec<ClVertex>,
    pub edges: Vec<ClEdge>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VertexKind {
    And,
    Or,
    Fanout,
    Choice,
    Variable,
    BlueToRed,
    RedOr,
    Other,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FlipReason {
    Absent,
    AlreadyFlipped,
    WrongColour,
    InWeight,
    GameOver,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClError {
    #[error("cannot flip edge {edge}: {reason:?}")]
    IllegalFlip { edge: ClEdgeId, reason: FlipReason },
    #[error("search budget of {0} nodes exceeded")]
    BudgetExceeded(u64),
    #[error("{0} edges is beyond the solver's capacity")]
    TooManyEdges(usize),
    #[error("malformed instance: {0}")]
    Malformed(String),
    #[error(transparent)]
    Parse(#[from] GraphError),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    InWeight { vertex: ClVertexId, in_weight: u32 },
    GoalCount { player: Player, expected: usize, found: usize },
    GoalColour { edge: ClEdgeId },
    Weight { edge: ClEdgeId, weight: u8 },
    UnknownVertex { edge: ClEdgeId, vertex: ClVertexId },
    DuplicateEdge(ClEdgeId),
    DuplicateVertex(ClVertexId),
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl ClInstance {
    /// Builds an instance whose vertex list is every endpoint of `edges`;
    /// the listed `terminals` carry no in-weight constraint.
    pub fn from_edges(variant: ClVariant, to_move: Player, edges: Vec<ClEdge>, terminals: &[ClVertexId]) -> Self {
        let mut ids: Vec<ClVertexId> = edges.iter().flat_map(|e| [e.tail, e.head]).collect();
        ids.sort_unstable();
        ids.dedup();
        let vertices = ids.into_iter().map(|id| ClVertex { id, terminal: terminals.contains(&id) }).collect();
        ClInstance { variant, to_move, vertices, edges }
    }

    pub fn edge(&self, id: ClEdgeId) -> Option<&ClEdge> {
        self.edges.iter().find(|e| e.id == id)
    }

    pub fn is_terminal(&self, v: ClVertexId) -> bool {
        self.vertices.iter().any(|x| x.id == v && x.terminal)
    }

    pub fn in_weight(&self, v: ClVertexId) -> u32 {
        self.edges.iter().filter(|e| e.head == v).map(|e| e.weight as u32).sum()
    }

    pub fn goal(&self, p: Player) -> Option<&ClEdge> {
        self.edges.iter().find(|e| e.goal_for == Some(p))
    }

    /// Fills in vertices mentioned only by edges (as constrained vertices).
    fn normalised(mut self) -> Self {
        let mut known: Vec<ClVertexId> = self.vertices.iter().map(|v| v.id).collect();
        for e in &self.edges {
            for v in [e.tail, e.head] {
                if !known.contains(&v) {
                    known.push(v);
                    self.vertices.push(ClVertex { id: v, terminal: false });
                }
            }
        }
        self.vertices.sort_by_key(|v| v.id);
        self
    }
}

pub fn validate_instance(inst: &ClInstance) -> ValidationReport {
    let mut violations = Vec::new();
    let mut seen = BTreeMap::new();
    for v in &inst.vertices {
        if seen.insert(v.id, ()).is_some() {
            violations.push(Violation::DuplicateVertex(v.id));
        }
    }
    let mut eseen = BTreeMap::new();
    for e in &inst.edges {
        if eseen.insert(e.id, ()).is_some() {
            violations.push(Violation::DuplicateEdge(e.id));
        }
        if !(1..=2).contains(&e.weight) {
            violations.push(Violation::Weight { edge: e.id, weight: e.weight });
        }
        if let Some(p) = e.goal_for {
            if p != e.colour {
                violations.push(Violation::GoalColour { edge: e.id });
            }
        }
        if !inst.vertices.is_empty() {
            for v in [e.tail, e.head] {
                if !seen.contains_key(&v) {
                    violations.push(Violation::UnknownVertex { edge: e.id, vertex: v });
                }
            }
        }
    }
    let mut ids: Vec<ClVertexId> = inst.vertices.iter().map(|v| v.id).collect();
    if ids.is_empty() {
        ids = inst.edges.iter().flat_map(|e| [e.tail, e.head]).collect();
        ids.sort_unstable();
        ids.dedup();
    }
    for v in ids {
        if !inst.is_terminal(v) {
            let w = inst.in_weight(v);
            if w < 2 {
                violations.push(Violation::InWeight { vertex: v, in_weight: w });
            }
        }
    }
    let (blue, red) = match inst.variant {
        ClVariant::Standard => (1, 1),
        ClVariant::BuilderBlocker => (1, 0),
        ClVariant::NormalPlay | ClVariant::MiserePlay => (0, 0),
    };
    for (p, want) in [(Player::Blue, blue), (Player::Red, red)] {
        let found = inst.edges.iter().filter(|e| e.goal_for == Some(p)).count();
        if found != want {
            violations.push(Violation::GoalCount { player: p, expected: want, found });
        }
    }
    ValidationReport { violations }
}

/// Basis-vertex kind read off the incident arcs as they currently point.
pub fn classify_vertex(inst: &ClInstance, v: ClVertexId) -> VertexKind {
    // (colour, weight, points into v)
    let mut sig: Vec<(Player, u8, bool)> = inst
        .edges
        .iter()
        .filter(|e| e.tail == v || e.head == v)
        .map(|e| (e.colour, e.weight, e.head == v))
        .collect();
    sig.sort();
    use Player::{Blue as B, Red as R};
    match sig.as_slice() {
        [(B, 1, false), (B, 1, false), (B, 2, true)] => VertexKind::And,
        [(B, 2, false), (B, 2, false), (B, 2, true)] => VertexKind::Or,
        [(B, 1, false), (B, 1, true), (B, 1, true)] => VertexKind::Choice,
        [(B, 1, true), (B, 1, true), (B, 2, false)] => VertexKind::Fanout,
        [(B, 2, true), (R, 2, true)] => VertexKind::Variable,
        [(B, 2, false), (R, 2, true)] => VertexKind::BlueToRed,
        [(R, 2, false), (R, 2, false), (R, 2, true)] => VertexKind::RedOr,
        _ => VertexKind::Other,
    }
}

fn flip_block(inst: &ClInstance, e: &ClEdge) -> Option<FlipReason> {
    if e.flipped {
        return Some(FlipReason::AlreadyFlipped);
    }
    if e.colour != inst.to_move {
        return Some(FlipReason::WrongColour);
    }
    if !inst.is_terminal(e.head) && inst.in_weight(e.head) < 2 + e.weight as u32 {
        return Some(FlipReason::InWeight);
    }
    None
}

pub fn legal_flips(inst: &ClInstance) -> Vec<ClEdgeId> {
    let mut out: Vec<ClEdgeId> = inst.edges.iter().filter(|e| flip_block(inst, e).is_none()).map(|e| e.id).collect();
    out.sort_unstable();
    out
}

/// Outcome when the player to move has no legal flip, per variant.
pub fn stuck_outcome(variant: ClVariant, stuck: Player) -> ClOutcome {
    match variant {
        ClVariant::Standard => ClOutcome::Draw,
        ClVariant::BuilderBlocker => ClOutcome::RedWin,
        ClVariant::NormalPlay => ClOutcome::win_for(stuck.opponent()),
        ClVariant::MiserePlay => ClOutcome::win_for(stuck),
    }
}

/// Outcome if the game is already over at the start of the mover's turn.
pub fn terminal_outcome(inst: &ClInstance) -> Option<ClOutcome> {
    if legal_flips(inst).is_empty() {
        Some(stuck_outcome(inst.variant, inst.to_move))
    } else {
        None
    }
}

pub fn apply_flip(inst: &ClInstance, edge: ClEdgeId) -> Result<(ClInstance, Option<ClOutcome>), ClError> {
    let e = inst.edge(edge).ok_or(ClError::IllegalFlip { edge, reason: FlipReason::Absent })?;
    if let Some(reason) = flip_block(inst, e) {
        return Err(ClError::IllegalFlip { edge, reason });
    }
    let mover = inst.to_move;
    let goal = e.goal_for == Some(mover);
    let mut next = inst.clone();
    for x in next.edges.iter_mut().filter(|x| x.id == edge) {
        std::mem::swap(&mut x.tail, &mut x.head);
        x.flipped = true;
    }
    next.to_move = mover.opponent();
    debug_assert!(next
        .vertices
        .iter()
        .all(|v| v.terminal || next.in_weight(v.id) >= 2 || inst.in_weight(v.id) < 2));
    if goal {
        return Ok((next, Some(ClOutcome::win_for(mover))));
    }
    let end = terminal_outcome(&next);
    Ok((next, end))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClSolveResult {
    pub outcome: ClOutcome,
    /// Optimal play from the root, lowest edge id among equally good flips.
    pub principal_line: Vec<ClEdgeId>,
    pub nodes_searched: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ClSolverConfig {
    pub node_budget: u64,
}

impl Default for ClSolverConfig {
    fn default() -> Self {
        ClSolverConfig { node_budget: 50_000_000 }
    }
}

pub fn solve_cl(inst: &ClInstance) -> Result<ClSolveResult, ClError> {
    solve_cl_with(inst, &ClSolverConfig::default())
}

pub fn solve_cl_with(inst: &ClInstance, config: &ClSolverConfig) -> Result<ClSolveResult, ClError> {
    let m = inst.edges.len();
    match m.div_ceil(64) {
        0 | 1 => run::<1>(inst, config),
        2 => run::<2>(inst, config),
        3 | 4 => run::<4>(inst, config),
        5..=16 => run::<16>(inst, config),
        _ => Err(ClError::TooManyEdges(m)),
    }
}

/// Value from the mover's point of view.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Rel {
    Loss,
    Draw,
    Win,
}

impl Rel {
    fn flip(self) -> Rel {
        match self {
            Rel::Loss => Rel::Win,
            Rel::Draw => Rel::Draw,
            Rel::Win => Rel::Loss,
        }
    }

    fn of(outcome: ClOutcome, mover: Player) -> Rel {
        match outcome {
            ClOutcome::Draw => Rel::Draw,
            o if o == ClOutcome::win_for(mover) => Rel::Win,
            _ => Rel::Loss,
        }
    }
}

struct Engine<const W: usize> {
    variant: ClVariant,
    tail: Vec<usize>,
    head: Vec<usize>,
    weight: Vec<i32>,
    colour: Vec<Player>,
    goal: Vec<Option<Player>>,
    terminal: Vec<bool>,
    in_w: RefCell<Vec<i32>>,
    /// Interchangeable small components; see [`symmetry_classes`].
    classes: Vec<Vec<Vec<Vec<usize>>>>,
    memo: RefCell<FxHashMap<(Bits<W>, Player), Rel>>,
    nodes: AtomicU64,
    budget: u64,
}

impl<const W: usize> Engine<W> {
    /// Current endpoints of edge `e` given the set of flips made in search.
    fn ends(&self, e: usize, done: &Bits<W>) -> (usize, usize) {
        if done.get(e) {
            (self.head[e], self.tail[e])
        } else {
            (self.tail[e], self.head[e])
        }
    }

    fn moves(&self, avail: &Bits<W>, done: &Bits<W>, mover: Player) -> Vec<usize> {
        let in_w = self.in_w.borrow();
        avail
            .ones()
            .filter(|&e| {
                let (_, h) = self.ends(e, done);
                self.colour[e] == mover && (self.terminal[h] || in_w[h] - self.weight[e] >= 2)
            })
            .collect()
    }

    fn toggle(&self, e: usize, done: &Bits<W>) {
        let (t, h) = self.ends(e, done);
        let mut in_w = self.in_w.borrow_mut();
        in_w[h] -= self.weight[e];
        in_w[t] += self.weight[e];
    }

    fn value(&self, avail: Bits<W>, done: Bits<W>, mover: Player) -> Result<Rel, ClError> {
        let moves = self.moves(&avail, &done, mover);
        if moves.is_empty() {
            return Ok(Rel::of(stuck_outcome(self.variant, mover), mover));
        }
        let key = (self.canonical(&done), mover);
        if let Some(&v) = self.memo.borrow().get(&key) {
            return Ok(v);
        }
        if self.nodes.fetch_add(1, Ordering::Relaxed) >= self.budget {
            return Err(ClError::BudgetExceeded(self.budget));
        }
        let mut best = Rel::Loss;
        for e in moves {
            let v = self.child(&avail, &done, mover, e)?;
            if v > best {
                best = v;
                if best == Rel::Win {
                    break;
                }
            }
        }
        self.memo.borrow_mut().insert(key, best);
        Ok(best)
    }

    /// Rewrites the flip set so that isomorphic small components carry their
    /// local states in sorted order. Isomorphic positions share a key.
    fn canonical(&self, done: &Bits<W>) -> Bits<W> {
        if self.classes.is_empty() {
            return *done;
        }
        let mut key = *done;
        let local = |order: &Vec<usize>| -> u32 {
            order.iter().enumerate().map(|(i, &e)| (done.get(e) as u32) << i).sum()
        };
        for class in &self.classes {
            let mut masks: Vec<u32> =
                class.iter().map(|orders| orders.iter().map(local).min().expect("an order")).collect();
            masks.sort_unstable();
            for (orders, m) in class.iter().zip(masks) {
                for (i, &e) in orders[0].iter().enumerate() {
                    if m >> i & 1 == 1 {
                        key.set(e);
                    } else {
                        key.clear(e);
                    }
                }
            }
        }
        key
    }

    /// Value for `mover` of flipping `e`.
    fn child(&self, avail: &Bits<W>, done: &Bits<W>, mover: Player, e: usize) -> Result<Rel, ClError> {
        if self.goal[e] == Some(mover) {
            return Ok(Rel::Win);
        }
        self.toggle(e, done);
        let mut a = *avail;
        a.clear(e);
        let mut d = *done;
        d.set(e);
        let r = self.value(a, d, mover.opponent());
        // Undo: edge e now runs the other way.
        self.toggle(e, &d);
        Ok(r?.flip())
    }
}

fn run<const W: usize>(inst: &ClInstance, config: &ClSolverConfig) -> Result<ClSolveResult, ClError> {
    let inst = inst.clone().normalised();
    let index: BTreeMap<ClVertexId, usize> = inst.vertices.iter().enumerate().map(|(i, v)| (v.id, i)).collect();
    let n = inst.vertices.len();
    let mut in_w = vec![0; n];
    let mut avail = Bits::<W>::zero();
    for (i, e) in inst.edges.iter().enumerate() {
        in_w[index[&e.head]] += e.weight as i32;
        if !e.flipped {
            avail.set(i);
        }
    }
    let engine = Engine::<W> {
        variant: inst.variant,
        tail: inst.edges.iter().map(|e| index[&e.tail]).collect(),
        head: inst.edges.iter().map(|e| index[&e.head]).collect(),
        weight: inst.edges.iter().map(|e| e.weight as i32).collect(),
        colour: inst.edges.iter().map(|e| e.colour).collect(),
        goal: inst.edges.iter().map(|e| e.goal_for).collect(),
        terminal: inst.vertices.iter().map(|v| v.terminal).collect(),
        in_w: RefCell::new(in_w),
        classes: symmetry_classes(&inst, &index),
        memo: RefCell::new(FxHashMap::default()),
        nodes: AtomicU64::new(0),
        budget: config.node_budget,
    };

    let root_mover = inst.to_move;
    let root = engine.value(avail, Bits::zero(), root_mover)?;
    let outcome = match root {
        Rel::Draw => ClOutcome::Draw,
        Rel::Win => ClOutcome::win_for(root_mover),
        Rel::Loss => ClOutcome::win_for(root_mover.opponent()),
    };

    // Walk the principal line, re-deriving each step from the table.
    let mut line = Vec::new();
    let (mut a, mut d, mut mover, mut target) = (avail, Bits::<W>::zero(), root_mover, root);
    loop {
        let moves = engine.moves(&a, &d, mover);
        let mut pick = None;
        for &e in &moves {
            if engine.child(&a, &d, mover, e)? == target {
                pick = Some(e);
                break;
            }
        }
        let Some(e) = pick else { break };
        line.push(inst.edges[e].id);
        if engine.goal[e] == Some(mover) {
            break;
        }
        engine.toggle(e, &d);
        a.clear(e);
        d.set(e);
        mover = mover.opponent();
        target = target.flip();
    }

    Ok(ClSolveResult { outcome, principal_line: line, nodes_searched: engine.nodes.load(Ordering::Relaxed) })
}

/// Groups connected components of at most four arcs into isomorphism
/// classes. Each member is listed with every arc order that realises the
/// class's canonical code; only classes with two or more members are kept.
fn symmetry_classes(inst: &ClInstance, index: &BTreeMap<ClVertexId, usize>) -> Vec<Vec<Vec<Vec<usize>>>> {
    const MAX_ARCS: usize = 4;
    let n = index.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for e in &inst.edges {
        let (a, b) = (find(&mut parent, index[&e.tail]), find(&mut parent, index[&e.head]));
        parent[a] = b;
    }
    let mut comps: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (i, e) in inst.edges.iter().enumerate() {
        let r = find(&mut parent, index[&e.tail]);
        comps.entry(r).or_default().push(i);
    }
    let terminal: Vec<bool> = inst.vertices.iter().map(|v| v.terminal).collect();
    type Code = Vec<(usize, usize, bool, u8, u8, bool, bool, bool)>;
    let code_of = |order: &[usize]| -> Code {
        let mut label: Vec<usize> = Vec::new();
        let mut name = |v: usize| match label.iter().position(|&x| x == v) {
            Some(i) => i,
            None => {
                label.push(v);
                label.len() - 1
            }
        };
        order
            .iter()
            .map(|&i| {
                let e = &inst.edges[i];
                let (t, h) = (index[&e.tail], index[&e.head]);
                let goal = match e.goal_for {
                    None => 0,
                    Some(Player::Blue) => 1,
                    Some(Player::Red) => 2,
                };
                (name(t), name(h), e.colour == Player::Blue, e.weight, goal, e.flipped, terminal[t], terminal[h])
            })
            .collect()
    };
    let mut classes: BTreeMap<Code, Vec<Vec<Vec<usize>>>> = BTreeMap::new();
    for arcs in comps.into_values().filter(|c| c.len() <= MAX_ARCS) {
        let mut best: Option<(Code, Vec<Vec<usize>>)> = None;
        for order in permutations(&arcs) {
            let code = code_of(&order);
            match &mut best {
                Some((c, orders)) if *c == code => orders.push(order),
                Some((c, _)) if *c < code => {}
                _ => best = Some((code, vec![order])),
            }
        }
        let (code, orders) = best.expect("non-empty component");
        classes.entry(code).or_default().push(orders);
    }
    classes.into_values().filter(|members| members.len() > 1).collect()
}

fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let x = rest.remove(i);
        for mut p in permutations(&rest) {
            p.insert(0, x);
            out.push(p);
        }
    }
    out
}

pub fn encode_instance(inst: &ClInstance) -> String {
    serde_json::to_string_pretty(inst).expect("instance serialisation cannot fail")
}

pub fn decode_instance(text: &str) -> Result<ClInstance, ClError> {
    let inst: ClInstance = serde_json::from_str(text).map_err(parse_error)?;
    Ok(inst)
}

/// Graphviz digraph; weight-2 arcs get a doubled arrowhead, goals are bold.
pub fn to_dot(inst: &ClInstance) -> String {
    let mut out = String::from("digraph CL {\n  node [shape=circle, style=filled, fillcolor=black, width=0.12, label=\"\"];\n");
    for v in &inst.vertices {
        if v.terminal {
            let _ = writeln!(out, "  n{} [shape=point, fillcolor=gray];", v.id);
        } else {
            let _ = writeln!(out, "  n{};", v.id);
        }
    }
    for e in &inst.edges {
        let colour = match e.colour {
            Player::Blue => "blue",
            Player::Red => "red",
        };
        let arrow = if e.weight == 2 { "normalnormal" } else { "normal" };
        let mut attrs = format!("color={colour}, arrowhead={arrow}, label=\"{}\"", e.id);
        if e.goal_for.is_some() {
            attrs.push_str(", penwidth=3, xlabel=\"goal\"");
        }
        if e.flipped {
            attrs.push_str(", style=dashed");
        }
        let _ = writeln!(out, "  n{} -> n{} [{attrs}];", e.tail, e.head);
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use Player::{Blue as B, Red as R};

    fn and_vertex() -> ClInstance {
        // centre 0; output 0 from terminal 1 into 0 (w2); inputs from 0 to terminals 2, 3.
        ClInstance::from_edges(
            ClVariant::NormalPlay,
            B,
            vec![ClEdge::new(0, 1, 0, B, 2), ClEdge::new(1, 0, 2, B, 1), ClEdge::new(2, 0, 3, B, 1)],
            &[1, 2, 3],
        )
    }

    #[test]
    fn and_vertex_validity_and_flips() {
        let inst = and_vertex();
        assert!(validate_instance(&inst).is_valid());
        assert_eq!(inst.in_weight(0), 2);
        assert_eq!(classify_vertex(&inst, 0), VertexKind::And);
        assert_eq!(
            apply_flip(&inst, 0).unwrap_err(),
            ClError::IllegalFlip { edge: 0, reason: FlipReason::InWeight }
        );
        let (s, _) = apply_flip(&inst, 1).unwrap();
        let s = ClInstance { to_move: B, ..s };
        let (s, _) = apply_flip(&s, 2).unwrap();
        let s = ClInstance { to_move: B, ..s };
        assert_eq!(s.in_weight(0), 4);
        assert_eq!(legal_flips(&s), vec![0]);
        assert_eq!(
            apply_flip(&s, 1).unwrap_err(),
            ClError::IllegalFlip { edge: 1, reason: FlipReason::AlreadyFlipped }
        );
    }

    #[test]
    fn low_in_weight_and_goal_counts_reported() {
        let inst = ClInstance::from_edges(ClVariant::Standard, B, vec![ClEdge::new(0, 0, 1, B, 1).goal(B)], &[0]);
        let r = validate_instance(&inst);
        assert!(r.violations.contains(&Violation::InWeight { vertex: 1, in_weight: 1 }));
        assert!(r.violations.contains(&Violation::GoalCount { player: R, expected: 1, found: 0 }));
    }

    #[test]
    fn classification_examples() {
        let or = ClInstance::from_edges(
            ClVariant::NormalPlay,
            B,
            vec![ClEdge::new(0, 1, 0, B, 2), ClEdge::new(1, 0, 2, B, 2), ClEdge::new(2, 0, 3, B, 2)],
            &[1, 2, 3],
        );
        assert_eq!(classify_vertex(&or, 0), VertexKind::Or);
        assert_eq!(classify_vertex(&or.clone().recolour(R), 0), VertexKind::RedOr);
        let var = ClInstance::from_edges(
            ClVariant::NormalPlay,
            B,
            vec![ClEdge::new(0, 1, 0, B, 2), ClEdge::new(1, 2, 0, R, 2)],
            &[1, 2],
        );
        assert_eq!(classify_vertex(&var, 0), VertexKind::Variable);
        let choice = ClInstance::from_edges(
            ClVariant::NormalPlay,
            B,
            vec![ClEdge::new(0, 0, 1, B, 1), ClEdge::new(1, 2, 0, B, 1), ClEdge::new(2, 3, 0, B, 1)],
            &[1, 2, 3],
        );
        assert_eq!(classify_vertex(&choice, 0), VertexKind::Choice);
        let fanout = ClInstance::from_edges(
            ClVariant::NormalPlay,
            B,
            vec![ClEdge::new(0, 0, 1, B, 2), ClEdge::new(1, 2, 0, B, 1), ClEdge::new(2, 3, 0, B, 1)],
            &[1, 2, 3],
        );
        assert_eq!(classify_vertex(&fanout, 0), VertexKind::Fanout);
    }

    impl ClInstance {
        fn recolour(mut self, p: Player) -> Self {
            for e in &mut self.edges {
                e.colour = p;
            }
            self
        }
    }

    #[test]
    fn goal_and_stuck_rules() {
        let only_goal = ClInstance::from_edges(
            ClVariant::Standard,
            B,
            vec![ClEdge::new(0, 0, 1, B, 2).goal(B), ClEdge::new(1, 2, 3, R, 2).goal(R), ClEdge::new(2, 4, 3, R, 2)],
            &[0, 1, 2, 4],
        );
        let (_, end) = apply_flip(&only_goal, 0).unwrap();
        assert_eq!(end, Some(ClOutcome::BlueWin));
        let r = solve_cl(&only_goal).unwrap();
        assert_eq!((r.outcome, r.principal_line.as_slice()), (ClOutcome::BlueWin, &[0][..]));

        // Standard: Blue has nothing to flip.
        let stuck = ClInstance { to_move: R, ..only_goal.clone() };
        let (after, end) = apply_flip(&ClInstance { edges: only_goal.edges[1..].to_vec(), ..stuck.clone() }, 2).unwrap();
        assert_eq!(after.to_move, B);
        assert_eq!(end, Some(ClOutcome::Draw));

        let none = ClInstance::from_edges(ClVariant::NormalPlay, B, vec![ClEdge::new(0, 0, 1, R, 2)], &[0, 1]);
        assert_eq!(solve_cl(&none).unwrap().outcome, ClOutcome::RedWin);
        let misere = ClInstance { variant: ClVariant::MiserePlay, ..none };
        assert_eq!(solve_cl(&misere).unwrap().outcome, ClOutcome::BlueWin);
    }

    #[test]
    fn json_and_dot() {
        let inst = and_vertex();
        let text = encode_instance(&inst);
        assert_eq!(decode_instance(&text).unwrap(), inst);
        let dot = to_dot(&inst);
        assert_eq!(dot.matches("arrowhead=normalnormal").count(), 1);
        assert!(matches!(decode_instance("{\"variant\":"), Err(ClError::Parse(GraphError::Parse { .. }))));
    }
}
