//! PosCNF formulas as constraint-logic circuits, plus the transforms to the
//! builder-blocker, normal-play and misère-play variants.
//!
//! Signals run from variables towards the goal. An arc between a producer
//! and its consumer points into the producer until the signal is activated,
//! when it is flipped towards the consumer.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cl::{ClEdge, ClEdgeId, ClInstance, ClVariant, ClVertex, ClVertexId};
use crate::poscnf::PosCnf;
use crate::Player;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VariableTrace {
    /// Index of the formula variable.
    pub variable: usize,
    pub vertex: ClVertexId,
    /// Blue arc whose flip claims the variable for Blue. For a formula that
    /// is a single one-literal clause this is also the goal arc.
    pub claim_edge: ClEdgeId,
    /// Red arc whose flip claims it for Red.
    pub red_edge: ClEdgeId,
}

/// Where every part of a compiled instance came from. Each edge lies in
/// exactly one of `variables`, `circuitry`, `blue_goal`,
/// `red_goal_component`, `red_components`, `tail` and `free_chain`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClTrace {
    pub variables: Vec<VariableTrace>,
    /// Per clause, the vertex producing the clause signal.
    pub clause_roots: Vec<ClVertexId>,
    /// And vertices joining the clauses.
    pub spine: Vec<ClVertexId>,
    pub circuitry: Vec<ClEdgeId>,
    pub blue_goal: Vec<ClEdgeId>,
    pub red_goal_component: Vec<ClEdgeId>,
    pub red_components: Vec<Vec<ClEdgeId>>,
    /// What replaced the goal in the goal-free variants, old goal arc first.
    pub tail: Vec<ClEdgeId>,
    /// Misère only: Blue's unconditional chain.
    pub free_chain: Vec<ClEdgeId>,
}

impl ClTrace {
    pub fn buckets(&self) -> Vec<(&'static str, Vec<ClEdgeId>)> {
        vec![
            (
                "variables",
                self.variables
                    .iter()
                    .flat_map(|v| [v.claim_edge, v.red_edge])
                    .filter(|e| !self.blue_goal.contains(e))
                    .collect(),
            ),
            ("circuitry", self.circuitry.clone()),
            ("blue_goal", self.blue_goal.clone()),
            ("red_goal_component", self.red_goal_component.clone()),
            ("red_components", self.red_components.iter().flatten().copied().collect()),
            ("tail", self.tail.clone()),
            ("free_chain", self.free_chain.clone()),
        ]
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompilationParams {
    /// Extra Red plays in the standard construction.
    pub k: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CompileError {
    #[error("instance is not the output of the expected compilation step: {0}")]
    NotACompiledInstance(String),
}

/// Blue plays available in the circuitry: every blue arc from the variables'
/// consumers up to and including the goal arc.
pub fn count_blue_circuit_moves(inst: &ClInstance, trace: &ClTrace) -> usize {
    trace
        .circuitry
        .iter()
        .chain(&trace.blue_goal)
        .filter(|&&e| inst.edge(e).is_some_and(|x| x.colour == Player::Blue))
        .count()
}

#[derive(Clone, Copy)]
struct Signal {
    vertex: ClVertexId,
    weight: u8,
}

#[derive(Clone, Copy, PartialEq)]
enum Bucket {
    Variables,
    Circuitry,
    BlueGoal,
    RedGoal,
    RedComponent,
    Tail,
    FreeChain,
}

struct Builder {
    edges: Vec<ClEdge>,
    vertices: Vec<ClVertex>,
    buckets: Vec<Bucket>,
}

impl Builder {
    fn from(inst: &ClInstance, trace: &ClTrace) -> Builder {
        let mut b = Builder { edges: inst.edges.clone(), vertices: inst.vertices.clone(), buckets: Vec::new() };
        let lookup = trace.buckets();
        let tag = [
            Bucket::Variables,
            Bucket::Circuitry,
            Bucket::BlueGoal,
            Bucket::RedGoal,
            Bucket::RedComponent,
            Bucket::Tail,
            Bucket::FreeChain,
        ];
        b.buckets = b
            .edges
            .iter()
            .map(|e| {
                let i = lookup.iter().position(|(_, ids)| ids.contains(&e.id)).expect("edge in a bucket");
                tag[i]
            })
            .collect();
        b
    }

    fn at(&self, id: ClEdgeId) -> usize {
        self.edges.iter().position(|e| e.id == id).expect("edge exists")
    }

    fn vertex(&mut self, terminal: bool) -> ClVertexId {
        let id = self.vertices.iter().map(|v| v.id + 1).max().unwrap_or(0);
        self.vertices.push(ClVertex { id, terminal });
        id
    }

    fn arc(&mut self, tail: ClVertexId, head: ClVertexId, colour: Player, weight: u8, bucket: Bucket) -> ClEdgeId {
        let id = self.edges.iter().map(|e| e.id + 1).max().unwrap_or(0);
        self.edges.push(ClEdge::new(id, tail, head, colour, weight));
        self.buckets.push(bucket);
        id
    }

    /// Consumer `c` takes signal `s` as an input.
    fn connect(&mut self, c: ClVertexId, s: Signal, bucket: Bucket) -> ClEdgeId {
        self.arc(c, s.vertex, Player::Blue, s.weight, bucket)
    }

    fn or(&mut self, a: Signal, b: Signal, bucket_of: &dyn Fn(Signal) -> Bucket) -> Signal {
        let a = self.widen(a);
        let b = self.widen(b);
        let v = self.vertex(false);
        self.connect(v, a, bucket_of(a));
        self.connect(v, b, bucket_of(b));
        Signal { vertex: v, weight: 2 }
    }

    fn and(&mut self, a: Signal, b: Signal, bucket_of: &dyn Fn(Signal) -> Bucket) -> Signal {
        let a = self.narrow(a, bucket_of);
        let b = self.narrow(b, bucket_of);
        let v = self.vertex(false);
        self.connect(v, a, bucket_of(a));
        self.connect(v, b, bucket_of(b));
        Signal { vertex: v, weight: 2 }
    }

    fn fanout(&mut self, s: Signal, bucket_of: &dyn Fn(Signal) -> Bucket) -> (Signal, Signal) {
        debug_assert_eq!(s.weight, 2);
        let v = self.vertex(false);
        self.connect(v, s, bucket_of(s));
        (Signal { vertex: v, weight: 1 }, Signal { vertex: v, weight: 1 })
    }

    /// Weight-2 signal to weight-1 through a Fanout whose spare output ends
    /// at a free arc end. Weight-1 signals pass unchanged.
    fn narrow(&mut self, s: Signal, bucket_of: &dyn Fn(Signal) -> Bucket) -> Signal {
        if s.weight == 1 {
            return s;
        }
        let (a, spare) = self.fanout(s, bucket_of);
        let t = self.vertex(true);
        self.connect(t, spare, Bucket::Circuitry);
        a
    }

    /// Weight-1 signal to weight-2 through an And whose second input is free.
    /// Weight-2 signals pass unchanged.
    fn widen(&mut self, s: Signal) -> Signal {
        if s.weight == 2 {
            return s;
        }
        let t = self.vertex(true);
        let free = Signal { vertex: t, weight: 1 };
        let v = self.vertex(false);
        self.connect(v, s, Bucket::Circuitry);
        self.arc(v, free.vertex, Player::Blue, 1, Bucket::Circuitry);
        Signal { vertex: v, weight: 2 }
    }

    fn red_component(&mut self) -> Vec<ClEdgeId> {
        let mid = self.vertex(false);
        let a = self.vertex(true);
        let b = self.vertex(true);
        vec![
            self.arc(a, mid, Player::Red, 2, Bucket::RedComponent),
            self.arc(b, mid, Player::Red, 2, Bucket::RedComponent),
        ]
    }

    /// `len` consecutive arcs into a chain of Or vertices (each with a
    /// pendant that can never flip), hanging off `start`. Returns chain arcs
    /// then pendant arcs.
    fn or_chain(&mut self, start: ClVertexId, len: usize, colour: Player, bucket: Bucket) -> Vec<ClEdgeId> {
        let mut chain = Vec::new();
        let mut pendants = Vec::new();
        let mut prev = start;
        for j in 0..len {
            let last = j + 1 == len;
            let next = self.vertex(last);
            chain.push(self.arc(next, prev, colour, 2, bucket));
            if !last {
                let p = self.vertex(false);
                pendants.push(self.arc(next, p, colour, 2, bucket));
            }
            prev = next;
        }
        chain.extend(pendants);
        chain
    }

    fn finish(self, variant: ClVariant, to_move: Player, mut trace: ClTrace) -> (ClInstance, ClTrace) {
        let pick = |b: Bucket| -> Vec<ClEdgeId> {
            self.edges.iter().zip(&self.buckets).filter(|(_, &x)| x == b).map(|(e, _)| e.id).collect()
        };
        trace.circuitry = pick(Bucket::Circuitry);
        trace.blue_goal = pick(Bucket::BlueGoal);
        trace.red_goal_component = pick(Bucket::RedGoal);
        trace.tail = pick(Bucket::Tail);
        trace.free_chain = pick(Bucket::FreeChain);
        let mut vertices = self.vertices;
        vertices.sort_by_key(|v| v.id);
        let used: Vec<ClVertexId> = self.edges.iter().flat_map(|e| [e.tail, e.head]).collect();
        vertices.retain(|v| used.contains(&v.id));
        (ClInstance { variant, to_move, vertices, edges: self.edges }, trace)
    }
}

/// Standard instance for the formula game with Blue as the True player.
pub fn compile_poscnf_to_b2cl(formula: &PosCnf) -> (ClInstance, ClTrace, CompilationParams) {
    let mut b = Builder { edges: Vec::new(), vertices: Vec::new(), buckets: Vec::new() };
    let mut trace = ClTrace::default();
    let n = formula.variables;

    // One signal per occurrence of each variable. Fanout outputs stay at
    // weight 1 until a consumer needs weight 2.
    let mut uses = vec![0usize; n];
    for c in &formula.clauses {
        for &x in c {
            uses[x] += 1;
        }
    }
    // Variables in no clause are left out: claiming one is a dominated pass.
    let used: Vec<usize> = (0..n).filter(|&x| uses[x] > 0).collect();
    let mut var_vertex = vec![None; n];
    for &x in &used {
        var_vertex[x] = Some(b.vertex(false));
    }
    let used_count = used.len();
    let is_var = |s: Signal| if s.vertex < used_count { Bucket::Variables } else { Bucket::Circuitry };
    let mut red_edges = vec![0; n];
    for &x in &used {
        let t = b.vertex(true);
        red_edges[x] = b.arc(t, var_vertex[x].expect("used"), Player::Red, 2, Bucket::Variables);
    }

    let mut supply: Vec<Vec<Signal>> = vec![Vec::new(); n];
    for &x in &used {
        let mut cur = Signal { vertex: var_vertex[x].expect("used"), weight: 2 };
        let mut out = Vec::new();
        for remaining in (1..=uses[x]).rev() {
            match remaining {
                1 => out.push(cur),
                2 => {
                    let (a, rest) = b.fanout(cur, &is_var);
                    out.push(a);
                    out.push(rest);
                    break;
                }
                _ => {
                    let (a, rest) = b.fanout(cur, &is_var);
                    out.push(a);
                    cur = b.widen(rest);
                }
            }
        }
        out.reverse();
        supply[x] = out;
    }

    let mut clause_signals = Vec::new();
    for c in &formula.clauses {
        let mut acc = supply[c[0]].pop().expect("supply per occurrence");
        for &x in &c[1..] {
            let next = supply[x].pop().expect("supply per occurrence");
            acc = b.or(acc, next, &is_var);
        }
        trace.clause_roots.push(acc.vertex);
        clause_signals.push(acc);
    }

    let t = b.vertex(true);
    let goal = match clause_signals.split_first() {
        Some((&first, rest)) => {
            let mut goal_signal = first;
            for &c in rest {
                goal_signal = b.and(goal_signal, c, &is_var);
                trace.spine.push(goal_signal.vertex);
            }
            b.connect(t, goal_signal, Bucket::BlueGoal)
        }
        // The empty formula is already true.
        None => {
            let free = b.vertex(true);
            b.arc(t, free, Player::Blue, 2, Bucket::BlueGoal)
        }
    };
    b.edges[goal].goal_for = Some(Player::Blue);

    // The claim arc of a variable is the blue arc into its vertex.
    for &x in &used {
        let v = var_vertex[x].expect("used");
        let claim_edge = b
            .edges
            .iter()
            .find(|e| e.head == v && e.colour == Player::Blue)
            .map(|e| e.id)
            .expect("every used variable has a blue arc");
        if claim_edge != goal {
            b.buckets[claim_edge] = Bucket::Variables;
        }
        trace.variables.push(VariableTrace { variable: x, vertex: v, claim_edge, red_edge: red_edges[x] });
    }

    // Red goal, next to a blue arc Blue must eventually flip.
    let g = b.vertex(false);
    let down = b.vertex(true);
    let up = b.vertex(true);
    let red_goal = b.arc(down, g, Player::Red, 2, Bucket::RedGoal);
    b.edges[red_goal].goal_for = Some(Player::Red);
    b.arc(g, up, Player::Blue, 2, Bucket::RedGoal);

    let pre_k: Vec<ClEdgeId> = b
        .edges
        .iter()
        .zip(&b.buckets)
        .filter(|(e, &x)| (x == Bucket::Circuitry || x == Bucket::BlueGoal) && e.colour == Player::Blue)
        .map(|(e, _)| e.id)
        .collect();
    let k = pre_k.len();
    for _ in 0..k {
        let comp = b.red_component();
        trace.red_components.push(comp);
    }
    let (inst, trace) = b.finish(ClVariant::Standard, Player::Blue, trace);
    debug_assert_eq!(count_blue_circuit_moves(&inst, &trace), k);
    (inst, trace, CompilationParams { k })
}

fn expect_variant(inst: &ClInstance, want: ClVariant) -> Result<(), CompileError> {
    if inst.variant == want {
        Ok(())
    } else {
        Err(CompileError::NotACompiledInstance(format!("expected {want:?}, found {:?}", inst.variant)))
    }
}

/// Drops the Red goal component and doubles the extra Red plays.
pub fn to_builder_blocker(
    inst: &ClInstance,
    trace: &ClTrace,
    params: &CompilationParams,
) -> Result<(ClInstance, ClTrace), CompileError> {
    expect_variant(inst, ClVariant::Standard)?;
    if trace.red_goal_component.is_empty() || trace.red_components.len() != params.k {
        return Err(CompileError::NotACompiledInstance("trace does not match a standard compilation".into()));
    }
    let mut b = Builder::from(inst, trace);
    let keep: Vec<bool> = b.buckets.iter().map(|&x| x != Bucket::RedGoal).collect();
    let mut i = 0;
    b.edges.retain(|_| {
        i += 1;
        keep[i - 1]
    });
    b.buckets.retain(|&x| x != Bucket::RedGoal);
    let mut trace = trace.clone();
    for _ in 0..params.k {
        let comp = b.red_component();
        trace.red_components.push(comp);
    }
    Ok(b.finish(ClVariant::BuilderBlocker, inst.to_move, trace))
}

fn goal_parts(inst: &ClInstance, trace: &ClTrace) -> Result<(ClEdgeId, ClVertexId), CompileError> {
    let &[g] = trace.blue_goal.as_slice() else {
        return Err(CompileError::NotACompiledInstance("no blue goal in trace".into()));
    };
    let e = inst.edge(g).ok_or(CompileError::NotACompiledInstance("goal edge missing".into()))?;
    Ok((g, e.tail))
}

/// The goal arc becomes ordinary and opens a Blue Or-chain of `2k` flips.
pub fn to_normal_play(
    inst: &ClInstance,
    trace: &ClTrace,
    params: &CompilationParams,
) -> Result<(ClInstance, ClTrace), CompileError> {
    expect_variant(inst, ClVariant::BuilderBlocker)?;
    let (goal, start) = goal_parts(inst, trace)?;
    let mut b = Builder::from(inst, trace);
    let at = b.at(goal);
    b.edges[at].goal_for = None;
    b.buckets[at] = Bucket::Tail;
    for v in b.vertices.iter_mut().filter(|v| v.id == start) {
        v.terminal = false;
    }
    // The old goal's free end becomes the first Or of the chain.
    let p = b.vertex(false);
    b.arc(start, p, Player::Blue, 2, Bucket::Tail);
    b.or_chain(start, 2 * params.k, Player::Blue, Bucket::Tail);
    let mut trace = trace.clone();
    trace.blue_goal.clear();
    Ok(b.finish(ClVariant::NormalPlay, inst.to_move, trace))
}

/// The goal arc now leads, through a Blue-to-Red link, to a Red Or-chain of
/// `2k` flips; Blue gets a separate free chain of `2k` flips.
pub fn to_misere_play(
    inst: &ClInstance,
    trace: &ClTrace,
    params: &CompilationParams,
) -> Result<(ClInstance, ClTrace), CompileError> {
    expect_variant(inst, ClVariant::BuilderBlocker)?;
    let (goal, link) = goal_parts(inst, trace)?;
    let mut b = Builder::from(inst, trace);
    let at = b.at(goal);
    b.edges[at].goal_for = None;
    b.buckets[at] = Bucket::Tail;
    for v in b.vertices.iter_mut().filter(|v| v.id == link) {
        v.terminal = false;
    }
    let switch = b.vertex(false);
    b.arc(switch, link, Player::Blue, 2, Bucket::Tail);
    b.or_chain(switch, 2 * params.k, Player::Red, Bucket::Tail);

    let head = b.vertex(false);
    let t = b.vertex(true);
    b.arc(head, t, Player::Blue, 2, Bucket::FreeChain);
    let p = b.vertex(false);
    b.arc(head, p, Player::Blue, 2, Bucket::FreeChain);
    b.or_chain(head, 2 * params.k - 1, Player::Blue, Bucket::FreeChain);
    let mut trace = trace.clone();
    trace.blue_goal.clear();
    Ok(b.finish(ClVariant::MiserePlay, inst.to_move, trace))
}
