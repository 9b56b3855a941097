//! Gadget verification by Blue move cost.
//!
//! Blue has to clear every blue edge of a gadget eventually. The set of
//! edges Blue plays is then a maximal matching, and a gadget's output is
//! Active when the A edge of its Out port is among them. The cost oracle
//! enumerates every maximal matching of the remaining blue edges and keeps,
//! per combination of Out-port plays, the fewest moves.
//!
//! Interfaces are charged to the gadget that produces them: a template's own
//! cost excludes the plays that resolve its In ports, and its own red edges
//! exclude the companions of its In ports.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;

use rayon::prelude::*;
use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gadgets::{gadget_template, Backend, GadgetError, GadgetKind, GadgetTemplate, InterfacePort};
use crate::graph::{
    build_graph, is_planar, line_graph, ColouredGraph, EdgeColour, EdgeId, Embedding, Lattice, RawEdge, RawVertex,
    VertexId,
};

/// Inactive sorts before Active so patterns order by strength.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Signal {
    I,
    A,
}

pub type Pattern = Vec<Signal>;

pub fn show_pattern(p: &[Signal]) -> String {
    let parts: Vec<&str> = p.iter().map(|s| if *s == Signal::A { "A" } else { "I" }).collect();
    format!("({})", parts.join(","))
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifyError {
    #[error("pattern has {got} signals, the gadget has {expected} in ports")]
    ArityMismatch { expected: usize, got: usize },
    #[error("cost search exceeded {0} states")]
    SearchBudgetExceeded(usize),
    #[error("{0} blue edges is beyond the cost oracle")]
    TooManyEdges(usize),
    #[error(transparent)]
    Gadget(#[from] GadgetError),
}

/// Plays each In port's A or I edge as a Blue move.
pub fn resolve_inputs(t: &GadgetTemplate, pattern: &[Signal]) -> Result<ColouredGraph, VerifyError> {
    let ins = t.in_ports();
    if ins.len() != pattern.len() {
        return Err(VerifyError::ArityMismatch { expected: ins.len(), got: pattern.len() });
    }
    let mut gone = BTreeSet::new();
    for (p, s) in ins.iter().zip(pattern) {
        match s {
            Signal::A => gone.extend([p.center, p.a_end]),
            Signal::I => gone.extend([p.center, p.i_end]),
        }
    }
    Ok(t.fragment.remove_vertices(&gone))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CostReport {
    pub min_cost: usize,
    /// Output patterns reachable at `min_cost`.
    pub minimal_outputs: BTreeSet<Pattern>,
    /// Cheapest total for every reachable output pattern.
    pub pattern_costs: Vec<(Pattern, usize)>,
    /// Some cheapest line plays no Top edge.
    pub top_free: bool,
}

impl CostReport {
    pub fn cost_of(&self, pattern: &[Signal]) -> Option<usize> {
        self.pattern_costs.iter().find(|(p, _)| p == pattern).map(|&(_, c)| c)
    }
}

const STATE_BUDGET: usize = 2_000_000;

#[derive(Clone, Copy)]
enum Play {
    I,
    A,
    Top,
}

struct CostSearch {
    /// Blue edges adjacent to each blue edge, itself included.
    near: Vec<u64>,
    /// Out-port digit each edge contributes when played.
    digit: Vec<u32>,
    memo: FxHashMap<u64, Vec<(u32, usize)>>,
}

impl CostSearch {
    fn run(&mut self, mask: u64) -> Result<Vec<(u32, usize)>, VerifyError> {
        if mask == 0 {
            return Ok(vec![(0, 0)]);
        }
        if let Some(r) = self.memo.get(&mask) {
            return Ok(r.clone());
        }
        if self.memo.len() >= STATE_BUDGET {
            return Err(VerifyError::SearchBudgetExceeded(STATE_BUDGET));
        }
        let low = mask.trailing_zeros() as usize;
        let mut best: BTreeMap<u32, usize> = BTreeMap::new();
        let mut options = self.near[low] & mask;
        while options != 0 {
            let x = options.trailing_zeros() as usize;
            options &= options - 1;
            for (code, cost) in self.run(mask & !self.near[x])? {
                let entry = best.entry(code + self.digit[x]).or_insert(usize::MAX);
                *entry = (*entry).min(cost + 1);
            }
        }
        let out: Vec<(u32, usize)> = best.into_iter().collect();
        self.memo.insert(mask, out.clone());
        Ok(out)
    }
}

/// Exhaustive cheapest ways for Blue to clear every blue edge of `fragment`.
/// Red edges are ignored. Each Out port must still have its three edges.
pub fn min_blue_moves(fragment: &ColouredGraph, out_ports: &[InterfacePort]) -> Result<CostReport, VerifyError> {
    let blue: Vec<_> = fragment.edges_of_colour(EdgeColour::Blue).collect();
    if blue.len() > 64 {
        return Err(VerifyError::TooManyEdges(blue.len()));
    }
    let near: Vec<u64> = blue
        .iter()
        .map(|e| {
            blue.iter()
                .enumerate()
                .filter(|(_, f)| f.touches(e.u) || f.touches(e.v))
                .fold(0u64, |m, (j, _)| m | 1 << j)
        })
        .collect();
    let mut digit = vec![0u32; blue.len()];
    for (k, p) in out_ports.iter().enumerate() {
        let base = 4u32.pow(k as u32);
        for (edge, play) in [(p.i_edge, Play::I), (p.a_edge, Play::A), (p.top_edge, Play::Top)] {
            if let Some(j) = blue.iter().position(|e| e.id == edge) {
                digit[j] = base * (play as u32 + 1);
            }
        }
    }
    let full = if blue.len() == 64 { u64::MAX } else { (1u64 << blue.len()) - 1 };
    let mut search = CostSearch { near, digit, memo: FxHashMap::default() };
    let lines = search.run(full)?;

    let decode = |code: u32| -> Option<(Pattern, bool)> {
        let mut pattern = Vec::new();
        let mut top = false;
        for k in 0..out_ports.len() {
            match (code / 4u32.pow(k as u32)) % 4 {
                1 => pattern.push(Signal::I),
                2 => pattern.push(Signal::A),
                3 => {
                    pattern.push(Signal::I);
                    top = true;
                }
                _ => return None,
            }
        }
        Some((pattern, top))
    };
    let mut costs: BTreeMap<Pattern, usize> = BTreeMap::new();
    let mut min_cost = usize::MAX;
    let mut min_top_free = usize::MAX;
    for (code, cost) in lines {
        let Some((pattern, top)) = decode(code) else { continue };
        let e = costs.entry(pattern).or_insert(usize::MAX);
        *e = (*e).min(cost);
        min_cost = min_cost.min(cost);
        if !top {
            min_top_free = min_top_free.min(cost);
        }
    }
    let minimal_outputs = costs.iter().filter(|(_, &c)| c == min_cost).map(|(p, _)| p.clone()).collect();
    Ok(CostReport {
        min_cost,
        minimal_outputs,
        pattern_costs: costs.into_iter().collect(),
        top_free: min_top_free == min_cost,
    })
}

/// All patterns over `n` ports, weakest first.
pub fn all_patterns(n: usize) -> Vec<Pattern> {
    (0..1u32 << n)
        .map(|bits| (0..n).map(|i| if bits >> (n - 1 - i) & 1 == 1 { Signal::A } else { Signal::I }).collect())
        .collect()
}

/// Patterns obtainable from `tops` by weakening A to I.
pub fn downward_closure(tops: &[Pattern]) -> BTreeSet<Pattern> {
    let n = tops.first().map_or(0, Vec::len);
    all_patterns(n).into_iter().filter(|p| tops.iter().any(|t| p.iter().zip(t).all(|(a, b)| a <= b))).collect()
}

/// The intended logical outputs of a gadget for an input pattern.
pub fn logical_outputs(kind: GadgetKind, input: &[Signal]) -> Vec<Pattern> {
    use Signal::*;
    let all_a = input.iter().all(|&s| s == A);
    let any_a = input.contains(&A);
    match kind {
        GadgetKind::Interface => vec![vec![A]],
        GadgetKind::And => vec![vec![if all_a { A } else { I }]],
        GadgetKind::Or => vec![vec![if any_a { A } else { I }]],
        GadgetKind::WireEven | GadgetKind::WireOdd => vec![input.to_vec()],
        GadgetKind::Fanout => vec![vec![input[0], input[0]]],
        GadgetKind::Choice if input[0] == A => vec![vec![A, I], vec![I, A]],
        GadgetKind::Choice => vec![vec![I, I]],
        GadgetKind::Goal | GadgetKind::Variable => vec![],
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TruthRow {
    pub input: Pattern,
    pub expected: BTreeSet<Pattern>,
    pub report: CostReport,
    pub closure_ok: bool,
    /// Every pattern outside the closure costs at least one more move.
    pub gap_ok: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RedBalance {
    pub owned_reds: usize,
    pub min_costs: Vec<usize>,
    pub holds: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Warn,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TruthTableReport {
    pub kind: GadgetKind,
    pub backend: Backend,
    pub status: Status,
    pub rows: Vec<TruthRow>,
    pub red_balance: Option<RedBalance>,
    pub variable: Option<VariableReport>,
    pub goal: Option<GoalReport>,
    pub notes: Vec<String>,
}

impl TruthTableReport {
    /// Pass or a flagged discrepancy that leaves the truth table intact.
    pub fn passed(&self) -> bool {
        self.status != Status::Fail
    }
}

pub const OWNERSHIP_NOTE: &str = "interfaces and their companion reds are charged to the producing gadget";

const TRIANGULAR_CHOICE_TEXT: &str = "leads to active outputs in both branches";
const GENERAL_CHOICE_TEXT: &str = "forcing Blue to take an inactive output for both branches";

pub fn verify_truth_table(kind: GadgetKind, backend: Backend) -> Result<TruthTableReport, VerifyError> {
    let t = gadget_template(kind, backend)?;
    let mut report = TruthTableReport {
        kind,
        backend,
        status: Status::Pass,
        rows: Vec::new(),
        red_balance: None,
        variable: None,
        goal: None,
        notes: vec![OWNERSHIP_NOTE.to_string()],
    };
    match kind {
        GadgetKind::Variable => {
            let v = verify_variable_gadget(backend)?;
            if !v.holds {
                report.status = Status::Fail;
            }
            report.variable = Some(v);
            return Ok(report);
        }
        GadgetKind::Goal => {
            let g = verify_goal_gadget(backend)?;
            if !g.holds {
                report.status = Status::Fail;
            }
            report.goal = Some(g);
            return Ok(report);
        }
        _ => {}
    }
    let outs = t.out_ports();
    for input in all_patterns(t.in_ports().len()) {
        let fragment = resolve_inputs(&t, &input)?;
        let cost = min_blue_moves(&fragment, &outs)?;
        let expected = downward_closure(&logical_outputs(kind, &input));
        let closure_ok = cost.minimal_outputs == expected;
        let gap_ok =
            cost.pattern_costs.iter().filter(|(p, _)| !expected.contains(p)).all(|&(_, c)| c > cost.min_cost);
        if !(closure_ok && gap_ok && cost.top_free) {
            report.status = Status::Fail;
            report.notes.push(format!(
                "input {}: cheapest outputs {:?}, expected {:?}",
                show_pattern(&input),
                cost.minimal_outputs.iter().map(|p| show_pattern(p)).collect::<Vec<_>>(),
                expected.iter().map(|p| show_pattern(p)).collect::<Vec<_>>()
            ));
        }
        report.rows.push(TruthRow { input, expected, report: cost, closure_ok, gap_ok });
    }
    let owned_reds = t.owned_companions().len();
    let min_costs: Vec<usize> = report.rows.iter().map(|r| r.report.min_cost).collect();
    let holds = min_costs.iter().all(|&c| c == owned_reds);
    if !holds {
        report.status = Status::Fail;
        report.notes.push(format!("red balance: {owned_reds} owned reds, cheapest costs {min_costs:?}"));
    }
    report.red_balance = Some(RedBalance { owned_reds, min_costs, holds });
    if (kind, backend) == (GadgetKind::Choice, Backend::Triangular) && report.status == Status::Pass {
        let row = report.rows.iter().find(|r| r.input == [Signal::I]).expect("input I row");
        let both_active = row.report.cost_of(&[Signal::A, Signal::A]);
        report.status = Status::Warn;
        report.notes.push(format!(
            "discrepancy: with input I the oracle's cheapest outputs are {:?} at cost {} and (A,A) costs {}. \
             This agrees with the general CHOICE semantics (\"{GENERAL_CHOICE_TEXT}\") and contradicts the \
             triangular CHOICE text (\"{TRIANGULAR_CHOICE_TEXT}\").",
            row.report.minimal_outputs.iter().map(|p| show_pattern(p)).collect::<Vec<_>>(),
            row.report.min_cost,
            both_active.map_or("nothing (unreachable)".to_string(), |c| c.to_string()),
        ));
    }
    Ok(report)
}

/// Blue moves charged to one instance of the gadget, independent of inputs.
pub fn charged_cost(kind: GadgetKind, backend: Backend) -> Result<usize, VerifyError> {
    let t = gadget_template(kind, backend)?;
    match kind {
        GadgetKind::Goal => Ok(0),
        GadgetKind::Variable => Ok(verify_variable_gadget(backend)?.red_b.active),
        _ => {
            let all_a = vec![Signal::A; t.in_ports().len()];
            Ok(min_blue_moves(&resolve_inputs(&t, &all_a)?, &t.out_ports())?.min_cost)
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OutputCosts {
    pub inactive: usize,
    pub active: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VariableReport {
    pub backend: Backend,
    /// Totals after Red opens on edge c.
    pub red_c: OutputCosts,
    /// Totals after Red opens on edge b.
    pub red_b: OutputCosts,
    /// Blue opens on d: activation total counting d, without the split-off pair.
    pub blue_d_activation: usize,
    /// The same total when the detached blue a edge is counted too.
    pub blue_d_activation_with_pair: usize,
    /// After Blue's d the blue a edge and red b edge form their own component.
    pub pair_detached: bool,
    pub holds: bool,
}

fn labelled(t: &GadgetTemplate, label: &str) -> EdgeId {
    t.edge_labelled(label).unwrap_or_else(|| panic!("{} {} lacks edge {label}", t.kind, t.backend))
}

fn play(g: &ColouredGraph, e: EdgeId) -> ColouredGraph {
    let e = g.edge(e).expect("edge present");
    g.remove_vertices(&[e.u, e.v].into_iter().collect())
}

fn output_costs(g: &ColouredGraph, port: &InterfacePort) -> Result<OutputCosts, VerifyError> {
    let r = min_blue_moves(g, std::slice::from_ref(port))?;
    let c = |s| r.cost_of(&[s]).expect("both outputs reachable");
    Ok(OutputCosts { inactive: c(Signal::I), active: c(Signal::A) })
}

/// Vertices reachable from `start` along any edge.
fn component(g: &ColouredGraph, start: VertexId) -> HashSet<VertexId> {
    let mut seen = HashSet::from([start]);
    let mut stack = vec![start];
    while let Some(v) = stack.pop() {
        for e in g.incident(v) {
            let w = e.other(v);
            if seen.insert(w) {
                stack.push(w);
            }
        }
    }
    seen
}

pub fn verify_variable_gadget(backend: Backend) -> Result<VariableReport, VerifyError> {
    let t = gadget_template(GadgetKind::Variable, backend)?;
    let out = t.out_ports()[0];
    let red_c = output_costs(&play(&t.fragment, labelled(&t, "c")), &out)?;
    let red_b = output_costs(&play(&t.fragment, labelled(&t, "b")), &out)?;

    let after_d = play(&t.fragment, labelled(&t, "d"));
    let a = after_d.edge(labelled(&t, "a")).expect("a survives d");
    let pair = component(&after_d, a.u);
    let pair_colours: BTreeSet<_> =
        after_d.edges().iter().filter(|e| pair.contains(&e.u)).map(|e| (e.colour, e.label.clone())).collect();
    let pair_detached = !pair.contains(&out.center)
        && pair_colours
            == BTreeSet::from([(EdgeColour::Blue, Some("a".into())), (EdgeColour::Red, Some("b".into()))]);
    let rest = after_d.remove_vertices(&pair.iter().copied().collect());
    let with_d = |c: OutputCosts| c.active + 1;
    let blue_d_activation = with_d(output_costs(&rest, &out)?);
    let blue_d_activation_with_pair = with_d(output_costs(&after_d, &out)?);

    let holds = red_c.active == red_c.inactive + 1
        && red_c.active > red_b.active.max(red_b.inactive)
        && pair_detached
        && blue_d_activation == red_b.active.min(red_b.inactive);
    Ok(VariableReport { backend, red_c, red_b, blue_d_activation, blue_d_activation_with_pair, pair_detached, holds })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GoalReport {
    pub backend: Backend,
    /// Total Blue moves including the resolving play.
    pub active_total: usize,
    pub inactive_total: usize,
    pub g_cleared_by_a: bool,
    pub g_isolated_after_i: bool,
    pub holds: bool,
}

pub fn verify_goal_gadget(backend: Backend) -> Result<GoalReport, VerifyError> {
    let t = gadget_template(GadgetKind::Goal, backend)?;
    let g = labelled(&t, "G");
    let total = |s: Signal| -> Result<(ColouredGraph, usize), VerifyError> {
        let f = resolve_inputs(&t, &[s])?;
        let c = min_blue_moves(&f, &[])?.min_cost;
        Ok((f, c + 1))
    };
    let (after_a, active_total) = total(Signal::A)?;
    let (after_i, inactive_total) = total(Signal::I)?;
    let g_cleared_by_a = after_a.edge(g).is_none();
    let g_isolated_after_i = after_i.edge(g).is_some_and(|e| after_i.degree(e.u) == 1 && after_i.degree(e.v) == 1);
    let holds = g_cleared_by_a && g_isolated_after_i && active_total == 1 && inactive_total == 2;
    Ok(GoalReport { backend, active_total, inactive_total, g_cleared_by_a, g_isolated_after_i, holds })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlanarityRow {
    pub name: String,
    pub planar: bool,
    pub embedding: Option<Embedding>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlanarityReport {
    pub templates: Vec<PlanarityRow>,
    /// Line graphs of K5 and K3,3, which must be non-planar.
    pub controls: Vec<PlanarityRow>,
}

impl PlanarityReport {
    pub fn holds(&self) -> bool {
        self.templates.iter().all(|r| r.planar) && self.controls.iter().all(|r| !r.planar)
    }
}

fn line_planarity(name: String, g: &ColouredGraph) -> PlanarityRow {
    let p = is_planar(&line_graph(g));
    PlanarityRow { name, planar: p.is_planar(), embedding: p.embedding().cloned() }
}

fn plain_graph(n: i64, edges: &[(i64, i64)]) -> ColouredGraph {
    let vs: Vec<RawVertex> = (0..n).map(|id| RawVertex { id, coord: None }).collect();
    let es: Vec<RawEdge> =
        edges.iter().enumerate().map(|(i, &(u, v))| RawEdge::new(i as i64, u, v, EdgeColour::Blue)).collect();
    build_graph(&vs, &es, Lattice::None).expect("control graph")
}

pub fn verify_line_graph_planarity() -> PlanarityReport {
    let templates = crate::gadgets::defined_templates()
        .into_par_iter()
        .map(|(kind, backend)| {
            let t = gadget_template(kind, backend).expect("defined");
            line_planarity(format!("{kind} {backend}"), &t.fragment)
        })
        .collect();
    let k5: Vec<(i64, i64)> = (0..5).flat_map(|a| (a + 1..5).map(move |b| (a, b))).collect();
    let k33: Vec<(i64, i64)> = (0..3).flat_map(|a| (3..6).map(move |b| (a, b))).collect();
    let controls =
        vec![line_planarity("K5".into(), &plain_graph(5, &k5)), line_planarity("K3,3".into(), &plain_graph(6, &k33))];
    PlanarityReport { templates, controls }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixReport {
    pub ownership: String,
    pub gadgets: Vec<TruthTableReport>,
    pub line_graphs: PlanarityReport,
}

impl MatrixReport {
    pub fn passed(&self) -> bool {
        self.gadgets.iter().all(TruthTableReport::passed) && self.line_graphs.holds()
    }
}

impl fmt::Display for MatrixReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "cost ownership: {}", self.ownership)?;
        for g in &self.gadgets {
            let tag = match g.status {
                Status::Pass => "PASS",
                Status::Warn => "WARN",
                Status::Fail => "FAIL",
            };
            write!(f, "{tag} {} {}", g.kind, g.backend)?;
            for r in &g.rows {
                write!(f, " {}->{}@{}", show_pattern(&r.input), r.report.minimal_outputs.len(), r.report.min_cost)?;
            }
            writeln!(f)?;
            for n in g.notes.iter().skip(1) {
                writeln!(f, "  {n}")?;
            }
        }
        let bad: Vec<&str> = self.line_graphs.templates.iter().filter(|r| !r.planar).map(|r| r.name.as_str()).collect();
        writeln!(
            f,
            "{} line graphs planar: {}/{}{}",
            if self.line_graphs.holds() { "PASS" } else { "FAIL" },
            self.line_graphs.templates.len() - bad.len(),
            self.line_graphs.templates.len(),
            if bad.is_empty() { String::new() } else { format!(" (not: {})", bad.join(", ")) }
        )
    }
}

/// Truth tables for the requested templates, or every defined one.
pub fn verify_matrix(filter: Option<(Option<GadgetKind>, Option<Backend>)>) -> Result<MatrixReport, VerifyError> {
    let (kind, backend) = filter.unwrap_or((None, None));
    let wanted: Vec<_> = crate::gadgets::defined_templates()
        .into_iter()
        .filter(|&(k, b)| kind.is_none_or(|x| x == k) && backend.is_none_or(|x| x == b))
        .collect();
    if let (Some(k), Some(b)) = (kind, backend) {
        if wanted.is_empty() {
            return Err(GadgetError::UndefinedTemplate(k, b).into());
        }
    }
    let gadgets =
        wanted.into_par_iter().map(|(k, b)| verify_truth_table(k, b)).collect::<Result<Vec<_>, _>>()?;
    Ok(MatrixReport { ownership: OWNERSHIP_NOTE.to_string(), gadgets, line_graphs: verify_line_graph_planarity() })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closure_of_choice() {
        let c = downward_closure(&[vec![Signal::A, Signal::I], vec![Signal::I, Signal::A]]);
        assert_eq!(c.len(), 3);
        assert!(!c.contains(&vec![Signal::A, Signal::A]));
    }

    #[test]
    fn and_resolution_removes_internal_edges() {
        let t = gadget_template(GadgetKind::And, Backend::General).unwrap();
        let (a, b) = (t.edge_labelled("a").unwrap(), t.edge_labelled("b").unwrap());
        let both = resolve_inputs(&t, &[Signal::A, Signal::A]).unwrap();
        assert!(both.edge(a).is_none() && both.edge(b).is_none());
        let upper_only = resolve_inputs(&t, &[Signal::I, Signal::A]).unwrap();
        assert!(upper_only.edge(a).is_some() && upper_only.edge(b).is_none());
        assert_eq!(
            resolve_inputs(&t, &[Signal::A]),
            Err(VerifyError::ArityMismatch { expected: 2, got: 1 })
        );
    }
}
