//! Arc Kayles gadget templates for the general graph, Cartesian grid and
//! triangular grid backends.
//!
//! Every gadget talks to its neighbours through the four-vertex interface:
//! a center with an I edge, an A edge and a Top edge, plus one isolated red
//! companion edge. Signals flow left to right: an In port's A end and an Out
//! port's I end are where the gadget's own edges attach.
//!
//! Coordinates follow the drawings. General templates use the drawing units
//! divided by 0.75, Cartesian templates are on the unit square grid and
//! triangular templates use axial coordinates. Red companions are isolated,
//! so they are put on the nearest free lattice edge to where they are drawn.

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{ColouredGraph, Coord, Edge, EdgeColour, EdgeId, Lattice, Vertex, VertexId};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GadgetKind {
    Interface,
    Goal,
    Variable,
    WireEven,
    WireOdd,
    And,
    Or,
    Fanout,
    Choice,
}

impl GadgetKind {
    pub const ALL: [GadgetKind; 9] = [
        GadgetKind::Interface,
        GadgetKind::Goal,
        GadgetKind::Variable,
        GadgetKind::WireEven,
        GadgetKind::WireOdd,
        GadgetKind::And,
        GadgetKind::Or,
        GadgetKind::Fanout,
        GadgetKind::Choice,
    ];
}

impl fmt::Display for GadgetKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = serde_json::to_value(self).expect("unit variant");
        f.write_str(s.as_str().expect("string"))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Backend {
    General,
    Cartesian,
    Triangular,
}

impl Backend {
    pub const ALL: [Backend; 3] = [Backend::General, Backend::Cartesian, Backend::Triangular];

    pub fn lattice(self) -> Lattice {
        match self {
            Backend::General => Lattice::None,
            Backend::Cartesian => Lattice::Cartesian,
            Backend::Triangular => Lattice::Triangular,
        }
    }
}

impl fmt::Display for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Backend::General => "general",
            Backend::Cartesian => "cartesian",
            Backend::Triangular => "triangular",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PortDirection {
    In,
    Out,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WireParity {
    Even,
    Odd,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InterfacePort {
    pub direction: PortDirection,
    pub center: VertexId,
    pub i_end: VertexId,
    pub a_end: VertexId,
    pub top_end: VertexId,
    pub i_edge: EdgeId,
    pub a_edge: EdgeId,
    pub top_edge: EdgeId,
    pub companion: EdgeId,
}

impl InterfacePort {
    pub fn vertices(&self) -> [VertexId; 4] {
        [self.center, self.i_end, self.a_end, self.top_end]
    }

    pub fn blue_edges(&self) -> [EdgeId; 3] {
        [self.i_edge, self.a_edge, self.top_edge]
    }

    /// Where the owning gadget's other edges meet this interface.
    pub fn attachment(&self) -> VertexId {
        match self.direction {
            PortDirection::In => self.a_end,
            PortDirection::Out => self.i_end,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GadgetTemplate {
    pub kind: GadgetKind,
    pub backend: Backend,
    pub fragment: ColouredGraph,
    /// In ports first, then Out ports. Two inputs are listed bottom first;
    /// two outputs top first.
    pub ports: Vec<InterfacePort>,
    /// Isolated red edges: one per port plus any extra the drawing has.
    pub companions: Vec<EdgeId>,
}

impl GadgetTemplate {
    pub fn in_ports(&self) -> Vec<InterfacePort> {
        self.ports.iter().copied().filter(|p| p.direction == PortDirection::In).collect()
    }

    pub fn out_ports(&self) -> Vec<InterfacePort> {
        self.ports.iter().copied().filter(|p| p.direction == PortDirection::Out).collect()
    }

    /// The edge carrying a lettered label from the drawing.
    pub fn edge_labelled(&self, label: &str) -> Option<EdgeId> {
        self.fragment.edges().iter().find(|e| e.label.as_deref() == Some(label)).map(|e| e.id)
    }

    pub fn blue_edge_count(&self) -> usize {
        self.fragment.edges_of_colour(EdgeColour::Blue).count()
    }

    pub fn red_edge_count(&self) -> usize {
        self.fragment.edges_of_colour(EdgeColour::Red).count()
    }

    /// Red companions not belonging to an In port; In ports are owned by
    /// the producing gadget.
    pub fn owned_companions(&self) -> Vec<EdgeId> {
        let foreign: Vec<EdgeId> = self.in_ports().iter().map(|p| p.companion).collect();
        self.companions.iter().copied().filter(|e| !foreign.contains(e)).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GadgetError {
    #[error("no {0} gadget is defined for the {1} backend")]
    UndefinedTemplate(GadgetKind, Backend),
}

type Hint = ((f64, f64), (f64, f64));

/// Offsets of I end, A end and Top end from an interface center.
fn interface_offsets(backend: Backend) -> [Coord; 3] {
    match backend {
        Backend::General => [(-2, 0), (2, 0), (0, 2)],
        Backend::Cartesian => [(-1, 0), (1, 0), (0, 1)],
        Backend::Triangular => [(-1, 0), (1, 0), (-1, 1)],
    }
}

struct Draft {
    kind: GadgetKind,
    backend: Backend,
    coords: Vec<Coord>,
    edges: Vec<(VertexId, VertexId, EdgeColour, String)>,
    ports: Vec<(PortDirection, [VertexId; 4], [EdgeId; 3], usize)>,
    reds: Vec<Hint>,
}

impl Draft {
    fn new(kind: GadgetKind, backend: Backend) -> Self {
        Draft { kind, backend, coords: Vec::new(), edges: Vec::new(), ports: Vec::new(), reds: Vec::new() }
    }

    fn v(&mut self, c: Coord) -> VertexId {
        debug_assert!(!self.coords.contains(&c), "{:?} {:?} reuses {c:?}", self.kind, self.backend);
        self.coords.push(c);
        self.coords.len() - 1
    }

    fn at(&self, c: Coord) -> VertexId {
        self.coords.iter().position(|&x| x == c).unwrap_or_else(|| panic!("no vertex at {c:?}"))
    }

    fn edge(&mut self, a: Coord, b: Coord, colour: EdgeColour, label: &str) -> EdgeId {
        let (u, v) = (self.at(a), self.at(b));
        self.edges.push((u, v, colour, label.to_string()));
        self.edges.len() - 1
    }

    fn blue(&mut self, a: Coord, b: Coord, label: &str) -> EdgeId {
        for c in [a, b] {
            if !self.coords.contains(&c) {
                self.v(c);
            }
        }
        self.edge(a, b, EdgeColour::Blue, label)
    }

    fn red_path(&mut self, a: Coord, b: Coord, label: &str) -> EdgeId {
        for c in [a, b] {
            if !self.coords.contains(&c) {
                self.v(c);
            }
        }
        self.edge(a, b, EdgeColour::Red, label)
    }

    /// Isolated red edge drawn between `a` and `b`.
    fn red(&mut self, a: (f64, f64), b: (f64, f64)) -> usize {
        self.reds.push((a, b));
        self.reds.len() - 1
    }

    /// Interface at `center`, with optional letters for the I and A edges.
    fn port(&mut self, dir: PortDirection, center: Coord, letters: [&str; 2], red: Hint) {
        let [oi, oa, ot] = interface_offsets(self.backend);
        let add = |c: Coord, o: Coord| (c.0 + o.0, c.1 + o.1);
        let ids = [center, add(center, oi), add(center, oa), add(center, ot)].map(|c| {
            if self.coords.contains(&c) {
                self.at(c)
            } else {
                self.v(c)
            }
        });
        let li = if letters[0].is_empty() { "I" } else { letters[0] };
        let la = if letters[1].is_empty() { "A" } else { letters[1] };
        let e = [
            self.edge(center, add(center, oi), EdgeColour::Blue, li),
            self.edge(center, add(center, oa), EdgeColour::Blue, la),
            self.edge(center, add(center, ot), EdgeColour::Blue, "top"),
        ];
        let r = self.red(red.0, red.1);
        self.ports.push((dir, ids, e, r));
    }

    fn finish(self) -> GadgetTemplate {
        let lattice = self.backend.lattice();
        let mut occupied: HashSet<Coord> = self.coords.iter().copied().collect();
        let mut coords = self.coords.clone();
        let mut edges = self.edges.clone();
        let mut red_ids = Vec::new();
        for &(a, b) in &self.reds {
            let (p, q) = place_red(&occupied, lattice, Some((a, b)), plane_mid(lattice, a, b));
            occupied.insert(p);
            occupied.insert(q);
            coords.push(p);
            coords.push(q);
            edges.push((coords.len() - 2, coords.len() - 1, EdgeColour::Red, "red".into()));
            red_ids.push(edges.len() - 1);
        }
        let vertices: Vec<Vertex> =
            coords.iter().enumerate().map(|(id, &c)| Vertex { id, coord: Some(c), label: None }).collect();
        let graph_edges: Vec<Edge> = edges
            .iter()
            .enumerate()
            .map(|(id, (u, v, colour, label))| Edge { id, u: *u, v: *v, colour: *colour, label: Some(label.clone()) })
            .collect();
        let fragment = ColouredGraph::from_parts(vertices, graph_edges, lattice).expect("template is well formed");
        let mut ports: Vec<InterfacePort> = self
            .ports
            .iter()
            .map(|&(direction, [center, i_end, a_end, top_end], [i_edge, a_edge, top_edge], r)| InterfacePort {
                direction,
                center,
                i_end,
                a_end,
                top_end,
                i_edge,
                a_edge,
                top_edge,
                companion: red_ids[r],
            })
            .collect();
        ports.sort_by_key(|p| p.direction == PortDirection::Out);
        GadgetTemplate { kind: self.kind, backend: self.backend, fragment, ports, companions: red_ids }
    }
}

/// Planar midpoint of a drawn segment given in lattice coordinates.
fn plane_mid(lattice: Lattice, a: (f64, f64), b: (f64, f64)) -> (f64, f64) {
    let to = |p: (f64, f64)| match lattice {
        Lattice::Triangular => (p.0 + p.1 * 0.5, p.1 * 3f64.sqrt() / 2.0),
        _ => p,
    };
    let (pa, pb) = (to(a), to(b));
    ((pa.0 + pb.0) / 2.0, (pa.1 + pb.1) / 2.0)
}

/// Picks a unit edge with both ends free. Uses the drawn endpoints when
/// they are already integral, free and (on a lattice) one step apart;
/// otherwise the free edge whose midpoint is nearest `target`.
pub(crate) fn place_red(
    occupied: &HashSet<Coord>,
    lattice: Lattice,
    drawn: Option<Hint>,
    target: (f64, f64),
) -> (Coord, Coord) {
    if let Some((a, b)) = drawn {
        let int = |p: (f64, f64)| (p.0.fract() == 0.0 && p.1.fract() == 0.0).then_some((p.0 as i32, p.1 as i32));
        if let (Some(p), Some(q)) = (int(a), int(b)) {
            let step_ok = lattice == Lattice::None || lattice.is_unit_step(p, q);
            if p != q && step_ok && !occupied.contains(&p) && !occupied.contains(&q) {
                return (p, q);
            }
        }
    }
    let steps: &[Coord] = match lattice {
        Lattice::Triangular => &[(1, 0), (0, 1), (1, -1)],
        _ => &[(1, 0), (0, 1)],
    };
    // Invert the plane map to find a lattice point near the target.
    let (cx, cy) = match lattice {
        Lattice::Triangular => {
            let r = target.1 / (3f64.sqrt() / 2.0);
            (target.0 - r * 0.5, r)
        }
        _ => target,
    };
    let (cx, cy) = (cx.round() as i32, cy.round() as i32);
    let mut best: Option<(f64, Coord, Coord)> = None;
    for radius in 0..64 {
        for x in cx - radius..=cx + radius {
            for y in cy - radius..=cy + radius {
                if (x - cx).abs().max((y - cy).abs()) != radius {
                    continue;
                }
                for &s in steps {
                    let (p, q) = ((x, y), (x + s.0, y + s.1));
                    if occupied.contains(&p) || occupied.contains(&q) {
                        continue;
                    }
                    let (pp, qq) = (lattice.to_plane(p), lattice.to_plane(q));
                    let mid = ((pp.0 + qq.0) / 2.0, (pp.1 + qq.1) / 2.0);
                    let d = (mid.0 - target.0).powi(2) + (mid.1 - target.1).powi(2);
                    if best.is_none_or(|(bd, bp, bq)| (d, p, q) < (bd, bp, bq)) {
                        best = Some((d, p, q));
                    }
                }
            }
        }
        // Anything further out is at least `radius` away.
        if let Some((d, p, q)) = best {
            if d.sqrt() + 1.5 < radius as f64 {
                return (p, q);
            }
        }
    }
    let (_, p, q) = best.expect("free lattice edge");
    (p, q)
}

pub fn gadget_template(kind: GadgetKind, backend: Backend) -> Result<GadgetTemplate, GadgetError> {
    use Backend::*;
    use GadgetKind::*;
    let undefined = Err(GadgetError::UndefinedTemplate(kind, backend));
    Ok(match (kind, backend) {
        (Interface, _) => interface(backend),
        (Goal, _) => goal(backend),
        (Variable, _) => variable(backend),
        (WireEven, General) | (WireOdd, General) => return undefined,
        (WireEven, _) => wire(WireParity::Even, backend),
        (WireOdd, _) => wire(WireParity::Odd, backend),
        (And, General) => general_and(),
        (Or, General) => general_or(),
        (Fanout, General) => general_split(false),
        (Choice, General) => general_split(true),
        (And, Cartesian) => cartesian_and(),
        (Or, Cartesian) => cartesian_or(),
        (Fanout, Cartesian) => cartesian_fanout(),
        (Choice, Cartesian) => cartesian_choice(),
        (And, Triangular) => triangular_and(),
        (Or, Triangular) => triangular_or(),
        (Fanout, Triangular) => triangular_fanout(),
        (Choice, Triangular) => triangular_choice(),
    })
}

pub fn make_wire(parity: WireParity, backend: Backend) -> Result<GadgetTemplate, GadgetError> {
    let kind = match parity {
        WireParity::Even => GadgetKind::WireEven,
        WireParity::Odd => GadgetKind::WireOdd,
    };
    gadget_template(kind, backend)
}

/// Every (kind, backend) pair with a template.
pub fn defined_templates() -> Vec<(GadgetKind, Backend)> {
    let mut out = Vec::new();
    for backend in Backend::ALL {
        for kind in GadgetKind::ALL {
            if gadget_template(kind, backend).is_ok() {
                out.push((kind, backend));
            }
        }
    }
    out
}

/// Horizontal distance between a wire's In and Out centers.
pub fn wire_shift(parity: WireParity) -> i32 {
    match parity {
        WireParity::Even => 4,
        WireParity::Odd => 5,
    }
}

fn below(backend: Backend, c: Coord) -> Hint {
    let (x, y) = (c.0 as f64, c.1 as f64);
    match backend {
        Backend::General => ((x - 1.0, y - 1.0), (x + 1.0, y - 1.0)),
        _ => ((x - 0.5, y - 0.5), (x + 0.5, y - 0.5)),
    }
}

use PortDirection::{In, Out};

fn interface(backend: Backend) -> GadgetTemplate {
    let mut d = Draft::new(GadgetKind::Interface, backend);
    let c = match backend {
        Backend::General => (2, 0),
        _ => (1, 0),
    };
    d.port(Out, c, ["", ""], below(backend, c));
    d.finish()
}

fn goal(backend: Backend) -> GadgetTemplate {
    let mut d = Draft::new(GadgetKind::Goal, backend);
    let (c, g) = match backend {
        Backend::General => ((2, 0), [(4, 0), (6, 0)]),
        _ => ((1, 0), [(2, 0), (3, 0)]),
    };
    d.port(In, c, ["", ""], below(backend, c));
    d.blue(g[0], g[1], "G");
    d.finish()
}

/// A path a..h with red b, c in the middle and the Out interface at the end.
fn variable(backend: Backend) -> GadgetTemplate {
    let mut d = Draft::new(GadgetKind::Variable, backend);
    let s = if backend == Backend::General { 2 } else { 1 };
    let x = |i: i32| (i * s, 0);
    d.blue(x(0), x(1), "a");
    d.red_path(x(1), x(2), "b");
    d.red_path(x(2), x(3), "c");
    d.blue(x(3), x(4), "d");
    d.blue(x(4), x(5), "e");
    d.port(Out, x(6), ["f", "g"], below(backend, x(6)));
    d.finish()
}

fn wire(parity: WireParity, backend: Backend) -> GadgetTemplate {
    let kind = match parity {
        WireParity::Even => GadgetKind::WireEven,
        WireParity::Odd => GadgetKind::WireOdd,
    };
    let mut d = Draft::new(kind, backend);
    // Pendants lean the same way as the interface Top edges.
    let up = interface_offsets(backend)[2];
    let pend = |c: Coord| (c.0 + up.0, c.1 + up.1);
    d.port(In, (1, 0), ["", ""], below(backend, (1, 0)));
    match parity {
        WireParity::Even => {
            d.blue((2, 0), pend((2, 0)), "a");
            d.blue((2, 0), (3, 0), "b");
            d.blue((3, 0), pend((3, 0)), "c");
            d.blue((3, 0), (4, 0), "d");
            d.blue((4, 0), pend((4, 0)), "e");
            d.red((2.5, -0.5), (3.5, -0.5));
            d.port(Out, (5, 0), ["f", "g"], below(backend, (5, 0)));
        }
        WireParity::Odd => {
            d.blue((3, 0), (2, 0), "a");
            d.blue((3, 0), (4, 0), "b");
            d.blue((4, 0), pend((4, 0)), "c");
            d.blue((4, 0), (5, 0), "d");
            d.blue((5, 0), pend((5, 0)), "e");
            d.red((3.0, -0.5), (4.0, -0.5));
            d.port(Out, (6, 0), ["f", "g"], below(backend, (6, 0)));
        }
    }
    d.finish()
}

fn general_and() -> GadgetTemplate {
    let b = Backend::General;
    let mut d = Draft::new(GadgetKind::And, b);
    d.port(In, (2, 0), ["", ""], ((1.0, -1.0), (3.0, -1.0)));
    d.port(In, (2, 4), ["", ""], ((1.0, 3.0), (3.0, 3.0)));
    d.port(Out, (8, 2), ["c", "d"], ((7.0, 1.0), (9.0, 1.0)));
    d.blue((6, 2), (4, 0), "a");
    d.blue((6, 2), (4, 4), "b");
    // The Out Top edge carries the drawing's letter e.
    relabel(&mut d, (8, 2), (8, 4), "e");
    d.finish()
}

fn relabel(d: &mut Draft, a: Coord, b: Coord, label: &str) {
    let (u, v) = (d.at(a), d.at(b));
    let e = d.edges.iter_mut().find(|e| (e.0 == u && e.1 == v) || (e.0 == v && e.1 == u)).expect("edge");
    e.3 = label.to_string();
}

fn general_or() -> GadgetTemplate {
    let b = Backend::General;
    let mut d = Draft::new(GadgetKind::Or, b);
    d.port(In, (2, 0), ["", ""], ((1.0, -1.0), (3.0, -1.0)));
    d.port(In, (2, 4), ["", ""], ((1.0, 3.0), (3.0, 3.0)));
    d.blue((4, 4), (4, 0), "a");
    d.blue((4, 4), (6, 2), "b");
    d.blue((6, 2), (4, 0), "c");
    d.blue((6, 2), (8, 2), "d");
    d.blue((8, 2), (10, 2), "e");
    d.red((8.0, 1.0), (6.0, 1.0));
    d.port(Out, (12, 2), ["f", "g"], ((13.0, 1.0), (11.0, 1.0)));
    d.finish()
}

/// FANOUT, or CHOICE with the extra edge `c` between the two I ends.
fn general_split(choice: bool) -> GadgetTemplate {
    let b = Backend::General;
    let kind = if choice { GadgetKind::Choice } else { GadgetKind::Fanout };
    let mut d = Draft::new(kind, b);
    d.port(In, (2, 2), ["", ""], ((1.0, 1.0), (3.0, 1.0)));
    if choice {
        d.port(Out, (8, 4), ["d", "e"], ((9.0, 3.0), (7.0, 3.0)));
        d.port(Out, (8, 0), ["f", "g"], ((7.0, -1.0), (9.0, -1.0)));
        d.blue((6, 0), (6, 4), "c");
    } else {
        d.port(Out, (8, 4), ["c", "d"], ((9.0, 3.0), (7.0, 3.0)));
        d.port(Out, (8, 0), ["e", "f"], ((7.0, -1.0), (9.0, -1.0)));
    }
    d.blue((4, 2), (6, 4), "a");
    d.blue((4, 2), (6, 0), "b");
    d.finish()
}

fn cartesian_and() -> GadgetTemplate {
    let b = Backend::Cartesian;
    let mut d = Draft::new(GadgetKind::And, b);
    d.port(In, (1, 0), ["", ""], ((0.5, -0.5), (1.5, -0.5)));
    d.port(In, (1, 2), ["", ""], ((0.5, 1.5), (1.5, 1.5)));
    d.port(Out, (3, 1), ["", ""], ((2.5, 0.5), (3.5, 0.5)));
    d.blue((2, 1), (2, 2), "a");
    d.blue((2, 1), (2, 0), "b");
    d.finish()
}

fn cartesian_fanout() -> GadgetTemplate {
    let b = Backend::Cartesian;
    let mut d = Draft::new(GadgetKind::Fanout, b);
    d.port(In, (1, 1), ["", ""], ((0.5, 0.5), (1.5, 0.5)));
    d.port(Out, (3, 2), ["", ""], ((2.5, 1.5), (3.5, 1.5)));
    d.port(Out, (3, 0), ["", ""], ((2.5, -0.5), (3.5, -0.5)));
    d.blue((2, 1), (2, 0), "a");
    d.blue((2, 1), (2, 2), "b");
    d.finish()
}

fn cartesian_or() -> GadgetTemplate {
    let b = Backend::Cartesian;
    let mut d = Draft::new(GadgetKind::Or, b);
    let h = |x: f64, y: f64| (x / 1.5, y / 1.5);
    d.port(In, (1, 0), ["", ""], (h(0.75, -0.75), h(2.25, -0.75)));
    d.port(In, (1, 2), ["", ""], (h(0.75, 2.25), h(2.25, 2.25)));
    d.blue((3, 2), (2, 2), "b");
    d.blue((3, 2), (3, 1), "d");
    d.blue((3, 0), (2, 0), "f");
    d.blue((3, 0), (3, 1), "h");
    d.blue((2, 3), (2, 2), "a");
    d.blue((3, 3), (3, 2), "c");
    d.blue((2, 0), (2, -1), "e");
    d.blue((3, 0), (3, -1), "g");
    d.blue((4, 1), (3, 1), "i");
    d.red(h(2.25, 0.75), h(3.75, 0.75));
    d.red(h(2.25, 1.5), h(3.75, 1.5));
    d.port(Out, (5, 1), ["j", "k"], (h(6.75, 0.75), h(8.25, 0.75)));
    relabel(&mut d, (5, 1), (5, 2), "l");
    d.finish()
}

fn cartesian_choice() -> GadgetTemplate {
    let b = Backend::Cartesian;
    let mut d = Draft::new(GadgetKind::Choice, b);
    let h = |x: f64, y: f64| (x / 1.5, y / 1.5);
    d.port(In, (1, 1), ["", ""], (h(0.75, 0.75), h(2.25, 0.75)));
    d.port(Out, (7, 2), ["o", "q"], (h(9.75, 2.25), h(11.25, 2.25)));
    d.port(Out, (7, 0), ["p", "r"], (h(9.75, -0.75), h(11.25, -0.75)));
    d.blue((2, 1), (2, 0), "b");
    d.blue((2, 1), (2, 2), "a");
    d.blue((2, 1), (3, 1), "d");
    d.blue((3, 0), (2, 0), "e");
    d.blue((3, 0), (4, 0), "j");
    d.blue((3, 0), (3, 1), "g");
    d.blue((3, 2), (2, 2), "c");
    d.blue((3, 2), (4, 2), "h");
    d.blue((3, 2), (3, 1), "f");
    d.blue((3, 1), (4, 1), "i");
    d.blue((5, 2), (4, 2), "k");
    d.blue((5, 2), (6, 2), "m");
    d.blue((5, 0), (4, 0), "l");
    d.blue((5, 0), (6, 0), "n");
    d.red(h(6.75, 0.75), h(8.25, 0.75));
    d.red(h(6.75, 1.5), h(8.25, 1.5));
    d.red(h(6.75, 2.25), h(8.25, 2.25));
    d.finish()
}

// Triangular templates are in axial coordinates (q, r); a point is drawn at
// (q + r/2, r * sqrt(3)/2).

fn triangular_and() -> GadgetTemplate {
    let b = Backend::Triangular;
    let mut d = Draft::new(GadgetKind::And, b);
    d.port(In, (1, 0), ["", ""], ((0.75, -0.5), (1.75, -0.5)));
    d.port(In, (0, 2), ["", ""], ((0.25, 1.5), (1.25, 1.5)));
    d.port(Out, (3, 1), ["", ""], ((3.25, 0.5), (4.25, 0.5)));
    d.blue((2, 1), (2, 0), "a");
    d.blue((2, 1), (1, 2), "b");
    d.finish()
}

fn triangular_fanout() -> GadgetTemplate {
    let b = Backend::Triangular;
    let mut d = Draft::new(GadgetKind::Fanout, b);
    d.port(In, (1, 1), ["", ""], ((0.75, 0.5), (1.75, 0.5)));
    d.port(Out, (3, 2), ["", ""], ((3.0, 1.5), (4.0, 1.5)));
    d.port(Out, (4, 0), ["", ""], ((3.75, -0.5), (4.75, -0.5)));
    d.blue((2, 1), (2, 2), "a");
    d.blue((2, 1), (3, 0), "b");
    d.finish()
}

fn triangular_or() -> GadgetTemplate {
    let b = Backend::Triangular;
    let mut d = Draft::new(GadgetKind::Or, b);
    d.port(In, (1, 0), ["", ""], ((0.75, -0.5), (1.75, -0.5)));
    d.port(In, (0, 2), ["", ""], ((-0.25, 1.5), (0.75, 1.5)));
    d.blue((2, 2), (1, 2), "a");
    d.blue((2, 0), (2, 1), "b");
    d.blue((2, 2), (2, 1), "c");
    d.blue((3, 1), (2, 1), "d");
    d.blue((2, 2), (3, 1), "e");
    d.blue((3, 1), (4, 1), "f");
    d.red((2.75, 0.5), (3.75, 0.5));
    d.port(Out, (5, 1), ["", ""], ((4.75, 0.5), (5.75, 0.5)));
    d.finish()
}

fn triangular_choice() -> GadgetTemplate {
    let b = Backend::Triangular;
    let mut d = Draft::new(GadgetKind::Choice, b);
    d.port(In, (0, 2), ["", ""], ((-0.75, 1.5), (0.25, 1.5)));
    d.port(Out, (3, 4), ["", ""], ((2.75, 3.5), (3.75, 3.5)));
    d.port(Out, (5, 0), ["", ""], ((4.75, -0.5), (5.75, -0.5)));
    d.blue((1, 2), (0, 3), "a");
    d.blue((1, 2), (2, 2), "b");
    d.blue((2, 3), (2, 2), "c");
    d.blue((3, 1), (2, 2), "d");
    d.blue((2, 3), (2, 4), "e");
    d.blue((3, 1), (4, 0), "f");
    d.red((1.25, 1.5), (2.25, 1.5));
    d.finish()
}
