//! Lowering basis-only constraint-logic circuits to Misère Partizan Arc
//! Kayles positions built from the gadget library.
//!
//! Each CL vertex becomes one gadget and each blue arc one interface shared
//! by its producer (the arc's head) and consumer (its tail). The Blue goal arc
//! becomes the Goal gadget. The Red goal component has no gadget and is left
//! out; the two-arc red components are lowered per [`RedComponentLowering`].
//!
//! Lattice backends place gadgets backwards from the Goal. Every signal runs
//! horizontally, and chains of even and odd wires make up the horizontal gap
//! between a producer's Out port and its consumer's In port.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arck::{ArcKPosition, Convention};
use crate::cl::{classify_vertex, ClEdge, ClEdgeId, ClInstance, ClVertexId, VertexKind};
use crate::gadgets::{
    gadget_template, make_wire, place_red, wire_shift, Backend, GadgetKind, GadgetTemplate, InterfacePort,
    WireParity,
};
use crate::graph::{is_planar, ColouredGraph, Coord, Edge, EdgeColour, EdgeId, Embedding, Lattice, Vertex, VertexId};
use crate::verify::{charged_cost, VerifyError};
use crate::Player;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArcKCompileError {
    #[error("CL vertex {0} is not a basis vertex")]
    NonBasisVertex(ClVertexId),
    #[error("embedding is not a plane embedding of the instance")]
    NotPlanarEmbedding,
    #[error("{0} Variable gadgets cannot be paired with extra red edges")]
    OddVariableCount(usize),
    #[error("ports cannot be aligned: {0}")]
    PortMismatch(String),
    #[error("instance is not a compiled circuit: {0}")]
    Malformed(String),
    #[error(transparent)]
    Verify(#[from] VerifyError),
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RedComponentLowering {
    /// Companion reds already give Red one move per charged Blue move.
    Omit,
    /// One isolated red edge per component.
    #[default]
    Isolated,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArcKCompileOptions {
    pub red_components: RedComponentLowering,
    /// Pair extras become ⌊variables/2⌋ instead of an error on odd counts.
    pub allow_odd_variables: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PortRef {
    pub instance: usize,
    /// Index into the template's `ports`.
    pub port: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GadgetInstance {
    pub kind: GadgetKind,
    /// None for the Goal gadget and for wires.
    pub cl_vertex: Option<ClVertexId>,
    pub offset: Coord,
    /// Emitted vertex per template vertex; None for the ends of a companion
    /// merged away with its In port.
    pub vertices: Vec<Option<VertexId>>,
    /// Emitted edge per template edge; None where an In port was merged
    /// into its producer's Out port.
    pub edges: Vec<Option<EdgeId>>,
    /// In ports with no producer; the gadget owns these interfaces.
    pub stub_inputs: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Connection {
    pub cl_edge: ClEdgeId,
    pub producer: Option<PortRef>,
    pub consumer: Option<PortRef>,
    /// Wire instances from producer to consumer.
    pub wires: Vec<usize>,
    /// Emitted interfaces from producer to consumer, one more than wires.
    pub interfaces: Vec<InterfacePort>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RedLedger {
    /// Port companions, one per emitted interface.
    pub companions: Vec<EdgeId>,
    /// Other isolated reds drawn inside gadgets and wires.
    pub gadget_extras: Vec<EdgeId>,
    /// The red path inside each Variable gadget.
    pub variable_internal: Vec<EdgeId>,
    /// One per pair of Variable gadgets.
    pub variable_pairs: Vec<EdgeId>,
    pub k_components: Vec<EdgeId>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArcKTrace {
    pub backend: Backend,
    pub instances: Vec<GadgetInstance>,
    pub connections: Vec<Connection>,
    pub reds: RedLedger,
    /// CL arcs with no counterpart in the position.
    pub omitted: Vec<ClEdgeId>,
    /// CL red arcs lowered into `reds.k_components`, per component.
    pub red_components: Vec<Vec<ClEdgeId>>,
    pub options: ArcKCompileOptions,
}

impl ArcKTrace {
    /// Every emitted edge exactly once: blue edges per gadget instance, then
    /// the red ledger.
    pub fn buckets(&self) -> Vec<(String, Vec<EdgeId>)> {
        let mut reds: HashSet<EdgeId> = HashSet::new();
        for l in [
            &self.reds.companions,
            &self.reds.gadget_extras,
            &self.reds.variable_internal,
            &self.reds.variable_pairs,
            &self.reds.k_components,
        ] {
            reds.extend(l.iter().copied());
        }
        let mut out: Vec<(String, Vec<EdgeId>)> = self
            .instances
            .iter()
            .enumerate()
            .map(|(i, g)| {
                let blue = g.edges.iter().flatten().copied().filter(|e| !reds.contains(e)).collect();
                (format!("{}#{i}", g.kind), blue)
            })
            .collect();
        out.push(("companions".into(), self.reds.companions.clone()));
        out.push(("gadget_extras".into(), self.reds.gadget_extras.clone()));
        out.push(("variable_internal".into(), self.reds.variable_internal.clone()));
        out.push(("variable_pairs".into(), self.reds.variable_pairs.clone()));
        out.push(("k_components".into(), self.reds.k_components.clone()));
        out
    }

    pub fn variable_count(&self) -> usize {
        self.instances.iter().filter(|g| g.kind == GadgetKind::Variable).count()
    }
}

/// The instance as an undirected coloured graph with CL ids, which is what
/// embeddings are given for. A repeated arc between the same two vertices is
/// subdivided: its id stays on the tail half and the head half gets a fresh
/// id listed in the second return value.
pub fn cl_graph(inst: &ClInstance) -> (ColouredGraph, BTreeMap<EdgeId, ClEdgeId>) {
    let mut vertices: Vec<Vertex> = inst.vertices.iter().map(|v| Vertex { id: v.id, coord: None, label: None }).collect();
    let mut next_v = inst.vertices.iter().map(|v| v.id + 1).max().unwrap_or(0);
    let mut next_e = inst.edges.iter().map(|e| e.id + 1).max().unwrap_or(0);
    let mut seen = HashSet::new();
    let mut halves = BTreeMap::new();
    let mut edges = Vec::new();
    for e in &inst.edges {
        let colour = e.colour.colour();
        if seen.insert((e.tail.min(e.head), e.tail.max(e.head))) {
            edges.push(Edge { id: e.id, u: e.tail, v: e.head, colour, label: None });
            continue;
        }
        vertices.push(Vertex { id: next_v, coord: None, label: None });
        edges.push(Edge { id: e.id, u: e.tail, v: next_v, colour, label: None });
        edges.push(Edge { id: next_e, u: next_v, v: e.head, colour, label: None });
        halves.insert(next_e, e.id);
        next_v += 1;
        next_e += 1;
    }
    let g = ColouredGraph::from_parts(vertices, edges, Lattice::None).expect("subdivided instance is simple");
    (g, halves)
}

/// Adds a Variable vertex whose only consumer is a free arc end, so an odd
/// variable count becomes even.
pub fn pad_variables(inst: &ClInstance) -> ClInstance {
    let mut out = inst.clone();
    let next_v = inst.vertices.iter().map(|v| v.id + 1).max().unwrap_or(0);
    let next_e = inst.edges.iter().map(|e| e.id + 1).max().unwrap_or(0);
    let (var, red_end, blue_end) = (next_v, next_v + 1, next_v + 2);
    out.vertices.push(crate::cl::ClVertex { id: var, terminal: false });
    out.vertices.push(crate::cl::ClVertex { id: red_end, terminal: true });
    out.vertices.push(crate::cl::ClVertex { id: blue_end, terminal: true });
    out.edges.push(ClEdge::new(next_e, red_end, var, Player::Red, 2));
    out.edges.push(ClEdge::new(next_e + 1, blue_end, var, Player::Blue, 2));
    out
}

struct Analysis {
    gadgets: Vec<(ClVertexId, GadgetKind)>,
    signals: Vec<ClEdgeId>,
    omitted: Vec<ClEdgeId>,
    red_components: Vec<Vec<ClEdgeId>>,
}

fn analyse(inst: &ClInstance) -> Result<Analysis, ArcKCompileError> {
    let incident = |v: ClVertexId| inst.edges.iter().filter(move |e| e.tail == v || e.head == v);
    let mut omitted = BTreeSet::new();
    if let Some(g) = inst.goal(Player::Red) {
        if !inst.is_terminal(g.head) {
            omitted.extend(incident(g.head).map(|e| e.id));
        }
        omitted.insert(g.id);
    }
    let mut red_components = Vec::new();
    let mut gadgets = Vec::new();
    for v in &inst.vertices {
        if v.terminal || incident(v.id).all(|e| omitted.contains(&e.id)) {
            continue;
        }
        let all_red = incident(v.id).all(|e| e.colour == Player::Red);
        let free_ends = incident(v.id).all(|e| inst.is_terminal(if e.head == v.id { e.tail } else { e.head }));
        if all_red && free_ends {
            red_components.push(incident(v.id).map(|e| e.id).collect());
            continue;
        }
        let kind = match classify_vertex(inst, v.id) {
            VertexKind::And => GadgetKind::And,
            VertexKind::Or => GadgetKind::Or,
            VertexKind::Fanout => GadgetKind::Fanout,
            VertexKind::Choice => GadgetKind::Choice,
            VertexKind::Variable => GadgetKind::Variable,
            _ => return Err(ArcKCompileError::NonBasisVertex(v.id)),
        };
        gadgets.push((v.id, kind));
    }
    let in_component: HashSet<ClEdgeId> = red_components.iter().flatten().copied().collect();
    let mut signals = Vec::new();
    for e in &inst.edges {
        if omitted.contains(&e.id) || in_component.contains(&e.id) {
            continue;
        }
        match e.colour {
            Player::Blue => signals.push(e.id),
            // Red arcs left over are the Variables' own.
            Player::Red => {
                let head_kind = gadgets.iter().find(|(v, _)| *v == e.head).map(|&(_, k)| k);
                if head_kind != Some(GadgetKind::Variable) || !inst.is_terminal(e.tail) {
                    return Err(ArcKCompileError::Malformed(format!("red arc {} outside any known part", e.id)));
                }
            }
        }
        if e.goal_for == Some(Player::Blue) && !inst.is_terminal(e.tail) {
            return Err(ArcKCompileError::Malformed(format!("goal arc {} has a constrained tail", e.id)));
        }
    }
    Ok(Analysis { gadgets, signals, omitted: omitted.into_iter().collect(), red_components })
}

/// Signal arcs of `v` laid out in template port order.
fn port_arcs(
    inst: &ClInstance,
    v: ClVertexId,
    kind: GadgetKind,
    rotation: &[EdgeId],
) -> Result<(Vec<ClEdgeId>, Vec<ClEdgeId>), ArcKCompileError> {
    let blue = |id: &ClEdgeId| inst.edge(*id).is_some_and(|e| e.colour == Player::Blue);
    let around: Vec<ClEdgeId> = rotation.iter().copied().filter(blue).collect();
    let ins: Vec<ClEdgeId> = around.iter().copied().filter(|&e| inst.edge(e).unwrap().tail == v).collect();
    let outs: Vec<ClEdgeId> = around.iter().copied().filter(|&e| inst.edge(e).unwrap().head == v).collect();
    // Rotations are read counterclockwise. Starting from the single port on
    // one side, the next arc is the one drawn below.
    let after = |first: ClEdgeId| -> Vec<ClEdgeId> {
        let i = around.iter().position(|&e| e == first).expect("in rotation");
        (1..around.len()).map(|k| around[(i + k) % around.len()]).collect()
    };
    Ok(match kind {
        GadgetKind::And | GadgetKind::Or => {
            let rest = after(outs[0]);
            // Counterclockwise from the east output: upper input, then lower.
            (vec![rest[1], rest[0]], outs)
        }
        GadgetKind::Fanout | GadgetKind::Choice => {
            let rest = after(ins[0]);
            // Counterclockwise from the west input: lower output, then upper.
            (ins, vec![rest[1], rest[0]])
        }
        _ => (ins, outs),
    })
}

struct Placed {
    template: GadgetTemplate,
    kind: GadgetKind,
    cl_vertex: Option<ClVertexId>,
    offset: Coord,
    in_arcs: Vec<ClEdgeId>,
    out_arcs: Vec<ClEdgeId>,
}

impl Placed {
    fn n_in(&self) -> usize {
        self.template.in_ports().len()
    }

    fn coord(&self, v: VertexId) -> Coord {
        let c = self.template.fragment.vertex(v).and_then(|x| x.coord).expect("templates carry coordinates");
        (c.0 + self.offset.0, c.1 + self.offset.1)
    }

    /// Template vertices other than isolated red edge ends.
    fn body(&self) -> Vec<VertexId> {
        let reds: HashSet<VertexId> = self
            .template
            .companions
            .iter()
            .flat_map(|&e| {
                let e = self.template.fragment.edge(e).expect("companion");
                [e.u, e.v]
            })
            .collect();
        self.template.fragment.vertices().iter().map(|v| v.id).filter(|v| !reds.contains(v)).collect()
    }
}

pub fn compile_b2cl_to_arck(
    inst: &ClInstance,
    backend: Backend,
    embedding: Option<&Embedding>,
) -> Result<(ArcKPosition, ArcKTrace), ArcKCompileError> {
    compile_b2cl_to_arck_with(inst, backend, embedding, &ArcKCompileOptions::default())
}

pub fn compile_b2cl_to_arck_with(
    inst: &ClInstance,
    backend: Backend,
    embedding: Option<&Embedding>,
    options: &ArcKCompileOptions,
) -> Result<(ArcKPosition, ArcKTrace), ArcKCompileError> {
    let analysis = analyse(inst)?;
    let variables = analysis.gadgets.iter().filter(|(_, k)| *k == GadgetKind::Variable).count();
    if variables % 2 == 1 && !options.allow_odd_variables {
        return Err(ArcKCompileError::OddVariableCount(variables));
    }

    let (graph, halves) = cl_graph(inst);
    let computed;
    let embedding = match embedding {
        Some(e) => {
            if !e.is_plane_embedding_of(&graph) {
                return Err(ArcKCompileError::NotPlanarEmbedding);
            }
            e
        }
        None => {
            computed = is_planar(&graph).embedding().cloned().ok_or(ArcKCompileError::NotPlanarEmbedding)?;
            &computed
        }
    };

    let mut placed: Vec<Placed> = Vec::new();
    let mut at_vertex: BTreeMap<ClVertexId, usize> = BTreeMap::new();
    for &(v, kind) in &analysis.gadgets {
        let rotation: Vec<ClEdgeId> = embedding
            .rotation
            .get(&v)
            .ok_or(ArcKCompileError::NotPlanarEmbedding)?
            .iter()
            .map(|e| halves.get(e).copied().unwrap_or(*e))
            .collect();
        let (in_arcs, out_arcs) = port_arcs(inst, v, kind, &rotation)?;
        let template = gadget_template(kind, backend).expect("basis gadgets exist on every backend");
        if in_arcs.len() != template.in_ports().len() || out_arcs.len() != template.out_ports().len() {
            return Err(ArcKCompileError::Malformed(format!("vertex {v} arcs do not fit the {kind} gadget")));
        }
        at_vertex.insert(v, placed.len());
        placed.push(Placed { template, kind, cl_vertex: Some(v), offset: (0, 0), in_arcs, out_arcs });
    }
    let goal_arc = inst.goal(Player::Blue).map(|e| e.id);
    let goal_instance = goal_arc.map(|g| {
        placed.push(Placed {
            template: gadget_template(GadgetKind::Goal, backend).expect("goal exists"),
            kind: GadgetKind::Goal,
            cl_vertex: None,
            offset: (0, 0),
            in_arcs: vec![g],
            out_arcs: vec![],
        });
        placed.len() - 1
    });

    let mut connections: Vec<Connection> = Vec::new();
    for &e in &analysis.signals {
        let arc = inst.edge(e).expect("signal arc");
        let producer = at_vertex.get(&arc.head).map(|&i| {
            let g = &placed[i];
            let j = g.out_arcs.iter().position(|&x| x == e).expect("out arc");
            PortRef { instance: i, port: g.n_in() + j }
        });
        let consumer = if Some(e) == goal_arc {
            goal_instance.map(|i| PortRef { instance: i, port: 0 })
        } else {
            at_vertex.get(&arc.tail).map(|&i| {
                let j = placed[i].in_arcs.iter().position(|&x| x == e).expect("in arc");
                PortRef { instance: i, port: j }
            })
        };
        if producer.is_none() && consumer.is_none() && Some(e) != goal_arc {
            return Err(ArcKCompileError::Malformed(format!("arc {e} joins two free ends")));
        }
        connections.push(Connection { cl_edge: e, producer, consumer, wires: Vec::new(), interfaces: Vec::new() });
    }

    match backend {
        Backend::General => layout_general(&mut placed, &connections),
        _ => layout_lattice(&mut placed, &mut connections, backend, goal_instance)?,
    }

    Ok(assemble(backend, placed, connections, &analysis, options))
}

/// Producer-side port each consumer In port is merged into.
fn upstream(connections: &[Connection]) -> BTreeMap<PortRef, PortRef> {
    let mut up = BTreeMap::new();
    for c in connections {
        let Some(consumer) = c.consumer else { continue };
        let mut prev = c.producer;
        for &w in &c.wires {
            if let Some(p) = prev {
                up.insert(PortRef { instance: w, port: 0 }, p);
            }
            prev = Some(PortRef { instance: w, port: 1 });
        }
        if let Some(p) = prev {
            up.insert(consumer, p);
        }
    }
    up
}

fn port_vertices(p: &InterfacePort) -> [VertexId; 4] {
    p.vertices()
}

fn assemble(
    backend: Backend,
    placed: Vec<Placed>,
    mut connections: Vec<Connection>,
    analysis: &Analysis,
    options: &ArcKCompileOptions,
) -> (ArcKPosition, ArcKTrace) {
    let up = upstream(&connections);
    let lattice = backend.lattice();
    let merged: HashSet<PortRef> = up.keys().copied().collect();

    // Vertices: every template vertex not merged away.
    let mut coords: Vec<Coord> = Vec::new();
    let mut vmap: Vec<Vec<Option<VertexId>>> = Vec::new();
    for (i, g) in placed.iter().enumerate() {
        let mut skip: HashSet<VertexId> = HashSet::new();
        for (k, p) in g.template.ports.iter().enumerate() {
            if merged.contains(&PortRef { instance: i, port: k }) {
                skip.extend(port_vertices(p));
                let c = g.template.fragment.edge(p.companion).expect("companion");
                skip.extend([c.u, c.v]);
            }
        }
        let row = g
            .template
            .fragment
            .vertices()
            .iter()
            .map(|v| {
                (!skip.contains(&v.id)).then(|| {
                    coords.push(g.coord(v.id));
                    coords.len() - 1
                })
            })
            .collect();
        vmap.push(row);
    }
    // Merged In-port vertices resolve through the chain of upstream ports.
    // Ends of a merged-away companion resolve to nothing.
    let resolve = |vmap: &Vec<Vec<Option<VertexId>>>, i: usize, v: VertexId| -> Option<VertexId> {
        let (mut i, mut v) = (i, v);
        loop {
            if let Some(id) = vmap[i][v] {
                return Some(id);
            }
            let t = &placed[i].template;
            let k = t.ports.iter().position(|p| port_vertices(p).contains(&v))?;
            let from = up[&PortRef { instance: i, port: k }];
            let slot = port_vertices(&t.ports[k]).iter().position(|&x| x == v).unwrap();
            v = port_vertices(&placed[from.instance].template.ports[from.port])[slot];
            i = from.instance;
        }
    };
    let vertex_ids: Vec<Vec<Option<VertexId>>> = (0..placed.len())
        .map(|i| placed[i].template.fragment.vertices().iter().map(|v| resolve(&vmap, i, v.id)).collect())
        .collect();

    // Edges, and which isolated reds go where.
    let mut edges: Vec<(VertexId, VertexId, EdgeColour, String)> = Vec::new();
    let mut emap: Vec<Vec<Option<EdgeId>>> = Vec::new();
    let mut reds = RedLedger::default();
    let mut isolated: Vec<EdgeId> = Vec::new();
    for (i, g) in placed.iter().enumerate() {
        let t = &g.template;
        let mut dropped: HashSet<EdgeId> = HashSet::new();
        for (k, p) in t.ports.iter().enumerate() {
            if merged.contains(&PortRef { instance: i, port: k }) {
                dropped.extend(p.blue_edges());
                dropped.insert(p.companion);
            }
        }
        let port_companions: HashSet<EdgeId> = t.ports.iter().map(|p| p.companion).collect();
        let row = t
            .fragment
            .edges()
            .iter()
            .map(|e| {
                if dropped.contains(&e.id) {
                    return None;
                }
                let label = format!("{}{i}:{}", g.kind, e.label.as_deref().unwrap_or(""));
                edges.push((vertex_ids[i][e.u].expect("kept"), vertex_ids[i][e.v].expect("kept"), e.colour, label));
                let id = edges.len() - 1;
                if port_companions.contains(&e.id) {
                    reds.companions.push(id);
                    isolated.push(id);
                } else if t.companions.contains(&e.id) {
                    reds.gadget_extras.push(id);
                    isolated.push(id);
                } else if e.colour == EdgeColour::Red {
                    reds.variable_internal.push(id);
                }
                Some(id)
            })
            .collect();
        emap.push(row);
    }

    // Extra isolated reds start below the layout and are placed with the rest.
    let floor = coords.iter().map(|c| c.1).min().unwrap_or(0) - 3;
    let mut extra = |n: usize, name: &str, list: &mut Vec<EdgeId>, coords: &mut Vec<Coord>| {
        for j in 0..n {
            coords.push((2 * j as i32, floor));
            coords.push((2 * j as i32 + 1, floor));
            edges.push((coords.len() - 2, coords.len() - 1, EdgeColour::Red, format!("{name}{j}")));
            list.push(edges.len() - 1);
            isolated.push(edges.len() - 1);
        }
    };
    let variables = placed.iter().filter(|g| g.kind == GadgetKind::Variable).count();
    extra(variables / 2, "pair", &mut reds.variable_pairs, &mut coords);
    let lowered = match options.red_components {
        RedComponentLowering::Omit => Vec::new(),
        RedComponentLowering::Isolated => analysis.red_components.clone(),
    };
    extra(lowered.len(), "k", &mut reds.k_components, &mut coords);

    // Isolated reds keep their drawn spot when it is free, else move to the
    // nearest free unit edge.
    let isolated_set: HashSet<EdgeId> = isolated.iter().copied().collect();
    let mut occupied: HashSet<Coord> = edges
        .iter()
        .enumerate()
        .filter(|(id, _)| !isolated_set.contains(id))
        .flat_map(|(_, e)| [coords[e.0], coords[e.1]])
        .collect();
    for (v, &c) in coords.iter().enumerate() {
        if !edges.iter().any(|e| e.0 == v || e.1 == v) {
            occupied.insert(c);
        }
    }
    for &id in &isolated {
        let (u, v) = (edges[id].0, edges[id].1);
        let (p, q) = (coords[u], coords[v]);
        let ok = |c: Coord| !occupied.contains(&c);
        let (p, q) = if p != q && ok(p) && ok(q) && (lattice == Lattice::None || lattice.is_unit_step(p, q)) {
            (p, q)
        } else {
            let (a, b) = (lattice.to_plane(p), lattice.to_plane(q));
            place_red(&occupied, lattice, None, ((a.0 + b.0) / 2.0, (a.1 + b.1) / 2.0))
        };
        coords[u] = p;
        coords[v] = q;
        occupied.insert(p);
        occupied.insert(q);
    }

    let vertices: Vec<Vertex> =
        coords.iter().enumerate().map(|(id, &c)| Vertex { id, coord: Some(c), label: None }).collect();
    let graph_edges: Vec<Edge> = edges
        .into_iter()
        .enumerate()
        .map(|(id, (u, v, colour, label))| Edge { id, u, v, colour, label: Some(label) })
        .collect();
    let graph = ColouredGraph::from_parts(vertices, graph_edges, lattice).expect("assembled graph is simple");

    let global_port = |r: PortRef| -> InterfacePort {
        let p = placed[r.instance].template.ports[r.port];
        let vid = |v: VertexId| vertex_ids[r.instance][v].expect("port vertex");
        let eid = |e: EdgeId| -> EdgeId {
            // A merged In port's edges live on its upstream port.
            let mut r = r;
            let mut e = e;
            loop {
                if let Some(id) = emap[r.instance][e] {
                    return id;
                }
                let t = &placed[r.instance].template;
                let p = t.ports[r.port];
                let slot = [p.i_edge, p.a_edge, p.top_edge, p.companion].iter().position(|&x| x == e).unwrap();
                r = up[&r];
                let q = placed[r.instance].template.ports[r.port];
                e = [q.i_edge, q.a_edge, q.top_edge, q.companion][slot];
            }
        };
        InterfacePort {
            direction: p.direction,
            center: vid(p.center),
            i_end: vid(p.i_end),
            a_end: vid(p.a_end),
            top_end: vid(p.top_end),
            i_edge: eid(p.i_edge),
            a_edge: eid(p.a_edge),
            top_edge: eid(p.top_edge),
            companion: eid(p.companion),
        }
    };
    for c in &mut connections {
        let mut chain: Vec<PortRef> = Vec::new();
        match c.producer {
            Some(p) => chain.push(p),
            None => {
                if let Some(&w) = c.wires.first() {
                    chain.push(PortRef { instance: w, port: 0 });
                } else if let Some(q) = c.consumer {
                    chain.push(q);
                }
            }
        }
        for &w in &c.wires {
            chain.push(PortRef { instance: w, port: 1 });
        }
        c.interfaces = chain.into_iter().map(global_port).collect();
    }

    let instances = placed
        .iter()
        .enumerate()
        .map(|(i, g)| GadgetInstance {
            kind: g.kind,
            cl_vertex: g.cl_vertex,
            offset: g.offset,
            vertices: vertex_ids[i].clone(),
            edges: emap[i].clone(),
            stub_inputs: (0..g.n_in()).filter(|&k| !merged.contains(&PortRef { instance: i, port: k })).count(),
        })
        .collect();
    let mut omitted = analysis.omitted.clone();
    if options.red_components == RedComponentLowering::Omit {
        omitted.extend(analysis.red_components.iter().flatten().copied());
        omitted.sort_unstable();
    }
    let trace = ArcKTrace {
        backend,
        instances,
        connections,
        reds,
        omitted,
        red_components: lowered,
        options: *options,
    };
    (ArcKPosition::new(graph, Convention::Misere, Player::Blue), trace)
}

fn bounds(points: impl Iterator<Item = Coord>) -> (Coord, Coord) {
    points.fold(((i32::MAX, i32::MAX), (i32::MIN, i32::MIN)), |(lo, hi), c| {
        ((lo.0.min(c.0), lo.1.min(c.1)), (hi.0.max(c.0), hi.1.max(c.1)))
    })
}

/// Consumers before producers: instance layers counted back from the sinks.
fn layers(placed: &[Placed], connections: &[Connection]) -> Vec<usize> {
    let mut layer = vec![0usize; placed.len()];
    // Longest path to a sink; the circuit is acyclic so |V| rounds suffice.
    for _ in 0..placed.len() {
        let mut changed = false;
        for c in connections {
            if let (Some(p), Some(q)) = (c.producer, c.consumer) {
                if layer[p.instance] < layer[q.instance] + 1 {
                    layer[p.instance] = layer[q.instance] + 1;
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    layer
}

fn layout_general(placed: &mut [Placed], connections: &[Connection]) {
    let layer = layers(placed, connections);
    let depth = layer.iter().copied().max().unwrap_or(0);
    let mut right = 0;
    for l in 0..=depth {
        let members: Vec<usize> = (0..placed.len()).filter(|&i| layer[i] == l).collect();
        let boxes: Vec<(Coord, Coord)> = members
            .iter()
            .map(|&i| bounds(placed[i].template.fragment.vertices().iter().filter_map(|v| v.coord)))
            .collect();
        let width = boxes.iter().map(|(lo, hi)| hi.0 - lo.0).max().unwrap_or(0);
        let mut y = 0;
        for (&i, (lo, hi)) in members.iter().zip(&boxes) {
            placed[i].offset = (right - hi.0, y - lo.1);
            y += hi.1 - lo.1 + 4;
        }
        right -= width + 6;
    }
}

/// Wires that make up a horizontal gap between two interface centers.
pub fn wire_plan(gap: i32) -> Option<Vec<WireParity>> {
    if gap < 0 {
        return None;
    }
    let (even, odd) = (wire_shift(WireParity::Even), wire_shift(WireParity::Odd));
    (0..=gap / odd).rev().find(|&n| (gap - n * odd) % even == 0).map(|n| {
        let mut plan = vec![WireParity::Even; ((gap - n * odd) / even) as usize];
        plan.extend(std::iter::repeat_n(WireParity::Odd, n as usize));
        plan
    })
}

const MAX_GAP: i32 = 96;

fn layout_lattice(
    placed: &mut Vec<Placed>,
    connections: &mut [Connection],
    backend: Backend,
    goal: Option<usize>,
) -> Result<(), ArcKCompileError> {
    let n = placed.len();
    let mut done = vec![false; n];
    let mut occupied: HashSet<Coord> = HashSet::new();
    let outs_of = |i: usize, connections: &[Connection]| -> Vec<(usize, PortRef)> {
        connections
            .iter()
            .enumerate()
            .filter(|(_, c)| c.producer.is_some_and(|p| p.instance == i) && c.consumer.is_some())
            .map(|(k, c)| (k, c.consumer.unwrap()))
            .collect()
    };

    if let Some(g) = goal {
        let c = placed[g].coord(placed[g].template.ports[0].center);
        placed[g].offset = (-c.0, -c.1);
        for v in placed[g].body() {
            occupied.insert(placed[g].coord(v));
        }
        done[g] = true;
    }

    loop {
        // Lowest-index instance whose consumers are all placed.
        let ready = (0..n).find(|&i| {
            let outs = outs_of(i, connections);
            !done[i] && !outs.is_empty() && outs.iter().all(|(_, q)| done[q.instance])
        });
        let Some(i) = ready else { break };
        place_backwards(placed, connections, backend, i, &outs_of(i, connections), &mut occupied)?;
        done[i] = true;
    }

    // Anything without a placed consumer goes below the layout.
    for i in 0..n {
        if done[i] {
            continue;
        }
        if !outs_of(i, connections).is_empty() {
            return Err(ArcKCompileError::PortMismatch("circuit has a cycle".into()));
        }
        let floor = occupied.iter().map(|c| c.1).min().unwrap_or(0) - 4;
        let (lo, hi) = bounds(placed[i].body().into_iter().map(|v| placed[i].coord(v)));
        placed[i].offset = (placed[i].offset.0 - lo.0, placed[i].offset.1 + floor - hi.1);
        for v in placed[i].body() {
            occupied.insert(placed[i].coord(v));
        }
        done[i] = true;
    }
    Ok(())
}

fn place_backwards(
    placed: &mut Vec<Placed>,
    connections: &mut [Connection],
    backend: Backend,
    i: usize,
    outs: &[(usize, PortRef)],
    occupied: &mut HashSet<Coord>,
) -> Result<(), ArcKCompileError> {
    let target = |placed: &Vec<Placed>, q: PortRef| placed[q.instance].coord(placed[q.instance].template.ports[q.port].center);
    let own = |placed: &Vec<Placed>, k: usize| {
        let p = connections[k].producer.unwrap();
        let c = placed[i].template.fragment.vertex(placed[i].template.ports[p.port].center).unwrap().coord.unwrap();
        c
    };
    let (k0, q0) = outs[0];
    let t0 = target(placed, q0);
    let dy = t0.1 - own(placed, k0).1;
    for &(k, q) in &outs[1..] {
        if target(placed, q).1 - own(placed, k).1 != dy {
            return Err(ArcKCompileError::PortMismatch(format!(
                "outputs of the {} for CL vertex {:?} cannot reach both consumers horizontally",
                placed[i].kind, placed[i].cl_vertex
            )));
        }
    }
    let wire = |p: WireParity| make_wire(p, backend).expect("lattice wires");
    for gap0 in 0..=MAX_GAP {
        let dx = t0.0 - gap0 - own(placed, k0).0;
        let mut plans = Vec::new();
        for &(k, q) in outs {
            let gap = target(placed, q).0 - (own(placed, k).0 + dx);
            match wire_plan(gap) {
                Some(plan) => plans.push((k, q, plan)),
                None => break,
            }
        }
        if plans.len() != outs.len() {
            continue;
        }
        // Points this placement would add, minus the ports it merges into.
        let mut fresh: Vec<Coord> = Vec::new();
        let mut skip: HashSet<Coord> = HashSet::new();
        let mut wires: Vec<(usize, Placed)> = Vec::new();
        let g = &placed[i];
        let shifted = |c: Coord| (c.0 + dx, c.1 + dy);
        for (k, q, plan) in &plans {
            let p = connections[*k].producer.unwrap();
            let mut center = shifted(g.template.fragment.vertex(g.template.ports[p.port].center).unwrap().coord.unwrap());
            if plan.is_empty() {
                let port = g.template.ports[p.port];
                for v in port_vertices(&port) {
                    skip.insert(shifted(g.template.fragment.vertex(v).unwrap().coord.unwrap()));
                }
            }
            for (j, &parity) in plan.iter().enumerate() {
                let t = wire(parity);
                let in_c = t.fragment.vertex(t.ports[0].center).unwrap().coord.unwrap();
                let w = Placed {
                    kind: t.kind,
                    offset: (center.0 - in_c.0, center.1 - in_c.1),
                    template: t,
                    cl_vertex: None,
                    in_arcs: vec![],
                    out_arcs: vec![],
                };
                let in_port: HashSet<VertexId> = port_vertices(&w.template.ports[0]).into_iter().collect();
                let out_port: HashSet<VertexId> = port_vertices(&w.template.ports[1]).into_iter().collect();
                for v in w.body() {
                    let last = j + 1 == plan.len();
                    if in_port.contains(&v) || (last && out_port.contains(&v)) {
                        continue;
                    }
                    fresh.push(w.coord(v));
                }
                center = w.coord(w.template.ports[1].center);
                wires.push((*k, w));
            }
            debug_assert_eq!(center, target(placed, *q));
        }
        for v in g.body() {
            let c = shifted(g.coord(v));
            if !skip.contains(&c) {
                fresh.push(c);
            }
        }
        let unique: HashSet<Coord> = fresh.iter().copied().collect();
        if unique.len() != fresh.len() || fresh.iter().any(|c| occupied.contains(c)) {
            continue;
        }
        occupied.extend(fresh);
        placed[i].offset = (placed[i].offset.0 + dx, placed[i].offset.1 + dy);
        for (k, w) in wires {
            placed.push(w);
            connections[k].wires.push(placed.len() - 1);
        }
        return Ok(());
    }
    Err(ArcKCompileError::PortMismatch(format!(
        "no free horizontal route for the {} of CL vertex {:?}",
        placed[i].kind, placed[i].cl_vertex
    )))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceBudget {
    pub instance: usize,
    pub kind: GadgetKind,
    /// Companions drawn in the template, whoever owns them after merging.
    pub template_companions: usize,
    /// Red edges emitted for this instance.
    pub owned_reds: usize,
    /// Blue moves charged to this instance by the cost oracle.
    pub blue_moves: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RedBudget {
    pub companions: usize,
    pub gadget_extras: usize,
    pub variable_internal: usize,
    pub variable_pairs: usize,
    pub k_components: usize,
    pub total_reds: usize,
    pub blue_moves: usize,
    pub per_instance: Vec<InstanceBudget>,
    /// Owned reds equal charged Blue moves for every gadget other than
    /// Variables, and the pair extras are ⌊variables/2⌋.
    pub balanced: bool,
}

pub fn red_budget(trace: &ArcKTrace) -> Result<RedBudget, ArcKCompileError> {
    let reds: HashSet<EdgeId> = [
        &trace.reds.companions,
        &trace.reds.gadget_extras,
        &trace.reds.variable_internal,
    ]
    .into_iter()
    .flatten()
    .copied()
    .collect();
    let mut per_instance = Vec::new();
    for (i, g) in trace.instances.iter().enumerate() {
        let t = gadget_template(g.kind, trace.backend).expect("instance template");
        let owned_reds = g.edges.iter().flatten().filter(|e| reds.contains(e)).count();
        per_instance.push(InstanceBudget {
            instance: i,
            kind: g.kind,
            template_companions: t.ports.len(),
            owned_reds,
            blue_moves: charged_cost(g.kind, trace.backend)? + g.stub_inputs,
        });
    }
    let variables = trace.variable_count();
    let balanced = per_instance
        .iter()
        .filter(|b| b.kind != GadgetKind::Variable)
        .all(|b| b.owned_reds == b.blue_moves)
        && trace.reds.variable_pairs.len() == variables / 2;
    let r = &trace.reds;
    Ok(RedBudget {
        companions: r.companions.len(),
        gadget_extras: r.gadget_extras.len(),
        variable_internal: r.variable_internal.len(),
        variable_pairs: r.variable_pairs.len(),
        k_components: r.k_components.len(),
        total_reds: r.companions.len()
            + r.gadget_extras.len()
            + r.variable_internal.len()
            + r.variable_pairs.len()
            + r.k_components.len(),
        blue_moves: per_instance.iter().map(|b| b.blue_moves).sum(),
        per_instance,
        balanced,
    })
}

pub fn encode_trace(trace: &ArcKTrace) -> String {
    serde_json::to_string_pretty(trace).expect("trace serialises")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wire_plans_cover_large_gaps() {
        for gap in [0, 4, 5, 8, 9, 10] {
            assert!(wire_plan(gap).is_some(), "{gap}");
        }
        for gap in [1, 2, 3, 6, 7, 11] {
            assert!(wire_plan(gap).is_none(), "{gap}");
        }
        for gap in 12..200 {
            let plan = wire_plan(gap).unwrap();
            assert_eq!(plan.iter().map(|&p| wire_shift(p)).sum::<i32>(), gap);
        }
    }
}
