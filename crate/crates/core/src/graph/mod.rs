//! Coloured undirected graphs shared by every game in the crate.
//!
//! A [`ColouredGraph`] is a simple graph whose edges are coloured Blue, Red or
//! Either, optionally embedded on a [`Lattice`]. Values are immutable once
//! built; "mutating" operations such as [`ColouredGraph::remove_vertices`]
//! return a fresh graph and keep the surviving ids stable.

mod dot;
pub(crate) mod json;
pub mod lattice;
mod line;
pub mod planar;

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use dot::to_dot;
pub use json::{decode, encode, GraphJson};
pub use lattice::{grid_snap_check, Coord, Lattice, SnapReport};
pub use line::line_graph;
pub use planar::{is_planar, Embedding, KuratowskiKind, KuratowskiWitness, Planarity};

pub type VertexId = usize;
pub type EdgeId = usize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EdgeColour {
    Blue,
    Red,
    /// Playable by both players; used for the impartial game only.
    Either,
}

impl fmt::Display for EdgeColour {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EdgeColour::Blue => "blue",
            EdgeColour::Red => "red",
            EdgeColour::Either => "either",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Vertex {
    pub id: VertexId,
    pub coord: Option<Coord>,
    pub label: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub id: EdgeId,
    pub u: VertexId,
    pub v: VertexId,
    pub colour: EdgeColour,
    pub label: Option<String>,
}

impl Edge {
    pub fn touches(&self, v: VertexId) -> bool {
        self.u == v || self.v == v
    }

    pub fn other(&self, v: VertexId) -> VertexId {
        if self.u == v {
            self.v
        } else {
            self.u
        }
    }

    fn key(&self) -> (VertexId, VertexId) {
        (self.u.min(self.v), self.u.max(self.v))
    }
}

/// Vertex as supplied by a caller, before id normalisation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RawVertex {
    pub id: i64,
    pub coord: Option<Coord>,
}

/// Edge as supplied by a caller, referring to [`RawVertex`] ids.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RawEdge {
    pub id: i64,
    pub u: i64,
    pub v: i64,
    pub colour: EdgeColour,
    pub label: Option<String>,
}

impl RawEdge {
    pub fn new(id: i64, u: i64, v: i64, colour: EdgeColour) -> Self {
        RawEdge { id, u, v, colour, label: None }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("edge {edge} is a self-loop on vertex {vertex}")]
    SelfLoop { edge: i64, vertex: i64 },
    #[error("edge {edge} is parallel to edge {other}")]
    ParallelEdge { edge: i64, other: i64 },
    #[error("edge {edge} refers to missing vertex {vertex}")]
    DanglingEndpoint { edge: i64, vertex: i64 },
    #[error("duplicate vertex id {0}")]
    DuplicateVertexId(i64),
    #[error("duplicate edge id {0}")]
    DuplicateEdgeId(i64),
    #[error("vertex {0} has no lattice coordinate")]
    MissingCoordinate(VertexId),
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColouredGraph {
    vertices: Vec<Vertex>,
    edges: Vec<Edge>,
    lattice: Lattice,
}

/// Validates raw lists and renumbers vertices and edges densely in input order.
pub fn build_graph(
    vertices: &[RawVertex],
    edges: &[RawEdge],
    lattice: Lattice,
) -> Result<ColouredGraph, GraphError> {
    let mut vmap = HashMap::with_capacity(vertices.len());
    for (i, v) in vertices.iter().enumerate() {
        if vmap.insert(v.id, i).is_some() {
            return Err(GraphError::DuplicateVertexId(v.id));
        }
    }
    let mut seen_ids = HashSet::with_capacity(edges.len());
    let mut seen_pairs: HashMap<(usize, usize), i64> = HashMap::with_capacity(edges.len());
    let mut out_edges = Vec::with_capacity(edges.len());
    for (i, e) in edges.iter().enumerate() {
        if !seen_ids.insert(e.id) {
            return Err(GraphError::DuplicateEdgeId(e.id));
        }
        let u = *vmap
            .get(&e.u)
            .ok_or(GraphError::DanglingEndpoint { edge: e.id, vertex: e.u })?;
        let v = *vmap
            .get(&e.v)
            .ok_or(GraphError::DanglingEndpoint { edge: e.id, vertex: e.v })?;
        if u == v {
            return Err(GraphError::SelfLoop { edge: e.id, vertex: e.u });
        }
        if let Some(&other) = seen_pairs.get(&(u.min(v), u.max(v))) {
            return Err(GraphError::ParallelEdge { edge: e.id, other });
        }
        seen_pairs.insert((u.min(v), u.max(v)), e.id);
        out_edges.push(Edge { id: i, u, v, colour: e.colour, label: e.label.clone() });
    }
    let out_vertices = vertices
        .iter()
        .enumerate()
        .map(|(i, v)| Vertex { id: i, coord: v.coord, label: None })
        .collect();
    Ok(ColouredGraph { vertices: out_vertices, edges: out_edges, lattice })
}

impl ColouredGraph {
    /// Validates parts while keeping their ids as given.
    pub fn from_parts(
        mut vertices: Vec<Vertex>,
        mut edges: Vec<Edge>,
        lattice: Lattice,
    ) -> Result<Self, GraphError> {
        vertices.sort_by_key(|v| v.id);
        edges.sort_by_key(|e| e.id);
        for w in vertices.windows(2) {
            if w[0].id == w[1].id {
                return Err(GraphError::DuplicateVertexId(w[0].id as i64));
            }
        }
        for w in edges.windows(2) {
            if w[0].id == w[1].id {
                return Err(GraphError::DuplicateEdgeId(w[0].id as i64));
            }
        }
        let ids: HashSet<VertexId> = vertices.iter().map(|v| v.id).collect();
        let mut pairs: HashMap<(VertexId, VertexId), EdgeId> = HashMap::new();
        for e in &edges {
            for end in [e.u, e.v] {
                if !ids.contains(&end) {
                    return Err(GraphError::DanglingEndpoint { edge: e.id as i64, vertex: end as i64 });
                }
            }
            if e.u == e.v {
                return Err(GraphError::SelfLoop { edge: e.id as i64, vertex: e.u as i64 });
            }
            if let Some(&other) = pairs.get(&e.key()) {
                return Err(GraphError::ParallelEdge { edge: e.id as i64, other: other as i64 });
            }
            pairs.insert(e.key(), e.id);
        }
        Ok(ColouredGraph { vertices, edges, lattice })
    }

    pub fn empty() -> Self {
        ColouredGraph { vertices: Vec::new(), edges: Vec::new(), lattice: Lattice::None }
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn lattice(&self) -> Lattice {
        self.lattice
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertex(&self, id: VertexId) -> Option<&Vertex> {
        self.vertices.binary_search_by_key(&id, |v| v.id).ok().map(|i| &self.vertices[i])
    }

    pub fn edge(&self, id: EdgeId) -> Option<&Edge> {
        self.edges.binary_search_by_key(&id, |e| e.id).ok().map(|i| &self.edges[i])
    }

    pub fn incident(&self, v: VertexId) -> impl Iterator<Item = &Edge> + '_ {
        self.edges.iter().filter(move |e| e.touches(v))
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.incident(v).count()
    }

    pub fn edges_of_colour(&self, colour: EdgeColour) -> impl Iterator<Item = &Edge> + '_ {
        self.edges.iter().filter(move |e| e.colour == colour)
    }

    /// Deletes the given vertices together with every incident edge.
    pub fn remove_vertices(&self, gone: &BTreeSet<VertexId>) -> ColouredGraph {
        ColouredGraph {
            vertices: self.vertices.iter().filter(|v| !gone.contains(&v.id)).cloned().collect(),
            edges: self
                .edges
                .iter()
                .filter(|e| !gone.contains(&e.u) && !gone.contains(&e.v))
                .cloned()
                .collect(),
            lattice: self.lattice,
        }
    }

    /// Keeps only the listed edges (vertices are untouched).
    pub fn retain_edges(&self, keep: impl Fn(&Edge) -> bool) -> ColouredGraph {
        ColouredGraph {
            vertices: self.vertices.clone(),
            edges: self.edges.iter().filter(|e| keep(e)).cloned().collect(),
            lattice: self.lattice,
        }
    }

    /// Drops vertices with no incident edge.
    pub fn without_isolated(&self) -> ColouredGraph {
        let used: HashSet<VertexId> = self.edges.iter().flat_map(|e| [e.u, e.v]).collect();
        ColouredGraph {
            vertices: self.vertices.iter().filter(|v| used.contains(&v.id)).cloned().collect(),
            edges: self.edges.clone(),
            lattice: self.lattice,
        }
    }

    pub fn with_lattice(mut self, lattice: Lattice) -> Self {
        self.lattice = lattice;
        self
    }

    /// Swaps Blue and Red on every edge.
    pub fn recoloured(&self) -> ColouredGraph {
        let mut g = self.clone();
        for e in &mut g.edges {
            e.colour = match e.colour {
                EdgeColour::Blue => EdgeColour::Red,
                EdgeColour::Red => EdgeColour::Blue,
                EdgeColour::Either => EdgeColour::Either,
            };
        }
        g
    }

    /// Endpoint pairs as dense local indices, for algorithms that want `0..n`.
    pub(crate) fn indexed(&self) -> (Vec<VertexId>, Vec<(usize, usize)>) {
        let ids: Vec<VertexId> = self.vertices.iter().map(|v| v.id).collect();
        let pos: HashMap<VertexId, usize> = ids.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let pairs = self.edges.iter().map(|e| (pos[&e.u], pos[&e.v])).collect();
        (ids, pairs)
    }
}
