use serde::{Deserialize, Serialize};

use super::{ColouredGraph, Coord, Edge, EdgeColour, GraphError, Lattice, Vertex};

/// Wire form of a [`ColouredGraph`]. Other modules flatten this into their
/// own documents (positions add `convention` and `to_move`).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphJson {
    pub vertices: Vec<VertexJson>,
    pub edges: Vec<EdgeJson>,
    #[serde(default)]
    pub lattice: Lattice,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexJson {
    pub id: usize,
    #[serde(default)]
    pub coord: Option<Coord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeJson {
    pub id: usize,
    pub u: usize,
    pub v: usize,
    pub colour: EdgeColour,
    #[serde(default)]
    pub label: Option<String>,
}

impl From<&ColouredGraph> for GraphJson {
    fn from(g: &ColouredGraph) -> Self {
        GraphJson {
            vertices: g
                .vertices()
                .iter()
                .map(|v| VertexJson { id: v.id, coord: v.coord, label: v.label.clone() })
                .collect(),
            edges: g
                .edges()
                .iter()
                .map(|e| EdgeJson { id: e.id, u: e.u, v: e.v, colour: e.colour, label: e.label.clone() })
                .collect(),
            lattice: g.lattice(),
        }
    }
}

impl TryFrom<GraphJson> for ColouredGraph {
    type Error = GraphError;

    fn try_from(j: GraphJson) -> Result<Self, GraphError> {
        let vertices = j
            .vertices
            .into_iter()
            .map(|v| Vertex { id: v.id, coord: v.coord, label: v.label })
            .collect();
        let edges = j
            .edges
            .into_iter()
            .map(|e| Edge { id: e.id, u: e.u, v: e.v, colour: e.colour, label: e.label })
            .collect();
        ColouredGraph::from_parts(vertices, edges, j.lattice)
    }
}

pub(crate) fn parse_error(e: serde_json::Error) -> GraphError {
    GraphError::Parse { line: e.line(), column: e.column(), message: e.to_string() }
}

pub fn encode(g: &ColouredGraph) -> String {
    serde_json::to_string_pretty(&GraphJson::from(g)).expect("graph serialisation cannot fail")
}

pub fn decode(text: &str) -> Result<ColouredGraph, GraphError> {
    let j: GraphJson = serde_json::from_str(text).map_err(parse_error)?;
    ColouredGraph::try_from(j)
}
