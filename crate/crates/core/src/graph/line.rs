use super::{ColouredGraph, Edge, EdgeColour, Lattice, Vertex};

/// Line graph: one vertex per edge of `g` (same id), adjacent when the two
/// edges share an endpoint. The source colour and label are kept as the
/// vertex label, e.g. `"blue:a"`.
pub fn line_graph(g: &ColouredGraph) -> ColouredGraph {
    let vertices: Vec<Vertex> = g
        .edges()
        .iter()
        .map(|e| Vertex {
            id: e.id,
            coord: None,
            label: Some(match &e.label {
                Some(l) => format!("{}:{}", e.colour, l),
                None => e.colour.to_string(),
            }),
        })
        .collect();
    let mut edges = Vec::new();
    let es = g.edges();
    for (i, a) in es.iter().enumerate() {
        for b in &es[i + 1..] {
            if a.touches(b.u) || a.touches(b.v) {
                edges.push(Edge { id: edges.len(), u: a.id, v: b.id, colour: EdgeColour::Either, label: None });
            }
        }
    }
    ColouredGraph::from_parts(vertices, edges, Lattice::None).expect("line graph of a simple graph is simple")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_graph, RawEdge, RawVertex};

    fn plain(n: i64, edges: &[(i64, i64)]) -> ColouredGraph {
        let vs: Vec<_> = (0..n).map(|id| RawVertex { id, coord: None }).collect();
        let es: Vec<_> = edges
            .iter()
            .enumerate()
            .map(|(i, &(u, v))| RawEdge::new(i as i64, u, v, EdgeColour::Blue))
            .collect();
        build_graph(&vs, &es, Lattice::None).unwrap()
    }

    #[test]
    fn path_shrinks() {
        let l = line_graph(&plain(4, &[(0, 1), (1, 2), (2, 3)]));
        assert_eq!(l.vertex_count(), 3);
        assert_eq!(l.edge_count(), 2);
    }

    #[test]
    fn triangle_is_self_line() {
        let l = line_graph(&plain(3, &[(0, 1), (1, 2), (2, 0)]));
        assert_eq!((l.vertex_count(), l.edge_count()), (3, 3));
        assert!(l.vertices().iter().all(|v| l.degree(v.id) == 2));
    }
}
