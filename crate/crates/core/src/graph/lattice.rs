use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{ColouredGraph, EdgeId, GraphError, VertexId};

/// Integer lattice point. Cartesian graphs use `(x, y)`; triangular graphs
/// use axial `(q, r)`.
pub type Coord = (i32, i32);

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Lattice {
    #[default]
    None,
    Cartesian,
    Triangular,
}

const CARTESIAN_STEPS: [Coord; 4] = [(1, 0), (-1, 0), (0, 1), (0, -1)];
const TRIANGULAR_STEPS: [Coord; 6] = [(1, 0), (-1, 0), (0, 1), (0, -1), (1, -1), (-1, 1)];

impl Lattice {
    pub fn unit_steps(self) -> &'static [Coord] {
        match self {
            Lattice::None => &[],
            Lattice::Cartesian => &CARTESIAN_STEPS,
            Lattice::Triangular => &TRIANGULAR_STEPS,
        }
    }

    pub fn is_unit_step(self, a: Coord, b: Coord) -> bool {
        let d = (b.0 - a.0, b.1 - a.1);
        self.unit_steps().contains(&d)
    }

    /// Planar drawing position. Triangular axial coordinates use the basis
    /// `(1, 0)` and `(1/2, sqrt(3)/2)`.
    pub fn to_plane(self, c: Coord) -> (f64, f64) {
        match self {
            Lattice::Triangular => (c.0 as f64 + c.1 as f64 * 0.5, c.1 as f64 * 3f64.sqrt() / 2.0),
            _ => (c.0 as f64, c.1 as f64),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SnapReport {
    pub violations: Vec<StepViolation>,
    pub collisions: Vec<Collision>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepViolation {
    pub edge: EdgeId,
    pub from: Coord,
    pub to: Coord,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Collision {
    pub coord: Coord,
    pub vertices: Vec<VertexId>,
}

impl SnapReport {
    pub fn is_empty(&self) -> bool {
        self.violations.is_empty() && self.collisions.is_empty()
    }
}

/// Lists every edge that is not a single lattice step and every coordinate
/// shared by more than one vertex.
///
/// For [`Lattice::None`] only collisions are reported.
pub fn grid_snap_check(g: &ColouredGraph, lattice: Lattice) -> Result<SnapReport, GraphError> {
    let mut at: BTreeMap<Coord, Vec<VertexId>> = BTreeMap::new();
    for v in g.vertices() {
        let c = v.coord.ok_or(GraphError::MissingCoordinate(v.id))?;
        at.entry(c).or_default().push(v.id);
    }
    let mut report = SnapReport::default();
    if lattice != Lattice::None {
        for e in g.edges() {
            let a = g.vertex(e.u).and_then(|v| v.coord).ok_or(GraphError::MissingCoordinate(e.u))?;
            let b = g.vertex(e.v).and_then(|v| v.coord).ok_or(GraphError::MissingCoordinate(e.v))?;
            if !lattice.is_unit_step(a, b) {
                report.violations.push(StepViolation { edge: e.id, from: a, to: b });
            }
        }
    }
    report.collisions = at
        .into_iter()
        .filter(|(_, vs)| vs.len() > 1)
        .map(|(coord, vertices)| Collision { coord, vertices })
        .collect();
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_graph, EdgeColour, RawEdge, RawVertex};

    fn graph(coords: &[Coord], edges: &[(i64, i64)], lattice: Lattice) -> ColouredGraph {
        let vs: Vec<RawVertex> = coords
            .iter()
            .enumerate()
            .map(|(i, &c)| RawVertex { id: i as i64, coord: Some(c) })
            .collect();
        let es: Vec<RawEdge> = edges
            .iter()
            .enumerate()
            .map(|(i, &(u, v))| RawEdge::new(i as i64, u, v, EdgeColour::Blue))
            .collect();
        build_graph(&vs, &es, lattice).unwrap()
    }

    #[test]
    fn long_cartesian_edge_is_flagged() {
        let g = graph(&[(0, 0), (2, 0)], &[(0, 1)], Lattice::Cartesian);
        let r = grid_snap_check(&g, Lattice::Cartesian).unwrap();
        assert_eq!(r.violations, vec![StepViolation { edge: 0, from: (0, 0), to: (2, 0) }]);
    }

    #[test]
    fn axial_diagonal_is_a_triangular_step() {
        let g = graph(&[(0, 0), (1, -1)], &[(0, 1)], Lattice::Triangular);
        assert!(grid_snap_check(&g, Lattice::Triangular).unwrap().is_empty());
        assert!(!grid_snap_check(&g, Lattice::Cartesian).unwrap().is_empty());
    }

    #[test]
    fn collisions_and_missing_coordinates() {
        let g = graph(&[(0, 0), (0, 0), (1, 0)], &[(0, 2)], Lattice::Cartesian);
        let r = grid_snap_check(&g, Lattice::Cartesian).unwrap();
        assert_eq!(r.collisions, vec![Collision { coord: (0, 0), vertices: vec![0, 1] }]);

        let vs = [RawVertex { id: 0, coord: None }];
        let g = build_graph(&vs, &[], Lattice::Cartesian).unwrap();
        assert_eq!(grid_snap_check(&g, Lattice::Cartesian), Err(GraphError::MissingCoordinate(0)));
    }

    #[test]
    fn triangular_plane_basis() {
        let (x, y) = Lattice::Triangular.to_plane((0, 1));
        assert!((x - 0.5).abs() < 1e-12 && (y - 3f64.sqrt() / 2.0).abs() < 1e-12);
    }
}
