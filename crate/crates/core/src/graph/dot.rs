use std::fmt::Write;

use super::{ColouredGraph, EdgeColour, Lattice};

/// Graphviz rendering. Lattice coordinates become pinned `pos` attributes.
pub fn to_dot(g: &ColouredGraph) -> String {
    let mut out = String::from("graph G {\n  node [shape=point, width=0.08];\n");
    let scale = if g.lattice() == Lattice::None { 1.0 } else { 0.6 };
    for v in g.vertices() {
        let mut attrs = Vec::new();
        if let Some(c) = v.coord {
            let (x, y) = g.lattice().to_plane(c);
            attrs.push(format!("pos=\"{:.3},{:.3}!\"", x * scale, y * scale));
        }
        if let Some(l) = &v.label {
            attrs.push(format!("xlabel=\"{}\"", escape(l)));
        }
        if attrs.is_empty() {
            let _ = writeln!(out, "  v{};", v.id);
        } else {
            let _ = writeln!(out, "  v{} [{}];", v.id, attrs.join(", "));
        }
    }
    for e in g.edges() {
        let colour = match e.colour {
            EdgeColour::Blue => "blue",
            EdgeColour::Red => "red",
            EdgeColour::Either => "black",
        };
        let _ = write!(out, "  v{} -- v{} [color={colour}, penwidth=2", e.u, e.v);
        if e.colour == EdgeColour::Red {
            out.push_str(", style=dashed");
        }
        if let Some(l) = &e.label {
            let _ = write!(out, ", label=\"{}\"", escape(l));
        }
        out.push_str("];\n");
    }
    out.push_str("}\n");
    out
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}
