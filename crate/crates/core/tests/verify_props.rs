use std::collections::{BTreeMap, BTreeSet};

use arck_core::gadgets::{defined_templates, gadget_template, Backend, GadgetKind, InterfacePort};
use arck_core::graph::{line_graph, ColouredGraph, Edge, EdgeColour, Lattice, Vertex};
use arck_core::verify::{
    all_patterns, min_blue_moves, resolve_inputs, verify_goal_gadget, verify_line_graph_planarity,
    verify_truth_table, verify_variable_gadget, CostReport, Signal, Status,
};
use proptest::prelude::*;

use Signal::{A, I};

/// Enumerates every matching of the blue edges, keeps the maximal ones and
/// reads the Out-port plays off each.
fn matching_oracle(g: &ColouredGraph, outs: &[InterfacePort]) -> (usize, BTreeMap<Vec<Signal>, usize>, bool) {
    let blue: Vec<&Edge> = g.edges_of_colour(EdgeColour::Blue).collect();
    let mut costs: BTreeMap<Vec<Signal>, usize> = BTreeMap::new();
    let mut best = usize::MAX;
    let mut best_plain = usize::MAX;
    let mut chosen = Vec::new();
    fn walk(
        i: usize,
        blue: &[&Edge],
        chosen: &mut Vec<usize>,
        visit: &mut dyn FnMut(&[usize]),
    ) {
        if i == blue.len() {
            visit(chosen);
            return;
        }
        walk(i + 1, blue, chosen, visit);
        let e = blue[i];
        if chosen.iter().all(|&j| !blue[j].touches(e.u) && !blue[j].touches(e.v)) {
            chosen.push(i);
            walk(i + 1, blue, chosen, visit);
            chosen.pop();
        }
    }
    walk(0, &blue, &mut chosen, &mut |m: &[usize]| {
        let covered = |e: &Edge| m.iter().any(|&j| blue[j].touches(e.u) || blue[j].touches(e.v));
        if !blue.iter().all(|e| covered(e)) {
            return;
        }
        let ids: BTreeSet<usize> = m.iter().map(|&j| blue[j].id).collect();
        let mut pattern = Vec::new();
        let mut top = false;
        for p in outs {
            if ids.contains(&p.a_edge) {
                pattern.push(A);
            } else {
                top |= ids.contains(&p.top_edge);
                pattern.push(I);
            }
        }
        let c = costs.entry(pattern).or_insert(usize::MAX);
        *c = (*c).min(m.len());
        best = best.min(m.len());
        if !top {
            best_plain = best_plain.min(m.len());
        }
    });
    (best, costs, best == best_plain)
}

fn truth_kinds() -> Vec<(GadgetKind, Backend)> {
    defined_templates()
        .into_iter()
        .filter(|(k, _)| !matches!(k, GadgetKind::Goal | GadgetKind::Variable))
        .collect()
}

fn report(kind: GadgetKind, backend: Backend, input: &[Signal]) -> CostReport {
    let t = gadget_template(kind, backend).unwrap();
    min_blue_moves(&resolve_inputs(&t, input).unwrap(), &t.out_ports()).unwrap()
}

fn set(ps: &[&[Signal]]) -> BTreeSet<Vec<Signal>> {
    ps.iter().map(|p| p.to_vec()).collect()
}

#[test]
fn cost_oracle_matches_matching_enumeration() {
    for (kind, backend) in truth_kinds() {
        let t = gadget_template(kind, backend).unwrap();
        for input in all_patterns(t.in_ports().len()) {
            let g = resolve_inputs(&t, &input).unwrap();
            let r = min_blue_moves(&g, &t.out_ports()).unwrap();
            let (best, costs, plain) = matching_oracle(&g, &t.out_ports());
            assert_eq!(r.min_cost, best, "{kind} {backend} {input:?}");
            assert_eq!(r.pattern_costs, costs.into_iter().collect::<Vec<_>>(), "{kind} {backend} {input:?}");
            assert_eq!(r.top_free, plain);
        }
    }
}

#[test]
fn and_cases() {
    for backend in Backend::ALL {
        assert_eq!(report(GadgetKind::And, backend, &[A, A]).minimal_outputs, set(&[&[A], &[I]]));
        for input in [[A, I], [I, A], [I, I]] {
            let r = report(GadgetKind::And, backend, &input);
            assert_eq!(r.minimal_outputs, set(&[&[I]]), "{backend} {input:?}");
            assert_eq!(r.cost_of(&[A]), Some(r.min_cost + 1), "{backend} {input:?}");
        }
    }
    assert_eq!(report(GadgetKind::And, Backend::General, &[A, A]).min_cost, 1);
}

#[test]
fn or_cases() {
    for backend in Backend::ALL {
        for input in [[A, I], [I, A], [A, A]] {
            assert_eq!(report(GadgetKind::Or, backend, &input).minimal_outputs, set(&[&[A], &[I]]));
        }
        let r = report(GadgetKind::Or, backend, &[I, I]);
        assert_eq!(r.minimal_outputs, set(&[&[I]]), "{backend}");
        assert!(r.cost_of(&[A]).unwrap() > r.min_cost);
    }
}

#[test]
fn fanout_and_choice_cases() {
    for backend in Backend::ALL {
        let r = report(GadgetKind::Fanout, backend, &[A]);
        assert_eq!(r.minimal_outputs, set(&[&[A, A], &[A, I], &[I, A], &[I, I]]));
        let r = report(GadgetKind::Fanout, backend, &[I]);
        assert_eq!(r.minimal_outputs, set(&[&[I, I]]));
        assert!(r.pattern_costs.iter().filter(|(p, _)| p.contains(&A)).all(|&(_, c)| c > r.min_cost));

        let r = report(GadgetKind::Choice, backend, &[A]);
        assert_eq!(r.minimal_outputs, set(&[&[A, I], &[I, A], &[I, I]]));
        assert_eq!(r.cost_of(&[A, A]), Some(r.min_cost + 1), "{backend}");
        let r = report(GadgetKind::Choice, backend, &[I]);
        assert_eq!(r.minimal_outputs, set(&[&[I, I]]), "{backend}");
    }
}

#[test]
fn wires_copy_their_input() {
    for backend in [Backend::Cartesian, Backend::Triangular] {
        for kind in [GadgetKind::WireEven, GadgetKind::WireOdd] {
            assert_eq!(report(kind, backend, &[A]).minimal_outputs, set(&[&[A], &[I]]));
            let r = report(kind, backend, &[I]);
            assert_eq!(r.minimal_outputs, set(&[&[I]]));
            assert_eq!(r.cost_of(&[A]), Some(r.min_cost + 1));
        }
    }
}

#[test]
fn every_truth_table_passes_and_balances_reds() {
    for (kind, backend) in defined_templates() {
        let r = verify_truth_table(kind, backend).unwrap();
        assert!(r.passed(), "{kind} {backend}: {:?}", r.notes);
        if let Some(b) = &r.red_balance {
            assert!(b.holds, "{kind} {backend}: {b:?}");
        }
    }
}

#[test]
fn triangular_choice_discrepancy_is_reported() {
    let r = verify_truth_table(GadgetKind::Choice, Backend::Triangular).unwrap();
    assert_eq!(r.status, Status::Warn);
    let note = r.notes.iter().find(|n| n.starts_with("discrepancy")).unwrap();
    assert!(note.contains("leads to active outputs in both branches"));
    assert!(note.contains("forcing Blue to take an inactive output for both branches"));
    assert!(note.contains("[\"(I,I)\"]"));
    for backend in [Backend::General, Backend::Cartesian] {
        assert_eq!(verify_truth_table(GadgetKind::Choice, backend).unwrap().status, Status::Pass);
    }
}

#[test]
fn variable_lines() {
    for backend in Backend::ALL {
        let v = verify_variable_gadget(backend).unwrap();
        assert_eq!((v.red_c.inactive, v.red_c.active), (2, 3), "{backend}");
        assert_eq!((v.red_b.inactive, v.red_b.active), (2, 2), "{backend}");
        assert_eq!(v.blue_d_activation, 2);
        assert_eq!(v.blue_d_activation_with_pair, 3);
        assert!(v.pair_detached && v.holds);
    }
}

#[test]
fn goal_saves_one_move() {
    for backend in Backend::ALL {
        let g = verify_goal_gadget(backend).unwrap();
        assert_eq!((g.active_total, g.inactive_total), (1, 2));
        assert!(g.g_cleared_by_a && g.g_isolated_after_i && g.holds);
    }
}

#[test]
fn line_graphs_are_planar_and_controls_are_not() {
    let r = verify_line_graph_planarity();
    assert!(r.holds());
    assert_eq!(r.templates.len(), defined_templates().len());
    for row in &r.templates {
        let (kind, backend) = defined_templates()
            .into_iter()
            .find(|(k, b)| format!("{k} {b}") == row.name)
            .unwrap();
        let lg = line_graph(&gadget_template(kind, backend).unwrap().fragment);
        assert!(row.embedding.as_ref().unwrap().is_plane_embedding_of(&lg), "{}", row.name);
    }
    assert!(r.controls.iter().all(|c| !c.planar && c.embedding.is_none()));
}

#[test]
fn upgrading_an_input_never_hurts_blue() {
    for (kind, backend) in truth_kinds() {
        let t = gadget_template(kind, backend).unwrap();
        let pats = all_patterns(t.in_ports().len());
        for p in &pats {
            for q in &pats {
                if p.iter().zip(q).all(|(a, b)| a <= b) {
                    let (rp, rq) = (report(kind, backend, p), report(kind, backend, q));
                    assert!(rq.min_cost <= rp.min_cost, "{kind} {backend} {p:?} {q:?}");
                    assert!(rp.minimal_outputs.is_subset(&rq.minimal_outputs), "{kind} {backend} {p:?} {q:?}");
                }
            }
        }
    }
}

/// Same graph with vertex and edge ids permuted.
fn relabel(g: &ColouredGraph, vp: &[usize], ep: &[usize]) -> ColouredGraph {
    let vs = g.vertices().iter().map(|v| Vertex { id: vp[v.id], ..v.clone() }).collect();
    let es = g.edges().iter().map(|e| Edge { id: ep[e.id], u: vp[e.u], v: vp[e.v], ..e.clone() }).collect();
    ColouredGraph::from_parts(vs, es, Lattice::None).unwrap()
}

fn permutation(n: usize) -> impl Strategy<Value = Vec<usize>> {
    Just((0..n).collect::<Vec<_>>()).prop_shuffle()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn cost_report_ignores_labels(
        (kind, backend, input, vp, ep) in (0..truth_kinds().len()).prop_flat_map(|i| {
            let (kind, backend) = truth_kinds()[i];
            let t = gadget_template(kind, backend).unwrap();
            (
                Just(kind),
                Just(backend),
                proptest::sample::select(all_patterns(t.in_ports().len())),
                permutation(t.fragment.vertex_count()),
                permutation(t.fragment.edge_count()),
            )
        })
    ) {
        let t = gadget_template(kind, backend).unwrap();
        let g = resolve_inputs(&t, &input).unwrap();
        let outs: Vec<InterfacePort> = t
            .out_ports()
            .iter()
            .map(|p| InterfacePort {
                center: vp[p.center],
                i_end: vp[p.i_end],
                a_end: vp[p.a_end],
                top_end: vp[p.top_end],
                i_edge: ep[p.i_edge],
                a_edge: ep[p.a_edge],
                top_edge: ep[p.top_edge],
                companion: ep[p.companion],
                ..*p
            })
            .collect();
        // Removed vertices leave gaps, so permute over the full id range.
        let moved = relabel(&g, &vp, &ep);
        prop_assert_eq!(min_blue_moves(&moved, &outs).unwrap(), min_blue_moves(&g, &t.out_ports()).unwrap());
    }

    #[test]
    fn cost_is_minimum_maximal_matching(
        n in 2usize..8,
        raw in proptest::collection::vec((0usize..8, 0usize..8), 0..12),
    ) {
        let mut seen = BTreeSet::new();
        let edges: Vec<Edge> = raw
            .into_iter()
            .map(|(a, b)| (a % n, b % n))
            .filter(|&(a, b)| a != b && seen.insert((a.min(b), a.max(b))))
            .enumerate()
            .map(|(id, (u, v))| Edge { id, u, v, colour: EdgeColour::Blue, label: None })
            .collect();
        let vs = (0..n).map(|id| Vertex { id, coord: None, label: None }).collect();
        let g = ColouredGraph::from_parts(vs, edges, Lattice::None).unwrap();
        let (best, _, _) = matching_oracle(&g, &[]);
        prop_assert_eq!(min_blue_moves(&g, &[]).unwrap().min_cost, best);
    }
}
