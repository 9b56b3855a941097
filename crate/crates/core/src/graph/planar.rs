//! Exact planarity testing.
//!
//! Each biconnected block is embedded with the path-addition method of
//! Demoucron, Malgrange and Pertuiset; block rotations are then glued at cut
//! vertices. Non-planar inputs are reduced to an edge-minimal non-planar
//! subgraph, which by Kuratowski's theorem is a subdivision of K5 or K3,3.

use std::collections::{BTreeMap, HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use super::{ColouredGraph, EdgeId, VertexId};

/// Rotation system: for every vertex, its incident edges in cyclic order.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Embedding {
    pub rotation: BTreeMap<VertexId, Vec<EdgeId>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum KuratowskiKind {
    K5,
    K33,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KuratowskiWitness {
    pub kind: KuratowskiKind,
    pub branch_vertices: Vec<VertexId>,
    /// Edges of the subdivision; every one of them is needed for non-planarity.
    pub edges: Vec<EdgeId>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Planarity {
    Planar(Embedding),
    NonPlanar(KuratowskiWitness),
}

impl Planarity {
    pub fn is_planar(&self) -> bool {
        matches!(self, Planarity::Planar(_))
    }

    pub fn embedding(&self) -> Option<&Embedding> {
        match self {
            Planarity::Planar(e) => Some(e),
            Planarity::NonPlanar(_) => None,
        }
    }

    pub fn witness(&self) -> Option<&KuratowskiWitness> {
        match self {
            Planarity::Planar(_) => None,
            Planarity::NonPlanar(w) => Some(w),
        }
    }
}

impl Embedding {
    /// Traces the faces of the rotation system. `ends` maps an edge to its
    /// endpoints. Each face is the cyclic list of darts `(edge, from)`.
    pub fn faces(&self, ends: impl Fn(EdgeId) -> (VertexId, VertexId)) -> Vec<Vec<(EdgeId, VertexId)>> {
        let mut position: HashMap<(VertexId, EdgeId), usize> = HashMap::new();
        for (&v, rot) in &self.rotation {
            for (i, &e) in rot.iter().enumerate() {
                position.insert((v, e), i);
            }
        }
        let mut seen: HashMap<(EdgeId, VertexId), bool> = HashMap::new();
        let mut faces = Vec::new();
        for (&v, rot) in &self.rotation {
            for &e in rot {
                if seen.contains_key(&(e, v)) {
                    continue;
                }
                let mut face = Vec::new();
                let (mut de, mut dv) = (e, v);
                while seen.insert((de, dv), true).is_none() {
                    face.push((de, dv));
                    let (a, b) = ends(de);
                    let w = if a == dv { b } else { a };
                    let rw = &self.rotation[&w];
                    let i = position[&(w, de)];
                    de = rw[(i + 1) % rw.len()];
                    dv = w;
                }
                faces.push(face);
            }
        }
        faces
    }

    /// True when the rotation system covers `g` exactly and its face count
    /// satisfies Euler's formula for every connected component, i.e. it is a
    /// genuine plane embedding.
    pub fn is_plane_embedding_of(&self, g: &ColouredGraph) -> bool {
        for v in g.vertices() {
            let mut want: Vec<EdgeId> = g.incident(v.id).map(|e| e.id).collect();
            let mut have = self.rotation.get(&v.id).cloned().unwrap_or_default();
            want.sort_unstable();
            have.sort_unstable();
            if want != have {
                return false;
            }
        }
        if self.rotation.keys().any(|&v| g.vertex(v).is_none()) {
            return false;
        }
        let faces = self.faces(|e| {
            let e = g.edge(e).expect("edge in rotation");
            (e.u, e.v)
        });
        let (ids, pairs) = g.indexed();
        let comps = components_with_edges(ids.len(), &pairs);
        let active = ids.iter().filter(|&&v| g.degree(v) > 0).count();
        active as i64 - g.edge_count() as i64 + faces.len() as i64 == 2 * comps as i64
    }
}

/// Tests `g` for planarity, returning an embedding or a Kuratowski witness.
pub fn is_planar(g: &ColouredGraph) -> Planarity {
    let (ids, pairs) = g.indexed();
    let eids: Vec<EdgeId> = g.edges().iter().map(|e| e.id).collect();
    match embed(ids.len(), &pairs) {
        Some(rot) => {
            let rotation = rot
                .into_iter()
                .enumerate()
                .map(|(v, r)| (ids[v], r.into_iter().map(|e| eids[e]).collect()))
                .collect();
            Planarity::Planar(Embedding { rotation })
        }
        None => Planarity::NonPlanar(witness(ids.len(), &pairs, &ids, &eids)),
    }
}

/// Planarity of a graph given as dense endpoint pairs (no loops, no parallels).
pub(crate) fn planar_pairs(n: usize, pairs: &[(usize, usize)]) -> bool {
    embed(n, pairs).is_some()
}

fn components_with_edges(n: usize, pairs: &[(usize, usize)]) -> usize {
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        let mut x = x;
        while p[x] != r {
            let nx = p[x];
            p[x] = r;
            x = nx;
        }
        r
    }
    for &(a, b) in pairs {
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        parent[ra] = rb;
    }
    let mut roots: Vec<usize> = pairs.iter().map(|&(a, _)| find(&mut parent, a)).collect();
    roots.sort_unstable();
    roots.dedup();
    roots.len()
}

/// Rotation per dense vertex, in dense edge indices, or `None` if non-planar.
fn embed(n: usize, pairs: &[(usize, usize)]) -> Option<Vec<Vec<usize>>> {
    if n >= 3 && pairs.len() > 3 * n - 6 {
        return None;
    }
    let mut rotation = vec![Vec::new(); n];
    for block in blocks(n, pairs) {
        let rot = if block.len() == 1 {
            let e = block[0];
            let (a, b) = pairs[e];
            vec![(a, vec![e]), (b, vec![e])]
        } else {
            embed_block(pairs, &block)?
        };
        for (v, r) in rot {
            rotation[v].extend(r);
        }
    }
    Some(rotation)
}

/// Biconnected components as lists of edge indices (Tarjan, explicit stack).
fn blocks(n: usize, pairs: &[(usize, usize)]) -> Vec<Vec<usize>> {
    let mut adj = vec![Vec::new(); n];
    for (e, &(a, b)) in pairs.iter().enumerate() {
        adj[a].push((b, e));
        adj[b].push((a, e));
    }
    const UNSEEN: usize = usize::MAX;
    let mut disc = vec![UNSEEN; n];
    let mut low = vec![0; n];
    let mut timer = 0;
    let mut edge_stack: Vec<usize> = Vec::new();
    let mut out = Vec::new();
    for root in 0..n {
        if disc[root] != UNSEEN {
            continue;
        }
        // frame: (vertex, parent edge, next adjacency index)
        let mut frames: Vec<(usize, usize, usize)> = vec![(root, UNSEEN, 0)];
        disc[root] = timer;
        low[root] = timer;
        timer += 1;
        while let Some(&mut (v, pe, ref mut i)) = frames.last_mut() {
            if *i < adj[v].len() {
                let (w, e) = adj[v][*i];
                *i += 1;
                if e == pe {
                    continue;
                }
                if disc[w] == UNSEEN {
                    edge_stack.push(e);
                    disc[w] = timer;
                    low[w] = timer;
                    timer += 1;
                    frames.push((w, e, 0));
                } else if disc[w] < disc[v] {
                    edge_stack.push(e);
                    low[v] = low[v].min(disc[w]);
                }
            } else {
                frames.pop();
                if let Some(&(u, _, _)) = frames.last() {
                    low[u] = low[u].min(low[v]);
                    if low[v] >= disc[u] {
                        let mut block = Vec::new();
                        while let Some(x) = edge_stack.pop() {
                            block.push(x);
                            if x == pe {
                                break;
                            }
                        }
                        out.push(block);
                    }
                }
            }
        }
    }
    out
}

/// Path-addition embedding of one biconnected block with at least two edges.
fn embed_block(pairs: &[(usize, usize)], block: &[usize]) -> Option<Vec<(usize, Vec<usize>)>> {
    let mut adj: BTreeMap<usize, Vec<(usize, usize)>> = BTreeMap::new();
    let mut edge_of: HashMap<(usize, usize), usize> = HashMap::new();
    for &e in block {
        let (a, b) = pairs[e];
        adj.entry(a).or_default().push((b, e));
        adj.entry(b).or_default().push((a, e));
        edge_of.insert((a.min(b), a.max(b)), e);
    }
    let nv = adj.len();
    if block.len() > 3 * nv - 6 {
        return None;
    }
    let mut in_h: HashMap<usize, bool> = adj.keys().map(|&v| (v, false)).collect();
    let mut edge_in_h: HashMap<usize, bool> = block.iter().map(|&e| (e, false)).collect();

    // Initial cycle: an edge plus a path back that avoids it.
    let first = block[0];
    let (a, b) = pairs[first];
    let back = bfs_path(&adj, b, |v| v == a, |_, e| e != first)?;
    let cycle = back;
    for w in cycle.windows(2) {
        edge_in_h.insert(edge_of[&(w[0].min(w[1]), w[0].max(w[1]))], true);
    }
    edge_in_h.insert(first, true);
    for &v in &cycle {
        in_h.insert(v, true);
    }
    let mut faces: Vec<Vec<usize>> = vec![cycle.clone(), cycle.iter().rev().copied().collect()];
    let mut embedded = cycle.len();

    while embedded < block.len() {
        let frags = fragments(&adj, &in_h, &edge_in_h, block, pairs);
        let sets: Vec<Vec<usize>> = faces
            .iter()
            .map(|f| {
                let mut s = f.clone();
                s.sort_unstable();
                s
            })
            .collect();
        let mut choice: Option<(usize, usize)> = None;
        for (fi, frag) in frags.iter().enumerate() {
            let ok: Vec<usize> = (0..faces.len())
                .filter(|&k| frag.attachments.iter().all(|x| sets[k].binary_search(x).is_ok()))
                .collect();
            match ok.len() {
                0 => return None,
                1 => {
                    choice = Some((fi, ok[0]));
                    break;
                }
                _ => {
                    if choice.is_none() {
                        choice = Some((fi, ok[0]));
                    }
                }
            }
        }
        let (fi, face_idx) = choice.expect("unembedded edges imply a fragment");
        let path = fragment_path(&adj, &in_h, &frags[fi]);
        for w in path.windows(2) {
            edge_in_h.insert(edge_of[&(w[0].min(w[1]), w[0].max(w[1]))], true);
            embedded += 1;
        }
        for &v in &path {
            in_h.insert(v, true);
        }
        let face = faces.swap_remove(face_idx);
        let (f1, f2) = split_face(&face, &path);
        faces.push(f1);
        faces.push(f2);
    }

    // succ[v][e_in] = e_out for consecutive darts on a face.
    let mut succ: HashMap<(usize, usize), usize> = HashMap::new();
    for f in &faces {
        let k = f.len();
        for t in 0..k {
            let (u, v, w) = (f[(t + k - 1) % k], f[t], f[(t + 1) % k]);
            let ein = edge_of[&(u.min(v), u.max(v))];
            let eout = edge_of[&(v.min(w), v.max(w))];
            succ.insert((v, ein), eout);
        }
    }
    let mut out = Vec::with_capacity(nv);
    for (&v, nbrs) in &adj {
        let start = nbrs.iter().map(|&(_, e)| e).min().expect("block vertex has edges");
        let mut rot = vec![start];
        let mut cur = succ[&(v, start)];
        while cur != start {
            rot.push(cur);
            cur = succ[&(v, cur)];
        }
        debug_assert_eq!(rot.len(), nbrs.len());
        out.push((v, rot));
    }
    Some(out)
}

struct Fragment {
    attachments: Vec<usize>,
    /// Vertices not yet embedded; empty for a single chord edge.
    interior: Vec<usize>,
    chord: Option<(usize, usize)>,
}

fn fragments(
    adj: &BTreeMap<usize, Vec<(usize, usize)>>,
    in_h: &HashMap<usize, bool>,
    edge_in_h: &HashMap<usize, bool>,
    block: &[usize],
    pairs: &[(usize, usize)],
) -> Vec<Fragment> {
    let mut out = Vec::new();
    for &e in block {
        let (a, b) = pairs[e];
        if !edge_in_h[&e] && in_h[&a] && in_h[&b] {
            out.push(Fragment { attachments: vec![a.min(b), a.max(b)], interior: Vec::new(), chord: Some((a, b)) });
        }
    }
    let mut seen: HashMap<usize, bool> = HashMap::new();
    for &s in adj.keys() {
        if in_h[&s] || seen.contains_key(&s) {
            continue;
        }
        let mut interior = vec![s];
        let mut attachments = Vec::new();
        seen.insert(s, true);
        let mut q = VecDeque::from([s]);
        while let Some(v) = q.pop_front() {
            for &(w, _) in &adj[&v] {
                if in_h[&w] {
                    attachments.push(w);
                } else if seen.insert(w, true).is_none() {
                    interior.push(w);
                    q.push_back(w);
                }
            }
        }
        attachments.sort_unstable();
        attachments.dedup();
        out.push(Fragment { attachments, interior, chord: None });
    }
    out
}

/// A path through the fragment joining two distinct attachment vertices.
fn fragment_path(adj: &BTreeMap<usize, Vec<(usize, usize)>>, in_h: &HashMap<usize, bool>, frag: &Fragment) -> Vec<usize> {
    if let Some((a, b)) = frag.chord {
        return vec![a, b];
    }
    let start = frag.attachments[0];
    let inside: HashMap<usize, bool> = frag.interior.iter().map(|&v| (v, true)).collect();
    // Walk from `start` into the interior until a different attachment is adjacent.
    let mut prev: HashMap<usize, usize> = HashMap::new();
    let mut q = VecDeque::new();
    for &(w, _) in &adj[&start] {
        if inside.contains_key(&w) && !prev.contains_key(&w) {
            prev.insert(w, start);
            q.push_back(w);
        }
    }
    while let Some(v) = q.pop_front() {
        for &(w, _) in &adj[&v] {
            if in_h[&w] && w != start {
                let mut path = vec![w, v];
                let mut cur = v;
                while let Some(&p) = prev.get(&cur) {
                    path.push(p);
                    if p == start {
                        break;
                    }
                    cur = p;
                }
                path.reverse();
                return path;
            }
            if inside.contains_key(&w) && !prev.contains_key(&w) {
                prev.insert(w, v);
                q.push_back(w);
            }
        }
    }
    unreachable!("fragment of a biconnected block has two attachments")
}

fn split_face(face: &[usize], path: &[usize]) -> (Vec<usize>, Vec<usize>) {
    let k = face.len();
    let a = path[0];
    let b = *path.last().expect("non-empty path");
    let i = face.iter().position(|&v| v == a).expect("attachment on face");
    let j = face.iter().position(|&v| v == b).expect("attachment on face");
    let inner = &path[1..path.len() - 1];
    let mut f1 = Vec::new();
    let mut t = i;
    loop {
        f1.push(face[t]);
        if t == j {
            break;
        }
        t = (t + 1) % k;
    }
    f1.extend(inner.iter().rev());
    let mut f2 = Vec::new();
    let mut t = j;
    loop {
        f2.push(face[t]);
        if t == i {
            break;
        }
        t = (t + 1) % k;
    }
    f2.extend(inner.iter());
    (f1, f2)
}

fn bfs_path(
    adj: &BTreeMap<usize, Vec<(usize, usize)>>,
    from: usize,
    goal: impl Fn(usize) -> bool,
    usable: impl Fn(usize, usize) -> bool,
) -> Option<Vec<usize>> {
    let mut prev: HashMap<usize, usize> = HashMap::new();
    let mut q = VecDeque::from([from]);
    prev.insert(from, from);
    while let Some(v) = q.pop_front() {
        if goal(v) {
            let mut path = vec![v];
            let mut cur = v;
            while cur != from {
                cur = prev[&cur];
                path.push(cur);
            }
            path.reverse();
            return Some(path);
        }
        for &(w, e) in &adj[&v] {
            if usable(v, e) && !prev.contains_key(&w) {
                prev.insert(w, v);
                q.push_back(w);
            }
        }
    }
    None
}

/// Greedy edge deletion down to an edge-minimal non-planar subgraph.
fn witness(n: usize, pairs: &[(usize, usize)], ids: &[VertexId], eids: &[EdgeId]) -> KuratowskiWitness {
    let mut keep: Vec<usize> = (0..pairs.len()).collect();
    let mut i = 0;
    while i < keep.len() {
        let trial: Vec<(usize, usize)> =
            keep.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &e)| pairs[e]).collect();
        if planar_pairs(n, &trial) {
            i += 1;
        } else {
            keep.remove(i);
        }
    }
    let mut degree = vec![0usize; n];
    for &e in &keep {
        degree[pairs[e].0] += 1;
        degree[pairs[e].1] += 1;
    }
    let branch: Vec<usize> = (0..n).filter(|&v| degree[v] >= 3).collect();
    let kind = if branch.len() == 5 { KuratowskiKind::K5 } else { KuratowskiKind::K33 };
    debug_assert!(
        (kind == KuratowskiKind::K5 && branch.iter().all(|&v| degree[v] == 4))
            || (branch.len() == 6 && branch.iter().all(|&v| degree[v] == 3))
    );
    KuratowskiWitness {
        kind,
        branch_vertices: branch.into_iter().map(|v| ids[v]).collect(),
        edges: keep.into_iter().map(|e| eids[e]).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_graph, EdgeColour, Lattice, RawEdge, RawVertex};
    use proptest::prelude::*;

    fn plain(n: usize, edges: &[(usize, usize)]) -> ColouredGraph {
        let vs: Vec<_> = (0..n as i64).map(|id| RawVertex { id, coord: None }).collect();
        let es: Vec<_> = edges
            .iter()
            .enumerate()
            .map(|(i, &(u, v))| RawEdge::new(i as i64, u as i64, v as i64, EdgeColour::Blue))
            .collect();
        build_graph(&vs, &es, Lattice::None).unwrap()
    }

    fn complete(n: usize) -> Vec<(usize, usize)> {
        (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect()
    }

    fn k33() -> Vec<(usize, usize)> {
        (0..3).flat_map(|a| (3..6).map(move |b| (a, b))).collect()
    }

    /// Independent oracle: try every rotation system and look for one whose
    /// face count meets Euler's formula.
    fn brute_planar(n: usize, edges: &[(usize, usize)]) -> bool {
        let g = plain(n, edges);
        let mut rotations: Vec<Vec<Vec<EdgeId>>> = Vec::new();
        for v in 0..n {
            let inc: Vec<EdgeId> = g.incident(v).map(|e| e.id).collect();
            rotations.push(cyclic_orders(&inc));
        }
        let mut idx = vec![0usize; n];
        loop {
            let emb = Embedding {
                rotation: (0..n).map(|v| (v, rotations[v][idx[v]].clone())).collect(),
            };
            if emb.is_plane_embedding_of(&g) {
                return true;
            }
            let mut v = 0;
            loop {
                if v == n {
                    return false;
                }
                idx[v] += 1;
                if idx[v] < rotations[v].len() {
                    break;
                }
                idx[v] = 0;
                v += 1;
            }
        }
    }

    fn cyclic_orders(items: &[EdgeId]) -> Vec<Vec<EdgeId>> {
        if items.len() <= 2 {
            return vec![items.to_vec()];
        }
        let mut out = Vec::new();
        let rest = &items[1..];
        permute(rest.to_vec(), 0, &mut |p| {
            let mut o = vec![items[0]];
            o.extend_from_slice(p);
            out.push(o);
        });
        out
    }

    fn permute(mut v: Vec<EdgeId>, k: usize, f: &mut impl FnMut(&[EdgeId])) {
        if k == v.len() {
            f(&v);
            return;
        }
        for i in k..v.len() {
            v.swap(k, i);
            permute(v.clone(), k + 1, f);
            v.swap(k, i);
        }
    }

    #[test]
    fn k4_is_planar_with_valid_embedding() {
        let g = plain(4, &complete(4));
        let p = is_planar(&g);
        assert!(p.embedding().unwrap().is_plane_embedding_of(&g));
    }

    #[test]
    fn k5_witness() {
        let g = plain(5, &complete(5));
        let w = is_planar(&g).witness().cloned().unwrap();
        assert_eq!(w.kind, KuratowskiKind::K5);
        assert_eq!(w.edges.len(), 10);
    }

    #[test]
    fn k33_witness() {
        let g = plain(6, &k33());
        let w = is_planar(&g).witness().cloned().unwrap();
        assert_eq!(w.kind, KuratowskiKind::K33);
        assert_eq!(w.branch_vertices.len(), 6);
    }

    #[test]
    fn subdivided_k33_inside_larger_graph() {
        // K3,3 with one edge subdivided, plus a pendant tree.
        let mut e: Vec<(usize, usize)> = k33().into_iter().filter(|&p| p != (0, 3)).collect();
        e.extend([(0, 6), (6, 3), (6, 7), (7, 8)]);
        let g = plain(9, &e);
        let w = is_planar(&g).witness().cloned().unwrap();
        assert_eq!(w.kind, KuratowskiKind::K33);
        assert_eq!(w.edges.len(), 10);
    }

    #[test]
    fn cut_vertices_and_bridges() {
        // Two K4s sharing vertex 0, plus a bridge to a triangle.
        let mut e = complete(4);
        e.extend([(0, 4), (0, 5), (0, 6), (4, 5), (4, 6), (5, 6)]);
        e.extend([(6, 7), (7, 8), (8, 9), (9, 7)]);
        let g = plain(11, &e);
        let p = is_planar(&g);
        assert!(p.embedding().unwrap().is_plane_embedding_of(&g));
    }

    #[test]
    fn petersen_is_not_planar() {
        let e = [
            (0, 1), (1, 2), (2, 3), (3, 4), (4, 0),
            (0, 5), (1, 6), (2, 7), (3, 8), (4, 9),
            (5, 7), (7, 9), (9, 6), (6, 8), (8, 5),
        ];
        assert!(!is_planar(&plain(10, &e)).is_planar());
    }

    fn small_graph(max_n: usize) -> impl Strategy<Value = (usize, Vec<(usize, usize)>)> {
        (3..=max_n).prop_flat_map(|n| {
            let all = complete(n);
            let m = all.len();
            (Just(n), proptest::collection::vec(any::<bool>(), m)).prop_map(move |(n, mask)| {
                let edges = all.iter().zip(mask).filter(|(_, k)| *k).map(|(&p, _)| p).collect();
                (n, edges)
            })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn agrees_with_rotation_enumeration((n, edges) in small_graph(6)) {
            let g = plain(n, &edges);
            let p = is_planar(&g);
            if edges.len() <= 3 * n - 6 {
                prop_assert_eq!(p.is_planar(), brute_planar(n, &edges));
            }
            match &p {
                Planarity::Planar(emb) => prop_assert!(emb.is_plane_embedding_of(&g)),
                Planarity::NonPlanar(w) => {
                    let sub: Vec<(usize, usize)> = w.edges.iter().map(|&e| edges[e]).collect();
                    prop_assert!(!planar_pairs(n, &sub));
                }
            }
        }

        #[test]
        fn euler_bound_rejects((n, edges) in small_graph(9)) {
            let p = is_planar(&plain(n, &edges));
            if edges.len() > 3 * n - 6 {
                prop_assert!(!p.is_planar());
            }
            if let Planarity::Planar(emb) = &p {
                prop_assert!(emb.is_plane_embedding_of(&plain(n, &edges)));
            }
        }
    }
}
