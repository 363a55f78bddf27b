//! Four-completion: wrap a graph without separating triangles in the four
//! boundary vertices N, E, S, W.

use alloc::vec;
use alloc::vec::Vec;

use crate::graph::{PlanarGraph, VertexId};
use crate::triangles::{find_separating_triangles, Triangle};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum CompletionError {
    #[error("outer boundary needs more than four corner-implying paths")]
    TooManyCips,
    #[error("boundary arcs do not match the outer cycle")]
    ArcMismatch,
    #[error("the (N,S) edge is already present")]
    NsEdgePresent,
    #[error("completed graph is not 4-connected: separating triangle {0:?}")]
    NotFourConnected([VertexId; 3]),
}

/// Ids of the four boundary vertices.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Directions {
    pub n: VertexId,
    pub e: VertexId,
    pub s: VertexId,
    pub w: VertexId,
}

impl Directions {
    pub fn contains(&self, v: VertexId) -> bool {
        v == self.n || v == self.e || v == self.s || v == self.w
    }

    /// W, S, E, N: the counterclockwise order of the arcs.
    pub fn ccw(&self) -> [VertexId; 4] {
        [self.w, self.s, self.e, self.n]
    }
}

/// The outer cycle split into four arcs in counterclockwise order, for W, S,
/// E and N. Consecutive arcs share their corner vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundaryArcs {
    pub arcs: [Vec<VertexId>; 4],
    pub corners: [VertexId; 4],
}

impl BoundaryArcs {
    pub fn west(&self) -> &[VertexId] {
        &self.arcs[0]
    }
    pub fn south(&self) -> &[VertexId] {
        &self.arcs[1]
    }
    pub fn east(&self) -> &[VertexId] {
        &self.arcs[2]
    }
    pub fn north(&self) -> &[VertexId] {
        &self.arcs[3]
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompletedGraph {
    pub graph: PlanarGraph,
    pub dirs: Directions,
    pub arcs: BoundaryArcs,
    /// The (N,S) edge is kept as a flag and never enters the rotation system.
    pub ns_edge_present: bool,
}

impl CompletedGraph {
    pub fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        let ns = (u == self.dirs.n && v == self.dirs.s) || (u == self.dirs.s && v == self.dirs.n);
        (ns && self.ns_edge_present) || self.graph.has_edge(u, v)
    }
}

/// Outer cycle in counterclockwise order starting at its smallest vertex.
pub fn outer_cycle_ccw(g: &PlanarGraph) -> Vec<VertexId> {
    let mut c: Vec<VertexId> = g.outer_face().to_vec();
    c.reverse();
    let i = c
        .iter()
        .enumerate()
        .min_by_key(|(_, &v)| v)
        .map(|(i, _)| i)
        .unwrap_or(0);
    c.rotate_left(i);
    c
}

/// For every start index, the largest end index (up to `k`, which stands for
/// the start vertex again) such that the arc holds no chord of the cycle.
fn max_arc_end(g: &PlanarGraph, c: &[VertexId]) -> Vec<usize> {
    let k = c.len();
    let mut pos = vec![usize::MAX; g.id_bound()];
    for (i, &v) in c.iter().enumerate() {
        pos[v as usize] = i;
    }
    // shortest chord leaving each index forward
    let mut reach = vec![usize::MAX; k + 1];
    for (i, &v) in c.iter().enumerate() {
        for &w in g.neighbors(v) {
            let j = pos[w as usize];
            if j == usize::MAX {
                continue;
            }
            let (lo, hi) = (i.min(j), i.max(j));
            if hi - lo <= 1 || (lo == 0 && hi == k - 1) {
                continue;
            }
            reach[lo] = reach[lo].min(hi);
            if lo == 0 {
                // the wrap arc ends at index k, which is c[0] again
                reach[hi] = reach[hi].min(k);
            }
        }
    }
    let mut out = vec![k; k + 1];
    let mut best = usize::MAX;
    for s in (0..=k).rev() {
        best = best.min(reach[s]);
        out[s] = if best == usize::MAX { k } else { best - 1 };
    }
    out
}

fn search_corners(limit: &[usize], k: usize, strict: bool) -> Option<[usize; 4]> {
    let step = usize::from(strict);
    let mut p = [0usize; 4];
    fn go(level: usize, p: &mut [usize; 4], limit: &[usize], k: usize, step: usize) -> bool {
        if level == 4 {
            return limit[p[3]] >= k && k - p[3] >= step;
        }
        let from = p[level - 1] + step;
        let to = limit[p[level - 1]].min(k - 1);
        for x in from..=to {
            p[level] = x;
            if go(level + 1, p, limit, k, step) {
                return true;
            }
        }
        false
    }
    go(1, &mut p, limit, k, step).then_some(p)
}

/// Deterministic arc split of the outer cycle. With four or more outer vertices
/// every arc gets at least one edge (lexicographically smallest corner tuple);
/// a triangle leaves W a single vertex.
pub fn find_boundary_arcs(g: &PlanarGraph) -> Result<BoundaryArcs, CompletionError> {
    let c = outer_cycle_ccw(g);
    let k = c.len();
    if k < 3 {
        return Err(CompletionError::ArcMismatch);
    }
    let p = if k == 3 {
        [0, 0, 1, 2]
    } else {
        let limit = max_arc_end(g, &c);
        search_corners(&limit, k, true)
            .or_else(|| search_corners(&limit, k, false))
            .ok_or(CompletionError::TooManyCips)?
    };
    let at = |i: usize| c[i % k];
    let mut arcs: [Vec<VertexId>; 4] = Default::default();
    for i in 0..4 {
        let end = if i == 3 { k } else { p[i + 1] };
        arcs[i] = (p[i]..=end).map(at).collect();
    }
    Ok(BoundaryArcs {
        arcs,
        corners: [at(p[0]), at(p[1]), at(p[2]), at(p[3])],
    })
}

fn check_arcs(c: &[VertexId], arcs: &BoundaryArcs) -> Result<(), CompletionError> {
    let k = c.len();
    let mut walk: Vec<VertexId> = Vec::new();
    for (i, arc) in arcs.arcs.iter().enumerate() {
        if arc.is_empty() || arc[0] != arcs.corners[i] {
            return Err(CompletionError::ArcMismatch);
        }
        if let Some(&last) = walk.last() {
            if last != arc[0] {
                return Err(CompletionError::ArcMismatch);
            }
            walk.extend(&arc[1..]);
        } else {
            walk.extend(arc);
        }
    }
    if walk.len() != k + 1 || walk[0] != walk[k] {
        return Err(CompletionError::ArcMismatch);
    }
    walk.pop();
    let start = c
        .iter()
        .position(|&v| v == walk[0])
        .ok_or(CompletionError::ArcMismatch)?;
    if (0..k).any(|i| walk[i] != c[(start + i) % k]) {
        return Err(CompletionError::ArcMismatch);
    }
    Ok(())
}

/// Add N, E, S, W around `g`, each adjacent to its arc and to its two
/// neighboring direction vertices. The outer face becomes N, E, S, W.
pub fn four_complete(
    g: &PlanarGraph,
    arcs: &BoundaryArcs,
) -> Result<CompletedGraph, CompletionError> {
    let c = outer_cycle_ccw(g);
    check_arcs(&c, arcs)?;
    let k = c.len();
    let base = g.max_id();
    let dirs = Directions {
        n: base + 1,
        e: base + 2,
        s: base + 3,
        w: base + 4,
    };
    let order = dirs.ccw();
    let mut rot: Vec<Vec<VertexId>> = g.rot.clone();
    rot.resize(base as usize + 5, Vec::new());

    for (i, arc) in arcs.arcs.iter().enumerate() {
        let x = order[i];
        let prev = order[(i + 3) % 4];
        let next = order[(i + 1) % 4];
        let mut r: Vec<VertexId> = arc.iter().rev().copied().collect();
        r.push(prev);
        r.push(next);
        rot[x as usize] = r;
    }

    for j in 0..k {
        let v = c[j];
        let before = c[(j + k - 1) % k];
        // arcs through v form a cyclic run; start where the previous arc misses v
        let touching: Vec<bool> = arcs.arcs.iter().map(|a| a.contains(&v)).collect();
        let first = (0..4)
            .find(|&i| touching[i] && !touching[(i + 3) % 4])
            .unwrap_or(3);
        let mut ins: Vec<VertexId> = Vec::new();
        let mut i = first;
        while touching[i] && ins.len() < 4 {
            ins.push(order[i]);
            i = (i + 1) % 4;
        }
        let r = &mut rot[v as usize];
        let at = r
            .iter()
            .position(|&w| w == before)
            .expect("outer cycle edge")
            + 1;
        for (off, x) in ins.into_iter().enumerate() {
            r.insert(at + off, x);
        }
    }

    let mut graph = PlanarGraph::from_parts(rot, vec![dirs.n, dirs.e, dirs.s, dirs.w]);
    graph.labels = g.labels.clone();
    Ok(CompletedGraph {
        graph,
        dirs,
        arcs: arcs.clone(),
        ns_edge_present: false,
    })
}

/// Set the (N,S) flag after checking that no separating triangle remains in
/// the completed graph.
pub fn add_ns_edge(cg: &CompletedGraph) -> Result<CompletedGraph, CompletionError> {
    if cg.ns_edge_present {
        return Err(CompletionError::NsEdgePresent);
    }
    if let Some(t) = find_separating_triangles(&cg.graph).first() {
        return Err(CompletionError::NotFourConnected(t.vertices));
    }
    let mut out = cg.clone();
    out.ns_edge_present = true;
    Ok(out)
}

/// Separating triangles that the (N,S) edge would add: each is (N, S, v) for a
/// vertex v on both the north and the south arc.
pub fn ns_triangles(cg: &CompletedGraph) -> Vec<Triangle> {
    let north = cg.arcs.north();
    cg.arcs
        .south()
        .iter()
        .filter(|v| north.contains(v))
        .map(|&v| Triangle::new(cg.dirs.n, cg.dirs.s, v, false))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::*;
    use crate::graph::{build_graph, connectivity_at_least, validate_ptg};
    use crate::triangles::{find_kl, modify_kl};

    fn g5_modified() -> PlanarGraph {
        let g = g5();
        modify_kl(&g, &find_kl(&g)[0]).unwrap().0
    }

    fn opened(g: &PlanarGraph) -> PlanarGraph {
        let keep: Vec<_> = find_separating_triangles(g);
        crate::triangles::open_outer_face(g, &keep, &[], &[])
            .unwrap()
            .0
    }

    fn complete(g: &PlanarGraph) -> CompletedGraph {
        four_complete(g, &find_boundary_arcs(g).unwrap()).unwrap()
    }

    fn check_completion(g: &PlanarGraph, cg: &CompletedGraph) {
        let h = &cg.graph;
        assert!(validate_ptg(h).verdict(), "{}", validate_ptg(h));
        assert_eq!(h.vertex_count(), g.vertex_count() + 4);
        // Euler: a triangulated disk with outer face of length 4
        assert_eq!(h.face_count(), 2 * h.vertex_count() - 4 - 2 + 1);
        for (i, x) in cg.dirs.ccw().into_iter().enumerate() {
            assert_eq!(h.degree(x), cg.arcs.arcs[i].len() + 2);
        }
        let mut outer = vec![cg.dirs.n, cg.dirs.e, cg.dirs.s, cg.dirs.w];
        let m = outer.iter().enumerate().min_by_key(|(_, &v)| v).unwrap().0;
        outer.rotate_left(m);
        assert_eq!(h.outer_face(), outer.as_slice());
    }

    #[test]
    fn triangle_outer_leaves_one_single_vertex_arc() {
        let g = g5_modified();
        let arcs = find_boundary_arcs(&g).unwrap();
        assert_eq!(outer_cycle_ccw(&g), vec![1, 3, 2]);
        assert_eq!(arcs.arcs, [vec![1], vec![1, 3], vec![3, 2], vec![2, 1]]);
        let cg = four_complete(&g, &arcs).unwrap();
        assert_eq!(cg.graph.vertex_count(), 10);
        check_completion(&g, &cg);
    }

    #[test]
    fn completion_of_fixtures() {
        let g = g6();
        let site = crate::triangles::find_kt(&g)[0];
        let h = crate::triangles::modify_kt(&g, &site).unwrap().0;
        let cg = complete(&h);
        assert_eq!(cg.graph.vertex_count(), 11);
        check_completion(&h, &cg);
        let o = oct();
        check_completion(&o, &complete(&o));
        let t = build_graph(&[(1, 2), (2, 3), (1, 3)], None, None).unwrap();
        let ct = complete(&t);
        assert_eq!(ct.graph.vertex_count(), 7);
        check_completion(&t, &ct);
    }

    #[test]
    fn four_cycle_outer_gives_one_edge_per_arc() {
        // wheel: square 1-2-3-4 around hub 5
        let g = build_graph(
            &[
                (1, 2),
                (2, 3),
                (3, 4),
                (1, 4),
                (1, 5),
                (2, 5),
                (3, 5),
                (4, 5),
            ],
            None,
            Some(&[1, 2, 3, 4]),
        )
        .unwrap();
        let arcs = find_boundary_arcs(&g).unwrap();
        assert!(arcs.arcs.iter().all(|a| a.len() == 2));
        check_completion(&g, &four_complete(&g, &arcs).unwrap());
    }

    #[test]
    fn chords_force_corners() {
        // pentagon 1..5 with chord (1,3) and (1,4): arcs may not contain them
        let g = build_graph(
            &[(1, 2), (2, 3), (3, 4), (4, 5), (1, 5), (1, 3), (1, 4)],
            None,
            Some(&[1, 2, 3, 4, 5]),
        )
        .unwrap();
        let arcs = find_boundary_arcs(&g).unwrap();
        for arc in &arcs.arcs {
            for i in 0..arc.len() {
                for j in i + 2..arc.len() {
                    if !(i == 0 && j == arc.len() - 1 && arc[i] == arc[j]) {
                        assert!(!g.has_edge(arc[i], arc[j]), "{arcs:?}");
                    }
                }
            }
        }
        let cg = four_complete(&g, &arcs).unwrap();
        assert!(find_separating_triangles(&cg.graph).is_empty());
    }

    #[test]
    fn mismatched_arcs_rejected() {
        let g = g5_modified();
        let mut arcs = find_boundary_arcs(&g).unwrap();
        arcs.arcs.swap(1, 2);
        assert_eq!(four_complete(&g, &arcs), Err(CompletionError::ArcMismatch));
    }

    #[test]
    fn triangle_outer_stays_separating_after_completion() {
        let g = g5_modified();
        let cg = complete(&g);
        assert_eq!(
            add_ns_edge(&cg),
            Err(CompletionError::NotFourConnected([1, 2, 3]))
        );
        assert_eq!(ns_triangles(&cg).len(), 1);
        assert!(!connectivity_at_least(&cg.graph, 4).unwrap());
    }

    #[test]
    fn ns_edge() {
        let g = opened(&g5_modified());
        let cg = add_ns_edge(&complete(&g)).unwrap();
        assert_eq!(cg.graph.vertex_count(), 11);
        assert!(cg.ns_edge_present);
        assert!(cg.has_edge(cg.dirs.n, cg.dirs.s));
        assert_eq!(add_ns_edge(&cg), Err(CompletionError::NsEdgePresent));
        assert!(ns_triangles(&cg).is_empty());
        assert!(connectivity_at_least(&cg.graph, 4).unwrap());
        let o = opened(&oct());
        let co = add_ns_edge(&complete(&o)).unwrap();
        assert!(connectivity_at_least(&co.graph, 4).unwrap());
        let w = build_graph(
            &[
                (1, 2),
                (2, 3),
                (3, 4),
                (1, 4),
                (1, 5),
                (2, 5),
                (3, 5),
                (4, 5),
            ],
            None,
            Some(&[1, 2, 3, 4]),
        )
        .unwrap();
        let cw = add_ns_edge(&complete(&w)).unwrap();
        assert!(ns_triangles(&cw).is_empty());
        assert!(connectivity_at_least(&cw.graph, 4).unwrap());
    }

    #[test]
    fn separating_input_triangle_is_reported() {
        let g = opened(&g5());
        let cg = complete(&g);
        assert_eq!(
            add_ns_edge(&cg),
            Err(CompletionError::NotFourConnected([1, 2, 4]))
        );
    }
}
