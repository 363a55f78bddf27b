//! Plane graphs with an explicit rotation system.
//!
//! Rotations list neighbors counterclockwise. A face lies to the left of each
//! of its darts: after arriving at `v` from `u`, the walk continues to the
//! neighbor that precedes `u` in the rotation of `v`. Inner faces of a plane
//! triangulation therefore come out counterclockwise and the outer face
//! clockwise.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::embed;
use crate::report::ValidationReport;

pub type VertexId = u32;

/// Largest accepted vertex id. Ids index dense arrays directly.
pub const MAX_VERTEX_ID: VertexId = 1 << 24;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum GraphError {
    #[error("edge list is empty")]
    EmptyEdgeList,
    #[error("self-loop at vertex {0}")]
    SelfLoop(VertexId),
    #[error("parallel edge ({0},{1})")]
    ParallelEdge(VertexId, VertexId),
    #[error("vertex id {0} exceeds the supported maximum")]
    IdTooLarge(VertexId),
    #[error("graph is disconnected")]
    Disconnected,
    #[error("graph is not planar")]
    NonPlanar,
    #[error("rotation system is inconsistent at vertex {vertex}: {reason}")]
    InconsistentRotation { vertex: VertexId, reason: String },
    #[error("outer face {0:?} is not a face of the embedding")]
    UnknownOuterFace(Vec<VertexId>),
    #[error("need more than {needed} vertices, graph has {found}")]
    TooFewVertices { needed: usize, found: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Face {
    /// Closed walk, starting at its smallest vertex.
    pub vertices: Vec<VertexId>,
    pub is_outer: bool,
}

impl Face {
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn is_triangle(&self) -> bool {
        self.vertices.len() == 3
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlanarGraph {
    pub(crate) rot: Vec<Vec<VertexId>>,
    pub(crate) present: Vec<bool>,
    pub(crate) outer: Vec<VertexId>,
    pub(crate) labels: BTreeMap<VertexId, String>,
    pub(crate) edge_count: usize,
}

/// Ingest an edge list, adopting `rotation` verbatim when given and otherwise
/// computing a planar embedding. The outer face defaults to the longest face,
/// ties broken by the lexicographically smallest vertex sequence.
pub fn build_graph(
    edges: &[(VertexId, VertexId)],
    rotation: Option<&BTreeMap<VertexId, Vec<VertexId>>>,
    outer_face: Option<&[VertexId]>,
) -> Result<PlanarGraph, GraphError> {
    if edges.is_empty() {
        return Err(GraphError::EmptyEdgeList);
    }
    let mut max_id = 0;
    let mut seen = BTreeSet::new();
    for &(u, v) in edges {
        if u == v {
            return Err(GraphError::SelfLoop(u));
        }
        for x in [u, v] {
            if x > MAX_VERTEX_ID {
                return Err(GraphError::IdTooLarge(x));
            }
        }
        if !seen.insert((u.min(v), u.max(v))) {
            return Err(GraphError::ParallelEdge(u.min(v), u.max(v)));
        }
        max_id = max_id.max(u).max(v);
    }
    let size = max_id as usize + 1;
    let mut adj: Vec<Vec<VertexId>> = vec![Vec::new(); size];
    let mut present = vec![false; size];
    for &(u, v) in &seen {
        adj[u as usize].push(v);
        adj[v as usize].push(u);
        present[u as usize] = true;
        present[v as usize] = true;
    }
    for list in &mut adj {
        list.sort_unstable();
    }
    if !is_connected(&adj, &present) {
        return Err(GraphError::Disconnected);
    }
    let rot = match rotation {
        Some(given) => adopt_rotation(&adj, &present, given)?,
        None => embed::planar_rotation(&adj, &present, outer_face)?,
    };
    let mut g = PlanarGraph {
        rot,
        present,
        outer: Vec::new(),
        labels: BTreeMap::new(),
        edge_count: seen.len(),
    };
    let walks = g.face_walks();
    let v = g.vertex_count() as i64;
    let e = g.edge_count as i64;
    if v - e + walks.len() as i64 != 2 {
        let vertex = g.vertices().next().unwrap_or(0);
        return Err(GraphError::InconsistentRotation {
            vertex,
            reason: alloc::format!("Euler count V-E+F = {}-{}+{} != 2", v, e, walks.len()),
        });
    }
    g.outer = match outer_face {
        Some(want) => walks
            .iter()
            .find(|w| same_cycle(w, want))
            .cloned()
            .ok_or_else(|| GraphError::UnknownOuterFace(want.to_vec()))?,
        None => default_outer(&walks),
    };
    Ok(g)
}

fn adopt_rotation(
    adj: &[Vec<VertexId>],
    present: &[bool],
    given: &BTreeMap<VertexId, Vec<VertexId>>,
) -> Result<Vec<Vec<VertexId>>, GraphError> {
    let mut rot = vec![Vec::new(); adj.len()];
    for (&v, list) in given {
        if (v as usize) >= adj.len() || !present[v as usize] {
            return Err(GraphError::InconsistentRotation {
                vertex: v,
                reason: "vertex has no edges".into(),
            });
        }
        let mut sorted = list.clone();
        sorted.sort_unstable();
        if sorted != adj[v as usize] {
            return Err(GraphError::InconsistentRotation {
                vertex: v,
                reason: "rotation is not a permutation of the neighbors".into(),
            });
        }
        rot[v as usize] = list.clone();
    }
    for (v, list) in adj.iter().enumerate() {
        if present[v] && rot[v].is_empty() {
            if list.len() > 2 {
                return Err(GraphError::InconsistentRotation {
                    vertex: v as VertexId,
                    reason: "missing rotation".into(),
                });
            }
            rot[v] = list.clone();
        }
    }
    Ok(rot)
}

fn is_connected(adj: &[Vec<VertexId>], present: &[bool]) -> bool {
    let Some(start) = present.iter().position(|&p| p) else {
        return true;
    };
    let mut seen = vec![false; adj.len()];
    let mut stack = vec![start];
    seen[start] = true;
    let mut count = 0;
    while let Some(v) = stack.pop() {
        count += 1;
        for &w in &adj[v] {
            if !seen[w as usize] {
                seen[w as usize] = true;
                stack.push(w as usize);
            }
        }
    }
    count == present.iter().filter(|&&p| p).count()
}

/// Rotate a closed walk so it starts at its smallest vertex.
pub fn normalize_cycle(walk: &[VertexId]) -> Vec<VertexId> {
    let Some(start) = walk
        .iter()
        .enumerate()
        .min_by_key(|&(i, &v)| (v, i))
        .map(|(i, _)| i)
    else {
        return Vec::new();
    };
    walk[start..]
        .iter()
        .chain(&walk[..start])
        .copied()
        .collect()
}

/// Cyclic equality in either direction.
pub fn same_cycle(a: &[VertexId], b: &[VertexId]) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let na = normalize_cycle(a);
    if na == normalize_cycle(b) {
        return true;
    }
    let rev: Vec<VertexId> = b.iter().rev().copied().collect();
    na == normalize_cycle(&rev)
}

fn default_outer(walks: &[Vec<VertexId>]) -> Vec<VertexId> {
    walks
        .iter()
        .max_by(|a, b| a.len().cmp(&b.len()).then_with(|| b.cmp(a)))
        .cloned()
        .unwrap_or_default()
}

impl PlanarGraph {
    pub(crate) fn from_parts(rot: Vec<Vec<VertexId>>, outer: Vec<VertexId>) -> Self {
        let present: Vec<bool> = rot.iter().map(|r| !r.is_empty()).collect();
        let edge_count = rot.iter().map(Vec::len).sum::<usize>() / 2;
        PlanarGraph {
            rot,
            present,
            outer: normalize_cycle(&outer),
            labels: BTreeMap::new(),
            edge_count,
        }
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.present
            .iter()
            .enumerate()
            .filter(|(_, &p)| p)
            .map(|(i, _)| i as VertexId)
    }

    pub fn vertex_count(&self) -> usize {
        self.present.iter().filter(|&&p| p).count()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    /// One past the largest id slot; arrays indexed by vertex id use this length.
    pub fn id_bound(&self) -> usize {
        self.rot.len()
    }

    pub fn max_id(&self) -> VertexId {
        self.vertices().last().unwrap_or(0)
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.present.get(v as usize).copied().unwrap_or(false)
    }

    /// Neighbors of `v` in counterclockwise order.
    pub fn neighbors(&self, v: VertexId) -> &[VertexId] {
        self.rot.get(v as usize).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.neighbors(v).len()
    }

    pub fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        let (a, b) = if self.degree(u) <= self.degree(v) {
            (u, v)
        } else {
            (v, u)
        };
        self.neighbors(a).contains(&b)
    }

    pub fn outer_face(&self) -> &[VertexId] {
        &self.outer
    }

    pub fn is_outer_vertex(&self, v: VertexId) -> bool {
        self.outer.contains(&v)
    }

    /// True if `(u,v)` is a side of the outer face.
    pub fn is_outer_edge(&self, u: VertexId, v: VertexId) -> bool {
        let k = self.outer.len();
        (0..k).any(|i| {
            let (x, y) = (self.outer[i], self.outer[(i + 1) % k]);
            (x == u && y == v) || (x == v && y == u)
        })
    }

    pub fn labels(&self) -> &BTreeMap<VertexId, String> {
        &self.labels
    }

    pub fn label(&self, v: VertexId) -> Option<&str> {
        self.labels.get(&v).map(String::as_str)
    }

    pub fn set_label(&mut self, v: VertexId, name: impl Into<String>) {
        self.labels.insert(v, name.into());
    }

    pub fn with_labels(mut self, labels: BTreeMap<VertexId, String>) -> Self {
        self.labels = labels;
        self
    }

    /// Edges as `(min, max)` pairs in ascending order.
    pub fn edges(&self) -> Vec<(VertexId, VertexId)> {
        let mut out = Vec::with_capacity(self.edge_count);
        for v in self.vertices() {
            for &w in self.neighbors(v) {
                if v < w {
                    out.push((v, w));
                }
            }
        }
        out.sort_unstable();
        out
    }

    pub fn index(&self) -> RotationIndex {
        RotationIndex::new(self)
    }

    /// Face walks in discovery order, each normalized to start at its minimum.
    pub(crate) fn face_walks(&self) -> Vec<Vec<VertexId>> {
        let idx = self.index();
        let mut used: Vec<bool> = vec![false; idx.dart_count()];
        let mut walks = Vec::new();
        for v in self.vertices() {
            for (i, &w) in self.neighbors(v).iter().enumerate() {
                let start = idx.dart_at(v, i);
                if used[start] {
                    continue;
                }
                let mut walk = Vec::new();
                let (mut a, mut b) = (v, w);
                loop {
                    let d = idx.dart(a, b).expect("dart exists");
                    if used[d] {
                        break;
                    }
                    used[d] = true;
                    walk.push(a);
                    let c = idx.prev(b, a);
                    a = b;
                    b = c;
                }
                walks.push(normalize_cycle(&walk));
            }
        }
        walks
    }

    /// All faces, sorted by smallest vertex, then length, then sequence.
    pub fn faces(&self) -> Vec<Face> {
        let mut faces: Vec<Face> = self
            .face_walks()
            .into_iter()
            .map(|w| Face {
                is_outer: w == self.outer,
                vertices: w,
            })
            .collect();
        faces.sort_by(|a, b| {
            (a.vertices[0], a.len(), &a.vertices).cmp(&(b.vertices[0], b.len(), &b.vertices))
        });
        faces
    }

    pub fn face_count(&self) -> usize {
        self.face_walks().len()
    }

    /// Articulation point, if any (`None` for biconnected graphs).
    pub fn cut_vertex(&self) -> Option<VertexId> {
        articulation_point(self)
    }

    pub fn is_biconnected(&self) -> bool {
        self.vertex_count() >= 3 && self.cut_vertex().is_none()
    }
}

/// Checks that make `g` a plane triangulated graph.
pub fn validate_ptg(g: &PlanarGraph) -> ValidationReport {
    let mut r = ValidationReport::new();
    if g.vertex_count() < 3 {
        r.fail("biconnected", "fewer than 3 vertices");
    } else {
        match g.cut_vertex() {
            None => r.pass("biconnected"),
            Some(v) => r.fail("biconnected", alloc::format!("cut vertex {v}")),
        }
    }
    let bad: Vec<Face> = g
        .faces()
        .into_iter()
        .filter(|f| !f.is_outer && !f.is_triangle())
        .collect();
    match bad.first() {
        None => r.pass("inner faces are triangles"),
        Some(f) => r.fail(
            "inner faces are triangles",
            alloc::format!("face {:?} has length {}", f.vertices, f.len()),
        ),
    }
    if g.outer_face().len() >= 3 {
        r.pass("outer face length >= 3");
    } else {
        r.fail(
            "outer face length >= 3",
            alloc::format!("outer face {:?}", g.outer_face()),
        );
    }
    r
}

/// True iff removing any set of fewer than `k` vertices leaves `g` connected.
/// Exhaustive over all vertex subsets of size below `k`.
pub fn connectivity_at_least(g: &PlanarGraph, k: usize) -> Result<bool, GraphError> {
    let n = g.vertex_count();
    if n <= k {
        return Err(GraphError::TooFewVertices {
            needed: k,
            found: n,
        });
    }
    let verts: Vec<VertexId> = g.vertices().collect();
    let mut removed = vec![false; g.id_bound()];
    let mut chosen = Vec::new();
    Ok(!find_cut(
        g,
        &verts,
        &mut removed,
        &mut chosen,
        0,
        k.saturating_sub(1),
    ))
}

fn find_cut(
    g: &PlanarGraph,
    verts: &[VertexId],
    removed: &mut [bool],
    chosen: &mut Vec<VertexId>,
    from: usize,
    budget: usize,
) -> bool {
    if !connected_without(g, removed, verts.len() - chosen.len()) {
        return true;
    }
    if budget == 0 {
        return false;
    }
    for i in from..verts.len() {
        let v = verts[i];
        removed[v as usize] = true;
        chosen.push(v);
        let hit = find_cut(g, verts, removed, chosen, i + 1, budget - 1);
        chosen.pop();
        removed[v as usize] = false;
        if hit {
            return true;
        }
    }
    false
}

fn connected_without(g: &PlanarGraph, removed: &[bool], remaining: usize) -> bool {
    let Some(start) = g.vertices().find(|&v| !removed[v as usize]) else {
        return true;
    };
    let mut seen = vec![false; g.id_bound()];
    seen[start as usize] = true;
    let mut stack = vec![start];
    let mut count = 0;
    while let Some(v) = stack.pop() {
        count += 1;
        for &w in g.neighbors(v) {
            if !removed[w as usize] && !seen[w as usize] {
                seen[w as usize] = true;
                stack.push(w);
            }
        }
    }
    count == remaining
}

fn articulation_point(g: &PlanarGraph) -> Option<VertexId> {
    let n = g.id_bound();
    let root = g.vertices().next()?;
    let mut disc = vec![u32::MAX; n];
    let mut low = vec![0u32; n];
    let mut time = 0u32;
    let mut root_children = 0;
    // (vertex, parent, next neighbor index)
    let mut stack: Vec<(VertexId, VertexId, usize)> = vec![(root, VertexId::MAX, 0)];
    disc[root as usize] = 0;
    low[root as usize] = 0;
    let mut found = None;
    while let Some(&mut (v, parent, ref mut i)) = stack.last_mut() {
        let nb = g.neighbors(v);
        if *i < nb.len() {
            let w = nb[*i];
            *i += 1;
            if disc[w as usize] == u32::MAX {
                time += 1;
                disc[w as usize] = time;
                low[w as usize] = time;
                if v == root {
                    root_children += 1;
                }
                stack.push((w, v, 0));
            } else if w != parent {
                low[v as usize] = low[v as usize].min(disc[w as usize]);
            }
        } else {
            stack.pop();
            if let Some(&(p, _, _)) = stack.last() {
                low[p as usize] = low[p as usize].min(low[v as usize]);
                if p != root && low[v as usize] >= disc[p as usize] && found.is_none() {
                    found = Some(p);
                }
            }
        }
    }
    if root_children > 1 {
        return Some(found.map_or(root, |f: VertexId| f.min(root)));
    }
    found
}

/// Dart lookup for a rotation system: `O(log deg)` position queries.
#[derive(Clone, Debug)]
pub struct RotationIndex {
    offset: Vec<usize>,
    degree: Vec<u32>,
    // per vertex, (neighbor, position in rotation) sorted by neighbor
    sorted: Vec<(VertexId, u32)>,
    rot_flat: Vec<VertexId>,
}

impl RotationIndex {
    pub fn new(g: &PlanarGraph) -> Self {
        let n = g.id_bound();
        let mut offset = vec![0usize; n + 1];
        for v in 0..n {
            offset[v + 1] = offset[v] + g.rot[v].len();
        }
        let mut sorted = Vec::with_capacity(offset[n]);
        let mut rot_flat = Vec::with_capacity(offset[n]);
        let mut degree = vec![0u32; n];
        for (v, r) in g.rot.iter().enumerate().take(n) {
            degree[v] = r.len() as u32;
            rot_flat.extend_from_slice(r);
            let start = sorted.len();
            sorted.extend(r.iter().enumerate().map(|(i, &w)| (w, i as u32)));
            sorted[start..].sort_unstable();
        }
        RotationIndex {
            offset,
            degree,
            sorted,
            rot_flat,
        }
    }

    pub fn dart_count(&self) -> usize {
        self.rot_flat.len()
    }

    /// Dart id of the `i`-th rotation entry of `v`.
    pub fn dart_at(&self, v: VertexId, i: usize) -> usize {
        self.offset[v as usize] + i
    }

    pub fn position(&self, v: VertexId, w: VertexId) -> Option<usize> {
        let v = v as usize;
        if v + 1 >= self.offset.len() {
            return None;
        }
        let slice = &self.sorted[self.offset[v]..self.offset[v + 1]];
        slice
            .binary_search_by_key(&w, |&(x, _)| x)
            .ok()
            .map(|k| slice[k].1 as usize)
    }

    pub fn dart(&self, v: VertexId, w: VertexId) -> Option<usize> {
        self.position(v, w).map(|i| self.offset[v as usize] + i)
    }

    pub fn head(&self, dart: usize) -> VertexId {
        self.rot_flat[dart]
    }

    pub fn rotation(&self, v: VertexId) -> &[VertexId] {
        &self.rot_flat[self.offset[v as usize]..self.offset[v as usize + 1]]
    }

    /// Neighbor after `w` counterclockwise around `v`.
    pub fn next(&self, v: VertexId, w: VertexId) -> VertexId {
        let i = self.position(v, w).expect("neighbor in rotation");
        let d = self.degree[v as usize] as usize;
        self.rot_flat[self.offset[v as usize] + (i + 1) % d]
    }

    /// Neighbor before `w` counterclockwise around `v`.
    pub fn prev(&self, v: VertexId, w: VertexId) -> VertexId {
        let i = self.position(v, w).expect("neighbor in rotation");
        let d = self.degree[v as usize] as usize;
        self.rot_flat[self.offset[v as usize] + (i + d - 1) % d]
    }
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;

    pub const OCT_EDGES: [(u32, u32); 12] = [
        (1, 2),
        (1, 3),
        (1, 4),
        (1, 5),
        (2, 3),
        (3, 4),
        (4, 5),
        (5, 2),
        (6, 2),
        (6, 3),
        (6, 4),
        (6, 5),
    ];
    pub const G5_EDGES: [(u32, u32); 9] = [
        (1, 2),
        (2, 3),
        (3, 1),
        (4, 1),
        (4, 2),
        (4, 3),
        (5, 1),
        (5, 2),
        (5, 4),
    ];

    pub fn g6_edges() -> Vec<(u32, u32)> {
        let mut e = G5_EDGES.to_vec();
        e.extend([(6, 2), (6, 3), (6, 4)]);
        e
    }

    pub fn oct() -> PlanarGraph {
        build_graph(&OCT_EDGES, None, Some(&[1, 2, 3])).unwrap()
    }

    pub fn g5() -> PlanarGraph {
        build_graph(&G5_EDGES, None, Some(&[1, 2, 3])).unwrap()
    }

    pub fn g6() -> PlanarGraph {
        build_graph(&g6_edges(), None, Some(&[1, 2, 3])).unwrap()
    }
}
