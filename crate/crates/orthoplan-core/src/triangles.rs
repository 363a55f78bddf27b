//! Separating triangles, K_L / K_T sites, and the subdivisions that remove
//! complex triangles or carve the shaped module's helper vertex.

use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Reverse;

use crate::graph::{PlanarGraph, RotationIndex, VertexId};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum TriangleError {
    #[error("separating triangle {0:?} has no edge that may be subdivided")]
    Unhittable([VertexId; 3]),
    #[error("edge ({0},{1}) lies on the outer face")]
    EdgeOnOuterFace(VertexId, VertexId),
    #[error("edge ({0},{1}) is not in the graph")]
    MissingEdge(VertexId, VertexId),
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Triangle {
    pub vertices: [VertexId; 3],
    pub is_face: bool,
}

impl Triangle {
    pub fn new(a: VertexId, b: VertexId, c: VertexId, is_face: bool) -> Self {
        let mut vertices = [a, b, c];
        vertices.sort_unstable();
        Triangle { vertices, is_face }
    }

    pub fn edges(&self) -> [(VertexId, VertexId); 3] {
        let [a, b, c] = self.vertices;
        [(a, b), (a, c), (b, c)]
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.vertices.contains(&v)
    }

    pub fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        u != v && self.contains(u) && self.contains(v)
    }

    pub fn same_vertices(&self, other: &Triangle) -> bool {
        self.vertices == other.vertices
    }

    /// The vertex of the triangle that is neither `u` nor `v`.
    pub fn third(&self, u: VertexId, v: VertexId) -> VertexId {
        *self.vertices.iter().find(|&&x| x != u && x != v).unwrap()
    }
}

/// A located K_L: complex triangle (a,b,c) around the degree-3 vertex d, with
/// C1 a further common neighbor of a and b. `u` is set by [`modify_kl`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct SiteL {
    pub a: VertexId,
    pub b: VertexId,
    pub c: VertexId,
    pub d: VertexId,
    pub c1: VertexId,
    pub u: Option<VertexId>,
}

impl SiteL {
    pub fn triangle(&self) -> Triangle {
        Triangle::new(self.a, self.b, self.c, false)
    }

    pub fn chosen_edge(&self) -> (VertexId, VertexId) {
        (self.a, self.b)
    }
}

/// A located K_T: complex triangles (a,b,c) around e and (a,c,d) around f,
/// sharing the edge (a,c). `u` is set by [`modify_kt`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct SiteT {
    pub a: VertexId,
    pub b: VertexId,
    pub c: VertexId,
    pub d: VertexId,
    pub e: VertexId,
    pub f: VertexId,
    pub u: Option<VertexId>,
}

impl SiteT {
    pub fn triangles(&self) -> [Triangle; 2] {
        [
            Triangle::new(self.a, self.b, self.c, false),
            Triangle::new(self.a, self.c, self.d, false),
        ]
    }

    pub fn shared_edge(&self) -> (VertexId, VertexId) {
        (self.a, self.c)
    }
}

/// Edge set `S` of the removal step and the vertices inserted for it.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RemovalPlan {
    pub s: Vec<(VertexId, VertexId)>,
    pub enodes: Vec<VertexId>,
}

/// All 3-cycles of `g` as sorted triples, each with its face flag.
pub fn all_triangles(g: &PlanarGraph) -> Vec<Triangle> {
    let idx = g.index();
    let n = g.id_bound();
    // orient each edge from lower to higher (degree, id) rank
    let rank = |v: VertexId| (g.degree(v), v);
    let mut out_adj: Vec<Vec<VertexId>> = vec![Vec::new(); n];
    for v in g.vertices() {
        for &w in g.neighbors(v) {
            if rank(v) < rank(w) {
                out_adj[v as usize].push(w);
            }
        }
    }
    let mut mark = vec![false; n];
    let mut out = Vec::new();
    for v in g.vertices() {
        for &w in &out_adj[v as usize] {
            mark[w as usize] = true;
        }
        for &w in &out_adj[v as usize] {
            for &x in &out_adj[w as usize] {
                if mark[x as usize] {
                    out.push(Triangle::new(v, w, x, is_face(&idx, v, w, x)));
                }
            }
        }
        for &w in &out_adj[v as usize] {
            mark[w as usize] = false;
        }
    }
    out.sort_unstable();
    out
}

/// True if (u,v,w) bounds a face on either side.
pub(crate) fn is_face(idx: &RotationIndex, u: VertexId, v: VertexId, w: VertexId) -> bool {
    let left = |a: VertexId, b: VertexId, c: VertexId| idx.prev(b, a) == c && idx.prev(c, b) == a;
    left(u, v, w) || left(v, u, w)
}

/// 3-cycles that are neither a face nor the outer boundary.
pub fn find_separating_triangles(g: &PlanarGraph) -> Vec<Triangle> {
    all_triangles(g)
        .into_iter()
        .filter(|t| !t.is_face)
        .collect()
}

/// The degree-3 vertex strictly inside `t`, if its interior holds exactly one.
fn sole_interior(g: &PlanarGraph, t: &Triangle) -> Option<VertexId> {
    let [x, y, z] = t.vertices;
    let (lo, _) = [x, y, z]
        .iter()
        .map(|&v| (v, g.degree(v)))
        .min_by_key(|&(v, d)| (d, v))?;
    g.neighbors(lo).iter().copied().find(|&d| {
        if t.contains(d) || g.degree(d) != 3 || g.is_outer_vertex(d) {
            return false;
        }
        let nb = g.neighbors(d);
        nb.contains(&x) && nb.contains(&y) && nb.contains(&z)
    })
}

/// True if `(u,v)` is an edge not on the outer face.
pub fn is_interior_edge(g: &PlanarGraph, u: VertexId, v: VertexId) -> bool {
    g.has_edge(u, v) && !g.is_outer_edge(u, v)
}

fn common_neighbors(g: &PlanarGraph, u: VertexId, v: VertexId) -> Vec<VertexId> {
    let nv: BTreeSet<VertexId> = g.neighbors(v).iter().copied().collect();
    let mut out: Vec<VertexId> = g
        .neighbors(u)
        .iter()
        .copied()
        .filter(|w| nv.contains(w))
        .collect();
    out.sort_unstable();
    out
}

/// Candidate K_L sites, one per interior triangle side with a qualifying C1.
pub fn find_kl(g: &PlanarGraph) -> Vec<SiteL> {
    let mut out = Vec::new();
    for t in find_separating_triangles(g) {
        let Some(d) = sole_interior(g, &t) else {
            continue;
        };
        for (x, y) in t.edges() {
            if !is_interior_edge(g, x, y) {
                continue;
            }
            let c = t.third(x, y);
            let c1 = common_neighbors(g, x, y)
                .into_iter()
                .find(|&w| w != c && w != d);
            if let Some(c1) = c1 {
                out.push(SiteL {
                    a: x,
                    b: y,
                    c,
                    d,
                    c1,
                    u: None,
                });
            }
        }
    }
    out.sort_unstable();
    out
}

/// Candidate K_T sites: two complex triangles sharing one interior edge, each
/// around a single degree-3 vertex.
pub fn find_kt(g: &PlanarGraph) -> Vec<SiteT> {
    let sites: Vec<(Triangle, VertexId)> = find_separating_triangles(g)
        .into_iter()
        .filter_map(|t| sole_interior(g, &t).map(|d| (t, d)))
        .collect();
    let mut by_edge: BTreeMap<(VertexId, VertexId), Vec<usize>> = BTreeMap::new();
    for (i, (t, _)) in sites.iter().enumerate() {
        for e in t.edges() {
            by_edge.entry(e).or_default().push(i);
        }
    }
    let mut out = Vec::new();
    for (&(p, q), list) in &by_edge {
        if !is_interior_edge(g, p, q) {
            continue;
        }
        for (k, &i) in list.iter().enumerate() {
            for &j in &list[k + 1..] {
                let (t1, e) = sites[i];
                let (t2, f) = sites[j];
                let shared = t1.vertices.iter().filter(|v| t2.contains(**v)).count();
                if shared != 2 || e == f {
                    continue;
                }
                out.push(SiteT {
                    a: p,
                    b: t1.third(p, q),
                    c: q,
                    d: t2.third(p, q),
                    e,
                    f,
                    u: None,
                });
            }
        }
    }
    out.sort_unstable();
    out
}

fn norm(u: VertexId, v: VertexId) -> (VertexId, VertexId) {
    (u.min(v), u.max(v))
}

/// Edges the removal step must not subdivide: sides of protected triangles
/// and spokes to their interior vertices.
fn protected_edges(g: &PlanarGraph, protect: &[Triangle]) -> BTreeSet<(VertexId, VertexId)> {
    let mut out = BTreeSet::new();
    for t in protect {
        for e in t.edges() {
            out.insert(e);
        }
        if let Some(d) = sole_interior(g, t) {
            for &w in g.neighbors(d) {
                out.insert(norm(d, w));
            }
        }
    }
    out
}

/// Greedy hitting set over the unprotected separating triangles: repeatedly
/// take the allowed edge that lies on the most uncovered triangles, ties to
/// the smallest edge. Outer edges are allowed only for triangles whose other
/// edges are all protected.
pub fn select_removal_edges(
    g: &PlanarGraph,
    protect: &[Triangle],
) -> Result<RemovalPlan, TriangleError> {
    let forbidden = protected_edges(g, protect);
    let targets: Vec<Triangle> = find_separating_triangles(g)
        .into_iter()
        .filter(|t| !protect.iter().any(|p| p.same_vertices(t)))
        .collect();
    let mut hits: BTreeMap<(VertexId, VertexId), Vec<usize>> = BTreeMap::new();
    let mut choices = Vec::with_capacity(targets.len());
    for (i, t) in targets.iter().enumerate() {
        let open: Vec<_> = t
            .edges()
            .into_iter()
            .filter(|e| !forbidden.contains(e))
            .collect();
        let inner: Vec<_> = open
            .iter()
            .copied()
            .filter(|&(x, y)| !g.is_outer_edge(x, y))
            .collect();
        let allowed = if inner.is_empty() { open } else { inner };
        if allowed.is_empty() {
            return Err(TriangleError::Unhittable(t.vertices));
        }
        for &e in &allowed {
            hits.entry(e).or_default().push(i);
        }
        choices.push(allowed);
    }
    let mut count: BTreeMap<(VertexId, VertexId), usize> =
        hits.iter().map(|(&e, l)| (e, l.len())).collect();
    let mut queue: BTreeSet<(Reverse<usize>, (VertexId, VertexId))> =
        count.iter().map(|(&e, &c)| (Reverse(c), e)).collect();
    let mut covered = vec![false; targets.len()];
    let mut s = Vec::new();
    while let Some((Reverse(c), e)) = queue.pop_first() {
        if c == 0 {
            break;
        }
        s.push(e);
        for &ti in &hits[&e] {
            if covered[ti] {
                continue;
            }
            covered[ti] = true;
            for &other in &choices[ti] {
                if other == e {
                    continue;
                }
                if let Some(cnt) = count.get_mut(&other) {
                    queue.remove(&(Reverse(*cnt), other));
                    *cnt -= 1;
                    queue.insert((Reverse(*cnt), other));
                }
            }
        }
        count.insert(e, 0);
    }
    Ok(RemovalPlan {
        s,
        enodes: Vec::new(),
    })
}

/// Delete the interior edge (a,b) and connect a new vertex `u` to a, b and the
/// two apexes of the edge. Returns the apexes `(x, y)` with x after b and y
/// before b around a.
pub(crate) fn subdivide_edge(
    g: &mut PlanarGraph,
    a: VertexId,
    b: VertexId,
    u: VertexId,
) -> Result<(VertexId, VertexId), TriangleError> {
    if !g.has_edge(a, b) {
        return Err(TriangleError::MissingEdge(a, b));
    }
    if g.is_outer_edge(a, b) {
        return Err(TriangleError::EdgeOnOuterFace(a, b));
    }
    let pos = |g: &PlanarGraph, v: VertexId, w: VertexId| {
        g.rot[v as usize].iter().position(|&x| x == w).unwrap()
    };
    let ra = &g.rot[a as usize];
    let ia = pos(g, a, b);
    let x = ra[(ia + 1) % ra.len()];
    let y = ra[(ia + ra.len() - 1) % ra.len()];
    if (u as usize) >= g.rot.len() {
        g.rot.resize(u as usize + 1, Vec::new());
        g.present.resize(u as usize + 1, false);
    }
    g.rot[a as usize][ia] = u;
    let ib = pos(g, b, a);
    g.rot[b as usize][ib] = u;
    // around x the order is a, b; around y it is b, a
    let ix = pos(g, x, b);
    g.rot[x as usize].insert(ix, u);
    let iy = pos(g, y, a);
    g.rot[y as usize].insert(iy, u);
    g.rot[u as usize] = vec![a, y, b, x];
    g.present[u as usize] = true;
    g.edge_count += 3;
    Ok((x, y))
}

/// Subdivide the outer edge (a,b), where b follows a on the outer walk. The new
/// vertex `u` sees a, b and the inner apex, and joins the outer face.
pub(crate) fn subdivide_outer_edge(
    g: &mut PlanarGraph,
    a: VertexId,
    b: VertexId,
    u: VertexId,
) -> VertexId {
    let pos = |g: &PlanarGraph, v: VertexId, w: VertexId| {
        g.rot[v as usize].iter().position(|&x| x == w).unwrap()
    };
    let ra = &g.rot[a as usize];
    let ia = pos(g, a, b);
    let z = ra[(ia + ra.len() - 1) % ra.len()];
    if (u as usize) >= g.rot.len() {
        g.rot.resize(u as usize + 1, Vec::new());
        g.present.resize(u as usize + 1, false);
    }
    g.rot[a as usize][ia] = u;
    let ib = pos(g, b, a);
    g.rot[b as usize][ib] = u;
    let iz = pos(g, z, a);
    g.rot[z as usize].insert(iz, u);
    g.rot[u as usize] = vec![a, z, b];
    g.present[u as usize] = true;
    g.edge_count += 2;
    let k = g.outer.len();
    let i = (0..k)
        .find(|&i| g.outer[i] == a && g.outer[(i + 1) % k] == b)
        .expect("outer walk edge");
    g.outer.insert(i + 1, u);
    z
}

/// An outer edge and the vertex placed on it.
pub type OuterSplit = ((VertexId, VertexId), VertexId);

/// A triangulation whose outer face is a triangle cannot be wrapped by four
/// rectangles, so one outer edge is subdivided by a vertex that later merges
/// back into an endpoint. Sides of the `keep` triangles are never chosen.
/// Edges listed in `needed` come last, then edges whose inner apex lies in
/// `avoid`.
/// Returns the edge and the new vertex, or `None` if the outer face is longer.
pub fn open_outer_face(
    g: &PlanarGraph,
    keep: &[Triangle],
    needed: &[(VertexId, VertexId)],
    avoid: &[VertexId],
) -> Result<(PlanarGraph, Option<OuterSplit>), TriangleError> {
    let outer = g.outer_face();
    if outer.len() != 3 {
        return Ok((g.clone(), None));
    }
    let idx = g.index();
    // (penalty, edge, a, b) with a->b along the outer walk
    type Candidate = ((bool, bool), (VertexId, VertexId), VertexId, VertexId);
    let mut best: Option<Candidate> = None;
    for i in 0..3 {
        let (a, b) = (outer[i], outer[(i + 1) % 3]);
        if keep.iter().any(|t| t.has_edge(a, b)) {
            continue;
        }
        let z = idx.prev(a, b);
        let need = needed.iter().any(|&(x, y)| norm(x, y) == norm(a, b));
        let key = ((need, avoid.contains(&z)), norm(a, b), a, b);
        if best.is_none_or(|cur| (key.0, key.1) < (cur.0, cur.1)) {
            best = Some(key);
        }
    }
    let (_, edge, a, b) = best.ok_or_else(|| {
        TriangleError::PreconditionViolated("every outer edge is a protected side".into())
    })?;
    let mut h = g.clone();
    let u = g.max_id() + 1;
    subdivide_outer_edge(&mut h, a, b, u);
    h.outer = crate::graph::normalize_cycle(&h.outer);
    Ok((h, Some((edge, u))))
}

/// Subdivide every edge of `plan.s`. A subdivision whose apexes are adjacent
/// creates the triangle (u, x, y); its edge (x, y), or (u, x) if that one is
/// protected, is appended to the plan and subdivided in turn.
pub fn eliminate_complex_triangles(
    g: &PlanarGraph,
    plan: &RemovalPlan,
    protect: &[Triangle],
) -> Result<(PlanarGraph, RemovalPlan), TriangleError> {
    let mut h = g.clone();
    let forbidden = protected_edges(g, protect);
    let mut subdivided = BTreeSet::new();
    let mut queue: VecDeque<(VertexId, VertexId)> = plan.s.iter().copied().collect();
    let mut done = RemovalPlan::default();
    let mut next_id = g.max_id() + 1;
    let limit = 4 * plan.s.len() + 4 * g.vertex_count() + 16;
    while let Some((a, b)) = queue.pop_front() {
        if done.s.len() > limit {
            return Err(TriangleError::PreconditionViolated(
                "subdivision did not terminate".into(),
            ));
        }
        if !h.has_edge(a, b) {
            if subdivided.contains(&norm(a, b)) {
                continue;
            }
            return Err(TriangleError::MissingEdge(a, b));
        }
        let u = next_id;
        next_id += 1;
        subdivided.insert(norm(a, b));
        done.s.push(norm(a, b));
        done.enodes.push(u);
        if h.is_outer_edge(a, b) {
            let k = h.outer.len();
            let forward = (0..k).any(|i| h.outer[i] == a && h.outer[(i + 1) % k] == b);
            let (p, q) = if forward { (a, b) } else { (b, a) };
            subdivide_outer_edge(&mut h, p, q, u);
            h.outer = crate::graph::normalize_cycle(&h.outer);
            continue;
        }
        let (x, y) = subdivide_edge(&mut h, a, b, u)?;
        if x != y && h.has_edge(x, y) {
            let e = norm(x, y);
            if !forbidden.contains(&e) && !h.is_outer_edge(x, y) {
                queue.push_back(e);
            } else {
                queue.push_back(norm(u, x));
            }
        }
    }
    Ok((h, done))
}

fn ensure_only(g: &PlanarGraph, allowed: &[Triangle]) -> Result<(), TriangleError> {
    for t in find_separating_triangles(g) {
        if !allowed.iter().any(|p| p.same_vertices(&t)) {
            return Err(TriangleError::PreconditionViolated(alloc::format!(
                "separating triangle {:?} outside the site",
                t.vertices
            )));
        }
    }
    Ok(())
}

fn apexes(g: &PlanarGraph, a: VertexId, b: VertexId) -> (VertexId, VertexId) {
    let idx = g.index();
    (idx.next(a, b), idx.prev(a, b))
}

/// Replace the K_L edge (a,b) by a vertex u adjacent to C1, d, a and b.
pub fn modify_kl(g: &PlanarGraph, site: &SiteL) -> Result<(PlanarGraph, SiteL), TriangleError> {
    let pre = |m: &str| Err(TriangleError::PreconditionViolated(m.into()));
    if site.u.is_some() {
        return pre("site already modified");
    }
    if !g.has_edge(site.a, site.b) {
        return pre("edge (a,b) is not in the graph");
    }
    if !is_interior_edge(g, site.a, site.b) {
        return pre("edge (a,b) lies on the outer face");
    }
    let mut nd = g.neighbors(site.d).to_vec();
    nd.sort_unstable();
    let mut want = [site.a, site.b, site.c];
    want.sort_unstable();
    if nd != want {
        return pre("d is not the degree-3 vertex inside (a,b,c)");
    }
    let (x, y) = apexes(g, site.a, site.b);
    if !((x == site.d && y == site.c1) || (y == site.d && x == site.c1)) {
        return pre("C1 and d are not the apexes of (a,b)");
    }
    ensure_only(g, &[site.triangle()])?;
    let mut h = g.clone();
    let u = g.max_id() + 1;
    subdivide_edge(&mut h, site.a, site.b, u)?;
    let mut s = *site;
    s.u = Some(u);
    Ok((h, s))
}

/// Replace the shared K_T edge (a,c) by a vertex u adjacent to e, f, a and c.
pub fn modify_kt(g: &PlanarGraph, site: &SiteT) -> Result<(PlanarGraph, SiteT), TriangleError> {
    let pre = |m: &str| Err(TriangleError::PreconditionViolated(m.into()));
    if site.u.is_some() {
        return pre("site already modified");
    }
    if !g.has_edge(site.a, site.c) {
        return pre("edge (a,c) is not in the graph");
    }
    if !is_interior_edge(g, site.a, site.c) {
        return pre("edge (a,c) lies on the outer face");
    }
    let (x, y) = apexes(g, site.a, site.c);
    if !((x == site.e && y == site.f) || (x == site.f && y == site.e)) {
        return pre("e and f are not the apexes of (a,c)");
    }
    for (v, tri) in [(site.e, site.triangles()[0]), (site.f, site.triangles()[1])] {
        let mut nb = g.neighbors(v).to_vec();
        nb.sort_unstable();
        if nb != tri.vertices {
            return pre("interior vertex neighborhood does not match its triangle");
        }
    }
    ensure_only(g, &site.triangles())?;
    let mut h = g.clone();
    let u = g.max_id() + 1;
    subdivide_edge(&mut h, site.a, site.c, u)?;
    let mut s = *site;
    s.u = Some(u);
    Ok((h, s))
}

/// The apex of (a,b) opposite d: the only admissible C1 once every other
/// separating triangle through (a,b) is gone.
pub fn outer_apex(g: &PlanarGraph, site: &SiteL) -> Option<VertexId> {
    if !g.has_edge(site.a, site.b) {
        return None;
    }
    let (x, y) = apexes(g, site.a, site.b);
    match (x == site.d, y == site.d) {
        (true, false) => Some(y),
        (false, true) => Some(x),
        _ => None,
    }
}
