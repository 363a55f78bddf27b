//! Regular edge labelings built from canonical orderings, and the label flips
//! that prepare an L-shaped merge.

use alloc::collections::VecDeque;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::completion::{CompletedGraph, Directions};
use crate::graph::{RotationIndex, VertexId};
use crate::ordering::CanonicalOrdering;
use crate::report::ValidationReport;
use crate::triangles::SiteL;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum RelError {
    #[error("lower neighbors of {0} are not consecutive")]
    ContourBroken(VertexId),
    #[error("labeling is not regular: {0}")]
    RelInvalid(String),
    #[error("flips leave an irregular labeling: {0}")]
    FlipBreaksRel(String),
    #[error("site edge ({0},{1}) is missing or unlabeled")]
    SiteEdge(VertexId, VertexId),
}

/// T1 edges point from a module to the one above it, T2 edges to the one on
/// its right.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Label {
    T1,
    T2,
}

impl Label {
    pub fn other(self) -> Label {
        match self {
            Label::T1 => Label::T2,
            Label::T2 => Label::T1,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Label::T1 => "T1",
            Label::T2 => "T2",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct RelEdge {
    pub tail: VertexId,
    pub head: VertexId,
    pub label: Option<Label>,
}

/// Orientation and labels of the completed graph without the (N,S) edge.
#[derive(Clone, Debug)]
pub struct Rel {
    pub cg: CompletedGraph,
    idx: RotationIndex,
    out: Vec<bool>,
    lab: Vec<Option<Label>>,
}

impl PartialEq for Rel {
    fn eq(&self, other: &Self) -> bool {
        self.cg == other.cg && self.out == other.out && self.lab == other.lab
    }
}

impl Rel {
    pub fn dirs(&self) -> Directions {
        self.cg.dirs
    }

    pub fn index(&self) -> &RotationIndex {
        &self.idx
    }

    fn dart(&self, u: VertexId, v: VertexId) -> Option<usize> {
        self.idx.dart(u, v)
    }

    /// True if the edge is one of the four sides of the outer face.
    pub fn is_ring_edge(&self, u: VertexId, v: VertexId) -> bool {
        let d = self.cg.dirs;
        d.contains(u) && d.contains(v) && self.cg.graph.has_edge(u, v)
    }

    pub fn label(&self, u: VertexId, v: VertexId) -> Option<Label> {
        self.dart(u, v).and_then(|d| self.lab[d])
    }

    /// True if the edge points from `u` to `v`.
    pub fn is_out(&self, u: VertexId, v: VertexId) -> bool {
        self.dart(u, v).is_some_and(|d| self.out[d])
    }

    pub fn tail_head(&self, u: VertexId, v: VertexId) -> Option<(VertexId, VertexId)> {
        let d = self.dart(u, v)?;
        Some(if self.out[d] { (u, v) } else { (v, u) })
    }

    fn orient(&mut self, tail: VertexId, head: VertexId) {
        let a = self.dart(tail, head).expect("edge");
        let b = self.dart(head, tail).expect("edge");
        self.out[a] = true;
        self.out[b] = false;
    }

    fn set_label(&mut self, u: VertexId, v: VertexId, l: Option<Label>) {
        let a = self.dart(u, v).expect("edge");
        let b = self.dart(v, u).expect("edge");
        self.lab[a] = l;
        self.lab[b] = l;
    }

    /// Toggle the label of an edge, keeping its orientation.
    pub fn flip(&mut self, u: VertexId, v: VertexId) -> Result<(), RelError> {
        let l = self.label(u, v).ok_or(RelError::SiteEdge(u, v))?;
        self.set_label(u, v, Some(l.other()));
        Ok(())
    }

    /// Toggle the label of an edge and reverse it if the new label only fits
    /// its endpoints the other way round.
    pub fn flip_oriented(&mut self, u: VertexId, v: VertexId) -> Result<(), RelError> {
        self.flip(u, v)?;
        let fits = |r: &Rel| {
            [u, v]
                .iter()
                .all(|&x| r.cg.dirs.contains(x) || pattern_at(r, x).is_ok())
        };
        if !fits(self) {
            let (t, h) = self.tail_head(u, v).expect("edge");
            self.orient(h, t);
            if !fits(self) {
                self.orient(t, h);
            }
        }
        Ok(())
    }

    /// Relabel an edge without touching its orientation.
    pub fn relabel(&mut self, u: VertexId, v: VertexId, l: Label) {
        self.set_label(u, v, Some(l));
    }

    /// All edges as (tail, head, label), ring edges unlabeled.
    pub fn edges(&self) -> Vec<RelEdge> {
        let mut out = Vec::with_capacity(self.cg.graph.edge_count());
        for (u, v) in self.cg.graph.edges() {
            let (tail, head) = self.tail_head(u, v).expect("edge");
            out.push(RelEdge {
                tail,
                head,
                label: self.label(u, v),
            });
        }
        out
    }
}

/// Direct every edge from lower to higher rank and drop the (N,S) edge.
pub fn orient_edges(cg: &CompletedGraph, ord: &CanonicalOrdering) -> Rel {
    let mut cg = cg.clone();
    cg.ns_edge_present = false;
    let idx = cg.graph.index();
    let darts = idx.dart_count();
    let mut rel = Rel {
        cg,
        idx,
        out: vec![false; darts],
        lab: vec![None; darts],
    };
    for (u, v) in rel.cg.graph.edges() {
        if ord.rank_of(u) < ord.rank_of(v) {
            rel.orient(u, v);
        } else {
            rel.orient(v, u);
        }
    }
    rel
}

/// Neighborhood split of v_k: lower neighbors ccw from lp to rp, the basic
/// neighbor among them, and higher neighbors ccw from re to le.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fan {
    pub v: VertexId,
    pub lower: Vec<VertexId>,
    pub basic: VertexId,
    pub higher: Vec<VertexId>,
}

impl Fan {
    pub fn lp(&self) -> VertexId {
        self.lower[0]
    }
    pub fn rp(&self) -> VertexId {
        *self.lower.last().unwrap()
    }
    pub fn re(&self) -> Option<VertexId> {
        self.higher.first().copied()
    }
    pub fn le(&self) -> Option<VertexId> {
        self.higher.last().copied()
    }
}

fn fan_of(
    rot: &[VertexId],
    v: VertexId,
    ord: &CanonicalOrdering,
    w: VertexId,
) -> Result<Fan, RelError> {
    let rk = ord.rank_of(v);
    let k = rot.len();
    let low: Vec<bool> = rot.iter().map(|&x| ord.rank_of(x) < rk).collect();
    let lows = low.iter().filter(|&&b| b).count();
    if lows < 2 {
        return Err(RelError::ContourBroken(v));
    }
    let start = (0..k)
        .find(|&i| low[i] && !low[(i + k - 1) % k])
        .or_else(|| rot.iter().position(|&x| x == w))
        .ok_or(RelError::ContourBroken(v))?;
    if (0..lows).any(|o| !low[(start + o) % k]) {
        return Err(RelError::ContourBroken(v));
    }
    let lower: Vec<VertexId> = (0..lows).map(|o| rot[(start + o) % k]).collect();
    let higher: Vec<VertexId> = (lows..k).map(|o| rot[(start + o) % k]).collect();
    let basic = *lower.iter().min_by_key(|&&x| ord.rank_of(x)).unwrap();
    Ok(Fan {
        v,
        lower,
        basic,
        higher,
    })
}

/// Fans of the interior vertices, in rank order.
pub fn fan_data(cg: &CompletedGraph, ord: &CanonicalOrdering) -> Result<Vec<Fan>, RelError> {
    let n = ord.len() as u32;
    (3..n)
        .map(|j| ord.vertex(j))
        .filter(|&v| !cg.dirs.contains(v))
        .map(|v| fan_of(cg.graph.neighbors(v), v, ord, cg.dirs.w))
        .collect()
}

/// Label the oriented edges: edges out of W and into E are T2, edges out of S
/// and into N are T1, and the incoming edges of every other vertex are T2 on
/// the lp side of its basic edge and T1 on the rp side. A basic edge strictly
/// inside its fan takes `free_basic`.
pub fn build_rel(
    cg: &CompletedGraph,
    ord: &CanonicalOrdering,
    free_basic: Label,
) -> Result<Rel, RelError> {
    let mut rel = orient_edges(cg, ord);
    let d = cg.dirs;
    for (x, l) in [(d.w, Label::T2), (d.s, Label::T1)] {
        for &y in cg.graph.neighbors(x) {
            if !d.contains(y) {
                rel.set_label(x, y, Some(l));
            }
        }
    }
    for (x, l) in [(d.n, Label::T1), (d.e, Label::T2)] {
        for &y in cg.graph.neighbors(x) {
            if !d.contains(y) {
                rel.set_label(x, y, Some(l));
            }
        }
    }
    let fans = fan_data(cg, ord)?;
    for fan in &fans {
        let b = fan.lower.iter().position(|&x| x == fan.basic).unwrap();
        let last = fan.lower.len() - 1;
        for (i, &x) in fan.lower.iter().enumerate() {
            let want = if i < b {
                Label::T2
            } else if i > b {
                Label::T1
            } else if i == 0 {
                Label::T2
            } else if i == last {
                Label::T1
            } else {
                free_basic
            };
            if let Some(have) = rel.label(x, fan.v) {
                if have != want {
                    return Err(RelError::RelInvalid(format!(
                        "edge ({x},{}) needs both labels",
                        fan.v
                    )));
                }
            }
            rel.set_label(x, fan.v, Some(want));
        }
    }
    for fan in &fans {
        let (Some(le), Some(re)) = (fan.le(), fan.re()) else {
            return Err(RelError::RelInvalid(format!(
                "{} has no higher neighbor",
                fan.v
            )));
        };
        if rel.label(fan.v, le) != Some(Label::T1) || rel.label(fan.v, re) != Some(Label::T2) {
            return Err(RelError::RelInvalid(format!(
                "left edge ({},{le}) must be T1 and right edge ({},{re}) T2",
                fan.v, fan.v
            )));
        }
    }
    let report = validate_rel(&rel);
    if let Some(f) = report.first_failure() {
        return Err(RelError::RelInvalid(format!("{}: {}", f.name, f.detail)));
    }
    Ok(rel)
}

/// The labeling used for T-shaped plans.
pub fn rel_for_t(cg: &CompletedGraph, ord: &CanonicalOrdering) -> Result<Rel, RelError> {
    build_rel(cg, ord, Label::T1)
}

/// Which endpoint of the split edge receives u, and the flips that made the
/// choice possible.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MergeSelector {
    pub m: u8,
    pub case: u8,
    pub flips_applied: Vec<(VertexId, VertexId)>,
}

/// Pick m so that u and C1 meet the merge partner through walls of opposite
/// types, flipping (a,C1) and possibly (x,C1) when neither a nor b qualifies.
pub fn adjust_rel_for_l(rel: &Rel, site: &SiteL) -> Result<(Rel, MergeSelector), RelError> {
    let u = site.u.ok_or(RelError::SiteEdge(site.a, site.b))?;
    let (a, b, c1) = (site.a, site.b, site.c1);
    let get = |x: VertexId, y: VertexId| rel.label(x, y).ok_or(RelError::SiteEdge(x, y));
    let (x1, x2) = (get(a, u)?, get(a, c1)?);
    if x1 != x2 {
        return Ok((
            rel.clone(),
            MergeSelector {
                m: 1,
                case: 1,
                flips_applied: vec![],
            },
        ));
    }
    let (x3, x4) = (get(b, u)?, get(b, c1)?);
    if x3 != x4 {
        return Ok((
            rel.clone(),
            MergeSelector {
                m: 2,
                case: 2,
                flips_applied: vec![],
            },
        ));
    }
    let g = &rel.cg.graph;
    let x = g
        .neighbors(a)
        .iter()
        .copied()
        .find(|&y| y != u && g.has_edge(y, c1))
        .ok_or(RelError::SiteEdge(a, c1))?;
    let x5 = get(c1, x)?;
    let mut out = rel.clone();
    let mut flips = Vec::new();
    if x2 != x5 {
        out.flip_oriented(x, c1)?;
        flips.push((x, c1));
    }
    out.flip_oriented(a, c1)?;
    flips.push((a, c1));
    let report = validate_rel(&out);
    if let Some(f) = report.first_failure() {
        return Err(RelError::FlipBreaksRel(format!("{}: {}", f.name, f.detail)));
    }
    Ok((
        out,
        MergeSelector {
            m: 1,
            case: 3,
            flips_applied: flips,
        },
    ))
}

/// Check the rotational pattern at interior vertices, the boundary rules at
/// N, E, S, W, and acyclicity of both label classes.
pub fn validate_rel(rel: &Rel) -> ValidationReport {
    let mut r = ValidationReport::new();
    let g = &rel.cg.graph;
    let d = rel.cg.dirs;

    let mut pattern: Option<String> = None;
    for v in g.vertices() {
        if d.contains(v) {
            continue;
        }
        if let Err(m) = pattern_at(rel, v) {
            pattern = Some(m);
            break;
        }
    }
    match pattern {
        None => r.pass("four groups around interior vertices"),
        Some(m) => r.fail("four groups around interior vertices", m),
    }

    let mut boundary: Option<String> = None;
    let rules = [
        (d.n, Label::T1, false, "N"),
        (d.e, Label::T2, false, "E"),
        (d.s, Label::T1, true, "S"),
        (d.w, Label::T2, true, "W"),
    ];
    'outer: for (x, l, out, name) in rules {
        for &y in g.neighbors(x) {
            if d.contains(y) {
                if rel.label(x, y).is_some() {
                    boundary = Some(format!("outer edge ({name},{y}) is labeled"));
                    break 'outer;
                }
                continue;
            }
            if rel.label(x, y) != Some(l) || rel.is_out(x, y) != out {
                boundary = Some(format!(
                    "edge ({name},{y}) must be {} {}",
                    l.name(),
                    if out { "outgoing" } else { "incoming" }
                ));
                break 'outer;
            }
        }
    }
    match boundary {
        None => r.pass("boundary rules at N, E, S, W"),
        Some(m) => r.fail("boundary rules at N, E, S, W", m),
    }

    for (l, name) in [(Label::T1, "T1 acyclic"), (Label::T2, "T2 acyclic")] {
        match find_cycle_vertex(rel, l) {
            None => r.pass(name),
            Some(v) => r.fail(name, format!("vertex {v} lies on a directed cycle")),
        }
    }
    r
}

/// Check the four ccw groups in1, out2, out1, in2 around an interior vertex.
pub fn pattern_at(rel: &Rel, v: VertexId) -> Result<(), String> {
    let rot = rel.cg.graph.neighbors(v);
    let mut classes = Vec::with_capacity(rot.len());
    for &w in rot {
        let l = rel
            .label(v, w)
            .ok_or_else(|| format!("vertex {v}: edge to {w} is unlabeled"))?;
        let c = match (rel.is_out(v, w), l) {
            (false, Label::T1) => 0u8,
            (true, Label::T2) => 1,
            (true, Label::T1) => 2,
            (false, Label::T2) => 3,
        };
        classes.push(c);
    }
    let k = classes.len();
    let changes: Vec<usize> = (0..k)
        .filter(|&i| classes[i] != classes[(i + 1) % k])
        .collect();
    let ok = changes.len() == 4
        && changes
            .iter()
            .all(|&i| classes[(i + 1) % k] == (classes[i] + 1) % 4);
    if ok {
        Ok(())
    } else {
        Err(format!(
            "vertex {v}: groups around it are {:?}",
            classes
                .iter()
                .map(|c| ["in1", "out2", "out1", "in2"][*c as usize])
                .collect::<Vec<_>>()
        ))
    }
}

fn find_cycle_vertex(rel: &Rel, l: Label) -> Option<VertexId> {
    let g = &rel.cg.graph;
    let size = g.id_bound();
    let mut indeg = vec![0u32; size];
    for v in g.vertices() {
        for &w in g.neighbors(v) {
            if rel.is_out(v, w) && rel.label(v, w) == Some(l) {
                indeg[w as usize] += 1;
            }
        }
    }
    let mut queue: VecDeque<VertexId> = g.vertices().filter(|&v| indeg[v as usize] == 0).collect();
    let mut seen = 0;
    while let Some(v) = queue.pop_front() {
        seen += 1;
        for &w in g.neighbors(v) {
            if rel.is_out(v, w) && rel.label(v, w) == Some(l) {
                indeg[w as usize] -= 1;
                if indeg[w as usize] == 0 {
                    queue.push_back(w);
                }
            }
        }
    }
    if seen == g.vertex_count() {
        None
    } else {
        g.vertices().find(|&v| indeg[v as usize] > 0)
    }
}
