//! Rectangular duals of regular edge labelings and the rectilinear plans
//! obtained by merging auxiliary modules.

use alloc::collections::{BTreeMap, VecDeque};
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::completion::Directions;
use crate::graph::{normalize_cycle, PlanarGraph, RotationIndex, VertexId};
use crate::rel::{Label, Rel};
use crate::triangles::{SiteL, SiteT};

pub type Coord = i64;
pub type Point = (Coord, Coord);

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum LayoutError {
    #[error("labeling has no rectangular dual: {0}")]
    NotRealizable(String),
    #[error("modules {0} and {1} share no wall")]
    NotAdjacent(VertexId, VertexId),
    #[error("polygon touches itself at {0:?}")]
    SelfIntersecting(Point),
    #[error("polygon has a zero-area spike at {0:?}")]
    ZeroAreaEdge(Point),
    #[error("edge ending at {0:?} is not axis-aligned")]
    NotRectilinear(Point),
    #[error("plan has no frame modules")]
    MissingFrame,
    #[error("module {0} is not in the plan")]
    MissingModule(VertexId),
}

/// Axis-aligned rectangle `[x1, x2] x [y1, y2]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Rect {
    pub x1: Coord,
    pub x2: Coord,
    pub y1: Coord,
    pub y2: Coord,
}

impl Rect {
    pub fn new(x1: Coord, y1: Coord, x2: Coord, y2: Coord) -> Self {
        Rect { x1, x2, y1, y2 }
    }

    pub fn width(&self) -> Coord {
        self.x2 - self.x1
    }

    pub fn height(&self) -> Coord {
        self.y2 - self.y1
    }

    pub fn area(&self) -> Coord {
        self.width() * self.height()
    }

    pub fn is_proper(&self) -> bool {
        self.x1 < self.x2 && self.y1 < self.y2
    }

    /// True if the interiors intersect.
    pub fn overlaps(&self, o: &Rect) -> bool {
        self.x1 < o.x2 && o.x1 < self.x2 && self.y1 < o.y2 && o.y1 < self.y2
    }

    /// Length of the wall shared with `o`, zero for point contact.
    pub fn shared_wall(&self, o: &Rect) -> Coord {
        let ox = self.x2.min(o.x2) - self.x1.max(o.x1);
        let oy = self.y2.min(o.y2) - self.y1.max(o.y1);
        if (self.x2 == o.x1 || o.x2 == self.x1) && oy > 0 {
            oy
        } else if (self.y2 == o.y1 || o.y2 == self.y1) && ox > 0 {
            ox
        } else {
            0
        }
    }

    pub fn translate(&self, dx: Coord, dy: Coord) -> Rect {
        Rect::new(self.x1 + dx, self.y1 + dy, self.x2 + dx, self.y2 + dy)
    }

    /// Corners counterclockwise from the lower left.
    pub fn corners(&self) -> [Point; 4] {
        [
            (self.x1, self.y1),
            (self.x2, self.y1),
            (self.x2, self.y2),
            (self.x1, self.y2),
        ]
    }
}

/// One rectangle per vertex, tiling `bbox`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RectPlan {
    pub modules: BTreeMap<VertexId, Rect>,
    pub bbox: Rect,
}

struct Layer {
    idx: RotationIndex,
    face: Vec<usize>,
    dist: Vec<Coord>,
}

fn ring_out(d: &Directions, vertical: bool, v: VertexId, w: VertexId) -> Option<bool> {
    let arcs = if vertical {
        [(d.s, d.w), (d.w, d.n), (d.s, d.e), (d.e, d.n)]
    } else {
        [(d.w, d.s), (d.w, d.n), (d.s, d.e), (d.n, d.e)]
    };
    for (t, h) in arcs {
        if (t, h) == (v, w) {
            return Some(true);
        }
        if (h, t) == (v, w) {
            return Some(false);
        }
    }
    None
}

/// Edges of one label plus the frame, oriented as a planar st-graph, and the
/// longest-path distances of its faces. The vertical layer (T1) yields
/// x-coordinates and the horizontal one (T2) y-coordinates.
fn layer(
    rel: &Rel,
    vertical: bool,
) -> Result<(Layer, impl Fn(VertexId, VertexId) -> bool + '_), LayoutError> {
    let d = rel.cg.dirs;
    let want = if vertical { Label::T1 } else { Label::T2 };
    let g = &rel.cg.graph;
    let keep = move |v: VertexId, w: VertexId| -> bool {
        if rel.is_ring_edge(v, w) {
            true
        } else {
            rel.label(v, w) == Some(want)
        }
    };
    let is_out = move |v: VertexId, w: VertexId| -> bool {
        ring_out(&d, vertical, v, w).unwrap_or_else(|| rel.is_out(v, w))
    };
    let mut rot = vec![Vec::new(); g.id_bound()];
    for v in g.vertices() {
        rot[v as usize] = g
            .neighbors(v)
            .iter()
            .copied()
            .filter(|&w| keep(v, w))
            .collect();
    }
    let sub = PlanarGraph::from_parts(rot, normalize_cycle(&[d.n, d.e, d.s, d.w]));
    let idx = sub.index();
    let darts = idx.dart_count();
    let mut face = vec![usize::MAX; darts];
    let mut faces = 0;
    for v in sub.vertices() {
        for &w in idx.rotation(v) {
            let start = idx.dart(v, w).unwrap();
            if face[start] != usize::MAX {
                continue;
            }
            let (mut a, mut b) = (v, w);
            loop {
                let dd = idx.dart(a, b).unwrap();
                if face[dd] != usize::MAX {
                    break;
                }
                face[dd] = faces;
                let c = idx.prev(b, a);
                a = b;
                b = c;
            }
            faces += 1;
        }
    }
    let dart = |a: VertexId, b: VertexId| {
        idx.dart(a, b)
            .ok_or_else(|| LayoutError::NotRealizable(format!("frame edge ({a},{b}) missing")))
    };
    let outer = [
        dart(d.s, d.w)?,
        dart(d.w, d.n)?,
        dart(d.n, d.e)?,
        dart(d.e, d.s)?,
    ];
    if outer.iter().any(|&o| face[o] != face[outer[0]]) {
        return Err(LayoutError::NotRealizable(
            "frame is not the outer face".into(),
        ));
    }
    // split the outer face into the source side and the sink side
    let source = face[outer[0]];
    let sink = faces;
    faces += 1;
    let sink_darts = if vertical {
        [outer[2], outer[3]]
    } else {
        [outer[1], outer[2]]
    };
    for dd in sink_darts {
        face[dd] = sink;
    }

    let mut succ: Vec<Vec<usize>> = vec![Vec::new(); faces];
    let mut indeg = vec![0usize; faces];
    for v in sub.vertices() {
        for &w in idx.rotation(v) {
            if !is_out(v, w) {
                continue;
            }
            let left = face[idx.dart(v, w).unwrap()];
            let right = face[idx.dart(w, v).unwrap()];
            let (from, to) = if vertical {
                (left, right)
            } else {
                (right, left)
            };
            succ[from].push(to);
            indeg[to] += 1;
        }
    }
    let mut dist = vec![0 as Coord; faces];
    let mut queue: VecDeque<usize> = (0..faces).filter(|&f| indeg[f] == 0).collect();
    if queue.len() != 1 || queue[0] != source {
        return Err(LayoutError::NotRealizable(
            "dual has several sources".into(),
        ));
    }
    let mut seen = 0;
    while let Some(f) = queue.pop_front() {
        seen += 1;
        for &t in &succ[f] {
            dist[t] = dist[t].max(dist[f] + 1);
            indeg[t] -= 1;
            if indeg[t] == 0 {
                queue.push_back(t);
            }
        }
    }
    if seen != faces {
        return Err(LayoutError::NotRealizable("dual has a cycle".into()));
    }
    Ok((Layer { idx, face, dist }, is_out))
}

/// Extent of `v` across the layer: (left-or-lower, right-or-upper).
fn extent(
    l: &Layer,
    is_out: &dyn Fn(VertexId, VertexId) -> bool,
    v: VertexId,
    vertical: bool,
) -> Result<(Coord, Coord), LayoutError> {
    let rot = l.idx.rotation(v);
    let k = rot.len();
    let outs: Vec<bool> = rot.iter().map(|&w| is_out(v, w)).collect();
    let firsts: Vec<usize> = (0..k)
        .filter(|&i| outs[i] && !outs[(i + k - 1) % k])
        .collect();
    let lasts: Vec<usize> = (0..k).filter(|&i| outs[i] && !outs[(i + 1) % k]).collect();
    if firsts.len() != 1 || lasts.len() != 1 {
        return Err(LayoutError::NotRealizable(format!(
            "outgoing edges of {v} are not consecutive"
        )));
    }
    let first = rot[firsts[0]];
    let last = rot[lasts[0]];
    let after_first = l.dist[l.face[l.idx.dart(first, v).unwrap()]];
    let before_last = l.dist[l.face[l.idx.dart(v, last).unwrap()]];
    Ok(if vertical {
        (before_last, after_first)
    } else {
        (after_first, before_last)
    })
}

/// Integer rectangular dual of a valid labeling, frame modules included.
/// S and N span the full width; W and E sit between them.
pub fn rectangular_dual(rel: &Rel) -> Result<RectPlan, LayoutError> {
    let d = rel.cg.dirs;
    let (vl, v_out) = layer(rel, true)?;
    let (hl, h_out) = layer(rel, false)?;
    let width = *vl.dist.last().unwrap();
    let height = *hl.dist.last().unwrap();
    let s_top = extent(&hl, &h_out, d.s, false)?.1;
    let n_bottom = extent(&hl, &h_out, d.n, false)?.0;
    let mut modules = BTreeMap::new();
    for v in rel.cg.graph.vertices() {
        let (x1, x2) = if v == d.s || v == d.n {
            (0, width)
        } else {
            extent(&vl, &v_out, v, true)?
        };
        let (y1, y2) = if v == d.w || v == d.e {
            (s_top, n_bottom)
        } else {
            extent(&hl, &h_out, v, false)?
        };
        let r = Rect::new(x1, y1, x2, y2);
        if !r.is_proper() {
            return Err(LayoutError::NotRealizable(format!(
                "module {v} is degenerate: {r:?}"
            )));
        }
        modules.insert(v, r);
    }
    Ok(RectPlan {
        modules,
        bbox: Rect::new(0, 0, width, height),
    })
}

/// Drop the four frame modules and move the inner rectangle to the origin.
pub fn strip_frame(plan: &RectPlan, dirs: &Directions) -> Result<RectPlan, LayoutError> {
    let get = |v: VertexId| {
        plan.modules
            .get(&v)
            .copied()
            .ok_or(LayoutError::MissingFrame)
    };
    let (n, e, s, w) = (get(dirs.n)?, get(dirs.e)?, get(dirs.s)?, get(dirs.w)?);
    let inner = Rect::new(w.x2, s.y2, e.x1, n.y1);
    let modules = plan
        .modules
        .iter()
        .filter(|(v, _)| !dirs.contains(**v))
        .map(|(&v, r)| (v, r.translate(-inner.x1, -inner.y1)))
        .collect();
    Ok(RectPlan {
        modules,
        bbox: Rect::new(0, 0, inner.width(), inner.height()),
    })
}

/// Simple axis-parallel polygon, counterclockwise, no collinear points,
/// starting at its lexicographically smallest corner.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RectilinearPolygon {
    points: Vec<Point>,
}

impl RectilinearPolygon {
    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn corners(&self) -> usize {
        self.points.len()
    }

    /// Wrap points as given, for data read from outside. Use
    /// `canonicalize_polygon` to check them.
    pub fn from_points_unchecked(points: Vec<Point>) -> Self {
        RectilinearPolygon { points }
    }

    pub fn from_rect(r: &Rect) -> Self {
        RectilinearPolygon {
            points: r.corners().to_vec(),
        }
    }

    pub fn area(&self) -> Coord {
        twice_area(&self.points) / 2
    }

    pub fn bounds(&self) -> Rect {
        let xs = self.points.iter().map(|p| p.0);
        let ys = self.points.iter().map(|p| p.1);
        Rect::new(
            xs.clone().min().unwrap_or(0),
            ys.clone().min().unwrap_or(0),
            xs.max().unwrap_or(0),
            ys.max().unwrap_or(0),
        )
    }

    /// Directed edges in traversal order.
    pub fn edges(&self) -> impl Iterator<Item = (Point, Point)> + '_ {
        let k = self.points.len();
        (0..k).map(move |i| (self.points[i], self.points[(i + 1) % k]))
    }

    /// Number of reflex corners.
    pub fn reflex_count(&self) -> usize {
        turns(&self.points).iter().filter(|&&t| t < 0).count()
    }
}

fn twice_area(p: &[Point]) -> Coord {
    let k = p.len();
    (0..k)
        .map(|i| {
            let (a, b) = (p[i], p[(i + 1) % k]);
            a.0 * b.1 - b.0 * a.1
        })
        .sum()
}

fn turns(p: &[Point]) -> Vec<Coord> {
    let k = p.len();
    (0..k)
        .map(|i| {
            let (a, b, c) = (p[(i + k - 1) % k], p[i], p[(i + 1) % k]);
            (b.0 - a.0) * (c.1 - b.1) - (b.1 - a.1) * (c.0 - b.0)
        })
        .collect()
}

fn segments_touch(a: (Point, Point), b: (Point, Point)) -> Option<Point> {
    let lo = |p: Point, q: Point| (p.0.min(q.0), p.1.min(q.1));
    let hi = |p: Point, q: Point| (p.0.max(q.0), p.1.max(q.1));
    let (al, ah) = (lo(a.0, a.1), hi(a.0, a.1));
    let (bl, bh) = (lo(b.0, b.1), hi(b.0, b.1));
    let x1 = al.0.max(bl.0);
    let x2 = ah.0.min(bh.0);
    let y1 = al.1.max(bl.1);
    let y2 = ah.1.min(bh.1);
    (x1 <= x2 && y1 <= y2).then_some((x1, y1))
}

/// Normalize a closed axis-parallel loop.
pub fn canonicalize_polygon(points: &[Point]) -> Result<RectilinearPolygon, LayoutError> {
    let mut p: Vec<Point> = Vec::with_capacity(points.len());
    for &q in points {
        if p.last() != Some(&q) {
            p.push(q);
        }
    }
    while p.len() > 1 && p.first() == p.last() {
        p.pop();
    }
    let k = p.len();
    for i in 0..k {
        let (a, b) = (p[i], p[(i + 1) % k]);
        if a.0 != b.0 && a.1 != b.1 {
            return Err(LayoutError::NotRectilinear(b));
        }
    }
    loop {
        let k = p.len();
        if k < 4 {
            return Err(LayoutError::ZeroAreaEdge(
                p.first().copied().unwrap_or((0, 0)),
            ));
        }
        let t = turns(&p);
        let Some(i) = (0..k).find(|&i| t[i] == 0) else {
            break;
        };
        let (a, b, c) = (p[(i + k - 1) % k], p[i], p[(i + 1) % k]);
        let forward = (b.0 - a.0) * (c.0 - b.0) + (b.1 - a.1) * (c.1 - b.1);
        if forward < 0 {
            return Err(LayoutError::ZeroAreaEdge(b));
        }
        p.remove(i);
    }
    let k = p.len();
    for i in 0..k {
        for j in i + 1..k {
            if p[i] == p[j] {
                return Err(LayoutError::SelfIntersecting(p[i]));
            }
        }
    }
    for i in 0..k {
        for j in i + 2..k {
            if i == 0 && j == k - 1 {
                continue;
            }
            let e = (p[i], p[(i + 1) % k]);
            let f = (p[j], p[(j + 1) % k]);
            if let Some(at) = segments_touch(e, f) {
                return Err(LayoutError::SelfIntersecting(at));
            }
        }
    }
    let a = twice_area(&p);
    if a == 0 {
        return Err(LayoutError::ZeroAreaEdge(p[0]));
    }
    if a < 0 {
        p.reverse();
    }
    let start = (0..p.len()).min_by_key(|&i| p[i]).unwrap();
    p.rotate_left(start);
    Ok(RectilinearPolygon { points: p })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ShapeClass {
    Rectangle,
    L,
    T,
    U,
    Z,
    Other,
}

impl ShapeClass {
    pub fn name(self) -> &'static str {
        match self {
            ShapeClass::Rectangle => "Rectangle",
            ShapeClass::L => "L",
            ShapeClass::T => "T",
            ShapeClass::U => "U",
            ShapeClass::Z => "Z",
            ShapeClass::Other => "Other",
        }
    }

    pub fn parse(s: &str) -> Option<ShapeClass> {
        [
            ShapeClass::Rectangle,
            ShapeClass::L,
            ShapeClass::T,
            ShapeClass::U,
            ShapeClass::Z,
            ShapeClass::Other,
        ]
        .into_iter()
        .find(|c| c.name().eq_ignore_ascii_case(s))
    }
}

impl fmt::Display for ShapeClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Counts of convex corners between cyclically consecutive reflex corners,
/// sorted.
pub fn convex_gaps(p: &RectilinearPolygon) -> Vec<usize> {
    let t = turns(&p.points);
    let reflex: Vec<usize> = (0..t.len()).filter(|&i| t[i] < 0).collect();
    let k = t.len();
    let mut gaps: Vec<usize> = (0..reflex.len())
        .map(|j| {
            let a = reflex[j];
            let b = reflex[(j + 1) % reflex.len()];
            (b + k - a - 1) % k
        })
        .collect();
    if reflex.len() == 1 {
        gaps = vec![k - 1];
    }
    gaps.sort_unstable();
    gaps
}

pub fn classify_shape(p: &RectilinearPolygon) -> Result<ShapeClass, LayoutError> {
    let k = p.points.len();
    for i in 0..k {
        let (a, b) = (p.points[i], p.points[(i + 1) % k]);
        if a.0 != b.0 && a.1 != b.1 {
            return Err(LayoutError::NotRectilinear(b));
        }
    }
    let reflex = p.reflex_count();
    Ok(match (k, reflex) {
        (4, 0) => ShapeClass::Rectangle,
        (6, 1) => ShapeClass::L,
        (8, 2) => match convex_gaps(p).as_slice() {
            [0, 6] => ShapeClass::U,
            [2, 4] => ShapeClass::T,
            [3, 3] => ShapeClass::Z,
            _ => ShapeClass::Other,
        },
        _ => ShapeClass::Other,
    })
}

/// Outline of a union of interior-disjoint rectangles.
pub fn union_outline(rects: &[Rect]) -> Result<RectilinearPolygon, LayoutError> {
    if rects.len() == 1 {
        return Ok(RectilinearPolygon::from_rect(&rects[0]));
    }
    // directed unit pieces between breakpoints, keyed by (horizontal, line, lo, hi)
    type Pieces = Vec<(Coord, Coord, i32)>;
    let mut lines: BTreeMap<(bool, Coord), Pieces> = BTreeMap::new();
    for r in rects {
        lines.entry((true, r.y1)).or_default().push((r.x1, r.x2, 1));
        lines
            .entry((true, r.y2))
            .or_default()
            .push((r.x1, r.x2, -1));
        lines
            .entry((false, r.x2))
            .or_default()
            .push((r.y1, r.y2, 1));
        lines
            .entry((false, r.x1))
            .or_default()
            .push((r.y1, r.y2, -1));
    }
    let mut next: BTreeMap<Point, Vec<Point>> = BTreeMap::new();
    let mut pieces = 0usize;
    for ((horizontal, c), segs) in &lines {
        let mut cuts: Vec<Coord> = segs.iter().flat_map(|s| [s.0, s.1]).collect();
        cuts.sort_unstable();
        cuts.dedup();
        for w in cuts.windows(2) {
            let (lo, hi) = (w[0], w[1]);
            let mut net = 0;
            let mut count = 0;
            for s in segs {
                if s.0 <= lo && hi <= s.1 {
                    net += s.2;
                    count += 1;
                }
            }
            if count > 2 || (count == 2 && net != 0) {
                return Err(LayoutError::SelfIntersecting(if *horizontal {
                    (lo, *c)
                } else {
                    (*c, lo)
                }));
            }
            if net == 0 {
                continue;
            }
            let (a, b) = match (*horizontal, net > 0) {
                (true, true) => ((lo, *c), (hi, *c)),
                (true, false) => ((hi, *c), (lo, *c)),
                (false, true) => ((*c, lo), (*c, hi)),
                (false, false) => ((*c, hi), (*c, lo)),
            };
            next.entry(a).or_default().push(b);
            pieces += 1;
        }
    }
    if let Some((p, _)) = next.iter().find(|(_, v)| v.len() > 1) {
        return Err(LayoutError::SelfIntersecting(*p));
    }
    let start = *next
        .keys()
        .next()
        .ok_or(LayoutError::ZeroAreaEdge((0, 0)))?;
    let mut loop_pts = vec![start];
    let mut cur = next[&start][0];
    while cur != start {
        loop_pts.push(cur);
        cur = next.get(&cur).ok_or(LayoutError::SelfIntersecting(cur))?[0];
        if loop_pts.len() > pieces {
            return Err(LayoutError::SelfIntersecting(cur));
        }
    }
    if loop_pts.len() != pieces {
        return Err(LayoutError::SelfIntersecting(start));
    }
    canonicalize_polygon(&loop_pts)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Merge {
    pub from: VertexId,
    pub into: VertexId,
}

/// Which shaped module to form, and from which site.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ShapeMerge {
    None,
    L { site: SiteL, m: u8 },
    T { site: SiteT },
}

/// A subdivision vertex and the edge it split.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Enode {
    pub vertex: VertexId,
    pub edge: (VertexId, VertexId),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrthoPlan {
    pub bbox: Rect,
    pub modules: BTreeMap<VertexId, RectilinearPolygon>,
    pub shapes: BTreeMap<VertexId, ShapeClass>,
    pub merges: Vec<Merge>,
    pub designated: Option<VertexId>,
}

impl OrthoPlan {
    /// Wrap a rectangular plan without merging anything.
    pub fn from_rects(plan: &RectPlan) -> Self {
        let modules: BTreeMap<_, _> = plan
            .modules
            .iter()
            .map(|(&v, r)| (v, RectilinearPolygon::from_rect(r)))
            .collect();
        let shapes = modules
            .keys()
            .map(|&v| (v, ShapeClass::Rectangle))
            .collect();
        OrthoPlan {
            bbox: plan.bbox,
            modules,
            shapes,
            merges: Vec::new(),
            designated: None,
        }
    }

    pub fn shape_of(&self, v: VertexId) -> Option<ShapeClass> {
        self.shapes.get(&v).copied()
    }
}

struct Rooms {
    parts: BTreeMap<VertexId, Vec<Rect>>,
    owner: BTreeMap<VertexId, VertexId>,
    merges: Vec<Merge>,
}

impl Rooms {
    fn find(&self, mut v: VertexId) -> VertexId {
        while let Some(&o) = self.owner.get(&v) {
            v = o;
        }
        v
    }

    fn adjacent(&self, a: VertexId, b: VertexId) -> bool {
        let (Some(pa), Some(pb)) = (self.parts.get(&a), self.parts.get(&b)) else {
            return false;
        };
        pa.iter().any(|r| pb.iter().any(|s| r.shared_wall(s) > 0))
    }

    fn union_with(&self, a: VertexId, b: VertexId) -> Vec<Rect> {
        let mut rs = self.parts[&a].clone();
        rs.extend_from_slice(&self.parts[&b]);
        rs
    }

    fn merge(&mut self, from: VertexId, into: VertexId) -> Result<(), LayoutError> {
        if !self.parts.contains_key(&from) {
            return Err(LayoutError::MissingModule(from));
        }
        if !self.parts.contains_key(&into) {
            return Err(LayoutError::MissingModule(into));
        }
        if !self.adjacent(from, into) {
            return Err(LayoutError::NotAdjacent(from, into));
        }
        let rs = self.parts.remove(&from).unwrap();
        self.parts.get_mut(&into).unwrap().extend(rs);
        self.owner.insert(from, into);
        self.merges.push(Merge { from, into });
        Ok(())
    }

    fn unmerge_last(&mut self, count: usize) {
        let m = self.merges.pop().unwrap();
        let parts = self.parts.get_mut(&m.into).unwrap();
        let rs = parts.split_off(parts.len() - count);
        self.parts.insert(m.from, rs);
        self.owner.remove(&m.from);
    }

    fn shape(&self, v: VertexId) -> Option<ShapeClass> {
        union_outline(&self.parts[&v])
            .ok()
            .and_then(|p| classify_shape(&p).ok())
    }
}

/// Merge the site vertex into its partner, then every subdivision vertex back
/// into an endpoint of the edge it split, latest first. A subdivision vertex
/// goes to an endpoint other than the designated module when possible,
/// preferring one that stays rectangular.
pub fn merge_rooms(
    plan: &RectPlan,
    enodes: &[Enode],
    target: &ShapeMerge,
) -> Result<OrthoPlan, LayoutError> {
    let mut rooms = Rooms {
        parts: plan.modules.iter().map(|(&v, r)| (v, vec![*r])).collect(),
        owner: BTreeMap::new(),
        merges: Vec::new(),
    };
    let designated = match target {
        ShapeMerge::None => None,
        ShapeMerge::L { site, m } => {
            let u = site.u.ok_or(LayoutError::MissingModule(site.a))?;
            let into = if *m == 1 { site.a } else { site.b };
            rooms.merge(u, into)?;
            Some(into)
        }
        ShapeMerge::T { site } => {
            let u = site.u.ok_or(LayoutError::MissingModule(site.a))?;
            let moved = rooms.parts.get(&u).map_or(0, Vec::len);
            rooms.merge(u, site.a)?;
            if rooms.shape(site.a) == Some(ShapeClass::T) {
                Some(site.a)
            } else {
                rooms.unmerge_last(moved);
                rooms.merge(u, site.c)?;
                Some(site.c)
            }
        }
    };
    for en in enodes.iter().rev() {
        let u = en.vertex;
        let cands = [rooms.find(en.edge.0), rooms.find(en.edge.1)];
        let free = |v: VertexId| Some(v) != designated && rooms.adjacent(u, v);
        let rect =
            |v: VertexId| union_outline(&rooms.union_with(u, v)).is_ok_and(|p| p.corners() == 4);
        let pick = cands
            .iter()
            .copied()
            .find(|&v| free(v) && rect(v))
            .or_else(|| cands.iter().copied().find(|&v| free(v)))
            .unwrap_or(cands[0]);
        rooms.merge(u, pick)?;
    }
    let mut modules = BTreeMap::new();
    let mut shapes = BTreeMap::new();
    for (&v, rs) in &rooms.parts {
        let p = union_outline(rs)?;
        shapes.insert(v, classify_shape(&p)?);
        modules.insert(v, p);
    }
    Ok(OrthoPlan {
        bbox: plan.bbox,
        modules,
        shapes,
        merges: rooms.merges,
        designated,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::*;
    use crate::ordering::canonical_order;
    use crate::ordering::tests::completed;
    use crate::rel::build_rel;

    fn poly(p: &[Point]) -> RectilinearPolygon {
        canonicalize_polygon(p).unwrap()
    }

    /// Independent tiling check on the unit grid.
    fn grid_tiles(plan: &RectPlan) -> bool {
        let b = plan.bbox;
        let mut cell = vec![0u32; (b.width() * b.height()) as usize];
        for r in plan.modules.values() {
            for x in r.x1..r.x2 {
                for y in r.y1..r.y2 {
                    cell[((y - b.y1) * b.width() + (x - b.x1)) as usize] += 1;
                }
            }
        }
        cell.iter().all(|&c| c == 1)
    }

    fn adjacency(plan: &RectPlan) -> Vec<(VertexId, VertexId)> {
        let mut out = Vec::new();
        for (&u, r) in &plan.modules {
            for (&v, s) in &plan.modules {
                if u < v && r.shared_wall(s) > 0 {
                    out.push((u, v));
                }
            }
        }
        out
    }

    fn dual_of(g: &PlanarGraph) -> (RectPlan, Rel) {
        let cg = completed(g);
        let ord = canonical_order(&cg).unwrap();
        let rel = build_rel(&cg, &ord, Label::T1).unwrap();
        (rectangular_dual(&rel).unwrap(), rel)
    }

    #[test]
    fn oct_dual_tiles_and_matches() {
        let (plan, rel) = dual_of(&oct());
        assert!(grid_tiles(&plan));
        let mut want = rel.cg.graph.edges();
        want.sort_unstable();
        assert_eq!(adjacency(&plan), want);
        let n = rel.cg.graph.vertex_count() as Coord;
        assert!(plan.bbox.width() <= n && plan.bbox.height() <= n);
        let inner = strip_frame(&plan, &rel.cg.dirs).unwrap();
        assert_eq!(inner.modules.len(), oct().vertex_count() + 1);
        assert!(grid_tiles(&inner));
    }

    #[test]
    fn wheel_center_fills_inside() {
        let g = crate::graph::build_graph(
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
        let (plan, rel) = dual_of(&g);
        assert!(grid_tiles(&plan));
        let inner = strip_frame(&plan, &rel.cg.dirs).unwrap();
        assert!(grid_tiles(&inner));
        let mut want = rel.cg.graph.edges();
        want.sort_unstable();
        assert_eq!(adjacency(&plan), want);
    }

    #[test]
    fn strip_needs_frame() {
        let plan = RectPlan {
            modules: [(1, Rect::new(0, 0, 1, 1))].into_iter().collect(),
            bbox: Rect::new(0, 0, 1, 1),
        };
        let d = Directions {
            n: 2,
            e: 3,
            s: 4,
            w: 5,
        };
        assert_eq!(strip_frame(&plan, &d), Err(LayoutError::MissingFrame));
    }

    #[test]
    fn shapes() {
        let sq = poly(&[(0, 0), (2, 0), (2, 2), (0, 2)]);
        assert_eq!(classify_shape(&sq), Ok(ShapeClass::Rectangle));
        let l = poly(&[(0, 0), (2, 0), (2, 2), (1, 2), (1, 1), (0, 1)]);
        assert_eq!(classify_shape(&l), Ok(ShapeClass::L));
        assert_eq!(l.reflex_count(), 1);
        let t = poly(&[
            (0, 1),
            (1, 1),
            (1, 0),
            (2, 0),
            (2, 1),
            (3, 1),
            (3, 2),
            (0, 2),
        ]);
        assert_eq!(convex_gaps(&t), vec![2, 4]);
        assert_eq!(classify_shape(&t), Ok(ShapeClass::T));
        let z = poly(&[
            (1, 0),
            (3, 0),
            (3, 1),
            (2, 1),
            (2, 2),
            (0, 2),
            (0, 1),
            (1, 1),
        ]);
        assert_eq!(convex_gaps(&z), vec![3, 3]);
        assert_eq!(classify_shape(&z), Ok(ShapeClass::Z));
        let u = poly(&[
            (0, 0),
            (3, 0),
            (3, 2),
            (2, 2),
            (2, 1),
            (1, 1),
            (1, 2),
            (0, 2),
        ]);
        assert_eq!(classify_shape(&u), Ok(ShapeClass::U));
    }

    #[test]
    fn canonical_form() {
        let p = poly(&[(0, 0), (1, 0), (2, 0), (2, 2), (0, 2)]);
        assert_eq!(p.points(), &[(0, 0), (2, 0), (2, 2), (0, 2)]);
        let cw = poly(&[(0, 2), (2, 2), (2, 0), (0, 0)]);
        assert_eq!(cw, p);
        assert!(matches!(
            canonicalize_polygon(&[(0, 0), (2, 0), (2, 2), (2, 0)]),
            Err(LayoutError::ZeroAreaEdge(_))
        ));
        assert!(matches!(
            canonicalize_polygon(&[(0, 0), (2, 0), (2, 2), (1, 2), (1, -1), (0, -1)]),
            Err(LayoutError::SelfIntersecting(_))
        ));
        assert!(matches!(
            canonicalize_polygon(&[(0, 0), (2, 1), (0, 2)]),
            Err(LayoutError::NotRectilinear(_))
        ));
    }

    #[test]
    fn unions() {
        let a = Rect::new(0, 0, 2, 1);
        let b = Rect::new(0, 1, 1, 2);
        assert_eq!(
            classify_shape(&union_outline(&[a, b]).unwrap()),
            Ok(ShapeClass::L)
        );
        // full-length shared side gives a rectangle
        let c = Rect::new(0, 1, 2, 3);
        assert_eq!(union_outline(&[a, c]).unwrap().corners(), 4);
        // stem aligned with one end collapses to an L
        let stem = Rect::new(0, 1, 1, 3);
        assert_eq!(
            classify_shape(&union_outline(&[a, stem]).unwrap()),
            Ok(ShapeClass::L)
        );
        let t = union_outline(&[Rect::new(0, 0, 3, 1), Rect::new(1, 1, 2, 2)]).unwrap();
        assert_eq!(classify_shape(&t), Ok(ShapeClass::T));
        // corner contact only
        assert!(union_outline(&[Rect::new(0, 0, 1, 1), Rect::new(1, 1, 2, 2)]).is_err());
    }

    #[test]
    fn walls() {
        let a = Rect::new(0, 0, 1, 1);
        assert_eq!(a.shared_wall(&Rect::new(0, 1, 1, 2)), 1);
        assert_eq!(a.shared_wall(&Rect::new(1, 1, 2, 2)), 0);
        assert_eq!(a.shared_wall(&Rect::new(1, 0, 3, 5)), 1);
    }

    #[test]
    fn no_merges_is_identity() {
        let (plan, rel) = dual_of(&oct());
        let inner = strip_frame(&plan, &rel.cg.dirs).unwrap();
        let op = merge_rooms(&inner, &[], &ShapeMerge::None).unwrap();
        assert_eq!(op, OrthoPlan::from_rects(&inner));
    }
}
