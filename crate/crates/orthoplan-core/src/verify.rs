//! Independent checks of triangles, tilings and final plans.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::graph::{PlanarGraph, VertexId};
use crate::layout::{
    canonicalize_polygon, classify_shape, Coord, OrthoPlan, Point, Rect, RectilinearPolygon,
    ShapeClass,
};
use crate::report::ValidationReport;
use crate::triangles::Triangle;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum VerifyError {
    #[error("graph has {0} vertices, brute force is limited to {1}")]
    TooLarge(usize, usize),
}

pub const BRUTE_FORCE_LIMIT: usize = 60;

/// Every mutually adjacent triple that is not a face, by exhaustive search.
pub fn brute_force_separating_triangles(g: &PlanarGraph) -> Result<Vec<Triangle>, VerifyError> {
    let n = g.vertex_count();
    if n > BRUTE_FORCE_LIMIT {
        return Err(VerifyError::TooLarge(n, BRUTE_FORCE_LIMIT));
    }
    let faces: BTreeSet<Vec<VertexId>> = g
        .faces()
        .into_iter()
        .filter(|f| f.len() == 3)
        .map(|f| {
            let mut v = f.vertices;
            v.sort_unstable();
            v
        })
        .collect();
    let vs: Vec<VertexId> = g.vertices().collect();
    let mut out = Vec::new();
    for i in 0..vs.len() {
        for j in i + 1..vs.len() {
            if !g.has_edge(vs[i], vs[j]) {
                continue;
            }
            for k in j + 1..vs.len() {
                let (a, b, c) = (vs[i], vs[j], vs[k]);
                if g.has_edge(a, c) && g.has_edge(b, c) && !faces.contains(&vec![a, b, c]) {
                    out.push(Triangle::new(a, b, c, false));
                }
            }
        }
    }
    Ok(out)
}

/// Split a polygon into interior-disjoint rectangles by vertical slabs.
pub fn polygon_rects(p: &RectilinearPolygon) -> Vec<Rect> {
    let mut xs: Vec<Coord> = p.points().iter().map(|q| q.0).collect();
    xs.sort_unstable();
    xs.dedup();
    let horizontal: Vec<(Point, Point)> = p.edges().filter(|(a, b)| a.1 == b.1).collect();
    let mut out = Vec::new();
    for w in xs.windows(2) {
        let mid2 = w[0] + w[1];
        let mut ys: Vec<Coord> = horizontal
            .iter()
            .filter(|(a, b)| 2 * a.0.min(b.0) < mid2 && mid2 < 2 * a.0.max(b.0))
            .map(|(a, _)| a.1)
            .collect();
        ys.sort_unstable();
        for pair in ys.chunks(2) {
            if let [y1, y2] = pair {
                out.push(Rect::new(w[0], *y1, w[1], *y2));
            }
        }
    }
    out
}

/// Wall adjacency: modules sharing a boundary segment of positive length.
pub fn plan_adjacency(plan: &OrthoPlan) -> Vec<(VertexId, VertexId)> {
    // per axis line, the wall pieces with the module they bound
    type Walls = Vec<(Coord, Coord, VertexId)>;
    let mut lines: BTreeMap<(bool, Coord), Walls> = BTreeMap::new();
    for (&v, p) in &plan.modules {
        for (a, b) in p.edges() {
            if a.1 == b.1 && a.0 != b.0 {
                lines
                    .entry((true, a.1))
                    .or_default()
                    .push((a.0.min(b.0), a.0.max(b.0), v));
            } else if a.0 == b.0 && a.1 != b.1 {
                lines
                    .entry((false, a.0))
                    .or_default()
                    .push((a.1.min(b.1), a.1.max(b.1), v));
            }
        }
    }
    let mut edges = BTreeSet::new();
    for segs in lines.values_mut() {
        segs.sort_unstable();
        // sweep with the pieces still open at the current position
        let mut open: Vec<(Coord, VertexId)> = Vec::new();
        for &(lo, hi, v) in segs.iter() {
            open.retain(|&(end, _)| end > lo);
            for &(_, w) in &open {
                if w != v {
                    edges.insert((v.min(w), v.max(w)));
                }
            }
            open.push((hi, v));
        }
    }
    edges.into_iter().collect()
}

/// Areas add up to the bounding box, every piece lies inside it, and no two
/// pieces overlap.
pub fn check_tiling(plan: &OrthoPlan) -> ValidationReport {
    let mut r = ValidationReport::new();
    let b = plan.bbox;
    let mut pieces: Vec<(Rect, VertexId)> = Vec::new();
    for (&v, p) in &plan.modules {
        for rect in polygon_rects(p) {
            pieces.push((rect, v));
        }
    }
    let total: Coord = pieces.iter().map(|(p, _)| p.area()).sum();
    if total == b.area() {
        r.pass("module areas sum to the bounding box");
    } else {
        r.fail(
            "module areas sum to the bounding box",
            format!("modules cover {total}, bounding box has {}", b.area()),
        );
    }
    match pieces
        .iter()
        .find(|(p, _)| p.x1 < b.x1 || p.y1 < b.y1 || p.x2 > b.x2 || p.y2 > b.y2)
    {
        None => r.pass("modules inside the bounding box"),
        Some((p, v)) => r.fail(
            "modules inside the bounding box",
            format!("module {v} reaches {p:?}"),
        ),
    }
    match find_overlap(&mut pieces) {
        None => r.pass("modules do not overlap"),
        Some((u, v, ov)) => r.fail(
            "modules do not overlap",
            format!("modules {u} and {v} overlap in {ov:?}"),
        ),
    }
    r
}

/// Two modules whose interiors meet, with the shared rectangle.
pub fn overlap_witness(plan: &OrthoPlan) -> Option<(VertexId, VertexId, Rect)> {
    let mut pieces: Vec<(Rect, VertexId)> = Vec::new();
    for (&v, p) in &plan.modules {
        for rect in polygon_rects(p) {
            pieces.push((rect, v));
        }
    }
    find_overlap(&mut pieces)
}

fn find_overlap(pieces: &mut [(Rect, VertexId)]) -> Option<(VertexId, VertexId, Rect)> {
    pieces.sort_unstable_by_key(|(p, v)| (p.x1, p.y1, *v));
    // active pieces keyed by their bottom edge; they are pairwise disjoint
    let mut active: BTreeMap<(Coord, usize), usize> = BTreeMap::new();
    let mut ends: BTreeSet<(Coord, usize)> = BTreeSet::new();
    for i in 0..pieces.len() {
        let (r, v) = pieces[i];
        while let Some(&(x2, j)) = ends.first() {
            if x2 > r.x1 {
                break;
            }
            ends.pop_first();
            active.remove(&(pieces[j].0.y1, j));
        }
        let below = active.range(..(r.y2, 0)).next_back().map(|(_, &j)| j);
        if let Some(j) = below {
            let (s, w) = pieces[j];
            if s.y2 > r.y1 {
                let ov = Rect::new(
                    r.x1.max(s.x1),
                    r.y1.max(s.y1),
                    r.x2.min(s.x2),
                    r.y2.min(s.y2),
                );
                return Some((w.min(v), w.max(v), ov));
            }
        }
        active.insert((r.y1, i), i);
        ends.insert((r.x2, i));
    }
    None
}

/// Outcome of checking a final plan against its input graph.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VerifyReport {
    pub stages: BTreeMap<String, ValidationReport>,
    pub missing: Vec<(VertexId, VertexId)>,
    pub extra: Vec<(VertexId, VertexId)>,
    pub shape_table: BTreeMap<VertexId, ShapeClass>,
}

impl VerifyReport {
    pub fn verdict(&self) -> bool {
        self.stages.values().all(ValidationReport::verdict)
            && self.missing.is_empty()
            && self.extra.is_empty()
    }

    pub fn add_stage(&mut self, name: &str, report: ValidationReport) {
        self.stages.insert(name.into(), report);
    }

    /// First failing check as "stage: check: detail".
    pub fn first_failure(&self) -> Option<String> {
        for (stage, rep) in &self.stages {
            if let Some(f) = rep.first_failure() {
                return Some(format!("{stage}: {}: {}", f.name, f.detail));
            }
        }
        if let Some(e) = self.missing.first().or(self.extra.first()) {
            return Some(format!("adjacency differs at edge {e:?}"));
        }
        None
    }
}

/// Tiling, simplicity of every module, wall adjacency equal to `g`, and the
/// shape of the designated module.
pub fn check_plan_against_graph(
    plan: &OrthoPlan,
    g: &PlanarGraph,
    designated: Option<VertexId>,
    shape: Option<ShapeClass>,
) -> VerifyReport {
    let mut out = VerifyReport::default();
    let mut r = ValidationReport::new();

    let mut simple: Option<String> = None;
    let mut classes = BTreeMap::new();
    for (&v, p) in &plan.modules {
        match canonicalize_polygon(p.points()) {
            Ok(c) => {
                if let Ok(s) = classify_shape(&c) {
                    classes.insert(v, s);
                }
            }
            Err(e) => {
                if simple.is_none() {
                    simple = Some(format!("module {v}: {e}"));
                }
            }
        }
    }
    let simple_ok = simple.is_none();
    match simple {
        None => r.pass("modules are simple rectilinear polygons"),
        Some(m) => r.fail("modules are simple rectilinear polygons", m),
    }

    let have: BTreeSet<VertexId> = plan.modules.keys().copied().collect();
    let want: BTreeSet<VertexId> = g.vertices().collect();
    if have == want {
        r.pass("one module per vertex");
    } else {
        let diff: Vec<_> = have.symmetric_difference(&want).collect();
        r.fail("one module per vertex", format!("vertices {diff:?} differ"));
    }

    if simple_ok {
        r.extend(check_tiling(plan));
        let adj: BTreeSet<(VertexId, VertexId)> = plan_adjacency(plan).into_iter().collect();
        let edges: BTreeSet<(VertexId, VertexId)> = g.edges().into_iter().collect();
        out.missing = edges.difference(&adj).copied().collect();
        out.extra = adj.difference(&edges).copied().collect();
        if out.missing.is_empty() && out.extra.is_empty() {
            r.pass("wall adjacency equals the graph");
        } else {
            r.fail(
                "wall adjacency equals the graph",
                format!("missing {:?}, extra {:?}", out.missing, out.extra),
            );
        }
    }

    if let Some(want) = shape {
        let got = designated.and_then(|d| classes.get(&d).copied());
        match (designated, got) {
            (Some(_), Some(s)) if s == want => r.pass("designated module shape"),
            (Some(d), got) => r.fail(
                "designated module shape",
                format!(
                    "module {d} is {}, expected {want}",
                    got.map_or("invalid", |s| s.name())
                ),
            ),
            (None, _) => r.fail("designated module shape", "no designated module"),
        }
    }
    out.shape_table = classes;
    out.add_stage("plan", r);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::*;
    use crate::layout::RectPlan;
    use crate::triangles::find_separating_triangles;

    fn rects(rs: &[(VertexId, Rect)], bbox: Rect) -> OrthoPlan {
        OrthoPlan::from_rects(&RectPlan {
            modules: rs.iter().copied().collect(),
            bbox,
        })
    }

    #[test]
    fn brute_force_fixtures() {
        let t = |g: &PlanarGraph| {
            brute_force_separating_triangles(g)
                .unwrap()
                .iter()
                .map(|t| t.vertices)
                .collect::<Vec<_>>()
        };
        assert_eq!(t(&g5()), vec![[1, 2, 4]]);
        assert!(t(&oct()).is_empty());
        assert_eq!(t(&g6()), vec![[1, 2, 4], [2, 3, 4]]);
        for g in [g5(), g6(), oct()] {
            let fast: Vec<_> = find_separating_triangles(&g)
                .iter()
                .map(|t| t.vertices)
                .collect();
            assert_eq!(fast, t(&g));
        }
    }

    #[test]
    fn adjacency_excludes_point_contact() {
        let stacked = rects(
            &[(1, Rect::new(0, 0, 1, 1)), (2, Rect::new(0, 1, 1, 2))],
            Rect::new(0, 0, 1, 2),
        );
        assert_eq!(plan_adjacency(&stacked), vec![(1, 2)]);
        let board = rects(
            &[
                (1, Rect::new(0, 0, 1, 1)),
                (2, Rect::new(1, 0, 2, 1)),
                (3, Rect::new(0, 1, 1, 2)),
                (4, Rect::new(1, 1, 2, 2)),
            ],
            Rect::new(0, 0, 2, 2),
        );
        assert_eq!(plan_adjacency(&board), vec![(1, 2), (1, 3), (2, 4), (3, 4)]);
    }

    #[test]
    fn tiling_checks() {
        let good = rects(
            &[(1, Rect::new(0, 0, 2, 1)), (2, Rect::new(0, 1, 2, 2))],
            Rect::new(0, 0, 2, 2),
        );
        assert!(check_tiling(&good).verdict());
        let shifted = rects(
            &[
                (1, Rect::new(0, 0, 2, 1)),
                (2, Rect::new(0, 0, 2, 1)),
                (3, Rect::new(0, 1, 2, 2)),
            ],
            Rect::new(0, 0, 2, 3),
        );
        let rep = check_tiling(&shifted);
        let f = rep
            .failures()
            .find(|c| c.name == "modules do not overlap")
            .unwrap();
        assert!(f.detail.contains("modules 1 and 2"), "{}", f.detail);
        let empty = rects(&[], Rect::default());
        assert!(check_tiling(&empty).verdict());
    }

    #[test]
    fn slabs_of_an_l() {
        let p = canonicalize_polygon(&[(0, 0), (2, 0), (2, 2), (1, 2), (1, 1), (0, 1)]).unwrap();
        let rs = polygon_rects(&p);
        assert_eq!(rs, vec![Rect::new(0, 0, 1, 1), Rect::new(1, 0, 2, 2)]);
    }

    #[test]
    fn wrong_graph_gives_diff() {
        let plan = rects(
            &[
                (1, Rect::new(0, 0, 1, 1)),
                (2, Rect::new(1, 0, 2, 1)),
                (3, Rect::new(0, 1, 2, 2)),
            ],
            Rect::new(0, 0, 2, 2),
        );
        let g = crate::graph::build_graph(&[(1, 2), (2, 3), (1, 3)], None, None).unwrap();
        assert!(check_plan_against_graph(&plan, &g, None, None).verdict());
        let h = crate::graph::build_graph(
            &[(1, 2), (2, 3), (1, 3), (1, 4), (2, 4), (3, 4)],
            None,
            None,
        )
        .unwrap();
        let rep = check_plan_against_graph(&plan, &h, Some(1), Some(ShapeClass::L));
        assert!(!rep.verdict());
        assert_eq!(rep.missing, vec![(1, 4), (2, 4), (3, 4)]);
        let names: Vec<_> = rep.stages["plan"]
            .failures()
            .map(|c| c.name.clone())
            .collect();
        assert!(names.contains(&"one module per vertex".into()));
        assert!(names.contains(&"designated module shape".into()));
    }
}
