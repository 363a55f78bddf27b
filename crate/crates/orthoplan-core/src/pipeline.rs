//! End-to-end construction of plans with one L- or T-shaped module.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::completion::{
    add_ns_edge, find_boundary_arcs, four_complete, CompletedGraph, CompletionError,
};
use crate::graph::{validate_ptg, PlanarGraph, VertexId};
use crate::layout::{
    merge_rooms, rectangular_dual, strip_frame, Enode, LayoutError, OrthoPlan, RectPlan,
    ShapeClass, ShapeMerge,
};
use crate::ordering::{
    canonical_order, prioritized_order, validate_ordering, CanonicalOrdering, Category, OrderError,
};
use crate::rel::{
    adjust_rel_for_l, build_rel, rel_for_t, validate_rel, Label, MergeSelector, Rel, RelError,
};
use crate::report::ValidationReport;
use crate::triangles::{
    eliminate_complex_triangles, find_kl, find_kt, modify_kl, modify_kt, open_outer_face,
    outer_apex, select_removal_edges, OuterSplit, RemovalPlan, SiteL, SiteT, TriangleError,
};
use crate::verify::{check_plan_against_graph, VerifyReport};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Shape {
    L,
    T,
}

impl Shape {
    pub fn class(self) -> ShapeClass {
        match self {
            Shape::L => ShapeClass::L,
            Shape::T => ShapeClass::T,
        }
    }
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Shape::L => "L",
            Shape::T => "T",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PipelineConfig {
    pub shape: Shape,
    /// Index into the sorted site list. `None` tries sites in order until one verifies.
    pub site: Option<usize>,
    /// Label of basic edges strictly inside their fan.
    pub free_basic: Label,
}

impl PipelineConfig {
    pub fn new(shape: Shape) -> Self {
        PipelineConfig {
            shape,
            site: None,
            free_basic: Label::T1,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum PipelineError {
    #[error("input is not a plane triangulated graph: {0}")]
    NotTriangulated(String),
    #[error("graph has no interior complex triangle with a K4 for an {0}-shaped module")]
    NoSite(Shape),
    #[error("site index {index} out of range, {count} sites found")]
    SiteOutOfRange { index: usize, count: usize },
    #[error(transparent)]
    Triangles(#[from] TriangleError),
    #[error(transparent)]
    Completion(#[from] CompletionError),
    #[error(transparent)]
    Ordering(#[from] OrderError),
    #[error(transparent)]
    Rel(#[from] RelError),
    #[error(transparent)]
    Layout(#[from] LayoutError),
    #[error("internal check failed: {0}")]
    Check(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Site {
    L(SiteL),
    T(SiteT),
}

/// Every intermediate result of one run.
#[derive(Clone, Debug)]
pub struct PipelineRun {
    pub shape: Shape,
    /// Position of `site` in the sorted site list.
    pub site_index: usize,
    pub site: Site,
    pub removal: RemovalPlan,
    /// The outer edge split to make the outer face a quadrangle.
    pub opened: Option<OuterSplit>,
    pub completed: CompletedGraph,
    pub ordering: CanonicalOrdering,
    pub category: Option<Category>,
    pub rel: Rel,
    pub selector: Option<MergeSelector>,
    pub dual: RectPlan,
    pub plan: OrthoPlan,
    pub report: VerifyReport,
}

impl PipelineRun {
    pub fn designated(&self) -> Option<VertexId> {
        self.plan.designated
    }
}

fn enodes_of(removal: &RemovalPlan, opened: Option<OuterSplit>) -> Vec<Enode> {
    let mut out: Vec<Enode> = removal
        .s
        .iter()
        .zip(&removal.enodes)
        .map(|(&edge, &vertex)| Enode { vertex, edge })
        .collect();
    if let Some((edge, vertex)) = opened {
        out.push(Enode { vertex, edge });
    }
    out
}

fn complete(h: &PlanarGraph) -> Result<CompletedGraph, PipelineError> {
    let arcs = find_boundary_arcs(h)?;
    let cg = four_complete(h, &arcs)?;
    Ok(add_ns_edge(&cg)?)
}

fn stage(report: &mut VerifyReport, name: &str, r: ValidationReport) -> Result<(), PipelineError> {
    let failure = r
        .first_failure()
        .map(|f| format!("{name}: {}: {}", f.name, f.detail));
    report.add_stage(name, r);
    match failure {
        None => Ok(()),
        Some(m) => Err(PipelineError::Check(m)),
    }
}

/// Run the whole construction on `g`.
pub fn run_pipeline(g: &PlanarGraph, cfg: &PipelineConfig) -> Result<PipelineRun, PipelineError> {
    let ptg = validate_ptg(g);
    if let Some(f) = ptg.first_failure() {
        return Err(PipelineError::NotTriangulated(format!(
            "{}: {}",
            f.name, f.detail
        )));
    }
    match cfg.shape {
        Shape::L => run_sites(&find_kl(g), cfg, |site| run_l(g, cfg, ptg.clone(), site)),
        Shape::T => run_sites(&find_kt(g), cfg, |site| run_t(g, ptg.clone(), site)),
    }
}

/// Sites tried in automatic mode before giving up.
pub const MAX_SITE_ATTEMPTS: usize = 32;

fn run_sites<S: Copy>(
    sites: &[S],
    cfg: &PipelineConfig,
    run: impl Fn(S) -> Result<PipelineRun, PipelineError>,
) -> Result<PipelineRun, PipelineError> {
    if sites.is_empty() {
        return Err(PipelineError::NoSite(cfg.shape));
    }
    if let Some(index) = cfg.site {
        let site = sites
            .get(index)
            .copied()
            .ok_or(PipelineError::SiteOutOfRange {
                index,
                count: sites.len(),
            })?;
        return run(site).map(|r| PipelineRun {
            site_index: index,
            ..r
        });
    }
    let mut first = None;
    for (index, &site) in sites.iter().take(MAX_SITE_ATTEMPTS).enumerate() {
        let r = run(site).map(|r| PipelineRun {
            site_index: index,
            ..r
        });
        if matches!(&r, Ok(run) if run.report.verdict()) {
            return r;
        }
        first.get_or_insert(r);
    }
    first.unwrap()
}

fn run_l(
    g: &PlanarGraph,
    cfg: &PipelineConfig,
    ptg: ValidationReport,
    site: SiteL,
) -> Result<PipelineRun, PipelineError> {
    let mut report = VerifyReport::default();
    report.add_stage("input", ptg);
    let protect = [site.triangle()];
    let s = select_removal_edges(g, &protect)?;
    let (h, removal) = eliminate_complex_triangles(g, &s, &protect)?;
    let mut site = site;
    if let Some(c1) = outer_apex(&h, &site) {
        site.c1 = c1;
    }
    let (h, site) = modify_kl(&h, &site)?;
    let keep = [site.triangle()];
    let needed = [(site.a, site.c1), (site.b, site.c1)];
    let avoid = [site.a, site.b, site.c, site.d, site.c1];
    let (h, opened) = open_outer_face(&h, &keep, &needed, &avoid)?;
    let cg = complete(&h)?;
    let (ord, category) = prioritized_order(&cg, &site)?;
    stage(&mut report, "ordering", validate_ordering(&cg, &ord))?;
    let rel = build_rel(&cg, &ord, cfg.free_basic)?;
    let (rel, selector) = adjust_rel_for_l(&rel, &site)?;
    stage(&mut report, "rel", validate_rel(&rel))?;
    let dual = rectangular_dual(&rel)?;
    let inner = strip_frame(&dual, &rel.cg.dirs)?;
    let plan = merge_rooms(
        &inner,
        &enodes_of(&removal, opened),
        &ShapeMerge::L {
            site,
            m: selector.m,
        },
    )?;
    let check = check_plan_against_graph(&plan, g, plan.designated, Some(ShapeClass::L));
    report.stages.extend(check.stages);
    report.missing = check.missing;
    report.extra = check.extra;
    report.shape_table = check.shape_table;
    Ok(PipelineRun {
        shape: Shape::L,
        site_index: 0,
        site: Site::L(site),
        removal,
        opened,
        completed: cg,
        ordering: ord,
        category: Some(category),
        rel,
        selector: Some(selector),
        dual,
        plan,
        report,
    })
}

fn run_t(
    g: &PlanarGraph,
    ptg: ValidationReport,
    site: SiteT,
) -> Result<PipelineRun, PipelineError> {
    let mut report = VerifyReport::default();
    report.add_stage("input", ptg);
    let protect = site.triangles();
    let s = select_removal_edges(g, &protect)?;
    let (h, removal) = eliminate_complex_triangles(g, &s, &protect)?;
    let (h, site) = modify_kt(&h, &site)?;
    let keep = site.triangles();
    let avoid = [site.a, site.b, site.c, site.d, site.e, site.f];
    let (h, opened) = open_outer_face(&h, &keep, &[], &avoid)?;
    let cg = complete(&h)?;
    let ord = canonical_order(&cg)?;
    stage(&mut report, "ordering", validate_ordering(&cg, &ord))?;
    let rel = rel_for_t(&cg, &ord)?;
    stage(&mut report, "rel", validate_rel(&rel))?;
    let dual = rectangular_dual(&rel)?;
    let inner = strip_frame(&dual, &rel.cg.dirs)?;
    let plan = merge_rooms(
        &inner,
        &enodes_of(&removal, opened),
        &ShapeMerge::T { site },
    )?;
    let check = check_plan_against_graph(&plan, g, plan.designated, Some(ShapeClass::T));
    report.stages.extend(check.stages);
    report.missing = check.missing;
    report.extra = check.extra;
    report.shape_table = check.shape_table;
    Ok(PipelineRun {
        shape: Shape::T,
        site_index: 0,
        site: Site::T(site),
        removal,
        opened,
        completed: cg,
        ordering: ord,
        category: None,
        rel,
        selector: None,
        dual,
        plan,
        report,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::*;

    #[test]
    fn g5_gives_an_l() {
        let run = run_pipeline(&g5(), &PipelineConfig::new(Shape::L)).unwrap();
        assert!(run.report.verdict(), "{:?}", run.report.first_failure());
        assert_eq!(run.plan.modules.len(), 5);
        let d = run.designated().unwrap();
        assert!([1, 4].contains(&d));
        assert_eq!(run.plan.shape_of(d), Some(ShapeClass::L));
        assert!(run.category.is_some());
    }

    #[test]
    fn g6_gives_a_t() {
        let run = run_pipeline(&g6(), &PipelineConfig::new(Shape::T)).unwrap();
        assert!(run.report.verdict(), "{:?}", run.report.first_failure());
        assert_eq!(run.plan.modules.len(), 6);
        let d = run.designated().unwrap();
        assert!([2, 4].contains(&d));
        assert_eq!(run.plan.shape_of(d), Some(ShapeClass::T));
    }

    #[test]
    fn g6_gives_an_l_too() {
        let run = run_pipeline(&g6(), &PipelineConfig::new(Shape::L)).unwrap();
        assert!(run.report.verdict(), "{:?}", run.report.first_failure());
    }

    #[test]
    fn oct_has_no_site() {
        for shape in [Shape::L, Shape::T] {
            assert_eq!(
                run_pipeline(&oct(), &PipelineConfig::new(shape)).unwrap_err(),
                PipelineError::NoSite(shape)
            );
        }
    }
}
