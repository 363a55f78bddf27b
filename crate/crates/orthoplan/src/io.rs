//! JSON file formats: graphs, plans, verification reports and analyses.

use std::collections::BTreeMap;

use orthoplan_core::completion::CompletedGraph;
use orthoplan_core::graph::GraphError;
use orthoplan_core::layout::{Merge, OrthoPlan, Rect, RectilinearPolygon, ShapeClass};
use orthoplan_core::ordering::CanonicalOrdering;
use orthoplan_core::rel::Rel;
use orthoplan_core::triangles::{RemovalPlan, SiteL, SiteT, Triangle};
use orthoplan_core::verify::{overlap_witness, VerifyReport};
use orthoplan_core::{build_graph, PlanarGraph, ValidationReport, VertexId};
use serde::{Deserialize, Serialize};

#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("bad vertex key {0:?}")]
    BadKey(String),
    #[error("vertex {0} is listed but has no edges")]
    Isolated(VertexId),
    #[error("unknown shape {0:?}")]
    BadShape(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphFile {
    #[serde(default)]
    pub vertices: Vec<VertexId>,
    pub edges: Vec<[VertexId; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rotation: Option<BTreeMap<String, Vec<VertexId>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub outer_face: Option<Vec<VertexId>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<BTreeMap<String, String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub directions: Option<BTreeMap<String, VertexId>>,
}

fn vertex_key(k: &str) -> Result<VertexId, FormatError> {
    k.parse().map_err(|_| FormatError::BadKey(k.into()))
}

impl GraphFile {
    pub fn parse(text: &str) -> Result<Self, FormatError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_graph(&self) -> Result<PlanarGraph, FormatError> {
        let edges: Vec<(VertexId, VertexId)> = self.edges.iter().map(|&[u, v]| (u, v)).collect();
        for &v in &self.vertices {
            if !edges.iter().any(|&(a, b)| a == v || b == v) {
                return Err(FormatError::Isolated(v));
            }
        }
        let rotation = match &self.rotation {
            None => None,
            Some(r) => Some(
                r.iter()
                    .map(|(k, list)| Ok((vertex_key(k)?, list.clone())))
                    .collect::<Result<BTreeMap<_, _>, FormatError>>()?,
            ),
        };
        let mut g = build_graph(&edges, rotation.as_ref(), self.outer_face.as_deref())?;
        if let Some(labels) = &self.labels {
            for (k, name) in labels {
                g.set_label(vertex_key(k)?, name.clone());
            }
        }
        Ok(g)
    }

    /// Full description of `g`, rotation and outer face included.
    pub fn from_graph(g: &PlanarGraph) -> Self {
        let index = g.index();
        GraphFile {
            vertices: g.vertices().collect(),
            edges: g.edges().into_iter().map(|(u, v)| [u, v]).collect(),
            rotation: Some(
                g.vertices()
                    .map(|v| (v.to_string(), index.rotation(v).to_vec()))
                    .collect(),
            ),
            outer_face: Some(g.outer_face().to_vec()),
            labels: (!g.labels().is_empty()).then(|| {
                g.labels()
                    .iter()
                    .map(|(v, s)| (v.to_string(), s.clone()))
                    .collect()
            }),
            directions: None,
        }
    }

    pub fn from_completed(cg: &CompletedGraph) -> Self {
        let mut f = Self::from_graph(&cg.graph);
        let d = cg.dirs;
        f.directions = Some(
            [("N", d.n), ("E", d.e), ("S", d.s), ("W", d.w)]
                .into_iter()
                .map(|(k, v)| (k.to_string(), v))
                .collect(),
        );
        f
    }
}

pub fn read_graph(text: &str) -> Result<PlanarGraph, FormatError> {
    GraphFile::parse(text)?.to_graph()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModuleEntry {
    pub id: VertexId,
    pub label: String,
    pub polygon: Vec<[i64; 2]>,
    pub shape: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MergeEntry {
    pub from: VertexId,
    pub into: VertexId,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlanFile {
    pub bbox: [i64; 4],
    pub modules: Vec<ModuleEntry>,
    #[serde(default)]
    pub designated: Option<VertexId>,
    #[serde(default)]
    pub merges: Vec<MergeEntry>,
}

impl PlanFile {
    pub fn from_plan(plan: &OrthoPlan, g: &PlanarGraph) -> Self {
        let b = plan.bbox;
        PlanFile {
            bbox: [b.x1, b.y1, b.x2, b.y2],
            modules: plan
                .modules
                .iter()
                .map(|(&id, p)| ModuleEntry {
                    id,
                    label: g.label(id).map_or_else(|| id.to_string(), str::to_string),
                    polygon: p.points().iter().map(|&(x, y)| [x, y]).collect(),
                    shape: plan
                        .shape_of(id)
                        .unwrap_or(ShapeClass::Other)
                        .name()
                        .to_string(),
                })
                .collect(),
            designated: plan.designated,
            merges: plan
                .merges
                .iter()
                .map(|m| MergeEntry {
                    from: m.from,
                    into: m.into,
                })
                .collect(),
        }
    }

    pub fn parse(text: &str) -> Result<Self, FormatError> {
        Ok(serde_json::from_str(text)?)
    }

    /// Polygons are taken as written; checking them is left to the verifier.
    pub fn to_plan(&self) -> Result<OrthoPlan, FormatError> {
        let [x1, y1, x2, y2] = self.bbox;
        let mut modules = BTreeMap::new();
        let mut shapes = BTreeMap::new();
        for m in &self.modules {
            let pts = m.polygon.iter().map(|&[x, y]| (x, y)).collect();
            modules.insert(m.id, RectilinearPolygon::from_points_unchecked(pts));
            let shape = ShapeClass::parse(&m.shape)
                .ok_or_else(|| FormatError::BadShape(m.shape.clone()))?;
            shapes.insert(m.id, shape);
        }
        Ok(OrthoPlan {
            bbox: Rect::new(x1, y1, x2, y2),
            modules,
            shapes,
            merges: self
                .merges
                .iter()
                .map(|m| Merge {
                    from: m.from,
                    into: m.into,
                })
                .collect(),
            designated: self.designated,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckEntry {
    pub name: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "String::is_empty")]
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StageEntry {
    pub verdict: bool,
    pub checks: Vec<CheckEntry>,
}

impl From<&ValidationReport> for StageEntry {
    fn from(r: &ValidationReport) -> Self {
        StageEntry {
            verdict: r.verdict(),
            checks: r
                .checks
                .iter()
                .map(|c| CheckEntry {
                    name: c.name.clone(),
                    passed: c.passed,
                    detail: c.detail.clone(),
                })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OverlapEntry {
    pub modules: [VertexId; 2],
    pub rect: [i64; 4],
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AdjacencyDiff {
    pub missing: Vec<[VertexId; 2]>,
    pub extra: Vec<[VertexId; 2]>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReportFile {
    pub verdict: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub stages: BTreeMap<String, StageEntry>,
    pub adjacency_diff: AdjacencyDiff,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub overlap: Option<OverlapEntry>,
    pub shape_table: BTreeMap<String, String>,
}

fn pairs(es: &[(VertexId, VertexId)]) -> Vec<[VertexId; 2]> {
    es.iter().map(|&(u, v)| [u, v]).collect()
}

impl ReportFile {
    pub fn new(report: &VerifyReport, plan: Option<&OrthoPlan>) -> Self {
        ReportFile {
            verdict: report.verdict(),
            error: None,
            stages: report
                .stages
                .iter()
                .map(|(k, r)| (k.clone(), r.into()))
                .collect(),
            adjacency_diff: AdjacencyDiff {
                missing: pairs(&report.missing),
                extra: pairs(&report.extra),
            },
            overlap: plan
                .and_then(overlap_witness)
                .map(|(u, v, r)| OverlapEntry {
                    modules: [u, v],
                    rect: [r.x1, r.y1, r.x2, r.y2],
                }),
            shape_table: report
                .shape_table
                .iter()
                .map(|(v, s)| (v.to_string(), s.name().to_string()))
                .collect(),
        }
    }

    /// Report for a run that stopped with an error.
    pub fn failed(error: String) -> Self {
        let mut r = Self::new(&VerifyReport::default(), None);
        r.verdict = false;
        r.error = Some(error);
        r
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SiteLEntry {
    pub a: VertexId,
    pub b: VertexId,
    pub c: VertexId,
    pub d: VertexId,
    pub c1: VertexId,
}

impl From<&SiteL> for SiteLEntry {
    fn from(s: &SiteL) -> Self {
        SiteLEntry {
            a: s.a,
            b: s.b,
            c: s.c,
            d: s.d,
            c1: s.c1,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SiteTEntry {
    pub a: VertexId,
    pub b: VertexId,
    pub c: VertexId,
    pub d: VertexId,
    pub e: VertexId,
    pub f: VertexId,
}

impl From<&SiteT> for SiteTEntry {
    fn from(s: &SiteT) -> Self {
        SiteTEntry {
            a: s.a,
            b: s.b,
            c: s.c,
            d: s.d,
            e: s.e,
            f: s.f,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RemovalEntry {
    pub protected: Vec<[VertexId; 3]>,
    pub edges: Vec<[VertexId; 2]>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AnalysisFile {
    pub vertices: usize,
    pub edges: usize,
    pub separating_triangles: Vec<[VertexId; 3]>,
    pub sites_l: Vec<SiteLEntry>,
    pub sites_t: Vec<SiteTEntry>,
    /// Removal edges for the first L site, else the first T site, else none.
    pub removal: Option<RemovalEntry>,
}

impl AnalysisFile {
    pub fn new(
        g: &PlanarGraph,
        triangles: &[Triangle],
        sites_l: &[SiteL],
        sites_t: &[SiteT],
        removal: Option<(&[Triangle], &RemovalPlan)>,
    ) -> Self {
        AnalysisFile {
            vertices: g.vertex_count(),
            edges: g.edge_count(),
            separating_triangles: triangles.iter().map(|t| t.vertices).collect(),
            sites_l: sites_l.iter().map(Into::into).collect(),
            sites_t: sites_t.iter().map(Into::into).collect(),
            removal: removal.map(|(p, r)| RemovalEntry {
                protected: p.iter().map(|t| t.vertices).collect(),
                edges: pairs(&r.s),
            }),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrderingFile {
    pub rank: BTreeMap<String, u32>,
    pub category: Option<String>,
    pub trace: Vec<VertexId>,
}

impl From<&CanonicalOrdering> for OrderingFile {
    fn from(o: &CanonicalOrdering) -> Self {
        OrderingFile {
            rank: o
                .order
                .iter()
                .enumerate()
                .map(|(i, v)| (v.to_string(), i as u32 + 1))
                .collect(),
            category: o.category.map(|c| c.name().to_string()),
            trace: o.trace.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RelEdgeEntry {
    pub tail: VertexId,
    pub head: VertexId,
    pub label: String,
}

pub fn rel_entries(rel: &Rel) -> Vec<RelEdgeEntry> {
    rel.edges()
        .into_iter()
        .map(|e| RelEdgeEntry {
            tail: e.tail,
            head: e.head,
            label: e.label.map_or("none", |l| l.name()).to_string(),
        })
        .collect()
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    const G5: &str = r#"{"vertices":[1,2,3,4,5],
        "edges":[[1,2],[2,3],[3,1],[4,1],[4,2],[4,3],[5,1],[5,2],[5,4]],
        "outer_face":[1,2,3],"labels":{"1":"hall"}}"#;

    #[test]
    fn graph_file_reads_g5() {
        let g = read_graph(G5).unwrap();
        assert_eq!(g.vertex_count(), 5);
        assert_eq!(g.edge_count(), 9);
        assert_eq!(g.label(1), Some("hall"));
        let again = GraphFile::from_graph(&g).to_graph().unwrap();
        assert_eq!(again, g);
    }

    #[test]
    fn isolated_vertex_is_rejected() {
        let text = r#"{"vertices":[1,2,3,9],"edges":[[1,2],[2,3],[3,1]]}"#;
        assert!(matches!(read_graph(text), Err(FormatError::Isolated(9))));
    }

    #[test]
    fn bad_rotation_key() {
        let text = r#"{"edges":[[1,2],[2,3],[3,1]],"rotation":{"x":[2,3]}}"#;
        assert!(matches!(read_graph(text), Err(FormatError::BadKey(_))));
    }

    #[test]
    fn malformed_json() {
        assert!(matches!(
            read_graph("{\"edges\": [[1,2]"),
            Err(FormatError::Json(_))
        ));
    }

    #[test]
    fn plan_file_keeps_polygons() {
        let text = r#"{"bbox":[0,0,2,1],"modules":[
            {"id":1,"label":"a","polygon":[[0,0],[1,0],[1,1],[0,1]],"shape":"Rectangle"},
            {"id":2,"label":"b","polygon":[[1,0],[2,0],[2,1],[1,1]],"shape":"Rectangle"}],
            "designated":null,"merges":[]}"#;
        let plan = PlanFile::parse(text).unwrap().to_plan().unwrap();
        assert_eq!(plan.modules.len(), 2);
        assert_eq!(plan.bbox, Rect::new(0, 0, 2, 1));
        assert_eq!(plan.modules[&2].points()[0], (1, 0));
    }
}
