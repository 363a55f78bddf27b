//! Run manifests: everything needed to repeat a `plan` run.

use std::collections::BTreeMap;

use orthoplan_core::pipeline::{PipelineRun, Shape, Site};
use orthoplan_core::rel::Label;
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub input: String,
    pub shape: String,
    pub free_basic: String,
    /// Generator seed, when the input came from `gen`.
    #[serde(default)]
    pub seed: Option<u64>,
    /// Index of the site actually used; replays pin it.
    pub site: usize,
    pub site_roles: BTreeMap<String, u32>,
    pub category: Option<String>,
    pub m: Option<u8>,
    pub case: Option<u8>,
    pub flips: Vec<[u32; 2]>,
    pub outputs: Outputs,
    pub timings_ms: BTreeMap<String, f64>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Outputs {
    pub plan: Option<String>,
    pub svg: Option<String>,
}

pub fn shape_name(s: Shape) -> &'static str {
    match s {
        Shape::L => "l",
        Shape::T => "t",
    }
}

pub fn parse_shape(s: &str) -> Option<Shape> {
    match s.to_ascii_lowercase().as_str() {
        "l" => Some(Shape::L),
        "t" => Some(Shape::T),
        _ => None,
    }
}

pub fn label_name(l: Label) -> &'static str {
    match l {
        Label::T1 => "t1",
        Label::T2 => "t2",
    }
}

pub fn parse_label(s: &str) -> Option<Label> {
    match s.to_ascii_lowercase().as_str() {
        "t1" => Some(Label::T1),
        "t2" => Some(Label::T2),
        _ => None,
    }
}

fn roles(site: &Site) -> BTreeMap<String, u32> {
    let mut r = BTreeMap::new();
    let mut put = |k: &str, v: u32| {
        r.insert(k.to_string(), v);
    };
    match site {
        Site::L(s) => {
            put("a", s.a);
            put("b", s.b);
            put("c", s.c);
            put("d", s.d);
            put("c1", s.c1);
            if let Some(u) = s.u {
                put("u", u);
            }
        }
        Site::T(s) => {
            put("a", s.a);
            put("b", s.b);
            put("c", s.c);
            put("d", s.d);
            put("e", s.e);
            put("f", s.f);
            if let Some(u) = s.u {
                put("u", u);
            }
        }
    }
    r
}

impl RunManifest {
    pub fn new(
        input: &str,
        run: &PipelineRun,
        free_basic: Label,
        outputs: Outputs,
        elapsed_ms: f64,
    ) -> Self {
        let sel = run.selector.as_ref();
        RunManifest {
            command: "plan".into(),
            input: input.into(),
            shape: shape_name(run.shape).into(),
            free_basic: label_name(free_basic).into(),
            seed: None,
            site: run.site_index,
            site_roles: roles(&run.site),
            category: run.category.map(|c| c.name().to_string()),
            m: sel.map(|s| s.m),
            case: sel.map(|s| s.case),
            flips: sel.map_or_else(Vec::new, |s| {
                s.flips_applied.iter().map(|&(x, y)| [x, y]).collect()
            }),
            outputs,
            timings_ms: BTreeMap::from([("pipeline".to_string(), elapsed_ms)]),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for s in [Shape::L, Shape::T] {
            assert_eq!(parse_shape(shape_name(s)), Some(s));
        }
        for l in [Label::T1, Label::T2] {
            assert_eq!(parse_label(label_name(l)), Some(l));
        }
        assert_eq!(parse_shape("L"), Some(Shape::L));
        assert_eq!(parse_label("t3"), None);
    }
}
