//! Command-line interface: argument types, commands and exit codes.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use log::{debug, info};
use orthoplan_core::graph::GraphError;
use orthoplan_core::layout::ShapeClass;
use orthoplan_core::pipeline::{run_pipeline, PipelineConfig, PipelineError, PipelineRun, Shape};
use orthoplan_core::rel::Label;
use orthoplan_core::triangles::{
    find_kl, find_kt, find_separating_triangles, select_removal_edges,
};
use orthoplan_core::verify::check_plan_against_graph;
use orthoplan_core::PlanarGraph;
use rayon::prelude::*;

use crate::gen::{generate, GenError, GenSpec};
use crate::io::{
    read_graph, rel_entries, to_json, AnalysisFile, FormatError, GraphFile, OrderingFile, PlanFile,
    ReportFile,
};
use crate::manifest::{label_name, parse_label, parse_shape, Outputs, RunManifest};
use crate::probe::{scaling_probe, ProbeError};
use crate::svg::render_svg;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Format { path: PathBuf, source: FormatError },
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Pipeline {
        path: PathBuf,
        source: PipelineError,
    },
    #[error("{path}: internal check failed, report written to {report}")]
    Internal { path: PathBuf, report: PathBuf },
    #[error("verification failed: {0}")]
    VerifyFailed(String),
    #[error(transparent)]
    Gen(#[from] GenError),
    #[error(transparent)]
    Probe(#[from] ProbeError),
}

impl CliError {
    /// 0 ok, 1 verification failed, 2 unreadable input, 3 non-planar,
    /// 4 no site, 5 internal failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::VerifyFailed(_) => 1,
            CliError::Io { .. } | CliError::Usage(_) => 2,
            CliError::Format { source, .. } => match source {
                FormatError::Graph(GraphError::NonPlanar) => 3,
                _ => 2,
            },
            CliError::Pipeline { source, .. } => match source {
                PipelineError::NoSite(_) | PipelineError::SiteOutOfRange { .. } => 4,
                PipelineError::NotTriangulated(_) => 2,
                _ => 5,
            },
            CliError::Gen(GenError::TooSmall { .. }) => 2,
            CliError::Internal { .. } | CliError::Gen(_) | CliError::Probe(_) => 5,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "orthoplan",
    version,
    about = "Orthogonal floor plans with one L- or T-shaped module"
)]
pub struct Cli {
    /// Worker threads for batch commands.
    #[arg(long, global = true, default_value_t = 1)]
    pub jobs: usize,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ShapeArg {
    L,
    T,
}

impl From<ShapeArg> for Shape {
    fn from(s: ShapeArg) -> Shape {
        match s {
            ShapeArg::L => Shape::L,
            ShapeArg::T => Shape::T,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum LabelArg {
    T1,
    T2,
}

impl From<LabelArg> for Label {
    fn from(l: LabelArg) -> Label {
        match l {
            LabelArg::T1 => Label::T1,
            LabelArg::T2 => Label::T2,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List separating triangles and candidate sites.
    Analyze {
        graph: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build a plan with one designated L or T module.
    Plan(PlanArgs),
    /// Check a plan against its graph.
    Verify {
        graph: PathBuf,
        plan: PathBuf,
        #[arg(long, value_enum)]
        shape: Option<ShapeArg>,
        /// Defaults to the designated module recorded in the plan.
        #[arg(long)]
        designated: Option<u32>,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Generate a random instance with a planted site.
    Gen {
        #[arg(long, value_enum)]
        kind: ShapeArg,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Draw a plan file as SVG.
    Render {
        plan: PathBuf,
        /// Graph file supplying module labels.
        #[arg(long)]
        graph: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Time the L pipeline on generated instances.
    Probe {
        #[arg(long, value_delimiter = ',', default_values_t = [5000usize, 10000, 20000])]
        sizes: Vec<usize>,
        #[arg(long, value_delimiter = ',', default_values_t = [1u64, 2, 3, 4, 5])]
        seeds: Vec<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
pub struct PlanArgs {
    /// Graph files; several require --out-dir.
    #[arg(required_unless_present = "replay")]
    pub graphs: Vec<PathBuf>,
    #[arg(long, value_enum, default_value = "l")]
    pub shape: ShapeArg,
    /// Site index; by default sites are tried in order until one verifies.
    #[arg(long)]
    pub site: Option<usize>,
    #[arg(long, value_enum, default_value = "t1")]
    pub free_basic: LabelArg,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub svg: Option<PathBuf>,
    #[arg(long)]
    pub manifest: Option<PathBuf>,
    /// Write <stem>.plan.json, <stem>.svg and <stem>.manifest.json here.
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
    /// Directory for the completed graph, ordering and labeling dumps.
    #[arg(long)]
    pub dump_dir: Option<PathBuf>,
    /// Repeat the run recorded in a manifest.
    #[arg(long, conflicts_with_all = ["graphs", "site", "out_dir"])]
    pub replay: Option<PathBuf>,
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.into(),
        source,
    })
}

fn write(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|source| CliError::Io {
        path: path.into(),
        source,
    })
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    match out {
        Some(p) => write(p, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load_graph(path: &Path) -> Result<PlanarGraph, CliError> {
    read_graph(&read(path)?).map_err(|source| CliError::Format {
        path: path.into(),
        source,
    })
}

pub fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Analyze { graph, out } => analyze(&graph, out.as_deref()),
        Command::Plan(args) => plan(&args, cli.jobs),
        Command::Verify {
            graph,
            plan,
            shape,
            designated,
            report,
        } => verify(
            &graph,
            &plan,
            shape.map(Into::into),
            designated,
            report.as_deref(),
        ),
        Command::Gen { kind, n, seed, out } => {
            let g = generate(&GenSpec {
                kind: kind.into(),
                n,
                seed,
            })?;
            emit(out.as_deref(), &to_json(&GraphFile::from_graph(&g)))
        }
        Command::Render { plan, graph, out } => {
            let file = PlanFile::parse(&read(&plan)?).map_err(|source| CliError::Format {
                path: plan.clone(),
                source,
            })?;
            let p = file
                .to_plan()
                .map_err(|source| CliError::Format { path: plan, source })?;
            let g = graph.as_deref().map(load_graph).transpose()?;
            emit(out.as_deref(), &render_svg(&p, g.as_ref()))
        }
        Command::Probe { sizes, seeds, out } => {
            let rows = scaling_probe(&sizes, &seeds)?;
            for r in &rows {
                info!("n={} median {:.1} ms", r.n, r.median_ms);
            }
            emit(out.as_deref(), &to_json(&rows))
        }
    }
}

fn analyze(path: &Path, out: Option<&Path>) -> Result<(), CliError> {
    let g = load_graph(path)?;
    let tris = find_separating_triangles(&g);
    let kl = find_kl(&g);
    let kt = find_kt(&g);
    let protect = match (kl.first(), kt.first()) {
        (Some(s), _) => Some(vec![s.triangle()]),
        (None, Some(s)) => Some(s.triangles().to_vec()),
        _ => None,
    };
    let removal = protect
        .as_ref()
        .and_then(|p| select_removal_edges(&g, p).ok().map(|r| (p.clone(), r)));
    let report = AnalysisFile::new(
        &g,
        &tris,
        &kl,
        &kt,
        removal.as_ref().map(|(p, r)| (p.as_slice(), r)),
    );
    emit(out, &to_json(&report))
}

struct PlanJob {
    input: PathBuf,
    out: Option<PathBuf>,
    svg: Option<PathBuf>,
    manifest: Option<PathBuf>,
    dump_dir: Option<PathBuf>,
    cfg: PipelineConfig,
}

fn stem(p: &Path) -> String {
    p.file_stem()
        .map_or_else(|| "plan".into(), |s| s.to_string_lossy().into_owned())
}

fn plan(args: &PlanArgs, jobs: usize) -> Result<(), CliError> {
    let mut cfg = PipelineConfig::new(args.shape.into());
    cfg.site = args.site;
    cfg.free_basic = args.free_basic.into();
    let work: Vec<PlanJob> = if let Some(m) = &args.replay {
        let man: RunManifest = serde_json::from_str(&read(m)?).map_err(|e| CliError::Format {
            path: m.clone(),
            source: e.into(),
        })?;
        let shape = parse_shape(&man.shape)
            .ok_or_else(|| CliError::Usage(format!("bad shape {:?}", man.shape)))?;
        let label = parse_label(&man.free_basic)
            .ok_or_else(|| CliError::Usage(format!("bad label {:?}", man.free_basic)))?;
        let mut cfg = PipelineConfig::new(shape);
        cfg.site = Some(man.site);
        cfg.free_basic = label;
        vec![PlanJob {
            input: man.input.into(),
            out: args.out.clone().or(man.outputs.plan.map(Into::into)),
            svg: args.svg.clone().or(man.outputs.svg.map(Into::into)),
            manifest: args.manifest.clone(),
            dump_dir: args.dump_dir.clone(),
            cfg,
        }]
    } else if let Some(dir) = &args.out_dir {
        fs::create_dir_all(dir).map_err(|source| CliError::Io {
            path: dir.clone(),
            source,
        })?;
        args.graphs
            .iter()
            .map(|g| {
                let s = stem(g);
                PlanJob {
                    input: g.clone(),
                    out: Some(dir.join(format!("{s}.plan.json"))),
                    svg: Some(dir.join(format!("{s}.svg"))),
                    manifest: Some(dir.join(format!("{s}.manifest.json"))),
                    dump_dir: args.dump_dir.as_ref().map(|d| d.join(&s)),
                    cfg,
                }
            })
            .collect()
    } else {
        if args.graphs.len() > 1 {
            return Err(CliError::Usage("several graph files need --out-dir".into()));
        }
        vec![PlanJob {
            input: args.graphs[0].clone(),
            out: args.out.clone(),
            svg: args.svg.clone(),
            manifest: args.manifest.clone(),
            dump_dir: args.dump_dir.clone(),
            cfg,
        }]
    };
    let results: Vec<Result<(), CliError>> = if jobs > 1 && work.len() > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .map_err(|e| CliError::Usage(e.to_string()))?;
        pool.install(|| work.par_iter().map(plan_one).collect())
    } else {
        work.iter().map(plan_one).collect()
    };
    // report every failure, return the most severe
    let mut worst: Option<CliError> = None;
    for r in results {
        if let Err(e) = r {
            if work.len() > 1 {
                eprintln!("error: {e}");
            }
            if worst.as_ref().is_none_or(|w| e.exit_code() > w.exit_code()) {
                worst = Some(e);
            }
        }
    }
    worst.map_or(Ok(()), Err)
}

fn failure_report_path(job: &PlanJob) -> PathBuf {
    match &job.out {
        Some(p) => p.with_extension("report.json"),
        None => PathBuf::from(format!("{}.report.json", stem(&job.input))),
    }
}

fn plan_one(job: &PlanJob) -> Result<(), CliError> {
    let g = load_graph(&job.input)?;
    debug!(
        "{}: {} vertices, {} edges",
        job.input.display(),
        g.vertex_count(),
        g.edge_count()
    );
    let start = Instant::now();
    let result = run_pipeline(&g, &job.cfg);
    let elapsed = start.elapsed().as_secs_f64() * 1e3;
    let run = match result {
        Ok(run) => run,
        Err(source) => {
            let err = CliError::Pipeline {
                path: job.input.clone(),
                source,
            };
            if err.exit_code() == 5 {
                let report = failure_report_path(job);
                write(&report, &to_json(&ReportFile::failed(err.to_string())))?;
                return Err(CliError::Internal {
                    path: job.input.clone(),
                    report,
                });
            }
            return Err(err);
        }
    };
    if let Some(dir) = &job.dump_dir {
        dump(dir, &run)?;
    }
    if !run.report.verdict() {
        let report = failure_report_path(job);
        write(
            &report,
            &to_json(&ReportFile::new(&run.report, Some(&run.plan))),
        )?;
        return Err(CliError::Internal {
            path: job.input.clone(),
            report,
        });
    }
    let plan_json = to_json(&PlanFile::from_plan(&run.plan, &g));
    emit(job.out.as_deref(), &plan_json)?;
    if let Some(svg) = &job.svg {
        write(svg, &render_svg(&run.plan, Some(&g)))?;
    }
    if let Some(path) = &job.manifest {
        let outputs = Outputs {
            plan: job.out.as_ref().map(|p| p.display().to_string()),
            svg: job.svg.as_ref().map(|p| p.display().to_string()),
        };
        let man = RunManifest::new(
            &job.input.display().to_string(),
            &run,
            job.cfg.free_basic,
            outputs,
            elapsed,
        );
        write(path, &to_json(&man))?;
    }
    summarize(job, &run, elapsed);
    Ok(())
}

fn summarize(job: &PlanJob, run: &PipelineRun, elapsed: f64) {
    let d = run.designated();
    let mut line = format!(
        "{}: {} plan, site {}, designated {} ({})",
        job.input.display(),
        run.shape,
        run.site_index,
        d.map_or("-".into(), |v| v.to_string()),
        d.and_then(|v| run.plan.shape_of(v))
            .map_or("-", ShapeClass::name),
    );
    if let Some(c) = run.category {
        line += &format!(", category {}", c.name());
    }
    if let Some(s) = &run.selector {
        line += &format!(", m {}", s.m);
    }
    line += &format!(
        ", free basic {}, {elapsed:.1} ms",
        label_name(job.cfg.free_basic)
    );
    if job.out.is_some() {
        println!("{line}");
    } else {
        eprintln!("{line}");
    }
}

fn dump(dir: &Path, run: &PipelineRun) -> Result<(), CliError> {
    fs::create_dir_all(dir).map_err(|source| CliError::Io {
        path: dir.into(),
        source,
    })?;
    write(
        &dir.join("completed.json"),
        &to_json(&GraphFile::from_completed(&run.completed)),
    )?;
    write(
        &dir.join("ordering.json"),
        &to_json(&OrderingFile::from(&run.ordering)),
    )?;
    write(&dir.join("rel.json"), &to_json(&rel_entries(&run.rel)))
}

fn verify(
    graph: &Path,
    plan: &Path,
    shape: Option<Shape>,
    designated: Option<u32>,
    report: Option<&Path>,
) -> Result<(), CliError> {
    let g = load_graph(graph)?;
    let file = PlanFile::parse(&read(plan)?).map_err(|source| CliError::Format {
        path: plan.into(),
        source,
    })?;
    let p = file.to_plan().map_err(|source| CliError::Format {
        path: plan.into(),
        source,
    })?;
    let designated = designated.or(p.designated);
    let r = check_plan_against_graph(&p, &g, designated, shape.map(Shape::class));
    emit(report, &to_json(&ReportFile::new(&r, Some(&p))))?;
    match r.first_failure() {
        None => Ok(()),
        Some(f) => Err(CliError::VerifyFailed(f)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes() {
        let p = PathBuf::from("g.json");
        let pipe = |source| CliError::Pipeline {
            path: p.clone(),
            source,
        };
        assert_eq!(pipe(PipelineError::NoSite(Shape::L)).exit_code(), 4);
        assert_eq!(pipe(PipelineError::Check("x".into())).exit_code(), 5);
        let fmt = |source| CliError::Format {
            path: p.clone(),
            source,
        };
        assert_eq!(
            fmt(FormatError::Graph(GraphError::NonPlanar)).exit_code(),
            3
        );
        assert_eq!(fmt(FormatError::BadKey("x".into())).exit_code(), 2);
        assert_eq!(CliError::VerifyFailed("x".into()).exit_code(), 1);
    }

    #[test]
    fn arguments_parse() {
        Cli::try_parse_from([
            "orthoplan",
            "plan",
            "g.json",
            "--shape",
            "t",
            "--free-basic",
            "t2",
        ])
        .unwrap();
        Cli::try_parse_from([
            "orthoplan",
            "--jobs",
            "4",
            "plan",
            "a.json",
            "b.json",
            "--out-dir",
            "o",
        ])
        .unwrap();
        assert!(Cli::try_parse_from(["orthoplan", "plan"]).is_err());
        assert!(Cli::try_parse_from(["orthoplan", "gen", "--kind", "x", "--n", "9"]).is_err());
    }
}
