use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_orthoplan"))
        .args(args)
        .output()
        .unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap()
}

fn tmp(dir: &tempfile::TempDir, name: &str) -> String {
    dir.path().join(name).to_string_lossy().into_owned()
}

fn plan_to(dir: &tempfile::TempDir, graph: &str, shape: &str) -> String {
    let out = tmp(dir, &format!("{shape}.plan.json"));
    let o = run(&["plan", &fixture(graph), "--shape", shape, "--out", &out]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    out
}

#[test]
fn analyze_g5() {
    let o = run(&["analyze", &fixture("g5.json")]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["separating_triangles"], serde_json::json!([[1, 2, 4]]));
    assert!(!v["sites_l"].as_array().unwrap().is_empty());
    assert!(v["sites_t"].as_array().unwrap().is_empty());
}

#[test]
fn analyze_oct_finds_nothing() {
    let v = json(&run(&["analyze", &fixture("oct.json")]));
    assert!(v["separating_triangles"].as_array().unwrap().is_empty());
    assert!(v["sites_l"].as_array().unwrap().is_empty());
    assert!(v["sites_t"].as_array().unwrap().is_empty());
    assert!(v["removal"].is_null());
}

#[test]
fn unreadable_inputs() {
    assert_eq!(code(&run(&["analyze", &fixture("broken.json")])), 2);
    assert_eq!(code(&run(&["analyze", &fixture("k5.json")])), 3);
    assert_eq!(code(&run(&["analyze", "/nonexistent/graph.json"])), 2);
    assert_eq!(code(&run(&["plan", &fixture("k5.json")])), 3);
}

#[test]
fn plan_g5_reports_l() {
    let dir = tempfile::tempdir().unwrap();
    let out = plan_to(&dir, "g5.json", "l");
    let v: Value = serde_json::from_str(&std::fs::read_to_string(out).unwrap()).unwrap();
    let d = v["designated"].as_u64().unwrap();
    assert!([1, 4].contains(&d));
    let modules = v["modules"].as_array().unwrap();
    assert_eq!(modules.len(), 5);
    let m = modules.iter().find(|m| m["id"] == d).unwrap();
    assert_eq!(m["shape"], "L");
    assert_eq!(m["polygon"].as_array().unwrap().len(), 6);
}

#[test]
fn plan_without_out_prints_json() {
    let o = run(&["plan", &fixture("g6.json"), "--shape", "t"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["modules"].as_array().unwrap().len(), 6);
    let stderr = String::from_utf8_lossy(&o.stderr);
    assert!(stderr.contains("designated"), "{stderr}");
}

#[test]
fn plan_uses_labels() {
    let v = json(&run(&["plan", &fixture("g6.json"), "--shape", "t"]));
    let labels: Vec<&str> = v["modules"]
        .as_array()
        .unwrap()
        .iter()
        .map(|m| m["label"].as_str().unwrap())
        .collect();
    assert!(labels.contains(&"kitchen"));
}

#[test]
fn pinned_site_out_of_range() {
    let o = run(&["plan", &fixture("g5.json"), "--site", "9"]);
    assert_eq!(code(&o), 4);
}

#[test]
fn verify_own_plan() {
    let dir = tempfile::tempdir().unwrap();
    let out = plan_to(&dir, "g5.json", "l");
    let o = run(&["verify", &fixture("g5.json"), &out, "--shape", "l"]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["verdict"], true);
}

#[test]
fn verify_against_the_wrong_graph() {
    let dir = tempfile::tempdir().unwrap();
    let out = plan_to(&dir, "g6.json", "t");
    let o = run(&["verify", &fixture("g5.json"), &out]);
    assert_eq!(code(&o), 1);
    let v = json(&o);
    assert_eq!(v["verdict"], false);
    let diff = &v["adjacency_diff"];
    assert!(
        !diff["extra"].as_array().unwrap().is_empty()
            || !diff["missing"].as_array().unwrap().is_empty()
    );
}

#[test]
fn verify_corrupted_polygon() {
    let dir = tempfile::tempdir().unwrap();
    let out = plan_to(&dir, "g5.json", "l");
    let mut v: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    // a bow tie
    v["modules"][2]["polygon"] =
        serde_json::json!([[0, 0], [2, 0], [2, 1], [1, 1], [1, -1], [0, -1]]);
    let bad = tmp(&dir, "bad.plan.json");
    std::fs::write(&bad, v.to_string()).unwrap();
    let o = run(&["verify", &fixture("g5.json"), &bad]);
    assert_eq!(code(&o), 1);
    let text = String::from_utf8_lossy(&o.stdout);
    assert!(text.contains("touches itself"), "{text}");
}

#[test]
fn verify_shifted_module_names_the_overlap() {
    let dir = tempfile::tempdir().unwrap();
    let out = plan_to(&dir, "g5.json", "l");
    let mut v: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    for p in v["modules"][3]["polygon"].as_array_mut().unwrap() {
        p[0] = (p[0].as_i64().unwrap() - 1).into();
    }
    let bad = tmp(&dir, "shifted.plan.json");
    std::fs::write(&bad, v.to_string()).unwrap();
    let o = run(&["verify", &fixture("g5.json"), &bad]);
    assert_eq!(code(&o), 1);
    let r = json(&o);
    assert_eq!(r["overlap"]["modules"].as_array().unwrap().len(), 2);
}

#[test]
fn gen_small_instances() {
    let o = run(&["gen", "--kind", "l", "--n", "5", "--seed", "0"]);
    assert_eq!(code(&o), 0);
    let dir = tempfile::tempdir().unwrap();
    let path = tmp(&dir, "g.json");
    std::fs::write(&path, &o.stdout).unwrap();
    let a = json(&run(&["analyze", &path]));
    assert_eq!(a["vertices"], 5);
    assert_eq!(a["edges"], 9);
    assert_eq!(a["sites_l"].as_array().unwrap().len(), 2);
    assert_eq!(code(&run(&["gen", "--kind", "l", "--n", "4"])), 2);
    assert_eq!(code(&run(&["gen", "--kind", "t", "--n", "5"])), 2);
}

#[test]
fn render_counts_paths() {
    let dir = tempfile::tempdir().unwrap();
    let out = plan_to(&dir, "g5.json", "l");
    let o = run(&["render", &out]);
    assert_eq!(code(&o), 0);
    let svg = String::from_utf8_lossy(&o.stdout);
    assert_eq!(svg.matches("<path").count(), 5);

    let t = plan_to(&dir, "g6.json", "t");
    let svg = String::from_utf8_lossy(&run(&["render", &t, "--graph", &fixture("g6.json")]).stdout)
        .into_owned();
    let line = svg.lines().find(|l| l.contains("designated")).unwrap();
    let d = line.split(" d=\"").nth(1).unwrap();
    assert_eq!(d.matches(['M', 'L']).count(), 8);
    assert!(svg.contains(">kitchen<"));
}

#[test]
fn batch_with_jobs() {
    let dir = tempfile::tempdir().unwrap();
    let outdir: PathBuf = dir.path().join("out");
    let o = run(&[
        "--jobs",
        "2",
        "plan",
        &fixture("g5.json"),
        &fixture("g6.json"),
        &fixture("oct.json"),
        "--out-dir",
        outdir.to_str().unwrap(),
    ]);
    // the octahedron has no site; the other two succeed
    assert_eq!(code(&o), 4);
    for f in ["g5.plan.json", "g5.svg", "g5.manifest.json", "g6.plan.json"] {
        assert!(outdir.join(f).exists(), "{f}");
    }
    assert!(!outdir.join("oct.plan.json").exists());
}

#[test]
fn several_inputs_need_an_out_dir() {
    let o = run(&["plan", &fixture("g5.json"), &fixture("g6.json")]);
    assert_eq!(code(&o), 2);
}

#[test]
fn dump_dir_holds_intermediates() {
    let dir = tempfile::tempdir().unwrap();
    let dump = tmp(&dir, "dump");
    let o = run(&["plan", &fixture("g5.json"), "--dump-dir", &dump]);
    assert_eq!(code(&o), 0);
    let rel: Value =
        serde_json::from_str(&std::fs::read_to_string(Path::new(&dump).join("rel.json")).unwrap())
            .unwrap();
    assert!(rel.as_array().unwrap().iter().any(|e| e["label"] == "T1"));
    let ord: Value = serde_json::from_str(
        &std::fs::read_to_string(Path::new(&dump).join("ordering.json")).unwrap(),
    )
    .unwrap();
    assert!(ord["category"].is_string());
    let cg: Value = serde_json::from_str(
        &std::fs::read_to_string(Path::new(&dump).join("completed.json")).unwrap(),
    )
    .unwrap();
    assert_eq!(cg["directions"].as_object().unwrap().len(), 4);
}

#[test]
fn log_level_from_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_orthoplan"))
        .args(["plan", &fixture("g5.json")])
        .env("ORTHOPLAN_LOG", "debug")
        .output()
        .unwrap();
    assert_eq!(code(&o), 0);
    assert!(String::from_utf8_lossy(&o.stderr).contains("DEBUG"));
}
