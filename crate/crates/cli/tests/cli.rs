use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

const BIN: &str = env!("CARGO_BIN_EXE_memsys-evo");

fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().expect("binary runs")
}

fn run_env(args: &[&str], key: &str, value: &str) -> Output {
    Command::new(BIN).args(args).env(key, value).output().expect("binary runs")
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn ok(o: Output) -> Output {
    assert!(o.status.success(), "failed: {}", stderr(&o));
    o
}

struct Workspace {
    dir: TempDir,
}

impl Workspace {
    fn toy() -> Self {
        let ws = Workspace { dir: TempDir::new().unwrap() };
        ok(run(&["generate", "--toy", "--out", ws.s("in")]));
        ws
    }

    fn synthetic(seed: &str, memories: &str) -> Self {
        let ws = Workspace { dir: TempDir::new().unwrap() };
        ok(run(&[
            "generate", "--seed", seed, "--memories", memories, "--compilers", "3", "--candidates", "20", "--out",
            ws.s("in"),
        ]));
        ws
    }

    fn p(&self, rel: &str) -> PathBuf {
        self.dir.path().join(rel)
    }

    fn s(&self, rel: &str) -> &'static str {
        Box::leak(self.p(rel).to_string_lossy().into_owned().into_boxed_str())
    }

    fn inputs(&self) -> Vec<&'static str> {
        vec!["--catalog", self.s("in/catalog.json"), "--system", self.s("in/system.json")]
    }

    fn cmd(&self, head: &[&'static str], tail: &[&'static str]) -> Vec<&'static str> {
        let mut v = head.to_vec();
        v.extend(self.inputs());
        v.extend_from_slice(tail);
        v
    }
}

fn read(path: impl AsRef<Path>) -> String {
    fs::read_to_string(path.as_ref()).unwrap_or_else(|e| panic!("{}: {e}", path.as_ref().display()))
}

fn json(path: impl AsRef<Path>) -> Value {
    serde_json::from_str(&read(path)).unwrap()
}

#[test]
fn exhaustive_toy_front_has_seven_rows() {
    let ws = Workspace::toy();
    let catalog_before = read(ws.p("in/catalog.json"));
    let o = ok(run(&ws.cmd(&["exhaustive"], &["--out", ws.s("ex")])));
    assert!(stdout(&o).contains("9 combinations"));
    let csv = read(ws.p("ex/front-exhaustive.csv"));
    assert_eq!(csv.lines().count(), 8);
    assert!(csv.starts_with("area,leakage,mem1.compiler,mem1.codes,mem2.compiler,mem2.codes\n"));
    assert!(csv.contains("2.9,2.51,sp-sram,variant=1,dp-sram,variant=1"));
    assert!(!csv.contains("\n3,3,"));

    let manifest = json(ws.p("ex/manifest.json"));
    assert_eq!(manifest["command"], "exhaustive");
    assert_eq!(manifest["settings"]["total_combinations"], "9");
    assert_eq!(read(ws.p("in/catalog.json")), catalog_before);
}

#[test]
fn exhaustive_cap_is_enforced() {
    let ws = Workspace::toy();
    let o = run(&ws.cmd(&["exhaustive"], &["--out", ws.s("ex"), "--cap", "8"]));
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("needs 9 combinations"), "{}", stderr(&o));
    assert!(!ws.p("ex/front-exhaustive.csv").exists());
    ok(run(&ws.cmd(&["exhaustive"], &["--out", ws.s("ex"), "--cap", "10"])));
}

#[test]
fn optimize_rejects_tiny_population() {
    let ws = Workspace::toy();
    let o = run(&ws.cmd(&["optimize"], &["--out", ws.s("opt"), "--pop", "3"]));
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("population size must be at least 4"), "{}", stderr(&o));
    let o = run(&ws.cmd(&["optimize"], &["--out", ws.s("opt"), "--repeats", "0"]));
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn optimize_repetitions_use_consecutive_seeds() {
    let ws = Workspace::toy();
    let o = ok(run(&ws.cmd(&["optimize"], &["--out", ws.s("opt"), "--repeats", "2", "--seed", "7", "--gens", "5"])));
    assert!(stdout(&o).contains("seed 7:") && stdout(&o).contains("seed 8:"));
    for seed in [7, 8] {
        assert_eq!(json(ws.p(&format!("opt/front-{seed}.json")))["seed"], seed);
        let history = read(ws.p(&format!("opt/history-{seed}.csv")));
        assert_eq!(history.lines().next(), Some("generation,member,area,leakage"));
        assert_eq!(history.lines().count(), 1 + 6 * 20);
    }
    assert!(!ws.p("opt/front-9.json").exists());
    let manifest = json(ws.p("opt/manifest.json"));
    assert_eq!(manifest["settings"]["seeds"], serde_json::json!([7, 8]));
    assert_eq!(manifest["settings"]["de"]["pop_size"], 20);
    assert_eq!(manifest["settings"]["de"]["cr"], 0.9);
    assert_eq!(manifest["settings"]["de"]["f"], 0.8);
    assert_eq!(manifest["outputs"].as_array().unwrap().len(), 6);
}

#[test]
fn optimize_defaults_to_three_repetitions() {
    let ws = Workspace::toy();
    ok(run(&ws.cmd(&["optimize"], &["--out", ws.s("opt")])));
    let manifest = json(ws.p("opt/manifest.json"));
    assert_eq!(manifest["settings"]["seeds"], serde_json::json!([0, 1, 2]));
    assert_eq!(manifest["settings"]["de"]["generations"], 50);
}

#[test]
fn compare_reports_eight_statistics() {
    let ws = Workspace::toy();
    ok(run(&ws.cmd(&["exhaustive"], &["--out", ws.s("ex")])));
    let base = ws.s("ex/front-exhaustive.json");
    let o = ok(run(&["compare", base, base, base, "--baseline", base, "--out", ws.s("cmp")]));
    let md = stdout(&o);
    assert!(md.contains("over 3 repetition(s)"));
    let csv = read(ws.p("cmp/deviation.csv"));
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines.len(), 9);
    assert_eq!(lines[0].split(',').count(), 5);
    for line in &lines[1..] {
        for cell in line.split(',').skip(1) {
            assert_eq!(cell.parse::<f64>().unwrap(), 0.0, "{line}");
        }
    }
    assert_eq!(read(ws.p("cmp/deviation.md")), md);
}

#[test]
fn compare_names_missing_files() {
    let ws = Workspace::toy();
    ok(run(&ws.cmd(&["exhaustive"], &["--out", ws.s("ex")])));
    let missing = ws.s("opt/front-42.json");
    let o = run(&["compare", missing, "--baseline", ws.s("ex/front-exhaustive.json")]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains(missing), "{}", stderr(&o));
}

#[test]
fn sweep_runs_the_cross_product() {
    let ws = Workspace::toy();
    let tail = ["--out", ws.s("sw"), "--f", "0.4,0.8", "--cr", "0.5,0.9", "--repeats", "1", "--gens", "4"];
    ok(run(&ws.cmd(&["sweep"], &tail)));
    let csv = read(ws.p("sw/sweep.csv"));
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "f,cr,pop,gens,repeats,area_min,area_mean,area_max,leakage_min,leakage_mean,leakage_max");
    let keys: Vec<String> = lines[1..].iter().map(|l| l.split(',').take(2).collect::<Vec<_>>().join(",")).collect();
    assert_eq!(keys, ["0.4,0.5", "0.4,0.9", "0.8,0.5", "0.8,0.9"]);

    let tail = ["--out", ws.s("sw2"), "--pop", "10,20,50", "--gens", "20,50", "--repeats", "1"];
    ok(run(&ws.cmd(&["sweep"], &tail)));
    assert_eq!(read(ws.p("sw2/sweep.csv")).lines().count(), 7);
}

#[test]
fn sweep_rejects_empty_grids() {
    let ws = Workspace::toy();
    let o = run(&ws.cmd(&["sweep"], &["--out", ws.s("sw"), "--f", ""]));
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("grid for --f is empty"));
    let o = run(&ws.cmd(&["sweep"], &["--out", ws.s("sw"), "--pop", "20,3"]));
    assert_eq!(o.status.code(), Some(1));
}

fn coordinates(svg: &str, series: &str) -> Vec<(f64, f64)> {
    let attr = |tag: &str, name: &str| -> f64 {
        let start = tag.find(&format!("{name}=\"")).unwrap() + name.len() + 2;
        let end = start + tag[start..].find('"').unwrap();
        tag[start..end].parse().unwrap()
    };
    svg.lines()
        .filter(|l| l.contains(&format!("data-series=\"{series}\"")))
        .map(|l| (attr(l, "data-x"), attr(l, "data-y")))
        .collect()
}

fn write_front(path: &Path, template: &Value, points: &[Vec<f64>], objectives: &[&str]) {
    let mut front = template.clone();
    let member = front["members"][0].clone();
    front["objectives"] = serde_json::json!(objectives);
    front["members"] = points
        .iter()
        .map(|p| {
            let mut m = member.clone();
            m["objectives"] = serde_json::json!(p);
            m
        })
        .collect();
    fs::write(path, serde_json::to_string(&front).unwrap()).unwrap();
}

#[test]
fn plot_normalizes_to_the_baseline() {
    let ws = Workspace::toy();
    ok(run(&ws.cmd(&["exhaustive"], &["--out", ws.s("ex")])));
    let base = ws.s("ex/front-exhaustive.json");
    ok(run(&["plot", "--baseline", base, "--out", ws.s("plots/base.svg")]));
    let svg = read(ws.p("plots/base.svg"));
    assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"));
    let pts = coordinates(&svg, "baseline");
    assert_eq!(pts.len(), 7);
    assert!(pts.iter().all(|&(x, y)| (0.0..=1.0).contains(&x) && (0.0..=1.0).contains(&y)));
    assert!(pts.iter().any(|&(x, _)| x == 0.0) && pts.iter().any(|&(x, _)| x == 1.0));

    let better = ws.p("better.json");
    write_front(&better, &json(base), &[vec![0.5, 5.0], vec![3.0, 1.0]], &["area", "leakage"]);
    let o = ok(run(&["plot", ws.s("better.json"), "--baseline", base, "--out", ws.s("better.svg")]));
    assert!(stderr(&o).is_empty());
    let svg = read(ws.p("better.svg"));
    let pts = coordinates(&svg, "0");
    assert!(pts[0].0 < 0.0 && pts[1].1 < 0.0, "{pts:?}");
    assert!(svg.contains(">better</text>") && svg.contains(">front-exhaustive</text>"));
}

#[test]
fn plot_projects_extra_objectives_with_a_warning() {
    let ws = Workspace::toy();
    ok(run(&ws.cmd(&["exhaustive"], &["--out", ws.s("ex")])));
    let template = json(ws.p("ex/front-exhaustive.json"));
    write_front(&ws.p("three.json"), &template, &[vec![1.0, 2.0, 3.0], vec![2.0, 1.0, 0.0]], &["a", "b", "c"]);
    let o = ok(run(&["plot", ws.s("three.json"), "--out", ws.s("three.svg")]));
    assert!(stderr(&o).contains("warning"), "{}", stderr(&o));
    assert_eq!(coordinates(&read(ws.p("three.svg")), "0"), [(1.0, 2.0), (2.0, 1.0)]);
    let o = run(&["plot", "--out", ws.s("none.svg")]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn served_surrogate_matches_in_process() {
    let ws = Workspace::synthetic("5", "3");
    let serve = format!("exec:{BIN} estimator-serve --catalog {}", ws.s("in/catalog.json"));
    let serve: &'static str = Box::leak(serve.into_boxed_str());
    let tail = ["--repeats", "1", "--seed", "3", "--gens", "10"];
    let mut a = vec!["--out", ws.s("a")];
    a.extend(tail);
    let mut b = vec!["--out", ws.s("b"), "--backend", serve];
    b.extend(tail);
    ok(run(&ws.cmd(&["optimize"], &a)));
    ok(run(&ws.cmd(&["optimize"], &b)));
    for f in ["front-3.json", "front-3.csv", "history-3.csv"] {
        assert_eq!(read(ws.p(&format!("a/{f}"))), read(ws.p(&format!("b/{f}"))), "{f}");
    }
    ok(run(&ws.cmd(&["exhaustive"], &["--out", ws.s("c")])));
    ok(run(&ws.cmd(&["exhaustive"], &["--out", ws.s("d"), "--backend", serve])));
    assert_eq!(read(ws.p("c/front-exhaustive.json")), read(ws.p("d/front-exhaustive.json")));
}

#[test]
fn backend_failures_exit_with_two() {
    let ws = Workspace::toy();
    let o = run(&ws.cmd(&["optimize"], &["--out", ws.s("opt"), "--backend", "exec:true"]));
    assert_eq!(o.status.code(), Some(2), "{}", stderr(&o));
    assert!(stderr(&o).contains("batch 1"));
    let o = run(&ws.cmd(&["optimize"], &["--out", ws.s("opt"), "--backend", "neural"]));
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn thread_count_does_not_change_outputs() {
    let ws = Workspace::synthetic("9", "4");
    let tail = |out: &'static str| ["--out", out, "--repeats", "1", "--seed", "11", "--gens", "15"];
    ok(run_env(&ws.cmd(&["optimize"], &tail(ws.s("t1"))), "MEMSYS_EVO_THREADS", "1"));
    ok(run_env(&ws.cmd(&["optimize"], &tail(ws.s("t4"))), "MEMSYS_EVO_THREADS", "4"));
    for f in ["front-11.json", "front-11.csv", "history-11.csv"] {
        assert_eq!(read(ws.p(&format!("t1/{f}"))), read(ws.p(&format!("t4/{f}"))), "{f}");
    }
    let o = run_env(&ws.cmd(&["optimize"], &tail(ws.s("t0"))), "MEMSYS_EVO_THREADS", "zero");
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn usage_errors_exit_with_one() {
    assert_eq!(run(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(run(&["optimize", "--pop", "x"]).status.code(), Some(1));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
    let o = run(&["optimize", "--catalog", "/nonexistent/c.json", "--system", "/nonexistent/s.json", "--out", "/tmp/x"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("/nonexistent/c.json"));
}
