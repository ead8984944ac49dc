mod common;

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use common::SEVEN_MINIMA;
use rigor_persist::PersistenceDiagram;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rigor-persist")).args(args).output().unwrap()
}

fn run_in(dir: &Path, args: &[&str]) -> Output {
    let mut all: Vec<&str> = args.to_vec();
    all.extend(["--out", dir.to_str().unwrap()]);
    run(&all)
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).trim().to_string()
}

#[test]
fn persist_writes_all_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let o = run_in(dir.path(), &["persist", "--f", SEVEN_MINIMA, "--domain", "0,1", "--eps", "0.02"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let d = PersistenceDiagram::from_json(&fs::read_to_string(dir.path().join("diagram.json")).unwrap()).unwrap();
    assert_eq!(d.len(), 7);
    let summary: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(summary["status"], "complete");
    assert_eq!(summary["epsilon"], 0.02);
    assert_eq!(summary["diagram_points"], 7);
    let dump = fs::read_to_string(dir.path().join("complex.jsonl")).unwrap();
    let header: serde_json::Value = serde_json::from_str(dump.lines().next().unwrap()).unwrap();
    assert_eq!(header["kind"], "header");
    let cells: usize = header["cell_counts"].as_array().unwrap().iter().map(|c| c.as_u64().unwrap() as usize).sum();
    assert_eq!(dump.lines().count(), cells + 1);
    assert!(dir.path().join("summary.json").exists());
}

#[test]
fn keep_short_shows_more_points() {
    let dir = tempfile::tempdir().unwrap();
    let o = run_in(dir.path(), &["persist", "--f", SEVEN_MINIMA, "--domain", "0,1", "--eps", "0.02", "--keep-short"]);
    assert_eq!(o.status.code(), Some(0));
    let d = PersistenceDiagram::from_json(&fs::read_to_string(dir.path().join("diagram.json")).unwrap()).unwrap();
    assert!(d.len() >= 7);
}

#[test]
fn diagrams_are_byte_identical_across_runs_and_thread_counts() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let args = ["persist", "--f", "sin(5*x)*cos(3*y) + x*y", "--domain", "0,1;0,1", "--eps", "0.1"];
    let mut one = args.to_vec();
    one.extend(["--threads", "1"]);
    let mut four = args.to_vec();
    four.extend(["--threads", "4"]);
    assert_eq!(run_in(a.path(), &one).status.code(), Some(0));
    assert_eq!(run_in(b.path(), &four).status.code(), Some(0));
    for file in ["diagram.json", "complex.jsonl", "summary.json"] {
        assert_eq!(fs::read(a.path().join(file)).unwrap(), fs::read(b.path().join(file)).unwrap(), "{file}");
    }
}

#[test]
fn constant_function_has_single_essential_class() {
    let dir = tempfile::tempdir().unwrap();
    let o = run_in(dir.path(), &["run", "--mode", "persist", "--f", "3", "--domain", "0,1;0,2", "--eps", "0.1"]);
    assert_eq!(o.status.code(), Some(0));
    let json = fs::read_to_string(dir.path().join("diagram.json")).unwrap();
    let compact: String = json.split_whitespace().collect();
    assert_eq!(compact, r#"[{"dim":0,"birth":3.0,"death":"inf"}]"#);
}

#[test]
fn periodic_flags_change_topology() {
    let dir = tempfile::tempdir().unwrap();
    let o = run_in(dir.path(), &["persist", "--f", "1", "--domain", "0,1;0,1", "--eps", "0.1", "--periodic", "1,1"]);
    assert_eq!(o.status.code(), Some(0));
    let d = PersistenceDiagram::from_json(&fs::read_to_string(dir.path().join("diagram.json")).unwrap()).unwrap();
    assert_eq!(d.betti(), vec![1, 2, 1]);
    let bad = run(&["persist", "--f", "1", "--domain", "0,1;0,1", "--eps", "0.1", "--periodic", "1"]);
    assert_eq!(bad.status.code(), Some(1));
}

#[test]
fn cannot_decide_exits_with_two_and_omits_diagram() {
    let dir = tempfile::tempdir().unwrap();
    let o = run_in(
        dir.path(),
        &["persist", "--f", "sin(1/(x+1e-8))", "--domain", "0,1", "--eps", "0.5", "--max-depth", "20"],
    );
    assert_eq!(o.status.code(), Some(2));
    assert!(!dir.path().join("diagram.json").exists());
    let summary: serde_json::Value = serde_json::from_str(&fs::read_to_string(dir.path().join("summary.json")).unwrap()).unwrap();
    assert_eq!(summary["status"], "cannot_decide");
    assert!(!summary["unresolved"].as_array().unwrap().is_empty());
}

#[test]
fn errors_exit_with_one() {
    for args in [
        &["persist", "--f", "x +", "--domain", "0,1", "--eps", "0.1"][..],
        &["persist", "--f", "x", "--domain", "1,0", "--eps", "0.1"],
        &["persist", "--f", "x", "--domain", "0,1", "--eps", "-1"],
        &["persist", "--f", "ln(x)", "--domain", "0,1", "--eps", "0.1"],
        &["greedy", "--f", "x", "--domain", "0,1"],
        &["approximate", "--f", "y", "--domain", "0,1", "--eps", "0.1"],
        &["frobnicate"],
    ] {
        let o = run(args);
        assert_eq!(o.status.code(), Some(1), "{args:?}");
        assert!(!o.stderr.is_empty());
    }
}

#[test]
fn greedy_reports_error_bound() {
    let dir = tempfile::tempdir().unwrap();
    let o = run_in(dir.path(), &["greedy", "--f", "x", "--domain", "0,1", "--budget", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let summary: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(summary["error_bound"], 0.125);
    assert_eq!(summary["top_cells"], 4);
    assert!(summary.get("epsilon").is_none());
}

#[test]
fn vector_valued_jobs_export_a_multifiltration() {
    let dir = tempfile::tempdir().unwrap();
    let o = run_in(dir.path(), &["persist", "--f", "x", "--f", "1 - x", "--domain", "0,1", "--eps", "0.3"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(!dir.path().join("diagram.json").exists());
    let multi = fs::read_to_string(dir.path().join("multifiltration.jsonl")).unwrap();
    assert!(multi.contains(r#""axes":[[0.5,0.5]],"value":[0.25,0.25]"#), "{multi}");
}

#[test]
fn distance_between_files() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("p.json");
    let e = dir.path().join("e.csv");
    fs::write(&p, r#"[{"dim":0,"birth":0,"death":2}]"#).unwrap();
    fs::write(&e, "dim,birth,death\n").unwrap();
    let (p, e) = (p.to_str().unwrap(), e.to_str().unwrap());
    assert_eq!(stdout(&run(&["distance", p, e])), "1");
    assert_eq!(stdout(&run(&["distance", p, e, "--metric", "wasserstein", "--q", "1"])), "1");
    assert_eq!(stdout(&run(&["distance", p, p])), "0");
    assert_eq!(stdout(&run(&["run", "--mode", "distance", "--diagram", p, "--diagram", e])), "1");

    let bad = dir.path().join("bad.json");
    fs::write(&bad, "{not json").unwrap();
    assert_eq!(run(&["distance", p, bad.to_str().unwrap()]).status.code(), Some(1));
}

#[test]
fn plots_diagrams_and_step_functions() {
    let dir = tempfile::tempdir().unwrap();
    let o = run_in(dir.path(), &["persist", "--f", common::QUARTIC, "--domain", "0,1", "--eps", "0.5"]);
    assert_eq!(o.status.code(), Some(0));
    let svg = dir.path().join("d.svg");
    let diagram = dir.path().join("diagram.json");
    let o = run(&["plot", diagram.to_str().unwrap(), "--out", svg.to_str().unwrap(), "--eps", "0.5"]);
    assert_eq!(o.status.code(), Some(0));
    let text = fs::read_to_string(&svg).unwrap();
    assert!(text.starts_with("<svg") && text.contains('∞') && text.contains("stroke-dasharray"));

    let step = dir.path().join("s.svg");
    let dump = dir.path().join("complex.jsonl");
    let o = run(&["plot", dump.to_str().unwrap(), "--out", step.to_str().unwrap(), "--f", common::QUARTIC]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = fs::read_to_string(&step).unwrap();
    assert!(text.contains("<polyline") && text.contains("<circle"));

    let twod = tempfile::tempdir().unwrap();
    run_in(twod.path(), &["approximate", "--f", "x*y", "--domain", "0,1;0,1", "--eps", "0.2"]);
    let o = run(&["plot", twod.path().join("complex.jsonl").to_str().unwrap(), "--out", step.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
}
