use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::Duration;

use csm_cli::format::{parse_initial_graph, parse_query, parse_update_stream, FormatOptions};
use csm_cli::harness::{run_continuous_matching, run_stream, OutputMode, RunConfig, StreamError};
use csm_core::{Engine, EngineConfig, GraphError, Labels, UpdateOp};

fn example_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data/running_example")
}

fn config(dir: &Path) -> RunConfig {
    RunConfig {
        graph: dir.join("graph.txt"),
        stream: dir.join("stream.txt"),
        query: dir.join("query.txt"),
        ..RunConfig::default()
    }
}

fn write_inputs(dir: &Path, graph: &str, query: &str, stream: &str) {
    fs::write(dir.join("graph.txt"), graph).unwrap();
    fs::write(dir.join("query.txt"), query).unwrap();
    fs::write(dir.join("stream.txt"), stream).unwrap();
}

const TRIANGLE_QUERY: &str = "v 0 A\nv 1 A\nv 2 A\ne 0 1\ne 1 2\ne 0 2\n";

#[test]
fn replay_is_deterministic() {
    let mut cfg = config(&example_dir());
    cfg.output = OutputMode::Enumerate;
    cfg.stats = true;
    let a = run_continuous_matching(&cfg).unwrap().render(true, false);
    let b = run_continuous_matching(&cfg).unwrap().render(true, false);
    assert_eq!(a, b);
    assert!(a.contains("2 + 200\n"));
}

#[test]
fn inconsistent_stream_names_the_operation() {
    let dir = tempfile::tempdir().unwrap();
    write_inputs(dir.path(), "v 1 A\nv 2 A\nv 3 A\ne 1 2\n", TRIANGLE_QUERY, "+ 2 3\n- 1 3\n");
    let err = run_continuous_matching(&config(dir.path())).unwrap_err();
    let err = err.downcast::<StreamError>().unwrap();
    assert_eq!(err.index, 2);
    assert!(matches!(err.source, GraphError::MissingEdge(1, 3)));
}

#[test]
fn triangle_closes_and_opens() {
    let dir = tempfile::tempdir().unwrap();
    write_inputs(dir.path(), "v 1 A\nv 2 A\nv 3 A\ne 1 2\ne 2 3\n", TRIANGLE_QUERY, "+ 1 3\n- 2 3\n");
    let report = run_continuous_matching(&config(dir.path())).unwrap();
    assert_eq!(report.render(false, false), "1 + 6\n2 - 6\n# total + 6 - 6\n");
}

#[test]
fn time_limit_truncates_between_operations() {
    let opts = FormatOptions::default();
    let mut labels = Labels::new();
    let g = parse_initial_graph("v 1 A\nv 2 A\n", opts, &mut labels).unwrap();
    let q = parse_query("v 0 A\nv 1 A\ne 0 1\n", opts, &mut labels).unwrap();
    let ops: Vec<UpdateOp> = parse_update_stream(&"+ 1 2\n- 1 2\n".repeat(50), opts, &mut labels).unwrap();
    let mut engine = Engine::new(g, q, EngineConfig::default());
    let report = run_stream(&mut engine, &ops, OutputMode::Count, Duration::from_nanos(1)).unwrap();
    assert!(report.truncated);
    assert!(report.ops.len() < ops.len());
    assert!(report.render(false, false).contains(&format!("# truncated after {} ops", report.ops.len())));
}

#[test]
fn binary_runs_the_example() {
    let dir = example_dir();
    let out = Command::new(env!("CARGO_BIN_EXE_csm"))
        .arg("run")
        .args(["--graph", dir.join("graph.txt").to_str().unwrap()])
        .args(["--query", dir.join("query.txt").to_str().unwrap()])
        .args(["--stream", dir.join("stream.txt").to_str().unwrap()])
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "1 + 0\n2 + 200\n# total + 200 - 0\n");
}

#[test]
fn binary_reports_bad_input() {
    let dir = tempfile::tempdir().unwrap();
    write_inputs(dir.path(), "v 1 A\nv 1 A\n", TRIANGLE_QUERY, "");
    let out = Command::new(env!("CARGO_BIN_EXE_csm"))
        .arg("run")
        .args(["--graph", dir.path().join("graph.txt").to_str().unwrap()])
        .args(["--query", dir.path().join("query.txt").to_str().unwrap()])
        .args(["--stream", dir.path().join("stream.txt").to_str().unwrap()])
        .output()
        .unwrap();
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
}

#[test]
fn generated_files_run_and_match_the_oracle() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let csm = |args: &[&str]| {
        let out = Command::new(env!("CARGO_BIN_EXE_csm")).args(args).output().unwrap();
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        String::from_utf8(out.stdout).unwrap()
    };
    csm(&["gen", "--seed", "4", "--vertices", "12", "--edges", "20", "--ops", "30", "--out", d.to_str().unwrap()]);
    let paths: Vec<String> = ["graph.txt", "query.txt", "stream.txt"]
        .iter()
        .map(|f| d.join(f).to_str().unwrap().to_owned())
        .collect();
    let inputs = ["--graph", &paths[0], "--query", &paths[1], "--stream", &paths[2]];

    let opts = FormatOptions::default();
    let mut labels = Labels::new();
    parse_initial_graph(&fs::read_to_string(&paths[0]).unwrap(), opts, &mut labels).unwrap();
    parse_query(&fs::read_to_string(&paths[1]).unwrap(), opts, &mut labels).unwrap();
    let ops = parse_update_stream(&fs::read_to_string(&paths[2]).unwrap(), opts, &mut labels).unwrap();
    assert_eq!(ops.len(), 30);

    let run = csm(&[&["run"][..], &inputs].concat());
    let oracle = csm(&[&["oracle"][..], &inputs].concat());
    let counts: Vec<&str> = run.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(counts, oracle.lines().collect::<Vec<_>>());
}
