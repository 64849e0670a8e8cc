//! End-to-end runs of the `fairdiv` binary, pinned against golden files.
//!
//! Set `UPDATE_GOLDEN=1` to rewrite `tests/golden/`.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use fairdiv::io::{emit_allocation, emit_instance, read_instance};
use fairdiv::oracle::fixtures;

fn root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn fixture(id: &str) -> String {
    root().join("fixtures").join(format!("{id}.json")).display().to_string()
}

fn fairdiv(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fairdiv")).args(args).output().expect("run fairdiv")
}

fn golden(name: &str, actual: &str) {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name);
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::create_dir_all(path.parent().unwrap()).unwrap();
        std::fs::write(&path, actual).unwrap();
        return;
    }
    let expected = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    assert_eq!(actual, expected, "golden file {name} differs");
}

#[test]
fn corpus_matches_fixture_registry() {
    for fx in fixtures::all() {
        let path = root().join("fixtures").join(format!("{}.json", fx.id));
        let text = std::fs::read_to_string(&path).unwrap();
        assert_eq!(text, emit_instance(&fx.instance).unwrap(), "{}", fx.id);
        assert_eq!(read_instance(&path).unwrap(), fx.instance);
        if let Some(x) = &fx.highlighted {
            let alloc = std::fs::read_to_string(root().join("fixtures").join(format!("{}.allocation.json", fx.id))).unwrap();
            assert_eq!(alloc, emit_allocation(x));
        }
    }
}

#[test]
fn solve_reports_are_pinned() {
    for id in ["table2-mnw", "efx-uniform", "table3-weak-fef1", "sec6.1-non-pe"] {
        let out = fairdiv(&["solve", &fixture(id), "--verify", "--pareto"]);
        assert_eq!(out.status.code(), Some(0), "{id}: {}", String::from_utf8_lossy(&out.stderr));
        golden(&format!("solve-{id}.txt"), &String::from_utf8(out.stdout).unwrap());
    }
}

#[test]
fn swaps_stop_on_non_base_orderable_matroid() {
    let out = fairdiv(&["solve", &fixture("k4-graphic")]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("not base-orderable") && err.contains("`k4-graphic`"), "{err}");
}

#[test]
fn table2_dispatches_to_priority_matching() {
    let out = fairdiv(&["solve", &fixture("table2-mnw"), "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["algorithm"], "iterated_priority_matching");
    assert_eq!(v["fairness"]["fef1"], true);
    assert_eq!(v["schema"], "fairdiv-report/1");
}

#[test]
fn refusals_cite_their_counterexample() {
    for id in ["ex3.2-heterogeneous-categories", "ex3.3-matching", "ex3.4-conflict", "ex3.5-budget"] {
        let out = fairdiv(&["solve", &fixture(id)]);
        assert_eq!(out.status.code(), Some(2));
        let err = String::from_utf8(out.stderr).unwrap();
        assert!(err.contains(&format!("`{id}`")), "{err}");
    }
}

#[test]
fn forced_algorithm_outside_its_precondition_is_a_capability_error() {
    let dir = tempdir("three");
    let path = dir.join("three.json");
    std::fs::write(
        &path,
        r#"{"schema": "fairdiv-instance/1", "agents": 3, "items": 3,
            "valuations": [[1, 2, 3], [3, 2, 1], [1, 1, 1]],
            "categories": [[0, 1, 2]], "capacities": [[1], [1], [1]]}"#,
    )
    .unwrap();
    let out = fairdiv(&["solve", path.to_str().unwrap(), "--algorithm", "rr_squared"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("capability error: rr_squared requires"));
    let ok = fairdiv(&["solve", path.to_str().unwrap(), "--algorithm", "crr", "--order", "2,1,0"]);
    assert_eq!(ok.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&ok.stdout).contains("allocation: [[2],[1],[0]]"));
    let _ = std::fs::remove_dir_all(dir);
}

#[test]
fn verify_table2_allocation() {
    let alloc = root().join("fixtures/table2-mnw.allocation.json");
    let out = fairdiv(&["verify", &fixture("table2-mnw"), alloc.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("f_ef1: false\n"));
    assert!(text.contains("nash_product: 6\n"));
    golden("verify-table2-mnw.txt", &text);
    let weak = root().join("fixtures/table3-weak-fef1.allocation.json");
    let out = fairdiv(&["verify", &fixture("table3-weak-fef1"), weak.to_str().unwrap(), "--require", "weak-f-ef1"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn oracle_questions() {
    let out = fairdiv(&["oracle", &fixture("efx-uniform"), "exists-efx"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stdout).contains("exists: false"));
    let out = fairdiv(&["oracle", &fixture("table2-mnw"), "mnw", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["nash_product"], "6");
    let out = fairdiv(&["oracle", &fixture("table2-mnw"), "count", "--bound", "10"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("oracle bound"));
}

#[test]
fn demo_passes_every_fixture() {
    let out = fairdiv(&["demo"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.ends_with("9/9 fixtures pass\n"));
    golden("demo.txt", &text);
}

#[test]
fn bench_is_deterministic_and_passes() {
    let a = fairdiv(&["bench", "--seed", "0", "--count", "50", "--verify"]);
    let b = fairdiv(&["bench", "--seed", "0", "--count", "50", "--verify"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    golden("bench-seed0.txt", &String::from_utf8(a.stdout).unwrap());
}

#[test]
fn parse_errors_point_at_the_problem() {
    let dir = tempdir("bad");
    let path = dir.join("bad.json");
    std::fs::write(&path, "{\"schema\": \"fairdiv-instance/1\",\n \"agents\": 2,\n \"itemz\": 3}").unwrap();
    let out = fairdiv(&["solve", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("itemz") && err.contains("line 3"), "{err}");
    let _ = std::fs::remove_dir_all(dir);
}

fn tempdir(tag: &str) -> PathBuf {
    let d = std::env::temp_dir().join(format!("fairdiv-cli-{tag}-{}", std::process::id()));
    std::fs::create_dir_all(&d).unwrap();
    d
}
