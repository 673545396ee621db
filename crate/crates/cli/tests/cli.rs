use std::path::PathBuf;
use std::process::{Command, Output};

use polymatroid_cli::format::InstanceFile;
use serde_json::Value;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_polymatroid"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("report is JSON")
}

fn path(name: &str) -> String {
    fixture(name).display().to_string()
}

fn all_passed(r: &Value) -> bool {
    r["assertions"]
        .as_array()
        .unwrap()
        .iter()
        .all(|a| a["passed"] == true)
}

#[test]
fn solve_k3_mm1() {
    let out = run(&["solve", &path("k3_mm1.json")]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["result"]["objective"], "4/3");
    assert_eq!(r["result"]["allocation"], serde_json::json!([1, 1, 0]));
    assert!(all_passed(&r));
    assert_eq!(r["input_sha256"].as_str().unwrap().len(), 64);
}

#[test]
fn oracle_route_agrees() {
    let r = report(&run(&["solve", "--oracle", &path("k3_mm1.json")]));
    assert_eq!(r["result"]["objective"], "4/3");
    assert_eq!(r["result"]["route"], "oracle");
}

#[test]
fn zero_demand_game() {
    let out = run(&["pne", &path("zero_demand_game.json")]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(
        r["result"]["equilibrium"],
        serde_json::json!([[0, 0], [0, 0]])
    );
    assert_eq!(r["result"]["iterations"], 0);
    assert_eq!(r["result"]["exchange_steps"], 0);
}

#[test]
fn congestion_game_with_trace() {
    let out = run(&["pne", "--trace", &path("congestion_game.json")]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert!(all_passed(&r));
    assert_eq!(r["result"]["iterations"], 5);
    assert!(r["trace"].is_array());
}

#[test]
fn no_pne_example_check_reports_non_submodularity() {
    let out = run(&["check", &path("no_pne_game.json")]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    for p in r["result"]["players"].as_array().unwrap() {
        assert_eq!(p["submodular"]["holds"], false);
        assert_eq!(p["submodular"]["witness"].as_array().unwrap().len(), 2);
        assert!(p["regularity"]["costs"]
            .as_array()
            .unwrap()
            .iter()
            .all(|c| c["regular"] == true));
    }
    assert_eq!(
        r["result"]["players"][0]["submodular"]["witness"],
        serde_json::json!([["a", "h"], ["b", "h"]])
    );
}

#[test]
fn no_pne_example_has_no_equilibrium() {
    let out = run(&[
        "pne",
        "--oracle",
        "--budget",
        "ground=20",
        &path("no_pne_game.json"),
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(report(&out)["status"], "absent");
    let out = run(&["pne", &path("no_pne_game.json")]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn counterexample_emits_loadable_files() {
    let dir = tempfile::tempdir().unwrap();
    let emit = dir.path().display().to_string();
    let out = run(&[
        "counterexample",
        &path("canonical_violation.json"),
        "--emit",
        &emit,
    ]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert!(all_passed(&r));
    assert_eq!(r["result"]["sensitivity"]["distance_t"], 4);
    assert_eq!(r["result"]["sensitivity"]["distance_d"], 3);
    assert_eq!(r["result"]["game"]["bimatrix"]["cells"][0][0], "1+1,1+0");
    assert_eq!(r["result"]["game"]["bimatrix"]["cells"][1][0], "0+0,1+2");
    let game = std::fs::read_to_string(dir.path().join("no_pne_game.json")).unwrap();
    assert_eq!(
        game,
        std::fs::read_to_string(fixture("no_pne_game.json")).unwrap()
    );
    let instance = std::fs::read_to_string(dir.path().join("sensitivity_instance.json")).unwrap();
    let out = run(&[
        "solve",
        &dir.path()
            .join("sensitivity_instance.json")
            .display()
            .to_string(),
    ]);
    assert!(InstanceFile::parse(&instance).unwrap().instance().is_ok());
    assert_eq!(
        report(&out)["result"]["allocation"],
        serde_json::json!([1, 1, 0, 0])
    );
}

#[test]
fn submodular_input_has_no_counterexample() {
    let out = run(&["counterexample", &path("k3_mm1.json")]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn reopt_bounds() {
    let out = run(&[
        "reopt",
        &path("k3_mm1.json"),
        "--shift",
        "ab:+1",
        "--shift",
        "bc:+2",
        "--d",
        "1",
        "--oracle",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert!(all_passed(&r));
    assert!(r["result"]["distance"].as_u64() <= r["result"]["distance_bound"].as_u64());
    assert_eq!(
        run(&["reopt", &path("k3_mm1.json"), "--d", "3"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        run(&["reopt", &path("k3_mm1.json"), "--shift", "ab:-1"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        run(&["reopt", &path("k3_mm1.json"), "--shift", "zz:+1"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn input_errors() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"schema": 1, "ground": ["a"], "bogus": 1}"#).unwrap();
    let out = run(&["solve", &bad.display().to_string()]);
    assert_eq!(out.status.code(), Some(2));
    let r = report(&out);
    assert_eq!(r["status"], "input_error");
    assert!(r["error"].as_str().unwrap().contains("line 1"));
    std::fs::write(&bad, r#"{"schema": 2, "ground": ["a"]}"#).unwrap();
    assert_eq!(
        run(&["solve", &bad.display().to_string()]).status.code(),
        Some(2)
    );
    assert_eq!(
        run(&["solve", "/nonexistent/x.json"]).status.code(),
        Some(2)
    );
}

#[test]
fn reports_are_deterministic() {
    for args in [
        vec!["solve", "--trace"],
        vec!["pne", "--trace"],
        vec!["check"],
    ] {
        let file = if args[0] == "solve" {
            "k3_mm1.json"
        } else {
            "congestion_game.json"
        };
        let mut full = args.clone();
        let p = path(file);
        full.push(&p);
        let a = run(&full);
        let b = run(&full);
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn out_flag_writes_report() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("report.json");
    let out = run(&[
        "solve",
        &path("k3_mm1.json"),
        "--out",
        &out_path.display().to_string(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let r: Value = serde_json::from_str(&std::fs::read_to_string(out_path).unwrap()).unwrap();
    assert_eq!(r["result"]["objective"], "4/3");
}

#[test]
fn fixtures_round_trip() {
    for name in [
        "k3_mm1.json",
        "canonical_violation.json",
        "zero_demand_game.json",
        "congestion_game.json",
        "no_pne_game.json",
    ] {
        let text = std::fs::read_to_string(fixture(name)).unwrap();
        let file = InstanceFile::parse(&text).unwrap();
        let again = InstanceFile::parse(&file.to_json()).unwrap();
        assert_eq!(file, again, "{name}");
        if file.is_game() {
            let g = file.game().unwrap();
            assert_eq!(InstanceFile::from_game(&g).unwrap(), file, "{name}");
        } else if file.costs.is_some() {
            let p = file.instance().unwrap();
            assert_eq!(InstanceFile::from_instance(&p).unwrap(), file, "{name}");
        }
    }
}

#[test]
fn selftest_command() {
    let out = run(&["selftest", "--seed", "5"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["result"]["criteria"].as_array().unwrap().len(), 7);
    assert!(all_passed(&r));
    assert!(r.get("wall_time_ms").is_none());
}
