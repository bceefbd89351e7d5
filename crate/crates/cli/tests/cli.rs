use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_linkhom")).args(args).output().expect("binary runs")
}

fn report(args: &[&str]) -> Value {
    let out = run(args);
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stderr)))
}

#[test]
fn json_is_reproducible() {
    for args in [
        &["--json", "homology", "--rule", "bn", "figure-eight"][..],
        &["--json", "pages", "trefoil-pos", "--max-page", "3"],
        &["--json", "verify", "--suite", "axioms"],
    ] {
        let a = run(args);
        let b = run(args);
        assert!(a.status.success());
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn timing_only_on_request() {
    let plain = report(&["--json", "jones", "hopf-pos"]);
    assert!(plain.get("timing_ms").is_none());
    let timed = report(&["--json", "--timing", "jones", "hopf-pos"]);
    assert!(timed["timing_ms"].is_u64());
}

#[test]
fn trefoil_homology() {
    let r = report(&["--json", "homology", "X(1,4,2,5) X(3,6,4,1) X(5,2,6,3)"]);
    assert_eq!(r["rule"], "khovanov");
    assert_eq!(r["passed"], true);
    assert_eq!(r["payload"]["writhe"], 3);
    assert_eq!(r["payload"]["homology"]["total"], 6);
    assert_eq!(r["inputs"][0]["sha256"].as_str().unwrap().len(), 64);
}

#[test]
fn complex_output_matches_schema() {
    let schema: Value = serde_json::from_str(include_str!("../../../schemas/complex.schema.json")).unwrap();
    let validator = jsonschema::validator_for(&schema).unwrap();
    for rule in ["kh", "bn"] {
        let r = report(&["--json", "homology", "hopf-pos", "--rule", rule, "--complex"]);
        let c = &r["payload"]["complex"];
        assert!(validator.is_valid(c), "{:?}", validator.iter_errors(c).map(|e| e.to_string()).collect::<Vec<_>>());
        assert_eq!(c["gens"].as_array().unwrap().len(), 12);
    }
}

#[test]
fn diagram_files_and_digests() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("t.pd");
    fs::write(&p, "# trefoil\nX(1,4,2,5) X(3,6,4,1)\nX(5,2,6,3)\n").unwrap();
    let a = report(&["--json", "jones", p.to_str().unwrap()]);
    assert_eq!(a["payload"]["jones"], serde_json::json!([[1, 1], [3, 1], [5, 1], [9, -1]]));
    fs::write(&p, "X(1,4,2,5) X(3,6,4,1) X(5,2,6,3)\n").unwrap();
    let b = report(&["--json", "jones", p.to_str().unwrap()]);
    assert_ne!(a["inputs"][0]["sha256"], b["inputs"][0]["sha256"]);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let write = |name: &str, text: &str| {
        let p = dir.path().join(name);
        fs::write(&p, text).unwrap();
        p.to_str().unwrap().to_string()
    };
    let sphere = write("sphere.movie", "pd U(1)\nh0\nh2 2\n");
    let tube = write("tube.movie", "pd U(1)\nh0\nh1 1 2\n");
    let still = write("still.movie", "pd U(1)\n");

    assert_eq!(run(&["movie", &tube, "--homotopy-vs", &still]).status.code(), Some(0));
    assert_eq!(run(&["movie", &sphere, "--homotopy-vs", &still]).status.code(), Some(1));
    assert_eq!(run(&["homology", "X(1,2,3,4)"]).status.code(), Some(2));
    assert_eq!(run(&["movie", &write("bad.movie", "pd U(1)\nr1 1 del\n")]).status.code(), Some(2));
}

#[test]
fn verify_suites_on_a_directory() {
    let dir = tempfile::tempdir().unwrap();
    fs::create_dir_all(dir.path().join("diagrams")).unwrap();
    fs::create_dir_all(dir.path().join("movies")).unwrap();
    fs::write(dir.path().join("diagrams/hopf.pd"), "X(1,2,4,3) X(3,4,2,1)\n").unwrap();
    fs::write(dir.path().join("movies/kink.left.movie"), "pd U(1)\nr1 1 + ins\nr1 2 del\n").unwrap();
    fs::write(dir.path().join("movies/kink.right.movie"), "pd U(1)\n").unwrap();
    let root = dir.path().to_str().unwrap();
    for suite in ["axioms", "reidemeister", "moviemoves", "szabo"] {
        let r = report(&["--json", "verify", "--suite", suite, "--corpus", root, "--jobs", "2"]);
        assert_eq!(r["passed"], true, "{suite}: {r}");
        assert_eq!(r["payload"]["failed"], 0);
    }
}

#[test]
fn shipped_rule_tables_match_schemas() {
    let load = |p: &str| -> Value { serde_json::from_str(&fs::read_to_string(format!("{}/../../{p}", env!("CARGO_MANIFEST_DIR"))).unwrap()).unwrap() };
    let frobenius = jsonschema::validator_for(&load("schemas/frobenius-rule.schema.json")).unwrap();
    let szabo = jsonschema::validator_for(&load("schemas/szabo-rule.schema.json")).unwrap();
    for (file, v) in [("khovanov", &frobenius), ("bar-natan", &frobenius), ("szabo-khovanov-only", &szabo)] {
        let t = load(&format!("corpus/rules/{file}.json"));
        assert!(v.is_valid(&t), "{file}: {:?}", v.iter_errors(&t).map(|e| e.to_string()).collect::<Vec<_>>());
    }
}
