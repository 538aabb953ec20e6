//! End-to-end runs of the `liftlab` binary.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn liftlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_liftlab"))
        .args(args)
        .output()
        .expect("spawn liftlab")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout is not JSON ({e}): {}",
            String::from_utf8_lossy(&out.stdout)
        )
    })
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn golden(name: &str) -> String {
    let p = Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(name);
    fs::read_to_string(p).unwrap()
}

#[test]
fn build_then_exhaustive_solve_verifies() {
    let dir = tempfile::tempdir().unwrap();
    let code = dir.path().join("c.json");
    let b = liftlab(&[
        "build",
        "code_c",
        "--k0",
        "2",
        "--profile",
        "2,3",
        "--out",
        path(&code),
    ]);
    assert_eq!(
        b.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&b.stderr)
    );
    assert!(b.stdout.is_empty());

    let s = liftlab(&[
        "solve",
        path(&code),
        "--strategy",
        "exhaustive",
        "--budget",
        "1000",
    ]);
    assert_eq!(
        s.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&s.stderr)
    );
    let v = json(&s);
    assert_eq!(v["verified"], true);
    assert_eq!(v["strategy"], "exhaustive");
}

#[test]
fn explicit_solve_and_verify() {
    let dir = tempfile::tempdir().unwrap();
    let code = dir.path().join("c.json");
    assert!(liftlab(&[
        "build",
        "code_c",
        "--k",
        "2",
        "--n",
        "1",
        "--out",
        path(&code)
    ])
    .status
    .success());
    let v = liftlab(&["verify", path(&code)]);
    assert_eq!(v.status.code(), Some(0));
    let s = liftlab(&["solve", path(&code)]);
    assert_eq!(s.status.code(), Some(0));
    let r = json(&s);
    assert_eq!(r["strategy"], "explicit");
    assert_eq!(r["verified"], true);
}

#[test]
fn homology_of_rp3() {
    let dir = tempfile::tempdir().unwrap();
    let c = dir.path().join("rp3.json");
    assert!(liftlab(&["build", "rp3", "--k", "3", "--out", path(&c)])
        .status
        .success());
    let h = json(&liftlab(&["homology", path(&c)]));
    let degrees = h["degrees"].as_array().unwrap();
    let betti: Vec<_> = degrees
        .iter()
        .map(|d| d["betti_z2"].as_u64().unwrap())
        .collect();
    assert_eq!(betti, [1, 1, 1, 1]);
    assert_eq!(degrees[1]["torsion"], serde_json::json!([2]));
    assert_eq!(h["torsion_free"], false);
}

#[test]
fn corrupted_input_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let code = dir.path().join("c.json");
    assert!(liftlab(&[
        "build",
        "code_b",
        "--k",
        "2",
        "--n",
        "1",
        "--out",
        path(&code)
    ])
    .status
    .success());
    let text = fs::read_to_string(&code).unwrap();
    fs::write(&code, &text[..text.len() / 2]).unwrap();
    let v = liftlab(&["verify", path(&code)]);
    assert_eq!(v.status.code(), Some(2));
    assert!(!v.stderr.is_empty());

    assert_eq!(
        liftlab(&["verify", "/nonexistent/x.json"]).status.code(),
        Some(2)
    );
    assert_eq!(liftlab(&["build", "no_such_family"]).status.code(), Some(2));
}

#[test]
fn anneal_without_seed_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let code = dir.path().join("c.json");
    assert!(liftlab(&[
        "build",
        "code_c",
        "--k",
        "2",
        "--n",
        "1",
        "--out",
        path(&code)
    ])
    .status
    .success());
    assert_eq!(
        liftlab(&["solve", path(&code), "--strategy", "anneal"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn sited_pipeline_matches_golden() {
    let b = liftlab(&[
        "build",
        "random_sited",
        "--sites",
        "3",
        "--qubits-per-site",
        "2",
        "--density",
        "0.8",
        "--seed",
        "1",
    ]);
    assert_eq!(b.status.code(), Some(0));
    assert_eq!(
        String::from_utf8(b.stdout).unwrap(),
        golden("random_sited.json")
    );

    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("s.json");
    fs::write(&inst, golden("random_sited.json")).unwrap();
    let l = liftlab(&["local-lift", path(&inst)]);
    assert_eq!(l.status.code(), Some(0));
    assert_eq!(
        String::from_utf8(l.stdout).unwrap(),
        golden("local_lift.json")
    );
}

#[test]
fn seeded_search_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let code = dir.path().join("c.json");
    assert!(liftlab(&[
        "build",
        "code_c",
        "--k0",
        "2",
        "--profile",
        "2,3",
        "--out",
        path(&code)
    ])
    .status
    .success());
    let run = || {
        liftlab(&[
            "solve",
            path(&code),
            "--strategy",
            "anneal",
            "--budget",
            "300",
            "--seed",
            "4",
        ])
        .stdout
    };
    assert_eq!(run(), run());
}

#[test]
fn sweep_writes_runs_and_trend() {
    let dir = tempfile::tempdir().unwrap();
    let s = liftlab(&[
        "sweep",
        "code_c",
        "--k0",
        "2",
        "--ks",
        "2,3",
        "--budget",
        "300",
        "--seed",
        "1",
        "--out",
        path(dir.path()),
    ]);
    assert_eq!(
        s.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&s.stderr)
    );
    for f in ["run_k02_k2.json", "run_k02_k3.json", "trend.json"] {
        assert!(dir.path().join(f).exists(), "{f}");
    }
    let trend: Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("trend.json")).unwrap()).unwrap();
    assert!(trend["non_decreasing"].is_boolean());
}
