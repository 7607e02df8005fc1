use std::path::Path;
use std::process::{Command, Output};

fn chambers(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_chambers"))
        .current_dir(dir)
        .args(args)
        .env_remove("CHAMBERS_SUITE")
        .env_remove("CHAMBERS_BUILDING")
        .output()
        .unwrap()
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout)
        .unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

#[test]
fn build_is_idempotent() {
    let dir = tempfile::tempdir().unwrap();
    let first = chambers(dir.path(), &["build", "--spec", "pg2:3"]);
    assert!(first.status.success());
    let a = json(&first);
    assert_eq!(a["chambers"], 52);
    assert_eq!(a["cached"], false);
    let spec = dir.path().join("spec.json");
    std::fs::write(&spec, r#"{"kind": "pg2", "q": 3}"#).unwrap();
    let b = json(&chambers(
        dir.path(),
        &["build", "--spec", spec.to_str().unwrap()],
    ));
    assert_eq!(b["cached"], true);
    assert_eq!(a["hash"], b["hash"]);
    let artifact = b["path"].as_str().unwrap();
    let c = json(&chambers(dir.path(), &["build", "--spec", artifact]));
    assert_eq!(a["hash"], c["hash"]);
}

#[test]
fn malformed_spec_reports_its_location() {
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("bad.json");
    std::fs::write(&spec, "{\"kind\": \"pg2\",\n \"q\": }").unwrap();
    let out = chambers(dir.path(), &["build", "--spec", spec.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 2"), "{err}");
    let out = chambers(dir.path(), &["build", "--spec", "pg2:9"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn realize_then_verify_the_certificate() {
    let dir = tempfile::tempdir().unwrap();
    let k = dir.path().join("vertex.json");
    std::fs::write(&k, r#"[{"cotype": 2, "least": 0}]"#).unwrap();
    let out = chambers(
        dir.path(),
        &[
            "realize",
            "--building",
            "pg2:3",
            "--apartment",
            "0",
            "--subcomplex",
            "vertex.json",
            "--certificate",
            "cert.json",
        ],
    );
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let cert: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("cert.json")).unwrap())
            .unwrap();
    assert_eq!(cert["checked"], cert["target"]);
    let out = chambers(
        dir.path(),
        &[
            "verify",
            "--building",
            "pg2:3",
            "--certificate",
            "cert.json",
        ],
    );
    assert!(out.status.success());
    assert!(json(&out)["failures"].as_array().unwrap().is_empty());

    // A tampered certificate fails re-validation.
    let mut bad = cert.clone();
    bad["witness"] = cert["host"].clone();
    std::fs::write(dir.path().join("bad.json"), bad.to_string()).unwrap();
    let out = chambers(
        dir.path(),
        &["verify", "--building", "pg2:3", "--certificate", "bad.json"],
    );
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn realize_refuses_thin_buildings() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("k.json"), "[]").unwrap();
    let out = chambers(
        dir.path(),
        &[
            "realize",
            "--building",
            "pg2:2",
            "--apartment",
            "0",
            "--subcomplex",
            "k.json",
        ],
    );
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("error[thickness_too_small]"));
}

#[test]
fn dot_export_of_an_apartment() {
    let dir = tempfile::tempdir().unwrap();
    let out = chambers(
        dir.path(),
        &["export-dot", "--building", "pg2:2", "--apartment", "3"],
    );
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("graph chambers {"));
    let nodes = text
        .lines()
        .filter(|l| l.contains("fillcolor") && l.trim_start().starts_with('c'))
        .count();
    assert_eq!(nodes, 6);
    assert_eq!(text.lines().filter(|l| l.contains(" -- ")).count(), 6);
}

#[test]
fn scan_finds_hyperbolic_triples() {
    let dir = tempfile::tempdir().unwrap();
    let out = chambers(
        dir.path(),
        &[
            "scan",
            "--system",
            "3,3,4",
            "--radii",
            "3,6",
            "--report",
            "scan.json",
        ],
    );
    assert_eq!(out.status.code(), Some(1));
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("scan.json")).unwrap())
            .unwrap();
    assert_eq!(report["schema"], "chambers.report/v1");
    assert!(!report["failures"].as_array().unwrap().is_empty());
    let out = chambers(dir.path(), &["scan", "--system", "A2~", "--radii", "4,8"]);
    assert!(out.status.success());
}

#[test]
fn verify_exit_codes_and_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let run = || {
        chambers(
            dir.path(),
            &[
                "verify",
                "--suite",
                "glue_roots",
                "--building",
                "gq22",
                "--jobs",
                "2",
            ],
        )
    };
    let (a, b) = (run(), run());
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let out = chambers(
        dir.path(),
        &["verify", "--suite", "theorem1", "--building", "pg2:2"],
    );
    assert_eq!(out.status.code(), Some(2));
    let out = chambers(
        dir.path(),
        &["verify", "--suite", "no_such_suite", "--building", "pg2:2"],
    );
    assert_eq!(out.status.code(), Some(2));
    let out = chambers(
        dir.path(),
        &[
            "verify",
            "--suite",
            "glue_roots",
            "--building",
            "pg2:2",
            "--jobs",
            "0",
        ],
    );
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn environment_overrides_flags() {
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_chambers"))
        .current_dir(dir.path())
        .args(["verify", "--format", "text"])
        .env("CHAMBERS_SUITE", "adjacent_pairs")
        .env("CHAMBERS_BUILDING", "rank1:4")
        .output()
        .unwrap();
    assert!(out.status.success());
    assert_eq!(
        String::from_utf8(out.stdout).unwrap().trim(),
        "adjacent_pairs: pass (6 instances, 0 failures)"
    );
}

#[test]
fn collapsing_map_fails() {
    let dir = tempfile::tempdir().unwrap();
    let mut map: Vec<u32> = (0..21).collect();
    map[1] = 0;
    std::fs::write(
        dir.path().join("map.json"),
        serde_json::to_string(&map).unwrap(),
    )
    .unwrap();
    let out = chambers(
        dir.path(),
        &[
            "verify",
            "--suite",
            "apartment_map",
            "--building",
            "pg2:2",
            "--map",
            "map.json",
        ],
    );
    assert_eq!(out.status.code(), Some(1));
    let out = chambers(
        dir.path(),
        &["verify", "--suite", "apartment_map", "--building", "pg2:2"],
    );
    assert!(out.status.success());
}

#[test]
fn hull_of_opposite_chambers_is_everything() {
    let dir = tempfile::tempdir().unwrap();
    let out = chambers(
        dir.path(),
        &["hull", "--system", "A2", "--elements", "e 0.1.0"],
    );
    assert!(out.status.success());
    assert_eq!(json(&out).as_array().unwrap().len(), 6);
    let out = chambers(
        dir.path(),
        &["hull", "--system", "A1~", "--elements", "e 0.1.0"],
    );
    assert_eq!(json(&out).as_array().unwrap().len(), 4);
}
