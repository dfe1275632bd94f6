use std::fs;
use std::path::{Path, PathBuf};

fn fixture(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name).display().to_string()
}

fn run(args: &[&str]) -> (i32, String, String) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let argv = std::iter::once("geo3d").chain(args.iter().copied());
    let code = geo3d_cli::run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn tmp(dir: &tempfile::TempDir, name: &str) -> PathBuf {
    dir.path().join(name)
}

#[test]
fn flat_dem_has_zero_interior_slope() {
    let dir = tempfile::tempdir().unwrap();
    let out = tmp(&dir, "s.asc");
    let (code, _, err) = run(&["terrain", "slope", "--dem", &fixture("flat.asc"), "--out", out.to_str().unwrap()]);
    assert_eq!(code, 0, "{err}");
    let text = fs::read_to_string(out).unwrap();
    let rows: Vec<Vec<&str>> = text.lines().skip(6).map(|l| l.split_whitespace().collect()).collect();
    for row in &rows[1..rows.len() - 1] {
        assert!(row[1..row.len() - 1].iter().all(|&v| v == "0"), "{row:?}");
    }
}

#[test]
fn unreachable_route_exits_one() {
    let (code, out, err) = run(&["net", "route", "--network", &fixture("network.json"), "--from", "O1", "--to", "ISO"]);
    assert_eq!(code, 1);
    assert!(out.is_empty());
    assert!(err.contains("no route"), "{err}");
}

#[test]
fn unknown_node_exits_one() {
    let (code, _, err) = run(&["net", "neighbors", "--network", &fixture("network.json"), "--node", "nope"]);
    assert_eq!(code, 1);
    assert!(err.contains("nope"), "{err}");
}

#[test]
fn usage_errors_exit_two() {
    let pts = fixture("points.csv");
    for args in [
        vec!["stats", "trend", "--points", pts.as_str(), "--degree", "9"],
        vec!["stats", "trend", "--points", pts.as_str(), "--degree", "2", "--bogus"],
        vec!["stats", "idw", "--points", pts.as_str(), "--grid", "0,0,1,5", "--out", "x.asc"],
        vec!["stats", "nurbs", "--points", pts.as_str(), "--control", "8by8"],
        vec!["stats", "krige", "--points", pts.as_str(), "--model", "cubic", "--nugget", "0", "--sill", "1",
             "--range", "1", "--grid", "0,0,1,2,2", "--out", "x.asc"],
        vec!["terrain", "slope"],
        vec!["frobnicate"],
    ] {
        let (code, _, err) = run(&args);
        assert_eq!(code, 2, "{args:?}: {err}");
        assert!(!err.is_empty());
    }
}

#[test]
fn help_and_version_succeed() {
    let (code, out, _) = run(&["--version"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("geo3d "));
    for args in [vec!["--help"], vec!["stats", "--help"], vec!["net", "route", "--help"], vec!["geo", "match", "--help"]] {
        let (code, out, _) = run(&args);
        assert_eq!(code, 0, "{args:?}");
        assert!(out.contains("Usage"), "{args:?}");
    }
}

#[test]
fn failed_analysis_leaves_no_output() {
    let dir = tempfile::tempdir().unwrap();
    let out = tmp(&dir, "k.asc");
    // Negative range is rejected before anything is written.
    let (code, _, err) = run(&[
        "stats", "krige", "--points", &fixture("points.csv"), "--model", "spherical", "--nugget", "0",
        "--sill", "1", "--range", "-3", "--grid", "0,0,1,4,4", "--out", out.to_str().unwrap(),
    ]);
    assert_eq!(code, 1, "{err}");
    assert_eq!(fs::read_dir(dir.path()).unwrap().count(), 0);
}

#[test]
fn reports_go_to_stdout_without_report_path() {
    let (code, out, _) = run(&["net", "indices", "--network", &fixture("network.json")]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["analysis"], "network_indices");
    assert_eq!(v["outputs"]["k_loops"], 2);
    assert_eq!(v["provenance"]["inputs"][0]["sha256"].as_str().unwrap().len(), 64);
}

#[test]
fn address_route_crosses_into_building() {
    let (code, out, err) = run(&[
        "geo", "route", "--library", &fixture("addresses.csv"), "--network", &fixture("network.json"),
        "--from-addr", "1 harbour rd", "--to-addr", "science hall room 201",
    ]);
    assert_eq!(code, 0, "{err}");
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["outputs"]["from_node"], "O1");
    assert_eq!(v["outputs"]["to_node"], "B1-F2");
    assert_eq!(v["outputs"]["layer_transitions"], 1);
}

#[test]
fn geocode_failure_exits_one() {
    let (code, _, err) = run(&[
        "geo", "route", "--library", &fixture("addresses.csv"), "--network", &fixture("network.json"),
        "--from-addr", "1 Harbour Road", "--to-addr", "~~~",
    ]);
    assert_eq!(code, 1);
    assert!(err.contains("empty query"), "{err}");
}

#[test]
fn negative_grid_origin_is_accepted() {
    let dir = tempfile::tempdir().unwrap();
    let out = tmp(&dir, "i.asc");
    let (code, _, err) = run(&[
        "stats", "idw", "--points", &fixture("points.csv"), "--grid", "-10,-5,5,4,3", "--out", out.to_str().unwrap(),
    ]);
    assert_eq!(code, 0, "{err}");
    assert!(fs::read_to_string(out).unwrap().contains("xllcorner -10"));
}
