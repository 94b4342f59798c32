use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn write_config(dir: &Path, text: &str) -> PathBuf {
    let p = dir.join("run.json");
    std::fs::write(&p, text).unwrap();
    p
}

fn spinorsurf(cmd: &str, config: &Path, out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_spinorsurf"))
        .args([cmd, "--config"])
        .arg(config)
        .arg("--out")
        .arg(out)
        .output()
        .unwrap()
}

fn report(out: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(out.join("report.json")).unwrap()).unwrap()
}

#[test]
fn small_grid_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), r#"{"surfaces": [{"preset": "plane"}], "grids": [[4, 32]]}"#);
    let out = spinorsurf("verify", &cfg, &dir.path().join("out"));
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("below the minimum"));
}

#[test]
fn other_config_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("nope.json");
    assert_eq!(spinorsurf("verify", &missing, dir.path()).status.code(), Some(2));
    let cfg = write_config(dir.path(), r#"{"command": "generate", "surfaces": [{"preset": "plane"}]}"#);
    assert_eq!(spinorsurf("verify", &cfg, dir.path()).status.code(), Some(2));
    let bad = Command::new(env!("CARGO_BIN_EXE_spinorsurf")).args(["explode", "--config"]).arg(&cfg).output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn plane_verify_is_exact() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), r#"{"surfaces": [{"preset": "plane"}], "grids": [[32, 32]]}"#);
    let out = dir.path().join("out");
    let run = spinorsurf("verify", &cfg, &out);
    assert_eq!(run.status.code(), Some(0), "{}", String::from_utf8_lossy(&run.stdout));
    let rep = report(&out);
    let entries = rep["entries"].as_array().unwrap();
    assert!(entries.len() > 20);
    for e in entries {
        let r = e["residual"].as_f64().unwrap();
        assert!(r < 1e-10, "{e}");
        assert!(e["pass"].as_bool().unwrap());
        assert!(!e["anchor"].as_str().unwrap().is_empty());
    }
    for key in ["orientation", "representation", "alpha", "laplacian"] {
        assert!(rep["conventions"][key].is_string());
    }
    assert_eq!(rep["seed"], 1);
}

#[test]
fn sphere_enneper_catenoid_sweep() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        r#"{"surfaces": [{"preset": "sphere"}, {"preset": "enneper"}, {"preset": "catenoid"}],
            "grids": [[32, 32], [64, 64], [128, 128]]}"#,
    );
    let out = dir.path().join("out");
    let run = spinorsurf("verify", &cfg, &out);
    let rep = report(&out);
    let entries = rep["entries"].as_array().unwrap();
    let failing: Vec<&str> = entries
        .iter()
        .filter(|e| !e["pass"].as_bool().unwrap())
        .map(|e| e["check_id"].as_str().unwrap())
        .collect();
    // the printed |grad g|^2 identity is off by 2(|phi+|^4 + |phi-|^4) - (|phi+|^2 - |phi-|^2)^2
    // and fails on the sphere patch; every other check passes
    assert_eq!(failing, ["periods.gradient_g"]);
    assert_eq!(run.status.code(), Some(1));
    for e in entries {
        if e["check_id"] == "periods.gradient_g" || e["sweep"].is_null() {
            continue;
        }
        let r = e["residual"].as_f64().unwrap();
        let order = e["measured_order"].as_f64();
        assert!(order.is_some(), "{e}");
        assert!(r < 1e-10 || order.unwrap() >= 1.8, "{e}");
    }
}

#[test]
fn report_entries_are_sorted_by_check_id() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), r#"{"surfaces": [{"preset": "graph"}, {"preset": "plane"}], "grids": [[16, 16], [32, 32]]}"#);
    let out = dir.path().join("out");
    spinorsurf("verify", &cfg, &out);
    let rep = report(&out);
    let keys: Vec<(String, String)> = rep["entries"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| (e["check_id"].as_str().unwrap().to_owned(), e["surface"].as_str().unwrap().to_owned()))
        .collect();
    let mut sorted = keys.clone();
    sorted.sort();
    assert_eq!(keys, sorted);
}

#[test]
fn generate_sphere_obj_counts() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), r#"{"surfaces": [{"preset": "sphere"}], "grids": [[64, 32]]}"#);
    let out = dir.path().join("out");
    assert_eq!(spinorsurf("generate", &cfg, &out).status.code(), Some(0));
    let text = std::fs::read_to_string(out.join("sphere.obj")).unwrap();
    let count = |p: &str| text.lines().filter(|l| l.starts_with(p)).count();
    assert_eq!(count("v "), 2048);
    // u wraps: 64 x 31 cells
    assert_eq!(count("f "), 2 * 64 * 31);
    assert!(text.lines().any(|l| l.starts_with("# seam:")));
    let again = dir.path().join("again");
    spinorsurf("generate", &cfg, &again);
    assert_eq!(std::fs::read(out.join("sphere.obj")).unwrap(), std::fs::read(again.join("sphere.obj")).unwrap());
}

#[test]
fn restrict_writes_node_table() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        r#"{"surfaces": [{"preset": "enneper"}, {"preset": "weierstrass", "data": "helicoid"}], "grids": [[12, 10]],
            "ambient_spinor": [[0.6, 0.0], [0.0, 0.8]]}"#,
    );
    let out = dir.path().join("out");
    assert_eq!(spinorsurf("restrict", &cfg, &out).status.code(), Some(0));
    let mut rd = csv::Reader::from_path(out.join("enneper_spinor.csv")).unwrap();
    let header = rd.headers().unwrap().clone();
    assert_eq!(&header[0], "node");
    assert_eq!(&header[1], "u");
    assert_eq!(&header[2], "v");
    let rows: Vec<csv::StringRecord> = rd.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 120);
    let col = |name: &str| header.iter().position(|h| h == name).unwrap();
    for r in &rows {
        let lp: f64 = r[col("len_plus_sq")].parse().unwrap();
        let lm: f64 = r[col("len_minus_sq")].parse().unwrap();
        assert!((lp + lm - 1.0).abs() < 1e-12);
    }
    assert!(out.join("weierstrass_helicoid_spinor.csv").exists());
}

#[test]
fn reconstruct_enneper_and_refuse_catenoid() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), r#"{"surfaces": [{"preset": "enneper"}], "grids": [[64, 64]]}"#);
    let out = dir.path().join("out");
    assert_eq!(spinorsurf("reconstruct", &cfg, &out).status.code(), Some(0));
    let summary: Value = serde_json::from_str(&std::fs::read_to_string(out.join("reconstruction.json")).unwrap()).unwrap();
    assert!(summary[0]["relative_rms"].as_f64().unwrap() < 1e-3);
    assert!(out.join("enneper_reconstructed.obj").exists());

    let cfg = write_config(dir.path(), r#"{"surfaces": [{"preset": "catenoid"}], "grids": [[32, 32]]}"#);
    let run = spinorsurf("reconstruct", &cfg, &out);
    assert_eq!(run.status.code(), Some(1));
    let summary: Value = serde_json::from_str(&std::fs::read_to_string(out.join("reconstruction.json")).unwrap()).unwrap();
    assert!(summary[0]["note"].as_str().unwrap().contains("periodic"));
}
