//! End-to-end tests of the trispline binary: exit codes, CSV and OBJ output,
//! validation reports.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_trispline"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn write_temp(dir: &tempfile::TempDir, name: &str, content: &str) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, content).unwrap();
    path
}

/// Unit square split along the diagonal, with Hermite data sampled from the
/// affine function `f(x, y) = a·x + b·y + c`.
fn square_mesh_json(a: f64, b: f64, c: f64) -> String {
    let vert = |x: f64, y: f64| {
        format!(
            r#"{{"x": {x}, "y": {y}, "f": {}, "gx": {a}, "gy": {b}}}"#,
            a * x + b * y + c
        )
    };
    format!(
        r#"{{
  "vertices": [{}, {}, {}, {}],
  "triangles": [[0, 1, 2], [1, 3, 2]]
}}"#,
        vert(0.0, 0.0),
        vert(1.0, 0.0),
        vert(0.0, 1.0),
        vert(1.0, 1.0)
    )
}

#[test]
fn validate_quintic_exits_zero_with_expected_reports() {
    let out = run(&["validate", "--tuple", "quintic-rsd"]);
    assert!(out.status.success(), "{out:?}");
    let reports: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let reports = reports.as_array().unwrap();
    assert_eq!(reports.len(), 4);
    let pass_of = |p: &str| {
        reports
            .iter()
            .find(|r| r["property"] == p)
            .unwrap_or_else(|| panic!("missing report {p}"))["pass"]
            .as_bool()
            .unwrap()
    };
    assert!(pass_of("admissible-pair"));
    assert!(pass_of("rsd-conditions"));
    assert!(pass_of("range-shift"));
    assert!(!pass_of("affinity-invariance"));
}

#[test]
fn validate_affine_sextic_all_pass() {
    let out = run(&["validate", "--tuple", "affine-sextic"]);
    assert!(out.status.success());
    let reports: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert!(reports
        .as_array()
        .unwrap()
        .iter()
        .all(|r| r["pass"].as_bool().unwrap()));
}

#[test]
fn validate_broken_tuple_file_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    // Ψ0(1) = 0.9: admissibility fails
    let path = write_temp(
        &dir,
        "broken.json",
        r#"{"psi0": [0, 0, 0, 10, -15, 5.9], "psi1": [0, 0, 0, 4, -3],
            "chi0": [[2, 2, 1, 30.0]], "chi1": [[2, 2, 1, 12.0]]}"#,
    );
    let out = run(&["validate", "--tuple", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1), "{out:?}");
}

#[test]
fn validate_unparseable_tuple_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_temp(&dir, "bad.json", "{nope");
    let out = run(&["validate", "--tuple", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2), "{out:?}");
}

#[test]
fn validate_respects_seed_env_and_is_deterministic() {
    let o1 = bin()
        .args(["validate", "--tuple", "phi-phi"])
        .env("TRISPLINE_SEED", "42")
        .output()
        .unwrap();
    let o2 = bin()
        .args(["validate", "--tuple", "phi-phi"])
        .env("TRISPLINE_SEED", "42")
        .output()
        .unwrap();
    assert_eq!(o1.stdout, o2.stdout);
    let bad = bin()
        .args(["validate", "--tuple", "phi-phi"])
        .env("TRISPLINE_SEED", "not-a-number")
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn eval_constant_one_grid() {
    let dir = tempfile::tempdir().unwrap();
    let mesh = write_temp(&dir, "mesh.json", &square_mesh_json(0.0, 0.0, 1.0));
    let out = run(&[
        "eval",
        "--mesh",
        mesh.to_str().unwrap(),
        "--tuple",
        "quintic-rsd",
        "--grid",
        "10",
        "10",
    ]);
    assert!(out.status.success(), "{out:?}");
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("x,y,F"));
    let mut rows = 0;
    for line in lines {
        let f: f64 = line.split(',').nth(2).unwrap().parse().unwrap();
        assert!((f - 1.0).abs() <= 1e-10, "{line}");
        rows += 1;
    }
    assert_eq!(rows, 100);
}

#[test]
fn eval_affine_germ_with_gradient_columns() {
    let dir = tempfile::tempdir().unwrap();
    let mesh = write_temp(&dir, "mesh.json", &square_mesh_json(1.0, 0.0, 0.0));
    let out = run(&[
        "eval",
        "--mesh",
        mesh.to_str().unwrap(),
        "--tuple",
        "affine-sextic",
        "--grid",
        "7",
        "7",
        "--gradient",
    ]);
    assert!(out.status.success(), "{out:?}");
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("x,y,F,Fx,Fy"));
    for line in lines {
        let cols: Vec<f64> = line.split(',').map(|s| s.parse().unwrap()).collect();
        // f = x: value column tracks x, gradient is (1, 0)
        assert!((cols[2] - cols[0]).abs() <= 1e-10, "{line}");
        assert!((cols[3] - 1.0).abs() <= 1e-8, "{line}");
        assert!(cols[4].abs() <= 1e-8, "{line}");
    }
}

#[test]
fn eval_points_outside_mesh_have_empty_fields() {
    let dir = tempfile::tempdir().unwrap();
    let mesh = write_temp(&dir, "mesh.json", &square_mesh_json(0.0, 0.0, 1.0));
    let pts = write_temp(&dir, "pts.csv", "x,y\n0.25,0.25\n5.0,5.0\n");
    let out = run(&[
        "eval",
        "--mesh",
        mesh.to_str().unwrap(),
        "--tuple",
        "quintic-rsd",
        "--points",
        pts.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{out:?}");
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 3);
    assert!(lines[1].split(',').nth(2).unwrap().parse::<f64>().is_ok());
    assert_eq!(lines[2].split(',').nth(2), Some(""));
}

#[test]
fn eval_requires_grid_or_points() {
    let dir = tempfile::tempdir().unwrap();
    let mesh = write_temp(&dir, "mesh.json", &square_mesh_json(0.0, 0.0, 1.0));
    let out = run(&[
        "eval",
        "--mesh",
        mesh.to_str().unwrap(),
        "--tuple",
        "quintic-rsd",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn check_c1_two_triangles_passes() {
    let dir = tempfile::tempdir().unwrap();
    let mesh = write_temp(&dir, "mesh.json", &square_mesh_json(0.5, -1.5, 2.0));
    for tuple in ["quintic-rsd", "phi-phi", "affine-sextic"] {
        let out = run(&[
            "check-c1",
            "--mesh",
            mesh.to_str().unwrap(),
            "--tuple",
            tuple,
        ]);
        assert!(out.status.success(), "{tuple}: {out:?}");
        let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
        assert_eq!(report["edges"].as_array().unwrap().len(), 1);
    }
    // minimal sample count
    let out = run(&[
        "check-c1",
        "--mesh",
        mesh.to_str().unwrap(),
        "--tuple",
        "quintic-rsd",
        "--samples",
        "3",
    ]);
    assert!(out.status.success());
}

#[test]
fn check_c1_rejects_nonconforming_mesh() {
    let dir = tempfile::tempdir().unwrap();
    // second triangle's vertex 3 sits mid-edge of the first: T-junction
    let mesh = write_temp(
        &dir,
        "tjunction.json",
        r#"{
  "vertices": [
    {"x": 0, "y": 0, "f": 0, "gx": 0, "gy": 0},
    {"x": 2, "y": 0, "f": 0, "gx": 0, "gy": 0},
    {"x": 0, "y": 2, "f": 0, "gx": 0, "gy": 0},
    {"x": 1, "y": 1, "f": 0, "gx": 0, "gy": 0},
    {"x": 2, "y": 2, "f": 0, "gx": 0, "gy": 0}
  ],
  "triangles": [[0, 1, 2], [1, 3, 4]]
}"#,
    );
    let out = run(&[
        "check-c1",
        "--mesh",
        mesh.to_str().unwrap(),
        "--tuple",
        "quintic-rsd",
    ]);
    assert_eq!(out.status.code(), Some(1), "{out:?}");
}

#[test]
fn export_obj_density_counts_and_planarity() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b, c) = (0.75, -0.25, 0.5);
    let mesh = write_temp(&dir, "mesh.json", &square_mesh_json(a, b, c));
    let out = run(&[
        "export-obj",
        "--mesh",
        mesh.to_str().unwrap(),
        "--tuple",
        "affine-sextic",
        "--density",
        "4",
    ]);
    assert!(out.status.success(), "{out:?}");
    let text = stdout(&out);
    let verts: Vec<&str> = text.lines().filter(|l| l.starts_with("v ")).collect();
    let faces: Vec<&str> = text.lines().filter(|l| l.starts_with("f ")).collect();
    assert_eq!(verts.len(), 30);
    assert_eq!(faces.len(), 32);
    // affine germ + affinity-invariant tuple → planar surface
    for v in verts {
        let nums: Vec<f64> = v[2..]
            .split_whitespace()
            .map(|s| s.parse().unwrap())
            .collect();
        let plane = a * nums[0] + b * nums[1] + c;
        assert!((nums[2] - plane).abs() <= 1e-9, "{v}");
    }
    // face indices stay within the vertex count
    for f in text.lines().filter(|l| l.starts_with("f ")) {
        for idx in f[2..].split_whitespace() {
            let idx: usize = idx.parse().unwrap();
            assert!((1..=30).contains(&idx));
        }
    }
}

#[test]
fn export_obj_density_one_reproduces_mesh_triangles() {
    let dir = tempfile::tempdir().unwrap();
    let mesh = write_temp(&dir, "mesh.json", &square_mesh_json(0.0, 0.0, 0.25));
    let out = run(&[
        "export-obj",
        "--mesh",
        mesh.to_str().unwrap(),
        "--tuple",
        "quintic-rsd",
        "--density",
        "1",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert_eq!(text.lines().filter(|l| l.starts_with("v ")).count(), 6);
    assert_eq!(text.lines().filter(|l| l.starts_with("f ")).count(), 2);
}

#[test]
fn outputs_are_byte_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let mesh = write_temp(&dir, "mesh.json", &square_mesh_json(0.3, 0.7, -0.2));
    let args = [
        "eval",
        "--mesh",
        mesh.to_str().unwrap(),
        "--tuple",
        "quintic-rsd",
        "--grid",
        "5",
        "5",
        "--gradient",
    ];
    assert_eq!(run(&args).stdout, run(&args).stdout);
}
