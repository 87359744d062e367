use std::collections::HashMap;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn hnr(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hnr"))
        .args(args)
        .output()
        .expect("spawn hnr")
}

fn ok_json(args: &[&str]) -> Value {
    let out = hnr(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["schema_version"], 1);
    v
}

fn code(args: &[&str]) -> i32 {
    hnr(args).status.code().unwrap()
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

/// Header names and numeric rows of a `profile` CSV.
fn read_profile(text: &str) -> (Vec<String>, Vec<Vec<f64>>) {
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("# n="));
    let header = lines.next().unwrap().split(',').map(String::from).collect();
    let rows = lines
        .map(|l| l.split(',').map(|v| v.parse().unwrap()).collect())
        .collect();
    (header, rows)
}

fn column(header: &[String], rows: &[Vec<f64>], name: &str) -> Vec<f64> {
    let k = header.iter().position(|h| h == name).unwrap();
    rows.iter().map(|r| r[k]).collect()
}

#[test]
fn profile_first_integral_column_is_constant() {
    let out = hnr(&["profile", "--n", "3", "--r", "1", "--d", "2"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("# n=3 r=1 d=2.0000000000000000e0 regime=TwoSheets\n"));
    let (header, rows) = read_profile(&text);
    assert_eq!(header.len(), 6 + 3 + 3);
    let fi = column(&header, &rows, "first_integral");
    assert!(fi.iter().all(|v| (v - 2.0).abs() < 1e-9), "first integral drifts");
}

#[test]
fn profile_slice_is_flat() {
    let out = hnr(&["profile", "--n", "3", "--r", "3", "--d", "0", "--samples", "50"]);
    assert!(out.status.success());
    let (header, rows) = read_profile(&String::from_utf8(out.stdout).unwrap());
    let lambda = column(&header, &rows, "lambda");
    assert_eq!(lambda.len(), 50);
    assert!(lambda.iter().all(|v| *v == lambda[0]));
}

#[test]
fn profile_rejects_d_zero_below_top_order() {
    let out = hnr(&["profile", "--n", "3", "--r", "1", "--d", "0"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());
}

#[test]
fn profile_output_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for p in [&a, &b] {
        assert_eq!(
            code(&["profile", "--n", "4", "--r", "2", "--d", "0.5", "-o", path_str(p)]),
            0
        );
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn height_reports() {
    let v = ok_json(&["height", "--n", "3", "--r", "1", "--a", "10"]);
    let h = v["h"].as_f64().unwrap();
    assert!((h - std::f64::consts::FRAC_PI_4).abs() < 1e-4);
    assert_eq!(v["total_height"].as_f64().unwrap(), 2.0 * h);
    assert_eq!(v["limit"].as_f64().unwrap(), std::f64::consts::FRAC_PI_4);
    assert!(v["error_estimate"].as_f64().unwrap() >= 0.0);

    let v = ok_json(&["height", "--n", "4", "--r", "2", "--a", "1"]);
    assert!(v["dh_da"].as_f64().unwrap() < 0.0);

    let v = ok_json(&["height", "--n", "3", "--r", "1", "--d", "0.5"]);
    assert_eq!(v["status"], "infinite (d ≤ 1)");
    assert!(v["h"].is_null());

    assert_eq!(code(&["height", "--n", "3", "--r", "3", "--d", "2"]), 2);
    assert_eq!(code(&["height", "--n", "3", "--r", "1"]), 2);
}

#[test]
fn non_convergence_exits_with_three() {
    let args = [
        "height",
        "--n",
        "3",
        "--r",
        "1",
        "--a",
        "1e-3",
        "--rel-tol",
        "1e-15",
        "--abs-tol",
        "1e-300",
        "--max-subdivisions",
        "1",
    ];
    assert_eq!(code(&args), 3);
}

#[test]
fn obj_strip_has_two_mirrored_sheets() {
    let out = hnr(&[
        "mesh",
        "--n",
        "2",
        "--r",
        "1",
        "--d",
        "2",
        "--rows",
        "20",
        "--columns",
        "7",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let verts: Vec<[f64; 3]> = text
        .lines()
        .filter_map(|l| l.strip_prefix("v "))
        .map(|l| {
            let v: Vec<f64> = l.split(' ').map(|x| x.parse().unwrap()).collect();
            [v[0], v[1], v[2]]
        })
        .collect();
    let faces: Vec<[usize; 3]> = text
        .lines()
        .filter_map(|l| l.strip_prefix("f "))
        .map(|l| {
            let v: Vec<usize> = l.split(' ').map(|x| x.parse().unwrap()).collect();
            [v[0], v[1], v[2]]
        })
        .collect();
    let rows = 40;
    assert_eq!(verts.len(), rows * 7);
    assert_eq!(faces.len(), 2 * (rows - 1) * 6);
    // rows mirror through t = 0: lower sheet reversed, then the upper sheet
    for i in 0..rows {
        for j in 0..7 {
            let a = verts[i * 7 + j];
            let b = verts[(rows - 1 - i) * 7 + j];
            assert_eq!((a[0], a[1]), (b[0], b[1]));
            assert_eq!(a[2], -b[2]);
        }
    }
    assert!(verts.iter().any(|v| v[2] > 0.5) && verts.iter().any(|v| v[2] < -0.5));
    // strip: every edge is shared by at most two triangles, all indices valid
    let mut uses: HashMap<(usize, usize), usize> = HashMap::new();
    for f in &faces {
        assert!(f.iter().all(|&k| k >= 1 && k <= verts.len()));
        for (a, b) in [(f[0], f[1]), (f[1], f[2]), (f[2], f[0])] {
            *uses.entry((a.min(b), a.max(b))).or_default() += 1;
        }
    }
    assert!(uses.values().all(|&u| u <= 2));
}

#[test]
fn mesh_errors() {
    assert_eq!(
        code(&[
            "mesh",
            "--n",
            "2",
            "--r",
            "1",
            "--d",
            "2",
            "--rows",
            "1",
            "--columns",
            "1"
        ]),
        2
    );
    assert_eq!(
        code(&["mesh", "--n", "3", "--r", "1", "--d", "2", "--format", "obj"]),
        2
    );
    assert_eq!(code(&["mesh", "--n", "3", "--r", "1", "--d", "2"]), 2);
}

#[test]
fn csv_mesh_round_trips_through_stc() {
    let dir = tempfile::tempdir().unwrap();
    let v = dir.path().join("v.csv");
    let e = dir.path().join("e.csv");
    let gen = ["--n", "3", "--r", "1", "--d", "2", "--rows", "48", "--columns", "8"];
    let mut args = vec!["mesh"];
    args.extend(gen);
    args.extend(["--vertices", path_str(&v), "--edges", path_str(&e)]);
    assert_eq!(code(&args), 0);
    let from_files = ok_json(&["stc", "--vertices", path_str(&v), "--edges", path_str(&e)]);
    let mut args = vec!["stc"];
    args.extend(gen);
    let generated = ok_json(&args);
    assert_eq!(from_files["q"], 4.0);
    assert_eq!(from_files["value"], generated["value"]);
    assert_eq!(from_files["vertices"], generated["vertices"]);
    assert!(from_files["value"].as_f64().unwrap() > 0.0);
}

#[test]
fn decay_report_is_decreasing() {
    let v = ok_json(&["decay", "--n", "3", "--r", "1", "--d", "2"]);
    assert_eq!(v["strictly_decreasing"], true);
    let values: Vec<f64> = v["points"]
        .as_array()
        .unwrap()
        .iter()
        .map(|p| p["value"].as_f64().unwrap())
        .collect();
    assert_eq!(values.len(), 5);
    assert!(values.windows(2).all(|w| w[1] < w[0]));
    assert!(v["final_value"].as_f64().unwrap() < 1e-3);
}

#[test]
fn sweep_fixtures() {
    let v = ok_json(&["sweep", "--fixture", "containment"]);
    assert_eq!(v["verdict"], "Containment");
    let v = ok_json(&["sweep", "--fixture", "violation"]);
    assert_eq!(v["verdict"], "FirstContact");
    let gap = v["report"]["verdict"]["FirstContact"]["gap"].as_f64().unwrap();
    assert!((0.0..1e-6).contains(&gap));
    assert_eq!(code(&["sweep"]), 2);
}

#[test]
fn sweep_target_file_matches_fixture() {
    let dir = tempfile::tempdir().unwrap();
    let t = dir.path().join("t.csv");
    let fx = ok_json(&["sweep", "--fixture", "violation", "--write-target", path_str(&t)]);
    let v = ok_json(&["sweep", "--target", path_str(&t), "--normal", "0,0,1"]);
    assert_eq!(v["verdict"], "FirstContact");
    assert_eq!(v["report"], fx["report"]);
    assert_eq!(code(&["sweep", "--target", path_str(&t), "--normal", "0,1"]), 2);
}

#[test]
fn quick_check_passes() {
    let v = ok_json(&["check", "--quick"]);
    assert_eq!(v["passed"], true);
    assert_eq!(v["checks"].as_array().unwrap().len(), 5);
}
