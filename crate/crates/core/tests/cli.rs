use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_schwinger"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).unwrap()
}

fn vec3(v: &Value) -> Vec<f64> {
    v.as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_f64().unwrap())
        .collect()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn moments_closed() {
    let v = json(&run(&[
        "moments", "--j", "1", "--m", "0", "--engine", "closed",
    ]));
    assert_eq!(vec3(&v["closed"]["mean"]), [1.0, 0.0, 0.0]);
    assert_eq!(vec3(&v["closed"]["variance"]), [0.5, 0.5, 0.5]);
    assert!(v.get("oracle").is_none());
}

#[test]
fn moments_both_engines_agree() {
    let v = json(&run(&[
        "moments",
        "--j",
        "2",
        "--m",
        "1",
        "--theta-plus",
        "1.5707963",
        "--engine",
        "both",
    ]));
    assert!(v["discrepancy"].as_f64().unwrap() <= 1e-8);
    let mean = vec3(&v["closed"]["mean"]);
    assert!(mean[0].abs() < 1e-6 && (mean[1] + 3f64.sqrt()).abs() < 1e-6 && mean[2] == 1.0);
    assert!(v["oracle"]["cutoff"].as_u64().unwrap() >= 30);
}

#[test]
fn moments_general_double_mode_needs_oracle() {
    let args = [
        "moments",
        "--j",
        "1",
        "--m",
        "0.5",
        "--r-plus",
        "0.3",
        "--r-minus",
        "0.2",
    ];
    let out = run(&args);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("no closed form"));
    let v = json(&run(&[&args[..], &["--engine", "oracle"]].concat()));
    assert!(v["oracle"]["moments"]["variance"].is_array());
}

#[test]
fn moments_csv() {
    let out = run(&["moments", "--j", "1", "--m", "0", "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(
        text,
        "quantity,x,y,z\n\
         closed_mean,1.0000000000000000e0,0.0000000000000000e0,0.0000000000000000e0\n\
         closed_variance,5.0000000000000000e-1,5.0000000000000000e-1,5.0000000000000000e-1\n"
    );
}

#[test]
fn unphysical_projection_exits_2() {
    let out = run(&["moments", "--j", "1", "--m", "2"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("domain error"));
    assert!(out.stdout.is_empty());
}

#[test]
fn single_mode_sweep() {
    let out = run(&[
        "sweep",
        "--mode",
        "single_plus",
        "--j",
        "50",
        "--m",
        "-50",
        "--delta",
        "0",
        "--from",
        "0",
        "--to",
        "3",
        "--steps",
        "300",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<_> = text.lines().collect();
    assert_eq!(lines.len(), 301);
    assert_eq!(lines[0], "r,dJx,dJy,product");
    let first: Vec<f64> = lines[1].split(',').map(|x| x.parse().unwrap()).collect();
    assert_eq!(first, [0.0, 5.0, 5.0, 25.0]);
    let best = lines[1..]
        .iter()
        .map(|l| {
            l.split(',')
                .map(|x| x.parse::<f64>().unwrap())
                .collect::<Vec<_>>()
        })
        .min_by(|a, b| a[2].total_cmp(&b[2]))
        .unwrap();
    assert!((best[0] - 0.5 * (200.0f64 / 201.0).atanh()).abs() <= 3.0 / 299.0);
}

#[test]
fn delta_sets_the_coherent_phase() {
    let base = [
        "sweep",
        "--mode",
        "single_plus",
        "--j",
        "3",
        "--m",
        "1",
        "--phi-plus",
        "0.4",
        "--from",
        "0",
        "--to",
        "1",
        "--steps",
        "5",
    ];
    let via_delta = run(&[&base[..], &["--delta", "0.6"]].concat());
    let via_theta = run(&[&base[..], &["--theta-minus", "0.5"]].concat());
    assert!(via_delta.status.success());
    assert_eq!(via_delta.stdout, via_theta.stdout);
    let both = run(&[&base[..], &["--delta", "0.6", "--theta-minus", "0.5"]].concat());
    assert!(both.status.success());
    let clash = run(&[&base[..], &["--delta", "0.6", "--theta-minus", "0.1"]].concat());
    assert_eq!(clash.status.code(), Some(2));
    assert!(stderr(&clash).contains("inconsistent"));
}

#[test]
fn delta_rejected_for_double_mode() {
    let out = run(&[
        "sweep",
        "--mode",
        "double_special",
        "--j",
        "5",
        "--delta",
        "0",
        "--from",
        "0",
        "--to",
        "1",
        "--steps",
        "3",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn negative_squeeze_range_exits_2() {
    let out = run(&[
        "sweep",
        "--mode",
        "single_plus",
        "--j",
        "5",
        "--from",
        "-1",
        "--to",
        "1",
        "--steps",
        "3",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn double_mode_sweep_json() {
    let v = json(&run(&[
        "sweep",
        "--mode",
        "double_special",
        "--j",
        "50",
        "--m",
        "-50",
        "--theta-plus",
        "0",
        "--theta-minus",
        "0",
        "--from",
        "0",
        "--to",
        "3",
        "--steps",
        "300",
        "--format",
        "json",
    ]));
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 300);
    assert_eq!(rows[0]["dJy"].as_f64(), Some(5.0));
    assert_eq!(v["mode"], "double_special");
}

#[test]
fn surface_examples() {
    let v = json(&run(&[
        "surface",
        "--j",
        "2",
        "--samples-m",
        "3",
        "--samples-theta",
        "4",
    ]));
    let cloud = v["cloud"].as_array().unwrap();
    let ellipsoids = v["ellipsoids"].as_array().unwrap();
    assert_eq!((cloud.len(), ellipsoids.len()), (12, 12));
    for p in cloud {
        let n = vec3(p).iter().map(|x| x * x).sum::<f64>().sqrt();
        assert!((n - 2.0).abs() < 1e-12);
    }
    for e in ellipsoids {
        assert_eq!(vec3(&e["semi_axes"]), [1.0, 1.0, 1.0]);
        assert_eq!(e["label"], "uncertainty");
    }

    let shift = 0.5 * 1f64.sinh().powi(2);
    let v = json(&run(&[
        "surface",
        "--j",
        "2",
        "--r-plus",
        "1",
        "--samples-m",
        "3",
        "--samples-theta",
        "4",
    ]));
    for p in v["cloud"].as_array().unwrap() {
        let [x, y, z] = vec3(p)[..] else {
            unreachable!()
        };
        assert!((x * x + y * y + (z - shift).powi(2) - 4.0).abs() < 1e-10);
    }

    let plain = json(&run(&[
        "surface",
        "--j",
        "2",
        "--samples-m",
        "3",
        "--samples-theta",
        "4",
    ]));
    let double = json(&run(&[
        "surface",
        "--j",
        "2",
        "--r-plus",
        "1",
        "--r-minus",
        "1",
        "--samples-m",
        "3",
        "--samples-theta",
        "4",
    ]));
    assert_eq!(plain["cloud"], double["cloud"]);

    let csv = run(&["surface", "--j", "2", "--format", "csv"]);
    assert_eq!(csv.status.code(), Some(2));
}

#[test]
fn verify_exit_codes() {
    let ok = run(&["verify", "--j-max", "2", "--r-max", "0.5", "--draws", "3"]);
    assert_eq!(ok.status.code(), Some(0), "{}", stderr(&ok));
    let report: Value = serde_json::from_slice(&ok.stdout).unwrap();
    assert_eq!(report["families"].as_array().unwrap().len(), 5);
    assert_eq!(report["passed"], true);

    let strict = run(&[
        "verify", "--j-max", "2", "--r-max", "0.5", "--draws", "3", "--tol", "1e-16",
    ]);
    assert_eq!(strict.status.code(), Some(1));
    assert!(!strict.stdout.is_empty());

    let huge = run(&["verify", "--j-max", "500"]);
    assert_eq!(huge.status.code(), Some(2));
    assert!(stderr(&huge).contains("cutoff explosion"));
}

#[test]
fn sensitivity_examples() {
    let v = json(&run(&["sensitivity", "--j", "50", "--m", "0"]));
    assert_eq!(v["delta_phi"].as_f64(), Some(0.1));
    let v = json(&run(&[
        "sensitivity",
        "--j",
        "50",
        "--m",
        "0",
        "--r-plus",
        "0.5",
    ]));
    assert!(v["delta_phi"].as_f64().unwrap() < 0.1);
    let out = run(&["sensitivity", "--j", "50", "--m", "50"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("degenerate geometry"));
}

#[test]
fn failed_run_leaves_no_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("out.csv");
    let p = path.to_str().unwrap();
    let out = run(&[
        "sweep",
        "--mode",
        "single_plus",
        "--j",
        "1",
        "--m",
        "3",
        "--from",
        "0",
        "--to",
        "1",
        "--steps",
        "3",
        "--out",
        p,
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!Path::new(p).exists());
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 0);

    let out = run(&[
        "sweep",
        "--mode",
        "single_plus",
        "--j",
        "1",
        "--from",
        "0",
        "--to",
        "1",
        "--steps",
        "3",
        "--out",
        p,
    ]);
    assert!(out.status.success() && out.stdout.is_empty());
    assert!(std::fs::read_to_string(&path)
        .unwrap()
        .starts_with("r,dJx,dJy,product\n"));
}
