use std::fs;
use std::path::PathBuf;
use std::process::Command;

fn out_dir(name: &str) -> PathBuf {
    let d = std::env::temp_dir().join(format!("imcf-cli-{name}-{}", std::process::id()));
    let _ = fs::remove_dir_all(&d);
    d
}

fn imcf(args: &[&str], out: &PathBuf) -> (i32, String) {
    let o = Command::new(env!("CARGO_BIN_EXE_imcf"))
        .args(args)
        .arg("--out")
        .arg(out)
        .output()
        .expect("run imcf");
    (o.status.code().unwrap(), String::from_utf8_lossy(&o.stdout).into_owned() + &String::from_utf8_lossy(&o.stderr))
}

#[test]
fn solve_writes_solution_and_manifest() {
    let out = out_dir("solve");
    let (code, text) = imcf(&["solve", "--model", "euclidean", "--n", "3", "--r0", "1"], &out);
    assert_eq!(code, 0, "{text}");
    let csv = fs::read_to_string(out.join("solution.csv")).unwrap();
    assert!(csv.starts_with("r,u\n"));
    // u = 2 log r on the Euclidean model
    for line in csv.lines().skip(1).step_by(97) {
        let (r, u) = line.split_once(',').unwrap();
        let (r, u): (f64, f64) = (r.parse().unwrap(), u.parse().unwrap());
        assert!((u - 2.0 * r.ln()).abs() < 1e-12, "{line}");
    }
    assert!(out.join("jumps.json").exists());
    let first = fs::read(out.join("solution.csv")).unwrap();
    imcf(&["solve", "--model", "euclidean", "--n", "3", "--r0", "1"], &out);
    assert_eq!(first, fs::read(out.join("solution.csv")).unwrap());
    let _ = fs::remove_dir_all(&out);
}

#[test]
fn bounds_all_contained() {
    let out = out_dir("bounds");
    let (code, text) =
        imcf(&["bounds", "--model", "euclidean", "--profile", "power:c=4.836,a=0.6667", "--times", "0,1,2,3"], &out);
    assert_eq!(code, 0, "{text}");
    let csv = fs::read_to_string(out.join("bounds.csv")).unwrap();
    assert_eq!(csv.lines().count(), 5);
    assert!(csv.lines().skip(1).all(|l| l.contains(",true,")));
    let _ = fs::remove_dir_all(&out);
}

#[test]
fn exhaust_writes_stabilization_report() {
    let out = out_dir("exhaust");
    let (code, text) = imcf(&["exhaust", "--model", "dip", "--klist", "3,5,9"], &out);
    assert_eq!(code, 0, "{text}");
    let json: serde_json::Value = serde_json::from_str(&fs::read_to_string(out.join("stabilization.json")).unwrap()).unwrap();
    assert_eq!(json["entries"].as_array().unwrap().len(), 3);
    for k in ["3", "5", "9"] {
        assert!(out.join(format!("u_k_{k}.csv")).exists());
    }
    let _ = fs::remove_dir_all(&out);
}

#[test]
fn exit_codes() {
    let out = out_dir("codes");
    let bad = out.join("bad.json");
    fs::create_dir_all(&out).unwrap();
    fs::write(&bad, r#"{"manifold": {"model": "euclidean", "n": 3}, "unknown": 1}"#).unwrap();
    assert_eq!(imcf(&["solve", "--config", bad.to_str().unwrap()], &out).0, 1);
    assert_eq!(imcf(&["solve", "--model", "moebius"], &out).0, 1);
    let (code, _) = imcf(&["profile", "--model", "cylinder", "--profile", "power:c=12.566,a=0", "--area", "20"], &out);
    assert_eq!(code, 2);
    assert_eq!(imcf(&["bounds", "--profile", "power:c=483.6,a=0.6667", "--times", "0,1,2,3"], &out).0, 3);
    let _ = fs::remove_dir_all(&out);
}

#[test]
fn config_file_and_refine() {
    let out = out_dir("config");
    fs::create_dir_all(&out).unwrap();
    let cfg = out.join("scenario.json");
    fs::write(
        &cfg,
        r#"{"manifold": {"model": "dip", "n": 3, "r_max": 10}, "grid": {"cells": 500},
            "pipeline": {"r0": 1.0}, "tolerances": {"area_law": 1e-9}, "seed": 7}"#,
    )
    .unwrap();
    let (code, text) = imcf(&["hull", "--config", cfg.to_str().unwrap(), "--refine"], &out);
    assert_eq!(code, 0, "{text}");
    assert!(text.contains("B(2)"), "{text}");
    assert!(out.join("sensitivity.json").exists() && out.join("refined/hull.json").exists());
    let _ = fs::remove_dir_all(&out);
}
