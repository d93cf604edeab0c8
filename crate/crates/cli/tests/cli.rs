use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

const BIN: &str = env!("CARGO_BIN_EXE_kdist");

fn run(args: &[&str], config: &str, dir: &Path, out: &str) -> Output {
    let path = dir.join(format!("{out}.toml"));
    fs::write(&path, config).unwrap();
    Command::new(BIN)
        .args(args)
        .arg("--config")
        .arg(&path)
        .arg("--out")
        .arg(dir.join(out))
        .output()
        .unwrap()
}

fn files(dir: &Path) -> Vec<(PathBuf, Vec<u8>)> {
    let mut v: Vec<_> = fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let p = e.unwrap().path();
            let bytes = fs::read(&p).unwrap();
            (PathBuf::from(p.file_name().unwrap()), bytes)
        })
        .collect();
    v.sort();
    v
}

const DISK_DECAY: &str = "[body]\nkind = \"disk\"\n[decay]\nangle = 0.3\nr_min = 8.0\nr_max = 512.0\nexpected_gamma = 0.5\n";

const FRACTAL: &str = "[fractal]\nm = 2\ndepth = 6\nbox_depth = 6\n\
                       [[fractal.energy]]\ngamma = 0.8\ncutoffs = [4.0, 8.0, 16.0]\ndepth = 4\n";

const PERTURBED: &str = "seed = 5\n[body]\nkind = \"disk\"\n[distset]\nq_list = [4, 8, 16, 32]\n\
                         [distset.family]\nkind = \"perturbed\"\njitter = 0.2\n";

#[test]
fn disk_decay_passes_with_plot() {
    let dir = TempDir::new().unwrap();
    let out = run(&["decay", "scan"], DISK_DECAY, dir.path(), "d");
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let svg = fs::read_to_string(dir.path().join("d/plot.svg")).unwrap();
    assert!(svg.contains("slope \u{2212}0.50"));
    let envelope = fs::read_to_string(dir.path().join("d/envelope.csv")).unwrap();
    assert!(envelope.starts_with("R,value\n"));
    assert_eq!(svg.matches("class=\"dot\"").count(), envelope.lines().count() - 1);
    let scan = fs::read_to_string(dir.path().join("d/scan.csv")).unwrap();
    assert!(scan.starts_with("R,theta,value_re,value_im,abs\n") && !scan.contains('\r'));
    let report: serde_json::Value = serde_json::from_str(&fs::read_to_string(dir.path().join("d/report.json")).unwrap()).unwrap();
    assert_eq!(report["verdicts"][0]["threshold"], "[0.45, 0.55]");
    assert_eq!(report["config"]["body"]["kind"], "disk");
}

#[test]
fn threshold_failure_exits_two() {
    let dir = TempDir::new().unwrap();
    let cfg = DISK_DECAY.replace("expected_gamma = 0.5", "expected_gamma = 1.0");
    let out = run(&["decay", "scan"], &cfg, dir.path(), "d");
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stdout).contains("FAIL gamma"));
}

#[test]
fn malformed_body_names_the_field() {
    let dir = TempDir::new().unwrap();
    let out = run(&["body", "inspect"], "[body]\nkind = \"ellipse\"\n", dir.path(), "b");
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("axes"));
    let out = run(&["body", "inspect"], "[body]\nkind = \"disk\"\nradius = 2.0\n", dir.path(), "b");
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("radius"));
    let cfg = "[body]\nkind = \"square\"\n[distset]\nq_list = [64, 16]\n[distset.family]\nkind = \"lattice\"\n";
    let out = run(&["distset", "scan"], cfg, dir.path(), "q");
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("distset.q_list"));
}

#[test]
fn missing_table_is_an_error() {
    let dir = TempDir::new().unwrap();
    let out = run(&["lemma", "check"], "[body]\nkind = \"disk\"\n", dir.path(), "l");
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("[lemma]"));
}

#[test]
fn repeated_runs_are_byte_identical() {
    let dir = TempDir::new().unwrap();
    for (args, cfg) in [(&["fractal", "build"][..], FRACTAL), (&["distset", "scan"][..], PERTURBED)] {
        let a = run(args, cfg, dir.path(), "a");
        let b = run(args, cfg, dir.path(), "b");
        assert_eq!(a.status.code(), Some(0), "{}", String::from_utf8_lossy(&a.stderr));
        assert_eq!(b.status.code(), Some(0));
        let (fa, fb) = (files(&dir.path().join("a")), files(&dir.path().join("b")));
        assert!(fa.iter().any(|(p, _)| p.extension().is_some_and(|e| e == "svg")));
        assert_eq!(fa, fb);
    }
}

#[test]
fn seed_flag_overrides_config() {
    let dir = TempDir::new().unwrap();
    let growth = |name: &str, seed: Option<&str>| {
        let mut args = vec!["distset", "scan"];
        if let Some(s) = seed {
            args.extend(["--seed", s]);
        }
        let out = run(&args, PERTURBED, dir.path(), name);
        assert_eq!(out.status.code(), Some(0));
        let report = fs::read_to_string(dir.path().join(name).join("report.json")).unwrap();
        (fs::read(dir.path().join(name).join("growth.csv")).unwrap(), report)
    };
    let (base, _) = growth("base", None);
    let (same, _) = growth("same", Some("5"));
    let (other, report) = growth("other", Some("6"));
    assert_eq!(base, same);
    assert_ne!(base, other);
    assert!(report.contains("\"seed\": 6"));
}

#[test]
fn fractal_outputs_are_exact() {
    let dir = TempDir::new().unwrap();
    let out = run(&["fractal", "build", "--threads", "1"], FRACTAL, dir.path(), "f");
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let cantor = fs::read_to_string(dir.path().join("f/cantor.csv")).unwrap();
    assert_eq!(cantor.lines().count(), 1 + 64);
    assert!(cantor.starts_with("a,b\n0,1/4096\n"));
    let report = fs::read_to_string(dir.path().join("f/report.json")).unwrap();
    assert!(report.contains("\"pre_merge_length\": \"729/2048\""));
}
