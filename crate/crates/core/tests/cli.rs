//! End-to-end checks of the `hairhom` binary.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn hairhom(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hairhom"))
        .args(args)
        .output()
        .unwrap()
}

fn write_config(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

const SMALL: &str = "\
regime = distinguished
a_eps = 0.01

[grid]
n_macro = 128
n_r = 32
n_z = 64

[output]
slices = 0, 0.25
";

#[test]
fn run_is_byte_stable_and_self_consistent() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), "small.ini", SMALL);
    let a = tmp.path().join("a");
    let b = tmp.path().join("b");
    for out in [&a, &b] {
        let o = hairhom(&["run", "--config", &cfg, "--out", out.to_str().unwrap()]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    }
    for file in ["profile.csv", "summary.kv"] {
        assert_eq!(
            fs::read(a.join(file)).unwrap(),
            fs::read(b.join(file)).unwrap(),
            "{file}"
        );
    }
    let profile = fs::read_to_string(a.join("profile.csv")).unwrap();
    assert!(profile.starts_with("model,regime,t,z,r_or_diag,value\n"));
    let o = hairhom(&["compare", "--out", a.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(String::from_utf8_lossy(&o.stdout).contains("consistent=true"));
}

#[test]
fn validation_errors_exit_one() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("out");
    let out = out.to_str().unwrap();
    for (name, text) in [
        ("empty.ini", ""),
        ("lm.ini", "regime = standard\na_eps = 0.01\nL = 2\n"),
        ("parse.ini", "regime = standard\n[grid\n"),
        (
            "unknown.ini",
            "regime = standard\na_eps = 0.01\ncolour = blue\n",
        ),
    ] {
        let cfg = write_config(tmp.path(), name, text);
        let o = hairhom(&["run", "--config", &cfg, "--out", out]);
        assert_eq!(o.status.code(), Some(1), "{name}");
    }
    assert_eq!(hairhom(&["frobnicate"]).status.code(), Some(1));
    let missing = hairhom(&["run", "--config", "/nonexistent.ini", "--out", out]);
    assert_eq!(missing.status.code(), Some(1));
}

#[test]
fn solver_failure_exits_two() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(
        tmp.path(),
        "mm.ini",
        "regime = distinguished\na_eps = 0.01\nuptake = michaelis-menten\n\
         [grid]\nn_macro = 64\nn_r = 16\nn_z = 32\npicard_max_iter = 1\npicard_tol = 1e-15\n",
    );
    let out = tmp.path().join("out");
    let o = hairhom(&["run", "--config", &cfg, "--out", out.to_str().unwrap()]);
    assert_eq!(
        o.status.code(),
        Some(2),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
}

#[test]
fn cell_psi_prints_its_keys() {
    let o = hairhom(&["cell-psi", "--modes", "32"]);
    assert!(o.status.success());
    let text = String::from_utf8(o.stdout).unwrap();
    for key in [
        "modes=32",
        "psi_mean=",
        "error_estimate=",
        "residual_ratio.r0.001=",
    ] {
        assert!(text.contains(key), "{key} missing from\n{text}");
    }
    let mean: f64 = text
        .lines()
        .find_map(|l| l.strip_prefix("psi_mean="))
        .unwrap()
        .parse()
        .unwrap();
    assert!((mean + 0.2085778).abs() < 1e-6);
}

#[test]
fn sweep_writes_one_block_per_value() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), "small.ini", SMALL);
    let out = tmp.path().join("sweep");
    let o = hairhom(&[
        "sweep",
        "--config",
        &cfg,
        "--param",
        "a_eps",
        "--values",
        "1e-1,1e-2",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let profile = fs::read_to_string(out.join("profile.csv")).unwrap();
    assert_eq!(
        profile
            .lines()
            .filter(|l| l.starts_with("# a_eps="))
            .count(),
        2
    );
    let summary = fs::read_to_string(out.join("summary.kv")).unwrap();
    assert!(summary.starts_with("sweep.param=a_eps\n"));
    assert!(out.join("a_eps_0.1").join("summary.kv").exists());
    let c = hairhom(&["compare", "--out", out.to_str().unwrap()]);
    assert!(c.status.success(), "{}", String::from_utf8_lossy(&c.stderr));
}

#[test]
fn converge_reports_second_order() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), "c.ini", "regime = standard\na_eps = 0.01\n");
    let o = hairhom(&["converge", "--config", &cfg, "--levels", "3"]);
    assert!(o.status.success());
    let text = String::from_utf8(o.stdout).unwrap();
    let orders: Vec<f64> = text
        .lines()
        .skip(1)
        .filter_map(|l| l.rsplit(',').next()?.parse().ok())
        .collect();
    assert_eq!(orders.len(), 2, "{text}");
    assert!(orders.iter().all(|p| (p - 2.0).abs() < 0.1), "{text}");
    assert_eq!(
        hairhom(&["converge", "--config", &cfg, "--levels", "2"])
            .status
            .code(),
        Some(1)
    );
}
