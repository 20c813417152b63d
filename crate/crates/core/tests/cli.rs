//! Command-line behaviour: exit codes, files written, output location.

use std::fs;
use std::path::Path;
use std::process::Command;

use junctionlab::cli::run;

const BIN: &str = env!("CARGO_BIN_EXE_junctionlab");

fn jl(args: &[&str]) -> i32 {
    run(std::iter::once("junctionlab").chain(args.iter().copied()))
}

fn files_in(dir: &Path) -> Vec<String> {
    let mut v: Vec<String> = fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect();
    v.sort();
    v
}

#[test]
fn preset_fig3_writes_two_files() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().to_str().unwrap();
    assert_eq!(jl(&["--out", out, "preset", "Fig3"]), 0);
    assert_eq!(files_in(&tmp.path().join("Fig3")), ["manifest.json", "spectrum.csv"]);
    assert_eq!(files_in(tmp.path()), ["Fig3"]);
}

#[test]
fn usage_errors_exit_1() {
    assert_eq!(jl(&["--no-such-flag"]), 1);
    assert_eq!(jl(&[]), 1);
    assert_eq!(jl(&["preset", "Fig99"]), 1);
    assert_eq!(jl(&["--help"]), 0);
}

#[test]
fn unknown_flag_prints_usage() {
    let o = Command::new(BIN).arg("--bogus").output().unwrap();
    assert_eq!(o.status.code(), Some(1));
    assert!(o.stdout.is_empty());
    assert!(String::from_utf8_lossy(&o.stderr).contains("Usage"));
}

#[test]
fn analytic_curve_csv() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().to_str().unwrap();
    assert_eq!(jl(&["--out", out, "analytic", "--phi-steps", "64"]), 0);
    let text = fs::read_to_string(tmp.path().join("analytic.csv")).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "phi_rad,E_plus,E_minus");
    assert_eq!(lines.len(), 65);
    for l in &lines[1..] {
        let v: Vec<f64> = l.split(',').map(|x| x.parse().unwrap()).collect();
        let expect = (v[0] / 2.0).cos().abs();
        assert!((v[1] - expect).abs() < 1e-11 && (v[2] + expect).abs() < 1e-11);
    }
    assert!(text.ends_with('\n') && !text.contains('\r'));
}

#[test]
fn env_var_sets_output_dir_and_json_goes_to_stdout() {
    let tmp = tempfile::tempdir().unwrap();
    let o = Command::new(BIN)
        .env("JUNCTIONLAB_OUT", tmp.path())
        .args(["bulk", "--kind", "kitaev_tsc", "--mu", "1", "--json"])
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    let summary: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!((summary["gap_edge"].as_f64().unwrap() - 1.0).abs() < 1e-6);
    assert!(tmp.path().join("bands.csv").exists());
}

#[test]
fn quiet_stdout_without_json() {
    let tmp = tempfile::tempdir().unwrap();
    let o = Command::new(BIN)
        .args(["--out"])
        .arg(tmp.path())
        .args(["analytic"])
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
}

#[test]
fn config_sweep_and_validate() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = tmp.path().join("dev.cfg");
    fs::write(
        &cfg,
        "[device]\nfamily = sc_tsc\nsites = 30\nmu = 1\nt = 1\ndelta0 = 1\n",
    )
    .unwrap();
    let out = tmp.path().join("out");
    let (c, o) = (cfg.to_str().unwrap(), out.to_str().unwrap());
    assert_eq!(jl(&["validate", c]), 0);
    assert_eq!(
        jl(&["--out", o, "--phi-steps", "32", "sweep", c, "--dump-matrix", "0"]),
        0
    );
    assert_eq!(files_in(&out), ["curves.csv", "matrix.csv", "summary.json"]);
    let curves = fs::read_to_string(out.join("curves.csv")).unwrap();
    assert!(curves.starts_with("phi_rad,branch_id,energy_ev,overlap_score\n"));
    assert_eq!(
        jl(&[
            "--out",
            o,
            "--phi-steps",
            "32",
            "densities",
            c,
            "--branch",
            "1",
            "--orbit-sites",
            "14,15"
        ]),
        0
    );
    assert!(out.join("densities.csv").exists() && out.join("orbit_site_15.csv").exists());

    fs::write(
        &cfg,
        "[device]\nfamily = sc_tsc\nsites = 30\nmu = 1\nt = 1\ndelta0 = 1\nwhat = 3\n",
    )
    .unwrap();
    assert_eq!(jl(&["validate", c]), 1);
}

#[test]
fn inline_device_and_no_track() {
    let tmp = tempfile::tempdir().unwrap();
    let o = tmp.path().to_str().unwrap();
    assert_eq!(
        jl(&[
            "--out",
            o,
            "--no-track",
            "--phi-steps",
            "16",
            "sweep",
            "--family",
            "tsc_tsc",
            "--sites",
            "40",
            "--mu",
            "1"
        ]),
        0
    );
    let s: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(tmp.path().join("summary.json")).unwrap()).unwrap();
    assert_eq!(s["track"], false);
    assert_eq!(s["branches"].as_array().unwrap().len(), 4);
}

#[test]
fn output_independent_of_thread_count() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for (dir, threads) in [(&a, "1"), (&b, "3")] {
        let o = dir.path().to_str().unwrap();
        assert_eq!(
            jl(&["--out", o, "--threads", threads, "--phi-steps", "48", "preset", "Fig9"]),
            0
        );
    }
    for f in files_in(&a.path().join("Fig9")) {
        let x = fs::read(a.path().join("Fig9").join(&f)).unwrap();
        let y = fs::read(b.path().join("Fig9").join(&f)).unwrap();
        assert!(x == y, "{f} differs");
    }
}

#[test]
fn msq_gates_need_six_values() {
    let tmp = tempfile::tempdir().unwrap();
    let o = tmp.path().to_str().unwrap();
    assert_eq!(jl(&["--out", o, "msq", "--gates", "1,1,0"]), 1);
    assert!(files_in(tmp.path()).is_empty());
}
