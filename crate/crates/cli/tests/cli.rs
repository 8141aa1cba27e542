//! End-to-end contract tests of the binary: exit statuses, header rows, and
//! the error diagnostics scenarios rely on.

use std::path::Path;
use std::process::Command;

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_sta-thermo-lab")
}

fn write_cfg(dir: &Path, name: &str, body: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn malformed_config_exits_2_and_names_the_key() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_cfg(dir.path(), "bad.cfg", "model = single_qubit\nbogus_key = 7\n");
    let out = Command::new(bin())
        .args(["evolve", "--config", &cfg])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("bogus_key"), "stderr: {stderr}");
    assert!(stderr.contains("line 2"), "stderr: {stderr}");
}

#[test]
fn missing_equals_sign_exits_2_with_line() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_cfg(dir.path(), "bad.cfg", "model single_qubit\n");
    let out = Command::new(bin())
        .args(["shortcut", "--config", &cfg])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 1"));
}

#[test]
fn sampling_without_seed_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_cfg(dir.path(), "s.cfg", "model = two_qubit\ncount = 10\n");
    let out = Command::new(bin())
        .args([
            "scatter",
            "--config",
            &cfg,
            "--out",
            dir.path().to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("seed"));
}

#[test]
fn verify_succeeds_and_reports_error_bound() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_cfg(dir.path(), "v.cfg", "model = single_qubit\ngrid = 801\n");
    let out = Command::new(bin())
        .args([
            "verify",
            "--config",
            &cfg,
            "--out",
            dir.path().to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = std::fs::read_to_string(dir.path().join("verify_single_qubit.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next().unwrap(), "model_id,n_grid,sup_error");
    assert_eq!(csv.lines().count(), 3);
}

#[test]
fn declared_csv_headers_are_stable() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().join("out");
    let scatter_cfg = write_cfg(
        dir.path(),
        "scatter.cfg",
        "model = single_qubit\nfamilies = haar_pure\ncount = 5\nseed = 3\n",
    );
    let evolve_cfg = write_cfg(
        dir.path(),
        "evolve.cfg",
        "model = single_qubit\ntau_list = 0.5, 1\nsteps = 400\ngrid = 401\n",
    );
    let frontier_cfg = write_cfg(dir.path(), "frontier.cfg", "model = two_qubit\nn_points = 5\n");
    let sweep_cfg = write_cfg(
        dir.path(),
        "sweep.cfg",
        "model = two_qubit\nparam = alpha\nparam_values = 1, 2, 3\n",
    );
    for (cmd, cfg) in [
        ("scatter", &scatter_cfg),
        ("evolve", &evolve_cfg),
        ("frontier", &frontier_cfg),
        ("sweep", &sweep_cfg),
    ] {
        let status = Command::new(bin())
            .args([cmd, "--config", cfg, "--out", out_dir.to_str().unwrap()])
            .status()
            .unwrap();
        assert!(status.success(), "{cmd} failed");
    }
    let header = |name: &str| -> String {
        std::fs::read_to_string(out_dir.join(name))
            .unwrap()
            .lines()
            .next()
            .unwrap()
            .to_string()
    };
    assert_eq!(
        header("scatter_single_qubit.csv"),
        "model_id,work,s_irr,coherence,pop_1,pop_2,family_tag,seed"
    );
    assert_eq!(header("evolve_single_qubit.csv"), "tau,fidelity,with_tqd,model_id");
    assert_eq!(
        header("frontier_two_qubit.csv"),
        "model_id,family,C,s_min,s_max,d_min_1,d_min_2,d_min_3,d_min_4,d_max_1,d_max_2,d_max_3,d_max_4"
    );
    assert_eq!(
        header("sweep_two_qubit.csv"),
        "param,value,work_max,s_irr_max_state,s_irr_zero_work_work,crossing_flag"
    );
}

#[test]
fn seed_override_changes_samples() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_cfg(
        dir.path(),
        "s.cfg",
        "model = single_qubit\nfamilies = haar_pure\ncount = 3\nseed = 1\n",
    );
    let run = |out: &str, seed: Option<&str>| -> String {
        let out_dir = dir.path().join(out);
        let mut args = vec![
            "scatter".to_string(),
            "--config".into(),
            cfg.clone(),
            "--out".into(),
            out_dir.to_str().unwrap().to_string(),
        ];
        if let Some(s) = seed {
            args.push("--seed".into());
            args.push(s.into());
        }
        assert!(Command::new(bin()).args(&args).status().unwrap().success());
        std::fs::read_to_string(out_dir.join("scatter_single_qubit.csv")).unwrap()
    };
    let base = run("a", None);
    let same = run("b", Some("1"));
    let different = run("c", Some("2"));
    assert_eq!(base, same);
    assert_ne!(base, different);
}

#[test]
fn sweep_on_single_qubit_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_cfg(
        dir.path(),
        "s.cfg",
        "model = single_qubit\nparam = alpha\nparam_values = 1, 2\n",
    );
    let out = Command::new(bin())
        .args(["sweep", "--config", &cfg])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}
