use std::path::Path;
use std::process::{Command, Output};

fn memfsi(out: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_memfsi")).arg("--out").arg(out).arg("-q").args(args).output().expect("spawn memfsi")
}

const SMALL_SHEAR: [&str; 9] =
    ["shear", "--set", "nx=64", "--set", "ny=32", "--set", "t_final=0.3", "--set", "scheme=semi-implicit"];

fn read(path: &Path) -> String {
    std::fs::read_to_string(path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

#[test]
fn stability_sweep_writes_both_tables() {
    let dir = tempfile::tempdir().unwrap();
    let out = memfsi(dir.path(), &["stability1d", "--sweep", "lattice", "--n-theta", "8", "--classify"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let sweep = read(&dir.path().join("spectral_sweep.csv"));
    assert!(sweep.starts_with("theta,dt,dx,mu,K,eps,rho_semi_implicit"));
    assert_eq!(sweep.lines().count(), 1 + 125 * 8);
    assert_eq!(read(&dir.path().join("explicit_bound.csv")).lines().count(), 1 + 2 * 125);
}

#[test]
fn unknown_key_is_a_configuration_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = memfsi(dir.path(), &["shear", "--set", "bogus=1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("bogus"));
}

#[test]
fn explicit_blow_up_is_a_numerical_failure() {
    let dir = tempfile::tempdir().unwrap();
    let out = memfsi(
        dir.path(),
        &["shear", "--set", "nx=64", "--set", "ny=32", "--set", "dt=0.3", "--set", "ca=0.001", "--set", "scheme=explicit"],
    );
    assert_eq!(out.status.code(), Some(1), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn shear_runs_are_reproducible() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    assert!(memfsi(a.path(), &SMALL_SHEAR).status.success());
    let cfg = a.path().join("effective.cfg");
    let out = memfsi(b.path(), &["--config", cfg.to_str().unwrap(), "shear"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    for name in ["contour_final.csv", "area.csv", "effective.cfg"] {
        assert_eq!(read(&a.path().join(name)), read(&b.path().join(name)), "{name}");
    }
    let diag = |d: &Path| read(&d.join("diagnostics.log"));
    assert_eq!(diag(a.path()), diag(b.path()));
    assert!(diag(a.path()).lines().all(|l| l.starts_with("step=")));
}

#[test]
fn contour_summary_compares_two_files() {
    let dir = tempfile::tempdir().unwrap();
    assert!(memfsi(dir.path(), &SMALL_SHEAR).status.success());
    let (init, fin) = (dir.path().join("contour_init.csv"), dir.path().join("contour_final.csv"));
    let sub = dir.path().join("summary");
    let out = memfsi(&sub, &["contour", init.to_str().unwrap(), fin.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let summary = read(&sub.join("contour_summary.csv"));
    let rows: Vec<&str> = summary.lines().collect();
    assert_eq!(rows[0], "file,vertices,area,hausdorff");
    assert_eq!(rows.len(), 3);
    assert!(!rows[1].ends_with(','), "the input row carries the distance to the reference");
}

#[test]
fn small_manufactured_study() {
    let dir = tempfile::tempdir().unwrap();
    let out = memfsi(dir.path(), &["ms-convergence", "--meshes", "10,20"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let table = read(&dir.path().join("grid_conv_validation.csv"));
    assert!(table.starts_with("elem,error"));
    assert_eq!(table.lines().count(), 3);
}

#[test]
fn config_only_flags_are_rejected_where_unused() {
    let dir = tempfile::tempdir().unwrap();
    let out = memfsi(dir.path(), &["stability1d", "--set", "dt=0.1"]);
    assert_eq!(out.status.code(), Some(2));
}
