use std::path::Path;
use std::process::{Command, Output};

fn cogrates(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cogrates")).args(args).arg("--out").arg(out).output().unwrap()
}

fn read(p: impl AsRef<Path>) -> String {
    std::fs::read_to_string(p).unwrap()
}

#[test]
fn region_writes_cloud_and_closed_hull() {
    let dir = tempfile::tempdir().unwrap();
    let o = cogrates(&["region", "--samples", "500", "--seed", "3"], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let cloud = read(dir.path().join("region_cums2_cloud.csv"));
    let mut lines = cloud.lines();
    assert_eq!(lines.next(), Some("sample_id,r1,r2,r3"));
    assert_eq!(lines.next(), Some("origin,0,0,0"));
    let hull = read(dir.path().join("region_cums2_hull_r1-vs-r23.csv"));
    let rows: Vec<&str> = hull.lines().collect();
    assert_eq!(rows[0], "r1,r2_plus_r3");
    assert!(rows.len() >= 4);
    assert_eq!(rows[1], *rows.last().unwrap());
    assert!(!hull.contains('\r'));
    let meta = read(dir.path().join("region_cums2_meta.txt"));
    assert!(meta.contains("seed = 3"));
    assert!(meta.contains("a13 = 0.55"));
}

#[test]
fn cloud_values_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    cogrates(&["corollary", "--id", "2", "--sweep-points", "7"], dir.path());
    let csv = read(dir.path().join("corollary.csv"));
    for line in csv.lines().skip(1) {
        for f in line.split(',').skip(1).filter(|f| !f.is_empty()) {
            let v: f64 = f.parse().unwrap();
            assert_eq!(format!("{v}"), f);
        }
    }
    assert_eq!(csv.lines().count(), 1 + 14);
}

#[test]
fn usage_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        &["region", "--samples", "0"][..],
        &["slice", "--axis", "r1"],
        &["region", "--scheme", "cums1"],
        &["region", "--view", "sideways"],
        &["--set", "nonsense=1", "corollary"],
        &["--noise", "-1", "corollary"],
        &["corollary", "--id", "12"],
        &["bogus"],
    ] {
        let o = cogrates(args, dir.path());
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    }
    assert_eq!(std::fs::read_dir(dir.path()).map(|d| d.count()).unwrap_or(0), 0);
}

#[test]
fn config_file_and_flag_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "# weaker links\ngain = 0.3\nseed = 9\n").unwrap();
    let out = dir.path().join("out");
    let o = Command::new(env!("CARGO_BIN_EXE_cogrates"))
        .args(["--config", cfg.to_str().unwrap(), "--set", "a12=0.1", "corollary", "--id", "1", "--out"])
        .arg(&out)
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    let meta = read(out.join("corollary_meta.txt"));
    assert!(meta.contains("a12 = 0.1"));
    assert!(meta.contains("a13 = 0.3"));
}

#[test]
fn empty_slice_writes_header_only() {
    let dir = tempfile::tempdir().unwrap();
    let o = cogrates(&["slice", "--axis", "r2", "--c", "0.5,9", "--samples", "300"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(read(dir.path().join("slice_cums2_r2_c9.csv")), "r1,r3\n");
    assert!(read(dir.path().join("slice_cums2_r2_c0.5.csv")).starts_with("r1,r3\n"));
}

#[test]
fn outer_lists_caps() {
    let dir = tempfile::tempdir().unwrap();
    let o = cogrates(&["outer", "--resolution", "31"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    let caps = read(dir.path().join("outer_cums2_caps.csv"));
    let values: Vec<f64> = caps.lines().skip(1).map(|l| l.split(',').nth(1).unwrap().parse().unwrap()).collect();
    assert_eq!(values.len(), 4);
    assert!((values[0] - 2.747528).abs() < 1e-6);
    assert!((values[1] - 2.322649).abs() < 1e-6);
    assert!((values[2] - 1.729716).abs() < 1e-6);
    let meta = read(dir.path().join("outer_cums2_meta.txt"));
    assert!(meta.contains("c_mimo = "));
}

#[test]
fn corollary_one_has_two_rows() {
    let dir = tempfile::tempdir().unwrap();
    cogrates(&["corollary", "--id", "1"], dir.path());
    assert_eq!(read(dir.path().join("corollary.csv")).lines().count(), 3);
}

#[test]
fn verify_reports_named_checks() {
    let dir = tempfile::tempdir().unwrap();
    let o = cogrates(&["verify", "--resolution", "51"], dir.path());
    let text = String::from_utf8_lossy(&o.stdout);
    assert_eq!(o.status.code(), Some(0), "{text}");
    assert!(text.lines().filter(|l| l.starts_with("PASS ")).count() >= 6);
}
