use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn swfv(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_swfv"))
        .args(args)
        .current_dir(cwd)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

const SMALL_DROP: &str = r#"{
  "case": {"kind": "water_drop", "t_end": 40},
  "mesh": {"generate": {"nx": 16, "ny": 16, "lx": 1000, "ly": 1000}},
  "backend": {"kind": "par", "threads": 2}
}"#;

#[test]
fn meshgen_then_validate() {
    let dir = tempfile::tempdir().unwrap();
    let o = swfv(&["meshgen", "--nx", "1", "--ny", "1", "--lx", "1", "--ly", "1", "-o", "m"], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let o = swfv(&["validate", "--mesh", "m"], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("cells: 2\n"), "{}", stdout(&o));
}

#[test]
fn validate_rejects_broken_mesh() {
    let dir = tempfile::tempdir().unwrap();
    // the second triangle repeats the first
    fs::write(
        dir.path().join("dup.swem"),
        "SWEMESH 1\n3 2\n0 0\n1 0\n0 1\n0 1 2 0 0\n0 1 2 0 0\n",
    )
    .unwrap();
    let o = swfv(&["validate", "--mesh", "dup.swem"], dir.path());
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("FAILED"), "{}", stdout(&o));

    fs::write(dir.path().join("bad.swem"), "SWEMESH 1\n5 1\n0 0\n1 0\n0 1\n0 1 2 0 0\n").unwrap();
    let o = swfv(&["validate", "--mesh", "bad.swem"], dir.path());
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("line 6"), "{}", stderr(&o));
}

#[test]
fn usage_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        &[][..],
        &["frobnicate"][..],
        &["run"][..],
        &["run", "--config", "c.json", "--threads", "many"][..],
        &["run", "--config", "c.json", "--backend", "gpu"][..],
        &["meshgen", "--nx", "1"][..],
    ] {
        let o = swfv(args, dir.path());
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", stderr(&o));
        assert!(stderr(&o).contains("Usage"), "{args:?}");
    }
    assert_eq!(swfv(&["--help"], dir.path()).status.code(), Some(0));
}

#[test]
fn bad_config_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(
        dir.path().join("c.json"),
        r#"{"case": {"kind": "water_drop"}, "params": {"cfl": 1.5}}"#,
    )
    .unwrap();
    let o = swfv(&["run", "--config", "c.json"], dir.path());
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("cfl must lie in (0, 1)"), "{}", stderr(&o));

    let o = swfv(&["run", "--config", "missing.json"], dir.path());
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("missing.json"));
}

#[test]
fn threads_override_in_echo() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("c.json"), SMALL_DROP).unwrap();
    let o = swfv(&["run", "--config", "c.json", "--threads", "8", "--t-end", "5"], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let echo = fs::read_to_string(dir.path().join("out/effective_config.json")).unwrap();
    assert!(echo.contains("\"threads\": 8"), "{echo}");
    assert!(echo.contains("\"t_end\": 5.0"), "{echo}");
}

#[test]
fn repeated_runs_identical_stats() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("c.json"), SMALL_DROP).unwrap();
    for out in ["a", "b"] {
        let o = swfv(&["run", "--config", "c.json", "--out-dir", out], dir.path());
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    }
    let a = fs::read(dir.path().join("a/stats.csv")).unwrap();
    let b = fs::read(dir.path().join("b/stats.csv")).unwrap();
    assert!(a.len() > 100);
    assert_eq!(a, b);
}

#[test]
fn mesh_file_relative_to_config() {
    let dir = tempfile::tempdir().unwrap();
    let sub = dir.path().join("case");
    fs::create_dir(&sub).unwrap();
    let o = swfv(
        &["meshgen", "--nx", "10", "--ny", "10", "--lx", "1000", "--ly", "1000", "-o", "case/grid.swem"],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(0));
    fs::write(
        sub.join("c.json"),
        r#"{"case": {"kind": "water_drop", "t_end": 10}, "mesh": {"file": "grid.swem"}}"#,
    )
    .unwrap();
    let o = swfv(&["run", "--config", "case/c.json"], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("cells: 200 "), "{}", stdout(&o));
}

#[test]
fn converge_needs_three_rungs() {
    let dir = tempfile::tempdir().unwrap();
    let o = swfv(&["converge", "--resolutions", "20x1,40x1"], dir.path());
    assert_eq!(o.status.code(), Some(1));
    let o = swfv(
        &["converge", "--resolutions", "50x1,100x2,200x4", "--t-eval", "2", "-o", "c.csv"],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let table = fs::read_to_string(dir.path().join("c.csv")).unwrap();
    assert_eq!(table.lines().count(), 4);
}
