use std::fs;
use std::process::Command;

fn nsmild() -> Command {
    Command::new(env!("CARGO_BIN_EXE_nsmild"))
}

#[test]
fn run_succeeds_and_writes_reports() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("tg.toml");
    fs::write(
        &config,
        "[domain]\ndim = 2\ngrid_points = 16\n\n[initial_data]\nkind = \"taylor_green\"\n\n\
         [[norms]]\np = 4\nq = 4\n\n[output]\ndirectory = \"out\"\n",
    )
    .unwrap();
    let out = nsmild().arg("run").arg(&config).output().unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8_lossy(&out.stdout).contains("status: Converged"));
    assert!(dir.path().join("out/report.toml").is_file());
}

#[test]
fn validation_errors_exit_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("bad.toml");
    fs::write(&config, "[domain]\ndim = 2\ngrid_points = 16\nspeed = 3\n").unwrap();
    let out = nsmild().arg("run").arg(&config).output().unwrap();
    assert_eq!(out.status.code(), Some(1));

    fs::write(&config, "[domain]\ndim = 2\ngrid_points = 16\n").unwrap();
    let out = nsmild().arg("run").arg(&config).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("initial_data"));

    let out = nsmild().arg("run").arg(dir.path().join("absent.toml")).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn lost_contraction_exits_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("big.toml");
    fs::write(
        &config,
        "[domain]\ndim = 2\ngrid_points = 16\n\n[solver]\ndelta = 1.0\n\n\
         [initial_data]\nkind = \"random_divfree\"\namplitude = 300.0\nspectral_decay = 0.5\nseed = 1\n\n\
         [output]\ndirectory = \"out\"\n",
    )
    .unwrap();
    let out = nsmild().arg("run").arg(&config).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn data_run_and_norms() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("a.traj");
    let out = nsmild()
        .args(["data", "random-divfree", "--dim", "2", "--grid", "16", "--seed", "4", "--out"])
        .arg(&data)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    // initial data is not a trajectory
    let out = nsmild().arg("norms").arg(&data).args(["--spec", "4,4,0,0,0.1"]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("t = 0"));

    let config = dir.path().join("c.toml");
    fs::write(
        &config,
        "[domain]\ndim = 2\ngrid_points = 16\n\n[initial_data]\nkind = \"from_file\"\npath = \"a.traj\"\n\n\
         [output]\ndirectory = \"out\"\nformats = [\"trajectory\"]\n",
    )
    .unwrap();
    let out = nsmild().arg("run").arg(&config).output().unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let solved = dir.path().join("out/solution.traj");
    let out = nsmild()
        .arg("norms")
        .arg(&solved)
        .args(["--spec", "inf,2,0,1,0.1", "--spec", "4,4,1,0,0.05"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("j=0 k=1") && text.contains("j=1 k=0"));

    // off the scaling line
    let out = nsmild().arg("norms").arg(&solved).args(["--spec", "3,3,0,0,0.1"]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn accept_reports_each_selected_criterion() {
    let out = nsmild().args(["accept", "--only", "2"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.lines().any(|l| l.starts_with("PASS C02")));

    let out = nsmild()
        .args(["accept", "--only", "2", "--mutate", "flip-leray"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stdout).contains("FAIL C02"));
}
