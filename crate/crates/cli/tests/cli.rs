use std::path::PathBuf;
use std::process::Command;

fn oim() -> Command {
    Command::new(env!("CARGO_BIN_EXE_oim"))
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("oim-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

const CUBE: &str = "8 12\n1 2 1\n2 3 1\n3 4 1\n4 1 1\n5 6 1\n6 7 1\n7 8 1\n8 5 1\n1 5 1\n2 6 1\n3 7 1\n4 8 1\n";

#[test]
fn solve_maxcut_writes_stats_and_trajectory() {
    let g = scratch("cube.txt");
    std::fs::write(&g, CUBE).unwrap();
    let (stats, traj) = (scratch("stats.json"), scratch("traj.csv"));
    let out = oim()
        .args(["solve-maxcut", g.to_str().unwrap(), "--trials", "4", "--seed", "3", "--t-end", "5", "--target", "12"])
        .args(["--out", stats.to_str().unwrap(), "--traj", traj.to_str().unwrap()])
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let js: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&stats).unwrap()).unwrap();
    assert_eq!(js["n_trials"], 4);
    let csv = std::fs::read_to_string(&traj).unwrap();
    assert!(csv.starts_with("t,phi_0,"));
}

#[test]
fn same_seed_same_output() {
    let g = scratch("cube2.txt");
    std::fs::write(&g, CUBE).unwrap();
    let run = |seed: &str| {
        let out =
            oim().args(["solve-maxcut", g.to_str().unwrap(), "--trials", "3", "--t-end", "3", "--seed", seed]).output().unwrap();
        String::from_utf8(out.stdout).unwrap().lines().filter(|l| !l.starts_with("wall")).collect::<Vec<_>>().join("\n")
    };
    assert_eq!(run("5"), run("5"));
}

#[test]
fn format_errors_exit_with_2() {
    let bad = scratch("bad.txt");
    std::fs::write(&bad, "oops\n").unwrap();
    let out = oim().args(["solve-maxcut", bad.to_str().unwrap()]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let sched = scratch("bad.json");
    std::fs::write(&sched, r#"{"t_end": 1.0, "K": [[0.5, 1.0]], "Ks": [[0.0, 0.0]], "Kn": [[0.0, 0.0]]}"#).unwrap();
    let g = scratch("cube3.txt");
    std::fs::write(&g, CUBE).unwrap();
    let out = oim().args(["solve-maxcut", g.to_str().unwrap(), "--schedule", sched.to_str().unwrap()]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn numeric_failure_exits_with_3() {
    let out = oim().args(["boltzmann", "--j", "0,1,1e308", "--k", "1e308", "--steps", "100"]).output().unwrap();
    assert_eq!(out.status.code(), Some(3), "{}", String::from_utf8_lossy(&out.stderr));
    let g = scratch("cube4.txt");
    std::fs::write(&g, CUBE.replace(" 1\n", " 1e308\n")).unwrap();
    let sched = scratch("huge.json");
    std::fs::write(&sched, r#"{"t_end": 1.0, "K": [[0.0, 1e308]], "Ks": [[0.0, 0.0]], "Kn": [[0.0, 0.0]]}"#).unwrap();
    let out = oim()
        .args(["solve-maxcut", g.to_str().unwrap(), "--trials", "2", "--schedule", sched.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn genadler_and_boltzmann_run() {
    let out = oim().args(["genadler", "--shil", "--points", "5"]).output().unwrap();
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).contains("SHIL stable states"));
    let out = oim().args(["boltzmann", "--steps", "5000"]).output().unwrap();
    assert!(out.status.success());
    let out = oim().args(["scaling", "--sizes", "10,20", "--trials", "1", "--t-end", "1"]).output().unwrap();
    assert!(out.status.success());
}
