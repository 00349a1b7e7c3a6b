use std::process::Command;

use collision_lab::analytics::{expected_collisions, BucketSpace};

fn lab(args: &[&str]) -> (bool, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_collision-lab"))
        .args(args)
        .env_remove("COLLISION_LAB_MAX_DISTINCT")
        .output()
        .expect("binary runs");
    (
        out.status.success(),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn ok(args: &[&str]) -> String {
    let (success, stdout, stderr) = lab(args);
    assert!(success, "{args:?} failed: {stderr}");
    stdout
}

fn csv(text: &str) -> Vec<Vec<String>> {
    text.lines()
        .skip(1)
        .map(|l| l.split(',').map(str::to_owned).collect())
        .collect()
}

fn field(row: &[String], i: usize) -> f64 {
    row[i].parse().unwrap()
}

#[test]
fn expect_reports() {
    assert!(ok(&["expect", "--n", "1000000", "--bits", "32"])
        .contains("stable               116.4062\n"));
    assert!(ok(&["expect", "--n", "1", "--bits", "32"]).contains("stable               0\n"));
    assert!(ok(&["expect", "--n", "1e6", "--bits", "64"])
        .contains("stable               2.712477e-08\n"));
}

#[test]
fn scan_rows() {
    let rows = csv(&ok(&["scan", "--n", "1000000", "--format", "csv"]));
    assert_eq!(rows.len(), 33);
    let row = |k: u32| rows.iter().find(|r| r[0] == k.to_string()).unwrap();
    assert!(field(row(39), 2) <= 1.0);
    assert!(field(row(38), 2) > 1.0);
    for k in 54..=64 {
        assert_eq!(field(row(k), 1), 1e6);
    }
    assert!((field(row(32), 1) - 116.4062).abs() < 1e-3);
    assert!((field(row(32), 2) - 116.4062).abs() < 1e-4);
}

#[test]
fn prob_reports() {
    assert!(
        ok(&["prob", "--n", "1000000", "--bits", "64"]).contains("stable          2.710503e-08\n")
    );
    assert!(ok(&["prob", "--n", "3", "--buckets", "2"]).contains("stable          1\n"));
    assert!(ok(&["prob", "--n", "3", "--bits", "54"]).contains("stable          1.665335e-16\n"));
}

#[test]
fn errcmp_flags_zero_rows() {
    let text = ok(&["prob", "--n", "1000000", "--errcmp", "--format", "csv"]);
    assert!(text.starts_with("k,relative_error,zero_error\n"));
    let rows = csv(&text);
    assert_eq!(rows.len(), 33);
    for r in &rows {
        let e = field(r, 1);
        assert!(e.is_finite());
        assert_eq!(r[2] == "true", e == 0.0);
    }
}

#[test]
fn pmf_rows() {
    let rows = csv(&ok(&[
        "pmf",
        "--n",
        "3",
        "--buckets",
        "2",
        "--mode",
        "exact",
    ]));
    assert_eq!(rows[0][2], "0");
    assert_eq!(rows[1][2], "3/4");
    assert_eq!(rows[2][2], "1/4");
    let rows = csv(&ok(&["pmf", "--n", "3", "--buckets", "2"]));
    let probs: Vec<f64> = rows[..3].iter().map(|r| field(r, 1)).collect();
    assert_eq!(probs, vec![0.0, 0.75, 0.25]);
    let rows = csv(&ok(&["pmf", "--n", "2", "--buckets", "2"]));
    assert_eq!((field(&rows[0], 1), field(&rows[1], 1)), (0.5, 0.5));

    let rows = csv(&ok(&["pmf", "--n", "1000", "--bits", "32"]));
    let sum_p = rows.iter().find(|r| r[0] == "sum_p").unwrap();
    let sum_cp = rows.iter().find(|r| r[0] == "sum_cp").unwrap();
    assert!((field(sum_p, 1) - 1.0).abs() <= 1e-12);
    let e = expected_collisions(1000, BucketSpace::PowerOfTwo(32));
    assert!((field(sum_cp, 1) - e).abs() <= 1e-9 * e);

    let (success, _, stderr) = lab(&["pmf", "--n", "20000", "--bits", "32"]);
    assert!(!success);
    assert!(stderr.starts_with("error: capacity:"), "{stderr}");
}

#[test]
fn simulate_reports() {
    let text = ok(&["simulate", "--n", "1", "--bits", "32"]);
    assert!(text.contains("duplicates=0  ties=0"), "{text}");

    let text = ok(&[
        "simulate", "--n", "20000", "--bits", "16", "--seeds", "8", "--format", "csv",
    ]);
    for r in csv(&text) {
        let (d, t): (u64, u64) = (r[2].parse().unwrap(), r[3].parse().unwrap());
        if d >= 1 {
            assert!(d + 1 <= t && t <= 2 * d);
        }
    }
    assert_eq!(
        text,
        ok(&["simulate", "--n", "20000", "--bits", "16", "--seeds", "8", "--format", "csv"])
    );
}

#[test]
fn simulate_writes_trajectory_and_positions() {
    let dir = std::env::temp_dir().join(format!("collision-lab-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let traj = dir.join("traj.csv");
    let pos = dir.join("pos.csv");
    ok(&[
        "simulate",
        "--n",
        "3000",
        "--generator",
        "cmrg:7:12",
        "--trajectory",
        traj.to_str().unwrap(),
        "--positions",
        pos.to_str().unwrap(),
    ]);
    let traj = std::fs::read_to_string(traj).unwrap();
    let pos = std::fs::read_to_string(pos).unwrap();
    assert!(traj.starts_with("index,cumulative_collisions\n"));
    assert_eq!(traj.lines().count(), 3001);
    let last: u64 = traj
        .lines()
        .last()
        .unwrap()
        .split(',')
        .nth(1)
        .unwrap()
        .parse()
        .unwrap();
    assert_eq!(pos.lines().count() as u64, last + 1);
    std::fs::remove_dir_all(dir).ok();
}

#[test]
fn capacity_cap_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_collision-lab"))
        .args(["simulate", "--n", "1000"])
        .env("COLLISION_LAB_MAX_DISTINCT", "999")
        .output()
        .unwrap();
    assert!(!out.status.success());
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.starts_with("error: capacity:"), "{err}");
    assert_eq!(err.lines().count(), 1);
}

#[test]
fn solve_reports() {
    let rows = csv(&ok(&[
        "solve", "--bits", "64", "--target", "1", "--format", "csv",
    ]));
    assert!((field(&rows[0], 1) - 6.074e9).abs() <= 1e6);
    assert_eq!(
        ok(&["solve", "--n", "1000000", "--target", "1"]),
        "k = 39\n"
    );
    let rows = csv(&ok(&[
        "solve", "--bits", "32", "--target", "116.4062", "--format", "csv",
    ]));
    assert!((field(&rows[0], 1) - 1e6).abs() < 10.0);
    let (success, _, stderr) = lab(&["solve", "--bits", "64", "--range", "10:20"]);
    assert!(!success);
    assert!(stderr.starts_with("error: bracketing:"), "{stderr}");
}

#[test]
fn inspect_reports() {
    let text = ok(&["inspect", "eps"]);
    assert!(text.contains("normal"), "{text}");
    let rows = csv(&ok(&["inspect", "0x0000000000000001", "--format", "csv"]));
    assert_eq!(rows[0][5], "subnormal");
    assert_eq!(field(&rows[0], 0), 5e-324);
}

#[test]
fn errors_are_one_line_and_nonzero() {
    for args in [
        &["expect", "--bits", "65"][..],
        &["expect", "--bits", "3", "--buckets", "8"],
        &["scan", "--range", "10:5"],
        &["inspect", "nope"],
        &["frobnicate"],
    ] {
        let (success, stdout, stderr) = lab(args);
        assert!(!success, "{args:?}");
        assert!(stdout.is_empty());
        assert_eq!(stderr.lines().count(), 1, "{args:?}: {stderr}");
        assert!(stderr.starts_with("error: "));
    }
}

#[test]
fn csv_round_trips_losslessly() {
    let text = ok(&[
        "scan", "--n", "1000000", "--range", "1:64", "--format", "csv",
    ]);
    let space = |k| BucketSpace::PowerOfTwo(k);
    for r in csv(&text) {
        let k: u32 = r[0].parse().unwrap();
        assert_eq!(
            field(&r, 2).to_bits(),
            expected_collisions(1_000_000, space(k)).to_bits()
        );
    }
}
