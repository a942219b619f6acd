use std::path::PathBuf;
use std::process::{Command, Output};

use sha2::{Digest, Sha256};

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_cyclecancel"));
    c.env_remove("CYCLECANCEL_THREADS");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("cli");
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn fixture(name: &str) -> String {
    let path = scratch(&format!("{name}.mat"));
    let o = run(&["fixture", name, "--out", path.to_str().unwrap()]);
    assert!(o.status.success());
    path.to_str().unwrap().to_string()
}

#[test]
fn solve_without_arguments_is_a_usage_error() {
    let o = run(&["solve"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("Usage"));
    assert_eq!(run(&[]).status.code(), Some(1));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn solve_eight_point_json() {
    let m = fixture("ex34");
    let o = run(&["solve", "--matrix", &m, "--seed", "0", "--json"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["ap_value"], 155);
    assert_eq!(v["tour_value"], 161);
    assert_eq!(v["certified"], true);
    assert!(v.get("timings").is_none());
    let parsed = cyclecancel::CostMatrix::<i64>::load(&m).unwrap();
    assert_eq!(
        v["instance_hash"],
        cyclecancel::phases::instance_hash(&parsed)
    );
}

#[test]
fn solve_plain_output() {
    let m = fixture("ex35");
    let o = run(&["solve", "--matrix", &m]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.starts_with("tour ("));
    assert!(text.contains("ap_value 212"));
    assert!(text.contains("certified "));
}

#[test]
fn solve_replays_byte_for_byte() {
    let path = scratch("r7.mat");
    assert!(run(&[
        "gen",
        "--n",
        "7",
        "--seed",
        "5",
        "--out",
        path.to_str().unwrap()
    ])
    .status
    .success());
    let p = path.to_str().unwrap();
    for seed in ["0", "3", "99"] {
        let a = run(&["solve", "--matrix", p, "--seed", seed, "--json"]);
        let b = bin()
            .args(["solve", "--matrix", p, "--seed", seed, "--json"])
            .env("CYCLECANCEL_THREADS", "3")
            .output()
            .unwrap();
        assert!(a.status.success());
        assert_eq!(a.stdout, b.stdout);
    }
}

#[test]
fn trace_files_are_reproducible() {
    let m = fixture("ex34");
    let t1 = scratch("t1.jsonl");
    let t2 = scratch("t2.jsonl");
    for t in [&t1, &t2] {
        let o = run(&["solve", "--matrix", &m, "--trace", t.to_str().unwrap()]);
        assert!(o.status.success());
    }
    let a = std::fs::read_to_string(&t1).unwrap();
    assert_eq!(a, std::fs::read_to_string(&t2).unwrap());
    let header: serde_json::Value = serde_json::from_str(a.lines().next().unwrap()).unwrap();
    assert_eq!(header["version"], 1);
    assert!(a
        .lines()
        .skip(1)
        .all(|l| serde_json::from_str::<serde_json::Value>(l).is_ok()));
}

#[test]
fn bad_thread_count_is_a_usage_error() {
    let m = fixture("ex34");
    let o = bin()
        .args(["solve", "--matrix", &m])
        .env("CYCLECANCEL_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn infeasible_and_malformed_inputs_exit_2() {
    let dead = scratch("dead.mat");
    std::fs::write(&dead, "3\ninf inf inf\n1 inf 1\n1 1 inf\n").unwrap();
    assert_eq!(
        run(&["solve", "--matrix", dead.to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );

    let bad = scratch("bad.mat");
    std::fs::write(&bad, "2\ninf 1\n1 x\n").unwrap();
    let o = run(&["solve", "--matrix", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("(2, 2)"));
}

#[test]
fn gen_small_and_pinned() {
    let o = run(&["gen", "--n", "2", "--seed", "0", "--lo", "1", "--hi", "9"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(rows[0], "2");
    assert!(rows[1].starts_with("inf "));
    assert!(rows[2].ends_with(" inf"));

    let o = run(&[
        "gen", "--n", "20", "--seed", "7", "--lo", "1", "--hi", "100",
    ]);
    assert_eq!(
        hex::encode(Sha256::digest(&o.stdout)),
        "e8dd94fabdf4a80b4cdc90fc0eb58266317c1189eb268e297025d677b9588d55"
    );
    assert_eq!(
        run(&["gen", "--n", "3", "--lo", "9", "--hi", "1"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(run(&["gen", "--n", "1"]).status.code(), Some(1));
}

#[test]
fn detvertex_on_fold_cycle() {
    let mut args = vec!["detvertex", "--"];
    let w = "-7 -10 1 2 -7 4 -9 11 -2 -1 -4 -4 -8 9 9 21 1 -2 -1 -3 -3 -12 6 2 3";
    args.extend(w.split(' '));
    let o = run(&args);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("canonical 18"));
    assert!(text.contains("fold 18"));
    assert!(text.contains("prefix -2 -3 -6 "));
    assert!(text.trim_end().ends_with("-5 -4"));

    args.insert(1, "--pretty");
    let text = stdout(&run(&args));
    assert!(text
        .lines()
        .any(|l| l.starts_with("vertex") && l.contains("18")));

    assert_eq!(
        run(&["detvertex", "--bound", "-5", "--", "-1", "-1"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn fw_variants() {
    let m = fixture("ex32");
    let o = run(&["fw", "--variant", "classic", "--matrix", &m]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("cycle (1 3 7 10) value -1"));

    let o = run(&["fw", "--variant", "nvs", "--matrix", &m]);
    assert!(stdout(&o).contains("cycle (3 7 10 1) value -1"));

    let e = fixture("ex34");
    let base = "(1 4 2 3)(5 7 8 6)";
    let o = run(&[
        "fw",
        "--variant",
        "nnvs",
        "--bound",
        "6",
        "--matrix",
        &e,
        "--base",
        base,
    ]);
    assert!(o.status.success());
    assert!(!stdout(&o).contains("cycle"));
    let o = run(&[
        "fw",
        "--variant",
        "ctree",
        "--bound",
        "30",
        "--matrix",
        &e,
        "--base",
        base,
    ]);
    assert!(stdout(&o).contains("cycle"));

    assert_eq!(
        run(&["fw", "--variant", "nnvs", "--matrix", &e])
            .status
            .code(),
        Some(1)
    );
    let o = run(&[
        "fw",
        "--variant",
        "nnvs",
        "--bound",
        "0",
        "--matrix",
        &e,
        "--base",
        base,
    ]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn oracle_subcommands() {
    let m = fixture("ex34");
    assert!(stdout(&run(&["oracle", "brute-tsp", "--matrix", &m])).contains("value 161"));
    assert!(stdout(&run(&["oracle", "brute-ap", "--matrix", &m])).contains("value 155"));
    assert!(stdout(&run(&["oracle", "hungarian", "--matrix", &m])).contains("value 155"));
    let bf = stdout(&run(&["oracle", "bellman-ford", "--matrix", &m]));
    assert_eq!(bf.lines().count(), 8);
    assert!(bf.starts_with("1 0\n"));
    let big = fixture("ex35");
    assert_eq!(
        run(&["oracle", "brute-tsp", "--matrix", &big])
            .status
            .code(),
        Some(2)
    );
}
