use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

fn data(name: &str) -> String {
    format!("{}/tests/data/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn golden(name: &str) -> String {
    fs::read_to_string(format!("{}/tests/golden/{name}", env!("CARGO_MANIFEST_DIR"))).unwrap()
}

fn bcds(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bcds")).args(args).output().unwrap()
}

fn bcds_stdin(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_bcds"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(out: &Output) -> String {
    assert!(
        out.status.success(),
        "exit {:?}: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    dir.join(format!("{}-{name}", std::process::id()))
}

#[test]
fn golden_solvers() {
    let star = data("star4.txt");
    let path = data("path5.txt");
    let cases: [(&[&str], &str); 6] = [
        (&["solve-bevd", "--k", "1", &star], "solve_bevd_star.json"),
        (&["oracle", "bcds", &path, "--k", "2"], "oracle_bcds_path.json"),
        (&["solve-bcds", "--k", "1", &star], "solve_bcds_star.json"),
        (&["solve-bcds", "--k", "3", "--c", "1", &path], "solve_bcds_path_c1.json"),
        (&["solve-pevd", "--quota", "4", &path], "solve_pevd_path.json"),
        (&["solve-qst", "--quota", "3", "--profits", "0,1,1,1,0", &star], "solve_qst_star.json"),
    ];
    for (args, file) in cases {
        assert_eq!(stdout(&bcds(args)), golden(file), "{file}");
    }
}

#[test]
fn golden_generators_and_trees() {
    let tree = data("tree7.txt");
    assert_eq!(
        stdout(&bcds(&["decompose-tree", "--k", "3", &tree])),
        golden("decompose_tree7.json")
    );
    assert_eq!(
        stdout(&bcds(&["gen-random", "--n", "8", "--p", "0.3", "--seed", "7"])),
        golden("gen_random_8.txt")
    );
    assert_eq!(
        stdout(&bcds(&["gen-reduction", "bcds", "--sets", r#"{"n":1,"sets":[[0]]}"#, "--q", "1"])),
        golden("reduction_bcds_tiny.txt")
    );

    let map = scratch("map.json");
    let sets = data("sets.json");
    let out = bcds(&[
        "gen-reduction",
        "bevd",
        "--sets",
        &sets,
        "--q",
        "4",
        "--map",
        map.to_str().unwrap(),
    ]);
    assert_eq!(stdout(&out), golden("reduction_bevd.txt"));
    assert_eq!(fs::read_to_string(&map).unwrap(), golden("reduction_bevd_map.json"));
}

#[test]
fn sweep_is_byte_identical_per_seed() {
    let args = ["ratio-sweep", "bevd", "--n", "6", "--k", "2", "--trials", "3", "--seed", "1"];
    let first = stdout(&bcds(&args));
    assert_eq!(first, golden("sweep_bevd.json"));
    assert_eq!(stdout(&bcds(&args)), first);
}

#[test]
fn bevd_sweep_meets_one_minus_inv_e() {
    let out = stdout(&bcds(&["ratio-sweep", "bevd", "--n", "10", "--k", "2", "--trials", "20", "--seed", "1"]));
    let report: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(report["schema"], 1);
    assert_eq!(report["summary"]["within_bound"], 20);
    assert!(report["summary"]["min_ratio"]["decimal"].as_f64().unwrap() >= 0.6321);
}

#[test]
fn bcds_sweep_reports_bound() {
    let out = stdout(&bcds(&["ratio-sweep", "bcds", "--n", "8", "--k", "3", "--trials", "4", "--seed", "2"]));
    let report: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(report["c"], "7/8");
    assert_eq!(report["bound"]["decimal"], 0.053013);
    assert_eq!(report["summary"]["all_feasible"], true);
}

#[test]
fn instance_round_trips_through_generator_output() {
    let text = stdout(&bcds(&["gen-random", "--n", "9", "--p", "0.4", "--seed", "3"]));
    let out = stdout(&bcds_stdin(&["oracle", "bcds", "-", "--k", "1"], &text));
    let report: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert!(report["optimum"].as_u64().unwrap() >= 2);
}

#[test]
fn out_flag_writes_file() {
    let target = scratch("bevd.json");
    let out = bcds(&["solve-bevd", "--k", "1", &data("star4.txt"), "--out", target.to_str().unwrap()]);
    assert_eq!(stdout(&out), "");
    assert_eq!(fs::read_to_string(&target).unwrap(), golden("solve_bevd_star.json"));
}

#[test]
fn exit_codes() {
    let path = data("path5.txt");
    let code = |out: Output| out.status.code().unwrap();
    assert_eq!(code(bcds(&["solve-bcds", "--k", "2", "--bogus", &path])), 64);
    assert_eq!(code(bcds(&["no-such-command"])), 64);
    assert_eq!(code(bcds(&["solve-bcds", &path])), 64);
    assert_eq!(code(bcds(&["--help"])), 0);

    assert_eq!(code(bcds(&["solve-bcds", "--k", "9", &path])), 2);
    assert_eq!(code(bcds(&["solve-bcds", "--k", "2", "--c", "3/2", &path])), 2);
    assert_eq!(code(bcds(&["solve-bevd", "--k", "1", &data("split.txt")])), 2);
    assert_eq!(code(bcds(&["solve-bevd", "--k", "1", &data("missing.txt")])), 2);
    assert_eq!(code(bcds_stdin(&["solve-bevd", "--k", "1", "-"], "p 3 1\n0 7\n")), 2);
    assert_eq!(code(bcds(&["oracle", "bcds", &path])), 2);

    assert_eq!(code(bcds(&["solve-qst", "--quota", "9", &path])), 3);

    let long_path: String = std::iter::once("p 17 16\n".to_string())
        .chain((0..16).map(|i| format!("{i} {}\n", i + 1)))
        .collect();
    assert_eq!(code(bcds_stdin(&["oracle", "bcds", "-", "--k", "2"], &long_path)), 4);
}

#[test]
fn disconnected_input_names_components() {
    let out = bcds(&["solve-bevd", "--k", "1", &data("split.txt")]);
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("2 components"), "{err}");
}
