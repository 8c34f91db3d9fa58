use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn bodybar(args: &[&str]) -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_bodybar"));
    cmd.args(args).env_remove("BODYBAR_SEED");
    cmd
}

fn run(args: &[&str]) -> Output {
    bodybar(args).output().expect("binary runs")
}

fn run_stdin(args: &[&str], input: &str) -> Output {
    let mut child =
        bodybar(args).stdin(Stdio::piped()).stdout(Stdio::piped()).stderr(Stdio::piped()).spawn().expect("binary runs");
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn check_exit_codes() {
    let ok = run(&["check", fixture("example1.json").to_str().unwrap()]);
    assert_eq!(ok.status.code(), Some(0));
    let report = json(&ok);
    assert_eq!(report["verdict"], "minimally-rigid");
    assert_eq!(report["rigidity"]["rank"], 51);
    assert_eq!(report["sparsity"]["engine"], "brute-force");
    assert!(report.get("timing_ms").is_none());

    let neg = run(&["check", fixture("nine_parallel.json").to_str().unwrap()]);
    assert_eq!(neg.status.code(), Some(1));
    let witness = json(&neg)["sparsity"]["witness"].as_array().unwrap().len();
    assert_eq!(witness, 9);

    for name in ["collinear_gains.json", "loops_rank1.json", "two_seeds.json"] {
        assert_eq!(run(&["check", fixture(name).to_str().unwrap()]).status.code(), Some(1), "{name}");
    }
    for name in ["loops_rank3.json", "generated_3.json", "generated_5.json"] {
        assert_eq!(run(&["check", fixture(name).to_str().unwrap()]).status.code(), Some(0), "{name}");
    }
}

#[test]
fn malformed_input_exits_two_with_a_position() {
    let text = std::fs::read_to_string(fixture("example1.json")).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let truncated = dir.path().join("truncated.json");
    std::fs::write(&truncated, &text[..text.len() / 2]).unwrap();
    let out = run(&["check", truncated.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("line "), "{err}");
    assert!(out.stdout.is_empty());

    let four = r#"{"dim": 3, "bodies": ["A"], "edges": [{"u": "A", "v": "A", "gain": [1, 0, 0, 0]}]}"#;
    let out = run_stdin(&["check", "-"], four);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stderr).unwrap().contains("edges[0].gain"));

    let missing = run(&["check", dir.path().join("absent.json").to_str().unwrap()]);
    assert_eq!(missing.status.code(), Some(2));
    assert_eq!(run(&["check"]).status.code(), Some(2));
    assert_eq!(run(&["check", "x", "--engine", "quantum"]).status.code(), Some(2));
    let bad_prime = run(&["rank", fixture("example1.json").to_str().unwrap(), "--prime", "12"]);
    assert_eq!(bad_prime.status.code(), Some(2));
}

#[test]
fn forced_engines_and_timing() {
    let file = fixture("example1.json");
    for engine in ["brute-force", "connected", "matroid"] {
        let out = run(&["check", file.to_str().unwrap(), "--engine", engine, "--timing"]);
        assert_eq!(out.status.code(), Some(0), "{engine}");
        let report = json(&out);
        assert_eq!(report["sparsity"]["engine"], engine);
        assert!(report["timing_ms"].as_f64().unwrap() >= 0.0);
    }
    let capped = run(&["check", file.to_str().unwrap(), "--engine", "brute-force", "--brute-cap", "8"]);
    assert_eq!(capped.status.code(), Some(2));
    let auto = run(&["check", file.to_str().unwrap(), "--brute-cap", "8"]);
    assert_eq!(json(&auto)["sparsity"]["engine"], "connected");
    let big = run(&["check", fixture("generated_5.json").to_str().unwrap()]);
    assert_eq!(json(&big)["sparsity"]["engine"], "matroid");
}

#[test]
fn rank_options_are_reported() {
    let file = fixture("loops_rank3.json");
    let out = run(&["rank", file.to_str().unwrap(), "--trials", "2", "--seed", "9"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out)["rigidity"].clone();
    assert_eq!((r["rank"].as_u64(), r["trials"].as_u64(), r["seed"].as_u64()), (Some(15), Some(2), Some(9)));
    assert_eq!(r["exact"], false);

    let exact = json(&run(&["rank", file.to_str().unwrap(), "--exact"]));
    assert_eq!(exact["rigidity"]["rank"], 15);
    assert_eq!(exact["rigidity"]["prime"], Value::Null);
    assert_eq!(exact["rigidity"]["exact"], true);

    let flexible = run(&["rank", fixture("loops_rank1.json").to_str().unwrap()]);
    assert_eq!(flexible.status.code(), Some(1));
    assert_eq!(json(&flexible)["rigidity"]["rank"], 14);
}

#[test]
fn seed_env_var_sets_the_default() {
    let file = fixture("example1.json");
    let from_env = bodybar(&["check", file.to_str().unwrap()]).env("BODYBAR_SEED", "42").output().unwrap();
    assert_eq!(json(&from_env)["rigidity"]["seed"], 42);
    let flag_wins =
        bodybar(&["check", file.to_str().unwrap(), "--seed", "3"]).env("BODYBAR_SEED", "42").output().unwrap();
    assert_eq!(json(&flag_wins)["rigidity"]["seed"], 3);

    let a = bodybar(&["generate", "--bodies", "3"]).env("BODYBAR_SEED", "7").output().unwrap();
    let b = run(&["generate", "--bodies", "3", "--seed", "7"]);
    assert_eq!(a.stdout, b.stdout);
    assert_ne!(a.stdout, run(&["generate", "--bodies", "3"]).stdout);
}

#[test]
fn generate_reduce_replay() {
    let gen = run(&["generate", "--bodies", "2", "--seed", "1"]);
    assert_eq!(gen.status.code(), Some(0));
    let doc = json(&gen);
    assert_eq!(doc["edges"].as_array().unwrap().len(), 9);
    assert_eq!(run_stdin(&["check", "-"], &stdout(&gen)).status.code(), Some(0));

    let reduced = run_stdin(&["reduce", "-"], &stdout(&gen));
    assert_eq!(reduced.status.code(), Some(0));
    assert_eq!(json(&reduced)["steps"].as_array().unwrap().len(), 1);

    let replayed = run_stdin(&["replay", "-"], &stdout(&reduced));
    assert_eq!(replayed.status.code(), Some(0));
    assert_eq!(stdout(&replayed), stdout(&gen));

    let not_tight = run(&["reduce", fixture("two_seeds.json").to_str().unwrap()]);
    assert_eq!(not_tight.status.code(), Some(1));
    let not_sparse = run(&["reduce", fixture("nine_parallel.json").to_str().unwrap()]);
    assert_eq!(not_sparse.status.code(), Some(1));
    assert_eq!(run(&["generate", "--bodies", "0"]).status.code(), Some(2));
}

#[test]
fn induce_and_matrix() {
    let file = fixture("example1.json");
    let induced = json(&run(&["induce", file.to_str().unwrap()]));
    assert_eq!(induced["bodies"].as_array().unwrap().len(), 18);
    assert_eq!(induced["edges"].as_array().unwrap().len(), 51);

    let out = run(&["matrix", file.to_str().unwrap(), "--positions-seed", "5", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let csv = stdout(&out);
    let mut lines = csv.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(header.len(), 1 + 54);
    assert_eq!(&header[..4], &["edge_id", "v:0:x", "v:0:y", "v:0:z"]);
    assert_eq!(header[54], "v:17:z");
    assert_eq!(lines.count(), 51);

    let small = run(&["matrix", file.to_str().unwrap(), "--prime", "1000003"]);
    let p = 1_000_003u64;
    assert!(stdout(&small)
        .lines()
        .skip(1)
        .flat_map(|l| l.split(',').skip(1).map(|x| x.parse::<u64>().unwrap()).collect::<Vec<_>>())
        .all(|x| x < p));
    let again = run(&["matrix", file.to_str().unwrap(), "--prime", "1000003"]);
    assert_eq!(small.stdout, again.stdout);
}

#[test]
fn verify_small_corpus() {
    let out = run(&["verify", "--corpus-size", "50", "--seed", "3"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    let report = json(&out);
    assert_eq!(report["disagreements"], 0);
    let props = report["properties"].as_array().unwrap();
    assert!(props.iter().all(|p| p["failures"] == 0));
    let single = run(&["verify", "--corpus-size", "50", "--seed", "3", "--threads", "1"]);
    assert_eq!(single.stdout, out.stdout);
    assert_eq!(run(&["verify", "--max-bodies", "0"]).status.code(), Some(2));
}
