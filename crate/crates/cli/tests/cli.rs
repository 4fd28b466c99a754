use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

fn example(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("examples").join(name)
}

fn ct(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ct")).args(args).env("CT_COLOR", "0").output().expect("ct runs")
}

fn ct_with_stdin(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_ct"))
        .args(args)
        .env("CT_COLOR", "0")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("ct runs");
    child.stdin.take().expect("stdin").write_all(input.as_bytes()).expect("write");
    child.wait_with_output().expect("ct exits")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf-8")
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).expect("utf-8")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

#[test]
fn check_prints_one_tensor_bot() {
    let o = ct(&["check", example("one_tensor_bot.ct").to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert_eq!(stdout(&o), "x : 1 * bot\n");
}

#[test]
fn trans_prints_the_cut_reduction() {
    let o = ct(&["trans", example("cut_close_wait.ct").to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "tau  ==>  0 | 0\n");
}

#[test]
fn check_against_a_wrong_type_prints_a_diff() {
    let o = ct(&["check", "--expect", "x:1", example("wait.ct").to_str().unwrap()]);
    assert_eq!(code(&o), 1);
    let out = stdout(&o);
    assert!(out.contains("- x : 1\n"), "{out}");
    assert!(out.contains("+ x : bot\n"), "{out}");
    assert!(stderr(&o).starts_with("CT-ERR:type: "), "{}", stderr(&o));
}

#[test]
fn check_against_the_right_type_succeeds() {
    let o = ct(&["check", "--expect", "x : bot", "-e", "wait x.0"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "x : bot\n");
}

#[test]
fn exit_codes_and_error_classes() {
    let cases: [(&[&str], i32, &str); 6] = [
        (&["check", "-e", "wait x.(close y | close z)"], 1, "type"),
        (&["check", "-e", "wait x."], 2, "parse"),
        (&["check", "--expect", "x :", "-e", "0"], 2, "parse"),
        (&["explore", "--budget", "1", "-e", "!x(y).close y | wait z.0"], 3, "budget"),
        (&["check"], 4, "usage"),
        (&["run", "--seed", "1", "-e", "0"], 4, "usage"),
    ];
    for (args, want, class) in cases {
        let o = ct(args);
        assert_eq!(code(&o), want, "{args:?}: {}", stderr(&o));
        let first = stderr(&o).lines().next().unwrap_or("").to_string();
        assert!(first.starts_with(&format!("CT-ERR:{class}: ")), "{args:?}: {first}");
    }
}

#[test]
fn missing_file_is_a_usage_error() {
    let o = ct(&["check", "no/such/file.ct"]);
    assert_eq!(code(&o), 4);
    assert!(stderr(&o).starts_with("CT-ERR:usage: "));
}

#[test]
fn unknown_script_label_is_a_usage_error() {
    let o = ct(&["step", "-e", "close x", "--script", "y[]"]);
    assert_eq!(code(&o), 4);
    assert!(stderr(&o).contains("available: x[]"), "{}", stderr(&o));
}

#[test]
fn json_check_is_a_derivation_tree() {
    let o = ct(&["check", "--json", "-e", "wait x.close y"]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["rule"], "bot");
    assert_eq!(v["conclusion"]["type"], serde_json::json!([{"x": "bot", "y": "1"}]));
    assert_eq!(v["premises"][0]["rule"], "1");
}

#[test]
fn json_trans_lines() {
    let o = ct(&["trans", "--json", example("cut_close_wait.ct").to_str().unwrap()]);
    let v: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(v["label"], "tau");
    assert_eq!(v["process"], "0 | 0");
    assert_eq!(v["type"], serde_json::json!([]));
}

#[test]
fn script_and_interactive_reach_the_same_state() {
    let file = example("one_tensor_bot.ct");
    let file = file.to_str().unwrap();
    let script = ct(&["step", file, "--script", "x[y:1;bot]", "--script", "x()", "--script", "y[]"]);
    assert_eq!(code(&script), 0, "{}", stderr(&script));
    let by_label = ct_with_stdin(&["step", "--interactive", file], "x[y:1;bot]\nx()\ny[]\n");
    let by_number = ct_with_stdin(&["step", "--interactive", file], "1\n2\n1\n");
    let last = |o: &Output| stdout(o).lines().last().unwrap_or("").to_string();
    assert_eq!(last(&script), "final: 0 | 0 |- (empty)");
    assert_eq!(last(&by_label), last(&script));
    assert_eq!(last(&by_number), last(&script));
    assert!(stdout(&by_label).contains("terminated"));
}

#[test]
fn interactive_session_quits_and_skips_bad_input() {
    let o = ct_with_stdin(&["step", "--interactive", "-e", "wait x.0"], "7\nnot a label\nq\n");
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    assert!(out.contains("no entry 7"));
    assert!(out.ends_with("final: wait x.0 |- x : bot\n"), "{out}");
}

#[test]
fn type_input_in_a_script_takes_the_written_witness() {
    let o = ct(&["step", "-e", "x(type X).x(a).x[b].(link [X] a b | close x)", "--script", "x(type bot)"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert!(stdout(&o).contains("link [bot] a b"), "{}", stdout(&o));
}

#[test]
fn run_stops_at_quiescence_and_reports_observables() {
    let o = ct(&["run", "-e", "new (x,y){ close x | wait y.close z }"]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    assert!(out.starts_with("tau  ==>  "), "{out}");
    assert!(out.contains("quiescent after 1 step:"), "{out}");
    assert!(out.contains("enabled: z[]"), "{out}");
}

#[test]
fn run_random_is_deterministic_per_seed() {
    let args = ["run", "--policy", "random", "--seed", "11", example("server.ct").to_str().unwrap()].map(String::from);
    let args: Vec<&str> = args.iter().map(String::as_str).collect();
    let a = ct(&args);
    let b = ct(&args);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    assert!(stdout(&a).contains("0 | 0 | 0 |- (empty)"));
}

#[test]
fn run_budget() {
    let o = ct(&["run", "--max-steps", "1", example("server.ct").to_str().unwrap()]);
    assert_eq!(code(&o), 3);
    assert!(stderr(&o).starts_with("CT-ERR:budget: "));
}

#[test]
fn explore_finds_a_terminating_trace() {
    let o = ct(&["explore", "--json", example("server.ct").to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let steps = v["steps"].as_array().unwrap();
    assert_eq!(steps.last().unwrap()["process"], "0 | 0 | 0");
}

#[test]
fn graph_writes_dot() {
    let dir = std::env::temp_dir().join(format!("ct-graph-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("lts.dot");
    let o = ct(&["graph", example("cut_close_wait.ct").to_str().unwrap(), "--out", path.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let dot = std::fs::read_to_string(&path).unwrap();
    std::fs::remove_dir_all(&dir).unwrap();
    assert_eq!(
        dot,
        "digraph lts {\n  n0 [label=\"new (_0,_1){ close _0 | wait _1.0 }\"];\n  n1 [label=\"0 | 0\"];\n  n0 -> n1 [label=\"tau\"];\n}\n"
    );
}

#[test]
fn graph_of_a_server_is_truncated() {
    let o = ct(&["graph", "--max-states", "3", "-e", "!x(y).close y"]);
    assert_eq!(code(&o), 3);
    assert!(stdout(&o).starts_with("digraph lts {"));
}

#[test]
fn gen_output_reparses_and_is_deterministic() {
    let a = ct(&["gen", "--seed", "5", "--depth", "4", "--count", "5"]);
    let b = ct(&["gen", "--seed", "5", "--depth", "4", "--count", "5"]);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    let out = stdout(&a);
    assert_eq!(out.lines().count(), 5);
    for line in out.lines() {
        let (p, t) = line.rsplit_once(" |- ").unwrap();
        let o = ct(&["check", "--expect", t, "-e", p]);
        assert_eq!(code(&o), 0, "{line}: {}", stderr(&o));
    }
}

#[test]
fn invalid_flags_fail_before_any_work() {
    let o = ct(&["gen", "--depth", "0"]);
    assert_eq!(code(&o), 4);
    let o = ct(&["step", "--interactive", "--script", "x[]", "-e", "close x"]);
    assert_eq!(code(&o), 4);
    let o = ct(&["check", "-e", "0", "--expect", "x : )"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn help_exits_zero() {
    let o = ct(&["--help"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("check"));
}
