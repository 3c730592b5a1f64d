use std::io::Write;
use std::process::{Command, Output, Stdio};

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_impartial"));
    c.env_remove("IMPARTIAL_SEED");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn run_stdin(args: &[&str], input: &str) -> Output {
    let mut child = bin()
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&o.stdout)))
}

#[test]
fn gen_cycle_text() {
    let o = run(&["gen", "family=cycle", "n=7"]);
    assert!(o.status.success());
    let text = String::from_utf8(o.stdout).unwrap();
    assert_eq!(text.lines().last(), Some("7; 7,1,2,3,4,5,6"));
    assert!(text.starts_with("# impartial "));
}

#[test]
fn gen_output_pipes_into_eval() {
    let g = run(&["gen", "family=ub", "n=7", "i=0"]);
    let o = run_stdin(&["eval", "rd"], &String::from_utf8(g.stdout).unwrap());
    assert!(o.status.success());
    let v = json(&o);
    assert_eq!(v["result"]["graph"], "7; 2,1,2,3,4,5,6");
    assert_eq!(v["result"]["ratio"], "9/14");
}

#[test]
fn lower_bound_family_size() {
    let o = run(&["gen", "family=lb", "delta=4", "nprime=2", "--format", "json"]);
    assert_eq!(json(&o)["result"]["n"], 11);
}

#[test]
fn eval_rd_on_two_cycle() {
    let o = run_stdin(&["eval", "--mech", "rd"], "2; 2,1\n");
    let v = json(&o);
    assert_eq!(v["result"]["distribution"], serde_json::json!(["1/2", "1/2"]));
    assert_eq!(v["result"]["ratio"], "1");
    assert_eq!(v["version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(v["config"]["mechanism"], "rd");
}

#[test]
fn eval_mix_equals_rd_below_six() {
    let g = "5; 3,5,1,1,2";
    let mix = json(&run_stdin(&["eval", "mix", "--exact"], g));
    let rd = json(&run_stdin(&["eval", "rd", "--exact"], g));
    assert_eq!(mix["result"]["distribution"], rd["result"]["distribution"]);
}

#[test]
fn eval_partial_graph() {
    let o = run_stdin(&["eval", "prug"], "3; 2,0,2\n");
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v = json(&o);
    assert!(v["result"]["nobody"].is_string());
    let o = run_stdin(&["eval", "rd"], "3; 2,0,2\n");
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn sampled_eval_is_deterministic() {
    let args = [
        "eval",
        "perm",
        "--family",
        "family=lb delta=2 nprime=1",
        "--samples",
        "100000",
        "--seed",
        "7",
    ];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let c = bin().args(&args[..6]).env("IMPARTIAL_SEED", "7").output().unwrap();
    assert_eq!(a.stdout, c.stdout);
    assert_eq!(json(&a)["config"]["seed"], 7);
}

#[test]
fn sampling_without_seed_is_usage_error() {
    let o = run(&["eval", "perm", "--family", "family=cycle n=4", "--samples", "10"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("--seed"));
}

#[test]
fn verify_passes() {
    for args in [
        &["verify", "impartial", "--mech", "perm", "--n", "4"][..],
        &["verify", "bounds", "--mech", "mix", "--n", "6"],
        &["verify", "ub-chain", "--mech", "perm", "--n", "6"],
        &["verify", "correlation"],
        &["verify", "lemma3", "--n", "5"],
        &["verify", "tightness", "--nprime", "1,2"],
    ] {
        let o = run(args);
        assert_eq!(
            o.status.code(),
            Some(0),
            "{args:?}: {}",
            String::from_utf8_lossy(&o.stderr)
        );
        assert_eq!(json(&o)["passed"], true, "{args:?}");
    }
}

#[test]
fn sampled_impartiality_and_correlation_batch() {
    let o = run(&[
        "verify",
        "impartial",
        "--mech",
        "prugd",
        "--n",
        "6",
        "--samples",
        "20",
        "--seed",
        "3",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let o = run(&[
        "verify",
        "correlation",
        "--count",
        "5",
        "--seed",
        "1",
        "--format",
        "csv",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&o.stdout).contains("violations,0"));
}

#[test]
fn precondition_failure_exits_one() {
    let o = run(&["verify", "ub-chain", "--mech", "prug", "--n", "6"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn capacity_exits_three() {
    let o = run(&["worst-case", "--mech", "rd", "--n", "7"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("cap of 6"));
    let o = run(&["eval", "perm", "--family", "family=cycle n=11"]);
    assert_eq!(o.status.code(), Some(3));
    let o = run(&["eval", "perm", "--family", "family=cycle n=4", "--cap", "3"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["eval", "nope"]).status.code(), Some(2));
    assert_eq!(run(&["gen", "family=ub", "n=7", "i=9"]).status.code(), Some(2));
    assert_eq!(run(&["eval", "rd", "--graph", "/nonexistent"]).status.code(), Some(2));
}

#[test]
fn figure3_csv_rows() {
    let o = run(&["figure3"]);
    let text = String::from_utf8(o.stdout).unwrap();
    let rows: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(
        rows[0],
        "delta,case,perm,prugd,mix,perm_decimal,prugd_decimal,mix_decimal"
    );
    assert_eq!(rows.len(), 1 + 15);
    assert!(rows[1].starts_with("2,any,2/3,65/96,2105/3147,"));
    assert!(rows[1].contains("0.668891"));
    assert!(rows.iter().any(|r| r.starts_with("4,any,7/10,")));
}

#[test]
fn csv_decimals_round_trip() {
    let o = run(&["figure3", "--delta-max", "6"]);
    let text = String::from_utf8(o.stdout).unwrap();
    for line in text.lines().skip(3) {
        let f: Vec<&str> = line.split(',').collect();
        for (exact, dec) in [(f[2], f[5]), (f[3], f[6]), (f[4], f[7])] {
            let (p, q) = exact.split_once('/').unwrap_or((exact, "1"));
            let x = p.parse::<f64>().unwrap() / q.parse::<f64>().unwrap();
            assert!((x - dec.parse::<f64>().unwrap()).abs() < 1e-12, "{line}");
        }
    }
}

#[test]
fn worst_case_json() {
    let o = run(&["worst-case", "--mech", "rd", "--n", "4", "--jobs", "2"]);
    let v = json(&o);
    assert_eq!(v["result"]["min"]["ratio"], "3/4");
    assert_eq!(v["config"]["jobs"], 2);
}
