//! The command-line contract: exit codes, structured output stability,
//! and the report schema.

use std::io::Write as _;

fn run_cli(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv: Vec<String> = std::iter::once("ssem".to_string())
        .chain(args.iter().map(|s| s.to_string()))
        .collect();
    let code = ssem_cli::run(&argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

fn write_temp(name: &str, content: &str) -> String {
    let dir = std::env::temp_dir().join("ssem-cli-tests");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    let mut f = std::fs::File::create(&path).unwrap();
    f.write_all(content.as_bytes()).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn exit_codes_cover_the_contract() {
    // 0: success
    let (code, _, _) = run_cli(&["demo-s2"]);
    assert_eq!(code, 0);
    // 0: finite failure still answers the question
    let prog = write_temp("facts.pl", "p(a).\n");
    let (code, stdout, _) = run_cli(&["solve", &prog, "p(b)"]);
    assert_eq!(code, 0);
    assert!(stdout.contains("status: finitely failed"));
    // 1: a check failed
    let broken = write_temp(
        "broken.pl",
        "pqs(0,_,_,_).\npqs(s(I),Cs,Us,Ds) :- pqs(I,Cs,[_|Us],Ds), pq(s(I),Cs,Us,Ds).\npq(I,[I|_],[I|_],[I|_]).\npq(I,[_|Cs],[_|Us],[_|Ds]) :- pq(I,Cs,Us,Ds).\n",
    );
    let (code, _, _) = run_cli(&["check-correctness", &broken, "--spec", "S"]);
    assert_eq!(code, 1);
    // 2: usage and parse errors
    let (code, _, stderr) = run_cli(&["solve", "--builtin", "nqueens"]);
    assert_eq!(code, 2, "{stderr}");
    let bad = write_temp("bad.pl", "p(X");
    let (code, _, stderr) = run_cli(&["solve", &bad, "p(Y)"]);
    assert_eq!(code, 2);
    assert!(stderr.contains("parse error at 1:4"), "{stderr}");
    let (code, _, _) = run_cli(&["check-correctness", "--builtin", "nqueens", "--spec", "nope"]);
    assert_eq!(code, 2);
    let (code, _, _) = run_cli(&["frobnicate"]);
    assert_eq!(code, 2);
    // 3: a bound was exhausted
    let (code, _, _) = run_cli(&[
        "s-model",
        "--builtin",
        "nqueens",
        "--iters",
        "9",
        "--max-atoms",
        "3",
    ]);
    assert_eq!(code, 3);
    let loops = write_temp("loops.pl", "loop(X) :- loop(X).\n");
    let (code, stdout, _) = run_cli(&["solve", &loops, "loop(a)", "--depth", "8"]);
    assert_eq!(code, 3);
    assert!(stdout.contains("depth-limited"));
    // --help is not an error
    let (code, stdout, _) = run_cli(&["--help"]);
    assert_eq!(code, 0);
    assert!(stdout.contains("check-correctness"));
}

#[test]
fn structured_output_is_byte_identical_across_runs_and_jobs() {
    let args = [
        "--format",
        "kv",
        "check-correctness",
        "--builtin",
        "nqueens",
        "--spec",
        "S",
    ];
    let (c1, first, _) = run_cli(&args);
    let (c2, second, _) = run_cli(&args);
    assert_eq!(c1, 0);
    assert_eq!(c1, c2);
    assert_eq!(first, second);

    let mut with_jobs = vec!["--jobs", "4"];
    with_jobs.extend_from_slice(&args);
    let (c3, third, _) = run_cli(&with_jobs);
    assert_eq!(c3, 0);
    assert_eq!(first, third, "worker count must not change the output");

    // Same for a failing run with counterexamples.
    let broken = write_temp(
        "broken2.pl",
        ssem::nqueens::NQUEENS_MUT_SWAP_DIAGONALS_SRC,
    );
    let fail_args = ["--format", "kv", "check-correctness", &broken, "--spec", "S"];
    let (f1, out1, _) = run_cli(&fail_args);
    let mut fail_jobs = vec!["--jobs", "3"];
    fail_jobs.extend_from_slice(&fail_args);
    let (f2, out2, _) = run_cli(&fail_jobs);
    assert_eq!(f1, 1);
    assert_eq!(f2, 1);
    assert_eq!(out1, out2);
}

#[test]
fn reports_carry_the_schema_version() {
    let (_, kv, _) = run_cli(&["--format", "kv", "demo-s2"]);
    assert!(kv.starts_with("v: v1\ncommand: demo-s2\n"), "{kv}");

    let (_, json, _) = run_cli(&["--format", "json", "queens", "--n", "4", "--oracle"]);
    let parsed: serde_json::Value = serde_json::from_str(json.trim()).unwrap();
    assert_eq!(parsed["v"], "v1");
    assert_eq!(parsed["command"], "queens");
    assert_eq!(parsed["solutions"], 2);
    assert_eq!(parsed["oracle_match"], true);
}

#[test]
fn check_reports_carry_verdicts_counterexamples_and_witnesses() {
    // A passing correctness report names the verdict and the sample size.
    let (_, kv, _) = run_cli(&[
        "--format",
        "kv",
        "check-correctness",
        "--builtin",
        "nqueens",
        "--spec",
        "S",
    ]);
    assert!(kv.contains("verdict: pass"), "{kv}");
    assert!(kv.contains("sample_size: "), "{kv}");

    // A failing one carries the violating head instance in printed form.
    let broken = write_temp("broken3.pl", ssem::nqueens::NQUEENS_MUT_DROP_SHIFT_SRC);
    let (code, kv, _) = run_cli(&["--format", "kv", "check-correctness", &broken, "--spec", "S"]);
    assert_eq!(code, 1);
    assert!(kv.contains("verdict: fail"));
    assert!(kv.contains("counterexample.0.head: pqs("), "{kv}");

    // A completeness report lists each target with its witness clause and
    // levels.
    let (_, kv, _) = run_cli(&[
        "--format",
        "kv",
        "check-completeness",
        "--builtin",
        "nqueens",
        "--spec",
        "S0",
    ]);
    assert!(kv.contains("witness.0.atom: "), "{kv}");
    assert!(kv.contains("witness.0.clause: "), "{kv}");
    assert!(kv.contains("witness.0.level: "), "{kv}");
    assert!(kv.contains("witness.0.body_levels: "), "{kv}");
    let targets = kv
        .lines()
        .find_map(|l| l.strip_prefix("targets_checked: "))
        .unwrap()
        .parse::<usize>()
        .unwrap();
    let witness_lines = kv.lines().filter(|l| l.contains(".atom: ") && l.starts_with("witness.")).count();
    assert_eq!(targets, witness_lines);
}

#[test]
fn solve_reports_answers_with_substitutions() {
    let (code, stdout, _) = run_cli(&[
        "solve",
        "--builtin",
        "nqueens",
        "pqs(4, [A,B,C,D], U, V)",
        "--depth",
        "64",
    ]);
    assert_eq!(code, 0);
    assert!(stdout.contains("answers: 2"));
    assert!(stdout.contains("A = 2, B = 4, C = 1, D = 3"));
    assert!(stdout.contains("A = 3, B = 1, C = 4, D = 2"));
}

#[test]
fn herbrand_and_smodel_agree_on_the_demo_pair() {
    let p1 = write_temp("p1.pl", "p(f(X)). p(f(a)).\n");
    let p2 = write_temp("p2.pl", "p(f(X)).\n");
    let herb = |path: &str| {
        let (code, out, _) = run_cli(&[
            "--format",
            "kv",
            "herbrand",
            path,
            "--iters",
            "4",
            "--depth",
            "4",
            "--alphabet",
            "a/0,f/1",
        ]);
        assert_eq!(code, 0);
        out
    };
    let h1 = herb(&p1);
    let h2 = herb(&p2);
    let atoms = |s: &str| {
        s.lines()
            .filter(|l| l.starts_with("atom."))
            .map(str::to_string)
            .collect::<Vec<_>>()
    };
    assert_eq!(atoms(&h1), atoms(&h2));
    assert_eq!(atoms(&h1).len(), 4);

    let (_, m1, _) = run_cli(&["s-model", &p1]);
    let (_, m2, _) = run_cli(&["s-model", &p2]);
    assert!(m1.contains("classes: 2"));
    assert!(m2.contains("classes: 1"));
}

#[test]
fn jobs_default_comes_from_the_environment() {
    // The variable only sets the worker count; results stay identical.
    let args = [
        "--format",
        "kv",
        "check-correctness",
        "--builtin",
        "nqueens",
        "--spec",
        "S",
    ];
    let (_, baseline, _) = run_cli(&args);
    std::env::set_var("SSEM_JOBS", "3");
    let (code, with_env, _) = run_cli(&args);
    std::env::remove_var("SSEM_JOBS");
    assert_eq!(code, 0);
    assert_eq!(baseline, with_env);
}

#[test]
fn oracle_size_is_guarded() {
    let (code, _, stderr) = run_cli(&["queens", "--n", "11", "--oracle"]);
    assert_eq!(code, 2);
    assert!(stderr.contains("oracle"), "{stderr}");
}

#[test]
fn smodel_filters_by_predicate() {
    let (code, out, _) = run_cli(&[
        "s-model",
        "--builtin",
        "nqueens",
        "--iters",
        "3",
        "--pred",
        "pq",
    ]);
    assert_eq!(code, 0);
    assert!(out.lines().filter(|l| l.starts_with("pq(")).count() >= 2);
    assert!(!out.contains("pqs("));
}
