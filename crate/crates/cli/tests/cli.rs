//! Black-box tests of the binary: output text, exit codes, determinism.

use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_padic-newton"))
        .args(args)
        .env_remove("PADIC_NEWTON_CAP")
        .output()
        .expect("binary should run")
}

fn run_with_env(args: &[&str], key: &str, value: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_padic-newton"))
        .args(args)
        .env_remove("PADIC_NEWTON_CAP")
        .env(key, value)
        .output()
        .expect("binary should run")
}

fn stdout(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).expect("utf-8 stdout")
}

fn stderr(output: &Output) -> String {
    String::from_utf8(output.stderr.clone()).expect("utf-8 stderr")
}

fn code(output: &Output) -> i32 {
    output.status.code().expect("terminated normally")
}

#[test]
fn np_reports_the_degree_six_example() {
    let out = run(&["np", "--prime", "5", "--poly", "5 + x^2 + 125*x^6"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("vertices: (0, 1) (2, 0) (6, 3)"));
    assert!(text.contains("segments: slope -1/2 length 2; slope 3/4 length 4"));
    assert!(text.contains("purity: not pure (2 segments)"));
    assert!(text.contains("root valuations: 1/2 x 2, -3/4 x 4"));
}

#[test]
fn np_monomial_has_no_segments() {
    let out = run(&["np", "--prime", "2", "--poly", "x^3"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("vertices: (3, 0)"));
    assert!(text.contains("no segments"));
    assert!(text.contains("root valuations: inf x 3"));
}

#[test]
fn np_rejects_a_composite_prime_as_domain_error() {
    let out = run(&["np", "--prime", "4", "--poly", "x + 1"]);
    assert_eq!(code(&out), 3);
    assert!(stderr(&out).contains("4 is not prime"));
}

#[test]
fn np_rejects_the_zero_polynomial_as_domain_error() {
    let out = run(&["np", "--prime", "2", "--poly", "0"]);
    assert_eq!(code(&out), 3);
}

#[test]
fn malformed_polynomial_is_a_usage_error() {
    let out = run(&["np", "--prime", "2", "--poly", "x^^2"]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("cannot parse polynomial"));
}

#[test]
fn prime_symbol_substitution_matches_literal_input() {
    let symbolic = run(&["np", "--prime", "5", "--poly", "p^2 + x + p^2*x^2"]);
    let literal = run(&["np", "--prime", "5", "--poly", "25 + x + 25*x^2"]);
    assert_eq!(code(&symbolic), 0);
    assert_eq!(stdout(&symbolic), stdout(&literal));
}

#[test]
fn np_emits_versioned_json() {
    let out = run(&["np", "--prime", "5", "--poly", "5 + x^2 + 125*x^6", "--json"]);
    assert_eq!(code(&out), 0);
    let value: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("valid JSON");
    assert_eq!(value["schema"], 1);
    assert_eq!(value["polygon"]["prime"], "5");
    assert_eq!(value["polygon"]["vertices"][1][0], 2);
    assert_eq!(value["polygon"]["segments"][0]["slope"], "-1/2");
}

#[test]
fn compose_confirms_the_stretch_prediction() {
    let out = run(&["compose", "--prime", "5", "--f", "5+x^2+125*x^6", "--g", "x^3+5"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("hypotheses: satisfied"));
    assert!(text.contains("predicted vertices: (0, 1) (6, 0) (18, 3)"));
    assert!(text.contains("verdict: prediction matches"));
}

#[test]
fn compose_reports_violated_hypotheses_with_the_actual_polygon() {
    let out = run(&["compose", "--prime", "5", "--f", "p^2+x+p^2*x^2", "--g", "p+x^2"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("hypotheses violated: |slope 2| >= r = 1"));
    assert!(text.contains("vertices: (0, 1) (2, 0) (4, 2)"));
    assert!(!text.contains("verdict"));
}

#[test]
fn compose_far_iterates_keep_small_root_valuations() {
    // composing with x^20 + 5 squeezes every root valuation magnitude
    // below 1/10, down from the original 3/4
    let out = run(&["compose", "--prime", "5", "--f", "5+x^2+125*x^6", "--g", "x^20+5"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("slope -1/40 length 40; slope 3/80 length 80"));
    assert!(text.contains("verdict: prediction matches"));
}

#[test]
fn compose_past_the_cap_is_a_domain_error() {
    let flag = run(&[
        "compose", "--prime", "3", "--f", "1+x^6", "--g", "x^3+3", "--iterate", "11",
    ]);
    assert_eq!(code(&flag), 3);
    assert!(stderr(&flag).contains("exceeds the degree cap 100000"));

    let env = run_with_env(
        &["compose", "--prime", "3", "--f", "1+x^6", "--g", "x^3+3", "--iterate", "2"],
        "PADIC_NEWTON_CAP",
        "50",
    );
    assert_eq!(code(&env), 3);
    assert!(stderr(&env).contains("exceeds the degree cap 50"));
}

#[test]
fn unparseable_cap_environment_is_a_usage_error() {
    let out = run_with_env(
        &["compose", "--prime", "3", "--f", "1+x", "--g", "x+3"],
        "PADIC_NEWTON_CAP",
        "banana",
    );
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("PADIC_NEWTON_CAP"));
}

#[test]
fn check_walks_the_purity_ladder() {
    let dumas = run(&["check", "--prime", "2", "--poly", "x^2 + 2"]);
    assert_eq!(code(&dumas), 0);
    assert!(stdout(&dumas).contains("purity: Dumas-irreducible (height 1 coprime to degree 2)"));
    assert!(stdout(&dumas).contains("dumas certificate: height 1 coprime to degree 2"));

    let pure = run(&["check", "--prime", "2", "--poly", "x^4 + 4"]);
    assert!(stdout(&pure).contains("purity: 2^2-pure"));
    assert!(stdout(&pure).contains("dumas certificate: none"));

    let scaled = run(&["check", "--prime", "2", "--poly", "2*x^2 - 4"]);
    assert!(stdout(&scaled).contains("Dumas-irreducible"));
}

#[test]
fn certify_exits_zero_only_when_certified() {
    let certified = run(&["certify", "--exp-n", "4", "--primes", "2"]);
    assert_eq!(code(&certified), 0);
    assert!(stdout(&certified).contains("verdict: certified irreducible"));

    let inconclusive = run(&["certify", "--poly", "x^4 - 5*x^2 + 6", "--primes", "2"]);
    assert_eq!(code(&inconclusive), 1);
    assert!(stdout(&inconclusive).contains("verdict: inconclusive"));

    let partial = run(&["certify", "--poly", "x^4 + 4", "--primes", "2"]);
    assert_eq!(code(&partial), 1);
    assert!(stdout(&partial).contains("degree divisible by 2"));
}

#[test]
fn certify_composition_scales_the_divisor() {
    let out = run(&[
        "certify", "--exp-n", "4", "--compose", "x^5+8", "--iterate", "1", "--primes", "2",
    ]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("degree: 20"));
    assert!(text.contains("combined divisor: 20"));
    assert!(text.contains("hypotheses: satisfied"));
    assert!(text.contains("slope check at 2: match"));
}

#[test]
fn certify_composition_rejects_foreign_primes() {
    let out = run(&[
        "certify", "--exp-n", "4", "--compose", "x^5+8", "--primes", "3",
    ]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("primes dividing 4"));
}

#[test]
fn certify_poly_without_primes_is_a_usage_error() {
    let out = run(&["certify", "--poly", "x^2 + 2"]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("--primes"));
}

#[test]
fn certify_json_carries_the_certificate_shape() {
    let out = run(&["certify", "--exp-n", "4", "--primes", "2", "--json"]);
    assert_eq!(code(&out), 0);
    let value: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("valid JSON");
    assert_eq!(value["schema"], 1);
    assert_eq!(value["degree"], 4);
    assert_eq!(value["combined_divisor"], 4);
    assert_eq!(value["verdict"], "certified_irreducible");
    assert_eq!(value["primes"][0]["p"], "2");
    assert_eq!(value["primes"][0]["slopes"][0], "-3/4");
    assert_eq!(value["primes"][0]["forced_divisor"], 4);
}

#[test]
fn exp_taylor_confirms_the_slope_formula() {
    let out = run(&["exp-taylor", "--n", "10", "--prime", "2"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("segments: slope -7/8 length 8; slope -1/2 length 2"));
    assert!(text.contains("slope formula: matches"));
}

#[test]
fn verify_passes_and_ignores_parallelism_width() {
    let narrow = run(&["verify", "--theorem", "sum", "--trials", "300", "--seed", "1", "--jobs", "1"]);
    let wide = run(&["verify", "--theorem", "sum", "--trials", "300", "--seed", "1", "--jobs", "8"]);
    assert_eq!(code(&narrow), 0);
    assert_eq!(code(&wide), 0);
    assert_eq!(stdout(&narrow), stdout(&wide));
    assert!(stdout(&narrow).contains("theorem sum: 300/300 trials passed (seed 1)"));
}

#[test]
fn verify_rejects_unknown_theorems() {
    let out = run(&["verify", "--theorem", "bogus"]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("power-purity"));
}

#[test]
fn render_writes_identical_svg_files_across_runs() {
    let dir = tempfile::tempdir().expect("temp dir");
    let first = dir.path().join("a.svg");
    let second = dir.path().join("b.svg");
    for path in [&first, &second] {
        let out = run(&[
            "render",
            "--prime",
            "5",
            "--poly",
            "5 + x^2 + 125*x^6",
            "--overlay",
            "p + x^2",
            "--svg",
            path.to_str().unwrap(),
        ]);
        assert_eq!(code(&out), 0);
        assert!(stdout(&out).is_empty(), "svg output goes to the file only");
    }
    let a = std::fs::read(&first).expect("first file");
    let b = std::fs::read(&second).expect("second file");
    assert!(!a.is_empty());
    assert_eq!(a, b);
    assert!(std::str::from_utf8(&a).unwrap().starts_with("<svg "));
}

#[test]
fn render_defaults_to_ascii_on_stdout() {
    let out = run(&["render", "--prime", "2", "--poly", "x^2 + 2"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.starts_with("x: 0..2  y: 0..1  p = 2\n"));
    assert!(text.contains('*'));
}

#[test]
fn render_refuses_json() {
    let out = run(&["render", "--prime", "2", "--poly", "x^2 + 2", "--json"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn conflicting_output_flags_are_a_usage_error() {
    let out = run(&["np", "--prime", "2", "--poly", "x + 2", "--json", "--ascii"]);
    assert_eq!(code(&out), 2);
}
