use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_diagonals")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn diag_prints_family_coefficients() {
    let o = run(&["diag", "--expr", "(1-x-y)^(1/3)/(1-x-y-z)", "--order", "6"]);
    assert_eq!(o.status.code(), Some(0));
    let lines: Vec<String> = stdout(&o).lines().map(String::from).collect();
    assert_eq!(lines.len(), 7);
    assert_eq!(&lines[..3], ["1", "40/9", "5236/81"]);
    assert!(String::from_utf8_lossy(&o.stderr).contains("diag --expr"));
}

#[test]
fn modp_guess_mod2() {
    let o =
        run(&["modp", "--spec", "3F2([1/9,4/9,5/9],[1/3,1];729)", "--p", "2", "--r", "1", "-N", "600000", "--guess"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().next(), Some("Multiplicative(64, 1 + x^2)"));
}

#[test]
fn modp_verify_negative_control() {
    let spec = "3F2([1/9,4/9,5/9],[1/3,1];729)";
    let o = run(&[
        "modp",
        "--spec",
        spec,
        "--p",
        "2",
        "-N",
        "20000",
        "--verify",
        "multiplicative",
        "--s",
        "64",
        "--a",
        "1,1",
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("fails at degree 1"));
}

#[test]
fn modp_binary_dump_round_trips() {
    let dir = std::env::temp_dir().join(format!("diagonals-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("f.bin");
    let p = path.to_str().unwrap();
    let o = run(&[
        "modp",
        "--spec",
        "2F1([1/2,1/2],[1];16)",
        "--p",
        "3",
        "--r",
        "2",
        "-N",
        "50",
        "--format",
        "binary",
        "-o",
        p,
    ]);
    assert_eq!(o.status.code(), Some(0));
    let f = diagonals::modp::read_binary(std::fs::File::open(&path).unwrap()).unwrap();
    assert_eq!((f.p(), f.r(), f.degree()), (3, 2, 50));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn identities_builtin_passes_and_corrupted_file_fails() {
    let o = run(&["identities", "--suite", "builtin"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert_eq!(out.lines().count(), 14);
    assert!(out.lines().next().unwrap().contains("\"version\""));

    let mut cases = diagonals::identity::builtin_suite();
    cases.truncate(2);
    cases[1].sides[1] = diagonals::identity::Recipe::hyp("3F2([2/9,5/9,8/9],[2/3,1];26)");
    let dir = std::env::temp_dir().join(format!("diagonals-cases-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("cases.json");
    std::fs::write(&path, serde_json::to_string(&cases).unwrap()).unwrap();
    let o = run(&["identities", "--suite", "builtin", "--cases", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("\"first_mismatch\":1"));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn zeilberger_and_checks() {
    let o = run(&["zeilberger", "--summand", "binomial-squared"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains(r#""recurrence":["-4*n - 2","n + 1"]"#));
    let o = run(&["recu-check", "--a", "2", "--b", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let o = run(&["ode-check", "--a", "1", "--b", "7", "--order", "30"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn gb_and_hyp() {
    let o = run(&["gb", "--spec", "3F2([2/9,5/9,8/9],[2/3,1];1)", "--order", "40"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains(r#""witness":{"c":"729","d":"1"}"#));
    let o = run(&["hyp", "--spec", "3F2([1/3,1/3,1/3],[1,1];1)", "--height"]);
    assert_eq!(stdout(&o).trim(), "3");
    let o = run(&["hadamard", "--series", "(1-x)^(-1/2)", "--series", "2F1([1/2,1],[1];1)", "--order", "2"]);
    assert_eq!(stdout(&o), "1\n1/4\n9/64\n");
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(run(&["bogus"]).status.code(), Some(2));
    assert_eq!(run(&["diag", "--expr", "(1-x", "--order", "3"]).status.code(), Some(2));
    assert_eq!(run(&["hyp", "--spec", "2F1([1],[0];1)"]).status.code(), Some(2));
    assert_eq!(run(&["modp", "--spec", "1F0([1],[];1)", "--p", "4", "-N", "3"]).status.code(), Some(2));
}

#[test]
fn resource_errors_exit_3() {
    assert_eq!(run(&["modp", "--spec", "1F0([1],[];1)", "--p", "2", "--r", "70", "-N", "3"]).status.code(), Some(3));
    assert_eq!(run(&["expand", "--expr", "1/(1-x-y-z)", "--order", "1000"]).status.code(), Some(3));
}
