//! The `brauer` binary: outputs, record keys and exit codes.

use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_brauer"))
        .args(args)
        .env_remove("BRAUER_LOG")
        .output()
        .expect("run binary")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn code(args: &[&str]) -> i32 {
    run(args).status.code().unwrap()
}

fn records(args: &[&str]) -> Vec<(String, String)> {
    let mut full = vec!["--format", "records"];
    full.extend_from_slice(args);
    stdout(&run(&full))
        .lines()
        .map(|l| {
            let (k, v) = l.split_once(" = ").unwrap_or_else(|| panic!("not a record: {l}"));
            (k.to_string(), v.to_string())
        })
        .collect()
}

fn value(recs: &[(String, String)], key: &str) -> String {
    recs.iter()
        .find(|(k, _)| k == key)
        .unwrap_or_else(|| panic!("missing key {key}"))
        .1
        .clone()
}

#[test]
fn hilbert_symbol_at_the_real_place() {
    let o = run(&["hilbert", "-1", "-1", "--place", "real"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "-1");
    assert_eq!(stdout(&run(&["hilbert", "2", "3", "--place", "2"])).trim(), "-1");
    assert_eq!(stdout(&run(&["hilbert", "2", "7", "--place", "7"])).trim(), "1");
    assert_eq!(value(&records(&["hilbert", "-1", "-1", "--place", "real"]), "symbol"), "-1");
}

#[test]
fn fiber_records() {
    let r = records(&["fibers"]);
    for (place, kind) in [("t", "I_2"), ("t-1", "I_6"), ("t+1", "I_6"), ("t-3", "I_2"), ("t+3", "I_2"), ("infinity", "I_6")] {
        assert_eq!(value(&r, &format!("fiber.{place}")), kind);
    }
    assert_eq!(value(&r, "fiber.infinity.valuations"), "(0, 0, 6)");
    assert_eq!(value(&r, "surface.euler"), "24");
    assert_eq!(value(&r, "surface.chi"), "2");
    assert_eq!(value(&r, "surface.k3"), "true");
    assert_eq!(value(&r, "surface.trivial_lattice_rank"), "20");
    assert_eq!(value(&r, "surface.mw_rank_bound"), "0");
    assert_eq!(value(&r, "surface.semistable"), "true");
}

#[test]
fn custom_curve() {
    // y² = x(x − 1)(x − t): Legendre family, I_2 at 0 and 1, I_2* at infinity
    let r = records(&["fibers", "--curve", "1", "t"]);
    assert_eq!(value(&r, "fiber.t"), "I_2");
    assert_eq!(value(&r, "fiber.t-1"), "I_2");
    assert_eq!(value(&r, "fiber.infinity"), "I_2*");
    assert_eq!(value(&r, "surface.euler"), "12");
    assert_eq!(value(&r, "surface.semistable"), "false");
}

#[test]
fn descent_records() {
    let c = records(&["descent"]);
    assert_eq!(value(&c, "delta.P"), "({t}, {t, t-1, t+3})");
    assert_eq!(value(&c, "delta.Q"), "({t, t+1, t-3}, {t})");
    assert_eq!(value(&c, "independent"), "true");
    let q = records(&["descent", "--mode", "Q"]);
    assert_eq!(value(&q, "delta.P"), "({3, t}, {t, t-1, t+3})");
    assert_eq!(value(&q, "delta.O"), "({}, {})");
}

#[test]
fn transcendence_records_and_codes() {
    let r = records(&["transcendence"]);
    assert_eq!(value(&r, "verdict"), "transcendental");
    assert_eq!(value(&r, "certificate.in_span"), "false");
    assert_eq!(code(&["transcendence"]), 0);
    assert_eq!(code(&["transcendence", "--picard-bound", "21"]), 3);
    // δ(P) is in the kernel
    let r = records(&["transcendence", "--pair", "48*t", "t*(t-1)^3*(t+3)"]);
    assert_eq!(value(&r, "verdict"), "algebraic over C");
}

#[test]
fn residues_exit_codes() {
    assert_eq!(code(&["residues"]), 0);
    assert_eq!(value(&records(&["residues"]), "unramified"), "true");
    assert_eq!(code(&["residues", "--class", "(t, t-1)"]), 1);
    assert_eq!(code(&["residues", "--class", "(t^2+1, 3)"]), 3);
}

#[test]
fn evaluation_and_obstruction() {
    let r = records(&["evaluate", "--point", "1", "2", "--place", "2"]);
    assert_eq!(value(&r, "invariant"), "1/2");
    let r = records(&["evaluate", "--point", "1", "2", "--place", "3"]);
    assert_eq!(value(&r, "invariant"), "0");
    let explicit = records(&[
        "evaluate", "--point", "1", "2", "--place", "2", "--class",
        "(x-p, 6*t*(t+1)) + (x-q, 6*t*(t-1))",
    ]);
    assert_eq!(value(&explicit, "invariant"), "1/2");
    let o = records(&["obstruct"]);
    assert_eq!(value(&o, "sum"), "1/2");
    assert_eq!(value(&o, "obstructed"), "true");
    assert_eq!(value(&o, "inv.2"), "1/2");
    assert_eq!(code(&["obstruct"]), 0);
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(code(&["fibers", "--curve", "t+", "t"]), 2);
    assert_eq!(code(&["evaluate", "--point", "5", "2", "--place", "2"]), 2);
    assert_eq!(code(&["evaluate", "--point", "1", "0", "--place", "2"]), 2);
    assert_eq!(code(&["hilbert", "0", "1", "--place", "real"]), 2);
    assert_eq!(code(&["hilbert", "1", "1", "--place", "4"]), 2);
    assert_eq!(code(&["no-such-command"]), 2);
}

#[test]
fn formats_agree() {
    let cases: [&[&str]; 6] = [
        &["fibers"],
        &["descent"],
        &["transcendence"],
        &["residues"],
        &["obstruct"],
        &["evaluate", "--point", "1", "2", "--place", "2"],
    ];
    for args in cases {
        let human = stdout(&run(args));
        let recs = records(args);
        let lines: Vec<&str> = human.lines().collect();
        assert_eq!(lines.len(), recs.len(), "{args:?}");
        for (line, (_, v)) in lines.iter().zip(&recs) {
            assert!(line.ends_with(v.as_str()), "{args:?}: {line:?} vs {v:?}");
        }
    }
}

#[test]
fn reproduce_is_deterministic_and_passes() {
    let a = run(&["reproduce-paper"]);
    let b = run(&["reproduce-paper"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert!(stdout(&a).trim_end().ends_with("ALL CHECKS PASS"));
    let r = records(&["reproduce-paper"]);
    assert_eq!(value(&r, "result"), "ALL CHECKS PASS");
    assert!(r.iter().filter(|(k, _)| k.ends_with(".status")).all(|(_, v)| v != "FAIL"));
}

#[test]
fn logging_goes_to_stderr() {
    let quiet = run(&["fibers"]);
    let noisy = Command::new(env!("CARGO_BIN_EXE_brauer"))
        .arg("fibers")
        .env("BRAUER_LOG", "debug")
        .output()
        .unwrap();
    assert_eq!(quiet.stdout, noisy.stdout);
}
