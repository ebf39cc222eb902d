use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_knottorsion"))
        .args(args)
        .env_remove("KNOTTORSION_TOL_PROFILE")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn complex(v: &Value) -> (f64, f64) {
    (v["re"].as_f64().unwrap(), v["im"].as_f64().unwrap())
}

#[test]
fn level_set_counts_and_meridian() {
    for (knot, count) in [("3/1", 1), ("5/3", 2), ("7/3", 3), ("9/5", 4)] {
        let out = run(&["level-set", "--two-bridge", knot, "--trace", "3.1,0.2"]);
        assert_eq!(
            out.status.code(),
            Some(0),
            "{knot}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
        let v = json(&out);
        assert_eq!(v["summary"]["count"], count, "{knot}");
        let records = v["records"].as_array().unwrap();
        assert_eq!(records.len(), count);
        for r in records {
            let (mr, mi) = complex(&r["m"]);
            let m = num_complex::Complex64::new(mr, mi);
            let c = m + m.inv();
            assert!((c - num_complex::Complex64::new(3.1, 0.2)).norm() < 1e-12);
            assert_eq!(r["regular"], true);
        }
    }
}

#[test]
fn figure_eight_reciprocals_cancel_in_the_records() {
    let out = run(&["level-set", "--two-bridge", "5/3", "--trace", "-1.7,0.9"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let (mut sum, mut abs) = (num_complex::Complex64::new(0.0, 0.0), 0.0);
    for r in v["records"].as_array().unwrap() {
        let (re, im) = complex(&r["torsion"]);
        let inv = num_complex::Complex64::new(re, im).inv();
        sum += inv;
        abs += inv.norm();
    }
    assert!(sum.norm() / abs < 1e-9, "{}", sum.norm() / abs);
}

#[test]
fn degenerate_trace_exits_non_generic() {
    let out = run(&["level-set", "--two-bridge", "5/3", "--trace", "2,0"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error:"));
    let out = run(&["level-set", "--two-bridge", "5/3", "--trace=-2"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn bad_input_exits_usage() {
    assert_eq!(
        run(&["level-set", "--two-bridge", "4/3", "--trace", "3"]).status.code(),
        Some(1)
    );
    assert_eq!(
        run(&["level-set", "--two-bridge", "5/3", "--trace", "x"]).status.code(),
        Some(1)
    );
    assert_eq!(run(&["level-set"]).status.code(), Some(1));
    assert_eq!(run(&["no-such-command"]).status.code(), Some(1));
}

#[test]
fn vanishing_exit_codes() {
    let ok = run(&["vanishing", "--factors", "5/3,5/3", "--trace", "3.1,0.2"]);
    assert_eq!(ok.status.code(), Some(0));
    let v = json(&ok);
    assert_eq!(v["summary"]["components"], 8);
    assert_eq!(v["summary"]["identity_holds"], true);
    assert_eq!(v["records"].as_array().unwrap().len(), 8);
    assert!(v["summary"]["relative"].as_f64().unwrap() < 1e-9);

    // Trefoil factors have no vanishing sum.
    let fail = run(&["vanishing", "--factors", "3/1", "--trace", "3.1,0.2"]);
    assert_eq!(fail.status.code(), Some(3));
    assert_eq!(json(&fail)["summary"]["identity_holds"], false);
}

#[test]
fn same_seed_same_bytes() {
    let a = run(&["--seed", "42", "vanishing", "--factors", "5/3,7/3"]);
    let b = run(&["--seed", "42", "vanishing", "--factors", "5/3,7/3"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let c = run(&["--seed", "43", "vanishing", "--factors", "5/3,7/3"]);
    assert_ne!(a.stdout, c.stdout);
    assert_eq!(json(&a)["seed"], 42);
}

#[test]
fn csv_output() {
    let out = run(&[
        "--format",
        "csv",
        "level-set",
        "--two-bridge",
        "7/3",
        "--trace",
        "0.5,1",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "# seed=0");
    let header = lines.iter().find(|l| !l.starts_with('#')).unwrap();
    assert_eq!(
        *header,
        "m.im,m.re,regular,torsion.im,torsion.re,trace_longitude.im,trace_longitude.re,u.im,u.re"
    );
    let rows = lines.iter().filter(|l| !l.starts_with('#')).count() - 1;
    assert_eq!(rows, 3);
}

#[test]
fn alexander_polynomials() {
    let v = json(&run(&["alexander", "--two-bridge", "5/3"]));
    assert_eq!(v["summary"]["polynomial"], "t^2 - 3t + 1");
    let v = json(&run(&["alexander", "--two-bridge", "3/1"]));
    assert_eq!(v["summary"]["polynomial"], "t^2 - t + 1");
}

#[test]
fn tolerance_profile_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_knottorsion"))
        .args(["level-set", "--two-bridge", "5/3", "--trace", "3.1,0.2"])
        .env("KNOTTORSION_TOL_PROFILE", "no-such-profile")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn selftest_passes() {
    let out = run(&["selftest"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let v = json(&out);
    let records = v["records"].as_array().unwrap();
    assert_eq!(records.len(), 6);
    assert!(records.iter().all(|r| r["passed"] == true));
}
