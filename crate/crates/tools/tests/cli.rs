use std::process::Command;

use lckspace_tools::{run_args, Check, Outcome, RunReport};
use serde_json::{json, Value};

fn fixture(name: &str) -> String {
    format!("{}/fixtures/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn run(args: &[&str]) -> RunReport {
    run_args(args.iter().copied()).expect("valid command line")
}

fn check<'a>(r: &'a RunReport, name: &str) -> &'a Check {
    r.checks.iter().find(|c| c.name == name).unwrap_or_else(|| panic!("no check {name} in {:?}", r.checks))
}

fn binary(args: &[&str]) -> (i32, Value) {
    let out = Command::new(env!("CARGO_BIN_EXE_lckspace")).arg("--json").args(args).output().unwrap();
    let doc = serde_json::from_slice(&out.stdout).expect("json report on stdout");
    (out.status.code().unwrap(), doc)
}

#[test]
fn zero_form_integrates_to_zero() {
    let form = fixture("zero_c3.json");
    let (code, doc) = binary(&["cech", "integrate", "--form", &form, "--path", "0,1,2,0"]);
    assert_eq!(code, 0);
    assert_eq!(doc["results"]["integral"], "0");
}

#[test]
fn hopf_form_is_not_exact() {
    let form = fixture("hopf_c3.json");
    let (code, doc) = binary(&["cech", "exact", "--form", &form]);
    assert_eq!(code, 1);
    let c = &doc["checks"][0];
    assert_eq!(c["outcome"], "fail");
    assert_eq!(c["witness"]["integral"], "1");
    assert_eq!(c["witness"]["loop"], json!([0, 1, 2, 0]));
}

#[test]
fn torus_monodromy_has_two_generators() {
    let r = run(&["cech", "monodromy", "--form", &fixture("torus.json")]);
    assert_eq!(r.exit_code(), 0);
    assert_eq!(r.results["character"].as_array().unwrap().len(), 2);
    // Loop displacements on the 7-vertex torus, with a = 3 and b = -2.
    for g in r.results["generators"].as_array().unwrap() {
        let path: Vec<i64> = g["loop"].as_array().unwrap().iter().map(|v| v.as_i64().unwrap()).collect();
        let (mut dx, mut dy) = (0, 0);
        for w in path.windows(2) {
            let (s, sign) = match (w[1] - w[0]).rem_euclid(7) {
                s @ 1..=3 => (s, 1),
                s => (7 - s, -1),
            };
            let (ex, ey) = [(1, 0), (0, 1), (1, 1)][s as usize - 1];
            dx += sign * ex;
            dy += sign * ey;
        }
        assert_eq!((dx + 2 * dy) % 7, 0);
        let expect = 3 * (dx + 2 * dy) / 7 - 2 * dy;
        assert_eq!(g["value"], expect.to_string());
    }
}

#[test]
fn malformed_json_exits_two_with_location() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, "{\n  \"complex\": [1,\n}").unwrap();
    let (code, doc) = binary(&["cech", "integrate", "--form", path.to_str().unwrap(), "--path", "0"]);
    assert_eq!(code, 2);
    assert!(doc["error"]["location"].as_str().unwrap().contains("line 3"), "{doc}");

    let mut form: Value = serde_json::from_str(&std::fs::read_to_string(fixture("hopf_c3.json")).unwrap()).unwrap();
    form["potentials"][1]["values"]["2"] = json!("1/0");
    std::fs::write(&path, form.to_string()).unwrap();
    let (code, doc) = binary(&["cech", "integrate", "--form", path.to_str().unwrap(), "--path", "0"]);
    assert_eq!(code, 2);
    assert_eq!(doc["error"]["location"], "potentials[1].values.\"2\"");
}

#[test]
fn missing_file_is_an_input_error() {
    let r = run(&["cech", "exact", "--form", "/nonexistent/form.json"]);
    assert_eq!(r.exit_code(), 2);
}

#[test]
fn machine_json_is_deterministic() {
    let form = fixture("torus.json");
    let args = ["cech", "pullback", "--form", form.as_str(), "--seed", "5"];
    let a = Command::new(env!("CARGO_BIN_EXE_lckspace")).arg("--json").args(args).output().unwrap();
    let b = Command::new(env!("CARGO_BIN_EXE_lckspace")).arg("--json").args(args).output().unwrap();
    assert_eq!(a.stdout, b.stdout);
    assert!(!String::from_utf8(a.stdout).unwrap().contains("timing"));
}

#[test]
fn every_failure_carries_a_witness() {
    let runs = [
        run(&["cech", "exact", "--form", &fixture("hopf_c3.json")]),
        run(&["cech", "primitive", "--form", &fixture("torus.json")]),
        run(&["lck", "gck", "--lck", &fixture("hopf_lck_2.json")]),
        run(&["psh", "pipeline", "--spec", &fixture("annulus_corrupted.json")]),
        run(&["psh", "check", "--grid", &fixture("re_z2_grid.json")]),
    ];
    for r in &runs {
        assert_eq!(r.exit_code(), 1, "{}", r.to_text());
        for c in r.checks.iter().filter(|c| c.outcome == Outcome::Fail) {
            assert!(c.witness.is_some(), "{c:?}");
        }
    }
}

#[test]
fn pullback_is_natural_on_the_torus() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("up.json");
    let r = run(&["--radius", "2", "cech", "pullback", "--form", &fixture("torus.json"), "--out", out.to_str().unwrap()]);
    assert_eq!(check(&r, "naturality").outcome, Outcome::Pass);
    assert_eq!(check(&r, "cover").outcome, Outcome::Partial);
    let up = run(&["cech", "exact", "--form", out.to_str().unwrap()]);
    assert_eq!(up.exit_code(), 0, "{}", up.to_text());
}

#[test]
fn hopf_roundtrip_reports_the_character() {
    for (file, shown) in [("hopf_lck_2.json", "log(2)"), ("hopf_lck_e.json", "1"), ("hopf_lck_10.json", "log(2) + log(5)")] {
        let r = run(&["lck", "roundtrip", "--lck", &fixture(file)]);
        assert_eq!(r.exit_code(), 0, "{}", r.to_text());
        assert_eq!(r.results["character"]["log"], json!([shown]));
        assert_eq!(check(&r, "rescale").outcome, Outcome::Pass);
        assert_eq!(check(&r, "lee_character").outcome, Outcome::Pass);
        assert!(r.results["conclusion"].as_str().unwrap().starts_with("not GCK"));
    }
    let r = run(&["--float", "lck", "character", "--lck", &fixture("hopf_lck_10.json")]);
    let v: f64 = r.results["character"]["log"][0].as_str().unwrap().parse().unwrap();
    assert!((v - 10f64.ln()).abs() <= 1e-12);
}

#[test]
fn rp2_roundtrip_is_gck() {
    let r = run(&["lck", "roundtrip", "--lck", &fixture("rp2_lck.json")]);
    assert_eq!(r.exit_code(), 0, "{}", r.to_text());
    assert!(r.checks.iter().all(|c| c.outcome == Outcome::Pass), "{}", r.to_text());
    assert_eq!(r.results["conclusion"], "finite fundamental group, so the structure is GCK");
    assert_eq!(r.results["cover"]["vertices"], 12);
    assert_eq!(r.results["cover"]["sheets"], 2);
}

#[test]
fn descend_writes_lck_data_that_loads_again() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("down.json");
    let r = run(&["lck", "descend", "--lck", &fixture("rp2_lck.json"), "--out", out.to_str().unwrap()]);
    assert_eq!(r.exit_code(), 0);
    let again = run(&["lck", "gck", "--lck", out.to_str().unwrap()]);
    assert_eq!(check(&again, "gck").outcome, Outcome::Pass);
}

#[test]
fn identity_spec_passes_the_pipeline() {
    let r = run(&["psh", "pipeline", "--spec", &fixture("identity.json")]);
    assert_eq!(r.exit_code(), 0, "{}", r.to_text());
    assert!(r.checks.iter().all(|c| c.outcome == Outcome::Pass));
    assert!(r.results["epsilon"][0].as_f64().unwrap() > 0.0);
}

#[test]
fn corrupted_spec_stops_at_validation() {
    let r = run(&["psh", "pipeline", "--spec", &fixture("annulus_corrupted.json")]);
    assert_eq!(r.results["stopped_at"], "validate");
    let c = check(&r, "condition_3");
    assert_eq!(c.outcome, Outcome::Fail);
    assert!(c.witness.as_ref().unwrap()["value"].as_f64().unwrap() < 1e-6);
}

#[test]
fn glue_writes_a_grid_that_checks() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("glued.json");
    let r = run(&["psh", "glue", "--spec", &fixture("identity.json"), "--epsilon", "0.005", "--out", out.to_str().unwrap()]);
    assert_eq!(r.exit_code(), 0, "{}", r.to_text());
    assert!(out.exists());
    let v = run(&["psh", "verify", "--spec", &fixture("identity.json"), "--epsilon", "0.005"]);
    assert_eq!(v.exit_code(), 0, "{}", v.to_text());
}

#[test]
fn grid_checks() {
    let r = run(&["psh", "check", "--grid", &fixture("abs2_grid.json")]);
    assert_eq!(r.exit_code(), 0);
    let r = run(&["psh", "check", "--pluriharmonic", "--grid", &fixture("re_z2_grid.json")]);
    assert_eq!(r.exit_code(), 0);
    let r = run(&["psh", "hessian", "--grid", &fixture("abs2_grid.json"), "--at", "0.1,0.2"]);
    assert!((r.results["eigenvalues"][0].as_f64().unwrap() - 1.0).abs() < 1e-9);
}

#[test]
fn bad_flags_are_input_errors() {
    let r = run(&["cech", "integrate", "--form", &fixture("zero_c3.json"), "--path", "0,2,x"]);
    assert_eq!(r.exit_code(), 2);
    let r = run(&["cech", "integrate", "--form", &fixture("torus.json"), "--path", "0,9"]);
    assert_eq!(r.exit_code(), 2, "{}", r.to_text());
    assert!(run_args(["cech", "frobnicate"]).is_err());
}
