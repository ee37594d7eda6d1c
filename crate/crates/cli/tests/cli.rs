use std::process::{Command, Output};

use serde_json::Value;

fn ktorsion(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ktorsion")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn riley_poly_json() {
    let o = ktorsion(&["riley-poly", "--knot", "5_2"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["sigma_form"], "u^3 - (2σ - 3)u^2 + (σ^2 - 3σ + 4)u - (2σ - 3)");
    assert_eq!(v["u_degree"], 3);
}

#[test]
fn riley_poly_empty_word() {
    let o = ktorsion(&["riley-poly", "--knot", "3_1", "--word", ""]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["sigma_form"], "1");
    assert!(v["note"].as_str().unwrap().contains("no nonabelian"));
}

#[test]
fn torsion_json_at_dihedral_point() {
    let o = ktorsion(&["torsion", "--knot", "5_2", "--theta", "pi", "--root", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let u = v["u"].as_f64().unwrap();
    let t = v["value"][0].as_f64().unwrap();
    // closed form at σ = −2, up to sign
    let cf = -(5.0 * -2.0 + 3.0) * u * u + (5.0 * 4.0 + 14.0 + 1.0) * u + 21.0;
    assert!((t.abs() - cf.abs()).abs() < 1e-8 * cf.abs(), "{t} vs {cf}");
    assert_eq!(v["diagnostics"]["simple_zero"], true);
    assert_eq!(v["roots_at_theta"], 3);
}

#[test]
fn input_errors_exit_1() {
    for args in [
        vec!["torsion", "--knot", "4_1", "--theta", "1"],
        vec!["torsion", "--knot", "5_2", "--theta", "7"],
        vec!["torsion", "--knot", "5_2", "--theta", "pi", "--root", "9"],
        vec!["sweep", "--knot", "5_2", "--samples", "1"],
        vec!["sweep", "--knot", "5_2", "--tol-relation", "-1"],
        vec!["torsion", "--file", "/nonexistent/knot.txt", "--theta", "1"],
        vec!["torsion"],
        vec!["no-such-command"],
    ] {
        let o = ktorsion(&args);
        assert_eq!(o.status.code(), Some(1), "{args:?}");
        assert!(!o.stderr.is_empty(), "{args:?}");
    }
}

#[test]
fn invalid_presentation_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.txt");
    std::fs::write(&path, "gens: x y\nrel: x q\n").unwrap();
    let o = ktorsion(&["torsion", "--file", path.to_str().unwrap(), "--theta", "1"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn verify_exit_codes() {
    let ok = ktorsion(&["verify", "--knot", "5_2"]);
    assert_eq!(ok.status.code(), Some(0), "{}", stdout(&ok));
    let bad = ktorsion(&["verify", "--knot", "5_2", "--perturb", "1e-3"]);
    assert_eq!(bad.status.code(), Some(2));
    assert!(stdout(&bad).contains("FAIL"));
}

#[test]
fn sweep_csv_is_deterministic() {
    let args = ["sweep", "--knot", "5_2", "--samples", "21"];
    let a = stdout(&ktorsion(&args));
    let b = stdout(&ktorsion(&args));
    assert_eq!(a, b);
    let mut lines = a.lines();
    assert_eq!(lines.next(), Some("theta,sigma,u,torsion_re,torsion_im,tai_simple_zero,trace_mu"));
    let rows: Vec<Vec<f64>> = lines.map(|l| l.split(',').take(5).map(|x| x.parse().unwrap()).collect()).collect();
    assert!(rows.len() >= 21);
    assert!(rows.windows(2).all(|w| w[0][0] <= w[1][0]));
}

#[test]
fn sweep_two_samples_hits_endpoints() {
    let o = ktorsion(&["sweep", "--knot", "5_2", "--samples", "2", "--theta-lo", "1", "--theta-hi", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let thetas: Vec<f64> = text.lines().skip(1).map(|l| l.split(',').next().unwrap().parse().unwrap()).collect();
    assert!(thetas.contains(&1.0) && thetas.contains(&2.0), "{thetas:?}");
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("rp.json");
    let o = ktorsion(&["riley-poly", "--knot", "3_1", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["sigma_form"], "u - (σ - 1)");
}

#[test]
fn critical_reports_dihedral_points() {
    let o = ktorsion(&["critical", "--knot", "5_2"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["dihedral_count"], 3);
    assert_eq!(v["expected_dihedral_count"], 3);
}

#[test]
fn wirtinger_file_and_drop() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("trefoil.txt");
    std::fs::write(&path, "gens: a b c\nrel: a b a^-1 c^-1\nrel: b c b^-1 a^-1\n").unwrap();
    let o = ktorsion(&["verify", "--file", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let o = ktorsion(&["torsion", "--file", path.to_str().unwrap(), "--theta", "1", "--drop", "c"]);
    assert_eq!(o.status.code(), Some(1), "Wirtinger files have no Riley parametrization");
}

#[test]
fn drop_changes_at_most_the_sign() {
    let value = |d: &str| {
        let o = ktorsion(&["torsion", "--knot", "5_2", "--theta", "2", "--drop", d]);
        assert_eq!(o.status.code(), Some(0));
        let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
        v["value"][0].as_f64().unwrap()
    };
    let (x, y, by_index) = (value("x"), value("y"), value("2"));
    assert_eq!(y, by_index);
    assert!((x.abs() - y.abs()).abs() < 1e-8 * x.abs(), "{x} vs {y}");
}
