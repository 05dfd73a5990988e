use std::process::{Command, Output};

use prm_hull::linalg::read_matrix;
use prm_hull::oracle::hull_exact;
use prm_hull::report::{parse_record, parse_report};
use prm_hull::theory::build_code;
use prm_hull::FieldSpec;

fn prm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_prm")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn info_reports_formula_values() {
    let o = prm(&["info", "11", "3", "14"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let body = text.split_once('\n').unwrap().1;
    let r = parse_report(body).unwrap();
    assert_eq!(r.hull_dim, Some(555));
    assert_eq!(r.dimension, 635);

    let o = prm(&["info", "5", "3", "6"]);
    assert!(stdout(&o).contains("classification: self-dual,self-orthogonal,dual-containing\n"));
}

#[test]
fn info_is_deterministic() {
    assert_eq!(stdout(&prm(&["info", "8", "4", "13"])), stdout(&prm(&["info", "--q", "8", "--m", "4", "--v", "13"])));
}

#[test]
fn info_rejects_bad_input() {
    let o = prm(&["info", "6", "2", "1"]);
    assert!(!o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("6 is not a prime power"));
    assert!(!prm(&["info", "5", "3", "13"]).status.success());
    assert!(!prm(&["info", "5", "3", "0"]).status.success());
    assert!(!prm(&["info", "--q", "4", "--modulus", "1,1,0", "2", "1"]).status.success());
}

#[test]
fn explicit_field_flags() {
    let o = prm(&["info", "--p", "2", "--k", "3", "--modulus", "1,0,1,1", "2", "3"]);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("field: GF(2^3) mod x^3+x^2+1\n"));
}

#[test]
fn export_generator_and_hull() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g.txt");
    let o = prm(&["export", "3", "2", "2", "generator", "--out", path.to_str().unwrap()]);
    assert!(o.status.success());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("3 6 13\n"));
    let f = FieldSpec::from_order(3).unwrap();
    assert_eq!(read_matrix(&path, Some(&f)).unwrap(), build_code(&f, 2, 2).unwrap().generator);

    let o = prm(&["export", "5", "3", "12", "hull"]);
    assert_eq!(stdout(&o), "5 0 156\n");

    let o = prm(&["export", "2", "2", "1", "--what", "generator"]);
    assert_eq!(stdout(&o), "2 3 7\n1 0 0 1 1 0 1\n0 1 0 1 0 1 1\n0 0 1 1 1 1 0\n");
}

#[test]
fn export_roundtrips_hull_and_dual() {
    let dir = tempfile::tempdir().unwrap();
    let f = FieldSpec::from_order(4).unwrap();
    let code = build_code(&f, 2, 3).unwrap();
    let hull = dir.path().join("h.txt");
    assert!(prm(&["export", "4", "2", "3", "hull", "--out", hull.to_str().unwrap()]).status.success());
    assert_eq!(read_matrix(&hull, Some(&f)).unwrap(), hull_exact(&code).unwrap().hull_basis);
    let dual = dir.path().join("d.txt");
    assert!(prm(&["export", "4", "2", "3", "dual", "--out", dual.to_str().unwrap()]).status.success());
    let d = read_matrix(&dual, Some(&f)).unwrap();
    assert_eq!(d.rows(), code.n - code.k());
    assert!(code.generator.mul_transpose(&d).unwrap().is_zero());
}

#[test]
fn verify_single_instance() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.tsv");
    let o = prm(&["verify", "3", "2", "2", "--machine-readable", "--out", path.to_str().unwrap()]);
    assert!(o.status.success());
    let text = std::fs::read_to_string(&path).unwrap();
    let recs: Vec<_> = text.lines().map(|l| parse_record(l).unwrap()).collect();
    assert!(recs.iter().all(|r| r.pass));
    let dim = recs.iter().find(|r| r.check == "dimension").unwrap();
    assert_eq!((dim.formula.as_str(), dim.oracle.as_str()), ("6", "6"));
    let dist = recs.iter().find(|r| r.check == "brute-distance").unwrap();
    assert_eq!((dist.formula.as_str(), dist.oracle.as_str()), ("6", "6"));
}

#[test]
fn verify_small_sweep() {
    let o = prm(&["verify", "--qs", "2,3", "--ms", "2", "--quiet"]);
    assert!(o.status.success(), "{}", stdout(&o));
    assert!(stdout(&o).ends_with(" 0 failed\n"));
}

#[test]
fn verify_lcd_instance() {
    let o = prm(&["verify", "5", "3", "12", "--machine-readable"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let lcd = text.lines().map(|l| parse_record(l).unwrap()).find(|r| r.check == "class-lcd").unwrap();
    assert_eq!(lcd.oracle, "gram-invertible=true");
}

#[test]
fn witness_prints_weight() {
    let o = prm(&["witness", "5", "3", "3"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("weight: 75\n"));
    assert!(text.contains("min_distance: 75\n"));
    let o = prm(&["witness", "5", "3", "3", "--lambdas", "3,4"]);
    assert!(stdout(&o).contains("weight: 75\n"));
    assert!(!prm(&["witness", "5", "3", "3", "--lambdas", "3,3"]).status.success());
}
