use std::process::Command;

use tiltlab::cli::{run, EXIT_CHECK_FAILED, EXIT_PARSE, EXIT_PASS};
use tiltlab::report::Report;

const FIX: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures");

fn fixture(name: &str) -> String {
    format!("{FIX}/{name}.alg")
}

fn tiltlab(args: &[&str]) -> (i32, String, Option<Report>) {
    let mut argv = vec!["tiltlab"];
    argv.extend_from_slice(args);
    run(argv)
}

#[test]
fn gorenstein_of_a4_fixture_is_one() {
    let (code, out, report) = tiltlab(&["gorenstein", &fixture("a4_cluster"), "--at-most", "1"]);
    assert_eq!(code, EXIT_PASS, "{out}");
    assert!(out.contains("Gorenstein dimension 1"));
    assert_eq!(report.unwrap().notes["gorenstein_dimension"], "1");
}

#[test]
fn cy3_of_a4_fixture_passes() {
    let (code, out, report) = tiltlab(&["cy3", &fixture("a4_cluster")]);
    assert_eq!(code, EXIT_PASS, "{out}");
    assert_eq!(report.unwrap().checks.len(), 16);
}

#[test]
fn enumerate_a4_gives_42() {
    let (code, out, report) = tiltlab(&["cluster", "--type", "A", "--rank", "4", "--d", "2", "enumerate", "--expect", "42"]);
    assert_eq!(code, EXIT_PASS, "{out}");
    assert!(out.contains("42 sets"));
    assert_eq!(report.unwrap().notes["count"], 42);
}

#[test]
fn exit_codes() {
    assert_eq!(tiltlab(&["gorenstein", "/nonexistent.alg"]).0, EXIT_PARSE);
    assert_eq!(tiltlab(&["frobnicate"]).0, EXIT_PARSE);
    assert_eq!(tiltlab(&["cluster", "--type", "A", "--rank", "2", "--d", "3", "mutate", "--position", "0"]).0, EXIT_PARSE);
    assert_eq!(tiltlab(&["cluster", "--type", "A", "--rank", "3", "mutate", "--set", "0,99", "--position", "0"]).0, EXIT_PARSE);
    // stable 3-CY fails for the 4-CY cyclic algebra
    assert_eq!(tiltlab(&["stablecm", &fixture("cycle4_rad2"), "--cy", "3"]).0, EXIT_CHECK_FAILED);
    assert_eq!(tiltlab(&["stablecm", &fixture("cycle4_rad2"), "--cy", "4"]).0, EXIT_PASS);
    // the A_4 fixture has infinite global dimension but Gorenstein dimension 1
    assert_eq!(tiltlab(&["gorenstein", &fixture("a4_cluster"), "--at-most", "0"]).0, EXIT_CHECK_FAILED);
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.alg");
    std::fs::write(&bad, "algebra x\nvertices 1 2\narrow a 1 3\n").unwrap();
    let (code, out, _) = tiltlab(&["check", bad.to_str().unwrap()]);
    assert_eq!(code, EXIT_PARSE);
    assert!(out.contains("line 3"), "{out}");
}

#[test]
fn resolve_and_ext_on_standard_modules() {
    let (code, out, _) = tiltlab(&["resolve", &fixture("d4_cluster"), "I_2"]);
    assert_eq!(code, EXIT_PASS);
    assert!(out.starts_with("0 -> P_4 -> P_3 -> I_2 -> 0"), "{out}");
    let (code, _, report) = tiltlab(&["ext", &fixture("a4_cluster"), "S_3", "S_2", "--degree", "2"]);
    assert_eq!(code, EXIT_PASS);
    assert_eq!(report.unwrap().notes["dim Ext^1(S_3, S_2)"], 1);
    let (_, _, report) = tiltlab(&["ext", &fixture("a4_cluster"), "S_2", "S_3", "--degree", "2"]);
    assert_eq!(report.unwrap().notes["dim Ext^2(S_2, S_3)"], 1);
}

#[test]
fn module_files_and_field_override() {
    let dir = tempfile::tempdir().unwrap();
    let m = dir.path().join("m.mod");
    std::fs::write(&m, "module M over A4_cluster\ndim 1 1 0 0\nmap delta [[1]]\n").unwrap();
    let (code, out, report) = tiltlab(&["--field", "Fp 3", "check", &fixture("a4_cluster"), "--module", m.to_str().unwrap()]);
    assert_eq!(code, EXIT_PASS, "{out}");
    let r = report.unwrap();
    assert_eq!(r.environment.field, "Fp 3");
    assert_eq!(r.notes["dimension"], 9);
    let (code, out, _) = tiltlab(&["resolve", &fixture("a4_cluster"), m.to_str().unwrap()]);
    assert_eq!(code, EXIT_PASS, "{out}");
}

#[test]
fn cluster_verbs() {
    let base = ["cluster", "--type", "A", "--rank", "3", "--d", "2"];
    for verb in [
        vec!["mutate", "--position", "1"],
        vec!["endo"],
        vec!["neighbors", "--position", "0"],
        vec!["resolve-in-C", "--object", "4"],
    ] {
        let mut args = base.to_vec();
        args.extend(verb.iter().copied());
        let (code, out, _) = tiltlab(&args);
        assert_eq!(code, EXIT_PASS, "{verb:?}: {out}");
    }
    let (code, out, _) = tiltlab(&["cluster", "--type", "A", "--rank", "2", "--d", "3", "from-tilting"]);
    assert_eq!(code, EXIT_PASS, "{out}");
    let (code, out, _) = tiltlab(&["cluster", "--type", "A", "--rank", "2", "--d", "3", "resolve-in-C"]);
    assert_eq!(code, EXIT_PASS, "{out}");
}

#[test]
fn json_report_round_trips_and_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.json");
    let p = path.to_str().unwrap();
    let (code, _, report) = tiltlab(&["--json", p, "suite", "--criterion", "1", "--criterion", "6"]);
    assert_eq!(code, EXIT_PASS);
    let first = std::fs::read_to_string(&path).unwrap();
    let parsed = Report::from_json(&first).unwrap();
    assert_eq!(parsed, report.unwrap());
    assert_eq!(parsed.to_json(), first);
    tiltlab(&["--json", p, "suite", "--criterion", "1", "--criterion", "6"]);
    assert_eq!(std::fs::read_to_string(&path).unwrap(), first);
}

#[test]
fn binary_exit_status() {
    let bin = env!("CARGO_BIN_EXE_tiltlab");
    let ok = Command::new(bin).args(["gorenstein", &fixture("a4_cluster")]).output().unwrap();
    assert_eq!(ok.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&ok.stdout).contains("Gorenstein dimension 1"));
    let bad = Command::new(bin).args(["gorenstein", "/nonexistent.alg"]).output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("cannot read"));
    let fail = Command::new(bin).args(["stablecm", &fixture("a7_3cluster")]).output().unwrap();
    assert_eq!(fail.status.code(), Some(1));
}
