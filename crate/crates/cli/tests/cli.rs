use std::collections::BTreeSet;
use std::process::Command;

use sn_cli::config::{Format, RunConfig};
use sn_cli::report::{Report, Status};
use sn_cli::suites::{CHECK_REGISTRY, SUITE_NAMES};
use sn_cli::{run_suite, run_with_workers, CliError};
use sn_core::probe::Window;
use sn_core::slrep::ModuleKind;
use sn_core::weyl::TwistParam;

fn generic2() -> TwistParam {
    TwistParam::from_ratios(&[(1, 3), (1, 2)])
}

fn cfg(n: usize, module: ModuleKind, lambda: TwistParam, suites: &[&str]) -> RunConfig {
    RunConfig::new(n, module, lambda, suites).unwrap()
}

fn families(report: &Report) -> BTreeSet<(String, String)> {
    let mut out = BTreeSet::new();
    for s in &report.suites {
        for key in s.counters.keys() {
            let fam = key.split('.').next().unwrap().to_string();
            out.insert((fam, s.name.clone()));
        }
    }
    out
}

#[test]
fn registry_is_reachable() {
    let small = Window::new(1, 1, 2, 2).unwrap();
    let mut seen = BTreeSet::new();
    let runs = [
        cfg(3, ModuleKind::Adjoint, TwistParam::zero(3), &["identities", "axioms", "derham", "iso"]).with_window(small),
        cfg(3, ModuleKind::Trivial, TwistParam::zero(3), &["minuscule"]).with_k(1).with_window(small),
        cfg(2, ModuleKind::Trivial, TwistParam::zero(2), &["lattice"]),
        cfg(2, ModuleKind::Trivial, generic2(), &["lattice"]),
        cfg(2, ModuleKind::Symmetric(2), generic2(), &["nonminuscule"]),
        cfg(2, ModuleKind::Trivial, TwistParam::zero(2), &["maximality"]).with_k(1),
    ];
    for c in &runs {
        seen.extend(families(&run_suite(c).unwrap()));
    }
    for (fam, suite) in CHECK_REGISTRY {
        assert!(seen.contains(&(fam.to_string(), suite.to_string())), "{fam} not reached from {suite}");
    }
    let suites: BTreeSet<_> = CHECK_REGISTRY.iter().map(|(_, s)| *s).collect();
    assert_eq!(suites, SUITE_NAMES.iter().copied().collect());
}

#[test]
fn identities_example() {
    let r = run_suite(&cfg(2, ModuleKind::Trivial, TwistParam::zero(2), &["identities"])).unwrap();
    assert_eq!(r.suites[0].status, Status::Pass);
    assert!(!r.failed());
}

#[test]
fn minuscule_example() {
    let r = run_suite(&cfg(3, ModuleKind::Trivial, TwistParam::zero(3), &["minuscule"]).with_k(2)).unwrap();
    assert_eq!(r.suites[0].status, Status::Pass);
}

#[test]
fn nonminuscule_example() {
    let r = run_suite(&cfg(2, ModuleKind::Symmetric(2), generic2(), &["nonminuscule"])).unwrap();
    assert_eq!(r.suites[0].status, Status::EvidencePass);
}

#[test]
fn nonminuscule_rejects_minuscule_module() {
    let c = cfg(2, ModuleKind::Natural, TwistParam::zero(2), &["nonminuscule"]);
    assert!(matches!(run_suite(&c), Err(CliError::Invalid(_))));
}

#[test]
fn config_errors() {
    assert!(matches!(
        RunConfig::new(2, ModuleKind::Trivial, TwistParam::zero(2), &["nope"]),
        Err(CliError::UnknownSuite(_))
    ));
    assert!(matches!(
        RunConfig::new(3, ModuleKind::Trivial, TwistParam::zero(2), &["identities"]),
        Err(CliError::Core(_))
    ));
    assert!(Window::parse("2,2,3,5").is_err());
}

#[test]
fn json_round_trip_and_csv_rows() {
    let c = cfg(2, ModuleKind::Symmetric(2), generic2(), &["identities", "iso", "lattice"]);
    let r = run_suite(&c).unwrap();
    let json = r.render(Format::Json).unwrap();
    assert_eq!(Report::from_json(&json).unwrap(), r);
    assert!(json.contains("\"1/3\""));
    assert!(json.contains("\"timeMs\": null"));
    let csv = r.render(Format::Csv).unwrap();
    assert_eq!(csv.lines().count(), 1 + r.suites.len());
    assert!(csv.lines().nth(1).unwrap().starts_with("identities,pass,"));
}

#[test]
fn reports_are_deterministic() {
    let c = cfg(2, ModuleKind::Symmetric(2), generic2(), &["axioms", "nonminuscule"]).with_seed(7);
    let a = run_with_workers(&c, Some(1)).unwrap().to_json().unwrap();
    let b = run_with_workers(&c, Some(3)).unwrap().to_json().unwrap();
    let d = run_with_workers(&c, None).unwrap().to_json().unwrap();
    assert_eq!(a, b);
    assert_eq!(a, d);
    let other = run_suite(&c.clone().with_seed(8)).unwrap().to_json().unwrap();
    assert_ne!(a, other);
}

fn snprobe(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_snprobe")).args(args).output().unwrap()
}

#[test]
fn binary_writes_identical_files() {
    let dir = tempfile::tempdir().unwrap();
    let paths = [dir.path().join("a.json"), dir.path().join("b.json")];
    for (p, w) in paths.iter().zip(["1", "2"]) {
        let out = snprobe(&[
            "--n", "2", "--module", "sym:2", "--lambda", "1/3,1/2", "--suite", "identities,nonminuscule",
            "--workers", w, "--out", p.to_str().unwrap(),
        ]);
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    }
    let a = std::fs::read(&paths[0]).unwrap();
    assert_eq!(a, std::fs::read(&paths[1]).unwrap());
    let r = Report::from_json(std::str::from_utf8(&a).unwrap()).unwrap();
    assert_eq!(r.config.module_kind, "sym:2");
    assert_eq!(r.config.window.b, 2);
}

#[test]
fn binary_exit_codes() {
    let ok = snprobe(&["--n", "2", "--suite", "identities", "--format", "csv"]);
    assert_eq!(ok.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&ok.stdout).lines().count(), 2);
    let bad = snprobe(&["--n", "2", "--suite", "bogus"]);
    assert_eq!(bad.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("unknown suite"));
    let margin = snprobe(&["--n", "2", "--window", "2,2,3,1"]);
    assert_eq!(margin.status.code(), Some(2));
    let lam = snprobe(&["--n", "2", "--lambda", "1/0,1"]);
    assert_eq!(lam.status.code(), Some(2));
    // a window too small for any closure to fill makes the evidence suite fail
    let fail = snprobe(&["--n", "2", "--module", "sym:2", "--suite", "nonminuscule", "--window", "1,1,0,0"]);
    assert_eq!(fail.status.code(), Some(1));
}
