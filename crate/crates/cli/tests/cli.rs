use std::process::{Command, Output};

use clap::Parser;
use serde_json::Value;

use saxl_cli::config::{Cli, RunConfig, Task, DEFAULT_DOMAIN_CAP, DEFAULT_GROUP_CAP};

fn saxl(args: &[&str], env_cap: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_saxl"));
    cmd.args(args).env_remove("SAXL_CAP");
    if let Some(c) = env_cap {
        cmd.env("SAXL_CAP", c);
    }
    cmd.output().expect("binary runs")
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is a JSON report")
}

fn without_wall_time(mut v: Value) -> Value {
    v.as_object_mut().unwrap().remove("wall_time_ms");
    v
}

fn config(args: &[&str], env_cap: Option<&str>) -> Result<RunConfig, String> {
    let mut full = vec!["saxl"];
    full.extend_from_slice(args);
    RunConfig::from_cli(Cli::try_parse_from(full).map_err(|e| e.to_string())?, env_cap)
}

#[test]
fn report_schema_and_key_order() {
    let out = saxl(&["certify-bounds", "--setting", "psl27", "--grid-max", "20"], None);
    assert_eq!(out.status.code(), Some(0));
    let v = report(&out);
    let keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
    assert_eq!(keys, ["tool", "version", "config", "checks", "summary", "wall_time_ms"]);
    let cfg_keys: Vec<&str> = v["config"].as_object().unwrap().keys().map(String::as_str).collect();
    assert_eq!(cfg_keys, ["subcommand", "params", "cap", "modulus_index"]);
    assert_eq!(v["config"]["subcommand"], "certify-bounds");
    let checks = v["checks"].as_array().unwrap();
    let names: Vec<&str> = checks.iter().map(|c| c["name"].as_str().unwrap()).collect();
    assert_eq!(names, ["psl27 q=13", "psl27 q=17", "psl27 q=19"]);
    for c in checks {
        let keys: Vec<&str> = c.as_object().unwrap().keys().map(String::as_str).collect();
        assert_eq!(keys, ["name", "status", "payload"]);
        assert_eq!(c["status"], "pass");
        let total = c["payload"]["total"].as_str().unwrap();
        let (n, d) = total.split_once('/').expect("num/den");
        assert!(n.parse::<u128>().is_ok() && d.parse::<u128>().is_ok());
        for t in c["payload"]["terms"].as_array().unwrap() {
            assert!(t["value"].as_str().unwrap().contains('/'));
        }
    }
    assert_eq!(checks[0]["payload"]["terms"][0]["fix"], "3822/1");
    assert_eq!(v["summary"]["pass"], 3);
    assert_eq!(v["summary"]["fail"], 0);
}

#[test]
fn exit_codes() {
    assert_eq!(saxl(&["certify-bounds", "--setting", "c1", "--grid-max", "100000"], None).status.code(), Some(0));
    // The c = 3 triple budget fails at every grid point.
    assert_eq!(saxl(&["certify-bounds", "--setting", "c3", "--grid-max", "125"], None).status.code(), Some(1));
    assert_eq!(saxl(&["certify-bounds", "--setting", "psl29", "--grid-max", "11"], None).status.code(), Some(1));
    for bad in [
        vec!["verify-direct", "--p", "4", "--m", "1", "--case", "so"],
        vec!["verify-direct", "--p", "2", "--m", "2", "--case", "so"],
        vec!["verify-direct", "--p", "5", "--m", "1", "--case", "subfield:5"],
        vec!["verify-direct", "--p", "5", "--m", "1", "--case", "xx"],
        vec!["crosscheck-classes", "--p", "3", "--m", "2"],
        vec!["certify-bounds", "--setting", "c2"],
        vec!["certify-bounds", "--setting", "c1", "--grid-max", "0"],
        vec!["--jobs", "0", "certify-bounds", "--setting", "c1"],
        vec!["--modulus-index", "99", "crosscheck-classes", "--p", "5", "--m", "1"],
        vec!["frobnicate"],
    ] {
        assert_eq!(saxl(&bad, None).status.code(), Some(2), "{bad:?}");
    }
    assert_eq!(saxl(&["certify-bounds", "--setting", "c1"], Some("lots")).status.code(), Some(2));
}

#[test]
fn cap_marks_skipped_not_failed() {
    let out = saxl(&["verify-direct", "--p", "5", "--m", "1", "--case", "so"], Some("100"));
    assert_eq!(out.status.code(), Some(0));
    let v = report(&out);
    assert_eq!(v["config"]["cap"], 100);
    assert_eq!(v["checks"][0]["status"], "skipped-out-of-scale");
    assert_eq!(v["summary"]["skipped"], 1);
    // --cap wins over the environment.
    let out = saxl(&["--cap", "200", "crosscheck-classes", "--p", "3", "--m", "1"], Some("5000000"));
    let v = report(&out);
    assert_eq!(v["config"]["cap"], 200);
    assert_eq!(v["checks"][0]["status"], "skipped-out-of-scale");
}

#[test]
fn config_defaults_and_precedence() {
    let c = config(&["verify-direct", "--p", "5", "--m", "1", "--case", "so"], None).unwrap();
    assert_eq!(c.cap, DEFAULT_DOMAIN_CAP);
    assert_eq!(c.jobs, 1);
    let c = config(&["crosscheck-classes", "--p", "5", "--m", "1"], None).unwrap();
    assert_eq!(c.cap, DEFAULT_GROUP_CAP);
    let c = config(&["crosscheck-classes", "--p", "5", "--m", "1"], Some("77")).unwrap();
    assert_eq!(c.cap, 77);
    let c = config(&["--cap", "9", "crosscheck-classes", "--p", "5", "--m", "1"], Some("77")).unwrap();
    assert_eq!(c.cap, 9);
    let c = config(&["certify-bounds", "--setting", "psl29"], None).unwrap();
    assert!(matches!(c.task, Task::CertifyBounds { grid_max: 10_000, .. }));
    let c = config(&["certify-bounds", "--setting", "c3"], None).unwrap();
    assert!(matches!(c.task, Task::CertifyBounds { grid_max: 1_000_000_000, .. }));
    let c = config(&["verify-direct", "--p", "2", "--m", "3", "--case", "subfield:2", "--jobs", "3"], None).unwrap();
    assert_eq!(c.jobs, 3);
    assert!(config(&["verify-direct", "--p", "2", "--m", "3", "--case", "subfield:4"], None).is_err());
    assert!(config(&["verify-direct", "--p", "3", "--m", "2", "--case", "subfield:3"], None).is_err());
}

#[test]
fn out_flag_writes_file() {
    let path = std::env::temp_dir().join(format!("saxl-report-{}.json", std::process::id()));
    let out = saxl(&["--out", path.to_str().unwrap(), "certify-bounds", "--setting", "psl27", "--grid-max", "13"], None);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    std::fs::remove_file(&path).ok();
    let v: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["checks"].as_array().unwrap().len(), 1);
}

#[test]
fn reports_do_not_depend_on_worker_count() {
    for args in [
        vec!["verify-direct", "--p", "5", "--m", "1", "--case", "sl"],
        vec!["certify-bounds", "--setting", "c1", "--grid-max", "10000000"],
        vec!["crosscheck-classes", "--p", "2", "--m", "1"],
    ] {
        let mut base: Option<String> = None;
        for jobs in ["1", "3", "8"] {
            let mut a = vec!["--jobs", jobs];
            a.extend_from_slice(&args);
            let out = saxl(&a, None);
            assert!(out.status.success(), "{a:?}");
            let text = serde_json::to_string(&without_wall_time(report(&out))).unwrap();
            match &base {
                None => base = Some(text),
                Some(b) => assert_eq!(b, &text, "{a:?}"),
            }
        }
    }
}
