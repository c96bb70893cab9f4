use serde::Serialize;
use serde_json::Value;

use saxl_core::qbound::Rational;

use crate::config::ConfigEcho;

#[derive(Serialize, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    #[serde(rename = "pass")]
    Pass,
    #[serde(rename = "fail")]
    Fail,
    #[serde(rename = "skipped-out-of-scale")]
    Skipped,
}

impl Status {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }
}

#[derive(Serialize, Debug)]
pub struct Check {
    pub name: String,
    pub status: Status,
    pub payload: Value,
}

impl Check {
    pub fn new(name: impl Into<String>, status: Status, payload: Value) -> Self {
        Check { name: name.into(), status, payload }
    }
}

#[derive(Serialize, Debug, Default, PartialEq, Eq)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
    pub skipped: usize,
}

#[derive(Serialize, Debug)]
pub struct Report {
    pub tool: &'static str,
    pub version: &'static str,
    pub config: ConfigEcho,
    pub checks: Vec<Check>,
    pub summary: Summary,
    pub wall_time_ms: u64,
}

impl Report {
    pub fn new(config: ConfigEcho, checks: Vec<Check>, wall_time_ms: u64) -> Self {
        let mut summary = Summary::default();
        for c in &checks {
            match c.status {
                Status::Pass => summary.pass += 1,
                Status::Fail => summary.fail += 1,
                Status::Skipped => summary.skipped += 1,
            }
        }
        Report { tool: env!("CARGO_PKG_NAME"), version: env!("CARGO_PKG_VERSION"), config, checks, summary, wall_time_ms }
    }

    /// 0 when nothing failed, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        i32::from(self.summary.fail > 0)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

/// "num/den" with the denominator always present.
pub fn rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}
