use std::path::PathBuf;

use clap::{Parser, Subcommand};
use serde::Serialize;

use saxl_core::ff::is_prime;
use saxl_core::qbound::Setting;
use saxl_core::unitary::SubgroupCase;

/// Default largest permutation domain for verify-direct.
pub const DEFAULT_DOMAIN_CAP: usize = 50_000;
/// Default largest group enumerated by crosscheck-classes.
pub const DEFAULT_GROUP_CAP: usize = 50_000_000;

#[derive(Parser, Debug)]
#[command(name = "saxl", version, about = "Saxl graph checks and fixed-point-ratio certificates for PSU(3,q)")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Report path; stdout when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Worker threads.
    #[arg(long, global = true, default_value_t = 1)]
    pub jobs: usize,
    /// Largest domain (points or group elements) to enumerate.
    #[arg(long, global = true)]
    pub cap: Option<usize>,
    /// Which irreducible polynomial defines F_{q²}, in lexicographic order.
    #[arg(long, global = true, default_value_t = 0)]
    pub modulus_index: usize,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Build the action of PSU(3,q) on cosets and run the Saxl graph checks.
    VerifyDirect {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        m: u32,
        /// so, sl or subfield:Q'
        #[arg(long)]
        case: String,
    },
    /// Compare class data formulas with a brute-force census.
    CrosscheckClasses {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        m: u32,
    },
    /// Evaluate Q-ledgers over a parameter grid.
    CertifyBounds {
        #[arg(long)]
        setting: String,
        #[arg(long)]
        grid_max: Option<u64>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Task {
    VerifyDirect { p: u64, m: u32, case: SubgroupCase },
    CrosscheckClasses { p: u64, m: u32 },
    CertifyBounds { setting: Setting, grid_max: u64 },
}

/// A validated invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunConfig {
    pub task: Task,
    pub cap: usize,
    pub jobs: usize,
    pub modulus_index: usize,
    pub out: Option<PathBuf>,
}

/// Echo of the configuration in the report.
#[derive(Serialize, Debug)]
pub struct ConfigEcho {
    pub subcommand: &'static str,
    pub params: serde_json::Value,
    pub cap: usize,
    pub modulus_index: usize,
}

fn prime_power_checked(p: u64, m: u32) -> Result<u64, String> {
    if !is_prime(p) {
        return Err(format!("p = {p} is not prime"));
    }
    if m == 0 {
        return Err("m must be positive".into());
    }
    p.checked_pow(m)
        .filter(|&q| q <= u32::MAX as u64)
        .ok_or_else(|| format!("{p}^{m} is too large"))
}

fn odd_power_of(q: u64, q_sub: u64) -> Option<u32> {
    if q_sub < 2 {
        return None;
    }
    let mut x = q_sub;
    let mut e = 1;
    while x < q {
        x = x.checked_mul(q_sub)?;
        e += 1;
    }
    (x == q && e % 2 == 1 && e > 1).then_some(e)
}

impl RunConfig {
    /// `env_cap` is the value of SAXL_CAP, if set.
    pub fn from_cli(cli: Cli, env_cap: Option<&str>) -> Result<Self, String> {
        let env_cap = match env_cap {
            Some(s) => Some(s.trim().parse::<usize>().map_err(|_| format!("SAXL_CAP = {s:?} is not an integer"))?),
            None => None,
        };
        let cap = cli.cap.or(env_cap);
        if cap == Some(0) {
            return Err("cap must be positive".into());
        }
        if cli.jobs == 0 {
            return Err("jobs must be positive".into());
        }
        let task = match cli.command {
            Command::VerifyDirect { p, m, case } => {
                let q = prime_power_checked(p, m)?;
                let case: SubgroupCase = case.parse().map_err(|e| format!("{e}"))?;
                match case {
                    SubgroupCase::So if p == 2 => return Err("the so case needs q odd".into()),
                    SubgroupCase::Subfield { q_sub } if odd_power_of(q, q_sub as u64).is_none() => {
                        return Err(format!("q = {q} is not an odd power q'^e, e ≥ 3, of q' = {q_sub}"));
                    }
                    _ => {}
                }
                Task::VerifyDirect { p, m, case }
            }
            Command::CrosscheckClasses { p, m } => {
                let q = prime_power_checked(p, m)?;
                if q > 7 {
                    return Err(format!("crosscheck-classes needs q ≤ 7, got {q}"));
                }
                Task::CrosscheckClasses { p, m }
            }
            Command::CertifyBounds { setting, grid_max } => {
                let setting: Setting = setting.parse()?;
                let grid_max = grid_max.unwrap_or(match setting {
                    Setting::C1 | Setting::C3 => 1_000_000_000,
                    Setting::Psl27 | Setting::Psl29 => 10_000,
                });
                if grid_max == 0 {
                    return Err("grid-max must be positive".into());
                }
                Task::CertifyBounds { setting, grid_max }
            }
        };
        let cap = cap.unwrap_or(match task {
            Task::CrosscheckClasses { .. } => DEFAULT_GROUP_CAP,
            _ => DEFAULT_DOMAIN_CAP,
        });
        Ok(RunConfig { task, cap, jobs: cli.jobs, modulus_index: cli.modulus_index, out: cli.out })
    }

    pub fn echo(&self) -> ConfigEcho {
        let (subcommand, params) = match &self.task {
            Task::VerifyDirect { p, m, case } => (
                "verify-direct",
                serde_json::json!({ "p": p, "m": m, "case": case.to_string() }),
            ),
            Task::CrosscheckClasses { p, m } => ("crosscheck-classes", serde_json::json!({ "p": p, "m": m })),
            Task::CertifyBounds { setting, grid_max } => (
                "certify-bounds",
                serde_json::json!({ "setting": setting.name(), "grid_max": grid_max }),
            ),
        };
        ConfigEcho { subcommand, params, cap: self.cap, modulus_index: self.modulus_index }
    }
}
