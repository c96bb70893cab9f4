use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use saxl_cli::config::{Cli, RunConfig};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let env_cap = std::env::var("SAXL_CAP").ok();
    let cfg = match RunConfig::from_cli(cli, env_cap.as_deref()) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let report = match saxl_cli::run(&cfg) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {}", e.0);
            return ExitCode::from(2);
        }
    };
    let text = report.to_json();
    let written = match &cfg.out {
        Some(path) => std::fs::write(path, &text),
        None => std::io::stdout().lock().write_all(text.as_bytes()),
    };
    if let Err(e) = written {
        eprintln!("error: cannot write report: {e}");
        return ExitCode::from(2);
    }
    ExitCode::from(report.exit_code() as u8)
}
