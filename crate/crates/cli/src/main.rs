use std::process::ExitCode;

use clap::Parser;
use sn_cli::config::{Args, RunConfig};
use sn_cli::report::emit_report;

fn main() -> ExitCode {
    let args = Args::parse();
    let run = || -> anyhow::Result<bool> {
        let cfg = RunConfig::from_args(&args)?;
        let report = sn_cli::run_with_workers(&cfg, args.workers)?;
        emit_report(&report, args.format, args.out.as_deref())?;
        Ok(!report.failed())
    };
    match run() {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("snprobe: {e}");
            ExitCode::from(2)
        }
    }
}
