use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use qweyl::cli::{run, Cli, ExitStatus, RunConfig};

fn exit(status: ExitStatus) -> ExitCode {
    ExitCode::from(status.code() as u8)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { exit(ExitStatus::Usage) } else { exit(ExitStatus::Success) };
        }
    };
    let cfg = match RunConfig::from_cli(cli) {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("error: {e}");
            return exit(ExitStatus::Usage);
        }
    };
    let report = match run(&cfg) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return exit(ExitStatus::Usage);
        }
    };
    for w in &report.warnings {
        eprintln!("warning: {w}");
    }
    let written = match &cfg.output_path {
        Some(path) => report.write_atomic(path, cfg.output_format),
        None => std::io::stdout().write_all(report.render(cfg.output_format).as_bytes()),
    };
    if let Err(e) = written {
        eprintln!("error: cannot write report: {e}");
        return exit(ExitStatus::Usage);
    }
    for c in report.checks.iter().filter(|c| !c.pass) {
        eprintln!("FAIL {}: deviation {:e} > tolerance {:e}", c.name, c.deviation.0, c.tolerance.0);
    }
    if report.pass {
        exit(ExitStatus::Success)
    } else {
        exit(ExitStatus::CheckFailure)
    }
}
