//! Batch front end: argument grammar, validated run configuration, the four
//! verification commands and their reports.

mod config;
mod report;
mod run;

pub use config::{parse_complex, Cli, CommandArgs, CommonArgs, ConfigError, DeformationSource, OutputFormat, RunConfig};
pub use report::{CheckRecord, ConvergenceRow, Num, Params, Report, ScanRow};
pub use run::{run, run_bogoliubov, run_foliation_scan, run_verify_qwh, run_verify_weyl};

/// Process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitStatus {
    Success = 0,
    Usage = 1,
    CheckFailure = 2,
}

impl ExitStatus {
    pub fn code(self) -> i32 {
        self as i32
    }
}

/// Which verification suite to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    VerifyQwh,
    VerifyWeyl,
    Bogoliubov,
    FoliationScan,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::VerifyQwh => "verify-qwh",
            Command::VerifyWeyl => "verify-weyl",
            Command::Bogoliubov => "bogoliubov",
            Command::FoliationScan => "foliation-scan",
        }
    }
}
