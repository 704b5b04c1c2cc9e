use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use thiserror::Error;

use super::Command;
use crate::deformation::Deformation;
use crate::foliation::MIN_OVERLAP_DIM;

#[derive(Debug, Parser)]
#[command(name = "qweyl", version, about = "Verify q-deformed Weyl-Heisenberg identities and scan representation overlaps")]
pub struct Cli {
    #[command(subcommand)]
    pub command: CommandArgs,
}

#[derive(Debug, Subcommand)]
pub enum CommandArgs {
    /// q-commutator, q-derivative and generator identities on polynomials
    VerifyQwh(CommonArgs),
    /// Weyl system relations, composition law and the rho-scaled family
    VerifyWeyl(CommonArgs),
    /// Squeeze conjugation against the Bogoliubov closed form
    Bogoliubov(CommonArgs),
    /// Multimode vacuum overlaps as the number of modes grows
    FoliationScan(CommonArgs),
}

#[derive(Debug, Clone, Args)]
#[command(group = clap::ArgGroup::new("deformation").multiple(false))]
pub struct CommonArgs {
    /// Truncated Fock dimension
    #[arg(long)]
    pub dim: Option<usize>,

    /// Deformation parameter, `X` or `RE,IM`
    #[arg(long, group = "deformation", allow_hyphen_values = true, value_parser = parse_complex)]
    pub epsilon: Option<Complex64>,

    /// q = exp(epsilon), `RE` or `RE,IM`
    #[arg(long, group = "deformation", allow_hyphen_values = true, value_parser = parse_complex)]
    pub q: Option<Complex64>,

    /// rho = 1/q
    #[arg(long, group = "deformation", allow_hyphen_values = true)]
    pub rho: Option<f64>,

    /// Polynomial cutoff degree
    #[arg(long)]
    pub cutoff: Option<usize>,

    /// Mode counts, comma separated
    #[arg(long, value_delimiter = ',')]
    pub modes: Option<Vec<usize>>,

    /// Pass threshold for the truncation-limited checks
    #[arg(long)]
    pub tol: Option<f64>,

    #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
    pub format: OutputFormat,

    /// Report path; stdout when omitted
    #[arg(long)]
    pub out: Option<PathBuf>,

    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Csv,
}

/// Parses `X` or `RE,IM`.
pub fn parse_complex(s: &str) -> Result<Complex64, String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let num = |t: &str| t.parse::<f64>().map_err(|e| format!("`{t}`: {e}"));
    match parts.as_slice() {
        [re] => Ok(Complex64::new(num(re)?, 0.0)),
        [re, im] => Ok(Complex64::new(num(re)?, num(im)?)),
        _ => Err(format!("expected `X` or `RE,IM`, got `{s}`")),
    }
}

#[derive(Debug, Error, PartialEq)]
#[error("{0}")]
pub struct ConfigError(pub String);

fn usage(msg: impl Into<String>) -> ConfigError {
    ConfigError(msg.into())
}

/// Which of epsilon, q and rho the caller supplied.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DeformationSource {
    Epsilon,
    Q,
    Rho,
    Default,
}

impl DeformationSource {
    pub fn name(self) -> &'static str {
        match self {
            DeformationSource::Epsilon => "epsilon",
            DeformationSource::Q => "q",
            DeformationSource::Rho => "rho",
            DeformationSource::Default => "default",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub dim: usize,
    pub deformation: Deformation,
    pub source: DeformationSource,
    pub cutoff_degree: usize,
    pub mode_counts: Vec<usize>,
    pub tolerance: f64,
    pub output_format: OutputFormat,
    pub output_path: Option<PathBuf>,
    pub seed: u64,
}

struct Defaults {
    dim: usize,
    epsilon: f64,
    tolerance: f64,
}

fn defaults(command: Command) -> Defaults {
    match command {
        Command::VerifyQwh => Defaults {
            dim: 64,
            epsilon: 0.3,
            tolerance: 1e-10,
        },
        Command::VerifyWeyl => Defaults {
            dim: 128,
            // rho = e^(-epsilon) = 2
            epsilon: -std::f64::consts::LN_2,
            tolerance: 1e-6,
        },
        Command::Bogoliubov => Defaults {
            dim: 64,
            epsilon: 0.3,
            tolerance: 1e-8,
        },
        Command::FoliationScan => Defaults {
            dim: 64,
            epsilon: 0.5,
            tolerance: 1e-12,
        },
    }
}

pub const DEFAULT_CUTOFF: usize = 16;
pub const DEFAULT_MODES: [usize; 4] = [1, 10, 100, 1000];

impl RunConfig {
    pub fn from_cli(cli: Cli) -> Result<Self, ConfigError> {
        let (command, args) = match cli.command {
            CommandArgs::VerifyQwh(a) => (Command::VerifyQwh, a),
            CommandArgs::VerifyWeyl(a) => (Command::VerifyWeyl, a),
            CommandArgs::Bogoliubov(a) => (Command::Bogoliubov, a),
            CommandArgs::FoliationScan(a) => (Command::FoliationScan, a),
        };
        Self::new(command, args)
    }

    pub fn new(command: Command, args: CommonArgs) -> Result<Self, ConfigError> {
        let d = defaults(command);
        let bad = |e: crate::Error| usage(format!("invalid deformation: {e}"));
        let (deformation, source) = match (args.epsilon, args.q, args.rho) {
            (Some(e), None, None) => (Deformation::from_epsilon(e).map_err(bad)?, DeformationSource::Epsilon),
            (None, Some(q), None) => (Deformation::from_q(q).map_err(bad)?, DeformationSource::Q),
            (None, None, Some(r)) => (
                Deformation::from_rho(Complex64::new(r, 0.0)).map_err(bad)?,
                DeformationSource::Rho,
            ),
            (None, None, None) => (
                Deformation::from_real_epsilon(d.epsilon).map_err(bad)?,
                DeformationSource::Default,
            ),
            _ => return Err(usage("give at most one of --epsilon, --q, --rho")),
        };

        let cfg = Self {
            command,
            dim: args.dim.unwrap_or(d.dim),
            deformation,
            source,
            cutoff_degree: args.cutoff.unwrap_or(DEFAULT_CUTOFF),
            mode_counts: args.modes.unwrap_or_else(|| DEFAULT_MODES.to_vec()),
            tolerance: args.tol.unwrap_or(d.tolerance),
            output_format: args.format,
            output_path: args.out,
            seed: args.seed,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<(), ConfigError> {
        if !(self.tolerance.is_finite() && self.tolerance > 0.0) {
            return Err(usage(format!("--tol must be positive, got {}", self.tolerance)));
        }
        if self.dim < 2 {
            return Err(usage(format!("--dim must be at least 2, got {}", self.dim)));
        }
        if self.cutoff_degree < 1 {
            return Err(usage("--cutoff must be at least 1"));
        }
        match self.command {
            Command::VerifyQwh => {
                if self.deformation.is_degenerate() {
                    return Err(usage("verify-qwh needs q != 1 (epsilon != 0)"));
                }
                if self.cutoff_degree < 2 {
                    return Err(usage("verify-qwh needs --cutoff of at least 2"));
                }
            }
            Command::VerifyWeyl => {
                self.real_rho()?;
            }
            Command::Bogoliubov => {
                self.real_epsilon()?;
            }
            Command::FoliationScan => {
                self.real_epsilon()?;
                if self.mode_counts.is_empty() {
                    return Err(usage("--modes must list at least one mode count"));
                }
                if self.mode_counts.contains(&0) {
                    return Err(usage("mode counts must be at least 1"));
                }
                if self.dim < MIN_OVERLAP_DIM {
                    return Err(usage(format!(
                        "foliation-scan needs --dim of at least {MIN_OVERLAP_DIM}"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn real_epsilon(&self) -> Result<f64, ConfigError> {
        self.deformation
            .real_epsilon()
            .map_err(|_| usage(format!("{} needs a real epsilon (real positive q or rho)", self.command.name())))
    }

    pub fn real_rho(&self) -> Result<f64, ConfigError> {
        let rho = self.deformation.rho();
        if rho.im != 0.0 {
            return Err(usage(format!("{} needs a real rho", self.command.name())));
        }
        Ok(rho.re)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(argv: &[&str]) -> Result<RunConfig, String> {
        let cli = Cli::try_parse_from(argv).map_err(|e| e.to_string())?;
        RunConfig::from_cli(cli).map_err(|e| e.0)
    }

    #[test]
    fn complex_values() {
        assert_eq!(parse_complex("0.5"), Ok(Complex64::new(0.5, 0.0)));
        assert_eq!(parse_complex("-1, 2e-3"), Ok(Complex64::new(-1.0, 2e-3)));
        assert!(parse_complex("1,2,3").is_err());
        assert!(parse_complex("x").is_err());
    }

    #[test]
    fn deformation_entry_points() {
        let cfg = parse(&["qweyl", "verify-qwh", "--q", "2,0"]).unwrap();
        assert_eq!(cfg.source, DeformationSource::Q);
        assert!((cfg.deformation.epsilon().re - 2f64.ln()).abs() < 1e-15);

        let cfg = parse(&["qweyl", "bogoliubov", "--rho", "0.5"]).unwrap();
        assert!((cfg.real_epsilon().unwrap() - 2f64.ln()).abs() < 1e-15);

        let cfg = parse(&["qweyl", "verify-qwh", "--epsilon", "0,0.1"]).unwrap();
        assert_eq!(cfg.deformation.epsilon(), Complex64::new(0.0, 0.1));

        assert!(parse(&["qweyl", "verify-qwh", "--epsilon", "0.1", "--q", "2"]).is_err());
    }

    #[test]
    fn usage_errors() {
        assert!(parse(&["qweyl", "verify-qwh", "--q", "1"]).is_err());
        assert!(parse(&["qweyl", "verify-qwh", "--epsilon", "0"]).is_err());
        assert!(parse(&["qweyl", "verify-weyl", "--rho", "0"]).is_err());
        assert!(parse(&["qweyl", "bogoliubov", "--epsilon", "0.1,0.2"]).is_err());
        assert!(parse(&["qweyl", "foliation-scan", "--modes", ""]).is_err());
        assert!(parse(&["qweyl", "foliation-scan", "--dim", "8"]).is_err());
        assert!(parse(&["qweyl", "bogoliubov", "--tol", "-1"]).is_err());
        assert!(parse(&["qweyl", "bogoliubov", "--dim", "1"]).is_err());
        assert!(parse(&["qweyl", "verify-qwh", "--cutoff", "0"]).is_err());
    }

    #[test]
    fn defaults_and_modes_order() {
        let cfg = parse(&["qweyl", "foliation-scan", "--modes", "100,1,10"]).unwrap();
        assert_eq!(cfg.mode_counts, vec![100, 1, 10]);
        assert_eq!(cfg.real_epsilon().unwrap(), 0.5);
        let cfg = parse(&["qweyl", "verify-weyl"]).unwrap();
        assert!((cfg.real_rho().unwrap() - 2.0).abs() < 1e-15);
        assert_eq!(cfg.dim, 128);
    }
}
