use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use std::path::PathBuf;

#[derive(Debug, Parser)]
#[command(name = "fock-sharp", version, about = "Sharp dual constants in dilated Segal-Bargmann L^p spaces")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    #[command(flatten)]
    pub flags: Flags,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Print C_p, C_p^{n/2}, C_p^n and the conjugate exponent.
    Constants,
    /// Tabulate the monomial ratio for k = 0..=kmax.
    MonomialSweep,
    /// Numerically maximize the ratio over quadratic exponentials.
    GaussianOpt,
    /// Search polynomial pairs (or f against a fixed monomial) for large ratios.
    Explore,
    /// Run the randomized invariant suite.
    Verify,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

/// Every option, as given on the command line or in a config file.
#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Flags {
    /// Exponent p > 1.
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub p: Option<f64>,
    /// Gaussian parameter alpha > 0.
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub alpha: Option<f64>,
    /// Complex dimension.
    #[arg(long, global = true)]
    pub n: Option<usize>,
    /// Largest monomial degree in the sweep.
    #[arg(long, global = true)]
    pub kmax: Option<u64>,
    /// Largest polynomial degree in the search.
    #[arg(long, global = true)]
    pub degree: Option<u32>,
    /// Number of search restarts.
    #[arg(long, global = true)]
    pub restarts: Option<u32>,
    /// RNG seed.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Convergence tolerance.
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub tol: Option<f64>,
    /// Objective evaluations per restart.
    #[arg(long, global = true)]
    pub budget: Option<usize>,
    /// Maximize against the fixed monomial z^j instead of a free h.
    #[arg(long, global = true)]
    pub monomial: Option<u32>,
    #[arg(long, value_enum, global = true)]
    pub format: Option<Format>,
    /// Output file; stdout when absent.
    #[arg(long, global = true)]
    #[serde(default)]
    pub out: Option<PathBuf>,
    /// JSON file with any of the keys above; command-line flags take precedence.
    #[arg(long, global = true)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
}

impl Flags {
    /// Fills every unset field from `base`.
    pub fn or(self, base: Flags) -> Flags {
        Flags {
            p: self.p.or(base.p),
            alpha: self.alpha.or(base.alpha),
            n: self.n.or(base.n),
            kmax: self.kmax.or(base.kmax),
            degree: self.degree.or(base.degree),
            restarts: self.restarts.or(base.restarts),
            seed: self.seed.or(base.seed),
            tol: self.tol.or(base.tol),
            budget: self.budget.or(base.budget),
            monomial: self.monomial.or(base.monomial),
            format: self.format.or(base.format),
            out: self.out.or(base.out),
            config: self.config,
        }
    }
}

/// Options after merging and validation.
#[derive(Debug, Clone)]
pub struct CliConfig {
    pub command: Command,
    pub p: Option<f64>,
    pub alpha: f64,
    pub n: usize,
    pub kmax: u64,
    pub degree: u32,
    pub restarts: u32,
    pub seed: u64,
    pub tol: Option<f64>,
    pub budget: Option<usize>,
    pub monomial: Option<u32>,
    pub format: Format,
    pub out: Option<PathBuf>,
}

impl CliConfig {
    pub fn resolve(command: Command, flags: Flags) -> Result<Self, String> {
        let flags = match &flags.config {
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
                let file: Flags = serde_json::from_str(&text)
                    .map_err(|e| format!("invalid config {}: {e}", path.display()))?;
                flags.or(file)
            }
            None => flags,
        };
        let cfg = CliConfig {
            command,
            p: flags.p,
            alpha: flags.alpha.unwrap_or(1.0),
            n: flags.n.unwrap_or(1),
            kmax: flags.kmax.unwrap_or(100),
            degree: flags.degree.unwrap_or(4),
            restarts: flags.restarts.unwrap_or(8),
            seed: flags.seed.unwrap_or(0),
            tol: flags.tol,
            budget: flags.budget,
            monomial: flags.monomial,
            format: flags.format.unwrap_or(Format::Csv),
            out: flags.out,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<(), String> {
        if let Some(p) = self.p {
            if !(p > 1.0) || !p.is_finite() {
                return Err(format!("--p must be finite and > 1, got {p}"));
            }
        } else if self.command != Command::Verify {
            return Err("--p is required".into());
        }
        if !(self.alpha > 0.0) || !self.alpha.is_finite() {
            return Err(format!("--alpha must be finite and > 0, got {}", self.alpha));
        }
        if self.n == 0 {
            return Err("--n must be >= 1".into());
        }
        if self.n != 1 && matches!(self.command, Command::GaussianOpt | Command::Explore | Command::MonomialSweep) {
            return Err("this command works in one complex dimension; use --n 1".into());
        }
        if let Some(tol) = self.tol {
            if !(tol > 0.0) || !tol.is_finite() {
                return Err(format!("--tol must be finite and > 0, got {tol}"));
            }
        }
        if self.restarts == 0 {
            return Err("--restarts must be >= 1".into());
        }
        if self.budget == Some(0) {
            return Err("--budget must be >= 1".into());
        }
        if self.degree > fock_sharp::explorer::MAX_DEGREE {
            return Err(format!("--degree must be <= {}", fock_sharp::explorer::MAX_DEGREE));
        }
        if let Some(j) = self.monomial {
            if j > self.degree {
                return Err(format!("--monomial {j} exceeds --degree {}", self.degree));
            }
        }
        Ok(())
    }
}
