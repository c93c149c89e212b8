//! Command-line arguments and their validation into a [`RunConfig`].

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use dunkl_core::rational::parse_rational;
use dunkl_core::Params;

#[derive(Debug, Parser)]
#[command(name = "dunkl", version, about = "Exact checks and tables for the Z2^3 Dunkl Laplacian on the 2-sphere")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Clone, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Every exact operator identity on monomials of degree <= dmax, and the
    /// harmonic spectrum for degrees <= dmax.
    Verify,
    /// Spectral data for degrees 0..=N.
    Spectrum,
    /// Bannai-Ito recurrence, polynomials, Racah grid and weights at degree N.
    BiPoly,
    /// Bannai-Ito module matrices of dimension N+1 and their residuals.
    Repmat,
    /// Dunkl harmonics and both Bannai-Ito bases at degree N.
    Harmonics,
    /// Overlap matrix between the K3 and K1 eigenbases at degree N.
    Overlap {
        /// Compare with the Bannai-Ito closed form on the Racah grid.
        #[arg(long)]
        check_closed_form: bool,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    #[arg(long, global = true, default_value = "1/2", allow_hyphen_values = true)]
    pub mu1: String,
    #[arg(long, global = true, default_value = "1/3", allow_hyphen_values = true)]
    pub mu2: String,
    #[arg(long, global = true, default_value = "1/4", allow_hyphen_values = true)]
    pub mu3: String,
    /// Total degree.
    #[arg(long = "N", global = true, default_value_t = 3)]
    pub n: u32,
    /// Largest monomial degree for operator identities.
    #[arg(long, global = true, default_value_t = 8)]
    pub dmax: u32,
    /// Tolerance for floating-point residuals.
    #[arg(long, global = true, default_value_t = 1e-10, allow_hyphen_values = true)]
    pub tol: f64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Include wall times in the report.
    #[arg(long, global = true)]
    pub timings: bool,
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: Command,
    pub params: Params,
    pub n: u32,
    pub dmax: u32,
    pub tol: f64,
    pub format: Format,
    pub output: Option<PathBuf>,
    pub timings: bool,
}

impl RunConfig {
    pub fn from_cli(cli: Cli) -> Result<RunConfig, String> {
        let c = cli.common;
        let parse = |name: &str, s: &str| parse_rational(s).map_err(|e| format!("--{name}: {e}"));
        let params = Params::new(parse("mu1", &c.mu1)?, parse("mu2", &c.mu2)?, parse("mu3", &c.mu3)?)
            .map_err(|e| e.to_string())?;
        if !(c.tol > 0.0 && c.tol.is_finite()) {
            return Err(format!("--tol must be a positive number, got {}", c.tol));
        }
        Ok(RunConfig {
            command: cli.command,
            params,
            n: c.n,
            dmax: c.dmax,
            tol: c.tol,
            format: c.format,
            output: c.output,
            timings: c.timings,
        })
    }
}

/// Worker count from `DUNKL_THREADS`, if set.
pub fn thread_override() -> Result<Option<usize>, String> {
    match std::env::var("DUNKL_THREADS") {
        Err(_) => Ok(None),
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(format!("DUNKL_THREADS must be a positive integer, got {v:?}")),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(args: &[&str]) -> Result<RunConfig, String> {
        let cli = Cli::try_parse_from(std::iter::once("dunkl").chain(args.iter().copied())).map_err(|e| e.to_string())?;
        RunConfig::from_cli(cli)
    }

    #[test]
    fn defaults() {
        let c = config(&["verify"]).unwrap();
        assert_eq!(c.params.to_string(), "(1/2, 1/3, 1/4)");
        assert_eq!((c.n, c.dmax, c.tol, c.format), (3, 8, 1e-10, Format::Json));
    }

    #[test]
    fn flags_after_subcommand() {
        let c = config(&["overlap", "--check-closed-form", "--N", "2", "--mu1", "0", "--format", "csv"]).unwrap();
        assert_eq!(c.command, Command::Overlap { check_closed_form: true });
        assert_eq!(c.n, 2);
        assert_eq!(c.format, Format::Csv);
    }

    #[test]
    fn rejects_bad_values() {
        assert!(config(&["verify", "--mu1", "-1"]).unwrap_err().contains("mu > -1/2"));
        assert!(config(&["verify", "--mu2", "-1/2"]).unwrap_err().contains("mu > -1/2"));
        assert!(config(&["verify", "--mu3", "0.25"]).unwrap_err().contains("--mu3"));
        assert!(config(&["verify", "--tol", "0"]).unwrap_err().contains("--tol"));
        assert!(config(&["verify", "--N", "-1"]).is_err());
    }
}
