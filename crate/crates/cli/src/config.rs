use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Parser, Subcommand, ValueEnum};
use num_rational::BigRational;
use num_traits::Signed;
use penner_core::exact::parse_rational;
use penner_core::spectral::DEFAULT_MAX_ITERATIONS;
use penner_core::SpectralOptions;

/// Where an input document is read from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Source {
    Stdin,
    File(PathBuf),
}

impl FromStr for Source {
    type Err = std::convert::Infallible;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(if s == "-" { Source::Stdin } else { Source::File(PathBuf::from(s)) })
    }
}

impl fmt::Display for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Source::Stdin => f.write_str("<stdin>"),
            Source::File(path) => write!(f, "{}", path.display()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Text,
    Json,
}

#[derive(Debug, Clone, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Report SCC structure, Perron-Frobenius status and an enclosure of the leading eigenvalue.
    Analyze {
        /// Matrix file (JSON or whitespace rows), or `-` for stdin.
        #[arg(value_name = "MATRIX")]
        input: Source,
    },
    /// Emit a checkable certificate for `log λ >= log 2 / n`.
    Certify {
        #[arg(value_name = "MATRIX")]
        input: Source,
    },
    /// Verify a certificate against its matrix; exits 1 if it is invalid.
    Check {
        #[arg(value_name = "MATRIX")]
        matrix: Source,
        #[arg(value_name = "CERTIFICATE")]
        certificate: Source,
    },
    /// The lower bound `log λ >= log 2 / (3|χ|)` for a core of characteristic `χ`.
    Bound {
        /// The magnitude |χ| of the core characteristic.
        #[arg(value_name = "CHI", value_parser = clap::value_parser!(i64).range(1..))]
        chi_abs: i64,
    },
    /// Stretch factor of the degree-`d` cover and its ratio to the core bound.
    Family {
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        d: u64,
        /// Truncation size of the branch operator that is checked.
        #[arg(long, default_value_t = 8, value_parser = clap::value_parser!(u64).range(2..=4096))]
        k: u64,
        /// The magnitude |χ| of the cover's core characteristic.
        #[arg(long = "chi", value_parser = clap::value_parser!(u64).range(1..))]
        chi_abs: u64,
    },
    /// Enclose the stretch factor and entropy of a substitution.
    Entropy {
        /// Substitution file with one `name -> w1 w2 ...` rule per line, or `-`.
        #[arg(value_name = "SUBSTITUTION")]
        input: Source,
    },
}

/// One invocation of the tool.
#[derive(Debug, Clone, Parser)]
#[command(name = "penner", version, about = "Certified spectral analysis of nonnegative integer matrices")]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,

    /// Maximum width of spectral enclosures, as `p/q` or a decimal.
    #[arg(long, global = true, default_value = "1/1000000000", value_parser = parse_gap)]
    pub gap: BigRational,

    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Text)]
    pub format: OutputFormat,

    /// Refinement steps allowed per component before giving up with exit code 3.
    #[arg(long, global = true, value_name = "N", default_value_t = DEFAULT_MAX_ITERATIONS, value_parser = parse_cap)]
    pub max_iterations: usize,

    /// Write the report here instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    pub output: Option<PathBuf>,
}

impl RunConfig {
    pub fn spectral_options(&self) -> SpectralOptions {
        SpectralOptions { max_iterations: self.max_iterations }
    }
}

fn parse_gap(s: &str) -> Result<BigRational, String> {
    let gap = parse_rational(s).map_err(|e| e.to_string())?;
    if !gap.is_positive() {
        return Err("gap must be strictly positive".into());
    }
    Ok(gap)
}

fn parse_cap(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(0) => Err("at least one iteration is required".into()),
        Ok(n) => Ok(n),
        Err(e) => Err(e.to_string()),
    }
}
