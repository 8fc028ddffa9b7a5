//! One function per subcommand. Each returns a [`Report`] carrying both
//! renderings, so text and JSON output are built from the same values.

use std::fmt::Write as _;
use std::io::Read;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde_json::{json, Value};
use thiserror::Error;

use penner_core::exact::{parse_rational, rational_to_string, root_of_two_decimal, to_significant};
use penner_core::intmatrix::matrix_to_json_value;
use penner_core::{
    bound_from_certificate, certify, check, claim_operator, core_bound, eigenvector_check, exceeds_one, family_stretch,
    graph_of, incidence_matrix, is_perron_frobenius, parse_matrix, scc_decompose, sharpness_report, spectral_radius,
    spectral_radius_with, NonNegIntMatrix, ParseError, PennerCertificate, PennerError, SpectralError, SpectralInterval,
    SpectralOptions, Substitution, SubstitutionError,
};

use crate::config::{Command, RunConfig, Source};

/// Significant digits for every decimal shown to a human.
pub const DIGITS: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Success,
    /// The hypothesis failed or the certificate is invalid.
    Failure,
    /// The iteration cap was hit; the report holds a partial enclosure.
    PrecisionCap,
}

impl Status {
    pub fn exit_code(self) -> u8 {
        match self {
            Status::Success => 0,
            Status::Failure => 1,
            Status::PrecisionCap => 3,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Report {
    pub text: String,
    pub json: String,
    pub status: Status,
}

impl Report {
    fn new(text: String, json: &Value, status: Status) -> Self {
        let json = serde_json::to_string_pretty(json).expect("report serializes");
        Self { text, json, status }
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {source_name}: {error}")]
    Io { source_name: String, error: std::io::Error },
    #[error("{source_name}: {error}")]
    Parse { source_name: String, error: ParseError },
    #[error("only one input can be read from standard input")]
    StdinTwice,
    #[error(transparent)]
    Penner(#[from] PennerError),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
    #[error(transparent)]
    Substitution(#[from] SubstitutionError),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Io { .. } | CliError::Parse { .. } | CliError::StdinTwice => 2,
            CliError::Penner(PennerError::Spectral(SpectralError::GapNotReached { .. }))
            | CliError::Spectral(SpectralError::GapNotReached { .. })
            | CliError::Substitution(SubstitutionError::Spectral(SpectralError::GapNotReached { .. })) => 3,
            _ => 1,
        }
    }
}

pub fn run(config: &RunConfig) -> Result<Report, CliError> {
    match &config.command {
        Command::Analyze { input } => cmd_analyze(input, &config.gap, &config.spectral_options()),
        Command::Certify { input } => cmd_certify(input),
        Command::Check { matrix, certificate } => cmd_check(matrix, certificate),
        Command::Bound { chi_abs } => cmd_bound(*chi_abs),
        Command::Family { d, k, chi_abs } => cmd_family(*d, *k as usize, *chi_abs),
        Command::Entropy { input } => cmd_entropy(input, &config.gap, &config.spectral_options()),
    }
}

fn read_source(source: &Source) -> Result<String, CliError> {
    let io = |error| CliError::Io { source_name: source.to_string(), error };
    match source {
        Source::Stdin => {
            let mut buf = String::new();
            std::io::stdin().read_to_string(&mut buf).map_err(io)?;
            Ok(buf)
        }
        Source::File(path) => std::fs::read_to_string(path).map_err(io),
    }
}

fn load_matrix(source: &Source) -> Result<NonNegIntMatrix, CliError> {
    parse_matrix(&read_source(source)?).map_err(|error| CliError::Parse { source_name: source.to_string(), error })
}

fn decimal(x: &BigRational) -> String {
    to_significant(x, DIGITS)
}

fn decimal_f64(x: f64) -> String {
    decimal(&BigRational::from_float(x).expect("finite"))
}

/// `2^(1/k)` rounded to [`DIGITS`] significant digits, computed from an exact root.
fn root_of_two(k: usize) -> String {
    let truncated = root_of_two_decimal(u32::try_from(k).expect("exponent fits in u32"), DIGITS as u32 + 6);
    decimal(&parse_rational(&truncated).expect("decimal expansion parses"))
}

/// Shows integers without a denominator; everything else as `p/q`.
fn exact(x: &BigRational) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        rational_to_string(x)
    }
}

/// Runs the spectral enclosure, turning an acyclic graph into the exact
/// interval `[0, 0]` and a missed gap into a partial result.
fn enclose(result: Result<SpectralInterval, SpectralError>) -> Result<(BigRational, BigRational, Status), CliError> {
    match result {
        Ok(interval) => Ok(bounds(&interval, Status::Success)),
        Err(SpectralError::Acyclic) => Ok((BigRational::zero(), BigRational::zero(), Status::Success)),
        Err(SpectralError::GapNotReached { cap, partial }) => {
            eprintln!("penner: warning: gap not reached after {cap} iterations; reporting a partial enclosure");
            Ok(bounds(&partial, Status::PrecisionCap))
        }
        Err(e) => Err(e.into()),
    }
}

fn bounds(interval: &SpectralInterval, status: Status) -> (BigRational, BigRational, Status) {
    (interval.lower().clone(), interval.upper().clone(), status)
}

fn interval_json(lower: &BigRational, upper: &BigRational, status: Status) -> Value {
    json!({
        "lower": rational_to_string(lower),
        "upper": rational_to_string(upper),
        "gap_reached": status == Status::Success,
    })
}

fn vertex_list(vertices: &[usize]) -> String {
    vertices.iter().map(|v| (v + 1).to_string()).collect::<Vec<_>>().join(" ")
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

pub fn cmd_analyze(input: &Source, gap: &BigRational, options: &SpectralOptions) -> Result<Report, CliError> {
    let a = load_matrix(input)?;
    let scc = scc_decompose(&graph_of(&a));
    let pf = is_perron_frobenius(&a);
    let above_one = exceeds_one(&a);
    let (lower, upper, status) = enclose(spectral_radius_with(&a, gap, options))?;

    let mut text = String::new();
    writeln!(text, "dimension: {}", a.dim()).unwrap();
    writeln!(text, "components: {}", scc.components().len()).unwrap();
    for (c, vertices) in scc.components().iter().enumerate() {
        writeln!(text, "  C{}: {{{}}} {}", c + 1, vertex_list(vertices), scc.kind(c).label()).unwrap();
    }
    let order: Vec<String> = scc.condensation_order().iter().map(|c| format!("C{}", c + 1)).collect();
    writeln!(text, "condensation order: {}", order.join(" ")).unwrap();
    writeln!(text, "perron-frobenius: {}", yes_no(pf)).unwrap();
    writeln!(text, "leading eigenvalue above 1: {}", yes_no(above_one)).unwrap();
    writeln!(text, "spectral radius in [{}, {}]", decimal(&lower), decimal(&upper)).unwrap();
    if status == Status::PrecisionCap {
        writeln!(text, "gap not reached").unwrap();
    }

    let mut scc_json = scc.to_json_value();
    scc_json["kinds"] = json!(scc.kinds().iter().map(|k| k.label()).collect::<Vec<_>>());
    let json = json!({
        "n": a.dim(),
        "scc": scc_json,
        "perron_frobenius": pf,
        "exceeds_one": above_one,
        "spectral_radius": interval_json(&lower, &upper, status),
    });
    Ok(Report::new(text, &json, status))
}

fn certificate_text(cert: &PennerCertificate) -> String {
    let exponents = bound_from_certificate(cert);
    let sums: Vec<String> = cert.power_column_sums.iter().map(ToString::to_string).collect();
    let mut text = String::new();
    writeln!(text, "λ ≥ 2^({}) ≈ {}", exact(&exponents.sharp), root_of_two(cert.n_prime)).unwrap();
    writeln!(text, "log λ ≥ log 2 / {} ≈ {}", cert.n_prime, decimal_f64(std::f64::consts::LN_2 / cert.n_prime as f64))
        .unwrap();
    writeln!(
        text,
        "dominant vertices: {} (n' = {} of n = {})",
        vertex_list(&cert.dominant_vertices),
        cert.n_prime,
        cert.n
    )
    .unwrap();
    writeln!(text, "column sums of B^{}: {}", cert.n_prime, sums.join(" ")).unwrap();
    text
}

pub fn cmd_certify(input: &Source) -> Result<Report, CliError> {
    let a = load_matrix(input)?;
    let cert = certify(&a)?;
    Ok(Report { text: certificate_text(&cert), json: cert.to_json(), status: Status::Success })
}

pub fn cmd_check(matrix: &Source, certificate: &Source) -> Result<Report, CliError> {
    if *matrix == Source::Stdin && *certificate == Source::Stdin {
        return Err(CliError::StdinTwice);
    }
    let a = load_matrix(matrix)?;
    let cert = PennerCertificate::from_json(&read_source(certificate)?)
        .map_err(|error| CliError::Parse { source_name: certificate.to_string(), error })?;

    let verdict = match check(&a, &cert) {
        Ok(valid) => Ok(valid),
        Err(e @ PennerError::DimensionMismatch { .. }) => Err(e.to_string()),
        Err(e) => return Err(e.into()),
    };
    let (text, json, status) = match verdict {
        Ok(true) => {
            let text = format!("valid certificate\n{}", certificate_text(&cert));
            let exponents = bound_from_certificate(&cert);
            let json = json!({
                "valid": true,
                "n": cert.n,
                "n_prime": cert.n_prime,
                "exponent_n_prime": rational_to_string(&exponents.sharp),
                "exponent_n": rational_to_string(&exponents.full),
            });
            (text, json, Status::Success)
        }
        Ok(false) => {
            let reason = "recomputed data does not support the claimed bound";
            (format!("invalid certificate: {reason}\n"), json!({"valid": false, "reason": reason}), Status::Failure)
        }
        Err(reason) => {
            (format!("invalid certificate: {reason}\n"), json!({"valid": false, "reason": reason}), Status::Failure)
        }
    };
    Ok(Report::new(text, &json, status))
}

pub fn cmd_bound(chi_abs: i64) -> Result<Report, CliError> {
    let report = core_bound(chi_abs)?;
    let log_bound = report.log_lambda_bound();
    let arc_cap = report.arc_cap as usize;
    let mut text = String::new();
    writeln!(text, "log λ ≥ log 2 / {arc_cap} ≈ {}", decimal_f64(log_bound)).unwrap();
    writeln!(text, "λ ≥ 2^({}) ≈ {}", exact(&report.exponent), root_of_two(arc_cap)).unwrap();
    writeln!(text, "arc cap: {arc_cap}").unwrap();

    let mut json = report.to_json_value();
    json["log_lambda_bound"] = json!(log_bound);
    Ok(Report::new(text, &json, Status::Success))
}

pub fn cmd_family(d: u64, k: usize, chi_abs: u64) -> Result<Report, CliError> {
    let family_error = |e: penner_core::FamilyError| CliError::Parse {
        source_name: "arguments".into(),
        error: ParseError::Schema(e.to_string()),
    };
    let stretch = family_stretch(d).map_err(family_error)?;
    let report = sharpness_report(d, chi_abs).map_err(family_error)?;

    let operator = claim_operator(k).map_err(family_error)?;
    let interval = spectral_radius(&operator, &BigRational::one())?;
    let two = BigRational::from_integer(BigInt::from(2u8));
    let operator_ok = interval.lower() == &two && interval.upper() == &two && eigenvector_check(k).is_ok();
    if !operator_ok {
        eprintln!("penner: branch operator of size {k} does not have leading eigenvalue 2: {interval}");
    }

    let mut text = String::new();
    writeln!(text, "d: {d}").unwrap();
    writeln!(text, "k: {k}").unwrap();
    writeln!(text, "λ(f_{d}) = 2^({}) ≈ {}", exact(&stretch.exponent), stretch_decimal(d)).unwrap();
    writeln!(text, "bound exponent: {}", exact(&report.bound_exponent)).unwrap();
    writeln!(text, "ratio: {}", exact(&report.ratio)).unwrap();

    let status = if operator_ok { Status::Success } else { Status::Failure };
    Ok(Report::new(text, &report.to_json_value(k), status))
}

fn stretch_decimal(d: u64) -> String {
    match usize::try_from(d) {
        Ok(d) if d <= 4096 => root_of_two(d),
        _ => decimal_f64(2f64.powf(1.0 / d as f64)),
    }
}

/// Same enclosure as `entropy_interval`, run with the configured iteration cap.
pub fn cmd_entropy(input: &Source, gap: &BigRational, options: &SpectralOptions) -> Result<Report, CliError> {
    let sub = Substitution::parse(&read_source(input)?).map_err(|e| match e {
        SubstitutionError::Spectral(_) => CliError::Substitution(e),
        other => CliError::Parse { source_name: input.to_string(), error: ParseError::Substitution(other) },
    })?;
    let m = incidence_matrix(&sub)?;
    let (lower, upper, status) = enclose(spectral_radius_with(&m, gap, options))?;

    let mut text = String::new();
    writeln!(text, "alphabet: {}", sub.alphabet().join(" ")).unwrap();
    writeln!(text, "stretch factor in [{}, {}]", decimal(&lower), decimal(&upper)).unwrap();
    if lower.is_zero() {
        writeln!(text, "entropy: undefined (stretch factor 0)").unwrap();
    } else {
        let ln = |x: &BigRational| penner_core::exact::to_f64(x).ln();
        writeln!(text, "entropy in [{}, {}]", decimal_f64(ln(&lower)), decimal_f64(ln(&upper))).unwrap();
    }
    if status == Status::PrecisionCap {
        writeln!(text, "gap not reached").unwrap();
    }

    let json = json!({
        "alphabet": sub.alphabet(),
        "incidence": matrix_to_json_value(&m),
        "stretch_factor": interval_json(&lower, &upper, status),
    });
    Ok(Report::new(text, &json, status))
}
