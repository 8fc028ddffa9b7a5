//! Exact certificates for `log λ >= log 2 / n`, and the core-characteristic
//! bound built on top of them.
//!
//! The argument being certified: `λ(A)` equals the radius of some SCC block
//! `B` of size `n'`. If that block is not a circle, every vertex is reached
//! by at least two weighted walks of length `n'`, so every column sum of
//! `B^{n'}` is at least 2. Since `ρ(M) >= min column sum` for nonnegative `M`,
//! `λ(B)^{n'} = ρ(B^{n'}) >= 2`, hence `λ(A) >= 2^{1/n'} >= 2^{1/n}`.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

use crate::digraph::{component_kind, exceeds_one, restrict, ComponentKind};
use crate::error::ParseError;
use crate::exact::{parse_rational, rational_to_string};
use crate::intmatrix::NonNegIntMatrix;
use crate::spectral::{dominant_component, SpectralError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PennerError {
    #[error("leading eigenvalue is not above 1; the bound does not apply")]
    LeadingEigenvalueNotAboveOne,
    #[error("certificate is for dimension {certificate}, matrix has dimension {matrix}")]
    DimensionMismatch { matrix: usize, certificate: usize },
    #[error("core characteristic magnitude must be positive, got {0}")]
    NonPositiveChi(i64),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
}

/// Witness that `λ(A) >= 2^{1/n'}` for the block on `dominant_vertices`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PennerCertificate {
    pub n: usize,
    /// 0-based, ascending.
    pub dominant_vertices: Vec<usize>,
    pub n_prime: usize,
    /// Column sums of `B^{n'}`, i.e. `|B^{n'} e_j|` for each unit vector.
    pub power_column_sums: Vec<BigUint>,
    /// Claimed exponent `1/n'` in `λ >= 2^{1/n'}`.
    pub exponent_n_prime: BigRational,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CertificateDoc {
    n: usize,
    dominant_vertices: Vec<usize>,
    n_prime: usize,
    power_column_sums: Vec<String>,
    exponent_n_prime: String,
}

impl PennerCertificate {
    /// Canonical single-line JSON; vertices are 1-based, big integers are decimal strings.
    pub fn to_json(&self) -> String {
        let doc = CertificateDoc {
            n: self.n,
            dominant_vertices: self.dominant_vertices.iter().map(|v| v + 1).collect(),
            n_prime: self.n_prime,
            power_column_sums: self.power_column_sums.iter().map(ToString::to_string).collect(),
            exponent_n_prime: rational_to_string(&self.exponent_n_prime),
        };
        serde_json::to_string(&doc).expect("certificate serializes")
    }

    pub fn from_json(input: &str) -> Result<Self, ParseError> {
        let doc: CertificateDoc = serde_json::from_str(input)?;
        let dominant_vertices = doc
            .dominant_vertices
            .iter()
            .map(|&v| v.checked_sub(1).ok_or_else(|| ParseError::Schema("vertex indices are 1-based".into())))
            .collect::<Result<_, _>>()?;
        let power_column_sums = doc
            .power_column_sums
            .iter()
            .map(|s| s.parse::<BigUint>().map_err(|_| ParseError::Schema(format!("invalid column sum `{s}`"))))
            .collect::<Result<_, _>>()?;
        Ok(Self {
            n: doc.n,
            dominant_vertices,
            n_prime: doc.n_prime,
            power_column_sums,
            exponent_n_prime: parse_rational(&doc.exponent_n_prime)?,
        })
    }
}

fn unit_fraction(k: usize) -> BigRational {
    BigRational::new(BigInt::from(1u8), BigInt::from(k))
}

/// Runs the argument on `A` and records the exact column sums it relies on.
///
/// `n = 1` is accepted: `[[k]]` with `k >= 2` certifies `λ >= 2` directly.
pub fn certify(a: &NonNegIntMatrix) -> Result<PennerCertificate, PennerError> {
    if !exceeds_one(a) {
        return Err(PennerError::LeadingEigenvalueNotAboveOne);
    }
    let dominant = dominant_component(a)?;
    let vertices = if dominant.kind == ComponentKind::Expanding {
        dominant.vertices
    } else {
        // the expanding block always wins once separated; this only runs if refinement stalled
        dominant
            .unresolved
            .into_iter()
            .find(|c| component_kind(a, c) == Ok(ComponentKind::Expanding))
            .ok_or(PennerError::LeadingEigenvalueNotAboveOne)?
    };
    let n_prime = vertices.len();
    let block = restrict(a, &vertices).expect("component is a valid vertex set");
    let power_column_sums = block.pow(n_prime as u64).column_sums();
    assert!(
        power_column_sums.iter().all(|s| *s >= BigUint::from(2u8)),
        "non-circle SCC must have every column sum of B^n' at least 2"
    );
    Ok(PennerCertificate {
        n: a.dim(),
        dominant_vertices: vertices,
        n_prime,
        power_column_sums,
        exponent_n_prime: unit_fraction(n_prime),
    })
}

/// Independently re-derives a certificate's claims from `A`.
///
/// Returns `Ok(false)` for any certificate that is not exactly what the
/// argument requires: a non-circle SCC, `n' = |SCC|`, exponent `1/n'`, and
/// column sums that match recomputation and are all at least 2.
pub fn check(a: &NonNegIntMatrix, cert: &PennerCertificate) -> Result<bool, PennerError> {
    if cert.n != a.dim() {
        return Err(PennerError::DimensionMismatch { matrix: a.dim(), certificate: cert.n });
    }
    let vs = &cert.dominant_vertices;
    if vs.is_empty() || vs.windows(2).any(|w| w[0] >= w[1]) || vs.iter().any(|&v| v >= a.dim()) {
        return Ok(false);
    }
    if cert.n_prime != vs.len()
        || cert.power_column_sums.len() != cert.n_prime
        || cert.exponent_n_prime != unit_fraction(cert.n_prime)
    {
        return Ok(false);
    }
    if component_kind(a, vs) != Ok(ComponentKind::Expanding) {
        return Ok(false);
    }
    let block = restrict(a, vs).expect("validated vertex set");
    let sums = block.pow(cert.n_prime as u64).column_sums();
    let two = BigUint::from(2u8);
    Ok(sums == cert.power_column_sums && sums.iter().all(|s| *s >= two))
}

/// Exponents `e` in `λ >= 2^e`: the sharper `1/n'` and the `1/n` form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExponentPair {
    pub sharp: BigRational,
    pub full: BigRational,
}

pub fn bound_from_certificate(cert: &PennerCertificate) -> ExponentPair {
    ExponentPair { sharp: unit_fraction(cert.n_prime), full: unit_fraction(cert.n) }
}

/// `log λ >= log 2 / (3|χ|)` together with the arc cap `3|χ|`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundReport {
    pub chi_abs: u64,
    pub arc_cap: u64,
    /// `1/(3|χ|)`, the exponent in `λ >= 2^{1/(3|χ|)}`.
    pub exponent: BigRational,
}

impl BoundReport {
    /// `log 2 / (3|χ|)`.
    pub fn log_lambda_bound(&self) -> f64 {
        std::f64::consts::LN_2 * self.exponent.to_f64().unwrap_or(f64::NAN)
    }

    pub fn lambda_bound(&self) -> f64 {
        self.log_lambda_bound().exp()
    }

    pub fn to_json_value(&self) -> Value {
        json!({
            "chi_abs": self.chi_abs,
            "arc_cap": self.arc_cap,
            "bound_exponent": rational_to_string(&self.exponent),
        })
    }
}

/// Takes `|χ(f)|`; the core characteristic of a nontrivial core is negative.
pub fn core_bound(chi_abs: i64) -> Result<BoundReport, PennerError> {
    if chi_abs <= 0 {
        return Err(PennerError::NonPositiveChi(chi_abs));
    }
    let chi_abs = chi_abs as u64;
    let arc_cap = 3 * chi_abs;
    Ok(BoundReport { chi_abs, arc_cap, exponent: BigRational::new(BigInt::from(1u8), BigInt::from(arc_cap)) })
}
