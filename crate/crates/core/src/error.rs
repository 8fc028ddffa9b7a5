use thiserror::Error;

use crate::digraph::GraphError;
use crate::family::FamilyError;
use crate::intmatrix::MatrixError;
use crate::penner::PennerError;
use crate::spectral::SpectralError;
use crate::substitution::SubstitutionError;

/// Failure to read one of the text or JSON interchange formats.
#[derive(Debug, Error)]
pub enum ParseError {
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("malformed document: {0}")]
    Schema(String),
    #[error("invalid rational `{0}`")]
    Rational(String),
    #[error("line {line}: invalid integer `{token}`")]
    Integer { line: usize, token: String },
    #[error("declared n = {declared} but found {found} rows")]
    DeclaredSize { declared: usize, found: usize },
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error(transparent)]
    Substitution(#[from] SubstitutionError),
}

/// Umbrella error for callers that mix several modules.
#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
    #[error(transparent)]
    Penner(#[from] PennerError),
    #[error(transparent)]
    Substitution(#[from] SubstitutionError),
    #[error(transparent)]
    Family(#[from] FamilyError),
}
