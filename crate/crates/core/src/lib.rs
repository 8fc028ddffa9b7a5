//! Certified spectral analysis of nonnegative integral matrices.
//!
//! The crate decides `ρ(A) > 1` exactly from the SCC structure of `G(A)`,
//! encloses `ρ(A)` between exact rationals, and produces checkable
//! certificates for `log ρ(A) >= log 2 / n`.
//!
//! Vertex indices are 0-based in this API and 1-based in every serialized
//! form and error message.

pub mod digraph;
pub mod error;
pub mod exact;
pub mod family;
pub mod intmatrix;
pub mod penner;
pub mod spectral;
pub mod substitution;

pub use digraph::{
    component_kind, exceeds_one, graph_of, is_circle, is_perron_frobenius, restrict, scc_decompose, ComponentKind,
    GraphError, OrientedGraph, SccDecomposition,
};
pub use error::{Error, ParseError};
pub use family::{
    claim_operator, claim_substitution, eigenvector_check, family_stretch, sharpness_report, FamilyError, FamilyParams,
    FamilyStretch, SharpnessReport,
};
pub use intmatrix::{cone_norm, mat_pow, parse_matrix, path_count, ConeVector, MatrixError, NonNegIntMatrix};
pub use penner::{bound_from_certificate, certify, check, core_bound, BoundReport, PennerCertificate, PennerError};
pub use spectral::{
    collatz_wielandt, dominant_component, spectral_radius, spectral_radius_with, DominantComponent, SpectralError,
    SpectralInterval, SpectralOptions,
};
pub use substitution::{arc_count_admissible, entropy_interval, incidence_matrix, Substitution, SubstitutionError};

pub use num_bigint::BigUint;
pub use num_rational::BigRational;
