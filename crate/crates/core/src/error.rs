//! Error type shared by all analysis modules.

use thiserror::Error;

/// Analysis failure modes.
///
/// Numerical flags (degenerate spectra, pi-branch axes, singular polar
/// factors) are reported inside result types, not as errors; only contract
/// violations and undefined quantities surface here.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Spinor norm deviates from 1 beyond the input gate.
    #[error("invalid spinor: norm deviation {deviation:e} exceeds gate {gate:e}")]
    InvalidSpinor { deviation: f64, gate: f64 },

    /// Matrix fails the unitarity gate `max|U†U - I|`.
    #[error("invalid unitary: deviation {deviation:e} exceeds gate {gate:e}")]
    InvalidUnitary { deviation: f64, gate: f64 },

    /// Matrix fails the hermiticity gate `max|H - H†|`.
    #[error("non-hermitian input: deviation {deviation:e} exceeds gate {gate:e}")]
    NonHermitian { deviation: f64, gate: f64 },

    /// Matrix is not a rotation (orthogonality or det(+1) failure).
    #[error("not a rotation matrix: deviation {deviation:e} exceeds gate {gate:e}")]
    NotARotation { deviation: f64, gate: f64 },

    /// Matrix fails the antisymmetry gate.
    #[error("not antisymmetric: deviation {deviation:e} exceeds gate {gate:e}")]
    NotAntisymmetric { deviation: f64, gate: f64 },

    /// Covariance spectrum carries negativity beyond the clamp tolerance.
    #[error(
        "non-physical Mueller matrix: covariance eigenvalue {min_eigenvalue:e} below -{clamp:e}"
    )]
    NonPhysical { min_eigenvalue: f64, clamp: f64 },

    /// Dominant eigenvalue carries no coherent weight (P1 at or below the
    /// gate, or a degenerate dominant pair); holonomy is undefined.
    #[error("no coherent core: holonomy undefined (P1 = {p1:e})")]
    NoCoherentCore { p1: f64 },

    /// Visibility modulus below the gate; the interferometric phase has no
    /// defined value.
    #[error("phase undefined: visibility modulus {modulus:e} below gate {gate:e}")]
    PhaseUndefined { modulus: f64, gate: f64 },

    /// Purity indices requested for an unsorted eigenvalue list.
    #[error("eigenvalues not in descending order at position {position}")]
    UnsortedEigenvalues { position: usize },

    /// Purity indices requested for a spectrum that does not sum to one.
    #[error("eigenvalue sum {sum} deviates from 1 beyond gate {gate:e}")]
    SpectrumNotNormalized { sum: f64, gate: f64 },

    /// Purity indices requested for a spectrum with a negative eigenvalue.
    #[error("negative eigenvalue {value:e} beyond gate {gate:e}")]
    NegativeEigenvalue { value: f64, gate: f64 },

    /// Ensemble weights are non-positive or do not sum to one.
    #[error("invalid ensemble: {reason}")]
    InvalidEnsemble { reason: String },

    /// Kraus list is empty.
    #[error("empty Kraus operator list")]
    EmptyKrausSet,
}

/// Crate-wide result alias.
pub type Result<V> = core::result::Result<V, Error>;
