//! Analysis of polarization transformations and qubit channels through
//! their covariance (coherency) spectra.
//!
//! Given an arbitrary, possibly strongly depolarizing Mueller matrix, the
//! pipeline extracts:
//!
//! * the purity indices and the characteristic expansion into a pure core,
//!   two equiprobable mixture layers, and the ideal depolarizer
//!   ([`characteristic`]);
//! * the retarder rotation of the pure core, its antisymmetric generator,
//!   and the canonical SU(2) lift that carries the interferometric
//!   geometric phase, with the coherent weight `P1` scaling the attainable
//!   fringe visibility ([`holonomy`]);
//! * the discriminant remainder of the covariance and its nonregularity
//!   flag ([`characteristic`]).
//!
//! The same spectral engine applies to qubit channels in the Choi
//! representation ([`channel`]): the dominant eigenvector reshapes into a
//! Kraus representative whose unitary polar factor fixes the coherent
//! holonomy, while the remaining layers encode dissipation.
//!
//! [`ensemble`] provides the forward model (weighted Jones ensembles,
//! exact complex visibilities) used as an independent oracle, plus a
//! seeded generator of physical test matrices.
//!
//! All kernels are generic over the scalar type through [`Real`]
//! (`f64` is the default and the documented-tolerance column; `f32`
//! works with proportionally coarser gates).

pub mod channel;
pub mod characteristic;
pub mod coherency;
pub mod ensemble;
mod error;
pub mod holonomy;
pub mod kernels;
pub(crate) mod mat;
pub mod pauli;
pub mod scalar;

pub use channel::{
    channel_core, channel_core_with, choi_from_kraus, trace_preservation, trace_preservation_with,
    ChannelCoreReport, ChoiBuild, ChoiState, KrausSet,
};
pub use characteristic::{
    characteristic_decompose, characteristic_decompose_with, compute_ipp, compute_ipp_with,
    discriminant_component, discriminant_component_with, CharacteristicDecomposition,
    PurityIndices,
};
pub use coherency::{
    cov_to_mueller, eigenvector_to_jones, jones_to_eigenvector, mueller_to_cov,
    spectral_components, spectral_components_with, validate_mueller, validate_mueller_with,
    CovarianceMatrix, SpectralComponents, ValidityReport, Verdict,
};
pub use ensemble::{
    ensemble_to_mueller, ensemble_visibility, random_physical_mueller, retarder_family,
    sweep_visibility, JonesEnsemble, Lcg64, VisibilityCurve, VisibilitySample,
};
pub use error::{Error, Result};
pub use holonomy::{
    coherent_visibility, coherent_visibility_with, extract_holonomy, extract_holonomy_with,
    pancharatnam_phase, pancharatnam_phase_with, HolonomyReport, PhaseSample,
};
pub use kernels::{
    hermitian_eig, hermitian_eig_with, polar2, polar2_with, polar3, polar3_with, so3_exp,
    so3_exp_with, so3_log, so3_log_with, su2_log, su2_log_with, su2_strip_phase,
    su2_strip_phase_with, AxisAngle, HermitianSpectrum, PolarFactors2, PolarFactors3,
};
pub use pauli::{
    apply_mueller, bloch_to_spinor, jones_to_mueller, rotation_deviation, sigma, sigmas,
    spinor_to_bloch, su2_to_so3, BlochVector, JonesMatrix, JonesSpinor, MuellerMatrix,
    StokesVector,
};
pub use scalar::{Real, Tolerances};

/// Complex scalar re-export; all matrix entries are `Complex<T>`.
pub use num_complex::Complex;

/// Single-precision aliases of the core types. The default type parameter
/// on each struct already selects `f64`.
pub type JonesMatrix32 = JonesMatrix<f32>;
pub type MuellerMatrix32 = MuellerMatrix<f32>;
pub type JonesSpinor32 = JonesSpinor<f32>;
pub type BlochVector32 = BlochVector<f32>;
pub type CovarianceMatrix32 = CovarianceMatrix<f32>;
pub type ChoiState32 = ChoiState<f32>;
