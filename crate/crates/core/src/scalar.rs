//! Scalar abstraction: the analysis kernels are generic over the floating
//! point type through [`Real`], with per-type numerical tolerances.

use num_traits::{Float, FloatConst, FromPrimitive};

/// Floating point scalar usable by every kernel in this crate.
///
/// Implemented for `f32` and `f64`. The associated [`Tolerances`] carry the
/// per-type defaults; the documented contract values are the `f64` column,
/// the `f32` values are scaled to its shorter mantissa.
pub trait Real:
    Float + FloatConst + FromPrimitive + core::fmt::Debug + core::fmt::Display + Default + 'static
{
    /// Default tolerance set for this scalar type.
    fn default_tolerances() -> Tolerances<Self>;

    #[inline]
    fn half() -> Self {
        Self::from_f64(0.5).unwrap()
    }
    #[inline]
    fn two() -> Self {
        Self::from_f64(2.0).unwrap()
    }
    #[inline]
    fn four() -> Self {
        Self::from_f64(4.0).unwrap()
    }
    /// Literal conversion helper for small constants.
    #[inline]
    fn lit(v: f64) -> Self {
        Self::from_f64(v).unwrap()
    }
}

/// Numerical gates and thresholds used across the analysis pipeline.
///
/// Every field has a documented default (see [`Real::default_tolerances`]);
/// front ends may override individual fields.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances<T> {
    /// Input gate: spinor normalization deviation. Default 1e-9.
    pub spinor_gate: T,
    /// Input gate: unitarity deviation `max|U†U - I|`. Default 1e-10.
    pub unitary_gate: T,
    /// Input gate: hermiticity deviation `max|H - H†|`. Default 1e-8.
    pub hermiticity_gate: T,
    /// Input gate: rotation-matrix deviation (orthogonality and det). Default 1e-8.
    pub rotation_gate: T,
    /// Input gate: antisymmetry deviation. Default 1e-10.
    pub antisymmetry_gate: T,
    /// Jacobi eigensolver off-diagonal convergence threshold (relative to
    /// the Frobenius norm). Default 1e-14.
    pub eig_off_diagonal: T,
    /// Eigenvalue gap below which a pair is flagged degenerate. Default 1e-12.
    pub degenerate_gap: T,
    /// Covariance eigenvalue clamp: values in `[-clamp, 0)` are set to zero
    /// and the spectrum renormalized; anything more negative is a
    /// non-physical verdict. Default 1e-9.
    pub clamp: T,
    /// Singular value below which a polar factor is flagged degenerate
    /// (rotation/unitary factor no longer unique). Default 1e-10.
    pub singular: T,
    /// Rotation angles within this distance of pi trigger the pi-branch
    /// axis extraction. Default 1e-6.
    pub pi_branch: T,
    /// Coherent-core gate: holonomy is refused when `P1` falls below this.
    /// Default 1e-9.
    pub coherent_core: T,
    /// Discriminant imaginary content above this flags nonregularity.
    /// Default 1e-9.
    pub nonregularity: T,
    /// Visibility modulus below which the interferometric phase is
    /// reported undefined. Default 1e-12.
    pub phase_undefined: T,
    /// Trace-preservation deviation gate for Choi states. Default 1e-9.
    pub trace_preservation: T,
    /// Kraus completeness deviation above which a channel is reported
    /// non-trace-preserving on load. Default 1e-6.
    pub completeness_warn: T,
    /// Eigenvalue-sum deviation accepted by the purity-index computation.
    /// Default 1e-9.
    pub spectrum_sum_gate: T,
}

impl<T: Real> Default for Tolerances<T> {
    fn default() -> Self {
        T::default_tolerances()
    }
}

macro_rules! impl_real {
    ($t:ty, $off:expr, $gap:expr, $spinor:expr, $unitary:expr, $herm:expr,
     $clamp:expr, $singular:expr, $phase:expr) => {
        impl Real for $t {
            fn default_tolerances() -> Tolerances<Self> {
                Tolerances {
                    spinor_gate: $spinor,
                    unitary_gate: $unitary,
                    hermiticity_gate: $herm,
                    rotation_gate: $herm,
                    antisymmetry_gate: $unitary,
                    eig_off_diagonal: $off,
                    degenerate_gap: $gap,
                    clamp: $clamp,
                    singular: $singular,
                    pi_branch: 1e-6,
                    coherent_core: $clamp,
                    nonregularity: $clamp,
                    phase_undefined: $phase,
                    trace_preservation: $clamp,
                    completeness_warn: 1e-6,
                    spectrum_sum_gate: $clamp,
                }
            }
        }
    };
}

impl_real!(f64, 1e-14, 1e-12, 1e-9, 1e-10, 1e-8, 1e-9, 1e-10, 1e-12);
impl_real!(f32, 1e-6, 1e-5, 1e-4, 1e-4, 1e-3, 1e-4, 1e-5, 1e-6);

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f64_defaults_match_contract() {
        let tol = Tolerances::<f64>::default();
        assert_eq!(tol.spinor_gate, 1e-9);
        assert_eq!(tol.unitary_gate, 1e-10);
        assert_eq!(tol.hermiticity_gate, 1e-8);
        assert_eq!(tol.eig_off_diagonal, 1e-14);
        assert_eq!(tol.degenerate_gap, 1e-12);
        assert_eq!(tol.clamp, 1e-9);
        assert_eq!(tol.singular, 1e-10);
        assert_eq!(tol.phase_undefined, 1e-12);
    }

    #[test]
    fn f32_defaults_are_coarser() {
        let tol = Tolerances::<f32>::default();
        assert!(tol.eig_off_diagonal > f32::EPSILON);
        assert!(tol.clamp > Tolerances::<f64>::default().clamp as f32);
    }
}
