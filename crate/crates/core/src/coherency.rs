//! Mueller ↔ covariance conversion, physicality validation, and the
//! ordered spectral pure components.
//!
//! The covariance convention is the matrix-unit (reshape) one: the
//! covariance of a pure Mueller matrix is `vec(J) vec(J)† / 2` with
//! row-major `vec`, so eigenvectors reshape directly to Jones matrices and
//! the same spectral engine serves Choi states of qubit channels.

use crate::error::{Error, Result};
use crate::kernels::{hermitian_eig_with, HermitianSpectrum};
use crate::mat::{self, cr, CMat2, CMat4, CVec4};
use crate::pauli::{sigmas, JonesMatrix, MuellerMatrix};
use crate::scalar::{Real, Tolerances};

/// Hermitian 4x4 covariance (coherency) matrix; trace equals the `m00` of
/// the source Mueller matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CovarianceMatrix<T: Real = f64>(pub CMat4<T>);

impl<T: Real> CovarianceMatrix<T> {
    pub fn trace(&self) -> T {
        let mut s = T::zero();
        for i in 0..4 {
            s = s + self.0[i][i].re;
        }
        s
    }

    pub fn hermiticity_deviation(&self) -> T {
        mat::hermiticity_deviation(&self.0)
    }

    /// `H / Tr H`.
    pub fn normalized(&self) -> Self {
        let t = self.trace();
        Self(mat::cscale(cr(T::one() / t), &self.0))
    }
}

/// Physicality verdict of a Mueller matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Physical,
    NonPhysical,
}

/// Outcome of the covariance positivity test.
#[derive(Debug, Clone, PartialEq)]
pub struct ValidityReport<T: Real = f64> {
    /// Eigenvalues of the trace-normalized covariance, descending.
    pub eigenvalues: [T; 4],
    pub min_eigenvalue: T,
    pub verdict: Verdict,
    /// Eigenvalues after the clamp rule (present for physical input):
    /// values in `[-clamp, 0)` set to zero, spectrum rescaled to preserve
    /// the trace.
    pub clamped: Option<[T; 4]>,
    pub m00: T,
}

/// Spectral pure components of a covariance matrix: eigenvalues plus the
/// Jones realization of each eigenvector, normalized to `Tr(J†J) = 2`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralComponents<T: Real = f64> {
    /// Descending, clamped; sums to the input trace.
    pub lambdas: [T; 4],
    pub jones: [JonesMatrix<T>; 4],
    pub degenerate_gaps: [bool; 3],
}

/// Builds the 16 basis observables `Σi ⊗ Σj*`.
fn stokes_basis<T: Real>() -> [[CMat4<T>; 4]; 4] {
    let sig = sigmas::<T>();
    let conj = |m: &CMat2<T>| -> CMat2<T> {
        let mut out = *m;
        for row in out.iter_mut() {
            for e in row.iter_mut() {
                *e = e.conj();
            }
        }
        out
    };
    let mut basis = [[mat::czero::<T, 4>(); 4]; 4];
    for (i, si) in sig.iter().enumerate() {
        for (j, sj) in sig.iter().enumerate() {
            basis[i][j] = mat::kron2(si, &conj(sj));
        }
    }
    basis
}

/// Covariance image of a Mueller matrix: `H = ¼ Σ m_ij (Σi ⊗ Σj*)`.
///
/// Linear; `Tr H = m00`; physical Mueller matrices map to PSD `H`.
pub fn mueller_to_cov<T: Real>(m: &MuellerMatrix<T>) -> CovarianceMatrix<T> {
    let basis = stokes_basis::<T>();
    let quarter = T::one() / T::four();
    let mut h = mat::czero::<T, 4>();
    for (i, row) in basis.iter().enumerate() {
        for (j, b) in row.iter().enumerate() {
            let w = cr(m.0[i][j] * quarter);
            for r in 0..4 {
                for s in 0..4 {
                    h[r][s] = h[r][s] + b[r][s] * w;
                }
            }
        }
    }
    CovarianceMatrix(h)
}

/// Exact inverse of [`mueller_to_cov`]: `m_ij = Tr(H (Σi ⊗ Σj*))`.
pub fn cov_to_mueller<T: Real>(h: &CovarianceMatrix<T>) -> MuellerMatrix<T> {
    let basis = stokes_basis::<T>();
    let mut m = [[T::zero(); 4]; 4];
    for (i, row) in basis.iter().enumerate() {
        for (j, b) in row.iter().enumerate() {
            m[i][j] = mat::ctrace(&mat::cmul(&h.0, b)).re;
        }
    }
    MuellerMatrix(m)
}

/// Covariance positivity (physical realizability) test with the default
/// tolerances.
pub fn validate_mueller<T: Real>(m: &MuellerMatrix<T>) -> ValidityReport<T> {
    validate_mueller_with(m, &Tolerances::default())
}

/// See [`validate_mueller`].
pub fn validate_mueller_with<T: Real>(
    m: &MuellerMatrix<T>,
    tol: &Tolerances<T>,
) -> ValidityReport<T> {
    let m00 = m.m00();
    let h = mueller_to_cov(m);
    if !(m00 > T::zero()) {
        // no sensible normalization; eigenvalues of the raw covariance
        let spectrum = hermitian_eig_with(&h.0, tol).expect("covariance image is hermitian");
        return ValidityReport {
            eigenvalues: spectrum.eigenvalues,
            min_eigenvalue: spectrum.eigenvalues[3],
            verdict: Verdict::NonPhysical,
            clamped: None,
            m00,
        };
    }
    let spectrum =
        hermitian_eig_with(&h.normalized().0, tol).expect("covariance image is hermitian");
    let min = spectrum.eigenvalues[3];
    if min < -tol.clamp {
        return ValidityReport {
            eigenvalues: spectrum.eigenvalues,
            min_eigenvalue: min,
            verdict: Verdict::NonPhysical,
            clamped: None,
            m00,
        };
    }
    ValidityReport {
        eigenvalues: spectrum.eigenvalues,
        min_eigenvalue: min,
        verdict: Verdict::Physical,
        clamped: Some(clamp_spectrum(&spectrum.eigenvalues)),
        m00,
    }
}

/// Sets negatives (within the clamp window) to zero and rescales so the
/// sum is preserved.
fn clamp_spectrum<T: Real>(lambdas: &[T; 4]) -> [T; 4] {
    let before = lambdas[0] + lambdas[1] + lambdas[2] + lambdas[3];
    let mut out = *lambdas;
    for e in out.iter_mut() {
        if *e < T::zero() {
            *e = T::zero();
        }
    }
    let after = out[0] + out[1] + out[2] + out[3];
    if after > T::zero() {
        let scale = before / after;
        for e in out.iter_mut() {
            *e = *e * scale;
        }
    }
    out
}

/// Reshapes a covariance eigenvector into a Jones matrix: component
/// `2·row + col` becomes entry (row, col), output index first; rescaled to
/// `Tr(J†J) = 2`.
pub fn eigenvector_to_jones<T: Real>(v: &CVec4<T>) -> JonesMatrix<T> {
    let n = mat::cnorm(v);
    let scale = if n > T::zero() {
        cr(T::two().sqrt() / n)
    } else {
        cr(T::zero())
    };
    JonesMatrix([[v[0] * scale, v[1] * scale], [v[2] * scale, v[3] * scale]])
}

/// Row-major `vec(J)`, rescaled to unit norm.
pub fn jones_to_eigenvector<T: Real>(j: &JonesMatrix<T>) -> CVec4<T> {
    let v = [j.0[0][0], j.0[0][1], j.0[1][0], j.0[1][1]];
    let n = mat::cnorm(&v);
    [v[0] / n, v[1] / n, v[2] / n, v[3] / n]
}

/// Ordered spectral decomposition of a covariance matrix into pure
/// components, with the clamp rule applied. Errors with a non-physical
/// verdict when negativity exceeds the clamp window (relative to trace).
pub fn spectral_components<T: Real>(h: &CovarianceMatrix<T>) -> Result<SpectralComponents<T>> {
    spectral_components_with(h, &Tolerances::default())
}

/// See [`spectral_components`].
pub fn spectral_components_with<T: Real>(
    h: &CovarianceMatrix<T>,
    tol: &Tolerances<T>,
) -> Result<SpectralComponents<T>> {
    let spectrum: HermitianSpectrum<T> = hermitian_eig_with(&h.0, tol)?;
    let trace = h.trace();
    let scale = trace.abs().max(T::epsilon());
    let min_rel = spectrum.eigenvalues[3] / scale;
    if min_rel < -tol.clamp {
        return Err(Error::NonPhysical {
            min_eigenvalue: min_rel.to_f64().unwrap_or(f64::NAN),
            clamp: tol.clamp.to_f64().unwrap_or(f64::NAN),
        });
    }
    let lambdas = clamp_spectrum(&spectrum.eigenvalues);
    let jones = [
        eigenvector_to_jones(&spectrum.eigenvectors[0]),
        eigenvector_to_jones(&spectrum.eigenvectors[1]),
        eigenvector_to_jones(&spectrum.eigenvectors[2]),
        eigenvector_to_jones(&spectrum.eigenvectors[3]),
    ];
    Ok(SpectralComponents {
        lambdas,
        jones,
        degenerate_gaps: spectrum.degenerate_gaps,
    })
}
