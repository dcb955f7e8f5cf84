//! Qubit channels through their Choi representation: construction from
//! Kraus operators, trace-preservation checks, and the characteristic core
//! with its unitary polar factor and rotation generator.
//!
//! Index convention: the first tensor factor is the output, the second the
//! input, so a rank-one Choi eigenvector reshapes (row = output) into an
//! operator acting as `output = K · input`.

use crate::characteristic::{compute_ipp_with, PurityIndices};
use crate::coherency::eigenvector_to_jones;
use crate::error::{Error, Result};
use crate::kernels::{
    hermitian_eig_with, polar2_with, su2_log_with, su2_strip_phase_with, AxisAngle,
};
use crate::mat::{self, cr, CMat2, CMat4};
use crate::pauli::JonesMatrix;
use crate::scalar::{Real, Tolerances};

/// Kraus operator list of a qubit channel.
#[derive(Debug, Clone, PartialEq)]
pub struct KrausSet<T: Real = f64> {
    pub ops: Vec<CMat2<T>>,
}

impl<T: Real> KrausSet<T> {
    pub fn new(ops: Vec<CMat2<T>>) -> Self {
        Self { ops }
    }

    /// Amplitude damping: `K0 = diag(1, sqrt(1-γ))`,
    /// `K1 = sqrt(γ) |0><1|`.
    pub fn amplitude_damping(gamma: T) -> Self {
        let mut k0 = mat::czero2();
        k0[0][0] = cr(T::one());
        k0[1][1] = cr((T::one() - gamma).sqrt());
        let mut k1 = mat::czero2();
        k1[0][1] = cr(gamma.sqrt());
        Self { ops: vec![k0, k1] }
    }

    /// Completely depolarizing channel `(Σ0, Σ1, Σ2, Σ3)/2`.
    pub fn completely_depolarizing() -> Self {
        let ops = crate::pauli::sigmas::<T>()
            .into_iter()
            .map(|s| mat::cscale(cr(T::half()), &s))
            .collect();
        Self { ops }
    }

    /// `max|Σ A†A - I|`, zero for a trace-preserving channel.
    pub fn completeness_deviation(&self) -> T {
        let mut acc = mat::czero2::<T>();
        for a in &self.ops {
            let g = mat::cmul(&mat::cdagger(a), a);
            acc = mat::cadd(&acc, &g);
        }
        mat::cmax_abs(&mat::csub(&acc, &mat::cident2()))
    }
}

/// Choi matrix of a qubit channel, output factor first. Trace 1 for a
/// trace-preserving channel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChoiState<T: Real = f64> {
    pub rho: CMat4<T>,
}

impl<T: Real> ChoiState<T> {
    /// Wraps a matrix after the hermiticity gate.
    pub fn new(rho: CMat4<T>) -> Result<Self> {
        Self::new_with(rho, &Tolerances::default())
    }

    /// See [`ChoiState::new`].
    pub fn new_with(rho: CMat4<T>, tol: &Tolerances<T>) -> Result<Self> {
        let dev = mat::hermiticity_deviation(&rho);
        let gate = tol.hermiticity_gate;
        if dev > gate {
            return Err(Error::NonHermitian {
                deviation: dev.to_f64().unwrap_or(f64::NAN),
                gate: gate.to_f64().unwrap_or(f64::NAN),
            });
        }
        Ok(Self { rho })
    }

    pub fn trace(&self) -> T {
        let mut s = T::zero();
        for i in 0..4 {
            s = s + self.rho[i][i].re;
        }
        s
    }

    /// Partial trace over the output (first) factor.
    pub fn trace_out_output(&self) -> CMat2<T> {
        let mut out = mat::czero2();
        for a in 0..2 {
            for j in 0..2 {
                for l in 0..2 {
                    out[j][l] = out[j][l] + self.rho[2 * a + j][2 * a + l];
                }
            }
        }
        out
    }
}

/// Choi state together with the completeness deviation of its source
/// Kraus set. A deviation above the warn threshold means the channel is
/// not trace preserving; the state is still computed.
#[derive(Debug, Clone, PartialEq)]
pub struct ChoiBuild<T: Real = f64> {
    pub state: ChoiState<T>,
    pub completeness_deviation: T,
}

/// Characteristic core of a qubit channel.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelCoreReport<T: Real = f64> {
    /// Choi eigenvalues, descending, clamped, trace-normalized.
    pub lambdas: [T; 4],
    pub purity: PurityIndices<T>,
    /// Dominant Kraus representative, normalized to `Tr(K†K) = 2`.
    pub kraus_dominant: JonesMatrix<T>,
    /// `K†K = I` within tolerance: the core alone is trace preserving and
    /// `K` is unitary.
    pub tp_core: bool,
    /// Unitary polar factor of `K`; carries the coherent holonomy.
    pub unitary_factor: JonesMatrix<T>,
    /// Hermitian polar factor of `K`.
    pub hermitian_factor: CMat2<T>,
    /// Global phase removed from the unitary factor.
    pub global_phase: T,
    /// Rotation generator of the det-1 part of the unitary factor.
    pub generator: AxisAngle<T>,
    /// Core not trace preserving on its own: dissipation is carried by the
    /// accompanying mixed layers.
    pub dissipative: bool,
    pub degenerate_gaps: [bool; 3],
    /// Singular `K`: unitary polar factor conventional.
    pub polar_degenerate: bool,
}

/// Choi state `Σ_i (A_i ⊗ I)|Ω><Ω|(A_i ⊗ I)†` with normalized
/// `|Ω> = (|00> + |11>)/√2`; equivalently `Σ_i vec(A_i) vec(A_i)†/2`.
pub fn choi_from_kraus<T: Real>(ks: &KrausSet<T>) -> Result<ChoiBuild<T>> {
    if ks.ops.is_empty() {
        return Err(Error::EmptyKrausSet);
    }
    let mut rho = mat::czero::<T, 4>();
    for a in &ks.ops {
        let v = [a[0][0], a[0][1], a[1][0], a[1][1]];
        let outer = mat::couter(&v, &v);
        for i in 0..4 {
            for j in 0..4 {
                rho[i][j] = rho[i][j] + outer[i][j] * cr(T::half());
            }
        }
    }
    Ok(ChoiBuild {
        state: ChoiState { rho },
        completeness_deviation: ks.completeness_deviation(),
    })
}

/// Trace preservation test: partial trace over the output factor compared
/// with `I/2`. Returns the verdict and the max-entry deviation.
pub fn trace_preservation<T: Real>(rho: &ChoiState<T>) -> (bool, T) {
    trace_preservation_with(rho, &Tolerances::default())
}

/// See [`trace_preservation`].
pub fn trace_preservation_with<T: Real>(rho: &ChoiState<T>, tol: &Tolerances<T>) -> (bool, T) {
    let reduced = rho.trace_out_output();
    let mut target = mat::czero2();
    target[0][0] = cr(T::half());
    target[1][1] = cr(T::half());
    let deviation = mat::cmax_abs(&mat::csub(&reduced, &target));
    (deviation < tol.trace_preservation, deviation)
}

/// Characteristic core of a Choi state: spectral analysis, purity indices,
/// dominant Kraus representative, and the rotation generator of its
/// unitary polar factor.
pub fn channel_core<T: Real>(rho: &ChoiState<T>) -> Result<ChannelCoreReport<T>> {
    channel_core_with(rho, &Tolerances::default())
}

/// See [`channel_core`].
pub fn channel_core_with<T: Real>(
    rho: &ChoiState<T>,
    tol: &Tolerances<T>,
) -> Result<ChannelCoreReport<T>> {
    let trace = rho.trace();
    if !(trace > T::zero()) {
        return Err(Error::NonPhysical {
            min_eigenvalue: f64::NEG_INFINITY,
            clamp: tol.clamp.to_f64().unwrap_or(f64::NAN),
        });
    }
    let normalized = mat::cscale(cr(T::one() / trace), &rho.rho);
    let spectrum = hermitian_eig_with(&normalized, tol)?;
    let min = spectrum.eigenvalues[3];
    if min < -tol.clamp {
        return Err(Error::NonPhysical {
            min_eigenvalue: min.to_f64().unwrap_or(f64::NAN),
            clamp: tol.clamp.to_f64().unwrap_or(f64::NAN),
        });
    }
    let mut lambdas = spectrum.eigenvalues;
    let before = lambdas[0] + lambdas[1] + lambdas[2] + lambdas[3];
    for e in lambdas.iter_mut() {
        if *e < T::zero() {
            *e = T::zero();
        }
    }
    let after = lambdas[0] + lambdas[1] + lambdas[2] + lambdas[3];
    if after > T::zero() {
        let scale = before / after;
        for e in lambdas.iter_mut() {
            *e = *e * scale;
        }
    }
    let purity = compute_ipp_with(&lambdas, tol)?;
    let gap = lambdas[0] - lambdas[1];
    if purity.p1 < tol.coherent_core || gap < tol.degenerate_gap {
        return Err(Error::NoCoherentCore {
            p1: purity.p1.to_f64().unwrap_or(f64::NAN),
        });
    }

    let kraus_dominant = eigenvector_to_jones(&spectrum.eigenvectors[0]);
    let gram = mat::cmul(&mat::cdagger(&kraus_dominant.0), &kraus_dominant.0);
    let tp_deviation = mat::cmax_abs(&mat::csub(&gram, &mat::cident2()));
    let tp_core = tp_deviation < tol.trace_preservation;

    let factors = polar2_with(&kraus_dominant.0, tol);
    let (det_one, global_phase) = su2_strip_phase_with(&factors.unitary, tol)?;
    let generator = su2_log_with(&det_one, tol)?;

    Ok(ChannelCoreReport {
        lambdas,
        purity,
        kraus_dominant,
        tp_core,
        unitary_factor: JonesMatrix(factors.unitary),
        hermitian_factor: factors.hermitian,
        global_phase,
        generator,
        dissipative: !tp_core,
        degenerate_gaps: spectrum.degenerate_gaps,
        polar_degenerate: factors.degenerate,
    })
}
