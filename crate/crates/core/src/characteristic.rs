//! Purity indices, the characteristic decomposition into pure core,
//! equiprobable mixture layers and the ideal depolarizer, plus the
//! discriminant remainder with its nonregularity flag.

use crate::coherency::{
    jones_to_eigenvector, mueller_to_cov, spectral_components_with, CovarianceMatrix,
    SpectralComponents,
};
use crate::error::{Error, Result};
use crate::mat::{self, cr, CMat4};
use crate::pauli::{jones_to_mueller, JonesMatrix, MuellerMatrix};
use crate::scalar::{Real, Tolerances};

/// Indices of polarimetric purity, `0 <= P1 <= P2 <= P3 <= 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PurityIndices<T: Real = f64> {
    pub p1: T,
    pub p2: T,
    pub p3: T,
}

/// Characteristic expansion of a normalized Mueller matrix:
///
/// `M̂ = P1·M̂_J + (P2-P1)·M̂_(2) + (P3-P2)·M̂_(3) + (1-P3)·M̂_Δ0`
///
/// with the two- and three-component layers the equiprobable mixtures of
/// the leading spectral pure components.
#[derive(Debug, Clone, PartialEq)]
pub struct CharacteristicDecomposition<T: Real = f64> {
    /// Gain removed by normalization.
    pub m00: T,
    /// `M / m00`, the matrix the weights reconstruct.
    pub normalized: MuellerMatrix<T>,
    pub purity: PurityIndices<T>,
    /// Clamped covariance eigenvalues, descending, summing to one.
    pub lambdas: [T; 4],
    /// Spectral pure Jones components (`Tr(J†J) = 2`), dominant first.
    pub jones: [JonesMatrix<T>; 4],
    /// Pure characteristic core `M̂_J = M̂(J0)`.
    pub pure_component: MuellerMatrix<T>,
    /// `M̂_(2)`, equiprobable mixture of the two leading components.
    pub two_mix: MuellerMatrix<T>,
    /// `M̂_(3)`, equiprobable mixture of the three leading components.
    pub three_mix: MuellerMatrix<T>,
    /// Ideal depolarizer `diag(1, 0, 0, 0)`.
    pub ideal_depolarizer: MuellerMatrix<T>,
    /// Expansion weights `(P1, P2-P1, P3-P2, 1-P3)`.
    pub weights: [T; 4],
    /// Grouped non-pure component; absent at the `P1 = 1` boundary where
    /// its normalization vanishes.
    pub nonpure: Option<MuellerMatrix<T>>,
    /// Discriminant remainder of the normalized covariance.
    pub discriminant: CMat4<T>,
    /// Weight of the discriminant layer, `P3 - P1`.
    pub discriminant_weight: T,
    /// Imaginary content in the discriminant above tolerance.
    pub nonregular: bool,
    pub degenerate_gaps: [bool; 3],
    /// `P1` at or below the coherent-core gate: the dominant component is
    /// not unique and holonomy extraction refuses the input.
    pub no_coherent_core: bool,
}

/// Purity indices from a descending, trace-1 eigenvalue list:
/// `P1 = λ0-λ1`, `P2 = λ0+λ1-2λ2`, `P3 = λ0+λ1+λ2-3λ3`.
pub fn compute_ipp<T: Real>(lambdas: &[T; 4]) -> Result<PurityIndices<T>> {
    compute_ipp_with(lambdas, &Tolerances::default())
}

/// See [`compute_ipp`].
pub fn compute_ipp_with<T: Real>(
    lambdas: &[T; 4],
    tol: &Tolerances<T>,
) -> Result<PurityIndices<T>> {
    for i in 0..3 {
        if lambdas[i] < lambdas[i + 1] {
            return Err(Error::UnsortedEigenvalues { position: i + 1 });
        }
    }
    if lambdas[3] < -tol.spectrum_sum_gate {
        return Err(Error::NegativeEigenvalue {
            value: lambdas[3].to_f64().unwrap_or(f64::NAN),
            gate: tol.spectrum_sum_gate.to_f64().unwrap_or(f64::NAN),
        });
    }
    let sum = lambdas[0] + lambdas[1] + lambdas[2] + lambdas[3];
    if (sum - T::one()).abs() > tol.spectrum_sum_gate {
        return Err(Error::SpectrumNotNormalized {
            sum: sum.to_f64().unwrap_or(f64::NAN),
            gate: tol.spectrum_sum_gate.to_f64().unwrap_or(f64::NAN),
        });
    }
    Ok(PurityIndices {
        p1: lambdas[0] - lambdas[1],
        p2: lambdas[0] + lambdas[1] - T::two() * lambdas[2],
        p3: lambdas[0] + lambdas[1] + lambdas[2] - T::lit(3.0) * lambdas[3],
    })
}

/// Discriminant remainder of a normalized covariance matrix:
/// `ρ_disc = Ĥ - P1·v0 v0† - (1-P3)·I/4`, with the nonregularity flag set
/// when it carries imaginary entries above tolerance (tested in the
/// canonical covariance basis).
pub fn discriminant_component<T: Real>(
    h: &CovarianceMatrix<T>,
    spectral: &SpectralComponents<T>,
    purity: &PurityIndices<T>,
) -> (CMat4<T>, bool) {
    discriminant_component_with(h, spectral, purity, &Tolerances::default())
}

/// See [`discriminant_component`].
pub fn discriminant_component_with<T: Real>(
    h: &CovarianceMatrix<T>,
    spectral: &SpectralComponents<T>,
    purity: &PurityIndices<T>,
    tol: &Tolerances<T>,
) -> (CMat4<T>, bool) {
    let hn = h.normalized();
    let v0 = jones_to_eigenvector(&spectral.jones[0]);
    let dominant = mat::couter(&v0, &v0);
    let mixed_weight = (T::one() - purity.p3) / T::four();
    let mut disc = hn.0;
    for i in 0..4 {
        for j in 0..4 {
            disc[i][j] = disc[i][j] - dominant[i][j] * cr(purity.p1);
            if i == j {
                disc[i][j] = disc[i][j] - cr(mixed_weight);
            }
        }
    }
    let mut max_imag = T::zero();
    for row in disc.iter() {
        for e in row.iter() {
            max_imag = max_imag.max(e.im.abs());
        }
    }
    (disc, max_imag > tol.nonregularity)
}

/// Full characteristic analysis of a Mueller matrix with default
/// tolerances. Errors on non-physical input; a vanishing `P1` is reported
/// through `no_coherent_core`, not as an error.
pub fn characteristic_decompose<T: Real>(
    m: &MuellerMatrix<T>,
) -> Result<CharacteristicDecomposition<T>> {
    characteristic_decompose_with(m, &Tolerances::default())
}

/// See [`characteristic_decompose`].
pub fn characteristic_decompose_with<T: Real>(
    m: &MuellerMatrix<T>,
    tol: &Tolerances<T>,
) -> Result<CharacteristicDecomposition<T>> {
    let m00 = m.m00();
    if !(m00 > T::zero()) {
        return Err(Error::NonPhysical {
            min_eigenvalue: f64::NEG_INFINITY,
            clamp: tol.clamp.to_f64().unwrap_or(f64::NAN),
        });
    }
    let normalized = m.normalized();
    let h = mueller_to_cov(&normalized);
    let spectral = spectral_components_with(&h, tol)?;
    let purity = compute_ipp_with(&spectral.lambdas, tol)?;

    let pure_component = jones_to_mueller(&spectral.jones[0]);
    let m1 = pure_component;
    let m2 = jones_to_mueller(&spectral.jones[1]);
    let m3 = jones_to_mueller(&spectral.jones[2]);
    let two_mix = m1.add(&m2).scale(T::half());
    let three_mix = m1.add(&m2).add(&m3).scale(T::one() / T::lit(3.0));
    let ideal_depolarizer = MuellerMatrix::ideal_depolarizer();

    let weights = [
        purity.p1,
        purity.p2 - purity.p1,
        purity.p3 - purity.p2,
        T::one() - purity.p3,
    ];

    let nonpure = if purity.p1 < T::one() - tol.degenerate_gap {
        let scale = T::one() / (T::one() - purity.p1);
        Some(
            two_mix
                .scale(weights[1])
                .add(&three_mix.scale(weights[2]))
                .add(&ideal_depolarizer.scale(weights[3]))
                .scale(scale),
        )
    } else {
        None
    };

    let (discriminant, nonregular) = discriminant_component_with(&h, &spectral, &purity, tol);

    Ok(CharacteristicDecomposition {
        m00,
        normalized,
        purity,
        lambdas: spectral.lambdas,
        jones: spectral.jones.clone(),
        pure_component,
        two_mix,
        three_mix,
        ideal_depolarizer,
        weights,
        nonpure,
        discriminant,
        discriminant_weight: purity.p3 - purity.p1,
        nonregular,
        degenerate_gaps: spectral.degenerate_gaps,
        no_coherent_core: purity.p1 < tol.coherent_core,
    })
}

impl<T: Real> CharacteristicDecomposition<T> {
    /// `max|Σ w_k component_k - M̂|`, the four-layer reconstruction
    /// residual.
    pub fn reconstruction_residual(&self) -> T {
        let acc = self
            .pure_component
            .scale(self.weights[0])
            .add(&self.two_mix.scale(self.weights[1]))
            .add(&self.three_mix.scale(self.weights[2]))
            .add(&self.ideal_depolarizer.scale(self.weights[3]));
        acc.sub(&self.normalized).max_abs()
    }

    /// `max|P1·M̂_J + (1-P1)·M̂_np - M̂|`; falls back to the pure-core
    /// residual at the `P1 = 1` boundary where the grouped term is absent.
    pub fn grouping_residual(&self) -> T {
        let acc = match &self.nonpure {
            Some(np) => self
                .pure_component
                .scale(self.purity.p1)
                .add(&np.scale(T::one() - self.purity.p1)),
            None => self.pure_component.scale(self.purity.p1),
        };
        acc.sub(&self.normalized).max_abs()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coherency::{spectral_components, validate_mueller, Verdict};
    use crate::ensemble::{random_physical_mueller, Lcg64};
    use crate::mat::{cmax_abs, couter, csub};

    #[test]
    fn ipp_reference_values() {
        let p = compute_ipp(&[1.0, 0.0, 0.0, 0.0]).unwrap();
        assert_eq!((p.p1, p.p2, p.p3), (1.0, 1.0, 1.0));
        let p = compute_ipp(&[0.25; 4]).unwrap();
        assert_eq!((p.p1, p.p2, p.p3), (0.0, 0.0, 0.0));
        // hand arithmetic: (0.5, 0.3, 0.15, 0.05) -> (0.2, 0.5, 0.8)
        let p = compute_ipp(&[0.5f64, 0.3, 0.15, 0.05]).unwrap();
        assert!((p.p1 - 0.2).abs() < 1e-15);
        assert!((p.p2 - 0.5).abs() < 1e-15);
        assert!((p.p3 - 0.8).abs() < 1e-15);
    }

    #[test]
    fn ipp_gates() {
        assert!(matches!(
            compute_ipp(&[0.3, 0.5, 0.1, 0.1]),
            Err(Error::UnsortedEigenvalues { position: 1 })
        ));
        assert!(matches!(
            compute_ipp(&[0.5, 0.3, 0.2, 0.2]),
            Err(Error::SpectrumNotNormalized { .. })
        ));
        assert!(matches!(
            compute_ipp(&[0.7, 0.4, 0.0, -0.1]),
            Err(Error::NegativeEigenvalue { .. })
        ));
    }

    #[test]
    fn pure_unitary_input() {
        let mut rng = Lcg64::new(2);
        let j = JonesMatrix(rng.unitary2());
        let d = characteristic_decompose(&jones_to_mueller(&j)).unwrap();
        assert!((d.purity.p1 - 1.0).abs() < 1e-12);
        assert!(d.pure_component.sub(&d.normalized).max_abs() < 1e-10);
        assert!(d.weights[1].abs() < 1e-12 && d.weights[2].abs() < 1e-12);
        assert!(d.weights[3].abs() < 1e-12);
        assert!(d.nonpure.is_none());
        assert!(!d.no_coherent_core);
        assert!(d.reconstruction_residual() < 1e-10);
        assert!(d.grouping_residual() < 1e-10);
    }

    #[test]
    fn ideal_depolarizer_input() {
        let d = characteristic_decompose(&MuellerMatrix::<f64>::ideal_depolarizer()).unwrap();
        assert!(d.purity.p1.abs() < 1e-12);
        assert!(d.purity.p3.abs() < 1e-12);
        assert_eq!([d.weights[0], d.weights[1], d.weights[2]], [0.0, 0.0, 0.0]);
        assert!((d.weights[3] - 1.0).abs() < 1e-12);
        assert!(d.no_coherent_core);
        assert!(d.reconstruction_residual() < 1e-12);
    }

    #[test]
    fn two_retarder_mixture_frozen_oracle() {
        // equal mixture of retarders about axes 1 and 2 at phi = pi/2;
        // eigenvalue oracle gives lambdas (3/4, 1/4, 0, 0)
        let phi = core::f64::consts::FRAC_PI_2;
        let j1 = JonesMatrix::retarder(&[1.0, 0.0, 0.0], phi);
        let j2 = JonesMatrix::retarder(&[0.0, 1.0, 0.0], phi);
        let m = jones_to_mueller(&j1)
            .scale(0.5)
            .add(&jones_to_mueller(&j2).scale(0.5));
        let d = characteristic_decompose(&m).unwrap();
        assert!((d.lambdas[0] - 0.75).abs() < 1e-12);
        assert!((d.lambdas[1] - 0.25).abs() < 1e-12);
        assert!((d.purity.p1 - 0.5).abs() < 1e-12);
        assert!((d.purity.p2 - 1.0).abs() < 1e-12);
        assert!((d.purity.p3 - 1.0).abs() < 1e-12);
        assert!(d.reconstruction_residual() < 1e-10);
        assert!(d.grouping_residual() < 1e-10);
    }

    #[test]
    fn rejects_nonphysical() {
        let mut bad = mat::rident4::<f64>();
        bad[3][3] = -1.0;
        assert!(matches!(
            characteristic_decompose(&MuellerMatrix(bad)),
            Err(Error::NonPhysical { .. })
        ));
        let zero = MuellerMatrix([[0.0; 4]; 4]);
        assert!(characteristic_decompose(&zero).is_err());
    }

    #[test]
    fn discriminant_vanishes_at_both_ends() {
        // pure input
        let mut rng = Lcg64::new(4);
        let j = JonesMatrix(rng.unitary2());
        let d = characteristic_decompose(&jones_to_mueller(&j)).unwrap();
        assert!(cmax_abs(&d.discriminant) < 1e-10);
        assert!(!d.nonregular);
        // maximally mixed input
        let d = characteristic_decompose(&MuellerMatrix::<f64>::ideal_depolarizer()).unwrap();
        assert!(cmax_abs(&d.discriminant) < 1e-12);
        assert!(!d.nonregular);
    }

    #[test]
    fn discriminant_rank_two_matches_eigendata() {
        // equiprobable mixture of two random pure states: with lambda3 = 0
        // the remainder is lambda1 (v0 v0† + v1 v1†)
        let mut rng = Lcg64::new(6);
        let (a, b) = rng.orthonormal_pair4();
        let mut h = mat::czero::<f64, 4>();
        let pa = couter(&a, &a);
        let pb = couter(&b, &b);
        for i in 0..4 {
            for j in 0..4 {
                h[i][j] = (pa[i][j] + pb[i][j]) * cr(0.5);
            }
        }
        let hw = CovarianceMatrix(h);
        let spectral = spectral_components(&hw).unwrap();
        let purity = compute_ipp(&spectral.lambdas).unwrap();
        let (disc, flag) = discriminant_component(&hw, &spectral, &purity);

        let v0 = jones_to_eigenvector(&spectral.jones[0]);
        let v1 = jones_to_eigenvector(&spectral.jones[1]);
        let p0 = couter(&v0, &v0);
        let p1 = couter(&v1, &v1);
        let mut expect = mat::czero::<f64, 4>();
        let l1 = spectral.lambdas[1];
        for i in 0..4 {
            for j in 0..4 {
                expect[i][j] = (p0[i][j] + p1[i][j]) * cr(l1);
            }
        }
        assert!(cmax_abs(&csub(&disc, &expect)) < 1e-10);
        // generic random pair carries imaginary correlations
        let mut max_imag = 0.0f64;
        for row in disc.iter() {
            for e in row.iter() {
                max_imag = max_imag.max(e.im.abs());
            }
        }
        assert_eq!(flag, max_imag > 1e-9);
        // trace identity: 1 - P1 - (1 - P3)
        let tr: f64 = (0..4).map(|i| disc[i][i].re).sum();
        assert!((tr - (1.0 - purity.p1 - (1.0 - purity.p3))).abs() < 1e-10);
    }

    #[test]
    fn random_matrices_reconstruct_and_order() {
        for seed in 0..200u64 {
            let rank = 1 + (seed % 4) as usize;
            let m = random_physical_mueller::<f64>(seed, rank);
            let d = characteristic_decompose(&m).unwrap();
            assert!(d.reconstruction_residual() < 1e-10, "seed {seed}");
            assert!(d.grouping_residual() < 1e-10, "seed {seed}");
            assert!(d.purity.p1 >= -1e-12);
            assert!(d.purity.p2 >= d.purity.p1 - 1e-12);
            assert!(d.purity.p3 >= d.purity.p2 - 1e-12);
            assert!(d.purity.p3 <= 1.0 + 1e-12);
            for component in [
                &d.pure_component,
                &d.two_mix,
                &d.three_mix,
                &d.ideal_depolarizer,
            ] {
                assert_eq!(validate_mueller(component).verdict, Verdict::Physical);
            }
            if let Some(np) = &d.nonpure {
                assert_eq!(validate_mueller(np).verdict, Verdict::Physical);
            }
        }
    }

    #[test]
    fn total_dominant_content_is_lambda0() {
        // expanding the four layers, the total coefficient on M(J0) is
        // P1 + (P2-P1)/2 + (P3-P2)/3 + (1-P3)/4 = lambda0
        for seed in 300..320u64 {
            let m = random_physical_mueller::<f64>(seed, 4);
            let d = characteristic_decompose(&m).unwrap();
            let total = d.weights[0] + d.weights[1] / 2.0 + d.weights[2] / 3.0 + d.weights[3] / 4.0;
            assert!((total - d.lambdas[0]).abs() < 1e-12);
        }
    }
}
