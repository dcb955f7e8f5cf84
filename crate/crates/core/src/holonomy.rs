//! Rotation-generator extraction from the pure characteristic core, its
//! canonical SU(2) lift, and the interferometric phase/visibility model.
//!
//! The 3x3 polarization block of the pure core factors uniquely into a
//! rotation (retarder) times a symmetric positive factor (diattenuation).
//! Only the rotation can transport a state around the Poincaré sphere, so
//! its antisymmetric logarithm carries the whole geometric phase; the
//! coherent weight `P1` scales the attainable fringe visibility.

use crate::characteristic::CharacteristicDecomposition;
use crate::error::{Error, Result};
use crate::kernels::{polar3_with, so3_log_with, AxisAngle};
use crate::mat::RMat3;
use crate::pauli::{spinor_to_bloch, BlochVector, JonesMatrix, JonesSpinor};
use crate::scalar::{Real, Tolerances};

/// Rotation content of a pure characteristic core.
#[derive(Debug, Clone, PartialEq)]
pub struct HolonomyReport<T: Real = f64> {
    /// Retarder factor of the core's polarization block.
    pub rotation: RMat3<T>,
    /// Symmetric (diattenuation) factor; phase-neutral.
    pub stretch: RMat3<T>,
    /// Antisymmetric generator `log(rotation)`.
    pub generator: RMat3<T>,
    pub axis_angle: AxisAngle<T>,
    /// Canonical det-1 lift `cos(θ/2) I - i sin(θ/2) (axis·Σ)`; carries no
    /// global dynamical phase by construction.
    pub canonical_su2: JonesMatrix<T>,
    /// Coherent weight `P1` of the core.
    pub coherent_weight: T,
    /// Singular polarization block: the rotation factor is conventional.
    pub degenerate_polar: bool,
    /// Rotation angle at the pi branch: axis sign conventional.
    pub pi_branch: bool,
}

/// Interferometric phase and visibility at one probe state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseSample<T: Real = f64> {
    pub probe: BlochVector<T>,
    /// `arg <ψ|U|ψ>` of the canonical lift, in `(-pi, pi]`.
    pub geometric_phase: T,
    /// `P1 · |<ψ|Ĵ0|ψ>|` with the dominant Jones normalized to
    /// `Tr(J†J) = 2`.
    pub coherent_visibility_modulus: T,
}

/// Extracts the rotation factor, generator, and canonical SU(2) lift from
/// the pure core of a characteristic decomposition.
///
/// Refuses decompositions without a coherent core (`P1` at the gate or a
/// degenerate dominant eigenvalue). A singular polarization block is not
/// an error: the conventional rotation is returned with a flag.
pub fn extract_holonomy<T: Real>(
    decomp: &CharacteristicDecomposition<T>,
) -> Result<HolonomyReport<T>> {
    extract_holonomy_with(decomp, &Tolerances::default())
}

/// See [`extract_holonomy`].
pub fn extract_holonomy_with<T: Real>(
    decomp: &CharacteristicDecomposition<T>,
    tol: &Tolerances<T>,
) -> Result<HolonomyReport<T>> {
    let gap = decomp.lambdas[0] - decomp.lambdas[1];
    if decomp.no_coherent_core || decomp.purity.p1 < tol.coherent_core || gap < tol.degenerate_gap {
        return Err(Error::NoCoherentCore {
            p1: decomp.purity.p1.to_f64().unwrap_or(f64::NAN),
        });
    }
    let block = decomp.pure_component.polarization_block();
    let factors = polar3_with(&block, tol);
    let (generator, axis_angle) = so3_log_with(&factors.rotation, tol)?;
    let canonical_su2 = JonesMatrix::retarder(&axis_angle.axis, axis_angle.angle);
    Ok(HolonomyReport {
        rotation: factors.rotation,
        stretch: factors.stretch,
        generator,
        axis_angle,
        canonical_su2,
        coherent_weight: decomp.purity.p1,
        degenerate_polar: factors.degenerate,
        pi_branch: axis_angle.pi_branch,
    })
}

/// Interferometric (Pancharatnam) phase of a unitary at a probe state:
/// `arg <ψ|U|ψ>` in `(-pi, pi]` together with the overlap modulus.
///
/// For `U = cos(θ/2) I - i sin(θ/2) (n·Σ)` this is
/// `arg(cos(θ/2) - i sin(θ/2)(n·u))` with `u` the probe's Bloch vector.
/// A modulus below the gate leaves the phase undefined.
pub fn pancharatnam_phase<T: Real>(u: &JonesMatrix<T>, psi: &JonesSpinor<T>) -> Result<(T, T)> {
    pancharatnam_phase_with(u, psi, &Tolerances::default())
}

/// See [`pancharatnam_phase`].
pub fn pancharatnam_phase_with<T: Real>(
    u: &JonesMatrix<T>,
    psi: &JonesSpinor<T>,
    tol: &Tolerances<T>,
) -> Result<(T, T)> {
    let dev = u.unitarity_deviation();
    if dev > tol.unitary_gate {
        return Err(Error::InvalidUnitary {
            deviation: dev.to_f64().unwrap_or(f64::NAN),
            gate: tol.unitary_gate.to_f64().unwrap_or(f64::NAN),
        });
    }
    let norm_dev = (psi.norm() - T::one()).abs();
    if norm_dev > tol.spinor_gate {
        return Err(Error::InvalidSpinor {
            deviation: norm_dev.to_f64().unwrap_or(f64::NAN),
            gate: tol.spinor_gate.to_f64().unwrap_or(f64::NAN),
        });
    }
    let overlap = u.expectation(psi);
    let modulus = overlap.norm();
    if modulus < tol.phase_undefined {
        return Err(Error::PhaseUndefined {
            modulus: modulus.to_f64().unwrap_or(f64::NAN),
            gate: tol.phase_undefined.to_f64().unwrap_or(f64::NAN),
        });
    }
    Ok((overlap.im.atan2(overlap.re), modulus))
}

/// Phase and coherent visibility of the analyzed matrix at a probe state:
/// the phase comes from the canonical lift, the modulus is `P1` times the
/// overlap with the normalized dominant Jones component.
pub fn coherent_visibility<T: Real>(
    decomp: &CharacteristicDecomposition<T>,
    report: &HolonomyReport<T>,
    psi: &JonesSpinor<T>,
) -> Result<PhaseSample<T>> {
    coherent_visibility_with(decomp, report, psi, &Tolerances::default())
}

/// See [`coherent_visibility`].
pub fn coherent_visibility_with<T: Real>(
    decomp: &CharacteristicDecomposition<T>,
    report: &HolonomyReport<T>,
    psi: &JonesSpinor<T>,
    tol: &Tolerances<T>,
) -> Result<PhaseSample<T>> {
    let (phase, _) = pancharatnam_phase_with(&report.canonical_su2, psi, tol)?;
    let dominant_overlap = decomp.jones[0].expectation(psi).norm();
    Ok(PhaseSample {
        probe: spinor_to_bloch(psi)?,
        geometric_phase: phase,
        coherent_visibility_modulus: decomp.purity.p1 * dominant_overlap,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::characteristic::characteristic_decompose;
    use crate::coherency::eigenvector_to_jones;
    use crate::ensemble::Lcg64;
    use crate::kernels::{su2_log, su2_strip_phase};
    use crate::mat::{self, c, cr, hat3, rmax_abs3, rsub3};
    use crate::pauli::{bloch_to_spinor, jones_to_mueller, su2_to_so3, MuellerMatrix};

    #[test]
    fn identity_core_has_zero_generator() {
        let d =
            characteristic_decompose(&jones_to_mueller(&JonesMatrix::<f64>::identity())).unwrap();
        let r = extract_holonomy(&d).unwrap();
        assert!(rmax_abs3(&r.generator) < 1e-12);
        assert_eq!(r.axis_angle.angle, 0.0);
        assert!(
            crate::pauli::cmat2_deviation(&r.canonical_su2.0, &JonesMatrix::identity().0) < 1e-12
        );
    }

    #[test]
    fn pure_retarder_core() {
        for &phi in &[0.4f64, 1.2, 2.6] {
            let j = JonesMatrix::retarder(&[1.0, 0.0, 0.0], phi);
            let d = characteristic_decompose(&jones_to_mueller(&j)).unwrap();
            let r = extract_holonomy(&d).unwrap();
            assert!(rmax_abs3(&rsub3(&r.stretch, &mat::rident3())) < 1e-9);
            let expect = hat3(&[phi, 0.0, 0.0]);
            assert!(rmax_abs3(&rsub3(&r.generator, &expect)) < 1e-9, "phi={phi}");
            assert!(crate::pauli::cmat2_deviation(&r.canonical_su2.0, &j.0) < 1e-9);
            assert!((r.coherent_weight - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn diattenuation_is_phase_neutral() {
        let mut rng = Lcg64::new(8);
        for _ in 0..100 {
            let u = JonesMatrix(rng.special_unitary2());
            let p = JonesMatrix(rng.hermitian_pd2(0.15));
            let pure = characteristic_decompose(&jones_to_mueller(&u)).unwrap();
            let mixed = characteristic_decompose(&jones_to_mueller(&u.mul(&p))).unwrap();
            let ru = extract_holonomy(&pure).unwrap();
            let rp = extract_holonomy(&mixed).unwrap();
            assert!((ru.axis_angle.angle - rp.axis_angle.angle).abs() < 1e-9);
            if ru.axis_angle.angle > 1e-6 {
                for i in 0..3 {
                    assert!((ru.axis_angle.axis[i] - rp.axis_angle.axis[i]).abs() < 1e-8);
                }
            }
            // retarder case is stretch-free; the diattenuating core still
            // reconstructs its polarization block
            assert!(rmax_abs3(&rsub3(&ru.stretch, &mat::rident3())) < 1e-9);
            let block = mixed.pure_component.polarization_block();
            let recon = mat::rmul3(&rp.rotation, &rp.stretch);
            assert!(rmax_abs3(&rsub3(&recon, &block)) < 1e-10);
        }
    }

    #[test]
    fn refuses_without_coherent_core() {
        let d = characteristic_decompose(&MuellerMatrix::<f64>::ideal_depolarizer()).unwrap();
        assert!(matches!(
            extract_holonomy(&d),
            Err(Error::NoCoherentCore { .. })
        ));
    }

    #[test]
    fn gauge_independence_of_extraction() {
        let m = crate::ensemble::random_physical_mueller::<f64>(55, 3);
        let d = characteristic_decompose(&m).unwrap();
        let r1 = extract_holonomy(&d).unwrap();
        // rotate the dominant Jones by a global phase; the Mueller image
        // and hence the whole report must not move
        let mut d2 = d.clone();
        let alpha = 0.9f64;
        d2.jones[0] = d2.jones[0].scale(c(alpha.cos(), alpha.sin()));
        d2.pure_component = jones_to_mueller(&d2.jones[0]);
        let r2 = extract_holonomy(&d2).unwrap();
        assert!(rmax_abs3(&rsub3(&r1.generator, &r2.generator)) < 1e-10);
        assert!(rmax_abs3(&rsub3(&r1.rotation, &r2.rotation)) < 1e-10);
    }

    #[test]
    fn canonical_lift_projects_back() {
        for seed in 0..50u64 {
            let m = crate::ensemble::random_physical_mueller::<f64>(900 + seed, 2);
            let d = characteristic_decompose(&m).unwrap();
            if d.no_coherent_core {
                continue;
            }
            let r = extract_holonomy(&d).unwrap();
            let adj = su2_to_so3(&r.canonical_su2).unwrap();
            assert!(rmax_abs3(&rsub3(&adj, &r.rotation)) < 1e-9);
            let recon = crate::kernels::so3_exp(&r.generator).unwrap();
            assert!(rmax_abs3(&rsub3(&recon, &r.rotation)) < 1e-9);
        }
    }

    #[test]
    fn pancharatnam_reference_values() {
        let psi = JonesSpinor([cr(1.0), cr(0.0)]);
        for &phi in &[0.5f64, 1.0, 2.0, 3.0] {
            // retarder about the probe axis: phase -phi/2, modulus 1
            let j1 = JonesMatrix::retarder(&[1.0, 0.0, 0.0], phi);
            let (phase, modulus) = pancharatnam_phase(&j1, &psi).unwrap();
            assert!((phase - -phi / 2.0).abs() < 1e-14, "phi={phi}");
            assert!((modulus - 1.0).abs() < 1e-14);
            // retarder about an orthogonal axis: phase 0, modulus cos(phi/2)
            let j2 = JonesMatrix::retarder(&[0.0, 1.0, 0.0], phi);
            let (phase, modulus) = pancharatnam_phase(&j2, &psi).unwrap();
            assert!(phase.abs() < 1e-14);
            assert!((modulus - (phi / 2.0).cos()).abs() < 1e-14);
        }
    }

    #[test]
    fn pancharatnam_matches_overlap_oracle() {
        let mut rng = Lcg64::new(12);
        for _ in 0..1000 {
            let u = JonesMatrix(rng.unitary2());
            let psi = rng.spinor();
            let overlap = u.expectation(&psi);
            if overlap.norm() < 1e-6 {
                continue;
            }
            let (phase, modulus) = pancharatnam_phase(&u, &psi).unwrap();
            assert!((phase - overlap.im.atan2(overlap.re)).abs() < 1e-14);
            assert!((modulus - overlap.norm()).abs() < 1e-14);
        }
    }

    #[test]
    fn pancharatnam_closed_form_for_canonical_lifts() {
        let mut rng = Lcg64::new(14);
        for _ in 0..1000 {
            let axis = rng.unit3();
            let angle = rng.uniform() * core::f64::consts::PI;
            let u = JonesMatrix::retarder(&axis, angle);
            let psi = rng.spinor();
            let bloch = spinor_to_bloch(&psi).unwrap();
            let half = angle / 2.0;
            let expected = c(half.cos(), -half.sin() * mat::rdot3(&axis, &bloch.0));
            if expected.norm() < 1e-9 {
                continue;
            }
            let (phase, modulus) = pancharatnam_phase(&u, &psi).unwrap();
            assert!((phase - expected.im.atan2(expected.re)).abs() < 1e-10);
            assert!((modulus - expected.norm()).abs() < 1e-12);
        }
    }

    #[test]
    fn phase_undefined_at_zero_overlap() {
        // half-wave retarder about axis 1, probed on an orthogonal axis
        let u = JonesMatrix::retarder(&[1.0, 0.0, 0.0], core::f64::consts::PI);
        let s = 1.0 / 2.0f64.sqrt();
        let psi = JonesSpinor([cr(s), cr(s)]);
        assert!(matches!(
            pancharatnam_phase(&u, &psi),
            Err(Error::PhaseUndefined { .. })
        ));
    }

    #[test]
    fn visibility_of_aligned_probe_on_retarder() {
        let phi = 1.7f64;
        let axis = [0.0, 0.6, 0.8];
        let j = JonesMatrix::retarder(&axis, phi);
        let d = characteristic_decompose(&jones_to_mueller(&j)).unwrap();
        let r = extract_holonomy(&d).unwrap();
        let psi = bloch_to_spinor(&BlochVector(axis));
        let sample = coherent_visibility(&d, &r, &psi).unwrap();
        assert!((sample.geometric_phase - -phi / 2.0).abs() < 1e-9);
        assert!((sample.coherent_visibility_modulus - 1.0).abs() < 1e-9);
    }

    #[test]
    fn isotropic_depolarizer_has_zero_phase_and_p1_modulus() {
        let a = 0.37f64;
        let mut m = mat::rident4::<f64>();
        m[1][1] = a;
        m[2][2] = a;
        m[3][3] = a;
        let d = characteristic_decompose(&MuellerMatrix(m)).unwrap();
        assert!((d.purity.p1 - a).abs() < 1e-12);
        let r = extract_holonomy(&d).unwrap();
        assert!(r.axis_angle.angle < 1e-9);
        let mut rng = Lcg64::new(16);
        for _ in 0..20 {
            let psi = rng.spinor();
            let sample = coherent_visibility(&d, &r, &psi).unwrap();
            assert!(sample.geometric_phase.abs() < 1e-10);
            assert!((sample.coherent_visibility_modulus - a).abs() < 1e-10);
        }
    }

    #[test]
    fn two_retarder_mixture_pipeline_consistency() {
        let phi = core::f64::consts::FRAC_PI_2;
        let j1 = JonesMatrix::retarder(&[1.0, 0.0, 0.0], phi);
        let j2 = JonesMatrix::retarder(&[0.0, 1.0, 0.0], phi);
        let m = jones_to_mueller(&j1)
            .scale(0.5)
            .add(&jones_to_mueller(&j2).scale(0.5));
        let d = characteristic_decompose(&m).unwrap();
        let r = extract_holonomy(&d).unwrap();
        // the dominant eigen-Jones is a retarder about (1,1,0)/sqrt(2)
        let s = 1.0 / 2.0f64.sqrt();
        for i in 0..3 {
            let expect = [s, s, 0.0][i];
            assert!((r.axis_angle.axis[i] - expect).abs() < 1e-9);
        }
        // probe (1,0): phase agrees with the closed form of the lift
        let psi = JonesSpinor([cr(1.0), cr(0.0)]);
        let sample = coherent_visibility(&d, &r, &psi).unwrap();
        let half = r.axis_angle.angle / 2.0;
        let expect = c(half.cos(), -half.sin() * s);
        assert!((sample.geometric_phase - expect.im.atan2(expect.re)).abs() < 1e-9);
        // the effective angle matches the generator of the dominant lift;
        // cross-check through the su2 kernels
        let (w, _) = su2_strip_phase(&d.jones[0].0).unwrap();
        let aa = su2_log(&w).unwrap();
        assert!((aa.angle - r.axis_angle.angle).abs() < 1e-9);
        // modulus equals P1 times the dominant overlap
        let direct = d.purity.p1 * d.jones[0].expectation(&psi).norm();
        assert!((sample.coherent_visibility_modulus - direct).abs() < 1e-12);
    }

    #[test]
    fn modulus_bounded_by_weight_for_unitary_cores() {
        // mixtures of retarders about a common axis keep a unitary core,
        // where the visibility bound |V| <= P1 is exact
        let mut rng = Lcg64::new(18);
        for _ in 0..100 {
            let axis = rng.unit3();
            let m = jones_to_mueller(&JonesMatrix::retarder(&axis, 0.9))
                .scale(0.6)
                .add(&jones_to_mueller(&JonesMatrix::retarder(&axis, 2.1)).scale(0.4));
            let d = characteristic_decompose(&m).unwrap();
            let r = extract_holonomy(&d).unwrap();
            let psi = rng.spinor();
            match coherent_visibility(&d, &r, &psi) {
                Ok(sample) => {
                    assert!(sample.coherent_visibility_modulus <= d.purity.p1 + 1e-12);
                }
                Err(Error::PhaseUndefined { .. }) => {}
                Err(e) => panic!("unexpected error {e}"),
            }
        }
    }

    #[test]
    fn degenerate_polar_block_is_flagged_not_fatal() {
        // pure polarizer: singular polarization block
        let d = characteristic_decompose(&jones_to_mueller(
            &JonesMatrix::<f64>::horizontal_polarizer(),
        ))
        .unwrap();
        let r = extract_holonomy(&d).unwrap();
        assert!(r.degenerate_polar);
        assert!(crate::pauli::rotation_deviation(&r.rotation) < 1e-10);
    }

    #[test]
    fn eigen_jones_connects_to_report_axis() {
        // consistency between the dominant eigenvector route and the
        // polar/log route on a generic rank-2 input
        for seed in 40..60u64 {
            let m = crate::ensemble::random_physical_mueller::<f64>(seed, 2);
            let d = characteristic_decompose(&m).unwrap();
            if d.no_coherent_core || d.degenerate_gaps[0] {
                continue;
            }
            let r = extract_holonomy(&d).unwrap();
            let v0 = crate::coherency::jones_to_eigenvector(&d.jones[0]);
            let j0 = eigenvector_to_jones(&v0);
            // the polar rotation of the block equals the adjoint of the
            // unitary polar factor of J0
            let f2 = crate::kernels::polar2(&j0.0);
            let adj = su2_to_so3(&JonesMatrix(f2.unitary)).unwrap();
            assert!(rmax_abs3(&rsub3(&adj, &r.rotation)) < 1e-8);
        }
    }
}
