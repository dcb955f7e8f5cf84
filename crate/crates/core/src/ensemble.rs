//! Forward model: weighted Jones ensembles, their Mueller synthesis, exact
//! interferometric visibilities, and a seeded generator of physical test
//! matrices.
//!
//! The generator is a plain 64-bit LCG specified by the seed alone, so any
//! implementation can reproduce the same matrices bit for bit.

use num_complex::Complex;

use crate::coherency::cov_to_mueller;
use crate::error::{Error, Result};
use crate::mat::{c, couter, cr, CMat2, CMat4, CVec4, RMat3, RVec3};
use crate::pauli::{jones_to_mueller, JonesMatrix, JonesSpinor, MuellerMatrix};
use crate::scalar::Real;

/// 64-bit linear congruential generator.
///
/// `state <- state * 6364136223846793005 + 1442695040888963407`, output
/// mapped to `[0, 1)` from the high 53 bits. Deterministic per seed.
#[derive(Debug, Clone)]
pub struct Lcg64 {
    state: u64,
}

impl Lcg64 {
    pub const MULTIPLIER: u64 = 6364136223846793005;
    pub const INCREMENT: u64 = 1442695040888963407;

    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self
            .state
            .wrapping_mul(Self::MULTIPLIER)
            .wrapping_add(Self::INCREMENT);
        self.state
    }

    /// Uniform draw in `[0, 1)` from the high 53 bits.
    pub fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }

    /// Uniform draw in `[-1, 1)`.
    pub fn symmetric(&mut self) -> f64 {
        2.0 * self.uniform() - 1.0
    }

    /// Random complex 2x2 with entries uniform in the unit square.
    pub fn complex_mat2(&mut self) -> CMat2<f64> {
        let mut m = [[cr(0.0); 2]; 2];
        for row in m.iter_mut() {
            for e in row.iter_mut() {
                *e = c(self.symmetric(), self.symmetric());
            }
        }
        m
    }

    /// Random complex 4-vector, entries uniform in the unit square.
    pub fn complex_vec4(&mut self) -> CVec4<f64> {
        let mut v = [cr(0.0); 4];
        for e in v.iter_mut() {
            *e = c(self.symmetric(), self.symmetric());
        }
        v
    }

    /// Haar-ish random SU(2)-times-phase unitary from a random quaternion
    /// and a random global phase.
    pub fn unitary2(&mut self) -> CMat2<f64> {
        let su2 = self.special_unitary2();
        let alpha = self.uniform() * core::f64::consts::TAU;
        crate::mat::cscale(c(alpha.cos(), alpha.sin()), &su2)
    }

    /// Random det-1 unitary from a normalized quaternion.
    pub fn special_unitary2(&mut self) -> CMat2<f64> {
        loop {
            let q = [
                self.symmetric(),
                self.symmetric(),
                self.symmetric(),
                self.symmetric(),
            ];
            let n = (q[0] * q[0] + q[1] * q[1] + q[2] * q[2] + q[3] * q[3]).sqrt();
            if n < 1e-3 {
                continue;
            }
            let q = [q[0] / n, q[1] / n, q[2] / n];
            let q3 = (1.0 - q[0] * q[0] - q[1] * q[1] - q[2] * q[2])
                .max(0.0)
                .sqrt()
                * if self.uniform() < 0.5 { 1.0 } else { -1.0 };
            // W = q0 I - i (q1 Σ1 + q2 Σ2 + q3' Σ3); reuse retarder form
            let s = (q[1] * q[1] + q[2] * q[2] + q3 * q3).sqrt();
            if s < 1e-9 {
                return crate::mat::cident2();
            }
            let angle = 2.0 * s.atan2(q[0]);
            let axis = [q[1] / s, q[2] / s, q3 / s];
            return JonesMatrix::retarder(&axis, angle).0;
        }
    }

    /// Random unit spinor.
    pub fn spinor(&mut self) -> JonesSpinor<f64> {
        loop {
            let v = [
                c(self.symmetric(), self.symmetric()),
                c(self.symmetric(), self.symmetric()),
            ];
            let n = (v[0].norm_sqr() + v[1].norm_sqr()).sqrt();
            if n > 1e-3 {
                return JonesSpinor([v[0] / n, v[1] / n]);
            }
        }
    }

    /// Random unit 3-vector.
    pub fn unit3(&mut self) -> RVec3<f64> {
        loop {
            let v = [self.symmetric(), self.symmetric(), self.symmetric()];
            let n = crate::mat::rnorm3(&v);
            if n > 1e-3 && n <= 1.0 {
                return [v[0] / n, v[1] / n, v[2] / n];
            }
        }
    }

    /// Random rotation with angle uniform in `[0, pi - margin]`.
    pub fn rotation3_below(&mut self, margin: f64) -> RMat3<f64> {
        let axis = self.unit3();
        let angle = self.uniform() * (core::f64::consts::PI - margin);
        let g = crate::mat::hat3(&[axis[0] * angle, axis[1] * angle, axis[2] * angle]);
        crate::kernels::so3_exp(&g).expect("constructed generator is antisymmetric")
    }

    /// Random rotation, angle bounded away from pi.
    pub fn rotation3(&mut self) -> RMat3<f64> {
        self.rotation3_below(1e-3)
    }

    /// Random symmetric positive definite 3x3 with eigenvalues in
    /// `[floor, 1]` (condition number at most `1/floor`).
    pub fn spd3(&mut self, floor: f64) -> RMat3<f64> {
        let r = self.rotation3();
        let mut d = [0.0; 3];
        for e in d.iter_mut() {
            *e = floor + (1.0 - floor) * self.uniform();
        }
        let mut m = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                let mut s = 0.0;
                for (k, dk) in d.iter().enumerate() {
                    s += r[i][k] * *dk * r[j][k];
                }
                m[i][j] = s;
            }
        }
        // exact symmetry
        for i in 0..3 {
            for j in i + 1..3 {
                let avg = 0.5 * (m[i][j] + m[j][i]);
                m[i][j] = avg;
                m[j][i] = avg;
            }
        }
        m
    }

    /// Random Hermitian positive definite 2x2 with eigenvalues in
    /// `[floor, 1]`.
    pub fn hermitian_pd2(&mut self, floor: f64) -> CMat2<f64> {
        let v = self.special_unitary2();
        let d = [
            floor + (1.0 - floor) * self.uniform(),
            floor + (1.0 - floor) * self.uniform(),
        ];
        let mut diag = crate::mat::czero2();
        diag[0][0] = cr(d[0]);
        diag[1][1] = cr(d[1]);
        let m = crate::mat::cmul(&v, &crate::mat::cmul(&diag, &crate::mat::cdagger(&v)));
        hermitize2(m)
    }

    /// Random Hermitian PSD 4x4, trace 1, generically rank 4.
    pub fn hermitian_psd4(&mut self) -> CMat4<f64> {
        random_covariance(self, 4)
    }

    /// Two random orthonormal complex 4-vectors.
    pub fn orthonormal_pair4(&mut self) -> (CVec4<f64>, CVec4<f64>) {
        let normalize = |v: &CVec4<f64>| -> CVec4<f64> {
            let n = crate::mat::cnorm(v);
            [v[0] / n, v[1] / n, v[2] / n, v[3] / n]
        };
        let a = normalize(&self.complex_vec4());
        loop {
            let raw = self.complex_vec4();
            let proj = crate::mat::cdot(&a, &raw);
            let mut b = raw;
            for i in 0..4 {
                b[i] -= proj * a[i];
            }
            if crate::mat::cnorm(&b) > 1e-3 {
                return (a, normalize(&b));
            }
        }
    }
}

fn hermitize2(mut m: CMat2<f64>) -> CMat2<f64> {
    m[0][0] = cr(m[0][0].re);
    m[1][1] = cr(m[1][1].re);
    let avg = (m[0][1] + m[1][0].conj()) * cr(0.5);
    m[0][1] = avg;
    m[1][0] = avg.conj();
    m
}

/// `H = Σ_k w_k g_k g_k†` over `rank` seeded complex vectors, trace 1.
fn random_covariance(rng: &mut Lcg64, rank: usize) -> CMat4<f64> {
    let mut h = [[cr(0.0); 4]; 4];
    for _ in 0..rank {
        let w = rng.uniform() + 0.0625;
        let g = rng.complex_vec4();
        let outer = couter(&g, &g);
        for i in 0..4 {
            for j in 0..4 {
                h[i][j] += outer[i][j] * w;
            }
        }
    }
    let mut trace = 0.0;
    for i in 0..4 {
        trace += h[i][i].re;
    }
    for row in h.iter_mut() {
        for e in row.iter_mut() {
            *e /= trace;
        }
    }
    h
}

/// Weighted list of Jones matrices; weights positive, summing to one.
///
/// Member global phases do not affect the Mueller synthesis but do enter
/// the complex visibility, which is phase-sensitive by construction.
#[derive(Debug, Clone, PartialEq)]
pub struct JonesEnsemble<T: Real = f64> {
    members: Vec<(T, JonesMatrix<T>)>,
}

impl<T: Real> JonesEnsemble<T> {
    pub fn new(members: Vec<(T, JonesMatrix<T>)>) -> Result<Self> {
        if members.is_empty() {
            return Err(Error::InvalidEnsemble {
                reason: "no members".into(),
            });
        }
        let mut sum = T::zero();
        for (i, (w, _)) in members.iter().enumerate() {
            if *w <= T::zero() {
                return Err(Error::InvalidEnsemble {
                    reason: format!("weight {i} is not positive"),
                });
            }
            sum = sum + *w;
        }
        let gate = T::lit(1e-12).max(T::epsilon() * T::from_usize(members.len()).unwrap());
        if (sum - T::one()).abs() > gate {
            return Err(Error::InvalidEnsemble {
                reason: format!("weights sum to {sum}, expected 1"),
            });
        }
        Ok(Self { members })
    }

    /// Single deterministic device as a trivial ensemble.
    pub fn pure(j: JonesMatrix<T>) -> Self {
        Self {
            members: vec![(T::one(), j)],
        }
    }

    pub fn members(&self) -> &[(T, JonesMatrix<T>)] {
        &self.members
    }
}

/// Convex Mueller synthesis `M = Σ p_k M(J_k)`.
pub fn ensemble_to_mueller<T: Real>(ens: &JonesEnsemble<T>) -> MuellerMatrix<T> {
    let mut m = MuellerMatrix([[T::zero(); 4]; 4]);
    for (w, j) in ens.members() {
        m = m.add(&jones_to_mueller(j).scale(*w));
    }
    m
}

/// Exact complex visibility `Σ p_k <ψ|J_k|ψ>`.
pub fn ensemble_visibility<T: Real>(ens: &JonesEnsemble<T>, psi: &JonesSpinor<T>) -> Complex<T> {
    let mut v = cr(T::zero());
    for (w, j) in ens.members() {
        v = v + j.expectation(psi) * cr(*w);
    }
    v
}

/// One visibility evaluation along a sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VisibilitySample<T: Real = f64> {
    pub parameter: T,
    pub visibility: Complex<T>,
    /// `arg(visibility)` in `(-pi, pi]`; meaningful only where the modulus
    /// is above the phase gate.
    pub arg: T,
    pub modulus: T,
}

/// Visibility samples over a parameter grid.
#[derive(Debug, Clone, PartialEq)]
pub struct VisibilityCurve<T: Real = f64> {
    pub samples: Vec<VisibilitySample<T>>,
}

/// Evaluates the ensemble family at every grid point.
pub fn sweep_visibility<T: Real>(
    builder: impl Fn(T) -> JonesEnsemble<T>,
    grid: &[T],
    psi: &JonesSpinor<T>,
) -> VisibilityCurve<T> {
    let samples = grid
        .iter()
        .map(|&p| {
            let v = ensemble_visibility(&builder(p), psi);
            VisibilitySample {
                parameter: p,
                visibility: v,
                arg: v.im.atan2(v.re),
                modulus: v.norm(),
            }
        })
        .collect();
    VisibilityCurve { samples }
}

/// Family of weighted retarders sharing one sweep angle: member `k` is
/// `exp(-i φ (axis_k·Σ)/2)` with fixed weight and axis.
pub fn retarder_family<T: Real>(members: Vec<(T, RVec3<T>)>) -> impl Fn(T) -> JonesEnsemble<T> {
    move |phi: T| {
        JonesEnsemble::new(
            members
                .iter()
                .map(|(w, axis)| (*w, JonesMatrix::retarder(axis, phi)))
                .collect(),
        )
        .expect("retarder family weights fixed at construction")
    }
}

/// Deterministic physical Mueller matrix of the requested covariance rank.
///
/// Seeded draws (in order, per rank index): one weight `u + 1/16`, then
/// eight `[-1, 1)` values forming a complex 4-vector. The accumulated
/// `Σ w g g†` is trace-normalized and mapped through the covariance
/// inverse, so the output is physical by construction.
pub fn random_physical_mueller<T: Real>(seed: u64, rank: usize) -> MuellerMatrix<T> {
    assert!((1..=4).contains(&rank), "rank must be 1..=4, got {rank}");
    let mut rng = Lcg64::new(seed);
    let h64 = random_covariance(&mut rng, rank);
    let mut h = [[cr(T::zero()); 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            h[i][j] = c(T::lit(h64[i][j].re), T::lit(h64[i][j].im));
        }
    }
    cov_to_mueller(&crate::coherency::CovarianceMatrix(h))
}
