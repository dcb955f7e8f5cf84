//! Pauli/Stokes conventions, spinor-Bloch maps, and the Jones-Mueller map.
//!
//! The basis is fixed once for the whole crate, in polarization-optics
//! ordering:
//!
//! * `Σ0` — identity,
//! * `Σ1` — `diag(1, -1)` (linear 0/90° component),
//! * `Σ2` — real off-diagonal ones (linear ±45° component),
//! * `Σ3` — purely imaginary off-diagonal, `-i` upper / `+i` lower
//!   (circular/helicity component).
//!
//! Stokes vectors are length-4 arrays `(s0, s1, s2, s3)` with `s0` the
//! intensity; the Bloch vector is the last three components of a normalized
//! Stokes vector, `u_i = <ψ|Σi|ψ>`.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::mat::{self, c, cmax_abs, cr, csub, CMat2, RMat3};
use crate::scalar::Real;

/// Stokes four-vector `(s0, s1, s2, s3)`.
pub type StokesVector<T> = [T; 4];

/// The fixed 2x2 basis `Σ0..Σ3`.
pub fn sigma<T: Real>(i: usize) -> CMat2<T> {
    let o = T::zero();
    let l = T::one();
    match i {
        0 => [[c(l, o), c(o, o)], [c(o, o), c(l, o)]],
        1 => [[c(l, o), c(o, o)], [c(o, o), c(-l, o)]],
        2 => [[c(o, o), c(l, o)], [c(l, o), c(o, o)]],
        3 => [[c(o, o), c(o, -l)], [c(o, l), c(o, o)]],
        _ => panic!("pauli index out of range: {i}"),
    }
}

/// All four basis matrices at once.
pub fn sigmas<T: Real>() -> [CMat2<T>; 4] {
    [sigma(0), sigma(1), sigma(2), sigma(3)]
}

/// Normalized Jones spinor `(c0, c1)`, `|c0|² + |c1|² = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JonesSpinor<T: Real = f64>(pub [Complex<T>; 2]);

impl<T: Real> JonesSpinor<T> {
    /// Builds a spinor, rejecting norm deviations beyond the input gate.
    pub fn new(c0: Complex<T>, c1: Complex<T>) -> Result<Self> {
        let s = Self([c0, c1]);
        let dev = (s.norm() - T::one()).abs();
        let gate = T::default_tolerances().spinor_gate;
        if dev > gate {
            return Err(Error::InvalidSpinor {
                deviation: dev.to_f64().unwrap_or(f64::NAN),
                gate: gate.to_f64().unwrap_or(f64::NAN),
            });
        }
        Ok(s)
    }

    /// Rescales an arbitrary nonzero pair onto the unit sphere.
    pub fn normalized(c0: Complex<T>, c1: Complex<T>) -> Result<Self> {
        let n = (c0.norm_sqr() + c1.norm_sqr()).sqrt();
        if n <= T::zero() || !n.is_finite() {
            return Err(Error::InvalidSpinor {
                deviation: f64::INFINITY,
                gate: T::default_tolerances()
                    .spinor_gate
                    .to_f64()
                    .unwrap_or(f64::NAN),
            });
        }
        Ok(Self([c0 / n, c1 / n]))
    }

    pub fn norm(&self) -> T {
        (self.0[0].norm_sqr() + self.0[1].norm_sqr()).sqrt()
    }
}

/// Poincaré/Bloch vector, `|u| <= 1`; `|u| = 1` for spinor-derived vectors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochVector<T: Real = f64>(pub [T; 3]);

impl<T: Real> BlochVector<T> {
    pub fn norm(&self) -> T {
        mat::rnorm3(&self.0)
    }
}

/// Complex 2x2 Jones matrix (defined up to global phase as a polarization
/// device; the phase matters for interferometric overlaps).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JonesMatrix<T: Real = f64>(pub CMat2<T>);

impl<T: Real> JonesMatrix<T> {
    pub fn identity() -> Self {
        Self(mat::cident2())
    }

    /// Elliptical retarder `exp(-i angle (axis·Σ)/2)` about a unit Poincaré
    /// axis; the axis is normalized internally.
    pub fn retarder(axis: &[T; 3], angle: T) -> Self {
        let n = mat::rnorm3(axis);
        let a = if n > T::zero() {
            [axis[0] / n, axis[1] / n, axis[2] / n]
        } else {
            [T::zero(); 3]
        };
        let ch = (angle * T::half()).cos();
        let sh = (angle * T::half()).sin();
        // cos(θ/2) I - i sin(θ/2) (n·Σ)
        Self([
            [c(ch, -sh * a[0]), c(-sh * a[2], -sh * a[1])],
            [c(sh * a[2], -sh * a[1]), c(ch, sh * a[0])],
        ])
    }

    /// Ideal horizontal linear polarizer `(Σ0 + Σ1)/2 = diag(1, 0)`.
    pub fn horizontal_polarizer() -> Self {
        let mut m = mat::czero2();
        m[0][0] = cr(T::one());
        Self(m)
    }

    pub fn dagger(&self) -> Self {
        Self(mat::cdagger(&self.0))
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        Self(mat::cmul(&self.0, &rhs.0))
    }

    pub fn scale(&self, s: Complex<T>) -> Self {
        Self(mat::cscale(s, &self.0))
    }

    /// `Tr(J†J)`; equals 2 for the normalized form.
    pub fn gram_trace(&self) -> T {
        let mut s = T::zero();
        for row in self.0.iter() {
            for e in row.iter() {
                s = s + e.norm_sqr();
            }
        }
        s
    }

    /// `max|J†J - I|`, the unitarity deviation.
    pub fn unitarity_deviation(&self) -> T {
        mat::unitarity_deviation(&self.0)
    }

    /// Applies the matrix to a spinor (no normalization).
    pub fn apply(&self, psi: &JonesSpinor<T>) -> [Complex<T>; 2] {
        [
            self.0[0][0] * psi.0[0] + self.0[0][1] * psi.0[1],
            self.0[1][0] * psi.0[0] + self.0[1][1] * psi.0[1],
        ]
    }

    /// Overlap `<ψ|J|ψ>`.
    pub fn expectation(&self, psi: &JonesSpinor<T>) -> Complex<T> {
        let jpsi = self.apply(psi);
        psi.0[0].conj() * jpsi[0] + psi.0[1].conj() * jpsi[1]
    }
}

/// Real 4x4 Mueller matrix acting on Stokes vectors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MuellerMatrix<T: Real = f64>(pub [[T; 4]; 4]);

impl<T: Real> MuellerMatrix<T> {
    pub fn identity() -> Self {
        Self(mat::rident4())
    }

    /// Ideal depolarizer `diag(1, 0, 0, 0)`.
    pub fn ideal_depolarizer() -> Self {
        let mut m = mat::rzero4();
        m[0][0] = T::one();
        Self(m)
    }

    /// Mean-intensity coefficient (entry 0,0).
    pub fn m00(&self) -> T {
        self.0[0][0]
    }

    /// `M / m00`.
    pub fn normalized(&self) -> Self {
        let g = self.m00();
        let mut out = self.0;
        for row in out.iter_mut() {
            for e in row.iter_mut() {
                *e = *e / g;
            }
        }
        Self(out)
    }

    pub fn scale(&self, s: T) -> Self {
        let mut out = self.0;
        for row in out.iter_mut() {
            for e in row.iter_mut() {
                *e = *e * s;
            }
        }
        Self(out)
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let mut out = self.0;
        for i in 0..4 {
            for j in 0..4 {
                out[i][j] = out[i][j] + rhs.0[i][j];
            }
        }
        Self(out)
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        let mut out = self.0;
        for i in 0..4 {
            for j in 0..4 {
                out[i][j] = out[i][j] - rhs.0[i][j];
            }
        }
        Self(out)
    }

    pub fn max_abs(&self) -> T {
        mat::rmax_abs4(&self.0)
    }

    /// Lower-right 3x3 block (the Poincaré-sphere action of the device).
    pub fn polarization_block(&self) -> RMat3<T> {
        let mut b = mat::rzero3();
        for i in 0..3 {
            for j in 0..3 {
                b[i][j] = self.0[i + 1][j + 1];
            }
        }
        b
    }
}

/// Bloch vector of a normalized spinor: `u_i = <ψ|Σi|ψ>`, i = 1..3.
pub fn spinor_to_bloch<T: Real>(psi: &JonesSpinor<T>) -> Result<BlochVector<T>> {
    let dev = (psi.norm() - T::one()).abs();
    let gate = T::default_tolerances().spinor_gate;
    if dev > gate {
        return Err(Error::InvalidSpinor {
            deviation: dev.to_f64().unwrap_or(f64::NAN),
            gate: gate.to_f64().unwrap_or(f64::NAN),
        });
    }
    let [c0, c1] = psi.0;
    let cross = c0.conj() * c1;
    Ok(BlochVector([
        c0.norm_sqr() - c1.norm_sqr(),
        (cross.re + cross.re),
        (cross.im + cross.im),
    ]))
}

/// Spinor over a Bloch direction, in the section aligned with the `Σ1`
/// pole: `c0` real nonnegative. The input is normalized internally.
pub fn bloch_to_spinor<T: Real>(u: &BlochVector<T>) -> JonesSpinor<T> {
    let n = u.norm();
    let v = if n > T::zero() {
        [u.0[0] / n, u.0[1] / n, u.0[2] / n]
    } else {
        [T::one(), T::zero(), T::zero()]
    };
    let c0sq = (T::one() + v[0]) * T::half();
    if c0sq <= T::default_tolerances().degenerate_gap {
        // antipodal point: c0 = 0, phase convention c1 = 1
        return JonesSpinor([cr(T::zero()), cr(T::one())]);
    }
    let c0 = c0sq.sqrt();
    let denom = T::two() * c0;
    JonesSpinor([cr(c0), c(v[1] / denom, v[2] / denom)])
}

/// Mueller image of a Jones matrix: `m_ij = ½ Tr(Σi J Σj J†)`.
///
/// Invariant under `J -> e^{iα} J`; `m00 = ½ Tr(J†J)`.
pub fn jones_to_mueller<T: Real>(j: &JonesMatrix<T>) -> MuellerMatrix<T> {
    let sig = sigmas::<T>();
    let jd = mat::cdagger(&j.0);
    let mut m = mat::rzero4();
    for (q, sq) in sig.iter().enumerate() {
        // J Σq J†
        let inner = mat::cmul(&j.0, &mat::cmul(sq, &jd));
        for (p, sp) in sig.iter().enumerate() {
            m[p][q] = mat::ctrace(&mat::cmul(sp, &inner)).re * T::half();
        }
    }
    MuellerMatrix(m)
}

/// Adjoint SO(3) image of an SU(2) element: `R_ij = ½ Tr(Σi U Σj U†)`,
/// i, j = 1..3. Insensitive to the sign of `U`.
pub fn su2_to_so3<T: Real>(u: &JonesMatrix<T>) -> Result<RMat3<T>> {
    let gate = T::default_tolerances().unitary_gate;
    let dev = u.unitarity_deviation();
    if dev > gate {
        return Err(Error::InvalidUnitary {
            deviation: dev.to_f64().unwrap_or(f64::NAN),
            gate: gate.to_f64().unwrap_or(f64::NAN),
        });
    }
    let sig = sigmas::<T>();
    let ud = mat::cdagger(&u.0);
    let mut r = mat::rzero3();
    for q in 0..3 {
        let inner = mat::cmul(&u.0, &mat::cmul(&sig[q + 1], &ud));
        for p in 0..3 {
            r[p][q] = mat::ctrace(&mat::cmul(&sig[p + 1], &inner)).re * T::half();
        }
    }
    Ok(r)
}

/// Stokes action `M s`.
pub fn apply_mueller<T: Real>(m: &MuellerMatrix<T>, s: &StokesVector<T>) -> StokesVector<T> {
    let mut out = [T::zero(); 4];
    for (i, row) in m.0.iter().enumerate() {
        let mut acc = T::zero();
        for (k, e) in row.iter().enumerate() {
            acc = acc + *e * s[k];
        }
        out[i] = acc;
    }
    out
}

/// Deviation of `R` from the rotation group: `max(|RᵀR - I|, |det R - 1|)`.
pub fn rotation_deviation<T: Real>(r: &RMat3<T>) -> T {
    let gram = mat::rmul3(&mat::rtranspose3(r), r);
    let ortho = mat::rmax_abs3(&mat::rsub3(&gram, &mat::rident3()));
    ortho.max((mat::rdet3(r) - T::one()).abs())
}

#[allow(dead_code)] // test helper
pub(crate) fn cmat2_deviation<T: Real>(a: &CMat2<T>, b: &CMat2<T>) -> T {
    cmax_abs(&csub(a, b))
}
