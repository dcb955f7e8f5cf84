//! Dense numerical kernels at the fixed sizes of this crate: Hermitian
//! eigendecomposition (cyclic Jacobi), SVD-based polar decomposition
//! (real 3x3, complex 2x2), and logarithm/exponential on SO(3) and SU(2).
//!
//! Everything here is deterministic: eigenvectors carry a fixed gauge
//! (largest-magnitude component real positive, ties to the lowest index)
//! and pi-branch axes a fixed sign convention, so repeated runs produce
//! identical output.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::mat::{self, c, cr, CMat2, CVec2, CVec4, RMat3, RVec3};
use crate::scalar::Real;

/// Ordered spectrum of a Hermitian 4x4 matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianSpectrum<T: Real = f64> {
    /// Eigenvalues in descending order.
    pub eigenvalues: [T; 4],
    /// Orthonormal eigenvectors, one per eigenvalue, gauge-fixed.
    pub eigenvectors: [CVec4<T>; 4],
    /// `true` where the gap to the next eigenvalue is below the
    /// degeneracy tolerance (the eigenbasis of that block is arbitrary).
    pub degenerate_gaps: [bool; 3],
}

/// Polar factors of a real 3x3 matrix: `m = rotation · stretch`.
#[derive(Debug, Clone, PartialEq)]
pub struct PolarFactors3<T: Real = f64> {
    /// Proper rotation (det = +1).
    pub rotation: RMat3<T>,
    /// Symmetric factor; positive semidefinite except for negative-det
    /// input, where exactly one eigenvalue is negative.
    pub stretch: RMat3<T>,
    /// Smallest singular value below tolerance: the rotation factor is a
    /// convention, not unique.
    pub degenerate: bool,
}

/// Polar factors of a complex 2x2 matrix: `k = unitary · hermitian`.
#[derive(Debug, Clone, PartialEq)]
pub struct PolarFactors2<T: Real = f64> {
    pub unitary: CMat2<T>,
    /// Hermitian positive semidefinite factor.
    pub hermitian: CMat2<T>,
    /// Smallest singular value below tolerance: the unitary factor is a
    /// convention, not unique.
    pub degenerate: bool,
}

/// Rotation content as a unit axis and an angle in `[0, pi]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AxisAngle<T: Real = f64> {
    /// Unit axis when `angle > 0`; zero vector at the identity.
    pub axis: RVec3<T>,
    /// Principal-branch angle in `[0, pi]`.
    pub angle: T,
    /// Angle within tolerance of pi: the axis sign is conventional
    /// (first nonzero component positive).
    pub pi_branch: bool,
}

impl<T: Real> AxisAngle<T> {
    /// The generator `angle · [axis]ₓ`.
    pub fn generator(&self) -> RMat3<T> {
        mat::hat3(&[
            self.axis[0] * self.angle,
            self.axis[1] * self.angle,
            self.axis[2] * self.angle,
        ])
    }
}

/// Cyclic Jacobi on a complex Hermitian matrix. Returns unsorted
/// eigenvalues and the accumulated unitary (eigenvectors as columns).
fn jacobi_hermitian<T: Real, const N: usize>(
    input: &[[Complex<T>; N]; N],
    off_tol: T,
) -> ([T; N], [[Complex<T>; N]; N]) {
    let mut a = *input;
    let mut v = mat::cident::<T, N>();

    let mut frob = T::zero();
    for row in a.iter() {
        for e in row.iter() {
            frob = frob + e.norm_sqr();
        }
    }
    let scale = frob.sqrt().max(T::one());
    let threshold = off_tol * scale;
    let skip = threshold / T::from_usize(N * N).unwrap();

    for _sweep in 0..100 {
        let mut off = T::zero();
        for i in 0..N {
            for j in 0..N {
                if i != j {
                    off = off + a[i][j].norm_sqr();
                }
            }
        }
        if off.sqrt() <= threshold {
            break;
        }
        for p in 0..N - 1 {
            for q in p + 1..N {
                let r = a[p][q].norm();
                if r <= skip {
                    continue;
                }
                let app = a[p][p].re;
                let aqq = a[q][q].re;
                // phase that makes the (p,q) entry real positive
                let d = a[p][q].conj() / r;
                let tau = (aqq - app) / (T::two() * r);
                let t = if tau == T::zero() {
                    T::one()
                } else {
                    tau.signum() / (tau.abs() + (T::one() + tau * tau).sqrt())
                };
                let cth = T::one() / (T::one() + t * t).sqrt();
                let sth = t * cth;

                let mut g = mat::cident::<T, N>();
                g[p][p] = cr(cth);
                g[p][q] = cr(sth);
                g[q][p] = d * cr(-sth);
                g[q][q] = d * cr(cth);

                a = mat::cmul(&mat::cdagger(&g), &mat::cmul(&a, &g));
                v = mat::cmul(&v, &g);

                // keep hermiticity exact against rounding drift
                for i in 0..N {
                    a[i][i] = cr(a[i][i].re);
                    for j in i + 1..N {
                        let avg = (a[i][j] + a[j][i].conj()) * cr(T::half());
                        a[i][j] = avg;
                        a[j][i] = avg.conj();
                    }
                }
            }
        }
    }

    let mut eigenvalues = [T::zero(); N];
    for (i, e) in eigenvalues.iter_mut().enumerate() {
        *e = a[i][i].re;
    }
    (eigenvalues, v)
}

/// Fixes the phase so the largest-magnitude component is real positive
/// (ties broken by the lowest index).
fn gauge_fix<T: Real, const N: usize>(v: &mut [Complex<T>; N]) {
    let mut best = 0usize;
    let mut best_mag = T::neg_infinity();
    for (i, e) in v.iter().enumerate() {
        let m = e.norm();
        if m > best_mag {
            best_mag = m;
            best = i;
        }
    }
    if best_mag <= T::zero() {
        return;
    }
    let phase = v[best].conj() / best_mag;
    for e in v.iter_mut() {
        *e = *e * phase;
    }
    // the pivot entry is now real by construction; drop residual imag
    v[best] = cr(v[best].re);
}

/// Eigendecomposition of a complex Hermitian 4x4 matrix.
///
/// Eigenvalues come out descending; eigenvectors orthonormal and
/// gauge-fixed. Gaps below the degeneracy tolerance are flagged, in which
/// case any orthonormal basis of the block may be returned.
pub fn hermitian_eig<T: Real>(h: &CVec4Mat<T>) -> Result<HermitianSpectrum<T>> {
    hermitian_eig_with(h, &crate::scalar::Tolerances::default())
}

/// See [`hermitian_eig`].
pub fn hermitian_eig_with<T: Real>(
    h: &CVec4Mat<T>,
    tolerances: &crate::scalar::Tolerances<T>,
) -> Result<HermitianSpectrum<T>> {
    let dev = mat::hermiticity_deviation(h);
    if dev > tolerances.hermiticity_gate {
        return Err(Error::NonHermitian {
            deviation: dev.to_f64().unwrap_or(f64::NAN),
            gate: tolerances.hermiticity_gate.to_f64().unwrap_or(f64::NAN),
        });
    }
    // work on the exactly-hermitian average
    let mut hh = *h;
    for i in 0..4 {
        hh[i][i] = cr(hh[i][i].re);
        for j in i + 1..4 {
            let avg = (hh[i][j] + hh[j][i].conj()) * cr(T::half());
            hh[i][j] = avg;
            hh[j][i] = avg.conj();
        }
    }

    let (raw_vals, v) = jacobi_hermitian(&hh, tolerances.eig_off_diagonal);
    let mut order = [0usize, 1, 2, 3];
    order.sort_by(|&i, &j| raw_vals[j].partial_cmp(&raw_vals[i]).unwrap());

    let mut eigenvalues = [T::zero(); 4];
    let mut eigenvectors = [[cr(T::zero()); 4]; 4];
    for (slot, &src) in order.iter().enumerate() {
        eigenvalues[slot] = raw_vals[src];
        let mut vec = [cr(T::zero()); 4];
        for (i, row) in v.iter().enumerate() {
            vec[i] = row[src];
        }
        gauge_fix(&mut vec);
        eigenvectors[slot] = vec;
    }

    let gap = tolerances.degenerate_gap;
    let degenerate_gaps = [
        eigenvalues[0] - eigenvalues[1] < gap,
        eigenvalues[1] - eigenvalues[2] < gap,
        eigenvalues[2] - eigenvalues[3] < gap,
    ];

    Ok(HermitianSpectrum {
        eigenvalues,
        eigenvectors,
        degenerate_gaps,
    })
}

type CVec4Mat<T> = [[Complex<T>; 4]; 4];

/// Eigendecomposition of a complex Hermitian 2x2 block, descending, with
/// eigenvectors as columns of the returned unitary.
pub(crate) fn hermitian_eig2<T: Real>(h: &CMat2<T>, off_tol: T) -> ([T; 2], CMat2<T>) {
    let (vals, v) = jacobi_hermitian(h, off_tol);
    if vals[0] >= vals[1] {
        (vals, v)
    } else {
        ([vals[1], vals[0]], [[v[0][1], v[0][0]], [v[1][1], v[1][0]]])
    }
}

/// Polar decomposition of a real 3x3 matrix via one-sided Jacobi SVD.
///
/// With `m = U Σ Vᵀ`: `rotation = U diag(1, 1, det(UVᵀ)) Vᵀ` and
/// `stretch = V diag(σ1, σ2, ±σ3) Vᵀ`, so `rotation ∈ SO(3)` always and
/// negative-determinant input shows up as one negative stretch eigenvalue.
pub fn polar3<T: Real>(m: &RMat3<T>) -> PolarFactors3<T> {
    polar3_with(m, &crate::scalar::Tolerances::default())
}

/// See [`polar3`].
pub fn polar3_with<T: Real>(
    m: &RMat3<T>,
    tolerances: &crate::scalar::Tolerances<T>,
) -> PolarFactors3<T> {
    // columns of m·V, orthogonalized in place
    let mut a = [[T::zero(); 3]; 3];
    let mut v = [[T::zero(); 3]; 3];
    for i in 0..3 {
        v[i][i] = T::one();
        for j in 0..3 {
            a[j][i] = m[i][j]; // a[j] is column j of m
        }
    }

    let eps = T::epsilon() * T::four();
    for _sweep in 0..60 {
        let mut rotated = false;
        for p in 0..2 {
            for q in p + 1..3 {
                let alpha = mat::rdot3(&a[p], &a[p]);
                let beta = mat::rdot3(&a[q], &a[q]);
                let gamma = mat::rdot3(&a[p], &a[q]);
                let prod = alpha * beta;
                if prod <= T::zero() || gamma.abs() <= eps * prod.sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (T::two() * gamma);
                let t = if zeta == T::zero() {
                    T::one()
                } else {
                    zeta.signum() / (zeta.abs() + (T::one() + zeta * zeta).sqrt())
                };
                let cth = T::one() / (T::one() + t * t).sqrt();
                let sth = t * cth;
                for i in 0..3 {
                    let ap = a[p][i];
                    let aq = a[q][i];
                    a[p][i] = cth * ap - sth * aq;
                    a[q][i] = sth * ap + cth * aq;
                    let vp = v[p][i];
                    let vq = v[q][i];
                    v[p][i] = cth * vp - sth * vq;
                    v[q][i] = sth * vp + cth * vq;
                }
            }
        }
        if !rotated {
            break;
        }
    }

    // sort columns by norm, descending
    let norms = [mat::rnorm3(&a[0]), mat::rnorm3(&a[1]), mat::rnorm3(&a[2])];
    let mut order = [0usize, 1, 2];
    order.sort_by(|&i, &j| norms[j].partial_cmp(&norms[i]).unwrap());
    let a = [a[order[0]], a[order[1]], a[order[2]]];
    let vcols = [v[order[0]], v[order[1]], v[order[2]]];
    let sigma = [norms[order[0]], norms[order[1]], norms[order[2]]];

    let rank_cut = sigma[0] * T::epsilon() * T::lit(64.0) + T::min_positive_value();
    let mut u = [[T::zero(); 3]; 3];
    let normalize = |w: &RVec3<T>| -> RVec3<T> {
        let n = mat::rnorm3(w);
        [w[0] / n, w[1] / n, w[2] / n]
    };
    if sigma[0] <= rank_cut {
        // zero matrix
        return PolarFactors3 {
            rotation: mat::rident3(),
            stretch: mat::rzero3(),
            degenerate: true,
        };
    }
    u[0] = normalize(&a[0]);
    if sigma[1] > rank_cut {
        u[1] = normalize(&a[1]);
    } else {
        // complete with the basis vector least aligned with u0
        let mut k = 0;
        let mut best = T::infinity();
        for i in 0..3 {
            if u[0][i].abs() < best {
                best = u[0][i].abs();
                k = i;
            }
        }
        let mut e = [T::zero(); 3];
        e[k] = T::one();
        let proj = mat::rdot3(&u[0], &e);
        u[1] = normalize(&[
            e[0] - proj * u[0][0],
            e[1] - proj * u[0][1],
            e[2] - proj * u[0][2],
        ]);
    }
    if sigma[2] > rank_cut {
        u[2] = normalize(&a[2]);
    } else {
        u[2] = mat::rcross3(&u[0], &u[1]);
    }

    // u, vcols hold columns; assemble U, V as matrices
    let mut umat = [[T::zero(); 3]; 3];
    let mut vmat = [[T::zero(); 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            umat[i][j] = u[j][i];
            vmat[i][j] = vcols[j][i];
        }
    }
    let d = mat::rdet3(&umat) * mat::rdet3(&vmat);

    let mut middle = mat::rzero3();
    middle[0][0] = T::one();
    middle[1][1] = T::one();
    middle[2][2] = d;
    let rotation = mat::rmul3(&umat, &mat::rmul3(&middle, &mat::rtranspose3(&vmat)));

    let mut diag = mat::rzero3();
    diag[0][0] = sigma[0];
    diag[1][1] = sigma[1];
    diag[2][2] = d * sigma[2];
    let stretch = mat::rmul3(&vmat, &mat::rmul3(&diag, &mat::rtranspose3(&vmat)));

    PolarFactors3 {
        rotation,
        stretch,
        degenerate: sigma[2] < tolerances.singular,
    }
}

/// Matrix logarithm on SO(3): returns the antisymmetric generator and its
/// axis/angle, principal branch `angle ∈ [0, pi]`.
pub fn so3_log<T: Real>(r: &RMat3<T>) -> Result<(RMat3<T>, AxisAngle<T>)> {
    so3_log_with(r, &crate::scalar::Tolerances::default())
}

/// See [`so3_log`].
pub fn so3_log_with<T: Real>(
    r: &RMat3<T>,
    tolerances: &crate::scalar::Tolerances<T>,
) -> Result<(RMat3<T>, AxisAngle<T>)> {
    let dev = crate::pauli::rotation_deviation(r);
    if dev > tolerances.rotation_gate {
        return Err(Error::NotARotation {
            deviation: dev.to_f64().unwrap_or(f64::NAN),
            gate: tolerances.rotation_gate.to_f64().unwrap_or(f64::NAN),
        });
    }

    let anti = mat::unhat3(r); // sin(angle) · axis
    let sin_norm = mat::rnorm3(&anti).min(T::one());
    let trace = r[0][0] + r[1][1] + r[2][2];
    let cos = ((trace - T::one()) * T::half())
        .max(-T::one())
        .min(T::one());
    let angle_estimate = sin_norm.atan2(cos);

    let aa = if angle_estimate < T::PI() - tolerances.pi_branch {
        if sin_norm <= T::zero() {
            AxisAngle {
                axis: [T::zero(); 3],
                angle: T::zero(),
                pi_branch: false,
            }
        } else {
            AxisAngle {
                axis: [anti[0] / sin_norm, anti[1] / sin_norm, anti[2] / sin_norm],
                angle: angle_estimate,
                pi_branch: false,
            }
        }
    } else {
        // near pi the antisymmetric part degrades; take the axis from the
        // dominant column of (R + I)/2 and the angle from asin
        let angle = T::PI() - sin_norm.asin();
        let mut b = mat::rzero3();
        for i in 0..3 {
            for j in 0..3 {
                b[i][j] = (r[i][j] + if i == j { T::one() } else { T::zero() }) * T::half();
            }
        }
        let mut k = 0;
        let mut best = T::neg_infinity();
        for i in 0..3 {
            if b[i][i] > best {
                best = b[i][i];
                k = i;
            }
        }
        let col = [b[0][k], b[1][k], b[2][k]];
        let n = mat::rnorm3(&col);
        let mut axis = [col[0] / n, col[1] / n, col[2] / n];

        if sin_norm > T::lit(1e-9) {
            // the antisymmetric part still fixes the correct sign
            if mat::rdot3(&axis, &anti) < T::zero() {
                axis = [-axis[0], -axis[1], -axis[2]];
            }
        } else {
            // true pi within precision: first nonzero component positive
            first_nonzero_positive(&mut axis);
        }
        AxisAngle {
            axis,
            angle,
            pi_branch: true,
        }
    };

    Ok((aa.generator(), aa))
}

/// Rodrigues exponential of an antisymmetric 3x3 generator.
pub fn so3_exp<T: Real>(g: &RMat3<T>) -> Result<RMat3<T>> {
    so3_exp_with(g, &crate::scalar::Tolerances::default())
}

/// See [`so3_exp`].
pub fn so3_exp_with<T: Real>(
    g: &RMat3<T>,
    tolerances: &crate::scalar::Tolerances<T>,
) -> Result<RMat3<T>> {
    let mut dev = T::zero();
    for i in 0..3 {
        for j in 0..3 {
            dev = dev.max((g[i][j] + g[j][i]).abs());
        }
    }
    if dev > tolerances.antisymmetry_gate {
        return Err(Error::NotAntisymmetric {
            deviation: dev.to_f64().unwrap_or(f64::NAN),
            gate: tolerances.antisymmetry_gate.to_f64().unwrap_or(f64::NAN),
        });
    }
    let w = mat::unhat3(g);
    let theta = mat::rnorm3(&w);
    let theta2 = theta * theta;
    let (s1, s2) = if theta < T::lit(1e-4) {
        // series for sinθ/θ and (1-cosθ)/θ²
        (
            T::one() - theta2 / T::lit(6.0) * (T::one() - theta2 / T::lit(20.0)),
            T::half() * (T::one() - theta2 / T::lit(12.0) * (T::one() - theta2 / T::lit(30.0))),
        )
    } else {
        (theta.sin() / theta, (T::one() - theta.cos()) / theta2)
    };
    let gg = mat::rmul3(g, g);
    let mut out = mat::rident3();
    for i in 0..3 {
        for j in 0..3 {
            out[i][j] = out[i][j] + s1 * g[i][j] + s2 * gg[i][j];
        }
    }
    Ok(out)
}

/// Flips the whole vector so its first component above noise is positive.
fn first_nonzero_positive<T: Real>(axis: &mut RVec3<T>) {
    for i in 0..3 {
        if axis[i].abs() > T::lit(1e-9) {
            if axis[i] < T::zero() {
                *axis = [-axis[0], -axis[1], -axis[2]];
            }
            return;
        }
    }
}

/// Polar decomposition of a complex 2x2 matrix, `k = unitary · hermitian`.
pub fn polar2<T: Real>(k: &CMat2<T>) -> PolarFactors2<T> {
    polar2_with(k, &crate::scalar::Tolerances::default())
}

/// See [`polar2`].
pub fn polar2_with<T: Real>(
    k: &CMat2<T>,
    tolerances: &crate::scalar::Tolerances<T>,
) -> PolarFactors2<T> {
    let b = mat::cmul(&mat::cdagger(k), k);
    let (_vals, w) = hermitian_eig2(&b, tolerances.eig_off_diagonal);
    let w0: CVec2<T> = [w[0][0], w[1][0]];
    let w1: CVec2<T> = [w[0][1], w[1][1]];

    let apply = |x: &CVec2<T>| -> CVec2<T> {
        [
            k[0][0] * x[0] + k[0][1] * x[1],
            k[1][0] * x[0] + k[1][1] * x[1],
        ]
    };
    let t0 = apply(&w0);
    let sigma0 = (t0[0].norm_sqr() + t0[1].norm_sqr()).sqrt();
    if sigma0 <= T::min_positive_value().sqrt() {
        return PolarFactors2 {
            unitary: mat::cident2(),
            hermitian: mat::czero2(),
            degenerate: true,
        };
    }
    let u0 = [t0[0] / sigma0, t0[1] / sigma0];
    // exact orthonormal complement of u0, phase-aligned with k·w1
    let perp = [-u0[1].conj(), u0[0].conj()];
    let t1 = apply(&w1);
    let z = perp[0].conj() * t1[0] + perp[1].conj() * t1[1];
    let sigma1 = z.norm();
    let u1 = if sigma1 > sigma0 * T::epsilon() {
        let phase = z / sigma1;
        [perp[0] * phase, perp[1] * phase]
    } else {
        perp
    };

    let umat: CMat2<T> = [[u0[0], u1[0]], [u0[1], u1[1]]];
    let unitary = mat::cmul(&umat, &mat::cdagger(&w));

    let mut diag = mat::czero2();
    diag[0][0] = cr(sigma0);
    diag[1][1] = cr(sigma1);
    let hermitian = mat::cmul(&w, &mat::cmul(&diag, &mat::cdagger(&w)));

    PolarFactors2 {
        unitary,
        hermitian,
        degenerate: sigma1 < tolerances.singular,
    }
}

/// Splits a unitary into a global phase and a det-1 part:
/// `v = e^{iα} w` with `det w = 1` and `α = arg(det v)/2 ∈ (-π/2, π/2]`.
pub fn su2_strip_phase<T: Real>(v: &CMat2<T>) -> Result<(CMat2<T>, T)> {
    su2_strip_phase_with(v, &crate::scalar::Tolerances::default())
}

/// See [`su2_strip_phase`].
pub fn su2_strip_phase_with<T: Real>(
    v: &CMat2<T>,
    tolerances: &crate::scalar::Tolerances<T>,
) -> Result<(CMat2<T>, T)> {
    let dev = mat::unitarity_deviation(v);
    if dev > tolerances.unitary_gate {
        return Err(Error::InvalidUnitary {
            deviation: dev.to_f64().unwrap_or(f64::NAN),
            gate: tolerances.unitary_gate.to_f64().unwrap_or(f64::NAN),
        });
    }
    let det = v[0][0] * v[1][1] - v[0][1] * v[1][0];
    let alpha = det.arg() * T::half();
    let phase = c((-alpha).cos(), (-alpha).sin());
    Ok((mat::cscale(phase, v), alpha))
}

/// Principal-branch logarithm of a det-1 SU(2) element as axis/angle with
/// `angle ∈ [0, pi]`: `w = cos(θ/2) I - i sin(θ/2) (axis·Σ)`.
pub fn su2_log<T: Real>(w: &CMat2<T>) -> Result<AxisAngle<T>> {
    su2_log_with(w, &crate::scalar::Tolerances::default())
}

/// See [`su2_log`].
pub fn su2_log_with<T: Real>(
    w: &CMat2<T>,
    tolerances: &crate::scalar::Tolerances<T>,
) -> Result<AxisAngle<T>> {
    let dev = mat::unitarity_deviation(w);
    let det = w[0][0] * w[1][1] - w[0][1] * w[1][0];
    let det_dev = (det - cr(T::one())).norm();
    if dev.max(det_dev) > tolerances.unitary_gate.max(T::lit(1e-9)) {
        return Err(Error::InvalidUnitary {
            deviation: dev.max(det_dev).to_f64().unwrap_or(f64::NAN),
            gate: tolerances.unitary_gate.to_f64().unwrap_or(f64::NAN),
        });
    }
    // quaternion components: w = q0 I - i (q·Σ)
    let mut q0 = (w[0][0].re + w[1][1].re) * T::half();
    let mut q = [
        (w[1][1].im - w[0][0].im) * T::half(),
        -(w[0][1].im + w[1][0].im) * T::half(),
        (w[1][0].re - w[0][1].re) * T::half(),
    ];
    if q0 < T::zero() {
        q0 = -q0;
        q = [-q[0], -q[1], -q[2]];
    }
    let s = mat::rnorm3(&q).min(T::one());
    let angle = T::two() * s.atan2(q0);
    if s <= T::epsilon() {
        return Ok(AxisAngle {
            axis: [T::zero(); 3],
            angle: T::zero(),
            pi_branch: false,
        });
    }
    let mut axis = [q[0] / s, q[1] / s, q[2] / s];
    let pi_branch = angle > T::PI() - tolerances.pi_branch;
    if pi_branch && q0 <= T::lit(1e-12) {
        first_nonzero_positive(&mut axis);
    }
    Ok(AxisAngle {
        axis,
        angle,
        pi_branch,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ensemble::Lcg64;
    use crate::mat::{cmax_abs, cmul, couter, csub, rmax_abs3, rmul3, rsub3};
    use crate::pauli::rotation_deviation;

    fn reconstruct4(s: &HermitianSpectrum) -> [[Complex<f64>; 4]; 4] {
        let mut out = mat::czero::<f64, 4>();
        for k in 0..4 {
            let term = couter(&s.eigenvectors[k], &s.eigenvectors[k]);
            for i in 0..4 {
                for j in 0..4 {
                    out[i][j] += term[i][j] * s.eigenvalues[k];
                }
            }
        }
        out
    }

    #[test]
    fn eig_identity_quarter() {
        let mut h = mat::czero::<f64, 4>();
        for i in 0..4 {
            h[i][i] = cr(0.25);
        }
        let s = hermitian_eig(&h).unwrap();
        assert_eq!(s.eigenvalues, [0.25; 4]);
        assert_eq!(s.degenerate_gaps, [true; 3]);
        assert!(cmax_abs(&csub(&reconstruct4(&s), &h)) < 1e-14);
    }

    #[test]
    fn eig_rank_one_diagonal() {
        let mut h = mat::czero::<f64, 4>();
        h[0][0] = cr(1.0);
        let s = hermitian_eig(&h).unwrap();
        assert_eq!(s.eigenvalues, [1.0, 0.0, 0.0, 0.0]);
        assert_eq!(s.eigenvectors[0], [cr(1.0), cr(0.0), cr(0.0), cr(0.0)]);
        assert!(!s.degenerate_gaps[0]);
        assert!(s.degenerate_gaps[1] && s.degenerate_gaps[2]);
    }

    #[test]
    fn eig_rank_two_projector() {
        // H = (|a><a| + |b><b|)/2 for orthonormal a, b: spectrum (1/2, 1/2, 0, 0)
        let mut rng = Lcg64::new(7);
        for _ in 0..20 {
            let (a, b) = rng.orthonormal_pair4();
            let mut h = mat::czero::<f64, 4>();
            let pa = couter(&a, &a);
            let pb = couter(&b, &b);
            for i in 0..4 {
                for j in 0..4 {
                    h[i][j] = (pa[i][j] + pb[i][j]) * cr(0.5);
                }
            }
            let s = hermitian_eig(&h).unwrap();
            assert!((s.eigenvalues[0] - 0.5).abs() < 1e-12);
            assert!((s.eigenvalues[1] - 0.5).abs() < 1e-12);
            assert!(s.eigenvalues[2].abs() < 1e-12 && s.eigenvalues[3].abs() < 1e-12);
            assert!(cmax_abs(&csub(&reconstruct4(&s), &h)) < 1e-12);
        }
    }

    #[test]
    fn eig_random_reconstruction_and_orthonormality() {
        let mut rng = Lcg64::new(13);
        for _ in 0..1000 {
            let h = rng.hermitian_psd4();
            let s = hermitian_eig(&h).unwrap();
            assert!(cmax_abs(&csub(&reconstruct4(&s), &h)) < 1e-10);
            for i in 0..4 {
                for j in 0..4 {
                    let d = mat::cdot(&s.eigenvectors[i], &s.eigenvectors[j]);
                    let expect = if i == j { 1.0 } else { 0.0 };
                    assert!(
                        (d.re - expect).abs() < 1e-10 && d.im.abs() < 1e-10,
                        "orthonormality failure {i},{j}: {d}"
                    );
                }
            }
            for w in s.eigenvalues.windows(2) {
                assert!(w[0] >= w[1]);
            }
        }
    }

    #[test]
    fn eig_gauge_is_deterministic() {
        let mut rng = Lcg64::new(17);
        let h = rng.hermitian_psd4();
        let s1 = hermitian_eig(&h).unwrap();
        let s2 = hermitian_eig(&h).unwrap();
        assert_eq!(s1, s2);
        for v in s1.eigenvectors.iter() {
            let mut best = 0;
            for i in 1..4 {
                if v[i].norm() > v[best].norm() {
                    best = i;
                }
            }
            assert!(v[best].im.abs() < 1e-15 && v[best].re > 0.0);
        }
    }

    #[test]
    fn eig_rejects_non_hermitian() {
        let mut h = mat::czero::<f64, 4>();
        h[0][1] = cr(1.0);
        assert!(matches!(hermitian_eig(&h), Err(Error::NonHermitian { .. })));
    }

    #[test]
    fn polar3_rotation_passthrough() {
        let mut rng = Lcg64::new(19);
        for _ in 0..50 {
            let r = rng.rotation3();
            let f = polar3(&r);
            assert!(rmax_abs3(&rsub3(&f.rotation, &r)) < 1e-12);
            assert!(rmax_abs3(&rsub3(&f.stretch, &mat::rident3())) < 1e-12);
            assert!(!f.degenerate);
        }
    }

    #[test]
    fn polar3_symmetric_passthrough() {
        let m = [[0.9, 0.0, 0.0], [0.0, 0.9, 0.0], [0.0, 0.0, 0.8]];
        let f = polar3(&m);
        assert!(rmax_abs3(&rsub3(&f.rotation, &mat::rident3())) < 1e-12);
        assert!(rmax_abs3(&rsub3(&f.stretch, &m)) < 1e-12);
    }

    #[test]
    fn polar3_recovers_constructed_factors() {
        let mut rng = Lcg64::new(29);
        for _ in 0..200 {
            let r = rng.rotation3();
            let d = rng.spd3(0.1);
            let m = rmul3(&r, &d);
            let f = polar3(&m);
            assert!(rmax_abs3(&rsub3(&f.rotation, &r)) < 1e-10, "rotation drift");
            assert!(rmax_abs3(&rsub3(&f.stretch, &d)) < 1e-10, "stretch drift");
            let recon = rmul3(&f.rotation, &f.stretch);
            assert!(rmax_abs3(&rsub3(&recon, &m)) < 1e-10);
            assert!(rotation_deviation(&f.rotation) < 1e-10);
        }
    }

    #[test]
    fn polar3_negative_det() {
        let m = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, -0.5]];
        let f = polar3(&m);
        assert!(rotation_deviation(&f.rotation) < 1e-12);
        let recon = rmul3(&f.rotation, &f.stretch);
        assert!(rmax_abs3(&rsub3(&recon, &m)) < 1e-12);
        // one negative stretch eigenvalue: det of stretch < 0
        assert!(mat::rdet3(&f.stretch) < 0.0);
    }

    #[test]
    fn polar3_singular_flagged() {
        let m = [[1.0, 0.0, 0.0], [0.0, 0.5, 0.0], [0.0, 0.0, 0.0]];
        let f = polar3(&m);
        assert!(f.degenerate);
        assert!(rotation_deviation(&f.rotation) < 1e-12);
        let recon = rmul3(&f.rotation, &f.stretch);
        assert!(rmax_abs3(&rsub3(&recon, &m)) < 1e-12);
    }

    #[test]
    fn so3_log_exp_basics() {
        let (g, aa) = so3_log(&mat::rident3::<f64>()).unwrap();
        assert_eq!(g, mat::rzero3());
        assert_eq!(aa.angle, 0.0);

        let quarter = so3_exp(&mat::hat3(&[core::f64::consts::FRAC_PI_2, 0.0, 0.0])).unwrap();
        let expect = [[1.0, 0.0, 0.0], [0.0, 0.0, -1.0], [0.0, 1.0, 0.0]];
        assert!(rmax_abs3(&rsub3(&quarter, &expect)) < 1e-15);

        let (g, aa) = so3_log(&expect).unwrap();
        assert!((aa.angle - core::f64::consts::FRAC_PI_2).abs() < 1e-15);
        assert!((aa.axis[0] - 1.0).abs() < 1e-15);
        let ghat = mat::hat3(&[core::f64::consts::FRAC_PI_2, 0.0, 0.0]);
        assert!(rmax_abs3(&rsub3(&g, &ghat)) < 1e-15);

        // quarter turn about axis 3
        let r3 = [[0.0, -1.0, 0.0], [1.0, 0.0, 0.0], [0.0, 0.0, 1.0]];
        let (g, aa) = so3_log(&r3).unwrap();
        assert!((aa.angle - core::f64::consts::FRAC_PI_2).abs() < 1e-15);
        assert!((aa.axis[2] - 1.0).abs() < 1e-15);
        let ghat = mat::hat3(&[0.0, 0.0, core::f64::consts::FRAC_PI_2]);
        assert!(rmax_abs3(&rsub3(&g, &ghat)) < 1e-15);
    }

    #[test]
    fn so3_log_pi_branch() {
        let r = [[-1.0, 0.0, 0.0], [0.0, -1.0, 0.0], [0.0, 0.0, 1.0]];
        let (g, aa) = so3_log(&r).unwrap();
        assert!(aa.pi_branch);
        assert!((aa.angle - core::f64::consts::PI).abs() < 1e-12);
        assert!((aa.axis[2].abs() - 1.0).abs() < 1e-12);
        // sign convention: first nonzero component positive
        assert!(aa.axis[2] > 0.0);
        let recon = so3_exp(&g).unwrap();
        assert!(rmax_abs3(&rsub3(&recon, &r)) < 1e-9);
    }

    #[test]
    fn so3_round_trip_below_pi() {
        let mut rng = Lcg64::new(31);
        for _ in 0..1000 {
            let axis = rng.unit3();
            let angle = rng.uniform() * (core::f64::consts::PI - 1e-6);
            let g = mat::hat3(&[axis[0] * angle, axis[1] * angle, axis[2] * angle]);
            let r = so3_exp(&g).unwrap();
            let (g2, aa) = so3_log(&r).unwrap();
            assert!(rmax_abs3(&rsub3(&g2, &g)) < 1e-9, "generator drift");
            let r2 = so3_exp(&g2).unwrap();
            assert!(rmax_abs3(&rsub3(&r2, &r)) < 1e-9);
            assert!((0.0..=core::f64::consts::PI).contains(&aa.angle));
        }
    }

    #[test]
    fn so3_gates() {
        let not_rot = [[1.0, 0.2, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
        assert!(matches!(so3_log(&not_rot), Err(Error::NotARotation { .. })));
        let not_anti = [[0.1, 0.0, 0.0], [0.0, 0.0, 0.0], [0.0, 0.0, 0.0]];
        assert!(matches!(
            so3_exp(&not_anti),
            Err(Error::NotAntisymmetric { .. })
        ));
    }

    #[test]
    fn polar2_unitary_passthrough() {
        let mut rng = Lcg64::new(37);
        for _ in 0..50 {
            let k = rng.unitary2();
            let f = polar2(&k);
            assert!(cmax_abs(&csub(&f.unitary, &k)) < 1e-12);
            assert!(cmax_abs(&csub(&f.hermitian, &mat::cident2())) < 1e-12);
        }
    }

    #[test]
    fn polar2_psd_passthrough() {
        let g: f64 = 0.3;
        let mut k = mat::czero2();
        k[0][0] = cr(1.0);
        k[1][1] = cr((1.0 - g).sqrt());
        let f = polar2(&k);
        assert!(cmax_abs(&csub(&f.unitary, &mat::cident2())) < 1e-12);
        assert!(cmax_abs(&csub(&f.hermitian, &k)) < 1e-12);
    }

    #[test]
    fn polar2_recovers_constructed_factors() {
        let mut rng = Lcg64::new(41);
        for _ in 0..200 {
            let v = rng.unitary2();
            let p = rng.hermitian_pd2(0.1);
            let k = cmul(&v, &p);
            let f = polar2(&k);
            assert!(cmax_abs(&csub(&f.unitary, &v)) < 1e-10);
            assert!(cmax_abs(&csub(&f.hermitian, &p)) < 1e-10);
            let recon = cmul(&f.unitary, &f.hermitian);
            assert!(cmax_abs(&csub(&recon, &k)) < 1e-10);
            assert!(mat::unitarity_deviation(&f.unitary) < 1e-12);
        }
    }

    #[test]
    fn polar2_singular_flagged() {
        let mut k = mat::czero2::<f64>();
        k[0][0] = cr(1.0);
        let f = polar2(&k);
        assert!(f.degenerate);
        assert!(mat::unitarity_deviation(&f.unitary) < 1e-12);
        let recon = cmul(&f.unitary, &f.hermitian);
        assert!(cmax_abs(&csub(&recon, &k)) < 1e-12);
    }

    #[test]
    fn strip_phase_cases() {
        let i2 = mat::cident2::<f64>();
        let (w, alpha) = su2_strip_phase(&i2).unwrap();
        assert_eq!(alpha, 0.0);
        assert!(cmax_abs(&csub(&w, &i2)) < 1e-15);

        // V = iI: det = -1, arg = pi, alpha = pi/2, W = +I
        let v = mat::cscale(c(0.0, 1.0), &i2);
        let (w, alpha) = su2_strip_phase(&v).unwrap();
        assert!((alpha - core::f64::consts::FRAC_PI_2).abs() < 1e-15);
        assert!(cmax_abs(&csub(&w, &i2)) < 1e-15);

        let mut rng = Lcg64::new(43);
        for _ in 0..200 {
            let v = rng.unitary2();
            let (w, alpha) = su2_strip_phase(&v).unwrap();
            let det = w[0][0] * w[1][1] - w[0][1] * w[1][0];
            assert!((det - cr(1.0)).norm() < 1e-12);
            assert!(alpha > -core::f64::consts::FRAC_PI_2 - 1e-15);
            assert!(alpha <= core::f64::consts::FRAC_PI_2 + 1e-15);
            let back = mat::cscale(c(alpha.cos(), alpha.sin()), &w);
            assert!(cmax_abs(&csub(&back, &v)) < 1e-12);
        }
    }

    #[test]
    fn su2_log_matches_construction() {
        let mut rng = Lcg64::new(47);
        for _ in 0..500 {
            let axis = rng.unit3();
            let angle = rng.uniform() * (core::f64::consts::PI - 1e-6);
            let u = crate::pauli::JonesMatrix::retarder(&axis, angle);
            let aa = su2_log(&u.0).unwrap();
            assert!((aa.angle - angle).abs() < 1e-10);
            if angle > 1e-8 {
                for i in 0..3 {
                    assert!((aa.axis[i] - axis[i]).abs() < 1e-9);
                }
            }
        }
        // -W maps to the same principal branch as W
        let u = crate::pauli::JonesMatrix::<f64>::retarder(&[0.0, 1.0, 0.0], 1.3);
        let minus = mat::cscale(cr(-1.0), &u.0);
        assert_eq!(su2_log(&u.0).unwrap(), su2_log(&minus).unwrap());
    }

    #[test]
    fn su2_so3_exponential_compatibility() {
        let mut rng = Lcg64::new(53);
        for _ in 0..500 {
            let axis = rng.unit3();
            let angle = rng.uniform() * core::f64::consts::PI;
            let u = crate::pauli::JonesMatrix::retarder(&axis, angle);
            let adj = crate::pauli::su2_to_so3(&u).unwrap();
            let g = mat::hat3(&[axis[0] * angle, axis[1] * angle, axis[2] * angle]);
            let direct = so3_exp(&g).unwrap();
            assert!(rmax_abs3(&rsub3(&adj, &direct)) < 1e-10);
        }
    }

    #[test]
    fn polar2_factors_remain_valid_on_random_input() {
        let mut rng = Lcg64::new(59);
        for _ in 0..500 {
            let k = rng.complex_mat2();
            let f = polar2(&k);
            assert!(mat::unitarity_deviation(&f.unitary) < 1e-12);
            assert!(mat::hermiticity_deviation(&f.hermitian) < 1e-12);
            let recon = cmul(&f.unitary, &f.hermitian);
            assert!(cmax_abs(&csub(&recon, &k)) < 1e-10);
        }
    }

    #[test]
    fn jacobi_handles_f32() {
        let mut h = mat::czero::<f32, 4>();
        h[0][0] = cr(0.6f32);
        h[1][1] = cr(0.4f32);
        h[0][1] = c(0.1f32, 0.05f32);
        h[1][0] = c(0.1f32, -0.05f32);
        let s = hermitian_eig(&h).unwrap();
        let mut recon = mat::czero::<f32, 4>();
        for k in 0..4 {
            let term = couter(&s.eigenvectors[k], &s.eigenvectors[k]);
            for i in 0..4 {
                for j in 0..4 {
                    recon[i][j] += term[i][j] * cr(s.eigenvalues[k]);
                }
            }
        }
        assert!(cmax_abs(&csub(&recon, &h)) < 1e-5);
    }
}
