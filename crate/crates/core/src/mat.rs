//! Minimal dense helpers for the fixed sizes used here (2x2/4x4 complex,
//! 3x3/4x4 real). Row-major nested arrays throughout.

use num_complex::Complex;

use crate::scalar::Real;

pub type C<T> = Complex<T>;
pub type CMat2<T> = [[Complex<T>; 2]; 2];
pub type CMat4<T> = [[Complex<T>; 4]; 4];
pub type CVec2<T> = [Complex<T>; 2];
pub type CVec4<T> = [Complex<T>; 4];
pub type RMat3<T> = [[T; 3]; 3];
pub type RMat4<T> = [[T; 4]; 4];
pub type RVec3<T> = [T; 3];

#[inline]
pub fn c<T: Real>(re: T, im: T) -> C<T> {
    Complex::new(re, im)
}

#[inline]
pub fn cr<T: Real>(re: T) -> C<T> {
    Complex::new(re, T::zero())
}

pub fn czero2<T: Real>() -> CMat2<T> {
    [[cr(T::zero()); 2]; 2]
}

pub fn cident2<T: Real>() -> CMat2<T> {
    let mut m = czero2();
    m[0][0] = cr(T::one());
    m[1][1] = cr(T::one());
    m
}

pub fn czero<T: Real, const N: usize>() -> [[C<T>; N]; N] {
    [[cr(T::zero()); N]; N]
}

pub fn cident<T: Real, const N: usize>() -> [[C<T>; N]; N] {
    let mut m = czero();
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = cr(T::one());
    }
    m
}

pub fn cmul<T: Real, const N: usize>(a: &[[C<T>; N]; N], b: &[[C<T>; N]; N]) -> [[C<T>; N]; N] {
    let mut out = czero();
    for i in 0..N {
        for j in 0..N {
            let mut s = cr(T::zero());
            for (k, bk) in b.iter().enumerate() {
                s = s + a[i][k] * bk[j];
            }
            out[i][j] = s;
        }
    }
    out
}

pub fn cdagger<T: Real, const N: usize>(a: &[[C<T>; N]; N]) -> [[C<T>; N]; N] {
    let mut out = czero();
    for i in 0..N {
        for j in 0..N {
            out[i][j] = a[j][i].conj();
        }
    }
    out
}

pub fn ctrace<T: Real, const N: usize>(a: &[[C<T>; N]; N]) -> C<T> {
    let mut s = cr(T::zero());
    for (i, row) in a.iter().enumerate() {
        s = s + row[i];
    }
    s
}

pub fn cadd<T: Real, const N: usize>(a: &[[C<T>; N]; N], b: &[[C<T>; N]; N]) -> [[C<T>; N]; N] {
    let mut out = *a;
    for i in 0..N {
        for j in 0..N {
            out[i][j] = out[i][j] + b[i][j];
        }
    }
    out
}

pub fn csub<T: Real, const N: usize>(a: &[[C<T>; N]; N], b: &[[C<T>; N]; N]) -> [[C<T>; N]; N] {
    let mut out = *a;
    for i in 0..N {
        for j in 0..N {
            out[i][j] = out[i][j] - b[i][j];
        }
    }
    out
}

pub fn cscale<T: Real, const N: usize>(s: C<T>, a: &[[C<T>; N]; N]) -> [[C<T>; N]; N] {
    let mut out = *a;
    for row in out.iter_mut() {
        for e in row.iter_mut() {
            *e = *e * s;
        }
    }
    out
}

/// Outer product `v w†`.
pub fn couter<T: Real, const N: usize>(v: &[C<T>; N], w: &[C<T>; N]) -> [[C<T>; N]; N] {
    let mut out = czero();
    for i in 0..N {
        for j in 0..N {
            out[i][j] = v[i] * w[j].conj();
        }
    }
    out
}

/// Hermitian inner product `<v, w> = Σ conj(v_i) w_i`.
pub fn cdot<T: Real, const N: usize>(v: &[C<T>; N], w: &[C<T>; N]) -> C<T> {
    let mut s = cr(T::zero());
    for i in 0..N {
        s = s + v[i].conj() * w[i];
    }
    s
}

pub fn cnorm<T: Real, const N: usize>(v: &[C<T>; N]) -> T {
    let mut s = T::zero();
    for e in v.iter() {
        s = s + e.norm_sqr();
    }
    s.sqrt()
}

/// Largest entry magnitude, as a deviation measure.
pub fn cmax_abs<T: Real, const N: usize>(a: &[[C<T>; N]; N]) -> T {
    let mut m = T::zero();
    for row in a.iter() {
        for e in row.iter() {
            m = m.max(e.norm());
        }
    }
    m
}

/// `max|A - A†|`.
pub fn hermiticity_deviation<T: Real, const N: usize>(a: &[[C<T>; N]; N]) -> T {
    let mut m = T::zero();
    for i in 0..N {
        for j in 0..N {
            m = m.max((a[i][j] - a[j][i].conj()).norm());
        }
    }
    m
}

/// `max|U†U - I|`.
pub fn unitarity_deviation<T: Real, const N: usize>(u: &[[C<T>; N]; N]) -> T {
    let g = cmul(&cdagger(u), u);
    cmax_abs(&csub(&g, &cident()))
}

/// Kronecker product of 2x2 blocks into a 4x4.
pub fn kron2<T: Real>(a: &CMat2<T>, b: &CMat2<T>) -> CMat4<T> {
    let mut out = czero();
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    out[2 * i + k][2 * j + l] = a[i][j] * b[k][l];
                }
            }
        }
    }
    out
}

pub fn rzero3<T: Real>() -> RMat3<T> {
    [[T::zero(); 3]; 3]
}

pub fn rident3<T: Real>() -> RMat3<T> {
    let mut m = rzero3();
    m[0][0] = T::one();
    m[1][1] = T::one();
    m[2][2] = T::one();
    m
}

pub fn rmul3<T: Real>(a: &RMat3<T>, b: &RMat3<T>) -> RMat3<T> {
    let mut out = rzero3();
    for i in 0..3 {
        for j in 0..3 {
            let mut s = T::zero();
            for (k, bk) in b.iter().enumerate() {
                s = s + a[i][k] * bk[j];
            }
            out[i][j] = s;
        }
    }
    out
}

pub fn rtranspose3<T: Real>(a: &RMat3<T>) -> RMat3<T> {
    let mut out = rzero3();
    for i in 0..3 {
        for j in 0..3 {
            out[i][j] = a[j][i];
        }
    }
    out
}

pub fn rdet3<T: Real>(a: &RMat3<T>) -> T {
    a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1])
        - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
        + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0])
}

#[allow(dead_code)] // test helper
pub fn rmatvec3<T: Real>(a: &RMat3<T>, v: &RVec3<T>) -> RVec3<T> {
    let mut out = [T::zero(); 3];
    for (i, row) in a.iter().enumerate() {
        out[i] = row[0] * v[0] + row[1] * v[1] + row[2] * v[2];
    }
    out
}

pub fn rdot3<T: Real>(a: &RVec3<T>, b: &RVec3<T>) -> T {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub fn rcross3<T: Real>(a: &RVec3<T>, b: &RVec3<T>) -> RVec3<T> {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

pub fn rnorm3<T: Real>(v: &RVec3<T>) -> T {
    rdot3(v, v).sqrt()
}

pub fn rmax_abs3<T: Real>(a: &RMat3<T>) -> T {
    let mut m = T::zero();
    for row in a.iter() {
        for e in row.iter() {
            m = m.max(e.abs());
        }
    }
    m
}

pub fn rsub3<T: Real>(a: &RMat3<T>, b: &RMat3<T>) -> RMat3<T> {
    let mut out = *a;
    for i in 0..3 {
        for j in 0..3 {
            out[i][j] = out[i][j] - b[i][j];
        }
    }
    out
}

pub fn rzero4<T: Real>() -> RMat4<T> {
    [[T::zero(); 4]; 4]
}

pub fn rident4<T: Real>() -> RMat4<T> {
    let mut m = rzero4();
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = T::one();
    }
    m
}

pub fn rmax_abs4<T: Real>(a: &RMat4<T>) -> T {
    let mut m = T::zero();
    for row in a.iter() {
        for e in row.iter() {
            m = m.max(e.abs());
        }
    }
    m
}

/// Skew-symmetric cross-product matrix `[v]ₓ` with `[v]ₓ w = v × w`.
pub fn hat3<T: Real>(v: &RVec3<T>) -> RMat3<T> {
    [
        [T::zero(), -v[2], v[1]],
        [v[2], T::zero(), -v[0]],
        [-v[1], v[0], T::zero()],
    ]
}

/// Inverse of [`hat3`] (takes the antisymmetric part first).
pub fn unhat3<T: Real>(g: &RMat3<T>) -> RVec3<T> {
    [
        (g[2][1] - g[1][2]) * T::half(),
        (g[0][2] - g[2][0]) * T::half(),
        (g[1][0] - g[0][1]) * T::half(),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kron_identity() {
        let i2 = cident2::<f64>();
        let k = kron2(&i2, &i2);
        assert_eq!(k, cident::<f64, 4>());
    }

    #[test]
    fn hat_cross_agree() {
        let v = [0.3f64, -1.2, 0.7];
        let w = [1.0f64, 2.0, -0.5];
        let hv = rmatvec3(&hat3(&v), &w);
        let cx = rcross3(&v, &w);
        for i in 0..3 {
            assert!((hv[i] - cx[i]).abs() < 1e-15);
        }
        let back = unhat3(&hat3(&v));
        for i in 0..3 {
            assert!((back[i] - v[i]).abs() < 1e-15);
        }
    }

    #[test]
    fn det_of_rotation() {
        let th: f64 = 0.4;
        let r = [
            [th.cos(), -th.sin(), 0.0],
            [th.sin(), th.cos(), 0.0],
            [0.0, 0.0, 1.0],
        ];
        assert!((rdet3(&r) - 1.0).abs() < 1e-15);
    }
}
