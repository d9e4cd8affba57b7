//! Closed-form Hermitian 1x1/2x2 kernels: determinant, inverse, eigenvalues,
//! Cholesky reduction and the simultaneous (g, g0) eigenframe. The complex
//! dimension is capped at 2, so no iterative eigensolver is needed and every
//! result is a deterministic expression of the inputs.

use num_complex::Complex64;

pub type Mat = [[Complex64; 2]; 2];

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);

pub fn mat_zero() -> Mat {
    [[ZERO; 2]; 2]
}

/// Determinant of a Hermitian matrix (real by construction).
pub fn det(n: usize, m: &Mat) -> f64 {
    match n {
        1 => m[0][0].re,
        _ => m[0][0].re * m[1][1].re - m[0][1].norm_sqr(),
    }
}

/// Inverse of a Hermitian positive-definite matrix.
pub fn inverse(n: usize, m: &Mat) -> Mat {
    let mut out = mat_zero();
    match n {
        1 => {
            out[0][0] = Complex64::new(1.0 / m[0][0].re, 0.0);
        }
        _ => {
            let d = det(2, m);
            out[0][0] = Complex64::new(m[1][1].re / d, 0.0);
            out[1][1] = Complex64::new(m[0][0].re / d, 0.0);
            out[0][1] = -m[0][1] / d;
            out[1][0] = -m[0][1].conj() / d;
        }
    }
    out
}

/// Eigenvalues of a Hermitian matrix, ascending.
pub fn eigenvalues(n: usize, m: &Mat) -> [f64; 2] {
    match n {
        1 => [m[0][0].re, m[0][0].re],
        _ => {
            let half_tr = 0.5 * (m[0][0].re + m[1][1].re);
            // cancellation-free discriminant ((a-d)/2)^2 + |b|^2
            let half_diff = 0.5 * (m[0][0].re - m[1][1].re);
            let r = libm::sqrt(half_diff * half_diff + m[0][1].norm_sqr());
            [half_tr - r, half_tr + r]
        }
    }
}

/// Lower Cholesky factor of a Hermitian positive-definite matrix.
pub fn cholesky(n: usize, m: &Mat) -> Mat {
    let mut l = mat_zero();
    l[0][0] = Complex64::new(libm::sqrt(m[0][0].re), 0.0);
    if n == 2 {
        l[1][0] = m[1][0] / l[0][0].re;
        let rem = m[1][1].re - l[1][0].norm_sqr();
        l[1][1] = Complex64::new(libm::sqrt(rem.max(0.0)), 0.0);
    }
    l
}

/// Solve L x = b for lower-triangular L.
fn forward_solve(n: usize, l: &Mat, b: &[Complex64; 2]) -> [Complex64; 2] {
    let mut x = [ZERO; 2];
    x[0] = b[0] / l[0][0].re;
    if n == 2 {
        x[1] = (b[1] - l[1][0] * x[0]) / l[1][1].re;
    }
    x
}

/// Generalized eigenvalues of the Hermitian pair (a, b) with b positive
/// definite: the eigenvalues of b^{-1/2} a b^{-1/2}, ascending.
pub fn generalized_eigenvalues(n: usize, a: &Mat, b: &Mat) -> [f64; 2] {
    match n {
        1 => {
            let lam = a[0][0].re / b[0][0].re;
            [lam, lam]
        }
        _ => {
            let l = cholesky(2, b);
            // c = L^{-1} a L^{-H}, assembled column by column
            let c = reduce(&l, a);
            eigenvalues(2, &c)
        }
    }
}

fn reduce(l: &Mat, a: &Mat) -> Mat {
    // c = L^{-1} a L^{-H} = (L^{-1} (L^{-1} a)^H)^H
    let c0 = forward_solve(2, l, &[a[0][0], a[1][0]]);
    let c1 = forward_solve(2, l, &[a[0][1], a[1][1]]);
    let y: Mat = [[c0[0], c1[0]], [c0[1], c1[1]]];
    let yh = adjoint(&y);
    let z0 = forward_solve(2, l, &[yh[0][0], yh[1][0]]);
    let z1 = forward_solve(2, l, &[yh[0][1], yh[1][1]]);
    let z: Mat = [[z0[0], z1[0]], [z0[1], z1[1]]];
    adjoint(&z)
}

/// Simultaneous eigenframe of the pair (a, b): returns (e, lambda) with
/// e^H b e = I and e^H a e = diag(lambda), lambda ascending. `None` when the
/// reduced matrix is numerically degenerate (eigenvectors ill-conditioned).
pub fn simultaneous_frame(n: usize, a: &Mat, b: &Mat) -> Option<(Mat, [f64; 2])> {
    match n {
        1 => {
            let mut e = mat_zero();
            e[0][0] = Complex64::new(1.0 / libm::sqrt(b[0][0].re), 0.0);
            let lam = a[0][0].re / b[0][0].re;
            Some((e, [lam, lam]))
        }
        _ => {
            let l = cholesky(2, b);
            let c = reduce(&l, a);
            let lam = eigenvalues(2, &c);
            let scale = libm::fabs(lam[0]) + libm::fabs(lam[1]);
            if lam[1] - lam[0] <= 1e-9 * scale.max(1e-300) {
                if c[0][1].norm_sqr() <= 1e-24 * scale * scale {
                    // already diagonal: any orthonormal basis works
                    let u: Mat = [
                        [Complex64::new(1.0, 0.0), ZERO],
                        [ZERO, Complex64::new(1.0, 0.0)],
                    ];
                    return Some((frame_from(&l, &u), lam));
                }
                return None;
            }
            // eigenvector for lam[i]: (c - lam I) v = 0
            let mut u = mat_zero();
            for (i, &lami) in lam.iter().enumerate() {
                let v = if c[0][1].norm_sqr() >= c[1][0].norm_sqr() {
                    [c[0][1], Complex64::new(lami - c[0][0].re, 0.0)]
                } else {
                    [Complex64::new(lami - c[1][1].re, 0.0), c[1][0]]
                };
                let nrm = libm::sqrt(v[0].norm_sqr() + v[1].norm_sqr());
                if nrm == 0.0 {
                    return None;
                }
                u[0][i] = v[0] / nrm;
                u[1][i] = v[1] / nrm;
            }
            Some((frame_from(&l, &u), lam))
        }
    }
}

/// e = L^{-H} u, columnwise: solve L^H e_col = u_col.
fn frame_from(l: &Mat, u: &Mat) -> Mat {
    let mut e = mat_zero();
    for col in 0..2 {
        // back substitution with L^H (upper triangular, diag real)
        let b1 = u[1][col];
        let e1 = b1 / l[1][1].re;
        let e0 = (u[0][col] - l[1][0].conj() * e1) / l[0][0].re;
        e[0][col] = e0;
        e[1][col] = e1;
    }
    e
}

/// Matrix product (full 2x2).
pub fn matmul(a: &Mat, b: &Mat) -> Mat {
    let mut c = mat_zero();
    for i in 0..2 {
        for j in 0..2 {
            c[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    c
}

/// Conjugate transpose.
pub fn adjoint(a: &Mat) -> Mat {
    [
        [a[0][0].conj(), a[1][0].conj()],
        [a[0][1].conj(), a[1][1].conj()],
    ]
}

/// Trace of a product tr(a b), n-aware.
pub fn trace_mul(n: usize, a: &Mat, b: &Mat) -> Complex64 {
    let mut t = ZERO;
    for i in 0..n {
        for j in 0..n {
            t += a[i][j] * b[j][i];
        }
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn herm(a: f64, b: Complex64, d: f64) -> Mat {
        [[c(a, 0.0), b], [b.conj(), c(d, 0.0)]]
    }

    #[test]
    fn det_inverse_eigen_2x2() {
        let m = herm(2.0, c(0.3, -0.4), 1.5);
        let d = det(2, &m);
        assert!((d - (3.0 - 0.25)).abs() < 1e-14);
        let inv = inverse(2, &m);
        let prod = matmul(&m, &inv);
        assert!((prod[0][0].re - 1.0).abs() < 1e-14);
        assert!(prod[0][1].norm_sqr().sqrt() < 1e-14);
        let [lo, hi] = eigenvalues(2, &m);
        assert!((lo * hi - d).abs() < 1e-12);
        assert!((lo + hi - 3.5).abs() < 1e-12);
        assert!(lo <= hi);
    }

    #[test]
    fn cholesky_reconstructs() {
        let m = herm(2.0, c(0.5, 0.7), 3.0);
        let l = cholesky(2, &m);
        let back = matmul(&l, &adjoint(&l));
        for i in 0..2 {
            for j in 0..2 {
                assert!((back[i][j] - m[i][j]).norm_sqr().sqrt() < 1e-14);
            }
        }
    }

    #[test]
    fn simultaneous_frame_diagonalizes_both() {
        let a = herm(3.0, c(0.2, 0.1), 2.0);
        let b = herm(1.5, c(-0.1, 0.3), 2.5);
        let (e, lam) = simultaneous_frame(2, &a, &b).unwrap();
        let eb = matmul(&adjoint(&e), &matmul(&b, &e));
        let ea = matmul(&adjoint(&e), &matmul(&a, &e));
        for i in 0..2 {
            for j in 0..2 {
                let want_b = if i == j { 1.0 } else { 0.0 };
                assert!((eb[i][j] - c(want_b, 0.0)).norm_sqr().sqrt() < 1e-12);
                let want_a = if i == j { lam[i] } else { 0.0 };
                assert!((ea[i][j] - c(want_a, 0.0)).norm_sqr().sqrt() < 1e-12);
            }
        }
        assert!(lam[0] <= lam[1]);
        // and they match generalized_eigenvalues
        let lam2 = generalized_eigenvalues(2, &a, &b);
        assert!((lam[0] - lam2[0]).abs() < 1e-12);
        assert!((lam[1] - lam2[1]).abs() < 1e-12);
    }

    #[test]
    fn generalized_eigs_scale_invariance() {
        let a = herm(3.0, c(0.2, 0.1), 2.0);
        let b = herm(1.0, c(0.0, 0.0), 1.0);
        let lam = generalized_eigenvalues(2, &a, &b);
        let direct = eigenvalues(2, &a);
        assert!((lam[0] - direct[0]).abs() < 1e-12);
        assert!((lam[1] - direct[1]).abs() < 1e-12);
    }
}
