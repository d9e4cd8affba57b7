//! Hermitian positive-definite (1,1)-metric fields, assembly from Kähler
//! potentials, and eigenvalue pinching against a reference metric.

use alloc::vec;
use alloc::vec::Vec;
use num_complex::Complex64;

use crate::error::KrfError;
use crate::field::{ScalarField, Slot, TensorField};
use crate::grid::GridSpec;
use crate::linalg::{self, Mat};
use crate::spectral;

/// Default admissibility margin: metrics whose smallest eigenvalue dips
/// below this are rejected rather than propagated.
pub const DEFAULT_MARGIN: f64 = 0.05;

/// Metric g_{i jbar} with cached inverse and (real positive) determinant.
#[derive(Debug, Clone)]
pub struct MetricField {
    spec: GridSpec,
    /// components, comp-major: comps[(i*n + j) * points + p] = g_{i jbar}(p)
    comps: Vec<Complex64>,
    /// plain matrix inverse entries, same layout; g^{jbar i} = inv[j][i]
    inv: Vec<Complex64>,
    det: Vec<f64>,
    min_eigenvalue: f64,
}

impl MetricField {
    /// The flat metric delta_{ij}.
    pub fn flat(spec: &GridSpec) -> Self {
        let n = spec.dim();
        let p = spec.points();
        let mut comps = vec![linalg::ZERO; n * n * p];
        let mut inv = vec![linalg::ZERO; n * n * p];
        for i in 0..n {
            let c = (i * n + i) * p;
            for q in 0..p {
                comps[c + q] = Complex64::new(1.0, 0.0);
                inv[c + q] = Complex64::new(1.0, 0.0);
            }
        }
        Self {
            spec: spec.clone(),
            comps,
            inv,
            det: vec![1.0; p],
            min_eigenvalue: 1.0,
        }
    }

    /// g = base + d_i d_jbar phi, with the flat metric as default base.
    /// Fails with `PositivityLoss` when the smallest eigenvalue anywhere
    /// drops below `margin` — the potential is outside the Kähler cone.
    pub fn from_potential(
        phi: &ScalarField,
        base: Option<&MetricField>,
        margin: f64,
    ) -> Result<Self, KrfError> {
        let spec = phi.spec().clone();
        let n = spec.dim();
        let p = spec.points();
        let mut comps = vec![linalg::ZERO; n * n * p];
        for i in 0..n {
            for j in i..n {
                let hess = spectral::hessian_entry(phi, i, j);
                let hv = hess.values();
                let cij = (i * n + j) * p;
                if let Some(b) = base {
                    let bv = b.comp(i, j);
                    for q in 0..p {
                        comps[cij + q] = bv[q] + hv[q];
                    }
                } else {
                    let delta = if i == j { 1.0 } else { 0.0 };
                    for q in 0..p {
                        comps[cij + q] = hv[q] + delta;
                    }
                }
                if j != i {
                    // Hermitian by construction
                    let (lo, hi) = comps.split_at_mut((j * n + i) * p);
                    let src = &lo[cij..cij + p];
                    for q in 0..p {
                        hi[q] = src[q].conj();
                    }
                }
            }
        }
        Self::from_components(spec, comps, margin)
    }

    /// Wrap raw components, populating caches; rejects inadmissible metrics.
    pub fn from_components(
        spec: GridSpec,
        comps: Vec<Complex64>,
        margin: f64,
    ) -> Result<Self, KrfError> {
        let n = spec.dim();
        let p = spec.points();
        assert_eq!(comps.len(), n * n * p);
        let mut det = vec![0.0; p];
        let mut inv = vec![linalg::ZERO; n * n * p];
        let mut min_eigenvalue = f64::INFINITY;
        let mut m = linalg::mat_zero();
        for q in 0..p {
            for i in 0..n {
                for j in 0..n {
                    m[i][j] = comps[(i * n + j) * p + q];
                }
            }
            let eig = linalg::eigenvalues(n, &m)[0];
            if !(eig >= margin) {
                return Err(KrfError::PositivityLoss {
                    point: q,
                    eigenvalue: eig,
                    stage: 0,
                });
            }
            min_eigenvalue = min_eigenvalue.min(eig);
            det[q] = linalg::det(n, &m);
            let im = linalg::inverse(n, &m);
            for i in 0..n {
                for j in 0..n {
                    inv[(i * n + j) * p + q] = im[i][j];
                }
            }
        }
        Ok(Self {
            spec,
            comps,
            inv,
            det,
            min_eigenvalue,
        })
    }

    pub fn spec(&self) -> &GridSpec {
        &self.spec
    }

    pub fn dim(&self) -> usize {
        self.spec.dim()
    }

    /// Component slice g_{i jbar}.
    pub fn comp(&self, i: usize, j: usize) -> &[Complex64] {
        let n = self.dim();
        let p = self.spec.points();
        &self.comps[(i * n + j) * p..(i * n + j) * p + p]
    }

    /// Inverse entry g^{jbar i}(p): contracts as g^{jbar i} g_{i lbar} =
    /// delta^jbar_lbar and g^{jbar i} g_{k jbar} = delta_k^i.
    pub fn up(&self, j: usize, i: usize, p: usize) -> Complex64 {
        let n = self.dim();
        self.inv[(j * n + i) * self.spec.points() + p]
    }

    /// Metric matrix at a point.
    pub fn at(&self, p: usize) -> Mat {
        let n = self.dim();
        let mut m = linalg::mat_zero();
        for i in 0..n {
            for j in 0..n {
                m[i][j] = self.comps[(i * n + j) * self.spec.points() + p];
            }
        }
        m
    }

    /// Inverse matrix at a point.
    pub fn inv_at(&self, p: usize) -> Mat {
        let n = self.dim();
        let mut m = linalg::mat_zero();
        for i in 0..n {
            for j in 0..n {
                m[i][j] = self.inv[(i * n + j) * self.spec.points() + p];
            }
        }
        m
    }

    /// Determinant field (real, positive).
    pub fn det(&self) -> &[f64] {
        &self.det
    }

    /// log det g as a scalar field (exactly real).
    pub fn log_det(&self) -> ScalarField {
        ScalarField::from_fn(&self.spec, |p| Complex64::new(libm::log(self.det[p]), 0.0))
    }

    /// Smallest eigenvalue across the whole grid.
    pub fn min_eigenvalue(&self) -> f64 {
        self.min_eigenvalue
    }

    /// Largest eigenvalue of the inverse metric across the grid (the
    /// stiffness scale of the spectral Laplacian).
    pub fn max_inverse_eigenvalue(&self) -> f64 {
        1.0 / self.min_eigenvalue
    }

    /// View as a rank-2 tensor field with signature (holo, anti).
    pub fn as_tensor(&self) -> TensorField {
        let n = self.dim();
        let mut t = TensorField::zeros(&self.spec, &[Slot::Holo, Slot::Anti]);
        for i in 0..n {
            for j in 0..n {
                t.set_component(&[i, j], self.comp(i, j));
            }
        }
        t
    }

    /// Pointwise max over the grid of max_{ij} |g_{i jbar}|.
    pub fn max_abs(&self) -> f64 {
        self.comps
            .iter()
            .map(|v| libm::sqrt(v.norm_sqr()))
            .fold(0.0, f64::max)
    }

    /// Hermitian residual max |g_{i jbar} - conj(g_{j ibar})|. Off-diagonal
    /// entries of potential-assembled metrics match exactly by construction;
    /// the diagonal carries only spectral roundoff dust in its imaginary
    /// part.
    pub fn hermitian_residual(&self) -> f64 {
        let n = self.dim();
        let p = self.spec.points();
        let mut r: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                for q in 0..p {
                    let a = self.comps[(i * n + j) * p + q];
                    let b = self.comps[(j * n + i) * p + q].conj();
                    r = r.max(libm::sqrt((a - b).norm_sqr()));
                }
            }
        }
        r
    }
}

/// Per-point generalized eigenvalues of g against a base metric, with the
/// global pinch summary.
#[derive(Debug, Clone)]
pub struct PinchReport {
    pub lambda_min_field: Vec<f64>,
    pub lambda_max_field: Vec<f64>,
    pub lambda_min: f64,
    pub lambda_max: f64,
    /// Uniform-equivalence constant max(lambda_max, 1/lambda_min).
    pub c_eq: f64,
}

/// Sorted generalized Hermitian eigenvalues of (g, g0) at every point.
pub fn pinch_eigenvalues(g: &MetricField, g0: &MetricField) -> PinchReport {
    assert_eq!(g.spec(), g0.spec());
    let p = g.spec().points();
    let n = g.dim();
    let mut lambda_min_field = Vec::with_capacity(p);
    let mut lambda_max_field = Vec::with_capacity(p);
    let mut lambda_min = f64::INFINITY;
    let mut lambda_max = f64::NEG_INFINITY;
    for q in 0..p {
        let lam = linalg::generalized_eigenvalues(n, &g.at(q), &g0.at(q));
        let (lo, hi) = (lam[0], lam[n - 1]);
        lambda_min_field.push(lo);
        lambda_max_field.push(hi);
        lambda_min = lambda_min.min(lo);
        lambda_max = lambda_max.max(hi);
    }
    let c_eq = lambda_max.max(1.0 / lambda_min);
    PinchReport {
        lambda_min_field,
        lambda_max_field,
        lambda_min,
        lambda_max,
        c_eq,
    }
}

/// Guaranteed lower bound on the smallest pinch eigenvalue from a trace
/// bound and a determinant bound: lambda_1 >= det_bound * trace_bound^{-(n-1)}.
pub fn pinch_lower_bound(trace_bound: f64, det_bound: f64, n: usize) -> f64 {
    let mut denom = 1.0;
    for _ in 1..n {
        denom *= trace_bound;
    }
    det_bound / denom
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::make_grid;
    use core::f64::consts::PI;

    #[test]
    fn zero_potential_gives_identity() {
        let spec = make_grid(2, 16).unwrap();
        let phi = ScalarField::zeros(&spec);
        let g = MetricField::from_potential(&phi, None, DEFAULT_MARGIN).unwrap();
        for p in 0..spec.points() {
            for i in 0..2 {
                for j in 0..2 {
                    let want = if i == j { 1.0 } else { 0.0 };
                    assert!((g.comp(i, j)[p] - Complex64::new(want, 0.0)).norm_sqr().sqrt() < 1e-14);
                }
            }
        }
        assert!((g.min_eigenvalue() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn cosine_potential_closed_form() {
        let spec = make_grid(1, 32).unwrap();
        let eps = 0.05;
        let phi = ScalarField::from_fn(&spec, |p| {
            Complex64::new(eps * (2.0 * PI * spec.coord(p, 0)).cos(), 0.0)
        });
        let g = MetricField::from_potential(&phi, None, DEFAULT_MARGIN).unwrap();
        for p in 0..spec.points() {
            let want = 1.0 - eps * PI * PI * (2.0 * PI * spec.coord(p, 0)).cos();
            assert!((g.comp(0, 0)[p].re - want).abs() < 1e-12);
        }
    }

    #[test]
    fn inadmissible_potential_rejected() {
        let spec = make_grid(1, 32).unwrap();
        let phi = ScalarField::from_fn(&spec, |p| {
            Complex64::new(0.2 * (2.0 * PI * spec.coord(p, 0)).cos(), 0.0)
        });
        // 0.2 * pi^2 ~ 1.97 > 1: metric dips negative
        match MetricField::from_potential(&phi, None, DEFAULT_MARGIN) {
            Err(KrfError::PositivityLoss { eigenvalue, .. }) => {
                assert!(eigenvalue < DEFAULT_MARGIN);
            }
            other => panic!("expected PositivityLoss, got {other:?}"),
        }
    }

    #[test]
    fn caches_are_consistent() {
        let spec = make_grid(2, 16).unwrap();
        let phi = spectral::random_bandlimited(&spec, 2, 0.002, 5).unwrap();
        let g = MetricField::from_potential(&phi, None, DEFAULT_MARGIN).unwrap();
        assert!(g.hermitian_residual() < 1e-12);
        for q in (0..spec.points()).step_by(977) {
            let m = g.at(q);
            let inv = g.inv_at(q);
            let prod = linalg::matmul(&m, &inv);
            for i in 0..2 {
                for j in 0..2 {
                    let want = if i == j { 1.0 } else { 0.0 };
                    assert!(
                        (prod[i][j] - Complex64::new(want, 0.0)).norm_sqr().sqrt() < 1e-10
                    );
                }
            }
            assert!((g.det()[q] - linalg::det(2, &m)).abs() < 1e-10);
            // up() contracts correctly: sum_i g^{jbar i} g_{i lbar} = delta
            for jb in 0..2 {
                for lb in 0..2 {
                    let mut acc = linalg::ZERO;
                    for i in 0..2 {
                        acc += g.up(jb, i, q) * g.comp(i, lb)[q];
                    }
                    let want = if jb == lb { 1.0 } else { 0.0 };
                    assert!((acc - Complex64::new(want, 0.0)).norm_sqr().sqrt() < 1e-10);
                }
            }
        }
    }

    #[test]
    fn pinch_scaling_and_identity() {
        let spec = make_grid(2, 16).unwrap();
        let phi = spectral::random_bandlimited(&spec, 2, 0.002, 11).unwrap();
        let g0 = MetricField::from_potential(&phi, None, DEFAULT_MARGIN).unwrap();
        // g = 2 g0
        let doubled =
            MetricField::from_components(spec.clone(), g0.comps.iter().map(|v| v * 2.0).collect(), 0.0)
                .unwrap();
        let r = pinch_eigenvalues(&doubled, &g0);
        assert!((r.lambda_min - 2.0).abs() < 1e-10);
        assert!((r.lambda_max - 2.0).abs() < 1e-10);
        assert!((r.c_eq - 2.0).abs() < 1e-10);
        let same = pinch_eigenvalues(&g0, &g0);
        assert!((same.c_eq - 1.0).abs() < 1e-10);
    }

    #[test]
    fn pinch_c_eq_invariant_under_joint_scaling() {
        let spec = make_grid(1, 32).unwrap();
        let phi0 = spectral::random_bandlimited(&spec, 2, 0.01, 3).unwrap();
        let phi = spectral::random_bandlimited(&spec, 2, 0.01, 4).unwrap();
        let g0 = MetricField::from_potential(&phi0, None, DEFAULT_MARGIN).unwrap();
        let g = MetricField::from_potential(&phi, Some(&g0), DEFAULT_MARGIN).unwrap();
        let a = 3.7;
        let ga = MetricField::from_components(
            spec.clone(),
            g.comps.iter().map(|v| v * a).collect(),
            0.0,
        )
        .unwrap();
        let g0a = MetricField::from_components(
            spec.clone(),
            g0.comps.iter().map(|v| v * a).collect(),
            0.0,
        )
        .unwrap();
        let r1 = pinch_eigenvalues(&g, &g0);
        let r2 = pinch_eigenvalues(&ga, &g0a);
        assert!((r1.c_eq - r2.c_eq).abs() <= 1e-12 * r1.c_eq);
    }

    #[test]
    fn paper_pinch_arithmetic() {
        // trace bound 5, determinant bound 0.5, n=2 -> lambda_1 >= 0.1
        assert!((pinch_lower_bound(5.0, 0.5, 2) - 0.1).abs() < 1e-15);
    }
}
