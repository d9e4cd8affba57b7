//! Quantities tracked along flow trajectories and the checks built on them:
//! the reference trace S, the derivative energies Q and Q_m, curvature norms,
//! evolution-identity residuals, smoothing-envelope fits and the
//! equivalence/curvature verdict.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use num_complex::Complex64;

use crate::connection::{covderiv, ChristoffelField};
use crate::curvature;
use crate::error::KrfError;
use crate::field::{ScalarField, Slot, TensorField};
use crate::linalg;
use crate::metric::{pinch_eigenvalues, MetricField};
use crate::norm;
use crate::spectral;

/// One sampled row of the monitor series.
#[derive(Debug, Clone, PartialEq)]
pub struct MonitorRecord {
    pub t: f64,
    pub s_min: f64,
    pub s_max: f64,
    pub q_sup: f64,
    /// sup Q_m for m = 1..=m_max
    pub qm_sup: Vec<f64>,
    /// sup ||nabla^k Rm||^2 for k = 0..=k_max
    pub rm_sup_sq: Vec<f64>,
    pub lambda_min: f64,
    pub lambda_max: f64,
    pub c_eq: f64,
    pub volume: f64,
    pub w_sup: f64,
}

/// Reference trace S = g0^{jbar i} g_{i jbar} with its extrema.
pub fn monitor_s(g: &MetricField, g0: &MetricField) -> (ScalarField, f64, f64) {
    assert_eq!(g.spec(), g0.spec());
    let n = g.dim();
    let s = ScalarField::from_fn(g.spec(), |q| {
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 0..n {
            for j in 0..n {
                acc += g0.up(j, i, q) * g.comp(i, j)[q];
            }
        }
        acc
    });
    (s.clone(), s.min_real(), s.max_real())
}

/// Q = ||nabla_0 g||^2 with every slot weighted by the evolving metric,
/// holomorphic derivative direction.
pub fn monitor_q(
    g: &MetricField,
    gamma0: &ChristoffelField,
) -> (Vec<f64>, f64) {
    let t = covderiv(&g.as_tensor(), Slot::Holo, gamma0);
    let field = norm::tensor_norm(&t, g);
    let sup = field.iter().fold(0.0f64, |m, &v| m.max(v));
    (field, sup)
}

/// Q_m = g0-weighted squared norm of nabla_0^m g summed over all mixed
/// direction tuples. Conjugate-mirror patterns contribute equally, so only
/// patterns with a leading holomorphic slot are materialized.
pub fn monitor_qm(
    g: &MetricField,
    g0: &MetricField,
    gamma0: &ChristoffelField,
    m: usize,
) -> f64 {
    assert!(m >= 1, "Q_m needs m >= 1");
    let mut sup = 0.0f64;
    for mask in 0..(1usize << (m - 1)) {
        let mut t = g.as_tensor();
        for pos in 0..m {
            let dir = if pos == 0 {
                Slot::Holo
            } else if (mask >> (pos - 1)) & 1 == 0 {
                Slot::Holo
            } else {
                Slot::Anti
            };
            t = covderiv(&t, dir, gamma0);
        }
        let field = norm::tensor_norm(&t, g0);
        let pattern_sup = field.iter().fold(0.0f64, |acc, &v| acc.max(v));
        sup += 2.0 * pattern_sup;
    }
    sup
}

/// Full per-sample record. `base` is the fixed monitor base metric (the flat
/// metric for runs) with its connection `gamma_base`.
pub fn compute_record(
    t: f64,
    g: &MetricField,
    base: &MetricField,
    gamma_base: &ChristoffelField,
    w: &ScalarField,
    k_max: usize,
    m_max: usize,
) -> MonitorRecord {
    let (_, s_min, s_max) = monitor_s(g, base);
    let (_, q_sup) = monitor_q(g, gamma_base);
    let qm_sup = (1..=m_max).map(|m| monitor_qm(g, base, gamma_base, m)).collect();
    let rm_sup_sq = (0..=k_max)
        .map(|k| {
            curvature::nabla_rm_norm_sq(g, gamma_base, k)
                .into_iter()
                .fold(0.0f64, f64::max)
        })
        .collect();
    let pinch = pinch_eigenvalues(g, base);
    let det = ScalarField::from_fn(g.spec(), |q| Complex64::new(g.det()[q], 0.0));
    MonitorRecord {
        t,
        s_min,
        s_max,
        q_sup,
        qm_sup,
        rm_sup_sq,
        lambda_min: pinch.lambda_min,
        lambda_max: pinch.lambda_max,
        c_eq: pinch.c_eq,
        volume: spectral::integrate(&det).re,
        w_sup: w.max_abs(),
    }
}

/// Outcome of one identity or bound check.
#[derive(Debug, Clone)]
pub struct ResidualReport {
    pub name: String,
    pub residual: f64,
    pub scale: f64,
    pub tolerance: f64,
    pub pass: bool,
    /// sample times the check used (empty for frozen-time checks)
    pub times: Vec<f64>,
}

impl ResidualReport {
    pub fn new(name: &str, residual: f64, scale: f64, tol_factor: f64) -> Self {
        let tolerance = tol_factor * (1.0 + scale);
        Self {
            name: String::from(name),
            residual,
            scale,
            tolerance,
            pass: residual <= tolerance,
            times: Vec::new(),
        }
    }

    pub fn with_times(mut self, times: &[f64]) -> Self {
        self.times = times.to_vec();
        self
    }
}

/// Three consecutive equally spaced flow snapshots plus the spatial data
/// needed to evaluate evolution identities at the middle time.
pub struct SnapshotWindow<'a> {
    pub t: [f64; 3],
    pub u: [&'a ScalarField; 3],
    pub w: [&'a ScalarField; 3],
}

impl<'a> SnapshotWindow<'a> {
    pub fn spacing(&self) -> f64 {
        self.t[1] - self.t[0]
    }

    pub fn is_uniform(&self) -> bool {
        let h1 = self.t[1] - self.t[0];
        let h2 = self.t[2] - self.t[1];
        libm::fabs(h1 - h2) <= 1e-9 * libm::fabs(h1)
    }
}

/// Spatial context of a flow run shared by the residual checks.
pub struct FlowGeometry<'a> {
    /// reference potential phi0 (metric is flat + hess(phi0 + u))
    pub phi0: &'a ScalarField,
    /// monitor base metric and connection (flat for runs)
    pub base: &'a MetricField,
    pub gamma_base: &'a ChristoffelField,
    pub margin: f64,
    pub c: f64,
}

fn metric_of<'a>(geo: &FlowGeometry<'a>, u: &ScalarField) -> MetricField {
    let phi = geo.phi0.add(u);
    MetricField::from_potential(&phi, None, geo.margin)
        .expect("snapshot metric must be admissible")
}

/// -Ric + c g as a tensor field (the flow velocity of the metric).
fn flow_velocity(g: &MetricField, c: f64) -> TensorField {
    let ric = curvature::ricci(g);
    let n = g.dim();
    let mut out = TensorField::zeros(g.spec(), &[Slot::Holo, Slot::Anti]);
    for i in 0..n {
        for j in 0..n {
            let rv = ric.component(&[i, j]).to_vec();
            let gv = g.comp(i, j);
            let c_idx = out.comp_index(&[i, j]);
            let slice = out.component_flat_mut(c_idx);
            for q in 0..slice.len() {
                slice[q] = -rv[q] + c * gv[q];
            }
        }
    }
    out
}

/// Time derivatives of g up to third order, evaluated spatially from one
/// snapshot through the flow's chain rule. Used as truncation scales for the
/// centered-difference residuals.
struct TimeCascade {
    v: TensorField,       // dg/dt
    a: TensorField,       // d2g/dt2
    jerk_sup: f64,        // sup |d3g/dt3|
    tr_a_v2: ScalarField, // d2/dt2 log det g
}

fn time_cascade(g: &MetricField, c: f64) -> TimeCascade {
    let spec = g.spec().clone();
    let n = g.dim();
    let p = spec.points();
    let v = flow_velocity(g, c);

    let mat_at = |t: &TensorField, q: usize| -> linalg::Mat {
        let mut m = linalg::mat_zero();
        for i in 0..n {
            for j in 0..n {
                m[i][j] = t.component(&[i, j])[q];
            }
        }
        m
    };

    // tr(g^{-1} v)
    let tr_v = ScalarField::from_fn(&spec, |q| {
        linalg::trace_mul(n, &g.inv_at(q), &mat_at(&v, q))
    });
    // a = d/dt v = ddbar tr(g^{-1} v) + c v
    let mut a = TensorField::zeros(&spec, &[Slot::Holo, Slot::Anti]);
    for i in 0..n {
        for j in 0..n {
            let h = spectral::hessian_entry(&tr_v, i, j);
            let c_idx = a.comp_index(&[i, j]);
            let vv = v.component(&[i, j]).to_vec();
            let slice = a.component_flat_mut(c_idx);
            for q in 0..p {
                slice[q] = h.values()[q] + c * vv[q];
            }
        }
    }
    // d2/dt2 log det g = tr(-(g^{-1}v)^2 + g^{-1}a)
    let tr_a_v2 = ScalarField::from_fn(&spec, |q| {
        let hv = linalg::matmul(&g.inv_at(q), &mat_at(&v, q));
        let ha = linalg::matmul(&g.inv_at(q), &mat_at(&a, q));
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 0..n {
            acc += ha[i][i] - linalg::matmul(&hv, &hv)[i][i];
        }
        acc
    });
    // jerk = ddbar (d2/dt2 log det g) + c a
    let mut jerk_sup = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            let h = spectral::hessian_entry(&tr_a_v2, i, j);
            let av = a.component(&[i, j]);
            for q in 0..p {
                let val = h.values()[q] + c * av[q];
                jerk_sup = jerk_sup.max(libm::sqrt(val.norm_sqr()));
            }
        }
    }
    TimeCascade {
        v,
        a,
        jerk_sup,
        tr_a_v2,
    }
}

fn centered_tensor_diff(
    plus: &TensorField,
    minus: &TensorField,
    h: f64,
) -> TensorField {
    plus.sub(minus).scale(0.5 / h)
}

/// Evolution-identity residuals over one window:
///  (flow)  d_t g = -Ric + c g
///  (S)     (d_t - Lap) S = cS - pairing terms
///  (dg;k)  d_t g_{i jbar;k} = -R_{i jbar;k} + c g_{i jbar;k}
///  (w)     d_t w = Lap w + c w
/// LHS time derivatives are centered differences, RHS is spatial at the
/// middle snapshot, tolerances are 4 h^2 sup|third time derivative| plus the
/// spectral floor.
pub fn evolution_residuals(window: &SnapshotWindow<'_>, geo: &FlowGeometry<'_>) -> Vec<ResidualReport> {
    assert!(window.is_uniform(), "snapshots must be equally spaced");
    let h = window.spacing();
    let g_minus = metric_of(geo, window.u[0]);
    let g_mid = metric_of(geo, window.u[1]);
    let g_plus = metric_of(geo, window.u[2]);
    let cascade = time_cascade(&g_mid, geo.c);
    let mut reports = Vec::new();
    let floor = 1e-8;

    // (flow) metric-level consistency
    {
        let lhs = centered_tensor_diff(&g_plus.as_tensor(), &g_minus.as_tensor(), h);
        let resid = lhs.sub(&cascade.v).max_abs();
        let scale3 = cascade.jerk_sup;
        let tol = 4.0 * h * h * scale3 + floor * (1.0 + cascade.v.max_abs());
        reports.push(ResidualReport {
            name: String::from("flow_equation"),
            residual: resid,
            scale: scale3,
            tolerance: tol,
            pass: resid <= tol,
            times: vec![window.t[0], window.t[1], window.t[2]],
        });
    }

    // (S) trace evolution: (d_t - Lap) S = cS - quad - base-curvature pairing
    {
        let s_of = |g: &MetricField| monitor_s(g, geo.base).0;
        let dt_s = s_of(&g_plus).sub(&s_of(&g_minus)).scale(0.5 / h);
        let lap_s = curvature::laplacian(&g_mid, &s_of(&g_mid));
        let covd1 = covderiv(&g_mid.as_tensor(), Slot::Holo, geo.gamma_base);
        let r_base = curvature::curvature_direct(geo.base);
        let (resid, rhs_sup, s3) =
            s_identity_residual(&g_mid, geo, &covd1, &r_base, &dt_s, &lap_s, &cascade);
        let tol = 4.0 * h * h * s3 + floor * (1.0 + rhs_sup);
        reports.push(ResidualReport {
            name: String::from("s_evolution"),
            residual: resid,
            scale: s3,
            tolerance: tol,
            pass: resid <= tol,
            times: vec![window.t[0], window.t[1], window.t[2]],
        });
    }

    // (dg;k) first-derivative evolution
    {
        let cd = |g: &MetricField| covderiv(&g.as_tensor(), Slot::Holo, geo.gamma_base);
        let lhs = centered_tensor_diff(&cd(&g_plus), &cd(&g_minus), h);
        let ric = curvature::ricci(&g_mid);
        let ric_cd = covderiv(&ric, Slot::Holo, geo.gamma_base);
        let g_cd = cd(&g_mid);
        // rhs = -R_{i jbar;k} + c g_{i jbar;k}
        let rhs = g_cd.scale(geo.c).sub(&ric_cd);
        let resid = lhs.sub(&rhs).max_abs();
        // third time derivative of g_{;k} is (d3g/dt3)_{;k}
        let jerk_cd_sup = {
            let jerk = jerk_tensor(&g_mid, &cascade, geo.c);
            covderiv(&jerk, Slot::Holo, geo.gamma_base).max_abs()
        };
        let tol = 4.0 * h * h * jerk_cd_sup + floor * (1.0 + rhs.max_abs());
        reports.push(ResidualReport {
            name: String::from("metric_derivative_evolution"),
            residual: resid,
            scale: jerk_cd_sup,
            tolerance: tol,
            pass: resid <= tol,
            times: vec![window.t[0], window.t[1], window.t[2]],
        });
    }

    // (w) potential-velocity heat equation
    {
        let lhs = window.w[2].sub(window.w[0]).scale(0.5 / h);
        let rhs = curvature::laplacian(&g_mid, window.w[1]).add(&window.w[1].scale(geo.c));
        let resid = lhs.sub(&rhs).max_abs();
        let w3 = w_third_derivative_sup(&g_mid, window.w[1], &cascade, geo.c);
        let tol = 4.0 * h * h * w3 + floor * (1.0 + rhs.max_abs());
        reports.push(ResidualReport {
            name: String::from("w_heat_equation"),
            residual: resid,
            scale: w3,
            tolerance: tol,
            pass: resid <= tol,
            times: vec![window.t[0], window.t[1], window.t[2]],
        });
    }

    reports
}

/// d3g/dt3 = ddbar(d2/dt2 log det g) + c d2g/dt2 as a tensor field.
fn jerk_tensor(g: &MetricField, cascade: &TimeCascade, c: f64) -> TensorField {
    let spec = g.spec().clone();
    let n = g.dim();
    let mut jerk = TensorField::zeros(&spec, &[Slot::Holo, Slot::Anti]);
    for i in 0..n {
        for j in 0..n {
            let h = spectral::hessian_entry(&cascade.tr_a_v2, i, j);
            let av = cascade.a.component(&[i, j]).to_vec();
            let c_idx = jerk.comp_index(&[i, j]);
            let slice = jerk.component_flat_mut(c_idx);
            for q in 0..slice.len() {
                slice[q] = h.values()[q] + c * av[q];
            }
        }
    }
    jerk
}

fn s_identity_residual(
    g_mid: &MetricField,
    geo: &FlowGeometry<'_>,
    covd1: &TensorField,
    r_base: &TensorField,
    dt_s: &ScalarField,
    lap_s: &ScalarField,
    cascade: &TimeCascade,
) -> (f64, f64, f64) {
    let n = g_mid.dim();
    let p = g_mid.spec().points();
    let mut resid = 0.0f64;
    let mut rhs_sup = 0.0f64;
    for q in 0..p {
        let mut quad = Complex64::new(0.0, 0.0);
        let mut pairing = Complex64::new(0.0, 0.0);
        let mut c_s = Complex64::new(0.0, 0.0);
        for i in 0..n {
            for j in 0..n {
                c_s += geo.base.up(j, i, q) * g_mid.comp(i, j)[q] * geo.c;
                for k in 0..n {
                    for l in 0..n {
                        let up_lk = g_mid.up(l, k, q);
                        for mu in 0..n {
                            for nu in 0..n {
                                quad += geo.base.up(j, i, q)
                                    * up_lk
                                    * g_mid.up(nu, mu, q)
                                    * covd1.component(&[i, nu, k])[q]
                                    * covd1.component(&[j, mu, l])[q].conj();
                            }
                        }
                        for alpha in 0..n {
                            for delta in 0..n {
                                pairing += geo.base.up(j, i, q)
                                    * up_lk
                                    * geo.base.up(delta, alpha, q)
                                    * r_base.component(&[i, delta, k, l])[q]
                                    * g_mid.comp(alpha, j)[q];
                            }
                        }
                    }
                }
            }
        }
        let rhs = c_s - quad - pairing;
        let lhs = dt_s.values()[q] - lap_s.values()[q];
        resid = resid.max(libm::sqrt((lhs - rhs).norm_sqr()));
        rhs_sup = rhs_sup.max(libm::sqrt(rhs.norm_sqr()));
    }
    // third time derivative of S = tr_base(d3 g/dt3); bounded by the base
    // inverse times the jerk sup
    let base_inv_sup = geo.base.max_inverse_eigenvalue();
    let s3 = (g_mid.dim() as f64).powi(2) * base_inv_sup * cascade.jerk_sup;
    (resid, rhs_sup, s3)
}

/// d3w/dt3 sup from w_t = Lap w + c w by repeated substitution.
fn w_third_derivative_sup(
    g: &MetricField,
    w: &ScalarField,
    cascade: &TimeCascade,
    c: f64,
) -> f64 {
    let spec = g.spec().clone();
    let n = g.dim();
    let p = spec.points();
    let hess = |f: &ScalarField| -> Vec<ScalarField> {
        let mut out = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                out.push(spectral::hessian_entry(f, i, j));
            }
        }
        out
    };
    let inv_dot = |q: usize, m: &linalg::Mat, h: &[ScalarField]| -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 0..n {
            for j in 0..n {
                // m plays the role of a (possibly t-derived) inverse metric
                acc += m[j][i] * h[i * n + j].values()[q];
            }
        }
        acc
    };
    let hw = hess(w);
    // w1 = Lap w + c w
    let w1 = ScalarField::from_fn(&spec, |q| inv_dot(q, &g.inv_at(q), &hw) + c * w.values()[q]);
    let hw1 = hess(&w1);
    // dH/dt = -H V H with H = g^{-1}, V = dg/dt
    let dh_at = |q: usize| -> linalg::Mat {
        let h = g.inv_at(q);
        let mut v = linalg::mat_zero();
        for i in 0..n {
            for j in 0..n {
                v[i][j] = cascade.v.component(&[i, j])[q];
            }
        }
        let hv = linalg::matmul(&h, &v);
        let hvh = linalg::matmul(&hv, &h);
        let mut out = linalg::mat_zero();
        for i in 0..2 {
            for j in 0..2 {
                out[i][j] = -hvh[i][j];
            }
        }
        out
    };
    let w2 = ScalarField::from_fn(&spec, |q| {
        inv_dot(q, &dh_at(q), &hw) + inv_dot(q, &g.inv_at(q), &hw1) + c * w1.values()[q]
    });
    let hw2 = hess(&w2);
    let mut sup = 0.0f64;
    for q in 0..p {
        let h = g.inv_at(q);
        let dh = dh_at(q);
        // d2H/dt2 = 2 HVHVH - HAH
        let mut v = linalg::mat_zero();
        let mut a = linalg::mat_zero();
        for i in 0..n {
            for j in 0..n {
                v[i][j] = cascade.v.component(&[i, j])[q];
                a[i][j] = cascade.a.component(&[i, j])[q];
            }
        }
        let hv = linalg::matmul(&h, &v);
        let hvh = linalg::matmul(&hv, &h);
        let hvhvh = linalg::matmul(&hv, &hvh);
        let hah = linalg::matmul(&linalg::matmul(&h, &a), &h);
        let mut d2h = linalg::mat_zero();
        for i in 0..2 {
            for j in 0..2 {
                d2h[i][j] = 2.0 * hvhvh[i][j] - hah[i][j];
            }
        }
        let w3 = inv_dot(q, &d2h, &hw)
            + 2.0 * inv_dot(q, &dh, &hw1)
            + inv_dot(q, &h, &hw2)
            + c * w2.values()[q];
        sup = sup.max(libm::sqrt(w3.norm_sqr()));
    }
    sup
}

/// Fitted envelope constants for one derivative order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShiFit {
    pub a_k: f64,
    pub b_k: f64,
}

/// Minimal envelope value(t) <= A_k + B_k / t^k over a sampled series:
/// A_k is the sup over the plateau t >= t_split, B_k the clamped sup of
/// (value - A_k) t^k over the transient.
pub fn shi_fit(series: &[(f64, f64)], k: usize, t_split: f64) -> Result<ShiFit, KrfError> {
    if series.is_empty() {
        return Err(KrfError::EmptySeries);
    }
    if k == 0 {
        let a = series.iter().fold(0.0f64, |m, &(_, v)| m.max(v));
        return Ok(ShiFit { a_k: a, b_k: 0.0 });
    }
    let a_k = series
        .iter()
        .filter(|&&(t, _)| t >= t_split)
        .fold(0.0f64, |m, &(_, v)| m.max(v));
    let mut b_k = 0.0f64;
    for &(t, v) in series {
        if t > 0.0 && t < t_split {
            let mut weight = v - a_k;
            if weight < 0.0 {
                weight = 0.0;
            }
            let mut tk = 1.0;
            for _ in 0..k {
                tk *= t;
            }
            b_k = b_k.max(weight * tk);
        }
    }
    Ok(ShiFit { a_k, b_k })
}

/// Number of samples violating value <= A_k + B_k/t^k + tol (t = 0 rows are
/// covered by the 1/t^k blowup for k >= 1).
pub fn shi_coverage_violations(series: &[(f64, f64)], k: usize, fit: &ShiFit, tol: f64) -> usize {
    series
        .iter()
        .filter(|&&(t, v)| {
            let bound = if k == 0 {
                fit.a_k
            } else if t <= 0.0 {
                return false;
            } else {
                let mut tk = 1.0;
                for _ in 0..k {
                    tk *= t;
                }
                fit.a_k + fit.b_k / tk
            };
            v > bound + tol
        })
        .count()
}

/// Report of the discrete Omori–Yau check at the grid argmax of a slice.
#[derive(Debug, Clone)]
pub struct MaxPrincipleReport {
    pub argmax: usize,
    pub value: f64,
    pub grad_norm: f64,
    pub laplacian: f64,
    pub grad_tol: f64,
    pub lap_tol: f64,
    pub pass: bool,
}

/// At the discrete argmax of (the real part of) h: the gradient norm is
/// bounded by the grid localization error and the Laplacian by a one-sided
/// tolerance of the same origin.
pub fn max_principle_check(h: &ScalarField, g: &MetricField) -> MaxPrincipleReport {
    let spec = h.spec().clone();
    let p = spec.points();
    let mut argmax = 0usize;
    let mut best = f64::NEG_INFINITY;
    for q in 0..p {
        let v = h.values()[q].re;
        if v > best {
            best = v;
            argmax = q;
        }
    }
    let grad = curvature::gradient_norm_sq(g, h);
    let lap = curvature::laplacian(g, h);
    // localization scales: sup of Hessian / third derivatives
    let n = spec.dim();
    let mut hess_sup = 0.0f64;
    let mut third_sup = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            let hij = spectral::hessian_entry(h, i, j);
            hess_sup = hess_sup.max(hij.max_abs());
            for d in 0..n {
                third_sup = third_sup.max(spectral::dz(&hij, d).max_abs());
                third_sup = third_sup.max(spectral::dzbar(&hij, d).max_abs());
            }
        }
    }
    let n_res = spec.res() as f64;
    let ginv_sup = g.max_inverse_eigenvalue();
    // |grad h|_g at the grid argmax <= sqrt(g^{-1}) * Hess * (half diagonal)
    let grad_tol = libm::sqrt(ginv_sup) * hess_sup * (2.0 * (n as f64)) / n_res + 1e-10;
    let lap_tol = ginv_sup * third_sup * (2.0 * (n as f64)) / n_res + 1e-10;
    let grad_norm = libm::sqrt(grad[argmax].max(0.0));
    let laplacian = lap.values()[argmax].re;
    MaxPrincipleReport {
        argmax,
        value: best,
        grad_norm,
        laplacian,
        grad_tol,
        lap_tol,
        pass: grad_norm <= grad_tol && laplacian <= lap_tol,
    }
}

/// sup|w|(t) <= e^{ct} sup|f| at every sample.
pub fn w_bound_check(w_sup_series: &[(f64, f64)], sup_f: f64, c: f64) -> ResidualReport {
    let mut worst = f64::NEG_INFINITY;
    let mut times = Vec::with_capacity(w_sup_series.len());
    for &(t, w_sup) in w_sup_series {
        let bound = libm::exp(c * t) * sup_f;
        worst = worst.max(w_sup - bound);
        times.push(t);
    }
    let residual = worst.max(0.0);
    ResidualReport {
        name: String::from("w_max_principle_bound"),
        residual,
        scale: sup_f,
        tolerance: 1e-8,
        pass: residual <= 1e-8,
        times,
    }
}
