//! Chern connection of a reference metric and covariant differentiation.
//!
//! ";" throughout the crate means covariant differentiation with the
//! connection built here. A holomorphic derivative corrects holomorphic
//! slots with -Gamma, an anti-holomorphic derivative corrects
//! anti-holomorphic slots with the conjugate connection, and mixed-type
//! corrections vanish (the connection is of pure type). Derivative slots are
//! appended in the literal order requested; no symmetrization is performed,
//! so commutators remain observable.

use alloc::vec::Vec;
use num_complex::Complex64;

use crate::field::{ScalarField, Slot, TensorField};
use crate::grid::GridSpec;
use crate::metric::MetricField;
use crate::spectral;

/// Christoffel symbols Gamma^k_{ij} of a metric's Chern connection,
/// component-major over (k, i, j).
#[derive(Debug, Clone)]
pub struct ChristoffelField {
    spec: GridSpec,
    n: usize,
    comps: Vec<Complex64>,
    zero: bool,
}

impl ChristoffelField {
    /// Gamma^k_{ij} = g^{lbar k} d_i g_{j lbar}.
    pub fn of(g: &MetricField) -> Self {
        let spec = g.spec().clone();
        let n = g.dim();
        let p = spec.points();
        // dg[(i, j, l)] = d_i g_{j lbar}
        let mut dg = Vec::with_capacity(n * n * n);
        for i in 0..n {
            for j in 0..n {
                for l in 0..n {
                    let comp = ScalarField::from_values(&spec, g.comp(j, l).to_vec());
                    dg.push(spectral::dz(&comp, i));
                }
            }
        }
        let mut comps = alloc::vec![Complex64::new(0.0, 0.0); n * n * n * p];
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    let c = ((k * n + i) * n + j) * p;
                    for l in 0..n {
                        let d = dg[(i * n + j) * n + l].values();
                        for q in 0..p {
                            comps[c + q] += g.up(l, k, q) * d[q];
                        }
                    }
                }
            }
        }
        Self {
            spec,
            n,
            comps,
            zero: false,
        }
    }

    /// The vanishing connection of the flat metric.
    pub fn flat(spec: &GridSpec) -> Self {
        let n = spec.dim();
        Self {
            spec: spec.clone(),
            n,
            comps: alloc::vec![Complex64::new(0.0, 0.0); n * n * n * spec.points()],
            zero: true,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.zero
    }

    pub fn spec(&self) -> &GridSpec {
        &self.spec
    }

    /// Component slice Gamma^k_{ij}.
    pub fn comp(&self, k: usize, i: usize, j: usize) -> &[Complex64] {
        let p = self.spec.points();
        let c = ((k * self.n + i) * self.n + j) * p;
        &self.comps[c..c + p]
    }

    /// Max |Gamma^k_{ij} - Gamma^k_{ji}| over components and points.
    pub fn symmetry_residual(&self) -> f64 {
        let p = self.spec.points();
        let mut r: f64 = 0.0;
        for k in 0..self.n {
            for i in 0..self.n {
                for j in 0..self.n {
                    let a = self.comp(k, i, j);
                    let b = self.comp(k, j, i);
                    for q in 0..p {
                        r = r.max(libm::sqrt((a[q] - b[q]).norm_sqr()));
                    }
                }
            }
        }
        r
    }

    pub fn max_abs(&self) -> f64 {
        self.comps
            .iter()
            .map(|v| libm::sqrt(v.norm_sqr()))
            .fold(0.0, f64::max)
    }
}

/// Covariant derivative of a tensor field, appending one slot of type `dir`.
pub fn covderiv(t: &TensorField, dir: Slot, gamma: &ChristoffelField) -> TensorField {
    let spec = t.spec().clone();
    let n = spec.dim();
    let p = spec.points();
    let rank = t.rank();
    let mut signature = t.signature().to_vec();
    signature.push(dir);
    let mut out = TensorField::zeros(&spec, &signature);

    let mut idx = alloc::vec![0usize; rank + 1];
    for c in 0..out.components() {
        out.decode(c, &mut idx);
        let d = idx[rank];
        let inner = &idx[..rank];
        let base = ScalarField::from_values(&spec, t.component(inner).to_vec());
        let mut deriv = match dir {
            Slot::Holo => spectral::dz(&base, d),
            Slot::Anti => spectral::dzbar(&base, d),
        };
        if !gamma.is_zero() {
            let dv = deriv.values_mut();
            let mut nbr = inner.to_vec();
            for (s, &slot) in t.signature().iter().enumerate() {
                if slot != dir {
                    continue;
                }
                let orig = nbr[s];
                for alpha in 0..n {
                    nbr[s] = alpha;
                    let tv = t.component(&nbr);
                    let gv = gamma.comp(alpha, d, orig);
                    match dir {
                        Slot::Holo => {
                            for q in 0..p {
                                dv[q] -= gv[q] * tv[q];
                            }
                        }
                        Slot::Anti => {
                            for q in 0..p {
                                dv[q] -= gv[q].conj() * tv[q];
                            }
                        }
                    }
                }
                nbr[s] = orig;
            }
        }
        out.component_flat_mut(c).copy_from_slice(deriv.values());
    }
    out
}
