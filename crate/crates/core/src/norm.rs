//! Metric-weighted tensor norms.
//!
//! ||T||^2 contracts T against its conjugate with the chosen inverse metric
//! on every slot: holomorphic slots pair through g^{jbar i}, anti-holomorphic
//! slots through the conjugate entries. The result is a real nonnegative
//! field (the Gram form of the inverse metric), with imaginary residue only
//! from roundoff.

use alloc::vec;
use alloc::vec::Vec;
use num_complex::Complex64;

use crate::field::{Slot, TensorField};
use crate::metric::MetricField;

/// Pointwise squared norm of `T` with every slot weighted by `weight`.
pub fn tensor_norm(t: &TensorField, weight: &MetricField) -> Vec<f64> {
    assert_eq!(t.spec(), weight.spec());
    let n = t.spec().dim();
    let p = t.spec().points();
    let comps = t.components();
    let rank = t.rank();

    // raised[c*p + q]: T with every slot contracted against the inverse
    // metric, built one slot at a time (n multiplies per slot per entry).
    let mut raised: Vec<Complex64> = Vec::with_capacity(comps * p);
    for c in 0..comps {
        raised.extend_from_slice(t.component_flat(c));
    }
    let mut scratch = vec![Complex64::new(0.0, 0.0); comps * p];

    let mut stride = comps / n; // stride of slot 0 in the component index
    for &slot in t.signature() {
        // group components so that the active slot varies with `stride`
        let outer = comps / (stride * n);
        for o in 0..outer {
            for inner in 0..stride {
                let base = o * stride * n + inner;
                for a in 0..n {
                    let dst = (base + a * stride) * p;
                    for q in 0..p {
                        let mut acc = Complex64::new(0.0, 0.0);
                        for b in 0..n {
                            let src = raised[(base + b * stride) * p + q];
                            let w = match slot {
                                // holo: out_a = sum_b g^{abar b} -> up(a, b)
                                Slot::Holo => weight.up(a, b, q),
                                // anti: out_abar = sum_b g^{bbar a} conj pairing
                                Slot::Anti => weight.up(a, b, q).conj(),
                            };
                            acc += w * src;
                        }
                        scratch[dst + q] = acc;
                    }
                }
            }
        }
        core::mem::swap(&mut raised, &mut scratch);
        stride /= n;
    }
    debug_assert_eq!(comps, n.pow(rank as u32));

    let mut out = vec![0.0f64; p];
    let mut max_im: f64 = 0.0;
    for q in 0..p {
        let mut acc = Complex64::new(0.0, 0.0);
        for c in 0..comps {
            acc += raised[c * p + q] * t.component_flat(c)[q].conj();
        }
        max_im = max_im.max(libm::fabs(acc.im));
        out[q] = acc.re;
    }
    let scale = out.iter().fold(0.0f64, |m, &v| m.max(libm::fabs(v)));
    debug_assert!(
        max_im <= 1e-10 * (1.0 + scale),
        "imaginary residue {max_im} too large for scale {scale}"
    );
    out
}

/// Sup over the grid of the pointwise squared norm.
pub fn tensor_norm_sup(t: &TensorField, weight: &MetricField) -> f64 {
    tensor_norm(t, weight).into_iter().fold(0.0, f64::max)
}
