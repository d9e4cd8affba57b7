//! Mixed-radix complex FFT for line lengths of the form 2^a * 3^b.
//!
//! Recursive decimation-in-time with a shared root table. Forward transform
//! is unnormalized, X[t] = sum_s x[s] e^{-2 pi i s t / N}; the inverse
//! applies the conjugate roots and divides by N, so `inverse(forward(x)) = x`
//! to roundoff. Transforms along non-contiguous axes run batched over the
//! axis stride (every memory access is a contiguous row), which is what
//! keeps multi-dimensional grids at n=2 affordable. No SIMD dispatch and no
//! runtime feature detection: identical inputs produce bitwise-identical
//! outputs on every machine.

use alloc::vec;
use alloc::vec::Vec;
use num_complex::Complex64;

/// True when n is even, in range, and factors into 2s and 3s only.
pub fn supported_len(n: usize) -> bool {
    if n < 16 || n > 256 || n % 2 != 0 {
        return false;
    }
    let mut m = n;
    while m % 2 == 0 {
        m /= 2;
    }
    while m % 3 == 0 {
        m /= 3;
    }
    m == 1
}

/// Precomputed roots of unity for one line length.
pub struct FftPlan {
    n: usize,
    /// forward[t] = e^{-2 pi i t / n}
    forward: Vec<Complex64>,
    /// backward[t] = e^{+2 pi i t / n}
    backward: Vec<Complex64>,
}

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

impl FftPlan {
    pub fn new(n: usize) -> Self {
        debug_assert!(supported_len(n), "unsupported FFT length {n}");
        let mut forward = vec![ZERO; n];
        for t in 0..n {
            // exact values on the axes, conjugate symmetry across the
            // half-circle; keeps transforms of constants and pure cosines
            // clean of sin(pi)-scale dust
            forward[t] = if t == 0 {
                Complex64::new(1.0, 0.0)
            } else if 4 * t == n {
                Complex64::new(0.0, -1.0)
            } else if 2 * t == n {
                Complex64::new(-1.0, 0.0)
            } else if 4 * t == 3 * n {
                Complex64::new(0.0, 1.0)
            } else if 2 * t > n {
                forward[n - t].conj()
            } else {
                let theta = -2.0 * core::f64::consts::PI * t as f64 / n as f64;
                Complex64::new(libm::cos(theta), libm::sin(theta))
            };
        }
        let backward = forward.iter().map(|w| w.conj()).collect();
        Self {
            n,
            forward,
            backward,
        }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Forward DFT of one contiguous line (unnormalized).
    pub fn forward(&self, line: &[Complex64], out: &mut [Complex64]) {
        self.rec(line, 1, out, self.n, &self.forward);
    }

    /// Inverse DFT of one contiguous line, including the 1/n factor.
    pub fn inverse(&self, line: &[Complex64], out: &mut [Complex64]) {
        self.rec(line, 1, out, self.n, &self.backward);
        let scale = 1.0 / self.n as f64;
        for v in out.iter_mut() {
            *v *= scale;
        }
    }

    /// Batched DFT of a slab of `n` rows, each `inner` contiguous elements:
    /// `inner` independent transforms taken along the row axis at once.
    pub fn forward_rows(&self, slab_in: &[Complex64], slab_out: &mut [Complex64], inner: usize, tmp: &mut [Complex64]) {
        self.rec_rows(slab_in, 1, slab_out, self.n, inner, &self.forward, tmp);
    }

    pub fn inverse_rows(&self, slab_in: &[Complex64], slab_out: &mut [Complex64], inner: usize, tmp: &mut [Complex64]) {
        self.rec_rows(slab_in, 1, slab_out, self.n, inner, &self.backward, tmp);
        let scale = 1.0 / self.n as f64;
        for v in slab_out.iter_mut() {
            *v *= scale;
        }
    }

    fn rec(
        &self,
        inp: &[Complex64],
        stride: usize,
        out: &mut [Complex64],
        n: usize,
        table: &[Complex64],
    ) {
        if n == 1 {
            out[0] = inp[0];
            return;
        }
        let r = if n % 2 == 0 { 2 } else { 3 };
        let m = n / r;
        for q in 0..r {
            self.rec(&inp[q * stride..], stride * r, &mut out[q * m..(q + 1) * m], m, table);
        }
        let full = self.n;
        let w_sub = full / n;
        let w_r = full / r;
        let mut tmp = [ZERO; 3];
        for k in 0..m {
            for (q, t) in tmp.iter_mut().enumerate().take(r) {
                *t = out[q * m + k] * table[(q * k * w_sub) % full];
            }
            for j in 0..r {
                let mut acc = ZERO;
                for (q, t) in tmp.iter().enumerate().take(r) {
                    acc += *t * table[(j * q * w_r) % full];
                }
                out[k + j * m] = acc;
            }
        }
    }

    /// Row-batched recursion: identical butterfly structure, each "element"
    /// a contiguous row of `inner` values. `tmp` must hold 3 * inner.
    #[allow(clippy::too_many_arguments)]
    fn rec_rows(
        &self,
        inp: &[Complex64],
        row_stride: usize,
        out: &mut [Complex64],
        n: usize,
        inner: usize,
        table: &[Complex64],
        tmp: &mut [Complex64],
    ) {
        if n == 1 {
            out[..inner].copy_from_slice(&inp[..inner]);
            return;
        }
        let r = if n % 2 == 0 { 2 } else { 3 };
        let m = n / r;
        for q in 0..r {
            self.rec_rows(
                &inp[q * row_stride * inner..],
                row_stride * r,
                &mut out[q * m * inner..(q + 1) * m * inner],
                m,
                inner,
                table,
                tmp,
            );
        }
        let full = self.n;
        let w_sub = full / n;
        let w_r = full / r;
        for k in 0..m {
            for q in 0..r {
                let w = table[(q * k * w_sub) % full];
                let src = &out[(q * m + k) * inner..(q * m + k + 1) * inner];
                let dst = &mut tmp[q * inner..(q + 1) * inner];
                for (d, s) in dst.iter_mut().zip(src) {
                    *d = *s * w;
                }
            }
            for j in 0..r {
                let dst = &mut out[(k + j * m) * inner..(k + j * m + 1) * inner];
                let w0 = table[0];
                let w1 = table[(j * w_r) % full];
                if r == 2 {
                    let (t0, t1) = tmp.split_at(inner);
                    for ((d, a), b) in dst.iter_mut().zip(t0).zip(&t1[..inner]) {
                        *d = *a * w0 + *b * w1;
                    }
                } else {
                    let w2 = table[(j * 2 * w_r) % full];
                    let (t0, rest) = tmp.split_at(inner);
                    let (t1, t2) = rest.split_at(inner);
                    for (((d, a), b), c) in dst.iter_mut().zip(t0).zip(t1).zip(&t2[..inner]) {
                        *d = *a * w0 + *b * w1 + *c * w2;
                    }
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn naive_dft(x: &[Complex64], sign: f64) -> Vec<Complex64> {
        let n = x.len();
        (0..n)
            .map(|t| {
                let mut acc = ZERO;
                for (s, &v) in x.iter().enumerate() {
                    let theta = sign * 2.0 * std::f64::consts::PI * (s * t % n) as f64 / n as f64;
                    acc += v * Complex64::new(theta.cos(), theta.sin());
                }
                acc
            })
            .collect()
    }

    fn random_line(n: usize, seed: u64) -> Vec<Complex64> {
        let mut g = crate::rng::SplitMix64::new(seed);
        (0..n)
            .map(|_| Complex64::new(g.next_centered(), g.next_centered()))
            .collect()
    }

    #[test]
    fn matches_naive_dft() {
        for &n in &[16, 24, 32, 48, 64, 96, 144, 192, 256] {
            assert!(supported_len(n));
            let plan = FftPlan::new(n);
            let x = random_line(n, n as u64);
            let mut got = vec![ZERO; n];
            plan.forward(&x, &mut got);
            let want = naive_dft(&x, -1.0);
            for (a, b) in got.iter().zip(&want) {
                assert!((a - b).norm_sqr().sqrt() < 1e-10, "n={n}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn round_trip() {
        for &n in &[16usize, 96, 108] {
            if !supported_len(n) {
                continue;
            }
            let plan = FftPlan::new(n);
            let x = random_line(n, 99 + n as u64);
            let mut spec = vec![ZERO; n];
            let mut back = vec![ZERO; n];
            plan.forward(&x, &mut spec);
            plan.inverse(&spec, &mut back);
            for (a, b) in back.iter().zip(&x) {
                assert!((a - b).norm_sqr().sqrt() < 1e-13);
            }
        }
    }

    #[test]
    fn batched_rows_match_scalar_lines() {
        let n = 48;
        let inner = 5;
        let plan = FftPlan::new(n);
        let slab = random_line(n * inner, 7);
        let mut out = vec![ZERO; n * inner];
        let mut tmp = vec![ZERO; 3 * inner];
        plan.forward_rows(&slab, &mut out, inner, &mut tmp);
        // compare column c against the scalar transform of that column
        for c in 0..inner {
            let col: Vec<Complex64> = (0..n).map(|t| slab[t * inner + c]).collect();
            let mut want = vec![ZERO; n];
            plan.forward(&col, &mut want);
            for t in 0..n {
                assert!((out[t * inner + c] - want[t]).norm_sqr().sqrt() < 1e-12);
            }
        }
        // inverse round trip
        let mut back = vec![ZERO; n * inner];
        plan.inverse_rows(&out, &mut back, inner, &mut tmp);
        for (a, b) in back.iter().zip(&slab) {
            assert!((a - b).norm_sqr().sqrt() < 1e-13);
        }
    }

    #[test]
    fn rejects_unsupported_lengths() {
        for &n in &[8usize, 20, 40, 81, 100, 512] {
            assert!(!supported_len(n), "{n} should be unsupported");
        }
        for &n in &[16usize, 32, 48, 64, 96, 128, 192, 256] {
            assert!(supported_len(n), "{n} should be supported");
        }
    }
}
