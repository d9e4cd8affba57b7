//! Periodic grid on the torus C^n / (Z + iZ)^n.
//!
//! Real coordinates are ordered (x^1, y^1, ..., x^n, y^n), each with period 1
//! and N uniform samples, so the grid holds N^(2n) points stored row-major
//! (x^1 slowest, y^n fastest). Complex axis j (0-based) owns real axes 2j
//! and 2j+1.

use alloc::vec::Vec;

use crate::error::KrfError;
use crate::fft;

/// Discretization of the flat torus: complex dimension, per-axis resolution
/// and the shared integer wavenumber table in standard Fourier order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GridSpec {
    n: usize,
    n_res: usize,
    points: usize,
    strides: [usize; 4],
    wavenumbers: Vec<i64>,
}

/// Build a grid. `n` is the complex dimension (1 or 2); `n_res` the number of
/// samples per real axis.
pub fn make_grid(n: usize, n_res: usize) -> Result<GridSpec, KrfError> {
    if n == 0 || n > 2 {
        return Err(KrfError::InvalidDimension { n });
    }
    if !fft::supported_len(n_res) {
        return Err(KrfError::InvalidResolution { n_res });
    }
    let half = n_res / 2;
    let wavenumbers = (0..n_res)
        .map(|i| {
            if i < half {
                i as i64
            } else {
                i as i64 - n_res as i64
            }
        })
        .collect();
    let axes = 2 * n;
    let mut strides = [0usize; 4];
    for (a, s) in strides.iter_mut().enumerate().take(axes) {
        *s = n_res.pow((axes - 1 - a) as u32);
    }
    Ok(GridSpec {
        n,
        n_res,
        points: n_res.pow(axes as u32),
        strides,
        wavenumbers,
    })
}

impl GridSpec {
    /// Complex dimension.
    pub fn dim(&self) -> usize {
        self.n
    }

    /// Samples per real axis.
    pub fn res(&self) -> usize {
        self.n_res
    }

    /// Number of real axes (2n).
    pub fn axes(&self) -> usize {
        2 * self.n
    }

    /// Total grid points N^(2n).
    #[inline]
    pub fn points(&self) -> usize {
        self.points
    }

    /// Stride of real axis `a` in the flat row-major layout.
    #[inline]
    pub fn stride(&self, a: usize) -> usize {
        self.strides[a]
    }

    /// Integer wavenumber of per-axis index `i`, standard Fourier order
    /// [0, 1, ..., N/2-1, -N/2, ..., -1].
    pub fn wavenumber(&self, i: usize) -> i64 {
        self.wavenumbers[i]
    }

    /// Per-axis index of flat point `p` along real axis `a`.
    pub fn axis_index(&self, p: usize, a: usize) -> usize {
        (p / self.stride(a)) % self.n_res
    }

    /// Coordinate of flat point `p` along real axis `a` (in [0, 1)).
    pub fn coord(&self, p: usize, a: usize) -> f64 {
        self.axis_index(p, a) as f64 / self.n_res as f64
    }

    /// Real axis carrying x^j for complex axis `j` (0-based).
    pub fn x_axis(&self, j: usize) -> usize {
        2 * j
    }

    /// Real axis carrying y^j for complex axis `j` (0-based).
    pub fn y_axis(&self, j: usize) -> usize {
        2 * j + 1
    }

    /// Largest band limit that survives the 2/3 dealias rule.
    pub fn dealias_limit(&self) -> usize {
        self.n_res / 3
    }
}
