//! Complex-valued fields on the grid: scalars and tensors with a fixed
//! holomorphic / anti-holomorphic index signature.
//!
//! All fields store full complex values even when mathematically real;
//! realness is asserted by callers, never assumed. Fields are immutable
//! snapshots in the sense that every operation returns a fresh field.

use alloc::vec;
use alloc::vec::Vec;
use num_complex::Complex64;

use crate::grid::GridSpec;

/// One scalar sample per grid point.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarField {
    spec: GridSpec,
    values: Vec<Complex64>,
}

impl ScalarField {
    pub fn zeros(spec: &GridSpec) -> Self {
        Self {
            spec: spec.clone(),
            values: vec![Complex64::new(0.0, 0.0); spec.points()],
        }
    }

    pub fn constant(spec: &GridSpec, v: Complex64) -> Self {
        Self {
            spec: spec.clone(),
            values: vec![v; spec.points()],
        }
    }

    pub fn from_values(spec: &GridSpec, values: Vec<Complex64>) -> Self {
        assert_eq!(values.len(), spec.points(), "value count must match grid");
        Self {
            spec: spec.clone(),
            values,
        }
    }

    /// Sample a function of the flat point index.
    pub fn from_fn(spec: &GridSpec, mut f: impl FnMut(usize) -> Complex64) -> Self {
        let values = (0..spec.points()).map(|p| f(p)).collect();
        Self {
            spec: spec.clone(),
            values,
        }
    }

    pub fn spec(&self) -> &GridSpec {
        &self.spec
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [Complex64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    pub fn map(&self, f: impl Fn(Complex64) -> Complex64) -> Self {
        Self {
            spec: self.spec.clone(),
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }

    pub fn zip(&self, other: &Self, f: impl Fn(Complex64, Complex64) -> Complex64) -> Self {
        assert_eq!(self.spec, other.spec, "fields live on different grids");
        Self {
            spec: self.spec.clone(),
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a - b)
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a * b)
    }

    pub fn scale(&self, s: f64) -> Self {
        self.map(|v| v * s)
    }

    pub fn conj(&self) -> Self {
        self.map(|v| v.conj())
    }

    pub fn max_abs(&self) -> f64 {
        self.values
            .iter()
            .map(|v| libm::sqrt(v.norm_sqr()))
            .fold(0.0, f64::max)
    }

    pub fn max_imag_abs(&self) -> f64 {
        self.values
            .iter()
            .map(|v| libm::fabs(v.im))
            .fold(0.0, f64::max)
    }

    pub fn max_real(&self) -> f64 {
        self.values.iter().map(|v| v.re).fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn min_real(&self) -> f64 {
        self.values.iter().map(|v| v.re).fold(f64::INFINITY, f64::min)
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|v| v.re.is_finite() && v.im.is_finite())
    }
}

/// Index slot type of a tensor field.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Slot {
    Holo,
    Anti,
}

impl Slot {
    pub fn conjugate(self) -> Self {
        match self {
            Slot::Holo => Slot::Anti,
            Slot::Anti => Slot::Holo,
        }
    }
}

/// Tensor field with all-lower indices: one complex component array per
/// multi-index over {1..n} per slot. Components are stored component-major
/// so each component is a contiguous per-point slice.
#[derive(Debug, Clone)]
pub struct TensorField {
    spec: GridSpec,
    signature: Vec<Slot>,
    values: Vec<Complex64>,
}

impl TensorField {
    pub fn zeros(spec: &GridSpec, signature: &[Slot]) -> Self {
        let comps = spec.dim().pow(signature.len() as u32);
        Self {
            spec: spec.clone(),
            signature: signature.to_vec(),
            values: vec![Complex64::new(0.0, 0.0); comps * spec.points()],
        }
    }

    pub fn spec(&self) -> &GridSpec {
        &self.spec
    }

    pub fn signature(&self) -> &[Slot] {
        &self.signature
    }

    pub fn rank(&self) -> usize {
        self.signature.len()
    }

    /// Number of components n^rank.
    pub fn components(&self) -> usize {
        self.spec.dim().pow(self.rank() as u32)
    }

    /// Flat component index of a multi-index (row-major, first slot slowest).
    pub fn comp_index(&self, idx: &[usize]) -> usize {
        debug_assert_eq!(idx.len(), self.rank());
        let n = self.spec.dim();
        idx.iter().fold(0, |acc, &i| {
            debug_assert!(i < n);
            acc * n + i
        })
    }

    /// Decode a flat component index into a multi-index.
    pub fn decode(&self, mut c: usize, out: &mut [usize]) {
        let n = self.spec.dim();
        for slot in (0..self.rank()).rev() {
            out[slot] = c % n;
            c /= n;
        }
    }

    pub fn component(&self, idx: &[usize]) -> &[Complex64] {
        self.component_flat(self.comp_index(idx))
    }

    pub fn component_flat(&self, c: usize) -> &[Complex64] {
        let p = self.spec.points();
        &self.values[c * p..(c + 1) * p]
    }

    pub fn component_flat_mut(&mut self, c: usize) -> &mut [Complex64] {
        let p = self.spec.points();
        &mut self.values[c * p..(c + 1) * p]
    }

    pub fn set_component(&mut self, idx: &[usize], data: &[Complex64]) {
        let c = self.comp_index(idx);
        self.component_flat_mut(c).copy_from_slice(data);
    }

    /// Max |entry| over all components and points.
    pub fn max_abs(&self) -> f64 {
        self.values
            .iter()
            .map(|v| libm::sqrt(v.norm_sqr()))
            .fold(0.0, f64::max)
    }

    /// Max |entry| of the pointwise difference of two equally-shaped tensors.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.signature, other.signature);
        assert_eq!(self.spec, other.spec);
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| libm::sqrt((a - b).norm_sqr()))
            .fold(0.0, f64::max)
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            spec: self.spec.clone(),
            signature: self.signature.clone(),
            values: self.values.iter().map(|&v| v * s).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.signature, other.signature);
        assert_eq!(self.spec, other.spec);
        Self {
            spec: self.spec.clone(),
            signature: self.signature.clone(),
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(&a, &b)| a - b)
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::make_grid;

    #[test]
    fn component_indexing_round_trips() {
        let spec = make_grid(2, 16).unwrap();
        let t = TensorField::zeros(&spec, &[Slot::Holo, Slot::Anti, Slot::Holo]);
        assert_eq!(t.components(), 8);
        let mut idx = [0usize; 3];
        for c in 0..t.components() {
            t.decode(c, &mut idx);
            assert_eq!(t.comp_index(&idx), c);
        }
    }

    #[test]
    fn scalar_arithmetic() {
        let spec = make_grid(1, 16).unwrap();
        let a = ScalarField::constant(&spec, Complex64::new(2.0, 0.0));
        let b = ScalarField::constant(&spec, Complex64::new(0.0, 3.0));
        let c = a.add(&b);
        assert_eq!(c.values()[0], Complex64::new(2.0, 3.0));
        assert!((c.max_abs() - 13f64.sqrt()).abs() < 1e-15);
        assert_eq!(c.max_imag_abs(), 3.0);
    }
}
