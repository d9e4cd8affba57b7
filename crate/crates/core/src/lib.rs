//! Numerical laboratory for the Kähler–Ricci flow on flat complex tori.
//!
//! The flow is integrated in its parabolic Monge–Ampère potential form on
//! T^n = C^n/(Z+iZ)^n (n = 1 or 2) with a pseudo-spectral discretization,
//! and the quantities tracked by the a-priori curvature estimates — the
//! reference trace S, the derivative norms Q and Q_m, curvature norms,
//! eigenvalue pinching — are monitored and checked against their evolution
//! identities and maximum-principle bounds along trajectories.
//!
//! This crate is `no_std` (with `alloc`): pure computation, no IO. The
//! companion `krf-cli` crate carries configuration, file formats and the
//! command-line harness.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod connection;
pub mod curvature;
pub mod error;
pub mod estimates;
pub mod fft;
pub mod flow;
pub mod field;
pub mod grid;
pub mod linalg;
pub mod metric;
pub mod monitor;
pub mod norm;
pub mod rng;
pub mod spectral;
pub mod suite;

pub use error::KrfError;
pub use field::{ScalarField, Slot, TensorField};
pub use grid::{make_grid, GridSpec};
pub use field::ScalarField as Field;
pub use metric::{pinch_eigenvalues, MetricField, PinchReport};
