//! Symmetric-norm geometry of the finite-dimensional unitary group.
//!
//! Symmetric (unitarily invariant) norms are evaluated as symmetric gauge
//! functions of singular values. Geodesic segments `t ↦ u·e^{itz}` with
//! Hermitian `z`, `‖z‖_∞ ≤ π`, realize the rectifiable distance
//! `d_φ(u, v) = ‖z‖_φ` for every such norm. In finite dimension every
//! symmetric norm is finite on every matrix, so the norm ideal is the whole
//! matrix algebra and needs no separate modelling.
//!
//! - [`matcore`]: matrix types, spectral decompositions, `e^{iz}`, its
//!   principal inverse and derivative.
//! - [`norms`]: gauges, duals, norming functionals, pinchings.
//! - [`geodesy`]: segments, paths, lengths, distances and the geometric checks.
//! - [`lab`]: seeded randomized verification suites and CSV reports.

pub mod error;
pub mod geodesy;
pub mod lab;
pub mod matcore;
pub mod norms;

pub use error::{Error, Result};
