//! Symmetric norms as gauge functions of singular values.
//!
//! Every built-in norm is normalized so that a rank-one projection has norm
//! one; consequently `‖a‖_∞ ≤ ‖a‖_φ` for every `φ`. Duals are computed in
//! closed form where one is known and by numeric maximization over the
//! gauge unit ball otherwise.

mod functional;
mod gauge;
mod spec;

pub use functional::{norming_functional, pinching, NormingFunctional};
pub use gauge::{numeric_dual_gauge, DualSolverConfig};
pub use spec::{check_gauge_axioms, CustomGauge, NormKind, NormSpec};

use crate::error::{Error, Result};
use crate::matcore::{eig_hermitian, ComplexMatrix, HermitianMatrix};

/// Singular values, descending.
pub fn singular_values(a: &ComplexMatrix) -> Result<Vec<f64>> {
    let n = a.dim();
    let svd = a
        .as_matrix()
        .clone()
        .try_svd(false, false, f64::EPSILON, 1000 * n.max(10))
        .ok_or(Error::SvdFailure)?;
    let mut s: Vec<f64> = svd.singular_values.iter().copied().collect();
    s.sort_by(|x, y| y.total_cmp(x));
    Ok(s)
}

/// Largest singular value.
pub fn operator_norm(a: &ComplexMatrix) -> Result<f64> {
    Ok(singular_values(a)?[0])
}

/// `‖a‖_φ`.
pub fn norm_phi(a: &ComplexMatrix, phi: &NormSpec) -> Result<f64> {
    Ok(phi.gauge(&singular_values(a)?))
}

/// `‖x‖_φ` for Hermitian `x`, read off its eigenvalues.
pub fn norm_hermitian(x: &HermitianMatrix, phi: &NormSpec) -> Result<f64> {
    Ok(phi.gauge(eig_hermitian(x)?.spectrum()))
}

/// `‖a‖_φ′ = sup{|Tr(ab)| : ‖b‖_φ ≤ 1}`.
pub fn dual_norm(a: &ComplexMatrix, phi: &NormSpec) -> Result<f64> {
    dual_norm_with(a, phi, &DualSolverConfig::default())
}

pub fn dual_norm_with(a: &ComplexMatrix, phi: &NormSpec, cfg: &DualSolverConfig) -> Result<f64> {
    phi.dual_gauge_with(&singular_values(a)?, cfg)
}

/// `‖a‖_φ″`, the dual of the dual norm.
pub fn bidual_norm(a: &ComplexMatrix, phi: &NormSpec) -> Result<f64> {
    bidual_norm_with(a, phi, &DualSolverConfig::default())
}

pub fn bidual_norm_with(a: &ComplexMatrix, phi: &NormSpec, cfg: &DualSolverConfig) -> Result<f64> {
    phi.bidual_gauge_with(&singular_values(a)?, cfg)
}
