//! Dense complex matrices, validated Hermitian/unitary wrappers, spectral
//! decompositions, and the exponential map `z ↦ e^{iz}` from Hermitian
//! matrices onto the unitary group together with its principal inverse and
//! its Fréchet derivative.

mod functions;
mod matrix;
mod spectral;

pub use functions::{
    chord_length, chord_lower_bound, dexp, principal_log_spectrum, principal_unitary_log,
    unitary_exp, ExpDerivative, LogSpectrum,
};
pub use matrix::{ComplexMatrix, HermitianMatrix, UnitaryMatrix, C64};
pub use spectral::{eig_hermitian, eig_unitary, EigenSystem};

/// Relative Hermitian defect tolerated by [`HermitianMatrix::new`].
pub const EPS_HERM: f64 = 1e-10;
/// Unitarity defect (per `√n`) tolerated by [`UnitaryMatrix::new`].
pub const EPS_UNIT: f64 = 1e-10;
/// Tolerance for projection identities (idempotent, orthogonal, complete).
pub const EPS_PROJ: f64 = 1e-9;
/// Tolerance for spectral reconstruction.
pub const EPS_RECON: f64 = 1e-9;
/// Below this eigenvalue gap the divided-difference kernel uses its limit.
pub const EPS_DD: f64 = 1e-7;
/// Relative distance under which eigenvalues share one spectral projection.
pub const EPS_CLUSTER: f64 = 1e-8;
