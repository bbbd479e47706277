use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::Result;
use crate::matcore::{eig_hermitian, ComplexMatrix, HermitianMatrix, UnitaryMatrix, C64};

/// The generator every trial draws from: stream `trial` of the ChaCha8
/// generator keyed by `seed`. Streams are independent, so trials can run in
/// any order.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

fn normal_c64(rng: &mut impl Rng) -> C64 {
    C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Complex Ginibre matrix with standard normal real and imaginary parts.
pub fn ginibre(rng: &mut impl Rng, n: usize) -> ComplexMatrix {
    ComplexMatrix::wrap(DMatrix::from_fn(n, n, |_, _| normal_c64(rng)))
}

/// Hermitian matrix from the symmetrized Ginibre ensemble, rescaled so that
/// `‖h‖_∞ = target`.
pub fn random_hermitian(rng: &mut impl Rng, n: usize, target: f64) -> Result<HermitianMatrix> {
    let g = ginibre(rng, n);
    let h = HermitianMatrix::symmetrize(g);
    let r = eig_hermitian(&h)?.spectral_radius();
    Ok(if r > 0.0 { h.scale(target / r) } else { h })
}

/// Haar-distributed unitary: QR of a Ginibre matrix with the phases of
/// `diag(R)` moved into `Q`.
pub fn haar_unitary(rng: &mut impl Rng, n: usize) -> UnitaryMatrix {
    let qr = ginibre(rng, n).into_matrix().qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { C64::new(1.0, 0.0) };
        q.column_mut(j).iter_mut().for_each(|x| *x *= phase);
    }
    UnitaryMatrix::project(ComplexMatrix::wrap(q))
}

/// Positive semidefinite `g·g*` normalized to operator norm 1.
pub fn random_positive(rng: &mut impl Rng, n: usize) -> Result<HermitianMatrix> {
    let g = ginibre(rng, n);
    let p = HermitianMatrix::symmetrize(&g * g.adjoint());
    let r = eig_hermitian(&p)?.spectral_radius();
    Ok(p.scale(1.0 / r))
}
