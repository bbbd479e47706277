use nalgebra::{DMatrix, DVector};

use super::matrix::{ComplexMatrix, HermitianMatrix, UnitaryMatrix, C64};
use super::{EPS_CLUSTER, EPS_RECON};
use crate::error::{Error, Result};

/// Spectral decomposition `Σ λ_k p_k` over mutually orthogonal projections.
///
/// The orthonormal eigenvectors are kept column-wise in `basis`, grouped by
/// cluster; `spectrum` holds one eigenvalue per column and `values` one
/// (averaged) eigenvalue per cluster. Eigenvalues closer than
/// [`EPS_CLUSTER`] share a projection.
#[derive(Clone, Debug)]
pub struct EigenSystem<T> {
    basis: DMatrix<C64>,
    spectrum: Vec<T>,
    values: Vec<T>,
    multiplicities: Vec<usize>,
}

impl<T: Copy> EigenSystem<T> {
    pub fn dim(&self) -> usize {
        self.basis.nrows()
    }

    /// One eigenvalue per projection.
    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn multiplicities(&self) -> &[usize] {
        &self.multiplicities
    }

    /// Eigenvalue of every basis column, repeated according to multiplicity.
    pub fn spectrum(&self) -> &[T] {
        &self.spectrum
    }

    /// Orthonormal eigenvectors, grouped by projection.
    pub fn basis(&self) -> &DMatrix<C64> {
        &self.basis
    }

    fn cluster_range(&self, k: usize) -> std::ops::Range<usize> {
        let start: usize = self.multiplicities[..k].iter().sum();
        start..start + self.multiplicities[k]
    }

    /// Orthonormal basis of the range of the `k`-th projection.
    pub fn eigenvectors(&self, k: usize) -> DMatrix<C64> {
        let r = self.cluster_range(k);
        self.basis.columns(r.start, r.len()).into_owned()
    }

    pub fn projection(&self, k: usize) -> ComplexMatrix {
        let v = self.eigenvectors(k);
        ComplexMatrix::wrap(&v * v.adjoint())
    }

    pub fn projections(&self) -> Vec<ComplexMatrix> {
        (0..self.values.len()).map(|k| self.projection(k)).collect()
    }

    /// `Σ_j f(λ_j) v_j v_j*` over the per-column spectrum.
    pub fn map_spectrum(&self, f: impl Fn(T) -> C64) -> ComplexMatrix {
        let d: Vec<C64> = self.spectrum.iter().map(|&l| f(l)).collect();
        ComplexMatrix::wrap(scale_columns(&self.basis, &d) * self.basis.adjoint())
    }

    /// `Σ_k g(λ_k) p_k` over the clustered values.
    pub fn map_values(&self, g: impl Fn(T) -> C64) -> ComplexMatrix {
        let mut d = Vec::with_capacity(self.spectrum.len());
        for (v, &m) in self.values.iter().zip(&self.multiplicities) {
            d.extend(std::iter::repeat_n(g(*v), m));
        }
        ComplexMatrix::wrap(scale_columns(&self.basis, &d) * self.basis.adjoint())
    }
}

impl EigenSystem<f64> {
    /// `Σ_k λ_k p_k`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        self.map_values(|l| C64::new(l, 0.0))
    }

    /// Largest eigenvalue modulus.
    pub fn spectral_radius(&self) -> f64 {
        self.spectrum.iter().fold(0.0, |m, l| m.max(l.abs()))
    }
}

impl EigenSystem<C64> {
    /// `Σ_k μ_k p_k`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        self.map_values(|m| m)
    }
}

pub(crate) fn scale_columns(basis: &DMatrix<C64>, d: &[C64]) -> DMatrix<C64> {
    let mut out = basis.clone();
    for (j, mut col) in out.column_iter_mut().enumerate() {
        col *= d[j];
    }
    out
}

/// Eigenpairs of a Hermitian matrix, eigenvalues in descending order.
pub(crate) fn hermitian_eigenpairs(h: &DMatrix<C64>) -> Result<(DMatrix<C64>, Vec<f64>)> {
    let n = h.nrows();
    let scale = h.norm().max(1.0);
    let eig = h
        .clone()
        .try_symmetric_eigen(f64::EPSILON, 1000 * n.max(10))
        .ok_or(Error::EigenFailure { residual: h.norm() })?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let values: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let basis = DMatrix::from_fn(n, n, |i, j| eig.eigenvectors[(i, order[j])]);
    let d: Vec<C64> = values.iter().map(|&l| C64::new(l, 0.0)).collect();
    let residual = (scale_columns(&basis, &d) * basis.adjoint() - h).norm();
    if residual > EPS_RECON * scale {
        return Err(Error::EigenFailure { residual });
    }
    Ok((basis, values))
}

/// Splits a sorted sequence into maximal runs whose consecutive gaps are `≤ tol`.
fn chain_clusters(sorted: &[f64], tol: f64) -> Vec<std::ops::Range<usize>> {
    let mut out = Vec::new();
    let mut start = 0;
    for i in 1..=sorted.len() {
        if i == sorted.len() || (sorted[i] - sorted[i - 1]).abs() > tol {
            out.push(start..i);
            start = i;
        }
    }
    out
}

/// Spectral decomposition of a Hermitian matrix; eigenvalues descending.
pub fn eig_hermitian(x: &HermitianMatrix) -> Result<EigenSystem<f64>> {
    let (basis, spectrum) = hermitian_eigenpairs(x.mat().as_matrix())?;
    let radius = spectrum.iter().fold(0.0f64, |m, l| m.max(l.abs()));
    let clusters = chain_clusters(&spectrum, EPS_CLUSTER * radius.max(1.0));
    let values = clusters
        .iter()
        .map(|r| spectrum[r.clone()].iter().sum::<f64>() / r.len() as f64)
        .collect();
    let multiplicities = clusters.iter().map(|r| r.len()).collect();
    Ok(EigenSystem {
        basis,
        spectrum,
        values,
        multiplicities,
    })
}

/// Spectral decomposition of a unitary matrix.
///
/// Eigenvalues are normalized to the unit circle and ordered by principal
/// angle, descending; the eigenvalue `−1` is assigned angle `+π`.
pub fn eig_unitary(u: &UnitaryMatrix) -> Result<EigenSystem<C64>> {
    let m = u.mat().as_matrix();
    let (basis, raw) = normal_eigenpairs(m)?;
    let mut pairs: Vec<(f64, usize)> = raw
        .iter()
        .enumerate()
        .map(|(i, &z)| (super::functions::principal_angle(z), i))
        .collect();
    pairs.sort_by(|a, b| b.0.total_cmp(&a.0));
    let n = m.nrows();
    let basis = DMatrix::from_fn(n, n, |i, j| basis[(i, pairs[j].1)]);
    let spectrum: Vec<C64> = pairs.iter().map(|&(_, i)| raw[i] / raw[i].norm()).collect();
    let angles: Vec<f64> = pairs.iter().map(|p| p.0).collect();
    let clusters = chain_clusters(&angles, EPS_CLUSTER);
    let values = clusters
        .iter()
        .map(|r| {
            let s: C64 = spectrum[r.clone()].iter().sum();
            s / s.norm()
        })
        .collect();
    let multiplicities = clusters.iter().map(|r| r.len()).collect();
    let residual = (scale_columns(&basis, &spectrum) * basis.adjoint() - m).norm();
    if residual > EPS_RECON * (n as f64).sqrt() {
        return Err(Error::EigenFailure { residual });
    }
    Ok(EigenSystem {
        basis,
        spectrum,
        values,
        multiplicities,
    })
}

/// Relative gap separating clusters inside the normal-matrix splitter.
const SPLIT_GAP: f64 = 1e-4;
/// Spread below which a restricted block is treated as a scalar.
const SCALAR_SPREAD: f64 = 1e-13;
const MAX_SPLIT_DEPTH: usize = 64;

/// Eigenpairs of a normal matrix via Hermitian solves only.
///
/// The restriction `B = W*·m·W` to a candidate invariant subspace is centred
/// and rescaled; its Hermitian part separates eigenvalues by real part, and
/// inside each real-part cluster the skew part separates them by imaginary
/// part. Blocks that are still degenerate in both parts are split again on
/// the rescaled remainder until they are scalar. Eigenvalues are Rayleigh
/// quotients against the full matrix, so near-degenerate mixing costs only
/// rounding error in the reconstruction.
pub(crate) fn normal_eigenpairs(m: &DMatrix<C64>) -> Result<(DMatrix<C64>, Vec<C64>)> {
    let n = m.nrows();
    let mut vectors: Vec<DVector<C64>> = Vec::with_capacity(n);
    let mut values: Vec<C64> = Vec::with_capacity(n);
    split_normal(m, DMatrix::identity(n, n), 0, &mut vectors, &mut values)?;
    let basis = DMatrix::from_columns(&vectors);
    Ok((basis, values))
}

fn split_normal(
    m: &DMatrix<C64>,
    w: DMatrix<C64>,
    depth: usize,
    vectors: &mut Vec<DVector<C64>>,
    values: &mut Vec<C64>,
) -> Result<()> {
    let k = w.ncols();
    let b = w.adjoint() * m * &w;
    if k == 1 {
        values.push(b[(0, 0)]);
        vectors.push(w.column(0).into_owned());
        return Ok(());
    }
    let mean = b.trace() / k as f64;
    let centred = &b - DMatrix::<C64>::identity(k, k) * mean;
    let spread = centred.norm();
    if spread <= SCALAR_SPREAD {
        for j in 0..k {
            let v = w.column(j).into_owned();
            values.push(rayleigh(m, &v));
            vectors.push(v);
        }
        return Ok(());
    }
    if depth >= MAX_SPLIT_DEPTH {
        return Err(Error::EigenFailure { residual: spread });
    }
    let adj = centred.adjoint();
    let re_part = (&centred + &adj) * C64::new(0.5 / spread, 0.0);
    let im_part = (&centred - &adj) * C64::new(0.0, -0.5 / spread);

    let (vr, lr) = hermitian_eigenpairs(&re_part)?;
    for r in chain_clusters(&lr, SPLIT_GAP) {
        let wr = &w * vr.columns(r.start, r.len());
        if r.len() == 1 {
            let v = wr.column(0).into_owned();
            values.push(rayleigh(m, &v));
            vectors.push(v);
            continue;
        }
        let vr_block = vr.columns(r.start, r.len());
        let im_block = vr_block.adjoint() * &im_part * vr_block;
        let (vi, li) = hermitian_eigenpairs(&im_block)?;
        for s in chain_clusters(&li, SPLIT_GAP) {
            let ws = &wr * vi.columns(s.start, s.len());
            if s.len() == 1 {
                let v = ws.column(0).into_owned();
                values.push(rayleigh(m, &v));
                vectors.push(v);
            } else {
                split_normal(m, ws, depth + 1, vectors, values)?;
            }
        }
    }
    Ok(())
}

fn rayleigh(m: &DMatrix<C64>, v: &DVector<C64>) -> C64 {
    (v.adjoint() * m * v)[(0, 0)]
}
