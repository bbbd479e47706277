use std::f64::consts::PI;

use nalgebra::DMatrix;

use super::matrix::{ComplexMatrix, HermitianMatrix, UnitaryMatrix, C64};
use super::spectral::{eig_hermitian, eig_unitary, scale_columns, EigenSystem};
use super::EPS_DD;
use crate::error::{Error, Result};

/// Angles this close to `−π` are moved to the `+π` side of the branch cut.
const BRANCH_SNAP: f64 = 1e-12;

/// Principal argument in `(−π, π]`, with `−1 ↦ +π`.
pub(crate) fn principal_angle(mu: C64) -> f64 {
    let t = mu.im.atan2(mu.re);
    if t <= -PI + BRANCH_SNAP {
        t + 2.0 * PI
    } else {
        t
    }
}

pub(crate) fn exp_from_eigen(e: &EigenSystem<f64>, t: f64) -> UnitaryMatrix {
    UnitaryMatrix::project(e.map_spectrum(|l| C64::from_polar(1.0, t * l)))
}

/// `e^{iz}`.
pub fn unitary_exp(z: &HermitianMatrix) -> Result<UnitaryMatrix> {
    Ok(exp_from_eigen(&eig_hermitian(z)?, 1.0))
}

/// Principal eigen-angles of a unitary together with its eigenbasis.
///
/// The angles `t_k ∈ (−π, π]` are the eigenvalues of the principal
/// logarithm, so every symmetric norm of the logarithm is a gauge of
/// `|t_k|` and needs no further factorization.
#[derive(Clone, Debug)]
pub struct LogSpectrum {
    basis: DMatrix<C64>,
    angles: Vec<f64>,
}

impl LogSpectrum {
    /// Principal angles, one per eigenvector, descending.
    pub fn angles(&self) -> &[f64] {
        &self.angles
    }

    pub fn basis(&self) -> &DMatrix<C64> {
        &self.basis
    }

    /// Singular values of the logarithm, descending.
    pub fn singular_values(&self) -> Vec<f64> {
        let mut s: Vec<f64> = self.angles.iter().map(|t| t.abs()).collect();
        s.sort_by(|a, b| b.total_cmp(a));
        s
    }

    /// `‖log u‖_∞`.
    pub fn spectral_radius(&self) -> f64 {
        self.angles.iter().fold(0.0, |m, t| m.max(t.abs()))
    }

    /// `‖u − 1‖_∞ = max_k |e^{it_k} − 1|`.
    pub fn gap_from_identity(&self) -> f64 {
        2.0 * (self.spectral_radius() / 2.0).sin()
    }

    pub fn to_hermitian(&self) -> HermitianMatrix {
        HermitianMatrix::from_spectrum(&self.basis, &self.angles)
    }
}

pub fn principal_log_spectrum(u: &UnitaryMatrix) -> Result<LogSpectrum> {
    let e = eig_unitary(u)?;
    let angles = e.spectrum().iter().map(|&m| principal_angle(m)).collect();
    Ok(LogSpectrum {
        basis: e.basis().clone(),
        angles,
    })
}

/// The Hermitian `z` with `e^{iz} = u` and spectrum in `(−π, π]`.
///
/// Unique whenever `‖u − 1‖_∞ < 2`; an eigenvalue `−1` is sent to `+π`.
pub fn principal_unitary_log(u: &UnitaryMatrix) -> Result<HermitianMatrix> {
    Ok(principal_log_spectrum(u)?.to_hermitian())
}

/// Fréchet derivative of `z ↦ e^{iz}` at a fixed Hermitian point.
///
/// In the eigenbasis `x = V diag(λ) V*` the derivative acts on a direction
/// `y` as `V (K ∘ V*yV) V*` with the divided-difference kernel
/// `K_jk = (e^{iλ_j} − e^{iλ_k}) / (λ_j − λ_k)`, whose diagonal limit is
/// `i·e^{iλ_j}`.
#[derive(Clone, Debug)]
pub struct ExpDerivative {
    basis: DMatrix<C64>,
    phases: Vec<C64>,
    kernel: DMatrix<C64>,
}

impl ExpDerivative {
    pub fn at(x: &HermitianMatrix) -> Result<Self> {
        let e = eig_hermitian(x)?;
        let lambda = e.spectrum();
        let n = lambda.len();
        let kernel = DMatrix::from_fn(n, n, |j, k| {
            let delta = lambda[j] - lambda[k];
            let mid = C64::from_polar(1.0, 0.5 * (lambda[j] + lambda[k]));
            if delta.abs() < EPS_DD {
                C64::i() * mid
            } else {
                // 2i·e^{i·mid}·sin(δ/2)/δ, free of cancellation.
                C64::i() * mid * (2.0 * (0.5 * delta).sin() / delta)
            }
        });
        let phases = lambda.iter().map(|&l| C64::from_polar(1.0, l)).collect();
        Ok(Self {
            basis: e.basis().clone(),
            phases,
            kernel,
        })
    }

    /// `e^{ix}` from the same factorization.
    pub fn exponential(&self) -> UnitaryMatrix {
        UnitaryMatrix::project(ComplexMatrix::wrap(
            scale_columns(&self.basis, &self.phases) * self.basis.adjoint(),
        ))
    }

    /// `d/dh e^{i(x + h·y)}` at `h = 0`; `y` may be any complex direction.
    pub fn apply(&self, y: &ComplexMatrix) -> ComplexMatrix {
        let v = &self.basis;
        let yt = v.adjoint() * y.as_matrix() * v;
        ComplexMatrix::wrap(v * yt.component_mul(&self.kernel) * v.adjoint())
    }

    /// Adjoint of [`apply`](Self::apply) for the inner product `Re Tr(a*b)`.
    pub fn apply_adjoint(&self, r: &ComplexMatrix) -> ComplexMatrix {
        let v = &self.basis;
        let rt = v.adjoint() * r.as_matrix() * v;
        ComplexMatrix::wrap(v * rt.component_mul(&self.kernel.map(|k| k.conj())) * v.adjoint())
    }
}

/// Derivative of `z ↦ e^{iz}` at `x` in the direction `y`.
pub fn dexp(x: &HermitianMatrix, y: &HermitianMatrix) -> Result<ComplexMatrix> {
    x.mat().check_same_dim(y.mat())?;
    Ok(ExpDerivative::at(x)?.apply(y.mat()))
}

/// `|e^{it} − 1| = √(2(1 − cos t))` for `t ∈ [−π, π]`.
pub fn chord_length(t: f64) -> Result<f64> {
    if !(-PI..=PI).contains(&t) {
        return Err(Error::Domain(format!("chord angle {t} outside [-pi, pi]")));
    }
    // 2|sin(t/2)| is the same quantity without cancellation near 0.
    Ok(2.0 * (0.5 * t).sin().abs())
}

/// `|t|·√(1 − t²/12)`, the lower bound satisfied by [`chord_length`].
pub fn chord_lower_bound(t: f64) -> f64 {
    t.abs() * (1.0 - t * t / 12.0).max(0.0).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn exp_of_zero_is_identity() {
        let u = unitary_exp(&HermitianMatrix::zeros(3)).unwrap();
        assert!(u.mat().distance(&ComplexMatrix::identity(3)) < 1e-15);
    }

    #[test]
    fn exp_of_diagonal_angles() {
        let u = unitary_exp(&HermitianMatrix::from_real_diagonal(&[FRAC_PI_2, -FRAC_PI_2])).unwrap();
        let want = ComplexMatrix::from_diagonal(&[c(0.0, 1.0), c(0.0, -1.0)]);
        assert!(u.mat().distance(&want) < 1e-15);
    }

    #[test]
    fn exp_of_pi_projection_is_reflection() {
        let v = [c(0.6, 0.0), c(0.0, 0.8)];
        let p = ComplexMatrix::from_fn(2, |i, j| v[i] * v[j].conj()).unwrap();
        let z = HermitianMatrix::new(p.scale(PI)).unwrap();
        let u = unitary_exp(&z).unwrap();
        let want = ComplexMatrix::identity(2) - p.scale(2.0);
        assert!(u.mat().distance(&want) < 1e-14);
    }

    #[test]
    fn log_examples() {
        let z = principal_unitary_log(&UnitaryMatrix::identity(2)).unwrap();
        assert!(z.mat().frobenius_norm() < 1e-15);

        let u = UnitaryMatrix::new(ComplexMatrix::from_diagonal(&[c(0.0, 1.0), c(0.0, -1.0)])).unwrap();
        let z = principal_unitary_log(&u).unwrap();
        let want = ComplexMatrix::from_real_diagonal(&[FRAC_PI_2, -FRAC_PI_2]);
        assert!(z.mat().distance(&want) < 1e-15);

        let u = UnitaryMatrix::new(ComplexMatrix::identity(2).scale(-1.0)).unwrap();
        let z = principal_unitary_log(&u).unwrap();
        assert!(z.mat().distance(&ComplexMatrix::from_real_diagonal(&[PI, PI])) < 1e-15);
    }

    #[test]
    fn negative_zero_imaginary_part_stays_on_plus_pi() {
        assert_eq!(principal_angle(c(-1.0, -0.0)), PI);
        assert!(principal_angle(c(-1.0, -1e-13)) > PI - 1e-12);
        assert!(principal_angle(c(-1.0, -1e-6)) < -PI + 1e-5);
    }

    #[test]
    fn dexp_at_zero_is_multiplication_by_i() {
        let y = HermitianMatrix::new(
            ComplexMatrix::from_row_slice(2, &[c(1.0, 0.0), c(0.5, -2.0), c(0.5, 2.0), c(-3.0, 0.0)]).unwrap(),
        )
        .unwrap();
        let d = dexp(&HermitianMatrix::zeros(2), &y).unwrap();
        assert!(d.distance(&y.mat().scale_complex(C64::i())) < 1e-15);
    }

    #[test]
    fn dexp_along_commuting_direction() {
        let x = HermitianMatrix::from_real_diagonal(&[0.4, -1.3, 2.0]);
        let y = HermitianMatrix::from_real_diagonal(&[1.0, 2.0, -0.5]);
        let d = dexp(&x, &y).unwrap();
        let ex = unitary_exp(&x).unwrap();
        let want = (ex.mat() * y.mat()).scale_complex(C64::i());
        assert!(d.distance(&want) < 1e-14);
    }

    #[test]
    fn chord_examples() {
        assert_eq!(chord_length(0.0).unwrap(), 0.0);
        assert!((chord_length(PI).unwrap() - 2.0).abs() < 1e-15);
        let half = chord_length(FRAC_PI_2).unwrap();
        assert!((half - 2f64.sqrt()).abs() < 1e-15);
        // π/2·√(1 − π²/48) ≈ 1.4023, below √2 ≈ 1.4142.
        assert!(half >= chord_lower_bound(FRAC_PI_2));
        assert!(matches!(chord_length(3.2), Err(Error::Domain(_))));
        assert!(chord_length(f64::NAN).is_err());
    }
}
