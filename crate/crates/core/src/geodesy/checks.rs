use std::f64::consts::PI;

use super::{geodesic_distance, ALIGN_TOL, PI_SLACK};
use crate::error::{Error, Result};
use crate::matcore::{eig_hermitian, principal_log_spectrum, unitary_exp, HermitianMatrix, UnitaryMatrix};
use crate::norms::{norm_phi, NormSpec};

/// Which form of the exponent triangle inequality applies to a triple.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Hypothesis {
    /// `‖z‖_∞ < π`.
    Strict,
    /// `‖z‖_∞ = π` but `‖y‖_∞ < π`.
    Relaxed,
    /// Neither form applies; `holds` is reported but not guaranteed.
    Violated,
}

#[derive(Clone, Debug)]
pub struct TriangleRecord {
    pub z: HermitianMatrix,
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
    pub hypothesis: Hypothesis,
}

/// Compares `‖z‖_φ` with `‖x‖_φ + ‖y‖_φ` where `e^{iz} = e^{ix}e^{iy}`.
pub fn triangle_exponent_inequality(x: &HermitianMatrix, y: &HermitianMatrix, phi: &NormSpec) -> Result<TriangleRecord> {
    if x.dim() != y.dim() {
        return Err(Error::DimensionMismatch(x.dim(), y.dim()));
    }
    let ex = eig_hermitian(x)?;
    let ey = eig_hermitian(y)?;
    let prod = unitary_exp(x)?.compose(&unitary_exp(y)?);
    let zs = principal_log_spectrum(&prod)?;
    let lhs = phi.gauge(zs.angles());
    let rhs = phi.gauge(ex.spectrum()) + phi.gauge(ey.spectrum());
    let hypothesis = if zs.spectral_radius() < PI - PI_SLACK {
        Hypothesis::Strict
    } else if ey.spectral_radius() < PI {
        Hypothesis::Relaxed
    } else {
        Hypothesis::Violated
    };
    Ok(TriangleRecord { z: zs.to_hermitian(), lhs, rhs, holds: lhs <= rhs + 1e-9, hypothesis })
}

/// `√(1 − π²/12)`.
pub fn metric_equivalence_constant() -> f64 {
    (1.0 - PI * PI / 12.0).sqrt()
}

#[derive(Clone, Copy, Debug)]
pub struct EquivalenceRecord {
    pub lower: f64,
    pub mid: f64,
    pub upper: f64,
    pub holds: bool,
}

/// Sandwiches `‖u − v‖_φ` between multiples of `d_φ(u, v)`.
pub fn metric_equivalence_check(u: &UnitaryMatrix, v: &UnitaryMatrix, phi: &NormSpec) -> Result<EquivalenceRecord> {
    let upper = geodesic_distance(u, v, phi)?;
    let mid = norm_phi(&(u.mat() - v.mat()), phi)?;
    let lower = metric_equivalence_constant() * upper;
    Ok(EquivalenceRecord { lower, mid, upper, holds: lower <= mid + 1e-10 && mid <= upper + 1e-10 })
}

#[derive(Clone, Copy, Debug)]
pub struct AlignmentRecord {
    pub aligned: bool,
    /// Position of `w` along the segment from `u` to `v`, when aligned.
    pub t0: Option<f64>,
    /// `d_φ(u, w) + d_φ(w, v) − d_φ(u, v)`.
    pub defect: f64,
}

/// Decides whether `w` lies on the segment from `u` to `v`.
///
/// For a rotund norm a vanishing triangle defect forces `w = u·e^{it₀z}`.
/// Non-rotund norms and antipodal pairs are refused rather than answered.
pub fn alignment_test(u: &UnitaryMatrix, v: &UnitaryMatrix, w: &UnitaryMatrix, phi: &NormSpec) -> Result<AlignmentRecord> {
    if !phi.is_rotund() {
        return Err(Error::NotRotund { norm: phi.label() });
    }
    if u.dim() != v.dim() || u.dim() != w.dim() {
        return Err(Error::DimensionMismatch(u.dim(), if u.dim() != v.dim() { v.dim() } else { w.dim() }));
    }
    let zs = principal_log_spectrum(&u.between(v))?;
    let gap = zs.gap_from_identity();
    if gap >= 2.0 - PI_SLACK {
        return Err(Error::Antipodal { gap });
    }
    let xs = principal_log_spectrum(&u.between(w))?;
    let nz = phi.gauge(zs.angles());
    let nx = phi.gauge(xs.angles());
    let defect = nx + geodesic_distance(w, v, phi)? - nz;
    let t0 = if nz > 0.0 { nx / nz } else { 0.0 };
    let residual = (xs.to_hermitian().mat() - zs.to_hermitian().mat().scale(t0)).frobenius_norm();
    let aligned = residual <= ALIGN_TOL && t0 <= 1.0 + ALIGN_TOL;
    Ok(AlignmentRecord { aligned, t0: aligned.then_some(t0.min(1.0)), defect })
}

const MAX_SIGN_PATTERNS: usize = 8;

/// Logarithms of `u` of operator norm `π`, one per sign choice on a basis of
/// the `−1` eigenspace (at most eight). The first entry is the principal
/// logarithm.
pub fn antipodal_logs(u: &UnitaryMatrix) -> Result<Vec<HermitianMatrix>> {
    let ls = principal_log_spectrum(u)?;
    let angles = ls.angles();
    let flip: Vec<usize> = (0..angles.len()).filter(|&k| angles[k].abs() >= PI - 1e-8).collect();
    if flip.is_empty() {
        return Err(Error::Domain("−1 is not an eigenvalue".into()));
    }
    let patterns = 1usize.checked_shl(flip.len() as u32).unwrap_or(usize::MAX).min(MAX_SIGN_PATTERNS);
    Ok((0..patterns)
        .map(|mask| {
            let mut a = angles.to_vec();
            for (bit, &k) in flip.iter().enumerate() {
                let t = angles[k].abs();
                a[k] = if mask >> bit & 1 == 1 { t - 2.0 * PI } else { t };
            }
            HermitianMatrix::from_spectrum(ls.basis(), &a)
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcore::{unitary_exp, ComplexMatrix};

    fn s2() -> NormSpec {
        NormSpec::schatten(2.0).unwrap()
    }

    #[test]
    fn equivalence_constant_value() {
        let c = metric_equivalence_constant();
        assert!((c * c - (1.0 - PI * PI / 12.0)).abs() < 1e-15);
        assert!(c > 0.42 && c < 0.43);
    }

    #[test]
    fn antipodal_equivalence_example() {
        let i = UnitaryMatrix::identity(2);
        let m = UnitaryMatrix::from_angles(&[PI, PI]);
        let r = metric_equivalence_check(&i, &m, &NormSpec::operator()).unwrap();
        assert!((r.mid - 2.0).abs() < 1e-14);
        assert!((r.upper - PI).abs() < 1e-14);
        assert!(r.holds);
        let same = metric_equivalence_check(&m, &m, &s2()).unwrap();
        assert_eq!((same.lower, same.mid, same.upper), (0.0, 0.0, 0.0));
    }

    #[test]
    fn triangle_trivial_cases() {
        let zero = HermitianMatrix::zeros(2);
        let r = triangle_exponent_inequality(&zero, &zero, &s2()).unwrap();
        assert_eq!((r.lhs, r.rhs, r.holds, r.hypothesis), (0.0, 0.0, true, Hypothesis::Strict));
        let x = HermitianMatrix::from_real_diagonal(&[0.5, 0.25]);
        let y = HermitianMatrix::from_real_diagonal(&[1.0, 0.0]);
        let r = triangle_exponent_inequality(&x, &y, &s2()).unwrap();
        assert!((r.z.mat() - x.add(&y).mat()).frobenius_norm() < 1e-14);
        let trace = triangle_exponent_inequality(&x, &y, &NormSpec::trace()).unwrap();
        assert!((trace.lhs - trace.rhs).abs() < 1e-14);
    }

    #[test]
    fn alignment_on_and_off_segment() {
        let u = UnitaryMatrix::from_angles(&[0.3, -0.2, 1.0]);
        let z = HermitianMatrix::new(
            ComplexMatrix::from_fn(3, |i, j| {
                if i == j {
                    crate::matcore::C64::new([1.0, -0.5, 0.2][i], 0.0)
                } else if i < j {
                    crate::matcore::C64::new(0.3, 0.1)
                } else {
                    crate::matcore::C64::new(0.3, -0.1)
                }
            })
            .unwrap(),
        )
        .unwrap();
        let v = u.compose(&unitary_exp(&z).unwrap());
        let w = u.compose(&unitary_exp(&z.scale(0.3)).unwrap());
        let r = alignment_test(&u, &v, &w, &s2()).unwrap();
        assert!(r.aligned);
        assert!((r.t0.unwrap() - 0.3).abs() < 1e-9);
        assert!(r.defect.abs() < 1e-9);
        let r = alignment_test(&u, &v, &u, &s2()).unwrap();
        assert!(r.aligned && r.t0 == Some(0.0));
        let off = UnitaryMatrix::from_angles(&[1.0, 1.0, -1.0]);
        let r = alignment_test(&u, &v, &off, &s2()).unwrap();
        assert!(!r.aligned && r.t0.is_none() && r.defect > 0.0);
    }

    #[test]
    fn alignment_refusals() {
        let i = UnitaryMatrix::identity(2);
        let v = UnitaryMatrix::from_angles(&[0.5, 0.0]);
        assert!(matches!(alignment_test(&i, &v, &i, &NormSpec::operator()), Err(Error::NotRotund { .. })));
        let m = UnitaryMatrix::from_angles(&[PI, 0.0]);
        assert!(matches!(alignment_test(&i, &m, &i, &s2()), Err(Error::Antipodal { .. })));
    }

    #[test]
    fn antipodal_examples() {
        let m = UnitaryMatrix::from_angles(&[PI, PI]);
        let logs = antipodal_logs(&m).unwrap();
        assert_eq!(logs.len(), 4);
        let want = HermitianMatrix::from_real_diagonal(&[PI, PI]);
        assert!((logs[0].mat() - want.mat()).frobenius_norm() < 1e-14);
        let split = HermitianMatrix::from_real_diagonal(&[PI, -PI]);
        assert!(logs.iter().any(|z| (z.mat() - split.mat()).frobenius_norm() < 1e-14));
        for z in &logs {
            assert!(unitary_exp(z).unwrap().mat().distance(m.mat()) < 1e-9);
        }
        let single = UnitaryMatrix::from_angles(&[PI, 0.0]);
        let logs = antipodal_logs(&single).unwrap();
        assert_eq!(logs.len(), 2);
        assert!((logs[0].mat() - HermitianMatrix::from_real_diagonal(&[PI, 0.0]).mat()).frobenius_norm() < 1e-14);
        assert!((logs[1].mat() - HermitianMatrix::from_real_diagonal(&[-PI, 0.0]).mat()).frobenius_norm() < 1e-14);
        assert!(antipodal_logs(&UnitaryMatrix::identity(2)).is_err());
    }
}
