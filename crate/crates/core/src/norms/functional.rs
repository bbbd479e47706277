use super::spec::{NormKind, NormSpec};
use crate::error::{Error, Result};
use crate::matcore::{eig_hermitian, ComplexMatrix, HermitianMatrix, EPS_PROJ};

/// A Hermitian `ξ` commuting with `x`, with `‖ξ‖_φ′ ≤ 1` and
/// `Tr(xξ) = ‖x‖_φ`.
#[derive(Clone, Debug)]
pub struct NormingFunctional {
    pub xi: HermitianMatrix,
    pub norm_value: f64,
}

fn tie_tol(a_max: f64) -> f64 {
    1e-12 * a_max.max(1.0)
}

/// Subgradient of the gauge at a descending nonnegative `a`.
fn subgradient(phi: &NormSpec, a: &[f64]) -> Vec<f64> {
    let n = a.len();
    let tol = tie_tol(a[0]);
    let top_group = |a: &[f64]| a.iter().take_while(|&&x| x >= a[0] - tol).count();
    match phi.kind() {
        NormKind::Trace => vec![1.0; n],
        NormKind::Schatten(p) if *p == 1.0 => vec![1.0; n],
        NormKind::Operator => {
            let m = top_group(a);
            (0..n).map(|i| if i < m { 1.0 / m as f64 } else { 0.0 }).collect()
        }
        NormKind::Schatten(p) if p.is_infinite() => {
            let m = top_group(a);
            (0..n).map(|i| if i < m { 1.0 / m as f64 } else { 0.0 }).collect()
        }
        NormKind::Schatten(p) => {
            let norm = phi.gauge(a);
            a.iter().map(|x| (x / norm).powf(p - 1.0)).collect()
        }
        NormKind::KyFan(k) => {
            if *k >= n {
                return vec![1.0; n];
            }
            let v = a[k - 1];
            let above = a.iter().filter(|&&x| x > v + tol).count();
            let tied = a.iter().filter(|&&x| (x - v).abs() <= tol).count();
            let share = (k - above) as f64 / tied as f64;
            a.iter()
                .map(|&x| if x > v + tol { 1.0 } else if (x - v).abs() <= tol { share } else { 0.0 })
                .collect()
        }
        NormKind::Custom(g) => {
            let h = 1e-7 * a[0].max(1e-300);
            let mut work = a.to_vec();
            let mut d = vec![0.0; n];
            for i in 0..n {
                work[i] = a[i] + h;
                let up = g.eval(&work);
                work[i] = a[i] - h;
                let down = g.eval(&work);
                work[i] = a[i];
                d[i] = (up - down) / (2.0 * h);
            }
            average_over_ties(&mut d, a, tol);
            d
        }
    }
}

fn average_over_ties(d: &mut [f64], a: &[f64], tol: f64) {
    let mut i = 0;
    while i < a.len() {
        let mut j = i + 1;
        while j < a.len() && (a[i] - a[j]).abs() <= tol {
            j += 1;
        }
        let mean = d[i..j].iter().sum::<f64>() / (j - i) as f64;
        d[i..j].iter_mut().for_each(|x| *x = mean);
        i = j;
    }
}

/// Builds `ξ = Σ sign(λ_k) d_k p_k` from a subgradient `d` of the gauge at
/// the absolute eigenvalues of `x`.
pub fn norming_functional(x: &HermitianMatrix, phi: &NormSpec) -> Result<NormingFunctional> {
    let e = eig_hermitian(x)?;
    let lambda = e.spectrum();
    let mut order: Vec<usize> = (0..lambda.len()).collect();
    order.sort_by(|&i, &j| lambda[j].abs().total_cmp(&lambda[i].abs()));
    let a: Vec<f64> = order.iter().map(|&i| lambda[i].abs()).collect();
    if a[0] == 0.0 {
        return Err(Error::Domain("the zero matrix has no norming functional".into()));
    }
    let d = subgradient(phi, &a);
    let mut weights = vec![0.0; lambda.len()];
    for (slot, &i) in order.iter().enumerate() {
        let sign = if lambda[i] > 0.0 {
            1.0
        } else if lambda[i] < 0.0 {
            -1.0
        } else {
            0.0
        };
        weights[i] = sign * d[slot];
    }
    Ok(NormingFunctional { xi: HermitianMatrix::from_spectrum(e.basis(), &weights), norm_value: phi.gauge(&a) })
}

/// The pinching `E(y) = Σ_k p_k y p_k` for an orthogonal resolution of the
/// identity.
pub fn pinching(projections: &[ComplexMatrix], y: &ComplexMatrix) -> Result<ComplexMatrix> {
    let n = y.dim();
    if projections.is_empty() {
        return Err(Error::Domain("pinching needs at least one projection".into()));
    }
    let mut total = ComplexMatrix::zeros(n);
    for (k, p) in projections.iter().enumerate() {
        p.check_same_dim(y)?;
        let idem = (p * p - p).frobenius_norm();
        let herm = (p - p.adjoint()).frobenius_norm();
        if idem > EPS_PROJ || herm > EPS_PROJ {
            return Err(Error::Domain(format!(
                "p[{k}] is not an orthogonal projection (idempotency defect {idem:e}, hermiticity defect {herm:e})"
            )));
        }
        for (l, q) in projections.iter().enumerate().skip(k + 1) {
            let overlap = (p * q).frobenius_norm();
            if overlap > EPS_PROJ {
                return Err(Error::Domain(format!("p[{k}] and p[{l}] are not orthogonal (defect {overlap:e})")));
            }
        }
        total = total + p;
    }
    let completeness = (total - ComplexMatrix::identity(n)).frobenius_norm();
    if completeness > EPS_PROJ {
        return Err(Error::Domain(format!("projections do not sum to the identity (defect {completeness:e})")));
    }
    let mut out = ComplexMatrix::zeros(n);
    for p in projections {
        out = out + p * y * p;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcore::C64;
    use crate::norms::dual_norm;

    fn herm_diag(d: &[f64]) -> HermitianMatrix {
        HermitianMatrix::from_real_diagonal(d)
    }

    #[test]
    fn trace_norm_is_normed_by_sign() {
        let f = norming_functional(&herm_diag(&[2.0, 1.0]), &NormSpec::trace()).unwrap();
        assert!((f.xi.mat() - ComplexMatrix::identity(2)).frobenius_norm() < 1e-14);
        assert!((f.norm_value - 3.0).abs() < 1e-14);
    }

    #[test]
    fn frobenius_gradient() {
        let x = herm_diag(&[3.0, 4.0]);
        let f = norming_functional(&x, &NormSpec::schatten(2.0).unwrap()).unwrap();
        let want = ComplexMatrix::from_real_diagonal(&[0.6, 0.8]);
        assert!((f.xi.mat() - want).frobenius_norm() < 1e-14);
        assert!(((x.mat() * f.xi.mat()).trace().re - 5.0).abs() < 1e-14);
    }

    #[test]
    fn ties_share_weight_uniformly() {
        let x = herm_diag(&[2.0, -2.0, 1.0]);
        let f = norming_functional(&x, &NormSpec::operator()).unwrap();
        let want = ComplexMatrix::from_real_diagonal(&[0.5, -0.5, 0.0]);
        assert!((f.xi.mat() - want).frobenius_norm() < 1e-14);
        let g = norming_functional(&herm_diag(&[1.0, 1.0, 1.0]), &NormSpec::kyfan(2).unwrap()).unwrap();
        let want = ComplexMatrix::from_real_diagonal(&[2.0 / 3.0; 3]);
        assert!((g.xi.mat() - want).frobenius_norm() < 1e-14);
        assert!((dual_norm(g.xi.mat(), &NormSpec::kyfan(2).unwrap()).unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn zero_has_no_norming_functional() {
        assert!(norming_functional(&HermitianMatrix::zeros(3), &NormSpec::trace()).is_err());
    }

    #[test]
    fn full_pinching_keeps_the_diagonal() {
        let y = ComplexMatrix::from_fn(3, |i, j| C64::new(i as f64 + 1.0, j as f64 - 1.0)).unwrap();
        let ps: Vec<ComplexMatrix> = (0..3)
            .map(|k| {
                let mut d = vec![0.0; 3];
                d[k] = 1.0;
                ComplexMatrix::from_real_diagonal(&d)
            })
            .collect();
        let e = pinching(&ps, &y).unwrap();
        let diag: Vec<C64> = (0..3).map(|i| y.get(i, i)).collect();
        assert!((e - ComplexMatrix::from_diagonal(&diag)).frobenius_norm() < 1e-15);
    }

    #[test]
    fn pinching_rejects_incomplete_families() {
        let y = ComplexMatrix::identity(2);
        let p = ComplexMatrix::from_real_diagonal(&[1.0, 0.0]);
        assert!(pinching(&[p.clone()], &y).is_err());
        assert!(pinching(&[p.clone(), p], &y).is_err());
        assert!(pinching(&[ComplexMatrix::from_real_diagonal(&[0.5, 0.5])], &y).is_err());
    }
}
