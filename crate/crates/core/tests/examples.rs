//! Worked examples whose expected values come from an independent oracle
//! computed at test time.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use rand::Rng;
use unigeo::geodesy::{geodesic_distance, polygonal_length, sampled_length};
use unigeo::lab::{
    ginibre, haar_unitary, perturbed_geodesic, random_hermitian, random_polygonal, run_suite, thompson_decompose_with,
    trial_rng, ExperimentConfig, ThompsonOptions,
};
use unigeo::matcore::{eig_hermitian, principal_unitary_log, ComplexMatrix, HermitianMatrix, C64};
use unigeo::norms::{
    bidual_norm, dual_norm, norm_phi, numeric_dual_gauge, pinching, singular_values, DualSolverConfig, NormSpec,
};

#[test]
fn eigen_decomposition_reconstructs() {
    let mut rng = trial_rng(1, 0);
    let h = random_hermitian(&mut rng, 5, 2.0).unwrap();
    let e = eig_hermitian(&h).unwrap();
    let mut sum = ComplexMatrix::zeros(5);
    for (p, &l) in e.projections().iter().zip(e.values()) {
        sum = &sum + &p.scale(l);
    }
    assert!(sum.distance(h.mat()) <= 1e-10);
}

#[test]
fn singular_values_match_eigenvalues_of_the_gram_matrix() {
    let mut rng = trial_rng(2, 0);
    let a = ginibre(&mut rng, 5);
    let m = a.as_matrix();
    let gram: DMatrix<C64> = m.adjoint() * m;
    let mut want: Vec<f64> = gram.symmetric_eigen().eigenvalues.iter().map(|l| l.max(0.0).sqrt()).collect();
    want.sort_by(|x, y| y.total_cmp(x));
    let got = singular_values(&a).unwrap();
    for (g, w) in got.iter().zip(&want) {
        assert!((g - w).abs() <= 1e-10, "{got:?} vs {want:?}");
    }
}

#[test]
fn operator_dual_by_brute_force() {
    let x = ComplexMatrix::identity(2);
    let d = dual_norm(&x, &NormSpec::operator()).unwrap();
    let mut rng = trial_rng(3, 0);
    let mut best: f64 = 0.0;
    for _ in 0..2000 {
        // Unitaries are the extreme points of the operator-norm ball.
        let y = haar_unitary(&mut rng, 2);
        best = best.max((x.as_matrix() * y.mat().as_matrix()).trace().re);
    }
    for s in [[1.0, 1.0], [1.0, -1.0], [-1.0, 1.0], [-1.0, -1.0]] {
        let y = ComplexMatrix::from_real_diagonal(&s);
        best = best.max((x.as_matrix() * y.as_matrix()).trace().re);
    }
    assert!(best <= d + 1e-12);
    assert!((best - d).abs() < 1e-12 && (d - 2.0).abs() < 1e-12);
}

#[test]
fn kyfan_dual_against_numeric_maximization() {
    let x = ComplexMatrix::from_real_diagonal(&[5.0, 1.0, 1.0]);
    let d = dual_norm(&x, &NormSpec::kyfan(2).unwrap()).unwrap();
    let top2 = |s: &[f64]| s[0] + s[1];
    let oracle = numeric_dual_gauge(&top2, &[5.0, 1.0, 1.0], &DualSolverConfig::default()).unwrap();
    assert!((d - 5.0).abs() < 1e-12);
    assert!((oracle - d).abs() < 1e-6, "{oracle}");
}

#[test]
fn trace_bidual_against_numeric_maximization() {
    let x = ComplexMatrix::from_real_diagonal(&[2.0, 1.0]);
    let b = bidual_norm(&x, &NormSpec::trace()).unwrap();
    // The dual of the trace gauge is the max gauge; its dual is the oracle.
    let max = |s: &[f64]| s[0];
    let oracle = numeric_dual_gauge(&max, &[2.0, 1.0], &DualSolverConfig::default()).unwrap();
    assert!((b - 3.0).abs() < 1e-12);
    assert!((oracle - 3.0).abs() < 1e-6, "{oracle}");
}

#[test]
fn kyfan_bidual_on_random_matrix() {
    let mut rng = trial_rng(4, 0);
    let a = ginibre(&mut rng, 4);
    let phi = NormSpec::kyfan(2).unwrap();
    let (n, b) = (norm_phi(&a, &phi).unwrap(), bidual_norm(&a, &phi).unwrap());
    assert!((n - b).abs() <= 1e-8);
}

#[test]
fn pinching_is_contractive() {
    let mut rng = trial_rng(5, 0);
    let y = ginibre(&mut rng, 5);
    let q = haar_unitary(&mut rng, 5);
    let block = |range: std::ops::Range<usize>| {
        let d: Vec<f64> = (0..5).map(|i| if range.contains(&i) { 1.0 } else { 0.0 }).collect();
        let p = HermitianMatrix::from_real_diagonal(&d).conjugate_by(&q);
        p.mat().clone()
    };
    let e = pinching(&[block(0..2), block(2..5)], &y).unwrap();
    for p in [1.0, 2.0, 4.0, f64::INFINITY] {
        let phi = NormSpec::schatten(p).unwrap();
        assert!(norm_phi(&e, &phi).unwrap() <= norm_phi(&y, &phi).unwrap() + 1e-10, "p = {p}");
    }
}

#[test]
fn frobenius_distance_is_norm_of_the_log() {
    let mut rng = trial_rng(6, 0);
    let (u, v) = (haar_unitary(&mut rng, 4), haar_unitary(&mut rng, 4));
    let z = principal_unitary_log(&u.between(&v)).unwrap();
    let d = geodesic_distance(&u, &v, &NormSpec::schatten(2.0).unwrap()).unwrap();
    assert!((d - z.mat().frobenius_norm()).abs() <= 1e-10);
}

#[test]
fn thompson_with_zero_second_exponent() {
    let mut rng = trial_rng(7, 0);
    let a = random_hermitian(&mut rng, 3, 1.0).unwrap();
    let r = thompson_decompose_with(&a, &HermitianMatrix::zeros(3), &ThompsonOptions::default()).unwrap();
    assert!(r.residual <= 1e-12 && r.converged);
}

#[test]
fn perturbed_geodesic_is_no_shorter() {
    let mut rng = trial_rng(8, 0);
    let z = random_hermitian(&mut rng, 3, 2.0).unwrap();
    let w = random_hermitian(&mut rng, 3, 1.0).unwrap();
    let phi = NormSpec::schatten(2.0).unwrap();
    let path = perturbed_geodesic(&z, &w, 0.2, 500).unwrap();
    assert!(sampled_length(&path, &phi) >= z.mat().frobenius_norm() - 1e-7);
}

#[test]
fn random_polygonal_paths_are_no_shorter() {
    let phi = NormSpec::trace();
    let mut rng = trial_rng(9, 0);
    for k in 0..200 {
        let (u, v) = (haar_unitary(&mut rng, 4), haar_unitary(&mut rng, 4));
        let p = random_polygonal(&u, &v, 3, rng.random()).unwrap();
        let d = geodesic_distance(&u, &v, &phi).unwrap();
        assert!(polygonal_length(&p, &phi) >= d - 1e-9, "path {k}");
    }
}

#[test]
fn antipodal_pair_respects_metric_equivalence() {
    let u = unigeo::matcore::UnitaryMatrix::identity(2);
    let v = unigeo::matcore::UnitaryMatrix::from_angles(&[PI, PI]);
    let r = unigeo::geodesy::metric_equivalence_check(&u, &v, &NormSpec::operator()).unwrap();
    assert!((r.mid - 2.0).abs() < 1e-12 && (r.upper - PI).abs() < 1e-12 && r.holds);
}

#[test]
fn triangle_suite_at_full_size() {
    let cfg = ExperimentConfig::new(7, 4, 1000).unwrap();
    let r = run_suite("triangle", &cfg).unwrap();
    assert!(r.ok && r.passed == r.total);
    let trials: std::collections::BTreeSet<usize> = r.rows.iter().map(|row| row.trial).collect();
    assert_eq!(trials.len(), 1000);
}
