//! Checks against an independent matrix exponential: a scaled and squared
//! Taylor series on plain nalgebra matrices, sharing no code with the
//! spectral routines under test.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use unigeo::geodesy::{sampled_length, SampledPath};
use unigeo::lab::{random_hermitian, trial_rng};
use unigeo::matcore::{
    chord_length, chord_lower_bound, dexp, unitary_exp, ComplexMatrix, ExpDerivative, HermitianMatrix, UnitaryMatrix,
    C64,
};
use unigeo::norms::NormSpec;

type M = DMatrix<C64>;

fn expm(a: &M) -> M {
    let norm = a.iter().map(|c| c.norm()).sum::<f64>();
    let squarings = norm.max(1.0).log2().ceil() as i32 + 4;
    let a = a.map(|c| c / 2f64.powi(squarings));
    let n = a.nrows();
    let mut term = M::identity(n, n);
    let mut sum = term.clone();
    for k in 1..30 {
        term = &term * &a / C64::from(k as f64);
        sum += &term;
    }
    for _ in 0..squarings {
        sum = &sum * &sum;
    }
    sum
}

fn exp_i(x: &M) -> M {
    expm(&x.map(|c| c * C64::i()))
}

fn raw(m: &ComplexMatrix) -> M {
    m.as_matrix().clone()
}

fn rel(a: &M, b: &M) -> f64 {
    (a - b).norm() / b.norm().max(1e-300)
}

#[test]
fn taylor_oracle_agrees_with_spectral_exponential() {
    let mut rng = trial_rng(11, 0);
    for n in [2, 3, 4, 6] {
        let x = random_hermitian(&mut rng, n, 3.0).unwrap();
        let e = raw(unitary_exp(&x).unwrap().mat());
        assert!(rel(&exp_i(&raw(x.mat())), &e) < 1e-12);
    }
}

#[test]
fn dexp_matches_central_differences_of_the_oracle() {
    let h = 1e-5;
    let mut rng = trial_rng(12, 0);
    for trial in 0..100 {
        let x = random_hermitian(&mut rng, 4, 1.0 + (trial % 3) as f64).unwrap();
        let y = random_hermitian(&mut rng, 4, 1.0).unwrap();
        let (xr, yr) = (raw(x.mat()), raw(y.mat()));
        let fd = (exp_i(&(&xr + &yr * C64::from(h))) - exp_i(&(&xr - &yr * C64::from(h)))) / C64::from(2.0 * h);
        let d = raw(&dexp(&x, &y).unwrap());
        assert!(rel(&d, &fd) <= 1e-6, "trial {trial}: {}", rel(&d, &fd));
    }
}

/// `d/dh e^{i(x+hy)} = ∫₀¹ e^{isx}·iy·e^{i(1−s)x} ds`, by Simpson's rule.
#[test]
fn dexp_matches_the_integral_representation() {
    let nodes = 201;
    let mut rng = trial_rng(13, 0);
    for _ in 0..10 {
        let x = random_hermitian(&mut rng, 3, 2.5).unwrap();
        let y = random_hermitian(&mut rng, 3, 1.0).unwrap();
        let (xr, iy) = (raw(x.mat()), raw(y.mat()).map(|c| c * C64::i()));
        let mut acc = M::zeros(3, 3);
        for k in 0..nodes {
            let s = k as f64 / (nodes - 1) as f64;
            let w = if k == 0 || k == nodes - 1 { 1.0 } else if k % 2 == 1 { 4.0 } else { 2.0 };
            let f = exp_i(&(&xr * C64::from(s))) * &iy * exp_i(&(&xr * C64::from(1.0 - s)));
            acc += f * C64::from(w);
        }
        acc /= C64::from(3.0 * (nodes - 1) as f64);
        let d = raw(&dexp(&x, &y).unwrap());
        assert!(rel(&d, &acc) < 1e-8, "{}", rel(&d, &acc));
    }
}

#[test]
fn dexp_adjoint_is_the_adjoint() {
    let mut rng = trial_rng(14, 0);
    for _ in 0..20 {
        let x = random_hermitian(&mut rng, 4, 3.0).unwrap();
        let y = random_hermitian(&mut rng, 4, 1.0).unwrap();
        let r = random_hermitian(&mut rng, 4, 1.0).unwrap();
        let r = ComplexMatrix::new(raw(r.mat()).map(|c| c * C64::new(0.3, 0.8))).unwrap();
        let d = ExpDerivative::at(&x).unwrap();
        let lhs = (d.apply(y.mat()).adjoint().as_matrix() * r.as_matrix()).trace().re;
        let rhs = (y.mat().adjoint().as_matrix() * d.apply_adjoint(&r).as_matrix()).trace().re;
        assert!((lhs - rhs).abs() < 1e-12, "{lhs} {rhs}");
    }
}

#[test]
fn dexp_along_commuting_directions() {
    // For commuting directions the derivative is i·y·e^{ix}.
    let x = HermitianMatrix::from_real_diagonal(&[0.4, -1.1, 2.0]);
    let y = HermitianMatrix::from_real_diagonal(&[1.0, 0.5, -0.3]);
    let d = raw(&dexp(&x, &y).unwrap());
    let want = raw(y.mat()).map(|c| c * C64::i()) * exp_i(&raw(x.mat()));
    assert!(rel(&d, &want) < 1e-14);
}

/// Length of `γ(t) = e^{itx}e^{it²y}` sampled at 1000 points against
/// Simpson's rule on `t ↦ ‖γ'(t)‖_φ` with `γ'` from the oracle.
#[test]
fn sampled_length_converges_to_the_integral() {
    let mut rng = trial_rng(15, 0);
    let x = random_hermitian(&mut rng, 3, 1.0).unwrap();
    let y = random_hermitian(&mut rng, 3, 0.8).unwrap();
    let (xr, yr) = (raw(x.mat()), raw(y.mat()));
    let gamma = |t: f64| exp_i(&(&xr * C64::from(t))) * exp_i(&(&yr * C64::from(t * t)));
    let speed = |t: f64, phi: &NormSpec| {
        // γ' = i·x·γ + e^{itx}·(2t·iy)·e^{it²y}
        let d = (&xr * gamma(t) + exp_i(&(&xr * C64::from(t))) * &yr * exp_i(&(&yr * C64::from(t * t))) * C64::from(2.0 * t))
            .map(|c| c * C64::i());
        unigeo::norms::norm_phi(&ComplexMatrix::new(d).unwrap(), phi).unwrap()
    };
    let sample = |m| SampledPath::from_fn(m, |t| UnitaryMatrix::new(ComplexMatrix::new(gamma(t)).unwrap()).unwrap());
    let (path, coarse) = (sample(1000).unwrap(), sample(500).unwrap());
    let nodes = 401;
    for phi in NormSpec::standard() {
        let mut integral = 0.0;
        for k in 0..nodes {
            let t = k as f64 / (nodes - 1) as f64;
            let w = if k == 0 || k == nodes - 1 { 1.0 } else if k % 2 == 1 { 4.0 } else { 2.0 };
            integral += w * speed(t, &phi);
        }
        integral /= 3.0 * (nodes - 1) as f64;
        let l = sampled_length(&path, &phi);
        assert!((l - integral).abs() < 1e-4, "{}: {l} vs {integral}", phi.label());
        // Refining a partition never shortens an inscribed path.
        assert!(sampled_length(&coarse, &phi) <= l + 1e-12, "{}", phi.label());
    }
}

#[test]
fn chord_bound_on_a_fine_grid() {
    let m = 10_000;
    for k in 0..=m {
        let t = -PI + 2.0 * PI * k as f64 / m as f64;
        let c = chord_length(t).unwrap();
        assert!(c >= chord_lower_bound(t) - 1e-15, "t = {t}");
        assert!((c - (C64::from_polar(1.0, t) - 1.0).norm()).abs() < 1e-15);
    }
    assert!(chord_length(PI + 1e-9).is_err());
}
