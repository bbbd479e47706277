use std::f64::consts::PI;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::competitors::{perturbed_geodesic, random_polygonal, smooth_competitor};
use super::random::{ginibre, haar_unitary, random_hermitian, random_positive, trial_rng};
use super::report::{Report, Row};
use super::thompson::{thompson_decompose_with, ThompsonOptions};
use super::ExperimentConfig;
use crate::error::{Error, Result};
use crate::geodesy::{
    alignment_test, antipodal_logs, geodesic_distance, metric_equivalence_check, polygonal_length, sampled_length,
    triangle_exponent_inequality, Hypothesis,
};
use crate::matcore::{
    chord_length, chord_lower_bound, dexp, eig_hermitian, principal_unitary_log, unitary_exp, ComplexMatrix,
    HermitianMatrix, UnitaryMatrix,
};
use crate::norms::{
    bidual_norm, dual_norm, norm_phi, norming_functional, numeric_dual_gauge, pinching, singular_values,
    DualSolverConfig, NormSpec,
};

struct Ctx<'a> {
    cfg: &'a ExperimentConfig,
    norms: Vec<NormSpec>,
    n: usize,
}

impl Ctx<'_> {
    fn rng(&self, trial: usize) -> ChaCha8Rng {
        trial_rng(self.cfg.seed, trial as u64)
    }

    fn tol(&self, check: &str, default: f64) -> f64 {
        self.cfg.tolerance(check, default)
    }

    /// A seed for sub-searches of `trial`, distinct from the trial stream.
    fn sub_seed(&self, trial: usize) -> u64 {
        self.cfg.seed ^ (trial as u64 + 1).wrapping_mul(0x9e37_79b9_7f4a_7c15)
    }

    fn rotund_norms(&self) -> Vec<NormSpec> {
        self.norms.iter().filter(|n| n.is_rotund()).cloned().collect()
    }
}

type TrialFn = fn(&Ctx<'_>, usize) -> Result<Vec<Row>>;

struct Suite {
    name: &'static str,
    trial: TrialFn,
    precheck: Option<fn(&Ctx<'_>) -> Result<()>>,
    /// Quantity allowed to fail in a fraction of trials, with the required
    /// pass rate. Every other counted row must pass.
    soft: Option<(&'static str, f64)>,
}

const fn suite(name: &'static str, trial: TrialFn) -> Suite {
    Suite { name, trial, precheck: None, soft: None }
}

const SUITES: &[Suite] = &[
    suite("exponents", exponents),
    Suite { soft: Some(("residual", 0.99)), ..suite("thompson", thompson) },
    suite("triangle", triangle),
    suite("triangle-boundary", triangle_boundary),
    suite("polygonal", polygonal),
    suite("minimality", minimality),
    suite("equivalence", equivalence),
    suite("distance", distance),
    suite("dual-symmetric", dual_symmetric),
    suite("pinching", pinching_suite),
    suite("holder", holder),
    suite("commuting-dual", commuting_dual),
    suite("bidual", bidual),
    suite("gauge-sup", gauge_sup),
    suite("norming", norming),
    Suite { precheck: Some(needs_rotund), ..suite("uniqueness", uniqueness) },
    Suite { precheck: Some(needs_rotund), ..suite("unique-path", unique_path) },
    suite("antipodal", antipodal),
    suite("dexp", dexp_suite),
    suite("chord", chord),
];

/// Names accepted by [`run_suite`].
pub fn suite_names() -> Vec<&'static str> {
    SUITES.iter().map(|s| s.name).collect()
}

/// Runs every trial of suite `name` and collects the rows in trial order.
///
/// Trials run in parallel on the global rayon pool; each draws from its own
/// stream, so the report does not depend on scheduling. A trial that hits a
/// numerical error contributes a failing `error` row instead of aborting the
/// run.
pub fn run_suite(name: &str, cfg: &ExperimentConfig) -> Result<Report> {
    let suite = SUITES.iter().find(|s| s.name == name).ok_or_else(|| Error::UnknownSuite(name.to_string()))?;
    cfg.validate()?;
    let ctx = Ctx { cfg, norms: cfg.norms(), n: cfg.dim };
    if let Some(check) = suite.precheck {
        check(&ctx)?;
    }
    let per_trial: Vec<Vec<Row>> = (0..cfg.trials)
        .into_par_iter()
        .map(|t| {
            (suite.trial)(&ctx, t).unwrap_or_else(|e| {
                vec![Row::new(t, "-", &format!("error: {e}"), f64::NAN, f64::NAN, f64::NAN, false)]
            })
        })
        .collect();
    let rows: Vec<Row> = per_trial.into_iter().flatten().collect();
    let soft = suite.soft;
    let hard_ok = rows
        .iter()
        .filter(|r| !r.diagnostic && soft.is_none_or(|(q, _)| r.quantity != q))
        .all(|r| r.pass);
    let soft_ok = soft.is_none_or(|(q, rate)| {
        let (p, t) = rows
            .iter()
            .filter(|r| !r.diagnostic && r.quantity == q)
            .fold((0usize, 0usize), |(p, t), r| (p + r.pass as usize, t + 1));
        t == 0 || p as f64 >= rate * t as f64
    });
    Ok(Report::new(name, cfg.dim, rows, |_, _| hard_ok && soft_ok))
}

fn needs_rotund(ctx: &Ctx<'_>) -> Result<()> {
    if ctx.rotund_norms().is_empty() {
        return Err(Error::Config(
            "this suite needs at least one rotund norm (Schatten p with 1 < p < ∞, or a custom gauge declared rotund)"
                .into(),
        ));
    }
    Ok(())
}

/// Random Hermitian matrix whose operator norm is drawn from `radius`.
fn hermitian_in<R: rand::distr::uniform::SampleRange<f64>>(rng: &mut ChaCha8Rng, n: usize, radius: R) -> Result<HermitianMatrix> {
    let r = rng.random_range(radius);
    random_hermitian(rng, n, r)
}

fn norm_of(x: &HermitianMatrix, phi: &NormSpec) -> Result<f64> {
    Ok(phi.gauge(eig_hermitian(x)?.spectrum()))
}

fn unit_frobenius(m: ComplexMatrix) -> ComplexMatrix {
    let f = m.frobenius_norm();
    m.scale(1.0 / f)
}

fn op_radius(x: &HermitianMatrix) -> Result<f64> {
    Ok(eig_hermitian(x)?.spectral_radius())
}

/// Commuting exponents: `e^{ix} = e^{iy}` with `‖x‖_∞ < π` forces
/// `[x, y] = 0` and `|x| ≤ |y|`, and `x = y` once `‖y‖_∞ ≤ π`.
fn exponents(ctx: &Ctx<'_>, t: usize) -> Result<Vec<Row>> {
    let mut rng = ctx.rng(t);
    let x = hermitian_in(&mut rng, ctx.n, 0.05..3.1)?;
    let ux = unitary_exp(&x)?;
    let y0 = principal_unitary_log(&ux)?;
    let e = eig_hermitian(&y0)?;
    let keep = rng.random_bool(0.25);
    let shifted: Vec<f64> = e
        .spectrum()
        .iter()
        .map(|&l| if keep { l } else { l + 2.0 * PI * rng.random_range(-2i32..=2) as f64 })
        .collect();
    let y = HermitianMatrix::from_spectrum(e.basis(), &shifted);
    let abs_y = HermitianMatrix::from_spectrum(e.basis(), &shifted.iter().map(|l| l.abs()).collect::<Vec<_>>());
    let ex = eig_hermitian(&x)?;
    let abs_x = HermitianMatrix::from_spectrum(ex.basis(), &ex.spectrum().iter().map(|l| l.abs()).collect::<Vec<_>>());
    let gap = eig_hermitian(&abs_y.sub(&abs_x))?;
    let min_gap = gap.spectrum().iter().copied().fold(f64::INFINITY, f64::min);
    let mut rows = vec![
        Row::eq(t, "-", "log-exp", (x.mat() - y0.mat()).frobenius_norm(), 0.0, ctx.tol("log-exp", 1e-9)),
        Row::le(t, "-", "same-exp", unitary_exp(&y)?.mat().distance(ux.mat()), 0.0, ctx.tol("same-exp", 1e-9)),
        Row::le(t, "-", "commute", x.mat().commutator(y.mat()).frobenius_norm(), 0.0, ctx.tol("commute", 1e-9)),
        Row::ge(t, "-", "abs-order", min_gap, 0.0, ctx.tol("abs-order", 1e-10)),
    ];
    if op_radius(&y)? <= PI {
        rows.push(Row::eq(t, "-", "equal", (x.mat() - y.mat()).frobenius_norm(), 0.0, ctx.tol("equal", 1e-9)));
    }
    Ok(rows)
}

/// Conjugators `u, v` with `e^{ia}e^{ib} = e^{i(uau* + vbv*)}`.
fn thompson(ctx: &Ctx<'_>, t: usize) -> Result<Vec<Row>> {
    let mut rng = ctx.rng(t);
    let n = ctx.n;
    let tol = ctx.tol("residual", 1e-6);
    let a = hermitian_in(&mut rng, n, 0.2..=1.0)?;
    let b = hermitian_in(&mut rng, n, 0.2..=1.0)?;
    let opts = ThompsonOptions { seed: ctx.sub_seed(t), tolerance: tol, ..Default::default() };
    let r = thompson_decompose_with(&a, &b, &opts)?;
    let mut rows = vec![Row::new(t, "-", "residual", r.residual, tol, tol - r.residual, r.converged)];
    if !r.converged {
        for d in &r.restarts {
            let q = format!("restart-{}-residual", d.restart);
            rows.push(Row::new(t, "-", &q, d.residual, d.iterations as f64, tol - d.residual, false).diagnostic());
        }
    }
    let ea = eig_hermitian(&a)?;
    let values: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
    let c = HermitianMatrix::from_spectrum(ea.basis(), &values);
    let rc = thompson_decompose_with(&a, &c, &opts)?;
    rows.push(Row::le(t, "-", "commuting-residual", rc.residual, 0.0, ctx.tol("commuting-residual", 1e-12)));
    Ok(rows)
}

/// `‖z‖_φ ≤ ‖x‖_φ + ‖y‖_φ` for `e^{iz} = e^{ix}e^{iy}` with `‖z‖_∞ < π`.
fn triangle(ctx: &Ctx<'_>, t: usize) -> Result<Vec<Row>> {
    let mut rng = ctx.rng(t);
    let x = hermitian_in(&mut rng, ctx.n, 0.0..1.5)?;
    let y = hermitian_in(&mut rng, ctx.n, 0.0..1.5)?;
    let tol = ctx.tol("triangle", 1e-9);
    let mut rows = Vec::with_capacity(ctx.norms.len() + 1);
    let mut strict = true;
    for phi in &ctx.norms {
        let r = triangle_exponent_inequality(&x, &y, phi)?;
        strict &= r.hypothesis == Hypothesis::Strict;
        rows.push(Row::le(t, &phi.label(), "triangle", r.lhs, r.rhs, tol));
    }
    let zr = op_radius(&principal_unitary_log(&unitary_exp(&x)?.compose(&unitary_exp(&y)?))?)?;
    rows.push(Row::new(t, "-", "z-radius", zr, PI, PI - zr, strict));
    Ok(rows)
}

/// The relaxed form: `‖y‖_∞ < π` and `‖z‖_∞ = π`.
fn triangle_boundary(ctx: &Ctx<'_>, t: usize) -> Result<Vec<Row>> {
    let mut rng = ctx.rng(t);
    let n = ctx.n;
    let z = random_hermitian(&mut rng, n, PI)?;
    let uz = unitary_exp(&z)?;
    let mut draw = None;
    for _ in 0..10 {
        let x = hermitian_in(&mut rng, n, 0.05..=1.0)?;
        let y = principal_unitary_log(&unitary_exp(&x)?.adjoint().compose(&uz))?;
        if op_radius(&y)? < PI - 1e-6 {
            draw = Some((x, y));
            break;
        }
    }
    let (x, y) = draw.ok_or_else(|| Error::Domain("no draw with ‖y‖_∞ < π".into()))?;
    let product = unitary_exp(&x)?.compose(&unitary_exp(&y)?);
    let mut rows = vec![Row::le(t, "-", "product", product.mat().distance(uz.mat()), 0.0, ctx.tol("product", 1e-9))];
    let tol = ctx.tol("boundary-triangle", 1e-9);
    for phi in &ctx.norms {
        let r = triangle_exponent_inequality(&x, &y, phi)?;
        let lhs = norm_of(&z, phi)?;
        rows.push(Row::le(t, &phi.label(), "boundary-triangle", lhs, r.rhs, tol));
        if r.hypothesis == Hypothesis::Violated {
            rows.push(Row::new(t, &phi.label(), "hypothesis", 0.0, 0.0, -1.0, false));
        }
    }
    Ok(rows)
}

/// Polygonal paths from `1` to `e^{iz}` are no shorter than `‖z‖_φ`.
fn polygonal(ctx: &Ctx<'_>, t: usize) -> Result<Vec<Row>> {
    let mut rng = ctx.rng(t);
    let n = ctx.n;
    let z = hermitian_in(&mut rng, n, 0.1..3.1)?;
    let u = UnitaryMatrix::identity(n);
    let v = unitary_exp(&z)?;
    let two = random_polygonal(&u, &v, 2, ctx.sub_seed(t))?;
    let three = random_polygonal(&u, &v, 3, ctx.sub_seed(t) ^ 1)?;
    let tol = ctx.tol("polygonal", 1e-9);
    let mut rows = Vec::new();
    for phi in &ctx.norms {
        let d = norm_of(&z, phi)?;
        rows.push(Row::ge(t, &phi.label(), "polygonal-2", polygonal_length(&two, phi), d, tol));
        rows.push(Row::ge(t, &phi.label(), "polygonal-3", polygonal_length(&three, phi), d, tol));
    }
    Ok(rows)
}

/// Geodesic segments are no longer than any competitor with the same ends.
fn minimality(ctx: &Ctx<'_>, t: usize) -> Result<Vec<Row>> {
    let mut rng = ctx.rng(t);
    let n = ctx.n;
    let m = 500;
    let z = hermitian_in(&mut rng, n, 0.1..3.1)?;
    let u = UnitaryMatrix::identity(n);
    let v = unitary_exp(&z)?;
    let mut sampled = Vec::new();
    for _ in 0..10 {
        let w = random_hermitian(&mut rng, n, 1.0)?;
        let eps = rng.random_range(0.05..0.4) * if rng.random_bool(0.5) { 1.0 } else { -1.0 };
        sampled.push(perturbed_geodesic(&z, &w, eps, m)?);
    }
    for _ in 0..2 {
        let harmonics = (0..3)
            .map(|_| Ok((rng.random_range(-0.3..0.3), random_hermitian(&mut rng, n, 1.0)?)))
            .collect::<Result<Vec<_>>>()?;
        sampled.push(smooth_competitor(&z, &harmonics, m)?);
    }
    let mut polys = Vec::new();
    for k in 0..10 {
        let pieces = 2 + k % 5;
        polys.push(random_polygonal(&u, &v, pieces, ctx.sub_seed(t).wrapping_add(k as u64))?);
    }
    let tol = ctx.tol("min-competitor", 1e-7);
    let mut rows = Vec::new();
    for phi in &ctx.norms {
        let d = geodesic_distance(&u, &v, phi)?;
        let best = sampled
            .iter()
            .map(|p| sampled_length(p, phi))
            .chain(polys.iter().map(|p| polygonal_length(p, phi)))
            .fold(f64::INFINITY, f64::min);
        rows.push(Row::ge(t, &phi.label(), "min-competitor", best, d, tol));
    }
    Ok(rows)
}

/// `√(1 − π²/12)·d_φ ≤ ‖u − v‖_φ ≤ d_φ`.
fn equivalence(ctx: &Ctx<'_>, t: usize) -> Result<Vec<Row>> {
    let mut rng = ctx.rng(t);
    let u = haar_unitary(&mut rng, ctx.n);
    let v = haar_unitary(&mut rng, ctx.n);
    let tol = ctx.tol("equivalence", 1e-10);
    let mut rows = Vec::new();
    for phi in &ctx.norms {
        let r = metric_equivalence_check(&u, &v, phi)?;
        rows.push(Row::le(t, &phi.label(), "lower", r.lower, r.mid, tol));
        rows.push(Row::le(t, &phi.label(), "upper", r.mid, r.upper, tol));
    }
    Ok(rows)
}

/// Metric axioms and bi-invariance of `d_φ`.
fn distance(ctx: &Ctx<'_>, t: usize) -> Result<Vec<Row>> {
    let mut rng = ctx.rng(t);
    let n = ctx.n;
    let [u, v, w, a, b] = std::array::from_fn(|_| haar_unitary(&mut rng, n));
    let mut rows = Vec::new();
    for phi in &ctx.norms {
        let l = phi.label();
        let d = |p: &UnitaryMatrix, q: &UnitaryMatrix| geodesic_distance(p, q, phi);
        let duv = d(&u, &v)?;
        rows.push(Row::eq(t, &l, "identity", d(&u, &u)?, 0.0, ctx.tol("identity", 1e-10)));
        rows.push(Row::gt(t, &l, "positivity", duv, 0.0));
        rows.push(Row::eq(t, &l, "symmetry", duv, d(&v, &u)?, ctx.tol("symmetry", 1e-10)));
        rows.push(Row::le(t, &l, "triangle", duv, d(&u, &w)? + d(&w, &v)?, ctx.tol("triangle", 1e-9)));
        let moved = d(&a.compose(&u).compose(&b), &a.compose(&v).compose(&b))?;
        rows.push(Row::eq(t, &l, "bi-invariance", moved, duv, ctx.tol("bi-invariance", 1e-9)));
    }
    Ok(rows)
}

/// The dual norm is again a symmetric norm.
fn dual_symmetric(ctx: &Ctx<'_>, t: usize) -> Result<Vec<Row>> {
    let mut rng = ctx.rng(t);
    let n = ctx.n;
    let x = unit_frobenius(ginibre(&mut rng, n));
    let y = unit_frobenius(ginibre(&mut rng, n));
    let c = unit_frobenius(ginibre(&mut rng, n));
    let a = haar_unitary(&mut rng, n);
    let b = haar_unitary(&mut rng, n);
    let c_op = singular_values(&c)?[0];
    let mut rows = Vec::new();
    for phi in &ctx.norms {
        let l = phi.label();
        let dx = dual_norm(&x, phi)?;
        let tol = 1e-9 * dx.max(1.0);
        let moved = dual_norm(&(a.mat() * &x * b.mat()), phi)?;
        rows.push(Row::eq(t, &l, "unitary-invariance", moved, dx, ctx.tol("unitary-invariance", tol)));
        rows.push(Row::eq(t, &l, "adjoint", dual_norm(&x.adjoint(), phi)?, dx, ctx.tol("adjoint", tol)));
        let dy = dual_norm(&y, phi)?;
        rows.push(Row::le(t, &l, "triangle", dual_norm(&(&x + &y), phi)?, dx + dy, ctx.tol("triangle", tol)));
        rows.push(Row::le(t, &l, "left-ideal", dual_norm(&(&c * &x), phi)?, c_op * dx, ctx.tol("left-ideal", tol)));
        rows.push(Row::le(t, &l, "right-ideal", dual_norm(&(&x * &c), phi)?, c_op * dx, ctx.tol("right-ideal", tol)));
        rows.push(Row::ge(t, &l, "dominates-operator", dx, singular_values(&x)?[0], ctx.tol("dominates-operator", tol)));
    }
    Ok(rows)
}

/// The conditional expectation onto the commutant of a positive matrix is
/// a contraction for every symmetric norm.
fn pinching_suite(ctx: &Ctx<'_>, t: usize) -> Result<Vec<Row>> {
    let mut rng = ctx.rng(t);
    let n = ctx.n;
    let x = random_positive(&mut rng, n)?;
    let y = unit_frobenius(ginibre(&mut rng, n));
    let e = eig_hermitian(&x)?;
    let ps = e.projections();
    let split = ps.len().div_ceil(2);
    let coarse = vec![
        ps[..split].iter().fold(ComplexMatrix::zeros(n), |acc, p| acc + p),
        ps[split..].iter().fold(ComplexMatrix::zeros(n), |acc, p| acc + p),
    ];
    let coarse: Vec<ComplexMatrix> = coarse.into_iter().filter(|p| p.frobenius_norm() > 0.5).collect();
    let ey = pinching(&ps, &y)?;
    let cy = pinching(&coarse, &y)?;
    let tol = ctx.tol("pinching-structure", 1e-9);
    let comm = ps.iter().map(|p| ey.commutator(p).frobenius_norm()).fold(0.0, f64::max);
    let mut rows = vec![
        Row::le(t, "-", "idempotent", (pinching(&ps, &ey)? - &ey).frobenius_norm(), 0.0, tol),
        Row::eq(t, "-", "trace", ey.trace().re, y.trace().re, tol),
        Row::eq(t, "-", "trace-imag", ey.trace().im, y.trace().im, tol),
        Row::le(t, "-", "commutes", comm, 0.0, tol),
    ];
    let ctol = ctx.tol("contractive", 1e-9);
    for phi in &ctx.norms {
        let ny = norm_phi(&y, phi)?;
        rows.push(Row::le(t, &phi.label(), "contractive", norm_phi(&ey, phi)?, ny, ctol));
        rows.push(Row::le(t, &phi.label(), "coarse-contractive", norm_phi(&cy, phi)?, ny, ctol));
    }
    Ok(rows)
}

/// `|Tr(xy)| ≤ ‖xy‖₁ ≤ ‖x‖_φ‖y‖_φ′`.
fn holder(ctx: &Ctx<'_>, t: usize) -> Result<Vec<Row>> {
    let mut rng = ctx.rng(t);
    let n = ctx.n;
    let x = unit_frobenius(ginibre(&mut rng, n));
    let y = unit_frobenius(ginibre(&mut rng, n));
    let hx = random_hermitian(&mut rng, n, 1.0)?;
    let hy = random_hermitian(&mut rng, n, 1.0)?;
    let xy = &x * &y;
    let tr = xy.trace().norm();
    let trace_norm: f64 = singular_values(&xy)?.iter().sum();
    let htr = (hx.mat() * hy.mat().adjoint()).trace();
    let tol = ctx.tol("holder", 1e-9);
    let mut rows = vec![
        Row::le(t, "-", "trace-vs-trace-norm", tr, trace_norm, tol),
        Row::le(t, "-", "hermitian-real", htr.im.abs(), 0.0, ctx.tol("hermitian-real", 1e-12)),
    ];
    for phi in &ctx.norms {
        let l = phi.label();
        let bound = norm_phi(&x, phi)? * dual_norm(&y, phi)?;
        rows.push(Row::le(t, &l, "holder", tr, bound, tol));
        rows.push(Row::le(t, &l, "trace-norm-holder", trace_norm, bound, tol));
        let hbound = norm_of(&hx, phi)? * dual_norm(hy.mat(), phi)?;
        rows.push(Row::le(t, &l, "hermitian-upper", htr.re, hbound, tol));
        rows.push(Row::ge(t, &l, "hermitian-lower", htr.re, -hbound, tol));
    }
    Ok(rows)
}

/// Nonnegative candidate weight vectors: dense, sparse and flat-topped.
fn candidate(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    let mut v: Vec<f64> = (0..n).map(|_| -(1.0 - rng.random::<f64>()).ln()).collect();
    match rng.random_range(0..3) {
        0 => {}
        1 => {
            let keep = rng.random_range(1..=n);
            let mut idx: Vec<usize> = (0..n).collect();
            idx.shuffle(rng);
            idx[keep..].iter().for_each(|&i| v[i] = 0.0);
        }
        _ => {
            let k = rng.random_range(1..=n);
            v.iter_mut().enumerate().for_each(|(i, x)| *x = if i < k { 1.0 } else { *x * 0.1 });
        }
    }
    v
}

/// For positive `x` the dual norm is attained on positive elements commuting
/// with `x`, which reduces it to a program over eigenvalue weights.
fn commuting_dual(ctx: &Ctx<'_>, t: usize) -> Result<Vec<Row>> {
    let mut rng = ctx.rng(t);
    let n = ctx.n;
    let x = random_positive(&mut rng, n)?;
    let e = eig_hermitian(&x)?;
    let s = e.spectrum().to_vec();
    let oracle_cfg =
        DualSolverConfig { restarts: 8, iterations: 300, refine_iterations: 200, seed: ctx.sub_seed(t), agreement: 1e-6 };
    let mut rows = Vec::new();
    for phi in &ctx.norms {
        let l = phi.label();
        let closed = dual_norm(x.mat(), phi)?;
        let tol = ctx.tol("commuting-dual", 1e-7) * closed.max(1.0);
        if !phi.is_custom() {
            let g = |v: &[f64]| phi.gauge(v);
            let oracle = numeric_dual_gauge(&g, &s, &oracle_cfg)?;
            rows.push(Row::eq(t, &l, "numeric-oracle", oracle, closed, tol));
        }
        let count = if phi.is_custom() { 1000 } else { 10_000 };
        let mut best = 0.0f64;
        for _ in 0..count {
            let c = candidate(&mut rng, n);
            let num: f64 = s.iter().zip(&c).map(|(a, b)| a * b).sum();
            best = best.max(num / phi.gauge(&c));
        }
        rows.push(Row::le(t, &l, "candidates", best, closed, tol));
        let c = candidate(&mut rng, n);
        let y = HermitianMatrix::from_spectrum(e.basis(), &c);
        let ratio = (x.mat() * y.mat()).trace().re / norm_phi(y.mat(), phi)?;
        rows.push(Row::le(t, &l, "matrix-candidate", ratio, closed, tol));
    }
    Ok(rows)
}

/// `‖·‖_φ″ = ‖·‖_φ`.
fn bidual(ctx: &Ctx<'_>, t: usize) -> Result<Vec<Row>> {
    let mut rng = ctx.rng(t);
    let x = unit_frobenius(ginibre(&mut rng, ctx.n)).scale(rng.random_range(0.1..10.0));
    let mut rows = Vec::new();
    for phi in &ctx.norms {
        let primal = norm_phi(&x, phi)?;
        let tol = ctx.tol("bidual", if phi.is_custom() { 1e-5 } else { 1e-8 }) * primal.max(1.0);
        rows.push(Row::eq(t, &phi.label(), "bidual", bidual_norm(&x, phi)?, primal, tol));
    }
    Ok(rows)
}

/// `‖x‖_φ = ‖|x|‖_φ = sup{Tr(|x|y) : y ≥ 0, y|x| = |x|y, ‖y‖_φ′ ≤ 1}`.
fn gauge_sup(ctx: &Ctx<'_>, t: usize) -> Result<Vec<Row>> {
    let mut rng = ctx.rng(t);
    let n = ctx.n;
    let x = unit_frobenius(ginibre(&mut rng, n)).scale(rng.random_range(0.5..4.0));
    let gram = eig_hermitian(&HermitianMatrix::symmetrize(x.adjoint() * &x))?;
    let moduli: Vec<f64> = gram.spectrum().iter().map(|l| l.max(0.0).sqrt()).collect();
    let abs_x = HermitianMatrix::from_spectrum(gram.basis(), &moduli);
    let mut rows = Vec::new();
    for phi in &ctx.norms {
        let l = phi.label();
        let nx = norm_phi(&x, phi)?;
        let tol = ctx.tol("gauge-sup", 1e-9) * nx.max(1.0);
        rows.push(Row::eq(t, &l, "modulus", norm_of(&abs_x, phi)?, nx, tol));
        rows.push(Row::eq(t, &l, "adjoint", norm_phi(&x.adjoint(), phi)?, nx, tol));
        let f = norming_functional(&abs_x, phi)?;
        let xi = eig_hermitian(&f.xi)?;
        let min = xi.spectrum().iter().copied().fold(f64::INFINITY, f64::min);
        rows.push(Row::ge(t, &l, "positive", min, 0.0, 1e-12));
        rows.push(Row::eq(t, &l, "attained", (abs_x.mat() * f.xi.mat()).trace().re, nx, tol));
        let count = if phi.is_custom() { 20 } else { 1000 };
        let mut best = 0.0f64;
        for _ in 0..count {
            let c = candidate(&mut rng, n);
            let num: f64 = moduli.iter().zip(&c).map(|(a, b)| a * b).sum();
            best = best.max(num / phi.dual_gauge(&c)?);
        }
        rows.push(Row::le(t, &l, "candidates", best, nx, tol));
    }
    Ok(rows)
}

/// Hermitian spectrum with deliberate ties every fourth trial.
fn norming_input(rng: &mut ChaCha8Rng, n: usize, t: usize) -> Result<HermitianMatrix> {
    let r = rng.random_range(0.1..3.0);
    if t % 4 != 3 {
        return random_hermitian(rng, n, r);
    }
    let basis = haar_unitary(rng, n);
    let levels = [r, -r, 0.5 * r];
    let values: Vec<f64> = (0..n).map(|_| levels[rng.random_range(0..levels.len())]).collect();
    let values = if values.iter().all(|v| *v == 0.0) { vec![r; n] } else { values };
    Ok(HermitianMatrix::from_spectrum(basis.mat().as_matrix(), &values))
}

/// Norming functionals: commuting `ξ` in the dual unit ball attaining the
/// norm.
fn norming(ctx: &Ctx<'_>, t: usize) -> Result<Vec<Row>> {
    let mut rng = ctx.rng(t);
    let x = norming_input(&mut rng, ctx.n, t)?;
    let tol = ctx.tol("norming", 1e-9);
    let mut rows = Vec::new();
    for phi in &ctx.norms {
        let l = phi.label();
        let f = norming_functional(&x, phi)?;
        let nx = norm_of(&x, phi)?;
        let ftol = if phi.is_custom() { 1e-6 } else { tol };
        rows.push(Row::eq(t, &l, "trace-identity", (x.mat() * f.xi.mat()).trace().re, nx, tol));
        rows.push(Row::eq(t, &l, "norm-value", f.norm_value, nx, tol));
        rows.push(Row::le(t, &l, "dual-ball", dual_norm(f.xi.mat(), phi)?, 1.0, ftol));
        rows.push(Row::le(t, &l, "commutes", f.xi.mat().commutator(x.mat()).frobenius_norm(), 0.0, tol));
    }
    Ok(rows)
}

/// For rotund norms, zero triangle defect forces alignment on the segment.
fn uniqueness(ctx: &Ctx<'_>, t: usize) -> Result<Vec<Row>> {
    let mut rng = ctx.rng(t);
    let n = ctx.n;
    let u = haar_unitary(&mut rng, n);
    let z = hermitian_in(&mut rng, n, 0.2..3.0)?;
    let v = u.compose(&unitary_exp(&z)?);
    let s: f64 = rng.random_range(0.0..=1.0);
    let w_on = u.compose(&unitary_exp(&z.scale(s))?);
    let h = random_hermitian(&mut rng, n, 1.0)?;
    let w_off = w_on.compose(&unitary_exp(&h.scale(rng.random_range(0.01..0.5)))?);
    let dtol = ctx.tol("on-defect", 1e-9);
    let mut rows = Vec::new();
    for phi in ctx.rotund_norms() {
        let l = phi.label();
        let on = alignment_test(&u, &v, &w_on, &phi)?;
        rows.push(Row::le(t, &l, "on-defect", on.defect, 0.0, dtol));
        let t0 = on.t0.unwrap_or(f64::NAN);
        let pass = on.aligned && (t0 - s).abs() <= ctx.tol("on-position", 1e-7);
        rows.push(Row::new(t, &l, "on-position", t0, s, -(t0 - s).abs(), pass));
        let off = alignment_test(&u, &v, &w_off, &phi)?;
        rows.push(Row::gt(t, &l, "off-defect", off.defect, 0.0));
        rows.push(Row::new(t, &l, "off-aligned", off.aligned as u8 as f64, 0.0, -(off.aligned as u8 as f64), !off.aligned));
    }
    Ok(rows)
}

const EPS_GRID: [f64; 9] = [0.0, 0.05, 0.1, 0.15, 0.2, 0.25, 0.3, 0.35, 0.4];

/// For rotund norms the segment is the only shortest curve: every genuine
/// perturbation is strictly longer.
fn unique_path(ctx: &Ctx<'_>, t: usize) -> Result<Vec<Row>> {
    let mut rng = ctx.rng(t);
    let n = ctx.n;
    let z = hermitian_in(&mut rng, n, 0.2..3.0)?;
    let w = random_hermitian(&mut rng, n, 1.0)?;
    let paths =
        EPS_GRID.iter().map(|&eps| perturbed_geodesic(&z, &w, eps, 500)).collect::<Result<Vec<_>>>()?;
    let mut rows = Vec::new();
    for phi in ctx.rotund_norms() {
        let l = phi.label();
        let d = norm_of(&z, &phi)?;
        let lengths: Vec<f64> = paths.iter().map(|p| sampled_length(p, &phi)).collect();
        rows.push(Row::eq(t, &l, "eps=0", lengths[0], d, ctx.tol("eps=0", 1e-9)));
        for (k, &eps) in EPS_GRID.iter().enumerate().skip(1) {
            rows.push(Row::gt(t, &l, &format!("eps={eps}"), lengths[k], d));
            let q = format!("monotone@{eps}");
            rows.push(Row::ge(t, &l, &q, lengths[k], lengths[k - 1], 1e-7).diagnostic());
        }
    }
    Ok(rows)
}

/// With a `−1` eigenspace of dimension two or more, shortest curves stop
/// being unique: distinct logarithms of the same length.
fn antipodal(ctx: &Ctx<'_>, t: usize) -> Result<Vec<Row>> {
    let mut rng = ctx.rng(t);
    let n = ctx.n;
    let u = if t % 2 == 0 {
        UnitaryMatrix::from_angles(&vec![PI; n])
    } else {
        let m = rng.random_range(1..=n);
        let angles: Vec<f64> = (0..n).map(|k| if k < m { PI } else { rng.random_range(-3.0..3.0) }).collect();
        let w = haar_unitary(&mut rng, n);
        UnitaryMatrix::project(w.mat() * UnitaryMatrix::from_angles(&angles).mat() * w.mat().adjoint())
    };
    let logs = antipodal_logs(&u)?;
    let recon = logs.iter().map(|z| Ok(unitary_exp(z)?.mat().distance(u.mat()))).collect::<Result<Vec<f64>>>()?;
    let radii = logs.iter().map(op_radius).collect::<Result<Vec<f64>>>()?;
    let radius_err = radii.iter().map(|r| (r - PI).abs()).fold(0.0, f64::max);
    let mut rows = vec![
        Row::ge(t, "-", "count", logs.len() as f64, 2.0, 0.0),
        Row::gt(t, "-", "distinct", (logs[0].mat() - logs[1].mat()).frobenius_norm(), 1.0),
        Row::le(t, "-", "reconstruct", recon.iter().copied().fold(0.0, f64::max), 0.0, ctx.tol("reconstruct", 1e-9)),
        Row::le(t, "-", "radius", radius_err, 0.0, ctx.tol("radius", 1e-12)),
    ];
    let mut norms = NormSpec::all_builtins();
    norms.extend(ctx.norms.iter().filter(|p| !norms.iter().any(|q| q.label() == p.label())).cloned().collect::<Vec<_>>());
    for phi in &norms {
        let lengths = logs.iter().map(|z| norm_of(z, phi)).collect::<Result<Vec<f64>>>()?;
        let lo = lengths.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = lengths.iter().copied().fold(0.0, f64::max);
        rows.push(Row::eq(t, &phi.label(), "equal-length", hi, lo, ctx.tol("equal-length", 1e-12) * hi.max(1.0)));
    }
    Ok(rows)
}

/// The derivative of `z ↦ e^{iz}` against central differences.
fn dexp_suite(ctx: &Ctx<'_>, t: usize) -> Result<Vec<Row>> {
    let mut rng = ctx.rng(t);
    let n = ctx.n;
    let x = hermitian_in(&mut rng, n, 0.1..3.0)?;
    let y = random_hermitian(&mut rng, n, 1.0)?;
    let h = 1e-5;
    let fd = (unitary_exp(&x.add(&y.scale(h)))?.mat() - unitary_exp(&x.sub(&y.scale(h)))?.mat()).scale(0.5 / h);
    let d = dexp(&x, &y)?;
    let rel = (&d - &fd).frobenius_norm() / d.frobenius_norm();
    Ok(vec![Row::le(t, "-", "finite-difference", rel, ctx.tol("finite-difference", 1e-6), 0.0)])
}

/// `|e^{it} − 1| ≥ |t|·√(1 − t²/12)` on a uniform grid over `[−π, π]`.
fn chord(ctx: &Ctx<'_>, t: usize) -> Result<Vec<Row>> {
    let m = ctx.cfg.trials.max(2) - 1;
    let s = if t == m { PI } else { -PI + 2.0 * PI * t as f64 / m as f64 };
    let c = chord_length(s)?;
    let direct = (2.0 * (1.0 - s.cos())).sqrt();
    Ok(vec![
        Row::ge(t, "-", "chord", c, chord_lower_bound(s), ctx.tol("chord", 1e-15)),
        Row::eq(t, "-", "formula", c, direct, ctx.tol("formula", 1e-7)),
    ])
}
