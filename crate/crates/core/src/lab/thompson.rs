use super::random::{haar_unitary, trial_rng};
use super::ExperimentConfig;
use crate::error::{Error, Result};
use crate::matcore::{unitary_exp, ComplexMatrix, ExpDerivative, HermitianMatrix, UnitaryMatrix};

/// Search budget for [`thompson_decompose_with`].
#[derive(Clone, Debug)]
pub struct ThompsonOptions {
    pub restarts: usize,
    pub iterations: usize,
    /// A run counts as converged when its residual is at most this.
    pub tolerance: f64,
    pub seed: u64,
}

impl Default for ThompsonOptions {
    fn default() -> Self {
        ThompsonOptions { restarts: 20, iterations: 2000, tolerance: 1e-6, seed: 0 }
    }
}

/// Outcome of one restart.
#[derive(Clone, Debug)]
pub struct RestartDiagnostic {
    pub restart: usize,
    pub residual: f64,
    pub iterations: usize,
}

#[derive(Clone, Debug)]
pub struct ThompsonResult {
    pub conjugators: (UnitaryMatrix, UnitaryMatrix),
    /// `‖e^{ia}e^{ib} − e^{i(uau* + vbv*)}‖_F` at the returned conjugators.
    pub residual: f64,
    /// Iterations summed over all restarts.
    pub iterations: usize,
    pub converged: bool,
    pub restarts: Vec<RestartDiagnostic>,
}

struct State {
    u: UnitaryMatrix,
    v: UnitaryMatrix,
    f: f64,
    grad_u: HermitianMatrix,
    grad_v: HermitianMatrix,
}

struct Problem<'a> {
    a: &'a HermitianMatrix,
    b: &'a HermitianMatrix,
    target: ComplexMatrix,
}

impl Problem<'_> {
    fn value(&self, u: &UnitaryMatrix, v: &UnitaryMatrix) -> Result<f64> {
        let s = self.a.conjugate_by(u).add(&self.b.conjugate_by(v));
        Ok((unitary_exp(&s)?.mat() - &self.target).frobenius_norm().powi(2))
    }

    /// Objective `‖e^{iS} − M‖²_F` and its gradients for the left
    /// perturbations `u ↦ e^{iα}u`, `v ↦ e^{iβ}v`.
    fn state(&self, u: UnitaryMatrix, v: UnitaryMatrix) -> Result<State> {
        let a1 = self.a.conjugate_by(&u);
        let b1 = self.b.conjugate_by(&v);
        let d = ExpDerivative::at(&a1.add(&b1))?;
        let r = d.exponential().mat() - &self.target;
        let gamma_h = d.apply_adjoint(&r).adjoint();
        let grad = |c: &HermitianMatrix| {
            let g = c.mat().commutator(&gamma_h).scale_complex(crate::matcore::C64::new(0.0, 2.0));
            HermitianMatrix::symmetrize(g)
        };
        Ok(State { f: r.frobenius_norm().powi(2), grad_u: grad(&a1), grad_v: grad(&b1), u, v })
    }
}

fn step(w: &UnitaryMatrix, g: &HermitianMatrix, eta: f64) -> Result<UnitaryMatrix> {
    Ok(unitary_exp(&g.scale(-eta))?.compose(w))
}

/// Descends from `(u, v)` until the residual drops below `goal`.
fn descend(p: &Problem<'_>, u: UnitaryMatrix, v: UnitaryMatrix, iterations: usize, goal: f64) -> Result<(State, usize)> {
    let mut s = p.state(u, v)?;
    let mut eta = 0.1;
    let mut it = 0;
    while it < iterations && s.f.sqrt() > goal {
        it += 1;
        let gsq = s.grad_u.mat().frobenius_norm().powi(2) + s.grad_v.mat().frobenius_norm().powi(2);
        if gsq == 0.0 {
            break;
        }
        let mut accepted = None;
        while eta > 1e-16 {
            let u1 = step(&s.u, &s.grad_u, eta)?;
            let v1 = step(&s.v, &s.grad_v, eta)?;
            let f1 = p.value(&u1, &v1)?;
            if f1 <= s.f - 1e-4 * eta * gsq {
                accepted = Some((u1, v1));
                break;
            }
            eta *= 0.5;
        }
        match accepted {
            Some((u1, v1)) => {
                s = p.state(u1, v1)?;
                eta = (eta * 2.0).min(10.0);
            }
            None => break,
        }
    }
    Ok((s, it))
}

/// Searches for unitaries with `e^{ia}e^{ib} = e^{i(uau* + vbv*)}`.
///
/// Restart 0 starts from `u = v = 1`, which is already exact for commuting
/// inputs; later restarts start from Haar-random pairs.
pub fn thompson_decompose_with(a: &HermitianMatrix, b: &HermitianMatrix, opts: &ThompsonOptions) -> Result<ThompsonResult> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch(a.dim(), b.dim()));
    }
    let n = a.dim();
    let p = Problem { a, b, target: unitary_exp(a)?.compose(&unitary_exp(b)?).into_mat() };
    let goal = opts.tolerance * 1e-2;
    let mut diagnostics = Vec::new();
    let mut total = 0;
    let mut best: Option<(f64, UnitaryMatrix, UnitaryMatrix)> = None;
    for r in 0..opts.restarts.max(1) {
        let (u0, v0) = if r == 0 {
            (UnitaryMatrix::identity(n), UnitaryMatrix::identity(n))
        } else {
            let mut rng = trial_rng(opts.seed, r as u64);
            (haar_unitary(&mut rng, n), haar_unitary(&mut rng, n))
        };
        let (s, it) = descend(&p, u0, v0, opts.iterations, goal)?;
        total += it;
        let residual = p.value(&s.u, &s.v)?.sqrt();
        diagnostics.push(RestartDiagnostic { restart: r, residual, iterations: it });
        if best.as_ref().is_none_or(|b| residual < b.0) {
            best = Some((residual, s.u, s.v));
        }
        if residual <= goal {
            break;
        }
    }
    let (residual, u, v) = best.expect("at least one restart");
    Ok(ThompsonResult {
        conjugators: (u, v),
        residual,
        iterations: total,
        converged: residual <= opts.tolerance,
        restarts: diagnostics,
    })
}

/// [`thompson_decompose_with`] seeded from an experiment configuration; the
/// `thompson` tolerance override replaces the default `1e-6`.
pub fn thompson_decompose(a: &HermitianMatrix, b: &HermitianMatrix, cfg: &ExperimentConfig) -> Result<ThompsonResult> {
    let opts = ThompsonOptions { seed: cfg.seed, tolerance: cfg.tolerance("thompson", 1e-6), ..Default::default() };
    thompson_decompose_with(a, b, &opts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lab::random::random_hermitian;

    #[test]
    fn commuting_inputs_need_no_search() {
        let a = HermitianMatrix::from_real_diagonal(&[0.3, -0.7, 1.0]);
        let b = HermitianMatrix::from_real_diagonal(&[0.9, 0.1, -0.4]);
        let r = thompson_decompose_with(&a, &b, &ThompsonOptions::default()).unwrap();
        assert!(r.residual <= 1e-12 && r.converged);
        assert_eq!(r.iterations, 0);
        let zero = HermitianMatrix::zeros(3);
        let mut rng = trial_rng(5, 0);
        let c = random_hermitian(&mut rng, 3, 1.0).unwrap();
        let r = thompson_decompose_with(&c, &zero, &ThompsonOptions::default()).unwrap();
        assert!(r.residual <= 1e-12);
        assert!(r.conjugators.0.mat().distance(UnitaryMatrix::identity(3).mat()) < 1e-15);
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let mut rng = trial_rng(11, 0);
        let a = random_hermitian(&mut rng, 3, 1.0).unwrap();
        let b = random_hermitian(&mut rng, 3, 1.0).unwrap();
        let p = Problem { a: &a, b: &b, target: unitary_exp(&a).unwrap().compose(&unitary_exp(&b).unwrap()).into_mat() };
        let u = haar_unitary(&mut rng, 3);
        let v = haar_unitary(&mut rng, 3);
        let s = p.state(u.clone(), v.clone()).unwrap();
        let dir = random_hermitian(&mut rng, 3, 1.0).unwrap();
        let h = 1e-6;
        let fp = p.value(&unitary_exp(&dir.scale(h)).unwrap().compose(&u), &v).unwrap();
        let fm = p.value(&unitary_exp(&dir.scale(-h)).unwrap().compose(&u), &v).unwrap();
        let fd = (fp - fm) / (2.0 * h);
        let analytic = (dir.mat() * s.grad_u.mat()).trace().re;
        assert!((fd - analytic).abs() < 1e-6 * (1.0 + analytic.abs()), "{fd} vs {analytic}");
        let fp = p.value(&u, &unitary_exp(&dir.scale(h)).unwrap().compose(&v)).unwrap();
        let fm = p.value(&u, &unitary_exp(&dir.scale(-h)).unwrap().compose(&v)).unwrap();
        let fd = (fp - fm) / (2.0 * h);
        let analytic = (dir.mat() * s.grad_v.mat()).trace().re;
        assert!((fd - analytic).abs() < 1e-6 * (1.0 + analytic.abs()), "{fd} vs {analytic}");
    }

    #[test]
    fn random_pairs_converge() {
        let mut ok = 0;
        for t in 0..10 {
            let mut rng = trial_rng(21, t);
            let a = random_hermitian(&mut rng, 3, 1.0).unwrap();
            let b = random_hermitian(&mut rng, 3, 1.0).unwrap();
            let r = thompson_decompose_with(&a, &b, &ThompsonOptions { seed: t, ..Default::default() }).unwrap();
            let s = a.conjugate_by(&r.conjugators.0).add(&b.conjugate_by(&r.conjugators.1));
            let lhs = unitary_exp(&a).unwrap().compose(&unitary_exp(&b).unwrap());
            let honest = unitary_exp(&s).unwrap().mat().distance(lhs.mat());
            assert!((honest - r.residual).abs() < 1e-12);
            ok += r.converged as usize;
            eprintln!("trial {t}: {:?}", r.restarts);
        }
        assert_eq!(ok, 10);
    }
}
