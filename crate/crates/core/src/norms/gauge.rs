use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::spec::{sorted_abs, CustomGauge};
use crate::error::{Error, Result};

/// Budget and seed for the numeric dual of a gauge without a closed form.
#[derive(Clone, Debug)]
pub struct DualSolverConfig {
    pub restarts: usize,
    pub iterations: usize,
    /// Step-halving iterations run after the diminishing-step phase.
    pub refine_iterations: usize,
    pub seed: u64,
    /// Relative spread under which two restarts count as agreeing.
    pub agreement: f64,
}

impl Default for DualSolverConfig {
    fn default() -> Self {
        DualSolverConfig { restarts: 50, iterations: 500, refine_iterations: 200, seed: 0x5eed, agreement: 1e-6 }
    }
}

impl DualSolverConfig {
    /// Smaller budget used when a numeric dual is evaluated inside another.
    pub(crate) fn nested(&self) -> Self {
        DualSolverConfig {
            restarts: self.restarts.min(4),
            iterations: self.iterations.min(120),
            refine_iterations: self.refine_iterations.min(80),
            seed: self.seed ^ 0x9e37_79b9_7f4a_7c15,
            agreement: self.agreement,
        }
    }
}

#[derive(Clone, Debug)]
pub(crate) enum Gauge {
    Lp(f64),
    KyFan(usize),
    Custom(CustomGauge),
    Dual(Box<Gauge>),
}

pub(crate) fn conjugate_exponent(p: f64) -> f64 {
    if p == 1.0 {
        f64::INFINITY
    } else if p.is_infinite() {
        1.0
    } else {
        p / (p - 1.0)
    }
}

/// `ℓp` norm of a nonnegative vector, scaled to avoid overflow.
pub(crate) fn lp(s: &[f64], p: f64) -> f64 {
    let m = s.iter().fold(0.0f64, |a, &b| a.max(b));
    if m == 0.0 {
        return 0.0;
    }
    if p.is_infinite() {
        return m;
    }
    if p == 1.0 {
        return s.iter().sum();
    }
    m * s.iter().map(|x| (x / m).powf(p)).sum::<f64>().powf(1.0 / p)
}

fn kyfan_dual(s: &[f64], k: usize) -> f64 {
    let total: f64 = s.iter().sum();
    s.first().copied().unwrap_or(0.0).max(total / k as f64)
}

/// `max{s·t : 0 ≤ t_i ≤ 1, Σ t_i ≤ k}` for descending `s`, by greedy filling.
fn box_budget_lp(s: &[f64], k: f64) -> f64 {
    let mut budget = k;
    let mut acc = 0.0;
    for &x in s {
        if budget <= 0.0 {
            break;
        }
        let t = budget.min(1.0);
        acc += t * x;
        budget -= t;
    }
    acc
}

impl Gauge {
    /// Evaluates on a descending nonnegative vector.
    pub(crate) fn eval(&self, s: &[f64], cfg: &DualSolverConfig) -> Result<f64> {
        match self {
            Gauge::Lp(p) => Ok(lp(s, *p)),
            Gauge::KyFan(k) => Ok(s.iter().take(*k).sum()),
            Gauge::Custom(g) => Ok(g.eval_sorted(s)),
            Gauge::Dual(inner) => match inner.as_ref() {
                Gauge::Lp(p) => Ok(lp(s, conjugate_exponent(*p))),
                Gauge::KyFan(k) => Ok(kyfan_dual(s, *k)),
                Gauge::Dual(g) if matches!(g.as_ref(), Gauge::KyFan(_)) => {
                    let Gauge::KyFan(k) = g.as_ref() else { unreachable!() };
                    Ok(box_budget_lp(s, *k as f64))
                }
                Gauge::Dual(g) if matches!(g.as_ref(), Gauge::Lp(_)) => {
                    let Gauge::Lp(p) = g.as_ref() else { unreachable!() };
                    Ok(lp(s, conjugate_exponent(conjugate_exponent(*p))))
                }
                other => {
                    let nested = matches!(other, Gauge::Dual(_));
                    let inner_cfg = cfg.nested();
                    let outer_cfg = if nested { cfg.nested() } else { cfg.clone() };
                    let f = |t: &[f64]| other.eval(t, &inner_cfg);
                    let (best, converged) = maximize_ratio(&f, s, &outer_cfg)?;
                    if converged || nested {
                        Ok(best)
                    } else {
                        Err(Error::DualNotConverged { best })
                    }
                }
            },
        }
    }
}

/// Dual gauge `sup{v·t : g(t) ≤ 1}` computed numerically.
///
/// Only for callers that want the numeric answer for a gauge that also has a
/// closed form, e.g. to cross-check it.
pub fn numeric_dual_gauge(g: &(dyn Fn(&[f64]) -> f64 + Sync), v: &[f64], cfg: &DualSolverConfig) -> Result<f64> {
    let s = sorted_abs(v);
    let f = |t: &[f64]| Ok(g(&sorted_abs(t)));
    let (best, converged) = maximize_ratio(&f, &s, cfg)?;
    if converged {
        Ok(best)
    } else {
        Err(Error::DualNotConverged { best })
    }
}

fn project_simplex(v: &mut [f64]) {
    let mut u: Vec<f64> = v.to_vec();
    u.sort_by(|a, b| b.total_cmp(a));
    let mut css = 0.0;
    let mut theta = 0.0;
    for (i, &x) in u.iter().enumerate() {
        css += x;
        let t = (css - 1.0) / (i + 1) as f64;
        if x - t > 0.0 {
            theta = t;
        }
    }
    for x in v.iter_mut() {
        *x = (*x - theta).max(0.0);
    }
}

fn to_descending_simplex(t: &mut Vec<f64>) {
    project_simplex(t);
    t.sort_by(|a, b| b.total_cmp(a));
}

/// Derivative-free moves that cross kinks where difference quotients stall:
/// averaging a contiguous block of entries, shifting mass between
/// neighbours, and rescaling a head block against the tail.
fn polish(ratio: &dyn Fn(&[f64]) -> Result<f64>, t: &mut Vec<f64>, mut best: f64) -> Result<f64> {
    let n = t.len();
    let all_blocks = n <= 16;
    let mut delta = 0.25 / n as f64;
    let mut budget = 4000usize;
    while delta > 1e-13 && budget > 0 {
        let mut improved = false;
        for i in 0..n {
            for j in (i + 2)..=n {
                if !all_blocks && i != 0 && j != n {
                    continue;
                }
                let mean = t[i..j].iter().sum::<f64>() / (j - i) as f64;
                let mut cand = t.clone();
                cand[i..j].iter_mut().for_each(|x| *x = mean);
                let f = ratio(&cand)?;
                if f > best {
                    best = f;
                    *t = cand;
                    improved = true;
                }
            }
        }
        for i in 0..n.saturating_sub(1) {
            for (a, b) in [(i, i + 1), (i + 1, i)] {
                let mut cand = t.clone();
                let moved = delta.min(cand[b]);
                cand[a] += moved;
                cand[b] -= moved;
                to_descending_simplex(&mut cand);
                let f = ratio(&cand)?;
                if f > best {
                    best = f;
                    *t = cand;
                    improved = true;
                }
            }
        }
        let rho = (delta * n as f64).min(0.5);
        for j in 1..n {
            let head: f64 = t[..j].iter().sum();
            let tail: f64 = t[j..].iter().sum();
            if head <= 0.0 || tail <= 0.0 {
                continue;
            }
            for (h, tl) in [(1.0 + rho * tail / head, 1.0 - rho), (1.0 - rho, 1.0 + rho * head / tail)] {
                let mut cand = t.clone();
                cand[..j].iter_mut().for_each(|x| *x *= h);
                cand[j..].iter_mut().for_each(|x| *x *= tl);
                to_descending_simplex(&mut cand);
                let f = ratio(&cand)?;
                if f > best {
                    best = f;
                    *t = cand;
                    improved = true;
                }
            }
        }
        budget -= 1;
        if !improved {
            delta *= 0.5;
        }
    }
    Ok(best)
}

/// Maximizes `s·t / g(t)` over the probability simplex.
///
/// The ratio is scale invariant, so its maximum is the dual gauge at `s`.
/// Sorting `t` descending never lowers `s·t` for descending `s` and leaves
/// `g` unchanged, so iterates are kept sorted.
fn maximize_ratio(g: &dyn Fn(&[f64]) -> Result<f64>, s: &[f64], cfg: &DualSolverConfig) -> Result<(f64, bool)> {
    let n = s.len();
    if n == 0 || s.iter().all(|&x| x == 0.0) {
        return Ok((0.0, true));
    }
    let ratio = |t: &[f64]| -> Result<f64> {
        let d = g(t)?;
        let num: f64 = s.iter().zip(t).map(|(a, b)| a * b).sum();
        Ok(if d > 0.0 { num / d } else { f64::NEG_INFINITY })
    };
    let grad = |t: &[f64]| -> Result<Vec<f64>> {
        let h = 1e-6;
        let mut out = vec![0.0; n];
        let mut work = t.to_vec();
        for i in 0..n {
            work[i] = t[i] + h;
            let up = ratio(&work)?;
            work[i] = (t[i] - h).max(0.0);
            let down = ratio(&work)?;
            let span = work[i] - t[i];
            out[i] = (up - down) / (h - span);
            work[i] = t[i];
        }
        Ok(out)
    };

    let mut global = f64::NEG_INFINITY;
    for k in 1..=n {
        let mut t = vec![0.0; n];
        t[..k].iter_mut().for_each(|x| *x = 1.0 / k as f64);
        global = global.max(ratio(&t)?);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut finals = Vec::with_capacity(cfg.restarts);
    let eta0 = 0.5;
    for r in 0..cfg.restarts.max(1) {
        let mut t: Vec<f64> = match r {
            0 => {
                let tot: f64 = s.iter().sum();
                s.iter().map(|x| x / tot).collect()
            }
            1 => vec![1.0 / n as f64; n],
            _ => {
                let e: Vec<f64> = (0..n).map(|_| -(1.0 - rng.random::<f64>()).ln()).collect();
                let tot: f64 = e.iter().sum();
                e.iter().map(|x| x / tot).collect()
            }
        };
        to_descending_simplex(&mut t);
        let mut best_t = t.clone();
        let mut best = ratio(&t)?;
        for it in 1..=cfg.iterations {
            let gr = grad(&t)?;
            let norm = gr.iter().map(|x| x * x).sum::<f64>().sqrt();
            if !(norm > 0.0) || !norm.is_finite() {
                break;
            }
            let eta = eta0 / (it as f64).sqrt();
            for (x, d) in t.iter_mut().zip(&gr) {
                *x += eta * d / norm;
            }
            to_descending_simplex(&mut t);
            let f = ratio(&t)?;
            if f > best {
                best = f;
                best_t.clone_from(&t);
            }
        }
        let mut t = best_t;
        let mut eta = eta0 / (cfg.iterations.max(1) as f64).sqrt();
        let mut gr = grad(&t)?;
        for _ in 0..cfg.refine_iterations {
            let norm = gr.iter().map(|x| x * x).sum::<f64>().sqrt();
            if !(norm > 0.0) || !norm.is_finite() || eta < 1e-15 {
                break;
            }
            let mut cand: Vec<f64> = t.iter().zip(&gr).map(|(x, d)| x + eta * d / norm).collect();
            to_descending_simplex(&mut cand);
            let f = ratio(&cand)?;
            if f > best {
                best = f;
                t = cand;
                eta = (eta * 2.0).min(1.0);
                gr = grad(&t)?;
            } else {
                eta *= 0.5;
            }
        }
        best = polish(&ratio, &mut t, best)?;
        finals.push(best);
        global = global.max(best);
    }

    let tol = cfg.agreement * global.abs().max(1.0);
    let agreeing = finals.iter().filter(|&&f| f >= global - tol).count();
    let converged = agreeing >= finals.len().min(2);
    Ok((global, converged))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dual_of(g: Gauge, s: &[f64]) -> f64 {
        Gauge::Dual(Box::new(g)).eval(s, &DualSolverConfig::default()).unwrap()
    }

    #[test]
    fn lp_conjugates() {
        assert_eq!(conjugate_exponent(1.0), f64::INFINITY);
        assert_eq!(conjugate_exponent(f64::INFINITY), 1.0);
        assert!((conjugate_exponent(3.0) - 1.5).abs() < 1e-15);
        assert!((lp(&[4.0, 3.0], 2.0) - 5.0).abs() < 1e-15);
        assert_eq!(lp(&[0.0, 0.0], 2.0), 0.0);
    }

    #[test]
    fn kyfan_dual_examples() {
        assert_eq!(dual_of(Gauge::KyFan(2), &[5.0, 1.0, 1.0]), 5.0);
        assert_eq!(dual_of(Gauge::KyFan(2), &[1.0, 1.0, 1.0]), 1.5);
    }

    #[test]
    fn box_budget_matches_top_k() {
        assert_eq!(box_budget_lp(&[5.0, 3.0, 1.0], 2.0), 8.0);
        assert_eq!(box_budget_lp(&[5.0, 3.0, 1.0], 7.0), 9.0);
    }

    #[test]
    fn simplex_projection() {
        let mut v = vec![0.5, 0.5, 0.5];
        project_simplex(&mut v);
        for x in &v {
            assert!((x - 1.0 / 3.0).abs() < 1e-15);
        }
        let mut w = vec![2.0, 0.0];
        project_simplex(&mut w);
        assert_eq!(w, vec![1.0, 0.0]);
    }

    #[test]
    fn numeric_dual_matches_closed_forms() {
        let cfg = DualSolverConfig::default();
        let s = [3.0, 2.0, 0.5, 0.25];
        for p in [1.0, 1.5, 2.0, 3.0, f64::INFINITY] {
            let g = move |t: &[f64]| lp(t, p);
            let got = numeric_dual_gauge(&g, &s, &cfg).unwrap();
            let want = lp(&s, conjugate_exponent(p));
            assert!((got - want).abs() <= 1e-7 * want, "p = {p}: {got} vs {want}");
        }
        for k in 1..=4 {
            let g = move |t: &[f64]| t.iter().take(k).sum::<f64>();
            let got = numeric_dual_gauge(&g, &s, &cfg).unwrap();
            let want = kyfan_dual(&s, k);
            assert!((got - want).abs() <= 1e-7 * want, "k = {k}: {got} vs {want}");
        }
    }

    #[test]
    fn custom_dual_and_bidual() {
        let g = CustomGauge::new("l2", |t: &[f64]| lp(t, 2.0)).unwrap();
        let s = [4.0, 3.0, 1.0];
        let want = lp(&s, 2.0);
        let cfg = DualSolverConfig::default();
        let d = Gauge::Dual(Box::new(Gauge::Custom(g.clone()))).eval(&s, &cfg).unwrap();
        assert!((d - want).abs() < 1e-7 * want);
        let dd = Gauge::Dual(Box::new(Gauge::Dual(Box::new(Gauge::Custom(g))))).eval(&s, &cfg).unwrap();
        assert!((dd - want).abs() < 1e-5 * want, "{dd} vs {want}");
    }
}
