use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::gauge::{DualSolverConfig, Gauge};
use crate::error::{Error, Result};

type GaugeFn = dyn Fn(&[f64]) -> f64 + Send + Sync;

/// A caller-supplied symmetric gauge function.
///
/// The closure receives nonnegative entries in descending order. Sorting
/// and taking absolute values happen before the call, so permutation and
/// sign invariance hold by construction; the norm axioms are the caller's
/// responsibility and can be probed with [`check_gauge_axioms`].
#[derive(Clone)]
pub struct CustomGauge {
    name: String,
    f: Arc<GaugeFn>,
}

impl CustomGauge {
    /// Wraps `f`, checking the normalization `g(1, 0, …, 0) = 1`.
    pub fn new(name: impl Into<String>, f: impl Fn(&[f64]) -> f64 + Send + Sync + 'static) -> Result<Self> {
        let g = CustomGauge { name: name.into(), f: Arc::new(f) };
        for n in 1..=4 {
            let mut e1 = vec![0.0; n];
            e1[0] = 1.0;
            let v = g.eval_sorted(&e1);
            if !((v - 1.0).abs() <= 1e-12) {
                return Err(Error::Config(format!(
                    "custom gauge `{}` is not normalized: g(e1) = {v} in dimension {n}",
                    g.name
                )));
            }
        }
        Ok(g)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub(crate) fn eval_sorted(&self, s: &[f64]) -> f64 {
        (self.f)(s)
    }

    /// Evaluates on an arbitrary real vector.
    pub fn eval(&self, v: &[f64]) -> f64 {
        self.eval_sorted(&sorted_abs(v))
    }
}

impl fmt::Debug for CustomGauge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CustomGauge({})", self.name)
    }
}

/// Samples random vectors and reports the first violated gauge axiom.
pub fn check_gauge_axioms(g: &CustomGauge, dim: usize, samples: usize, seed: u64) -> std::result::Result<(), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let draw = |rng: &mut ChaCha8Rng| -> Vec<f64> { (0..dim).map(|_| rng.random_range(-3.0..3.0)).collect() };
    for _ in 0..samples {
        let x = draw(&mut rng);
        let y = draw(&mut rng);
        let c: f64 = rng.random_range(-4.0..4.0);
        let gx = g.eval(&x);
        let gy = g.eval(&y);
        let scale = 1.0 + gx + gy;
        if !gx.is_finite() || gx < 0.0 {
            return Err(format!("g({x:?}) = {gx} is not a nonnegative real"));
        }
        let sum: Vec<f64> = x.iter().zip(&y).map(|(a, b)| a + b).collect();
        if g.eval(&sum) > gx + gy + 1e-12 * scale {
            return Err(format!("triangle inequality fails at {x:?}, {y:?}"));
        }
        let cx: Vec<f64> = x.iter().map(|a| c * a).collect();
        if (g.eval(&cx) - c.abs() * gx).abs() > 1e-12 * scale * (1.0 + c.abs()) {
            return Err(format!("homogeneity fails at {x:?} with factor {c}"));
        }
        if x.iter().any(|a| *a != 0.0) && gx <= 0.0 {
            return Err(format!("g vanishes at nonzero {x:?}"));
        }
    }
    Ok(())
}

pub(crate) fn sorted_abs(v: &[f64]) -> Vec<f64> {
    let mut s: Vec<f64> = v.iter().map(|x| x.abs()).collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

#[derive(Clone, Debug)]
pub enum NormKind {
    Schatten(f64),
    KyFan(usize),
    Operator,
    Trace,
    Custom(CustomGauge),
}

/// A symmetric norm `‖·‖_φ`, normalized so a rank-one projection has norm 1.
#[derive(Clone)]
pub struct NormSpec {
    kind: NormKind,
    rotund: bool,
}

impl NormSpec {
    pub fn schatten(p: f64) -> Result<Self> {
        if !(p >= 1.0) {
            return Err(Error::NormSelector { selector: format!("schatten:{p}"), reason: "p must be at least 1".into() });
        }
        Ok(NormSpec { kind: NormKind::Schatten(p), rotund: p > 1.0 && p.is_finite() })
    }

    pub fn kyfan(k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::NormSelector { selector: "kyfan:0".into(), reason: "k must be at least 1".into() });
        }
        Ok(NormSpec { kind: NormKind::KyFan(k), rotund: false })
    }

    pub fn operator() -> Self {
        NormSpec { kind: NormKind::Operator, rotund: false }
    }

    pub fn trace() -> Self {
        NormSpec { kind: NormKind::Trace, rotund: false }
    }

    /// A custom gauge with caller-declared rotundity.
    pub fn custom(gauge: CustomGauge, rotund: bool) -> Self {
        NormSpec { kind: NormKind::Custom(gauge), rotund }
    }

    /// Schatten 1, 1.5, 2, 3, ∞ and Ky-Fan 1, 2.
    pub fn standard() -> Vec<NormSpec> {
        vec![
            NormSpec::schatten(1.0).unwrap(),
            NormSpec::schatten(1.5).unwrap(),
            NormSpec::schatten(2.0).unwrap(),
            NormSpec::schatten(3.0).unwrap(),
            NormSpec::schatten(f64::INFINITY).unwrap(),
            NormSpec::kyfan(1).unwrap(),
            NormSpec::kyfan(2).unwrap(),
        ]
    }

    /// [`NormSpec::standard`] plus the operator and trace norms.
    pub fn all_builtins() -> Vec<NormSpec> {
        let mut v = Self::standard();
        v.push(NormSpec::operator());
        v.push(NormSpec::trace());
        v
    }

    pub fn kind(&self) -> &NormKind {
        &self.kind
    }

    pub fn is_rotund(&self) -> bool {
        self.rotund
    }

    pub fn is_custom(&self) -> bool {
        matches!(self.kind, NormKind::Custom(_))
    }

    /// Selector string, e.g. `schatten:1.5`, `schatten:inf`, `kyfan:2`.
    pub fn label(&self) -> String {
        match &self.kind {
            NormKind::Schatten(p) if p.is_infinite() => "schatten:inf".into(),
            NormKind::Schatten(p) => format!("schatten:{p}"),
            NormKind::KyFan(k) => format!("kyfan:{k}"),
            NormKind::Operator => "operator".into(),
            NormKind::Trace => "trace".into(),
            NormKind::Custom(g) => format!("custom:{}", g.name()),
        }
    }

    pub(crate) fn to_gauge(&self) -> Gauge {
        match &self.kind {
            NormKind::Schatten(p) => Gauge::Lp(*p),
            NormKind::KyFan(k) => Gauge::KyFan(*k),
            NormKind::Operator => Gauge::Lp(f64::INFINITY),
            NormKind::Trace => Gauge::Lp(1.0),
            NormKind::Custom(g) => Gauge::Custom(g.clone()),
        }
    }

    /// The gauge applied to `|v|` sorted descending.
    pub fn gauge(&self, v: &[f64]) -> f64 {
        let s = sorted_abs(v);
        self.to_gauge().eval(&s, &DualSolverConfig::default()).expect("primal gauges are closed form")
    }

    pub fn dual_gauge(&self, v: &[f64]) -> Result<f64> {
        self.dual_gauge_with(v, &DualSolverConfig::default())
    }

    pub fn dual_gauge_with(&self, v: &[f64], cfg: &DualSolverConfig) -> Result<f64> {
        Gauge::Dual(Box::new(self.to_gauge())).eval(&sorted_abs(v), cfg)
    }

    pub fn bidual_gauge_with(&self, v: &[f64], cfg: &DualSolverConfig) -> Result<f64> {
        Gauge::Dual(Box::new(Gauge::Dual(Box::new(self.to_gauge())))).eval(&sorted_abs(v), cfg)
    }
}

impl fmt::Debug for NormSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "NormSpec({})", self.label())
    }
}

impl fmt::Display for NormSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

impl FromStr for NormSpec {
    type Err = Error;

    fn from_str(sel: &str) -> Result<Self> {
        let bad = |reason: &str| Error::NormSelector { selector: sel.to_string(), reason: reason.to_string() };
        let t = sel.trim();
        match t.split_once(':') {
            None => match t {
                "operator" => Ok(NormSpec::operator()),
                "trace" => Ok(NormSpec::trace()),
                _ => Err(bad("expected schatten:<p>, kyfan:<k>, operator or trace")),
            },
            Some(("schatten", p)) => {
                let p = match p {
                    "inf" | "infinity" => f64::INFINITY,
                    _ => p.parse::<f64>().map_err(|_| bad("p must be a real number or `inf`"))?,
                };
                if p.is_nan() {
                    return Err(bad("p must be a real number or `inf`"));
                }
                NormSpec::schatten(p).map_err(|_| bad("p must be at least 1"))
            }
            Some(("kyfan", k)) => {
                let k = k.parse::<usize>().map_err(|_| bad("k must be a positive integer"))?;
                NormSpec::kyfan(k).map_err(|_| bad("k must be a positive integer"))
            }
            Some(_) => Err(bad("expected schatten:<p>, kyfan:<k>, operator or trace")),
        }
    }
}
