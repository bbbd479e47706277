use std::f64::consts::PI;

use super::PI_SLACK;
use crate::error::{Error, Result};
use crate::matcore::{
    eig_hermitian, principal_log_spectrum, EigenSystem, HermitianMatrix, LogSpectrum, UnitaryMatrix, C64,
};
use crate::norms::NormSpec;

fn sorted_abs(v: &[f64]) -> Vec<f64> {
    let mut s: Vec<f64> = v.iter().map(|x| x.abs()).collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

fn exp_it(base: &UnitaryMatrix, e: &EigenSystem<f64>, t: f64) -> UnitaryMatrix {
    let step = e.map_spectrum(|l| C64::from_polar(1.0, t * l));
    UnitaryMatrix::project(base.mat() * step)
}

/// `δ(t) = u·e^{itz}` for `t ∈ [0, 1]`, with `‖z‖_∞ ≤ π`.
#[derive(Clone, Debug)]
pub struct GeodesicSegment {
    base: UnitaryMatrix,
    exponent: HermitianMatrix,
    eigen: EigenSystem<f64>,
}

impl GeodesicSegment {
    pub fn new(base: UnitaryMatrix, exponent: HermitianMatrix) -> Result<Self> {
        if base.dim() != exponent.dim() {
            return Err(Error::DimensionMismatch(base.dim(), exponent.dim()));
        }
        let eigen = eig_hermitian(&exponent)?;
        let r = eigen.spectral_radius();
        if r > PI + PI_SLACK {
            return Err(Error::Domain(format!("segment exponent has ‖z‖_∞ = {r} > π")));
        }
        Ok(GeodesicSegment { base, exponent, eigen })
    }

    pub fn base(&self) -> &UnitaryMatrix {
        &self.base
    }

    pub fn exponent(&self) -> &HermitianMatrix {
        &self.exponent
    }

    /// Singular values of the exponent, descending.
    pub fn speeds(&self) -> Vec<f64> {
        sorted_abs(self.eigen.spectrum())
    }

    pub fn eval(&self, t: f64) -> UnitaryMatrix {
        exp_it(&self.base, &self.eigen, t)
    }

    pub fn endpoint(&self) -> UnitaryMatrix {
        self.eval(1.0)
    }

    /// The piece on `[s0, s1]`, reparametrized over `[0, 1]`.
    pub fn restrict(&self, s0: f64, s1: f64) -> Result<Self> {
        if !(0.0 <= s0 && s0 <= s1 && s1 <= 1.0) {
            return Err(Error::Domain(format!("restriction [{s0}, {s1}] is not inside [0, 1]")));
        }
        GeodesicSegment::new(self.eval(s0), self.exponent.scale(s1 - s0))
    }
}

/// The segment from `u` to `v` with exponent `log(u*v)`.
pub fn geodesic_between(u: &UnitaryMatrix, v: &UnitaryMatrix) -> Result<GeodesicSegment> {
    if u.dim() != v.dim() {
        return Err(Error::DimensionMismatch(u.dim(), v.dim()));
    }
    let z = principal_log_spectrum(&u.between(v))?.to_hermitian();
    GeodesicSegment::new(u.clone(), z)
}

/// `d_φ(u, v) = ‖log(u*v)‖_φ`.
pub fn geodesic_distance(u: &UnitaryMatrix, v: &UnitaryMatrix, phi: &NormSpec) -> Result<f64> {
    if u.dim() != v.dim() {
        return Err(Error::DimensionMismatch(u.dim(), v.dim()));
    }
    Ok(phi.gauge(principal_log_spectrum(&u.between(v))?.angles()))
}

pub fn segment_length(s: &GeodesicSegment, phi: &NormSpec) -> f64 {
    phi.gauge(s.eigen.spectrum())
}

/// A continuous path made of segments: on its `k`-th interval the path moves
/// with constant velocity exponent `z_k` for the piece's duration.
#[derive(Clone, Debug)]
pub struct PolygonalPath {
    base: UnitaryMatrix,
    pieces: Vec<(HermitianMatrix, f64)>,
    eigens: Vec<EigenSystem<f64>>,
}

impl PolygonalPath {
    pub fn new(base: UnitaryMatrix, pieces: Vec<(HermitianMatrix, f64)>) -> Result<Self> {
        if pieces.is_empty() {
            return Err(Error::Domain("a polygonal path needs at least one piece".into()));
        }
        let mut total = 0.0;
        let mut eigens = Vec::with_capacity(pieces.len());
        for (k, (z, dur)) in pieces.iter().enumerate() {
            if z.dim() != base.dim() {
                return Err(Error::DimensionMismatch(base.dim(), z.dim()));
            }
            if !(*dur > 0.0) || !dur.is_finite() {
                return Err(Error::Domain(format!("piece {k} has non-positive duration {dur}")));
            }
            total += dur;
            eigens.push(eig_hermitian(z)?);
        }
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::Domain(format!("durations sum to {total}, not 1")));
        }
        Ok(PolygonalPath { base, pieces, eigens })
    }

    pub fn base(&self) -> &UnitaryMatrix {
        &self.base
    }

    pub fn pieces(&self) -> &[(HermitianMatrix, f64)] {
        &self.pieces
    }

    /// Start of every piece followed by the endpoint.
    pub fn vertices(&self) -> Vec<UnitaryMatrix> {
        let mut out = Vec::with_capacity(self.pieces.len() + 1);
        let mut cur = self.base.clone();
        for (e, (_, dur)) in self.eigens.iter().zip(&self.pieces) {
            let next = exp_it(&cur, e, *dur);
            out.push(std::mem::replace(&mut cur, next));
        }
        out.push(cur);
        out
    }

    pub fn endpoint(&self) -> UnitaryMatrix {
        self.vertices().pop().expect("at least one vertex")
    }

    pub fn eval(&self, t: f64) -> UnitaryMatrix {
        let mut cur = self.base.clone();
        let mut start = 0.0;
        let last = self.pieces.len() - 1;
        for (k, (e, (_, dur))) in self.eigens.iter().zip(&self.pieces).enumerate() {
            if t <= start + dur || k == last {
                return exp_it(&cur, e, (t - start).clamp(0.0, *dur));
            }
            cur = exp_it(&cur, e, *dur);
            start += dur;
        }
        cur
    }
}

/// `Σ_k duration_k·‖z_k‖_φ`.
pub fn polygonal_length(p: &PolygonalPath, phi: &NormSpec) -> f64 {
    p.eigens.iter().zip(&p.pieces).map(|(e, (_, dur))| dur * phi.gauge(e.spectrum())).sum()
}

/// A curve known at sample times `0 = t₀ < … < t_m = 1`, whose consecutive
/// samples are closer than 2 in operator norm.
#[derive(Clone, Debug)]
pub struct SampledPath {
    times: Vec<f64>,
    points: Vec<UnitaryMatrix>,
    steps: Vec<LogSpectrum>,
}

impl SampledPath {
    pub fn new(times: Vec<f64>, points: Vec<UnitaryMatrix>) -> Result<Self> {
        if times.len() != points.len() || times.len() < 2 {
            return Err(Error::Domain(format!(
                "need matching times and points, at least two (got {} and {})",
                times.len(),
                points.len()
            )));
        }
        if times[0] != 0.0 || *times.last().unwrap() != 1.0 {
            return Err(Error::Domain("sample times must start at 0 and end at 1".into()));
        }
        if times.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::Domain("sample times must be strictly increasing".into()));
        }
        let n = points[0].dim();
        if let Some(p) = points.iter().find(|p| p.dim() != n) {
            return Err(Error::DimensionMismatch(n, p.dim()));
        }
        let mut steps = Vec::with_capacity(points.len() - 1);
        for (k, w) in points.windows(2).enumerate() {
            let step = principal_log_spectrum(&w[0].between(&w[1]))?;
            let gap = step.gap_from_identity();
            if gap >= 2.0 - PI_SLACK {
                return Err(Error::GapTooLarge { index: k, gap });
            }
            steps.push(step);
        }
        Ok(SampledPath { times, points, steps })
    }

    /// Samples `f` at `m + 1` equally spaced times.
    pub fn from_fn(m: usize, mut f: impl FnMut(f64) -> UnitaryMatrix) -> Result<Self> {
        let m = m.max(1);
        let times: Vec<f64> = (0..=m).map(|k| if k == m { 1.0 } else { k as f64 / m as f64 }).collect();
        let points = times.iter().map(|&t| f(t)).collect();
        SampledPath::new(times, points)
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn points(&self) -> &[UnitaryMatrix] {
        &self.points
    }
}

/// Inscribed polygonal length `Σ_k ‖log(γ(t_k)*γ(t_{k+1}))‖_φ`; a lower bound
/// on the length of any curve through the samples.
pub fn sampled_length(path: &SampledPath, phi: &NormSpec) -> f64 {
    path.steps.iter().map(|s| phi.gauge(s.angles())).sum()
}
