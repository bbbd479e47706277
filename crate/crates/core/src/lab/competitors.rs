use std::f64::consts::PI;

use rand::Rng;

use super::random::{random_hermitian, trial_rng};
use crate::error::{Error, Result};
use crate::geodesy::{PolygonalPath, SampledPath};
use crate::matcore::{eig_hermitian, principal_log_spectrum, EigenSystem, HermitianMatrix, UnitaryMatrix, C64};

fn exp_at(e: &EigenSystem<f64>, t: f64) -> crate::matcore::ComplexMatrix {
    e.map_spectrum(|l| C64::from_polar(1.0, t * l))
}

/// `sin(kπt)`, exactly zero at `t = 0` and `t = 1`.
fn sin_pi(k: f64, t: f64) -> f64 {
    if t == 0.0 || t == 1.0 {
        0.0
    } else {
        (k * PI * t).sin()
    }
}

fn check_exponent(z: &HermitianMatrix) -> Result<EigenSystem<f64>> {
    let e = eig_hermitian(z)?;
    if e.spectral_radius() > PI + crate::geodesy::PI_SLACK {
        return Err(Error::Domain(format!("‖z‖_∞ = {} exceeds π", e.spectral_radius())));
    }
    Ok(e)
}

/// `γ(t) = e^{itz}·e^{iε·sin(πt)·w}` sampled at `m + 1` uniform times.
///
/// The perturbation vanishes at both ends, so `γ` joins `1` to `e^{iz}` like
/// the segment it perturbs.
pub fn perturbed_geodesic(z: &HermitianMatrix, w: &HermitianMatrix, eps: f64, m: usize) -> Result<SampledPath> {
    if m < 16 {
        return Err(Error::Domain(format!("need at least 16 sampling intervals, got {m}")));
    }
    if z.dim() != w.dim() {
        return Err(Error::DimensionMismatch(z.dim(), w.dim()));
    }
    let ez = check_exponent(z)?;
    let ew = eig_hermitian(w)?;
    let n = z.dim();
    SampledPath::from_fn(m, |t| {
        if t == 0.0 {
            return UnitaryMatrix::identity(n);
        }
        UnitaryMatrix::project(exp_at(&ez, t) * exp_at(&ew, eps * sin_pi(1.0, t)))
    })
}

/// `γ(t) = e^{itz}·Π_j e^{iε_j·sin(jπt)·w_j}` sampled at `m + 1` uniform times,
/// a smooth endpoint-fixed competitor with several harmonics.
pub fn smooth_competitor(z: &HermitianMatrix, harmonics: &[(f64, HermitianMatrix)], m: usize) -> Result<SampledPath> {
    if m < 16 {
        return Err(Error::Domain(format!("need at least 16 sampling intervals, got {m}")));
    }
    let ez = check_exponent(z)?;
    let parts: Vec<(f64, EigenSystem<f64>)> =
        harmonics.iter().map(|(eps, w)| Ok((*eps, eig_hermitian(w)?))).collect::<Result<_>>()?;
    let n = z.dim();
    SampledPath::from_fn(m, |t| {
        if t == 0.0 {
            return UnitaryMatrix::identity(n);
        }
        let mut g = exp_at(&ez, t);
        for (j, (eps, e)) in parts.iter().enumerate() {
            g = g * exp_at(e, eps * sin_pi((j + 1) as f64, t));
        }
        UnitaryMatrix::project(g)
    })
}

/// Largest consecutive operator-norm gap accepted between vertices.
const MAX_VERTEX_GAP: f64 = 2.0 - 1e-6;

/// A polygonal path from `u` to `v` through `pieces − 1` random vertices.
///
/// Vertex `k` is the point `k/pieces` of the segment from `u` to `v`
/// multiplied by `e^{iH_k}` for a random Hermitian `H_k`; each piece runs
/// along the principal logarithm between consecutive vertices for time
/// `1/pieces`. A draw whose consecutive gaps reach 2 is repeated with a
/// smaller perturbation, up to 100 times. `pieces = 1` gives the segment.
pub fn random_polygonal(u: &UnitaryMatrix, v: &UnitaryMatrix, pieces: usize, seed: u64) -> Result<PolygonalPath> {
    if pieces == 0 {
        return Err(Error::Domain("a polygonal path needs at least one piece".into()));
    }
    if u.dim() != v.dim() {
        return Err(Error::DimensionMismatch(u.dim(), v.dim()));
    }
    let n = u.dim();
    let z = principal_log_spectrum(&u.between(v))?;
    let ez = eig_hermitian(&z.to_hermitian())?;
    let mut rng = trial_rng(seed, 0);
    let mut scale = 1.5;
    for _ in 0..100 {
        let mut vertices = vec![u.clone()];
        for k in 1..pieces {
            let on_segment = u.mat() * exp_at(&ez, k as f64 / pieces as f64);
            let r: f64 = rng.random_range(0.0..scale);
            let h = random_hermitian(&mut rng, n, r)?;
            let bump = crate::matcore::unitary_exp(&h)?;
            vertices.push(UnitaryMatrix::project(on_segment * bump.mat()));
        }
        vertices.push(v.clone());
        let mut steps = Vec::with_capacity(pieces);
        let mut ok = true;
        for w in vertices.windows(2) {
            let s = principal_log_spectrum(&w[0].between(&w[1]))?;
            if s.gap_from_identity() >= MAX_VERTEX_GAP {
                ok = false;
                break;
            }
            steps.push(s);
        }
        if ok {
            let dur = 1.0 / pieces as f64;
            let mut parts: Vec<(HermitianMatrix, f64)> =
                steps.iter().map(|s| (s.to_hermitian().scale(pieces as f64), dur)).collect();
            let used: f64 = dur * (pieces - 1) as f64;
            parts.last_mut().expect("pieces ≥ 1").1 = 1.0 - used;
            return PolygonalPath::new(u.clone(), parts);
        }
        scale *= 0.7;
    }
    Err(Error::Domain(format!("no admissible {pieces}-piece path after 100 draws")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geodesy::{geodesic_distance, polygonal_length, sampled_length};
    use crate::lab::random::haar_unitary;
    use crate::matcore::unitary_exp;
    use crate::norms::NormSpec;

    #[test]
    fn unperturbed_competitor_is_the_segment() {
        let mut rng = trial_rng(1, 0);
        let z = random_hermitian(&mut rng, 3, 2.0).unwrap();
        let w = random_hermitian(&mut rng, 3, 1.0).unwrap();
        let g = perturbed_geodesic(&z, &w, 0.0, 64).unwrap();
        for phi in NormSpec::all_builtins() {
            let want = phi.gauge(eig_hermitian(&z).unwrap().spectrum());
            assert!((sampled_length(&g, &phi) - want).abs() < 1e-10);
        }
    }

    #[test]
    fn perturbed_competitors_keep_endpoints() {
        let mut rng = trial_rng(2, 0);
        let z = random_hermitian(&mut rng, 4, 2.5).unwrap();
        let w = random_hermitian(&mut rng, 4, 1.0).unwrap();
        let g = perturbed_geodesic(&z, &w, 0.2, 100).unwrap();
        let end = unitary_exp(&z).unwrap();
        assert!(g.points().last().unwrap().mat().distance(end.mat()) < 1e-13);
        assert!(g.points()[0].mat().distance(UnitaryMatrix::identity(4).mat()) < 1e-15);
        assert!(perturbed_geodesic(&z, &w, 0.2, 8).is_err());
    }

    #[test]
    fn polygonal_paths_join_the_endpoints() {
        let mut rng = trial_rng(3, 0);
        let u = haar_unitary(&mut rng, 4);
        let v = haar_unitary(&mut rng, 4);
        for pieces in 1..=5 {
            let p = random_polygonal(&u, &v, pieces, 9).unwrap();
            assert!(p.endpoint().mat().distance(v.mat()) < 1e-12);
            let s1 = NormSpec::schatten(1.0).unwrap();
            let d = geodesic_distance(&u, &v, &s1).unwrap();
            let l = polygonal_length(&p, &s1);
            if pieces == 1 {
                assert!((l - d).abs() < 1e-12);
            } else {
                assert!(l >= d - 1e-9);
            }
        }
        assert!(random_polygonal(&u, &v, 0, 1).is_err());
    }
}
