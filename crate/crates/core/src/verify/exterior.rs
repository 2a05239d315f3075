//! Checks outside a convex obstacle with explicit harmonic families whose
//! sup-norm over the exterior and derivatives are known analytically.

use std::f64::consts::PI;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::report::VerificationReport;
use crate::coefficients::{exterior_bound, EstimateKind};
use crate::error::{Error, Result};
use crate::geometry::{distance_to_convex, norm, ConvexBody};

/// Families harmonic (or analytic) outside any convex body containing the
/// origin.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExteriorFamily {
    /// `u = 1/|x|` in three dimensions, checked against the gradient bound.
    InverseDistance,
    /// `u = grad(1/|x|) = -x/|x|^3` in three dimensions, checked against the
    /// directional-derivative, divergence, Lamé and Stokes bounds.
    GradientOfInverseDistance,
    /// `f = z^{-k}` in the plane, checked against the derivative bounds of
    /// orders `1..=3`.
    InversePower { k: u32 },
}

impl FromStr for ExteriorFamily {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "inverse-distance" => Ok(ExteriorFamily::InverseDistance),
            "gradient-inverse-distance" => Ok(ExteriorFamily::GradientOfInverseDistance),
            _ => {
                if let Some(k) = s.strip_prefix("inverse-power:") {
                    let k = k.parse().map_err(|_| Error::Parse(format!("bad power in '{s}'")))?;
                    if k == 0 {
                        return Err(Error::Parse("power must be positive".into()));
                    }
                    Ok(ExteriorFamily::InversePower { k })
                } else {
                    Err(Error::Parse(format!(
                        "unknown family '{s}' (inverse-distance, gradient-inverse-distance, inverse-power:K)"
                    )))
                }
            }
        }
    }
}

/// Largest derivative order checked for the planar family.
pub const EXTERIOR_MAX_ORDER: u32 = 3;

impl ExteriorFamily {
    fn dim(&self) -> usize {
        match self {
            ExteriorFamily::InversePower { .. } => 2,
            _ => 3,
        }
    }
}

/// Points at distance `10^u`, `u` uniform in `[-3, 2]`, from the body along
/// seeded random rays from the origin (which must be an interior point).
/// Rays that never leave an unbounded body are skipped.
pub fn exterior_sample_points(body: &ConvexBody, count: usize, seed: u64) -> Result<Vec<Vec<f64>>> {
    let n = body.dim();
    let origin = vec![0.0; n];
    body.inner_distance(&origin)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    let mut attempts = 0;
    while out.len() < count {
        attempts += 1;
        if attempts > 100 * count + 100 {
            return Err(Error::domain("could not place sample points outside the body"));
        }
        let dir = random_direction(&mut rng, n);
        let target = 10f64.powf(rng.gen_range(-3.0..2.0));
        let at = |t: f64| -> Result<f64> {
            let x: Vec<f64> = dir.iter().map(|d| d * t).collect();
            if body.contains(&x) {
                Ok(0.0)
            } else {
                Ok(distance_to_convex(body, &x)?.distance)
            }
        };
        // bracket, then bisect the distance along the ray
        let mut hi = 1.0;
        while at(hi)? < target && hi < 1e8 {
            hi *= 2.0;
        }
        if at(hi)? < target {
            continue;
        }
        let mut lo = 0.0;
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if at(mid)? < target {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi - lo <= 1e-15 * hi {
                break;
            }
        }
        let x: Vec<f64> = dir.iter().map(|d| d * hi).collect();
        if !body.contains(&x) {
            out.push(x);
        }
    }
    Ok(out)
}

fn random_direction(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    if n == 2 {
        let t = rng.gen_range(0.0..2.0 * PI);
        return vec![t.cos(), t.sin()];
    }
    let z: f64 = rng.gen_range(-1.0..1.0);
    let t = rng.gen_range(0.0..2.0 * PI);
    let s = (1.0 - z * z).sqrt();
    let mut v = vec![s * t.cos(), s * t.sin(), z];
    v.resize(n, 0.0);
    let l = norm(&v);
    v.iter_mut().for_each(|c| *c /= l);
    v
}

/// `k (k+1) ... (k+s-1)`, the size factor of `d^s/dz^s z^{-k}`.
fn rising(k: u32, s: u32) -> f64 {
    (0..s).map(|j| f64::from(k + j)).product()
}

/// Checks the family against the exterior bounds at every point.
pub fn exterior_suite(body: &ConvexBody, family: ExteriorFamily, points: &[Vec<f64>]) -> Result<Vec<VerificationReport>> {
    let n = body.dim();
    if n != family.dim() {
        return Err(Error::domain(format!(
            "family lives in R^{}, body in R^{n}",
            family.dim()
        )));
    }
    // the family is singular only at the origin, so it must be inside the body
    let rho0 = body
        .inner_distance(&vec![0.0; n])
        .map_err(|_| Error::domain("the origin must be an interior point of the body"))?;
    let mut out = Vec::new();
    for x in points {
        let r = norm(x);
        let mut add = |case: &str, kind: EstimateKind, lhs: f64, sup: f64| -> Result<()> {
            let b = exterior_bound(body, x, kind)?;
            let mut rep = VerificationReport::blank(case, n).judged(lhs, b.value * sup, b.err_est * sup);
            rep.r = Some(r);
            match kind {
                EstimateKind::Directional { m } => rep.m = Some(m),
                EstimateKind::Gradient => rep.m = Some(1),
                EstimateKind::Analytic { s } => rep.s = Some(s),
                EstimateKind::LameDiv { sigma } => rep.sigma = Some(sigma),
                _ => {}
            }
            out.push(rep);
            Ok(())
        };
        match family {
            ExteriorFamily::InverseDistance => {
                // sup over the exterior is attained at the nearest boundary point
                add("exterior-gradient", EstimateKind::Gradient, r.powi(-2), 1.0 / rho0)?;
            }
            ExteriorFamily::GradientOfInverseDistance => {
                let sup = rho0.powi(-2);
                // Jacobian -(I - 3 xx^T/|x|^2)/|x|^3 has spectral norm 2/|x|^3
                add("exterior-directional", EstimateKind::Directional { m: 3 }, 2.0 * r.powi(-3), sup)?;
                add("exterior-divergence", EstimateKind::Divergence, 0.0, sup)?;
                add("exterior-lame-divergence", EstimateKind::LameDiv { sigma: 0.0 }, 0.0, sup)?;
                add("exterior-stokes-pressure", EstimateKind::StokesPressure, 0.0, sup)?;
            }
            ExteriorFamily::InversePower { k } => {
                // |Re z^{-k}| <= |z|^{-k} <= rho0^{-k}
                let sup = rho0.powi(-(k as i32));
                for s in 1..=EXTERIOR_MAX_ORDER {
                    let lhs = rising(k, s) * r.powi(-((k + s) as i32));
                    add("exterior-analytic", EstimateKind::Analytic { s }, lhs, sup)?;
                }
            }
        }
    }
    Ok(out)
}

/// The unit ball in `R^3` with both spatial families and the unit disk with
/// `z^{-k}`, `k = 1..=3`, at `count` seeded points each.
pub fn standard_exterior_suite(count: usize, seed: u64) -> Result<Vec<VerificationReport>> {
    let ball = ConvexBody::ball(vec![0.0; 3], 1.0)?;
    let disk = ConvexBody::ball(vec![0.0; 2], 1.0)?;
    let p3 = exterior_sample_points(&ball, count, seed)?;
    let p2 = exterior_sample_points(&disk, count, seed)?;
    let mut out = exterior_suite(&ball, ExteriorFamily::InverseDistance, &p3)?;
    out.extend(exterior_suite(&ball, ExteriorFamily::GradientOfInverseDistance, &p3)?);
    for k in 1..=3 {
        out.extend(exterior_suite(&disk, ExteriorFamily::InversePower { k }, &p2)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::grad_constant;
    use crate::geometry::Dim;

    #[test]
    fn reference_points() {
        let ball = ConvexBody::ball(vec![0.0; 3], 1.0).unwrap();
        let r = exterior_suite(&ball, ExteriorFamily::InverseDistance, &[vec![2.0, 0.0, 0.0]]).unwrap();
        assert_eq!(r[0].lhs, 0.25);
        let c3 = grad_constant(Dim::new(3).unwrap()).value;
        assert!((r[0].rhs - c3).abs() < 1e-15 && r[0].pass);
        let disk = ConvexBody::ball(vec![0.0; 2], 1.0).unwrap();
        let r = exterior_suite(&disk, ExteriorFamily::InversePower { k: 1 }, &[vec![2.0, 0.0]]).unwrap();
        assert_eq!(r[0].lhs, 0.25);
        assert!((r[0].rhs - 2.0 / PI).abs() < 1e-12 && r[0].pass);
        let r = exterior_suite(&ball, ExteriorFamily::GradientOfInverseDistance, &[vec![0.0, 3.0, 0.0]]).unwrap();
        assert!(r.iter().all(|x| x.pass));
        assert_eq!(r.iter().find(|x| x.case == "exterior-divergence").unwrap().lhs, 0.0);
    }

    #[test]
    fn samples_sit_at_the_requested_distances() {
        let ball = ConvexBody::ball(vec![0.0; 3], 1.0).unwrap();
        let pts = exterior_sample_points(&ball, 50, 4).unwrap();
        assert_eq!(pts.len(), 50);
        for p in &pts {
            let d = norm(p) - 1.0;
            assert!(d > 0.0 && d < 100.0 + 1e-9 && d > 1e-3 * (1.0 - 1e-9));
        }
        assert_eq!(pts, exterior_sample_points(&ball, 50, 4).unwrap());
        // a general body: the cube [-1, 1]^3
        let cube = ConvexBody::from_json(
            r#"{"type":"polytope","faces":[
                {"normal":[1,0,0],"offset":1},{"normal":[-1,0,0],"offset":1},
                {"normal":[0,1,0],"offset":1},{"normal":[0,-1,0],"offset":1},
                {"normal":[0,0,1],"offset":1},{"normal":[0,0,-1],"offset":1}]}"#,
        )
        .unwrap();
        let pts = exterior_sample_points(&cube, 20, 1).unwrap();
        let reps = exterior_suite(&cube, ExteriorFamily::InverseDistance, &pts).unwrap();
        assert!(reps.iter().all(|r| r.pass));
    }

    #[test]
    fn family_must_fit_the_body() {
        let ball = ConvexBody::ball(vec![0.0; 3], 1.0).unwrap();
        assert!(exterior_suite(&ball, ExteriorFamily::InversePower { k: 1 }, &[]).is_err());
        let off = ConvexBody::ball(vec![5.0, 0.0, 0.0], 1.0).unwrap();
        assert!(exterior_suite(&off, ExteriorFamily::InverseDistance, &[]).is_err());
        assert_eq!("inverse-power:2".parse::<ExteriorFamily>().unwrap(), ExteriorFamily::InversePower { k: 2 });
        assert!("inverse-power:0".parse::<ExteriorFamily>().is_err());
    }
}
