//! Boundary-approach limits of the scaled point coefficients.

use serde::Serialize;

use crate::coefficients::{ball_divergence, ball_gradient, disk_analytic_derivative, BallPoint};
use crate::constants::{analytic_constant, div_constant, grad_constant};
use crate::error::{Error, Result};
use crate::geometry::Dim;

/// Which coefficient approaches which constant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "case", rename_all = "kebab-case")]
pub enum SweepCase {
    /// `(R - r) K_n(r) -> C_n`.
    BallGradient { n: usize },
    /// `(R - r) T_n(r) -> D_n`.
    BallDivergence { n: usize },
    /// `(R - r)^s H_s(r) -> K_s`.
    DiskAnalytic { s: u32 },
}

impl SweepCase {
    pub fn id(&self) -> &'static str {
        match self {
            SweepCase::BallGradient { .. } => "ball-gradient",
            SweepCase::BallDivergence { .. } => "ball-divergence",
            SweepCase::DiskAnalytic { .. } => "disk-analytic",
        }
    }

    fn power(&self) -> i32 {
        match self {
            SweepCase::DiskAnalytic { s } => *s as i32,
            _ => 1,
        }
    }

    fn coefficient(&self, radius: f64, rho: f64) -> Result<(f64, f64)> {
        let v = match *self {
            SweepCase::BallGradient { n } => ball_gradient(BallPoint::new(Dim::new(n)?, radius, rho)?)?,
            SweepCase::BallDivergence { n } => ball_divergence(BallPoint::new(Dim::new(n)?, radius, rho)?)?,
            SweepCase::DiskAnalytic { s } => disk_analytic_derivative(s, radius, rho)?,
        };
        Ok((v.value, v.err_est))
    }

    fn target(&self) -> Result<f64> {
        Ok(match *self {
            SweepCase::BallGradient { n } => grad_constant(Dim::new(n)?).value,
            SweepCase::BallDivergence { n } => div_constant(Dim::new(n)?)?.value,
            SweepCase::DiskAnalytic { s } => analytic_constant(s)?.value,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepPoint {
    pub k: u32,
    pub r: f64,
    /// `(R - r)^p` times the coefficient at `r`.
    pub scaled: f64,
    pub err_est: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepResult {
    #[serde(flatten)]
    pub case: SweepCase,
    pub radius: f64,
    pub points: Vec<SweepPoint>,
    /// Richardson extrapolation of the last [`SWEEP_ORDER`] points.
    pub limit: f64,
    pub target: f64,
    pub abs_gap: f64,
}

/// Number of trailing points combined by the extrapolation.
pub const SWEEP_ORDER: usize = 4;

/// Extrapolates `values[j] ~ L + a_1 h_j + a_2 h_j^2 + ...` with
/// `h_{j+1} = h_j / 2` to `h = 0` from the last `order` values (Neville
/// table).
pub fn richardson(values: &[f64], order: usize) -> Result<f64> {
    if order < 2 || values.len() < order {
        return Err(Error::domain(format!(
            "extrapolation of order {order} needs at least {order} values, got {}",
            values.len()
        )));
    }
    let mut t = values[values.len() - order..].to_vec();
    for j in 1..order {
        let f = 2f64.powi(j as i32);
        for i in (j..order).rev() {
            t[i] = t[i] + (t[i] - t[i - 1]) / (f - 1.0);
        }
    }
    Ok(t[order - 1])
}

/// Evaluates the scaled coefficient at `r_k = R (1 - 2^{-k})`,
/// `k_min <= k <= k_max`, and extrapolates to the boundary.
pub fn limit_sweep(case: SweepCase, radius: f64, k_min: u32, k_max: u32) -> Result<SweepResult> {
    if !(radius > 0.0) {
        return Err(Error::domain("radius must be positive"));
    }
    if k_max > 40 || k_min > k_max || ((k_max - k_min + 1) as usize) < SWEEP_ORDER {
        return Err(Error::domain(format!(
            "need k_min <= k_max <= 40 with at least {SWEEP_ORDER} points, got {k_min}..={k_max}"
        )));
    }
    let p = case.power();
    let points = (k_min..=k_max)
        .map(|k| {
            let h = 0.5f64.powi(k as i32);
            let r = radius * (1.0 - h);
            let (v, e) = case.coefficient(radius, r)?;
            let w = (radius * h).powi(p);
            Ok(SweepPoint {
                k,
                r,
                scaled: w * v,
                err_est: w * e,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let scaled: Vec<f64> = points.iter().map(|p| p.scaled).collect();
    let limit = richardson(&scaled, SWEEP_ORDER)?;
    // (R - r)^p times the coefficient is dilation invariant
    let target = case.target()?;
    Ok(SweepResult {
        case,
        radius,
        abs_gap: (limit - target).abs(),
        points,
        limit,
        target,
    })
}
