//! Checking harness: pointwise inequality checks with boundary data from a
//! small registry, sharpness sequences built from extremal data, limit
//! sweeps towards the boundary, seeded never-exceed suites and exterior
//! checks with explicit harmonic families.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::coefficients::{
    ball_divergence, ball_gradient, disk_analytic_derivative, halfspace_divergence, halfspace_gradient,
    lame_divergence_coefficient, stokes_pressure_coefficient, BallPoint, HalfSpacePoint, LameParams,
};
use crate::constants::SharpValue;
use crate::error::{Error, Result};
use crate::fields::{
    extremal_analytic_data, extremal_divergence_field, extremal_gradient_data, extremal_lame_field,
    lame_divergence_value, poisson_ball, poisson_halfspace, random_ball_field, random_halfspace_field,
    schwarz_derivative, stokes_pressure_value, BallEval, BoundaryField, HalfSpaceEval, Region, SchwarzSpec,
};
use crate::geometry::Dim;

mod exterior;
mod report;
mod sweep;

pub use exterior::{exterior_sample_points, exterior_suite, standard_exterior_suite, ExteriorFamily, EXTERIOR_MAX_ORDER};
pub use report::{
    read_report, read_reports, sort_reports, write_report, write_reports, ReportFormat, VerificationReport, TOL_SLACK,
};
pub use sweep::{limit_sweep, richardson, SweepCase, SweepPoint, SweepResult, SWEEP_ORDER};

/// Estimates checked inside a ball, disk or half-space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Case {
    BallGradient,
    BallDivergence,
    HalfspaceGradient,
    HalfspaceDivergence,
    LameDivergence,
    StokesPressure,
    DiskAnalytic,
}

impl Case {
    pub const ALL: [Case; 7] = [
        Case::BallGradient,
        Case::BallDivergence,
        Case::HalfspaceGradient,
        Case::HalfspaceDivergence,
        Case::LameDivergence,
        Case::StokesPressure,
        Case::DiskAnalytic,
    ];

    pub fn id(&self) -> &'static str {
        match self {
            Case::BallGradient => "ball-gradient",
            Case::BallDivergence => "ball-divergence",
            Case::HalfspaceGradient => "halfspace-gradient",
            Case::HalfspaceDivergence => "halfspace-divergence",
            Case::LameDivergence => "lame-divergence",
            Case::StokesPressure => "stokes-pressure",
            Case::DiskAnalytic => "disk-analytic",
        }
    }

    fn in_ball(&self) -> bool {
        matches!(self, Case::BallGradient | Case::BallDivergence | Case::DiskAnalytic)
    }
}

impl fmt::Display for Case {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Case {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Case::ALL
            .into_iter()
            .find(|c| c.id() == s)
            .ok_or_else(|| Error::Parse(format!("unknown case '{s}'")))
    }
}

/// Where and how a case is evaluated. Parameters that a case does not use
/// are ignored (and left out of its reports).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CaseParams {
    pub case: Case,
    pub n: usize,
    /// Number of components for gradient cases.
    pub m: usize,
    /// Derivative order for the disk case.
    pub s: u32,
    pub sigma: f64,
    /// `|x| / R` for ball and disk cases; the point is `r R e_n`.
    pub r: f64,
    /// Height of the point `x_n e_n` above the hyperplane.
    pub xn: f64,
    pub radius: f64,
    /// Sphere-grid level for ball cases.
    pub grid_level: u32,
    /// Truncation radius for half-space cases.
    pub truncation: Option<f64>,
}

impl CaseParams {
    pub fn new(case: Case) -> Self {
        CaseParams {
            case,
            n: if case == Case::DiskAnalytic { 2 } else { 3 },
            m: 1,
            s: 1,
            sigma: 0.0,
            r: 0.5,
            xn: 1.0,
            radius: 1.0,
            grid_level: 5,
            truncation: None,
        }
    }

    fn arity(&self) -> usize {
        match self.case {
            Case::BallGradient | Case::HalfspaceGradient => self.m,
            Case::DiskAnalytic => 1,
            _ => self.n,
        }
    }

    fn point(&self) -> Vec<f64> {
        let mut x = vec![0.0; self.n];
        x[self.n - 1] = if self.case.in_ball() { self.r * self.radius } else { self.xn };
        x
    }

    fn validate(&self) -> Result<()> {
        let n = Dim::new(self.n)?.get();
        if n > 3 {
            return Err(Error::UnsupportedDimension(n));
        }
        if self.case == Case::DiskAnalytic && n != 2 {
            return Err(Error::domain("the analytic case lives in the plane"));
        }
        if self.case.in_ball() && !(self.radius > 0.0 && (0.0..1.0).contains(&self.r)) {
            return Err(Error::domain("need R > 0 and 0 <= r < 1"));
        }
        if !self.case.in_ball() && !(self.xn > 0.0) {
            return Err(Error::domain("need x_n > 0"));
        }
        if self.m == 0 {
            return Err(Error::domain("need at least one component"));
        }
        if self.case == Case::LameDivergence {
            LameParams::lame(self.sigma)?;
        }
        Ok(())
    }

    /// A report carrying this case's parameters.
    pub fn report(&self) -> VerificationReport {
        let mut rep = VerificationReport::blank(self.case.id(), self.n);
        match self.case {
            Case::BallGradient | Case::HalfspaceGradient => rep.m = Some(self.m),
            Case::DiskAnalytic => rep.s = Some(self.s),
            Case::LameDivergence => rep.sigma = Some(self.sigma),
            _ => {}
        }
        if self.case.in_ball() {
            rep.r = Some(self.r);
            rep.radius = Some(self.radius);
            rep.grid_level = Some(self.grid_level);
        } else {
            rep.xn = Some(self.xn);
        }
        rep
    }

    /// The sharp coefficient of the case at its point.
    pub fn coefficient(&self) -> Result<SharpValue> {
        self.validate()?;
        let dim = Dim::new(self.n)?;
        let ball = || BallPoint::new(dim, self.radius, self.r * self.radius);
        let half = || HalfSpacePoint::new(dim, self.xn);
        match self.case {
            Case::BallGradient => ball_gradient(ball()?),
            Case::BallDivergence => ball_divergence(ball()?),
            Case::DiskAnalytic => disk_analytic_derivative(self.s, self.radius, self.r * self.radius),
            Case::HalfspaceGradient => halfspace_gradient(half()?, self.m),
            Case::HalfspaceDivergence => halfspace_divergence(half()?),
            Case::LameDivergence => lame_divergence_coefficient(half()?, LameParams::lame(self.sigma)?),
            Case::StokesPressure => stokes_pressure_coefficient(half()?),
        }
    }
}

/// Boundary data selectable by name.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FieldSpec {
    /// A constant of unit norm.
    Constant,
    /// The restriction of a linear function (ball and disk only): `y_n`
    /// (scalar), `y` (vector), `Re w / R` (disk).
    Linear,
    /// Kernel sign or direction at the case's point, with sign jumps
    /// smoothed over the relative width `delta` (0 for the exact sign).
    Extremal { delta: f64 },
    /// Seeded band-limited data of unit sup-norm.
    Random { seed: u64 },
}

impl FromStr for FieldSpec {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let (name, arg) = match s.split_once(':') {
            Some((a, b)) => (a, Some(b)),
            None => (s, None),
        };
        let bad = || Error::Parse(format!("bad field argument in '{s}'"));
        match (name, arg) {
            ("constant", None) => Ok(FieldSpec::Constant),
            ("linear", None) => Ok(FieldSpec::Linear),
            ("extremal", None) => Ok(FieldSpec::Extremal { delta: 0.0 }),
            ("extremal", Some(d)) => {
                let delta: f64 = d.parse().map_err(|_| bad())?;
                if !(delta >= 0.0 && delta.is_finite()) {
                    return Err(bad());
                }
                Ok(FieldSpec::Extremal { delta })
            }
            ("random", Some(k)) => Ok(FieldSpec::Random { seed: k.parse().map_err(|_| bad())? }),
            ("random", None) => Ok(FieldSpec::Random { seed: 0 }),
            _ => Err(Error::Parse(format!(
                "unknown field '{s}' (constant, linear, extremal[:DELTA], random[:SEED])"
            ))),
        }
    }
}

/// Puts scalar data into the first component of an `m`-vector.
fn embed(f: BoundaryField, m: usize) -> BoundaryField {
    if m == 1 {
        return f;
    }
    let inner = f.clone();
    let mut g = BoundaryField::new(f.name().to_string(), m, f.point_dim(), f.sup_norm, move |y, out| {
        out.iter_mut().for_each(|v| *v = 0.0);
        inner.eval(y, &mut out[..1]);
    });
    g.support = f.support;
    g.breaks = f.breaks;
    g
}

fn build_field(p: &CaseParams, spec: FieldSpec) -> Result<BoundaryField> {
    let n = p.n;
    let a = p.arity();
    let x = p.point();
    let region = if p.case.in_ball() {
        Region::Ball { radius: p.radius }
    } else {
        Region::HalfSpace
    };
    let point_dim = if p.case.in_ball() { n } else { n - 1 };
    Ok(match spec {
        FieldSpec::Constant => {
            let c: Vec<f64> = (0..a).map(|i| 0.5f64.powi(i as i32)).collect();
            let l = crate::geometry::norm(&c);
            BoundaryField::constant(c.iter().map(|v| v / l).collect(), point_dim)
        }
        FieldSpec::Linear => {
            if !p.case.in_ball() {
                return Err(Error::domain("linear data are unbounded on a hyperplane"));
            }
            if a == 1 {
                BoundaryField::coordinate(n - 1, n)
            } else {
                BoundaryField::new("linear", a, n, 1.0, move |y, out| {
                    for (k, o) in out.iter_mut().enumerate() {
                        *o = if k < n { y[n - 1 - k] } else { 0.0 };
                    }
                })
            }
        }
        FieldSpec::Extremal { delta } => match p.case {
            Case::BallGradient | Case::HalfspaceGradient => {
                let mut l = vec![0.0; n];
                l[n - 1] = 1.0;
                embed(extremal_gradient_data(region, &x, &l, delta)?, a)
            }
            Case::BallDivergence | Case::HalfspaceDivergence => extremal_divergence_field(region, &x)?,
            Case::LameDivergence | Case::StokesPressure => extremal_lame_field(&x)?,
            Case::DiskAnalytic => {
                let alpha = p.coefficient()?.argmax.unwrap_or(0.0);
                extremal_analytic_data(p.s, Complex64::new(0.0, x[1]), alpha + p.s as f64 * std::f64::consts::FRAC_PI_2, p.radius, delta)?
            }
        },
        FieldSpec::Random { seed } => {
            if p.case.in_ball() {
                random_ball_field(seed, n, a)
            } else {
                random_halfspace_field(seed, n, a)
            }
        }
    })
}

/// Schwarz-integral controls suited to the data: smooth data converge to
/// 1e-10, kinked (smoothed sign) data to 1e-9 and exact sign data, whose
/// trapezoid error only decays like the node spacing, to 1e-6.
fn schwarz_spec(p: &CaseParams, spec: FieldSpec) -> SchwarzSpec {
    let base = SchwarzSpec {
        radius: p.radius,
        ..SchwarzSpec::default()
    };
    match spec {
        FieldSpec::Extremal { delta } if delta > 0.0 => SchwarzSpec {
            tol: 1e-9,
            max_nodes: 1 << 22,
            ..base
        },
        FieldSpec::Extremal { .. } => SchwarzSpec {
            tol: 1e-6,
            max_nodes: 1 << 22,
            ..base
        },
        _ => base,
    }
}

/// `(lhs, sup of the data, quadrature error)`.
fn evaluate(p: &CaseParams, field: &BoundaryField, spec: FieldSpec) -> Result<(f64, f64, f64)> {
    let x = p.point();
    let n = p.n;
    let sup = |data_sup: f64| field.sup_norm.max(data_sup);
    let half = HalfSpaceEval {
        truncation: p.truncation,
        ..HalfSpaceEval::default()
    };
    let ball = BallEval {
        radius: p.radius,
        level: p.grid_level,
        tol: None,
    };
    match p.case {
        Case::BallGradient | Case::HalfspaceGradient => {
            let s = if p.case == Case::BallGradient {
                poisson_ball(field, &x, &ball)?
            } else {
                poisson_halfspace(field, &x, &half)?
            };
            let lhs = if p.m == 1 {
                s.gradient_norm()
            } else {
                s.directional_norm(n)
            };
            Ok((lhs.unwrap_or(f64::NAN), sup(s.data_sup), s.quad_err))
        }
        Case::BallDivergence | Case::HalfspaceDivergence => {
            let s = if p.case == Case::BallDivergence {
                poisson_ball(field, &x, &ball)?
            } else {
                poisson_halfspace(field, &x, &half)?
            };
            Ok((s.divergence.unwrap_or(f64::NAN).abs(), sup(s.data_sup), s.quad_err))
        }
        Case::LameDivergence => {
            let s = lame_divergence_value(field, &x, p.sigma, &half)?;
            Ok((s.divergence.unwrap_or(f64::NAN).abs(), sup(s.data_sup), s.quad_err))
        }
        Case::StokesPressure => {
            let s = stokes_pressure_value(field, &x, &half)?;
            Ok((s.pressure.unwrap_or(f64::NAN).abs(), sup(s.data_sup), s.quad_err))
        }
        Case::DiskAnalytic => {
            let z = Complex64::new(0.0, x[1]);
            let v = schwarz_derivative(p.s, field, z, &schwarz_spec(p, spec))?;
            Ok((v.value.norm(), sup(v.data_sup), v.err_est))
        }
    }
}

/// Evaluates `lhs` with the field evaluators and `rhs` = coefficient times
/// the sup-norm of the data. Failures produce a failed report carrying the
/// reason.
pub fn check_inequality(p: &CaseParams, spec: FieldSpec) -> VerificationReport {
    let mut rep = p.report();
    if let FieldSpec::Random { seed } = spec {
        rep.seed = Some(seed);
    }
    let run = || -> Result<(f64, f64, f64)> {
        p.validate()?;
        let k = p.coefficient()?;
        let field = build_field(p, spec)?;
        let (lhs, sup, qe) = evaluate(p, &field, spec)?;
        Ok((lhs, k.value * sup, qe + k.err_est * sup))
    };
    match run() {
        Ok((lhs, rhs, qe)) => rep.judged(lhs, rhs, qe),
        Err(e) => rep.failed(&e),
    }
}

/// Ratios below the attainment target are reported as not sharp.
pub const ATTAINMENT: f64 = 0.995;

/// Allowed decrease between consecutive sharpness ratios (rounding only).
const MONOTONE_SLACK: f64 = 1e-9;

/// Outcome of a sharpness sequence.
#[derive(Debug, Clone, PartialEq)]
pub struct Sharpness {
    pub reports: Vec<VerificationReport>,
    pub ratios: Vec<f64>,
    /// Ratios never decrease along the sequence.
    pub monotone: bool,
    /// The final ratio reaches [`ATTAINMENT`].
    pub attained: bool,
}

impl Sharpness {
    pub fn ok(&self) -> bool {
        self.monotone && self.attained && self.reports.iter().all(|r| r.pass)
    }
}

/// Smoothing width of the sign data at sequence level `level`.
fn sharp_delta(level: u32) -> f64 {
    0.32 * 0.5f64.powi(level as i32)
}

/// Levels used when none are given: sphere-grid levels for balls (the sign
/// data being smoothed over a width halving with each level), `T = 10^L`
/// for half-spaces, and the smoothing level for the disk.
pub fn default_levels(case: Case) -> Vec<u32> {
    match case {
        Case::BallGradient => (4..=8).collect(),
        Case::BallDivergence => (2..=6).collect(),
        Case::DiskAnalytic => (4..=8).collect(),
        _ => (1..=3).collect(),
    }
}

/// The case's evaluation setup and data at one level of its sharpness
/// sequence.
pub fn sharpness_level(p: &CaseParams, level: u32) -> (CaseParams, FieldSpec) {
    let mut q = *p;
    match p.case {
        Case::BallGradient => {
            q.grid_level = level;
            (q, FieldSpec::Extremal { delta: sharp_delta(level) })
        }
        Case::BallDivergence => {
            q.grid_level = level;
            (q, FieldSpec::Extremal { delta: 0.0 })
        }
        Case::DiskAnalytic => {
            q.grid_level = level;
            (q, FieldSpec::Extremal { delta: sharp_delta(level) })
        }
        _ => {
            q.truncation = Some(10f64.powi(level as i32));
            (q, FieldSpec::Extremal { delta: 0.0 })
        }
    }
}

/// Runs the extremal data of the case along `levels`; the ratios must not
/// decrease and the last one must reach [`ATTAINMENT`].
pub fn sharpness(p: &CaseParams, levels: &[u32]) -> Result<Sharpness> {
    if levels.is_empty() {
        return Err(Error::domain("need at least one level"));
    }
    let mut reports = Vec::new();
    for &l in levels {
        let (q, spec) = sharpness_level(p, l);
        let mut rep = check_inequality(&q, spec);
        rep.grid_level = Some(l);
        if let Some(e) = &rep.error {
            let err = if rep.numeric_failure {
                Error::Convergence {
                    context: format!("{} sharpness level {l}: {e}", p.case),
                    value: f64::NAN,
                    err_est: f64::NAN,
                }
            } else {
                Error::Domain(e.clone())
            };
            return Err(err);
        }
        reports.push(rep);
    }
    let ratios: Vec<f64> = reports.iter().map(|r| r.ratio).collect();
    let monotone = ratios.windows(2).all(|w| w[1] >= w[0] - MONOTONE_SLACK);
    let attained = *ratios.last().unwrap() >= ATTAINMENT;
    Ok(Sharpness {
        reports,
        ratios,
        monotone,
        attained,
    })
}

/// The reference configurations for sharpness: ball gradient and divergence
/// at `r = 1/2` (`n = 3`), the half-space cases at `x_n = 1` (`n = 3`,
/// `sigma = 0`) and the disk derivatives of orders 1 and 2 at `r = 1/2`.
pub fn sharpness_cases() -> Vec<CaseParams> {
    let mut out: Vec<CaseParams> = [
        Case::BallGradient,
        Case::BallDivergence,
        Case::HalfspaceGradient,
        Case::HalfspaceDivergence,
        Case::LameDivergence,
        Case::StokesPressure,
    ]
    .into_iter()
    .map(CaseParams::new)
    .collect();
    for s in [1, 2] {
        out.push(CaseParams {
            s,
            ..CaseParams::new(Case::DiskAnalytic)
        });
    }
    out
}

/// The configurations exercised by the seeded never-exceed suite.
pub fn random_suite_cases() -> Vec<CaseParams> {
    let c = CaseParams::new;
    let mut out = Vec::new();
    for (n, m) in [(2, 1), (3, 1), (3, 3)] {
        out.push(CaseParams { n, m, ..c(Case::BallGradient) });
        out.push(CaseParams { n, m, ..c(Case::HalfspaceGradient) });
    }
    for n in [2, 3] {
        out.push(CaseParams { n, ..c(Case::BallDivergence) });
        out.push(CaseParams { n, ..c(Case::HalfspaceDivergence) });
        out.push(CaseParams { n, ..c(Case::StokesPressure) });
    }
    for (n, sigma) in [(3, 0.0), (3, 0.3), (2, 0.25), (3, -1.0)] {
        out.push(CaseParams { n, sigma, ..c(Case::LameDivergence) });
    }
    for s in 1..=3 {
        out.push(CaseParams { s, ..c(Case::DiskAnalytic) });
    }
    out
}

/// Puts the point of a random check somewhere in the domain, determined by
/// the seed: `r` in `[0, 0.9]` for balls and disks, `x_n` in `[0.25, 4]` for
/// half-spaces.
fn random_point(p: &CaseParams, seed: u64) -> CaseParams {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed_0f_b0_u64);
    let mut q = *p;
    if p.case.in_ball() {
        q.r = rng.gen_range(0.0..0.9);
    } else {
        q.xn = 0.25 * 16f64.powf(rng.gen_range(0.0..1.0));
    }
    q
}

/// Never-exceed checks with seeded random data for every seed in `seeds`,
/// merged in a deterministic order.
pub fn random_suite(cases: &[CaseParams], seeds: std::ops::Range<u64>) -> Vec<VerificationReport> {
    let jobs: Vec<(CaseParams, u64)> = cases
        .iter()
        .flat_map(|c| seeds.clone().map(move |s| (*c, s)))
        .collect();
    let mut out: Vec<VerificationReport> = jobs
        .par_iter()
        .map(|(c, s)| check_inequality(&random_point(c, *s), FieldSpec::Random { seed: *s }))
        .collect();
    sort_reports(&mut out);
    out
}

/// Fixed checks with constant, linear and extremal data at the reference
/// points.
pub fn reference_checks() -> Vec<VerificationReport> {
    let mut out = Vec::new();
    for p in sharpness_cases() {
        out.push(check_inequality(&p, FieldSpec::Constant));
        if p.case.in_ball() {
            out.push(check_inequality(&p, FieldSpec::Linear));
        }
    }
    let mut vec_ball = CaseParams::new(Case::BallGradient);
    vec_ball.m = 3;
    out.push(check_inequality(&vec_ball, FieldSpec::Linear));
    sort_reports(&mut out);
    out
}

/// Which parts of the harness to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Reference,
    Sharpness,
    Random,
    Exterior,
    Sweep,
    All,
}

impl FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "reference" => Suite::Reference,
            "sharpness" => Suite::Sharpness,
            "random" => Suite::Random,
            "exterior" => Suite::Exterior,
            "sweep" => Suite::Sweep,
            "all" => Suite::All,
            _ => {
                return Err(Error::Parse(format!(
                    "unknown suite '{s}' (reference, sharpness, random, exterior, sweep, all)"
                )))
            }
        })
    }
}

/// Limit sweeps of the full harness.
pub fn standard_sweeps() -> Vec<SweepCase> {
    vec![
        SweepCase::BallGradient { n: 3 },
        SweepCase::BallGradient { n: 4 },
        SweepCase::BallDivergence { n: 2 },
        SweepCase::BallDivergence { n: 3 },
        SweepCase::DiskAnalytic { s: 1 },
        SweepCase::DiskAnalytic { s: 2 },
        SweepCase::DiskAnalytic { s: 3 },
    ]
}

/// Largest gap from the target constant accepted for a sweep.
pub const SWEEP_TOL: f64 = 1e-4;

/// Everything a harness run produced.
#[derive(Debug, Clone, Default)]
pub struct SuiteOutcome {
    pub reports: Vec<VerificationReport>,
    pub sharpness: Vec<(CaseParams, Sharpness)>,
    pub sweeps: Vec<SweepResult>,
    /// Numerical failures outside of reports (sharpness and sweeps).
    pub failures: Vec<String>,
}

impl SuiteOutcome {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
            && self.reports.iter().all(|r| r.pass)
            && self.sharpness.iter().all(|(_, s)| s.ok())
            && self.sweeps.iter().all(|s| s.abs_gap <= SWEEP_TOL)
    }

    /// A numerical engine failed somewhere.
    pub fn numeric_failure(&self) -> bool {
        !self.failures.is_empty() || self.reports.iter().any(|r| r.numeric_failure)
    }
}

/// Runs a suite. Random checks use seeds `seed..seed + count`, exterior
/// checks `count`-independent 200 points drawn from `seed`.
pub fn run_suite(suite: Suite, seed: u64, count: u64) -> Result<SuiteOutcome> {
    let mut out = SuiteOutcome::default();
    let all = suite == Suite::All;
    if all || suite == Suite::Reference {
        out.reports.extend(reference_checks());
    }
    if all || suite == Suite::Sharpness {
        let cases = sharpness_cases();
        let results: Vec<_> = cases
            .par_iter()
            .map(|p| (*p, sharpness(p, &default_levels(p.case))))
            .collect();
        for (p, r) in results {
            match r {
                Ok(s) => {
                    out.reports.extend(s.reports.iter().cloned());
                    out.sharpness.push((p, s));
                }
                Err(e) => out.failures.push(format!("sharpness {}: {e}", p.case)),
            }
        }
    }
    if all || suite == Suite::Random {
        out.reports.extend(random_suite(&random_suite_cases(), seed..seed + count));
    }
    if all || suite == Suite::Exterior {
        out.reports.extend(standard_exterior_suite(200, seed)?);
    }
    if all || suite == Suite::Sweep {
        let results: Vec<_> = standard_sweeps()
            .par_iter()
            .map(|c| (*c, limit_sweep(*c, 1.0, 4, 12)))
            .collect();
        for (c, r) in results {
            match r {
                Ok(s) => out.sweeps.push(s),
                Err(e) => out.failures.push(format!("sweep {}: {e}", c.id())),
            }
        }
    }
    sort_reports(&mut out.reports);
    Ok(out)
}
