//! Point-dependent sharp coefficients in the ball, the half-space, the disk
//! and outside convex obstacles.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::constants::{
    analytic_constant, area_ratio, div_constant, factorial, grad_constant, lame_constant,
    SharpValue, Method, MAX_ORDER,
};
use crate::error::{Error, Result};
use crate::geometry::{distance_to_convex, sphere_grid, ConvexBody, Dim};
use crate::quadrature::{
    integrate_1d, try_integrate_1d, try_integrate_2d, try_maximize_scalar, MaxSpec, QuadSpec, Rect,
};

/// A point at distance `rho` from the center of a ball of radius `radius`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BallPoint {
    pub n: Dim,
    pub radius: f64,
    pub rho: f64,
}

impl BallPoint {
    pub fn new(n: Dim, radius: f64, rho: f64) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::domain(format!("ball radius must be positive, got {radius}")));
        }
        if !(rho >= 0.0 && rho < radius) {
            return Err(Error::domain(format!(
                "need 0 <= rho < R, got rho = {rho}, R = {radius}"
            )));
        }
        Ok(BallPoint { n, radius, rho })
    }

    /// Normalized distance `rho / R`.
    pub fn r(&self) -> f64 {
        self.rho / self.radius
    }
}

/// A point at height `xn` above the boundary of a half-space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HalfSpacePoint {
    pub n: Dim,
    pub xn: f64,
}

impl HalfSpacePoint {
    pub fn new(n: Dim, xn: f64) -> Result<Self> {
        if !(xn > 0.0 && xn.is_finite()) {
            return Err(Error::domain(format!("height above the boundary must be positive, got {xn}")));
        }
        Ok(HalfSpacePoint { n, xn })
    }
}

/// Coefficients of the Poisson-kernel gradient written in the frame of `x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BallKernelParams {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

/// `a_n(r) = n(1-r^2) + 4r^2`, `b_n = n(1-r^2)/a_n`,
/// `c_n = r (n(1-r^2) + 2(1+r^2)) / a_n`.
pub fn ball_kernel_params(n: Dim, r: f64) -> BallKernelParams {
    let nf = n.get() as f64;
    let m = nf * (1.0 - r * r);
    let a = m + 4.0 * r * r;
    BallKernelParams {
        a,
        b: m / a,
        c: r * (m + 2.0 * (1.0 + r * r)) / a,
    }
}

/// Elastic medium: Poisson ratio `sigma` and `kappa = 1/(3 - 4 sigma)`;
/// the Stokes system is `kappa = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LameParams {
    pub sigma: f64,
    pub kappa: f64,
}

impl LameParams {
    pub fn lame(sigma: f64) -> Result<Self> {
        if !sigma.is_finite() || (0.5..=1.0).contains(&sigma) {
            return Err(Error::domain(format!(
                "Poisson ratio {sigma} violates strong ellipticity (need sigma < 1/2 or sigma > 1)"
            )));
        }
        Ok(LameParams {
            sigma,
            kappa: 1.0 / (3.0 - 4.0 * sigma),
        })
    }

    /// Incompressible limit used for the Stokes system.
    pub fn stokes() -> Self {
        LameParams {
            sigma: 0.5,
            kappa: 1.0,
        }
    }

    pub fn is_stokes(&self) -> bool {
        self.sigma == 0.5
    }
}

// --------------------------------------------------------------------------
// Ball, gradient
// --------------------------------------------------------------------------

/// `(sin t cos t)^{n-2} / (cos^2 t + q^2 sin^2 t)^{(n-2)/2}`, which is
/// `sin^{n-2} t / (1 + q^2 tan^2 t)^{(n-2)/2}` without the overflow at
/// `t = pi/2`. For `q = 0` it degenerates to `sin^{n-2} t`.
#[inline]
fn ball_weight(n: usize, q: f64, s: f64, c: f64) -> f64 {
    let p = n as i32 - 2;
    if q == 0.0 {
        return s.powi(p);
    }
    let d = c * c + q * q * s * s;
    let dp = if n % 2 == 0 { d.powi(p / 2) } else { d.powi((p - 1) / 2) * d.sqrt() };
    (s * c).powi(p) / dp
}

/// Split points resolving the boundary layer of width `q` at `t = pi/2`.
fn layer_splits(q: f64, out: &mut Vec<f64>) {
    if q > 0.0 && q < 0.5 {
        for k in [0.1, 1.0, 10.0, 100.0] {
            let t = (1.0 / (q * k)).atan();
            if t > 0.05 && t < FRAC_PI_2 {
                out.push(t);
            }
        }
    }
}

/// Double integral `int_0^pi sin^{n-3} phi int_0^{pi/2} G dtheta dphi` for a
/// fixed slope `gamma`; `r = 1` is the boundary limit.
fn gradient_profile(n: usize, r: f64, gamma: f64, spec: &QuadSpec) -> Result<(f64, f64)> {
    let nf = n as f64;
    let q = (1.0 - r) / (1.0 + r);
    let cc = (nf - 2.0) * r;
    let po = n as i32 - 3;
    // the unique zero in (0, pi/2) of n cos 2t + B sin 2t + c
    let kinks = move |phi: f64, out: &mut Vec<f64>| {
        let b = nf * gamma * phi.cos();
        let rho = nf.hypot(b);
        let delta = b.atan2(nf);
        let t = 0.5 * (delta + (-cc / rho).clamp(-1.0, 1.0).acos());
        if t > 0.0 && t < FRAC_PI_2 {
            out.push(t);
        }
        layer_splits(q, out);
    };
    let e = try_integrate_2d(
        |phi: f64, t: f64| {
            let (s, c) = t.sin_cos();
            let (s2, c2) = (2.0 * s * c, c * c - s * s);
            let num = (nf * c2 + nf * gamma * s2 * phi.cos() + cc).abs();
            Ok(phi.sin().powi(po) * num * ball_weight(n, q, s, c))
        },
        Rect::new((0.0, PI), (0.0, FRAC_PI_2)),
        spec,
        Some(kinks),
    )?;
    Ok((e.value, e.err_est))
}

fn profile_spec() -> QuadSpec {
    QuadSpec::with_tol(1e-12, 1e-11)
}

/// `sup_{gamma >= 0} (1+gamma^2)^{-1/2} * profile`, or the value at a fixed
/// `gamma`. Returns (value, error estimate, maximizing gamma).
pub(crate) fn gradient_sup(n: usize, r: f64, fixed: Option<f64>) -> Result<(f64, f64, f64)> {
    let spec = profile_spec();
    let ctx = || format!("gradient coefficient, n = {n}, r = {r}");
    if let Some(g) = fixed {
        let (v, e) = gradient_profile(n, r, g, &spec).map_err(|e| e.within(ctx()))?;
        let k = 1.0 / g.hypot(1.0);
        return Ok((k * v, k * e, g));
    }
    let worst = std::cell::Cell::new(0.0f64);
    let max_spec = MaxSpec {
        grid_points: 65,
        refine_tol: 1e-8,
        ..MaxSpec::half_line(0.0)
    };
    let m = try_maximize_scalar(
        |g| {
            let (v, e) = gradient_profile(n, r, g, &spec)?;
            let k = 1.0 / g.hypot(1.0);
            worst.set(worst.get().max(k * e));
            Ok(k * v)
        },
        &max_spec,
    )
    .map_err(|e| e.within(ctx()))?;
    Ok((m.max, worst.get(), m.argmax))
}

/// Sharp coefficient of `|grad u(x)| <= K(x) sup |u|` in a ball.
///
/// In the plane the coefficient coincides with the disk estimate
/// ([`disk_gradient`]), which is returned instead.
pub fn ball_gradient(p: BallPoint) -> Result<SharpValue> {
    let n = p.n.get();
    if n == 2 {
        return disk_gradient(p.radius, p.rho);
    }
    let r = p.r();
    let nf = n as f64;
    let (v, e, gamma) = gradient_sup(n, r, None)?;
    let pref = 2f64.powi(n as i32 - 2) * (nf - 2.0) / (PI * (1.0 + r).powi(n as i32 - 1) * (1.0 - r));
    let center = (r == 0.0).then(|| 2.0 * nf * area_ratio(n) / (nf - 1.0));
    Ok(SharpValue::quad(pref * v, pref * e, ball_params(p))
        .with_closed_form(center)
        .with_argmax(gamma)
        .scaled(1.0 / p.radius))
}

fn ball_params(p: BallPoint) -> Vec<(&'static str, f64)> {
    vec![("n", p.n.get() as f64), ("R", p.radius), ("r", p.r())]
}

/// `int_0^{2 pi} |a + b cos phi| dphi` in closed form.
fn abs_cos_average(a: f64, b: f64) -> f64 {
    let b = b.abs();
    if a.abs() >= b {
        return 2.0 * PI * a.abs();
    }
    let c = -a / b;
    let phi0 = c.acos();
    2.0 * (a * (2.0 * phi0 - PI) + 2.0 * b * (1.0 - c * c).sqrt())
}

/// Ball gradient coefficient for `n = 3` straight from the differentiated
/// Poisson kernel,
/// `(1/omega_3) sup_l int_S |(3(1-r^2)(y-x) - 2|y-x|^2 x, l)| / |y-x|^5 dS`,
/// with `x = r e_3` and `l = cos(beta) e_3 + sin(beta) e_1`.
///
/// With `t = y_3` the kernel's dependence on the azimuth is `a(t) + b(t) cos phi`,
/// which is integrated exactly; the remaining integral over `t` is split at
/// the roots of `a^2 = b^2`, where the azimuthal average loses smoothness.
pub fn ball_gradient_oracle(r: f64) -> Result<SharpValue> {
    if !(0.0..1.0).contains(&r) {
        return Err(Error::domain(format!("need 0 <= r < 1, got {r}")));
    }
    let m = 3.0 * (1.0 - r * r);
    let worst = std::cell::Cell::new(0.0f64);
    let objective = |beta: f64| -> Result<f64> {
        let (sb, cb) = beta.sin_cos();
        // a(t) = cb * (k1 t + k0), b(t)^2 = (sb m)^2 (1 - t^2)
        let k1 = cb * (m + 4.0 * r * r);
        let k0 = -cb * (m * r + 2.0 * r * (1.0 + r * r));
        let bb = (sb * m).powi(2);
        let mut kinks = Vec::new();
        // (k1 t + k0)^2 - bb (1 - t^2) = 0
        let (qa, qb, qc) = (k1 * k1 + bb, 2.0 * k1 * k0, k0 * k0 - bb);
        let disc = qb * qb - 4.0 * qa * qc;
        if qa > 0.0 && disc > 0.0 {
            let sq = disc.sqrt();
            let t1 = (-qb - qb.signum() * sq) / (2.0 * qa);
            kinks.push(t1);
            if t1 != 0.0 {
                kinks.push(qc / (qa * t1));
            }
        }
        // the kernel concentrates in 1 - t ~ (1 - r)^2
        let w = (1.0 - r) * (1.0 - r);
        for k in [1.0, 10.0, 100.0] {
            kinks.push(1.0 - k * w);
        }
        let spec = QuadSpec::with_tol(1e-13, 1e-12).kinks(kinks);
        let e = integrate_1d(
            |t: f64| {
                let d2 = 1.0 - 2.0 * r * t + r * r;
                let a = k1 * t + k0;
                let b = sb * m * (1.0 - t * t).max(0.0).sqrt();
                abs_cos_average(a, b) / (d2 * d2 * d2.sqrt())
            },
            -1.0,
            1.0,
            &spec,
        )?;
        worst.set(worst.get().max(e.err_est));
        Ok(e.value / (4.0 * PI))
    };
    let spec = MaxSpec {
        refine_tol: 1e-10,
        ..MaxSpec::interval(0.0, FRAC_PI_2).grid_points(65)
    };
    let best = try_maximize_scalar(objective, &spec)
        .map_err(|e| e.within(format!("gradient oracle at r = {r}")))?;
    Ok(SharpValue {
        value: best.max,
        err_est: worst.get() / (4.0 * PI),
        method: Method::Oracle,
        params: vec![("n", 3.0), ("r", r)],
        closed_form: None,
        argmax: Some(best.argmax),
    })
}

/// Brute-force version of [`ball_gradient_oracle`] on a product sphere grid
/// of the given level. The `|.|` kink limits it to second order in the grid
/// spacing, so it is a coarse cross-check only.
pub fn ball_gradient_sphere_grid(r: f64, level: u32) -> Result<f64> {
    if !(0.0..1.0).contains(&r) {
        return Err(Error::domain(format!("need 0 <= r < 1, got {r}")));
    }
    let grid = sphere_grid(3, level)?;
    let m = 3.0 * (1.0 - r * r);
    let mut a = Vec::with_capacity(grid.len());
    let mut b = Vec::with_capacity(grid.len());
    for (y, w) in grid.iter() {
        let d = [y[0], y[1], y[2] - r];
        let d2 = d[0] * d[0] + d[1] * d[1] + d[2] * d[2];
        let k = w / (d2 * d2 * d2.sqrt());
        a.push(k * (m * d[2] - 2.0 * d2 * r));
        b.push(k * m * d[0]);
    }
    let g = |beta: f64| {
        let (sb, cb) = beta.sin_cos();
        a.iter().zip(&b).map(|(ai, bi)| (cb * ai + sb * bi).abs()).sum::<f64>() / (4.0 * PI)
    };
    let spec = MaxSpec {
        refine_tol: 1e-9,
        ..MaxSpec::interval(0.0, FRAC_PI_2).grid_points(33)
    };
    Ok(try_maximize_scalar(|t| Ok(g(t)), &spec)?.max)
}

/// Sharp gradient coefficient `4R / (pi (R^2 - rho^2))` for harmonic functions
/// in the disk; also the planar ball gradient coefficient.
pub fn disk_gradient(radius: f64, rho: f64) -> Result<SharpValue> {
    let p = BallPoint::new(Dim::new(2)?, radius, rho)?;
    let v = 4.0 * radius / (PI * (radius * radius - rho * rho));
    Ok(SharpValue::closed(v, ball_params(p)))
}

// --------------------------------------------------------------------------
// Ball, divergence
// --------------------------------------------------------------------------

/// `T_3(r)` in closed form, with a series for small `r`.
fn ball_divergence_3(r: f64) -> f64 {
    let log_term = if r < 1e-4 { t3_log_series(r) } else { t3_log_exact(r) };
    (2.0 + log_term) / (1.0 - r * r)
}

/// `(3 - r^2)/(2 sqrt3 r) ln((sqrt3 + r)/(sqrt3 - r))`.
fn t3_log_exact(r: f64) -> f64 {
    let s3 = 3f64.sqrt();
    (3.0 - r * r) / (2.0 * s3 * r) * 2.0 * (r / s3).atanh()
}

fn t3_log_series(r: f64) -> f64 {
    let u2 = r * r / 3.0;
    (3.0 - r * r) / 3.0 * (1.0 + u2 / 3.0 + u2 * u2 / 5.0)
}

/// Sharp coefficient of `|div u(x)| <= T(x) sup |u|` in a ball.
pub fn ball_divergence(p: BallPoint) -> Result<SharpValue> {
    let n = p.n.get();
    let nf = n as f64;
    let r = p.r();
    let q = (1.0 - r) / (1.0 + r);
    let a = (nf - (nf - 2.0) * r).powi(2);
    let b = 4.0 * nf * (nf - 2.0) * r;
    let mut kinks = Vec::new();
    layer_splits(q, &mut kinks);
    let spec = QuadSpec::with_tol(1e-13, 1e-12).kinks(kinks);
    let e = integrate_1d(
        |t: f64| {
            let (s, c) = t.sin_cos();
            (a + b * c * c).sqrt() * ball_weight(n, q, s, c)
        },
        0.0,
        FRAC_PI_2,
        &spec,
    )
    .map_err(|e| e.within(format!("divergence coefficient, n = {n}, r = {r}")))?;
    let pref = 2f64.powi(n as i32 - 1) * area_ratio(n) / ((1.0 + r).powi(n as i32 - 1) * (1.0 - r));
    let closed = match n {
        2 => Some(2.0 / (1.0 - r * r)),
        3 => Some(ball_divergence_3(r)),
        _ => None,
    };
    Ok(SharpValue::quad(pref * e.value, pref * e.err_est, ball_params(p))
        .with_closed_form(closed)
        .scaled(1.0 / p.radius))
}

// --------------------------------------------------------------------------
// Half-space
// --------------------------------------------------------------------------

fn half_params(p: HalfSpacePoint) -> Vec<(&'static str, f64)> {
    vec![("n", p.n.get() as f64), ("xn", p.xn)]
}

/// `C_n / x_n`; the same for every number `m` of components.
pub fn halfspace_gradient(p: HalfSpacePoint, m: usize) -> Result<SharpValue> {
    if m == 0 {
        return Err(Error::domain("a vector field needs at least one component"));
    }
    Ok(SharpValue {
        params: half_params(p),
        ..grad_constant(p.n).scaled(1.0 / p.xn)
    }
    .param("m", m as f64))
}

/// `D_n / x_n`.
pub fn halfspace_divergence(p: HalfSpacePoint) -> Result<SharpValue> {
    Ok(SharpValue {
        params: half_params(p),
        ..div_constant(p.n)?.scaled(1.0 / p.xn)
    })
}

/// `(1 - 2 sigma)/(3 - 4 sigma) * E_n / x_n` for the divergence of a Lame
/// displacement.
pub fn lame_divergence_coefficient(p: HalfSpacePoint, lp: LameParams) -> Result<SharpValue> {
    let lp = LameParams::lame(lp.sigma)?;
    let k = (1.0 - 2.0 * lp.sigma) * lp.kappa;
    Ok(SharpValue {
        params: half_params(p),
        ..lame_constant(p.n)?.scaled(k / p.xn)
    }
    .param("sigma", lp.sigma))
}

/// `E_n / x_n` for the Stokes pressure.
pub fn stokes_pressure_coefficient(p: HalfSpacePoint) -> Result<SharpValue> {
    Ok(SharpValue {
        params: half_params(p),
        ..lame_constant(p.n)?.scaled(1.0 / p.xn)
    })
}

// --------------------------------------------------------------------------
// Disk, analytic functions
// --------------------------------------------------------------------------

/// Objective of the disk coefficient after the Moebius change of variables
/// `w = (zeta + t)/(1 + t zeta)`, which moves `z = t` to the origin: the
/// integrand becomes the trigonometric polynomial
/// `Re(e^{i alpha} (1 + t zeta)^{s-1} zeta^{-s})`, smooth apart from the
/// kinks of `|.|`, which are located by scanning and bisection.
struct DiskObjective {
    s: u32,
    t: f64,
    scan: Vec<(f64, Complex64)>,
}

impl DiskObjective {
    fn new(s: u32, t: f64) -> Self {
        let n = (64 * s as usize).max(256);
        let scan = (0..=n)
            .map(|j| {
                let th = 2.0 * PI * j as f64 / n as f64;
                (th, Self::f(s, t, th))
            })
            .collect();
        DiskObjective { s, t, scan }
    }

    #[inline]
    fn f(s: u32, t: f64, th: f64) -> Complex64 {
        let zeta = Complex64::from_polar(1.0, th);
        (1.0 + t * zeta).powi(s as i32 - 1) * Complex64::from_polar(1.0, -(s as f64) * th)
    }

    fn value(&self, alpha: f64) -> Result<(f64, f64)> {
        let rot = Complex64::from_polar(1.0, alpha);
        let g = |th: f64| (rot * Self::f(self.s, self.t, th)).re;
        let mut kinks = Vec::new();
        for w in self.scan.windows(2) {
            let (ga, gb) = ((rot * w[0].1).re, (rot * w[1].1).re);
            if ga == 0.0 {
                kinks.push(w[0].0);
            } else if ga * gb < 0.0 {
                let (mut lo, mut hi, mut glo) = (w[0].0, w[1].0, ga);
                for _ in 0..60 {
                    let mid = 0.5 * (lo + hi);
                    let gm = g(mid);
                    if gm * glo > 0.0 {
                        lo = mid;
                        glo = gm;
                    } else {
                        hi = mid;
                    }
                    if hi - lo < 1e-15 {
                        break;
                    }
                }
                kinks.push(0.5 * (lo + hi));
            }
        }
        let spec = QuadSpec::with_tol(1e-13, 1e-12).kinks(kinks);
        let e = try_integrate_1d(|th| Ok(g(th).abs()), 0.0, 2.0 * PI, &spec)?;
        Ok((e.value, e.err_est))
    }
}

/// Sharp coefficient `H_s(z)` of `|f^{(s)}(z)| <= H_s(z) sup |Re f|` for `f`
/// analytic in the disk of radius `radius`, at `|z| = rho`.
pub fn disk_analytic_derivative(s: u32, radius: f64, rho: f64) -> Result<SharpValue> {
    if s == 0 || s > MAX_ORDER {
        return Err(Error::domain(format!("derivative order must lie in 1..={MAX_ORDER}, got {s}")));
    }
    let p = BallPoint::new(Dim::new(2)?, radius, rho)?;
    let t = p.r();
    let obj = DiskObjective::new(s, t);
    let worst = std::cell::Cell::new(0.0f64);
    let m = try_maximize_scalar(
        |a| {
            let (v, e) = obj.value(a)?;
            worst.set(worst.get().max(e));
            Ok(v)
        },
        &MaxSpec::interval(0.0, PI),
    )
    .map_err(|e| e.within(format!("disk coefficient, s = {s}, r = {t}")))?;
    let k = factorial(s) / (PI * radius.powi(s as i32) * (1.0 - t * t).powi(s as i32));
    let closed = (s == 1).then(|| 4.0 * radius / (PI * (radius * radius - rho * rho)));
    Ok(SharpValue::quad(k * m.max, k * worst.get(), ball_params(p))
        .with_closed_form(closed)
        .with_argmax(m.argmax)
        .param("s", f64::from(s)))
}

// --------------------------------------------------------------------------
// Outside a convex obstacle
// --------------------------------------------------------------------------

/// Which estimate a coefficient is requested for.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum EstimateKind {
    Gradient,
    /// Derivative of an `m`-component field along a unit direction.
    Directional { m: usize },
    Divergence,
    LameDiv { sigma: f64 },
    StokesPressure,
    /// `s`-th derivative of an analytic function (planar only).
    Analytic { s: u32 },
}

/// Coefficient of the estimate `kind` at a point `x` outside the convex body:
/// the best constant over the matching power of the distance to the body.
pub fn exterior_bound(body: &ConvexBody, x: &[f64], kind: EstimateKind) -> Result<SharpValue> {
    let proj = distance_to_convex(body, x)?;
    let d = proj.distance;
    if !(d > 0.0) {
        return Err(Error::domain("point must lie strictly outside the obstacle"));
    }
    let n = Dim::new(body.dim())?;
    let v = match kind {
        EstimateKind::Gradient => grad_constant(n).scaled(1.0 / d),
        EstimateKind::Directional { m } => {
            if m == 0 {
                return Err(Error::domain("a vector field needs at least one component"));
            }
            grad_constant(n).scaled(1.0 / d).param("m", m as f64)
        }
        EstimateKind::Divergence => div_constant(n)?.scaled(1.0 / d),
        EstimateKind::LameDiv { sigma } => {
            let lp = LameParams::lame(sigma)?;
            lame_constant(n)?
                .scaled((1.0 - 2.0 * sigma) * lp.kappa / d)
                .param("sigma", sigma)
        }
        EstimateKind::StokesPressure => lame_constant(n)?.scaled(1.0 / d),
        EstimateKind::Analytic { s } => {
            if n.get() != 2 {
                return Err(Error::domain("analytic-function estimates live in the plane (n = 2)"));
            }
            analytic_constant(s)?.scaled(d.powi(-(s as i32))).param("s", f64::from(s))
        }
    };
    Ok(v.param("d", d))
}
