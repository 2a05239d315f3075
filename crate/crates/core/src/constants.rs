//! Global best constants: closed forms and their integral representations.

use std::collections::HashMap;
use std::f64::consts::{FRAC_PI_2, PI};
use std::sync::{Mutex, OnceLock};

use serde::Serialize;

use crate::coefficients::gradient_sup;
use crate::error::{Error, Result};
use crate::geometry::{sphere_area, Dim};
use crate::quadrature::{integrate_1d, try_maximize_scalar, MaxSpec, QuadSpec};

/// How a value was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    ClosedForm,
    Quadrature,
    Oracle,
}

/// A computed constant or coefficient with its provenance.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SharpValue {
    pub value: f64,
    pub err_est: f64,
    pub method: Method,
    /// Parameters the value was computed for, e.g. `[("n", 3.0)]`.
    pub params: Vec<(&'static str, f64)>,
    /// Independent closed form, when one is known, for cross-checking a
    /// quadrature value.
    pub closed_form: Option<f64>,
    /// Location of the inner supremum (gamma or alpha), reported for
    /// diagnostics only.
    pub argmax: Option<f64>,
}

impl SharpValue {
    pub(crate) fn closed(value: f64, params: Vec<(&'static str, f64)>) -> Self {
        SharpValue {
            value,
            err_est: 4.0 * f64::EPSILON * value.abs(),
            method: Method::ClosedForm,
            params,
            closed_form: None,
            argmax: None,
        }
    }

    pub(crate) fn quad(value: f64, err_est: f64, params: Vec<(&'static str, f64)>) -> Self {
        SharpValue {
            value,
            err_est,
            method: Method::Quadrature,
            params,
            closed_form: None,
            argmax: None,
        }
    }

    pub(crate) fn with_closed_form(mut self, v: Option<f64>) -> Self {
        self.closed_form = v;
        self
    }

    pub(crate) fn with_argmax(mut self, a: f64) -> Self {
        self.argmax = Some(a);
        self
    }

    /// Multiplies value, error and the reference by a positive factor.
    pub(crate) fn scaled(mut self, k: f64) -> Self {
        self.value *= k;
        self.err_est *= k.abs();
        self.closed_form = self.closed_form.map(|c| c * k);
        self
    }

    pub(crate) fn param(mut self, name: &'static str, v: f64) -> Self {
        self.params.push((name, v));
        self
    }
}

/// Largest derivative order accepted; `20!` is still exact in `f64`.
pub const MAX_ORDER: u32 = 20;

pub(crate) fn factorial(s: u32) -> f64 {
    (1..=s).map(f64::from).product()
}

fn check_order(s: u32) -> Result<()> {
    if s == 0 {
        return Err(Error::domain("derivative order must be at least 1"));
    }
    if s > MAX_ORDER {
        return Err(Error::domain(format!("derivative order {s} exceeds {MAX_ORDER}")));
    }
    Ok(())
}

/// `omega_{n-1} / omega_n`.
pub(crate) fn area_ratio(n: usize) -> f64 {
    sphere_area(n - 1) / sphere_area(n)
}

/// Best constant in `|grad u(x)| <= C_n d_x^{-1} sup |u|`, closed form.
pub fn grad_constant(n: Dim) -> SharpValue {
    let n = n.get();
    let nf = n as f64;
    let v = 4.0 * (nf - 1.0).powf((nf - 1.0) / 2.0) * area_ratio(n) / nf.powf(nf / 2.0);
    SharpValue::closed(v, vec![("n", nf)])
}

/// The same constant from its double-integral representation, `n >= 3`.
pub fn grad_constant_quadrature(n: Dim) -> Result<SharpValue> {
    let nn = n.get();
    if nn < 3 {
        return Err(Error::domain(
            "the integral representation of the gradient constant needs n >= 3",
        ));
    }
    let (max, err, gamma) = gradient_sup(nn, 1.0, None)?;
    let pref = (nn as f64 - 2.0) / (2.0 * PI);
    Ok(SharpValue::quad(pref * max, pref * err, vec![("n", nn as f64)])
        .with_closed_form(Some(grad_constant(n).value))
        .with_argmax(gamma))
}

/// `int_0^{pi/2} sqrt(1 + n(n-2) cos^2 t) sin^{n-2} t dt`, shared by the
/// divergence, Lame and Stokes constants.
fn divergence_integral(n: usize) -> Result<(f64, f64)> {
    static CACHE: OnceLock<Mutex<HashMap<usize, (f64, f64)>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(v) = cache.lock().unwrap().get(&n) {
        return Ok(*v);
    }
    let c = (n * (n - 2)) as f64;
    let p = n as i32 - 2;
    let spec = QuadSpec::with_tol(1e-14, 1e-13);
    let e = integrate_1d(
        |t: f64| {
            let (s, co) = t.sin_cos();
            (1.0 + c * co * co).sqrt() * s.powi(p)
        },
        0.0,
        FRAC_PI_2,
        &spec,
    )
    .map_err(|e| e.within(format!("divergence integral, n = {n}")))?;
    let v = (e.value, e.err_est);
    cache.lock().unwrap().insert(n, v);
    Ok(v)
}

fn d3_closed() -> f64 {
    1.0 + 3f64.sqrt() / 6.0 * (2.0 + 3f64.sqrt()).ln()
}

/// Best constant `D_n` for the divergence of a bounded vector field.
pub fn div_constant(n: Dim) -> Result<SharpValue> {
    let nn = n.get();
    let (i, err) = divergence_integral(nn)?;
    let k = 2.0 * area_ratio(nn);
    let closed = match nn {
        2 => Some(1.0),
        3 => Some(d3_closed()),
        _ => None,
    };
    Ok(SharpValue::quad(k * i, k * err, vec![("n", nn as f64)]).with_closed_form(closed))
}

/// Best constant `E_n` of the Lame divergence and Stokes pressure estimates;
/// exactly twice `D_n`.
pub fn lame_constant(n: Dim) -> Result<SharpValue> {
    Ok(div_constant(n)?.scaled(2.0))
}

/// `|cos(alpha + (s+1) phi)| cos^{s-1} phi` integrated over `(-pi/2, pi/2)`,
/// split at the zeros of the cosine.
fn analytic_objective(s: u32, alpha: f64) -> Result<(f64, f64)> {
    let k1 = f64::from(s + 1);
    let p = s as i32 - 1;
    let mut kinks = Vec::with_capacity(s as usize + 2);
    // zeros: alpha + (s+1) phi = pi/2 + j pi
    let lo = ((-FRAC_PI_2 * k1 + alpha - FRAC_PI_2) / PI).floor() as i64 - 1;
    let hi = ((FRAC_PI_2 * k1 + alpha - FRAC_PI_2) / PI).ceil() as i64 + 1;
    for j in lo..=hi {
        let phi = (FRAC_PI_2 + j as f64 * PI - alpha) / k1;
        if phi > -FRAC_PI_2 && phi < FRAC_PI_2 {
            kinks.push(phi);
        }
    }
    let spec = QuadSpec::with_tol(1e-14, 1e-13).kinks(kinks);
    let e = integrate_1d(
        |phi: f64| (alpha + k1 * phi).cos().abs() * phi.cos().powi(p),
        -FRAC_PI_2,
        FRAC_PI_2,
        &spec,
    )?;
    Ok((e.value, e.err_est))
}

/// `K_s` with the alpha scan over `[alpha0, alpha0 + pi]`.
pub(crate) fn analytic_constant_from(s: u32, alpha0: f64) -> Result<SharpValue> {
    check_order(s)?;
    let worst = std::cell::Cell::new(0.0f64);
    let m = try_maximize_scalar(
        |a| {
            let (v, e) = analytic_objective(s, a)?;
            worst.set(worst.get().max(e));
            Ok(v)
        },
        &MaxSpec::interval(alpha0, alpha0 + PI),
    )
    .map_err(|e| e.within(format!("analytic constant, s = {s}")))?;
    let k = factorial(s) / PI;
    Ok(SharpValue::quad(k * m.max, k * worst.get(), vec![("s", f64::from(s))])
        .with_closed_form(analytic_closed_form(s))
        .with_argmax(m.argmax))
}

/// Closed forms of `K_s` for odd `s` and for `s = 2, 4`.
pub fn analytic_closed_form(s: u32) -> Option<f64> {
    match s {
        2 => Some(3.0 * 3f64.sqrt() / (2.0 * PI)),
        4 => Some(3.0 * (16.0 + 5.0 * 5f64.sqrt()) / (4.0 * PI)),
        s if s % 2 == 1 && s <= MAX_ORDER => {
            let dfact: f64 = (1..=s).step_by(2).map(f64::from).product();
            Some(2.0 * dfact * dfact / (PI * f64::from(s)))
        }
        _ => None,
    }
}

/// Best constant `K_s` in `|f^{(s)}(z)| <= K_s d_z^{-s} sup |Re f|`.
pub fn analytic_constant(s: u32) -> Result<SharpValue> {
    static CACHE: OnceLock<Mutex<HashMap<u32, SharpValue>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(v) = cache.lock().unwrap().get(&s) {
        return Ok(v.clone());
    }
    let v = analytic_constant_from(s, 0.0)?;
    cache.lock().unwrap().insert(s, v.clone());
    Ok(v)
}

/// Oscillation constant `A_n = n omega_{n-1} / ((n-1) omega_n)`.
pub fn osc_constant(n: Dim) -> SharpValue {
    let nn = n.get();
    let nf = nn as f64;
    SharpValue::closed(nf * area_ratio(nn) / (nf - 1.0), vec![("n", nf)])
}

/// `C_n / (2 A_n) = (2/sqrt n)(1 - 1/n)^{(n+1)/2}`.
pub fn grad_to_osc_ratio(n: Dim) -> f64 {
    let nf = n.get() as f64;
    2.0 / nf.sqrt() * (1.0 - 1.0 / nf).powf((nf + 1.0) / 2.0)
}

/// The cruder analytic-derivative constant `4 s! / pi`.
pub fn rough_analytic_constant(s: u32) -> Result<SharpValue> {
    check_order(s)?;
    Ok(SharpValue::closed(4.0 * factorial(s) / PI, vec![("s", f64::from(s))]))
}
