//! Poisson, Lamé and Stokes integrals over the boundary hyperplane of the
//! upper half-space `{x_n > 0}`, for `n = 2, 3`.
//!
//! The hyperplane is parametrized around the foot `x'` of the evaluation
//! point by the angle `psi` between `y - x` and `-e_n`
//! (`|y' - x'| = x_n tan psi`) and, for `n = 3`, an azimuth `phi`. In these
//! variables the Poisson measure `2/omega_n x_n |y-x|^{-n} dy'` is
//! `sin(psi) dpsi dphi / (2 pi)` (resp. `dpsi / pi`), so a truncation at
//! radius `T` is the cut `psi <= atan(T / x_n)` and the discarded mass has
//! a closed form.

use std::cell::Cell;
use std::f64::consts::PI;

use super::{BoundaryField, FieldSample};
use crate::coefficients::LameParams;
use crate::error::{Error, Result};
use crate::geometry::{dist, norm};
use crate::quadrature::{try_integrate_2d_vec, try_integrate_vec, QuadSpec, Rect};

/// Truncation and tolerances for half-space integrals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HalfSpaceEval {
    /// Radius of the disc around `x'` that is integrated; `None` means the
    /// whole hyperplane (data with a declared support are always integrated
    /// exactly over it).
    pub truncation: Option<f64>,
    pub abs_tol: f64,
    pub rel_tol: f64,
}

impl Default for HalfSpaceEval {
    fn default() -> Self {
        HalfSpaceEval {
            truncation: None,
            abs_tol: 1e-10,
            rel_tol: 1e-10,
        }
    }
}

impl HalfSpaceEval {
    pub fn truncated(t: f64) -> Self {
        HalfSpaceEval {
            truncation: Some(t),
            ..Default::default()
        }
    }
}

/// Geometry handed to the kernels at each quadrature node.
struct Node<'a> {
    /// Unit vector from `x` to `y`.
    e: &'a [f64],
    /// Poisson-measure weight.
    wp: f64,
    /// Weight of `2/omega_n |y-x|^{-n} dy'`.
    wg: f64,
    f: &'a [f64],
}

struct Integral {
    value: Vec<f64>,
    err: f64,
    /// Poisson mass outside the integrated disc.
    tail: f64,
    data_sup: f64,
}

fn integrate<K>(f: &BoundaryField, x: &[f64], eval: &HalfSpaceEval, ncomp: usize, kernel: K) -> Result<Integral>
where
    K: Fn(&Node, &mut [f64]),
{
    let n = x.len();
    if !(n == 2 || n == 3) {
        return Err(Error::UnsupportedDimension(n));
    }
    f.check(None, n - 1)?;
    let xn = x[n - 1];
    if !(xn > 0.0 && xn.is_finite()) {
        return Err(Error::domain("point must lie strictly above the boundary hyperplane"));
    }
    let xp = &x[..n - 1];
    let (psi_max, tail) = match (&f.support, eval.truncation) {
        (Some(s), _) => ((dist(xp, &s.center) + s.radius) / xn, 0.0),
        (None, Some(t)) => {
            if !(t > 0.0) {
                return Err(Error::domain("truncation radius must be positive"));
            }
            let tail = if n == 3 { xn / t.hypot(xn) } else { 2.0 / PI * (xn / t).atan() };
            (t / xn, tail)
        }
        (None, None) => (f64::INFINITY, 0.0),
    };
    let psi_max = psi_max.atan();
    let mut kinks = Vec::new();
    let centred = |c: &[f64]| dist(c, xp) <= 1e-12 * (1.0 + norm(xp));
    if let Some(b) = &f.breaks {
        if centred(&b.center) {
            kinks.extend(b.radii.iter().map(|r| (r / xn).atan()));
        }
    }
    if let Some(s) = &f.support {
        if centred(&s.center) {
            kinks.push((s.radius / xn).atan());
        }
    }
    let spec_kinks = if n == 2 {
        kinks.iter().flat_map(|k| [-k, *k]).collect()
    } else {
        kinks
    };
    let spec = QuadSpec {
        kinks: spec_kinks,
        ..QuadSpec::with_tol(eval.abs_tol, eval.rel_tol)
    };
    let m = f.arity();
    let sup = Cell::new(0.0f64);
    let est = if n == 2 {
        let wp = 1.0 / PI;
        try_integrate_vec(
            |psi, out: &mut [f64]| {
                let (s, c) = psi.sin_cos();
                let y = [xp[0] + xn * s / c];
                let mut fv = [0.0; 3];
                f.eval(&y, &mut fv[..m]);
                sup.set(sup.get().max(norm(&fv[..m])));
                let e = [s, -c];
                kernel(&Node { e: &e, wp, wg: wp / xn, f: &fv[..m] }, out);
                Ok(())
            },
            ncomp,
            -psi_max,
            psi_max,
            &spec,
        )?
    } else {
        try_integrate_2d_vec(
            |psi, phi, out: &mut [f64]| {
                let (s, c) = psi.sin_cos();
                let (sp, cp) = phi.sin_cos();
                let rho = xn * s / c;
                let y = [xp[0] + rho * cp, xp[1] + rho * sp];
                let mut fv = [0.0; 3];
                f.eval(&y, &mut fv[..m]);
                sup.set(sup.get().max(norm(&fv[..m])));
                let e = [s * cp, s * sp, -c];
                let wp = s / (2.0 * PI);
                kernel(&Node { e: &e, wp, wg: wp / xn, f: &fv[..m] }, out);
                Ok(())
            },
            ncomp,
            Rect::new((0.0, psi_max), (0.0, 2.0 * PI)),
            &spec,
            None::<fn(f64, &mut Vec<f64>)>,
        )?
    };
    Ok(Integral {
        value: est.value,
        err: est.err_est,
        tail,
        data_sup: sup.get().max(if tail > 0.0 { f.sup_norm } else { 0.0 }),
    })
}

/// `(G, v)` with `G = e_n - n (e, e_n) e`, the direction of the gradient of
/// the Poisson kernel.
#[inline]
fn grad_kernel(e: &[f64], j: usize) -> f64 {
    let n = e.len();
    let en = e[n - 1];
    (if j == n - 1 { 1.0 } else { 0.0 }) - n as f64 * en * e[j]
}

/// Harmonic extension of half-space data with its Jacobian and, for
/// `n`-vector data, divergence. The reported error includes a bound for the
/// discarded part of the hyperplane.
pub fn poisson_halfspace(f: &BoundaryField, x: &[f64], eval: &HalfSpaceEval) -> Result<FieldSample> {
    let n = x.len();
    let m = f.arity();
    let it = integrate(f, x, eval, m + m * n, |nd, out| {
        for k in 0..m {
            out[k] += nd.wp * nd.f[k];
            for j in 0..n {
                out[m + k * n + j] += nd.wg * grad_kernel(nd.e, j) * nd.f[k];
            }
        }
    })?;
    let xn = x[n - 1];
    let sup = f.sup_norm.max(it.data_sup);
    let tail = sup * it.tail * (1.0f64).max((n as f64 - 1.0) / xn);
    let jac = it.value[m..].to_vec();
    let divergence = (m == n).then(|| (0..n).map(|i| jac[i * n + i]).sum());
    Ok(FieldSample {
        value: it.value[..m].to_vec(),
        gradient: Some(jac),
        divergence,
        pressure: None,
        quad_err: it.err + tail,
        data_sup: it.data_sup,
    })
}

/// Solution of the Lamé (or, with [`LameParams::stokes`], Stokes) system in
/// the half-space with boundary displacement `f`, from the matrix kernel
/// `(1 - kappa) I + n kappa e e^T` against the Poisson measure.
pub fn lame_stokes_velocity(
    f: &BoundaryField,
    x: &[f64],
    lp: LameParams,
    eval: &HalfSpaceEval,
) -> Result<FieldSample> {
    let n = x.len();
    f.check(Some(n), n.saturating_sub(1))?;
    let kappa = lp.kappa;
    let nf = n as f64;
    let it = integrate(f, x, eval, n, |nd, out| {
        let ef: f64 = nd.e.iter().zip(nd.f).map(|(a, b)| a * b).sum();
        for i in 0..n {
            out[i] += nd.wp * ((1.0 - kappa) * nd.f[i] + nf * kappa * ef * nd.e[i]);
        }
    })?;
    let sup = f.sup_norm.max(it.data_sup);
    Ok(FieldSample {
        value: it.value,
        quad_err: it.err + sup * ((1.0 - kappa).abs() + nf * kappa.abs()) * it.tail,
        data_sup: it.data_sup,
        ..Default::default()
    })
}

/// `(2/omega_n) int (G, f) |y - x|^{-n} dy'`, the divergence of the harmonic
/// extension of `f`, with its error including the tail.
fn harmonic_divergence(f: &BoundaryField, x: &[f64], eval: &HalfSpaceEval) -> Result<(f64, f64, f64)> {
    let n = x.len();
    f.check(Some(n), n.saturating_sub(1))?;
    let it = integrate(f, x, eval, 1, |nd, out| {
        let gf: f64 = (0..n).map(|j| grad_kernel(nd.e, j) * nd.f[j]).sum();
        out[0] += nd.wg * gf;
    })?;
    let sup = f.sup_norm.max(it.data_sup);
    let tail = sup * (n as f64 - 1.0) / x[n - 1] * it.tail;
    Ok((it.value[0], it.err + tail, it.data_sup))
}

/// Divergence of the Lamé displacement with boundary values `f`:
/// `2 (1 - 2 sigma) / (3 - 4 sigma)` times the divergence of the harmonic
/// extension.
pub fn lame_divergence_value(f: &BoundaryField, x: &[f64], sigma: f64, eval: &HalfSpaceEval) -> Result<FieldSample> {
    let lp = LameParams::lame(sigma)?;
    let k = 2.0 * (1.0 - 2.0 * sigma) * lp.kappa;
    let (d, err, sup) = harmonic_divergence(f, x, eval)?;
    Ok(FieldSample {
        divergence: Some(k * d),
        quad_err: k.abs() * err,
        data_sup: sup,
        ..Default::default()
    })
}

/// Stokes pressure (normalized to vanish far from the boundary) for the
/// boundary velocity `f`: minus twice the divergence of its harmonic
/// extension.
pub fn stokes_pressure_value(f: &BoundaryField, x: &[f64], eval: &HalfSpaceEval) -> Result<FieldSample> {
    let (d, err, sup) = harmonic_divergence(f, x, eval)?;
    Ok(FieldSample {
        pressure: Some(-2.0 * d),
        quad_err: 2.0 * err,
        data_sup: sup,
        ..Default::default()
    })
}
