//! Boundary data of unit sup-norm that attain the sharp coefficients: the
//! sign (scalar estimates) or unit direction (vector estimates) of the
//! kernel that represents the estimated quantity at the point `x`.
//!
//! The sign data can be smoothed by a clamp of relative width `delta`,
//! `clamp(k / (delta * scale), -1, 1)`, `scale` being the kernel size at the
//! boundary point nearest to `x`. As `delta -> 0` these data increase the
//! estimated functional monotonically towards the sharp value, and away
//! from the sign jumps they are as smooth as the kernel.

use num_complex::Complex64;

use super::BoundaryField;
use crate::error::{Error, Result};
use crate::geometry::{dot, norm};

/// Domain whose boundary carries the data.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Region {
    /// Ball of the given radius about the origin; data are functions of the
    /// unit direction.
    Ball { radius: f64 },
    /// `{x_n > 0}`; data are functions of the first `n - 1` coordinates.
    HalfSpace,
}

fn check_point(region: Region, x: &[f64]) -> Result<()> {
    let n = x.len();
    if !(n == 2 || n == 3) {
        return Err(Error::UnsupportedDimension(n));
    }
    match region {
        Region::Ball { radius } if !(radius > 0.0 && norm(x) < radius) => {
            Err(Error::domain("point must lie inside the ball"))
        }
        Region::HalfSpace if !(x[n - 1] > 0.0) => Err(Error::domain("point must lie above the boundary hyperplane")),
        _ => Ok(()),
    }
}

fn check_delta(delta: f64) -> Result<()> {
    if delta >= 0.0 && delta.is_finite() {
        Ok(())
    } else {
        Err(Error::domain("smoothing width must be finite and non-negative"))
    }
}

#[inline]
fn soft_sign(k: f64, width: f64) -> f64 {
    if width > 0.0 {
        (k / width).clamp(-1.0, 1.0)
    } else if k > 0.0 {
        1.0
    } else if k < 0.0 {
        -1.0
    } else {
        0.0
    }
}

/// Gradient kernel of the unit-ball Poisson integral at `xh`, evaluated at
/// the unit vector `y`: `(n(1-r^2)(y-x) - 2|y-x|^2 x) / |y-x|^{n+2}` (the
/// constant `1/omega_n` omitted).
fn ball_gradient_kernel(xh: &[f64], y: &[f64], out: &mut [f64]) {
    let n = xh.len();
    let r2 = dot(xh, xh);
    let mut d = [0.0; 3];
    let mut d2 = 0.0;
    for i in 0..n {
        d[i] = y[i] - xh[i];
        d2 += d[i] * d[i];
    }
    let den = d2.powi(n as i32 / 2 + 1) * if n % 2 == 1 { d2.sqrt() } else { 1.0 };
    for i in 0..n {
        out[i] = (n as f64 * (1.0 - r2) * d[i] - 2.0 * d2 * xh[i]) / den;
    }
}

fn nearest_direction(x: &[f64]) -> Vec<f64> {
    let n = x.len();
    let r = norm(x);
    if r > 0.0 {
        x.iter().map(|v| v / r).collect()
    } else {
        let mut e = vec![0.0; n];
        e[n - 1] = 1.0;
        e
    }
}

/// `e_n - n (e, e_n) e` for the unit vector `e` from `x` to the boundary
/// point `(y', 0)`.
fn halfspace_kernel(x: &[f64], yp: &[f64], out: &mut [f64]) {
    let n = x.len();
    let mut e = [0.0; 3];
    for i in 0..n - 1 {
        e[i] = yp[i] - x[i];
    }
    e[n - 1] = -x[n - 1];
    let len = norm(&e[..n]);
    let en = e[n - 1] / len;
    for i in 0..n {
        out[i] = (if i == n - 1 { 1.0 } else { 0.0 }) - n as f64 * en * e[i] / len;
    }
}

/// Sign of the directional derivative kernel, `sign(K(y) . l)`; attains the
/// gradient coefficient when `l` is the extremal direction (the normal
/// direction for balls in three dimensions and for half-spaces).
pub fn extremal_gradient_data(region: Region, x: &[f64], l: &[f64], delta: f64) -> Result<BoundaryField> {
    check_point(region, x)?;
    check_delta(delta)?;
    let n = x.len();
    if l.len() != n || (norm(l) - 1.0).abs() > 1e-12 {
        return Err(Error::domain("direction must be a unit vector of the same dimension"));
    }
    let l = l.to_vec();
    match region {
        Region::Ball { radius } => {
            let xh: Vec<f64> = x.iter().map(|v| v / radius).collect();
            let mut k = vec![0.0; n];
            ball_gradient_kernel(&xh, &nearest_direction(&xh), &mut k);
            let width = delta * norm(&k);
            Ok(BoundaryField::scalar("extremal-gradient", n, 1.0, move |y| {
                let mut k = [0.0; 3];
                ball_gradient_kernel(&xh, y, &mut k[..n]);
                soft_sign(dot(&k[..n], &l), width)
            }))
        }
        Region::HalfSpace => {
            let xp = x[..n - 1].to_vec();
            let rho0 = x[n - 1] * ((n - 1) as f64).sqrt();
            let x = x.to_vec();
            let normal = l[n - 1] == 1.0;
            let f = BoundaryField::scalar("extremal-gradient", n - 1, 1.0, move |y| {
                let mut k = [0.0; 3];
                halfspace_kernel(&x, y, &mut k[..n]);
                soft_sign(dot(&k[..n], &l), delta)
            });
            // for l = e_n the sign changes on the circle cos(psi) = 1/sqrt(n)
            Ok(if normal && delta == 0.0 { f.with_breaks(xp, vec![rho0]) } else { f })
        }
    }
}

/// Unit direction of the divergence kernel. In a ball the kernel never
/// vanishes inside, in the half-space `|kernel| >= 1`, so these data are
/// smooth.
pub fn extremal_divergence_field(region: Region, x: &[f64]) -> Result<BoundaryField> {
    check_point(region, x)?;
    let n = x.len();
    match region {
        Region::Ball { radius } => {
            let xh: Vec<f64> = x.iter().map(|v| v / radius).collect();
            Ok(BoundaryField::new("extremal-divergence", n, n, 1.0, move |y, out| {
                ball_gradient_kernel(&xh, y, out);
                normalize(out);
            }))
        }
        Region::HalfSpace => {
            let x = x.to_vec();
            Ok(BoundaryField::new("extremal-divergence", n, n - 1, 1.0, move |y, out| {
                halfspace_kernel(&x, y, out);
                normalize(out);
            }))
        }
    }
}

fn normalize(v: &mut [f64]) {
    let l = norm(v);
    if l > 0.0 {
        v.iter_mut().for_each(|c| *c /= l);
    } else {
        v.iter_mut().for_each(|c| *c = 0.0);
    }
}

/// Boundary displacement (or velocity) attaining the Lamé divergence and
/// Stokes pressure coefficients at `x` in the half-space.
pub fn extremal_lame_field(x: &[f64]) -> Result<BoundaryField> {
    Ok(extremal_divergence_field(Region::HalfSpace, x)?.renamed("extremal-lame"))
}

/// `sign Re(e^{i alpha} w / (w - z)^{s+1})` on `|w| = radius`, the real part
/// of the boundary values of an analytic function whose `s`-th derivative at
/// `z` attains the disk coefficient when `alpha` is the extremal rotation.
/// Returned as a function of the unit direction `(cos theta, sin theta)`.
pub fn extremal_analytic_data(s: u32, z: Complex64, alpha: f64, radius: f64, delta: f64) -> Result<BoundaryField> {
    check_delta(delta)?;
    if !(radius > 0.0 && z.norm() < radius) {
        return Err(Error::domain("point must lie inside the disk"));
    }
    if s == 0 {
        return Err(Error::domain("derivative order must be positive"));
    }
    let rot = Complex64::from_polar(1.0, alpha);
    let k = s as i32 + 1;
    let width = delta * radius / (radius - z.norm()).powi(k);
    Ok(BoundaryField::scalar("extremal-analytic", 2, 1.0, move |y| {
        let w = Complex64::new(y[0], y[1]) * radius;
        soft_sign((rot * w / (w - z).powi(k)).re, width)
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn center_gradient_data_is_sign_of_normal_coordinate() {
        let f = extremal_gradient_data(Region::Ball { radius: 1.0 }, &[0.0; 3], &[0.0, 0.0, 1.0], 0.0).unwrap();
        for y in [[0.6, 0.0, 0.8], [0.0, 0.6, -0.8], [1.0, 0.0, 0.0], [0.0, 0.28, 0.96]] {
            assert_eq!(f.eval_vec(&y)[0], if y[2] > 0.0 { 1.0 } else if y[2] < 0.0 { -1.0 } else { 0.0 });
        }
    }

    #[test]
    fn center_divergence_data_is_radial() {
        let f = extremal_divergence_field(Region::Ball { radius: 2.0 }, &[0.0; 3]).unwrap();
        let y = [0.36, 0.48, 0.8];
        let v = f.eval_vec(&y);
        for i in 0..3 {
            assert!((v[i] - y[i]).abs() < 1e-15);
        }
    }

    #[test]
    fn center_analytic_data_is_rotated_cosine_sign() {
        // the kernel at 0 is e^{-i s theta}, so for s = 1 the data are
        // sign(cos(theta - alpha))
        let alpha = 0.4;
        let f = extremal_analytic_data(1, Complex64::new(0.0, 0.0), alpha, 1.0, 0.0).unwrap();
        for j in 0..50 {
            let th = 0.1 + 0.123 * j as f64;
            let want = (th - alpha).cos().signum();
            assert_eq!(f.eval_vec(&[th.cos(), th.sin()])[0], want);
        }
    }

    #[test]
    fn halfspace_data_breaks_on_the_normal_cone() {
        let f = extremal_gradient_data(Region::HalfSpace, &[0.1, 0.2, 2.0], &[0.0, 0.0, 1.0], 0.0).unwrap();
        let b = f.breaks.clone().unwrap();
        assert_eq!(b.center, vec![0.1, 0.2]);
        let rho = b.radii[0];
        // cos(psi) = 1/sqrt 3 at the break
        assert!((2.0 / rho.hypot(2.0) - 1.0 / 3f64.sqrt()).abs() < 1e-14);
        assert_eq!(f.eval_vec(&[0.1 + 0.9 * rho, 0.2])[0], -1.0);
        assert_eq!(f.eval_vec(&[0.1 + 1.1 * rho, 0.2])[0], 1.0);
        let lame = extremal_lame_field(&[0.0, 0.0, 1.0]).unwrap();
        assert!((norm(&lame.eval_vec(&[0.3, 0.4])) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn smoothing_is_bounded_and_agrees_with_sign_away_from_zeros() {
        let x = [0.0, 0.0, 0.5];
        let l = [0.0, 0.0, 1.0];
        let sharp = extremal_gradient_data(Region::Ball { radius: 1.0 }, &x, &l, 0.0).unwrap();
        let soft = extremal_gradient_data(Region::Ball { radius: 1.0 }, &x, &l, 1e-3).unwrap();
        assert_eq!(soft.eval_vec(&[0.0, 0.0, 1.0])[0], 1.0);
        assert_eq!(sharp.eval_vec(&[0.0, 0.0, -1.0])[0], soft.eval_vec(&[0.0, 0.0, -1.0])[0]);
        assert!(extremal_gradient_data(Region::Ball { radius: 1.0 }, &x, &[0.0, 0.0, 2.0], 0.0).is_err());
        assert!(extremal_gradient_data(Region::Ball { radius: 1.0 }, &[0.0, 0.0, 1.0], &l, 0.0).is_err());
    }
}
