//! Poisson integrals over the sphere in two and three dimensions.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use super::{BoundaryField, FieldSample};
use crate::error::{Error, Result};
use crate::geometry::{norm, sphere_area, SphereGrid};

/// Radius of the ball and the sphere-grid level used for its boundary.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BallEval {
    pub radius: f64,
    pub level: u32,
    /// When set, the difference between this level and the previous one
    /// must not exceed `tol * max(1, |result|)`.
    pub tol: Option<f64>,
}

impl BallEval {
    pub fn unit(level: u32) -> Self {
        BallEval {
            radius: 1.0,
            level,
            tol: None,
        }
    }
}

fn cached_grid(dim: usize, level: u32) -> Result<Arc<SphereGrid>> {
    static GRIDS: OnceLock<Mutex<HashMap<(usize, u32), Arc<SphereGrid>>>> = OnceLock::new();
    let grids = GRIDS.get_or_init(Default::default);
    if let Some(g) = grids.lock().unwrap().get(&(dim, level)) {
        return Ok(g.clone());
    }
    let g = Arc::new(SphereGrid::new(dim, level)?);
    grids.lock().unwrap().insert((dim, level), g.clone());
    Ok(g)
}

/// Value and Jacobian of the Poisson extension on one grid, unit ball.
fn sums(g: &BoundaryField, xh: &[f64], grid: &SphereGrid) -> (Vec<f64>, Vec<f64>, f64) {
    let n = xh.len();
    let m = g.arity();
    let nf = n as f64;
    let r2: f64 = xh.iter().map(|v| v * v).sum();
    let omega = sphere_area(n);
    let mut value = vec![0.0; m];
    let mut jac = vec![0.0; m * n];
    let mut data = vec![0.0; m];
    let mut d = [0.0; 3];
    let mut sup = 0.0f64;
    for (y, w) in grid.iter() {
        g.eval(y, &mut data);
        sup = sup.max(norm(&data));
        let mut d2 = 0.0;
        for i in 0..n {
            d[i] = y[i] - xh[i];
            d2 += d[i] * d[i];
        }
        let dn = d2.powi(n as i32 / 2) * if n % 2 == 1 { d2.sqrt() } else { 1.0 };
        let p = w * (1.0 - r2) / (dn * omega);
        // (n(1-r^2)(y-x) - 2|y-x|^2 x) / |y-x|^{n+2}
        let q = w / (omega * dn * d2);
        for (k, gk) in data.iter().enumerate() {
            value[k] += p * gk;
            for j in 0..n {
                jac[k * n + j] += q * (nf * (1.0 - r2) * d[j] - 2.0 * d2 * xh[j]) * gk;
            }
        }
    }
    (value, jac, sup)
}

/// Poisson extension of `g` into the ball, with its Jacobian and (for
/// `n`-component data) divergence, on the configured grid level. The error
/// estimate is the change from the previous level.
pub fn poisson_ball(g: &BoundaryField, x: &[f64], eval: &BallEval) -> Result<FieldSample> {
    let n = x.len();
    if !(n == 2 || n == 3) {
        return Err(Error::UnsupportedDimension(n));
    }
    g.check(None, n)?;
    if !(eval.radius > 0.0) {
        return Err(Error::domain("ball radius must be positive"));
    }
    let xh: Vec<f64> = x.iter().map(|v| v / eval.radius).collect();
    if !(norm(&xh) < 1.0) {
        return Err(Error::domain("point must lie inside the ball"));
    }
    let grid = cached_grid(n, eval.level)?;
    let (value, mut jac, sup) = sums(g, &xh, &grid);
    jac.iter_mut().for_each(|v| *v /= eval.radius);
    let quad_err = if eval.level > 0 {
        let coarse = cached_grid(n, eval.level - 1)?;
        let (v0, mut j0, _) = sums(g, &xh, &coarse);
        j0.iter_mut().for_each(|v| *v /= eval.radius);
        let diff = value
            .iter()
            .zip(&v0)
            .chain(jac.iter().zip(&j0))
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        if let Some(tol) = eval.tol {
            let scale = value.iter().chain(&jac).fold(1.0f64, |m, v| m.max(v.abs()));
            if diff > tol * scale {
                return Err(Error::Convergence {
                    context: format!("Poisson integral on sphere grids {} and {}", eval.level - 1, eval.level),
                    value: norm(&value),
                    err_est: diff,
                });
            }
        }
        diff
    } else {
        f64::INFINITY
    };
    let divergence = (g.arity() == n).then(|| (0..n).map(|i| jac[i * n + i]).sum());
    Ok(FieldSample {
        value,
        gradient: Some(jac),
        divergence,
        pressure: None,
        quad_err,
        data_sup: sup,
    })
}

/// `u(x)` for the Poisson extension of `g`.
pub fn poisson_ball_value(g: &BoundaryField, x: &[f64], eval: &BallEval) -> Result<FieldSample> {
    poisson_ball(g, x, eval)
}

/// Gradient (Jacobian for vector data) of the Poisson extension.
pub fn poisson_ball_gradient(g: &BoundaryField, x: &[f64], eval: &BallEval) -> Result<FieldSample> {
    poisson_ball(g, x, eval)
}

/// Divergence of the Poisson extension of `n`-vector data.
pub fn poisson_ball_divergence(g: &BoundaryField, x: &[f64], eval: &BallEval) -> Result<FieldSample> {
    g.check(Some(x.len()), x.len())?;
    poisson_ball(g, x, eval)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::random_ball_field;

    #[test]
    fn reproduces_constants_and_linear_functions() {
        for n in [2, 3] {
            let e = BallEval::unit(4);
            let mut x = vec![0.0; n];
            x[n - 1] = 0.5;
            x[0] = 0.1;
            let one = poisson_ball_value(&BoundaryField::constant(vec![1.0], n), &x, &e).unwrap();
            assert!((one.value[0] - 1.0).abs() < 1e-10);
            assert!(one.gradient_norm().unwrap() < 1e-10);
            let lin = poisson_ball_gradient(&BoundaryField::coordinate(n - 1, n), &x, &e).unwrap();
            assert!((lin.value[0] - 0.5).abs() < 1e-9);
            let g = lin.gradient.unwrap();
            for (j, gj) in g.iter().enumerate() {
                let want = if j == n - 1 { 1.0 } else { 0.0 };
                assert!((gj - want).abs() < 1e-9, "n = {n}, j = {j}");
            }
        }
    }

    #[test]
    fn odd_data_vanish_at_center() {
        let g = BoundaryField::scalar("sign", 3, 1.0, |y| y[2].signum());
        let s = poisson_ball_value(&g, &[0.0; 3], &BallEval::unit(3)).unwrap();
        assert!(s.value[0].abs() < 1e-14);
    }

    #[test]
    fn divergence_of_identity_and_constant() {
        for n in [2, 3] {
            let e = BallEval::unit(4);
            let d = poisson_ball_divergence(&BoundaryField::radial(n), &vec![0.0; n], &e).unwrap();
            assert!((d.divergence.unwrap() - n as f64).abs() < 1e-9);
            let c = BoundaryField::constant(vec![0.3; n], n);
            let mut x = vec![0.2; n];
            x[0] = -0.4;
            let d = poisson_ball_divergence(&c, &x, &e).unwrap();
            assert!(d.divergence.unwrap().abs() < 1e-10);
        }
    }

    #[test]
    fn dilation() {
        // u(x) = x_3 / R on the ball of radius R
        let e = BallEval {
            radius: 2.0,
            level: 4,
            tol: Some(1e-8),
        };
        let s = poisson_ball(&BoundaryField::coordinate(2, 3), &[0.1, 0.2, 1.2], &e).unwrap();
        assert!((s.value[0] - 0.6).abs() < 1e-9);
        assert!((s.gradient.unwrap()[2] - 0.5).abs() < 1e-9);
    }

    #[test]
    fn harmonic_and_consistent_with_finite_differences() {
        let g = random_ball_field(7, 3, 1);
        let e = BallEval::unit(5);
        let x = [0.2, -0.3, 0.4];
        let u = |p: &[f64]| poisson_ball_value(&g, p, &e).unwrap().value[0];
        let h = 1e-3;
        let mut lap = 0.0;
        for j in 0..3 {
            let mut a = x;
            let mut b = x;
            a[j] += h;
            b[j] -= h;
            lap += (u(&a) - 2.0 * u(&x) + u(&b)) / (h * h);
        }
        assert!(lap.abs() < 1e-4, "laplacian {lap:e}");
        let grad = poisson_ball_gradient(&g, &x, &e).unwrap().gradient.unwrap();
        let h = 1e-5 * (1.0 - norm(&x));
        for j in 0..3 {
            let mut a = x;
            let mut b = x;
            a[j] += h;
            b[j] -= h;
            let fd = (u(&a) - u(&b)) / (2.0 * h);
            assert!((fd - grad[j]).abs() < 1e-6, "component {j}: {fd} vs {}", grad[j]);
        }
    }

    #[test]
    fn rejects_bad_points() {
        let g = BoundaryField::constant(vec![1.0], 3);
        assert!(poisson_ball(&g, &[0.0, 0.0, 1.0], &BallEval::unit(3)).is_err());
        assert!(matches!(
            poisson_ball(&BoundaryField::constant(vec![1.0], 4), &[0.0; 4], &BallEval::unit(3)),
            Err(Error::UnsupportedDimension(4))
        ));
        let e = BallEval {
            tol: Some(1e-12),
            ..BallEval::unit(1)
        };
        let sign = BoundaryField::scalar("sign", 3, 1.0, |y| y[2].signum());
        assert!(poisson_ball(&sign, &[0.0, 0.0, 0.6], &e).is_err());
    }
}
