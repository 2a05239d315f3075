//! Derivatives of an analytic function in a disk from the boundary values
//! of its real part, through the differentiated Schwarz kernel.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::BoundaryField;
use crate::constants::{factorial, MAX_ORDER};
use crate::error::{Error, Result};

/// Disk radius and trapezoid-rule controls.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SchwarzSpec {
    pub radius: f64,
    /// Successive node counts (powers of two) must agree to
    /// `tol * max(1, |f^{(s)}|)`.
    pub tol: f64,
    pub min_nodes: usize,
    pub max_nodes: usize,
}

impl Default for SchwarzSpec {
    fn default() -> Self {
        SchwarzSpec {
            radius: 1.0,
            tol: 1e-10,
            min_nodes: 2048,
            max_nodes: 1 << 15,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SchwarzValue {
    pub value: Complex64,
    /// Change from the previous node count.
    pub err_est: f64,
    pub nodes: usize,
    /// Largest `|h|` seen at the nodes.
    pub data_sup: f64,
}

/// `f^{(s)}(z)` for the analytic `f` with `Re f = h` on `|w| = R`:
/// `(s!/pi) int_0^{2 pi} h(w) w / (w - z)^{s+1} dtheta`. `h` is evaluated at
/// unit directions `(cos theta, sin theta)`.
pub fn schwarz_derivative(s: u32, h: &BoundaryField, z: Complex64, spec: &SchwarzSpec) -> Result<SchwarzValue> {
    if s == 0 || s > MAX_ORDER {
        return Err(Error::domain(format!("derivative order must lie in 1..={MAX_ORDER}, got {s}")));
    }
    h.check(Some(1), 2)?;
    let r = spec.radius;
    if !(r > 0.0) {
        return Err(Error::domain("disk radius must be positive"));
    }
    if !(z.norm() < r) {
        return Err(Error::domain("point must lie inside the disk"));
    }
    if !spec.min_nodes.is_power_of_two() || spec.max_nodes < spec.min_nodes {
        return Err(Error::domain("node counts must be powers of two with min <= max"));
    }
    let k = s as i32 + 1;
    let mut sup = 0.0f64;
    let mut term = |j: usize, n: usize| {
        let th = 2.0 * PI * j as f64 / n as f64;
        let (sn, c) = th.sin_cos();
        let hv = h.eval_vec(&[c, sn])[0];
        sup = sup.max(hv.abs());
        let w = Complex64::new(r * c, r * sn);
        hv * w / (w - z).powi(k)
    };
    let pref = factorial(s) / PI;
    let mut n = spec.min_nodes;
    let mut sum: Complex64 = (0..n).map(|j| term(j, n)).sum();
    let mut value = pref * sum * (2.0 * PI / n as f64);
    loop {
        let n2 = 2 * n;
        sum += (0..n).map(|j| term(2 * j + 1, n2)).sum::<Complex64>();
        let next = pref * sum * (2.0 * PI / n2 as f64);
        let diff = (next - value).norm();
        value = next;
        n = n2;
        if diff <= spec.tol * value.norm().max(1.0) {
            return Ok(SchwarzValue {
                value,
                err_est: diff,
                nodes: n,
                data_sup: sup,
            });
        }
        if n >= spec.max_nodes {
            return Err(Error::Convergence {
                context: format!("Schwarz integral, s = {s}, {n} nodes"),
                value: value.norm(),
                err_est: diff,
            });
        }
    }
}
