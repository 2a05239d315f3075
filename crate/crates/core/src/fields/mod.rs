//! Boundary-integral evaluators for bounded harmonic, Lamé, Stokes and
//! analytic fields, together with the boundary data that attain the sharp
//! coefficients.
//!
//! Ball data live on the unit sphere (directions `y`, `|y| = 1`, the actual
//! boundary point being `R y`); half-space data live on the hyperplane
//! `x_n = 0` and are evaluated at its first `n - 1` coordinates.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::geometry::norm;

mod ball;
mod extremal;
mod halfspace;
mod random;
mod schwarz;

pub use ball::{poisson_ball, poisson_ball_divergence, poisson_ball_gradient, poisson_ball_value, BallEval};
pub use extremal::{
    extremal_analytic_data, extremal_divergence_field, extremal_gradient_data, extremal_lame_field,
    Region,
};
pub use halfspace::{
    lame_divergence_value, lame_stokes_velocity, poisson_halfspace, stokes_pressure_value, HalfSpaceEval,
};
pub use random::{random_ball_field, random_halfspace_field, smooth_bump, RANDOM_DEGREE};
pub use schwarz::{schwarz_derivative, SchwarzSpec, SchwarzValue};

type EvalFn = dyn Fn(&[f64], &mut [f64]) + Send + Sync;

/// Disc `{|y' - center| <= radius}` in the boundary hyperplane outside of
/// which half-space data vanish.
#[derive(Debug, Clone, PartialEq)]
pub struct Support {
    pub center: Vec<f64>,
    pub radius: f64,
}

/// Distances from `center` at which the data are not smooth (jumps of sign
/// data, for instance). Half-space evaluators centred at the same point
/// split their radial integration there.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialBreaks {
    pub center: Vec<f64>,
    pub radii: Vec<f64>,
}

/// Boundary data: a scalar or `m`-vector function on the boundary with a
/// declared bound on its (Euclidean) norm.
#[derive(Clone)]
pub struct BoundaryField {
    name: String,
    arity: usize,
    point_dim: usize,
    eval: Arc<EvalFn>,
    pub sup_norm: f64,
    pub support: Option<Support>,
    pub breaks: Option<RadialBreaks>,
}

impl fmt::Debug for BoundaryField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BoundaryField")
            .field("name", &self.name)
            .field("arity", &self.arity)
            .field("point_dim", &self.point_dim)
            .field("sup_norm", &self.sup_norm)
            .field("support", &self.support)
            .finish()
    }
}

impl BoundaryField {
    /// Wraps `eval(y, out)`, which must write `arity` components for a
    /// boundary point with `point_dim` coordinates.
    pub fn new<F>(name: impl Into<String>, arity: usize, point_dim: usize, sup_norm: f64, eval: F) -> Self
    where
        F: Fn(&[f64], &mut [f64]) + Send + Sync + 'static,
    {
        BoundaryField {
            name: name.into(),
            arity,
            point_dim,
            eval: Arc::new(eval),
            sup_norm,
            support: None,
            breaks: None,
        }
    }

    pub fn scalar<F>(name: impl Into<String>, point_dim: usize, sup_norm: f64, f: F) -> Self
    where
        F: Fn(&[f64]) -> f64 + Send + Sync + 'static,
    {
        Self::new(name, 1, point_dim, sup_norm, move |y, out| out[0] = f(y))
    }

    /// The constant field `c`.
    pub fn constant(c: Vec<f64>, point_dim: usize) -> Self {
        let sup = norm(&c);
        let arity = c.len();
        Self::new("constant", arity, point_dim, sup, move |_, out| out.copy_from_slice(&c))
    }

    /// The coordinate function `y -> y_k` on the unit sphere.
    pub fn coordinate(k: usize, n: usize) -> Self {
        Self::scalar(format!("coordinate-{k}"), n, 1.0, move |y| y[k])
    }

    /// The identity field `y -> y` on the unit sphere.
    pub fn radial(n: usize) -> Self {
        Self::new("radial", n, n, 1.0, |y, out| out.copy_from_slice(y))
    }

    pub fn with_support(mut self, center: Vec<f64>, radius: f64) -> Self {
        self.support = Some(Support { center, radius });
        self
    }

    pub fn with_breaks(mut self, center: Vec<f64>, radii: Vec<f64>) -> Self {
        self.breaks = Some(RadialBreaks { center, radii });
        self
    }

    pub fn renamed(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn point_dim(&self) -> usize {
        self.point_dim
    }

    #[inline]
    pub fn eval(&self, y: &[f64], out: &mut [f64]) {
        (self.eval)(y, out)
    }

    pub fn eval_vec(&self, y: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.arity];
        self.eval(y, &mut out);
        out
    }

    pub(crate) fn check(&self, arity: Option<usize>, point_dim: usize) -> Result<()> {
        if self.point_dim != point_dim {
            return Err(Error::domain(format!(
                "boundary field '{}' takes {}-coordinate points, evaluator supplies {}",
                self.name, self.point_dim, point_dim
            )));
        }
        if let Some(a) = arity {
            if self.arity != a {
                return Err(Error::domain(format!(
                    "boundary field '{}' has {} components, evaluator needs {}",
                    self.name, self.arity, a
                )));
            }
        }
        Ok(())
    }
}

/// Values of a field and its derivatives at one point.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct FieldSample {
    /// `u(x)`, one entry per component.
    pub value: Vec<f64>,
    /// Jacobian `d u_i / d x_j`, row-major `arity x n`; the gradient for
    /// scalar data.
    pub gradient: Option<Vec<f64>>,
    pub divergence: Option<f64>,
    pub pressure: Option<f64>,
    /// Quadrature and truncation error bound for the reported quantities.
    pub quad_err: f64,
    /// Largest norm of the data seen at the quadrature nodes; a spot check
    /// of the declared sup-norm.
    pub data_sup: f64,
}

impl FieldSample {
    /// Euclidean norm of the gradient of scalar data.
    pub fn gradient_norm(&self) -> Option<f64> {
        self.gradient.as_deref().map(norm)
    }

    /// Largest derivative along a unit direction, i.e. the spectral norm of
    /// the Jacobian.
    pub fn directional_norm(&self, n: usize) -> Option<f64> {
        let g = self.gradient.as_deref()?;
        let m = g.len() / n;
        let jac = nalgebra::DMatrix::from_row_slice(m, n, g);
        Some(jac.singular_values().max())
    }
}
