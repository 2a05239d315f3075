//! Adaptive integration and bounded scalar maximization.
//!
//! The one-dimensional integrator is a globally adaptive Gauss-Kronrod
//! (10/21 point) bisection scheme. Integrands built from `|.|` have kinks
//! wherever the inner expression changes sign; callers that know those
//! points pass them in [`QuadSpec::kinks`] and the interval is split there
//! before any adaptivity kicks in, which keeps the convergence spectral on
//! each piece.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::FRAC_PI_2;

use crate::error::{Error, Result};

/// Tolerances and subdivision control for [`integrate_1d`].
#[derive(Debug, Clone, PartialEq)]
pub struct QuadSpec {
    pub abs_tol: f64,
    pub rel_tol: f64,
    /// Maximum number of bisections applied to any initial piece.
    pub max_depth: u32,
    /// Interior points where the derivative of the integrand may jump.
    pub kinks: Vec<f64>,
}

impl Default for QuadSpec {
    fn default() -> Self {
        QuadSpec {
            abs_tol: 1e-10,
            rel_tol: 1e-10,
            max_depth: 40,
            kinks: Vec::new(),
        }
    }
}

impl QuadSpec {
    pub fn with_tol(abs_tol: f64, rel_tol: f64) -> Self {
        QuadSpec {
            abs_tol,
            rel_tol,
            ..Default::default()
        }
    }

    pub fn kinks(mut self, kinks: Vec<f64>) -> Self {
        self.kinks = kinks;
        self
    }

    fn validate(&self) -> Result<()> {
        if !(self.abs_tol > 0.0 && self.rel_tol > 0.0) {
            return Err(Error::domain("quadrature tolerances must be positive"));
        }
        if self.max_depth < 1 {
            return Err(Error::domain("max_depth must be at least 1"));
        }
        Ok(())
    }
}

/// Value and error estimate of a quadrature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub err_est: f64,
}

// Kronrod abscissae and weights (21 points) with the embedded 10-point Gauss
// weights; QUADPACK qk21.
const XGK: [f64; 11] = [
    0.995657163025808080735527280689003,
    0.973906528517171720077964012084452,
    0.930157491355708226001207180059508,
    0.865063366688984510732096688423493,
    0.780817726586416897063717578345042,
    0.679409568299024406234327365114874,
    0.562757134668604683339000099272694,
    0.433395394129247190799265943165784,
    0.294392862701460198131126603103866,
    0.148874338981631210884826001129720,
    0.000000000000000000000000000000000,
];
const WGK: [f64; 11] = [
    0.011694638867371874278064396062192,
    0.032558162307964727478818972459390,
    0.054755896574351996031381300244580,
    0.075039674810919952767043140916190,
    0.093125454583697605535065465083366,
    0.109387158802297641899210590325805,
    0.123491976262065851077208980438770,
    0.134709217311473325928054001771707,
    0.142775938577060080797094273138717,
    0.147739104901338491374841515972068,
    0.149445554002916905664936468389821,
];
const WG: [f64; 5] = [
    0.066671344308688137593568809893332,
    0.149451349150580593145776339657697,
    0.219086362515982043995534934228163,
    0.269266719309996355091226921569469,
    0.295524224714752870173892994651338,
];

struct Segment {
    a: f64,
    b: f64,
    value: f64,
    err: f64,
    depth: u32,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.err == other.err
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.err.total_cmp(&other.err)
    }
}

fn non_finite(x: f64, v: f64) -> Error {
    Error::Evaluation {
        point: format!("x = {x:e}"),
        value: v,
    }
}

/// One Gauss-Kronrod 21 step on `[a, b]`: (value, error estimate).
fn gk21<F>(f: &F, a: f64, b: f64) -> Result<(f64, f64)>
where
    F: Fn(f64) -> Result<f64>,
{
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut fv1 = [0.0; 10];
    let mut fv2 = [0.0; 10];
    let fc = f(center)?;
    if !fc.is_finite() {
        return Err(non_finite(center, fc));
    }
    let mut resk = WGK[10] * fc;
    let mut resg = 0.0;
    let mut resabs = WGK[10] * fc.abs();
    for j in 0..10 {
        let dx = half * XGK[j];
        let (x1, x2) = (center - dx, center + dx);
        let f1 = f(x1)?;
        let f2 = f(x2)?;
        if !f1.is_finite() {
            return Err(non_finite(x1, f1));
        }
        if !f2.is_finite() {
            return Err(non_finite(x2, f2));
        }
        fv1[j] = f1;
        fv2[j] = f2;
        resk += WGK[j] * (f1 + f2);
        resabs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            resg += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * resk;
    let mut resasc = WGK[10] * (fc - mean).abs();
    for j in 0..10 {
        resasc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let value = resk * half;
    let resabs = resabs * half.abs();
    let resasc = resasc * half.abs();
    let mut err = ((resk - resg) * half).abs();
    if resasc != 0.0 && err != 0.0 {
        err = resasc * (200.0 * err / resasc).powf(1.5).min(1.0);
    }
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * resabs);
    }
    Ok((value, err))
}

/// Hard cap on the number of live segments of one adaptive run.
const MAX_SEGMENTS: usize = 20_000;

/// Adaptive integration of a fallible integrand over `[a, b]`.
pub fn try_integrate_1d<F>(f: F, a: f64, b: f64, spec: &QuadSpec) -> Result<Estimate>
where
    F: Fn(f64) -> Result<f64>,
{
    spec.validate()?;
    if !(a < b) || !a.is_finite() || !b.is_finite() {
        return Err(Error::domain(format!("integration interval [{a}, {b}] is empty or infinite")));
    }
    let mut cuts = Vec::with_capacity(spec.kinks.len() + 2);
    cuts.push(a);
    let mut kinks: Vec<f64> = spec
        .kinks
        .iter()
        .copied()
        .filter(|k| k.is_finite() && *k > a && *k < b)
        .collect();
    kinks.sort_by(f64::total_cmp);
    for k in kinks {
        // drop kinks that would create degenerate pieces
        if k - cuts[cuts.len() - 1] > 4.0 * f64::EPSILON * (b - a) {
            cuts.push(k);
        }
    }
    if b - cuts[cuts.len() - 1] <= 4.0 * f64::EPSILON * (b - a) && cuts.len() > 1 {
        cuts.pop();
    }
    cuts.push(b);

    let mut heap = BinaryHeap::with_capacity(64);
    let mut settled_value = 0.0;
    let mut settled_err = 0.0;
    let mut total = 0.0;
    let mut total_err = 0.0;
    for w in cuts.windows(2) {
        let (value, err) = gk21(&f, w[0], w[1])?;
        total += value;
        total_err += err;
        heap.push(Segment {
            a: w[0],
            b: w[1],
            value,
            err,
            depth: 0,
        });
    }

    loop {
        let tol = spec.abs_tol.max(spec.rel_tol * total.abs());
        if total_err <= tol {
            return Ok(Estimate {
                value: total,
                err_est: total_err,
            });
        }
        let Some(worst) = heap.pop() else {
            break;
        };
        let mid = 0.5 * (worst.a + worst.b);
        let splittable = worst.depth < spec.max_depth && mid > worst.a && mid < worst.b;
        if !splittable || heap.len() >= MAX_SEGMENTS {
            // cannot improve this piece; park it and keep refining the rest
            settled_value += worst.value;
            settled_err += worst.err;
            if heap.is_empty() || heap.len() >= MAX_SEGMENTS {
                break;
            }
            continue;
        }
        let (v1, e1) = gk21(&f, worst.a, mid)?;
        let (v2, e2) = gk21(&f, mid, worst.b)?;
        total += v1 + v2 - worst.value;
        total_err += e1 + e2 - worst.err;
        heap.push(Segment {
            a: worst.a,
            b: mid,
            value: v1,
            err: e1,
            depth: worst.depth + 1,
        });
        heap.push(Segment {
            a: mid,
            b: worst.b,
            value: v2,
            err: e2,
            depth: worst.depth + 1,
        });
    }
    // recompute from scratch to shed accumulated round-off in the running sums
    let value = heap.iter().map(|s| s.value).sum::<f64>() + settled_value;
    let err_est = heap.iter().map(|s| s.err).sum::<f64>() + settled_err;
    if err_est <= spec.abs_tol.max(spec.rel_tol * value.abs()) {
        return Ok(Estimate { value, err_est });
    }
    Err(Error::Convergence {
        context: format!("integral over [{a:e}, {b:e}]"),
        value,
        err_est,
    })
}

/// Adaptive integration of `f` over `[a, b]`, splitting first at the
/// declared kinks.
pub fn integrate_1d<F>(f: F, a: f64, b: f64, spec: &QuadSpec) -> Result<Estimate>
where
    F: Fn(f64) -> f64,
{
    try_integrate_1d(|x| Ok(f(x)), a, b, spec)
}

/// Rectangle `[outer.0, outer.1] x [inner.0, inner.1]` for [`integrate_2d`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rect {
    pub outer: (f64, f64),
    pub inner: (f64, f64),
}

impl Rect {
    pub fn new(outer: (f64, f64), inner: (f64, f64)) -> Self {
        Rect { outer, inner }
    }
}

/// Iterated integral `int_outer int_inner f(outer, inner)`.
///
/// `inner_kinks`, when given, receives the outer coordinate and fills the
/// kink list of the inner integral. The inner tolerance is tightened so its
/// noise stays below the outer tolerance.
pub fn try_integrate_2d<F, K>(
    f: F,
    rect: Rect,
    spec: &QuadSpec,
    inner_kinks: Option<K>,
) -> Result<Estimate>
where
    F: Fn(f64, f64) -> Result<f64>,
    K: Fn(f64, &mut Vec<f64>),
{
    let outer_len = rect.outer.1 - rect.outer.0;
    let inner_base = QuadSpec {
        abs_tol: 0.1 * spec.abs_tol / outer_len.max(1.0),
        rel_tol: 0.1 * spec.rel_tol,
        max_depth: spec.max_depth,
        kinks: Vec::new(),
    };
    let worst_inner = std::cell::Cell::new(0.0f64);
    let outer_spec = QuadSpec {
        kinks: spec.kinks.clone(),
        ..spec.clone()
    };
    let est = try_integrate_1d(
        |u| {
            let mut inner_spec = inner_base.clone();
            if let Some(k) = &inner_kinks {
                k(u, &mut inner_spec.kinks);
            }
            let e = try_integrate_1d(|v| f(u, v), rect.inner.0, rect.inner.1, &inner_spec)
                .map_err(|e| e.within(format!("inner integral at outer node {u:e}")))?;
            worst_inner.set(worst_inner.get().max(e.err_est));
            Ok(e.value)
        },
        rect.outer.0,
        rect.outer.1,
        &outer_spec,
    )?;
    Ok(Estimate {
        value: est.value,
        err_est: est.err_est + outer_len.abs() * worst_inner.get(),
    })
}

/// Iterated integral of an infallible integrand without inner kink hints.
pub fn integrate_2d<F>(f: F, rect: Rect, spec: &QuadSpec) -> Result<Estimate>
where
    F: Fn(f64, f64) -> f64,
{
    try_integrate_2d(
        |u, v| Ok(f(u, v)),
        rect,
        spec,
        None::<fn(f64, &mut Vec<f64>)>,
    )
}

// --------------------------------------------------------------------------
// Vector-valued integrands
// --------------------------------------------------------------------------

/// Value and error estimate of a vector-valued quadrature; the error is the
/// largest component error.
#[derive(Debug, Clone, PartialEq)]
pub struct VecEstimate {
    pub value: Vec<f64>,
    pub err_est: f64,
}

struct VecSegment {
    a: f64,
    b: f64,
    value: Vec<f64>,
    err: f64,
    depth: u32,
}

impl PartialEq for VecSegment {
    fn eq(&self, other: &Self) -> bool {
        self.err == other.err
    }
}
impl Eq for VecSegment {}
impl PartialOrd for VecSegment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for VecSegment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.err.total_cmp(&other.err)
    }
}

/// Gauss-Kronrod 21 step for `dim` components at once, with the QUADPACK
/// error heuristic applied componentwise.
fn gk21_vec<F>(f: &F, dim: usize, a: f64, b: f64, buf: &mut [f64]) -> Result<(Vec<f64>, f64)>
where
    F: Fn(f64, &mut [f64]) -> Result<()>,
{
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    // fv[k * dim + i]: component i at node k (0 = center, 2j+1 / 2j+2 = left / right of xgk[j])
    let mut fv = vec![0.0; 21 * dim];
    let mut eval = |k: usize, x: f64, buf: &mut [f64]| -> Result<()> {
        buf.iter_mut().for_each(|v| *v = 0.0);
        f(x, buf)?;
        for (i, v) in buf.iter().enumerate() {
            if !v.is_finite() {
                return Err(non_finite(x, *v));
            }
            fv[k * dim + i] = *v;
        }
        Ok(())
    };
    eval(0, center, buf)?;
    for j in 0..10 {
        let dx = half * XGK[j];
        eval(2 * j + 1, center - dx, buf)?;
        eval(2 * j + 2, center + dx, buf)?;
    }
    let mut value = vec![0.0; dim];
    let mut err_max = 0.0f64;
    for i in 0..dim {
        let c = fv[i];
        let mut resk = WGK[10] * c;
        let mut resg = 0.0;
        let mut resabs = WGK[10] * c.abs();
        for j in 0..10 {
            let (f1, f2) = (fv[(2 * j + 1) * dim + i], fv[(2 * j + 2) * dim + i]);
            resk += WGK[j] * (f1 + f2);
            resabs += WGK[j] * (f1.abs() + f2.abs());
            if j % 2 == 1 {
                resg += WG[j / 2] * (f1 + f2);
            }
        }
        let mean = 0.5 * resk;
        let mut resasc = WGK[10] * (c - mean).abs();
        for j in 0..10 {
            let (f1, f2) = (fv[(2 * j + 1) * dim + i], fv[(2 * j + 2) * dim + i]);
            resasc += WGK[j] * ((f1 - mean).abs() + (f2 - mean).abs());
        }
        let resabs = resabs * half.abs();
        let resasc = resasc * half.abs();
        let mut err = ((resk - resg) * half).abs();
        if resasc != 0.0 && err != 0.0 {
            err = resasc * (200.0 * err / resasc).powf(1.5).min(1.0);
        }
        if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
            err = err.max(50.0 * f64::EPSILON * resabs);
        }
        value[i] = resk * half;
        err_max = err_max.max(err);
    }
    Ok((value, err_max))
}

fn vec_tol(spec: &QuadSpec, v: &[f64]) -> f64 {
    let scale = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    spec.abs_tol.max(spec.rel_tol * scale)
}

/// Adaptive integration of a `dim`-component integrand. `f(x, out)` writes
/// the components at `x` into `out` (zeroed beforehand).
pub fn try_integrate_vec<F>(f: F, dim: usize, a: f64, b: f64, spec: &QuadSpec) -> Result<VecEstimate>
where
    F: Fn(f64, &mut [f64]) -> Result<()>,
{
    spec.validate()?;
    if !(a < b) || !a.is_finite() || !b.is_finite() {
        return Err(Error::domain(format!("integration interval [{a}, {b}] is empty or infinite")));
    }
    let mut buf = vec![0.0; dim];
    let mut cuts = vec![a];
    let mut kinks: Vec<f64> = spec
        .kinks
        .iter()
        .copied()
        .filter(|k| k.is_finite() && *k > a && *k < b)
        .collect();
    kinks.sort_by(f64::total_cmp);
    for k in kinks {
        if k - cuts[cuts.len() - 1] > 4.0 * f64::EPSILON * (b - a) {
            cuts.push(k);
        }
    }
    if b - cuts[cuts.len() - 1] <= 4.0 * f64::EPSILON * (b - a) && cuts.len() > 1 {
        cuts.pop();
    }
    cuts.push(b);

    let mut heap = BinaryHeap::new();
    let mut total = vec![0.0; dim];
    let mut total_err = 0.0;
    for w in cuts.windows(2) {
        let (v, e) = gk21_vec(&f, dim, w[0], w[1], &mut buf)?;
        total.iter_mut().zip(&v).for_each(|(t, x)| *t += x);
        total_err += e;
        heap.push(VecSegment {
            a: w[0],
            b: w[1],
            value: v,
            err: e,
            depth: 0,
        });
    }
    let mut parked: Vec<VecSegment> = Vec::new();
    while total_err > vec_tol(spec, &total) {
        let Some(worst) = heap.pop() else { break };
        let mid = 0.5 * (worst.a + worst.b);
        if worst.depth >= spec.max_depth || !(mid > worst.a && mid < worst.b) || heap.len() >= MAX_SEGMENTS {
            parked.push(worst);
            if heap.len() >= MAX_SEGMENTS {
                break;
            }
            continue;
        }
        let (v1, e1) = gk21_vec(&f, dim, worst.a, mid, &mut buf)?;
        let (v2, e2) = gk21_vec(&f, dim, mid, worst.b, &mut buf)?;
        for i in 0..dim {
            total[i] += v1[i] + v2[i] - worst.value[i];
        }
        total_err += e1 + e2 - worst.err;
        heap.push(VecSegment { a: worst.a, b: mid, value: v1, err: e1, depth: worst.depth + 1 });
        heap.push(VecSegment { a: mid, b: worst.b, value: v2, err: e2, depth: worst.depth + 1 });
    }
    let mut value = vec![0.0; dim];
    let mut err_est = 0.0;
    for s in heap.iter().chain(parked.iter()) {
        value.iter_mut().zip(&s.value).for_each(|(t, x)| *t += x);
        err_est += s.err;
    }
    if err_est <= vec_tol(spec, &value) {
        Ok(VecEstimate { value, err_est })
    } else {
        Err(Error::Convergence {
            context: format!("vector integral over [{a:e}, {b:e}]"),
            value: value.iter().fold(0.0f64, |m, x| m.max(x.abs())),
            err_est,
        })
    }
}

/// Iterated vector integral over `rect`, inner kinks supplied per outer node.
pub fn try_integrate_2d_vec<F, K>(
    f: F,
    dim: usize,
    rect: Rect,
    spec: &QuadSpec,
    inner_kinks: Option<K>,
) -> Result<VecEstimate>
where
    F: Fn(f64, f64, &mut [f64]) -> Result<()>,
    K: Fn(f64, &mut Vec<f64>),
{
    let outer_len = rect.outer.1 - rect.outer.0;
    let inner_base = QuadSpec {
        abs_tol: 0.1 * spec.abs_tol / outer_len.max(1.0),
        rel_tol: 0.1 * spec.rel_tol,
        max_depth: spec.max_depth,
        kinks: Vec::new(),
    };
    let worst_inner = std::cell::Cell::new(0.0f64);
    let est = try_integrate_vec(
        |u, out: &mut [f64]| {
            let mut inner_spec = inner_base.clone();
            if let Some(k) = &inner_kinks {
                k(u, &mut inner_spec.kinks);
            }
            let e = try_integrate_vec(|v, o: &mut [f64]| f(u, v, o), dim, rect.inner.0, rect.inner.1, &inner_spec)
                .map_err(|e| e.within(format!("inner integral at outer node {u:e}")))?;
            worst_inner.set(worst_inner.get().max(e.err_est));
            out.copy_from_slice(&e.value);
            Ok(())
        },
        dim,
        rect.outer.0,
        rect.outer.1,
        spec,
    )?;
    Ok(VecEstimate {
        value: est.value,
        err_est: est.err_est + outer_len.abs() * worst_inner.get(),
    })
}

// --------------------------------------------------------------------------
// Maximization
// --------------------------------------------------------------------------

/// Search domain for [`maximize_scalar`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SearchDomain {
    /// Closed interval `[lo, hi]`.
    Interval(f64, f64),
    /// `[start, inf)`, scanned through `t = start + tan(psi)`, `psi` in `[0, pi/2)`.
    HalfLine(f64),
}

/// Coarse-scan plus golden-section settings.
#[derive(Debug, Clone, PartialEq)]
pub struct MaxSpec {
    pub grid_points: usize,
    pub refine_tol: f64,
    pub domain: SearchDomain,
}

impl MaxSpec {
    pub fn interval(lo: f64, hi: f64) -> Self {
        MaxSpec {
            grid_points: 257,
            refine_tol: 1e-12,
            domain: SearchDomain::Interval(lo, hi),
        }
    }

    pub fn half_line(start: f64) -> Self {
        MaxSpec {
            grid_points: 257,
            refine_tol: 1e-12,
            domain: SearchDomain::HalfLine(start),
        }
    }

    pub fn grid_points(mut self, n: usize) -> Self {
        self.grid_points = n;
        self
    }
}

/// Location and value of a maximum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Maximum {
    pub argmax: f64,
    pub max: f64,
}

// keeps tan finite at the right end of the compactified half-line
const HALF_LINE_EDGE: f64 = 1e-9;
const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Maximizes a fallible objective: scan on `grid_points` equispaced points,
/// then golden-section refinement inside the cell around the best sample.
pub fn try_maximize_scalar<G>(g: G, spec: &MaxSpec) -> Result<Maximum>
where
    G: Fn(f64) -> Result<f64>,
{
    if spec.grid_points < 3 || !(spec.refine_tol > 0.0) {
        return Err(Error::domain("maximize_scalar needs grid_points >= 3 and refine_tol > 0"));
    }
    let (lo, hi, map): (f64, f64, Box<dyn Fn(f64) -> f64>) = match spec.domain {
        SearchDomain::Interval(lo, hi) => {
            if !(lo < hi) {
                return Err(Error::domain(format!("empty search interval [{lo}, {hi}]")));
            }
            (lo, hi, Box::new(|t| t))
        }
        SearchDomain::HalfLine(start) => (
            0.0,
            FRAC_PI_2 - HALF_LINE_EDGE,
            Box::new(move |psi: f64| start + psi.tan()),
        ),
    };
    let eval = |s: f64| -> Result<f64> {
        let t = map(s);
        let v = g(t)?;
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::Evaluation {
                point: format!("t = {t:e}"),
                value: v,
            })
        }
    };
    let m = spec.grid_points;
    let step = (hi - lo) / (m - 1) as f64;
    let node = |i: usize| if i == m - 1 { hi } else { lo + step * i as f64 };
    let mut best_i = 0;
    let mut best_v = f64::NEG_INFINITY;
    for i in 0..m {
        let v = eval(node(i))?;
        if v > best_v {
            best_v = v;
            best_i = i;
        }
    }
    let mut a = node(best_i.saturating_sub(1));
    let mut b = node((best_i + 1).min(m - 1));
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = eval(c)?;
    let mut fd = eval(d)?;
    let mut best_s = node(best_i);
    while (b - a).abs() > spec.refine_tol {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = eval(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = eval(d)?;
        }
    }
    for (s, v) in [(c, fc), (d, fd)] {
        if v > best_v {
            best_v = v;
            best_s = s;
        }
    }
    Ok(Maximum {
        argmax: map(best_s),
        max: best_v,
    })
}

/// Maximizes `g` over the domain of `spec`.
pub fn maximize_scalar<G>(g: G, spec: &MaxSpec) -> Result<Maximum>
where
    G: Fn(f64) -> f64,
{
    try_maximize_scalar(|t| Ok(g(t)), spec)
}
