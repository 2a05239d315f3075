//! Dimension bookkeeping, unit-sphere areas, convex obstacles and quadrature
//! grids on the circle and the 2-sphere.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest supported space dimension.
pub const MAX_DIM: usize = 64;

const PROJECTION_TOL: f64 = 1e-12;
const PROJECTION_MAX_ITER: usize = 10_000;

/// Space dimension `n`, validated to lie in `2..=MAX_DIM`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "usize", into = "usize")]
pub struct Dim(usize);

impl Dim {
    pub fn new(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::domain(format!("dimension must be at least 2, got {n}")));
        }
        if n > MAX_DIM {
            return Err(Error::UnsupportedDimension(n));
        }
        Ok(Dim(n))
    }

    #[inline]
    pub fn get(self) -> usize {
        self.0
    }
}

impl TryFrom<usize> for Dim {
    type Error = Error;
    fn try_from(n: usize) -> Result<Self> {
        Dim::new(n)
    }
}

impl From<Dim> for usize {
    fn from(d: Dim) -> usize {
        d.0
    }
}

impl std::fmt::Display for Dim {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.0.fmt(f)
    }
}

/// Area of the unit sphere in `R^n`, `2 pi^{n/2} / Gamma(n/2)`, by the
/// recursion `omega_{k+2} = 2 pi omega_k / k`, which keeps the low
/// dimensions exact to the last bit.
pub fn unit_sphere_area(n: Dim) -> f64 {
    sphere_area(n.get())
}

/// Same as [`unit_sphere_area`] but also accepts `k = 1` (the two points of
/// the 0-sphere), which appears as the slice area in two-dimensional formulas.
pub(crate) fn sphere_area(k: usize) -> f64 {
    debug_assert!(k >= 1);
    let (mut a, mut j) = if k % 2 == 1 { (2.0, 1) } else { (2.0 * PI, 2) };
    while j < k {
        a *= 2.0 * PI / j as f64;
        j += 2;
    }
    a
}

// --------------------------------------------------------------------------
// Convex obstacles
// --------------------------------------------------------------------------

/// The closed half-space `{y : (y, normal) <= offset}`; `normal` points out of
/// the body.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HalfSpace {
    pub normal: Vec<f64>,
    pub offset: f64,
}

impl HalfSpace {
    /// Builds a half-space, rescaling so that the normal has unit length.
    pub fn new(normal: Vec<f64>, offset: f64) -> Result<Self> {
        let len = norm(&normal);
        if !(len.is_finite() && len > 0.0) || !offset.is_finite() {
            return Err(Error::domain("half-space normal must be a finite nonzero vector"));
        }
        Ok(HalfSpace {
            normal: normal.iter().map(|v| v / len).collect(),
            offset: offset / len,
        })
    }

    #[inline]
    fn excess(&self, x: &[f64]) -> f64 {
        dot(&self.normal, x) - self.offset
    }

    fn project_into(&self, y: &mut [f64]) {
        let e = self.excess(y);
        if e > 0.0 {
            for (yi, ni) in y.iter_mut().zip(&self.normal) {
                *yi -= e * ni;
            }
        }
    }
}

/// A closed convex obstacle `G`; the domain of interest is its complement.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum ConvexBody {
    #[serde(rename = "halfspace")]
    HalfSpace(HalfSpace),
    Ball { center: Vec<f64>, radius: f64 },
    Polytope { faces: Vec<HalfSpace> },
}

/// Nearest-point data for a point outside a convex body.
#[derive(Debug, Clone, PartialEq)]
pub struct Projection {
    /// Distance `d_x` from the point to the body.
    pub distance: f64,
    /// The unique nearest boundary point.
    pub foot: Vec<f64>,
    /// Unit vector from `foot` towards the point; the open half-space
    /// `{y : (y - foot, normal) > 0}` lies in the exterior domain.
    pub normal: Vec<f64>,
}

impl ConvexBody {
    pub fn ball(center: Vec<f64>, radius: f64) -> Result<Self> {
        ConvexBody::Ball { center, radius }.validated()
    }

    pub fn halfspace(normal: Vec<f64>, offset: f64) -> Result<Self> {
        ConvexBody::HalfSpace(HalfSpace::new(normal, offset)?).validated()
    }

    pub fn polytope(faces: Vec<HalfSpace>) -> Result<Self> {
        ConvexBody::Polytope { faces }.validated()
    }

    /// Parses the JSON description used by the command line (`--body-file`).
    pub fn from_json(text: &str) -> Result<Self> {
        let raw: ConvexBody =
            serde_json::from_str(text).map_err(|e| Error::Parse(format!("body: {e}")))?;
        raw.validated()
    }

    /// Checks dimensions and normalizes half-space normals.
    pub fn validated(self) -> Result<Self> {
        let body = match self {
            ConvexBody::HalfSpace(h) => ConvexBody::HalfSpace(HalfSpace::new(h.normal, h.offset)?),
            ConvexBody::Ball { center, radius } => {
                if !(radius.is_finite() && radius > 0.0) {
                    return Err(Error::domain(format!("ball radius must be positive, got {radius}")));
                }
                if center.iter().any(|c| !c.is_finite()) {
                    return Err(Error::domain("ball center must be finite"));
                }
                ConvexBody::Ball { center, radius }
            }
            ConvexBody::Polytope { faces } => {
                if faces.is_empty() {
                    return Err(Error::domain("polytope needs at least one face"));
                }
                let faces = faces
                    .into_iter()
                    .map(|h| HalfSpace::new(h.normal, h.offset))
                    .collect::<Result<Vec<_>>>()?;
                ConvexBody::Polytope { faces }
            }
        };
        let n = body.dim();
        Dim::new(n)?;
        if let ConvexBody::Polytope { faces } = &body {
            if faces.iter().any(|f| f.normal.len() != n) {
                return Err(Error::domain("polytope faces have mismatched dimensions"));
            }
        }
        Ok(body)
    }

    /// Ambient dimension.
    pub fn dim(&self) -> usize {
        match self {
            ConvexBody::HalfSpace(h) => h.normal.len(),
            ConvexBody::Ball { center, .. } => center.len(),
            ConvexBody::Polytope { faces } => faces[0].normal.len(),
        }
    }

    /// Signed-ish membership test: true when `x` lies in the closed body.
    pub fn contains(&self, x: &[f64]) -> bool {
        match self {
            ConvexBody::HalfSpace(h) => h.excess(x) <= 0.0,
            ConvexBody::Ball { center, radius } => dist(x, center) <= *radius,
            ConvexBody::Polytope { faces } => faces.iter().all(|f| f.excess(x) <= 0.0),
        }
    }

    /// Distance from an interior point `c` of the body to its boundary.
    pub fn inner_distance(&self, c: &[f64]) -> Result<f64> {
        self.check_len(c)?;
        let d = match self {
            ConvexBody::HalfSpace(h) => -h.excess(c),
            ConvexBody::Ball { center, radius } => radius - dist(c, center),
            ConvexBody::Polytope { faces } => faces
                .iter()
                .map(|f| -f.excess(c))
                .fold(f64::INFINITY, f64::min),
        };
        if d > 0.0 {
            Ok(d)
        } else {
            Err(Error::domain("point is not in the interior of the body"))
        }
    }

    fn check_len(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.dim() {
            return Err(Error::domain(format!(
                "point has {} coordinates, body lives in R^{}",
                x.len(),
                self.dim()
            )));
        }
        Ok(())
    }

    /// Nearest boundary point, distance and outward unit normal for a point
    /// strictly outside the body.
    pub fn project(&self, x: &[f64]) -> Result<Projection> {
        self.check_len(x)?;
        if x.iter().any(|v| !v.is_finite()) {
            return Err(Error::domain("point must be finite"));
        }
        if self.contains(x) {
            return Err(Error::domain("point lies inside or on the body"));
        }
        let foot = match self {
            ConvexBody::HalfSpace(h) => {
                let mut y = x.to_vec();
                h.project_into(&mut y);
                y
            }
            ConvexBody::Ball { center, radius } => {
                let d = dist(x, center);
                center
                    .iter()
                    .zip(x)
                    .map(|(c, xi)| c + radius * (xi - c) / d)
                    .collect()
            }
            ConvexBody::Polytope { faces } => dykstra(faces, x)?,
        };
        let distance = dist(x, &foot);
        if !(distance > 0.0) {
            return Err(Error::domain("point lies on the boundary of the body"));
        }
        let normal = x.iter().zip(&foot).map(|(a, b)| (a - b) / distance).collect();
        Ok(Projection {
            distance,
            foot,
            normal,
        })
    }
}

/// `distance_to_convex` from the operation list: `(d_x, foot, normal)`.
pub fn distance_to_convex(body: &ConvexBody, x: &[f64]) -> Result<Projection> {
    body.project(x)
}

/// Dykstra's alternating projection onto an intersection of half-spaces.
fn dykstra(faces: &[HalfSpace], x: &[f64]) -> Result<Vec<f64>> {
    let n = x.len();
    let scale = 1.0 + norm(x);
    let mut y = x.to_vec();
    let mut increments = vec![vec![0.0; n]; faces.len()];
    let mut z = vec![0.0; n];
    let mut last_change = f64::INFINITY;
    for _ in 0..PROJECTION_MAX_ITER {
        let prev = y.clone();
        for (face, p) in faces.iter().zip(increments.iter_mut()) {
            for i in 0..n {
                z[i] = y[i] + p[i];
            }
            y.copy_from_slice(&z);
            face.project_into(&mut y);
            for i in 0..n {
                p[i] = z[i] - y[i];
            }
        }
        last_change = dist(&prev, &y);
        let violation = faces.iter().map(|f| f.excess(&y)).fold(0.0, f64::max);
        if last_change <= PROJECTION_TOL * scale && violation <= 1e-10 * scale {
            return Ok(y);
        }
    }
    Err(Error::Convergence {
        context: "polytope projection (empty intersection or slow convergence)".into(),
        value: dist(x, &y),
        err_est: last_change,
    })
}

// --------------------------------------------------------------------------
// Sphere grids
// --------------------------------------------------------------------------

/// Quadrature rule on the unit circle (`dim = 2`) or unit 2-sphere (`dim = 3`).
#[derive(Debug, Clone)]
pub struct SphereGrid {
    dim: usize,
    level: u32,
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl SphereGrid {
    /// Equispaced trapezoid rule with `2^(level+4)` nodes on the circle, or
    /// a Gauss-Legendre (in `cos` of the polar angle) times trapezoid
    /// (azimuth) product rule with `(2^(level+3))^2` nodes on the 2-sphere.
    pub fn new(dim: usize, level: u32) -> Result<Self> {
        if level > 12 {
            return Err(Error::domain(format!("grid level {level} is too fine")));
        }
        match dim {
            2 => {
                let count = 1usize << (level + 4);
                let h = 2.0 * PI / count as f64;
                let mut nodes = Vec::with_capacity(2 * count);
                for j in 0..count {
                    let t = h * j as f64;
                    nodes.push(t.cos());
                    nodes.push(t.sin());
                }
                Ok(SphereGrid {
                    dim,
                    level,
                    nodes,
                    weights: vec![h; count],
                })
            }
            3 => {
                let m = 1usize << (level + 3);
                let (t, w) = gauss_legendre(m);
                let h = 2.0 * PI / m as f64;
                let mut nodes = Vec::with_capacity(3 * m * m);
                let mut weights = Vec::with_capacity(m * m);
                for (ti, wi) in t.iter().zip(&w) {
                    let s = (1.0 - ti * ti).max(0.0).sqrt();
                    for j in 0..m {
                        let phi = h * j as f64;
                        nodes.push(s * phi.cos());
                        nodes.push(s * phi.sin());
                        nodes.push(*ti);
                        weights.push(wi * h);
                    }
                }
                Ok(SphereGrid {
                    dim,
                    level,
                    nodes,
                    weights,
                })
            }
            other => Err(Error::UnsupportedDimension(other)),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    #[inline]
    pub fn node(&self, i: usize) -> &[f64] {
        &self.nodes[i * self.dim..(i + 1) * self.dim]
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Iterator over `(node, weight)` pairs.
    pub fn iter(&self) -> impl Iterator<Item = (&[f64], f64)> + '_ {
        self.nodes
            .chunks_exact(self.dim)
            .zip(self.weights.iter().copied())
    }

    /// Applies the rule to `f`.
    pub fn integrate(&self, f: impl Fn(&[f64]) -> f64) -> f64 {
        self.iter().map(|(y, w)| w * f(y)).sum()
    }
}

/// `sphere_grid` from the operation list.
pub fn sphere_grid(dim: usize, level: u32) -> Result<SphereGrid> {
    SphereGrid::new(dim, level)
}

/// Gauss-Legendre nodes and weights on `[-1, 1]`, nodes in increasing order.
pub fn gauss_legendre(m: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; m];
    let mut w = vec![0.0; m];
    let mf = m as f64;
    for i in 0..m.div_ceil(2) {
        let mut z = (PI * (i as f64 + 0.75) / (mf + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(m, z);
            dp = d;
            let dz = p / d;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(m, z);
        dp = if d.is_finite() { d } else { dp };
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        x[i] = -z;
        x[m - 1 - i] = z;
        w[i] = wi;
        w[m - 1 - i] = wi;
    }
    (x, w)
}

fn legendre_with_derivative(m: usize, z: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = z;
    if m == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=m {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * z * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = m as f64 * (z * p1 - p0) / (z * z - 1.0);
    (p1, d)
}

// --------------------------------------------------------------------------
// small vector helpers
// --------------------------------------------------------------------------

#[inline]
pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[inline]
pub(crate) fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

#[inline]
pub(crate) fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn area_by_gamma(n: usize) -> f64 {
        let h = n as f64 / 2.0;
        2.0 * (h * PI.ln() - statrs::function::gamma::ln_gamma(h)).exp()
    }

    #[test]
    fn sphere_areas() {
        let d = |n| unit_sphere_area(Dim::new(n).unwrap());
        assert!((d(2) - 2.0 * PI).abs() < 1e-14);
        assert!((d(3) - 4.0 * PI).abs() < 1e-13);
        assert!((d(4) - 2.0 * PI * PI).abs() < 1e-13);
        for n in 1..=MAX_DIM {
            let exact = area_by_gamma(n);
            assert!(
                ((sphere_area(n) - exact) / exact).abs() < 1e-12,
                "n = {n}: {} vs {exact}",
                sphere_area(n)
            );
        }
    }

    #[test]
    fn dim_bounds() {
        assert!(matches!(Dim::new(1), Err(Error::Domain(_))));
        assert!(matches!(Dim::new(65), Err(Error::UnsupportedDimension(65))));
        assert_eq!(Dim::new(64).unwrap().get(), 64);
    }

    #[test]
    fn halfspace_projection() {
        let body = ConvexBody::halfspace(vec![0.0, 0.0, 1.0], 0.0).unwrap();
        let p = body.project(&[0.0, 0.0, 2.0]).unwrap();
        assert!((p.distance - 2.0).abs() < 1e-15);
        assert!(norm(&p.foot) < 1e-15);
        assert_eq!(p.normal, vec![0.0, 0.0, 1.0]);
        assert!(body.project(&[1.0, 0.0, -0.5]).is_err());
        assert!(body.project(&[1.0, 0.0, 0.0]).is_err());
    }

    #[test]
    fn ball_projection() {
        for n in 2..=5 {
            let body = ConvexBody::ball(vec![0.0; n], 1.0).unwrap();
            let mut x = vec![0.0; n];
            x[0] = 3.0;
            let p = body.project(&x).unwrap();
            assert!((p.distance - 2.0).abs() < 1e-15);
            assert!((p.foot[0] - 1.0).abs() < 1e-15);
            assert!((p.normal[0] - 1.0).abs() < 1e-15);
        }
        let body = ConvexBody::ball(vec![0.0; 3], 1.0).unwrap();
        assert!(matches!(body.project(&[0.5, 0.0, 0.0]), Err(Error::Domain(_))));
    }

    fn corner() -> ConvexBody {
        ConvexBody::polytope(vec![
            HalfSpace::new(vec![1.0, 0.0], 0.0).unwrap(),
            HalfSpace::new(vec![0.0, 1.0], 0.0).unwrap(),
        ])
        .unwrap()
    }

    /// Dense sampling of the two boundary rays of the quadrant corner.
    fn sampled_corner_distance(x: &[f64]) -> f64 {
        let mut best = f64::INFINITY;
        for k in 0..=200_000 {
            let t = -10.0 * k as f64 / 200_000.0;
            best = best.min(dist(x, &[t, 0.0])).min(dist(x, &[0.0, t]));
        }
        best
    }

    #[test]
    fn polytope_corner() {
        let body = corner();
        let x = [1.0, 1.0];
        let p = body.project(&x).unwrap();
        assert!((p.distance - 2f64.sqrt()).abs() < 1e-12);
        assert!(norm(&p.foot) < 1e-12);
        assert!((p.distance - sampled_corner_distance(&x)).abs() < 1e-9);
        // off-diagonal: nearest point on a face, not the vertex
        let x = [0.7, -2.0];
        let p = body.project(&x).unwrap();
        assert!((p.distance - 0.7).abs() < 1e-12);
        assert!((p.distance - sampled_corner_distance(&x)).abs() < 1e-9);
    }

    #[test]
    fn polytope_oblique_faces() {
        // wedge with a 60 degree opening; x beyond the apex
        let a = (PI / 6.0).sin_cos();
        let body = ConvexBody::polytope(vec![
            HalfSpace::new(vec![a.1, a.0], 0.0).unwrap(),
            HalfSpace::new(vec![-a.1, a.0], 0.0).unwrap(),
        ])
        .unwrap();
        let x = [0.0, 2.0];
        let p = body.project(&x).unwrap();
        assert!((p.distance - 2.0).abs() < 1e-10, "{}", p.distance);
    }

    #[test]
    fn empty_polytope_fails() {
        let body = ConvexBody::polytope(vec![
            HalfSpace::new(vec![1.0, 0.0], -1.0).unwrap(),
            HalfSpace::new(vec![-1.0, 0.0], -1.0).unwrap(),
        ])
        .unwrap();
        let err = body.project(&[0.0, 0.0]).unwrap_err();
        assert!(err.is_numeric(), "{err}");
    }

    fn boundary_samples(body: &ConvexBody, rng: &mut ChaCha8Rng, count: usize) -> Vec<Vec<f64>> {
        let n = body.dim();
        let mut out = Vec::new();
        while out.len() < count {
            let g: Vec<f64> = (0..n).map(|_| rng.gen_range(-3.0..3.0)).collect();
            match body {
                ConvexBody::Ball { center, radius } => {
                    let l = norm(&g);
                    out.push(center.iter().zip(&g).map(|(c, v)| c + radius * v / l).collect());
                }
                ConvexBody::HalfSpace(h) => {
                    let mut y = g.clone();
                    let e = h.excess(&y);
                    for (yi, ni) in y.iter_mut().zip(&h.normal) {
                        *yi -= e * ni;
                    }
                    out.push(y);
                }
                ConvexBody::Polytope { faces } => {
                    for f in faces {
                        let mut y = g.clone();
                        let e = f.excess(&y);
                        for (yi, ni) in y.iter_mut().zip(&f.normal) {
                            *yi -= e * ni;
                        }
                        if faces.iter().all(|o| o.excess(&y) <= 1e-12) {
                            out.push(y);
                        }
                    }
                }
            }
        }
        out
    }

    #[test]
    fn nearest_point_inequality_and_idempotence() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let bodies = vec![
            ConvexBody::ball(vec![0.5, -0.2, 0.1], 1.3).unwrap(),
            ConvexBody::halfspace(vec![1.0, 2.0, -0.5], 0.4).unwrap(),
            ConvexBody::polytope(vec![
                HalfSpace::new(vec![1.0, 0.0, 0.0], 1.0).unwrap(),
                HalfSpace::new(vec![-1.0, 0.0, 0.0], 1.0).unwrap(),
                HalfSpace::new(vec![0.0, 1.0, 0.0], 1.0).unwrap(),
                HalfSpace::new(vec![0.0, -1.0, 0.0], 1.0).unwrap(),
                HalfSpace::new(vec![0.0, 0.0, 1.0], 1.0).unwrap(),
                HalfSpace::new(vec![0.0, 0.0, -1.0], 1.0).unwrap(),
            ])
            .unwrap(),
        ];
        for body in &bodies {
            for _ in 0..20 {
                let x: Vec<f64> = loop {
                    let x: Vec<f64> = (0..3).map(|_| rng.gen_range(-4.0..4.0)).collect();
                    if !body.contains(&x) {
                        break x;
                    }
                };
                let p = body.project(&x).unwrap();
                // the foot is on the boundary: projecting a point just outside it returns it
                let nudged: Vec<f64> =
                    p.foot.iter().zip(&p.normal).map(|(f, v)| f + 1e-9 * v).collect();
                let again = body.project(&nudged).unwrap();
                assert!(dist(&again.foot, &p.foot) < 1e-12);
                for y in boundary_samples(body, &mut rng, 100) {
                    assert!(p.distance <= dist(&x, &y) + 1e-12);
                }
            }
        }
    }

    #[test]
    fn body_json() {
        let b = ConvexBody::from_json(r#"{"type":"ball","center":[0,0,0],"radius":1}"#).unwrap();
        assert_eq!(b, ConvexBody::ball(vec![0.0; 3], 1.0).unwrap());
        let h = ConvexBody::from_json(r#"{"type":"halfspace","normal":[0,0,2],"offset":2}"#).unwrap();
        assert_eq!(h, ConvexBody::halfspace(vec![0.0, 0.0, 1.0], 1.0).unwrap());
        let p = ConvexBody::from_json(
            r#"{"type":"polytope","faces":[{"normal":[1,0],"offset":0},{"normal":[0,1],"offset":0}]}"#,
        )
        .unwrap();
        assert_eq!(p, corner());
        assert!(ConvexBody::from_json(r#"{"type":"polytope","faces":[]}"#).is_err());
        assert!(ConvexBody::from_json(r#"{"type":"ball","center":[0,0],"radius":-1}"#).is_err());
    }

    #[test]
    fn circle_grid() {
        let g = SphereGrid::new(2, 0).unwrap();
        assert_eq!(g.len(), 16);
        assert!((g.weights().iter().sum::<f64>() - 2.0 * PI).abs() < 1e-12);
    }

    #[test]
    fn sphere_grid_moments() {
        for level in 0..4 {
            let g = SphereGrid::new(3, level).unwrap();
            let total: f64 = g.weights().iter().sum();
            assert!((total / (4.0 * PI) - 1.0).abs() < 1e-12);
            for (y, _) in g.iter() {
                assert!((norm(y) - 1.0).abs() < 1e-14);
            }
            assert!(g.integrate(|y| y[2]).abs() < 1e-12);
        }
        let g = SphereGrid::new(3, 2).unwrap();
        let e = [1.0 / 3.0, 2.0 / 3.0, 2.0 / 3.0];
        let v = g.integrate(|y| dot(y, &e).powi(2));
        assert!((v - 4.0 * PI / 3.0).abs() < 1e-10);
        assert!(matches!(SphereGrid::new(4, 0), Err(Error::UnsupportedDimension(4))));
    }

    #[test]
    fn grid_convergence_order() {
        // smooth but not polynomial integrands; stop once differences hit round-off
        let circle = |lvl| SphereGrid::new(2, lvl).unwrap().integrate(|y| 1.0 / (1.3 - y[0]));
        let sphere = |lvl| SphereGrid::new(3, lvl).unwrap().integrate(|y| 1.0 / (1.2 - y[0]).powi(2));
        for f in [&circle as &dyn Fn(u32) -> f64, &sphere] {
            let v: Vec<f64> = (0..5).map(f).collect();
            for l in 1..4 {
                let d0 = (v[l] - v[l - 1]).abs();
                let d1 = (v[l + 1] - v[l]).abs();
                if d0 < 1e-12 {
                    break;
                }
                assert!(d1 * 4.0 <= d0, "level {l}: {d0:e} -> {d1:e}");
            }
        }
    }

    #[test]
    fn gauss_legendre_exactness() {
        let (x, w) = gauss_legendre(12);
        for k in 0..24 {
            let q: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(k)).sum();
            let exact = if k % 2 == 1 { 0.0 } else { 2.0 / (k as f64 + 1.0) };
            assert!((q - exact).abs() < 1e-14, "k = {k}");
        }
    }
}
