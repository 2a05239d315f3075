//! Seeded band-limited boundary data with unit sup-norm, for never-exceed
//! checks.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::BoundaryField;
use crate::geometry::norm;

/// Largest polynomial degree (sphere) or frequency (circle, hyperplane).
pub const RANDOM_DEGREE: usize = 8;

const SAMPLES: usize = 4096;

/// Radius of the window carrying half-space data.
const WINDOW: f64 = 4.0;

/// `exp(1 - 1/(1 - t^2))` for `|t| < 1`, zero otherwise: a smooth bump with
/// value 1 at the origin.
pub fn smooth_bump(t: f64) -> f64 {
    let u = 1.0 - t * t;
    if u <= 0.0 {
        0.0
    } else {
        (1.0 - 1.0 / u).exp()
    }
}

fn exponents(dim: usize, degree: usize) -> Vec<[u8; 3]> {
    let mut out = Vec::new();
    for a in 0..=degree {
        for b in 0..=degree - a {
            if dim == 2 {
                out.push([a as u8, b as u8, 0]);
            } else {
                for c in 0..=degree - a - b {
                    out.push([a as u8, b as u8, c as u8]);
                }
            }
        }
    }
    out
}

/// Points on the unit sphere (`n = 3`, Fibonacci lattice) or circle used to
/// normalize the sup-norm.
fn sphere_samples(n: usize) -> Vec<Vec<f64>> {
    (0..SAMPLES)
        .map(|i| {
            if n == 2 {
                let th = 2.0 * PI * i as f64 / SAMPLES as f64;
                vec![th.cos(), th.sin()]
            } else {
                let z = 1.0 - (2.0 * i as f64 + 1.0) / SAMPLES as f64;
                let rho = (1.0 - z * z).sqrt();
                let phi = PI * (3.0 - 5f64.sqrt()) * i as f64;
                vec![rho * phi.cos(), rho * phi.sin(), z]
            }
        })
        .collect()
}

fn normalized(name: String, arity: usize, point_dim: usize, samples: &[Vec<f64>], raw: impl Fn(&[f64], &mut [f64]) + Send + Sync + 'static) -> BoundaryField {
    let mut out = vec![0.0; arity];
    let mut sup = 0.0f64;
    for y in samples {
        raw(y, &mut out);
        sup = sup.max(norm(&out));
    }
    let scale = if sup > 0.0 { 1.0 / sup } else { 1.0 };
    BoundaryField::new(name, arity, point_dim, 1.0, move |y, out| {
        raw(y, out);
        out.iter_mut().for_each(|v| *v *= scale);
    })
}

/// Random `m`-component data on the unit sphere (`n = 3`) or circle
/// (`n = 2`): polynomials of degree [`RANDOM_DEGREE`] in the coordinates
/// (harmonic polynomials of that degree restricted to the sphere), scaled so
/// that the largest norm over 4096 well-spread points is 1.
pub fn random_ball_field(seed: u64, n: usize, m: usize) -> BoundaryField {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let exps = exponents(n, RANDOM_DEGREE);
    let coeffs: Vec<Vec<f64>> = (0..m)
        .map(|_| exps.iter().map(|_| rng.gen_range(-1.0..1.0)).collect())
        .collect();
    let raw = move |y: &[f64], out: &mut [f64]| {
        // powers of each coordinate
        let mut pw = [[1.0f64; RANDOM_DEGREE + 1]; 3];
        for (i, yi) in y.iter().enumerate() {
            for k in 1..=RANDOM_DEGREE {
                pw[i][k] = pw[i][k - 1] * yi;
            }
        }
        for (k, c) in coeffs.iter().enumerate() {
            out[k] = exps
                .iter()
                .zip(c)
                .map(|(e, ck)| ck * pw[0][e[0] as usize] * pw[1][e[1] as usize] * pw[2][e[2] as usize])
                .sum();
        }
    };
    normalized(format!("random-{seed}"), m, n, &sphere_samples(n), raw)
}

/// Random `m`-component data on the boundary hyperplane of the
/// `n`-dimensional half-space: trigonometric polynomials with frequencies
/// up to [`RANDOM_DEGREE`] per unit window radius multiplied by a smooth
/// bump of radius 4 about the origin, so that the support is known and the
/// integrals carry no truncation error.
pub fn random_halfspace_field(seed: u64, n: usize, m: usize) -> BoundaryField {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let d = n - 1;
    let terms = 6;
    let waves: Vec<Vec<(Vec<f64>, f64, f64)>> = (0..m)
        .map(|_| {
            (0..terms)
                .map(|_| {
                    let k: Vec<f64> = (0..d)
                        .map(|_| rng.gen_range(0..=RANDOM_DEGREE) as f64 * PI / (2.0 * WINDOW) * rand_sign(&mut rng))
                        .collect();
                    (k, rng.gen_range(0.0..2.0 * PI), rng.gen_range(-1.0..1.0))
                })
                .collect()
        })
        .collect();
    let raw = move |y: &[f64], out: &mut [f64]| {
        let w = smooth_bump(norm(y) / WINDOW);
        for (k, comp) in waves.iter().enumerate() {
            out[k] = if w == 0.0 {
                0.0
            } else {
                w * comp
                    .iter()
                    .map(|(kv, ph, a)| a * (kv.iter().zip(y).map(|(p, q)| p * q).sum::<f64>() + ph).cos())
                    .sum::<f64>()
            };
        }
    };
    let samples: Vec<Vec<f64>> = if d == 1 {
        (0..SAMPLES)
            .map(|i| vec![WINDOW * (2.0 * (i as f64 + 0.5) / SAMPLES as f64 - 1.0)])
            .collect()
    } else {
        let side = 64;
        (0..side * side)
            .map(|i| {
                let u = |j: usize| WINDOW * (2.0 * (j as f64 + 0.5) / side as f64 - 1.0);
                vec![u(i / side), u(i % side)]
            })
            .collect()
    };
    normalized(format!("random-{seed}"), m, d, &samples, raw).with_support(vec![0.0; d], WINDOW)
}

fn rand_sign(rng: &mut ChaCha8Rng) -> f64 {
    if rng.gen_bool(0.5) {
        1.0
    } else {
        -1.0
    }
}
