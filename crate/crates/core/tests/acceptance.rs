//! Acceptance criteria, one line of output per criterion.
//!
//! Runs without the libtest harness so that the summary is always printed;
//! exits with status 1 when any criterion fails.

use std::f64::consts::PI;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sharpbounds::coefficients::{
    ball_divergence, ball_gradient, ball_gradient_oracle, disk_analytic_derivative, halfspace_gradient,
    lame_divergence_coefficient, stokes_pressure_coefficient, BallPoint, HalfSpacePoint, LameParams,
};
use sharpbounds::constants::{
    analytic_closed_form, analytic_constant, div_constant, grad_constant, grad_constant_quadrature, grad_to_osc_ratio,
    lame_constant, osc_constant,
};
use sharpbounds::fields::{
    lame_stokes_velocity, poisson_ball_gradient, poisson_ball_value, poisson_halfspace, random_ball_field,
    random_halfspace_field, BallEval, BoundaryField, HalfSpaceEval,
};
use sharpbounds::geometry::{gauss_legendre, Dim};
use sharpbounds::verify::{
    default_levels, limit_sweep, random_suite, random_suite_cases, sharpness, sharpness_cases, standard_exterior_suite,
    SweepCase,
};

type Outcome = Result<String, String>;

/// Collects failed sub-checks of one criterion.
#[derive(Default)]
struct Checks {
    failures: Vec<String>,
    count: usize,
}

impl Checks {
    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.count += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    fn close(&mut self, label: &str, got: f64, want: f64, tol: f64) {
        let err = (got - want).abs();
        self.check(err <= tol, || format!("{label}: {got:.12} vs {want:.12} (|diff| {err:.2e} > {tol:.0e})"));
    }

    fn finish(self, summary: String) -> Outcome {
        if self.failures.is_empty() {
            Ok(format!("{} checks; {summary}", self.count))
        } else {
            Err(format!("{} of {} checks failed: {}", self.failures.len(), self.count, self.failures.join("; ")))
        }
    }
}

fn d(n: usize) -> Dim {
    Dim::new(n).unwrap()
}

fn closed_form_constants() -> Outcome {
    let mut c = Checks::default();
    let s3 = 3f64.sqrt();
    let d3 = 1.0 + s3 / 6.0 * (2.0 + s3).ln();
    c.close("C_2", grad_constant(d(2)).value, 2.0 / PI, 1e-15);
    c.close("C_3", grad_constant(d(3)).value, 4.0 / (3.0 * s3), 1e-15);
    for n in [3, 4, 5] {
        let q = grad_constant_quadrature(d(n)).map_err(|e| e.to_string())?;
        c.close(&format!("C_{n} quadrature"), q.value, grad_constant(d(n)).value, 1e-7);
    }
    let dc = |n| div_constant(d(n)).unwrap().value;
    let ec = |n| lame_constant(d(n)).unwrap().value;
    c.close("D_2", dc(2), 1.0, 1e-7);
    c.close("D_3", dc(3), d3, 1e-7);
    c.close("E_2", ec(2), 2.0, 1e-7);
    c.close("E_3", ec(3), 2.0 * d3, 1e-7);
    let k = [
        (1, 2.0 / PI),
        (2, 3.0 * s3 / (2.0 * PI)),
        (3, 6.0 / PI),
        (4, 3.0 * (16.0 + 5.0 * 5f64.sqrt()) / (4.0 * PI)),
    ];
    for (s, want) in k {
        let q = analytic_constant(s).map_err(|e| e.to_string())?;
        c.close(&format!("K_{s}"), q.value, want, 1e-8);
        c.close(&format!("K_{s} closed form"), analytic_closed_form(s).unwrap(), want, 1e-14);
    }
    c.finish(format!("D_3 = {:.10}, K_4 = {:.10}", dc(3), analytic_constant(4).unwrap().value))
}

fn derivation_chain() -> Outcome {
    let mut c = Checks::default();
    let mut worst = 0.0f64;
    for r in [0.0, 0.3, 0.6, 0.9] {
        let a = ball_gradient(BallPoint::new(d(3), 1.0, r).unwrap()).map_err(|e| e.to_string())?;
        let b = ball_gradient_oracle(r).map_err(|e| e.to_string())?;
        worst = worst.max((a.value - b.value).abs());
        c.close(&format!("K_3({r})"), a.value, b.value, 1e-5);
    }
    c.finish(format!("max |diff| {worst:.2e}"))
}

/// `(s!/pi) max_alpha int |Re(e^{i alpha} w / (w - rho)^{s+1})| dtheta` on the
/// unit circle, split at the sign changes of the integrand and integrated
/// piecewise by Gauss-Legendre.
fn schwarz_oracle(s: u32, rho: f64) -> f64 {
    let (gx, gw) = gauss_legendre(20);
    let fact: f64 = (1..=s).map(f64::from).product();
    let value = |alpha: f64| {
        let g = |t: f64| {
            let w = Complex64::from_polar(1.0, t);
            (Complex64::from_polar(1.0, alpha) * w / (w - rho).powu(s + 1)).re
        };
        let panels = 2048;
        let h = 2.0 * PI / panels as f64;
        let mut breaks = vec![0.0];
        for i in 0..panels {
            let (mut a, mut b) = (i as f64 * h, (i + 1) as f64 * h);
            if g(a) * g(b) < 0.0 {
                for _ in 0..60 {
                    let m = 0.5 * (a + b);
                    if g(a) * g(m) <= 0.0 {
                        b = m;
                    } else {
                        a = m;
                    }
                }
                breaks.push(0.5 * (a + b));
            }
            breaks.push((i + 1) as f64 * h);
        }
        breaks.sort_by(f64::total_cmp);
        let mut sum = 0.0;
        for w in breaks.windows(2) {
            let (a, b) = (w[0], w[1]);
            let (c, r) = (0.5 * (a + b), 0.5 * (b - a));
            sum += gx.iter().zip(&gw).map(|(x, wt)| wt * g(c + r * x).abs()).sum::<f64>() * r;
        }
        fact / PI * sum
    };
    // coarse scan of the phase, then golden section around the best node
    let m = 90;
    let step = PI / m as f64;
    let best = (0..=m).map(|i| i as f64 * step).max_by(|a, b| value(*a).total_cmp(&value(*b))).unwrap();
    let (mut lo, mut hi) = (best - step, best + step);
    let g = 0.5 * (5f64.sqrt() - 1.0);
    for _ in 0..60 {
        let a = hi - g * (hi - lo);
        let b = lo + g * (hi - lo);
        if value(a) < value(b) {
            lo = a;
        } else {
            hi = b;
        }
    }
    value(0.5 * (lo + hi)).max(value(best))
}

fn closed_form_coefficients() -> Outcome {
    let mut c = Checks::default();
    let s3 = 3f64.sqrt();
    for r in [0.1, 0.5, 0.9] {
        let t2 = ball_divergence(BallPoint::new(d(2), 1.0, r).unwrap()).map_err(|e| e.to_string())?;
        c.close(&format!("T_2({r})"), t2.value, 2.0 / (1.0 - r * r), 1e-7);
        let t3 = ball_divergence(BallPoint::new(d(3), 1.0, r).unwrap()).map_err(|e| e.to_string())?;
        let want = (2.0 + (3.0 - r * r) / (2.0 * s3 * r) * ((s3 + r) / (s3 - r)).ln()) / (1.0 - r * r);
        c.close(&format!("T_3({r})"), t3.value, want, 1e-7);
    }
    let mut worst = 0.0f64;
    for rho in [0.0, 0.5, 0.9] {
        let oracle = schwarz_oracle(1, rho);
        let closed = 4.0 / (PI * (1.0 - rho * rho));
        let h1 = disk_analytic_derivative(1, 1.0, rho).map_err(|e| e.to_string())?;
        worst = worst.max((oracle - closed).abs());
        c.close(&format!("H_1({rho}) closed vs oracle"), closed, oracle, 1e-8);
        c.close(&format!("H_1({rho}) computed vs oracle"), h1.value, oracle, 1e-8);
    }
    c.finish(format!("H_1 closed form vs oracle max |diff| {worst:.2e}"))
}

fn boundary_limits() -> Outcome {
    let mut c = Checks::default();
    let mut worst = 0.0f64;
    let cases = [
        SweepCase::BallGradient { n: 3 },
        SweepCase::BallGradient { n: 4 },
        SweepCase::BallDivergence { n: 2 },
        SweepCase::BallDivergence { n: 3 },
        SweepCase::DiskAnalytic { s: 1 },
        SweepCase::DiskAnalytic { s: 2 },
        SweepCase::DiskAnalytic { s: 3 },
    ];
    for case in cases {
        let s = limit_sweep(case, 1.0, 4, 12).map_err(|e| e.to_string())?;
        worst = worst.max(s.abs_gap);
        c.close(&format!("{case:?}"), s.limit, s.target, 1e-4);
    }
    c.finish(format!("max gap {worst:.2e}"))
}

fn sharpness_attainment() -> Outcome {
    let mut c = Checks::default();
    let mut lows = Vec::new();
    for p in sharpness_cases() {
        let levels = default_levels(p.case);
        let s = sharpness(&p, &levels).map_err(|e| format!("{}: {e}", p.case))?;
        let last = *s.ratios.last().unwrap();
        lows.push(last);
        c.check(s.ok(), || {
            format!(
                "{} (n = {}, s = {}): ratios {:?}, monotone {}, attained {}",
                p.case, p.n, p.s, s.ratios, s.monotone, s.attained
            )
        });
    }
    let min = lows.iter().copied().fold(f64::INFINITY, f64::min);
    c.finish(format!("smallest final ratio {min:.6}"))
}

fn never_exceed() -> Outcome {
    let reports = random_suite(&random_suite_cases(), 0..100);
    let mut c = Checks::default();
    let mut worst = 0.0f64;
    for r in &reports {
        if r.ratio.is_finite() {
            worst = worst.max(r.ratio);
        }
        c.check(r.pass, || {
            format!("{} seed {:?}: ratio {} {}", r.case, r.seed, r.ratio, r.error.as_deref().unwrap_or(""))
        });
    }
    c.finish(format!("largest ratio {worst:.6}"))
}

fn exterior_bounds() -> Outcome {
    let reports = standard_exterior_suite(200, 2024).map_err(|e| e.to_string())?;
    let mut c = Checks::default();
    for r in &reports {
        c.check(r.pass, || format!("{} at |x| = {:?}: ratio {}", r.case, r.r, r.ratio));
    }
    let worst = reports.iter().map(|r| r.ratio).fold(0.0, f64::max);
    c.finish(format!("{} exterior check points, largest ratio {worst:.6}", reports.len()))
}

fn consistency_identities() -> Outcome {
    let mut c = Checks::default();
    for n in 2..=10 {
        let dn = div_constant(d(n)).map_err(|e| e.to_string())?.value;
        let en = lame_constant(d(n)).map_err(|e| e.to_string())?.value;
        c.check(en == 2.0 * dn, || format!("E_{n} = {en} is not 2 D_{n} = {}", 2.0 * dn));
    }
    for n in 2..=16 {
        let q = grad_constant(d(n)).value / (2.0 * osc_constant(d(n)).value);
        c.check(q < 1.0, || format!("C_{n}/(2A_{n}) = {q}"));
        c.close(&format!("C_{n}/(2A_{n}) formula"), grad_to_osc_ratio(d(n)), q, 1e-13);
    }
    for n in [2, 3, 5] {
        let p = HalfSpacePoint::new(d(n), 0.7).unwrap();
        let one = halfspace_gradient(p, 1).unwrap().value;
        for m in 2..=6 {
            let v = halfspace_gradient(p, m).unwrap().value;
            c.check(v == one, || format!("half-space gradient coefficient depends on m: {v} vs {one}"));
        }
    }
    let rel = |a: f64, b: f64| (a - b).abs() / b.abs();
    let mut worst = 0.0f64;
    for radius in [0.25, 3.0, 40.0] {
        for r in [0.0, 0.4, 0.85] {
            for n in [2, 3, 4] {
                let unit = BallPoint::new(d(n), 1.0, r).unwrap();
                let big = BallPoint::new(d(n), radius, r * radius).unwrap();
                let g = rel(radius * ball_gradient(big).unwrap().value, ball_gradient(unit).unwrap().value);
                let t = rel(radius * ball_divergence(big).unwrap().value, ball_divergence(unit).unwrap().value);
                worst = worst.max(g).max(t);
                c.check(g <= 1e-12 && t <= 1e-12, || format!("dilation n = {n}, R = {radius}, r = {r}: {g:.1e}, {t:.1e}"));
            }
            for s in [1, 2] {
                let a = radius.powi(s as i32) * disk_analytic_derivative(s, radius, r * radius).unwrap().value;
                let b = disk_analytic_derivative(s, 1.0, r).unwrap().value;
                worst = worst.max(rel(a, b));
                c.check(rel(a, b) <= 1e-12, || format!("disk dilation s = {s}, R = {radius}: {:.1e}", rel(a, b)));
            }
        }
    }
    // pressure = -div u / (1 - 2 sigma) in the incompressible limit; the
    // quotient is E_n/((3 - 4 sigma) x_n), extrapolated (linearly in
    // 1/2 - sigma) from two dyadic Poisson ratios so that every quantity is
    // exact in floating point
    for n in [2, 3, 4] {
        let p = HalfSpacePoint::new(d(n), 1.3).unwrap();
        let q = |h: f64| {
            let sigma = 0.5 - h;
            lame_divergence_coefficient(p, LameParams::lame(sigma).unwrap()).unwrap().value / (1.0 - 2.0 * sigma)
        };
        let h = 2f64.powi(-24);
        let limit = 2.0 * q(h / 2.0) - q(h);
        let stokes = stokes_pressure_coefficient(p).unwrap().value;
        c.check(rel(limit, stokes) <= 1e-12, || format!("Stokes reduction n = {n}: {limit} vs {stokes}"));
    }
    c.finish(format!("worst dilation deviation {worst:.1e}"))
}

fn field_evaluators() -> Outcome {
    let mut c = Checks::default();
    let hs = HalfSpaceEval {
        abs_tol: 1e-12,
        rel_tol: 1e-12,
        truncation: None,
    };
    // normalization
    let mut worst_norm = 0.0f64;
    for n in [2, 3] {
        let one = BoundaryField::constant(vec![1.0], n);
        for x in [vec![0.0; n], vec![0.3; n], {
            let mut v = vec![0.0; n];
            v[0] = 0.95;
            v
        }] {
            let u = poisson_ball_value(&one, &x, &BallEval::unit(6)).map_err(|m| m.to_string())?.value[0];
            worst_norm = worst_norm.max((u - 1.0).abs());
            c.close(&format!("ball normalization n = {n}"), u, 1.0, 1e-8);
        }
        let one = BoundaryField::constant(vec![1.0], n - 1);
        for xn in [0.05, 1.0, 20.0] {
            let mut x = vec![0.4; n];
            x[n - 1] = xn;
            let u = poisson_halfspace(&one, &x, &HalfSpaceEval::default()).map_err(|m| m.to_string())?.value[0];
            worst_norm = worst_norm.max((u - 1.0).abs());
            c.close(&format!("half-space normalization n = {n}, xn = {xn}"), u, 1.0, 1e-8);
        }
    }
    // harmonicity and gradients against central differences
    let mut worst_lap = 0.0f64;
    let mut worst_fd = 0.0f64;
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let mut ball_points: Vec<(u64, Vec<f64>)> = Vec::new();
    for seed in 0..12u64 {
        let n = if seed < 10 { 3 } else { 2 };
        // uniform direction scaled to a radius in [0, 0.8]
        let v: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let len = v.iter().map(|a| a * a).sum::<f64>().sqrt();
        let r = rng.gen_range(0.0..0.8);
        ball_points.push((seed, v.iter().map(|a| a * r / len).collect()));
    }
    for (seed, x) in ball_points {
        let n = x.len();
        let g = random_ball_field(seed, n, 1);
        let ev = BallEval::unit(5);
        let u = |p: &[f64]| poisson_ball_value(&g, p, &ev).unwrap().value[0];
        let (lap, fd) = differences(&u, &x, 1e-3, 1e-5);
        let grad = poisson_ball_gradient(&g, &x, &ev).map_err(|m| m.to_string())?.gradient.unwrap();
        worst_lap = worst_lap.max(lap.abs());
        c.check(lap.abs() <= 1e-4, || format!("ball laplacian residual {lap:e} (seed {seed})"));
        for j in 0..n {
            worst_fd = worst_fd.max((fd[j] - grad[j]).abs());
            c.close(&format!("ball gradient seed {seed}, j = {j}"), grad[j], fd[j], 1e-6);
        }
    }
    for (seed, x) in [(2u64, vec![0.5, -1.0, 0.9]), (8, vec![1.5, 1.2])] {
        let n = x.len();
        let g = random_halfspace_field(seed, n, 1);
        let u = |p: &[f64]| poisson_halfspace(&g, p, &hs).unwrap().value[0];
        let (lap, fd) = differences(&u, &x, 2e-3, 1e-5);
        let grad = poisson_halfspace(&g, &x, &hs).map_err(|m| m.to_string())?.gradient.unwrap();
        worst_lap = worst_lap.max(lap.abs());
        c.check(lap.abs() <= 1e-4, || format!("half-space laplacian residual {lap:e} (seed {seed})"));
        for j in 0..n {
            worst_fd = worst_fd.max((fd[j] - grad[j]).abs());
            c.close(&format!("half-space gradient seed {seed}, j = {j}"), grad[j], fd[j], 1e-6);
        }
    }
    // Stokes velocity is solenoidal
    let mut worst_div = 0.0f64;
    for (seed, x) in [(1u64, vec![0.2, -0.4, 0.8]), (6, vec![0.3, 0.7])] {
        let n = x.len();
        let f = random_halfspace_field(seed, n, n);
        let h = 1e-4 * x[n - 1];
        let mut div = 0.0;
        let mut scale = 0.0f64;
        for j in 0..n {
            let mut a = x.clone();
            let mut b = x.clone();
            a[j] += h;
            b[j] -= h;
            let ua = lame_stokes_velocity(&f, &a, LameParams::stokes(), &hs).map_err(|m| m.to_string())?.value;
            let ub = lame_stokes_velocity(&f, &b, LameParams::stokes(), &hs).map_err(|m| m.to_string())?.value;
            div += (ua[j] - ub[j]) / (2.0 * h);
            for i in 0..n {
                scale = scale.max(((ua[i] - ub[i]) / (2.0 * h)).abs());
            }
        }
        let relative = div.abs() / scale.max(1.0);
        worst_div = worst_div.max(relative);
        c.check(relative <= 1e-5, || format!("Stokes divergence {div:e} against velocity gradient {scale:e}"));
    }
    c.finish(format!(
        "normalization {worst_norm:.1e}, laplacian {worst_lap:.1e}, gradient {worst_fd:.1e}, divergence {worst_div:.1e}"
    ))
}

/// Second-difference Laplacian (step `h2`) and central-difference gradient
/// (step `h1`) of `u` at `x`.
fn differences(u: &dyn Fn(&[f64]) -> f64, x: &[f64], h2: f64, h1: f64) -> (f64, Vec<f64>) {
    let n = x.len();
    let u0 = u(x);
    let mut lap = 0.0;
    let mut grad = vec![0.0; n];
    for j in 0..n {
        let shifted = |h: f64| {
            let mut p = x.to_vec();
            p[j] += h;
            u(&p)
        };
        lap += (shifted(h2) - 2.0 * u0 + shifted(-h2)) / (h2 * h2);
        grad[j] = (shifted(h1) - shifted(-h1)) / (2.0 * h1);
    }
    (lap, grad)
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("closed-form constants", closed_form_constants),
        ("derivation chain against sphere-integral oracle", derivation_chain),
        ("closed-form coefficients", closed_form_coefficients),
        ("boundary limits of scaled coefficients", boundary_limits),
        ("sharpness attainment", sharpness_attainment),
        ("never-exceed suite", never_exceed),
        ("exterior-domain bounds", exterior_bounds),
        ("consistency identities", consistency_identities),
        ("field evaluators", field_evaluators),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let id = i + 1;
        if !filter.is_empty() && !filter.iter().any(|p| name.contains(p.as_str()) || *p == id.to_string()) {
            continue;
        }
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS  [{id}] {name} ({secs:.1} s): {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL  [{id}] {name} ({secs:.1} s): {detail}");
            }
        }
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
