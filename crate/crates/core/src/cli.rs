//! Command-line front end.
//!
//! Exit codes: 0 when every check passes, 1 when a verification fails, 2 for
//! invalid flags or parameters, 3 when a numerical routine does not reach
//! its tolerance.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::coefficients::{exterior_bound, EstimateKind, LameParams};
use crate::constants::{analytic_constant, div_constant, grad_constant, lame_constant, osc_constant, SharpValue};
use crate::error::{Error, Result};
use crate::geometry::{ConvexBody, Dim};
use crate::verify::{
    check_inequality, default_levels, exterior_sample_points, exterior_suite, limit_sweep, run_suite, sharpness,
    write_report, write_reports, Case, CaseParams, ExteriorFamily, FieldSpec, ReportFormat, Suite, SweepCase,
    VerificationReport, SWEEP_TOL,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "sharpbounds", version, about = "Sharp constants and coefficients for harmonic, Lamé, Stokes and analytic-function estimates")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Table of the global constants C_n, D_n, E_n, A_n and K_s.
    Constants {
        #[arg(long, default_value_t = 8)]
        n_max: usize,
        #[arg(long, default_value_t = 6)]
        s_max: u32,
    },
    /// One point coefficient.
    Coeff {
        /// ball-gradient, ball-divergence, disk-analytic, halfspace-gradient,
        /// halfspace-divergence, lame-divergence, stokes-pressure, or
        /// exterior-{gradient,directional,divergence,lame-divergence,stokes-pressure,analytic}
        #[arg(long)]
        case: String,
        #[command(flatten)]
        p: PointArgs,
        /// Obstacle for exterior cases (JSON).
        #[arg(long)]
        body_file: Option<PathBuf>,
        /// Exterior point, comma separated.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        x: Option<Vec<f64>>,
    },
    /// Run verification suites, or a single check with --case and --field.
    Verify {
        /// reference, sharpness, random, exterior, sweep or all.
        #[arg(long, default_value = "all")]
        suite: String,
        /// First seed of the random suite and the seed of exterior samples.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Number of random fields per case.
        #[arg(long, default_value_t = 100)]
        count: u64,
        /// Single check: case id.
        #[arg(long)]
        case: Option<String>,
        /// Single check: constant, linear, extremal[:DELTA] or random[:SEED].
        #[arg(long)]
        field: Option<String>,
        #[command(flatten)]
        p: PointArgs,
        /// Exterior check of a family against --body-file.
        #[arg(long)]
        family: Option<String>,
        #[arg(long)]
        body_file: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
        /// csv or json-lines (default: from the file extension).
        #[arg(long)]
        format: Option<String>,
    },
    /// Scaled coefficients approaching the boundary and their limit.
    Sweep {
        /// ball-gradient, ball-divergence or disk-analytic.
        #[arg(long)]
        case: String,
        #[arg(long, default_value_t = 3)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        s: u32,
        #[arg(long = "R", default_value_t = 1.0)]
        radius: f64,
        #[arg(long, default_value_t = 4)]
        k_min: u32,
        #[arg(long, default_value_t = 12)]
        k_max: u32,
    },
    /// Attainment ratios of the extremal data along a refinement sequence.
    Sharpness {
        #[arg(long)]
        case: String,
        #[command(flatten)]
        p: PointArgs,
        /// Levels, comma separated (default depends on the case).
        #[arg(long, value_delimiter = ',')]
        levels: Option<Vec<u32>>,
    },
}

#[derive(Args, Debug, Clone)]
struct PointArgs {
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, default_value_t = 1)]
    m: usize,
    #[arg(long, default_value_t = 1)]
    s: u32,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    sigma: f64,
    /// Distance of the point from the center, 0 <= r < R.
    #[arg(long, default_value_t = 0.5)]
    r: f64,
    /// Height above the boundary hyperplane.
    #[arg(long, default_value_t = 1.0)]
    xn: f64,
    #[arg(long = "R", default_value_t = 1.0)]
    radius: f64,
    #[arg(long, default_value_t = 5)]
    grid_level: u32,
    /// Truncation radius of half-space integrals.
    #[arg(long)]
    truncation: Option<f64>,
}

impl PointArgs {
    fn params(&self, case: Case) -> Result<CaseParams> {
        let base = CaseParams::new(case);
        let n = self.n.unwrap_or(base.n);
        if !(self.radius > 0.0) || !(0.0..self.radius).contains(&self.r) {
            return Err(Error::domain(format!("need 0 <= r < R, got r = {}, R = {}", self.r, self.radius)));
        }
        if self.s == 0 {
            return Err(Error::domain("s must be at least 1"));
        }
        let p = CaseParams {
            n,
            m: self.m,
            s: self.s,
            sigma: self.sigma,
            r: self.r / self.radius,
            xn: self.xn,
            radius: self.radius,
            grid_level: self.grid_level,
            truncation: self.truncation,
            ..base
        };
        Dim::new(n)?;
        if case == Case::LameDivergence {
            LameParams::lame(self.sigma)?;
        }
        Ok(p)
    }
}

/// Nine significant digits, locale independent; exponent form outside
/// `[1e-5, 1e9)`.
pub fn fmt_sig(v: f64) -> String {
    if v == 0.0 {
        return "0".to_string();
    }
    if !v.is_finite() {
        return format!("{v}");
    }
    let e = v.abs().log10().floor() as i32;
    if (-5..9).contains(&e) {
        let digits = (8 - e).max(0) as usize;
        let s = format!("{v:.digits$}");
        // rounding may have produced an extra digit (e.g. 9.999999999 -> 10.00000000)
        let s2 = format!("{:.*}", digits.saturating_sub(1), v);
        if s.trim_start_matches('-').replace('.', "").trim_start_matches('0').len() > 9 {
            s2
        } else {
            s
        }
    } else {
        format!("{v:.8e}")
    }
}

fn fmt_err(v: f64) -> String {
    format!("{v:.2e}")
}

fn method_name(v: &SharpValue) -> String {
    serde_json::to_value(v.method)
        .ok()
        .and_then(|m| m.as_str().map(str::to_string))
        .unwrap_or_default()
}

struct Io<'a> {
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
}

/// Runs the command line and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    let mut out = stdout.lock();
    let mut err = stderr.lock();
    run_with(args, &mut out, &mut err)
}

/// [`run`] with explicit output streams.
pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { write!(err, "{text}") } else { write!(out, "{text}") };
            return code;
        }
    };
    configure_threads();
    let mut io = Io { out, err };
    match dispatch(cli.command, &mut io) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(io.err, "error: {e}");
            if e.is_numeric() {
                EXIT_NUMERIC
            } else if matches!(e, Error::Io(_)) {
                EXIT_FAILED
            } else {
                EXIT_USAGE
            }
        }
    }
}

fn configure_threads() {
    let n = std::env::var("SHARPBOUNDS_THREADS")
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .unwrap_or(0);
    // a second configuration attempt in the same process is harmless
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
}

fn dispatch(cmd: Command, io: &mut Io) -> Result<i32> {
    match cmd {
        Command::Constants { n_max, s_max } => constants_table(n_max, s_max, io),
        Command::Coeff { case, p, body_file, x } => coeff(&case, &p, body_file, x, io),
        Command::Verify {
            suite,
            seed,
            count,
            case,
            field,
            p,
            family,
            body_file,
            out,
            format,
        } => {
            let format = match &format {
                Some(f) => f.parse()?,
                None => out.as_deref().map(ReportFormat::from_path).unwrap_or(ReportFormat::Csv),
            };
            if let Some(family) = family {
                let body = read_body(body_file.as_ref())?;
                let family: ExteriorFamily = family.parse()?;
                let pts = exterior_sample_points(&body, 200, seed)?;
                let reports = exterior_suite(&body, family, &pts)?;
                return finish_reports(reports, out, format, io);
            }
            match (case, field) {
                (Some(case), field) => {
                    let case: Case = case.parse()?;
                    let params = p.params(case)?;
                    let field: FieldSpec = field.as_deref().unwrap_or("extremal").parse()?;
                    let rep = check_inequality(&params, field);
                    if let Some(e) = &rep.error {
                        if !rep.numeric_failure {
                            return Err(Error::Domain(e.clone()));
                        }
                    }
                    finish_reports(vec![rep], out, format, io)
                }
                (None, Some(_)) => Err(Error::domain("--field needs --case")),
                (None, None) => verify_suite(suite.parse()?, seed, count, out, format, io),
            }
        }
        Command::Sweep {
            case,
            n,
            s,
            radius,
            k_min,
            k_max,
        } => {
            let c = match case.as_str() {
                "ball-gradient" => SweepCase::BallGradient { n },
                "ball-divergence" => SweepCase::BallDivergence { n },
                "disk-analytic" => SweepCase::DiskAnalytic { s },
                _ => return Err(Error::Parse(format!("unknown sweep case '{case}'"))),
            };
            let r = limit_sweep(c, radius, k_min, k_max)?;
            writeln!(io.out, "k\tr\tscaled\terr_est")?;
            for p in &r.points {
                writeln!(io.out, "{}\t{}\t{}\t{}", p.k, fmt_sig(p.r), fmt_sig(p.scaled), fmt_err(p.err_est))?;
            }
            writeln!(io.out, "limit\t{}", fmt_sig(r.limit))?;
            writeln!(io.out, "target\t{}", fmt_sig(r.target))?;
            writeln!(io.out, "abs_gap\t{}", fmt_err(r.abs_gap))?;
            Ok(if r.abs_gap <= SWEEP_TOL { EXIT_OK } else { EXIT_FAILED })
        }
        Command::Sharpness { case, p, levels } => {
            let case: Case = case.parse()?;
            let params = p.params(case)?;
            let levels = levels.unwrap_or_else(|| default_levels(case));
            let s = sharpness(&params, &levels)?;
            writeln!(io.out, "level\tlhs\trhs\tratio\tquad_err")?;
            for (l, r) in levels.iter().zip(&s.reports) {
                writeln!(io.out, "{l}\t{}\t{}\t{}\t{}", fmt_sig(r.lhs), fmt_sig(r.rhs), fmt_sig(r.ratio), fmt_err(r.quad_err))?;
            }
            writeln!(io.out, "monotone\t{}", s.monotone)?;
            writeln!(io.out, "attained\t{}", s.attained)?;
            Ok(if s.ok() { EXIT_OK } else { EXIT_FAILED })
        }
    }
}

fn constants_table(n_max: usize, s_max: u32, io: &mut Io) -> Result<i32> {
    if n_max < 2 {
        return Err(Error::domain("--n-max must be at least 2"));
    }
    if s_max < 1 {
        return Err(Error::domain("--s-max must be at least 1"));
    }
    writeln!(io.out, "constant\tindex\tvalue\tmethod\terr_est")?;
    let mut row = |name: &str, k: usize, v: &SharpValue| -> Result<()> {
        writeln!(io.out, "{name}\t{k}\t{}\t{}\t{}", fmt_sig(v.value), method_name(v), fmt_err(v.err_est))?;
        Ok(())
    };
    for n in 2..=n_max {
        let d = Dim::new(n)?;
        row("C", n, &grad_constant(d))?;
        row("D", n, &div_constant(d)?)?;
        row("E", n, &lame_constant(d)?)?;
        row("A", n, &osc_constant(d))?;
    }
    for s in 1..=s_max {
        row("K", s as usize, &analytic_constant(s)?)?;
    }
    Ok(EXIT_OK)
}

fn read_body(path: Option<&PathBuf>) -> Result<ConvexBody> {
    let path = path.ok_or_else(|| Error::domain("this command needs --body-file"))?;
    let text = std::fs::read_to_string(path)?;
    ConvexBody::from_json(&text)
}

fn coeff(case: &str, p: &PointArgs, body_file: Option<PathBuf>, x: Option<Vec<f64>>, io: &mut Io) -> Result<i32> {
    let v = if let Some(kind) = case.strip_prefix("exterior-") {
        let body = read_body(body_file.as_ref())?;
        let x = x.ok_or_else(|| Error::domain("exterior cases need --x"))?;
        let kind = match kind {
            "gradient" => EstimateKind::Gradient,
            "directional" => EstimateKind::Directional { m: p.m },
            "divergence" => EstimateKind::Divergence,
            "lame-divergence" => EstimateKind::LameDiv { sigma: p.sigma },
            "stokes-pressure" => EstimateKind::StokesPressure,
            "analytic" => EstimateKind::Analytic { s: p.s },
            _ => return Err(Error::Parse(format!("unknown case '{case}'"))),
        };
        exterior_bound(&body, &x, kind)?
    } else {
        let c: Case = case.parse()?;
        p.params(c)?.coefficient()?
    };
    writeln!(io.out, "case\t{case}")?;
    for (k, val) in &v.params {
        writeln!(io.out, "{k}\t{}", fmt_sig(*val))?;
    }
    writeln!(io.out, "value\t{}", fmt_sig(v.value))?;
    writeln!(io.out, "err_est\t{}", fmt_err(v.err_est))?;
    writeln!(io.out, "method\t{}", method_name(&v))?;
    if let Some(c) = v.closed_form {
        writeln!(io.out, "closed_form\t{}", fmt_sig(c))?;
    }
    Ok(EXIT_OK)
}

fn print_report_line(r: &VerificationReport, io: &mut Io) -> Result<()> {
    writeln!(
        io.out,
        "{}\t{}\t{}\t{}\t{}\t{}{}",
        r.case,
        fmt_sig(r.lhs),
        fmt_sig(r.rhs),
        fmt_sig(r.ratio),
        fmt_err(r.quad_err),
        if r.pass { "pass" } else { "FAIL" },
        r.error.as_deref().map(|e| format!("\t{e}")).unwrap_or_default()
    )?;
    Ok(())
}

fn finish_reports(reports: Vec<VerificationReport>, out: Option<PathBuf>, format: ReportFormat, io: &mut Io) -> Result<i32> {
    match &out {
        Some(path) => write_report(&reports, path, format)?,
        None => {
            if reports.len() == 1 {
                writeln!(io.out, "case\tlhs\trhs\tratio\tquad_err\tpass")?;
                print_report_line(&reports[0], io)?;
            } else {
                write_reports(&reports, &mut *io.out, format)?;
            }
        }
    }
    let failed = reports.iter().filter(|r| !r.pass).count();
    if out.is_some() || reports.len() > 1 {
        writeln!(io.err, "{} checks, {} failed", reports.len(), failed)?;
    }
    Ok(if reports.iter().any(|r| r.numeric_failure) {
        EXIT_NUMERIC
    } else if failed > 0 {
        EXIT_FAILED
    } else {
        EXIT_OK
    })
}

fn verify_suite(suite: Suite, seed: u64, count: u64, out: Option<PathBuf>, format: ReportFormat, io: &mut Io) -> Result<i32> {
    let o = run_suite(suite, seed, count)?;
    if let Some(path) = &out {
        write_report(&o.reports, path, format)?;
    }
    let failed: Vec<&VerificationReport> = o.reports.iter().filter(|r| !r.pass).collect();
    writeln!(io.out, "checks\t{}", o.reports.len())?;
    writeln!(io.out, "failed\t{}", failed.len())?;
    for r in failed.iter().take(20) {
        print_report_line(r, io)?;
    }
    for (p, s) in &o.sharpness {
        let ratios: Vec<String> = s.ratios.iter().map(|v| fmt_sig(*v)).collect();
        writeln!(
            io.out,
            "sharpness\t{}\tn={}\ts={}\t{}\tmonotone={}\tattained={}",
            p.case,
            p.n,
            p.s,
            ratios.join(","),
            s.monotone,
            s.attained
        )?;
    }
    for s in &o.sweeps {
        let param = match s.case {
            SweepCase::BallGradient { n } | SweepCase::BallDivergence { n } => format!("n={n}"),
            SweepCase::DiskAnalytic { s } => format!("s={s}"),
        };
        writeln!(
            io.out,
            "sweep\t{}\t{param}\tlimit={}\ttarget={}\tabs_gap={}",
            s.case.id(),
            fmt_sig(s.limit),
            fmt_sig(s.target),
            fmt_err(s.abs_gap)
        )?;
    }
    for f in &o.failures {
        writeln!(io.err, "failure: {f}")?;
    }
    Ok(if o.numeric_failure() {
        EXIT_NUMERIC
    } else if o.passed() {
        EXIT_OK
    } else {
        EXIT_FAILED
    })
}
