//! Report records and their csv / json-lines serialization.

use std::cmp::Ordering;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize};

use crate::error::{Error, Result};

/// Ratios may exceed 1 by this much (on top of the quadrature error) before
/// a check fails.
pub const TOL_SLACK: f64 = 1e-6;

/// One checked inequality `lhs <= rhs`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub case: String,
    pub n: usize,
    pub m: Option<usize>,
    pub s: Option<u32>,
    pub sigma: Option<f64>,
    pub r: Option<f64>,
    pub xn: Option<f64>,
    #[serde(rename = "R")]
    pub radius: Option<f64>,
    pub grid_level: Option<u32>,
    pub seed: Option<u64>,
    #[serde(deserialize_with = "nan_or_float")]
    pub lhs: f64,
    #[serde(deserialize_with = "nan_or_float")]
    pub rhs: f64,
    #[serde(deserialize_with = "nan_or_float")]
    pub ratio: f64,
    #[serde(deserialize_with = "nan_or_float")]
    pub quad_err: f64,
    pub pass: bool,
    /// Why the evaluation failed; not part of the file schema.
    #[serde(skip)]
    pub error: Option<String>,
    /// The failure came from a numerical engine rather than bad input.
    #[serde(skip)]
    pub numeric_failure: bool,
}

/// JSON has no NaN; failed evaluations are written as `null`.
fn nan_or_float<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<f64, D::Error> {
    Ok(Option::<f64>::deserialize(d)?.unwrap_or(f64::NAN))
}

impl VerificationReport {
    /// A report for `case` with parameters filled in later.
    pub fn blank(case: impl Into<String>, n: usize) -> Self {
        VerificationReport {
            case: case.into(),
            n,
            m: None,
            s: None,
            sigma: None,
            r: None,
            xn: None,
            radius: None,
            grid_level: None,
            seed: None,
            lhs: f64::NAN,
            rhs: f64::NAN,
            ratio: f64::NAN,
            quad_err: f64::NAN,
            pass: false,
            error: None,
            numeric_failure: false,
        }
    }

    /// Fills in the measured quantities and decides `pass`:
    /// `ratio <= 1 + TOL_SLACK + quad_err / rhs`.
    pub fn judged(mut self, lhs: f64, rhs: f64, quad_err: f64) -> Self {
        self.lhs = lhs;
        self.rhs = rhs;
        self.quad_err = quad_err;
        self.ratio = if rhs > 0.0 {
            lhs / rhs
        } else if lhs == 0.0 {
            0.0
        } else {
            f64::INFINITY
        };
        let allowance = if rhs > 0.0 { quad_err / rhs } else { 0.0 };
        self.pass = lhs >= 0.0 && self.ratio.is_finite() && self.ratio <= 1.0 + TOL_SLACK + allowance;
        self
    }

    pub fn failed(mut self, err: &Error) -> Self {
        self.pass = false;
        self.error = Some(err.to_string());
        self.numeric_failure = err.is_numeric();
        self
    }

    /// Margin left to the pass threshold (negative when failing).
    pub fn margin(&self) -> f64 {
        let allowance = if self.rhs > 0.0 { self.quad_err / self.rhs } else { 0.0 };
        1.0 + TOL_SLACK + allowance - self.ratio
    }

    fn sort_key(&self) -> [f64; 9] {
        let o = |v: Option<f64>| v.unwrap_or(f64::NEG_INFINITY);
        [
            self.n as f64,
            o(self.m.map(|v| v as f64)),
            o(self.s.map(f64::from)),
            o(self.sigma),
            o(self.r),
            o(self.xn),
            o(self.radius),
            o(self.grid_level.map(f64::from)),
            o(self.seed.map(|v| v as f64)),
        ]
    }
}

/// Deterministic order: by case id, then by the parameters.
pub fn sort_reports(reports: &mut [VerificationReport]) {
    reports.sort_by(|a, b| {
        a.case.cmp(&b.case).then_with(|| {
            a.sort_key()
                .iter()
                .zip(b.sort_key().iter())
                .map(|(x, y)| x.total_cmp(y))
                .find(|o| *o != Ordering::Equal)
                .unwrap_or(Ordering::Equal)
        })
    });
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Csv,
    JsonLines,
}

impl FromStr for ReportFormat {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(ReportFormat::Csv),
            "json-lines" | "jsonl" => Ok(ReportFormat::JsonLines),
            _ => Err(Error::Parse(format!("unknown report format '{s}' (csv, json-lines)"))),
        }
    }
}

impl ReportFormat {
    /// Guess from a file extension, defaulting to csv.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some("jsonl") | Some("json") => ReportFormat::JsonLines,
            _ => ReportFormat::Csv,
        }
    }
}

fn csv_error(e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::Io(io),
        other => Error::Parse(format!("{other:?}")),
    }
}

/// Writes one record per report. Floats are written in their shortest
/// round-trip form, so reading a report back reproduces every value.
pub fn write_reports<W: Write>(reports: &[VerificationReport], out: W, format: ReportFormat) -> Result<()> {
    match format {
        ReportFormat::Csv => {
            let mut w = csv::Writer::from_writer(out);
            if reports.is_empty() {
                w.write_record(CSV_HEADER).map_err(csv_error)?;
            }
            for r in reports {
                w.serialize(r).map_err(csv_error)?;
            }
            w.flush()?;
        }
        ReportFormat::JsonLines => {
            let mut w = out;
            for r in reports {
                serde_json::to_writer(&mut w, r).map_err(|e| Error::Parse(e.to_string()))?;
                w.write_all(b"\n")?;
            }
            w.flush()?;
        }
    }
    Ok(())
}

const CSV_HEADER: [&str; 15] = [
    "case",
    "n",
    "m",
    "s",
    "sigma",
    "r",
    "xn",
    "R",
    "grid_level",
    "seed",
    "lhs",
    "rhs",
    "ratio",
    "quad_err",
    "pass",
];

pub fn write_report(reports: &[VerificationReport], path: &Path, format: ReportFormat) -> Result<()> {
    let f = BufWriter::new(File::create(path)?);
    write_reports(reports, f, format)
}

pub fn read_reports<R: Read>(input: R, format: ReportFormat) -> Result<Vec<VerificationReport>> {
    match format {
        ReportFormat::Csv => csv::Reader::from_reader(input)
            .deserialize()
            .map(|r| r.map_err(csv_error))
            .collect(),
        ReportFormat::JsonLines => BufReader::new(input)
            .lines()
            .filter(|l| !matches!(l, Ok(s) if s.trim().is_empty()))
            .map(|l| serde_json::from_str(&l?).map_err(|e| Error::Parse(e.to_string())))
            .collect(),
    }
}

pub fn read_report(path: &Path, format: ReportFormat) -> Result<Vec<VerificationReport>> {
    read_reports(File::open(path)?, format)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Vec<VerificationReport> {
        let mut a = VerificationReport::blank("ball-gradient", 3).judged(1.0, 1.0 / 0.7, 1e-12);
        a.r = Some(0.5);
        a.m = Some(1);
        a.grid_level = Some(5);
        let mut b = VerificationReport::blank("disk-analytic", 2).judged(0.1 + 0.2, 3.0, 0.0);
        b.s = Some(2);
        b.seed = Some(17);
        let c = VerificationReport::blank("stokes-pressure", 3).failed(&Error::Convergence {
            context: "x".into(),
            value: 1.0,
            err_est: 1.0,
        });
        vec![a, b, c]
    }

    #[test]
    fn judging() {
        let r = VerificationReport::blank("x", 2).judged(1.0 + 5e-7, 1.0, 0.0);
        assert!(r.pass);
        let r = VerificationReport::blank("x", 2).judged(1.0 + 2e-6, 1.0, 0.0);
        assert!(!r.pass && r.margin() < 0.0);
        let r = VerificationReport::blank("x", 2).judged(1.0 + 2e-6, 1.0, 1e-5);
        assert!(r.pass);
        let r = VerificationReport::blank("x", 2).judged(0.0, 0.0, 0.0);
        assert!(r.pass && r.ratio == 0.0);
    }

    #[test]
    fn csv_has_header_and_round_trips() {
        let reps = sample();
        let mut buf = Vec::new();
        write_reports(&reps, &mut buf, ReportFormat::Csv).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert_eq!(text.lines().count(), 4);
        assert_eq!(text.lines().next().unwrap(), CSV_HEADER.join(","));
        let back = read_reports(&buf[..], ReportFormat::Csv).unwrap();
        assert_eq!(back.len(), 3);
        for (a, b) in reps.iter().zip(&back) {
            assert_eq!(a.ratio.to_bits(), b.ratio.to_bits());
            assert_eq!(a.case, b.case);
            assert_eq!(a.pass, b.pass);
        }
        let mut empty = Vec::new();
        write_reports(&[], &mut empty, ReportFormat::Csv).unwrap();
        assert_eq!(String::from_utf8(empty).unwrap().trim(), CSV_HEADER.join(","));
    }

    #[test]
    fn json_lines_are_standalone_objects() {
        let reps = sample();
        let mut buf = Vec::new();
        write_reports(&reps, &mut buf, ReportFormat::JsonLines).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        for line in text.lines() {
            let v: serde_json::Value = serde_json::from_str(line).unwrap();
            assert!(v.is_object());
            assert!(v.get("R").is_some() && v.get("error").is_none());
        }
        let back = read_reports(&buf[..], ReportFormat::JsonLines).unwrap();
        assert_eq!(back[1].ratio.to_bits(), reps[1].ratio.to_bits());
        assert!(back[2].ratio.is_nan());
    }

    #[test]
    fn ordering_is_by_case_then_params() {
        let mut reps = sample();
        reps.reverse();
        let mut x = VerificationReport::blank("ball-gradient", 3);
        x.r = Some(0.1);
        reps.push(x);
        sort_reports(&mut reps);
        let ids: Vec<_> = reps.iter().map(|r| (r.case.as_str(), r.r)).collect();
        assert_eq!(
            ids,
            vec![
                ("ball-gradient", Some(0.1)),
                ("ball-gradient", Some(0.5)),
                ("disk-analytic", None),
                ("stokes-pressure", None)
            ]
        );
    }
}
