//! Tidy CSV output. Floats are written with 17 significant digits so they
//! parse back to the identical `f64`.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::sync::atomic::{AtomicU64, Ordering};

use crate::error::{Error, Result};
use crate::evolution::{ErrorCurve, Trajectory};
use crate::sweep::{AlgorithmAReport, CrossingRecord};

/// Scientific notation with 17 significant digits.
pub fn format_float(v: f64) -> String {
    format!("{v:.16e}")
}

fn format_opt(v: Option<f64>) -> String {
    v.map(format_float).unwrap_or_default()
}

/// Writes `contents` next to `path` and renames it into place.
pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    static COUNTER: AtomicU64 = AtomicU64::new(0);
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
    }
    let tmp = path.with_extension(format!(
        "tmp.{}.{}",
        std::process::id(),
        COUNTER.fetch_add(1, Ordering::Relaxed)
    ));
    fs::write(&tmp, contents).map_err(|e| Error::io(&tmp, e))?;
    fs::rename(&tmp, path).map_err(|e| Error::io(path, e))
}

pub fn curve_to_csv(curve: &ErrorCurve) -> String {
    let mut out = String::from("t,rho\n");
    for (t, r) in curve.times.iter().zip(&curve.rho) {
        let _ = writeln!(out, "{},{}", format_float(*t), format_float(*r));
    }
    out
}

pub fn curve_from_csv(text: &str) -> Result<ErrorCurve> {
    let mut lines = text.lines();
    if lines.next() != Some("t,rho") {
        return Err(Error::ConfigParse(
            "curve file lacks the t,rho header".into(),
        ));
    }
    let mut curve = ErrorCurve {
        times: Vec::new(),
        rho: Vec::new(),
    };
    for (i, line) in lines.enumerate() {
        let parse = |s: Option<&str>| -> Result<f64> {
            s.and_then(|v| v.trim().parse().ok()).ok_or_else(|| {
                Error::ConfigParse(format!("curve file line {}: malformed row", i + 2))
            })
        };
        let mut cols = line.split(',');
        curve.times.push(parse(cols.next())?);
        curve.rho.push(parse(cols.next())?);
    }
    Ok(curve)
}

/// Columns `t, norm_phi, norm_psi, mass`.
pub fn trajectory_to_csv(traj: &Trajectory) -> String {
    let mut out = String::from("t,norm_phi,norm_psi,mass\n");
    for s in traj.samples() {
        let _ = writeln!(
            out,
            "{},{},{},{}",
            format_float(s.time),
            format_float(s.norm_phi),
            format_float(s.norm_psi),
            format_float(s.mass)
        );
    }
    out
}

pub fn crossings_to_csv(records: &[CrossingRecord]) -> String {
    let mut out = String::from("alpha,delta,epsilon,t_cross\n");
    for r in records {
        let _ = writeln!(
            out,
            "{},{},{},{}",
            format_float(r.alpha),
            format_float(r.delta),
            format_float(r.epsilon),
            format_opt(r.t_cross)
        );
    }
    out
}

/// Columns `alpha, beta, intercept, r2, npoints`; failed fits leave blanks.
pub fn betas_to_csv(report: &AlgorithmAReport) -> String {
    let mut out = String::from("alpha,beta,intercept,r2,npoints\n");
    for row in &report.betas {
        let fit = row.fit.as_ref();
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            format_float(row.alpha),
            format_opt(fit.map(|f| f.slope)),
            format_opt(fit.map(|f| f.intercept)),
            format_opt(fit.map(|f| f.r_squared)),
            fit.map_or(0, |f| f.points)
        );
    }
    out
}

/// Parses a CSV body with a header into named float columns; blanks become NaN.
pub fn parse_float_table(text: &str) -> Result<(Vec<String>, Vec<Vec<f64>>)> {
    let mut lines = text.lines();
    let header: Vec<String> = lines
        .next()
        .ok_or_else(|| Error::ConfigParse("empty table".into()))?
        .split(',')
        .map(str::to_owned)
        .collect();
    let mut rows = Vec::new();
    for (i, line) in lines.enumerate() {
        let row = line
            .split(',')
            .map(|c| {
                if c.is_empty() {
                    Ok(f64::NAN)
                } else {
                    c.parse::<f64>().map_err(|_| {
                        Error::ConfigParse(format!("line {}: bad number {c:?}", i + 2))
                    })
                }
            })
            .collect::<Result<Vec<f64>>>()?;
        if row.len() != header.len() {
            return Err(Error::ConfigParse(format!(
                "line {}: wrong column count",
                i + 2
            )));
        }
        rows.push(row);
    }
    Ok((header, rows))
}
