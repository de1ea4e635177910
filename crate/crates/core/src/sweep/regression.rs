use serde::Serialize;

use super::crossing::CrossingRecord;
use crate::error::{Error, Result};

/// Ordinary least-squares line `y = slope·x + intercept`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub points: usize,
}

pub fn linear_fit(xs: &[f64], ys: &[f64]) -> Result<LinearFit> {
    let n = xs.len();
    if n != ys.len() || n < 2 {
        return Err(Error::InsufficientPoints(n.min(ys.len())));
    }
    let nf = n as f64;
    let x_mean = xs.iter().sum::<f64>() / nf;
    let y_mean = ys.iter().sum::<f64>() / nf;
    let (mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0);
    for (x, y) in xs.iter().zip(ys) {
        let (dx, dy) = (x - x_mean, y - y_mean);
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if sxx == 0.0 {
        return Err(Error::param("regression", "all abscissae coincide"));
    }
    let slope = sxy / sxx;
    let intercept = y_mean - slope * x_mean;
    let ss_res: f64 = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| {
            let r = y - (slope * x + intercept);
            r * r
        })
        .sum();
    let r_squared = if syy == 0.0 {
        1.0
    } else {
        (1.0 - ss_res / syy).clamp(0.0, 1.0)
    };
    Ok(LinearFit {
        slope,
        intercept,
        r_squared,
        points: n,
    })
}

/// Fitted `log t = β log ε + log C` for one α.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RegressionResult {
    pub alpha: f64,
    /// β_α.
    pub slope: f64,
    /// `log C`.
    pub intercept: f64,
    pub r_squared: f64,
    pub points: usize,
}

/// Regresses `log t_cross` on `log ε`; records without a crossing are skipped.
pub fn regress_loglog(alpha: f64, records: &[CrossingRecord]) -> Result<RegressionResult> {
    let (xs, ys): (Vec<f64>, Vec<f64>) = records
        .iter()
        .filter(|r| r.is_usable())
        .map(|r| (r.epsilon.ln(), r.t_cross.unwrap_or(f64::NAN).ln()))
        .unzip();
    if xs.len() < 3 {
        return Err(Error::InsufficientPoints(xs.len()));
    }
    let fit = linear_fit(&xs, &ys)?;
    Ok(RegressionResult {
        alpha,
        slope: fit.slope,
        intercept: fit.intercept,
        r_squared: fit.r_squared,
        points: fit.points,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn records(ts: impl Fn(f64) -> f64) -> Vec<CrossingRecord> {
        (0..6)
            .map(|i| {
                let eps = 10f64.powf(-3.0 + i as f64 * 0.2);
                CrossingRecord {
                    alpha: 0.0,
                    delta: 1.0,
                    epsilon: eps,
                    t_cross: Some(ts(eps)),
                    failure: None,
                }
            })
            .collect()
    }

    #[test]
    fn exact_power_law() {
        let fit = regress_loglog(0.0, &records(|e| 0.7 * e.powf(0.2))).unwrap();
        assert!((fit.slope - 0.2).abs() < 1e-12);
        assert!((fit.intercept - 0.7f64.ln()).abs() < 1e-12);
        assert!((fit.r_squared - 1.0).abs() < 1e-12);
        assert_eq!(fit.points, 6);
    }

    #[test]
    fn constant_crossing_time() {
        let fit = regress_loglog(0.0, &records(|_| 0.4)).unwrap();
        assert!(fit.slope.abs() < 1e-12);
    }

    #[test]
    fn too_few_points() {
        let mut r = records(|e| e);
        for rec in r.iter_mut().skip(2) {
            rec.t_cross = None;
        }
        assert!(matches!(
            regress_loglog(0.0, &r),
            Err(Error::InsufficientPoints(2))
        ));
    }
}
