//! The scalar bound equation `Q(y; η, δ) = η y^p - y + δ` and its roots.

use serde::Serialize;

use crate::error::{Error, Result};

/// `η·δ^{p-1}` must stay below this for the series expansions.
pub const SERIES_REGIME_LIMIT: f64 = 0.3;

const MAX_ITERATIONS: usize = 200;
const BRACKET_TOLERANCE: f64 = 1e-6;
const ROOT_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LemmaQInput {
    pub eta: f64,
    pub delta: f64,
    pub p: f64,
}

impl LemmaQInput {
    pub fn new(eta: f64, delta: f64, p: f64) -> Result<Self> {
        if !(eta.is_finite() && eta >= 0.0) {
            return Err(Error::param(
                "eta",
                format!("must be finite and >= 0, got {eta}"),
            ));
        }
        if !(delta.is_finite() && delta >= 0.0) {
            return Err(Error::param(
                "delta",
                format!("must be finite and >= 0, got {delta}"),
            ));
        }
        if !(p.is_finite() && p > 1.0) {
            return Err(Error::param("p", format!("must be > 1, got {p}")));
        }
        Ok(LemmaQInput { eta, delta, p })
    }

    /// Expansion parameter `η δ^{p-1}`.
    pub fn expansion_parameter(&self) -> f64 {
        self.eta * self.delta.powf(self.p - 1.0)
    }

    /// Minimizer of `Q` over `y > 0`: `(1/(pη))^{1/(p-1)}`.
    pub fn minimizer(&self) -> f64 {
        (1.0 / (self.p * self.eta)).powf(1.0 / (self.p - 1.0))
    }
}

pub fn q_eval(y: f64, input: &LemmaQInput) -> f64 {
    input.eta * y.powf(input.p) - y + input.delta
}

fn q_derivative(y: f64, input: &LemmaQInput) -> f64 {
    input.p * input.eta * y.powf(input.p - 1.0) - 1.0
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LemmaRoots {
    pub y1: f64,
    pub y2: f64,
    pub y_min: f64,
}

/// Both positive roots of `Q`, `y1 < y_min < y2`.
///
/// Requires `η > 0`, `δ > 0` and `Q(y_min) < 0`; the last condition is what
/// "sufficiently small η and δ" amounts to. Each root is bracketed by
/// bisection and polished by safeguarded Newton iteration.
pub fn lemma_roots(input: &LemmaQInput) -> Result<LemmaRoots> {
    if input.eta <= 0.0 {
        return Err(Error::param("eta", "root finding needs eta > 0"));
    }
    if input.delta <= 0.0 {
        return Err(Error::param("delta", "root finding needs delta > 0"));
    }
    let y_min = input.minimizer();
    let q_min = q_eval(y_min, input);
    if !(q_min < 0.0) {
        return Err(Error::NoRealRoots { y_min, q_min });
    }
    let y1 = solve_bracketed(input, 0.0, y_min)?;

    let mut hi = 2.0 * y_min;
    let mut doublings = 0;
    while q_eval(hi, input) <= 0.0 {
        hi *= 2.0;
        doublings += 1;
        if doublings > MAX_ITERATIONS || !hi.is_finite() {
            return Err(Error::RootNotConverged {
                iterations: doublings,
            });
        }
    }
    let y2 = solve_bracketed(input, y_min, hi)?;
    Ok(LemmaRoots { y1, y2, y_min })
}

/// Root of `Q` in `[lo, hi]`, where `Q` changes sign exactly once.
fn solve_bracketed(input: &LemmaQInput, mut lo: f64, mut hi: f64) -> Result<f64> {
    let f_lo_positive = q_eval(lo, input) > 0.0;
    let mut iterations = 0;

    while hi - lo > BRACKET_TOLERANCE * hi.abs().max(f64::MIN_POSITIVE) {
        let mid = 0.5 * (lo + hi);
        let f_mid = q_eval(mid, input);
        if f_mid == 0.0 {
            return Ok(mid);
        }
        if (f_mid > 0.0) == f_lo_positive {
            lo = mid;
        } else {
            hi = mid;
        }
        iterations += 1;
        if iterations >= MAX_ITERATIONS {
            return Err(Error::RootNotConverged { iterations });
        }
    }

    let mut y = 0.5 * (lo + hi);
    let mut last_step = f64::INFINITY;
    while iterations < MAX_ITERATIONS {
        iterations += 1;
        let f = q_eval(y, input);
        if f == 0.0 {
            return Ok(y);
        }
        if (f > 0.0) == f_lo_positive {
            lo = y;
        } else {
            hi = y;
        }
        let df = q_derivative(y, input);
        let mut next = y - f / df;
        if !(next > lo && next < hi) || !next.is_finite() {
            next = 0.5 * (lo + hi);
        }
        let step = (next - y).abs();
        y = next;
        // Converged to working precision, or Newton has stopped improving.
        if step <= 4.0 * f64::EPSILON * y.abs()
            || (step >= last_step && step <= ROOT_TOLERANCE * y.abs())
        {
            return Ok(y);
        }
        last_step = step;
    }
    if last_step <= ROOT_TOLERANCE * y.abs() {
        Ok(y)
    } else {
        Err(Error::RootNotConverged { iterations })
    }
}

/// Truncation order of the small-root expansions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum SeriesOrder {
    First = 1,
    Second = 2,
    Third = 3,
}

impl TryFrom<u32> for SeriesOrder {
    type Error = Error;
    fn try_from(v: u32) -> Result<Self> {
        match v {
            1 => Ok(SeriesOrder::First),
            2 => Ok(SeriesOrder::Second),
            3 => Ok(SeriesOrder::Third),
            _ => Err(Error::param(
                "order",
                format!("series order must be 1, 2 or 3, got {v}"),
            )),
        }
    }
}

fn check_regime(input: &LemmaQInput) -> Result<f64> {
    let x = input.expansion_parameter();
    if x < SERIES_REGIME_LIMIT {
        Ok(x)
    } else {
        Err(Error::SeriesRegime {
            value: x,
            limit: SERIES_REGIME_LIMIT,
        })
    }
}

/// Coefficient of `x^m` in `y1/δ`, from Lagrange inversion of `y = δ + η y^p`:
/// `C(mp, m) / (m(p-1) + 1)`.
fn y1_coefficient(m: u32, p: f64) -> f64 {
    match m {
        0 | 1 => 1.0,
        2 => p,
        3 => p * (3.0 * p - 1.0) / 2.0,
        _ => unreachable!("series is truncated at third order"),
    }
}

/// `y1 ≈ δ (1 + x + p x² + p(3p-1)/2 x³)` with `x = η δ^{p-1}`, truncated at `order`.
pub fn y1_series(input: &LemmaQInput, order: SeriesOrder) -> Result<f64> {
    let x = check_regime(input)?;
    let mut sum = 0.0;
    let mut power = 1.0;
    for m in 0..=order as u32 {
        sum += y1_coefficient(m, input.p) * power;
        power *= x;
    }
    Ok(input.delta * sum)
}

/// `y1^p ≈ δ^p (1 + p x + p(3p-1)/2 x²)`, truncated at `order` (1 or 2).
pub fn y1_pow_p_series(input: &LemmaQInput, order: SeriesOrder) -> Result<f64> {
    let x = check_regime(input)?;
    // y1^p = (y1 - δ)/η, so the coefficients are those of y1/δ shifted by one.
    let top = (order as u32).min(2);
    let mut sum = 0.0;
    let mut power = 1.0;
    for m in 0..=top {
        sum += y1_coefficient(m + 1, input.p) * power;
        power *= x;
    }
    Ok(input.delta.powf(input.p) * sum)
}
