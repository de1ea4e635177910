use serde::{Deserialize, Serialize};

use super::lemma::{lemma_roots, LemmaQInput};
use crate::error::{Error, Result};
use crate::evolution::ModelParams;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Model {
    Nls,
    Ep,
}

impl std::str::FromStr for Model {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "nls" => Ok(Model::Nls),
            "ep" => Ok(Model::Ep),
            other => Err(Error::param(
                "model",
                format!("expected ep or nls, got {other}"),
            )),
        }
    }
}

impl std::fmt::Display for Model {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Model::Nls => "nls",
            Model::Ep => "ep",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BetaRegime {
    /// β is given exactly by the formula.
    Exact,
    /// `α >= 1/(p-1)`: only β > 0 is asserted.
    AnyPositive,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BetaPrediction {
    pub alpha: f64,
    pub p: f64,
    pub model: Model,
    /// `None` in the [`BetaRegime::AnyPositive`] regime.
    pub beta: Option<f64>,
    pub regime: BetaRegime,
}

/// Predicted exponent of the onset time `t = C ε^β` for initial amplitude `ε^α`.
///
/// NLS: `β = 1 - (p-1)α`. EP: `β = (1 - (p-1)α)/(p+2)`. Both hold for
/// `α < 1/(p-1)`; beyond that only positivity is known.
pub fn beta_predict(alpha: f64, p: f64, model: Model) -> Result<BetaPrediction> {
    if !(alpha.is_finite() && alpha >= 0.0) {
        return Err(Error::param("alpha", format!("must be >= 0, got {alpha}")));
    }
    if !(p.is_finite() && p > 1.0) {
        return Err(Error::param("p", format!("must be > 1, got {p}")));
    }
    let exact = alpha * (p - 1.0) < 1.0;
    let beta = exact.then(|| {
        let nls = 1.0 - (p - 1.0) * alpha;
        match model {
            Model::Nls => nls,
            Model::Ep => nls / (p + 2.0),
        }
    });
    Ok(BetaPrediction {
        alpha,
        p,
        model,
        beta,
        regime: if exact {
            BetaRegime::Exact
        } else {
            BetaRegime::AnyPositive
        },
    })
}

/// Free inputs of the bound constants.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundInputs {
    /// `‖φ₀‖_{H^s}`.
    pub m: f64,
    /// Sobolev algebra constant; not computable here, default 1.
    pub kp: f64,
    pub c: f64,
    pub c1: f64,
    pub c2: f64,
    pub alpha: f64,
}

impl Default for BoundInputs {
    fn default() -> Self {
        BoundInputs {
            m: 1.0,
            kp: 1.0,
            c: 1.0,
            c1: 0.0,
            c2: 1.0,
            alpha: 0.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundConstants {
    pub inputs: BoundInputs,
    /// NLS constant `|g| K_p C M^{p-1}`.
    pub b: f64,
    /// `½ γ² C₁²`.
    pub b1: f64,
    /// `B₁ + |g| K_p γ^{p+1} M^{p-1} C₂^{p+2} / (p+2)`, last term only for `α <= 1/2`.
    pub b2: f64,
    /// `min{2, 1 + p/2 + α(p-1)}`.
    pub q: f64,
}

pub fn bound_constants(params: &ModelParams, inputs: BoundInputs) -> Result<BoundConstants> {
    params.validate()?;
    let BoundInputs {
        m,
        kp,
        c,
        c1,
        c2,
        alpha,
    } = inputs;
    for (name, v) in [
        ("M", m),
        ("Kp", kp),
        ("C", c),
        ("C1", c1),
        ("C2", c2),
        ("alpha", alpha),
    ] {
        if !(v.is_finite() && v >= 0.0) {
            return Err(Error::InvalidParameter {
                name: "bound input",
                reason: format!("{name} must be finite and >= 0, got {v}"),
            });
        }
    }
    let p = params.p;
    let g = params.g.abs();
    let gamma = params.gamma;
    let m_pow = m.powf(p - 1.0);

    let b = g * kp * c * m_pow;
    let b1 = 0.5 * gamma * gamma * c1 * c1;
    let nonlinear = if alpha <= 0.5 {
        g * kp * gamma.powf(p + 1.0) * m_pow * c2.powf(p + 2.0) / (p + 2.0)
    } else {
        0.0
    };
    let b2 = b1 + nonlinear;
    let q = f64::min(2.0, 1.0 + p / 2.0 + alpha * (p - 1.0));
    Ok(BoundConstants {
        inputs,
        b,
        b1,
        b2,
        q,
    })
}

/// A-priori bound `y★(t, ε)` on `‖ψ(t)‖_{H^s}` for the exciton started from rest.
///
/// With `η = (|g| K_p t / (1 - ½γ²t²))^p` and `δ = γ M ε^α / (|g| K_p)`,
/// returns `η^{1/p} y₁(η, δ)` using the small root of `Q`.
pub fn y_star(
    t: f64,
    epsilon: f64,
    params: &ModelParams,
    m: f64,
    kp: f64,
    alpha: f64,
) -> Result<f64> {
    let (base, delta_lin) = y_star_scales(t, epsilon, params, m, alpha)?;
    if base == 0.0 || delta_lin == 0.0 {
        return Ok(0.0);
    }
    let gk = params.g.abs() * kp;
    if gk == 0.0 {
        // Linear limit: y1 = δ, so y★ = γ M ε^α t / (1 - ½γ²t²).
        return Ok(base * delta_lin);
    }
    let eta_root = gk * base;
    let input = LemmaQInput::new(eta_root.powf(params.p), delta_lin / gk, params.p)?;
    let roots = lemma_roots(&input)?;
    Ok(eta_root * roots.y1)
}

/// `γ M ε^α t (1 + ½γ²t² + |g| K_p (γM)^{p-1} ε^{α(p-1)} t^p)`.
pub fn y_star_series(
    t: f64,
    epsilon: f64,
    params: &ModelParams,
    m: f64,
    kp: f64,
    alpha: f64,
) -> Result<f64> {
    y_star_scales(t, epsilon, params, m, alpha)?;
    let p = params.p;
    let gamma = params.gamma;
    let amp = gamma * m * epsilon.powf(alpha);
    let nonlinear = params.g.abs() * kp * amp.powf(p - 1.0) * t.powf(p);
    Ok(amp * t * (1.0 + 0.5 * gamma * gamma * t * t + nonlinear))
}

/// Returns `(t / (1 - ½γ²t²), γ M ε^α)` after checking the preconditions.
fn y_star_scales(
    t: f64,
    epsilon: f64,
    params: &ModelParams,
    m: f64,
    alpha: f64,
) -> Result<(f64, f64)> {
    params.validate()?;
    if !(t.is_finite() && t >= 0.0) {
        return Err(Error::param("t", format!("must be >= 0, got {t}")));
    }
    if !(epsilon.is_finite() && epsilon >= 0.0) {
        return Err(Error::param(
            "epsilon",
            format!("must be >= 0, got {epsilon}"),
        ));
    }
    let denom = 1.0 - 0.5 * params.gamma * params.gamma * t * t;
    if denom <= 0.0 {
        return Err(Error::param("t", format!("needs ½γ²t² < 1, got t = {t}")));
    }
    let amplitude = if epsilon == 0.0 {
        0.0
    } else {
        epsilon.powf(alpha)
    };
    Ok((t / denom, params.gamma * m * amplitude))
}

/// Guaranteed existence time `(1-r)/(2γ + |g| K̃ N²)` for data of size `r N`.
pub fn existence_horizon(n: f64, r: f64, gamma: f64, g: f64, k_tilde: f64) -> Result<f64> {
    if !(r > 0.0 && r < 1.0) {
        return Err(Error::param("r", format!("must lie in (0, 1), got {r}")));
    }
    if !(n.is_finite() && n > 0.0) {
        return Err(Error::param("N", format!("must be > 0, got {n}")));
    }
    Ok((1.0 - r) / (2.0 * gamma + g.abs() * k_tilde * n * n))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_params() -> ModelParams {
        ModelParams::default()
    }

    #[test]
    fn beta_values() {
        let ep = beta_predict(0.0, 3.0, Model::Ep).unwrap();
        assert_eq!(ep.beta, Some(0.2));
        assert_eq!(beta_predict(0.0, 5.0, Model::Nls).unwrap().beta, Some(1.0));
        for model in [Model::Ep, Model::Nls] {
            let b = beta_predict(0.5, 3.0, model).unwrap();
            assert_eq!(b.regime, BetaRegime::AnyPositive);
            assert_eq!(b.beta, None);
        }
        assert!(beta_predict(-0.1, 3.0, Model::Ep).is_err());
        assert!(beta_predict(0.1, 1.0, Model::Ep).is_err());
    }

    #[test]
    fn beta_joint_relation() {
        for &p in &[1.5, 2.0, 3.0, 5.0, 7.5] {
            for i in 0..20 {
                let alpha = i as f64 * 0.05;
                let b = beta_predict(alpha, p, Model::Ep).unwrap();
                if let Some(beta) = b.beta {
                    assert!((beta * (p + 2.0) + (p - 1.0) * alpha - 1.0).abs() < 1e-14);
                }
            }
        }
    }

    #[test]
    fn bound_constant_cases() {
        let base = BoundInputs {
            m: 1.0,
            kp: 1.0,
            c: 1.0,
            c1: 0.0,
            c2: 1.0,
            alpha: 0.0,
        };
        let k = bound_constants(&unit_params(), base).unwrap();
        assert_eq!(k.b1, 0.0);
        assert!((k.b2 - 0.2).abs() < 1e-15);
        assert_eq!(k.q, 2.0);

        let dropped = bound_constants(
            &unit_params(),
            BoundInputs {
                alpha: 0.6,
                c1: 2.0,
                ..base
            },
        )
        .unwrap();
        assert_eq!(dropped.b2, dropped.b1);
        assert_eq!(dropped.b1, 2.0);
    }

    #[test]
    fn y_star_leading_term() {
        let params = unit_params();
        for &t in &[1e-2, 1e-3, 1e-4] {
            let y = y_star(t, 0.1, &params, 1.0, 1.0, 0.0).unwrap();
            let ratio = y / t;
            assert!((ratio - 1.0).abs() < 2.0 * t * t, "t = {t}: ratio {ratio}");
        }
        assert_eq!(y_star(0.05, 0.0, &params, 1.0, 1.0, 0.5).unwrap(), 0.0);
    }

    #[test]
    fn y_star_root_and_series_agree() {
        let params = unit_params();
        let (t, eps) = (0.05, 0.1);
        let root = y_star(t, eps, &params, 1.0, 1.0, 0.0).unwrap();
        let series = y_star_series(t, eps, &params, 1.0, 1.0, 0.0).unwrap();
        // Dropped terms: O(t^4), O(t^{p+2}) and O(t^{2p}) relative to γMt.
        let next_order = t * (t.powi(4) + t.powi(5) + t.powi(6));
        assert!(
            (root - series).abs() <= 2.0 * next_order,
            "{root} vs {series}"
        );
    }

    #[test]
    fn y_star_linear_limit() {
        let params = ModelParams {
            g: 0.0,
            ..unit_params()
        };
        let t = 0.3;
        let y = y_star(t, 1.0, &params, 2.0, 1.0, 0.0).unwrap();
        assert!((y - 2.0 * t / (1.0 - 0.5 * t * t)).abs() < 1e-15);
        assert!(y_star(1.5, 1.0, &params, 1.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn existence_horizon_cases() {
        assert!((existence_horizon(2.0, 0.5, 1.0, 1.0, 1.0).unwrap() - 0.5 / 6.0).abs() < 1e-16);
        assert_eq!(
            existence_horizon(3.0, 0.2, 2.0, 0.0, 5.0).unwrap(),
            0.8 / 4.0
        );
        let near_one = existence_horizon(1.0, 1.0 - 1e-12, 1.0, 1.0, 1.0).unwrap();
        assert!(near_one < 1e-12);
        assert!(existence_horizon(1.0, 1.0, 1.0, 1.0, 1.0).is_err());
    }
}
