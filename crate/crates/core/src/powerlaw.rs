//! Power-law weight distribution with tail `P(W > x) = λ x^(-α)` for `x ≥ x₀`.
//!
//! Only the tail is pinned down by the model, so the law below `x₀` is a
//! parameter ([`Body`]). Every asymptotic quantity in [`crate::theory`]
//! depends on `(α, λ, x₀)` alone.

use rand::distr::OpenClosed01;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Distribution of the weight on `[0, x₀)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Body {
    /// No mass below `x₀`; requires `λ = x₀^α`.
    #[default]
    PurePareto,
    /// Mass `1 - λ x₀^(-α)` spread uniformly over `(0, x₀)`.
    UniformBody,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerLawParams {
    pub alpha: f64,
    pub lambda: f64,
    pub x0: f64,
    #[serde(default)]
    pub body: Body,
}

const PURE_PARETO_REL_TOL: f64 = 1e-12;

impl PowerLawParams {
    pub fn new(alpha: f64, lambda: f64, x0: f64, body: Body) -> Result<Self> {
        let params = PowerLawParams {
            alpha,
            lambda,
            x0,
            body,
        };
        params.validate()?;
        Ok(params)
    }

    /// Pareto law on `[x₀, ∞)`, i.e. `λ = x₀^α`.
    pub fn pure_pareto(alpha: f64, x0: f64) -> Result<Self> {
        Self::new(alpha, x0.powf(alpha), x0, Body::PurePareto)
    }

    pub fn validate(&self) -> Result<()> {
        let finite_pos = |v: f64| v.is_finite() && v > 0.0;
        if !finite_pos(self.alpha) {
            return Err(Error::InvalidParams(format!(
                "alpha must be positive, got {}",
                self.alpha
            )));
        }
        if !finite_pos(self.lambda) {
            return Err(Error::InvalidParams(format!(
                "lambda must be positive, got {}",
                self.lambda
            )));
        }
        if !finite_pos(self.x0) {
            return Err(Error::InvalidParams(format!("x0 must be positive, got {}", self.x0)));
        }
        let t0 = self.lambda * self.x0.powf(-self.alpha);
        if t0 > 1.0 + PURE_PARETO_REL_TOL {
            return Err(Error::InvalidParams(format!("lambda * x0^-alpha = {t0} exceeds 1")));
        }
        if self.body == Body::PurePareto {
            let want = self.x0.powf(self.alpha);
            if ((self.lambda - want) / want).abs() > PURE_PARETO_REL_TOL {
                return Err(Error::InvalidParams(format!(
                    "pure Pareto body requires lambda = x0^alpha = {want}, got {}",
                    self.lambda
                )));
            }
        }
        Ok(())
    }

    /// `P(W > x₀) = λ x₀^(-α)`, clamped to 1.
    pub fn tail_at_x0(&self) -> f64 {
        (self.lambda * self.x0.powf(-self.alpha)).min(1.0)
    }

    /// Same law with a different tail exponent, keeping `x₀` and the body.
    /// For a pure Pareto body `λ` follows `α`; otherwise `λ` is kept.
    pub fn with_alpha(&self, alpha: f64) -> Result<Self> {
        match self.body {
            Body::PurePareto => Self::pure_pareto(alpha, self.x0),
            Body::UniformBody => Self::new(alpha, self.lambda, self.x0, self.body),
        }
    }
}

/// Survival function `P(W > x)`.
pub fn tail_prob(params: &PowerLawParams, x: f64) -> f64 {
    if x >= params.x0 {
        return params.lambda * x.powf(-params.alpha);
    }
    match params.body {
        Body::PurePareto => 1.0,
        Body::UniformBody => {
            let t0 = params.tail_at_x0();
            1.0 - (1.0 - t0) * x.max(0.0) / params.x0
        }
    }
}

/// Maps a uniform draw `u ∈ (0, 1]` to a weight.
///
/// The tail part is the exact inverse survival function `W = (λ/u)^(1/α)`,
/// so for a pure Pareto body `W = x₀ u^(-1/α)`, decreasing in `u`. The
/// uniform body maps `u ∈ (t₀, 1]` linearly onto `(0, x₀]`, which keeps the
/// weight strictly positive.
pub fn weight_from_uniform(params: &PowerLawParams, u: f64) -> f64 {
    match params.body {
        Body::PurePareto => params.x0 * u.powf(-1.0 / params.alpha),
        Body::UniformBody => {
            let t0 = params.tail_at_x0();
            if u <= t0 {
                (params.lambda / u).powf(1.0 / params.alpha)
            } else {
                params.x0 * (u - t0) / (1.0 - t0)
            }
        }
    }
}

/// Draws one weight, consuming exactly one uniform from `rng`.
pub fn sample_weight<R: Rng + ?Sized>(params: &PowerLawParams, rng: &mut R) -> f64 {
    let u: f64 = rng.sample(OpenClosed01);
    weight_from_uniform(params, u)
}

/// `E(W)`.
///
/// * pure Pareto: `α x₀ / (α - 1)`
/// * uniform body: `(1 - t₀) x₀ / 2 + λ α x₀^(1-α) / (α - 1)` with `t₀ = λ x₀^(-α)`
pub fn mean(params: &PowerLawParams) -> Result<f64> {
    let a = params.alpha;
    if a <= 1.0 {
        return Err(Error::MeanUndefined { alpha: a });
    }
    let tail = params.lambda * a * params.x0.powf(1.0 - a) / (a - 1.0);
    Ok(match params.body {
        Body::PurePareto => a * params.x0 / (a - 1.0),
        Body::UniformBody => (1.0 - params.tail_at_x0()) * params.x0 / 2.0 + tail,
    })
}

/// `E(W²)`.
///
/// * pure Pareto: `α x₀² / (α - 2)`
/// * uniform body: `(1 - t₀) x₀² / 3 + λ α x₀^(2-α) / (α - 2)`
pub fn second_moment(params: &PowerLawParams) -> Result<f64> {
    let a = params.alpha;
    if a <= 2.0 {
        return Err(Error::SecondMomentUndefined { alpha: a });
    }
    let x0 = params.x0;
    let tail = params.lambda * a * x0.powf(2.0 - a) / (a - 2.0);
    Ok(match params.body {
        Body::PurePareto => a * x0 * x0 / (a - 2.0),
        Body::UniformBody => (1.0 - params.tail_at_x0()) * x0 * x0 / 3.0 + tail,
    })
}

/// Leading term of `P(W₁⋯W_m > x)`: `λ^m α^(m-1) x^(-α) (log x)^(m-1) / (m-1)!`.
///
/// This is an asymptote in `x`; the relative gap to the exact tail decays
/// like `1 / log x`. `m = 1` degenerates to `λ x^(-α)`.
pub fn product_tail_asymptotic(params: &PowerLawParams, m: usize, x: f64) -> Result<f64> {
    if !(1..=4).contains(&m) {
        return Err(Error::UnsupportedUniformity {
            m,
            context: "product tail asymptote is established for m in {2, 3, 4}",
        });
    }
    let floor = params.x0.powi(m as i32);
    if m >= 2 && x <= floor {
        return Err(Error::InvalidParams(format!(
            "product tail asymptote needs x > x0^m = {floor}, got {x}"
        )));
    }
    let (a, l) = (params.alpha, params.lambda);
    let k = (m - 1) as i32;
    let fact: f64 = (1..m).map(|i| i as f64).product();
    Ok(l.powi(m as i32) * a.powi(k) * x.powf(-a) * x.ln().powi(k) / fact)
}
