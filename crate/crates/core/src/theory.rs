//! Leading-order growth of the hyperedge count `E_m` and of the expected
//! loose 2-cycle count `E(C₂)` as functions of `n`.
//!
//! Every prediction has the form `constant · n^a · (log n)^b` (natural log).
//! Where only the existence of a positive constant is known the constant is
//! `None`; callers test such regimes through the exponents alone.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::math::{binomial_f64, factorial};
use crate::powerlaw::{mean, second_moment, PowerLawParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, PartialOrd, Ord)]
#[serde(rename_all = "snake_case")]
pub enum Statistic {
    Edges,
    Loose2,
}

impl Statistic {
    pub fn name(self) -> &'static str {
        match self {
            Statistic::Edges => "edges",
            Statistic::Loose2 => "loose2",
        }
    }
}

impl std::str::FromStr for Statistic {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "edges" => Ok(Statistic::Edges),
            "loose2" => Ok(Statistic::Loose2),
            other => Err(Error::Config(format!(
                "unknown statistic `{other}` (expected `edges` or `loose2`)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Regime {
    /// `α > 1`: `E(W)^m / m! · n^(m-1)`.
    EdgeSupercritical,
    /// `α = 1`: `c · n^(m-1) (log n)^m`.
    EdgeCritical,
    /// `α < 1`: `n^(m-α) (log n)^(m-1)`, or `n^(m-ατ)` under the `n^τ` kernel.
    EdgeSubcritical,
    /// `α > 2`: `c₁ n²`.
    Loose2AlphaGT2,
    /// `α = 2`: `c₂ n² (log n)²`.
    Loose2AlphaEQ2,
    /// `α < 2`, `α ≠ 1`: `c₃ n^(4-α) log n`.
    Loose2Mid,
    /// `α = 1`: `c₄ n³ (log n)²`.
    Loose2AlphaEQ1,
}

impl Regime {
    pub fn label(self) -> &'static str {
        match self {
            Regime::EdgeSupercritical => "edge_supercritical",
            Regime::EdgeCritical => "edge_critical",
            Regime::EdgeSubcritical => "edge_subcritical",
            Regime::Loose2AlphaGT2 => "loose2_alpha_gt_2",
            Regime::Loose2AlphaEQ2 => "loose2_alpha_eq_2",
            Regime::Loose2Mid => "loose2_mid",
            Regime::Loose2AlphaEQ1 => "loose2_alpha_eq_1",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsymptoticPrediction {
    pub n_exponent: f64,
    pub log_exponent: f64,
    /// Leading coefficient of `n^a (log n)^b`, when known in closed form.
    pub constant: Option<f64>,
    /// Coefficient of an upper bound on the statistic, for regimes where
    /// only a bound is known.
    pub upper_bound_constant: Option<f64>,
    /// Whether the statistic is known to equal its leading term up to a
    /// `1 + o_p(1)` factor.
    pub concentration: bool,
    pub regime: Regime,
    /// Leading-order value at the requested `n`, when a constant is known.
    pub value: Option<f64>,
}

impl AsymptoticPrediction {
    fn new(n_exponent: f64, log_exponent: f64, constant: Option<f64>, regime: Regime) -> Self {
        AsymptoticPrediction {
            n_exponent,
            log_exponent,
            constant,
            upper_bound_constant: None,
            concentration: false,
            regime,
            value: None,
        }
    }

    /// `n^a (log n)^b` with this prediction's exponents.
    pub fn scale(&self, n: f64) -> f64 {
        n.powf(self.n_exponent) * n.ln().powf(self.log_exponent)
    }

    fn at(mut self, n: u64) -> Self {
        self.value = self.constant.map(|c| c * self.scale(n as f64));
        self
    }

    pub fn require_constant(&self) -> Result<f64> {
        self.constant
            .ok_or_else(|| Error::InvalidParams(format!("regime {} has no closed-form constant", self.regime.label())))
    }

    pub fn slopes(&self) -> (f64, f64) {
        (self.n_exponent, self.log_exponent)
    }
}

/// `π α^m λ^m / (sin(απ) m! (m-1)!)`, the `α < 1` edge constant.
pub fn subcritical_edge_constant(alpha: f64, lambda: f64, m: usize) -> f64 {
    let mi = m as i32;
    PI * alpha.powi(mi) * lambda.powi(mi) / ((alpha * PI).sin() * factorial(m as u32) * factorial(m as u32 - 1))
}

fn edge_prediction(params: &PowerLawParams, m: usize) -> Result<AsymptoticPrediction> {
    let alpha = params.alpha;
    if m < 2 {
        return Err(Error::UnsupportedUniformity {
            m,
            context: "edge-count asymptotics need m >= 2",
        });
    }
    if alpha <= 1.0 && m > 4 {
        return Err(Error::UnsupportedUniformity {
            m,
            context: "edge-count asymptotics for alpha <= 1 are established for m in {2, 3, 4}",
        });
    }
    let mf = m as f64;
    let mut p = if alpha > 1.0 {
        let ew = mean(params)?;
        AsymptoticPrediction::new(
            mf - 1.0,
            0.0,
            Some(ew.powi(m as i32) / factorial(m as u32)),
            Regime::EdgeSupercritical,
        )
    } else if alpha == 1.0 {
        AsymptoticPrediction::new(mf - 1.0, mf, None, Regime::EdgeCritical)
    } else {
        AsymptoticPrediction::new(
            mf - alpha,
            mf - 1.0,
            Some(subcritical_edge_constant(alpha, params.lambda, m)),
            Regime::EdgeSubcritical,
        )
    };
    p.concentration = true;
    Ok(p)
}

/// Hyperedge count under the standard `n` kernel.
pub fn predict_edge_count(params: &PowerLawParams, m: usize, n: u64) -> Result<AsymptoticPrediction> {
    Ok(edge_prediction(params, m)?.at(n))
}

/// `π α^m τ^(m-1) λ^m / (sin(απ) (m-1)!)`, the `n^τ`-kernel edge constant.
pub fn tau_edge_constant(alpha: f64, lambda: f64, m: usize, tau: f64) -> f64 {
    let mi = m as i32;
    PI * alpha.powi(mi) * tau.powi(mi - 1) * lambda.powi(mi) / ((alpha * PI).sin() * factorial(m as u32 - 1))
}

fn check_tau(params: &PowerLawParams, m: usize, tau: f64) -> Result<()> {
    if !(2..=4).contains(&m) {
        return Err(Error::UnsupportedUniformity {
            m,
            context: "n^tau kernel asymptotics are established for m in {2, 3, 4}",
        });
    }
    if params.alpha >= 1.0 {
        return Err(Error::InvalidParams(format!(
            "n^tau kernel asymptotics need alpha < 1, got {}",
            params.alpha
        )));
    }
    if !(tau > 0.0 && tau <= 1.0 / params.alpha) {
        return Err(Error::InvalidParams(format!(
            "n^tau kernel asymptotics need 0 < tau <= 1/alpha = {}, got {tau}",
            1.0 / params.alpha
        )));
    }
    Ok(())
}

fn edge_prediction_tau(params: &PowerLawParams, m: usize, tau: f64) -> Result<AsymptoticPrediction> {
    check_tau(params, m, tau)?;
    let k = tau_edge_constant(params.alpha, params.lambda, m, tau);
    let mf = m as f64;
    let mut p = AsymptoticPrediction::new(
        mf - params.alpha * tau,
        mf - 1.0,
        // C(n, m) ~ n^m / m!
        Some(k / factorial(m as u32)),
        Regime::EdgeSubcritical,
    );
    p.concentration = true;
    Ok(p)
}

/// Hyperedge count under the `n^τ` kernel, `α < 1`, `τ ≤ 1/α`.
///
/// `value` is `K · C(n, m) · n^(-ατ) · (log n)^(m-1)` with
/// [`tau_edge_constant`] `K`; `constant` is `K / m!`, the coefficient of
/// `n^(m-ατ) (log n)^(m-1)`.
pub fn predict_edge_count_tau(params: &PowerLawParams, m: usize, tau: f64, n: u64) -> Result<AsymptoticPrediction> {
    let mut p = edge_prediction_tau(params, m, tau)?;
    let k = tau_edge_constant(params.alpha, params.lambda, m, tau);
    let nf = n as f64;
    p.value = Some(k * binomial_f64(nf, m as u32) * nf.powf(-params.alpha * tau) * nf.ln().powi(m as i32 - 1));
    Ok(p)
}

fn loose2_prediction(params: &PowerLawParams) -> Result<AsymptoticPrediction> {
    let alpha = params.alpha;
    let mut p = if alpha > 2.0 {
        let mut p = AsymptoticPrediction::new(2.0, 0.0, None, Regime::Loose2AlphaGT2);
        let (ew, ew2) = (mean(params)?, second_moment(params)?);
        // 6 C(n,4) / n² ~ n² / 4
        p.upper_bound_constant = Some(ew * ew * ew2 * ew2 / 4.0);
        p
    } else if alpha == 2.0 {
        AsymptoticPrediction::new(2.0, 2.0, None, Regime::Loose2AlphaEQ2)
    } else if alpha == 1.0 {
        AsymptoticPrediction::new(3.0, 2.0, None, Regime::Loose2AlphaEQ1)
    } else {
        AsymptoticPrediction::new(4.0 - alpha, 1.0, None, Regime::Loose2Mid)
    };
    p.concentration = alpha > 3.0 || alpha <= 1.0;
    Ok(p)
}

/// Expected loose 2-cycle count for `m = 3`.
pub fn predict_loose2(params: &PowerLawParams, n: u64) -> Result<AsymptoticPrediction> {
    Ok(loose2_prediction(params)?.at(n))
}

/// Upper bound on `E(C₂)` for `α > 2`, `m = 3`:
/// `6 C(n, 4) · E(W)² E(W²)² / n²`.
pub fn loose2_upper_bound(params: &PowerLawParams, n: u64) -> Result<f64> {
    let (ew, ew2) = (mean(params)?, second_moment(params)?);
    let nf = n as f64;
    Ok(6.0 * binomial_f64(nf, 4) * ew * ew * ew2 * ew2 / (nf * nf))
}

/// `E(C₂)` of the uniform random 3-uniform hypergraph with edge probability
/// `p`: every 4-set carries 6 ordered configurations of two triples
/// sharing a pair.
pub fn er_loose2_expectation(n: u64, p: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParams(format!("p must lie in [0, 1], got {p}")));
    }
    Ok(6.0 * binomial_f64(n as f64, 4) * p * p)
}

/// `(n_exponent, log_exponent)` of the statistic's leading term.
pub fn theoretical_slopes(params: &PowerLawParams, statistic: Statistic, m: usize) -> Result<(f64, f64)> {
    match statistic {
        Statistic::Edges => Ok(edge_prediction(params, m)?.slopes()),
        Statistic::Loose2 => {
            if m != 3 {
                return Err(Error::UnsupportedUniformity {
                    m,
                    context: "loose 2-cycle asymptotics are established for m = 3",
                });
            }
            Ok(loose2_prediction(params)?.slopes())
        }
    }
}

/// Prediction without an evaluated value, honoring a non-unit kernel
/// exponent for the edge count.
pub fn prediction_for(
    params: &PowerLawParams,
    statistic: Statistic,
    m: usize,
    tau: f64,
) -> Result<AsymptoticPrediction> {
    match statistic {
        Statistic::Edges if tau != 1.0 => edge_prediction_tau(params, m, tau),
        Statistic::Edges => edge_prediction(params, m),
        Statistic::Loose2 => {
            if tau != 1.0 {
                return Err(Error::InvalidParams(
                    "loose 2-cycle asymptotics are established for tau = 1 only".into(),
                ));
            }
            theoretical_slopes(params, statistic, m)?;
            loose2_prediction(params)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::powerlaw::Body;

    fn pareto(alpha: f64) -> PowerLawParams {
        PowerLawParams::pure_pareto(alpha, 1.0).unwrap()
    }

    fn close(a: f64, b: f64, rel: f64) -> bool {
        ((a - b) / b).abs() <= rel
    }

    #[test]
    fn edge_examples() {
        let p = predict_edge_count(&pareto(2.0), 3, 100).unwrap();
        assert_eq!(p.slopes(), (2.0, 0.0));
        assert!(close(p.constant.unwrap(), 4.0 / 3.0, 1e-15));
        assert!(close(p.value.unwrap(), 4.0 / 3.0 * 1e4, 1e-12));
        assert_eq!(p.regime, Regime::EdgeSupercritical);

        let p = predict_edge_count(&pareto(0.5), 2, 100).unwrap();
        assert_eq!(p.slopes(), (1.5, 1.0));
        assert!(close(p.constant.unwrap(), PI / 8.0, 1e-15));

        let p = predict_edge_count(&pareto(1.0), 3, 100).unwrap();
        assert_eq!(p.slopes(), (2.0, 3.0));
        assert!(p.constant.is_none());
        assert!(p.value.is_none());
        assert!(p.require_constant().is_err());

        assert!(predict_edge_count(&pareto(0.5), 5, 100).is_err());
        assert!(predict_edge_count(&pareto(1.0), 5, 100).is_err());
        assert!(predict_edge_count(&pareto(3.0), 7, 100).is_ok());
        assert!(predict_edge_count(&pareto(3.0), 1, 100).is_err());
    }

    #[test]
    fn subcritical_constant_positive_on_grid() {
        for k in 1..100 {
            let alpha = k as f64 / 100.0;
            for m in 2..=4 {
                let c = subcritical_edge_constant(alpha, 1.0, m);
                assert!(c.is_finite() && c > 0.0, "alpha={alpha} m={m}");
            }
        }
    }

    #[test]
    fn tau_examples() {
        let p = predict_edge_count_tau(&pareto(0.5), 2, 2.0, 10_000).unwrap();
        let want = PI * 0.25 * 2.0 * binomial_f64(1e4, 2) * 1e-4 * 1e4f64.ln();
        assert!(close(p.value.unwrap(), want, 1e-13));
        assert!(close(p.value.unwrap(), 72_335.0, 1e-3), "{}", p.value.unwrap());
        assert_eq!(p.slopes(), (1.0, 1.0));

        assert!(predict_edge_count_tau(&pareto(0.5), 2, 3.0, 100).is_err());
        assert!(predict_edge_count_tau(&pareto(1.5), 2, 0.5, 100).is_err());
        assert!(predict_edge_count_tau(&pareto(0.5), 5, 1.0, 100).is_err());
    }

    #[test]
    fn tau_one_reduces_to_standard_kernel() {
        let params = [
            pareto(0.3),
            pareto(0.5),
            PowerLawParams::new(0.8, 0.5, 1.0, Body::UniformBody).unwrap(),
        ];
        for p in &params {
            for m in 2..=4 {
                for &n in &[100u64, 1000, 12_345, 1 << 20] {
                    let a = predict_edge_count_tau(p, m, 1.0, n).unwrap().value.unwrap();
                    let b = predict_edge_count(p, m, n).unwrap().value.unwrap();
                    let rel = ((a - b) / b).abs();
                    assert!(rel <= (m * m) as f64 / n as f64, "m={m} n={n} rel={rel}");
                }
                // the coefficient itself matches exactly
                let a = predict_edge_count_tau(p, m, 1.0, 10).unwrap().constant.unwrap();
                let b = predict_edge_count(p, m, 10).unwrap().constant.unwrap();
                assert!(close(a, b, 1e-14));
            }
        }
    }

    #[test]
    fn loose2_examples() {
        let p = predict_loose2(&pareto(4.0), 10).unwrap();
        assert_eq!(p.slopes(), (2.0, 0.0));
        assert!(p.concentration);
        assert!(p.constant.is_none());
        // E W = 4/3, E W² = 2
        assert!(close(p.upper_bound_constant.unwrap(), 16.0 / 9.0 * 4.0 / 4.0, 1e-14));

        let p = predict_loose2(&pareto(1.5), 10).unwrap();
        assert_eq!(p.slopes(), (2.5, 1.0));
        assert!(!p.concentration);

        let p = predict_loose2(&pareto(1.0), 10).unwrap();
        assert_eq!(p.slopes(), (3.0, 2.0));
        assert!(p.concentration);

        let p = predict_loose2(&pareto(2.0), 10).unwrap();
        assert_eq!(p.slopes(), (2.0, 2.0));
        assert!(!p.concentration);

        assert!(!predict_loose2(&pareto(2.5), 10).unwrap().concentration);
        assert!(predict_loose2(&pareto(0.5), 10).unwrap().concentration);
        assert_eq!(predict_loose2(&pareto(0.5), 10).unwrap().slopes(), (3.5, 1.0));
    }

    #[test]
    fn upper_bound_matches_constant_asymptotically() {
        let p = pareto(4.0);
        let c = predict_loose2(&p, 10).unwrap().upper_bound_constant.unwrap();
        let n = 1u64 << 20;
        let b = loose2_upper_bound(&p, n).unwrap();
        assert!(close(b / (n as f64).powi(2), c, 1e-5));
        assert!(loose2_upper_bound(&pareto(2.0), n).is_err());
    }

    #[test]
    fn er_expectation() {
        assert_eq!(er_loose2_expectation(4, 1.0).unwrap(), 6.0);
        assert_eq!(er_loose2_expectation(50, 0.0).unwrap(), 0.0);
        assert!(er_loose2_expectation(5, -0.1).is_err());
        assert!(er_loose2_expectation(5, 1.1).is_err());
    }

    #[test]
    fn er_with_matched_edge_count_grows_like_n2_log6() {
        // p = n² (log n)³ / C(n,3): E(C₂) / (n² (log n)⁶) → 6 · 6² / 24 = 9
        let ratio = |n: f64| {
            let p = n * n * n.ln().powi(3) / binomial_f64(n, 3);
            er_loose2_expectation(n as u64, p).unwrap() / (n * n * n.ln().powi(6))
        };
        assert!(close(ratio(1e7), 9.0, 1e-5));
    }

    #[test]
    fn slopes_delegate() {
        assert_eq!(
            theoretical_slopes(&pareto(3.0), Statistic::Edges, 3).unwrap(),
            (2.0, 0.0)
        );
        assert_eq!(
            theoretical_slopes(&pareto(0.5), Statistic::Edges, 2).unwrap(),
            (1.5, 1.0)
        );
        assert_eq!(
            theoretical_slopes(&pareto(2.0), Statistic::Loose2, 3).unwrap(),
            (2.0, 2.0)
        );
        assert!(theoretical_slopes(&pareto(2.0), Statistic::Loose2, 4).is_err());
        let p = prediction_for(&pareto(0.5), Statistic::Edges, 2, 2.0).unwrap();
        assert_eq!(p.slopes(), (1.0, 1.0));
        assert!(prediction_for(&pareto(1.5), Statistic::Edges, 2, 2.0).is_err());
        assert!(prediction_for(&pareto(1.5), Statistic::Loose2, 3, 2.0).is_err());
    }

    #[test]
    fn jumps_at_critical_alphas() {
        let eps = 1e-6;
        for m in 2..=4usize {
            let mf = m as f64;
            let below = theoretical_slopes(&pareto(1.0 - eps), Statistic::Edges, m).unwrap();
            let at = theoretical_slopes(&pareto(1.0), Statistic::Edges, m).unwrap();
            let above = theoretical_slopes(&pareto(1.0 + eps), Statistic::Edges, m).unwrap();
            // n-exponent continuous, log-exponent jumps m-1 -> m -> 0
            assert!((below.0 - above.0 - eps).abs() < 1e-12);
            assert_eq!(at.0, mf - 1.0);
            assert_eq!((below.1, at.1, above.1), (mf - 1.0, mf, 0.0));
        }

        let s = |a: f64| theoretical_slopes(&pareto(a), Statistic::Loose2, 3).unwrap();
        // alpha = 1: (3 ± eps, 1) on both sides, (3, 2) at the point
        assert!((s(1.0 - eps).0 - s(1.0 + eps).0 - 2.0 * eps).abs() < 1e-12);
        assert_eq!((s(1.0 - eps).1, s(1.0).1, s(1.0 + eps).1), (1.0, 2.0, 1.0));
        // alpha = 2: log-exponent 1 -> 2 -> 0
        assert!((s(2.0 - eps).0 - 2.0 - eps).abs() < 1e-12);
        assert_eq!(s(2.0 + eps).0, 2.0);
        assert_eq!((s(2.0 - eps).1, s(2.0).1, s(2.0 + eps).1), (1.0, 2.0, 0.0));

        // continuity inside regimes
        for w in [(0.3, 0.3 + eps), (1.4, 1.4 + eps)] {
            for st in [Statistic::Edges, Statistic::Loose2] {
                let a = theoretical_slopes(&pareto(w.0), st, 3).unwrap();
                let b = theoretical_slopes(&pareto(w.1), st, 3).unwrap();
                assert!((a.0 - b.0).abs() <= eps + 1e-12 && a.1 == b.1);
            }
        }
    }
}
