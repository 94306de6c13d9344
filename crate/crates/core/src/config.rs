//! TOML run configuration.
//!
//! Every field is optional in the file. Command-line flags are applied on
//! top through [`Overrides`], and the result is what every subcommand
//! resolves its model, experiment or comparison settings from. See
//! `configs/example.toml` for an annotated document.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::experiment::{ErConfig, ExperimentConfig};
use crate::powerlaw::{Body, PowerLawParams};
use crate::sampler::{Method, ModelConfig};
use crate::theory::Statistic;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub n: u32,
    pub m: usize,
    pub tau: f64,
    pub seed: u64,
    pub method: Method,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    pub weights: WeightsSection,
    pub experiment: ExperimentSection,
    pub er: ErSection,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            n: 100,
            m: 3,
            tau: 1.0,
            seed: 0,
            method: Method::Skip,
            out: None,
            weights: WeightsSection::default(),
            experiment: ExperimentSection::default(),
            er: ErSection::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct WeightsSection {
    pub alpha: f64,
    /// Defaults to `x0^alpha`, the pure Pareto value.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    pub x0: f64,
    pub body: Body,
}

impl Default for WeightsSection {
    fn default() -> Self {
        WeightsSection {
            alpha: 2.0,
            lambda: None,
            x0: 1.0,
            body: Body::PurePareto,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ExperimentSection {
    /// Defaults to `[weights.alpha]`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alphas: Option<Vec<f64>>,
    pub ns: Vec<u32>,
    pub reps: u32,
    pub statistics: Vec<Statistic>,
    pub record_timing: bool,
}

impl Default for ExperimentSection {
    fn default() -> Self {
        ExperimentSection {
            alphas: None,
            ns: vec![256, 512, 1024, 2048],
            reps: 10,
            statistics: vec![Statistic::Edges],
            record_timing: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ErSection {
    pub ns: Vec<u32>,
    pub c: f64,
    pub reps: u32,
}

impl Default for ErSection {
    fn default() -> Self {
        ErSection {
            ns: vec![128, 256, 512, 1024],
            c: 1.0,
            reps: 200,
        }
    }
}

/// Values given on the command line; each one replaces the file value.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub n: Option<u32>,
    pub m: Option<usize>,
    pub alpha: Option<f64>,
    pub lambda: Option<f64>,
    pub x0: Option<f64>,
    pub body: Option<Body>,
    pub tau: Option<f64>,
    pub seed: Option<u64>,
    pub reps: Option<u32>,
    pub method: Option<Method>,
    pub out: Option<PathBuf>,
}

impl RunConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        toml::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
    }

    /// The file at `path`, or the defaults, with `overrides` applied.
    pub fn resolve(path: Option<&Path>, overrides: &Overrides) -> Result<Self> {
        let mut cfg = match path {
            Some(p) => Self::load(p)?,
            None => Self::default(),
        };
        cfg.apply(overrides);
        Ok(cfg)
    }

    pub fn apply(&mut self, o: &Overrides) {
        if let Some(v) = o.n {
            self.n = v;
        }
        if let Some(v) = o.m {
            self.m = v;
        }
        if let Some(v) = o.alpha {
            self.weights.alpha = v;
            self.experiment.alphas = Some(vec![v]);
        }
        if let Some(v) = o.lambda {
            self.weights.lambda = Some(v);
        }
        if let Some(v) = o.x0 {
            self.weights.x0 = v;
        }
        if let Some(v) = o.body {
            self.weights.body = v;
        }
        if let Some(v) = o.tau {
            self.tau = v;
        }
        if let Some(v) = o.seed {
            self.seed = v;
        }
        if let Some(v) = o.reps {
            self.experiment.reps = v;
            self.er.reps = v;
        }
        if let Some(v) = o.method {
            self.method = v;
        }
        if let Some(v) = &o.out {
            self.out = Some(v.clone());
        }
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("run config serializes")
    }

    pub fn params(&self) -> Result<PowerLawParams> {
        let w = &self.weights;
        let lambda = match (w.lambda, w.body) {
            (Some(l), _) => l,
            (None, Body::PurePareto) => w.x0.powf(w.alpha),
            (None, Body::UniformBody) => {
                return Err(Error::Config("weights.lambda is required for the uniform body".into()))
            }
        };
        PowerLawParams::new(w.alpha, lambda, w.x0, w.body)
    }

    pub fn model(&self) -> Result<ModelConfig> {
        let c = ModelConfig::new(self.n, self.m, self.params()?, self.seed)
            .with_tau(self.tau)
            .with_method(self.method);
        c.validate()?;
        Ok(c)
    }

    pub fn experiment(&self) -> Result<ExperimentConfig> {
        let e = &self.experiment;
        let c = ExperimentConfig {
            alphas: e.alphas.clone().unwrap_or_else(|| vec![self.weights.alpha]),
            ns: e.ns.clone(),
            reps: e.reps,
            m: self.m,
            tau: self.tau,
            params: self.params()?,
            master_seed: self.seed,
            method: self.method,
            statistics: e.statistics.clone(),
            record_timing: e.record_timing,
        };
        c.validate()?;
        Ok(c)
    }

    pub fn er(&self) -> Result<ErConfig> {
        if self.m != 3 {
            return Err(Error::UnsupportedUniformity {
                m: self.m,
                context: "the uniform-model comparison is defined for m = 3",
            });
        }
        Ok(ErConfig {
            ns: self.er.ns.clone(),
            c: self.er.c,
            reps: self.er.reps,
            params: self.params()?.with_alpha(1.0)?,
            master_seed: self.seed,
        })
    }
}
