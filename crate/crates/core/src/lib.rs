//! Power-law random m-uniform hypergraphs.
//!
//! Each vertex carries an i.i.d. weight with tail `P(W > x) = λ x^(-α)`, and
//! each m-subset becomes an edge independently with probability
//! `W_{i₁}⋯W_{i_m} / (n^τ + W_{i₁}⋯W_{i_m})` (`τ = 1` by default).
//!
//! * [`powerlaw`]: the weight law, sampling, moments, product tails
//! * [`sampler`]: naive and envelope-and-skip hypergraph samplers
//! * [`stats`]: hyperedge and loose 2-cycle counts
//! * [`theory`]: leading-order growth predictions per `α` regime
//! * [`experiment`]: Monte Carlo sweeps and scaling-exponent fits
//! * [`cli`]: the `hyperphase` command-line front end

pub mod cli;
pub mod config;
pub mod error;
pub mod experiment;
pub mod hypergraph;
pub mod math;
pub mod powerlaw;
pub mod sampler;
pub mod stats;
pub mod theory;

pub use error::{Error, Result};
pub use hypergraph::Hypergraph;
pub use powerlaw::{Body, PowerLawParams};
pub use sampler::{Method, ModelConfig, WeightAssignment};
pub use stats::MotifCounts;
pub use theory::{AsymptoticPrediction, Regime, Statistic};
