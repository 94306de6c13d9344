//! Sampling of the power-law random hypergraph.
//!
//! Given weights `W₁…W_n`, every m-subset `{i₁ < … < i_m}` is an edge
//! independently with probability `x / (n^τ + x)`, `x = W_{i₁}⋯W_{i_m}`.
//!
//! Two samplers produce this law:
//!
//! * [`Method::Naive`] enumerates every m-subset in colexicographic order and
//!   draws one uniform per subset. Guarded to at most `10⁸` candidates.
//! * [`Method::Skip`] sorts the weights in decreasing order and, for every
//!   `(m-1)`-prefix in lexicographic sorted order, walks the last coordinate
//!   with geometric jumps under the envelope `q = 1 - exp(-x / n^τ) ≥ p`. A
//!   geometric gap with that parameter is `⌊E · n^τ / x⌋` for `E ~ Exp(1)`.
//!   Each landed candidate is kept with probability `p / q`, and `q` is
//!   refreshed from the landed candidate. Along a walk the weights only decrease, so the
//!   envelope taken at one landing bounds every later candidate.
//!
//! The two agree in distribution, not per seed.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::Exp1;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hypergraph::{validate_tuple, Hypergraph};
use crate::math::binomial;
use crate::powerlaw::{sample_weight, PowerLawParams};

/// Upper limit on the number of candidates the naive sampler will visit.
pub const NAIVE_GUARD: u128 = 100_000_000;

/// The skip sampler tests candidates one by one while `x / n^τ` is at least
/// this large (envelope at least 1/2).
const DIRECT_TEST_RATE: f64 = std::f64::consts::LN_2;

/// Above this log-margin the edge probability is computed in logistic form.
const LOG_MARGIN: f64 = 50.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Naive,
    #[default]
    Skip,
}

impl std::str::FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "naive" => Ok(Method::Naive),
            "skip" => Ok(Method::Skip),
            other => Err(Error::Config(format!(
                "unknown sampler method `{other}` (expected `naive` or `skip`)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelConfig {
    pub n: u32,
    pub m: usize,
    pub tau: f64,
    pub params: PowerLawParams,
    pub seed: u64,
    pub method: Method,
}

impl ModelConfig {
    pub fn new(n: u32, m: usize, params: PowerLawParams, seed: u64) -> Self {
        ModelConfig {
            n,
            m,
            tau: 1.0,
            params,
            seed,
            method: Method::Skip,
        }
    }

    pub fn with_tau(mut self, tau: f64) -> Self {
        self.tau = tau;
        self
    }

    pub fn with_method(mut self, method: Method) -> Self {
        self.method = method;
        self
    }

    pub fn validate(&self) -> Result<()> {
        self.params.validate()?;
        if self.m < 2 {
            return Err(Error::UnsupportedUniformity {
                m: self.m,
                context: "hypergraphs need m >= 2",
            });
        }
        if (self.n as usize) < self.m {
            return Err(Error::InvalidParams(format!(
                "need n >= m, got n = {}, m = {}",
                self.n, self.m
            )));
        }
        if !(self.tau.is_finite() && self.tau > 0.0) {
            return Err(Error::InvalidParams(format!("tau must be positive, got {}", self.tau)));
        }
        Ok(())
    }

    /// True when `α < 1` and `τ > 1/α`, where the `n^τ` kernel has no
    /// established edge-count asymptotics. Such configs still run.
    pub fn outside_tau_regime(&self) -> bool {
        self.params.alpha < 1.0 && self.tau > 1.0 / self.params.alpha
    }

    /// The random stream for this config. Weights are drawn first, then the
    /// hypergraph, from this single stream.
    pub fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    Sampled(u64),
    Supplied,
}

#[derive(Debug, Clone, PartialEq)]
pub struct WeightAssignment {
    weights: Vec<f64>,
    provenance: Provenance,
}

impl WeightAssignment {
    pub fn supplied(weights: Vec<f64>) -> Result<Self> {
        if let Some((i, w)) = weights.iter().enumerate().find(|(_, w)| !(w.is_finite() && **w > 0.0)) {
            return Err(Error::InvalidParams(format!(
                "weight #{} must be positive and finite, got {w}",
                i + 1
            )));
        }
        Ok(WeightAssignment {
            weights,
            provenance: Provenance::Supplied,
        })
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    fn check_len(&self, n: u32) -> Result<()> {
        if self.weights.len() != n as usize {
            return Err(Error::InvalidParams(format!(
                "weight vector has length {}, expected n = {n}",
                self.weights.len()
            )));
        }
        Ok(())
    }
}

/// `n` i.i.d. weights, drawn in index order.
pub fn sample_weights<R: Rng + ?Sized>(config: &ModelConfig, rng: &mut R) -> WeightAssignment {
    let weights = (0..config.n).map(|_| sample_weight(&config.params, rng)).collect();
    WeightAssignment {
        weights,
        provenance: Provenance::Sampled(config.seed),
    }
}

/// `x / (n^τ + x)` for `x = ∏ W` over the tuple, without overflow.
pub fn edge_probability(weights: &WeightAssignment, tuple: &[u32], n: u32, tau: f64) -> Result<f64> {
    let w = weights.weights();
    if tuple.iter().any(|&i| i as usize >= w.len() || i >= n) {
        return Err(Error::InvalidTuple(format!(
            "index out of range in {tuple:?} (n = {n})"
        )));
    }
    for (k, i) in tuple.iter().enumerate() {
        if tuple[..k].contains(i) {
            return Err(Error::InvalidTuple(format!("repeated index {i} in {tuple:?}")));
        }
    }
    let log_nt = tau * (n as f64).ln();
    let s: f64 = tuple.iter().map(|&i| w[i as usize].ln()).sum();
    let d = s - log_nt;
    if d > LOG_MARGIN {
        return Ok(1.0 / (1.0 + (-d).exp()));
    }
    if d < -LOG_MARGIN {
        let e = d.exp();
        return Ok(e / (1.0 + e));
    }
    let x: f64 = tuple.iter().map(|&i| w[i as usize]).product();
    Ok(x / (log_nt.exp() + x))
}

/// `x / (nt + x)` written so that an infinite product gives 1 and an
/// infinite `nt` gives 0.
#[inline]
fn prob_from_product(x: f64, nt: f64) -> f64 {
    1.0 / (1.0 + nt / x)
}

/// Receives sampled edges as strictly increasing vertex tuples.
pub trait EdgeSink {
    fn push(&mut self, edge: &[u32]);
}

/// Counts edges without storing them.
#[derive(Debug, Default, Clone, Copy)]
pub struct EdgeCounter(pub u64);

impl EdgeSink for EdgeCounter {
    #[inline]
    fn push(&mut self, _edge: &[u32]) {
        self.0 += 1;
    }
}

/// Stores edges flat, in arrival order.
#[derive(Debug, Default, Clone)]
pub struct EdgeBuffer(pub Vec<u32>);

impl EdgeSink for EdgeBuffer {
    #[inline]
    fn push(&mut self, edge: &[u32]) {
        self.0.extend_from_slice(edge);
    }
}

impl<S: EdgeSink + ?Sized> EdgeSink for &mut S {
    #[inline]
    fn push(&mut self, edge: &[u32]) {
        (**self).push(edge)
    }
}

/// Work counters for the skip sampler.
#[derive(Debug, Default, Clone, Copy, PartialEq, Eq)]
pub struct SkipStats {
    /// `(m-1)`-prefixes walked.
    pub prefixes: u64,
    /// Candidates landed on and tested with `p / q`.
    pub candidates: u64,
    pub accepted: u64,
}

fn check_naive_guard(n: u32, m: usize) -> Result<()> {
    let candidates = binomial(n as u64, m as u64);
    if candidates > NAIVE_GUARD {
        return Err(Error::EnumerationGuard {
            candidates,
            limit: NAIVE_GUARD,
        });
    }
    Ok(())
}

/// Visits every m-subset in colex order, one uniform draw per subset.
pub fn naive_into<R: Rng + ?Sized, S: EdgeSink>(
    config: &ModelConfig,
    weights: &WeightAssignment,
    rng: &mut R,
    sink: &mut S,
) -> Result<()> {
    config.validate()?;
    weights.check_len(config.n)?;
    check_naive_guard(config.n, config.m)?;
    let (n, m) = (config.n, config.m);
    let w = weights.weights();
    let nt = (n as f64).powf(config.tau);

    let mut c: Vec<u32> = (0..m as u32).collect();
    loop {
        let x: f64 = c.iter().map(|&i| w[i as usize]).product();
        let u: f64 = rng.random();
        if u < prob_from_product(x, nt) {
            sink.push(&c);
        }
        // colex successor: bump the lowest position that has room
        let mut j = 0;
        loop {
            let limit = if j + 1 < m { c[j + 1] } else { n };
            if c[j] + 1 < limit {
                c[j] += 1;
                for (i, slot) in c.iter_mut().enumerate().take(j) {
                    *slot = i as u32;
                }
                break;
            }
            j += 1;
            if j == m {
                return Ok(());
            }
        }
    }
}

pub fn sample_hypergraph_naive<R: Rng + ?Sized>(
    config: &ModelConfig,
    weights: &WeightAssignment,
    rng: &mut R,
) -> Result<Hypergraph> {
    let mut buf = EdgeBuffer::default();
    naive_into(config, weights, rng, &mut buf)?;
    Ok(Hypergraph::from_flat_canonical_tuples(config.n, config.m, buf.0))
}

/// `1 - exp(-y)`, an upper bound on `y / (1 + y)`.
#[inline]
fn envelope(y: f64) -> f64 {
    -(-y).exp_m1()
}

struct SkipWalk<'a, R: ?Sized, S> {
    /// Weights in decreasing order.
    w: Vec<f64>,
    /// Original vertex of each sorted position; `None` emits positions.
    idx: Option<Vec<u32>>,
    nt: f64,
    inv_nt: f64,
    m: usize,
    rng: &'a mut R,
    sink: &'a mut S,
    prefix: [usize; 4],
    stats: SkipStats,
}

impl<R: Rng + ?Sized, S: EdgeSink> SkipWalk<'_, R, S> {
    fn prefixes(&mut self, depth: usize, start: usize, prod: f64) {
        let n = self.w.len();
        if depth == self.m - 1 {
            self.stats.prefixes += 1;
            self.last_coordinate(start, prod);
            return;
        }
        // leave room for the remaining m - 1 - depth coordinates
        let end = n - (self.m - 1 - depth);
        for a in start..end {
            self.prefix[depth] = a;
            self.prefixes(depth + 1, a + 1, prod * self.w[a]);
        }
    }

    #[inline]
    fn last_coordinate(&mut self, start: usize, prod: f64) {
        let n = self.w.len();
        let mut next = start;
        while next < n {
            let y = prod * self.w[next] * self.inv_nt;
            if y >= DIRECT_TEST_RATE {
                self.stats.candidates += 1;
                let u: f64 = self.rng.random();
                if u < prob_from_product(prod * self.w[next], self.nt) {
                    self.stats.accepted += 1;
                    self.emit(next);
                }
                next += 1;
                continue;
            }
            if !(y > 0.0) {
                return;
            }
            let e: f64 = self.rng.sample(Exp1);
            let jump = (e / y).floor();
            if jump >= (n - next) as f64 {
                return;
            }
            let cand = next + jump as usize;
            self.stats.candidates += 1;
            let u: f64 = self.rng.random();
            if u * envelope(y) < prob_from_product(prod * self.w[cand], self.nt) {
                self.stats.accepted += 1;
                self.emit(cand);
            }
            next = cand + 1;
        }
    }

    #[inline]
    fn emit(&mut self, last: usize) {
        let m = self.m;
        let mut t = [0u32; 4];
        t[..m - 1].copy_from_slice(&self.prefix.map(|v| v as u32)[..m - 1]);
        t[m - 1] = last as u32;
        let Some(idx) = &self.idx else {
            self.sink.push(&t[..m]);
            return;
        };
        for v in &mut t[..m] {
            *v = idx[*v as usize];
        }
        let t = &mut t[..m];
        for i in 1..m {
            let mut j = i;
            while j > 0 && t[j - 1] > t[j] {
                t.swap(j - 1, j);
                j -= 1;
            }
        }
        self.sink.push(t);
    }
}

/// Envelope-and-skip sampler; `m ∈ {2, 3, 4}`.
pub fn skip_into<R: Rng + ?Sized, S: EdgeSink>(
    config: &ModelConfig,
    weights: &WeightAssignment,
    rng: &mut R,
    sink: &mut S,
) -> Result<SkipStats> {
    skip_walk(config, weights, rng, sink, true)
}

/// [`skip_into`] with vertices relabelled by weight rank (0 = heaviest, ties
/// by index). Consumes the same draws and yields an isomorphic hypergraph,
/// so every label-free statistic agrees with [`skip_into`] for the same
/// stream. Tuples arrive in lexicographic order.
pub fn skip_into_by_rank<R: Rng + ?Sized, S: EdgeSink>(
    config: &ModelConfig,
    weights: &WeightAssignment,
    rng: &mut R,
    sink: &mut S,
) -> Result<SkipStats> {
    skip_walk(config, weights, rng, sink, false)
}

fn skip_walk<R: Rng + ?Sized, S: EdgeSink>(
    config: &ModelConfig,
    weights: &WeightAssignment,
    rng: &mut R,
    sink: &mut S,
    labelled: bool,
) -> Result<SkipStats> {
    config.validate()?;
    weights.check_len(config.n)?;
    if !(2..=4).contains(&config.m) {
        return Err(Error::UnsupportedUniformity {
            m: config.m,
            context: "the skip sampler supports m in {2, 3, 4}",
        });
    }
    let mut order: Vec<u32> = (0..config.n).collect();
    let src = weights.weights();
    // stable: ties keep index order
    order.sort_by(|&a, &b| src[b as usize].total_cmp(&src[a as usize]));
    let w: Vec<f64> = order.iter().map(|&i| src[i as usize]).collect();
    let nt = (config.n as f64).powf(config.tau);
    let mut walk = SkipWalk {
        w,
        idx: labelled.then_some(order),
        nt,
        inv_nt: 1.0 / nt,
        m: config.m,
        rng,
        sink,
        prefix: [0; 4],
        stats: SkipStats::default(),
    };
    walk.prefixes(0, 0, 1.0);
    Ok(walk.stats)
}

pub fn sample_hypergraph_skip<R: Rng + ?Sized>(
    config: &ModelConfig,
    weights: &WeightAssignment,
    rng: &mut R,
) -> Result<Hypergraph> {
    let mut buf = EdgeBuffer::default();
    skip_into(config, weights, rng, &mut buf)?;
    Ok(Hypergraph::from_flat_canonical_tuples(config.n, config.m, buf.0))
}

/// Dispatches on `config.method`.
pub fn sample_into<R: Rng + ?Sized, S: EdgeSink>(
    config: &ModelConfig,
    weights: &WeightAssignment,
    rng: &mut R,
    sink: &mut S,
) -> Result<()> {
    match config.method {
        Method::Naive => naive_into(config, weights, rng, sink),
        Method::Skip => skip_into(config, weights, rng, sink).map(|_| ()),
    }
}

pub fn sample_hypergraph<R: Rng + ?Sized>(
    config: &ModelConfig,
    weights: &WeightAssignment,
    rng: &mut R,
) -> Result<Hypergraph> {
    match config.method {
        Method::Naive => sample_hypergraph_naive(config, weights, rng),
        Method::Skip => sample_hypergraph_skip(config, weights, rng),
    }
}

/// Weights and hypergraph from the config's own stream.
pub fn sample(config: &ModelConfig) -> Result<(WeightAssignment, Hypergraph)> {
    config.validate()?;
    let mut rng = config.rng();
    let weights = sample_weights(config, &mut rng);
    let h = sample_hypergraph(config, &weights, &mut rng)?;
    Ok((weights, h))
}

/// Uniform random m-uniform hypergraph: every m-subset independently with
/// probability `p`. Lexicographic order with geometric jumps per
/// `(m-1)`-prefix.
pub fn erdos_renyi_into<R: Rng + ?Sized, S: EdgeSink>(
    n: u32,
    m: usize,
    p: f64,
    rng: &mut R,
    sink: &mut S,
) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParams(format!("p must lie in [0, 1], got {p}")));
    }
    if !(2..=4).contains(&m) || (n as usize) < m {
        return Err(Error::InvalidParams(format!(
            "need m in {{2, 3, 4}} and n >= m, got n = {n}, m = {m}"
        )));
    }
    if p == 0.0 {
        return Ok(());
    }
    let log_miss = (-p).ln_1p();
    let n = n as usize;
    let mut t = [0u32; 4];
    fn rec<R: Rng + ?Sized, S: EdgeSink>(
        depth: usize,
        start: usize,
        n: usize,
        m: usize,
        p: f64,
        log_miss: f64,
        t: &mut [u32; 4],
        rng: &mut R,
        sink: &mut S,
    ) {
        if depth == m - 1 {
            let mut next = start;
            while next < n {
                if p < 1.0 {
                    let e: f64 = rng.sample(Exp1);
                    let jump = (e / -log_miss).floor();
                    if jump >= (n - next) as f64 {
                        return;
                    }
                    next += jump as usize;
                }
                t[depth] = next as u32;
                sink.push(&t[..m]);
                next += 1;
            }
            return;
        }
        for a in start..n - (m - 1 - depth) {
            t[depth] = a as u32;
            rec(depth + 1, a + 1, n, m, p, log_miss, t, rng, sink);
        }
    }
    rec(0, 0, n, m, p, log_miss, &mut t, rng, sink);
    Ok(())
}

pub fn sample_erdos_renyi<R: Rng + ?Sized>(n: u32, m: usize, p: f64, rng: &mut R) -> Result<Hypergraph> {
    let mut buf = EdgeBuffer::default();
    erdos_renyi_into(n, m, p, rng, &mut buf)?;
    Ok(Hypergraph::from_flat_canonical_tuples(n, m, buf.0))
}

/// Checks a tuple against `n` and `m` (strictly increasing, in range).
pub fn check_tuple(n: u32, m: usize, tuple: &[u32]) -> Result<()> {
    validate_tuple(n, m, tuple)
}
