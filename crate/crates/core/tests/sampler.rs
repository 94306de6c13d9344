use std::collections::HashMap;

use hyperphase::powerlaw::mean;
use hyperphase::sampler::{
    edge_probability, naive_into, sample, sample_hypergraph, sample_weights, skip_into, EdgeCounter, EdgeSink,
};
use hyperphase::{Body, Method, ModelConfig, PowerLawParams, WeightAssignment};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use statrs::distribution::{ChiSquared, ContinuousCDF};

struct Tally(HashMap<Vec<u32>, u64>);

impl EdgeSink for Tally {
    fn push(&mut self, tuple: &[u32]) {
        *self.0.entry(tuple.to_vec()).or_default() += 1;
    }
}

fn subsets(n: u32, m: usize) -> Vec<Vec<u32>> {
    fn rec(start: u32, n: u32, m: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() == m {
            out.push(cur.clone());
            return;
        }
        for v in start..n {
            cur.push(v);
            rec(v + 1, n, m, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, m, &mut Vec::new(), &mut out);
    out
}

fn fixed_weights() -> WeightAssignment {
    WeightAssignment::supplied(vec![0.3, 0.7, 1.0, 1.6, 2.5, 4.0, 9.0, 30.0]).unwrap()
}

fn tally(method: Method, m: usize, reps: u64, seed: u64) -> HashMap<Vec<u32>, u64> {
    let p = PowerLawParams::pure_pareto(1.5, 1.0).unwrap();
    let c = ModelConfig::new(8, m, p, seed).with_method(method);
    let w = fixed_weights();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut t = Tally(HashMap::new());
    for _ in 0..reps {
        match method {
            Method::Naive => naive_into(&c, &w, &mut rng, &mut t).unwrap(),
            Method::Skip => {
                skip_into(&c, &w, &mut rng, &mut t).unwrap();
            }
        }
    }
    t.0
}

/// `Σ (c - R p)² / (R p (1 - p))` over all m-subsets, with its degrees of
/// freedom.
fn chi_square(counts: &HashMap<Vec<u32>, u64>, m: usize, reps: u64) -> (f64, f64) {
    let w = fixed_weights();
    let r = reps as f64;
    let mut stat = 0.0;
    let mut df = 0.0;
    for t in subsets(8, m) {
        let p = edge_probability(&w, &t, 8, 1.0).unwrap();
        let c = *counts.get(&t).unwrap_or(&0) as f64;
        stat += (c - r * p).powi(2) / (r * p * (1.0 - p));
        df += 1.0;
    }
    (stat, df)
}

#[test]
fn per_edge_frequencies_within_four_standard_errors() {
    let reps = 20_000;
    for method in [Method::Naive, Method::Skip] {
        let counts = tally(method, 3, reps, 11);
        let w = fixed_weights();
        for t in subsets(8, 3) {
            let p = edge_probability(&w, &t, 8, 1.0).unwrap();
            let f = *counts.get(&t).unwrap_or(&0) as f64 / reps as f64;
            let se = (p * (1.0 - p) / reps as f64).sqrt();
            assert!((f - p).abs() <= 4.0 * se, "{method:?} {t:?}: {f} vs {p}");
        }
    }
}

#[test]
fn chi_square_goodness_of_fit_for_each_uniformity() {
    for m in 2..=4 {
        for method in [Method::Naive, Method::Skip] {
            let reps = 20_000;
            let (stat, df) = chi_square(&tally(method, m, reps, 3 + m as u64), m, reps);
            let critical = ChiSquared::new(df).unwrap().inverse_cdf(1.0 - 1e-3);
            assert!(stat < critical, "m={m} {method:?}: {stat} >= {critical}");
        }
    }
}

#[test]
fn skip_work_is_linear_in_prefixes_plus_edges() {
    let p = PowerLawParams::pure_pareto(3.0, 1.0).unwrap();
    let n = 4096u32;
    let c = ModelConfig::new(n, 3, p, 1);
    let mut rng = c.rng();
    let w = sample_weights(&c, &mut rng);
    let mut acc = EdgeCounter::default();
    let stats = skip_into(&c, &w, &mut rng, &mut acc).unwrap();
    let nn = n as u64 * n as u64;
    assert_eq!(stats.accepted, acc.0);
    assert!(stats.candidates <= 5 * (nn + acc.0), "{stats:?}");
    assert!(stats.prefixes <= nn);
}

#[test]
fn conditional_unbiasedness_of_edge_count() {
    let p = PowerLawParams::new(0.7, 0.5, 1.0, Body::UniformBody).unwrap();
    let n = 40;
    for m in 2..=4 {
        let c = ModelConfig::new(n, m, p, 21);
        let mut rng = c.rng();
        let w = sample_weights(&c, &mut rng);
        let probs: Vec<f64> = subsets(n, m)
            .iter()
            .map(|t| edge_probability(&w, t, n, 1.0).unwrap())
            .collect();
        let expect: f64 = probs.iter().sum();
        let var: f64 = probs.iter().map(|p| p * (1.0 - p)).sum();
        let reps = 400;
        let mut total = 0u64;
        for _ in 0..reps {
            let mut acc = EdgeCounter::default();
            skip_into(&c, &w, &mut rng, &mut acc).unwrap();
            total += acc.0;
        }
        let mean = total as f64 / reps as f64;
        assert!(
            (mean - expect).abs() <= 4.0 * (var / reps as f64).sqrt(),
            "m={m}: {mean} vs {expect}"
        );
    }
}

#[test]
fn sampled_weight_mean_matches_law() {
    let p = PowerLawParams::pure_pareto(2.0, 1.0).unwrap();
    let c = ModelConfig::new(100_000, 3, p, 8);
    let w = sample_weights(&c, &mut c.rng());
    let m = w.weights().iter().sum::<f64>() / w.len() as f64;
    assert!((m / mean(&p).unwrap() - 1.0).abs() < 0.05, "{m}");
}

#[test]
fn same_seed_same_hypergraph() {
    let p = PowerLawParams::pure_pareto(1.2, 1.0).unwrap();
    for method in [Method::Naive, Method::Skip] {
        let c = ModelConfig::new(60, 3, p, 99).with_method(method);
        let (w1, h1) = sample(&c).unwrap();
        let (w2, h2) = sample(&c).unwrap();
        assert_eq!(w1, w2);
        assert_eq!(h1, h2);
        let other = ModelConfig { seed: 100, ..c };
        assert_ne!(sample(&other).unwrap().1, h1);
    }
}

#[test]
fn tau_kernel_thins_the_hypergraph() {
    let p = PowerLawParams::pure_pareto(0.5, 1.0).unwrap();
    let base = ModelConfig::new(300, 2, p, 4);
    let w = sample_weights(&base, &mut base.rng());
    let count = |tau: f64| {
        let c = base.with_tau(tau);
        sample_hypergraph(&c, &w, &mut ChaCha8Rng::seed_from_u64(5))
            .unwrap()
            .edge_count()
    };
    assert!(count(2.0) < count(1.0));
    assert!(!base.with_tau(2.0).outside_tau_regime());
    assert!(base.with_tau(2.5).outside_tau_regime());
}
