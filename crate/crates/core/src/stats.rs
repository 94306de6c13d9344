//! Hyperedge and loose 2-cycle counts.
//!
//! A loose 2-cycle is an unordered pair of distinct edges sharing exactly two
//! vertices. For `m = 3` it is counted through pair degrees: two distinct
//! 3-edges share at most one vertex pair, so `C₂ = Σ_pairs C(d, 2)`. For
//! `m = 4` pairs of edges meeting in three vertices are counted three times
//! by the pair sum and are removed with the triple degrees:
//! `C₂ = Σ_pairs C(d, 2) - 3 Σ_triples C(d, 2)`.

use std::collections::{BTreeMap, HashMap};

use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;
use crate::sampler::EdgeSink;

/// Largest edge set accepted by [`count_loose2_bruteforce`].
pub const BRUTE_FORCE_GUARD: usize = 100_000;

/// Pair tables up to this many slots are dense arrays, larger ones hash maps.
const DENSE_PAIR_SLOTS: u64 = 1 << 25;

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct MotifCounts {
    pub edge_count: u64,
    pub loose2_count: u128,
    /// Pair degree `d` to the number of vertex pairs with that degree,
    /// including `d = 0`.
    pub pair_degree_histogram: BTreeMap<u32, u64>,
}

pub fn count_hyperedges(h: &Hypergraph) -> u64 {
    h.edge_count() as u64
}

fn choose2(d: u64) -> u128 {
    let d = d as u128;
    d * d.saturating_sub(1) / 2
}

/// Size of the intersection of two strictly increasing tuples.
fn intersection_size(a: &[u32], b: &[u32]) -> usize {
    let (mut i, mut j, mut k) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                k += 1;
                i += 1;
                j += 1;
            }
        }
    }
    k
}

/// Checks every unordered pair of edges. Any `m`; `O(|E|²)`.
pub fn count_loose2_bruteforce(h: &Hypergraph) -> Result<u128> {
    let edges: Vec<&[u32]> = h.edges().collect();
    if edges.len() > BRUTE_FORCE_GUARD {
        return Err(Error::BruteForceGuard {
            edges: edges.len(),
            limit: BRUTE_FORCE_GUARD,
        });
    }
    let mut count = 0u128;
    for (i, a) in edges.iter().enumerate() {
        for b in &edges[i + 1..] {
            if intersection_size(a, b) == 2 {
                count += 1;
            }
        }
    }
    Ok(count)
}

fn check_loose2_uniformity(m: usize) -> Result<()> {
    match m {
        3 | 4 => Ok(()),
        2 => Err(Error::UnsupportedUniformity {
            m,
            context: "a loose 2-cycle in a graph is just an edge; counts need m >= 3",
        }),
        _ => Err(Error::UnsupportedUniformity {
            m,
            context: "loose 2-cycle counting via degrees supports m in {3, 4}",
        }),
    }
}

enum PairTable {
    /// Upper-triangular, row-major over `i < j`.
    Dense(Vec<u32>),
    /// Keyed by `i * n + j`.
    Sparse(HashMap<u64, u32>),
}

/// Streams edges and accumulates vertex-pair degrees (and, for `m = 4`,
/// vertex-triple degrees).
pub struct PairDegreeCounter {
    n: u64,
    m: usize,
    edges: u64,
    pairs: PairTable,
    triples: HashMap<u64, u32>,
}

impl PairDegreeCounter {
    pub fn new(n: u32, m: usize) -> Result<Self> {
        check_loose2_uniformity(m)?;
        let n = n as u64;
        let slots = n * n.saturating_sub(1) / 2;
        let pairs = if slots <= DENSE_PAIR_SLOTS {
            PairTable::Dense(vec![0; slots as usize])
        } else {
            PairTable::Sparse(HashMap::new())
        };
        Ok(PairDegreeCounter {
            n,
            m,
            edges: 0,
            pairs,
            triples: HashMap::new(),
        })
    }

    #[inline]
    fn bump_pair(&mut self, i: u32, j: u32) {
        let (i, j) = (i as u64, j as u64);
        match &mut self.pairs {
            PairTable::Dense(v) => {
                let row = i * (2 * self.n - i - 1) / 2;
                v[(row + (j - i - 1)) as usize] += 1;
            }
            PairTable::Sparse(map) => *map.entry(i * self.n + j).or_insert(0) += 1,
        }
    }

    pub fn edge_count(&self) -> u64 {
        self.edges
    }

    pub fn loose2_count(&self) -> u128 {
        let pair_sum: u128 = match &self.pairs {
            PairTable::Dense(v) => v.iter().map(|&d| choose2(d as u64)).sum(),
            PairTable::Sparse(map) => map.values().map(|&d| choose2(d as u64)).sum(),
        };
        let triple_sum: u128 = self.triples.values().map(|&d| choose2(d as u64)).sum();
        pair_sum - 3 * triple_sum
    }

    pub fn pair_degree_histogram(&self) -> BTreeMap<u32, u64> {
        let mut hist = BTreeMap::new();
        let mut nonzero = 0u64;
        let mut add = |d: u32| {
            if d > 0 {
                *hist.entry(d).or_insert(0) += 1;
                nonzero += 1;
            }
        };
        match &self.pairs {
            PairTable::Dense(v) => v.iter().for_each(|&d| add(d)),
            PairTable::Sparse(map) => map.values().for_each(|&d| add(d)),
        }
        let total = self.n * self.n.saturating_sub(1) / 2;
        if total > nonzero {
            hist.insert(0, total - nonzero);
        }
        hist
    }

    pub fn into_counts(self) -> MotifCounts {
        MotifCounts {
            edge_count: self.edges,
            loose2_count: self.loose2_count(),
            pair_degree_histogram: self.pair_degree_histogram(),
        }
    }
}

impl EdgeSink for PairDegreeCounter {
    #[inline]
    fn push(&mut self, e: &[u32]) {
        self.edges += 1;
        for a in 0..e.len() {
            for b in a + 1..e.len() {
                self.bump_pair(e[a], e[b]);
            }
        }
        if self.m == 4 {
            let n = self.n;
            for skip in 0..4 {
                let mut key = 0u64;
                for (k, &v) in e.iter().enumerate() {
                    if k != skip {
                        key = key * n + v as u64;
                    }
                }
                *self.triples.entry(key).or_insert(0) += 1;
            }
        }
    }
}

/// Loose 2-cycles from pair (and triple) degrees; `m ∈ {3, 4}`.
pub fn count_loose2_pairmap(h: &Hypergraph) -> Result<u128> {
    Ok(pair_degrees(h)?.loose2_count())
}

fn pair_degrees(h: &Hypergraph) -> Result<PairDegreeCounter> {
    let mut acc = PairDegreeCounter::new(h.n(), h.m())?;
    for e in h.edges() {
        acc.push(e);
    }
    Ok(acc)
}

/// Edge count, loose 2-cycle count and pair-degree histogram.
pub fn motif_counts(h: &Hypergraph) -> Result<MotifCounts> {
    Ok(pair_degrees(h)?.into_counts())
}
