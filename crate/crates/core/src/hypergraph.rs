//! Realized m-uniform hypergraphs and their text file formats.
//!
//! Vertices are 0-based internally and 1-based on disk. Edges are stored flat
//! (`m` indices per edge), each tuple strictly increasing, tuples in
//! lexicographic order with no duplicates.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hypergraph {
    n: u32,
    m: usize,
    edges: Vec<u32>,
}

impl Hypergraph {
    pub fn empty(n: u32, m: usize) -> Self {
        Hypergraph {
            n,
            m,
            edges: Vec::new(),
        }
    }

    /// Builds from explicit tuples, which must already be canonical:
    /// strictly increasing, in range and pairwise distinct. Tuple order is free.
    pub fn from_tuples<T: AsRef<[u32]>>(n: u32, m: usize, tuples: &[T]) -> Result<Self> {
        check_shape(n, m)?;
        let mut flat = Vec::with_capacity(tuples.len() * m);
        for t in tuples {
            let t = t.as_ref();
            validate_tuple(n, m, t)?;
            flat.extend_from_slice(t);
        }
        let h = Self::from_flat_canonical_tuples(n, m, flat);
        h.check_no_duplicates()?;
        Ok(h)
    }

    /// Flat tuples that are individually sorted but in arbitrary order.
    pub(crate) fn from_flat_canonical_tuples(n: u32, m: usize, mut flat: Vec<u32>) -> Self {
        debug_assert_eq!(flat.len() % m, 0);
        let count = flat.len() / m;
        let mut order: Vec<usize> = (0..count).collect();
        order.sort_unstable_by(|&a, &b| flat[a * m..a * m + m].cmp(&flat[b * m..b * m + m]));
        if order.iter().enumerate().any(|(i, &o)| i != o) {
            let mut sorted = Vec::with_capacity(flat.len());
            for o in order {
                sorted.extend_from_slice(&flat[o * m..o * m + m]);
            }
            flat = sorted;
        }
        Hypergraph { n, m, edges: flat }
    }

    fn check_no_duplicates(&self) -> Result<()> {
        let m = self.m;
        for (i, w) in self.edges.chunks_exact(m).collect::<Vec<_>>().windows(2).enumerate() {
            if w[0] == w[1] {
                return Err(Error::InvalidTuple(format!(
                    "duplicate edge {} (edge #{})",
                    one_based(w[1]),
                    i + 2
                )));
            }
        }
        Ok(())
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len() / self.m
    }

    pub fn edges(&self) -> std::slice::ChunksExact<'_, u32> {
        self.edges.chunks_exact(self.m)
    }

    pub fn contains(&self, tuple: &[u32]) -> bool {
        let m = self.m;
        let count = self.edge_count();
        let (mut lo, mut hi) = (0, count);
        while lo < hi {
            let mid = (lo + hi) / 2;
            match self.edges[mid * m..mid * m + m].cmp(tuple) {
                std::cmp::Ordering::Less => lo = mid + 1,
                std::cmp::Ordering::Greater => hi = mid,
                std::cmp::Ordering::Equal => return true,
            }
        }
        false
    }

    /// Adds a canonical tuple, keeping the edge list sorted. Returns false if
    /// the edge was already present.
    pub fn insert(&mut self, tuple: &[u32]) -> Result<bool> {
        validate_tuple(self.n, self.m, tuple)?;
        let m = self.m;
        let pos = {
            let chunks: Vec<&[u32]> = self.edges.chunks_exact(m).collect();
            match chunks.binary_search(&tuple) {
                Ok(_) => return Ok(false),
                Err(p) => p,
            }
        };
        self.edges.splice(pos * m..pos * m, tuple.iter().copied());
        Ok(true)
    }

    /// Text form: header `m n edge_count`, then one 1-based edge per line.
    pub fn to_text(&self) -> String {
        let mut out = String::with_capacity(16 + self.edges.len() * 7);
        let _ = writeln!(out, "{} {} {}", self.m, self.n, self.edge_count());
        for e in self.edges() {
            for (i, v) in e.iter().enumerate() {
                if i > 0 {
                    out.push(' ');
                }
                let _ = write!(out, "{}", v + 1);
            }
            out.push('\n');
        }
        out
    }

    pub fn parse(text: &str, source: &str) -> Result<Self> {
        let perr = |line: usize, msg: String| Error::Parse {
            path: source.to_string(),
            line,
            msg,
        };
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

        let (hline, header) = lines
            .next()
            .ok_or_else(|| perr(1, "missing header `m n edge_count`".into()))?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        if fields.len() != 3 {
            return Err(perr(hline, format!("header must be `m n edge_count`, got `{header}`")));
        }
        let num = |s: &str, what: &str| -> Result<u64> {
            s.parse::<u64>()
                .map_err(|_| perr(hline, format!("{what} is not a non-negative integer: `{s}`")))
        };
        let m = num(fields[0], "m")? as usize;
        let n = num(fields[1], "n")?;
        let declared = num(fields[2], "edge_count")? as usize;
        if n > u32::MAX as u64 {
            return Err(perr(hline, format!("n = {n} too large")));
        }
        let n = n as u32;
        check_shape(n, m).map_err(|e| perr(hline, e.to_string()))?;

        let reserve = declared.min(1 << 20);
        let mut flat = Vec::with_capacity(reserve * m);
        let mut tuple = Vec::with_capacity(m);
        let mut seen = std::collections::HashMap::with_capacity(reserve);
        let mut found = 0usize;
        for (ln, l) in lines {
            tuple.clear();
            for tok in l.split_whitespace() {
                let v: u64 = tok
                    .parse()
                    .map_err(|_| perr(ln, format!("index is not an integer: `{tok}`")))?;
                if v == 0 || v > n as u64 {
                    return Err(perr(ln, format!("out-of-range index {v} (valid: 1..={n})")));
                }
                tuple.push((v - 1) as u32);
            }
            if tuple.len() != m {
                return Err(perr(ln, format!("edge has {} indices, expected m = {m}", tuple.len())));
            }
            if tuple.windows(2).any(|w| w[0] >= w[1]) {
                return Err(perr(
                    ln,
                    format!("unsorted tuple `{l}` (indices must be strictly increasing)"),
                ));
            }
            if let Some(first) = seen.insert(tuple.clone(), ln) {
                return Err(perr(ln, format!("duplicate edge `{l}` (first seen on line {first})")));
            }
            flat.extend_from_slice(&tuple);
            found += 1;
        }
        let h = Self::from_flat_canonical_tuples(n, m, flat);
        if found != declared {
            return Err(perr(
                hline,
                format!("header declares {declared} edges, file has {found}"),
            ));
        }
        Ok(h)
    }

    pub fn write_file(&self, path: &Path) -> Result<()> {
        fs::write(path, self.to_text()).map_err(|e| Error::io(path, e))
    }

    pub fn read_file(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text, &path.display().to_string())
    }
}

fn check_shape(n: u32, m: usize) -> Result<()> {
    if m < 2 {
        return Err(Error::UnsupportedUniformity {
            m,
            context: "hypergraphs need m >= 2",
        });
    }
    if (n as usize) < m {
        return Err(Error::InvalidParams(format!("need n >= m, got n = {n}, m = {m}")));
    }
    Ok(())
}

pub(crate) fn validate_tuple(n: u32, m: usize, t: &[u32]) -> Result<()> {
    if t.len() != m {
        return Err(Error::InvalidTuple(format!(
            "tuple {:?} has {} entries, expected {m}",
            t,
            t.len()
        )));
    }
    if let Some(&v) = t.iter().find(|&&v| v >= n) {
        return Err(Error::InvalidTuple(format!(
            "out-of-range index {v} (0-based, n = {n})"
        )));
    }
    if t.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidTuple(format!("tuple {t:?} is not strictly increasing")));
    }
    Ok(())
}

fn one_based(t: &[u32]) -> String {
    t.iter().map(|v| (v + 1).to_string()).collect::<Vec<_>>().join(" ")
}

/// Writes one weight per line with 17 significant digits.
pub fn weights_to_text(weights: &[f64]) -> String {
    let mut out = String::with_capacity(weights.len() * 24);
    for w in weights {
        let _ = writeln!(out, "{w:.16e}");
    }
    out
}

pub fn parse_weights(text: &str, source: &str) -> Result<Vec<f64>> {
    let mut out = Vec::new();
    for (i, l) in text.lines().enumerate() {
        let l = l.trim();
        if l.is_empty() || l.starts_with('#') {
            continue;
        }
        let w: f64 = l.parse().map_err(|_| Error::Parse {
            path: source.to_string(),
            line: i + 1,
            msg: format!("not a number: `{l}`"),
        })?;
        if !(w.is_finite() && w > 0.0) {
            return Err(Error::Parse {
                path: source.to_string(),
                line: i + 1,
                msg: format!("weight must be positive and finite, got {w}"),
            });
        }
        out.push(w);
    }
    Ok(out)
}
