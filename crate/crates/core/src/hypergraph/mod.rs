//! The sampled object: a `k`-uniform hypergraph on `[n]`.
//!
//! Edges are kept sorted by colex rank, which makes membership a binary search
//! and gives the text format a canonical line order.

mod components;
mod wheel;

pub use components::{j_components, ComponentSummary, Decomposition};
pub use wheel::{brute_force_wheel_census, find_wheel, ordered_wheel_count, Wheel};

use std::fmt::Write as _;
use std::io::{BufRead, Write};

use rand::Rng;
use rand_distr::Geometric;

use crate::combinatorics::{binomial_u64, colex_rank, colex_unrank_into, TheoryParams};
use crate::error::{Error, Result};
use crate::rng::rng_from_seed;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hypergraph {
    n: usize,
    k: usize,
    ranks: Vec<u64>,
    verts: Vec<u32>,
}

impl Hypergraph {
    /// Empty hypergraph; fails if `n < k`, `k < 1`, or `C(n, k)` overflows 64 bits.
    pub fn empty(n: usize, k: usize) -> Result<Self> {
        if k < 1 {
            return Err(Error::validation("k must be positive"));
        }
        if n < k {
            return Err(Error::validation(format!(
                "n = {n} is smaller than k = {k}"
            )));
        }
        if n > u32::MAX as usize {
            return Err(Error::validation("n exceeds the 32-bit vertex id range"));
        }
        binomial_u64(n as u64, k as u64)
            .ok_or_else(|| Error::validation(format!("C({n}, {k}) does not fit in 64 bits")))?;
        Ok(Hypergraph {
            n,
            k,
            ranks: Vec::new(),
            verts: Vec::new(),
        })
    }

    /// Builds a hypergraph from edges in any order. Each edge is sorted; duplicates
    /// and edges of the wrong cardinality are rejected.
    pub fn from_edges<I, E>(n: usize, k: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = E>,
        E: AsRef<[u32]>,
    {
        let mut h = Self::empty(n, k)?;
        let mut keyed: Vec<(u64, Vec<u32>)> = Vec::new();
        for e in edges {
            let mut e = e.as_ref().to_vec();
            e.sort_unstable();
            if e.len() != k {
                return Err(Error::validation(format!(
                    "edge {e:?} has {} vertices, expected {k}",
                    e.len()
                )));
            }
            if e.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::validation(format!("edge {e:?} repeats a vertex")));
            }
            if e[0] == 0 || e[k - 1] as usize > n {
                return Err(Error::validation(format!("edge {e:?} leaves [1, {n}]")));
            }
            keyed.push((colex_rank(&e), e));
        }
        keyed.sort_unstable_by_key(|(r, _)| *r);
        if keyed.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::validation("duplicate edge"));
        }
        for (r, e) in keyed {
            h.ranks.push(r);
            h.verts.extend_from_slice(&e);
        }
        Ok(h)
    }

    /// Samples `H^k(n, p)`: every `k`-set is an edge independently with
    /// probability `p`. Edge ranks are visited by geometric gap skipping, so the
    /// cost is proportional to the number of edges drawn, not to `C(n, k)`.
    pub fn sample(n: usize, k: usize, p: f64, seed: u64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::validation(format!("p = {p} must lie in [0, 1]")));
        }
        let mut h = Self::empty(n, k)?;
        if p == 0.0 {
            return Ok(h);
        }
        let total = binomial_u64(n as u64, k as u64).expect("checked in empty()");
        let gaps = Geometric::new(p).map_err(|e| Error::validation(e.to_string()))?;
        let mut rng = rng_from_seed(seed);
        let mut buf = vec![0u32; k];
        let mut next: u64 = 0;
        loop {
            let skip: u64 = rng.sample(gaps);
            let rank = match next.checked_add(skip) {
                Some(r) if r < total => r,
                _ => break,
            };
            colex_unrank_into(rank, n, &mut buf);
            h.ranks.push(rank);
            h.verts.extend_from_slice(&buf);
            next = rank + 1;
        }
        Ok(h)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Number of edges.
    pub fn len(&self) -> usize {
        self.ranks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ranks.is_empty()
    }

    /// The `i`-th edge in colex order.
    pub fn edge(&self, i: usize) -> &[u32] {
        &self.verts[i * self.k..(i + 1) * self.k]
    }

    pub fn edges(&self) -> impl ExactSizeIterator<Item = &[u32]> + '_ {
        self.verts.chunks_exact(self.k.max(1))
    }

    /// Colex ranks of the edges, strictly increasing.
    pub fn ranks(&self) -> &[u64] {
        &self.ranks
    }

    pub fn contains_rank(&self, rank: u64) -> bool {
        self.ranks.binary_search(&rank).is_ok()
    }

    /// Membership of a sorted `k`-set.
    pub fn contains(&self, kset: &[u32]) -> bool {
        kset.len() == self.k && self.contains_rank(colex_rank(kset))
    }

    /// Writes the text format: a header `n k m`, then one edge per line.
    pub fn write_text<W: Write>(&self, mut w: W) -> Result<()> {
        w.write_all(self.to_text().as_bytes())?;
        Ok(())
    }

    pub fn to_text(&self) -> String {
        let mut s = String::with_capacity(16 + self.verts.len() * 5);
        let _ = writeln!(s, "{} {} {}", self.n, self.k, self.len());
        for e in self.edges() {
            for (i, v) in e.iter().enumerate() {
                if i > 0 {
                    s.push(' ');
                }
                let _ = write!(s, "{v}");
            }
            s.push('\n');
        }
        s
    }

    /// Parses the text format. Vertices must be sorted within a line and lines
    /// must be in strictly increasing colex order.
    pub fn parse_text(text: &str) -> Result<Self> {
        Self::read_text(text.as_bytes())
    }

    pub fn read_text<R: BufRead>(r: R) -> Result<Self> {
        let mut lines = r.lines().enumerate().filter_map(|(i, l)| match l {
            Ok(l) if l.trim().is_empty() => None,
            other => Some((i + 1, other)),
        });
        let (hline, header) = lines.next().ok_or(Error::Parse {
            line: 1,
            msg: "missing header `n k m`".into(),
        })?;
        let header = header?;
        let nums = parse_numbers(&header, hline)?;
        let [n, k, m] = nums[..] else {
            return Err(Error::Parse {
                line: hline,
                msg: "header must be `n k m`".into(),
            });
        };
        let mut h = Self::empty(n as usize, k as usize).map_err(|e| Error::Parse {
            line: hline,
            msg: e.to_string(),
        })?;
        for (lineno, line) in lines {
            let line = line?;
            let e = parse_numbers(&line, lineno)?;
            let bad = |msg: String| Error::Parse { line: lineno, msg };
            if e.len() != h.k {
                return Err(bad(format!("expected {} vertices, found {}", h.k, e.len())));
            }
            if e.iter().any(|&v| v == 0 || v > h.n as u64) {
                return Err(bad(format!("vertex outside [1, {}]", h.n)));
            }
            if e.windows(2).any(|w| w[0] >= w[1]) {
                return Err(bad("vertices must be strictly increasing".into()));
            }
            let e: Vec<u32> = e.into_iter().map(|v| v as u32).collect();
            let rank = colex_rank(&e);
            if h.ranks.last().is_some_and(|&last| last >= rank) {
                return Err(bad(
                    "edges must be in strictly increasing colex order".into()
                ));
            }
            h.ranks.push(rank);
            h.verts.extend_from_slice(&e);
        }
        if h.len() as u64 != m {
            return Err(Error::Parse {
                line: hline,
                msg: format!("header announces {m} edges, found {}", h.len()),
            });
        }
        Ok(h)
    }
}

fn parse_numbers(line: &str, lineno: usize) -> Result<Vec<u64>> {
    line.split_whitespace()
        .map(|t| {
            t.parse::<u64>().map_err(|_| Error::Parse {
                line: lineno,
                msg: format!("not a non-negative integer: {t:?}"),
            })
        })
        .collect()
}

/// Samples `H^k(n, p)` at the model's subcritical `p = (1 - epsilon) p0`.
pub fn sample_hypergraph(params: &TheoryParams, seed: u64) -> Result<Hypergraph> {
    Hypergraph::sample(params.n, params.k, params.p, seed)
}
