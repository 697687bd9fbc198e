use std::collections::{HashMap, VecDeque};
use std::fmt::Write as _;

use rand::seq::SliceRandom;

use crate::combinatorics::{colex_rank, for_each_subset_of, for_each_superset};
use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;
use crate::rng::rng_from_seed;

/// Whether a tree or trace vertex stands for a `j`-set or a `k`-set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Kind {
    J,
    K,
}

impl Kind {
    pub fn tag(self) -> char {
        match self {
            Kind::J => 'J',
            Kind::K => 'K',
        }
    }
}

/// One element discovered by the search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Discovery {
    pub kind: Kind,
    pub label: Vec<u32>,
    /// Index (into [`SearchTrace::discovered`]) of the element whose pop found this one.
    pub parent: Option<usize>,
}

/// Record of one run of the component search.
///
/// The queue is first-in first-out, so the pop order coincides with the
/// discovery order and `discovered[i]` is exactly the element popped at step `i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchTrace {
    pub discovered: Vec<Discovery>,
    /// Number of `k`-sets found (the component's size).
    pub size: u64,
    /// Number of `j`-sets found (the component's order).
    pub order: u64,
}

impl SearchTrace {
    /// One line per pop: `STEP <idx> POP <J|K> <v1,v2,...>`.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for (i, d) in self.discovered.iter().enumerate() {
            let label: Vec<String> = d.label.iter().map(|v| v.to_string()).collect();
            let _ = writeln!(out, "STEP {i} POP {} {}", d.kind.tag(), label.join(","));
        }
        out
    }

    pub fn jsets(&self) -> impl Iterator<Item = &Discovery> {
        self.discovered.iter().filter(|d| d.kind == Kind::J)
    }

    pub fn ksets(&self) -> impl Iterator<Item = &Discovery> {
        self.discovered.iter().filter(|d| d.kind == Kind::K)
    }
}

fn validate_jset(h: &Hypergraph, j: usize, start: &[u32]) -> Result<()> {
    if j < 1 || j >= h.k() {
        return Err(Error::validation(format!("j = {j} must lie in [1, k-1]")));
    }
    if start.len() != j {
        return Err(Error::validation(format!(
            "start has {} elements, expected {j}",
            start.len()
        )));
    }
    if start.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::validation("start must be sorted without repeats"));
    }
    if start.iter().any(|&v| v == 0 || v as usize > h.n()) {
        return Err(Error::validation(format!("start leaves [1, {}]", h.n())));
    }
    Ok(())
}

fn explore(
    h: &Hypergraph,
    j: usize,
    start: &[u32],
    mut shuffle: Option<&mut crate::rng::SimRng>,
) -> Result<SearchTrace> {
    validate_jset(h, j, start)?;
    let (n, k) = (h.n(), h.k());
    let mut seen: HashMap<(Kind, u64), usize> = HashMap::new();
    let mut discovered = vec![Discovery {
        kind: Kind::J,
        label: start.to_vec(),
        parent: None,
    }];
    seen.insert((Kind::J, colex_rank(start)), 0);
    let mut queue: VecDeque<usize> = VecDeque::from([0]);
    let mut candidates: Vec<Vec<u32>> = Vec::new();

    while let Some(idx) = queue.pop_front() {
        let (kind, label) = (discovered[idx].kind, discovered[idx].label.clone());
        candidates.clear();
        let next_kind = match kind {
            Kind::J => {
                for_each_superset(&label, n, k, |kset| {
                    if h.contains(kset) {
                        candidates.push(kset.to_vec());
                    }
                });
                Kind::K
            }
            Kind::K => {
                for_each_subset_of(&label, j, |js| candidates.push(js.to_vec()));
                Kind::J
            }
        };
        if let Some(rng) = shuffle.as_deref_mut() {
            candidates.shuffle(rng);
        }
        for c in candidates.drain(..) {
            let key = (next_kind, colex_rank(&c));
            if seen.contains_key(&key) {
                continue;
            }
            seen.insert(key, discovered.len());
            queue.push_back(discovered.len());
            discovered.push(Discovery {
                kind: next_kind,
                label: c,
                parent: Some(idx),
            });
        }
    }

    let size = discovered.iter().filter(|d| d.kind == Kind::K).count() as u64;
    let order = discovered.len() as u64 - size;
    Ok(SearchTrace {
        discovered,
        size,
        order,
    })
}

/// Breadth-first exploration of the `j`-component of `start`.
///
/// Popping a `j`-set scans its `C(n-j, k-j)` supersets in colex order and
/// enqueues those that are undiscovered edges of `h`; popping an edge enqueues
/// its undiscovered `j`-subsets.
pub fn search_component(h: &Hypergraph, j: usize, start: &[u32]) -> Result<SearchTrace> {
    explore(h, j, start, None)
}

/// Same exploration with every scan visited in a seeded random order instead
/// of colex order. The component found does not depend on the scan order.
pub fn search_component_shuffled(
    h: &Hypergraph,
    j: usize,
    start: &[u32],
    seed: u64,
) -> Result<SearchTrace> {
    let mut rng = rng_from_seed(seed);
    explore(h, j, start, Some(&mut rng))
}
