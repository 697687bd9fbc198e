use std::collections::{HashMap, HashSet, VecDeque};

use rand::Rng;

use super::branching::DEFAULT_CAP;
use super::search::{search_component, Kind, SearchTrace};
use crate::combinatorics::{
    binomial_u64, colex_rank, for_each_subset_of, for_each_superset, TheoryParams,
};
use crate::error::Result;
use crate::hypergraph::Hypergraph;
use crate::rng::rng_from_seed;

/// Outcome of one coupled run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CoupledRun {
    /// Number of edges in the `j`-component of the start set.
    pub component_size: u64,
    /// Number of type-`k` vertices of the coupled branching tree.
    pub branching_size: u64,
    /// The branching tree hit the cap before dying out.
    pub truncated: bool,
}

struct Vertex {
    kind: Kind,
    label: Vec<u32>,
    /// Parent's label rank (type-`k` vertices only).
    parent_rank: u64,
    /// Trace index of the search element this vertex stands in for.
    mirror: Option<usize>,
}

/// Runs the component search on `h` and a branching process that shares its
/// randomness.
///
/// Every `k`-set answers its first query with its membership in `h`,
/// whichever process asks; any later query of the same `k`-set by the
/// branching process draws a fresh Bernoulli(`p`) coin. The tree is grown
/// breadth-first. A vertex that stands in for a search element re-asks the
/// search's queries in the same order, so every discovered edge and `j`-set
/// reappears in the tree and `branching_size >= component_size` holds on every
/// run that is not truncated.
pub fn coupled_run(
    h: &Hypergraph,
    params: &TheoryParams,
    start: &[u32],
    seed: u64,
) -> Result<CoupledRun> {
    coupled_run_capped(h, params, start, seed, DEFAULT_CAP)
}

pub fn coupled_run_capped(
    h: &Hypergraph,
    params: &TheoryParams,
    start: &[u32],
    seed: u64,
    cap: u64,
) -> Result<CoupledRun> {
    let trace = search_component(h, params.j, start)?;
    let (n, k, j, p) = (h.n(), h.k(), params.j, params.p);

    let mut trace_of: HashMap<(Kind, u64), usize> = HashMap::new();
    for (i, d) in trace.discovered.iter().enumerate() {
        trace_of.insert((d.kind, colex_rank(&d.label)), i);
    }
    let jsets = JsetIndex::new(&trace, n, j);
    // earliest popped component j-set inside `kset`: the search's first asker
    let first_asker = |kset: &[u32]| {
        let mut best: Option<usize> = None;
        for_each_subset_of(kset, j, |js| {
            if let Some(t) = jsets.get(colex_rank(js)) {
                best = Some(best.map_or(t, |b: usize| b.min(t)));
            }
        });
        best
    };

    let mut rng = rng_from_seed(seed);
    let mut asked_by_tree: HashSet<u64> = HashSet::new();
    let mut queue: VecDeque<Vertex> = VecDeque::from([Vertex {
        kind: Kind::J,
        label: start.to_vec(),
        parent_rank: 0,
        mirror: Some(0),
    }]);
    let mut size: u64 = 0;
    let mut truncated = false;
    let mut children: Vec<Vertex> = Vec::new();

    'grow: while let Some(v) = queue.pop_front() {
        children.clear();
        match v.kind {
            Kind::J => {
                for_each_superset(&v.label, n, k, |kset| {
                    let asker = first_asker(kset);
                    let (present, mirror) = match (v.mirror, asker) {
                        (Some(t), Some(a)) if a == t => {
                            let m = trace_of.get(&(Kind::K, colex_rank(kset))).copied();
                            (m.is_some(), m)
                        }
                        (None, None) if asked_by_tree.insert(colex_rank(kset)) => {
                            (h.contains_rank(colex_rank(kset)), None)
                        }
                        _ => (rng.random_bool(p), None),
                    };
                    if present {
                        children.push(Vertex {
                            kind: Kind::K,
                            label: kset.to_vec(),
                            parent_rank: colex_rank(&v.label),
                            mirror,
                        });
                    }
                });
            }
            Kind::K => {
                for_each_subset_of(&v.label, j, |js| {
                    let rank = colex_rank(js);
                    if rank == v.parent_rank {
                        return;
                    }
                    let mirror = v.mirror.and_then(|tk| {
                        trace_of
                            .get(&(Kind::J, rank))
                            .copied()
                            .filter(|&t| trace.discovered[t].parent == Some(tk))
                    });
                    children.push(Vertex {
                        kind: Kind::J,
                        label: js.to_vec(),
                        parent_rank: 0,
                        mirror,
                    });
                });
            }
        }
        for c in children.drain(..) {
            if c.kind == Kind::K {
                if size == cap {
                    truncated = true;
                    break 'grow;
                }
                size += 1;
            }
            queue.push_back(c);
        }
    }

    Ok(CoupledRun {
        component_size: trace.size,
        branching_size: size,
        truncated,
    })
}

/// Trace index of each component `j`-set by colex rank; dense when `C(n, j)`
/// is small enough to allocate.
enum JsetIndex {
    Dense(Vec<u32>),
    Sparse(HashMap<u64, usize>),
}

const DENSE_LIMIT: u64 = 1 << 24;

impl JsetIndex {
    fn new(trace: &SearchTrace, n: usize, j: usize) -> Self {
        let found = trace
            .discovered
            .iter()
            .enumerate()
            .filter(|(_, d)| d.kind == Kind::J)
            .map(|(i, d)| (colex_rank(&d.label), i));
        match binomial_u64(n as u64, j as u64).filter(|&m| m <= DENSE_LIMIT) {
            Some(m) => {
                let mut dense = vec![u32::MAX; m as usize];
                for (r, i) in found {
                    dense[r as usize] = i as u32;
                }
                JsetIndex::Dense(dense)
            }
            None => JsetIndex::Sparse(found.collect()),
        }
    }

    fn get(&self, rank: u64) -> Option<usize> {
        match self {
            JsetIndex::Dense(v) => Some(v[rank as usize])
                .filter(|&i| i != u32::MAX)
                .map(|i| i as usize),
            JsetIndex::Sparse(m) => m.get(&rank).copied(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergraph::sample_hypergraph;

    #[test]
    fn empty_hypergraph_is_all_zero() {
        let params = TheoryParams::new(10, 3, 2, 0.3).unwrap();
        let h = Hypergraph::empty(10, 3).unwrap();
        let mut any_tree = false;
        for seed in 0..50 {
            let r = coupled_run(&h, &params, &[1, 2], seed).unwrap();
            assert_eq!(r.component_size, 0);
            any_tree |= r.branching_size > 0;
        }
        // first queries of the root are all answered by the empty h
        assert!(!any_tree);
    }

    #[test]
    fn single_edge_component() {
        let params = TheoryParams::new(10, 3, 2, 0.3).unwrap();
        let h = Hypergraph::from_edges(10, 3, [[1, 2, 3]]).unwrap();
        for seed in 0..50 {
            let r = coupled_run(&h, &params, &[1, 2], seed).unwrap();
            assert_eq!(r.component_size, 1);
            assert!(r.branching_size >= 1);
        }
    }

    #[test]
    fn dominance_on_dense_samples() {
        // near-critical density gives larger components and many repeat queries
        for (k, j) in [(2, 1), (3, 1), (3, 2)] {
            let params = TheoryParams::new(25, k, j, 0.05).unwrap();
            let start: Vec<u32> = (1..=j as u32).collect();
            for seed in 0..200 {
                let h = sample_hypergraph(&params, seed).unwrap();
                let r = coupled_run(&h, &params, &start, seed ^ 0xABCD).unwrap();
                assert!(!r.truncated);
                assert!(
                    r.branching_size >= r.component_size,
                    "{k} {j} {seed}: {r:?}"
                );
            }
        }
    }
}
