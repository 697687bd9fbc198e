use std::collections::HashMap;

use num_bigint::BigUint;

use super::wheel::{find_wheel, Wheel};
use super::Hypergraph;
use crate::combinatorics::{binomial, binomial_u64, colex_rank, for_each_subset_of};
use crate::error::{Error, Result};

/// One `j`-component that contains at least one edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentSummary {
    /// Position in discovery order (order of the component's first edge).
    pub id: usize,
    /// Number of edges.
    pub size: u64,
    /// Number of `j`-sets.
    pub order: u64,
    pub is_hypertree: bool,
    /// Present iff the component is not a hypertree.
    pub wheel_witness: Option<Wheel>,
    /// Indices into the hypergraph's edge list, increasing.
    pub edges: Vec<usize>,
}

/// Result of [`j_components`].
#[derive(Debug, Clone)]
pub struct Decomposition {
    pub j: usize,
    pub components: Vec<ComponentSummary>,
    /// Colex rank of every `j`-set lying in some edge, mapped to its component id.
    pub jset_component: HashMap<u64, usize>,
    /// `j`-sets contained in no edge; each is a component of size 0 and order 1.
    pub isolated_jsets: BigUint,
}

impl Decomposition {
    /// Component id of the edge with index `edge`.
    pub fn component_of_edge(&self, h: &Hypergraph, edge: usize) -> usize {
        let first = &h.edge(edge)[..self.j];
        self.jset_component[&colex_rank(first)]
    }
}

struct UnionFind {
    parent: Vec<u32>,
    size: Vec<u32>,
}

impl UnionFind {
    fn with_capacity(cap: usize) -> Self {
        UnionFind {
            parent: Vec::with_capacity(cap),
            size: Vec::with_capacity(cap),
        }
    }

    fn push(&mut self) -> u32 {
        let id = self.parent.len() as u32;
        self.parent.push(id);
        self.size.push(1);
        id
    }

    fn find(&mut self, mut x: u32) -> u32 {
        let mut root = x;
        while self.parent[root as usize] != root {
            root = self.parent[root as usize];
        }
        while self.parent[x as usize] != root {
            let next = self.parent[x as usize];
            self.parent[x as usize] = root;
            x = next;
        }
        root
    }

    fn union(&mut self, a: u32, b: u32) {
        let (mut a, mut b) = (self.find(a), self.find(b));
        if a == b {
            return;
        }
        if self.size[a as usize] < self.size[b as usize] {
            std::mem::swap(&mut a, &mut b);
        }
        self.parent[b as usize] = a;
        self.size[a as usize] += self.size[b as usize];
    }
}

/// Splits the `j`-sets of `h` into `j`-components.
///
/// Every edge merges its `C(k, j)` subsets of size `j`. Two edges meeting in at
/// least `j` vertices share such a subset, so the resulting classes are exactly
/// the classes of `j`-connectivity. Only touched `j`-sets are stored.
pub fn j_components(h: &Hypergraph, j: usize) -> Result<Decomposition> {
    let k = h.k();
    if j < 1 || j >= k {
        return Err(Error::validation(format!(
            "j = {j} must lie in [1, k-1 = {}]",
            k - 1
        )));
    }
    let per_edge = binomial_u64(k as u64, j as u64).unwrap_or(u64::MAX) as usize;
    let mut index: HashMap<u64, u32> = HashMap::with_capacity(h.len() * per_edge);
    let mut ranks: Vec<u64> = Vec::with_capacity(h.len() * per_edge);
    let mut uf = UnionFind::with_capacity(h.len() * per_edge);
    let mut first_of_edge: Vec<u32> = Vec::with_capacity(h.len());

    for e in h.edges() {
        let mut first = None;
        for_each_subset_of(e, j, |js| {
            let r = colex_rank(js);
            let id = *index.entry(r).or_insert_with(|| {
                ranks.push(r);
                uf.push()
            });
            match first {
                None => first = Some(id),
                Some(f) => uf.union(f, id),
            }
        });
        first_of_edge.push(first.expect("k > j so every edge has a j-subset"));
    }

    // component ids in order of first edge
    let mut comp_of_root: HashMap<u32, usize> = HashMap::new();
    let mut components: Vec<ComponentSummary> = Vec::new();
    for (ei, &f) in first_of_edge.iter().enumerate() {
        let root = uf.find(f);
        let next = components.len();
        let id = *comp_of_root.entry(root).or_insert(next);
        if id == next {
            components.push(ComponentSummary {
                id,
                size: 0,
                order: 0,
                is_hypertree: false,
                wheel_witness: None,
                edges: Vec::new(),
            });
        }
        components[id].size += 1;
        components[id].edges.push(ei);
    }

    let mut jset_component = HashMap::with_capacity(ranks.len());
    for (i, &r) in ranks.iter().enumerate() {
        let id = comp_of_root[&uf.find(i as u32)];
        components[id].order += 1;
        jset_component.insert(r, id);
    }

    let c0 = per_edge as u64 - 1;
    for c in &mut components {
        c.is_hypertree = c.order == 1 + c0 * c.size;
        if !c.is_hypertree {
            c.wheel_witness = find_wheel(h, j, &c.edges);
        }
    }

    let isolated_jsets = binomial(h.n() as u64, j as u64) - BigUint::from(ranks.len());
    Ok(Decomposition {
        j,
        components,
        jset_component,
        isolated_jsets,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::TheoryParams;
    use crate::hypergraph::sample_hypergraph;

    fn decompose(n: usize, k: usize, j: usize, edges: &[&[u32]]) -> Decomposition {
        let h = Hypergraph::from_edges(n, k, edges.iter().copied()).unwrap();
        j_components(&h, j).unwrap()
    }

    #[test]
    fn shared_vertex_does_not_join_pairs() {
        let d = decompose(5, 3, 2, &[&[1, 2, 3], &[3, 4, 5]]);
        assert_eq!(d.components.len(), 2);
        for c in &d.components {
            assert_eq!((c.size, c.order, c.is_hypertree), (1, 3, true));
            assert!(c.wheel_witness.is_none());
        }
        assert_eq!(d.isolated_jsets, BigUint::from(10u32 - 6));
    }

    #[test]
    fn shared_vertex_joins_singletons() {
        let d = decompose(5, 3, 1, &[&[1, 2, 3], &[3, 4, 5]]);
        assert_eq!(d.components.len(), 1);
        let c = &d.components[0];
        assert_eq!((c.size, c.order, c.is_hypertree), (2, 5, true));
        assert_eq!(d.isolated_jsets, BigUint::from(0u32));
    }

    #[test]
    fn three_edges_on_four_vertices_contain_a_wheel() {
        let d = decompose(4, 3, 2, &[&[1, 2, 3], &[1, 2, 4], &[1, 3, 4]]);
        assert_eq!(d.components.len(), 1);
        let c = &d.components[0];
        assert_eq!((c.size, c.order), (3, 6));
        assert!(!c.is_hypertree);
        assert_eq!(c.wheel_witness.as_ref().unwrap().len(), 3);
    }

    #[test]
    fn rejects_bad_j() {
        let h = Hypergraph::from_edges(5, 3, [[1, 2, 3]]).unwrap();
        assert!(j_components(&h, 0).is_err());
        assert!(j_components(&h, 3).is_err());
    }

    #[test]
    fn sizes_partition_edges_and_order_bound_holds() {
        for (k, j) in [(2, 1), (3, 1), (3, 2), (4, 2), (4, 3)] {
            let params = TheoryParams::new(30, k, j, 0.1).unwrap();
            for seed in 0..40 {
                let h = sample_hypergraph(&params, seed).unwrap();
                let d = j_components(&h, j).unwrap();
                let total: u64 = d.components.iter().map(|c| c.size).sum();
                assert_eq!(total as usize, h.len());
                let mut seen = vec![false; h.len()];
                for c in &d.components {
                    assert!(c.order <= 1 + params.c0 * c.size);
                    assert_eq!(c.is_hypertree, c.wheel_witness.is_none());
                    for &e in &c.edges {
                        assert!(!seen[e]);
                        seen[e] = true;
                        assert_eq!(d.component_of_edge(&h, e), c.id);
                    }
                }
                assert!(seen.into_iter().all(|s| s));
            }
        }
    }
}
