//! Wheels: cyclic alternations of distinct edges and distinct `j`-sets, the
//! obstruction that keeps a component from being a hypertree.

use std::collections::{HashMap, HashSet};

use super::Hypergraph;
use crate::combinatorics::{
    binomial_u64, colex_rank, for_each_subset_of, for_each_superset, is_subset,
};
use crate::error::{Error, Result};

/// A wheel of length `len() >= 2`.
///
/// `jsets[i]` lies in `edges[i - 1]` and `edges[i]` (indices mod length), so the
/// cyclic sequence `jsets[0], edges[0], jsets[1], edges[1], ...` alternates
/// between incident `j`-sets and edges.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Wheel {
    pub edges: Vec<Vec<u32>>,
    pub jsets: Vec<Vec<u32>>,
}

impl Wheel {
    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// Checks distinctness, incidence, and length.
    pub fn is_valid(&self) -> bool {
        let l = self.len();
        if l < 2 || self.jsets.len() != l {
            return false;
        }
        let distinct = |v: &[Vec<u32>]| v.iter().collect::<HashSet<_>>().len() == v.len();
        distinct(&self.edges)
            && distinct(&self.jsets)
            && (0..l).all(|i| {
                let prev = &self.edges[(i + l - 1) % l];
                is_subset(&self.jsets[i], prev) && is_subset(&self.jsets[i], &self.edges[i])
            })
    }

    /// Colex ranks of the alternating sequence `J0, K1, J1, K2, ...`.
    fn rank_sequence(&self) -> Vec<u64> {
        self.jsets
            .iter()
            .zip(&self.edges)
            .flat_map(|(js, e)| [colex_rank(js), colex_rank(e)])
            .collect()
    }

    /// The representative that is lexicographically least (by colex ranks of
    /// the alternating sequence) among all rotations and reversals. Two wheels
    /// are the same wheel iff their canonical forms are equal.
    pub fn canonical(&self) -> Wheel {
        let l = self.len();
        let mut best: Option<(Vec<u64>, Wheel)> = None;
        for reversed in [false, true] {
            for start in 0..l {
                let w = if reversed {
                    // J_s, K_{s-1}, J_{s-1}, ... walking backwards
                    Wheel {
                        jsets: (0..l)
                            .map(|t| self.jsets[(start + l - t) % l].clone())
                            .collect(),
                        edges: (0..l)
                            .map(|t| self.edges[(start + 2 * l - t - 1) % l].clone())
                            .collect(),
                    }
                } else {
                    Wheel {
                        jsets: (0..l)
                            .map(|t| self.jsets[(start + t) % l].clone())
                            .collect(),
                        edges: (0..l)
                            .map(|t| self.edges[(start + t) % l].clone())
                            .collect(),
                    }
                };
                let key = w.rank_sequence();
                if best.as_ref().is_none_or(|(b, _)| key < *b) {
                    best = Some((key, w));
                }
            }
        }
        best.map(|(_, w)| w).unwrap_or_else(|| self.clone())
    }

    /// `true` iff the two wheels agree up to rotation and reversal.
    pub fn same_wheel(&self, other: &Wheel) -> bool {
        self.len() == other.len() && self.canonical() == other.canonical()
    }
}

impl std::fmt::Display for Wheel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let set = |s: &[u32]| {
            s.iter()
                .map(|v| v.to_string())
                .collect::<Vec<_>>()
                .join(",")
        };
        write!(f, "K=")?;
        for (i, e) in self.edges.iter().enumerate() {
            write!(f, "{}{{{}}}", if i > 0 { " " } else { "" }, set(e))?;
        }
        write!(f, " J=")?;
        for (i, js) in self.jsets.iter().enumerate() {
            write!(f, "{}{{{}}}", if i > 0 { " " } else { "" }, set(js))?;
        }
        Ok(())
    }
}

/// Finds a wheel among the given edges of one component, or `None` iff the
/// component is a hypertree.
///
/// Runs a depth-first search on the bipartite incidence graph between the
/// edges and their `j`-subsets. A back edge closes a simple cycle, which
/// alternates `j`-sets and edges and therefore is a wheel.
pub fn find_wheel(h: &Hypergraph, j: usize, component_edges: &[usize]) -> Option<Wheel> {
    if component_edges.len() < 2 {
        return None;
    }
    // nodes 0..m are edges, m.. are j-sets
    let m = component_edges.len();
    let mut jindex: HashMap<u64, usize> = HashMap::new();
    let mut jlabels: Vec<Vec<u32>> = Vec::new();
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); m];
    for (ei, &e) in component_edges.iter().enumerate() {
        for_each_subset_of(h.edge(e), j, |js| {
            let r = colex_rank(js);
            let node = *jindex.entry(r).or_insert_with(|| {
                jlabels.push(js.to_vec());
                adj.push(Vec::new());
                m + jlabels.len() - 1
            });
            adj[ei].push(node);
            adj[node].push(ei);
        });
    }

    let total = adj.len();
    let mut depth = vec![usize::MAX; total];
    let mut parent = vec![usize::MAX; total];
    let mut cursor = vec![0usize; total];
    let mut stack: Vec<usize> = Vec::new();
    for root in 0..total {
        if depth[root] != usize::MAX {
            continue;
        }
        depth[root] = 0;
        stack.push(root);
        while let Some(&v) = stack.last() {
            if cursor[v] == adj[v].len() {
                stack.pop();
                continue;
            }
            let w = adj[v][cursor[v]];
            cursor[v] += 1;
            if w == parent[v] {
                continue;
            }
            if depth[w] == usize::MAX {
                depth[w] = depth[v] + 1;
                parent[w] = v;
                stack.push(w);
                continue;
            }
            if depth[w] < depth[v] {
                // back edge to an ancestor: stack holds the tree path
                let from = stack
                    .iter()
                    .position(|&x| x == w)
                    .expect("ancestor on stack");
                let mut cycle: Vec<usize> = stack[from..].to_vec();
                if cycle[0] < m {
                    cycle.rotate_left(1);
                }
                let label = |node: usize| {
                    if node < m {
                        h.edge(component_edges[node]).to_vec()
                    } else {
                        jlabels[node - m].clone()
                    }
                };
                let wheel = Wheel {
                    jsets: cycle.iter().step_by(2).map(|&x| label(x)).collect(),
                    edges: cycle.iter().skip(1).step_by(2).map(|&x| label(x)).collect(),
                };
                debug_assert!(wheel.is_valid());
                return Some(wheel);
            }
        }
    }
    None
}

const CENSUS_MAX_N: usize = 10;
const CENSUS_MAX_LEN: usize = 4;
const CENSUS_MAX_WORK: f64 = 5e7;

fn census_guard(n: usize, k: usize, j: usize, ell: usize) -> Result<()> {
    if !(1..k).contains(&j) || k > n {
        return Err(Error::validation(format!(
            "need 1 <= j < k <= n, got n={n} k={k} j={j}"
        )));
    }
    if ell < 2 {
        return Err(Error::validation("wheel length must be at least 2"));
    }
    if n > CENSUS_MAX_N || ell > CENSUS_MAX_LEN {
        return Err(Error::resource(format!(
            "census limited to n <= {CENSUS_MAX_N} and length <= {CENSUS_MAX_LEN}"
        )));
    }
    let jsets = binomial_u64(n as u64, j as u64).unwrap_or(u64::MAX) as f64;
    let branch = binomial_u64((n - j) as u64, (k - j) as u64).unwrap_or(u64::MAX) as f64
        * binomial_u64(k as u64, j as u64).unwrap_or(u64::MAX) as f64;
    if jsets * branch.powi(ell as i32 - 1) > CENSUS_MAX_WORK {
        return Err(Error::resource("census search space too large"));
    }
    Ok(())
}

/// Walks every oriented, rooted wheel sequence `J0, K1, J1, ..., K_ell` on `[n]`.
fn walk_wheels<F: FnMut(&[Vec<u32>], &[Vec<u32>])>(
    n: usize,
    k: usize,
    j: usize,
    ell: usize,
    f: &mut F,
) {
    fn extend<F: FnMut(&[Vec<u32>], &[Vec<u32>])>(
        n: usize,
        k: usize,
        j: usize,
        ell: usize,
        jsets: &mut Vec<Vec<u32>>,
        edges: &mut Vec<Vec<u32>>,
        f: &mut F,
    ) {
        let last_j = jsets.last().expect("J0 chosen").clone();
        let closing = edges.len() + 1 == ell;
        for_each_superset(&last_j, n, k, |kset| {
            if edges.iter().any(|e| e.as_slice() == kset) {
                return;
            }
            if closing {
                if is_subset(&jsets[0], kset) {
                    edges.push(kset.to_vec());
                    f(jsets, edges);
                    edges.pop();
                }
                return;
            }
            edges.push(kset.to_vec());
            for_each_subset_of(kset, j, |js| {
                if jsets.iter().any(|x| x.as_slice() == js) {
                    return;
                }
                jsets.push(js.to_vec());
                extend(n, k, j, ell, jsets, edges, f);
                jsets.pop();
            });
            edges.pop();
        });
    }

    let mut root = crate::combinatorics::ColexCombinations::new(n, j);
    while root.advance() {
        let mut jsets = vec![root.current().to_vec()];
        let mut edges = Vec::new();
        extend(n, k, j, ell, &mut jsets, &mut edges, f);
    }
}

/// Number of wheels of length `ell` on `[n]`, counted up to rotation and
/// reversal, by exhaustive generation and canonicalization.
pub fn brute_force_wheel_census(n: usize, k: usize, j: usize, ell: usize) -> Result<u64> {
    census_guard(n, k, j, ell)?;
    let mut seen: HashSet<Wheel> = HashSet::new();
    walk_wheels(n, k, j, ell, &mut |jsets, edges| {
        let w = Wheel {
            jsets: jsets.to_vec(),
            edges: edges.to_vec(),
        };
        seen.insert(w.canonical());
    });
    Ok(seen.len() as u64)
}

/// Number of oriented, rooted wheel sequences of length `ell`. Every wheel has
/// exactly `2 ell` of them, which gives a check on the census that does not
/// rely on canonicalization.
pub fn ordered_wheel_count(n: usize, k: usize, j: usize, ell: usize) -> Result<u64> {
    census_guard(n, k, j, ell)?;
    let mut count = 0u64;
    walk_wheels(n, k, j, ell, &mut |_, _| count += 1);
    Ok(count)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::binomial_u64;

    fn h(n: usize, k: usize, edges: &[&[u32]]) -> Hypergraph {
        Hypergraph::from_edges(n, k, edges.iter().copied()).unwrap()
    }

    #[test]
    fn hypertree_pair_has_no_wheel() {
        let g = h(4, 3, &[&[1, 2, 3], &[2, 3, 4]]);
        assert!(find_wheel(&g, 2, &[0, 1]).is_none());
        assert!(find_wheel(&g, 2, &[0]).is_none());
    }

    #[test]
    fn three_edges_wheel() {
        let g = h(4, 3, &[&[1, 2, 3], &[1, 2, 4], &[1, 3, 4]]);
        let w = find_wheel(&g, 2, &[0, 1, 2]).unwrap();
        assert!(w.is_valid());
        assert_eq!(w.len(), 3);
        let expected = Wheel {
            edges: vec![vec![1, 2, 3], vec![1, 2, 4], vec![1, 3, 4]],
            jsets: vec![vec![1, 3], vec![1, 2], vec![1, 4]],
        };
        assert!(expected.is_valid());
        assert!(w.same_wheel(&expected));
    }

    #[test]
    fn canonical_form_is_rotation_and_reversal_invariant() {
        let w = Wheel {
            edges: vec![vec![1, 2], vec![2, 3], vec![3, 4], vec![1, 4]],
            jsets: vec![vec![1], vec![2], vec![3], vec![4]],
        };
        assert!(w.is_valid());
        let rotated = Wheel {
            edges: vec![vec![3, 4], vec![1, 4], vec![1, 2], vec![2, 3]],
            jsets: vec![vec![3], vec![4], vec![1], vec![2]],
        };
        let reversed = Wheel {
            edges: vec![vec![1, 4], vec![3, 4], vec![2, 3], vec![1, 2]],
            jsets: vec![vec![1], vec![4], vec![3], vec![2]],
        };
        assert!(rotated.is_valid() && reversed.is_valid());
        assert_eq!(w.canonical(), rotated.canonical());
        assert_eq!(w.canonical(), reversed.canonical());
        assert!(w.canonical().is_valid());
    }

    #[test]
    fn census_small_cases() {
        assert_eq!(brute_force_wheel_census(4, 3, 2, 2).unwrap(), 0);
        assert_eq!(brute_force_wheel_census(5, 2, 1, 3).unwrap(), 10);
        // every length-3 wheel for k=3, j=2 uses three of the four triples of a 4-set
        assert_eq!(brute_force_wheel_census(6, 3, 2, 3).unwrap(), 15 * 4);
        // 4-cycles of K_6
        assert_eq!(brute_force_wheel_census(6, 2, 1, 4).unwrap(), 15 * 3);
    }

    #[test]
    fn census_matches_ordered_count() {
        for (n, k, j, ell) in [
            (6, 3, 2, 3),
            (6, 2, 1, 3),
            (7, 2, 1, 4),
            (6, 3, 1, 2),
            (6, 4, 2, 3),
        ] {
            let census = brute_force_wheel_census(n, k, j, ell).unwrap();
            let ordered = ordered_wheel_count(n, k, j, ell).unwrap();
            assert_eq!(ordered, 2 * ell as u64 * census, "{n} {k} {j} {ell}");
        }
    }

    #[test]
    fn census_for_graphs_counts_cycles() {
        // number of ell-cycles in K_n is C(n, ell) (ell-1)! / 2
        for n in 3..=7u64 {
            for ell in 3..=4u64 {
                let fact: u64 = (1..ell).product();
                let expected = binomial_u64(n, ell).unwrap() * fact / 2;
                assert_eq!(
                    brute_force_wheel_census(n as usize, 2, 1, ell as usize).unwrap(),
                    expected
                );
            }
        }
    }

    #[test]
    fn census_guard() {
        assert!(matches!(
            brute_force_wheel_census(11, 3, 2, 3),
            Err(Error::Resource(_))
        ));
        assert!(matches!(
            brute_force_wheel_census(8, 3, 2, 5),
            Err(Error::Resource(_))
        ));
        assert!(matches!(
            brute_force_wheel_census(8, 3, 2, 1),
            Err(Error::Validation(_))
        ));
    }

    #[test]
    fn supersets_in_colex_order() {
        let mut seen = Vec::new();
        for_each_superset(&[2], 4, 2, |k| seen.push(k.to_vec()));
        assert_eq!(seen, vec![vec![1, 2], vec![2, 3], vec![2, 4]]);
    }
}
