use std::collections::{HashSet, VecDeque};

use rand::Rng;
use rand_distr::Geometric;

use super::search::Kind;
use crate::combinatorics::{
    binomial_u64, colex_rank, colex_unrank_into, complement, for_each_subset_of, is_subset,
    merge_sorted, TheoryParams,
};
use crate::error::{Error, Result};
use crate::rng::rng_from_seed;

/// Default bound on the number of type-`k` vertices before a run is cut off.
pub const DEFAULT_CAP: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeNode {
    pub kind: Kind,
    pub label: Vec<u32>,
    pub parent: Option<usize>,
    pub children: Vec<usize>,
}

/// Rooted labelled two-type tree; `nodes[0]` is the type-`j` root and nodes
/// appear in generation (breadth-first) order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwoTypeTree {
    pub nodes: Vec<TreeNode>,
    /// Set when growth stopped at the cap; the last generation is then incomplete.
    pub truncated: bool,
}

impl TwoTypeTree {
    /// Number of type-`k` vertices.
    pub fn size(&self) -> u64 {
        self.nodes.iter().filter(|v| v.kind == Kind::K).count() as u64
    }

    /// Number of type-`j` vertices.
    pub fn jcount(&self) -> u64 {
        self.nodes.len() as u64 - self.size()
    }

    /// Checks the structural invariants of a complete tree: incidence between
    /// parent and child labels, `c0` distinct type-`j` children per type-`k`
    /// vertex avoiding the parent's label, and distinct sibling labels.
    pub fn check(&self, k: usize, j: usize) -> std::result::Result<(), String> {
        let c0 = binomial_u64(k as u64, j as u64).unwrap_or(0) as usize - 1;
        if self
            .nodes
            .first()
            .is_none_or(|r| r.kind != Kind::J || r.parent.is_some())
        {
            return Err("root must be a parentless type-j vertex".into());
        }
        for (i, v) in self.nodes.iter().enumerate() {
            let want = if v.kind == Kind::J { j } else { k };
            if v.label.len() != want {
                return Err(format!("vertex {i} has a label of the wrong size"));
            }
            let labels: HashSet<&[u32]> = v
                .children
                .iter()
                .map(|&c| self.nodes[c].label.as_slice())
                .collect();
            if labels.len() != v.children.len() {
                return Err(format!("vertex {i} has repeated child labels"));
            }
            for &c in &v.children {
                let child = &self.nodes[c];
                if child.parent != Some(i) || child.kind == v.kind {
                    return Err(format!("vertex {c} is not a proper child of {i}"));
                }
            }
            if v.kind == Kind::K {
                let parent = &self.nodes[v.parent.ok_or("type-k vertex without parent")?];
                if !is_subset(&parent.label, &v.label) {
                    return Err(format!("vertex {i} does not contain its parent's label"));
                }
                if !self.truncated && v.children.len() != c0 {
                    return Err(format!("vertex {i} has {} children", v.children.len()));
                }
                for &c in &v.children {
                    let l = &self.nodes[c].label;
                    if l == &parent.label || !is_subset(l, &v.label) {
                        return Err(format!("vertex {c} is not a fresh subset of {i}"));
                    }
                }
            }
        }
        if !self.truncated && self.jcount() != 1 + c0 as u64 * self.size() {
            return Err("type-j count differs from 1 + c0 * size".into());
        }
        Ok(())
    }
}

/// Runs the two-type branching process from `root` at the parameters' `p`.
pub fn branching_process(
    params: &TheoryParams,
    root: &[u32],
    seed: u64,
    cap: u64,
) -> Result<TwoTypeTree> {
    branching_process_at(params.n, params.k, params.j, params.p, root, seed, cap)
}

/// Runs the two-type branching process with an explicit edge probability.
///
/// Each type-`j` vertex `J` gives each of the `C(n-j, k-j)` sets `K ⊃ J` a
/// type-`k` child independently with probability `p`; candidates are visited
/// by geometric gap skipping in colex order of the added vertices. Each
/// type-`k` vertex then receives its `c0` other `j`-subsets as children.
pub fn branching_process_at(
    n: usize,
    k: usize,
    j: usize,
    p: f64,
    root: &[u32],
    seed: u64,
    cap: u64,
) -> Result<TwoTypeTree> {
    if cap == 0 {
        return Err(Error::validation("cap must be at least 1"));
    }
    if !(1..k).contains(&j) || k > n {
        return Err(Error::validation(format!(
            "need 1 <= j < k <= n, got n={n} k={k} j={j}"
        )));
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::validation(format!("p = {p} must lie in [0, 1]")));
    }
    if root.len() != j
        || root.windows(2).any(|w| w[0] >= w[1])
        || root.iter().any(|&v| v == 0 || v as usize > n)
    {
        return Err(Error::validation(format!(
            "root must be a sorted {j}-subset of [1, {n}]"
        )));
    }
    let supersets = binomial_u64((n - j) as u64, (k - j) as u64)
        .ok_or_else(|| Error::Range("C(n-j, k-j) does not fit in 64 bits".into()))?;
    let gaps = if p > 0.0 {
        Some(Geometric::new(p).map_err(|e| Error::validation(e.to_string()))?)
    } else {
        None
    };

    let mut rng = rng_from_seed(seed);
    let mut tree = TwoTypeTree {
        nodes: vec![TreeNode {
            kind: Kind::J,
            label: root.to_vec(),
            parent: None,
            children: Vec::new(),
        }],
        truncated: false,
    };
    let mut size: u64 = 0;
    let mut queue: VecDeque<usize> = VecDeque::from([0]);
    let mut pos = vec![0u32; k - j];
    let mut extra = vec![0u32; k - j];
    let mut merged = Vec::with_capacity(k);

    'grow: while let Some(v) = queue.pop_front() {
        let label = tree.nodes[v].label.clone();
        let mut new_children: Vec<Vec<u32>> = Vec::new();
        match tree.nodes[v].kind {
            Kind::J => {
                let Some(gaps) = gaps else { continue };
                let rest = complement(&label, n);
                let mut next: u64 = 0;
                loop {
                    let skip: u64 = rng.sample(gaps);
                    let r = match next.checked_add(skip) {
                        Some(r) if r < supersets => r,
                        _ => break,
                    };
                    next = r + 1;
                    colex_unrank_into(r, n - j, &mut pos);
                    for (e, &q) in extra.iter_mut().zip(&pos) {
                        *e = rest[q as usize - 1];
                    }
                    merge_sorted(&label, &extra, &mut merged);
                    new_children.push(merged.clone());
                }
            }
            Kind::K => {
                let parent = &tree.nodes[tree.nodes[v].parent.expect("type-k has a parent")].label;
                let parent_rank = colex_rank(parent);
                for_each_subset_of(&label, j, |js| {
                    if colex_rank(js) != parent_rank {
                        new_children.push(js.to_vec());
                    }
                });
            }
        }
        let child_kind = match tree.nodes[v].kind {
            Kind::J => Kind::K,
            Kind::K => Kind::J,
        };
        for c in new_children {
            if child_kind == Kind::K {
                if size == cap {
                    tree.truncated = true;
                    break 'grow;
                }
                size += 1;
            }
            let idx = tree.nodes.len();
            tree.nodes.push(TreeNode {
                kind: child_kind,
                label: c,
                parent: Some(v),
                children: Vec::new(),
            });
            tree.nodes[v].children.push(idx);
            queue.push_back(idx);
        }
    }
    Ok(tree)
}
