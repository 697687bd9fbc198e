//! Counts of rooted two-type trees: the unlabelled count `F_s`, the labelled
//! count `B_s`, and an exhaustive census of labelled trees on tiny ground sets.

use std::collections::HashMap;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::combinatorics::{
    binomial, binomial_u64, colex_rank, factorial, for_each_subset_of, for_each_superset,
    TheoryParams,
};
use crate::error::{Error, Result};

fn ratio(num: BigUint, den: BigUint) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

fn pow_u(base: u64, e: u64) -> BigUint {
    num_traits::pow(BigUint::from(base), e as usize)
}

/// `F_s = sum_{r=1}^{s} c0^(s-r) s^(s-r-1) / ((r-1)! (s-r)!)`.
pub fn f_s(c0: u64, s: u64) -> BigRational {
    assert!(s >= 1, "f_s needs s >= 1");
    // common denominator s (r - 1)! (s - r)! is dominated by s (s - 1)!
    let mut num = BigUint::zero();
    for r in 1..=s {
        // c0^(s-r) s^(s-r) (s-1)! / ((r-1)! (s-r)!) = c0^(s-r) s^(s-r) C(s-1, r-1)
        num += pow_u(c0, s - r) * pow_u(s, s - r) * binomial(s - 1, r - 1);
    }
    ratio(num, BigUint::from(s) * factorial(s - 1))
}

/// `B_s = C(n, j) C(n-j, k-j)^s F_s` for the model's `(n, k, j)`.
pub fn b_s(params: &TheoryParams, s: u64) -> BigRational {
    b_s_for(params.n, params.k, params.j, s)
}

pub fn b_s_for(n: usize, k: usize, j: usize, s: u64) -> BigRational {
    let c0 = binomial_u64(k as u64, j as u64).expect("small k") - 1;
    let factor = binomial(n as u64, j as u64)
        * num_traits::pow(binomial((n - j) as u64, (k - j) as u64), s as usize);
    f_s(c0, s) * BigRational::from_integer(BigInt::from(factor))
}

/// `c0^(s-1) s^(s-1) / s!`, the lower end of the bracket on `F_s`.
pub fn f_s_lower(c0: u64, s: u64) -> BigRational {
    ratio(pow_u(c0, s - 1) * pow_u(s, s - 1), factorial(s))
}

const EXP_TERMS: u64 = 40;

/// Rational bracket `(lo, hi)` around `e^(1/c0)`: `lo` is the partial sum of
/// the exponential series through `x^40/40!`, and `hi` adds the tail bound
/// `x^41/41! * 1/(1 - x/42)`.
pub fn exp_inv_bounds(c0: u64) -> (BigRational, BigRational) {
    let x = BigRational::new(BigInt::one(), BigInt::from(c0));
    let mut term = BigRational::one();
    let mut lo = BigRational::one();
    for i in 1..=EXP_TERMS {
        term = term * &x / BigInt::from(i);
        lo += &term;
    }
    let next = term * &x / BigInt::from(EXP_TERMS + 1);
    let damp = BigRational::one() - &x / BigInt::from(EXP_TERMS + 2);
    let hi = &lo + next / damp;
    (lo, hi)
}

/// One row of the enumeration table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnumReport {
    pub s: u64,
    pub f_s: BigRational,
    pub b_s: BigRational,
    /// `C(n,j) C(n-j,k-j)^s c0^(s-1) s^(s-1) / s!`
    pub lower: BigRational,
    /// `lower` times the rational upper bound on `e^(1/c0)`.
    pub upper: BigRational,
    /// `lower <= B_s <= upper`, decided exactly.
    pub bounds_hold: bool,
    /// `B_s` lies strictly below `lower` times a rational lower bound on
    /// `e^(1/c0)`, hence strictly below the true `lower * e^(1/c0)`.
    pub strict_upper: bool,
}

/// Exact bracket check for `B_s` at `(n, k, j)`.
pub fn enum_report(n: usize, k: usize, j: usize, s: u64) -> Result<EnumReport> {
    if !(1..k).contains(&j) || k > n {
        return Err(Error::validation(format!(
            "need 1 <= j < k <= n, got n={n} k={k} j={j}"
        )));
    }
    if s < 1 {
        return Err(Error::validation("s must be at least 1"));
    }
    let c0 = binomial_u64(k as u64, j as u64).expect("small k") - 1;
    let (e_lo, e_hi) = exp_inv_bounds(c0);
    let labels = BigRational::from_integer(BigInt::from(
        binomial(n as u64, j as u64)
            * num_traits::pow(binomial((n - j) as u64, (k - j) as u64), s as usize),
    ));
    let f = f_s(c0, s);
    let b = &f * &labels;
    let lower = f_s_lower(c0, s) * &labels;
    let upper = &lower * &e_hi;
    Ok(EnumReport {
        s,
        bounds_hold: lower <= b && b <= upper,
        strict_upper: b < &lower * &e_lo,
        f_s: f,
        b_s: b,
        lower,
        upper,
    })
}

const BS_MAX_KSETS: u64 = 64;
const BS_MAX_S: u64 = 4;
const BS_MAX_TREES: f64 = 5e7;

/// Result of [`brute_force_bs`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TreeCensus {
    /// Rooted labelled two-type trees with `s` type-`k` vertices that the
    /// branching process can produce.
    pub total: u64,
    /// Those in which no label occurs twice.
    pub hypertree_only: u64,
}

/// Number of trees below one type-`j` vertex with exactly `s` type-`k`
/// vertices, from `G = (1 + z G^c0)^M` with `M = C(n-j, k-j)`. Used only to
/// size the exhaustive search.
fn tree_count_estimate(m: u64, c0: u64, s: u64) -> f64 {
    // g[t] = [z^t] G, computed by expanding sibling sets one size at a time
    let s = s as usize;
    let mut g = vec![0f64; s + 1];
    g[0] = 1.0;
    for t in 1..=s {
        // choose a children, each carrying c0 subtrees
        let mut total = 0.0;
        for a in 1..=t.min(m as usize) {
            // [z^(t-a)] G^(a c0)
            let mut pw = vec![0f64; s + 1];
            pw[0] = 1.0;
            for _ in 0..a as u64 * c0 {
                let mut next = vec![0f64; s + 1];
                for (x, &px) in pw.iter().enumerate() {
                    for (y, &gy) in g.iter().enumerate().take(s + 1 - x) {
                        next[x + y] += px * gy;
                    }
                }
                pw = next;
            }
            total += binomial_u64(m, a as u64).unwrap_or(u64::MAX) as f64 * pw[t - a];
        }
        g[t] = total;
    }
    g[s]
}

struct Census<'a> {
    j: usize,
    supersets: &'a HashMap<u64, Vec<Vec<u32>>>,
    /// Multiplicity of each label in the partial tree, keyed by (is_kset, rank).
    used: HashMap<(bool, u64), u32>,
    /// Number of label occurrences beyond the first.
    repeats: u32,
    total: u64,
    distinct: u64,
}

impl Census<'_> {
    fn add(&mut self, is_k: bool, rank: u64) {
        let c = self.used.entry((is_k, rank)).or_insert(0);
        if *c > 0 {
            self.repeats += 1;
        }
        *c += 1;
    }

    fn remove(&mut self, is_k: bool, rank: u64) {
        let c = self.used.get_mut(&(is_k, rank)).expect("label was added");
        *c -= 1;
        if *c > 0 {
            self.repeats -= 1;
        }
    }

    /// Completes the partial tree whose unexpanded type-`j` vertices are on
    /// `pending`, using exactly `budget` more type-`k` vertices. Leaves
    /// `pending` as it found it.
    fn expand(&mut self, pending: &mut Vec<Vec<u32>>, budget: u64) {
        let Some(js) = pending.pop() else {
            if budget == 0 {
                self.total += 1;
                if self.repeats == 0 {
                    self.distinct += 1;
                }
            }
            return;
        };
        let parent = colex_rank(&js);
        let supersets = self.supersets;
        let cands = &supersets[&parent];
        let positions: Vec<u32> = (1..=cands.len() as u32).collect();
        for a in 0..=(budget as usize).min(cands.len()) {
            let mut choices: Vec<Vec<u32>> = Vec::new();
            for_each_subset_of(&positions, a, |c| choices.push(c.to_vec()));
            for choice in choices {
                let before = pending.len();
                for &pos in &choice {
                    let kset = &cands[pos as usize - 1];
                    self.add(true, colex_rank(kset));
                    for_each_subset_of(kset, self.j, |child| {
                        if colex_rank(child) != parent {
                            pending.push(child.to_vec());
                        }
                    });
                }
                for js in &pending[before..] {
                    self.add(false, colex_rank(js));
                }
                self.expand(pending, budget - a as u64);
                for child in pending.drain(before..).collect::<Vec<_>>() {
                    self.remove(false, colex_rank(&child));
                }
                for &pos in &choice {
                    self.remove(true, colex_rank(&cands[pos as usize - 1]));
                }
            }
        }
        pending.push(js);
    }
}

/// Exhaustive census of the rooted labelled two-type trees with `s` type-`k`
/// vertices on ground set `[n]`, split by whether every label is distinct.
///
/// Guarded to `C(n, k) <= 64`, `s <= 4`, and an estimated `5e7` trees.
pub fn brute_force_bs(n: usize, k: usize, j: usize, s: u64) -> Result<TreeCensus> {
    if !(1..k).contains(&j) || k > n {
        return Err(Error::validation(format!(
            "need 1 <= j < k <= n, got n={n} k={k} j={j}"
        )));
    }
    if s < 1 {
        return Err(Error::validation("s must be at least 1"));
    }
    let ksets = binomial_u64(n as u64, k as u64).unwrap_or(u64::MAX);
    if ksets > BS_MAX_KSETS || s > BS_MAX_S {
        return Err(Error::resource(format!(
            "census limited to C(n,k) <= {BS_MAX_KSETS} and s <= {BS_MAX_S}"
        )));
    }
    let m = binomial_u64((n - j) as u64, (k - j) as u64).expect("small");
    let c0 = binomial_u64(k as u64, j as u64).expect("small") - 1;
    let roots = binomial_u64(n as u64, j as u64).expect("small");
    let estimate = roots as f64 * tree_count_estimate(m, c0, s);
    if estimate > BS_MAX_TREES {
        return Err(Error::resource(format!(
            "about {estimate:.3e} trees exceed the census budget of {BS_MAX_TREES:e}"
        )));
    }

    let all: Vec<u32> = (1..=n as u32).collect();
    let mut supersets: HashMap<u64, Vec<Vec<u32>>> = HashMap::new();
    for_each_subset_of(&all, j, |js| {
        let mut list = Vec::new();
        for_each_superset(js, n, k, |ks| list.push(ks.to_vec()));
        supersets.insert(colex_rank(js), list);
    });

    let mut census = Census {
        j,
        supersets: &supersets,
        used: HashMap::new(),
        repeats: 0,
        total: 0,
        distinct: 0,
    };
    let mut roots_list = Vec::new();
    for_each_subset_of(&all, j, |js| roots_list.push(js.to_vec()));
    for root in roots_list {
        let r = colex_rank(&root);
        census.add(false, r);
        let mut pending = vec![root];
        census.expand(&mut pending, s);
        census.remove(false, r);
    }
    Ok(TreeCensus {
        total: census.total,
        hypertree_only: census.distinct,
    })
}
