//! Exact binomials, falling factorials, and colexicographic ranking of subsets.
//!
//! Subsets are 1-based and stored sorted ascending. The colex rank of
//! `a_1 < a_2 < ... < a_s` is `sum_i C(a_i - 1, i)`, so the subsets of `[n]` of a
//! fixed size are numbered `0..C(n, s)` and every prefix `[m]` of the ground set
//! occupies a prefix of the ranks.

use std::sync::OnceLock;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// `C(n, r)` as an exact integer; zero when `r > n`.
pub fn binomial(n: u64, r: u64) -> BigUint {
    if r > n {
        return BigUint::zero();
    }
    let r = r.min(n - r);
    let mut acc = BigUint::one();
    for i in 0..r {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// `n (n-1) ... (n-k+1)`; one for `k = 0`, zero for `k > n`.
pub fn falling_factorial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    (0..k).fold(BigUint::one(), |acc, i| acc * (n - i))
}

/// `n!` as an exact integer.
pub fn factorial(n: u64) -> BigUint {
    falling_factorial(n, n)
}

/// `C(n, r)` in 64 bits, `None` on overflow.
pub fn binomial_u64(n: u64, r: u64) -> Option<u64> {
    if r > n {
        return Some(0);
    }
    if n < TABLE_N as u64 && r < TABLE_R as u64 {
        return small_binomials()[n as usize][r as usize];
    }
    binomial_direct(n, r)
}

const TABLE_N: usize = 256;
const TABLE_R: usize = 16;

/// Pascal's triangle for `n < TABLE_N`, `r < TABLE_R`; `None` marks overflow.
fn small_binomials() -> &'static [[Option<u64>; TABLE_R]; TABLE_N] {
    static TABLE: OnceLock<Box<[[Option<u64>; TABLE_R]; TABLE_N]>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut t = Box::new([[Some(0u64); TABLE_R]; TABLE_N]);
        for n in 0..TABLE_N {
            t[n][0] = Some(1);
            for r in 1..TABLE_R.min(n + 1) {
                t[n][r] = match (t[n - 1][r - 1], t[n - 1][r]) {
                    (Some(a), Some(b)) => a.checked_add(b),
                    _ => None,
                };
            }
        }
        t
    })
}

fn binomial_direct(n: u64, r: u64) -> Option<u64> {
    let r = r.min(n - r);
    let mut acc: u128 = 1;
    for i in 0..r as u128 {
        // acc * (n - i) is divisible by (i + 1) at every step
        acc = acc.checked_mul(n as u128 - i)? / (i + 1);
        if acc > u64::MAX as u128 {
            return None;
        }
    }
    Some(acc as u64)
}

fn validate_subset(s: &[u32], n: usize) -> Result<()> {
    for (i, &v) in s.iter().enumerate() {
        if v == 0 || v as usize > n {
            return Err(Error::validation(format!("element {v} outside [1, {n}]")));
        }
        if i > 0 && s[i - 1] >= v {
            return Err(Error::validation(
                "subset must be strictly increasing (sorted, no duplicates)",
            ));
        }
    }
    Ok(())
}

/// Colex rank of a sorted subset of `[n]`.
pub fn rank_subset(s: &[u32], n: usize) -> Result<u64> {
    validate_subset(s, n)?;
    if binomial_u64(n as u64, s.len() as u64).is_none() {
        return Err(Error::Range(format!(
            "C({n}, {}) does not fit in 64 bits",
            s.len()
        )));
    }
    Ok(colex_rank(s))
}

/// Colex rank without validation. The caller guarantees `s` is sorted, 1-based,
/// and that the rank space fits in 64 bits.
#[inline]
pub fn colex_rank(s: &[u32]) -> u64 {
    s.iter()
        .enumerate()
        .map(|(i, &v)| binomial_u64(v as u64 - 1, i as u64 + 1).unwrap_or(u64::MAX))
        .sum()
}

/// Inverse of [`rank_subset`]: the `size`-subset of `[n]` with the given colex rank.
pub fn unrank_subset(rank: u64, size: usize, n: usize) -> Result<Vec<u32>> {
    if size > n {
        return Err(Error::validation(format!("size {size} exceeds n = {n}")));
    }
    let total = binomial_u64(n as u64, size as u64)
        .ok_or_else(|| Error::Range(format!("C({n}, {size}) does not fit in 64 bits")))?;
    if rank >= total {
        return Err(Error::Range(format!(
            "rank {rank} out of range [0, {total})"
        )));
    }
    let mut out = vec![0u32; size];
    colex_unrank_into(rank, n, &mut out);
    Ok(out)
}

/// Fills `out` with the `out.len()`-subset of `[n]` of colex rank `rank`.
/// The caller guarantees `rank < C(n, out.len())` and that it fits in 64 bits.
pub fn colex_unrank_into(mut rank: u64, n: usize, out: &mut [u32]) {
    let mut hi = n as u64;
    for i in (1..=out.len()).rev() {
        // largest x < hi with C(x, i) <= rank
        let (mut lo, mut up) = (i as u64 - 1, hi - 1);
        while lo < up {
            let mid = lo + (up - lo).div_ceil(2);
            match binomial_u64(mid, i as u64) {
                Some(c) if c <= rank => lo = mid,
                _ => up = mid - 1,
            }
        }
        rank -= binomial_u64(lo, i as u64).unwrap_or(0);
        out[i - 1] = lo as u32 + 1;
        hi = lo;
    }
}

/// Colex-ordered walk over the `r`-subsets of `[m]` with 1-based elements.
///
/// Lending style: call [`ColexCombinations::current`] after each successful
/// [`ColexCombinations::advance`].
#[derive(Debug, Clone)]
pub struct ColexCombinations {
    m: u32,
    cur: Vec<u32>,
    started: bool,
    done: bool,
}

impl ColexCombinations {
    pub fn new(m: usize, r: usize) -> Self {
        ColexCombinations {
            m: m as u32,
            cur: (1..=r as u32).collect(),
            started: false,
            done: r > m,
        }
    }

    pub fn current(&self) -> &[u32] {
        &self.cur
    }

    pub fn advance(&mut self) -> bool {
        if self.done {
            return false;
        }
        if !self.started {
            self.started = true;
            return true;
        }
        let r = self.cur.len();
        for i in 0..r {
            let limit = if i + 1 < r {
                self.cur[i + 1]
            } else {
                self.m + 1
            };
            if self.cur[i] + 1 < limit {
                self.cur[i] += 1;
                for (t, slot) in self.cur[..i].iter_mut().enumerate() {
                    *slot = t as u32 + 1;
                }
                return true;
            }
        }
        self.done = true;
        false
    }
}

/// Calls `f` on every `r`-subset of the sorted slice `items`, positions taken in
/// colex order.
pub fn for_each_subset_of<F: FnMut(&[u32])>(items: &[u32], r: usize, mut f: F) {
    let mut it = ColexCombinations::new(items.len(), r);
    let mut buf = vec![0u32; r];
    while it.advance() {
        for (slot, &pos) in buf.iter_mut().zip(it.current()) {
            *slot = items[pos as usize - 1];
        }
        f(&buf);
    }
}

/// Calls `f` on every `k`-superset of the sorted set `js` within `[n]`, in
/// colex order of the `k - |js|` added vertices.
pub fn for_each_superset<F: FnMut(&[u32])>(js: &[u32], n: usize, k: usize, mut f: F) {
    let rest = complement(js, n);
    let mut merged = Vec::with_capacity(k);
    for_each_subset_of(&rest, k - js.len(), |extra| {
        merge_sorted(js, extra, &mut merged);
        f(&merged);
    });
}

/// The sorted vertices of `[n]` not in the sorted set `s`.
pub fn complement(s: &[u32], n: usize) -> Vec<u32> {
    let mut out = Vec::with_capacity(n - s.len());
    let mut it = s.iter().peekable();
    for v in 1..=n as u32 {
        if it.peek() == Some(&&v) {
            it.next();
        } else {
            out.push(v);
        }
    }
    out
}

/// Sorted union of two disjoint sorted sets.
pub fn merge_sorted(a: &[u32], b: &[u32], out: &mut Vec<u32>) {
    out.clear();
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        if j == b.len() || (i < a.len() && a[i] < b[j]) {
            out.push(a[i]);
            i += 1;
        } else {
            out.push(b[j]);
            j += 1;
        }
    }
}

/// `true` iff sorted `small` is a subset of sorted `big`.
pub fn is_subset(small: &[u32], big: &[u32]) -> bool {
    let mut it = big.iter();
    small.iter().all(|x| it.any(|y| y == x))
}

/// Natural log of an arbitrarily large integer (`-inf` for zero).
pub fn ln_biguint(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_f64().unwrap_or(f64::INFINITY).ln();
    }
    let shift = bits - 64;
    let top = (x >> shift).to_f64().unwrap_or(f64::INFINITY);
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// Natural log of the absolute value of a nonzero rational.
pub fn ln_rational(x: &BigRational) -> f64 {
    let num = x.numer().magnitude();
    let den = x.denom().magnitude();
    ln_biguint(num) - ln_biguint(den)
}

/// Float approximation of a rational that may exceed the `f64` exponent range
/// in numerator and denominator separately.
pub fn rational_to_f64(x: &BigRational) -> f64 {
    if x.is_zero() {
        return 0.0;
    }
    let sign = if x.numer().sign() == num_bigint::Sign::Minus {
        -1.0
    } else {
        1.0
    };
    sign * ln_rational(x).exp()
}

/// Derived constants of the subcritical model for `(n, k, j, epsilon)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TheoryParams {
    pub n: usize,
    pub k: usize,
    pub j: usize,
    pub epsilon: f64,
    /// `C(k, j) - 1`
    pub c0: u64,
    /// `C(n - j, k - j)`: the number of `k`-sets containing a fixed `j`-set.
    pub supersets: u64,
    /// `1 / (c0 * C(n - j, k - j))`
    pub p0: f64,
    /// `(1 - epsilon) p0`
    pub p: f64,
    /// `-epsilon - ln(1 - epsilon)`
    pub delta: f64,
    /// `epsilon^3 C(n, j)`
    pub lambda: f64,
}

impl TheoryParams {
    pub fn new(n: usize, k: usize, j: usize, epsilon: f64) -> Result<Self> {
        if k < 2 {
            return Err(Error::validation(format!("k = {k} must be at least 2")));
        }
        if j < 1 || j >= k {
            return Err(Error::validation(format!("j = {j} must lie in [1, k-1]")));
        }
        if n < k {
            return Err(Error::validation(format!(
                "n = {n} is smaller than k = {k}"
            )));
        }
        if !(epsilon > 0.0 && epsilon < 1.0) {
            return Err(Error::validation(format!(
                "epsilon = {epsilon} must lie in (0, 1)"
            )));
        }
        let c0 = binomial_u64(k as u64, j as u64)
            .ok_or_else(|| Error::validation("C(k, j) overflows"))?
            - 1;
        let supersets = binomial_u64((n - j) as u64, (k - j) as u64)
            .ok_or_else(|| Error::validation("C(n-j, k-j) does not fit in 64 bits"))?;
        let p0 = 1.0 / (c0 as f64 * supersets as f64);
        let lambda = epsilon.powi(3) * ln_biguint(&binomial(n as u64, j as u64)).exp();
        Ok(TheoryParams {
            n,
            k,
            j,
            epsilon,
            c0,
            supersets,
            p0,
            p: (1.0 - epsilon) * p0,
            delta: -epsilon - (-epsilon).ln_1p(),
            lambda,
        })
    }

    /// `C(n, j)` exactly.
    pub fn jset_count(&self) -> BigUint {
        binomial(self.n as u64, self.j as u64)
    }

    /// `C(n, k)` exactly.
    pub fn kset_count(&self) -> BigUint {
        binomial(self.n as u64, self.k as u64)
    }

    /// `C(k, j)`: the number of `j`-subsets of an edge.
    pub fn jsets_per_edge(&self) -> usize {
        self.c0 as usize + 1
    }

    /// Order of a hypertree component of the given size.
    pub fn hypertree_order(&self, size: u64) -> u64 {
        1 + self.c0 * size
    }
}
