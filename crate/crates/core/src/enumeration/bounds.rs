//! Probability-weighted bounds, evaluated in log space because factors such as
//! `p0^(1-s)` leave the `f64` range long before the bounds become interesting.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use crate::combinatorics::{binomial, binomial_u64, ln_biguint, rational_to_f64, TheoryParams};
use crate::error::{Error, Result};

/// A positive quantity stored as its natural logarithm.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct LogValue {
    pub ln: f64,
}

impl LogValue {
    /// The plain value; infinite when it exceeds the `f64` range.
    pub fn value(self) -> f64 {
        self.ln.exp()
    }

    pub fn log10(self) -> f64 {
        self.ln / std::f64::consts::LN_10
    }
}

impl fmt::Display for LogValue {
    /// Scientific notation that keeps working past the `f64` range.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let l = self.log10();
        let (mut mant, mut exp) = (10f64.powf(l - l.floor()), l.floor() as i64);
        if mant >= 9.999_999_5 {
            mant /= 10.0;
            exp += 1;
        }
        write!(f, "{mant:.6}e{exp}")
    }
}

/// `ln m!`: exact summation up to 256, Stirling series with three correction
/// terms beyond (absolute error below 1e-15 there).
pub fn ln_factorial(m: u64) -> f64 {
    if m <= 256 {
        return (2..=m).map(|i| (i as f64).ln()).sum();
    }
    let x = m as f64;
    x * x.ln() - x + 0.5 * (2.0 * std::f64::consts::PI * x).ln() + 1.0 / (12.0 * x)
        - 1.0 / (360.0 * x.powi(3))
        + 1.0 / (1260.0 * x.powi(5))
}

/// `ln F_s` by a shifted log-sum-exp over the terms of the defining sum.
pub fn ln_f_s(c0: u64, s: u64) -> f64 {
    let (lc, ls) = ((c0 as f64).ln(), (s as f64).ln());
    let terms: Vec<f64> = (1..=s)
        .map(|r| {
            (s - r) as f64 * lc + (s as f64 - r as f64 - 1.0) * ls
                - ln_factorial(r - 1)
                - ln_factorial(s - r)
        })
        .collect();
    let top = terms.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    top + terms.iter().map(|t| (t - top).exp()).sum::<f64>().ln()
}

/// `ln B_s = ln C(n,j) + s ln C(n-j,k-j) + ln F_s`.
pub fn ln_b_s(params: &TheoryParams, s: u64) -> f64 {
    ln_biguint(&params.jset_count())
        + s as f64 * (params.supersets as f64).ln()
        + ln_f_s(params.c0, s)
}

/// Upper bound on the expected number of type-`j` vertices in tree instances
/// of size `s`: `B_s p^s (1-p)^((1 + c0 s) M - s (1 + c0))` with
/// `M = C(n-j, k-j)`.
pub fn expected_rs_upper(params: &TheoryParams, s: u64) -> f64 {
    let m = params.supersets as f64;
    let c0 = params.c0 as f64;
    let absent = (1.0 + c0 * s as f64) * m - s as f64 * (1.0 + c0);
    (ln_b_s(params, s) + s as f64 * params.p.ln() + absent * (-params.p).ln_1p()).exp()
}

/// Reference value for the expected number of `j`-sets in hypertree
/// components of size `s`: `B_s p^s (1-p)^((1 + s c0) M)`. `B_s` stands in for
/// the count of trees with distinct labels, so this is not a rigorous bound.
pub fn expected_cs_lower_reference(params: &TheoryParams, s: u64) -> f64 {
    let m = params.supersets as f64;
    let absent = (1.0 + params.c0 as f64 * s as f64) * m;
    (ln_b_s(params, s) + s as f64 * params.p.ln() + absent * (-params.p).ln_1p()).exp()
}

/// The wheel-count bound `c_w n^(k-j) / (p0^(l-1) l)`.
#[derive(Debug, Clone, PartialEq)]
pub struct WheelBound {
    pub c_w: BigRational,
    pub bound_exact: BigRational,
    pub bound: f64,
}

/// `c_w = (k-j)^j / (j! (k-j)!) * prod_{m=1}^{j-1} (1 - (C(k-m, j-m) - 1)/c0)^(-1)`.
pub fn wheel_constant(k: usize, j: usize) -> Result<BigRational> {
    if !(1..k).contains(&j) {
        return Err(Error::validation(format!(
            "need 1 <= j < k, got k={k} j={j}"
        )));
    }
    let c0 = BigInt::from(binomial_u64(k as u64, j as u64).expect("small k") - 1);
    let head = BigRational::new(
        num_traits::pow(BigInt::from(k - j), j),
        BigInt::from(
            crate::combinatorics::factorial(j as u64)
                * crate::combinatorics::factorial((k - j) as u64),
        ),
    );
    let mut acc = head;
    for m in 1..j {
        let inner = BigInt::from(binomial((k - m) as u64, (j - m) as u64)) - 1;
        let factor = BigRational::one() - BigRational::new(inner, c0.clone());
        acc /= factor;
    }
    Ok(acc)
}

pub fn wheel_bound(n: usize, k: usize, j: usize, ell: usize) -> Result<WheelBound> {
    if ell < 2 {
        return Err(Error::validation("wheel length must be at least 2"));
    }
    if k > n {
        return Err(Error::validation(format!(
            "n = {n} is smaller than k = {k}"
        )));
    }
    let c_w = wheel_constant(k, j)?;
    let c0 = binomial(k as u64, j as u64) - 1u32;
    let inv_p0 = c0 * binomial((n - j) as u64, (k - j) as u64);
    let num = BigInt::from(num_traits::pow(num_bigint::BigUint::from(n), k - j))
        * BigInt::from(num_traits::pow(inv_p0, ell - 1));
    let bound_exact = &c_w * BigRational::new(num, BigInt::from(ell));
    let bound = rational_to_f64(&bound_exact);
    Ok(WheelBound {
        c_w,
        bound_exact,
        bound,
    })
}

/// `census <= bound`, decided exactly.
pub fn census_within(census: u64, bound: &BigRational) -> bool {
    BigRational::from_integer(BigInt::from(census)) <= *bound
}

/// Outcome of the Laplace-type sum comparison.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LaplaceCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

/// Compares `sum_{i=1}^{s} i^a s_(i) / s^i` with `5 (2a)^(a/2) s^((a+1)/2)`.
/// Requires `s >= (16 a)^2`.
pub fn laplace_sum_check(a: u32, s: u64) -> Result<LaplaceCheck> {
    if a < 1 {
        return Err(Error::validation("a must be positive"));
    }
    let min = (16 * a as u64).pow(2);
    if s < min {
        return Err(Error::validation(format!(
            "s = {s} is below (16a)^2 = {min}"
        )));
    }
    let sf = s as f64;
    let mut lhs = 0.0;
    // ln(s_(i) / s^i) accumulated term by term
    let mut ln_fall = 0.0;
    let mut peak = f64::NEG_INFINITY;
    for i in 1..=s {
        ln_fall += (-((i - 1) as f64) / sf).ln_1p();
        let lt = a as f64 * (i as f64).ln() + ln_fall;
        peak = peak.max(lt);
        lhs += lt.exp();
        if lt < peak - 50.0 {
            // terms decrease from here on, and the remainder is below e^-50 * s relative
            break;
        }
    }
    let rhs = 5.0 * (2.0 * a as f64).powf(a as f64 / 2.0) * sf.powf((a as f64 + 1.0) / 2.0);
    Ok(LaplaceCheck {
        lhs,
        rhs,
        holds: lhs <= rhs,
    })
}

/// Default constant of the unicycle bound.
pub const UNICYCLE_CONSTANT: f64 = 244.0;

/// `constant * c0^2 * c_w * n^(k-j) * p0^(1-s) * s^(s+1/2) / s!`; requires `s >= 1024`.
pub fn unicycle_bound(params: &TheoryParams, s: u64, constant: f64) -> Result<LogValue> {
    if s < 1024 {
        return Err(Error::validation(format!("s = {s} is below 1024")));
    }
    if constant <= 0.0 || !constant.is_finite() {
        return Err(Error::validation("constant must be positive and finite"));
    }
    let c_w = rational_to_f64(&wheel_constant(params.k, params.j)?);
    let sf = s as f64;
    let ln = constant.ln()
        + 2.0 * (params.c0 as f64).ln()
        + c_w.ln()
        + (params.k - params.j) as f64 * (params.n as f64).ln()
        + (1.0 - sf) * params.p0.ln()
        + (sf + 0.5) * sf.ln()
        - ln_factorial(s);
    Ok(LogValue { ln })
}

/// Predicted size of the largest component, `(ln λ - 5/2 ln ln λ) / δ`.
/// Requires `λ > e`.
pub fn predicted_l1(params: &TheoryParams) -> Result<f64> {
    Ok(centering(params)? / params.delta)
}

/// Predicted order of the largest component, `c0` times [`predicted_l1`].
pub fn predicted_order(params: &TheoryParams) -> Result<f64> {
    Ok(params.c0 as f64 * predicted_l1(params)?)
}

/// `ln λ - 5/2 ln ln λ`, the centering of `δ L_1`.
pub fn centering(params: &TheoryParams) -> Result<f64> {
    let l = params.lambda;
    if l <= std::f64::consts::E {
        return Err(Error::validation(format!(
            "lambda = {l} must exceed e for the prediction"
        )));
    }
    Ok(l.ln() - 2.5 * l.ln().ln())
}
