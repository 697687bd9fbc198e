use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Formal power series with exact rational coefficients, truncated after `z^order`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalSeries {
    coeffs: Vec<BigRational>,
}

fn int(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

impl RationalSeries {
    pub fn zero(order: usize) -> Self {
        RationalSeries {
            coeffs: vec![BigRational::zero(); order + 1],
        }
    }

    pub fn one(order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = BigRational::one();
        s
    }

    /// The series `z`.
    pub fn z(order: usize) -> Self {
        let mut s = Self::zero(order);
        if order >= 1 {
            s.coeffs[1] = BigRational::one();
        }
        s
    }

    /// Coefficients beyond `order` are dropped; missing ones are zero.
    pub fn from_coeffs(coeffs: Vec<BigRational>, order: usize) -> Self {
        let mut s = Self::zero(order);
        for (slot, c) in s.coeffs.iter_mut().zip(coeffs) {
            *slot = c;
        }
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// `[z^i]`, zero beyond the truncation order.
    pub fn coeff(&self, i: usize) -> BigRational {
        self.coeffs
            .get(i)
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn add(&self, other: &Self) -> Self {
        let order = self.order().min(other.order());
        RationalSeries {
            coeffs: (0..=order)
                .map(|i| &self.coeffs[i] + &other.coeffs[i])
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let order = self.order().min(other.order());
        RationalSeries {
            coeffs: (0..=order)
                .map(|i| &self.coeffs[i] - &other.coeffs[i])
                .collect(),
        }
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        RationalSeries {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    /// Cauchy product truncated at the smaller order.
    pub fn mul(&self, other: &Self) -> Self {
        let order = self.order().min(other.order());
        let mut out = Self::zero(order);
        for (i, a) in self.coeffs.iter().enumerate().take(order + 1) {
            if a.is_zero() {
                continue;
            }
            for (jdx, b) in other.coeffs.iter().enumerate().take(order + 1 - i) {
                if !b.is_zero() {
                    out.coeffs[i + jdx] += a * b;
                }
            }
        }
        out
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(self.order());
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// `exp(self)` for a series without constant term, via `E' = F' E`.
    ///
    /// # Panics
    /// If the constant term is nonzero.
    pub fn exp(&self) -> Self {
        assert!(self.coeffs[0].is_zero(), "exp needs a zero constant term");
        let order = self.order();
        let mut e = Self::one(order);
        for m in 1..=order {
            let mut acc = BigRational::zero();
            for i in 1..=m {
                if !self.coeffs[i].is_zero() {
                    acc += &self.coeffs[i] * int(i as i64) * &e.coeffs[m - i];
                }
            }
            e.coeffs[m] = acc / int(m as i64);
        }
        e
    }

    /// Multiplication by `z`, keeping the truncation order.
    pub fn shift(&self) -> Self {
        let mut out = Self::zero(self.order());
        for i in 1..=self.order() {
            out.coeffs[i] = self.coeffs[i - 1].clone();
        }
        out
    }
}

impl fmt::Display for RationalSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})z")?,
                _ => write!(f, "({c})z^{i}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(z^{})", self.order() + 1)
    }
}

/// Series of `W(z)^r`, where `W` is the Lambert function (`W e^W = z`), up to
/// `z^i_max`. Uses `[z^i] W^r = -r (-i)^(i-r-1) / (i-r)!` for `i >= r`.
pub fn lambert_power_coefficients(r: u32, i_max: usize) -> RationalSeries {
    let mut s = RationalSeries::zero(i_max);
    let r = r as usize;
    for i in r.max(1)..=i_max {
        let e = i as i64 - r as i64 - 1;
        let base = int(-(i as i64));
        // (-i)^e with e >= -1
        let power = if e < 0 {
            base.recip()
        } else {
            num_traits::pow(base, e as usize)
        };
        let fact = int_factorial(i - r);
        s.coeffs[i] = -int(r as i64) * power / fact;
    }
    s
}

fn int_factorial(m: usize) -> BigRational {
    BigRational::from_integer(BigInt::from(crate::combinatorics::factorial(m as u64)))
}

/// The series `T` with `T(0) = 0` and `T = exp(z (1 + T)^c0) - 1`, up to
/// `z^s_max`. Each fixed-point step fixes one more coefficient, so `s_max + 1`
/// steps from zero reach the answer.
pub fn tj_series_fixed_point(c0: u32, s_max: usize) -> RationalSeries {
    let one = RationalSeries::one(s_max);
    let mut t = RationalSeries::zero(s_max);
    for _ in 0..=s_max {
        t = one.add(&t).pow(c0).shift().exp().sub(&one);
    }
    t
}
