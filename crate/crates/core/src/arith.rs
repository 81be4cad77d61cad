//! Exact and compensated accumulation, binomial coefficients and checked scalar types for
//! matrix powers.

use num_bigint::BigInt;
use num_traits::{CheckedAdd, CheckedMul, One, Signed, ToPrimitive, Zero};

/// `C(n, k)`, zero when `k < 0` or `k > n`.
pub fn binomial(n: u64, k: i64) -> BigInt {
    if k < 0 || k as u64 > n {
        return BigInt::zero();
    }
    let k = (k as u64).min(n - k as u64);
    let mut acc = BigInt::one();
    for r in 0..k {
        acc = acc * BigInt::from(n - r) / BigInt::from(r + 1);
    }
    acc
}

/// `C(n, k)` in `i128`, or `None` on overflow.
pub fn binomial_i128(n: u64, k: i64) -> Option<i128> {
    if k < 0 || k as u64 > n {
        return Some(0);
    }
    let k = (k as u64).min(n - k as u64);
    let mut acc: i128 = 1;
    for r in 0..k {
        // C(n, r+1) = C(n, r) * (n - r) / (r + 1), exact at every step
        acc = acc.checked_mul((n - r) as i128)? / (r as i128 + 1);
    }
    Some(acc)
}

/// Arbitrary-precision running sum with an `i128` fast path.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ExactSum {
    small: i128,
    big: BigInt,
}

impl ExactSum {
    pub fn add_i128(&mut self, x: i128) {
        match self.small.checked_add(x) {
            Some(s) => self.small = s,
            None => {
                self.big += BigInt::from(self.small) + BigInt::from(x);
                self.small = 0;
            }
        }
    }

    pub fn add_big(&mut self, x: &BigInt) {
        match x.to_i128() {
            Some(v) => self.add_i128(v),
            None => self.big += x,
        }
    }

    /// Adds `a * b`.
    pub fn add_product(&mut self, a: i128, b: i128) {
        match a.checked_mul(b) {
            Some(p) => self.add_i128(p),
            None => self.big += BigInt::from(a) * BigInt::from(b),
        }
    }

    pub fn merge(&mut self, other: &ExactSum) {
        self.add_i128(other.small);
        self.big += &other.big;
    }

    pub fn value(&self) -> BigInt {
        &self.big + BigInt::from(self.small)
    }
}

/// Neumaier-compensated sum that also tracks the largest partial magnitude seen.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct CompensatedSum {
    sum: f64,
    compensation: f64,
    max_partial: f64,
}

impl CompensatedSum {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.compensation += (self.sum - t) + x;
        } else {
            self.compensation += (x - t) + self.sum;
        }
        self.sum = t;
        self.max_partial = self.max_partial.max(t.abs()).max(x.abs());
    }

    pub fn merge(&mut self, other: &CompensatedSum) {
        self.add(other.sum);
        self.add(other.compensation);
        self.max_partial = self.max_partial.max(other.max_partial);
    }

    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }

    /// Largest partial magnitude divided by the magnitude of the result. Infinite when the
    /// result cancels to zero from non-zero partials.
    pub fn condition(&self) -> f64 {
        let v = self.value().abs();
        if self.max_partial == 0.0 {
            1.0
        } else if v == 0.0 {
            f64::INFINITY
        } else {
            (self.max_partial / v).max(1.0)
        }
    }
}

/// Scalars usable in matrix powers: checked exact integers or plain floats.
pub trait Scalar: Clone + PartialEq + Zero + One {
    fn checked_fma(acc: &Self, a: &Self, b: &Self) -> Option<Self>;
}

macro_rules! checked_scalar {
    ($($t:ty),*) => {$(
        impl Scalar for $t {
            #[inline]
            fn checked_fma(acc: &Self, a: &Self, b: &Self) -> Option<Self> {
                acc.checked_add(&a.checked_mul(b)?)
            }
        }
    )*};
}
checked_scalar!(i64, i128);

impl Scalar for BigInt {
    fn checked_fma(acc: &Self, a: &Self, b: &Self) -> Option<Self> {
        Some(acc + a * b)
    }
}

impl Scalar for f64 {
    #[inline]
    fn checked_fma(acc: &Self, a: &Self, b: &Self) -> Option<Self> {
        Some(acc + a * b)
    }
}

/// `(-1)^k` as a multiplier.
#[inline]
pub fn sign(k: usize) -> i128 {
    if k % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Exact division that reports a remainder instead of truncating.
pub fn divide_exact(value: &BigInt, k: usize) -> Option<BigInt> {
    let k = BigInt::from(k);
    let q = value / &k;
    if &q * &k == *value {
        Some(q)
    } else {
        None
    }
}

pub(crate) fn is_nonnegative(x: &BigInt) -> bool {
    !x.is_negative()
}

pub(crate) fn big_to_f64(x: &BigInt) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}
