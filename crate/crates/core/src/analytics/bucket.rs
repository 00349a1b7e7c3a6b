use std::fmt;

use crate::error::{Error, Result};
use crate::ieee754::pow2;

/// The collision universe: `b` equally likely buckets.
///
/// `PowerOfTwo(k)` stands for `b = 2^k` and never materializes `b` as a
/// 64-bit integer, so `k = 64` is representable. Arithmetic goes through the
/// exact reciprocal `2^-k` and `log2(b) = k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BucketSpace {
    PowerOfTwo(u32),
    Exact(u64),
}

/// Largest explicit bucket count accepted by [`BucketSpace::exact`].
pub const MAX_EXACT_BUCKETS: u64 = 1 << 63;

impl BucketSpace {
    /// A k-bit setup, `1 <= k <= 64`.
    pub fn bits(k: u32) -> Result<Self> {
        if (1..=64).contains(&k) {
            Ok(BucketSpace::PowerOfTwo(k))
        } else {
            Err(Error::Argument(format!("bits must be in 1..=64, got {k}")))
        }
    }

    /// An explicit bucket count, `1 <= b <= 2^63`.
    pub fn exact(b: u64) -> Result<Self> {
        if (1..=MAX_EXACT_BUCKETS).contains(&b) {
            Ok(BucketSpace::Exact(b))
        } else {
            Err(Error::Argument(format!(
                "buckets must be in 1..=2^63, got {b}"
            )))
        }
    }

    /// `log2(b)`; exact for powers of two.
    pub fn log2(&self) -> f64 {
        match *self {
            BucketSpace::PowerOfTwo(k) => f64::from(k),
            BucketSpace::Exact(b) => (b as f64).log2(),
        }
    }

    /// `ln(b)`.
    pub fn ln(&self) -> f64 {
        match *self {
            BucketSpace::PowerOfTwo(k) => f64::from(k) * std::f64::consts::LN_2,
            BucketSpace::Exact(b) => (b as f64).ln(),
        }
    }

    /// `b` as a double. Exact for powers of two, including `2^64`.
    pub fn as_f64(&self) -> f64 {
        match *self {
            BucketSpace::PowerOfTwo(k) => pow2(k as i32),
            BucketSpace::Exact(b) => b as f64,
        }
    }

    /// `1 / b`. Exact for powers of two.
    pub fn reciprocal(&self) -> f64 {
        match *self {
            BucketSpace::PowerOfTwo(k) => pow2(-(k as i32)),
            BucketSpace::Exact(b) => 1.0 / b as f64,
        }
    }

    /// `i / b` rounded once.
    pub fn ratio(&self, i: u64) -> f64 {
        match *self {
            BucketSpace::PowerOfTwo(k) => i as f64 * pow2(-(k as i32)),
            BucketSpace::Exact(b) => i as f64 / b as f64,
        }
    }

    /// `b` as a wide integer (`2^64` fits in `u128`).
    pub fn count(&self) -> u128 {
        match *self {
            BucketSpace::PowerOfTwo(k) => 1u128 << k,
            BucketSpace::Exact(b) => u128::from(b),
        }
    }

    /// `n > b`, i.e. a collision is certain.
    pub fn is_exceeded_by(&self, n: u64) -> bool {
        u128::from(n) > self.count()
    }
}

impl fmt::Display for BucketSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BucketSpace::PowerOfTwo(k) => write!(f, "2^{k}"),
            BucketSpace::Exact(b) => write!(f, "{b}"),
        }
    }
}
