//! Closed-form collision mathematics.
//!
//! A collision is a draw equal to some earlier draw. For `n` uniform draws
//! into `b` buckets the expected number of collisions is
//! `n - b (1 - (1 - 1/b)^n)` and the probability of at least one collision is
//! `1 - prod_{i=1}^{n-1} (1 - i/b)`. Both literal forms cancel catastrophically
//! once `1/b` drops below the double-precision epsilon; the stable forms
//! rewrite them through `expm1` and `log1p`.

mod bucket;
mod inverse;
mod pmf;
mod stirling;

pub use bucket::{BucketSpace, MAX_EXACT_BUCKETS};
pub use inverse::{
    bracket_sample_size, min_bits_for_expected, sample_size_for_expected, SOLVER_REL_TOL,
};
pub use pmf::{
    collision_pmf, collision_pmf_exact, CollisionPmf, PmfLimits, PmfMode, PmfRepresentation,
};
pub use stirling::{stirling2, stirling2_log_row, StirlingTable, StirlingValue};

use crate::stable_math::{sum_log1p, StableEvalReport};

/// Expected collisions by the literal formula `n - b (1 - (1 - 1/b)^n)`.
///
/// Kept to demonstrate its failure: for `b = 2^k`, `k >= 54`, the term
/// `1 - 2^-k` rounds to `1` and the result collapses to `n`.
pub fn expected_collisions_naive(n: u64, space: BucketSpace) -> f64 {
    let n = n as f64;
    let b = space.as_f64();
    let miss = 1.0 - space.reciprocal();
    n - b * (1.0 - miss.powf(n))
}

/// Expected collisions `n + b expm1(n log1p(-1/b))`.
///
/// Returns `0` for `n <= 1` and is clamped to `[0, n - 1]` otherwise.
pub fn expected_collisions(n: u64, space: BucketSpace) -> f64 {
    if n <= 1 {
        return 0.0;
    }
    expected_collisions_real(n as f64, space).clamp(0.0, (n - 1) as f64)
}

/// The stable expectation on the real-valued extension of `n`, unclamped.
/// Used by the inverse solver.
pub fn expected_collisions_real(n: f64, space: BucketSpace) -> f64 {
    if n == 0.0 {
        return 0.0;
    }
    let b = space.as_f64();
    n + b * (n * (-space.reciprocal()).ln_1p()).exp_m1()
}

/// `1 - prod_{i=1}^{n-1} (1 - i/b)` evaluated literally, over exactly
/// `n - 1` factors.
pub fn collision_probability_naive(n: u64, space: BucketSpace) -> f64 {
    let mut prod = 1.0;
    for i in 1..n {
        prod *= 1.0 - space.ratio(i);
        if prod == 0.0 {
            break;
        }
    }
    1.0 - prod
}

/// Probability of at least one collision,
/// `-expm1(sum_{i=1}^{n-1} log1p(-i/b))`, with `1` for `n > b`.
pub fn collision_probability(n: u64, space: BucketSpace) -> f64 {
    if n <= 1 {
        return 0.0;
    }
    if space.is_exceeded_by(n) {
        return 1.0;
    }
    match sum_log1p((1..n).map(|i| -space.ratio(i))) {
        Ok(log_no_collision) => (-log_no_collision.exp_m1()).clamp(0.0, 1.0),
        // i/b rounded up to 1 for i close to b: a vanishing factor.
        Err(_) => 1.0,
    }
}

/// Naive versus stable expectation for `b = 2^k` over a range of `k`.
pub fn expectation_scan(
    n: u64,
    bits: impl IntoIterator<Item = u32>,
) -> Vec<(u32, StableEvalReport)> {
    bits.into_iter()
        .map(|k| {
            let space = BucketSpace::PowerOfTwo(k);
            let report = StableEvalReport::new(
                f64::from(k),
                expected_collisions_naive(n, space),
                expected_collisions(n, space),
            );
            (k, report)
        })
        .collect()
}

/// Naive versus stable collision probability for `b = 2^k` over a range
/// of `k`.
pub fn probability_error_curve(
    n: u64,
    bits: impl IntoIterator<Item = u32>,
) -> Vec<(u32, StableEvalReport)> {
    bits.into_iter()
        .map(|k| {
            let space = BucketSpace::PowerOfTwo(k);
            let report = StableEvalReport::new(
                f64::from(k),
                collision_probability_naive(n, space),
                collision_probability(n, space),
            );
            (k, report)
        })
        .collect()
}
