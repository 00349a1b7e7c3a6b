use super::bucket::BucketSpace;
use super::{expected_collisions, expected_collisions_real};
use crate::error::{Error, Result};

/// Relative bracket width at which bisection stops.
pub const SOLVER_REL_TOL: f64 = 1e-9;

/// Smallest `k` in `1..=64` with `expected_collisions(n, 2^k) <= target`.
pub fn min_bits_for_expected(n: u64, target: f64) -> Option<u32> {
    (1..=64).find(|&k| expected_collisions(n, BucketSpace::PowerOfTwo(k)) <= target)
}

/// Sample size `n*` (real-valued) with `expected_collisions(n*) = target`,
/// found by bisection on `[lo, hi]`.
pub fn sample_size_for_expected(space: BucketSpace, target: f64, lo: f64, hi: f64) -> Result<f64> {
    if !(target > 0.0) {
        return Err(Error::Argument(format!(
            "target must be positive, got {target}"
        )));
    }
    if !(lo.is_finite() && hi.is_finite() && 0.0 <= lo && lo < hi) {
        return Err(Error::Argument(format!(
            "need 0 <= lo < hi, got [{lo}, {hi}]"
        )));
    }
    let g = |n: f64| expected_collisions_real(n, space) - target;
    let (mut lo, mut hi) = (lo, hi);
    let (g_lo, g_hi) = (g(lo), g(hi));
    if g_lo == 0.0 {
        return Ok(lo);
    }
    if g_hi == 0.0 {
        return Ok(hi);
    }
    if g_lo.signum() == g_hi.signum() {
        return Err(Error::Bracketing(format!(
            "no sign change of expected_collisions - {target} on [{lo}, {hi}]"
        )));
    }
    let lo_negative = g_lo < 0.0;
    for _ in 0..2000 {
        let mid = 0.5 * (lo + hi);
        if hi - lo <= SOLVER_REL_TOL * mid.abs() || mid == lo || mid == hi {
            return Ok(mid);
        }
        let gm = g(mid);
        if gm == 0.0 {
            return Ok(mid);
        }
        if (gm < 0.0) == lo_negative {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// A bracket `[1, hi]` for [`sample_size_for_expected`], doubling `hi` until
/// the expectation reaches `target`.
pub fn bracket_sample_size(space: BucketSpace, target: f64) -> Result<(f64, f64)> {
    let mut hi = 2.0;
    while expected_collisions_real(hi, space) < target {
        hi *= 2.0;
        if hi > 1e30 {
            return Err(Error::Bracketing(format!(
                "expected collisions stay below {target} for n <= 1e30"
            )));
        }
    }
    Ok((1.0, hi))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn min_bits_examples() {
        assert_eq!(min_bits_for_expected(1_000_000, 1.0), Some(39));
        assert_eq!(min_bits_for_expected(1, 1.0), Some(1));
        assert_eq!(min_bits_for_expected(1_000_000, 120.0), Some(32));
        let e31 = expected_collisions(1_000_000, BucketSpace::PowerOfTwo(31));
        assert!(e31 > 120.0 && (e31 - 232.8).abs() < 0.1);
        assert_eq!(min_bits_for_expected(u64::MAX, 1e-30), None);
    }

    #[test]
    fn sample_size_examples() {
        let n = sample_size_for_expected(BucketSpace::PowerOfTwo(64), 1.0, 1e6, 1e10).unwrap();
        assert!((n - 6.074e9).abs() < 1e6, "{n}");

        let k32 = BucketSpace::PowerOfTwo(32);
        let target = expected_collisions(1_000_000, k32);
        let n = sample_size_for_expected(k32, target, 1e3, 1e9).unwrap();
        assert!((n - 1e6).abs() < 1.0, "{n}");

        let n = sample_size_for_expected(k32, 1.0, 1e2, 1e9).unwrap();
        assert!((expected_collisions_real(n, k32) - 1.0).abs() < 1e-6);
    }

    #[test]
    fn bracketing_errors() {
        let k64 = BucketSpace::PowerOfTwo(64);
        assert!(matches!(
            sample_size_for_expected(k64, 1.0, 1e6, 1e7),
            Err(Error::Bracketing(_))
        ));
        assert!(matches!(
            sample_size_for_expected(k64, -1.0, 1e6, 1e10),
            Err(Error::Argument(_))
        ));
        let (lo, hi) = bracket_sample_size(k64, 1.0).unwrap();
        let n = sample_size_for_expected(k64, 1.0, lo, hi).unwrap();
        assert!((n - 6.074e9).abs() < 1e6);
    }
}
