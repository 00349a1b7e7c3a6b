use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use super::bucket::BucketSpace;
use super::stirling::{log_add_exp, StirlingTable};
use crate::error::{Error, Result};
use crate::stable_math::CompensatedSum;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PmfRepresentation {
    ExactRational,
    LogDomain,
}

/// How [`collision_pmf`] evaluates the distribution.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PmfMode {
    /// Exact up to `limits.exact_max_n`, log-domain above.
    #[default]
    Auto,
    ExactRational,
    LogDomain,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PmfLimits {
    pub exact_max_n: u64,
    pub log_max_n: u64,
}

impl Default for PmfLimits {
    fn default() -> Self {
        Self {
            exact_max_n: 64,
            log_max_n: 10_000,
        }
    }
}

/// Distribution of the number `C` of collisions among `n` draws into a
/// [`BucketSpace`]. `probs[c] = P(C = c)` for `c = 0..n`.
#[derive(Debug, Clone)]
pub struct CollisionPmf {
    pub n: u64,
    pub space: BucketSpace,
    pub probs: Vec<f64>,
    /// The exact values, in exact-rational mode.
    pub exact: Option<Vec<BigRational>>,
    /// `ln P(C = c)`, in log-domain mode. Retains values that underflow
    /// `probs`.
    pub log_probs: Option<Vec<f64>>,
    pub representation: PmfRepresentation,
}

impl CollisionPmf {
    /// `sum_c P(C = c)`.
    pub fn total(&self) -> f64 {
        let mut s = CompensatedSum::new();
        s.extend(self.probs.iter().copied());
        s.value()
    }

    /// `sum_c c P(C = c)`.
    pub fn mean(&self) -> f64 {
        if let Some(exact) = &self.exact {
            let m = exact
                .iter()
                .enumerate()
                .fold(BigRational::zero(), |acc, (c, p)| {
                    acc + p * BigRational::from_integer(c.into())
                });
            return m.to_f64().unwrap_or(f64::NAN);
        }
        let mut s = CompensatedSum::new();
        s.extend(self.probs.iter().enumerate().map(|(c, p)| c as f64 * p));
        s.value()
    }

    /// `P(C >= 1) = 1 - P(C = 0)`.
    pub fn collision_probability(&self) -> f64 {
        if let Some(exact) = &self.exact {
            return (BigRational::one() - &exact[0])
                .to_f64()
                .unwrap_or(f64::NAN);
        }
        1.0 - self.probs[0]
    }
}

/// The collision distribution with default mode and caps.
pub fn collision_pmf_exact(n: u64, space: BucketSpace) -> Result<CollisionPmf> {
    collision_pmf(n, space, PmfMode::Auto, PmfLimits::default())
}

/// `P(C = c) = (b)_{n-c} S(n, n-c) / b^n` where `(b)_l` is the falling
/// factorial.
pub fn collision_pmf(
    n: u64,
    space: BucketSpace,
    mode: PmfMode,
    limits: PmfLimits,
) -> Result<CollisionPmf> {
    if n == 0 {
        return Err(Error::Argument("pmf needs n >= 1".into()));
    }
    let exact = match mode {
        PmfMode::ExactRational => true,
        PmfMode::LogDomain => false,
        PmfMode::Auto => n <= limits.exact_max_n,
    };
    if exact {
        if n > limits.exact_max_n {
            return Err(Error::Capacity(format!(
                "exact pmf is capped at n <= {}, got n={n}",
                limits.exact_max_n
            )));
        }
        Ok(exact_pmf(n as usize, space))
    } else {
        if n > limits.log_max_n {
            return Err(Error::Capacity(format!(
                "log-domain pmf is capped at n <= {}, got n={n}",
                limits.log_max_n
            )));
        }
        Ok(log_pmf(n as usize, space))
    }
}

fn exact_pmf(n: usize, space: BucketSpace) -> CollisionPmf {
    let b = BigUint::from(space.count());
    let table = StirlingTable::exact(n);
    let stirling = table.exact_row(n).expect("exact table");

    // falling[l] = b (b-1) ... (b-l+1)
    let mut falling = Vec::with_capacity(n + 1);
    falling.push(BigUint::one());
    for l in 1..=n {
        let j = BigUint::from(l - 1);
        let next = if j < b {
            &falling[l - 1] * (&b - j)
        } else {
            BigUint::zero()
        };
        falling.push(next);
    }
    let denom = num_traits::pow(b, n);

    let exact: Vec<BigRational> = (0..n)
        .map(|c| {
            let l = n - c;
            let num = &falling[l] * &stirling[l];
            BigRational::new(num.into(), denom.clone().into())
        })
        .collect();
    let probs = exact.iter().map(|p| p.to_f64().unwrap_or(0.0)).collect();
    CollisionPmf {
        n: n as u64,
        space,
        probs,
        exact: Some(exact),
        log_probs: None,
        representation: PmfRepresentation::ExactRational,
    }
}

/// Log-domain evaluation through the occupancy recurrence on the number `d`
/// of distinct values after `j` draws:
///
/// `P_{j+1}(d) = P_j(d) d/b + P_j(d-1) (1 - (d-1)/b)`.
///
/// Unrolled, the second factor accumulates the falling factorial as
/// `sum log1p(-i/b)` and the first the `l^m` weights behind `S(n, l)`, but
/// every intermediate stays a log-probability near zero instead of a sum of
/// large logs that cancel.
fn log_pmf(n: usize, space: BucketSpace) -> CollisionPmf {
    // log_stay[d] = ln(d / b), log_new[d] = log1p(-d / b)
    let ln_b = space.ln();
    let log_stay: Vec<f64> = (0..=n)
        .map(|d| {
            if d == 0 {
                f64::NEG_INFINITY
            } else {
                (d as f64).ln() - ln_b
            }
        })
        .collect();
    let log_new: Vec<f64> = (0..=n)
        .map(|d| {
            let r = space.ratio(d as u64);
            if r >= 1.0 {
                f64::NEG_INFINITY
            } else {
                (-r).ln_1p()
            }
        })
        .collect();

    // row[d] = ln P_j(d), d = 0..=j
    let mut row = vec![f64::NEG_INFINITY; n + 1];
    row[1] = 0.0;
    for j in 1..n {
        for d in (1..=j + 1).rev() {
            let stay = row[d] + log_stay[d];
            let fresh = row[d - 1] + log_new[d - 1];
            row[d] = log_add_exp(stay, fresh);
        }
    }

    let log_probs: Vec<f64> = (0..n).map(|c| row[n - c].min(0.0)).collect();
    let probs = log_probs.iter().map(|lp| lp.exp()).collect();
    CollisionPmf {
        n: n as u64,
        space,
        probs,
        exact: None,
        log_probs: Some(log_probs),
        representation: PmfRepresentation::LogDomain,
    }
}
