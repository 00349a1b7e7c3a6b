//! Numerically stable primitives: `expm1`, `log1p` and compensated
//! accumulation of `log1p` terms.
//!
//! [`expm1_ref`] is the three-region reference algorithm (direct evaluation,
//! exp-minus-one plus a Newton step, and a second-order Taylor start plus a
//! Newton step). Everything else in the crate uses the platform intrinsics
//! [`f64::exp_m1`] and [`f64::ln_1p`]; the reference version exists so its
//! behaviour can be compared against them.

use crate::error::{Error, Result};

/// Below this magnitude `expm1_ref` returns its argument unchanged.
pub const EXPM1_TINY: f64 = f64::EPSILON;
/// Upper end of the Taylor-start region.
pub const EXPM1_TAYLOR_MAX: f64 = 1e-8;
/// Above this magnitude `exp(x) - 1` suffers negligible cancellation.
pub const EXPM1_DIRECT_MIN: f64 = 0.697;

/// Which branch of [`expm1_ref`] handles a given argument.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Expm1Region {
    /// `|x| < eps`: returns `x`.
    Identity,
    /// `eps <= |x| <= 1e-8`: `(x/2 + 1) x` followed by one Newton step.
    Taylor,
    /// `1e-8 < |x| <= 0.697`: `exp(x) - 1` followed by one Newton step.
    Newton,
    /// `|x| > 0.697`: `exp(x) - 1`.
    Direct,
}

impl Expm1Region {
    pub fn of(x: f64) -> Self {
        let a = x.abs();
        if a < EXPM1_TINY {
            Expm1Region::Identity
        } else if a > EXPM1_DIRECT_MIN {
            Expm1Region::Direct
        } else if a > EXPM1_TAYLOR_MAX {
            Expm1Region::Newton
        } else {
            Expm1Region::Taylor
        }
    }
}

/// Reference `exp(x) - 1`.
///
/// One Newton step on `f(y) = log(1 + y) - x` refines the starting value in
/// the two middle regions. Not reliable for `y` close to `-1`, which only
/// occurs in the direct region anyway.
pub fn expm1_ref(x: f64) -> f64 {
    let y = match Expm1Region::of(x) {
        Expm1Region::Identity => return x,
        Expm1Region::Direct => return x.exp() - 1.0,
        Expm1Region::Newton => x.exp() - 1.0,
        Expm1Region::Taylor => (x / 2.0 + 1.0) * x,
    };
    y - (1.0 + y) * (y.ln_1p() - x)
}

fn check_log1p_domain(x: f64) -> Result<()> {
    // NaN fails the comparison as well.
    if x > -1.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("log1p requires x > -1, got {x}")))
    }
}

/// `log(1 + x)` with full relative accuracy near zero, via the platform
/// intrinsic.
pub fn log1p_stable(x: f64) -> Result<f64> {
    check_log1p_domain(x)?;
    Ok(x.ln_1p())
}

/// Portable `log(1 + x)` for hosts without an accurate intrinsic.
///
/// Forms `u = 1 + x` and corrects for the rounding committed there:
/// `log(u) * x / (u - 1)`. Accurate to a few ulps for all `x > -1`.
pub fn log1p_fallback(x: f64) -> Result<f64> {
    check_log1p_domain(x)?;
    let u = 1.0 + x;
    if u == 1.0 {
        Ok(x)
    } else if u.is_infinite() {
        Ok(u.ln())
    } else {
        Ok(u.ln() * x / (u - 1.0))
    }
}

/// Neumaier's variant of Kahan summation.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    compensation: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, value: f64) {
        let t = self.sum + value;
        if self.sum.abs() >= value.abs() {
            self.compensation += (self.sum - t) + value;
        } else {
            self.compensation += (value - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

impl Extend<f64> for CompensatedSum {
    fn extend<I: IntoIterator<Item = f64>>(&mut self, iter: I) {
        for v in iter {
            self.add(v);
        }
    }
}

/// `sum_i log1p(terms[i])` with compensated accumulation.
pub fn sum_log1p<I>(terms: I) -> Result<f64>
where
    I: IntoIterator<Item = f64>,
{
    let mut acc = CompensatedSum::new();
    for t in terms {
        acc.add(log1p_stable(t)?);
    }
    Ok(acc.value())
}

/// A naive and a stable evaluation of the same quantity, side by side.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StableEvalReport {
    pub input: f64,
    pub naive_value: f64,
    pub stable_value: f64,
    /// `|stable - naive| / |stable|`; `None` when the stable value is zero.
    pub relative_error: Option<f64>,
}

impl StableEvalReport {
    pub fn new(input: f64, naive_value: f64, stable_value: f64) -> Self {
        Self {
            input,
            naive_value,
            stable_value,
            relative_error: relative_error(naive_value, stable_value),
        }
    }
}

/// `|reference - value| / |reference|`, or `None` if `reference` is zero or
/// the quotient is not finite.
pub fn relative_error(value: f64, reference: f64) -> Option<f64> {
    if reference == 0.0 {
        return None;
    }
    let e = ((reference - value) / reference).abs();
    e.is_finite().then_some(e)
}
