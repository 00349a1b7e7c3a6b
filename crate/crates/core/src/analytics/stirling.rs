use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Stirling numbers of the second kind, `S(n, l)` for `0 <= l <= n <= max_n`.
///
/// Tables up to [`StirlingTable::EXACT_MAX_N`] hold exact integers; larger
/// ones hold natural logarithms (`-inf` for zero entries).
#[derive(Debug, Clone)]
pub enum StirlingTable {
    Exact { rows: Vec<Vec<BigUint>> },
    Log { rows: Vec<Vec<f64>> },
}

/// A single table entry.
#[derive(Debug, Clone, PartialEq)]
pub enum StirlingValue {
    Exact(BigUint),
    /// `ln S(n, l)`.
    Log(f64),
}

impl StirlingValue {
    pub fn ln(&self) -> f64 {
        match self {
            StirlingValue::Exact(v) if v.is_zero() => f64::NEG_INFINITY,
            StirlingValue::Exact(v) => ln_biguint(v),
            StirlingValue::Log(l) => *l,
        }
    }
}

impl StirlingTable {
    pub const EXACT_MAX_N: usize = 64;

    /// Builds the triangle with `S(n, l) = l S(n-1, l) + S(n-1, l-1)`.
    pub fn new(max_n: usize) -> Self {
        if max_n <= Self::EXACT_MAX_N {
            Self::exact(max_n)
        } else {
            let mut rows = Vec::with_capacity(max_n + 1);
            rows.push(vec![0.0]);
            for n in 1..=max_n {
                rows.push(next_log_row(&rows[n - 1]));
            }
            StirlingTable::Log { rows }
        }
    }

    /// An exact table regardless of size.
    pub fn exact(max_n: usize) -> Self {
        let mut rows: Vec<Vec<BigUint>> = Vec::with_capacity(max_n + 1);
        rows.push(vec![BigUint::one()]);
        for n in 1..=max_n {
            let prev = &rows[n - 1];
            let mut row = vec![BigUint::zero(); n + 1];
            for l in 1..=n {
                let mut v = prev.get(l - 1).cloned().unwrap_or_default();
                if let Some(p) = prev.get(l) {
                    v += p * BigUint::from(l);
                }
                row[l] = v;
            }
            rows.push(row);
        }
        StirlingTable::Exact { rows }
    }

    pub fn max_n(&self) -> usize {
        match self {
            StirlingTable::Exact { rows } => rows.len() - 1,
            StirlingTable::Log { rows } => rows.len() - 1,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, StirlingTable::Exact { .. })
    }

    pub fn get(&self, n: usize, l: usize) -> Result<StirlingValue> {
        if l > n {
            return Err(Error::Argument(format!(
                "S(n, l) needs l <= n, got n={n}, l={l}"
            )));
        }
        if n > self.max_n() {
            return Err(Error::Argument(format!(
                "n={n} exceeds table size {}",
                self.max_n()
            )));
        }
        Ok(match self {
            StirlingTable::Exact { rows } => StirlingValue::Exact(rows[n][l].clone()),
            StirlingTable::Log { rows } => StirlingValue::Log(rows[n][l]),
        })
    }

    /// Row `n` as exact integers, when the table is exact.
    pub fn exact_row(&self, n: usize) -> Option<&[BigUint]> {
        match self {
            StirlingTable::Exact { rows } => rows.get(n).map(Vec::as_slice),
            StirlingTable::Log { .. } => None,
        }
    }
}

/// `S(n, l)` from `table`.
pub fn stirling2(n: usize, l: usize, table: &StirlingTable) -> Result<StirlingValue> {
    table.get(n, l)
}

/// `ln S(n, l)` for `l = 0..=n`, computed row by row in `O(n)` memory.
pub fn stirling2_log_row(n: usize) -> Vec<f64> {
    let mut row = vec![0.0];
    for _ in 1..=n {
        row = next_log_row(&row);
    }
    row
}

fn next_log_row(prev: &[f64]) -> Vec<f64> {
    let n = prev.len();
    let mut row = vec![f64::NEG_INFINITY; n + 1];
    for l in 1..=n {
        let stay = prev
            .get(l)
            .map_or(f64::NEG_INFINITY, |p| (l as f64).ln() + p);
        row[l] = log_add_exp(stay, prev[l - 1]);
    }
    row
}

pub(crate) fn log_add_exp(a: f64, b: f64) -> f64 {
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    if lo == f64::NEG_INFINITY {
        return hi;
    }
    hi + (lo - hi).exp().ln_1p()
}

pub(crate) fn ln_biguint(v: &BigUint) -> f64 {
    let bits = v.bits();
    if bits <= 1000 {
        // Converts to f64 without overflow.
        num_traits::ToPrimitive::to_f64(v)
            .unwrap_or(f64::INFINITY)
            .ln()
    } else {
        let shift = bits - 64;
        let top = num_traits::ToPrimitive::to_f64(&(v >> shift)).unwrap();
        top.ln() + shift as f64 * std::f64::consts::LN_2
    }
}
