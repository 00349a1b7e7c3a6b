//! Counting collisions and ties in samples.
//!
//! Two conventions are in use. The *duplicate* count `C` is the number of
//! draws equal to some earlier draw. The *tie* count `T` follows Kendall:
//! every member of a group of equal values is a tie, so a value seen `m >= 2`
//! times contributes `m`. A sample with `C >= 1` duplicates has between
//! `C + 1` and `2C` ties.
//!
//! Equality is always bitwise (doubles compare by their 64-bit payload).

use std::collections::BTreeMap;
use std::io::{self, Write};

use rayon::prelude::*;
use rustc_hash::FxHashMap;

use crate::error::{Error, Result};
use crate::prng::{GeneratorSpec, KBitStream};

/// Default limit on the number of draws a single trace may hold.
pub const DEFAULT_MAX_DISTINCT: u64 = 100_000_000;

/// A value compared by bit pattern.
pub trait CollisionKey {
    fn key(&self) -> u64;
}

macro_rules! int_key {
    ($($t:ty),*) => {$(
        impl CollisionKey for $t {
            fn key(&self) -> u64 {
                *self as u64
            }
        }
    )*};
}

int_key!(u8, u16, u32, u64, usize, i8, i16, i32, i64);

impl CollisionKey for f64 {
    fn key(&self) -> u64 {
        self.to_bits()
    }
}

impl<T: CollisionKey> CollisionKey for &T {
    fn key(&self) -> u64 {
        (*self).key()
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TieSummary {
    pub n: u64,
    /// `C`: draws equal to an earlier draw.
    pub duplicates: u64,
    /// `T`: total multiplicity of values seen more than once.
    pub ties: u64,
    /// multiplicity `m >= 2` to number of distinct values seen `m` times.
    pub histogram: BTreeMap<u64, u64>,
}

impl TieSummary {
    /// Summary from a table of per-value multiplicities.
    pub fn from_multiplicities(n: u64, multiplicities: impl IntoIterator<Item = u64>) -> Self {
        let mut histogram = BTreeMap::new();
        for m in multiplicities.into_iter().filter(|&m| m >= 2) {
            *histogram.entry(m).or_insert(0) += 1;
        }
        let duplicates = histogram.iter().map(|(m, c)| (m - 1) * c).sum();
        let ties = histogram.iter().map(|(m, c)| m * c).sum();
        TieSummary {
            n,
            duplicates,
            ties,
            histogram,
        }
    }

    /// Combines summaries of independent samples.
    pub fn merge(&mut self, other: &TieSummary) {
        self.n += other.n;
        self.duplicates += other.duplicates;
        self.ties += other.ties;
        for (m, c) in &other.histogram {
            *self.histogram.entry(*m).or_insert(0) += c;
        }
    }

    /// Checks `C = sum (m-1) count(m)`, `T = sum m count(m)` and
    /// `C + 1 <= T <= 2C` (or `T = C = 0`).
    pub fn check_invariants(&self) -> std::result::Result<(), String> {
        let c: u64 = self.histogram.iter().map(|(m, k)| (m - 1) * k).sum();
        let t: u64 = self.histogram.iter().map(|(m, k)| m * k).sum();
        if c != self.duplicates {
            return Err(format!(
                "duplicates {} != histogram sum {c}",
                self.duplicates
            ));
        }
        if t != self.ties {
            return Err(format!("ties {} != histogram sum {t}", self.ties));
        }
        if self.duplicates == 0 {
            if self.ties != 0 {
                return Err(format!("no duplicates but {} ties", self.ties));
            }
        } else if self.ties < self.duplicates + 1 || self.ties > 2 * self.duplicates {
            return Err(format!(
                "ties {} outside [C+1, 2C] for C = {}",
                self.ties, self.duplicates
            ));
        }
        Ok(())
    }
}

/// Indices (1-based) of draws that repeat an earlier draw.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CollisionTrace {
    pub n: u64,
    pub positions: Vec<u64>,
}

impl CollisionTrace {
    /// Running collision count after each draw `1..=n`.
    pub fn cumulative(&self) -> impl Iterator<Item = u64> + '_ {
        let mut next = self.positions.iter().peekable();
        let mut count = 0;
        (1..=self.n).map(move |i| {
            while next.next_if(|&&p| p == i).is_some() {
                count += 1;
            }
            count
        })
    }

    /// `index,cumulative_collisions` for every draw.
    pub fn write_cumulative_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "index,cumulative_collisions")?;
        for (i, c) in self.cumulative().enumerate() {
            writeln!(out, "{},{c}", i + 1)?;
        }
        Ok(())
    }

    /// `collision_rank,position`, one row per collision.
    pub fn write_positions_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "collision_rank,position")?;
        for (rank, p) in self.positions.iter().enumerate() {
            writeln!(out, "{},{p}", rank + 1)?;
        }
        Ok(())
    }
}

/// Streaming duplicate and tie counter.
#[derive(Debug, Clone, Default)]
pub struct TieCounter {
    counts: FxHashMap<u64, u64>,
    seen: u64,
    positions: Vec<u64>,
}

impl TieCounter {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_capacity(capacity: usize) -> Self {
        TieCounter {
            counts: FxHashMap::with_capacity_and_hasher(capacity, Default::default()),
            ..Default::default()
        }
    }

    /// Records a value; returns whether it repeats an earlier one.
    pub fn observe(&mut self, key: u64) -> bool {
        self.seen += 1;
        let m = self.counts.entry(key).or_insert(0);
        *m += 1;
        if *m > 1 {
            self.positions.push(self.seen);
            true
        } else {
            false
        }
    }

    pub fn duplicates(&self) -> u64 {
        self.positions.len() as u64
    }

    pub fn summary(&self) -> TieSummary {
        TieSummary::from_multiplicities(self.seen, self.counts.values().copied())
    }

    pub fn trace(&self) -> CollisionTrace {
        CollisionTrace {
            n: self.seen,
            positions: self.positions.clone(),
        }
    }

    pub fn into_parts(self) -> (TieSummary, CollisionTrace) {
        let summary = self.summary();
        let trace = CollisionTrace {
            n: self.seen,
            positions: self.positions,
        };
        (summary, trace)
    }
}

/// Counts with a single counter over `values`.
fn count_all<I>(values: I) -> TieCounter
where
    I: IntoIterator,
    I::Item: CollisionKey,
{
    let mut counter = TieCounter::new();
    for v in values {
        counter.observe(v.key());
    }
    counter
}

/// Number of elements equal to an earlier element.
pub fn count_duplicates<I>(values: I) -> u64
where
    I: IntoIterator,
    I::Item: CollisionKey,
{
    count_all(values).duplicates()
}

/// Sum of the multiplicities of all values occurring at least twice.
pub fn count_ties<I>(values: I) -> u64
where
    I: IntoIterator,
    I::Item: CollisionKey,
{
    count_all(values).summary().ties
}

pub fn tie_summary<I>(values: I) -> TieSummary
where
    I: IntoIterator,
    I::Item: CollisionKey,
{
    count_all(values).summary()
}

/// 1-based indices of duplicate occurrences, ascending.
pub fn collision_positions<I>(values: I) -> Vec<u64>
where
    I: IntoIterator,
    I::Item: CollisionKey,
{
    count_all(values).positions
}

/// Draws `n` values from `stream` and counts collisions among the k-bit
/// integers in one pass. Fails if `n` exceeds `max_distinct`.
pub fn trace_collisions(
    stream: &mut KBitStream,
    n: u64,
    max_distinct: u64,
) -> Result<(TieSummary, CollisionTrace)> {
    if n > max_distinct {
        return Err(Error::Capacity(format!(
            "n={n} exceeds the limit of {max_distinct} distinct values; \
             raise COLLISION_LAB_MAX_DISTINCT to allow it"
        )));
    }
    let mut counter = TieCounter::with_capacity(n.min(1 << 24) as usize);
    for _ in 0..n {
        counter.observe(stream.next_kbit());
    }
    Ok(counter.into_parts())
}

/// One summary per seed index `0..seeds`, each from
/// `spec.for_worker(index)`, computed in parallel.
pub fn simulate_seeds(
    spec: &GeneratorSpec,
    seeds: u64,
    n: u64,
    max_distinct: u64,
) -> Result<Vec<(GeneratorSpec, TieSummary)>> {
    (0..seeds)
        .into_par_iter()
        .map(|i| {
            let worker = spec.for_worker(i);
            let (summary, _) = trace_collisions(&mut worker.stream(), n, max_distinct)?;
            Ok((worker, summary))
        })
        .collect()
}

/// Sample mean and standard deviation of the duplicate counts.
pub fn duplicate_stats(summaries: &[TieSummary]) -> (f64, f64) {
    let k = summaries.len() as f64;
    if summaries.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let mean = summaries.iter().map(|s| s.duplicates as f64).sum::<f64>() / k;
    if summaries.len() < 2 {
        return (mean, f64::NAN);
    }
    let var = summaries
        .iter()
        .map(|s| (s.duplicates as f64 - mean).powi(2))
        .sum::<f64>()
        / (k - 1.0);
    (mean, var.sqrt())
}
