//! Deterministic k-bit integer streams.
//!
//! Three generator families are available: the 32-bit Mersenne Twister, the
//! combined multiple recursive generator MRG32k3a (output scaled to 32 bits)
//! and a 64-bit splitmix counter. A [`KBitStream`] turns any of them into a
//! stream of `k`-bit integers: fewer bits than the native width keep the top
//! bits, more bits than a 32-bit family produces concatenate two successive
//! outputs.

mod mrg32k3a;
mod mt19937;
mod split;

use std::fmt;
use std::str::FromStr;

pub use mrg32k3a::Mrg32k3a;
pub use mt19937::Mt19937;
pub use split::{mix64, SplitMix64};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    Mt19937,
    Cmrg,
    SplitCounter,
}

impl Family {
    /// Bits produced by one step of the underlying recursion.
    pub fn native_bits(self) -> u32 {
        match self {
            Family::Mt19937 | Family::Cmrg => 32,
            Family::SplitCounter => 64,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Family::Mt19937 => "mt19937",
            Family::Cmrg => "cmrg",
            Family::SplitCounter => "split",
        }
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "mt19937" | "mt" | "mersenne-twister" => Ok(Family::Mt19937),
            "cmrg" | "mrg32k3a" | "lecuyer-cmrg" => Ok(Family::Cmrg),
            "split" | "splitcounter" | "splitmix64" => Ok(Family::SplitCounter),
            other => Err(Error::Parse(format!("unknown generator family '{other}'"))),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Family, seed and output width of a stream. Text form `family:seed:bits`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GeneratorSpec {
    pub family: Family,
    pub seed: u64,
    pub output_bits: u32,
}

impl GeneratorSpec {
    pub fn new(family: Family, seed: u64, output_bits: u32) -> Result<Self> {
        if !(1..=64).contains(&output_bits) {
            return Err(Error::Argument(format!(
                "output bits must be in 1..=64, got {output_bits}"
            )));
        }
        Ok(GeneratorSpec {
            family,
            seed,
            output_bits,
        })
    }

    /// The generator for parallel worker `index`: seed `mix64(seed + index)`.
    pub fn for_worker(&self, index: u64) -> Self {
        GeneratorSpec {
            seed: mix64(self.seed.wrapping_add(index)),
            ..*self
        }
    }

    pub fn with_bits(&self, output_bits: u32) -> Result<Self> {
        GeneratorSpec::new(self.family, self.seed, output_bits)
    }

    pub fn stream(&self) -> KBitStream {
        KBitStream::new(*self)
    }
}

impl fmt::Display for GeneratorSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.family, self.seed, self.output_bits)
    }
}

impl FromStr for GeneratorSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let [family, seed, bits] = parts.as_slice() else {
            return Err(Error::Parse(format!(
                "generator must look like family:seed:bits, got '{s}'"
            )));
        };
        let seed = seed
            .parse()
            .map_err(|_| Error::Parse(format!("bad seed '{seed}'")))?;
        let bits = bits
            .parse()
            .map_err(|_| Error::Parse(format!("bad bit count '{bits}'")))?;
        GeneratorSpec::new(family.parse()?, seed, bits)
    }
}

#[derive(Debug, Clone)]
enum Engine {
    Mt(Box<Mt19937>),
    Mrg(Mrg32k3a),
    Split(SplitMix64),
}

impl Engine {
    fn new(spec: &GeneratorSpec) -> Self {
        match spec.family {
            Family::Mt19937 => Engine::Mt(Box::new(Mt19937::from_u64(spec.seed))),
            Family::Cmrg => Engine::Mrg(Mrg32k3a::from_u64(spec.seed)),
            Family::SplitCounter => Engine::Split(SplitMix64::new(spec.seed)),
        }
    }

    /// 64 fresh bits, MSB first.
    fn next_wide(&mut self) -> u64 {
        match self {
            Engine::Mt(g) => (u64::from(g.next_u32()) << 32) | u64::from(g.next_u32()),
            Engine::Mrg(g) => (u64::from(g.next_u32()) << 32) | u64::from(g.next_u32()),
            Engine::Split(g) => g.next_u64(),
        }
    }

    /// One native output, left-aligned in 64 bits.
    fn next_native(&mut self) -> u64 {
        match self {
            Engine::Mt(g) => u64::from(g.next_u32()) << 32,
            Engine::Mrg(g) => u64::from(g.next_u32()) << 32,
            Engine::Split(g) => g.next_u64(),
        }
    }
}

/// A stream of `k`-bit integers from a [`GeneratorSpec`].
#[derive(Debug, Clone)]
pub struct KBitStream {
    spec: GeneratorSpec,
    engine: Engine,
    position: u64,
}

impl KBitStream {
    pub fn new(spec: GeneratorSpec) -> Self {
        KBitStream {
            engine: Engine::new(&spec),
            spec,
            position: 0,
        }
    }

    pub fn spec(&self) -> &GeneratorSpec {
        &self.spec
    }

    pub fn bits(&self) -> u32 {
        self.spec.output_bits
    }

    /// Number of draws taken so far.
    pub fn position(&self) -> u64 {
        self.position
    }

    /// Next integer in `[0, 2^k)`.
    pub fn next_kbit(&mut self) -> u64 {
        self.next_bits(self.spec.output_bits)
    }

    /// A fresh `bits`-bit pattern (`1..=64`) regardless of the stream's own
    /// width. Counts as one draw.
    pub fn next_bits(&mut self, bits: u32) -> u64 {
        debug_assert!((1..=64).contains(&bits));
        self.position += 1;
        let word = if bits <= self.spec.family.native_bits() {
            self.engine.next_native()
        } else {
            self.engine.next_wide()
        };
        word >> (64 - bits)
    }

    /// Next value `next_kbit() / 2^k` in `[0, 1)`.
    pub fn next_unit(&mut self) -> f64 {
        kbit_to_unit(self.next_kbit(), self.spec.output_bits)
    }

    /// Whether distinct k-bit integers always map to distinct doubles
    /// under [`next_unit`](Self::next_unit), i.e. `k <= 53`.
    pub fn unit_is_injective(&self) -> bool {
        self.spec.output_bits <= f64::MANTISSA_DIGITS
    }
}

impl Iterator for KBitStream {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        Some(self.next_kbit())
    }
}

/// `value / 2^k`. For `k > 53` only the top 53 bits are kept so the result
/// stays below 1; adjacent integers then share a double.
pub fn kbit_to_unit(value: u64, k: u32) -> f64 {
    debug_assert!((1..=64).contains(&k));
    let (v, k) = if k > f64::MANTISSA_DIGITS {
        (value >> (k - f64::MANTISSA_DIGITS), f64::MANTISSA_DIGITS)
    } else {
        (value, k)
    };
    v as f64 * crate::ieee754::pow2(-(k as i32))
}

/// Consecutive rejections after which the sampler gives up.
pub const MAX_REJECTIONS: u32 = 1_000_000;

/// Uniform integer in `[1, n]` without modulo bias: draws
/// `ceil(log2 n)`-bit patterns until one is below `n`, then adds 1.
pub fn rand_int_rejection(stream: &mut KBitStream, n: u64) -> Result<u64> {
    if n == 0 {
        return Err(Error::Argument("rejection sampler needs n >= 1".into()));
    }
    if n == 1 {
        return Ok(1);
    }
    let bits = 64 - (n - 1).leading_zeros();
    for _ in 0..MAX_REJECTIONS {
        let v = stream.next_bits(bits);
        if v < n {
            return Ok(v + 1);
        }
    }
    Err(Error::Generator(format!(
        "{MAX_REJECTIONS} consecutive rejections for n={n}; the generator looks broken"
    )))
}
