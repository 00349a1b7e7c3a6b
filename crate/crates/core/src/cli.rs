//! Command-line front end.
//!
//! Every subcommand writes either a human-readable report (7 significant
//! digits) or CSV (17 significant digits, lossless) to stdout or `--out`.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::analytics::{
    bracket_sample_size, collision_pmf, collision_probability, collision_probability_naive,
    expectation_scan, expected_collisions, expected_collisions_naive, min_bits_for_expected,
    probability_error_curve, sample_size_for_expected, BucketSpace, PmfLimits, PmfMode,
};
use crate::empirics::{duplicate_stats, simulate_seeds, trace_collisions, DEFAULT_MAX_DISTINCT};
use crate::error::{Error, Result};
use crate::ieee754::{decompose, machine_constants};
use crate::prng::GeneratorSpec;
use crate::stable_math::relative_error;

/// Overrides [`DEFAULT_MAX_DISTINCT`] for `simulate`.
pub const MAX_DISTINCT_ENV: &str = "COLLISION_LAB_MAX_DISTINCT";

pub const DEFAULT_N: u64 = 1_000_000;
pub const DEFAULT_BITS: u32 = 32;

#[derive(Debug, Parser)]
#[command(
    name = "collision-lab",
    version,
    about = "Collision statistics of k-bit random number generation"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
pub enum Format {
    Csv,
    #[default]
    Human,
}

#[derive(Debug, Clone, Args)]
pub struct Output {
    #[arg(long, value_enum, default_value_t = Format::Human)]
    pub format: Format,
    /// Write the report to this file instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct Space {
    /// k-bit setup: 2^k buckets (default 32).
    #[arg(long, conflicts_with = "buckets")]
    pub bits: Option<u32>,
    /// Explicit number of buckets.
    #[arg(long)]
    pub buckets: Option<u64>,
}

impl Space {
    fn explicit(&self) -> Result<Option<BucketSpace>> {
        match (self.bits, self.buckets) {
            (Some(k), None) => BucketSpace::bits(k).map(Some),
            (None, Some(b)) => BucketSpace::exact(b).map(Some),
            (None, None) => Ok(None),
            (Some(_), Some(_)) => Err(Error::Argument("give either --bits or --buckets".into())),
        }
    }

    fn resolve(&self) -> Result<BucketSpace> {
        Ok(self
            .explicit()?
            .unwrap_or(BucketSpace::PowerOfTwo(DEFAULT_BITS)))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
pub enum PmfModeArg {
    #[default]
    Auto,
    Exact,
    Log,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Expected number of collisions, naive and stable.
    Expect {
        #[arg(long, default_value_t = DEFAULT_N, value_parser = parse_count)]
        n: u64,
        #[command(flatten)]
        space: Space,
        #[command(flatten)]
        output: Output,
    },
    /// Expected collisions for each k in a range, as `k,naive,stable`.
    Scan {
        #[arg(long, default_value_t = DEFAULT_N, value_parser = parse_count)]
        n: u64,
        #[arg(long, default_value = "32:64", value_parser = parse_bit_range)]
        range: (u32, u32),
        #[command(flatten)]
        output: Output,
    },
    /// Probability of at least one collision, naive and stable.
    Prob {
        #[arg(long, default_value_t = DEFAULT_N, value_parser = parse_count)]
        n: u64,
        #[command(flatten)]
        space: Space,
        /// Emit the naive-vs-stable relative error for each k in --range.
        #[arg(long)]
        errcmp: bool,
        #[arg(long, default_value = "32:64", value_parser = parse_bit_range)]
        range: (u32, u32),
        #[command(flatten)]
        output: Output,
    },
    /// Distribution of the number of collisions, as `c,probability`.
    Pmf {
        #[arg(long, value_parser = parse_count)]
        n: u64,
        #[command(flatten)]
        space: Space,
        #[arg(long, value_enum, default_value_t = PmfModeArg::Auto)]
        mode: PmfModeArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Count collisions in generated samples.
    Simulate {
        #[arg(long, default_value_t = DEFAULT_N, value_parser = parse_count)]
        n: u64,
        /// Output bits of the generator (overrides the generator spec).
        #[arg(long)]
        bits: Option<u32>,
        /// Generator as family:seed:bits (mt19937, cmrg, split).
        #[arg(long, default_value = "mt19937:5489:32")]
        generator: GeneratorSpec,
        /// Number of independent seeds.
        #[arg(long, default_value_t = 1)]
        seeds: u64,
        /// Base seed for the worker streams (defaults to the generator seed).
        #[arg(long)]
        seed_base: Option<u64>,
        /// CSV `index,cumulative_collisions` for the first seed.
        #[arg(long)]
        trajectory: Option<PathBuf>,
        /// CSV `collision_rank,position` for the first seed.
        #[arg(long)]
        positions: Option<PathBuf>,
        #[command(flatten)]
        output: Output,
    },
    /// Inverse problems: smallest k for given n, or n for given k.
    Solve {
        #[arg(long, value_parser = parse_count)]
        n: Option<u64>,
        #[command(flatten)]
        space: Space,
        #[arg(long, default_value_t = 1.0)]
        target: f64,
        /// Bracket lo:hi for the sample-size root.
        #[arg(long, value_parser = parse_real_range)]
        range: Option<(f64, f64)>,
        #[command(flatten)]
        output: Output,
    },
    /// Sign, exponent and significand of a double (or xmin, eps, xmax).
    Inspect {
        #[arg(allow_hyphen_values = true)]
        value: String,
        #[command(flatten)]
        output: Output,
    },
}

/// Accepts plain integers and integral scientific notation such as `1e6`.
pub fn parse_count(s: &str) -> std::result::Result<u64, String> {
    if let Ok(v) = s.parse::<u64>() {
        return Ok(v);
    }
    match s.parse::<f64>() {
        Ok(v) if v >= 0.0 && v.fract() == 0.0 && v < 18446744073709551616.0 => Ok(v as u64),
        _ => Err(format!("'{s}' is not a non-negative integer count")),
    }
}

fn parse_pair<T: std::str::FromStr>(s: &str) -> std::result::Result<(T, T), String> {
    let (a, b) = s
        .split_once(':')
        .ok_or_else(|| format!("expected lo:hi, got '{s}'"))?;
    let lo = a
        .trim()
        .parse()
        .map_err(|_| format!("bad lower bound '{a}'"))?;
    let hi = b
        .trim()
        .parse()
        .map_err(|_| format!("bad upper bound '{b}'"))?;
    Ok((lo, hi))
}

pub fn parse_bit_range(s: &str) -> std::result::Result<(u32, u32), String> {
    let (lo, hi) = parse_pair::<u32>(s)?;
    if !(1 <= lo && lo <= hi && hi <= 64) {
        return Err(format!(
            "bit range must satisfy 1 <= lo <= hi <= 64, got {lo}:{hi}"
        ));
    }
    Ok((lo, hi))
}

pub fn parse_real_range(s: &str) -> std::result::Result<(f64, f64), String> {
    parse_pair::<f64>(s)
}

/// `x` with `digits` significant digits, choosing fixed or scientific
/// notation by whichever is shorter (as R's `print` does).
pub fn format_sig(x: f64, digits: usize) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return if x.is_nan() {
            "NaN".into()
        } else if x > 0.0 {
            "Inf".into()
        } else {
            "-Inf".into()
        };
    }
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    let mantissa = trim_fraction(mantissa);
    let sci = format!(
        "{mantissa}e{}{:02}",
        if exp < 0 { '-' } else { '+' },
        exp.abs()
    );
    let decimals = (digits as i32 - 1 - exp).max(0) as usize;
    let fixed = trim_fraction(&format!("{:.*}", decimals, x)).to_string();
    if fixed.len() <= sci.len() {
        fixed
    } else {
        sci
    }
}

fn trim_fraction(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Round-trip CSV representation with 17 significant digits.
pub fn format_csv(x: f64) -> String {
    if x.is_nan() {
        "NA".into()
    } else {
        format!("{x:.16e}")
    }
}

fn format_opt_csv(x: Option<f64>) -> String {
    x.map_or_else(|| "NA".into(), format_csv)
}

fn format_opt_human(x: Option<f64>) -> String {
    x.map_or_else(|| "NA".into(), |v| format_sig(v, 7))
}

fn max_distinct_from_env() -> Result<u64> {
    match std::env::var(MAX_DISTINCT_ENV) {
        Ok(v) => {
            parse_count(v.trim()).map_err(|e| Error::Parse(format!("{MAX_DISTINCT_ENV}: {e}")))
        }
        Err(_) => Ok(DEFAULT_MAX_DISTINCT),
    }
}

fn open(path: &Option<PathBuf>) -> Result<Option<BufWriter<File>>> {
    path.as_ref()
        .map(|p| {
            File::create(p)
                .map(BufWriter::new)
                .map_err(|e| Error::Argument(format!("cannot create {}: {e}", p.display())))
        })
        .transpose()
}

fn io_err(e: io::Error) -> Error {
    Error::Argument(format!("write failed: {e}"))
}

/// Runs a parsed command, writing to `stdout` unless `--out` redirects it.
pub fn run(cli: &Cli, stdout: &mut dyn Write) -> Result<()> {
    let out_path = match &cli.command {
        Command::Expect { output, .. }
        | Command::Scan { output, .. }
        | Command::Prob { output, .. }
        | Command::Simulate { output, .. }
        | Command::Solve { output, .. }
        | Command::Inspect { output, .. } => output.out.clone(),
        Command::Pmf { out, .. } => out.clone(),
    };
    match open(&out_path)? {
        Some(mut file) => {
            dispatch(&cli.command, &mut file)?;
            file.flush().map_err(io_err)
        }
        None => dispatch(&cli.command, stdout),
    }
}

fn dispatch(command: &Command, w: &mut dyn Write) -> Result<()> {
    match command {
        Command::Expect { n, space, output } => cmd_expect(*n, space.resolve()?, output.format, w),
        Command::Scan { n, range, output } => cmd_scan(*n, *range, output.format, w),
        Command::Prob {
            n,
            space,
            errcmp,
            range,
            output,
        } => {
            if *errcmp {
                cmd_errcmp(*n, *range, output.format, w)
            } else {
                cmd_prob(*n, space.resolve()?, output.format, w)
            }
        }
        Command::Pmf { n, space, mode, .. } => cmd_pmf(*n, space.resolve()?, *mode, w),
        Command::Simulate {
            n,
            bits,
            generator,
            seeds,
            seed_base,
            trajectory,
            positions,
            output,
        } => {
            let mut spec = *generator;
            if let Some(k) = bits {
                spec = spec.with_bits(*k)?;
            }
            if let Some(base) = seed_base {
                spec.seed = *base;
            }
            let plan = SimulationPlan {
                n: *n,
                spec,
                seeds: *seeds,
                max_distinct: max_distinct_from_env()?,
                trajectory: trajectory.clone(),
                positions: positions.clone(),
            };
            cmd_simulate(&plan, output.format, w)
        }
        Command::Solve {
            n,
            space,
            target,
            range,
            output,
        } => cmd_solve(*n, space.explicit()?, *target, *range, output.format, w),
        Command::Inspect { value, output } => cmd_inspect(value, output.format, w),
    }
}

pub fn cmd_expect(n: u64, space: BucketSpace, format: Format, w: &mut dyn Write) -> Result<()> {
    let naive = expected_collisions_naive(n, space);
    let stable = expected_collisions(n, space);
    let rel = relative_error(naive, stable);
    match format {
        Format::Csv => {
            writeln!(w, "n,buckets,naive,stable,relative_difference").map_err(io_err)?;
            writeln!(
                w,
                "{n},{space},{},{},{}",
                format_csv(naive),
                format_csv(stable),
                format_opt_csv(rel)
            )
        }
        Format::Human => {
            writeln!(w, "n                    {n}").map_err(io_err)?;
            writeln!(w, "buckets              {space}").map_err(io_err)?;
            writeln!(w, "naive                {}", format_sig(naive, 7)).map_err(io_err)?;
            writeln!(w, "stable               {}", format_sig(stable, 7)).map_err(io_err)?;
            writeln!(w, "relative_difference  {}", format_opt_human(rel))
        }
    }
    .map_err(io_err)
}

pub fn cmd_scan(n: u64, (lo, hi): (u32, u32), format: Format, w: &mut dyn Write) -> Result<()> {
    let rows = expectation_scan(n, lo..=hi);
    match format {
        Format::Csv => writeln!(w, "k,naive,stable").map_err(io_err)?,
        Format::Human => {
            writeln!(w, "{:>3}  {:>14}  {:>14}", "k", "naive", "stable").map_err(io_err)?
        }
    }
    for (k, r) in rows {
        match format {
            Format::Csv => writeln!(
                w,
                "{k},{},{}",
                format_csv(r.naive_value),
                format_csv(r.stable_value)
            ),
            Format::Human => writeln!(
                w,
                "{k:>3}  {:>14}  {:>14}",
                format_sig(r.naive_value, 7),
                format_sig(r.stable_value, 7)
            ),
        }
        .map_err(io_err)?;
    }
    Ok(())
}

pub fn cmd_prob(n: u64, space: BucketSpace, format: Format, w: &mut dyn Write) -> Result<()> {
    let naive = collision_probability_naive(n, space);
    let stable = collision_probability(n, space);
    let rel = relative_error(naive, stable);
    match format {
        Format::Csv => {
            writeln!(w, "n,buckets,naive,stable,relative_error").map_err(io_err)?;
            writeln!(
                w,
                "{n},{space},{},{},{}",
                format_csv(naive),
                format_csv(stable),
                format_opt_csv(rel)
            )
        }
        Format::Human => {
            writeln!(w, "n               {n}").map_err(io_err)?;
            writeln!(w, "buckets         {space}").map_err(io_err)?;
            writeln!(w, "naive           {}", format_sig(naive, 7)).map_err(io_err)?;
            writeln!(w, "stable          {}", format_sig(stable, 7)).map_err(io_err)?;
            writeln!(w, "relative_error  {}", format_opt_human(rel))
        }
    }
    .map_err(io_err)
}

/// `k,relative_error,zero_error`; zero-error rows are the ones a log-scale
/// plot has to drop.
pub fn cmd_errcmp(n: u64, (lo, hi): (u32, u32), format: Format, w: &mut dyn Write) -> Result<()> {
    match format {
        Format::Csv => writeln!(w, "k,relative_error,zero_error"),
        Format::Human => writeln!(w, "{:>3}  {:>14}  zero_error", "k", "relative_error"),
    }
    .map_err(io_err)?;
    for (k, r) in probability_error_curve(n, lo..=hi) {
        let zero = r.relative_error == Some(0.0);
        match format {
            Format::Csv => writeln!(w, "{k},{},{zero}", format_opt_csv(r.relative_error)),
            Format::Human => writeln!(
                w,
                "{k:>3}  {:>14}  {zero}",
                format_opt_human(r.relative_error)
            ),
        }
        .map_err(io_err)?;
    }
    Ok(())
}

/// `c,probability` (plus `exact` in rational mode), then footer rows
/// `sum_p` and `sum_cp`.
pub fn cmd_pmf(n: u64, space: BucketSpace, mode: PmfModeArg, w: &mut dyn Write) -> Result<()> {
    let mode = match mode {
        PmfModeArg::Auto => PmfMode::Auto,
        PmfModeArg::Exact => PmfMode::ExactRational,
        PmfModeArg::Log => PmfMode::LogDomain,
    };
    let pmf = collision_pmf(n, space, mode, PmfLimits::default())?;
    match &pmf.exact {
        Some(exact) => {
            writeln!(w, "c,probability,exact").map_err(io_err)?;
            for (c, (p, e)) in pmf.probs.iter().zip(exact).enumerate() {
                writeln!(w, "{c},{},{e}", format_csv(*p)).map_err(io_err)?;
            }
        }
        None => {
            writeln!(w, "c,probability").map_err(io_err)?;
            for (c, p) in pmf.probs.iter().enumerate() {
                writeln!(w, "{c},{}", format_csv(*p)).map_err(io_err)?;
            }
        }
    }
    writeln!(w, "sum_p,{}", format_csv(pmf.total())).map_err(io_err)?;
    writeln!(w, "sum_cp,{}", format_csv(pmf.mean())).map_err(io_err)?;
    Ok(())
}

#[derive(Debug, Clone)]
pub struct SimulationPlan {
    pub n: u64,
    pub spec: GeneratorSpec,
    pub seeds: u64,
    pub max_distinct: u64,
    pub trajectory: Option<PathBuf>,
    pub positions: Option<PathBuf>,
}

pub fn cmd_simulate(plan: &SimulationPlan, format: Format, w: &mut dyn Write) -> Result<()> {
    if plan.seeds == 0 {
        return Err(Error::Argument("--seeds must be at least 1".into()));
    }
    let runs = if plan.seeds == 1 {
        let (summary, trace) =
            trace_collisions(&mut plan.spec.stream(), plan.n, plan.max_distinct)?;
        if let Some(mut f) = open(&plan.trajectory)? {
            trace.write_cumulative_csv(&mut f).map_err(io_err)?;
        }
        if let Some(mut f) = open(&plan.positions)? {
            trace.write_positions_csv(&mut f).map_err(io_err)?;
        }
        vec![(plan.spec, summary)]
    } else {
        let runs = simulate_seeds(&plan.spec, plan.seeds, plan.n, plan.max_distinct)?;
        if plan.trajectory.is_some() || plan.positions.is_some() {
            let first = runs[0].0;
            let (_, trace) = trace_collisions(&mut first.stream(), plan.n, plan.max_distinct)?;
            if let Some(mut f) = open(&plan.trajectory)? {
                trace.write_cumulative_csv(&mut f).map_err(io_err)?;
            }
            if let Some(mut f) = open(&plan.positions)? {
                trace.write_positions_csv(&mut f).map_err(io_err)?;
            }
        }
        runs
    };
    for (_, s) in &runs {
        s.check_invariants().map_err(Error::Generator)?;
    }

    let summaries: Vec<_> = runs.iter().map(|(_, s)| s.clone()).collect();
    let (mean, sd) = duplicate_stats(&summaries);
    let expected = expected_collisions(plan.n, BucketSpace::PowerOfTwo(plan.spec.output_bits));
    match format {
        Format::Csv => {
            writeln!(w, "generator,n,duplicates,ties").map_err(io_err)?;
            for (spec, s) in &runs {
                writeln!(w, "{spec},{},{},{}", s.n, s.duplicates, s.ties).map_err(io_err)?;
            }
        }
        Format::Human => {
            for (spec, s) in &runs {
                writeln!(
                    w,
                    "{spec}  n={}  duplicates={}  ties={}",
                    s.n, s.duplicates, s.ties
                )
                .map_err(io_err)?;
            }
            let se = sd / (runs.len() as f64).sqrt();
            writeln!(w, "seeds                {}", runs.len()).map_err(io_err)?;
            writeln!(w, "mean_duplicates      {}", format_sig(mean, 7)).map_err(io_err)?;
            writeln!(w, "sd_duplicates        {}", format_sig(sd, 7)).map_err(io_err)?;
            writeln!(w, "standard_error       {}", format_sig(se, 7)).map_err(io_err)?;
            writeln!(w, "expected_collisions  {}", format_sig(expected, 7)).map_err(io_err)?;
        }
    }
    Ok(())
}

pub fn cmd_solve(
    n: Option<u64>,
    space: Option<BucketSpace>,
    target: f64,
    range: Option<(f64, f64)>,
    format: Format,
    w: &mut dyn Write,
) -> Result<()> {
    if !(target > 0.0) {
        return Err(Error::Argument(format!(
            "--target must be positive, got {target}"
        )));
    }
    let (label, value) = match (n, space) {
        (Some(n), None) => {
            if n == 0 {
                return Err(Error::Argument("--n must be at least 1".into()));
            }
            let k = min_bits_for_expected(n, target).ok_or_else(|| {
                Error::Argument(format!(
                    "no k in 1..=64 gives at most {target} expected collisions"
                ))
            })?;
            ("k", f64::from(k))
        }
        (None, Some(space)) => {
            let (lo, hi) = match range {
                Some(r) => r,
                None => bracket_sample_size(space, target)?,
            };
            ("n", sample_size_for_expected(space, target, lo, hi)?)
        }
        (None, None) => {
            return Err(Error::Argument(
                "solve needs --n, or --bits/--buckets".into(),
            ))
        }
        (Some(_), Some(_)) => {
            return Err(Error::Argument(
                "solve takes --n or --bits/--buckets, not both".into(),
            ))
        }
    };
    match format {
        Format::Csv => writeln!(w, "quantity,value\n{label},{}", format_csv(value)),
        Format::Human => writeln!(w, "{label} = {}", format_sig(value, 7)),
    }
    .map_err(io_err)
}

fn parse_inspect_value(value: &str) -> Result<f64> {
    let c = machine_constants();
    match value {
        "xmin" => return Ok(c.xmin),
        "eps" => return Ok(c.eps),
        "xmax" => return Ok(c.xmax),
        _ => {}
    }
    if let Some(hex) = value.strip_prefix("0x") {
        return u64::from_str_radix(hex, 16)
            .map(f64::from_bits)
            .map_err(|_| Error::Parse(format!("bad bit pattern '{value}'")));
    }
    value
        .parse()
        .map_err(|_| Error::Parse(format!("'{value}' is not a number")))
}

pub fn cmd_inspect(value: &str, format: Format, w: &mut dyn Write) -> Result<()> {
    let a = decompose(parse_inspect_value(value)?);
    match format {
        Format::Csv => writeln!(
            w,
            "value,bits,sign,exponent_field,significand_bits,class\n{},{:#018x},{},{},{},{}",
            format_csv(f64::from_bits(a.to_bits())),
            a.to_bits(),
            a.sign,
            a.exponent_field,
            a.significand_bits,
            a.class
        ),
        Format::Human => write!(w, "{}", a.render()),
    }
    .map_err(io_err)
}
