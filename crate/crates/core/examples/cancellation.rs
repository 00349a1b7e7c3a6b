//! Three small cancellation demos, printed as CSV-ish tables.
//!
//! 1. `exp(x) - 1` against the reference and intrinsic `expm1` for tiny `x`.
//! 2. `log(exp(x))` against `x`.
//! 3. Gamma variates with a tiny shape parameter truncating to zero.
//!
//! Run with `cargo run --example cancellation`.

use collision_lab::prng::{Family, GeneratorSpec};
use collision_lab::stable_math::{expm1_ref, Expm1Region};

fn main() {
    println!("x,exp_minus_one,expm1_ref,expm1,region");
    for e in [-20, -16, -12, -9, -8, -6, -3, -1] {
        let x = 10f64.powi(e);
        println!(
            "{x:e},{:e},{:e},{:e},{:?}",
            x.exp() - 1.0,
            expm1_ref(x),
            x.exp_m1(),
            Expm1Region::of(x)
        );
    }

    println!();
    println!("x,log_exp_x,relative_error");
    for e in [-18, -16, -14, -12, -10, -8, -4] {
        let x = 10f64.powi(e);
        let y = x.exp().ln();
        println!("{x:e},{y:e},{:e}", ((y - x) / x).abs());
    }

    // For shape a < 1, X = Y U^(1/a) with Y ~ Gamma(1 + a) and U uniform.
    // Y is drawn as Exp(1), which Gamma(1 + a) approaches as a -> 0; the
    // zeros come from U^(1/a) dropping below the smallest subnormal.
    let shape = 1e-3;
    let mut stream = GeneratorSpec::new(Family::Mt19937, 271, 53)
        .expect("valid spec")
        .stream();
    let draws: Vec<f64> = (0..10)
        .map(|_| {
            let u = 1.0 - stream.next_unit();
            let y = -(1.0 - stream.next_unit()).ln();
            y * u.powf(1.0 / shape)
        })
        .collect();
    println!();
    println!(
        "gamma(shape = {shape}) == 0: {:?}",
        draws.iter().map(|&x| x == 0.0).collect::<Vec<_>>()
    );
    let zeros = (0..100_000)
        .filter(|_| {
            let u = 1.0 - stream.next_unit();
            let y = -(1.0 - stream.next_unit()).ln();
            y * u.powf(1.0 / shape) == 0.0
        })
        .count();
    println!(
        "fraction truncated to 0 out of 100000: {}",
        zeros as f64 / 1e5
    );
}
