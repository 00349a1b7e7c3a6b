use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use collision_lab::ieee754::{
    compose, compose_fields, decompose, evaluate, machine_constants, subnormal_threshold_check,
    FloatClass,
};
use collision_lab::prng::SplitMix64;

fn edge_set() -> Vec<f64> {
    let mut v = vec![
        0.0,
        -0.0,
        1.0,
        -1.0,
        f64::MIN_POSITIVE,
        f64::MIN_POSITIVE / 2.0,
        f64::from_bits(1),
        f64::from_bits(0x000f_ffff_ffff_ffff),
        f64::EPSILON,
        f64::MAX,
        f64::MIN,
        f64::INFINITY,
        f64::NEG_INFINITY,
        1.0 + f64::EPSILON,
        2.0 - f64::EPSILON,
        0.1,
    ];
    v.extend(v.clone().iter().map(|x| -x));
    v
}

#[test]
fn roundtrip_random_and_edge_patterns() {
    let mut rng = SplitMix64::new(0x01ee_e754);
    let patterns = (0..1_000_000)
        .map(|_| rng.next_u64())
        .chain(edge_set().into_iter().map(f64::to_bits))
        .chain([
            0x7ff8_0000_0000_0000,
            0xfff0_0000_0000_0001,
            0x7fff_ffff_ffff_ffff,
        ]);
    for bits in patterns {
        let x = f64::from_bits(bits);
        let a = decompose(x);
        assert_eq!(a.to_bits(), bits);
        assert_eq!(compose(&a).unwrap().to_bits(), bits, "{bits:#018x}");
        assert_eq!(
            compose_fields(a.sign, a.exponent_field, a.significand_bits)
                .unwrap()
                .to_bits(),
            bits
        );
    }
}

/// `(-1)^s (2^52 + f) 2^(e - 1075)` for normals, evaluated in exact rationals.
fn exact_value(s: u8, e: u16, f: u64) -> BigRational {
    let two = BigRational::from_integer(2.into());
    let (mantissa, exponent) = if e == 0 {
        (BigInt::from(f), -1074)
    } else {
        (BigInt::from((1u64 << 52) + f), i32::from(e) - 1075)
    };
    let mut v = BigRational::from_integer(mantissa);
    let mut p = BigRational::one();
    for _ in 0..exponent.unsigned_abs() {
        p *= &two;
    }
    v = if exponent >= 0 { v * p } else { v / p };
    if s == 1 {
        -v
    } else {
        v
    }
}

#[test]
fn value_formula_matches_exact_rationals() {
    let mut rng = SplitMix64::new(42);
    let mut checked = 0;
    while checked < 10_000 {
        let bits = rng.next_u64();
        let a = decompose(f64::from_bits(bits));
        if a.class != FloatClass::Normal {
            continue;
        }
        let x = compose(&a).unwrap();
        let oracle = exact_value(a.sign, a.exponent_field, a.significand_bits);
        assert_eq!(BigRational::from_float(x).unwrap(), oracle, "{bits:#018x}");
        assert_eq!(evaluate(&a).unwrap().to_bits(), bits);
        checked += 1;
    }
    for x in [f64::from_bits(1), f64::MIN_POSITIVE / 3.0] {
        let a = decompose(x);
        assert_eq!(
            BigRational::from_float(x).unwrap(),
            exact_value(a.sign, 0, a.significand_bits)
        );
    }
    assert!(exact_value(0, 0, 0).is_zero());
}

#[test]
fn machine_constants_and_subnormal_threshold() {
    let c = machine_constants();
    assert!(c.matches_platform());
    assert_eq!(format!("{:.6e}", c.xmin), "2.225074e-308");
    assert_eq!(format!("{:.6e}", c.eps), "2.220446e-16");
    assert_eq!(format!("{:.6e}", c.xmax), "1.797693e308");
    let r = subnormal_threshold_check();
    assert!(r.xmin_over_2_52_nonzero && r.xmin_over_2_52 == f64::from_bits(1));
    assert!(r.xmin_over_2_53_zero);
    assert_eq!(r.half_xmin_class, FloatClass::Subnormal);
}
