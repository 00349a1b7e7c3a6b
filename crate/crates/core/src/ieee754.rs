//! Bit-level anatomy of 64-bit doubles.
//!
//! A double is 1 sign bit `s`, 11 exponent bits `e` and 52 significand bits
//! `f51..f0`. Normal numbers (`1 <= e <= 2046`) have the value
//! `(-1)^s (1.f51...f0)_2 2^(e - 1023)`; `e = 0` encodes zero and the
//! subnormals `(-1)^s (0.f51...f0)_2 2^-1022`; `e = 2047` encodes infinities
//! and NaNs.

use std::fmt;

use crate::error::{Error, Result};

pub const SIGNIFICAND_BITS: u32 = 52;
pub const EXPONENT_BIAS: i32 = 1023;
pub const MAX_EXPONENT_FIELD: u16 = 0x7ff;
pub const SIGNIFICAND_MASK: u64 = (1 << SIGNIFICAND_BITS) - 1;

/// `2^e` for `-1022 <= e <= 1023`, assembled from the exponent field.
pub fn pow2(e: i32) -> f64 {
    assert!((-1022..=1023).contains(&e), "2^{e} is not a normal double");
    f64::from_bits(((e + EXPONENT_BIAS) as u64) << SIGNIFICAND_BITS)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FloatClass {
    Zero,
    Subnormal,
    Normal,
    Infinity,
    Nan,
}

impl FloatClass {
    fn of(exponent_field: u16, significand_bits: u64) -> Self {
        match (exponent_field, significand_bits) {
            (0, 0) => FloatClass::Zero,
            (0, _) => FloatClass::Subnormal,
            (MAX_EXPONENT_FIELD, 0) => FloatClass::Infinity,
            (MAX_EXPONENT_FIELD, _) => FloatClass::Nan,
            _ => FloatClass::Normal,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            FloatClass::Zero => "zero",
            FloatClass::Subnormal => "subnormal",
            FloatClass::Normal => "normal",
            FloatClass::Infinity => "infinity",
            FloatClass::Nan => "nan",
        }
    }
}

impl fmt::Display for FloatClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FloatAnatomy {
    pub sign: u8,
    pub exponent_field: u16,
    pub significand_bits: u64,
    pub class: FloatClass,
}

impl FloatAnatomy {
    /// Validates the field ranges and derives the class.
    pub fn new(sign: u8, exponent_field: u16, significand_bits: u64) -> Result<Self> {
        if sign > 1 {
            return Err(Error::Argument(format!(
                "sign bit must be 0 or 1, got {sign}"
            )));
        }
        if exponent_field > MAX_EXPONENT_FIELD {
            return Err(Error::Argument(format!(
                "exponent field must be in 0..=2047, got {exponent_field}"
            )));
        }
        if significand_bits > SIGNIFICAND_MASK {
            return Err(Error::Argument(format!(
                "significand must fit in 52 bits, got {significand_bits:#x}"
            )));
        }
        Ok(FloatAnatomy {
            sign,
            exponent_field,
            significand_bits,
            class: FloatClass::of(exponent_field, significand_bits),
        })
    }

    /// `e - 1023` for normal numbers, `-1022` for subnormals and zero.
    pub fn unbiased_exponent(&self) -> i32 {
        if self.exponent_field == 0 {
            1 - EXPONENT_BIAS
        } else {
            i32::from(self.exponent_field) - EXPONENT_BIAS
        }
    }

    pub fn to_bits(&self) -> u64 {
        (u64::from(self.sign) << 63)
            | (u64::from(self.exponent_field) << SIGNIFICAND_BITS)
            | self.significand_bits
    }

    /// Multi-line breakdown in binary and hex.
    pub fn render(&self) -> String {
        let x = f64::from_bits(self.to_bits());
        let mut out = String::new();
        out.push_str(&format!("value        {x:e}\n"));
        out.push_str(&format!("bits         {:#018x}\n", self.to_bits()));
        out.push_str(&format!("sign         {}\n", self.sign));
        out.push_str(&format!(
            "exponent     {:011b} ({:#05x} = {}, unbiased {})\n",
            self.exponent_field,
            self.exponent_field,
            self.exponent_field,
            self.unbiased_exponent()
        ));
        out.push_str(&format!(
            "significand  {:052b} ({:#015x})\n",
            self.significand_bits, self.significand_bits
        ));
        out.push_str(&format!("class        {}\n", self.class));
        out
    }
}

pub fn decompose(x: f64) -> FloatAnatomy {
    let bits = x.to_bits();
    let exponent_field = ((bits >> SIGNIFICAND_BITS) & u64::from(MAX_EXPONENT_FIELD)) as u16;
    let significand_bits = bits & SIGNIFICAND_MASK;
    FloatAnatomy {
        sign: (bits >> 63) as u8,
        exponent_field,
        significand_bits,
        class: FloatClass::of(exponent_field, significand_bits),
    }
}

/// Inverse of [`decompose`], bit for bit (NaN payloads included).
pub fn compose(anatomy: &FloatAnatomy) -> Result<f64> {
    let checked = FloatAnatomy::new(
        anatomy.sign,
        anatomy.exponent_field,
        anatomy.significand_bits,
    )?;
    if checked.class != anatomy.class {
        return Err(Error::Argument(format!(
            "class {} does not match fields (which encode {})",
            anatomy.class, checked.class
        )));
    }
    Ok(f64::from_bits(checked.to_bits()))
}

/// Builds a double from fields, validating ranges.
pub fn compose_fields(sign: u8, exponent_field: u16, significand_bits: u64) -> Result<f64> {
    compose(&FloatAnatomy::new(sign, exponent_field, significand_bits)?)
}

/// Evaluates the value formula arithmetically for finite inputs:
/// `(-1)^s (1 + sum_i f_{52-i} 2^-i) 2^(e-1023)` for normals and
/// `(-1)^s (sum_i f_{52-i} 2^-i) 2^-1022` for subnormals and zero.
pub fn evaluate(anatomy: &FloatAnatomy) -> Option<f64> {
    let fraction = anatomy.significand_bits as f64 * pow2(-52);
    let magnitude = match anatomy.class {
        FloatClass::Normal => (1.0 + fraction) * pow2(anatomy.unbiased_exponent()),
        // Two steps so the subnormal product is formed exactly.
        FloatClass::Zero | FloatClass::Subnormal => {
            anatomy.significand_bits as f64 * pow2(-1022) * pow2(-52)
        }
        FloatClass::Infinity | FloatClass::Nan => return None,
    };
    Some(if anatomy.sign == 1 {
        -magnitude
    } else {
        magnitude
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MachineConstants {
    /// Smallest positive normal number, `2^-1022`.
    pub xmin: f64,
    /// Gap between 1 and the next double, `2^-52`.
    pub eps: f64,
    /// Largest finite double, `(2^53 - 1) 2^971`.
    pub xmax: f64,
}

impl MachineConstants {
    /// Bitwise comparison with the values the platform advertises.
    pub fn matches_platform(&self) -> bool {
        self.xmin.to_bits() == f64::MIN_POSITIVE.to_bits()
            && self.eps.to_bits() == f64::EPSILON.to_bits()
            && self.xmax.to_bits() == f64::MAX.to_bits()
    }
}

/// The machine constants built from their bit patterns.
pub fn machine_constants() -> MachineConstants {
    let xmin = compose_fields(0, 1, 0).expect("valid fields");
    let one_plus = compose_fields(0, 1023, 1).expect("valid fields");
    let xmax = compose_fields(0, 2046, SIGNIFICAND_MASK).expect("valid fields");
    debug_assert_eq!(xmax, ((1u64 << 53) - 1) as f64 * pow2(971));
    MachineConstants {
        xmin,
        eps: one_plus - 1.0,
        xmax,
    }
}

/// Where halving the smallest normal number ends.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SubnormalReport {
    /// `xmin / 2`
    pub half_xmin: f64,
    pub half_xmin_class: FloatClass,
    /// `xmin / 2^52`, the smallest positive subnormal.
    pub xmin_over_2_52: f64,
    pub xmin_over_2_52_nonzero: bool,
    /// `xmin / 2^53`
    pub xmin_over_2_53: f64,
    pub xmin_over_2_53_zero: bool,
}

pub fn subnormal_threshold_check() -> SubnormalReport {
    let xmin = machine_constants().xmin;
    let half = xmin / 2.0;
    let last = xmin / pow2(52);
    let gone = xmin / pow2(53);
    SubnormalReport {
        half_xmin: half,
        half_xmin_class: decompose(half).class,
        xmin_over_2_52: last,
        xmin_over_2_52_nonzero: last != 0.0,
        xmin_over_2_53: gone,
        xmin_over_2_53_zero: gone == 0.0,
    }
}

/// Distance from `|x|` to the next double above it (the ulp of `|x|`).
/// For the largest finite double the ulp `2^971` is returned.
pub fn spacing(x: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(Error::Argument(format!(
            "spacing needs a finite value, got {x}"
        )));
    }
    let e = i32::from(decompose(x).exponent_field);
    // ulp = 2^(max(e, 1) - 1075)
    let shift = e.max(1) - 1075;
    Ok(if shift >= -1022 {
        pow2(shift)
    } else {
        f64::from_bits(1u64 << (shift + 1074))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn below(x: f64) -> f64 {
        f64::from_bits(x.to_bits() - 1)
    }

    fn above(x: f64) -> f64 {
        f64::from_bits(x.to_bits() + 1)
    }

    #[test]
    fn decompose_examples() {
        let a = decompose(1.0);
        assert_eq!(
            (a.sign, a.exponent_field, a.significand_bits, a.class),
            (0, 1023, 0, FloatClass::Normal)
        );
        let a = decompose(2f64.powi(-1022));
        assert_eq!(
            (a.sign, a.exponent_field, a.significand_bits, a.class),
            (0, 1, 0, FloatClass::Normal)
        );
        assert!((2f64.powi(-1022) - 2.225074e-308).abs() < 1e-314);
        let a = decompose(-0.0);
        assert_eq!(
            (a.sign, a.exponent_field, a.significand_bits, a.class),
            (1, 0, 0, FloatClass::Zero)
        );
        assert_eq!(decompose(f64::INFINITY).class, FloatClass::Infinity);
        assert_eq!(decompose(f64::NAN).class, FloatClass::Nan);
        assert_eq!(decompose(f64::from_bits(1)).class, FloatClass::Subnormal);
    }

    #[test]
    fn compose_examples() {
        let xmax = compose_fields(0, 2046, SIGNIFICAND_MASK).unwrap();
        assert_eq!(xmax, f64::MAX);
        // Printed to 7 significant digits.
        assert!(((xmax - 1.797693e308) / xmax).abs() < 5e-7);
        let next = compose_fields(0, 1023, 1).unwrap();
        assert_eq!(next, 1.0 + 2f64.powi(-52));
        assert!((next - 1.0 - 2.220446e-16).abs() < 1e-22);
        assert_eq!(compose_fields(1, 1023, 0).unwrap(), -1.0);
    }

    #[test]
    fn compose_rejects_bad_fields() {
        assert!(matches!(compose_fields(2, 0, 0), Err(Error::Argument(_))));
        assert!(compose_fields(0, 2048, 0).is_err());
        assert!(compose_fields(0, 1, 1 << 52).is_err());
        let mut a = decompose(1.0);
        a.class = FloatClass::Subnormal;
        assert!(compose(&a).is_err());
    }

    #[test]
    fn class_follows_exponent_field() {
        for e in [0u16, 1, 1023, 2046, 2047] {
            for f in [0u64, 1, SIGNIFICAND_MASK] {
                let c = FloatAnatomy::new(0, e, f).unwrap().class;
                assert_eq!(c == FloatClass::Normal, (1..=2046).contains(&e));
                assert_eq!(
                    matches!(c, FloatClass::Zero | FloatClass::Subnormal),
                    e == 0
                );
                assert_eq!(
                    matches!(c, FloatClass::Infinity | FloatClass::Nan),
                    e == 2047
                );
            }
        }
    }

    #[test]
    fn constants() {
        let c = machine_constants();
        assert!(c.matches_platform());
        assert_eq!(c.xmax, ((1u64 << 53) - 1) as f64 * 2f64.powi(971));
        assert!((c.xmin - 2.225074e-308).abs() < 1e-313);
        assert!((c.eps - 2.220446e-16).abs() < 1e-22);
        assert!((c.xmax - 1.797693e308).abs() < 1e302);
    }

    #[test]
    fn subnormal_threshold() {
        let r = subnormal_threshold_check();
        assert!((r.half_xmin - 1.112537e-308).abs() < 1e-314);
        assert_eq!(r.half_xmin_class, FloatClass::Subnormal);
        assert!(r.xmin_over_2_52_nonzero);
        assert_eq!(r.xmin_over_2_52, f64::from_bits(1));
        assert!(r.xmin_over_2_53_zero);
    }

    #[test]
    fn spacing_examples() {
        assert_eq!(spacing(1.0).unwrap(), 2f64.powi(-52));
        assert_eq!(spacing(0.0).unwrap(), f64::from_bits(1));
        assert_eq!(spacing(-0.0).unwrap(), f64::from_bits(1));
        assert_eq!(spacing(0.5).unwrap(), 2f64.powi(-53));
        assert_eq!(spacing(-3.0).unwrap(), 2f64.powi(-51));
        assert_eq!(spacing(f64::MAX).unwrap(), 2f64.powi(971));
        assert!(spacing(f64::INFINITY).is_err());
        assert!(spacing(f64::NAN).is_err());
    }

    #[test]
    fn spacing_matches_next_double() {
        let mut x = 1e-320;
        while x < 1e300 {
            assert_eq!(spacing(x).unwrap(), above(x) - x, "x={x:e}");
            x *= 3.7;
        }
    }

    #[test]
    fn density_is_asymmetric_around_one() {
        assert_eq!(spacing(below(1.0)).unwrap(), 2f64.powi(-53));
        assert_eq!(spacing(above(1.0)).unwrap(), 2f64.powi(-52));
        assert_eq!(spacing(f64::MIN_POSITIVE).unwrap(), f64::from_bits(1));
        assert_eq!(spacing(f64::MIN_POSITIVE).unwrap(), 2f64.powi(-1074));
    }

    #[test]
    fn evaluate_matches_compose() {
        for x in [
            1.0,
            -2.5,
            0.1,
            f64::MAX,
            f64::MIN_POSITIVE,
            5e-324,
            -0.0,
            3e-310,
        ] {
            let a = decompose(x);
            assert_eq!(evaluate(&a).unwrap().to_bits(), x.to_bits(), "{x:e}");
        }
        assert_eq!(evaluate(&decompose(f64::NEG_INFINITY)), None);
    }

    #[test]
    fn render_shows_fields() {
        let s = decompose(1.0).render();
        assert!(s.contains("01111111111"));
        assert!(s.contains("0x3ff0000000000000"));
        assert!(s.contains("class        normal"));
    }
}
