//! Configurable-precision complex arithmetic: gamma, vertical-line quadrature,
//! polynomial roots.

mod gamma;
mod quad;
mod roots;

pub use gamma::{complex_gamma, ln_gamma, ln_gamma_f64};
pub use quad::{integrate_vertical, IntegrationPlan};
pub use roots::{poly_eval, poly_roots};

use crate::error::{Error, Result};
use rug::float::Constant;
use rug::{Complex, Float};
use serde::{Deserialize, Serialize};

pub type ComplexValue = Complex;

pub const GUARD_BITS: u32 = 64;

/// Bits needed to represent `digits` decimal digits.
pub fn bits_for_digits(digits: u32) -> u32 {
    (digits as f64 * std::f64::consts::LOG2_10).ceil() as u32
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PrecisionContext {
    pub working_bits: u32,
    pub target_digits: u32,
}

impl PrecisionContext {
    pub fn new(target_digits: u32) -> Self {
        PrecisionContext { working_bits: bits_for_digits(target_digits) + GUARD_BITS, target_digits }
    }

    pub fn with_bits(target_digits: u32, working_bits: u32) -> Result<Self> {
        if working_bits < bits_for_digits(target_digits) + GUARD_BITS {
            return Err(Error::Invalid(format!(
                "{working_bits} working bits cannot carry {target_digits} digits plus {GUARD_BITS} guard bits"
            )));
        }
        Ok(PrecisionContext { working_bits, target_digits })
    }

    /// Same target, more working bits.
    pub fn widened(&self, extra_bits: u32) -> Self {
        PrecisionContext { working_bits: self.working_bits + extra_bits, target_digits: self.target_digits }
    }

    pub fn prec(&self) -> u32 {
        self.working_bits
    }

    pub fn float<T>(&self, v: T) -> Float
    where
        Float: rug::Assign<T>,
    {
        Float::with_val(self.working_bits, v)
    }

    pub fn complex<T>(&self, v: T) -> Complex
    where
        Complex: rug::Assign<T>,
    {
        Complex::with_val(self.working_bits, v)
    }

    pub fn pi(&self) -> Float {
        Float::with_val(self.working_bits, Constant::Pi)
    }

    /// 2^-(working_bits/2), the tolerance used for "equal to working precision" checks
    /// that survive moderate cancellation.
    pub fn half_tolerance(&self) -> Float {
        Float::with_val(self.working_bits, 1) >> (self.working_bits / 2)
    }

    /// 10^-digits.
    pub fn target_tolerance(&self) -> Float {
        Float::with_val(self.working_bits, 10).pow(-(self.target_digits as i32))
    }
}

use rug::ops::Pow;

/// |z| as a Float at the precision of z's real part.
pub fn cabs(z: &Complex) -> Float {
    Float::with_val(z.real().prec(), z.abs_ref())
}

/// Reports a non-finite value as an error.
pub fn ensure_finite(z: &Complex, what: &'static str) -> Result<()> {
    if z.real().is_finite() && z.imag().is_finite() {
        Ok(())
    } else {
        Err(Error::NonConvergence { what, detail: "non-finite value".into() })
    }
}

/// Parses a rational written as `a`, `a/b`, or a decimal like `-1.25`.
pub fn parse_rational(text: &str) -> Result<rug::Rational> {
    let t = text.trim();
    if let Some((int, frac)) = t.split_once('.') {
        let neg = int.starts_with('-');
        let digits = format!("{}{}", int.trim_start_matches(['-', '+']), frac);
        let num: rug::Integer = digits
            .parse()
            .map_err(|_| Error::Invalid(format!("not a number: {t}")))?;
        let den = rug::Integer::from(10).pow(frac.len() as u32);
        let r = rug::Rational::from((num, den));
        return Ok(if neg { -r } else { r });
    }
    t.parse::<rug::Rational>().map_err(|_| Error::Invalid(format!("not a rational: {t}")))
}

/// Rational to Float at `prec` bits.
pub fn rat_float(r: &rug::Rational, prec: u32) -> Float {
    Float::with_val(prec, r)
}

/// Lossless serde for Float as "<prec>:<hex mantissa and exponent>".
pub mod hexfloat {
    use rug::Float;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn encode(x: &Float) -> String {
        format!("{}:{}", x.prec(), x.to_string_radix(16, None))
    }

    pub fn decode(t: &str) -> Option<Float> {
        let (p, body) = t.split_once(':')?;
        let prec: u32 = p.parse().ok()?;
        let parsed = Float::parse_radix(body, 16).ok()?;
        Some(Float::with_val(prec, parsed))
    }

    pub fn serialize<S: Serializer>(x: &Float, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&encode(x))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Float, D::Error> {
        let t = String::deserialize(d)?;
        decode(&t).ok_or_else(|| serde::de::Error::custom(format!("bad float '{t}'")))
    }

    pub mod vec {
        use rug::Float;
        use serde::{Deserialize, Deserializer, Serializer};

        pub fn serialize<S: Serializer>(v: &[Float], s: S) -> Result<S::Ok, S::Error> {
            s.collect_seq(v.iter().map(super::encode))
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Float>, D::Error> {
            let raw = Vec::<String>::deserialize(d)?;
            raw.iter()
                .map(|t| super::decode(t).ok_or_else(|| serde::de::Error::custom(format!("bad float '{t}'"))))
                .collect()
        }
    }
}
