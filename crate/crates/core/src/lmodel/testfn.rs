use crate::error::{Error, Result};
use crate::lmodel::surd::rat_str;
use num_complex::Complex64;
use rug::{Complex, Rational};
use serde::{Deserialize, Serialize};
use std::fmt;

/// g(s) = exp(i b s + c (s - i t0)^2).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TestFunction {
    #[serde(with = "rat_str")]
    pub b: Rational,
    #[serde(with = "rat_str")]
    pub c: Rational,
    #[serde(with = "rat_str")]
    pub t0: Rational,
}

impl TestFunction {
    pub fn new(b: Rational, c: Rational, t0: Rational) -> Self {
        TestFunction { b, c, t0 }
    }

    /// g = 1.
    pub fn one() -> Self {
        TestFunction::new(Rational::new(), Rational::new(), Rational::new())
    }

    /// g(s) = exp(-i beta s).
    pub fn beta(beta: Rational) -> Self {
        TestFunction::new(-beta, Rational::new(), Rational::new())
    }

    /// g(s) = exp(-i beta s + c (s - i t0)^2).
    pub fn beta_gauss(beta: Rational, c: Rational, t0: Rational) -> Self {
        TestFunction::new(-beta, c, t0)
    }

    pub fn beta_value(&self) -> Rational {
        Rational::from(-&self.b)
    }

    pub fn is_valid(&self, degree: u32) -> bool {
        if self.c > 0 {
            return true;
        }
        self.c == 0 && self.b.to_f64().abs() < std::f64::consts::PI * degree as f64 / 4.0
    }

    pub fn validate(&self, degree: u32) -> Result<()> {
        if self.is_valid(degree) {
            Ok(())
        } else {
            Err(Error::InvalidTestFunction(format!(
                "{self} needs c > 0, or c = 0 and |b| < pi*{degree}/4"
            )))
        }
    }

    /// ln g(w) = i b w + c (w - i t0)^2.
    pub fn ln_g(&self, w: &Complex, prec: u32) -> Complex {
        let mut out = Complex::with_val(prec, w * &self.b).mul_i(false);
        if !self.c.is_zero() {
            let mut d = Complex::with_val(prec, w);
            *d.mut_imag() -= &self.t0;
            d.square_mut();
            d *= &self.c;
            out += d;
        }
        out
    }

    pub fn ln_g_f64(&self, w: Complex64) -> Complex64 {
        let b = self.b.to_f64();
        let c = self.c.to_f64();
        let d = w - Complex64::new(0.0, self.t0.to_f64());
        Complex64::new(0.0, b) * w + d * d * c
    }

    pub fn g(&self, w: &Complex, prec: u32) -> Complex {
        self.ln_g(w, prec).exp()
    }
}

impl fmt::Display for TestFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "g(b={},c={},t0={})", self.b, self.c, self.t0)
    }
}
