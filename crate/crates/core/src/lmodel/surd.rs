use rug::{Float, Integer, Rational};
use serde::{Deserialize, Serialize};
use std::fmt;

/// a + b sqrt(D), with D held by the owning table.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Surd {
    #[serde(with = "rat_str")]
    pub a: Rational,
    #[serde(with = "rat_str")]
    pub b: Rational,
}

impl Surd {
    pub fn rational(a: Rational) -> Self {
        Surd { a, b: Rational::new() }
    }

    pub fn int(v: i64) -> Self {
        Surd::rational(Rational::from(v))
    }

    pub fn zero() -> Self {
        Surd::int(0)
    }

    pub fn one() -> Self {
        Surd::int(1)
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn add(&self, o: &Surd) -> Surd {
        Surd { a: Rational::from(&self.a + &o.a), b: Rational::from(&self.b + &o.b) }
    }

    pub fn sub(&self, o: &Surd) -> Surd {
        Surd { a: Rational::from(&self.a - &o.a), b: Rational::from(&self.b - &o.b) }
    }

    pub fn neg(&self) -> Surd {
        Surd { a: Rational::from(-&self.a), b: Rational::from(-&self.b) }
    }

    pub fn mul(&self, o: &Surd, d: &Integer) -> Surd {
        let mut a = Rational::from(&self.a * &o.a);
        if !self.b.is_zero() && !o.b.is_zero() {
            a += Rational::from(&self.b * &o.b) * d;
        }
        let b = Rational::from(&self.a * &o.b) + Rational::from(&self.b * &o.a);
        Surd { a, b }
    }

    pub fn scale(&self, r: &Rational) -> Surd {
        Surd { a: Rational::from(&self.a * r), b: Rational::from(&self.b * r) }
    }

    pub fn to_float(&self, d: &Integer, prec: u32) -> Float {
        let mut v = Float::with_val(prec, &self.a);
        if !self.b.is_zero() {
            let root = Float::with_val(prec, d).sqrt();
            v += root * &self.b;
        }
        v
    }
}

impl fmt::Display for Surd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            write!(f, "{}", self.a)
        } else {
            if self.b < 0 {
                write!(f, "{}-{}*r", self.a, rug::Rational::from(-&self.b))
            } else {
                write!(f, "{}+{}*r", self.a, self.b)
            }
        }
    }
}

pub(crate) mod rat_str {
    use rug::Rational;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&r.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let t = String::deserialize(d)?;
        t.parse().map_err(serde::de::Error::custom)
    }
}

pub(crate) mod int_str {
    use rug::Integer;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Integer, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&r.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Integer, D::Error> {
        let t = String::deserialize(d)?;
        t.parse().map_err(serde::de::Error::custom)
    }
}
