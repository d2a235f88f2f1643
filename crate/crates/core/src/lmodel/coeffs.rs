use crate::error::{Error, Result};
use crate::lmodel::surd::{int_str, rat_str, Surd};
use rug::ops::Pow;
use rug::{Float, Integer, Rational};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::collections::{BTreeMap, BTreeSet};

pub const DEFAULT_CUTOFF: usize = 2000;

/// Ramanujan bound for b_n of a degree-d L-function:
/// prod over p^j || n of binom(d + j - 1, j).
pub fn ramanujan_bound(n: u64, d: u32) -> u128 {
    assert!(n >= 1, "ramanujan_bound needs n >= 1");
    let mut out: u128 = 1;
    for (_, j) in factorize(n) {
        out *= binom(d as u64 + j as u64 - 1, j as u64);
    }
    out
}

fn binom(n: u64, k: u64) -> u128 {
    let mut r: u128 = 1;
    for i in 0..k {
        r = r * (n - i) as u128 / (i + 1) as u128;
    }
    r
}

/// Prime factorization by trial division, primes ascending.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            let mut j = 0;
            while n % p == 0 {
                n /= p;
                j += 1;
            }
            out.push((p, j));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && factorize(n).len() == 1 && factorize(n)[0].1 == 1
}

/// Dirichlet coefficient status.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CoefficientEntry {
    /// Exact value in the table's normalization (multiplied by n^-weight at use).
    Known(Surd),
    /// b_n is the unknown symbol labelled by this index.
    Unknown(u64),
    /// b_n = scalar * b_symbol with scalar = b_{n/symbol} (same normalization convention).
    Partial { scalar: Surd, symbol: u64 },
}

/// Coefficients b_1..b_N, b_n = A_n n^{-weight} with A_n in Q(sqrt(sqrt_d)).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoefficientTable {
    pub degree: u32,
    #[serde(with = "rat_str")]
    pub bound_constant: Rational,
    #[serde(with = "rat_str")]
    pub weight: Rational,
    #[serde(with = "int_str")]
    pub sqrt_d: Integer,
    entries: Vec<CoefficientEntry>,
}

impl CoefficientTable {
    pub fn new(
        degree: u32,
        bound_constant: Rational,
        weight: Rational,
        sqrt_d: Integer,
        entries: Vec<CoefficientEntry>,
    ) -> Result<Self> {
        let t = CoefficientTable { degree, bound_constant, weight, sqrt_d, entries };
        t.validate()?;
        Ok(t)
    }

    /// All b_n known (every index must carry an exact value).
    pub fn known(degree: u32, weight: Rational, sqrt_d: Integer, values: Vec<Surd>) -> Result<Self> {
        let entries = values.into_iter().map(CoefficientEntry::Known).collect();
        Self::new(degree, Rational::from(1), weight, sqrt_d, entries)
    }

    pub fn validate(&self) -> Result<()> {
        if self.entries.is_empty() || self.entries[0] != CoefficientEntry::Known(Surd::one()) {
            return Err(Error::Invalid("b_1 must be Known(1)".into()));
        }
        if self.bound_constant < 1 {
            return Err(Error::Invalid("bound constant must be >= 1".into()));
        }
        for n in 1..=self.cutoff() as u64 {
            match self.entry(n) {
                CoefficientEntry::Known(v) => {
                    let x = self.value_f64(v, n).abs();
                    let bound = self.bound(n);
                    if x > bound * (1.0 + 1e-9) {
                        return Err(Error::Invalid(format!("|b_{n}| = {x} exceeds Ramanujan bound {bound}")));
                    }
                }
                CoefficientEntry::Unknown(q) => {
                    if *q == 0 || n % q != 0 {
                        return Err(Error::Invalid(format!("b_{n}: bad symbol {q}")));
                    }
                }
                CoefficientEntry::Partial { scalar, symbol } => {
                    let q = *symbol;
                    if q == 0 || n % q != 0 || gcd(n / q, q) != 1 {
                        return Err(Error::Invalid(format!("b_{n}: bad partial symbol {q}")));
                    }
                    match self.entry(n / q) {
                        CoefficientEntry::Known(v) if v == scalar => {}
                        _ => return Err(Error::Invalid(format!("b_{n}: scalar is not b_{}", n / q))),
                    }
                }
            }
        }
        Ok(())
    }

    pub fn cutoff(&self) -> usize {
        self.entries.len()
    }

    pub fn entry(&self, n: u64) -> &CoefficientEntry {
        &self.entries[n as usize - 1]
    }

    pub fn entries(&self) -> &[CoefficientEntry] {
        &self.entries
    }

    /// C * Ram(n, d).
    pub fn bound(&self, n: u64) -> f64 {
        self.bound_constant.to_f64() * ramanujan_bound(n, self.degree) as f64
    }

    /// n^-weight * value.
    pub fn value_float(&self, v: &Surd, n: u64, prec: u32) -> Float {
        let mut x = v.to_float(&self.sqrt_d, prec + 16);
        if !self.weight.is_zero() {
            let w = Float::with_val(prec + 16, &self.weight);
            x *= Float::with_val(prec + 16, n).pow(-w);
        }
        Float::with_val(prec, x)
    }

    pub fn value_f64(&self, v: &Surd, n: u64) -> f64 {
        self.value_float(v, n, 64).to_f64()
    }

    /// b_n as a Float when known.
    pub fn known_value(&self, n: u64, prec: u32) -> Option<Float> {
        match self.entry(n) {
            CoefficientEntry::Known(v) => Some(self.value_float(v, n, prec)),
            _ => None,
        }
    }

    pub fn symbols(&self) -> BTreeSet<u64> {
        self.entries
            .iter()
            .filter_map(|e| match e {
                CoefficientEntry::Unknown(q) => Some(*q),
                CoefficientEntry::Partial { symbol, .. } => Some(*symbol),
                _ => None,
            })
            .collect()
    }

    /// Replace the symbol q by the exact value v (same normalization as the table).
    pub fn with_symbol_value(&self, q: u64, v: &Surd) -> Result<Self> {
        let entries = self
            .entries
            .iter()
            .map(|e| match e {
                CoefficientEntry::Unknown(s) if *s == q => CoefficientEntry::Known(v.clone()),
                CoefficientEntry::Partial { scalar, symbol } if *symbol == q => {
                    CoefficientEntry::Known(scalar.mul(v, &self.sqrt_d))
                }
                other => other.clone(),
            })
            .collect();
        Self::new(self.degree, self.bound_constant.clone(), self.weight.clone(), self.sqrt_d.clone(), entries)
    }

    /// Treat every b_n with n >= from as an independent unknown (symbol n), bounded by C * Ram(n, d).
    pub fn blind_from(&self, from: u64, bound_constant: Rational) -> Result<Self> {
        let entries = self
            .entries
            .iter()
            .enumerate()
            .map(|(i, e)| if (i as u64 + 1) >= from { CoefficientEntry::Unknown(i as u64 + 1) } else { e.clone() })
            .collect();
        Self::new(self.degree, bound_constant, self.weight.clone(), self.sqrt_d.clone(), entries)
    }

    pub fn truncated(&self, cutoff: usize) -> Result<Self> {
        if cutoff > self.cutoff() {
            return Err(Error::Invalid(format!("table has only {} coefficients", self.cutoff())));
        }
        let mut t = self.clone();
        t.entries.truncate(cutoff);
        Ok(t)
    }

    /// Stable hash of the full table.
    pub fn fingerprint(&self) -> String {
        let text = serde_json::to_string(self).expect("table serializes");
        hex::encode(Sha256::digest(text.as_bytes()))
    }
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Local factors Q_p(X) = 1 + q_1 X + ... in the table's normalization
/// (b_{p^j} = [X^j] 1/Q_p(X) * p^{-j weight}).
#[derive(Clone, Debug, PartialEq)]
pub struct LocalFactors {
    pub weight: Rational,
    pub sqrt_d: Integer,
    pub factors: BTreeMap<u64, Vec<Surd>>,
}

/// Power-series inverse of a polynomial with constant term 1, to `len` terms.
pub fn series_inverse(q: &[Surd], len: usize, d: &Integer) -> Vec<Surd> {
    let mut c = vec![Surd::one()];
    for j in 1..len {
        let mut acc = Surd::zero();
        for i in 1..=j.min(q.len() - 1) {
            acc = acc.sub(&q[i].mul(&c[j - i], d));
        }
        c.push(acc);
    }
    c
}

/// Dirichlet coefficients up to `cutoff` from the Euler product; primes without a factor
/// become unknown prime-power symbols.
pub fn expand_euler(lf: &LocalFactors, cutoff: usize, degree: u32) -> Result<CoefficientTable> {
    let n_max = cutoff as u64;
    let mut prime_powers: BTreeMap<u64, Vec<Surd>> = BTreeMap::new();
    for (p, q) in &lf.factors {
        if q.is_empty() || q[0] != Surd::one() {
            return Err(Error::Invalid(format!("Q_{p} must have constant term 1")));
        }
        if q.len() - 1 > degree as usize {
            return Err(Error::Invalid(format!("Q_{p} has degree {} > {degree}", q.len() - 1)));
        }
        let mut len = 1;
        let mut pk = 1u64;
        while pk * p <= n_max {
            pk *= p;
            len += 1;
        }
        prime_powers.insert(*p, series_inverse(q, len, &lf.sqrt_d));
    }
    let mut entries = Vec::with_capacity(cutoff);
    for n in 1..=n_max {
        let mut value = Surd::one();
        let mut symbol: Option<u64> = None;
        for (p, j) in factorize(n) {
            match prime_powers.get(&p) {
                Some(c) => value = value.mul(&c[j as usize], &lf.sqrt_d),
                None => {
                    let pj = p.pow(j);
                    if let Some(first) = symbol {
                        return Err(Error::TwoUnknowns { n, first, second: pj });
                    }
                    symbol = Some(pj);
                }
            }
        }
        entries.push(match symbol {
            None => CoefficientEntry::Known(value),
            Some(q) if q == n => CoefficientEntry::Unknown(q),
            Some(q) => CoefficientEntry::Partial { scalar: value, symbol: q },
        });
    }
    CoefficientTable::new(degree, Rational::from(1), lf.weight.clone(), lf.sqrt_d.clone(), entries)
}
