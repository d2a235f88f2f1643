//! Level-one elliptic modular forms: Eisenstein series, Δ, the Hecke eigenbasis of S₂₄,
//! and m-th power lifts of degree-2 L-functions.

use crate::error::{Error, Result};
use crate::lmodel::{
    expand_euler, factorize, is_prime, CoefficientEntry, CoefficientTable, FunctionalEquation, LFunctionInstance,
    LocalFactors, Surd,
};
use rug::ops::Pow;
use rug::{Integer, Rational};
use std::collections::BTreeMap;

/// a_0 + a_1 q + ... + a_N q^N with exact integer coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QExpansion {
    pub weight: i64,
    pub coeffs: Vec<Integer>,
}

impl QExpansion {
    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn mul(&self, o: &QExpansion) -> QExpansion {
        let n = self.len().min(o.len());
        let mut out = vec![Integer::new(); n];
        for (i, a) in self.coeffs.iter().enumerate().take(n) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate().take(n - i) {
                out[i + j] += a * b;
            }
        }
        QExpansion { weight: self.weight + o.weight, coeffs: out }
    }

    pub fn sub(&self, o: &QExpansion) -> Result<QExpansion> {
        if self.weight != o.weight {
            return Err(Error::Invalid(format!("weights {} and {} differ", self.weight, o.weight)));
        }
        let n = self.len().min(o.len());
        let coeffs = (0..n).map(|i| Integer::from(&self.coeffs[i] - &o.coeffs[i])).collect();
        Ok(QExpansion { weight: self.weight, coeffs })
    }

    pub fn scale(&self, c: &Integer) -> QExpansion {
        QExpansion { weight: self.weight, coeffs: self.coeffs.iter().map(|a| Integer::from(a * c)).collect() }
    }

    pub fn div_exact(&self, c: &Integer) -> QExpansion {
        QExpansion {
            weight: self.weight,
            coeffs: self.coeffs.iter().map(|a| Integer::from(a.div_exact_ref(c))).collect(),
        }
    }
}

/// σ_r(n) for 1 ≤ n ≤ len.
fn divisor_powers(r: u32, len: usize) -> Vec<Integer> {
    let mut s = vec![Integer::new(); len + 1];
    for d in 1..=len {
        let dr = Integer::from(d).pow(r);
        let mut m = d;
        while m <= len {
            s[m] += &dr;
            m += d;
        }
    }
    s
}

/// E4 = 1 + 240 Σσ₃(n)qⁿ or E6 = 1 − 504 Σσ₅(n)qⁿ through q^N.
pub fn eisenstein(k: i64, n: usize) -> Result<QExpansion> {
    let (r, c) = match k {
        4 => (3, 240),
        6 => (5, -504),
        _ => return Err(Error::Unsupported(format!("Eisenstein series of weight {k}"))),
    };
    let sig = divisor_powers(r, n);
    let mut coeffs = vec![Integer::from(1)];
    coeffs.extend((1..=n).map(|i| Integer::from(&sig[i] * c)));
    Ok(QExpansion { weight: k, coeffs })
}

/// Δ = (E4³ − E6²)/1728 through q^N.
pub fn delta_expansion(n: usize) -> Result<QExpansion> {
    let e4 = eisenstein(4, n)?;
    let e6 = eisenstein(6, n)?;
    let num = e4.mul(&e4).mul(&e4).sub(&e6.mul(&e6))?;
    Ok(num.div_exact(&Integer::from(1728)))
}

/// Ramanujan τ(n) for 1 ≤ n ≤ N (index 0 holds 0).
pub fn tau(n: usize) -> Vec<Integer> {
    delta_expansion(n).expect("weight 4 and 6 exist").coeffs
}

fn squarefree_split(mut m: Integer) -> (Integer, Integer) {
    // m = s² · d with d squarefree (m > 0)
    let mut s = Integer::from(1);
    let mut p = Integer::from(2);
    while Integer::from(p.square_ref()) <= m {
        let p2 = Integer::from(p.square_ref());
        while m.is_divisible(&p2) {
            m /= &p2;
            s *= &p;
        }
        p += 1;
    }
    (s, m)
}

/// The Hecke eigenbasis of S₂₄(SL₂(Z)).
#[derive(Clone, Debug)]
pub struct S24Eigenforms {
    /// Echelon basis: h1 = q + 0q² + ..., h2 = q² + ...
    pub h1: QExpansion,
    pub h2: QExpansion,
    /// T₂ in the echelon basis, columns are images.
    pub t2: [[Integer; 2]; 2],
    /// Squarefree D with eigenvalues in Q(√D).
    pub d: Integer,
    /// a_2 of the two eigenforms, "−" then "+" root.
    pub a2: [Surd; 2],
}

impl S24Eigenforms {
    /// Arithmetic coefficients a_n = h1_n + a_2 h2_n of eigenform `which` (0 or 1), n = 0..N.
    pub fn coefficients(&self, which: usize) -> Vec<Surd> {
        let lam = &self.a2[which];
        (0..self.h1.len())
            .map(|n| Surd::rational(Rational::from(&self.h1.coeffs[n])).add(&lam.scale(&Rational::from(&self.h2.coeffs[n]))))
            .collect()
    }

    /// Hecke operator T_p (p prime) in the echelon basis, from expansions of length ≥ 2p + 1.
    pub fn hecke_matrix(&self, p: usize) -> Result<[[Integer; 2]; 2]> {
        let need = 2 * p + 1;
        if self.h1.len() < need {
            return Err(Error::Invalid(format!("need {need} coefficients for T_{p}")));
        }
        let pk = Integer::from(p).pow(23);
        let image = |h: &QExpansion, n: usize| {
            let mut v = h.coeffs[n * p].clone();
            if n % p == 0 {
                v += Integer::from(&pk * &h.coeffs[n / p]);
            }
            v
        };
        // T_p h = (T_p h)_1 h1 + (T_p h)_2 h2 in the echelon basis
        Ok([
            [image(&self.h1, 1), image(&self.h2, 1)],
            [image(&self.h1, 2), image(&self.h2, 2)],
        ])
    }
}

/// Builds the eigenforms of S₂₄ through q^N; requires N ≥ 4.
pub fn hecke_eigenforms_s24(n: usize) -> Result<S24Eigenforms> {
    let len = n.max(4);
    let e4 = eisenstein(4, len)?;
    let delta = delta_expansion(len)?;
    let g1 = delta.mul(&e4).mul(&e4).mul(&e4);
    let g2 = delta.mul(&delta);
    // g1 = q + c q² + ..., g2 = q² + ...
    let c = g1.coeffs[2].clone();
    let h1 = g1.sub(&g2.scale(&c))?;
    let h2 = g2;
    let mut forms = S24Eigenforms {
        h1,
        h2,
        t2: Default::default(),
        d: Integer::new(),
        a2: [Surd::zero(), Surd::zero()],
    };
    let m = forms.hecke_matrix(2)?;
    let tr = Integer::from(&m[0][0] + &m[1][1]);
    let det = Integer::from(&m[0][0] * &m[1][1]) - Integer::from(&m[0][1] * &m[1][0]);
    let disc = Integer::from(tr.square_ref()) - Integer::from(&det * 4u32);
    if disc <= 0 {
        return Err(Error::Invalid(format!("T_2 discriminant {disc} is not positive")));
    }
    let (s, d) = squarefree_split(disc);
    if d == 1 {
        return Err(Error::Invalid("T_2 has rational eigenvalues".into()));
    }
    let half = Rational::from((1, 2));
    let base = Rational::from(&tr) * &half;
    let root = Rational::from(&s) * &half;
    forms.a2 = [
        Surd { a: base.clone(), b: -root.clone() },
        Surd { a: base, b: root },
    ];
    // an eigenvector of the form h1 + a2 h2 needs T h1 = a2 h1 + ...: its q² coefficient is a2
    for lam in &forms.a2 {
        // (T_2 - lam) applied to (1, lam): first row m00 + m01 lam - lam = 0
        let r = Surd::rational(Rational::from(&m[0][0]))
            .add(&lam.scale(&Rational::from(&m[0][1])))
            .sub(lam);
        if !r.is_zero() {
            return Err(Error::Invalid("T_2 eigenvector check failed".into()));
        }
    }
    forms.t2 = m;
    forms.d = d;
    Ok(forms)
}

/// Analytic-normalization table of a level-1 eigenform from arithmetic coefficients a_0..a_N
/// (a_1 = 1) and weight k: b_n = a_n n^{-(k-1)/2}.
pub fn eigenform_table(a: &[Surd], k: i64, d: &Integer) -> Result<CoefficientTable> {
    CoefficientTable::known(2, Rational::from((k - 1, 2)), d.clone(), a[1..].to_vec())
}

/// Degree-2 table keeping only the Euler factors at primes ≤ p_max; other prime powers become symbols.
pub fn restrict_to_primes(t: &CoefficientTable, p_max: u64) -> Result<CoefficientTable> {
    let lf = degree2_local_factors(t, Some(p_max))?;
    expand_euler(&lf, t.cutoff(), t.degree)
}

fn degree2_local_factors(t: &CoefficientTable, p_max: Option<u64>) -> Result<LocalFactors> {
    if t.degree != 2 {
        return Err(Error::Invalid(format!("expected a degree-2 table, got degree {}", t.degree)));
    }
    let two_w = Rational::from(&t.weight * 2u32);
    if !two_w.denom().eq(&1) || two_w < 0 {
        return Err(Error::Invalid(format!("weight {} is not a half-integer", t.weight)));
    }
    let e = two_w.numer().to_u32().expect("small weight");
    let mut factors = BTreeMap::new();
    for p in 2..=t.cutoff() as u64 {
        if !is_prime(p) || p_max.is_some_and(|m| p > m) {
            continue;
        }
        if let CoefficientEntry::Known(ap) = t.entry(p) {
            let pw = Rational::from(Integer::from(p).pow(e));
            factors.insert(p, vec![Surd::one(), ap.neg(), Surd::rational(pw)]);
        }
    }
    Ok(LocalFactors { weight: t.weight.clone(), sqrt_d: t.sqrt_d.clone(), factors })
}

fn poly_pow(q: &[Surd], m: u32, d: &Integer) -> Vec<Surd> {
    let mut out = vec![Surd::one()];
    for _ in 0..m {
        let mut next = vec![Surd::zero(); out.len() + q.len() - 1];
        for (i, a) in out.iter().enumerate() {
            for (j, b) in q.iter().enumerate() {
                next[i + j] = next[i + j].add(&a.mul(b, d));
            }
        }
        out = next;
    }
    out
}

/// The m-th power of a degree-2 L-function: local factors Q_p^m at every prime whose b_p
/// is known, gamma factors repeated m times, Q^m and ε^m.
pub fn power_lift(c: &CoefficientTable, fe: &FunctionalEquation, m: u32) -> Result<LFunctionInstance> {
    if m == 0 {
        return Err(Error::Invalid("power must be at least 1".into()));
    }
    if m == 1 {
        return LFunctionInstance::new(fe.label.clone(), fe.clone(), c.clone());
    }
    let mut lf = degree2_local_factors(c, None)?;
    for q in lf.factors.values_mut() {
        *q = poly_pow(q, m, &lf.sqrt_d);
    }
    // a prime with b_p known but some b_{p^j} unknown cannot occur in tables from expand_euler
    for (n, e) in c.entries().iter().enumerate() {
        if let CoefficientEntry::Known(_) = e {
            continue;
        }
        let n = n as u64 + 1;
        if factorize(n).iter().all(|(p, _)| lf.factors.contains_key(p)) {
            return Err(Error::Invalid(format!("b_{n} unknown although its primes have known factors")));
        }
    }
    let table = expand_euler(&lf, c.cutoff(), 2 * m)?;
    let fe_m = fe.power(m)?;
    LFunctionInstance::new(fe_m.label.clone(), fe_m, table)
}
