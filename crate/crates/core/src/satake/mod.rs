//! Satake parameters of a Siegel eigenform on Sp(4, Z) from (λ(p), λ(p²)), and the
//! spin, standard and adjoint local factors built from them.
//!
//! With P = p^{2k-3}, the pair (λ(p), λ(p²)) fixes
//! A = λ(p)² − λ(p²) − (2 + 1/p)P and B = λ(p)² − 4P − 2A. The four spin roots
//! {α₀, α₀α₁, α₀α₂, α₀α₁α₂} have elementary symmetric functions
//! e₁ = λ(p), e₂ = A + 2P, e₃ = Pλ(p), e₄ = P², so one quartic solve gives all of them.
//! With u_i = α_i + α_i⁻¹ (analytic normalization) one has u₁ + u₂ = A/P and u₁u₂ = B/P,
//! which makes the standard and adjoint factors exact rational polynomials.

mod table;

pub use table::{parse_eigen_table, upsilon20_table, UPSILON20_TSV};

use crate::error::{Error, Result};
use crate::lmodel::{LocalFactors, Rho, Surd};
use crate::numerics::{poly_roots, PrecisionContext};
use rug::ops::Pow;
use rug::{Complex, Float, Integer, Rational};
use std::collections::BTreeMap;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeckeDatum {
    pub p: u64,
    pub lambda_p: Integer,
    pub lambda_p2: Integer,
    pub k: i64,
}

impl HeckeDatum {
    pub fn new(p: u64, lambda_p: Integer, lambda_p2: Integer, k: i64) -> Result<Self> {
        if !crate::lmodel::is_prime(p) {
            return Err(Error::Invalid(format!("{p} is not prime")));
        }
        if k % 2 != 0 {
            return Err(Error::Invalid(format!("weight {k} is odd")));
        }
        Ok(HeckeDatum { p, lambda_p, lambda_p2, k })
    }

    /// p^{2k-3}.
    pub fn big_p(&self) -> Integer {
        Integer::from(self.p).pow((2 * self.k - 3) as u32)
    }

    /// (A, B) of the defining system.
    pub fn a_b(&self) -> (Rational, Rational) {
        let pp = Rational::from(self.big_p());
        let l2 = Rational::from(self.lambda_p.clone().square());
        let two_plus = Rational::from(2) + Rational::from((1, self.p));
        let a = l2.clone() - Rational::from(&self.lambda_p2) - two_plus * &pp;
        let b = l2 - Rational::from(&pp * 4u32) - Rational::from(&a * 2u32);
        (a, b)
    }
}

/// Satake parameters in the analytic normalization α₀²α₁α₂ = 1.
#[derive(Clone, Debug)]
pub struct SatakeTriple {
    pub alpha0: Complex,
    pub alpha1: Complex,
    pub alpha2: Complex,
}

impl SatakeTriple {
    /// Largest | |α_j| − 1 |.
    pub fn unit_defect(&self) -> f64 {
        [&self.alpha0, &self.alpha1, &self.alpha2]
            .iter()
            .map(|a| (Float::with_val(64, a.abs_ref()).to_f64() - 1.0).abs())
            .fold(0.0, f64::max)
    }

    /// |α₀²α₁α₂ − 1|.
    pub fn norm_defect(&self) -> f64 {
        let p = self.alpha0.prec().0;
        let mut z = Complex::with_val(p, self.alpha0.square_ref());
        z *= &self.alpha1;
        z *= &self.alpha2;
        z -= 1;
        Float::with_val(64, z.abs_ref()).to_f64()
    }

    /// The four spin roots α₀, α₀α₁, α₀α₂, α₀α₁α₂.
    pub fn spin_roots(&self) -> [Complex; 4] {
        let p = self.alpha0.prec().0;
        let a01 = Complex::with_val(p, &self.alpha0 * &self.alpha1);
        let a02 = Complex::with_val(p, &self.alpha0 * &self.alpha2);
        let a012 = Complex::with_val(p, &a01 * &self.alpha2);
        [self.alpha0.clone(), a01, a02, a012]
    }

    /// Reconstructs (λ(p), λ(p²)) from the triple, undoing the normalization.
    pub fn reconstruct(&self, p: u64, k: i64) -> (Complex, Complex) {
        let prec = self.alpha0.prec().0;
        let big_p = Float::with_val(prec, Integer::from(p).pow((2 * k - 3) as u32));
        let roots = self.spin_roots();
        let sqrt_p = Float::with_val(prec, big_p.sqrt_ref());
        let mut e1 = Complex::new(prec);
        for r in &roots {
            e1 += r;
        }
        let mut e2 = Complex::new(prec);
        for i in 0..4 {
            for j in i + 1..4 {
                e2 += Complex::with_val(prec, &roots[i] * &roots[j]);
            }
        }
        let lambda = Complex::with_val(prec, &e1 * &sqrt_p);
        // A = P (e2_normalized − 2), λ(p²) = λ² − A − (2 + 1/p) P
        let mut a = Complex::with_val(prec, &e2 - 2u32);
        a *= &big_p;
        let two_plus = Float::with_val(prec, 2) + Float::with_val(prec, 1) / Float::with_val(prec, p);
        let mut lambda2 = Complex::with_val(prec, lambda.square_ref());
        lambda2 -= &a;
        lambda2 -= Float::with_val(prec, &two_plus * &big_p);
        (lambda, lambda2)
    }
}

fn c_from_int(x: &Integer, prec: u32) -> Complex {
    Complex::with_val(prec, (Float::with_val(prec, x), 0))
}

/// Solves for the analytically normalized Satake parameters of one prime.
pub fn solve_satake(h: &HeckeDatum, ctx: &PrecisionContext) -> Result<SatakeTriple> {
    let big_p = h.big_p();
    let wctx = ctx.widened(32);
    let prec = wctx.working_bits;
    // normalized spin quartic in y = x / sqrt(P): y^4 - c1 y^3 + c2 y^2 - c1 y + 1
    let sqrt_p = Float::with_val(prec, &big_p).sqrt();
    let (a, _) = h.a_b();
    let c1 = Float::with_val(prec, &h.lambda_p) / &sqrt_p;
    let c2 = Float::with_val(prec, &(a + Rational::from(&big_p * 2u32))) / Float::with_val(prec, &big_p);
    let re = |x: Float| Complex::with_val(prec, (x, 0));
    let coeffs = vec![
        re(Float::with_val(prec, 1)),
        re(Float::with_val(prec, -&c1)),
        re(c2),
        re(Float::with_val(prec, -&c1)),
        re(Float::with_val(prec, 1)),
    ];
    let mut roots = poly_roots(&coeffs, &wctx)?;
    roots.sort_by(|x, y| {
        let ax = Float::with_val(64, x.arg_ref()).to_f64();
        let ay = Float::with_val(64, y.arg_ref()).to_f64();
        ax.partial_cmp(&ay).unwrap()
    });

    let defect = |i: usize, j: usize| {
        let mut z = Complex::with_val(prec, &roots[i] * &roots[j]);
        z -= 1;
        Float::with_val(64, z.abs_ref()).to_f64()
    };
    // partner of roots[0]; the remaining two form the other pair
    let splits = [(1usize, 2usize, 3usize), (2, 1, 3), (3, 1, 2)];
    let (mut best, mut best_err) = (splits[0], f64::INFINITY);
    for &(j, k, l) in &splits {
        let err = defect(0, j).max(defect(k, l));
        if err < best_err {
            best = (j, k, l);
            best_err = err;
        }
    }
    if !(best_err < 2f64.powi(-(ctx.working_bits as i32) / 2)) {
        return Err(Error::PairingAmbiguity(h.p));
    }
    let (_, k1, k2) = best;
    let out_prec = ctx.working_bits;
    let triple = SatakeTriple {
        alpha0: Complex::with_val(out_prec, &roots[0]),
        alpha1: Complex::with_val(out_prec, &roots[k1] / &roots[0]),
        alpha2: Complex::with_val(out_prec, &roots[k2] / &roots[0]),
    };
    let res = round_trip_residual(h, &triple);
    if !(res < 2f64.powi(-(ctx.working_bits as i32) / 2)) {
        return Err(Error::ReconstructionMismatch { p: h.p, residual: res });
    }
    Ok(triple)
}

/// Relative round-trip residual max(|Δλ(p)|/√P, |Δλ(p²)|/P).
pub fn round_trip_residual(h: &HeckeDatum, t: &SatakeTriple) -> f64 {
    let prec = t.alpha0.prec().0;
    let (l1, l2) = t.reconstruct(h.p, h.k);
    let big_p = Float::with_val(prec, h.big_p());
    let r1 = Complex::with_val(prec, &l1 - c_from_int(&h.lambda_p, prec));
    let r2 = Complex::with_val(prec, &l2 - c_from_int(&h.lambda_p2, prec));
    let a = Float::with_val(prec, r1.abs_ref()) / Float::with_val(prec, big_p.sqrt_ref());
    let b = Float::with_val(prec, r2.abs_ref()) / &big_p;
    a.max(&b).to_f64()
}

fn expand_roots(roots: &[Complex], prec: u32) -> Vec<Complex> {
    // prod (1 - r X), ascending coefficients
    let mut c = vec![Complex::with_val(prec, 1)];
    for r in roots {
        let mut next = vec![Complex::new(prec); c.len() + 1];
        for (i, ci) in c.iter().enumerate() {
            next[i] += ci;
            next[i + 1] -= Complex::with_val(prec, ci * r);
        }
        c = next;
    }
    c
}

/// The local roots of ρ at the given triple (analytic normalization).
pub fn local_roots(t: &SatakeTriple, rho: Rho) -> Vec<Complex> {
    let prec = t.alpha0.prec().0;
    let one = Complex::with_val(prec, 1);
    let inv = |z: &Complex| Complex::with_val(prec, z.recip_ref());
    let a1 = t.alpha1.clone();
    let a2 = t.alpha2.clone();
    match rho {
        Rho::Spin => t.spin_roots().to_vec(),
        Rho::Stan => vec![one, inv(&a1), a1, inv(&a2), a2],
        Rho::Adj => {
            let a12 = Complex::with_val(prec, &a1 * &a2);
            let a1d2 = Complex::with_val(prec, &a1 / &a2);
            vec![
                one.clone(),
                one,
                inv(&a1),
                a1.clone(),
                inv(&a2),
                a2.clone(),
                inv(&a12),
                a12,
                inv(&a1d2),
                a1d2,
            ]
        }
    }
}

/// Numeric local factor ∏(1 − rX) for ρ, checked real and returned as real coefficients.
pub fn local_factor(t: &SatakeTriple, rho: Rho, ctx: &PrecisionContext) -> Result<Vec<Float>> {
    let prec = t.alpha0.prec().0;
    let c = expand_roots(&local_roots(t, rho), prec);
    let tol = Float::with_val(prec, 1) >> (ctx.working_bits / 2);
    c.into_iter()
        .map(|z| {
            let im = Float::with_val(prec, z.imag().abs_ref());
            if im > tol {
                Err(Error::ComplexCoefficient(im.to_f64()))
            } else {
                Ok(Float::with_val(ctx.working_bits, z.real()))
            }
        })
        .collect()
}

fn poly_mul(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut out = vec![Rational::new(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += Rational::from(x * y);
        }
    }
    out
}

fn palindromic_quartic(sum: &Rational, prod: &Rational) -> Vec<Rational> {
    // (1 - xX + X^2)(1 - yX + X^2) with x + y = sum, xy = prod
    vec![
        Rational::from(1),
        Rational::from(-sum),
        Rational::from(prod + 2u32),
        Rational::from(-sum),
        Rational::from(1),
    ]
}

/// Exact local factor in arithmetic normalization, with the weight w such that
/// b_n = (arithmetic coefficient) · n^{-w}.
pub fn exact_local_factor(h: &HeckeDatum, rho: Rho) -> (Vec<Rational>, Rational) {
    let big_p = Rational::from(h.big_p());
    let (a, b) = h.a_b();
    let s1 = Rational::from(&a / &big_p);
    let p1 = Rational::from(&b / &big_p);
    let one_minus_x = vec![Rational::from(1), Rational::from(-1)];
    match rho {
        Rho::Spin => {
            let l = Rational::from(&h.lambda_p);
            let pk4 = Rational::from(Integer::from(h.p).pow((2 * h.k - 4) as u32));
            let c2 = Rational::from(l.square_ref()) - Rational::from(&h.lambda_p2) - pk4;
            let c3 = -Rational::from(&l * &big_p);
            let c4 = Rational::from(big_p.square_ref());
            (vec![Rational::from(1), -l, c2, c3, c4], Rational::from((2 * h.k - 3, 2)))
        }
        Rho::Stan => (poly_mul(&one_minus_x, &palindromic_quartic(&s1, &p1)), Rational::new()),
        Rho::Adj => {
            // v + w = u1 u2, v w = u1^2 + u2^2 - 4
            let vw = Rational::from(s1.square_ref()) - Rational::from(&p1 * 2u32) - 4u32;
            let f = poly_mul(&one_minus_x, &one_minus_x);
            let f = poly_mul(&f, &palindromic_quartic(&s1, &p1));
            (poly_mul(&f, &palindromic_quartic(&p1, &vw)), Rational::new())
        }
    }
}

/// Exact local factors of ρ for every datum, ready for `expand_euler`.
pub fn local_factors(data: &[HeckeDatum], rho: Rho) -> LocalFactors {
    let mut factors = BTreeMap::new();
    let mut weight = Rational::new();
    for h in data {
        let (q, w) = exact_local_factor(h, rho);
        weight = w;
        factors.insert(h.p, q.into_iter().map(Surd::rational).collect());
    }
    LocalFactors { weight, sqrt_d: Integer::from(1), factors }
}
