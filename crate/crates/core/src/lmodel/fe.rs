use crate::error::{Error, Result};
use crate::lmodel::surd::rat_str;
use crate::numerics::{ln_gamma, ln_gamma_f64};
use num_complex::Complex64;
use rug::float::Constant;
use rug::ops::Pow;
use rug::{Complex, Float, Rational};
use serde::{Deserialize, Serialize};

/// Exact complex rational.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CRat {
    #[serde(with = "rat_str")]
    pub re: Rational,
    #[serde(with = "rat_str")]
    pub im: Rational,
}

impl CRat {
    pub fn new(re: Rational, im: Rational) -> Self {
        CRat { re, im }
    }

    pub fn real(re: impl Into<Rational>) -> Self {
        CRat { re: re.into(), im: Rational::new() }
    }

    pub fn to_complex(&self, prec: u32) -> Complex {
        Complex::with_val(prec, (&self.re, &self.im))
    }

    pub fn to_c64(&self) -> Complex64 {
        Complex64::new(self.re.to_f64(), self.im.to_f64())
    }

    pub fn conj(&self) -> CRat {
        CRat { re: self.re.clone(), im: Rational::from(-&self.im) }
    }

    pub fn mul(&self, o: &CRat) -> CRat {
        let re = Rational::from(&self.re * &o.re) - Rational::from(&self.im * &o.im);
        let im = Rational::from(&self.re * &o.im) + Rational::from(&self.im * &o.re);
        CRat { re, im }
    }
}

/// One gamma factor Gamma(kappa s + lambda).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GammaShift {
    #[serde(with = "rat_str")]
    pub kappa: Rational,
    pub lambda: CRat,
}

impl GammaShift {
    pub fn new(kappa: Rational, lambda_re: Rational) -> Self {
        GammaShift { kappa, lambda: CRat::real(lambda_re) }
    }
}

/// Q = rational * pi^pi_exp * sqrt(sqrt_of).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QConstant {
    #[serde(with = "rat_str")]
    pub rational: Rational,
    #[serde(with = "rat_str")]
    pub pi_exp: Rational,
    #[serde(with = "rat_str")]
    pub sqrt_of: Rational,
}

impl QConstant {
    pub fn new(rational: Rational, pi_exp: Rational) -> Self {
        QConstant { rational, pi_exp, sqrt_of: Rational::from(1) }
    }

    pub fn to_float(&self, prec: u32) -> Float {
        let p = prec + 16;
        let mut q = Float::with_val(p, &self.rational);
        if !self.pi_exp.is_zero() {
            let pi = Float::with_val(p, Constant::Pi);
            q *= pi.pow(Float::with_val(p, &self.pi_exp));
        }
        if self.sqrt_of != 1 {
            q *= Float::with_val(p, &self.sqrt_of).sqrt();
        }
        Float::with_val(prec, q)
    }

    pub fn ln_f64(&self) -> f64 {
        self.rational.to_f64().ln()
            + self.pi_exp.to_f64() * std::f64::consts::PI.ln()
            + 0.5 * self.sqrt_of.to_f64().ln()
    }

    pub fn pow(&self, m: u32) -> QConstant {
        QConstant {
            rational: self.rational.clone().pow(m),
            pi_exp: Rational::from(&self.pi_exp * m),
            sqrt_of: self.sqrt_of.clone().pow(m),
        }
    }
}

/// Pole of the completed L-function with its residue.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Pole {
    pub s: CRat,
    pub residue: CRat,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Rho {
    Spin,
    Stan,
    Adj,
}

impl Rho {
    pub fn degree(self) -> u32 {
        match self {
            Rho::Spin => 4,
            Rho::Stan => 5,
            Rho::Adj => 10,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Rho::Spin => "spin",
            Rho::Stan => "stan",
            Rho::Adj => "adj",
        }
    }
}

/// Lambda(s) = Q^s prod Gamma(kappa_j s + lambda_j) L(s) = epsilon conj(Lambda(1 - conj s)).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FunctionalEquation {
    pub label: String,
    pub degree: u32,
    pub q: QConstant,
    pub shifts: Vec<GammaShift>,
    pub epsilon: CRat,
    pub poles: Vec<Pole>,
}

impl FunctionalEquation {
    pub fn validate(&self) -> Result<()> {
        let mut two_kappa = Rational::new();
        for g in &self.shifts {
            if g.kappa <= 0 {
                return Err(Error::Invalid(format!("kappa must be positive, got {}", g.kappa)));
            }
            if g.lambda.re < 0 {
                return Err(Error::Invalid(format!("Re lambda must be >= 0, got {}", g.lambda.re)));
            }
            two_kappa += Rational::from(&g.kappa * 2u32);
        }
        if two_kappa != self.degree {
            return Err(Error::Invalid(format!("degree {} but 2*sum(kappa) = {}", self.degree, two_kappa)));
        }
        if self.q.rational <= 0 || self.q.sqrt_of <= 0 {
            return Err(Error::Invalid("Q must be positive".into()));
        }
        let norm = Rational::from(self.epsilon.re.square_ref()) + Rational::from(self.epsilon.im.square_ref());
        if norm != 1 {
            return Err(Error::Invalid(format!("|epsilon|^2 = {norm}, expected 1")));
        }
        Ok(())
    }

    /// +1 or -1 when epsilon is real.
    pub fn epsilon_sign(&self) -> Option<i32> {
        if !self.epsilon.im.is_zero() {
            return None;
        }
        if self.epsilon.re == 1 {
            Some(1)
        } else if self.epsilon.re == -1 {
            Some(-1)
        } else {
            None
        }
    }

    /// max{0, -Re(lambda_j/kappa_j + s)}: the contour abscissa must exceed this.
    pub fn nu_lower_bound(&self, s_re: f64) -> f64 {
        self.shifts
            .iter()
            .map(|g| -(g.lambda.re.to_f64() / g.kappa.to_f64() + s_re))
            .fold(0.0, f64::max)
    }

    /// ln(Q^w prod Gamma(kappa w + lambda)); lambdas conjugated when `conj`.
    pub fn ln_gamma_factor(&self, w: &Complex, conj: bool, prec: u32) -> Result<Complex> {
        let lnq = Float::with_val(prec + 16, self.q.to_float(prec + 16).ln_ref());
        let mut acc = Complex::with_val(prec + 16, w * &lnq);
        for g in &self.shifts {
            let lam = if conj { g.lambda.conj() } else { g.lambda.clone() };
            let mut arg = Complex::with_val(prec + 16, w * &g.kappa);
            arg += lam.to_complex(prec + 16);
            acc += ln_gamma(&arg, prec + 16)?;
        }
        Ok(Complex::with_val(prec, acc))
    }

    pub fn ln_gamma_factor_f64(&self, w: Complex64, conj: bool) -> Complex64 {
        let mut acc = w * self.q.ln_f64();
        for g in &self.shifts {
            let lam = g.lambda.to_c64();
            let lam = if conj { lam.conj() } else { lam };
            acc += ln_gamma_f64(w * g.kappa.to_f64() + lam);
        }
        acc
    }

    /// The FE of the m-th power: shifts repeated, Q^m, epsilon^m.
    pub fn power(&self, m: u32) -> Result<FunctionalEquation> {
        if !self.poles.is_empty() && m > 1 {
            return Err(Error::Unsupported("powers of L-functions with poles".into()));
        }
        let mut eps = CRat::real(1);
        for _ in 0..m {
            eps = eps.mul(&self.epsilon);
        }
        let mut shifts = Vec::new();
        for _ in 0..m {
            shifts.extend(self.shifts.iter().cloned());
        }
        Ok(FunctionalEquation {
            label: if m == 1 { self.label.clone() } else { format!("{}^{}", self.label, m) },
            degree: self.degree * m,
            q: self.q.pow(m),
            shifts,
            epsilon: eps,
            poles: self.poles.clone(),
        })
    }
}

fn rat(n: i64, d: i64) -> Rational {
    Rational::from((n, d))
}

/// Gamma_R(s + mu) = pi^{-(s+mu)/2} Gamma((s+mu)/2) and Gamma_C(s + mu) = 2 (2 pi)^{-(s+mu)} Gamma(s+mu),
/// unfolded: each Gamma_R contributes kappa = 1/2 and a factor pi^{-1/2} to Q, each Gamma_C kappa = 1
/// and (2 pi)^{-1}; constant factors are dropped.
pub fn unfold(label: &str, gamma_r: &[Rational], gamma_c: &[Rational], epsilon: i64) -> FunctionalEquation {
    let mut shifts = Vec::new();
    for mu in gamma_r {
        shifts.push(GammaShift::new(rat(1, 2), Rational::from(mu / 2u32)));
    }
    for mu in gamma_c {
        shifts.push(GammaShift::new(rat(1, 1), mu.clone()));
    }
    let nr = gamma_r.len() as i64;
    let nc = gamma_c.len() as u32;
    let q = QConstant::new(Rational::from(1) / Rational::from(2).pow(nc), rat(-nr, 2) - Rational::from(nc));
    FunctionalEquation {
        label: label.to_string(),
        degree: gamma_r.len() as u32 + 2 * nc,
        q,
        shifts,
        epsilon: CRat::real(epsilon),
        poles: vec![],
    }
}

/// Functional equation of the spin, standard or adjoint L-function of a weight-k
/// Siegel eigenform on Sp(4, Z).
pub fn fe_for(rho: Rho, k: i64) -> Result<FunctionalEquation> {
    if k % 2 != 0 || k < 10 {
        return Err(Error::Invalid(format!("weight must be even and >= 10, got {k}")));
    }
    let r = |x: i64| Rational::from(x);
    let fe = match rho {
        Rho::Spin => unfold("spin", &[], &[rat(1, 2), rat(2 * k - 3, 2)], if k % 2 == 0 { 1 } else { -1 }),
        Rho::Stan => unfold("stan", &[r(0)], &[r(k - 2), r(k - 1)], 1),
        Rho::Adj => unfold("adj", &[r(1), r(1)], &[r(1), r(k - 2), r(k - 1), r(2 * k - 3)], 1),
    };
    fe.validate()?;
    Ok(fe)
}

/// Degree-2 FE of a level-1 weight-k eigenform: Gamma_C(s + (k-1)/2), epsilon = i^k.
pub fn fe_classical(k: i64) -> Result<FunctionalEquation> {
    if k % 2 != 0 {
        return Err(Error::Invalid(format!("weight must be even, got {k}")));
    }
    let eps = if k % 4 == 0 { 1 } else { -1 };
    let fe = unfold(&format!("weight{k}"), &[], &[rat(k - 1, 2)], eps);
    fe.validate()?;
    Ok(fe)
}

/// Riemann zeta: Gamma_R(s), poles of Lambda at s = 1 (residue 1) and s = 0 (residue -1).
pub fn fe_zeta() -> FunctionalEquation {
    let mut fe = unfold("zeta", &[Rational::new()], &[], 1);
    fe.poles = vec![
        Pole { s: CRat::real(1), residue: CRat::real(1) },
        Pole { s: CRat::real(0), residue: CRat::real(-1) },
    ];
    fe
}
