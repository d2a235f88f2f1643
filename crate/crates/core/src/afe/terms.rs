use crate::afe::plan::{tune_plan, TunedPlan};
use crate::error::{Error, Result};
use crate::lmodel::{CRat, FunctionalEquation, TestFunction};
use crate::numerics::{hexfloat, integrate_vertical, IntegrationPlan, PrecisionContext};
use rayon::prelude::*;
use rug::float::Constant;
use rug::{Assign, Complex, Float};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

const REFRESH: usize = 256;

/// Per-n coefficients of one smoothed AFE evaluation, independent of the coefficient table:
/// Z(s) = pole_part + Σ b_n coeff_re[n-1] for real b_n.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AfeTerms {
    pub label: String,
    pub s: CRat,
    pub g: TestFunction,
    pub cutoff: usize,
    pub ctx: PrecisionContext,
    pub plan: TunedPlan,
    /// Real parts of term_n / normalizer.
    #[serde(with = "hexfloat::vec")]
    pub coeff_re: Vec<Float>,
    /// Imaginary parts; they cancel in the full sum but not term by term.
    #[serde(with = "hexfloat::vec")]
    pub coeff_im: Vec<Float>,
    /// Normalized pole contribution (real, imaginary).
    #[serde(with = "hexfloat")]
    pub pole_re: Float,
    #[serde(with = "hexfloat")]
    pub pole_im: Float,
    /// g(s) |γ(s)| ε^{1/2}.
    #[serde(with = "hexfloat")]
    pub norm_re: Float,
    #[serde(with = "hexfloat")]
    pub norm_im: Float,
}

impl AfeTerms {
    /// Precision of the stored coefficients, at least the context's.
    pub fn prec(&self) -> u32 {
        self.coeff_re.first().map_or(self.ctx.working_bits, |c| c.prec()).max(self.ctx.working_bits)
    }

    pub fn coefficient(&self, n: u64) -> &Float {
        &self.coeff_re[n as usize - 1]
    }

    /// |term_n| / |normalizer|.
    pub fn magnitude(&self, n: u64) -> f64 {
        let i = n as usize - 1;
        self.coeff_re[i].to_f64().hypot(self.coeff_im[i].to_f64())
    }

    pub fn normalizer(&self) -> Complex {
        Complex::with_val(self.norm_re.prec(), (&self.norm_re, &self.norm_im))
    }
}

/// Stable cache key for an evaluation request.
pub fn terms_key(fe: &FunctionalEquation, s: &CRat, g: &TestFunction, cutoff: usize, ctx: &PrecisionContext) -> String {
    let text = serde_json::to_string(&(fe, s, g, cutoff, ctx.target_digits, ctx.working_bits, "terms-v2", env!("CARGO_PKG_VERSION")))
        .expect("serializable");
    hex::encode(Sha256::digest(text.as_bytes()))
}

/// ε^{1/2}: 1 for ε = 1, i for ε = −1.
pub fn epsilon_sqrt(fe: &FunctionalEquation, prec: u32) -> Result<Complex> {
    match fe.epsilon_sign() {
        Some(1) => Ok(Complex::with_val(prec, (1, 0))),
        Some(-1) => Ok(Complex::with_val(prec, (0, 1))),
        _ => Err(Error::Unsupported(format!(
            "root number {}+{}i; only ±1 is supported",
            fe.epsilon.re, fe.epsilon.im
        ))),
    }
}

/// g(s) |γ(s)| ε^{1/2}, the divisor turning Λ(s)g(s) into Z(s).
pub fn z_normalizer(fe: &FunctionalEquation, g: &TestFunction, s: &Complex, prec: u32) -> Result<Complex> {
    let p = prec + 32;
    let lg = fe.ln_gamma_factor(s, false, p)?;
    let gam_abs = Float::with_val(p, lg.real()).exp();
    let mut n = g.g(s, p);
    n *= &gam_abs;
    n *= epsilon_sqrt(fe, p)?;
    Ok(Complex::with_val(prec, n))
}

/// Σ r_k g(s_k) / (s − s_k).
pub fn pole_sum(fe: &FunctionalEquation, g: &TestFunction, s: &Complex, prec: u32) -> Result<Complex> {
    let mut acc = Complex::new(prec);
    for pole in &fe.poles {
        let sk = pole.s.to_complex(prec);
        let d = Complex::with_val(prec, s - &sk);
        if d.is_zero() {
            return Err(Error::PoleHit(format!("{}+{}i", pole.s.re, pole.s.im)));
        }
        let mut t = g.g(&sk, prec);
        t *= pole.residue.to_complex(prec);
        t /= &d;
        acc += t;
    }
    Ok(acc)
}

fn ln_gamma_sum(fe: &FunctionalEquation, w: &Complex, conj: bool, prec: u32) -> Result<Complex> {
    fe.ln_gamma_factor(w, conj, prec)
}

/// Node weights γ(s+z_k) g(s+z_k)/z_k and γ*(1−s+z_k) g(s−z_k)/z_k.
fn node_weights(
    fe: &FunctionalEquation,
    g: &TestFunction,
    s: &Complex,
    plan: &IntegrationPlan,
    prec: u32,
) -> Result<(Vec<Complex>, Vec<Complex>)> {
    let ys: Vec<f64> = plan.ordinates().collect();
    let one_minus_s = Complex::with_val(prec, 1 - s);
    let pairs: Result<Vec<(Complex, Complex)>> = ys
        .par_iter()
        .map(|&y| {
            let z = Complex::with_val(prec, (plan.nu, y));
            let lnz = Complex::with_val(prec, z.ln_ref());
            let w1 = Complex::with_val(prec, s + &z);
            let mut e1 = ln_gamma_sum(fe, &w1, false, prec)?;
            e1 += g.ln_g(&w1, prec);
            e1 -= &lnz;
            let w2 = Complex::with_val(prec, &one_minus_s + &z);
            let mut e2 = ln_gamma_sum(fe, &w2, true, prec)?;
            let sz = Complex::with_val(prec, s - &z);
            e2 += g.ln_g(&sz, prec);
            e2 -= &lnz;
            Ok((e1.exp(), e2.exp()))
        })
        .collect();
    Ok(pairs?.into_iter().unzip())
}

struct NodeSums {
    w1: Vec<Complex>,
    w2: Vec<Complex>,
    ys: Vec<f64>,
    prec: u32,
}

impl NodeSums {
    /// (Σ w1_k e^{-i y_k ln n}, Σ w2_k e^{-i y_k ln n}) with a phasor recurrence.
    fn sums(&self, ln_n: &Float) -> (Complex, Complex) {
        let p = self.prec;
        let mut a1 = Complex::new(p);
        let mut a2 = Complex::new(p);
        if ln_n.is_zero() {
            for (x, y) in self.w1.iter().zip(self.w2.iter()) {
                a1 += x;
                a2 += y;
            }
            return (a1, a2);
        }
        let h = self.ys.get(1).map(|y1| y1 - self.ys[0]).unwrap_or(0.0);
        let mut theta = Float::new(p);
        theta.assign(Float::with_val(p, h) * ln_n);
        theta = -theta;
        let (sn, cs) = theta.sin_cos(Float::new(p));
        let step = Complex::with_val(p, (cs, sn));
        let mut ph = Complex::new(p);
        let mut tmp = Complex::new(p);
        for (k, y) in self.ys.iter().enumerate() {
            if k % REFRESH == 0 {
                let mut th = Float::with_val(p, *y);
                th *= ln_n;
                th = -th;
                let (sn, cs) = th.sin_cos(Float::new(p));
                ph.assign((cs, sn));
            } else {
                ph *= &step;
            }
            tmp.assign(&self.w1[k] * &ph);
            a1 += &tmp;
            tmp.assign(&self.w2[k] * &ph);
            a2 += &tmp;
        }
        (a1, a2)
    }
}

/// Computes the per-n AFE coefficients for n ≤ cutoff with an automatically tuned plan.
pub fn compute_terms(
    fe: &FunctionalEquation,
    s: &CRat,
    g: &TestFunction,
    cutoff: usize,
    ctx: &PrecisionContext,
) -> Result<AfeTerms> {
    let plan = tune_plan(fe, g, s, cutoff, ctx)?;
    compute_terms_with(fe, s, g, cutoff, ctx, plan)
}

/// Same as `compute_terms` with a caller-supplied plan and precision.
pub fn compute_terms_with(
    fe: &FunctionalEquation,
    s: &CRat,
    g: &TestFunction,
    cutoff: usize,
    ctx: &PrecisionContext,
    plan: TunedPlan,
) -> Result<AfeTerms> {
    fe.validate()?;
    g.validate(fe.degree)?;
    plan.plan.validate()?;
    let p = plan.working_bits.max(ctx.working_bits);
    let sc = s.to_complex(p);
    let norm = z_normalizer(fe, g, &sc, p)?;
    let poles = Complex::with_val(p, pole_sum(fe, g, &sc, p)? / &norm);
    let eps = fe.epsilon.to_complex(p);
    let (w1, w2) = node_weights(fe, g, &sc, &plan.plan, p)?;
    let sums = NodeSums { w1, w2, ys: plan.plan.ordinates().collect(), prec: p };

    // (h / 2π) / normalizer
    let two_pi = Float::with_val(p, Constant::Pi) * 2u32;
    let mut scale = Complex::with_val(p, Float::with_val(p, plan.plan.step) / two_pi);
    scale /= &norm;
    let eps_scale = Complex::with_val(p, &scale * &eps);
    let nu = Float::with_val(p, plan.plan.nu);
    let e1 = Complex::with_val(p, &sc + &nu); // s + ν
    let e2 = Complex::with_val(p, 1 - &sc) + &nu; // 1 − s + ν

    let coeffs: Vec<(Float, Float)> = (1..=cutoff as u64)
        .into_par_iter()
        .map(|n| {
            let ln_n = Float::with_val(p, n).ln();
            let (a1, a2) = sums.sums(&ln_n);
            let f1 = (-Complex::with_val(p, &e1 * &ln_n)).exp();
            let f2 = (-Complex::with_val(p, &e2 * &ln_n)).exp();
            let mut t = Complex::with_val(p, &a1 * &f1);
            t *= &scale;
            let mut u = Complex::with_val(p, &a2 * &f2);
            u *= &eps_scale;
            t += u;
            t.into_real_imag()
        })
        .collect();
    // the sum over n cancels down from the largest term, so that many extra bits are kept
    let top = coeffs
        .iter()
        .flat_map(|(re, im)| [re.get_exp(), im.get_exp()])
        .flatten()
        .max()
        .unwrap_or(0)
        .max(0) as u32;
    let out_p = (ctx.working_bits + top).min(p);
    let coeffs: Vec<(Float, Float)> =
        coeffs.into_iter().map(|(re, im)| (Float::with_val(out_p, re), Float::with_val(out_p, im))).collect();
    let (coeff_re, coeff_im): (Vec<Float>, Vec<Float>) = coeffs.into_iter().unzip();
    let (pole_re, pole_im) = poles.into_real_imag();
    let (norm_re, norm_im) = norm.into_real_imag();
    Ok(AfeTerms {
        label: fe.label.clone(),
        s: s.clone(),
        g: g.clone(),
        cutoff,
        ctx: *ctx,
        plan,
        coeff_re,
        coeff_im,
        pole_re: Float::with_val(out_p, pole_re),
        pole_im: Float::with_val(out_p, pole_im),
        norm_re: Float::with_val(out_p, norm_re),
        norm_im: Float::with_val(out_p, norm_im),
    })
}

/// f1(s, n) = (1/2πi) ∫ ∏Γ(κ_j(z+s)+λ_j) z^{-1} g(s+z) (Q/n)^z dz on Re z = plan.nu.
pub fn f1(
    s: &Complex,
    n: u64,
    g: &TestFunction,
    fe: &FunctionalEquation,
    plan: &IntegrationPlan,
    ctx: &PrecisionContext,
) -> Result<Complex> {
    check_nu(fe, s.real().to_f64(), plan)?;
    let p = ctx.working_bits;
    let lnq = Float::with_val(p, fe.q.to_float(p).ln_ref());
    let ln_qn = Float::with_val(p, &lnq - Float::with_val(p, n).ln());
    integrate_vertical(
        |z| {
            let w = Complex::with_val(p, s + z);
            let mut e = Complex::with_val(p, &w * &lnq);
            e = Complex::with_val(p, ln_gamma_sum(fe, &w, false, p)? - e);
            e += g.ln_g(&w, p);
            e += Complex::with_val(p, z * &ln_qn);
            e -= Complex::with_val(p, z.ln_ref());
            Ok(e.exp())
        },
        plan,
        ctx,
    )
}

/// f2(1−s, n): the mirror of `f1` with conjugated λ_j and g(s − z).
pub fn f2(
    one_minus_s: &Complex,
    n: u64,
    g: &TestFunction,
    fe: &FunctionalEquation,
    plan: &IntegrationPlan,
    ctx: &PrecisionContext,
) -> Result<Complex> {
    check_nu(fe, one_minus_s.real().to_f64(), plan)?;
    let p = ctx.working_bits;
    let s = Complex::with_val(p, 1 - one_minus_s);
    let lnq = Float::with_val(p, fe.q.to_float(p).ln_ref());
    let ln_qn = Float::with_val(p, &lnq - Float::with_val(p, n).ln());
    integrate_vertical(
        |z| {
            let w = Complex::with_val(p, one_minus_s + z);
            let mut e = Complex::with_val(p, &w * &lnq);
            e = Complex::with_val(p, ln_gamma_sum(fe, &w, true, p)? - e);
            let sz = Complex::with_val(p, &s - z);
            e += g.ln_g(&sz, p);
            e += Complex::with_val(p, z * &ln_qn);
            e -= Complex::with_val(p, z.ln_ref());
            Ok(e.exp())
        },
        plan,
        ctx,
    )
}

fn check_nu(fe: &FunctionalEquation, s_re: f64, plan: &IntegrationPlan) -> Result<()> {
    let lb = fe.nu_lower_bound(s_re);
    if plan.nu <= lb {
        return Err(Error::Invalid(format!("contour abscissa {} must exceed {lb}", plan.nu)));
    }
    Ok(())
}
