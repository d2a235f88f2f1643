use crate::afe::terms::{compute_terms, compute_terms_with, epsilon_sqrt, AfeTerms};
use crate::afe::plan::{plan_for_nu, TunedPlan};
use crate::error::{Error, Result};
use crate::lmodel::{ramanujan_bound, CRat, CoefficientEntry, CoefficientTable, LFunctionInstance, TestFunction};
use crate::numerics::{hexfloat, IntegrationPlan, PrecisionContext};
use rug::{Complex, Float};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

pub const TAIL_WINDOW: usize = 200;
pub const TAIL_SAFETY: f64 = 100.0;
const TAIL_BLOCK: usize = 20;
/// Terms within this factor of the accuracy floor are left out of the tail fit.
const RESOLVED: f64 = 1e3;

/// Line through the block maxima of ln|term_n| over the last window of resolved terms, raised to
/// cover the later half of them and extrapolated past the cutoff. Terms below `floor` are at the quadrature's accuracy limit; when the tail of
/// the computed range sits there, the window ends at the last resolved n instead of the cutoff.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TailModel {
    pub intercept: f64,
    pub slope: f64,
    pub window: usize,
    /// Last n of the fit window.
    pub fit_end: usize,
    /// Per-term accuracy of the computed magnitudes.
    pub floor: f64,
    /// Largest C·Ram(n, d) over the window and beyond.
    pub ram_weight: f64,
    /// Fitted and computed |term| at n = fit_end.
    pub predicted_last: f64,
    pub actual_last: f64,
    pub bound: f64,
    /// floor · fit_end: what the computed terms themselves may be off by.
    pub accuracy: f64,
}

impl TailModel {
    pub fn fit(terms: &AfeTerms, degree: u32, bound_constant: f64) -> TailModel {
        let n_max = terms.cutoff;
        let floor = (terms.plan.log_eps - terms.plan.tau).exp();
        let resolved = |n: usize| terms.magnitude(n as u64) > RESOLVED * floor;
        let fit_end = (1..=n_max).rev().find(|&n| resolved(n)).unwrap_or(n_max);
        let window = TAIL_WINDOW.max(fit_end / 4).min(fit_end);
        let lo = fit_end - window + 1;
        // block maxima smooth out sign changes; the line is then lifted over every block
        let pts: Vec<(f64, f64)> = (lo..=fit_end)
            .collect::<Vec<_>>()
            .chunks(TAIL_BLOCK.min(window / 8).max(1))
            .map(|b| {
                let (n, m) = b
                    .iter()
                    .map(|&n| (n, terms.magnitude(n as u64)))
                    .fold((b[0], 0.0), |acc, x| if x.1 > acc.1 { x } else { acc });
                (n as f64, m.max(f64::MIN_POSITIVE).ln())
            })
            .collect();
        let m = pts.len() as f64;
        let (sx, sy) = pts.iter().fold((0.0, 0.0), |(a, b), (x, y)| (a + x, b + y));
        let (mx, my) = (sx / m, sy / m);
        let sxx: f64 = pts.iter().map(|(x, _)| (x - mx) * (x - mx)).sum();
        let sxy: f64 = pts.iter().map(|(x, y)| (x - mx) * (y - my)).sum();
        let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
        // lifted over the later blocks only: the extrapolation starts there
        let intercept = pts[pts.len() / 2..].iter().map(|(x, y)| y - slope * x).fold(f64::NEG_INFINITY, f64::max);
        let ram_weight = (lo..=n_max)
            .map(|n| bound_constant * ramanujan_bound(n as u64, degree) as f64)
            .fold(0.0, f64::max);
        let next = (intercept + slope * (n_max as f64 + 1.0)).exp();
        let bound = if slope < 0.0 {
            TAIL_SAFETY * ram_weight * next / (1.0 - slope.exp())
        } else {
            f64::INFINITY
        };
        TailModel {
            intercept,
            slope,
            window,
            fit_end,
            floor,
            ram_weight,
            predicted_last: (intercept + slope * fit_end as f64).exp(),
            actual_last: terms.magnitude(fit_end as u64),
            bound,
            accuracy: floor * fit_end as f64,
        }
    }
}

/// One evaluation of Z(s) against a coefficient table: known part plus per-symbol multipliers.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Evaluation {
    pub s: CRat,
    pub g: TestFunction,
    pub instance_label: String,
    #[serde(with = "hexfloat")]
    pub known_part: Float,
    /// symbol q → aggregated multiplier of b_q.
    pub deltas: BTreeMap<u64, DeltaValue>,
    /// Extrapolated tail plus the accuracy term.
    pub tail_bound: f64,
    pub tail: TailModel,
    /// |Im| of the known part; only meaningful when no symbols remain.
    pub imag_residual: f64,
    #[serde(with = "hexfloat")]
    pub norm_re: Float,
    #[serde(with = "hexfloat")]
    pub norm_im: Float,
    pub degree: u32,
    pub bound_constant: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DeltaValue(#[serde(with = "hexfloat")] pub Float);

impl Evaluation {
    /// Applies the per-n terms to a coefficient table.
    pub fn from_terms(label: &str, terms: &AfeTerms, table: &CoefficientTable) -> Result<Evaluation> {
        if table.cutoff() < terms.cutoff {
            return Err(Error::Invalid(format!(
                "table has {} coefficients, evaluation needs {}",
                table.cutoff(),
                terms.cutoff
            )));
        }
        let p = terms.prec();
        let mut known = Float::with_val(p, &terms.pole_re);
        let mut known_im = Float::with_val(p, &terms.pole_im);
        let mut deltas: BTreeMap<u64, Float> = BTreeMap::new();
        for n in 1..=terms.cutoff as u64 {
            let c = terms.coefficient(n);
            match table.entry(n) {
                CoefficientEntry::Known(v) => {
                    let b = table.value_float(v, n, p);
                    known += Float::with_val(p, &b * c);
                    known_im += Float::with_val(p, &b * &terms.coeff_im[n as usize - 1]);
                }
                CoefficientEntry::Unknown(q) => {
                    *deltas.entry(*q).or_insert_with(|| Float::new(p)) += c;
                }
                CoefficientEntry::Partial { scalar, symbol } => {
                    let b = table.value_float(scalar, n / symbol, p);
                    *deltas.entry(*symbol).or_insert_with(|| Float::new(p)) += Float::with_val(p, &b * c);
                }
            }
        }
        let bc = table.bound_constant.to_f64();
        let tail = TailModel::fit(terms, table.degree, bc);
        Ok(Evaluation {
            s: terms.s.clone(),
            g: terms.g.clone(),
            instance_label: label.to_string(),
            known_part: known,
            deltas: deltas.into_iter().map(|(q, v)| (q, DeltaValue(v))).collect(),
            tail_bound: tail.bound + tail.accuracy,
            tail,
            imag_residual: known_im.to_f64().abs(),
            norm_re: terms.norm_re.clone(),
            norm_im: terms.norm_im.clone(),
            degree: table.degree,
            bound_constant: bc,
        })
    }

    pub fn delta(&self, q: u64) -> Option<&Float> {
        self.deltas.get(&q).map(|d| &d.0)
    }

    /// g(s)|γ(s)|ε^{1/2}, the normalizer turning Λg into Z.
    pub fn z_normalizer(&self) -> Complex {
        Complex::with_val(self.norm_re.prec(), (&self.norm_re, &self.norm_im))
    }

    /// Replaces symbol q by value v: known_part moves by δ_q · v.
    pub fn with_symbol_value(&self, q: u64, v: &Float) -> Evaluation {
        let mut e = self.clone();
        if let Some(d) = e.deltas.remove(&q) {
            e.known_part += Float::with_val(e.known_part.prec(), &d.0 * v);
        }
        e
    }
}

/// Σ_q |δ_q| C Ram(q, d) + tail.
pub fn error_l1(e: &Evaluation, d: u32, c: f64) -> f64 {
    let mut acc = 0.0;
    for (q, v) in &e.deltas {
        acc += v.0.to_f64().abs() * c * ramanujan_bound(*q, d) as f64;
    }
    acc + e.tail_bound
}

/// Evaluates Z(s) for an instance. With `plan = None` the contour and precision are tuned.
pub fn evaluate(
    instance: &LFunctionInstance,
    s: &CRat,
    g: &TestFunction,
    plan: Option<&IntegrationPlan>,
    ctx: &PrecisionContext,
) -> Result<Evaluation> {
    let cutoff = instance.coeffs.cutoff();
    let terms = match plan {
        None => compute_terms(&instance.fe, s, g, cutoff, ctx)?,
        Some(p) => {
            let tuned = plan_for_nu(&instance.fe, g, s, p.nu, cutoff, ctx)?;
            let fixed = TunedPlan { plan: p.clone(), ..tuned };
            compute_terms_with(&instance.fe, s, g, cutoff, ctx, fixed)?
        }
    };
    evaluate_with_terms(instance, &terms)
}

/// Applies precomputed terms to the instance's table, checking that Z comes out real.
pub fn evaluate_with_terms(instance: &LFunctionInstance, terms: &AfeTerms) -> Result<Evaluation> {
    let e = Evaluation::from_terms(&instance.label, terms, &instance.coeffs)?;
    if e.deltas.is_empty() && terms.s.re == rug::Rational::from((1, 2)) {
        let tol = 10f64.powf(-(terms.ctx.target_digits as f64) / 2.0) * e.known_part.to_f64().abs().max(1.0);
        if e.imag_residual > tol {
            return Err(Error::NonReal { residual: e.imag_residual, tolerance: tol });
        }
    }
    Ok(e)
}

/// Z(s) from Λ(s)g(s): divide by g(s), |γ(s)| and ε^{1/2}; the result must be real.
pub fn hardy_z(
    lambda_times_g: &Complex,
    s: &CRat,
    g: &TestFunction,
    fe: &crate::lmodel::FunctionalEquation,
    ctx: &PrecisionContext,
) -> Result<Float> {
    epsilon_sqrt(fe, ctx.working_bits)?;
    if s.re != rug::Rational::from((1, 2)) {
        return Err(Error::Invalid("Z is defined on the critical line only".into()));
    }
    let p = ctx.working_bits;
    let norm = crate::afe::terms::z_normalizer(fe, g, &s.to_complex(p), p)?;
    let z = Complex::with_val(p, lambda_times_g / &norm);
    let (re, im) = z.into_real_imag();
    let tol = 10f64.powf(-(ctx.target_digits as f64) / 2.0) * re.to_f64().abs().max(1.0);
    let r = im.to_f64().abs();
    if r > tol {
        return Err(Error::NonReal { residual: r, tolerance: tol });
    }
    Ok(re)
}
