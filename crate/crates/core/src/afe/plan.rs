//! Choice of contour, step and working precision from double-precision magnitude profiles
//! of the two integrands.

use crate::error::{Error, Result};
use crate::lmodel::{CRat, FunctionalEquation, TestFunction};
use crate::numerics::{bits_for_digits, IntegrationPlan, PrecisionContext};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::{LN_2, PI};

const COARSE: f64 = 0.25;

/// An integration plan with the precision needed to run it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TunedPlan {
    pub plan: IntegrationPlan,
    /// Bits for the node sums; larger than the context's when the integrands cancel.
    pub working_bits: u32,
    /// ln |g(s) γ(s)|, the scale of the normalized result.
    pub tau: f64,
    /// Largest log-magnitude of either integrand on the contour.
    pub peak: f64,
    /// Absolute log-tolerance per term.
    pub log_eps: f64,
}

/// Magnitude profiles of the two AFE integrands at n = 1.
pub(crate) struct Profiles<'a> {
    pub fe: &'a FunctionalEquation,
    pub g: &'a TestFunction,
    pub s: Complex64,
}

impl Profiles<'_> {
    /// ln |γ(s+z) g(s+z) / z|
    pub fn first(&self, z: Complex64) -> f64 {
        let w = self.s + z;
        (self.fe.ln_gamma_factor_f64(w, false) + self.g.ln_g_f64(w)).re - z.norm().ln()
    }

    /// ln |γ*(1-s+z) g(s-z) / z|
    pub fn second(&self, z: Complex64) -> f64 {
        let w = Complex64::new(1.0, 0.0) - self.s + z;
        (self.fe.ln_gamma_factor_f64(w, true) + self.g.ln_g_f64(self.s - z)).re - z.norm().ln()
    }

    pub fn both(&self, x: f64, y: f64) -> f64 {
        let z = Complex64::new(x, y);
        self.first(z).max(self.second(z))
    }
}

/// ν must exceed this for both integrals and for the pole residues to sit inside the contour.
pub fn nu_floor(fe: &FunctionalEquation, s: &CRat) -> f64 {
    let sr = s.re.to_f64();
    let mut lb = fe.nu_lower_bound(sr).max(fe.nu_lower_bound(1.0 - sr));
    for p in &fe.poles {
        let pr = p.s.re.to_f64();
        lb = lb.max((pr - sr).abs()).max((pr - (1.0 - sr)).abs());
    }
    lb
}

/// ln |g(s) γ(s)|.
pub fn log_scale(fe: &FunctionalEquation, g: &TestFunction, s: &CRat) -> f64 {
    let sc = s.to_c64();
    (fe.ln_gamma_factor_f64(sc, false) + g.ln_g_f64(sc)).re
}

/// Range of ordinates where the profile on line x exceeds `floor`, scanning outward until it
/// stays below. Returns (lo, hi, max).
fn support(prof: &Profiles<'_>, x: f64, floor: f64, hint: f64) -> Result<(f64, f64, f64)> {
    let mut span = hint.abs() + 64.0;
    let (mut lo, mut hi, peak) = loop {
        let steps = (span / COARSE).ceil() as i64;
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        let mut peak = f64::NEG_INFINITY;
        for k in -steps..=steps {
            let y = k as f64 * COARSE;
            let v = prof.both(x, y);
            if !v.is_finite() {
                continue;
            }
            peak = peak.max(v);
            if v > floor {
                lo = lo.min(y);
                hi = hi.max(y);
            }
        }
        let edge = (steps as f64 - 8.0) * COARSE;
        if lo > -edge && hi < edge {
            break (lo, hi, peak);
        }
        span *= 2.0;
        if span > 2.0e6 {
            return Err(Error::NonConvergence {
                what: "integrand profile",
                detail: "integrand does not decay along the contour; check the test function".into(),
            });
        }
    };
    if !lo.is_finite() {
        lo = 0.0;
        hi = 0.0;
    }
    Ok((lo - 1.0, hi + 1.0, peak))
}

fn dyadic_floor(x: f64) -> f64 {
    2f64.powi(x.log2().floor() as i32)
}

/// Plan for a fixed abscissa ν.
pub fn plan_for_nu(
    fe: &FunctionalEquation,
    g: &TestFunction,
    s: &CRat,
    nu: f64,
    cutoff: usize,
    ctx: &PrecisionContext,
) -> Result<TunedPlan> {
    let floor = nu_floor(fe, s);
    if nu <= floor {
        return Err(Error::Invalid(format!("nu = {nu} must exceed {floor}")));
    }
    let prof = Profiles { fe, g, s: s.to_c64() };
    let tau = log_scale(fe, g, s);
    let target_bits = bits_for_digits(ctx.target_digits) + 16;
    let log_eps = tau - target_bits as f64 * LN_2 - (cutoff.max(1) as f64).ln();
    let hint = s.im.to_f64();

    // singularities closest to the contour sit at Re z = max(floor_0, 0)
    let sing = fe.nu_lower_bound(s.re.to_f64()).max(fe.nu_lower_bound(1.0 - s.re.to_f64())).max(0.0);
    let a = (nu - sing - 0.25).max(0.125);
    let (_, _, side_lo) = support(&prof, nu - a, log_eps - 40.0, hint)?;
    let (_, _, side_hi) = support(&prof, nu + a, log_eps - 40.0, hint)?;
    let (lo0, hi0, _) = support(&prof, nu, log_eps - 30.0, hint)?;
    let width = (hi0 - lo0).max(1.0);
    let side = side_lo.max(side_hi) + width.ln() + 4.0;
    let h = dyadic_floor(2.0 * PI * a / (side - log_eps).max(1.0)).min(0.5);

    // trim to nodes whose contribution exceeds the tolerance
    let cut = log_eps - 15.0 - (h / (2.0 * PI)).ln();
    let (lo, hi, peak) = support(&prof, nu, cut, hint)?;
    let center = ((lo + hi) / 2.0 / h).round() * h;
    let half_width = ((hi - lo) / 2.0 + 2.0 * h).max(10.0 * h);
    let plan = IntegrationPlan::centered(nu, h, half_width, center)?;
    let nodes = plan.node_count() as f64;
    let extra = ((peak - tau) / LN_2).max(0.0) + nodes.log2() + 24.0;
    let working_bits = (target_bits as f64 + extra).ceil() as u32;
    Ok(TunedPlan { plan, working_bits: working_bits.max(ctx.working_bits), tau, peak, log_eps })
}

/// Picks ν from a few candidates by estimated cost nodes · bits^1.6.
pub fn tune_plan(
    fe: &FunctionalEquation,
    g: &TestFunction,
    s: &CRat,
    cutoff: usize,
    ctx: &PrecisionContext,
) -> Result<TunedPlan> {
    g.validate(fe.degree)?;
    let nu0 = 1f64.max(nu_floor(fe, s) + 0.5);
    let mut best: Option<(f64, TunedPlan)> = None;
    for dnu in [0.0, 0.5, 1.0, 2.0, 3.0, 4.0, 6.0] {
        let tp = plan_for_nu(fe, g, s, nu0 + dnu, cutoff, ctx)?;
        let cost = tp.plan.node_count() as f64 * (tp.working_bits as f64).powf(1.6);
        if best.as_ref().is_none_or(|(c, _)| cost < *c) {
            best = Some((cost, tp));
        }
    }
    Ok(best.expect("candidates").1)
}
