use crate::error::{Error, Result};
use crate::numerics::PrecisionContext;
use rug::float::Constant;
use rug::{Assign, Complex, Float};
use serde::{Deserialize, Serialize};

/// Trapezoid nodes nu + i(center + k step), |k step| <= half_width.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IntegrationPlan {
    pub nu: f64,
    pub step: f64,
    pub half_width: f64,
    /// Ordinate the node grid is centred on; the integrands of interest peak away from 0.
    pub center: f64,
}

impl IntegrationPlan {
    pub const DEFAULT_STEP: f64 = 1.0 / 64.0;

    pub fn new(nu: f64, step: f64, half_width: f64) -> Result<Self> {
        Self::centered(nu, step, half_width, 0.0)
    }

    pub fn centered(nu: f64, step: f64, half_width: f64, center: f64) -> Result<Self> {
        let plan = IntegrationPlan { nu, step, half_width, center };
        plan.validate()?;
        Ok(plan)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.nu > 0.0 && self.step > 0.0 && self.half_width / self.step >= 10.0) {
            return Err(Error::Invalid(format!("bad integration plan {self:?}")));
        }
        Ok(())
    }

    pub fn half_count(&self) -> i64 {
        (self.half_width / self.step).floor() as i64
    }

    pub fn node_count(&self) -> usize {
        (2 * self.half_count() + 1) as usize
    }

    pub fn ordinates(&self) -> impl Iterator<Item = f64> + '_ {
        let k = self.half_count();
        (-k..=k).map(move |j| self.center + j as f64 * self.step)
    }

    /// Halved step over twice the span.
    pub fn refined(&self) -> Self {
        IntegrationPlan { step: self.step / 2.0, half_width: self.half_width * 2.0, ..self.clone() }
    }
}

/// (1/2 pi i) * integral over Re z = nu of f(z) dz, by the trapezoid rule on the plan's nodes.
pub fn integrate_vertical<F>(mut f: F, plan: &IntegrationPlan, ctx: &PrecisionContext) -> Result<Complex>
where
    F: FnMut(&Complex) -> Result<Complex>,
{
    plan.validate()?;
    let p = ctx.working_bits;
    let mut sum = Complex::new(p);
    let mut edge = Float::new(53);
    let k = plan.half_count();
    let mut z = Complex::new(p);
    for j in -k..=k {
        let y = plan.center + j as f64 * plan.step;
        z.assign((plan.nu, y));
        let v = f(&z)?;
        crate::numerics::ensure_finite(&v, "vertical quadrature")?;
        if j == -k || j == k {
            let m = Float::with_val(53, v.abs_ref());
            if m > edge {
                edge = m;
            }
        }
        sum += &v;
    }
    let two_pi = Float::with_val(p, Constant::Pi) * 2u32;
    sum *= Float::with_val(p, plan.step) / two_pi;
    let total = Float::with_val(53, sum.abs_ref());
    let limit = Float::with_val(53, &total) >> (p / 2);
    edge *= plan.step / (2.0 * std::f64::consts::PI);
    if edge > limit && edge > 0 {
        return Err(Error::NonConvergence {
            what: "vertical quadrature",
            detail: format!("edge node magnitude {} vs sum {}", edge.to_f64(), total.to_f64()),
        });
    }
    Ok(sum)
}
