//! Ready-made L-function instances.

use crate::error::{Error, Result};
use crate::forms::{eigenform_table, hecke_eigenforms_s24, power_lift, restrict_to_primes, tau};
use crate::lmodel::{
    expand_euler, fe_classical, fe_for, fe_zeta, CoefficientTable, LFunctionInstance, Rho, Surd,
};
use crate::satake::{local_factors, upsilon20_table};
use rug::{Integer, Rational};

pub const BUILTINS: [&str; 9] = [
    "upsilon20-stan",
    "upsilon20-adj",
    "upsilon20-spin",
    "zeta",
    "delta",
    "s24-f1",
    "s24-f2",
    "s24-f1-pow5",
    "s24-f2-pow5",
];

/// Largest prime with a vendored Euler factor for the weight-20 form; the fifth-power
/// checks use the same range.
pub const KNOWN_PRIMES_UP_TO: u64 = 79;

/// Builds a named instance with coefficients through `cutoff`.
pub fn builtin(label: &str, cutoff: usize) -> Result<LFunctionInstance> {
    if cutoff < 2 {
        return Err(Error::Invalid("cutoff must be at least 2".into()));
    }
    match label {
        "upsilon20-stan" => upsilon20(Rho::Stan, cutoff),
        "upsilon20-adj" => upsilon20(Rho::Adj, cutoff),
        "upsilon20-spin" => upsilon20(Rho::Spin, cutoff),
        "zeta" => {
            let t = CoefficientTable::known(1, Rational::new(), Integer::from(1), vec![Surd::one(); cutoff])?;
            LFunctionInstance::new("zeta", fe_zeta(), t)
        }
        // only b_1 is used; b_n for n ≥ 2 are symbols bounded by d(n)
        "delta" => {
            let mut inst = delta_known(cutoff)?.blind(2, Rational::from(1))?;
            inst.label = "delta".into();
            Ok(inst)
        }
        "s24-f1" => s24(0, cutoff),
        "s24-f2" => s24(1, cutoff),
        "s24-f1-pow5" => s24_pow5(0, cutoff),
        "s24-f2-pow5" => s24_pow5(1, cutoff),
        other => Err(Error::Invalid(format!("unknown instance {other:?}; builtins are {}", BUILTINS.join(", ")))),
    }
}

fn upsilon20(rho: Rho, cutoff: usize) -> Result<LFunctionInstance> {
    let fe = fe_for(rho, 20)?;
    let lf = local_factors(&upsilon20_table(), rho);
    let t = expand_euler(&lf, cutoff, rho.degree())?;
    LFunctionInstance::new(format!("upsilon20-{}", rho.name()), fe, t)
}

/// L(s, Δ) with every τ(n) known.
pub fn delta_known(cutoff: usize) -> Result<LFunctionInstance> {
    let a: Vec<Surd> = tau(cutoff).into_iter().map(|t| Surd::rational(Rational::from(t))).collect();
    let t = eigenform_table(&a, 12, &Integer::from(1))?;
    LFunctionInstance::new("delta-known", fe_classical(12)?, t)
}

fn s24(which: usize, cutoff: usize) -> Result<LFunctionInstance> {
    let forms = hecke_eigenforms_s24(cutoff)?;
    let t = eigenform_table(&forms.coefficients(which), 24, &forms.d)?;
    LFunctionInstance::new(format!("s24-f{}", which + 1), fe_classical(24)?, t)
}

fn s24_pow5(which: usize, cutoff: usize) -> Result<LFunctionInstance> {
    let base = s24(which, cutoff)?;
    let restricted = restrict_to_primes(&base.coeffs, KNOWN_PRIMES_UP_TO)?;
    let mut inst = power_lift(&restricted, &base.fe, 5)?;
    inst.label = format!("s24-f{}-pow5", which + 1);
    Ok(inst)
}

impl LFunctionInstance {
    /// Same instance with every b_n, n ≥ from, an independent unknown bounded by C·Ram(n, d).
    pub fn blind(&self, from: u64, bound_constant: Rational) -> Result<LFunctionInstance> {
        let coeffs = self.coeffs.blind_from(from, bound_constant)?;
        LFunctionInstance::new(self.label.clone(), self.fe.clone(), coeffs)
    }
}
