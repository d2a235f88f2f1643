//! Functional equations, test functions and Dirichlet coefficient tables.

mod coeffs;
mod fe;
mod fe_file;
mod surd;
mod testfn;

pub use coeffs::{
    expand_euler, factorize, gcd, is_prime, ramanujan_bound, series_inverse, CoefficientEntry,
    CoefficientTable, LocalFactors, DEFAULT_CUTOFF,
};
pub use fe::{fe_classical, fe_for, fe_zeta, unfold, CRat, FunctionalEquation, GammaShift, Pole, QConstant, Rho};
pub use fe_file::{format_fe, parse_fe};
pub use surd::Surd;
#[allow(unused_imports)]
pub(crate) use surd::{int_str, rat_str};
pub use testfn::TestFunction;

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LFunctionInstance {
    pub label: String,
    pub fe: FunctionalEquation,
    pub coeffs: CoefficientTable,
}

impl LFunctionInstance {
    pub fn new(label: impl Into<String>, fe: FunctionalEquation, coeffs: CoefficientTable) -> Result<Self> {
        if fe.degree != coeffs.degree {
            return Err(Error::Invalid(format!(
                "FE degree {} but coefficient table degree {}",
                fe.degree, coeffs.degree
            )));
        }
        fe.validate()?;
        Ok(LFunctionInstance { label: label.into(), fe, coeffs })
    }

    pub fn degree(&self) -> u32 {
        self.fe.degree
    }
}
