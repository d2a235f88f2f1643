//! Combining evaluations taken with different test functions: least-squares weights that
//! cancel the unknown-coefficient multipliers, and linear programs that bound the value or
//! an unknown coefficient.

mod lp;
mod ls;
pub mod simplex;

pub use lp::{lp_bounds, recover_coefficients, LpResult, LpSetup, Objective};
pub use ls::{combine, ls_objective, ls_weights, Combination, WeightVector};

/// Symbols from this index on enter least squares only through the L1 error.
pub const DEFAULT_SYMBOL_CUT: u64 = 1000;
