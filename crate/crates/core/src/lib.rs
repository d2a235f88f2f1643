//! Evaluate L-functions from a smoothed approximate functional equation when only a few
//! Dirichlet coefficients are known, then combine evaluations by least squares or linear
//! programming to sharpen values and recover unknown coefficients.

pub mod afe;
pub mod cache;
pub mod error;
pub mod forms;
pub mod instances;
pub mod lmodel;
pub mod numerics;
pub mod optimize;
pub mod satake;

pub use error::{Error, Result};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
