//! Smoothed approximate functional equation:
//!
//! Λ(s)g(s) = Σ r_k g(s_k)/(s − s_k) + Σ_n b_n [S1(n) + ε S2(n)],
//!
//! S1(n) = (1/2πi) ∫ γ(s+z) g(s+z) n^{−s−z} dz/z and
//! S2(n) = (1/2πi) ∫ γ*(1−s+z) g(s−z) n^{−(1−s)−z} dz/z on Re z = ν,
//! where γ(w) = Q^w ∏Γ(κ_j w + λ_j) and γ* conjugates the λ_j. Dividing by
//! g(s)|γ(s)|ε^{1/2} gives Z(s) on the critical line.

mod eval;
mod plan;
mod terms;

pub use eval::{error_l1, evaluate, evaluate_with_terms, hardy_z, DeltaValue, Evaluation, TailModel, TAIL_SAFETY, TAIL_WINDOW};
pub use plan::{log_scale, nu_floor, plan_for_nu, tune_plan, TunedPlan};
pub use terms::{
    compute_terms, compute_terms_with, epsilon_sqrt, f1, f2, pole_sum, terms_key, z_normalizer, AfeTerms,
};
