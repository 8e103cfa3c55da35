//! Closed-form and numerically optimized quantities: β̂(c), Ω(c) and its
//! minimum, the naive baseline, outage and exponent bounds, and the
//! uniform-quantizer baseline.

mod channel;
mod design;
mod knopp;

pub use channel::{
    distortion_exponent, end_to_end_bound, exact_orthogonal_error_prob, num_levels,
    outage_exponent, outage_probability_bound, scheme_exponent, ExponentRegime, ExponentResult,
};
pub use design::{
    c_max, c_max_by_quadrature, design_at, naive_design, naive_design_report, omega, omega_forms,
    optimize_design, outage_conditional_bound, solve_beta_hat, DispersionReport, OmegaForms,
    C_SEARCH_FLOOR, C_TOLERANCE,
};
pub use knopp::{
    knopp_analytic_bound, knopp_distortion_bound, knopp_exponent, knopp_exponent_terms,
    knopp_optimize, knopp_optimize_with_range, KnoppExponent, KnoppParams, B_MAX,
};
