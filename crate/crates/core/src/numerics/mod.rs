//! Numerical kernel: quadrature, bracketed root finding, golden-section
//! minimization, normal distribution functions and Γ.
//!
//! Everything here is a pure function of its inputs.

mod quadrature;
mod solve;
mod special;

pub use quadrature::{
    gauss_kronrod_15, integrate, integrate_tol, integrate_with_singularity,
    integrate_with_singularity_tol, Interval, Tolerance, TAIL_CUTOFF,
};
pub use solve::{
    check_unimodal, find_root, minimize_scalar, try_find_root_bracket, try_minimize_scalar,
    RootBracket,
};
pub use special::{
    gamma_function, std_normal_cdf, std_normal_pdf, std_normal_quantile, std_normal_sf,
};

/// Absolute tolerance for reported constants.
pub const CONSTANT_TOL: f64 = 1e-10;
/// Absolute tolerance used inside optimization loops.
pub const LOOP_TOL: f64 = 1e-8;
