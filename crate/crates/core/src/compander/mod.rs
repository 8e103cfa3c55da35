//! Source models, point densities, the compressor/expander pair and the
//! quantizers they induce.

mod density;
mod mapping;
mod quantizer;
mod source;

pub use density::{
    bennett_integral, density_second_moment, naive_point_density, optimized_point_density,
    DensityDescriptor, PointDensity,
};
pub use mapping::Compander;
pub use quantizer::{build_quantizer, build_quantizer_with, finite_n_mse, Quantizer};
pub use source::SourceModel;

use crate::error::Result;

/// G(x) = ∫_{lower}^{x} λ for a normalized density.
pub fn compressor(density: &PointDensity) -> Result<impl Fn(f64) -> f64> {
    let compander = Compander::new(density)?;
    Ok(move |x| compander.compress(x))
}

/// G⁻¹(u) for a normalized density.
pub fn expander(density: &PointDensity) -> Result<impl Fn(f64) -> Result<f64>> {
    let compander = Compander::new(density)?;
    Ok(move |u| compander.expand(u))
}

/// A solved compander design: the coefficient c in N = c·e^{γ/12}, the
/// multiplier β̂ that normalizes the density, and the resulting coefficient
/// Ω of e^{−γ/6} in the end-to-end distortion bound.
///
/// For Panter-Dite (naive) designs there is no multiplier and `beta_hat`
/// is zero.
#[derive(Debug, Clone)]
pub struct CompanderDesign {
    pub source: SourceModel,
    pub c: f64,
    pub beta_hat: f64,
    pub density: PointDensity,
    pub omega: f64,
    pub second_moment_of_density: f64,
}

impl CompanderDesign {
    /// −ln Ω, the constant term of −ln D.
    pub fn dispersion(&self) -> f64 {
        -self.omega.ln()
    }
}
