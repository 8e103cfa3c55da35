//! Standard normal distribution functions and the gamma function.
//!
//! `erfc` and `tgamma` come from `libm` (sub-ulp accuracy). statrs only
//! seeds the quantile, which is then polished against `erfc`.

use std::f64::consts::{FRAC_1_SQRT_2, PI, SQRT_2};

use statrs::function::erf::erfc_inv;

use crate::error::{Error, Result};

pub fn std_normal_pdf(x: f64) -> f64 {
    (-0.5 * x * x).exp() / (2.0 * PI).sqrt()
}

/// Φ(x).
pub fn std_normal_cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x * FRAC_1_SQRT_2)
}

/// Upper tail 1 − Φ(x), accurate far into the tail.
pub fn std_normal_sf(x: f64) -> f64 {
    0.5 * libm::erfc(x * FRAC_1_SQRT_2)
}

/// Φ⁻¹(p) for `p ∈ (0, 1)`.
pub fn std_normal_quantile(p: f64) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::Domain(format!("normal quantile needs p in (0, 1), got {p}")));
    }
    if p > 0.5 {
        // 1 − p is exact here, and the lower tail has the better relative accuracy
        return Ok(-lower_quantile(1.0 - p));
    }
    Ok(lower_quantile(p))
}

fn lower_quantile(p: f64) -> f64 {
    let mut x = -SQRT_2 * erfc_inv(2.0 * p);
    // one Halley step against the lower tail
    let pdf = std_normal_pdf(x);
    if pdf > 0.0 {
        let e = (std_normal_cdf(x) - p) / pdf;
        x -= e / (1.0 + 0.5 * x * e);
    }
    x
}

/// Γ(x) for `x > 0`.
pub fn gamma_function(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain(format!("gamma function needs finite x > 0, got {x}")));
    }
    Ok(libm::tgamma(x))
}
