//! Baseline: a b-bit uniform quantizer on the truncated Gaussian followed by
//! orthogonal signaling, with a Gallager-type (ρ-parametrized) error bound.

use std::f64::consts::{LN_2, PI};

use rayon::prelude::*;

use crate::error::{Error, Result};

/// Largest bit count searched by [`knopp_optimize`].
pub const B_MAX: u32 = 4096;
const RHO_GRID: usize = 1024;

/// Quantizer bits b and Gallager exponent parameter ρ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KnoppParams {
    b: u32,
    rho: f64,
}

impl KnoppParams {
    pub fn new(b: u32, rho: f64) -> Result<Self> {
        if b < 2 || !(0.0..=1.0).contains(&rho) {
            return Err(Error::Precondition(format!(
                "need b >= 2 and rho in [0, 1], got b = {b}, rho = {rho}"
            )));
        }
        Ok(KnoppParams { b, rho })
    }

    pub fn b(&self) -> u32 {
        self.b
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    /// Truncation point Δ = 2√(b ln 2).
    pub fn delta(&self) -> f64 {
        2.0 * (self.b as f64 * LN_2).sqrt()
    }
}

/// Distortion bound of the baseline with 1/(2^b − 2)² replaced by 2^{−2b}:
///
/// 2^{−2b}(1/√(2πb ln2) + 4b ln2)
///   + 2^{bρ − γρ/(2 ln2 (ρ+1))}·(16b ln2 + (16b ln2 + 1)·2^{−2b}/√(2πb ln2))
pub fn knopp_distortion_bound(gamma: f64, params: KnoppParams) -> f64 {
    bound_real_b(gamma, params.b as f64, params.rho)
}

fn bound_real_b(gamma: f64, b: f64, rho: f64) -> f64 {
    let q = b * LN_2;
    let root = (2.0 * PI * q).sqrt();
    let fine = (-2.0 * b).exp2();
    let quantization = fine * (1.0 / root + 4.0 * q);
    let error_exponent = b * rho - gamma * rho / (2.0 * LN_2 * (rho + 1.0));
    let error = error_exponent.exp2() * (16.0 * q + (16.0 * q + 1.0) * fine / root);
    quantization + error
}

/// Minimizes [`knopp_distortion_bound`] over integer b ∈ [2, 4096] and
/// ρ ∈ [0, 1].
pub fn knopp_optimize(gamma: f64) -> Result<(KnoppParams, f64)> {
    knopp_optimize_with_range(gamma, B_MAX)
}

/// [`knopp_optimize`] with the b search capped at `b_max`.
///
/// ρ is scanned on a 1024-point grid for every b, then the best cell is
/// rescanned once at the same resolution.
pub fn knopp_optimize_with_range(gamma: f64, b_max: u32) -> Result<(KnoppParams, f64)> {
    if !(gamma > 0.0 && gamma.is_finite()) || b_max < 2 {
        return Err(Error::Precondition(format!(
            "need gamma > 0 and b_max >= 2, got gamma = {gamma}, b_max = {b_max}"
        )));
    }
    let step = 1.0 / (RHO_GRID - 1) as f64;
    let scan = |b: u32, lo: f64, hi: f64| -> (f64, f64) {
        let h = (hi - lo) / (RHO_GRID - 1) as f64;
        (0..RHO_GRID)
            .map(|i| {
                let rho = if i + 1 == RHO_GRID { hi } else { lo + h * i as f64 };
                (rho, bound_real_b(gamma, b as f64, rho))
            })
            .fold((lo, f64::INFINITY), |best, cur| if cur.1 < best.1 { cur } else { best })
    };
    let (b_best, rho_coarse, _) = (2..=b_max)
        .into_par_iter()
        .map(|b| {
            let (rho, v) = scan(b, 0.0, 1.0);
            (b, rho, v)
        })
        // ties resolve toward the smaller b, independent of scheduling
        .reduce(
            || (0, 0.0, f64::INFINITY),
            |x, y| match x.2.total_cmp(&y.2) {
                std::cmp::Ordering::Less => x,
                std::cmp::Ordering::Greater => y,
                std::cmp::Ordering::Equal => if x.0 <= y.0 { x } else { y },
            },
        );
    let (rho, value) = scan(
        b_best,
        (rho_coarse - step).max(0.0),
        (rho_coarse + step).min(1.0),
    );
    Ok((KnoppParams::new(b_best, rho)?, value))
}

/// The baseline bound evaluated at b = γ/(12 ln 2), ρ = 1:
/// e^{−γ/6}(√6/√(πγ)·(1 + e^{−γ/6}(4γ/3 + 1)) + 5γ/3).
pub fn knopp_analytic_bound(gamma: f64) -> Result<f64> {
    if !(gamma > 0.0) {
        return Err(Error::Precondition(format!("need gamma > 0, got {gamma}")));
    }
    let decay = (-gamma / 6.0).exp();
    let lead = 6f64.sqrt() / (PI * gamma).sqrt();
    Ok(decay * (lead * (1.0 + decay * (4.0 * gamma / 3.0 + 1.0)) + 5.0 * gamma / 3.0))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KnoppExponent {
    /// Optimal bits per unit ENR, b/γ.
    pub b_prime_opt: f64,
    pub rho_opt: f64,
    pub theta: f64,
}

/// Maximizes min(2b′ ln2, ρ/(2(ρ+1)) − ρb′ ln2) over b′ > 0, ρ ∈ [0, 1].
///
/// For fixed ρ the two terms cross at b′ ln2 = ρ/(2(ρ+1)(ρ+2)), leaving
/// θ(ρ) = ρ/((ρ+1)(ρ+2)), whose only stationary point is ρ = √2.
pub fn knopp_exponent() -> KnoppExponent {
    let theta = |rho: f64| rho / ((rho + 1.0) * (rho + 2.0));
    let rho_opt = [0.0, 1.0, 2f64.sqrt()]
        .into_iter()
        .filter(|r| (0.0..=1.0).contains(r))
        .max_by(|a, b| theta(*a).total_cmp(&theta(*b)))
        .expect("endpoints are always candidates");
    KnoppExponent {
        b_prime_opt: rho_opt / (2.0 * (rho_opt + 1.0) * (rho_opt + 2.0) * LN_2),
        rho_opt,
        theta: theta(rho_opt),
    }
}

/// The two arguments of the exponent max-min at (b′, ρ).
pub fn knopp_exponent_terms(b_prime: f64, rho: f64) -> (f64, f64) {
    (
        2.0 * b_prime * LN_2,
        rho / (2.0 * (rho + 1.0)) - rho * b_prime * LN_2,
    )
}
