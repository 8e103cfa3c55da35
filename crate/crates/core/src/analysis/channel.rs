//! Outage probability of orthogonal signaling with ML decoding, the
//! exponent trade-off that fixes N = c·e^{γ/12}, and the resulting
//! end-to-end bound.

use crate::compander::CompanderDesign;
use crate::error::{Error, Result};
use crate::numerics::{integrate_tol, std_normal_pdf, std_normal_sf, Interval, Tolerance, TAIL_CUTOFF};

/// Upper bound on the probability that ML decoding of N orthogonal signals
/// at ENR γ picks the wrong index. Stated only for ln N ≤ γ/2.
pub fn outage_probability_bound(gamma: f64, n_levels: u64) -> Result<f64> {
    if !(gamma >= 0.0) || n_levels == 0 {
        return Err(Error::Precondition(format!(
            "need gamma >= 0 and N >= 1, got gamma = {gamma}, N = {n_levels}"
        )));
    }
    let ln_n = (n_levels as f64).ln();
    if ln_n > gamma / 2.0 {
        return Err(Error::OutOfRegime(format!(
            "ln N = {ln_n} exceeds gamma/2 = {}",
            gamma / 2.0
        )));
    }
    Ok(if ln_n < gamma / 8.0 {
        2.0 * (ln_n - gamma / 4.0).exp()
    } else {
        let gap = gamma.sqrt() - (2.0 * ln_n).sqrt();
        2.0 * (-0.5 * gap * gap).exp()
    })
}

/// Exact ML error probability for N equal-energy orthogonal signals:
/// 1 − ∫ φ(z) Φ(z + √γ)^{N−1} dz, integrated as ∫ φ(z)(1 − Φ^{N−1}) so
/// small probabilities keep their relative accuracy.
pub fn exact_orthogonal_error_prob(gamma: f64, n_levels: u64) -> Result<f64> {
    if !(gamma >= 0.0) || n_levels == 0 {
        return Err(Error::Precondition(format!(
            "need gamma >= 0 and N >= 1, got gamma = {gamma}, N = {n_levels}"
        )));
    }
    if n_levels == 1 {
        return Ok(0.0);
    }
    let competitors = (n_levels - 1) as f64;
    let amplitude = gamma.sqrt();
    let integrand = |z: f64| {
        let q = std_normal_sf(z + amplitude);
        // 1 − (1 − q)^k
        let miss = -(competitors * (-q).ln_1p()).exp_m1();
        std_normal_pdf(z) * miss
    };
    let domain = Interval::new(-TAIL_CUTOFF, TAIL_CUTOFF)?;
    let p = integrate_tol(integrand, domain, Tolerance { abs: 1e-300, rel: 1e-10 })?;
    Ok(p.clamp(0.0, 1.0))
}

/// Which branch of the outage exponent the optimum falls in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExponentRegime {
    /// τ < 1/8: outage exponent 1/4 − τ.
    BelowOneEighth,
    /// 1/8 ≤ τ ≤ 1/2: outage exponent (1 − √(2τ))²/2.
    Middle,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExponentResult {
    pub tau_opt: f64,
    pub exponent: f64,
    pub regime: ExponentRegime,
}

/// Exponent of the outage probability bound when N = c·e^{τγ}.
pub fn outage_exponent(tau: f64) -> f64 {
    if tau < 0.125 {
        0.25 - tau
    } else {
        let s = 1.0 - (2.0 * tau).sqrt();
        0.5 * s * s
    }
}

/// Exponent of the overall distortion for rate τ: the slower of the
/// quantization term (2τ) and the outage term.
pub fn distortion_exponent(tau: f64) -> f64 {
    (2.0 * tau).min(outage_exponent(tau))
}

/// Maximizes min(2τ, outage exponent) over τ ∈ (0, 1/2].
///
/// 2τ increases and the outage exponent decreases, so within each branch
/// the optimum is where they cross, clamped to the branch; the better of
/// the two branch candidates wins.
pub fn scheme_exponent() -> ExponentResult {
    // lower branch: 2τ = 1/4 − τ
    let lower = (1.0_f64 / 12.0).min(0.125);
    // middle branch: 2τ = (1 − √(2τ))²/2 at √(2τ) = 1/(1 + √2), clamped
    let s = 1.0 / (1.0 + 2f64.sqrt());
    let middle = (0.5 * s * s).clamp(0.125, 0.5);
    let candidates = [
        (lower, ExponentRegime::BelowOneEighth),
        (middle, ExponentRegime::Middle),
    ];
    let (tau_opt, regime) = candidates
        .into_iter()
        .max_by(|a, b| distortion_exponent(a.0).total_cmp(&distortion_exponent(b.0)))
        .expect("two candidates");
    ExponentResult {
        tau_opt,
        exponent: distortion_exponent(tau_opt),
        regime,
    }
}

/// N = round(c·e^{γ/12}), at least 2.
pub fn num_levels(c: f64, gamma: f64) -> Result<u64> {
    if !(c > 0.0 && c.is_finite()) || !(gamma >= 0.0) {
        return Err(Error::Precondition(format!(
            "need c > 0 and gamma >= 0, got c = {c}, gamma = {gamma}"
        )));
    }
    let n = (c * (gamma / 12.0).exp()).round();
    if !n.is_finite() || n >= u64::MAX as f64 {
        return Err(Error::Configuration(format!(
            "N = c·exp(gamma/12) overflows for c = {c}, gamma = {gamma}"
        )));
    }
    Ok((n as u64).max(2))
}

/// Ω·e^{−γ/6}.
pub fn end_to_end_bound(design: &CompanderDesign, gamma: f64) -> f64 {
    design.omega * (-gamma / 6.0).exp()
}
