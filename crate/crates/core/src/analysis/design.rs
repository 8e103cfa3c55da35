//! Optimal and naive compander designs and their Ω coefficients.

use crate::compander::{
    bennett_integral, density_second_moment, naive_point_density, optimized_point_density,
    CompanderDesign, SourceModel,
};
use crate::error::{Error, Result};
use crate::numerics::{check_unimodal, try_find_root_bracket, try_minimize_scalar, Tolerance};

/// Lower end of the c search range.
pub const C_SEARCH_FLOOR: f64 = 0.05;
/// Golden-section tolerance on c.
pub const C_TOLERANCE: f64 = 1e-6;
const UNIMODALITY_GRID: usize = 64;
const OMEGA_FORM_AGREEMENT: f64 = 1e-6;

/// Largest admissible c: the β̂ = 0 density integrates to at least one
/// exactly when c ≤ c_max. Computed in closed form and by quadrature; the
/// two must agree to 1e−6.
pub fn c_max(source: SourceModel) -> Result<f64> {
    let closed = source.c_max_closed_form()?;
    let quadrature = c_max_by_quadrature(source)?;
    if (closed - quadrature).abs() > 1e-6 {
        return Err(Error::InternalConsistency(format!(
            "c_max closed form {closed} disagrees with quadrature {quadrature}"
        )));
    }
    Ok(closed)
}

/// ∫ λ dx at β̂ = 0 scales as 1/c, so c_max is the mass at c = 1.
pub fn c_max_by_quadrature(source: SourceModel) -> Result<f64> {
    optimized_point_density(source, 1.0, 0.0)?.mass(Tolerance::absolute(1e-12))
}

/// The multiplier β̂ ≥ 0 that makes the optimized density integrate to one.
pub fn solve_beta_hat(source: SourceModel, c: f64) -> Result<f64> {
    if !(c > 0.0 && c.is_finite()) {
        return Err(Error::Precondition(format!("c must be positive and finite, got {c}")));
    }
    let c0 = source.c_max_closed_form()?;
    if c > c0 * (1.0 + 1e-12) {
        return Err(Error::Precondition(format!(
            "no nonnegative beta_hat normalizes the density for c = {c} > c_max = {c0}"
        )));
    }
    if c >= c0 * (1.0 - 1e-12) {
        return Ok(0.0);
    }
    let tol = Tolerance::absolute(1e-12);
    let excess_mass = |beta_hat: f64| -> Result<f64> {
        if beta_hat == 0.0 {
            // the β̂ = 0 mass is exactly c0 / c
            return Ok(c0 / c - 1.0);
        }
        Ok(optimized_point_density(source, c, beta_hat)?.mass(tol)? - 1.0)
    };
    let mut upper = 16.0;
    while excess_mass(upper)? >= 0.0 {
        upper *= 2.0;
        if upper > 1e12 {
            return Err(Error::NonConvergence {
                estimate: upper,
                error_bound: f64::INFINITY,
            });
        }
    }
    let bracket = try_find_root_bracket(excess_mass, 0.0, upper, 1e-12 * upper.max(1.0))?;
    Ok(bracket.root)
}

/// Both evaluations of Ω(c) together with the pieces they are built from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OmegaForms {
    pub beta_hat: f64,
    pub second_moment: f64,
    pub bennett: f64,
    /// 2c(σ² + m₂) + B/(12c²).
    pub generic: f64,
    /// 2cσ² + 3c·m₂ + β̂/2, using the stationarity condition.
    pub kkt: f64,
}

pub fn omega_forms(source: SourceModel, c: f64) -> Result<OmegaForms> {
    let beta_hat = solve_beta_hat(source, c)?;
    let density = optimized_point_density(source, c, beta_hat)?;
    let second_moment = density_second_moment(&density)?;
    let bennett = bennett_integral(&density, source)?;
    let sigma2 = source.second_moment();
    let generic = 2.0 * c * (sigma2 + second_moment) + bennett / (12.0 * c * c);
    let kkt = 2.0 * c * sigma2 + 3.0 * c * second_moment + 0.5 * beta_hat;
    Ok(OmegaForms {
        beta_hat,
        second_moment,
        bennett,
        generic,
        kkt,
    })
}

/// Ω(c), the coefficient of e^{−γ/6} in the distortion bound.
pub fn omega(source: SourceModel, c: f64) -> Result<f64> {
    let forms = omega_forms(source, c)?;
    if (forms.generic - forms.kkt).abs() > OMEGA_FORM_AGREEMENT * forms.kkt.abs() {
        return Err(Error::InternalConsistency(format!(
            "omega forms disagree at c = {c}: generic {} vs KKT {}",
            forms.generic, forms.kkt
        )));
    }
    Ok(forms.kkt)
}

/// The normalized optimized design at a given c.
pub fn design_at(source: SourceModel, c: f64) -> Result<CompanderDesign> {
    let forms = omega_forms(source, c)?;
    Ok(CompanderDesign {
        source,
        c,
        beta_hat: forms.beta_hat,
        density: optimized_point_density(source, c, forms.beta_hat)?,
        omega: forms.kkt,
        second_moment_of_density: forms.second_moment,
    })
}

/// Minimizes Ω over c ∈ [C_SEARCH_FLOOR, c_max] by golden section, after
/// checking on a 64-point grid that Ω is unimodal there.
pub fn optimize_design(source: SourceModel) -> Result<CompanderDesign> {
    let upper = c_max(source)?;
    check_unimodal(|c| omega(source, c), C_SEARCH_FLOOR, upper, UNIMODALITY_GRID, 1e-9)?;
    let (c_opt, _) = try_minimize_scalar(|c| omega(source, c), C_SEARCH_FLOOR, upper, C_TOLERANCE)?;
    design_at(source, c_opt)
}

/// The Panter-Dite design with c chosen to minimize a·c + b/c², where
/// a = 2(σ² + m₂) and b = B/12.
pub fn naive_design(source: SourceModel) -> Result<CompanderDesign> {
    let density = naive_point_density(source);
    let m2 = density_second_moment(&density)?;
    let b = bennett_integral(&density, source)? / 12.0;
    let a = 2.0 * (source.second_moment() + m2);
    let c = (2.0 * b / a).cbrt();
    Ok(CompanderDesign {
        source,
        c,
        beta_hat: 0.0,
        density,
        omega: 1.5 * a * c,
        second_moment_of_density: m2,
    })
}

/// Headline constants of the optimized design next to the naive one.
#[derive(Debug, Clone, PartialEq)]
pub struct DispersionReport {
    pub source: SourceModel,
    pub c_max: f64,
    pub c_opt: f64,
    pub beta_hat_opt: f64,
    pub omega_opt: f64,
    /// −ln Ω_opt.
    pub dispersion_lower_bound: f64,
    pub density_second_moment: f64,
    pub naive_c: f64,
    pub naive_omega: f64,
    pub naive_dispersion: f64,
    /// 10·log₁₀(naive Ω / optimized Ω).
    pub gap_db: f64,
}

pub fn naive_design_report(source: SourceModel) -> Result<DispersionReport> {
    let optimized = optimize_design(source)?;
    let naive = naive_design(source)?;
    Ok(DispersionReport {
        source,
        c_max: c_max(source)?,
        c_opt: optimized.c,
        beta_hat_opt: optimized.beta_hat,
        omega_opt: optimized.omega,
        dispersion_lower_bound: -optimized.omega.ln(),
        density_second_moment: optimized.second_moment_of_density,
        naive_c: naive.c,
        naive_omega: naive.omega,
        naive_dispersion: -naive.omega.ln(),
        gap_db: 10.0 * (naive.omega / optimized.omega).log10(),
    })
}

/// Limit of E[(X − X̂)² | outage] as N → ∞: σ² + ∫x²λ.
pub fn outage_conditional_bound(design: &CompanderDesign) -> f64 {
    design.source.second_moment() + design.second_moment_of_density
}

#[cfg(test)]
mod tests {
    use super::*;

    const G: SourceModel = SourceModel::GaussianStdNormal;
    const U: SourceModel = SourceModel::UniformSymmetricUnit;

    #[test]
    fn c_max_values() {
        assert!((c_max(G).unwrap() - 2.41269638).abs() < 1e-6);
        assert!((c_max(U).unwrap() - 2.0801).abs() < 1e-3);
    }

    #[test]
    fn beta_hat_at_reported_gaussian_optimum() {
        let bh = solve_beta_hat(G, 1.0327).unwrap();
        assert!((bh - 2.0771).abs() < 1e-2, "{bh}");
        let mass = optimized_point_density(G, 1.0327, bh)
            .unwrap()
            .mass(Tolerance::absolute(1e-12))
            .unwrap();
        assert!((mass - 1.0).abs() < 1e-8);
    }

    #[test]
    fn beta_hat_boundary_and_errors() {
        let c0 = c_max(G).unwrap();
        assert_eq!(solve_beta_hat(G, c0).unwrap(), 0.0);
        assert!(solve_beta_hat(G, c0 * 1.01).is_err());
        assert!(solve_beta_hat(G, 0.0).is_err());
        let bh = solve_beta_hat(U, 0.8281).unwrap();
        assert!((bh - 0.1385).abs() < 1e-2, "{bh}");
    }

    #[test]
    fn omega_at_reported_optima() {
        assert!((omega(G, 1.0327).unwrap() - 9.6622).abs() < 1e-2);
        assert!((omega(U, 0.8281).unwrap() - 0.3884).abs() < 1e-3);
    }

    #[test]
    fn naive_gaussian_closed_form() {
        // minimize 8c + √3π/(2c²)
        let expected = 12.0 * (3f64.sqrt() * std::f64::consts::PI / 8.0).cbrt();
        assert!((expected - 10.5533).abs() < 1e-4);
        let d = naive_design(G).unwrap();
        assert!((d.omega - expected).abs() < 1e-8);
        // grid oracle
        let grid_min = (1..20000)
            .map(|i| {
                let c = i as f64 * 1e-4;
                8.0 * c + 3f64.sqrt() * std::f64::consts::PI / (2.0 * c * c)
            })
            .fold(f64::INFINITY, f64::min);
        assert!((grid_min - d.omega).abs() < 1e-6);
    }

    #[test]
    fn outage_conditional_bound_for_naive_designs() {
        assert!((outage_conditional_bound(&naive_design(G).unwrap()) - 4.0).abs() < 1e-9);
        assert!((outage_conditional_bound(&naive_design(U).unwrap()) - 1.0 / 6.0).abs() < 1e-12);
    }
}
