use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::numerics::{integrate_tol, integrate_with_singularity_tol, Interval, Tolerance};

use super::SourceModel;

/// Which family a [`PointDensity`] belongs to.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DensityDescriptor {
    /// λ ∝ f^{1/3} / (2cx² + β̂)^{1/3}, the end-to-end optimal shape.
    OptimizedKkt { c: f64, beta_hat: f64 },
    /// λ ∝ f^{1/3}, optimal for source coding alone.
    NaivePanterDite,
    Custom,
}

#[derive(Clone)]
enum Shape {
    Optimized { source: SourceModel, c: f64, beta_hat: f64 },
    Naive(SourceModel),
    Custom(Arc<dyn Fn(f64) -> f64 + Send + Sync>),
}

/// A point-density function λ(x) over a support interval.
///
/// The optimized family is returned unnormalized by
/// [`optimized_point_density`]; the normalizing β̂ is found by
/// `analysis::solve_beta_hat`.
#[derive(Clone)]
pub struct PointDensity {
    shape: Shape,
    support: Interval,
}

impl fmt::Debug for PointDensity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PointDensity")
            .field("descriptor", &self.descriptor())
            .field("support", &self.support)
            .finish()
    }
}

impl PointDensity {
    /// Wraps an arbitrary nonnegative function. It is the caller's job to
    /// make it integrate to one over `support`.
    pub fn custom<F>(support: Interval, lambda: F) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        PointDensity {
            shape: Shape::Custom(Arc::new(lambda)),
            support,
        }
    }

    pub fn descriptor(&self) -> DensityDescriptor {
        match self.shape {
            Shape::Optimized { c, beta_hat, .. } => DensityDescriptor::OptimizedKkt { c, beta_hat },
            Shape::Naive(_) => DensityDescriptor::NaivePanterDite,
            Shape::Custom(_) => DensityDescriptor::Custom,
        }
    }

    pub fn support(&self) -> Interval {
        self.support
    }

    /// λ(x); zero outside the support.
    pub fn evaluate(&self, x: f64) -> f64 {
        if !self.support.contains(x) {
            return 0.0;
        }
        match &self.shape {
            Shape::Optimized { source, c, beta_hat } => {
                let denom = 6f64.cbrt() * c.powf(2.0 / 3.0) * (2.0 * c * x * x + beta_hat).cbrt();
                source.pdf_cbrt(x) / denom
            }
            Shape::Naive(SourceModel::GaussianStdNormal) => {
                // N(0, 3)
                (-x * x / 6.0).exp() / (6.0 * std::f64::consts::PI).sqrt()
            }
            Shape::Naive(SourceModel::UniformSymmetricUnit) => 1.0,
            Shape::Custom(lambda) => lambda(x),
        }
    }

    /// The point where λ may blow up, if any lies in the support. Quadrature
    /// over λ splits the domain there.
    pub(crate) fn split_point(&self) -> f64 {
        if self.support.contains(0.0) {
            0.0
        } else {
            self.support.lower().max(-crate::numerics::TAIL_CUTOFF)
        }
    }

    /// ∫ g(x) λ(x) dx over the support.
    pub fn integrate_weighted<G: Fn(f64) -> f64>(&self, g: G, tol: Tolerance) -> Result<f64> {
        integrate_with_singularity_tol(
            |x| {
                let l = self.evaluate(x);
                if l == 0.0 { 0.0 } else { g(x) * l }
            },
            self.support,
            self.split_point(),
            tol,
        )
    }

    /// ∫ λ(x) dx.
    pub fn mass(&self, tol: Tolerance) -> Result<f64> {
        self.integrate_weighted(|_| 1.0, tol)
    }
}

/// The KKT-optimal point density for `source` at coefficient `c` and
/// normalization multiplier `beta_hat`, before normalization.
pub fn optimized_point_density(source: SourceModel, c: f64, beta_hat: f64) -> Result<PointDensity> {
    if !(c > 0.0 && c.is_finite()) {
        return Err(Error::Precondition(format!("c must be positive and finite, got {c}")));
    }
    if !(beta_hat >= 0.0 && beta_hat.is_finite()) {
        return Err(Error::Precondition(format!(
            "beta_hat must be nonnegative and finite, got {beta_hat}"
        )));
    }
    if beta_hat == 0.0 {
        let c_max = source.c_max_closed_form()?;
        if c > c_max * (1.0 + 1e-12) {
            return Err(Error::Precondition(format!(
                "with beta_hat = 0 the density cannot reach unit mass for c = {c} > c_max = {c_max}"
            )));
        }
    }
    Ok(PointDensity {
        shape: Shape::Optimized { source, c, beta_hat },
        support: source.support(),
    })
}

/// The Panter-Dite density f^{1/3} / ∫ f^{1/3}: N(0, 3) for the Gaussian
/// source and U[−1/2, 1/2] for the uniform one.
pub fn naive_point_density(source: SourceModel) -> PointDensity {
    PointDensity {
        shape: Shape::Naive(source),
        support: source.support(),
    }
}

/// ∫ x² λ(x) dx.
pub fn density_second_moment(density: &PointDensity) -> Result<f64> {
    density.integrate_weighted(|x| x * x, Tolerance::absolute(1e-11))
}

/// The Bennett integral ∫ f(x) / λ(x)² dx.
pub fn bennett_integral(density: &PointDensity, source: SourceModel) -> Result<f64> {
    let integrand = |x: f64| {
        let f = source.pdf(x);
        if f == 0.0 {
            return 0.0;
        }
        let l = density.evaluate(x);
        f / (l * l)
    };
    let support = source.support();
    let result = if support.contains(0.0) {
        integrate_with_singularity_tol(integrand, support, 0.0, Tolerance::absolute(1e-10))
    } else {
        integrate_tol(integrand, support, Tolerance::absolute(1e-10))
    };
    match result {
        Err(Error::Divergence(msg)) => Err(Error::Divergence(format!(
            "point density vanishes where the source has mass ({msg})"
        ))),
        other => other,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    const G: SourceModel = SourceModel::GaussianStdNormal;
    const U: SourceModel = SourceModel::UniformSymmetricUnit;

    #[test]
    fn naive_gaussian_is_normal_with_variance_three() {
        let d = naive_point_density(G);
        assert!((d.evaluate(0.0) - 1.0 / (6.0 * PI).sqrt()).abs() < 1e-15);
        // direct f^{1/3} / ∫ f^{1/3}
        let norm = (2.0 * PI).powf(-1.0 / 6.0) * (6.0 * PI).sqrt();
        for x in [-2.0, 0.3, 4.0] {
            assert!((d.evaluate(x) - G.pdf_cbrt(x) / norm).abs() < 1e-15);
        }
        assert!((density_second_moment(&d).unwrap() - 3.0).abs() < 1e-9);
    }

    #[test]
    fn naive_uniform_is_flat() {
        let d = naive_point_density(U);
        for x in [-0.5, -0.1, 0.0, 0.49, 0.5] {
            assert_eq!(d.evaluate(x), 1.0);
        }
        assert_eq!(d.evaluate(0.51), 0.0);
        assert!((density_second_moment(&d).unwrap() - 1.0 / 12.0).abs() < 1e-12);
    }

    #[test]
    fn uniform_optimized_at_threshold_has_unit_mass() {
        // closed form: ∫|x|^{-2/3} dx over [−1/2, 1/2] / 12^{1/3} = 6·2^{-1/3}/12^{1/3}
        let c0 = 6.0 * 2f64.powf(-1.0 / 3.0) / 12f64.cbrt();
        assert!((c0 - 2.08008).abs() < 1e-5);
        let d = optimized_point_density(U, 2.08008, 0.0).unwrap();
        let mass = d.mass(Tolerance::absolute(1e-12)).unwrap();
        assert!((mass - 1.0).abs() < 1e-4, "{mass}");
        let exact = optimized_point_density(U, c0, 0.0).unwrap();
        assert!((exact.mass(Tolerance::absolute(1e-12)).unwrap() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn beta_zero_beyond_threshold_is_rejected() {
        assert!(matches!(
            optimized_point_density(G, 2.5, 0.0),
            Err(Error::Precondition(_))
        ));
        assert!(optimized_point_density(G, 2.5, 0.1).is_ok());
        assert!(optimized_point_density(G, -1.0, 1.0).is_err());
        assert!(optimized_point_density(G, 1.0, -1.0).is_err());
    }

    #[test]
    fn kkt_identity_holds_pointwise() {
        let (c, bh) = (1.0327, 2.0771);
        let d = optimized_point_density(G, c, bh).unwrap();
        for i in 0..100 {
            let x = -8.0 + 16.0 * i as f64 / 99.0;
            let l = d.evaluate(x);
            let lhs = 6.0 * c * c * l.powi(3) * (2.0 * c * x * x + bh);
            assert!((lhs / G.pdf(x) - 1.0).abs() < 1e-8, "x = {x}");
        }
    }

    #[test]
    fn bennett_flat_on_flat() {
        let b = bennett_integral(&naive_point_density(U), U).unwrap();
        assert!((b - 1.0).abs() < 1e-12);
    }

    #[test]
    fn bennett_naive_gaussian_matches_panter_dite() {
        // (∫ f^{1/3})³ = 6√3·π
        let b = bennett_integral(&naive_point_density(G), G).unwrap();
        assert!((b - 6.0 * 3f64.sqrt() * PI).abs() < 1e-8, "{b}");
    }

    #[test]
    fn bennett_diverges_when_density_misses_source_mass() {
        let err = bennett_integral(&naive_point_density(U), G).unwrap_err();
        assert!(matches!(err, Error::Divergence(_)), "{err:?}");
    }
}
