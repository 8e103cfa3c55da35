use std::f64::consts::PI;

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::Result;
use crate::numerics::{gamma_function, Interval};

/// The two scalar sources the toolkit ships.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SourceModel {
    /// X ~ N(0, 1).
    GaussianStdNormal,
    /// X ~ U[−1/2, 1/2].
    UniformSymmetricUnit,
}

impl SourceModel {
    pub fn name(&self) -> &'static str {
        match self {
            SourceModel::GaussianStdNormal => "gaussian",
            SourceModel::UniformSymmetricUnit => "uniform",
        }
    }

    pub fn pdf(&self, x: f64) -> f64 {
        match self {
            SourceModel::GaussianStdNormal => (-0.5 * x * x).exp() / (2.0 * PI).sqrt(),
            SourceModel::UniformSymmetricUnit => {
                if (-0.5..=0.5).contains(&x) {
                    1.0
                } else {
                    0.0
                }
            }
        }
    }

    /// f(x)^{1/3}, evaluated directly so it does not underflow in the tails.
    pub fn pdf_cbrt(&self, x: f64) -> f64 {
        match self {
            SourceModel::GaussianStdNormal => (-x * x / 6.0).exp() * (2.0 * PI).powf(-1.0 / 6.0),
            SourceModel::UniformSymmetricUnit => self.pdf(x),
        }
    }

    pub fn support(&self) -> Interval {
        match self {
            SourceModel::GaussianStdNormal => Interval::real_line(),
            SourceModel::UniformSymmetricUnit => {
                Interval::new(-0.5, 0.5).expect("static interval is valid")
            }
        }
    }

    /// E[X²] (= variance, both sources are zero-mean).
    pub fn second_moment(&self) -> f64 {
        match self {
            SourceModel::GaussianStdNormal => 1.0,
            SourceModel::UniformSymmetricUnit => 1.0 / 12.0,
        }
    }

    /// Largest coefficient c for which the β̂ = 0 optimized density still
    /// carries unit mass, in closed form.
    ///
    /// With β̂ = 0 the density is f^{1/3} |x|^{-2/3} / (12^{1/3} c), so the
    /// threshold is ∫ f^{1/3} |x|^{-2/3} dx / 12^{1/3}.
    pub fn c_max_closed_form(&self) -> Result<f64> {
        Ok(match self {
            SourceModel::GaussianStdNormal => {
                (4.0 * 243.0 / PI).powf(1.0 / 6.0) * gamma_function(7.0 / 6.0)?
            }
            SourceModel::UniformSymmetricUnit => {
                6.0 * 2f64.powf(-1.0 / 3.0) / 12f64.powf(1.0 / 3.0)
            }
        })
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match self {
            SourceModel::GaussianStdNormal => StandardNormal.sample(rng),
            SourceModel::UniformSymmetricUnit => rng.random::<f64>() - 0.5,
        }
    }
}

impl std::fmt::Display for SourceModel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for SourceModel {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "gaussian" => Ok(SourceModel::GaussianStdNormal),
            "uniform" => Ok(SourceModel::UniformSymmetricUnit),
            other => Err(format!("unknown source '{other}' (expected gaussian or uniform)")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{integrate_tol, Tolerance};

    #[test]
    fn pdfs_are_normalized_with_matching_second_moment() {
        for source in [SourceModel::GaussianStdNormal, SourceModel::UniformSymmetricUnit] {
            let tol = Tolerance::absolute(1e-12);
            let mass = integrate_tol(|x| source.pdf(x), source.support(), tol).unwrap();
            let m2 = integrate_tol(|x| x * x * source.pdf(x), source.support(), tol).unwrap();
            assert!((mass - 1.0).abs() < 1e-10, "{source}: {mass}");
            assert!((m2 - source.second_moment()).abs() < 1e-10, "{source}: {m2}");
        }
    }

    #[test]
    fn cube_root_pdf_agrees_with_pdf() {
        let s = SourceModel::GaussianStdNormal;
        for x in [-3.0, -1.0, 0.0, 0.4, 2.5] {
            assert!((s.pdf_cbrt(x).powi(3) - s.pdf(x)).abs() < 1e-15);
        }
    }

    #[test]
    fn parse_names() {
        assert_eq!("gaussian".parse::<SourceModel>().unwrap(), SourceModel::GaussianStdNormal);
        assert_eq!("uniform".parse::<SourceModel>().unwrap(), SourceModel::UniformSymmetricUnit);
        assert!("laplace".parse::<SourceModel>().is_err());
    }
}
