//! Tabulated compressor G(x) = ∫ λ and its inverse, the expander.
//!
//! Each side of the split point `p` is parametrized as `x = p ± w·t³` with
//! `t ∈ [0, 1]`, which both packs the table densely near the centre (where
//! λ is largest for every density we ship) and removes a `|x − p|^{-2/3}`
//! singularity from the integrand. Cell masses are integrated in `t`, and
//! queries integrate from the nearest knot, so G is accurate to roughly
//! machine precision between knots; G⁻¹ brackets by table lookup and
//! finishes with Brent's method in `t`.

use crate::error::{Error, Result};
use crate::numerics::{integrate_tol, try_find_root_bracket, Interval, Tolerance};

use super::PointDensity;

const CELLS_PER_SIDE: usize = 1024;
const NORMALIZATION_SLACK: f64 = 1e-6;

#[derive(Debug, Clone)]
struct Side {
    /// +1 for the right side, −1 for the left.
    sign: f64,
    width: f64,
    /// cum[k] = mass between the split point and t = k / CELLS_PER_SIDE.
    cum: Vec<f64>,
}

impl Side {
    fn x_of(&self, centre: f64, t: f64) -> f64 {
        centre + self.sign * self.width * t * t * t
    }

    fn t_of(&self, centre: f64, x: f64) -> f64 {
        (((x - centre) * self.sign) / self.width).max(0.0).cbrt().min(1.0)
    }

    fn total(&self) -> f64 {
        *self.cum.last().unwrap_or(&0.0)
    }
}

/// Compressor/expander pair for a normalized point density.
#[derive(Debug, Clone)]
pub struct Compander {
    density: PointDensity,
    centre: f64,
    lower: f64,
    upper: f64,
    left: Side,
    right: Side,
    total: f64,
}

impl Compander {
    pub fn new(density: &PointDensity) -> Result<Self> {
        let (lower, upper) = density.support().truncated();
        let centre = density.split_point();
        let left = build_side(density, centre, -1.0, centre - lower)?;
        let right = build_side(density, centre, 1.0, upper - centre)?;
        let total = left.total() + right.total();
        if !((total - 1.0).abs() <= NORMALIZATION_SLACK) {
            return Err(Error::Precondition(format!(
                "point density must be normalized, but integrates to {total}"
            )));
        }
        Ok(Compander {
            density: density.clone(),
            centre,
            lower,
            upper,
            left,
            right,
            total,
        })
    }

    pub fn density(&self) -> &PointDensity {
        &self.density
    }

    /// G(x) ∈ [0, 1].
    pub fn compress(&self, x: f64) -> f64 {
        if x.is_nan() {
            return f64::NAN;
        }
        if x <= self.lower {
            return 0.0;
        }
        if x >= self.upper {
            return 1.0;
        }
        let left_total = self.left.total();
        let g = if x >= self.centre {
            left_total + self.side_mass(&self.right, self.right.t_of(self.centre, x))
        } else {
            left_total - self.side_mass(&self.left, self.left.t_of(self.centre, x))
        };
        (g / self.total).clamp(0.0, 1.0)
    }

    /// G⁻¹(u) for u ∈ [0, 1]. The endpoints map to the support endpoints,
    /// which are infinite for the Gaussian source.
    pub fn expand(&self, u: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&u) {
            return Err(Error::Domain(format!("expander input must lie in [0, 1], got {u}")));
        }
        let support = self.density.support();
        if u == 0.0 {
            return Ok(support.lower());
        }
        if u == 1.0 {
            return Ok(support.upper());
        }
        let target = u * self.total;
        let left_total = self.left.total();
        if target >= left_total {
            self.invert_side(&self.right, target - left_total)
        } else {
            self.invert_side(&self.left, left_total - target)
        }
    }

    /// Mass between the centre and parameter `t` on one side.
    fn side_mass(&self, side: &Side, t: f64) -> f64 {
        let n = CELLS_PER_SIDE as f64;
        let k = ((t * n).floor() as usize).min(CELLS_PER_SIDE - 1);
        let t0 = k as f64 / n;
        if t <= t0 {
            return side.cum[k];
        }
        side.cum[k] + cell_mass(&self.density, self.centre, side, t0, t)
    }

    /// Solves side_mass(t) = mass for t and maps back to x.
    fn invert_side(&self, side: &Side, mass: f64) -> Result<f64> {
        let mass = mass.clamp(0.0, side.total());
        // first knot whose cumulative mass reaches the target
        let k = side.cum.partition_point(|&m| m < mass).clamp(1, CELLS_PER_SIDE);
        let n = CELLS_PER_SIDE as f64;
        let (t0, t1) = ((k - 1) as f64 / n, k as f64 / n);
        if side.cum[k] - side.cum[k - 1] <= 0.0 {
            return Ok(side.x_of(self.centre, t0));
        }
        let root = try_find_root_bracket(
            |t| Ok(self.side_mass(side, t) - mass),
            t0,
            t1,
            1e-15,
        );
        let t = match root {
            Ok(r) => r.root,
            // roundoff can leave both ends on one side of a target sitting on a knot
            Err(Error::InvalidBracket { g_lower, g_upper, .. }) => {
                if g_lower.abs() <= g_upper.abs() { t0 } else { t1 }
            }
            Err(e) => return Err(e),
        };
        Ok(side.x_of(self.centre, t))
    }
}

fn cell_mass(density: &PointDensity, centre: f64, side: &Side, t0: f64, t1: f64) -> f64 {
    let w = side.width;
    let g = |t: f64| {
        let t2 = t * t;
        if t2 == 0.0 {
            return 0.0;
        }
        let l = density.evaluate(side.x_of(centre, t));
        if l == 0.0 { 0.0 } else { 3.0 * w * t2 * l }
    };
    // cells are small and the integrand is smooth in t; one rule is enough
    // unless the cell straddles a sharp feature, in which case refine
    let (v, err) = crate::numerics::gauss_kronrod_15(&g, t0, t1);
    if err <= 1e-15 + 1e-13 * v.abs() {
        return v;
    }
    match Interval::new(t0, t1)
        .and_then(|iv| integrate_tol(g, iv, Tolerance { abs: 1e-16, rel: 1e-13 }))
    {
        Ok(refined) => refined,
        Err(Error::NonConvergence { estimate, .. }) => estimate,
        Err(_) => v,
    }
}

fn build_side(density: &PointDensity, centre: f64, sign: f64, width: f64) -> Result<Side> {
    let mut side = Side {
        sign,
        width,
        cum: Vec::with_capacity(CELLS_PER_SIDE + 1),
    };
    side.cum.push(0.0);
    if width <= 0.0 {
        side.cum.resize(CELLS_PER_SIDE + 1, 0.0);
        return Ok(side);
    }
    let n = CELLS_PER_SIDE as f64;
    let mut acc = 0.0;
    for k in 0..CELLS_PER_SIDE {
        let m = cell_mass(density, centre, &side, k as f64 / n, (k + 1) as f64 / n);
        if !m.is_finite() || m < 0.0 {
            return Err(Error::Divergence(format!(
                "point density is not integrable near x = {}",
                side.x_of(centre, k as f64 / n)
            )));
        }
        acc += m;
        side.cum.push(acc);
    }
    Ok(side)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::compander::{naive_point_density, optimized_point_density, SourceModel};
    use crate::numerics::std_normal_cdf;

    #[test]
    fn uniform_naive_is_identity_shift() {
        let c = Compander::new(&naive_point_density(SourceModel::UniformSymmetricUnit)).unwrap();
        for x in [-0.5, -0.31, 0.0, 0.2, 0.5] {
            assert!((c.compress(x) - (x + 0.5)).abs() < 1e-14);
        }
        for u in [0.0, 0.1, 0.5, 0.77, 1.0] {
            assert!((c.expand(u).unwrap() - (u - 0.5)).abs() < 1e-13);
        }
    }

    #[test]
    fn gaussian_naive_matches_normal_cdf() {
        let c = Compander::new(&naive_point_density(SourceModel::GaussianStdNormal)).unwrap();
        assert!((c.compress(0.0) - 0.5).abs() < 1e-14);
        assert!((c.compress(3f64.sqrt()) - std_normal_cdf(1.0)).abs() < 1e-12);
        let x = c.expand(std_normal_cdf(1.0)).unwrap();
        assert!((x - 3f64.sqrt()).abs() < 1e-10, "{x}");
        assert_eq!(c.expand(0.0).unwrap(), f64::NEG_INFINITY);
        assert_eq!(c.expand(1.0).unwrap(), f64::INFINITY);
    }

    #[test]
    fn expander_domain() {
        let c = Compander::new(&naive_point_density(SourceModel::UniformSymmetricUnit)).unwrap();
        assert!(matches!(c.expand(-0.01), Err(Error::Domain(_))));
        assert!(matches!(c.expand(1.01), Err(Error::Domain(_))));
    }

    #[test]
    fn unnormalized_density_is_rejected() {
        let d = optimized_point_density(SourceModel::GaussianStdNormal, 1.0, 5.0).unwrap();
        assert!(matches!(Compander::new(&d), Err(Error::Precondition(_))));
    }

    #[test]
    fn singular_density_inverts_near_centre() {
        // β̂ = 0 at the mass threshold: λ ∝ |x|^{-2/3} on the uniform support
        let c0 = SourceModel::UniformSymmetricUnit.c_max_closed_form().unwrap();
        let d = optimized_point_density(SourceModel::UniformSymmetricUnit, c0, 0.0).unwrap();
        let comp = Compander::new(&d).unwrap();
        // G(x) = 1/2 + sign(x)·|2x|^{1/3}/2 in closed form
        for x in [-0.4, -1e-6, 1e-9, 0.003, 0.25] {
            let g = 0.5 + 0.5 * (2.0_f64 * x).abs().cbrt().copysign(x);
            assert!((comp.compress(x) - g).abs() < 1e-10, "x = {x}");
            let back = comp.expand(g).unwrap();
            assert!((back - x).abs() < 1e-10 * x.abs().max(1e-3), "x = {x}, back = {back}");
        }
    }
}
