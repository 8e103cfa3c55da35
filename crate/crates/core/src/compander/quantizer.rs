use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::numerics::{integrate_tol, Interval, Tolerance};

use super::{Compander, PointDensity, SourceModel};

/// An N-level scalar quantizer: reconstruction levels and the N + 1 cell
/// edges around them. The outer edges are the support endpoints.
#[derive(Debug, Clone, PartialEq)]
pub struct Quantizer {
    levels: Vec<f64>,
    boundaries: Vec<f64>,
}

impl Quantizer {
    /// Builds a quantizer from explicit levels and boundaries, checking that
    /// the boundaries increase strictly and each level sits inside its cell.
    pub fn new(levels: Vec<f64>, boundaries: Vec<f64>) -> Result<Self> {
        if levels.len() < 2 || boundaries.len() != levels.len() + 1 {
            return Err(Error::Precondition(format!(
                "need N >= 2 levels and N + 1 boundaries, got {} and {}",
                levels.len(),
                boundaries.len()
            )));
        }
        if let Some(w) = boundaries.windows(2).position(|w| !(w[0] < w[1])) {
            return Err(Error::Precondition(format!(
                "boundaries must increase strictly (cell {w}: {} !< {})",
                boundaries[w],
                boundaries[w + 1]
            )));
        }
        if let Some(i) = levels
            .iter()
            .enumerate()
            .position(|(i, &l)| !(boundaries[i] < l && l < boundaries[i + 1]))
        {
            return Err(Error::Precondition(format!(
                "level {i} = {} lies outside its cell [{}, {}]",
                levels[i],
                boundaries[i],
                boundaries[i + 1]
            )));
        }
        Ok(Quantizer { levels, boundaries })
    }

    pub fn n_levels(&self) -> usize {
        self.levels.len()
    }

    pub fn levels(&self) -> &[f64] {
        &self.levels
    }

    pub fn boundaries(&self) -> &[f64] {
        &self.boundaries
    }

    /// Index of the cell containing `x`. Points on an interior boundary go
    /// to the upper cell; points outside the support go to the outer cells.
    pub fn index_of(&self, x: f64) -> usize {
        let interior = &self.boundaries[1..self.boundaries.len() - 1];
        interior.partition_point(|&b| b <= x)
    }

    pub fn level(&self, index: usize) -> f64 {
        self.levels[index]
    }

    /// Mean of the squared levels, E[X̃²] for X̃ uniform over the levels.
    pub fn mean_squared_level(&self) -> f64 {
        self.levels.iter().map(|l| l * l).sum::<f64>() / self.levels.len() as f64
    }
}

/// Compander quantizer with levels G⁻¹((i − 1/2)/N) and interior edges
/// G⁻¹(i/N).
pub fn build_quantizer(density: &PointDensity, n_levels: usize) -> Result<Quantizer> {
    let compander = Compander::new(density)?;
    build_quantizer_with(&compander, n_levels)
}

pub fn build_quantizer_with(compander: &Compander, n_levels: usize) -> Result<Quantizer> {
    if n_levels < 2 {
        return Err(Error::Precondition(format!("need at least 2 levels, got {n_levels}")));
    }
    let n = n_levels as f64;
    // index 2i → edge i/N, index 2i + 1 → level (i + 1/2)/N
    let points = (0..=2 * n_levels)
        .into_par_iter()
        .map(|j| compander.expand(j as f64 / (2.0 * n)))
        .collect::<Result<Vec<f64>>>()?;
    let boundaries = points.iter().step_by(2).copied().collect();
    let levels = points.iter().skip(1).step_by(2).copied().collect();
    Quantizer::new(levels, boundaries)
}

/// Noiseless quantization MSE Σᵢ ∫_{Rᵢ} (x − x̂ᵢ)² f(x) dx.
pub fn finite_n_mse(quantizer: &Quantizer, source: SourceModel) -> Result<f64> {
    let b = quantizer.boundaries();
    let support = source.support();
    let cells = quantizer
        .levels()
        .par_iter()
        .enumerate()
        .map(|(i, &level)| {
            let lo = b[i].max(support.lower());
            let hi = b[i + 1].min(support.upper());
            if lo >= hi {
                return Ok(0.0);
            }
            let cell = Interval::new(lo, hi)?;
            integrate_tol(
                |x| {
                    let d = x - level;
                    d * d * source.pdf(x)
                },
                cell,
                Tolerance { abs: 1e-22, rel: 1e-11 },
            )
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(cells.iter().sum())
}
