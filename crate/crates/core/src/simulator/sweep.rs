use crate::analysis::{
    end_to_end_bound, knopp_analytic_bound, knopp_optimize, naive_design, num_levels,
    optimize_design, outage_probability_bound,
};
use crate::compander::SourceModel;
use crate::error::{Error, Result};

use super::{derive_seed, design_quantizer, simulate, SimMode, MAX_LEVELS};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DesignChoice {
    Optimized,
    Naive,
}

/// One ENR point of a distortion sweep.
///
/// `n_levels`, the simulation columns and the outage columns refer to the
/// selected design. The uniform-quantizer baseline is only defined for the
/// Gaussian source; its columns are `None` for the uniform source.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRecord {
    pub gamma: f64,
    pub n_levels: u64,
    pub bound_optimized: f64,
    pub bound_naive: f64,
    pub knopp_numeric: Option<f64>,
    pub knopp_analytic: Option<f64>,
    pub sim_mse: Option<f64>,
    pub sim_stderr: Option<f64>,
    pub sim_outage_rate: Option<f64>,
    pub pe_exact: f64,
    /// `None` where ln N > γ/2 and the bound is not stated.
    pub pe_bound: Option<f64>,
}

impl SweepRecord {
    /// −ln of the selected design's analytic bound.
    pub fn neg_ln_bound(&self, choice: DesignChoice) -> f64 {
        match choice {
            DesignChoice::Optimized => -self.bound_optimized.ln(),
            DesignChoice::Naive => -self.bound_naive.ln(),
        }
    }
}

/// Evaluates bounds (and, when `n_samples > 0`, a simulation) at every γ of
/// a strictly increasing positive grid. Row `i` simulates with seed
/// `derive_seed(seed, i)`. Simulated sweeps fail up front, naming the first
/// γ whose quantizer exceeds [`MAX_LEVELS`].
pub fn sweep(
    source: SourceModel,
    choice: DesignChoice,
    gammas: &[f64],
    n_samples: u64,
    seed: u64,
    mode: SimMode,
) -> Result<Vec<SweepRecord>> {
    if gammas.iter().any(|g| !(g.is_finite() && *g > 0.0)) {
        return Err(Error::Precondition("every gamma in a sweep must be finite and positive".into()));
    }
    if gammas.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::Precondition("sweep gammas must be strictly increasing".into()));
    }
    let optimized = optimize_design(source)?;
    let naive = naive_design(source)?;
    let selected = match choice {
        DesignChoice::Optimized => &optimized,
        DesignChoice::Naive => &naive,
    };
    // the level budget binds only when quantizers are built; check it
    // before doing any work
    for &gamma in gammas.iter().filter(|_| n_samples > 0) {
        let n = num_levels(selected.c, gamma)?;
        if n > MAX_LEVELS {
            return Err(Error::Configuration(format!(
                "gamma = {gamma} needs N = {n} levels, above the budget of {MAX_LEVELS}"
            )));
        }
    }
    gammas
        .iter()
        .enumerate()
        .map(|(row, &gamma)| {
            let n_levels = num_levels(selected.c, gamma)?;
            let (knopp_numeric, knopp_analytic) = match source {
                SourceModel::GaussianStdNormal => (
                    Some(knopp_optimize(gamma)?.1),
                    Some(knopp_analytic_bound(gamma)?),
                ),
                SourceModel::UniformSymmetricUnit => (None, None),
            };
            let pe_bound = match outage_probability_bound(gamma, n_levels) {
                Ok(v) => Some(v),
                Err(Error::OutOfRegime(_)) => None,
                Err(e) => return Err(e),
            };
            let (sim_mse, sim_stderr, sim_outage_rate, pe_exact) = if n_samples > 0 {
                let quantizer = design_quantizer(selected, gamma)?;
                let r = simulate(&quantizer, source, gamma, n_samples, derive_seed(seed, row as u64), mode)?;
                (
                    Some(r.mse),
                    Some(r.mse_std_error),
                    Some(r.empirical_outage_rate),
                    r.exact_outage_prob,
                )
            } else {
                (None, None, None, crate::analysis::exact_orthogonal_error_prob(gamma, n_levels)?)
            };
            Ok(SweepRecord {
                gamma,
                n_levels,
                bound_optimized: end_to_end_bound(&optimized, gamma),
                bound_naive: end_to_end_bound(&naive, gamma),
                knopp_numeric,
                knopp_analytic,
                sim_mse,
                sim_stderr,
                sim_outage_rate,
                pe_exact,
                pe_bound,
            })
        })
        .collect()
}
