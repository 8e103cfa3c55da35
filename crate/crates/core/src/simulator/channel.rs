use rand::Rng;
use rand_distr::{Distribution, Open01, StandardNormal};

use crate::analysis::exact_orthogonal_error_prob;
use crate::error::{Error, Result};
use crate::numerics::std_normal_quantile;

/// How the simulator decides whether a transmission is decoded correctly.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SimMode {
    /// Outage is a Bernoulli draw with the exact ML error probability.
    AnalyticOutage,
    /// Outage is decided by sampling the channel noise.
    FullChannel,
}

/// Max of `k` i.i.d. standard normals from one uniform draw:
/// Φ⁻¹(u^{1/k}), computed through the upper tail 1 − u^{1/k} so large `k`
/// keeps its precision.
pub fn max_of_standard_normals(k: u64, u: f64) -> Result<f64> {
    if k == 0 {
        return Err(Error::Precondition("need at least one variable".into()));
    }
    let tail = -(u.ln() / k as f64).exp_m1();
    Ok(-std_normal_quantile(tail)?)
}

/// Equal-energy orthogonal signaling over AWGN with ML decoding.
///
/// With index k sent, the matched-filter outputs are √γ + Z for
/// coordinate k and i.i.d. N(0, 1) elsewhere (noise normalized to unit
/// variance). ML picks the largest, so decoding is correct iff √γ + Z
/// exceeds the max of the N − 1 others; that max is drawn directly. By
/// exchangeability of the noise, the wrong index is uniform over the
/// N − 1 incorrect ones.
#[derive(Debug, Clone)]
pub struct OrthogonalChannel {
    n_levels: u64,
    amplitude: f64,
    mode: SimMode,
    error_prob: f64,
}

impl OrthogonalChannel {
    pub fn new(gamma: f64, n_levels: u64, mode: SimMode) -> Result<Self> {
        if !(gamma >= 0.0 && gamma.is_finite()) || n_levels < 2 {
            return Err(Error::Configuration(format!(
                "need finite gamma >= 0 and N >= 2, got gamma = {gamma}, N = {n_levels}"
            )));
        }
        Ok(OrthogonalChannel {
            n_levels,
            amplitude: gamma.sqrt(),
            mode,
            error_prob: exact_orthogonal_error_prob(gamma, n_levels)?,
        })
    }

    pub fn error_prob(&self) -> f64 {
        self.error_prob
    }

    pub fn n_levels(&self) -> u64 {
        self.n_levels
    }

    /// Uniform draw over the N − 1 indices other than `sent`.
    pub fn wrong_index<R: Rng + ?Sized>(&self, sent: u64, rng: &mut R) -> u64 {
        let j = rng.random_range(0..self.n_levels - 1);
        if j >= sent { j + 1 } else { j }
    }

    /// Decoded index for transmitted index `sent`.
    pub fn transmit<R: Rng + ?Sized>(&self, sent: u64, rng: &mut R) -> Result<u64> {
        match self.mode {
            SimMode::AnalyticOutage => {
                if rng.random::<f64>() < self.error_prob {
                    Ok(self.wrong_index(sent, rng))
                } else {
                    Ok(sent)
                }
            }
            SimMode::FullChannel => {
                let z: f64 = StandardNormal.sample(rng);
                let u: f64 = Open01.sample(rng);
                let competitor = max_of_standard_normals(self.n_levels - 1, u)?;
                let own = self.amplitude + z;
                if competitor > own {
                    Ok(self.wrong_index(sent, rng))
                } else if competitor == own {
                    // probability-zero tie: lowest index wins
                    Ok(self.wrong_index(sent, rng).min(sent))
                } else {
                    Ok(sent)
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn single_max_is_plain_quantile() {
        let m = max_of_standard_normals(1, 0.975).unwrap();
        assert!((m - 1.959964).abs() < 1e-6);
    }

    #[test]
    fn wrong_index_never_hits_sent() {
        let ch = OrthogonalChannel::new(1.0, 5, SimMode::FullChannel).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for sent in 0..5 {
            for _ in 0..200 {
                let j = ch.wrong_index(sent, &mut rng);
                assert!(j != sent && j < 5);
            }
        }
    }

    #[test]
    fn rejects_degenerate_configurations() {
        assert!(OrthogonalChannel::new(-1.0, 4, SimMode::FullChannel).is_err());
        assert!(OrthogonalChannel::new(1.0, 1, SimMode::FullChannel).is_err());
    }
}
