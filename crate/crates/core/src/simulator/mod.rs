//! Seeded Monte Carlo simulation of quantize → orthogonal signaling → ML
//! decoding → reconstruction.
//!
//! Samples are split into fixed chunks of [`CHUNK_SIZE`]. Chunk `i` draws
//! from ChaCha8 seeded with the master seed on stream `i`, and chunk
//! statistics are merged in chunk order, so results depend only on the
//! configuration and not on how many worker threads run.

mod channel;
mod sweep;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

pub use channel::{max_of_standard_normals, OrthogonalChannel, SimMode};
pub use sweep::{sweep, DesignChoice, SweepRecord};

use crate::analysis::num_levels;
use crate::compander::{build_quantizer, CompanderDesign, Quantizer, SourceModel};
use crate::error::{Error, Result};

pub const CHUNK_SIZE: u64 = 65_536;
/// Largest quantizer the simulator will build.
pub const MAX_LEVELS: u64 = 10_000_000;
/// Outages needed before the conditional estimate is trusted.
pub const MIN_OUTAGES: u64 = 1_000;

#[derive(Debug, Clone)]
pub struct SimConfig {
    pub design: CompanderDesign,
    pub gamma: f64,
    pub n_samples: u64,
    pub seed: u64,
    pub mode: SimMode,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimResult {
    pub n_levels: u64,
    pub n_samples: u64,
    /// rate·mse_given_outage + (1 − rate)·mse_given_no_outage.
    pub mse: f64,
    /// Zero when no outage occurred.
    pub mse_given_outage: f64,
    /// Zero when every sample was in outage.
    pub mse_given_no_outage: f64,
    pub empirical_outage_rate: f64,
    pub exact_outage_prob: f64,
    pub n_outages: u64,
    /// √(sample variance of the squared errors / n).
    pub mse_std_error: f64,
}

impl SimResult {
    /// √(p(1 − p)/n) at the exact outage probability.
    pub fn outage_std_error(&self) -> f64 {
        let p = self.exact_outage_prob;
        (p * (1.0 - p) / self.n_samples as f64).sqrt()
    }
}

/// Running mean/variance of squared errors plus the outage split.
#[derive(Debug, Clone, Copy, Default)]
struct Tally {
    n: u64,
    mean: f64,
    m2: f64,
    n_out: u64,
    sum_out: f64,
    sum_in: f64,
}

impl Tally {
    fn push(&mut self, err: f64, outage: bool) {
        self.n += 1;
        let delta = err - self.mean;
        self.mean += delta / self.n as f64;
        self.m2 += delta * (err - self.mean);
        if outage {
            self.n_out += 1;
            self.sum_out += err;
        } else {
            self.sum_in += err;
        }
    }

    fn merge(self, other: Tally) -> Tally {
        if self.n == 0 {
            return other;
        }
        if other.n == 0 {
            return self;
        }
        let n = self.n + other.n;
        let delta = other.mean - self.mean;
        Tally {
            n,
            mean: self.mean + delta * other.n as f64 / n as f64,
            m2: self.m2 + other.m2 + delta * delta * (self.n as f64 * other.n as f64) / n as f64,
            n_out: self.n_out + other.n_out,
            sum_out: self.sum_out + other.sum_out,
            sum_in: self.sum_in + other.sum_in,
        }
    }

    fn std_error(&self) -> f64 {
        if self.n < 2 {
            return 0.0;
        }
        (self.m2 / (self.n - 1) as f64 / self.n as f64).sqrt()
    }
}

/// Runs `per_sample` over `n_samples` draws in fixed, independently seeded
/// chunks and merges the tallies in chunk order.
fn run_chunks<F>(n_samples: u64, seed: u64, per_sample: F) -> Result<Tally>
where
    F: Fn(&mut ChaCha8Rng) -> Result<(f64, bool)> + Sync,
{
    let n_chunks = n_samples.div_ceil(CHUNK_SIZE);
    let tallies = (0..n_chunks)
        .into_par_iter()
        .map(|chunk| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(chunk);
            let len = CHUNK_SIZE.min(n_samples - chunk * CHUNK_SIZE);
            let mut tally = Tally::default();
            for _ in 0..len {
                let (err, outage) = per_sample(&mut rng)?;
                tally.push(err, outage);
            }
            Ok(tally)
        })
        .collect::<Result<Vec<Tally>>>()?;
    Ok(tallies.into_iter().fold(Tally::default(), Tally::merge))
}

/// Builds the quantizer for `design` at ENR `gamma`.
pub fn design_quantizer(design: &CompanderDesign, gamma: f64) -> Result<Quantizer> {
    let n = num_levels(design.c, gamma)?;
    if n > MAX_LEVELS {
        return Err(Error::Configuration(format!(
            "gamma = {gamma} needs N = {n} levels, above the budget of {MAX_LEVELS}"
        )));
    }
    build_quantizer(&design.density, n as usize)
}

pub fn run_simulation(config: &SimConfig) -> Result<SimResult> {
    if config.n_samples == 0 {
        return Err(Error::Configuration("n_samples must be at least 1".into()));
    }
    if !(config.gamma >= 0.0) {
        return Err(Error::Configuration(format!("gamma must be >= 0, got {}", config.gamma)));
    }
    let quantizer = design_quantizer(&config.design, config.gamma)?;
    simulate(
        &quantizer,
        config.design.source,
        config.gamma,
        config.n_samples,
        config.seed,
        config.mode,
    )
}

/// The simulation loop for an explicit quantizer.
pub fn simulate(
    quantizer: &Quantizer,
    source: SourceModel,
    gamma: f64,
    n_samples: u64,
    seed: u64,
    mode: SimMode,
) -> Result<SimResult> {
    if n_samples == 0 {
        return Err(Error::Configuration("n_samples must be at least 1".into()));
    }
    let n_levels = quantizer.n_levels() as u64;
    let channel = OrthogonalChannel::new(gamma, n_levels, mode)?;
    let tally = run_chunks(n_samples, seed, |rng| {
        let x = source.sample(rng);
        let sent = quantizer.index_of(x) as u64;
        let decoded = channel.transmit(sent, rng)?;
        let d = x - quantizer.level(decoded as usize);
        Ok((d * d, decoded != sent))
    })?;
    let n = tally.n as f64;
    let n_in = tally.n - tally.n_out;
    let rate = tally.n_out as f64 / n;
    let mse_given_outage = if tally.n_out > 0 { tally.sum_out / tally.n_out as f64 } else { 0.0 };
    let mse_given_no_outage = if n_in > 0 { tally.sum_in / n_in as f64 } else { 0.0 };
    Ok(SimResult {
        n_levels,
        n_samples,
        mse: rate * mse_given_outage + (1.0 - rate) * mse_given_no_outage,
        mse_given_outage,
        mse_given_no_outage,
        empirical_outage_rate: rate,
        exact_outage_prob: channel.error_prob(),
        n_outages: tally.n_out,
        mse_std_error: tally.std_error(),
    })
}

/// Forced-outage estimate of E[(X − X̂)² | outage] next to its bound
/// (N/(N − 1))·(σ² + mean squared level).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConditionalOutageReport {
    pub n_levels: u64,
    pub n_outages: u64,
    pub empirical: f64,
    pub std_error: f64,
    pub bound: f64,
}

impl ConditionalOutageReport {
    /// empirical ≤ bound + 4·std_error.
    pub fn holds(&self) -> bool {
        self.empirical <= self.bound + 4.0 * self.std_error
    }
}

/// Since X is independent of the outage event, every sample is treated as
/// an outage: X is drawn unconditionally and reconstructed at a uniformly
/// chosen wrong level.
pub fn conditional_outage_check(config: &SimConfig) -> Result<ConditionalOutageReport> {
    let quantizer = design_quantizer(&config.design, config.gamma)?;
    forced_outage_estimate(&quantizer, config.design.source, config.n_samples, config.seed)
}

pub fn forced_outage_estimate(
    quantizer: &Quantizer,
    source: SourceModel,
    n_samples: u64,
    seed: u64,
) -> Result<ConditionalOutageReport> {
    if n_samples < MIN_OUTAGES {
        return Err(Error::Inconclusive(format!(
            "{n_samples} forced outages is below the minimum of {MIN_OUTAGES}"
        )));
    }
    let n_levels = quantizer.n_levels() as u64;
    // the channel is only used for its wrong-index draw
    let channel = OrthogonalChannel::new(0.0, n_levels, SimMode::AnalyticOutage)?;
    let tally = run_chunks(n_samples, seed, |rng| {
        let x = source.sample(rng);
        let sent = quantizer.index_of(x) as u64;
        let wrong = channel.wrong_index(sent, rng);
        let d = x - quantizer.level(wrong as usize);
        Ok((d * d, true))
    })?;
    let n = n_levels as f64;
    Ok(ConditionalOutageReport {
        n_levels,
        n_outages: tally.n_out,
        empirical: tally.mean,
        std_error: tally.std_error(),
        bound: n / (n - 1.0) * (source.second_moment() + quantizer.mean_squared_level()),
    })
}

/// Per-row seed for sweeps: SplitMix64 finalizer over master seed + index.
pub fn derive_seed(master: u64, index: u64) -> u64 {
    let mut z = master.wrapping_add(index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
