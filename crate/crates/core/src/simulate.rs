//! Monte Carlo estimation of the dual absorption time.
//!
//! Trajectory `t` draws from ChaCha stream `t` of the given seed, so the
//! result does not depend on how trajectories are spread over threads.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::absorption::AbsorptionLaw;
use crate::duality::DualChain;
use crate::error::{Error, Result};

/// Trajectories longer than this are treated as non-absorbing.
pub const MAX_STEPS: u64 = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SimulationConfig {
    pub samples: usize,
    pub seed: u64,
    pub horizon: usize,
}

/// Cumulative transition weights of one row, nonzeros only.
struct RowSampler {
    targets: Vec<usize>,
    cumulative: Vec<f64>,
}

impl RowSampler {
    fn new(weights: &[f64]) -> Self {
        let mut targets = Vec::new();
        let mut cumulative = Vec::new();
        let mut acc = 0.0;
        for (j, &w) in weights.iter().enumerate() {
            if w > 0.0 {
                acc += w;
                targets.push(j);
                cumulative.push(acc);
            }
        }
        RowSampler {
            targets,
            cumulative,
        }
    }

    fn sample(&self, rng: &mut impl Rng) -> Option<usize> {
        let total = *self.cumulative.last()?;
        let u = rng.random::<f64>() * total;
        let k = self.cumulative.partition_point(|&c| c <= u);
        Some(self.targets[k.min(self.targets.len() - 1)])
    }
}

fn trajectory(
    start: &RowSampler,
    rows: &[RowSampler],
    absorbing: usize,
    seed: u64,
    stream: u64,
) -> Result<u64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    let mut state = start.sample(&mut rng).ok_or(Error::BadProbability(0.0))?;
    let mut steps = 0;
    while state != absorbing {
        if steps == MAX_STEPS {
            return Err(Error::MaxStepsExceeded {
                max_steps: MAX_STEPS,
            });
        }
        state = rows[state]
            .sample(&mut rng)
            .ok_or(Error::NotRowStochastic {
                row: state.to_string(),
                sum: 0.0,
            })?;
        steps += 1;
    }
    Ok(steps)
}

/// Absorption times of `samples` independent trajectories started from `nu*`.
pub fn simulate_absorption_times(d: &DualChain, samples: usize, seed: u64) -> Result<Vec<u64>> {
    if samples == 0 {
        return Err(Error::BadParameters("samples must be at least 1".into()));
    }
    let rows: Vec<RowSampler> = (0..d.len())
        .map(|i| RowSampler::new(d.p_star.row(i)))
        .collect();
    let start = RowSampler::new(&d.nu_star);
    (0..samples as u64)
        .into_par_iter()
        .map(|t| trajectory(&start, &rows, d.absorbing_index, seed, t))
        .collect()
}

/// Empirical survival (`n = 0..=horizon`), mean and sample variance of `T*`.
pub fn simulate_sst(d: &DualChain, config: SimulationConfig) -> Result<AbsorptionLaw> {
    let times = simulate_absorption_times(d, config.samples, config.seed)?;
    Ok(empirical_law(&times, config.horizon))
}

pub fn empirical_law(times: &[u64], horizon: usize) -> AbsorptionLaw {
    let n = times.len() as f64;
    let mut counts = vec![0usize; horizon + 2];
    for &t in times {
        counts[(t as usize).min(horizon + 1)] += 1;
    }
    // survival[k] = #{T > k} / n
    let mut survival = vec![0.0; horizon + 1];
    let mut above = times.len();
    for k in 0..=horizon {
        above -= counts[k];
        survival[k] = above as f64 / n;
    }
    let mean = times.iter().map(|&t| t as f64).sum::<f64>() / n;
    let variance = if times.len() > 1 {
        times
            .iter()
            .map(|&t| (t as f64 - mean).powi(2))
            .sum::<f64>()
            / (n - 1.0)
    } else {
        0.0
    };
    AbsorptionLaw {
        survival,
        mean,
        variance,
    }
}
