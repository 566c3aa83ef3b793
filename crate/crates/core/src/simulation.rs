//! Uniform-maximum experiment: how often does the jackknife-corrected
//! maximum land closer to the true upper bound than the raw maximum?

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exec;
use crate::jackknife::jackknife_estimate;
use crate::numeric;
use crate::rng::SeededStream;
use crate::sample::Sample;
use crate::statistic::{Estimator, Statistic};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SimulationConfig {
    pub theta: f64,
    pub n: usize,
    pub reps: usize,
    pub seed: u64,
}

impl SimulationConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.theta.is_finite() && self.theta > 0.0) {
            return Err(Error::InvalidParameter(format!("theta must be positive, got {}", self.theta)));
        }
        if self.n < 2 {
            return Err(Error::InvalidParameter(format!("n must be at least 2, got {}", self.n)));
        }
        if self.reps == 0 {
            return Err(Error::InvalidParameter("reps must be at least 1".into()));
        }
        Ok(())
    }

    /// Stream for replication `rep`.
    pub fn stream(&self, rep: usize) -> SeededStream {
        SeededStream::from_seed(self.seed).derive(rep as u64)
    }
}

/// One replication's outcome.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Replication {
    pub rep: usize,
    pub sample_max: f64,
    pub jackknife_max: f64,
    pub abs_bias_max: f64,
    pub abs_bias_jack: f64,
    /// Strictly closer; ties count as not better.
    pub jack_better: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimulationReport {
    pub pct_jack_better: f64,
    pub mean_abs_bias_jack: f64,
    pub mean_abs_bias_max: f64,
    pub config: SimulationConfig,
}

/// Draws `n` iid `Uniform(0, theta)` values for replication `rep`.
pub fn draw_sample(config: &SimulationConfig, rep: usize) -> Sample {
    let mut rng = config.stream(rep).rng();
    let values = (0..config.n).map(|_| config.theta * rng.random::<f64>()).collect();
    Sample::from_trusted(values)
}

fn replicate(config: &SimulationConfig, rep: usize) -> Result<Replication> {
    let sample = draw_sample(config, rep);
    let sample_max = Statistic::SampleMax.estimate(&sample)?;
    let jackknife_max = jackknife_estimate(&sample, &Statistic::SampleMax)?;
    let abs_bias_max = (config.theta - sample_max).abs();
    let abs_bias_jack = (config.theta - jackknife_max).abs();
    Ok(Replication {
        rep,
        sample_max,
        jackknife_max,
        abs_bias_max,
        abs_bias_jack,
        jack_better: abs_bias_jack < abs_bias_max,
    })
}

/// Every replication, in replication order.
pub fn uniform_max_replications(config: &SimulationConfig) -> Result<Vec<Replication>> {
    config.validate()?;
    exec::try_map_range(config.reps, |rep| replicate(config, rep))
}

/// Summarizes replications produced for `config`.
pub fn summarize(config: &SimulationConfig, reps: &[Replication]) -> SimulationReport {
    let count = reps.len() as f64;
    let better = reps.iter().filter(|r| r.jack_better).count() as f64;
    SimulationReport {
        pct_jack_better: better / count,
        mean_abs_bias_jack: numeric::sum(reps.iter().map(|r| r.abs_bias_jack)) / count,
        mean_abs_bias_max: numeric::sum(reps.iter().map(|r| r.abs_bias_max)) / count,
        config: *config,
    }
}

pub fn run_uniform_max_experiment(config: &SimulationConfig) -> Result<SimulationReport> {
    let reps = uniform_max_replications(config)?;
    Ok(summarize(config, &reps))
}
