//! The statistic registry.

use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::numeric;
use crate::sample::{PairedSample, Sample};

/// Whether a statistic consumes a [`Sample`] or a [`PairedSample`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Arity {
    Univariate,
    Paired,
}

/// Something that maps a data set to a real number.
///
/// Implementations must be pure: the same input gives bit-identical output.
pub trait Estimator<D>: Sync {
    fn estimate(&self, data: &D) -> Result<f64>;
}

/// Built-in statistics.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Statistic {
    Mean,
    /// Variance with divisor `n`.
    PluginVariance,
    /// Variance with divisor `n - 1`.
    UnbiasedVariance,
    SampleMax,
    /// Even lengths average the two central order statistics.
    Median,
    PearsonR,
}

impl Statistic {
    pub const ALL: [Statistic; 6] = [
        Statistic::Mean,
        Statistic::PluginVariance,
        Statistic::UnbiasedVariance,
        Statistic::SampleMax,
        Statistic::Median,
        Statistic::PearsonR,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Statistic::Mean => "mean",
            Statistic::PluginVariance => "plugin_variance",
            Statistic::UnbiasedVariance => "unbiased_variance",
            Statistic::SampleMax => "sample_max",
            Statistic::Median => "median",
            Statistic::PearsonR => "pearson_r",
        }
    }

    pub fn arity(self) -> Arity {
        match self {
            Statistic::PearsonR => Arity::Paired,
            _ => Arity::Univariate,
        }
    }

    /// Smallest number of observations the statistic is defined on.
    pub fn min_observations(self) -> usize {
        match self {
            Statistic::Mean | Statistic::SampleMax | Statistic::Median => 1,
            Statistic::PluginVariance | Statistic::UnbiasedVariance | Statistic::PearsonR => 2,
        }
    }

    fn valid_names() -> String {
        Self::ALL
            .iter()
            .map(|s| s.name())
            .collect::<Vec<_>>()
            .join(", ")
    }

    fn require(self, n: usize) -> Result<()> {
        let required = self.min_observations();
        if n < required {
            return Err(Error::TooFewObservations {
                what: self.name(),
                required,
                actual: n,
            });
        }
        Ok(())
    }
}

impl fmt::Display for Statistic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Statistic {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|stat| stat.name() == s)
            .ok_or_else(|| Error::UnknownStatistic {
                name: s.to_owned(),
                valid: Self::valid_names(),
            })
    }
}

impl Serialize for Statistic {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(self.name())
    }
}

fn median(values: &[f64]) -> f64 {
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len();
    if n % 2 == 1 {
        sorted[n / 2]
    } else {
        (sorted[n / 2 - 1] + sorted[n / 2]) / 2.0
    }
}

/// Pearson correlation of two equal-length columns.
pub fn pearson_r(xs: &[f64], ys: &[f64]) -> Result<f64> {
    let mx = numeric::mean(xs);
    let my = numeric::mean(ys);
    let sxx = numeric::sum_sq_dev(xs, mx);
    let syy = numeric::sum_sq_dev(ys, my);
    if sxx == 0.0 {
        return Err(Error::ZeroVariance("x column"));
    }
    if syy == 0.0 {
        return Err(Error::ZeroVariance("y column"));
    }
    let sxy = numeric::sum(xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)));
    if xs.len() == 2 {
        // Two distinct points are always perfectly correlated.
        return Ok(sxy.signum());
    }
    Ok((sxy / (sxx * syy).sqrt()).clamp(-1.0, 1.0))
}

impl Estimator<Sample> for Statistic {
    fn estimate(&self, data: &Sample) -> Result<f64> {
        let xs = data.values();
        self.require(xs.len())?;
        let n = xs.len() as f64;
        Ok(match self {
            Statistic::Mean => numeric::mean(xs),
            Statistic::PluginVariance => numeric::sum_sq_dev(xs, numeric::mean(xs)) / n,
            Statistic::UnbiasedVariance => numeric::sum_sq_dev(xs, numeric::mean(xs)) / (n - 1.0),
            Statistic::SampleMax => xs.iter().copied().fold(f64::NEG_INFINITY, f64::max),
            Statistic::Median => median(xs),
            Statistic::PearsonR => {
                return Err(Error::ArityMismatch {
                    statistic: self.name(),
                    expected: "paired",
                })
            }
        })
    }
}

impl Estimator<PairedSample> for Statistic {
    fn estimate(&self, data: &PairedSample) -> Result<f64> {
        match self {
            Statistic::PearsonR => {
                self.require(data.xs().len())?;
                pearson_r(data.xs(), data.ys())
            }
            _ => Err(Error::ArityMismatch {
                statistic: self.name(),
                expected: "univariate",
            }),
        }
    }
}

impl<D, E: Estimator<D> + ?Sized> Estimator<D> for &E {
    fn estimate(&self, data: &D) -> Result<f64> {
        (**self).estimate(data)
    }
}
