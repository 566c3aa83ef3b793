//! Delete-1 and delete-d jackknife.
//!
//! Replicates are always computed generically by re-evaluating the
//! statistic on each reduced sample, so ties and non-smooth statistics need
//! no special casing.

use serde::Serialize;
use statrs::distribution::{ContinuousCDF, Normal, StudentsT};

use crate::combinatorics::{binomial, check_cap, unrank_combination};
use crate::error::{Error, Result};
use crate::exec;
use crate::numeric;
use crate::sample::Observations;
use crate::statistic::Estimator;

/// Largest number of subsets the delete-d jackknife will enumerate.
pub const DELETE_D_CAP: u64 = 1_000_000;

/// Everything the delete-1 jackknife produces for one statistic.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct JackknifeReport {
    pub theta_hat: f64,
    pub replicates: Vec<f64>,
    pub replicate_mean: f64,
    pub se: f64,
    pub bias: f64,
    pub theta_jack: f64,
    pub pseudovalues: Vec<f64>,
    pub d: usize,
}

fn require_len<D: Observations>(data: &D, required: usize) -> Result<()> {
    if data.len() < required {
        return Err(Error::TooFewObservations {
            what: "the jackknife",
            required,
            actual: data.len(),
        });
    }
    Ok(())
}

/// The `n` leave-one-out samples, `i`-th omitting observation `i`.
pub fn delete1_samples<D: Observations>(data: &D) -> Result<Vec<D>> {
    require_len(data, 2)?;
    Ok((0..data.len()).map(|i| data.without(i)).collect())
}

/// `θ̂_(i)`: the statistic on each leave-one-out sample.
pub fn jackknife_replicates<D, S>(data: &D, stat: &S) -> Result<Vec<f64>>
where
    D: Observations,
    S: Estimator<D> + ?Sized,
{
    require_len(data, 2)?;
    exec::try_map_range(data.len(), |i| stat.estimate(&data.without(i)))
}

/// Full delete-1 analysis.
pub fn jackknife<D, S>(data: &D, stat: &S) -> Result<JackknifeReport>
where
    D: Observations,
    S: Estimator<D> + ?Sized,
{
    let theta_hat = stat.estimate(data)?;
    let replicates = jackknife_replicates(data, stat)?;
    let n = replicates.len() as f64;
    let replicate_mean = numeric::mean(&replicates);
    let se = ((n - 1.0) / n * numeric::sum_sq_dev(&replicates, replicate_mean)).sqrt();
    let bias = (n - 1.0) * (replicate_mean - theta_hat);
    let theta_jack = n * theta_hat - (n - 1.0) * replicate_mean;
    let pseudovalues = replicates
        .iter()
        .map(|r| n * theta_hat - (n - 1.0) * r)
        .collect();
    Ok(JackknifeReport {
        theta_hat,
        replicates,
        replicate_mean,
        se,
        bias,
        theta_jack,
        pseudovalues,
        d: 1,
    })
}

pub fn jackknife_se<D, S>(data: &D, stat: &S) -> Result<f64>
where
    D: Observations,
    S: Estimator<D> + ?Sized,
{
    Ok(jackknife(data, stat)?.se)
}

/// `(n - 1)(θ̂_(·) - θ̂)`.
pub fn jackknife_bias<D, S>(data: &D, stat: &S) -> Result<f64>
where
    D: Observations,
    S: Estimator<D> + ?Sized,
{
    Ok(jackknife(data, stat)?.bias)
}

/// Bias-corrected estimate `n θ̂ - (n - 1) θ̂_(·)`.
pub fn jackknife_estimate<D, S>(data: &D, stat: &S) -> Result<f64>
where
    D: Observations,
    S: Estimator<D> + ?Sized,
{
    Ok(jackknife(data, stat)?.theta_jack)
}

/// `ps_i = n θ̂ - (n - 1) θ̂_(i)`.
pub fn pseudovalues<D, S>(data: &D, stat: &S) -> Result<Vec<f64>>
where
    D: Observations,
    S: Estimator<D> + ?Sized,
{
    Ok(jackknife(data, stat)?.pseudovalues)
}

/// Default deletion count for the delete-d jackknife: `floor(√n) + 1`,
/// clamped to `n - 1` for very small samples.
pub fn default_d(n: usize) -> usize {
    let root = (n as f64).sqrt().floor() as usize;
    (root + 1).min(n.saturating_sub(1)).max(1)
}

fn subset_count(n: usize, d: usize) -> Result<usize> {
    if d == 0 || d >= n {
        return Err(Error::InvalidParameter(format!(
            "delete-d needs 1 <= d <= n - 1, got d = {d} with n = {n}"
        )));
    }
    check_cap(
        binomial(n as u64, d as u64),
        DELETE_D_CAP,
        "choose a smaller d (or d closer to n) so that C(n, d) stays enumerable",
    )
}

/// All size-`n - d` subsamples, lexicographic by the deleted index set.
pub fn delete_d_samples<D: Observations>(data: &D, d: usize) -> Result<Vec<D>> {
    let count = subset_count(data.len(), d)?;
    let mut deleted = Vec::with_capacity(d);
    Ok((0..count)
        .map(|rank| {
            unrank_combination(data.len(), d, rank as u128, &mut deleted);
            data.without_all(&deleted)
        })
        .collect())
}

/// Replicates over all `C(n, d)` deletions, in [`delete_d_samples`] order.
pub fn delete_d_replicates<D, S>(data: &D, stat: &S, d: usize) -> Result<Vec<f64>>
where
    D: Observations,
    S: Estimator<D> + ?Sized,
{
    let n = data.len();
    let count = subset_count(n, d)?;
    exec::try_map_range(count, |rank| {
        let mut deleted = Vec::with_capacity(d);
        unrank_combination(n, d, rank as u128, &mut deleted);
        stat.estimate(&data.without_all(&deleted))
    })
}

/// Delete-d report: replicates over every deletion set and the resulting
/// standard error.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DeleteDReport {
    pub theta_hat: f64,
    pub d: usize,
    pub subsets: usize,
    pub replicates: Vec<f64>,
    pub replicate_mean: f64,
    pub se: f64,
}

pub fn delete_d<D, S>(data: &D, stat: &S, d: usize) -> Result<DeleteDReport>
where
    D: Observations,
    S: Estimator<D> + ?Sized,
{
    let theta_hat = stat.estimate(data)?;
    let replicates = delete_d_replicates(data, stat, d)?;
    let n = data.len() as f64;
    let subsets = replicates.len();
    let replicate_mean = numeric::mean(&replicates);
    let norm = (n - d as f64) / (d as f64 * subsets as f64);
    let se = (norm * numeric::sum_sq_dev(&replicates, replicate_mean)).sqrt();
    Ok(DeleteDReport {
        theta_hat,
        d,
        subsets,
        replicates,
        replicate_mean,
        se,
    })
}

/// `{(n - d) / (d C(n, d)) Σ (θ̂_(z) - θ̂_(·))²}^½`.
pub fn delete_d_se<D, S>(data: &D, stat: &S, d: usize) -> Result<f64>
where
    D: Observations,
    S: Estimator<D> + ?Sized,
{
    Ok(delete_d(data, stat, d)?.se)
}

/// Reference distribution for pseudovalue intervals.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Reference {
    Normal,
    #[default]
    StudentT,
}

/// Interval and test built by treating the pseudovalues as an iid sample.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PseudovalueInference {
    pub point: f64,
    pub spread: f64,
    pub level: f64,
    pub interval: (f64, f64),
    pub quantile: f64,
    pub reference: Reference,
    pub null_value: Option<f64>,
    pub statistic: Option<f64>,
    pub degenerate: bool,
    pub warning: Option<String>,
}

/// Two-sided quantile `q` with `P(|Z| <= q) = level`.
pub fn reference_quantile(reference: Reference, level: f64, df: f64) -> Result<f64> {
    let p = (1.0 + level) / 2.0;
    let q = match reference {
        Reference::Normal => Normal::standard().inverse_cdf(p),
        Reference::StudentT => StudentsT::new(0.0, 1.0, df)
            .map_err(|e| Error::InvalidParameter(e.to_string()))?
            .inverse_cdf(p),
    };
    Ok(q)
}

/// Pseudovalue interval `point ± q Ŝ / √n`, optionally with the
/// standardized statistic `√n (point - θ₀) / Ŝ` for a null value `θ₀`.
pub fn pseudovalue_inference<D, S>(
    data: &D,
    stat: &S,
    level: f64,
    reference: Reference,
    null_value: Option<f64>,
) -> Result<PseudovalueInference>
where
    D: Observations,
    S: Estimator<D> + ?Sized,
{
    if !(level > 0.0 && level < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "confidence level must lie in (0, 1), got {level}"
        )));
    }
    require_len(data, 3)?;
    let ps = pseudovalues(data, stat)?;
    let n = ps.len() as f64;
    let point = numeric::mean(&ps);
    let spread = numeric::unbiased_sd(&ps);
    let quantile = reference_quantile(reference, level, n - 1.0)?;

    if spread == 0.0 {
        return Ok(PseudovalueInference {
            point,
            spread,
            level,
            interval: (point, point),
            quantile,
            reference,
            null_value,
            statistic: None,
            degenerate: true,
            warning: Some("pseudovalues are all equal; interval has zero width".into()),
        });
    }

    let half = quantile * spread / n.sqrt();
    Ok(PseudovalueInference {
        point,
        spread,
        level,
        interval: (point - half, point + half),
        quantile,
        reference,
        null_value,
        statistic: null_value.map(|theta0| n.sqrt() * (point - theta0) / spread),
        degenerate: false,
        warning: None,
    })
}
