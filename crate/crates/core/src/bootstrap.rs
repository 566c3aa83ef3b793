//! Bootstrap standard errors, exact enumeration of the resampling simplex,
//! and the linear (jackknife hyperplane) approximation to a statistic.
//!
//! A resample of `n` observations is identified by its count vector
//! `counts` (how often each original observation was drawn). Its
//! probability under plain with-replacement sampling is the multinomial
//! weight `n! / Π counts_i! · n^-n`. Enumerating every count vector gives
//! the ideal bootstrap distribution exactly.

use rand::Rng;
use serde::Serialize;

use crate::combinatorics::{binomial, check_cap, factorial, Compositions};
use crate::error::{Error, Result};
use crate::exec;
use crate::jackknife::jackknife;
use crate::numeric;
use crate::rng::SeededStream;
use crate::sample::Observations;
use crate::statistic::Estimator;

/// Largest number of resampling vectors an exact computation will visit.
pub const ENUMERATION_CAP: u64 = 10_000_000;

/// Vectors evaluated per parallel batch during exact enumeration.
const BATCH: usize = 1 << 14;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BootstrapReport {
    pub b: usize,
    pub theta_hat: f64,
    pub replicate_values: Vec<f64>,
    pub se: f64,
    pub seed: u64,
    pub stream_id: u64,
}

/// Monte Carlo bootstrap standard error `{(1/B) Σ (θ̂_b - θ̂)²}^½`, centred
/// on the full-sample statistic. Resample `b` draws its indices from
/// `stream.derive(b)`.
pub fn bootstrap_se<D, S>(data: &D, stat: &S, b: usize, stream: SeededStream) -> Result<BootstrapReport>
where
    D: Observations,
    S: Estimator<D> + ?Sized,
{
    let n = data.len();
    if n < 2 {
        return Err(Error::TooFewObservations {
            what: "the bootstrap",
            required: 2,
            actual: n,
        });
    }
    if b < 2 {
        return Err(Error::InvalidParameter(format!(
            "the bootstrap needs at least 2 resamples, got {b}"
        )));
    }
    let theta_hat = stat.estimate(data)?;
    let replicate_values = exec::try_map_range(b, |i| {
        let mut rng = stream.derive(i as u64).rng();
        let indices: Vec<usize> = (0..n).map(|_| rng.random_range(0..n)).collect();
        stat.estimate(&data.gather(&indices))
    })?;
    let se = (numeric::sum_sq_dev(&replicate_values, theta_hat) / b as f64).sqrt();
    Ok(BootstrapReport {
        b,
        theta_hat,
        replicate_values,
        se,
        seed: stream.seed,
        stream_id: stream.stream_id,
    })
}

/// Number of distinct with-replacement resamples of `n` observations,
/// `C(2n - 1, n)`; `None` if it does not fit in 128 bits.
pub fn exact_bootstrap_count(n: u64) -> Option<u128> {
    if n == 0 {
        return None;
    }
    binomial(2 * n - 1, n)
}

/// A point of the resampling simplex with its multinomial weight.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResamplingVector {
    pub counts: Vec<u32>,
    pub probability: f64,
}

impl ResamplingVector {
    /// Resampling proportions `counts / n`.
    pub fn proportions(&self) -> Vec<f64> {
        let n = self.counts.len() as f64;
        self.counts.iter().map(|&c| f64::from(c) / n).collect()
    }
}

/// Stream of every resampling vector for a sample of size `n`, starting at
/// `(n, 0, ..., 0)` in descending lexicographic order.
#[derive(Debug, Clone)]
pub struct ResamplingVectors {
    compositions: Compositions,
    n_factorial: u128,
    n_pow_n: f64,
    factorials: Vec<u128>,
}

impl Iterator for ResamplingVectors {
    type Item = ResamplingVector;

    fn next(&mut self) -> Option<ResamplingVector> {
        let counts = self.compositions.next()?;
        let denom: u128 = counts.iter().map(|&c| self.factorials[c as usize]).product();
        // Both the coefficient and n^n are exact in f64 for n within the cap.
        let probability = (self.n_factorial / denom) as f64 / self.n_pow_n;
        Some(ResamplingVector { counts, probability })
    }
}

fn resampling_vector_count(n: usize) -> Result<usize> {
    if n == 0 {
        return Err(Error::EmptySample);
    }
    check_cap(
        exact_bootstrap_count(n as u64),
        ENUMERATION_CAP,
        "exact enumeration is limited to n <= 13; use the Monte Carlo bootstrap",
    )
}

pub fn enumerate_resampling_vectors(n: usize) -> Result<ResamplingVectors> {
    resampling_vector_count(n)?;
    Ok(ResamplingVectors {
        compositions: Compositions::new(n as u32, n),
        n_factorial: factorial(n as u64).expect("n <= 13"),
        n_pow_n: (n as f64).powi(n as i32),
        factorials: (0..=n as u64).map(|k| factorial(k).expect("k <= 13")).collect(),
    })
}

/// Probability-weighted mean and variance, folded in enumeration order with
/// West's weighted update.
#[derive(Debug, Clone, Copy, Default)]
struct WeightedMoments {
    weight: f64,
    mean: f64,
    m2: f64,
}

impl WeightedMoments {
    fn push(&mut self, w: f64, x: f64) {
        if w == 0.0 {
            return;
        }
        self.weight += w;
        let delta = x - self.mean;
        self.mean += delta * w / self.weight;
        self.m2 += w * delta * (x - self.mean);
    }

    fn variance(&self) -> f64 {
        (self.m2 / self.weight).max(0.0)
    }
}

/// Folds `f(vector)` over the whole simplex. Values are computed in
/// parallel batches but accumulated strictly in enumeration order.
fn exact_moments_of<F>(n: usize, f: F) -> Result<(f64, f64)>
where
    F: Fn(&ResamplingVector) -> Result<f64> + Sync + Send,
{
    let mut vectors = enumerate_resampling_vectors(n)?;
    let mut acc = WeightedMoments::default();
    loop {
        let batch: Vec<ResamplingVector> = vectors.by_ref().take(BATCH).collect();
        if batch.is_empty() {
            break;
        }
        let values = exec::try_map_slice(&batch, &f)?;
        for (v, x) in batch.iter().zip(values) {
            acc.push(v.probability, x);
        }
    }
    Ok((acc.mean, acc.variance()))
}

/// Exact bootstrap mean and variance of the statistic over all resamples.
pub fn exact_bootstrap_moments<D, S>(data: &D, stat: &S) -> Result<(f64, f64)>
where
    D: Observations,
    S: Estimator<D> + ?Sized,
{
    exact_moments_of(data.len(), |v| stat.estimate(&data.replicate_counts(&v.counts)))
}

/// The hyperplane `T(P) = c0 + (P - P⁰)ᵀ U` through the `n` jackknife
/// points `(P_(i), θ̂_(i))`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HyperplaneFit {
    pub c0: f64,
    pub u: Vec<f64>,
}

impl HyperplaneFit {
    pub fn n(&self) -> usize {
        self.u.len()
    }

    /// Evaluates the hyperplane at resampling proportions `p`.
    pub fn eval(&self, p: &[f64]) -> f64 {
        let p0 = 1.0 / self.n() as f64;
        self.c0 + numeric::sum(p.iter().zip(&self.u).map(|(pi, ui)| (pi - p0) * ui))
    }

    /// Evaluates at the proportions of a count vector.
    pub fn eval_counts(&self, counts: &[u32]) -> f64 {
        self.c0 + self.offset_counts(counts)
    }

    /// `T(P) - c0` at the proportions of a count vector.
    pub fn offset_counts(&self, counts: &[u32]) -> f64 {
        let n = self.n() as f64;
        numeric::sum(counts.iter().zip(&self.u).map(|(&c, ui)| (f64::from(c) - 1.0) / n * ui))
    }

    /// The jackknife point `P_(i)`: weight `1/(n-1)` everywhere but `i`.
    pub fn jackknife_point(n: usize, i: usize) -> Vec<f64> {
        let w = 1.0 / (n - 1) as f64;
        (0..n).map(|j| if j == i { 0.0 } else { w }).collect()
    }
}

/// Solves for the hyperplane through the jackknife points.
///
/// With `U_i = (n - 1)(θ̂_(·) - θ̂_(i))` the sum of `U` is zero and
/// `(P_(i) - P⁰)ᵀ U = θ̂_(i) - θ̂_(·)`, so the intercept is the replicate
/// mean `θ̂_(·)`.
pub fn fit_linear_hyperplane<D, S>(data: &D, stat: &S) -> Result<HyperplaneFit>
where
    D: Observations,
    S: Estimator<D> + ?Sized,
{
    let report = jackknife(data, stat)?;
    let n = report.replicates.len() as f64;
    let c0 = report.replicate_mean;
    let u = report
        .replicates
        .iter()
        .map(|r| (n - 1.0) * (c0 - r))
        .collect();
    Ok(HyperplaneFit { c0, u })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TheoremCheck {
    /// Exact multinomial variance of the hyperplane, by enumeration.
    pub lhs: f64,
    /// `((n - 1)/n) · var_jack`.
    pub rhs: f64,
    /// `lhs / rhs`; absent when `rhs` is zero.
    pub ratio: Option<f64>,
    /// `UᵀU / n²`.
    pub closed_form: f64,
    pub n: usize,
}

/// Compares the exact bootstrap variance of the linearized statistic with
/// the scaled jackknife variance.
pub fn verify_hyperplane_theorem<D, S>(data: &D, stat: &S) -> Result<TheoremCheck>
where
    D: Observations,
    S: Estimator<D> + ?Sized,
{
    let n = data.len();
    resampling_vector_count(n)?;
    let jack = jackknife(data, stat)?;
    let fit = fit_linear_hyperplane(data, stat)?;
    // Centered, so tiny slopes are not absorbed into the intercept.
    let (_, lhs) = exact_moments_of(n, |v| Ok(fit.offset_counts(&v.counts)))?;
    let nf = n as f64;
    let rhs = (nf - 1.0) / nf * jack.se * jack.se;
    let closed_form = numeric::sum(fit.u.iter().map(|u| u * u)) / (nf * nf);
    Ok(TheoremCheck {
        lhs,
        rhs,
        ratio: (rhs != 0.0).then(|| lhs / rhs),
        closed_form,
        n,
    })
}
