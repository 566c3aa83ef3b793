//! Permutation tests for paired data. Only the second column is permuted.

use rand::seq::SliceRandom;
use serde::Serialize;

use crate::combinatorics::{check_cap, factorial, unrank_permutation};
use crate::error::{Error, Result};
use crate::exec;
use crate::rng::SeededStream;
use crate::sample::PairedSample;
use crate::statistic::{Estimator, Statistic};

/// Largest number of permutations the exact test will enumerate.
pub const EXACT_CAP: u64 = 10_000_000;

/// Relative slack under which two statistic values count as tied. Values
/// that are mathematically equal can differ in the last bits once the
/// summation order changes.
pub const TIE_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Alternative {
    /// `|r_π| >= |r_obs|`.
    #[default]
    TwoSided,
    /// `r_π >= r_obs`.
    Greater,
    /// `r_π <= r_obs`.
    Less,
}

impl Alternative {
    fn at_least_as_extreme(self, candidate: f64, observed: f64) -> bool {
        let slack = TIE_TOLERANCE * observed.abs().max(f64::MIN_POSITIVE);
        match self {
            Alternative::TwoSided => candidate.abs() >= observed.abs() - slack,
            Alternative::Greater => candidate >= observed - slack,
            Alternative::Less => candidate <= observed + slack,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Exact,
    MonteCarlo,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PermutationReport {
    pub statistic: Statistic,
    pub r_obs: f64,
    pub mode: Mode,
    pub alternative: Alternative,
    /// `n!` in exact mode, `B` otherwise.
    pub draws: u64,
    /// Permutations at least as extreme as the observed one.
    pub extreme: u64,
    pub p_value: f64,
    pub seed: Option<u64>,
    pub stream_id: Option<u64>,
}

fn require_paired(stat: Statistic) -> Result<()> {
    if stat != Statistic::PearsonR {
        return Err(Error::ArityMismatch {
            statistic: stat.name(),
            expected: "paired",
        });
    }
    Ok(())
}

/// Exact test over all `n!` orderings of the second column,
/// `p = #{π : extreme} / n!`.
pub fn exact_permutation_test(
    data: &PairedSample,
    stat: Statistic,
    alternative: Alternative,
) -> Result<PermutationReport> {
    require_paired(stat)?;
    let n = data.xs().len();
    let total = check_cap(
        factorial(n as u64),
        EXACT_CAP,
        "exact permutation tests are limited to n <= 10; use --mode mc",
    )?;
    let r_obs = stat.estimate(data)?;
    let extreme = exec::count_range(total, |rank| {
        let mut perm = Vec::with_capacity(n);
        unrank_permutation(n, rank as u128, &mut perm);
        let r = stat.estimate(&data.with_ys_permuted(&perm))?;
        Ok(alternative.at_least_as_extreme(r, r_obs))
    })?;
    Ok(PermutationReport {
        statistic: stat,
        r_obs,
        mode: Mode::Exact,
        alternative,
        draws: total as u64,
        extreme,
        p_value: extreme as f64 / total as f64,
        seed: None,
        stream_id: None,
    })
}

/// Monte Carlo test with `B` uniform random orderings; permutation `b`
/// shuffles with `stream.derive(b)`. Uses `p = (1 + count) / (B + 1)`.
pub fn mc_permutation_test(
    data: &PairedSample,
    stat: Statistic,
    b: usize,
    stream: SeededStream,
    alternative: Alternative,
) -> Result<PermutationReport> {
    require_paired(stat)?;
    if b == 0 {
        return Err(Error::InvalidParameter(
            "Monte Carlo permutation test needs B >= 1".into(),
        ));
    }
    let n = data.xs().len();
    let r_obs = stat.estimate(data)?;
    let extreme = exec::count_range(b, |i| {
        let mut perm: Vec<usize> = (0..n).collect();
        perm.shuffle(&mut stream.derive(i as u64).rng());
        let r = stat.estimate(&data.with_ys_permuted(&perm))?;
        Ok(alternative.at_least_as_extreme(r, r_obs))
    })?;
    Ok(PermutationReport {
        statistic: stat,
        r_obs,
        mode: Mode::MonteCarlo,
        alternative,
        draws: b as u64,
        extreme,
        p_value: (1 + extreme) as f64 / (b + 1) as f64,
        seed: Some(stream.seed),
        stream_id: Some(stream.stream_id),
    })
}
