//! Over-representation scoring of a gene list against a category.
//!
//! The Fisher exact p-value is the upper hypergeometric tail
//! `P[X >= k]`, `X ~ Hypergeom(N, K, m)`. The EASE score repeats the test
//! after taking one overlapping gene out of the list, so a category whose
//! significance hinges on a single gene is not reported as significant.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::numeric;

/// Counts of a 2×2 over-representation table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct EnrichmentTable {
    /// `N`: annotated population size.
    pub population: u64,
    /// `K`: population members in the category.
    pub category: u64,
    /// `m`: size of the gene list.
    pub list: u64,
    /// `k`: list members in the category.
    pub overlap: u64,
}

impl EnrichmentTable {
    pub fn new(population: u64, category: u64, list: u64, overlap: u64) -> Result<Self> {
        let table = Self {
            population,
            category,
            list,
            overlap,
        };
        table.validate()?;
        Ok(table)
    }

    pub fn validate(&self) -> Result<()> {
        let Self {
            population: n,
            category: k_cat,
            list: m,
            overlap: k,
        } = *self;
        if k_cat > n || m > n {
            return Err(Error::InvalidTable(format!(
                "category ({k_cat}) and list ({m}) must not exceed the population ({n})"
            )));
        }
        if k > k_cat.min(m) {
            return Err(Error::InvalidTable(format!(
                "overlap ({k}) exceeds min(category, list) = {}",
                k_cat.min(m)
            )));
        }
        if k + n < k_cat + m {
            return Err(Error::InvalidTable(format!(
                "overlap ({k}) is below the forced minimum K + m - N = {}",
                k_cat + m - n
            )));
        }
        Ok(())
    }

    /// Builds the table from gene identifier sets. The population size is
    /// supplied separately because it usually comes from an annotation
    /// database rather than a file.
    pub fn from_sets(population: u64, category: &BTreeSet<String>, list: &BTreeSet<String>) -> Result<Self> {
        let overlap = category.intersection(list).count() as u64;
        Self::new(population, category.len() as u64, list.len() as u64, overlap)
    }

    fn support(&self) -> (u64, u64) {
        let lo = (self.category + self.list).saturating_sub(self.population);
        let hi = self.category.min(self.list);
        (lo, hi)
    }
}

/// Unnormalized log pmf over the support, anchored at the mode.
///
/// Neighbouring probabilities differ by the ratio
/// `p(x+1)/p(x) = (K-x)(m-x) / ((x+1)(N-K-m+x+1))`, so walking outwards
/// from the mode keeps every log weight small and avoids the cancellation
/// of differencing huge log-factorials.
struct Weights {
    lo: u64,
    mode: u64,
    log_w: Vec<f64>,
    total: f64,
}

impl Weights {
    fn new(t: &EnrichmentTable) -> Self {
        let (lo, hi) = t.support();
        let (n, k_cat, m) = (t.population, t.category, t.list);
        let ln_ratio = |x: u64| -> f64 {
            // ln p(x+1) - ln p(x)
            ((k_cat - x) as f64).ln() + ((m - x) as f64).ln()
                - ((x + 1) as f64).ln()
                - ((n + x + 1 - k_cat - m) as f64).ln()
        };
        let mode = (((m + 1) as u128 * (k_cat + 1) as u128 / (n + 2) as u128) as u64).clamp(lo, hi);
        let len = (hi - lo + 1) as usize;
        let mut log_w = vec![0.0; len];
        let at = |x: u64| (x - lo) as usize;
        for x in mode..hi {
            log_w[at(x + 1)] = log_w[at(x)] + ln_ratio(x);
        }
        for x in (lo..mode).rev() {
            log_w[at(x)] = log_w[at(x + 1)] - ln_ratio(x);
        }
        let total = numeric::sum(log_w.iter().map(|l| l.exp()));
        Self { lo, mode, log_w, total }
    }

    /// `P[X >= k]`. Above the mode the tail is summed from the top of the
    /// support downwards, otherwise it is one minus the lower tail summed
    /// from the bottom, so tails for neighbouring `k` stay nested.
    fn upper_tail(&self, k: u64) -> f64 {
        let start = (k - self.lo) as usize;
        if k <= self.mode {
            let mut lower = 0.0;
            for l in &self.log_w[..start] {
                lower += l.exp();
            }
            return (1.0 - lower / self.total).max(0.0);
        }
        let mut tail = 0.0;
        for l in self.log_w[start..].iter().rev() {
            tail += l.exp();
        }
        if tail == 0.0 {
            // Every term underflowed; fall back to a log-sum-exp of the tail.
            let peak = self.log_w[start..].iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let scaled = numeric::sum(self.log_w[start..].iter().map(|l| (l - peak).exp()));
            return (peak + scaled.ln() - self.total.ln()).exp();
        }
        (tail / self.total).min(1.0)
    }
}

/// Hypergeometric probabilities over the whole support of the table.
pub fn hypergeometric_pmf(table: &EnrichmentTable) -> Result<Vec<(u64, f64)>> {
    table.validate()?;
    let w = Weights::new(table);
    Ok(w.log_w
        .iter()
        .enumerate()
        .map(|(i, l)| (w.lo + i as u64, l.exp() / w.total))
        .collect())
}

/// Upper tail `P[X >= k]`, `X ~ Hypergeom(N, K, m)`; monotone in `k` even
/// after rounding.
pub fn fisher_exact_over(table: &EnrichmentTable) -> Result<f64> {
    table.validate()?;
    let (lo, _) = table.support();
    if table.overlap <= lo {
        return Ok(1.0);
    }
    Ok(Weights::new(table).upper_tail(table.overlap))
}

/// Which leave-one-out table the EASE score uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EaseMode {
    /// Remove one overlapping gene from the count only: `(N, K, m, k - 1)`.
    #[default]
    Standard,
    /// Remove the gene from the list as well: `(N, K, m - 1, k - 1)`.
    Strict,
}

/// The table after one overlapping gene has been dropped.
pub fn ease_table(table: &EnrichmentTable, mode: EaseMode) -> Result<EnrichmentTable> {
    table.validate()?;
    if table.overlap == 0 {
        return Ok(*table);
    }
    let (list, overlap) = match mode {
        // At the forced minimum, k - 1 lies below the support; P[X >= lo] is the same tail.
        EaseMode::Standard => (table.list, (table.overlap - 1).max(table.support().0)),
        EaseMode::Strict => (table.list - 1, table.overlap - 1),
    };
    EnrichmentTable::new(table.population, table.category, list, overlap)
}

/// EASE score: Fisher p-value of the table with one overlap gene removed.
pub fn ease_score(table: &EnrichmentTable, mode: EaseMode) -> Result<f64> {
    fisher_exact_over(&ease_table(table, mode)?)
}

/// Worst case over every single-gene deletion from the list: dropping a
/// non-overlapping gene gives `(N, K, m - 1, k)`, dropping an overlapping
/// one gives `(N, K, m - 1, k - 1)`.
pub fn leave_one_out_worst(table: &EnrichmentTable) -> Result<f64> {
    table.validate()?;
    if table.list == 0 {
        return fisher_exact_over(table);
    }
    let mut worst = f64::NEG_INFINITY;
    if table.overlap < table.list {
        let t = EnrichmentTable::new(table.population, table.category, table.list - 1, table.overlap)?;
        worst = worst.max(fisher_exact_over(&t)?);
    }
    if table.overlap > 0 {
        let t = EnrichmentTable::new(table.population, table.category, table.list - 1, table.overlap - 1)?;
        worst = worst.max(fisher_exact_over(&t)?);
    }
    Ok(worst)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EnrichmentResult {
    pub name: String,
    pub table: EnrichmentTable,
    pub fisher_p: f64,
    pub ease: f64,
    pub mode: EaseMode,
}

/// Scores a table.
pub fn score(name: impl Into<String>, table: EnrichmentTable, mode: EaseMode) -> Result<EnrichmentResult> {
    Ok(EnrichmentResult {
        name: name.into(),
        table,
        fisher_p: fisher_exact_over(&table)?,
        ease: ease_score(&table, mode)?,
        mode,
    })
}

/// Sorts by EASE score, then Fisher p-value, then name.
pub fn rank(results: &mut [EnrichmentResult]) {
    results.sort_by(|a, b| {
        a.ease
            .total_cmp(&b.ease)
            .then(a.fisher_p.total_cmp(&b.fisher_p))
            .then_with(|| a.name.cmp(&b.name))
    });
}

/// Gene identifiers from a text file: one per line, blank lines and lines
/// starting with `#` ignored, duplicates collapsed.
pub fn parse_gene_list(text: &str) -> BTreeSet<String> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(str::to_owned)
        .collect()
}

/// Sum of the pmf over the support; used as a sanity check.
pub fn pmf_total(table: &EnrichmentTable) -> Result<f64> {
    Ok(numeric::sum(hypergeometric_pmf(table)?.into_iter().map(|(_, p)| p)))
}
