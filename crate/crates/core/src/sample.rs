//! Observation containers shared by every engine.
//!
//! Both containers are immutable once built. Engines never touch the raw
//! values directly; they go through [`Observations`], which knows how to
//! drop an observation or assemble a resample from indices.

use serde::Serialize;

use crate::error::{Error, Result};

/// A data set that can be resampled by observation index.
pub trait Observations: Sized + Sync {
    fn len(&self) -> usize;

    fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Builds a new data set from the observations at `indices`, in that
    /// order. Indices may repeat.
    fn gather(&self, indices: &[usize]) -> Self;

    /// The data set with observation `index` removed, order preserved.
    fn without(&self, index: usize) -> Self {
        let keep: Vec<usize> = (0..self.len()).filter(|&i| i != index).collect();
        self.gather(&keep)
    }

    /// The data set with every observation in the sorted `deleted` set
    /// removed, order preserved.
    fn without_all(&self, deleted: &[usize]) -> Self {
        let mut keep = Vec::with_capacity(self.len() - deleted.len());
        let mut next = deleted.iter().peekable();
        for i in 0..self.len() {
            if next.peek() == Some(&&i) {
                next.next();
            } else {
                keep.push(i);
            }
        }
        self.gather(&keep)
    }

    /// Realizes a resampling count vector: observation `i` appears
    /// `counts[i]` times, in index order.
    fn replicate_counts(&self, counts: &[u32]) -> Self {
        let mut indices = Vec::with_capacity(self.len());
        for (i, &c) in counts.iter().enumerate() {
            indices.extend(std::iter::repeat_n(i, c as usize));
        }
        self.gather(&indices)
    }
}

fn check_finite(values: &[f64], offset: usize) -> Result<()> {
    match values.iter().position(|v| !v.is_finite()) {
        Some(i) => Err(Error::NonFinite {
            index: offset + i,
            value: values[i],
        }),
        None => Ok(()),
    }
}

/// An ordered, non-empty list of finite observations.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct Sample {
    values: Vec<f64>,
}

impl Sample {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptySample);
        }
        check_finite(&values, 0)?;
        Ok(Self { values })
    }

    pub(crate) fn from_trusted(values: Vec<f64>) -> Self {
        debug_assert!(!values.is_empty());
        Self { values }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    /// Every observation shifted by `c`.
    pub fn shifted(&self, c: f64) -> Result<Self> {
        Self::new(self.values.iter().map(|v| v + c).collect())
    }
}

impl TryFrom<Vec<f64>> for Sample {
    type Error = Error;

    fn try_from(values: Vec<f64>) -> Result<Self> {
        Self::new(values)
    }
}

impl Observations for Sample {
    fn len(&self) -> usize {
        self.values.len()
    }

    fn gather(&self, indices: &[usize]) -> Self {
        Self::from_trusted(indices.iter().map(|&i| self.values[i]).collect())
    }

    fn without(&self, index: usize) -> Self {
        let mut values = Vec::with_capacity(self.values.len() - 1);
        values.extend_from_slice(&self.values[..index]);
        values.extend_from_slice(&self.values[index + 1..]);
        Self::from_trusted(values)
    }
}

/// Paired observations `(x_i, y_i)`; at least two pairs.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairedSample {
    xs: Vec<f64>,
    ys: Vec<f64>,
}

impl PairedSample {
    pub fn new(xs: Vec<f64>, ys: Vec<f64>) -> Result<Self> {
        if xs.len() != ys.len() {
            return Err(Error::LengthMismatch {
                xs: xs.len(),
                ys: ys.len(),
            });
        }
        if xs.len() < 2 {
            return Err(Error::TooFewObservations {
                what: "a paired sample",
                required: 2,
                actual: xs.len(),
            });
        }
        check_finite(&xs, 0)?;
        check_finite(&ys, 0)?;
        Ok(Self { xs, ys })
    }

    pub fn xs(&self) -> &[f64] {
        &self.xs
    }

    pub fn ys(&self) -> &[f64] {
        &self.ys
    }

    /// The pairs `(x_i, y_{perm[i]})`: only the second column moves.
    pub fn with_ys_permuted(&self, perm: &[usize]) -> Self {
        debug_assert_eq!(perm.len(), self.ys.len());
        Self {
            xs: self.xs.clone(),
            ys: perm.iter().map(|&j| self.ys[j]).collect(),
        }
    }

    /// Applies the same reordering to both columns.
    pub fn relabeled(&self, perm: &[usize]) -> Self {
        self.gather(perm)
    }
}

impl Observations for PairedSample {
    fn len(&self) -> usize {
        self.xs.len()
    }

    // Resamples of pairs may legitimately have fewer than two pairs
    // (delete-d on tiny inputs); statistics report that themselves.
    fn gather(&self, indices: &[usize]) -> Self {
        Self {
            xs: indices.iter().map(|&i| self.xs[i]).collect(),
            ys: indices.iter().map(|&i| self.ys[i]).collect(),
        }
    }
}

/// Either kind of input, as read from a file.
#[derive(Debug, Clone, PartialEq)]
pub enum Dataset {
    Univariate(Sample),
    Paired(PairedSample),
}

impl Dataset {
    pub fn len(&self) -> usize {
        match self {
            Dataset::Univariate(s) => s.len(),
            Dataset::Paired(p) => p.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}
