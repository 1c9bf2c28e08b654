//! Validated samples of strictly positive observations.

use crate::error::{Error, Result};

/// A sorted sample of at least two finite, strictly positive observations.
///
/// Ties are allowed. Sorting is stable, so tied values keep the ordered
/// weights of the positions they land in.
#[derive(Debug, Clone, PartialEq)]
pub struct PositiveSample {
    values: Vec<f64>,
}

impl PositiveSample {
    pub const MIN_LEN: usize = 2;

    /// Validates and sorts `values`.
    pub fn new(mut values: Vec<f64>) -> Result<Self> {
        if let Some((index, &value)) = values
            .iter()
            .enumerate()
            .find(|(_, v)| !(v.is_finite() && **v > 0.0))
        {
            return Err(Error::InvalidObservation { index, value });
        }
        if values.len() < Self::MIN_LEN {
            return Err(Error::SampleTooSmall {
                n: values.len(),
                min: Self::MIN_LEN,
            });
        }
        values.sort_by(f64::total_cmp);
        Ok(Self { values })
    }

    pub fn from_slice(values: &[f64]) -> Result<Self> {
        Self::new(values.to_vec())
    }

    /// Order statistics, ascending.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn min(&self) -> f64 {
        self.values[0]
    }

    pub fn max(&self) -> f64 {
        self.values[self.values.len() - 1]
    }

    pub fn geometric_mean(&self) -> f64 {
        let mean_log = self.values.iter().map(|v| v.ln()).sum::<f64>() / self.len() as f64;
        mean_log.exp()
    }

    /// Sample divided by its geometric mean, so that its log-values are
    /// centred at zero.
    pub fn rescaled_by_geometric_mean(&self) -> Self {
        let g = self.geometric_mean();
        Self {
            values: self.values.iter().map(|v| v / g).collect(),
        }
    }

    /// The sample `{1/x}`, sorted.
    pub fn reciprocals(&self) -> Self {
        Self {
            values: self.values.iter().rev().map(|v| 1.0 / v).collect(),
        }
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.values
    }
}

impl TryFrom<Vec<f64>> for PositiveSample {
    type Error = Error;

    fn try_from(values: Vec<f64>) -> Result<Self> {
        Self::new(values)
    }
}
