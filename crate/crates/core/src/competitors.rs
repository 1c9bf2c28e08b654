//! Point statistics of three order-statistic based tests of log-symmetry:
//! a probability-weighted-moment contrast, a U-statistic comparing ratios of
//! consecutive order statistics, and a min/max U-statistic.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sample::PositiveSample;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CompetitorSpec {
    /// Probability-weighted moments of order `beta`.
    Pwm { beta: usize },
    /// Ratios of consecutive order statistics in triples.
    RatioU,
    /// Minimum of `k` observations against the held-out one.
    MinMaxU { k: usize },
}

impl CompetitorSpec {
    pub const DEFAULT_PWM_BETA: usize = 3;
    pub const DEFAULT_MINMAX_K: usize = 3;

    pub fn min_sample_size(&self) -> usize {
        match *self {
            CompetitorSpec::Pwm { beta } => beta + 1,
            CompetitorSpec::RatioU => 4,
            CompetitorSpec::MinMaxU { k } => k + 1,
        }
    }

    pub fn evaluate(&self, sample: &PositiveSample) -> Result<f64> {
        match *self {
            CompetitorSpec::Pwm { beta } => stat_pwm(sample, beta),
            CompetitorSpec::RatioU => stat_ratio_u(sample),
            CompetitorSpec::MinMaxU { k } => stat_minmax_u(sample, k),
        }
    }
}

impl fmt::Display for CompetitorSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CompetitorSpec::Pwm { beta } => write!(f, "pwm({beta})"),
            CompetitorSpec::RatioU => f.write_str("ratio"),
            CompetitorSpec::MinMaxU { k } => write!(f, "minmax({k})"),
        }
    }
}

/// Binomial coefficient as a float; zero when `k > n`.
pub(crate) fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

fn check_size(n: usize, min: usize) -> Result<()> {
    if n < min {
        Err(Error::SampleTooSmall { n, min })
    } else {
        Ok(())
    }
}

/// `C(n, β+1)⁻¹ (β+1)⁻¹ Σ_i [C(i−1, β) x_(i) − C(n−i, β) / x_(i)]`.
pub fn stat_pwm(sample: &PositiveSample, beta: usize) -> Result<f64> {
    if beta == 0 {
        return Err(Error::Parameter("pwm order beta must be >= 1".into()));
    }
    let x = sample.values();
    let n = x.len();
    check_size(n, beta + 1)?;

    let mut upper = 0.0;
    let mut lower = 0.0;
    for (i, &v) in x.iter().enumerate() {
        // i is zero-based: C(i, β) and C(n−1−i, β).
        upper += binomial(i, beta) * v;
        lower += binomial(n - 1 - i, beta) / v;
    }
    Ok((upper - lower) / (binomial(n, beta + 1) * (beta + 1) as f64))
}

/// Average over index quadruples `i < j < k < l` of
/// `I{x_j/x_i ≤ x_l} − I{x_k/x_j ≤ x_l}`.
///
/// Indices run over the sorted sample, so `x_i ≤ x_j ≤ x_k` are already the
/// order statistics of the triple. O(n⁴).
pub fn stat_ratio_u(sample: &PositiveSample) -> Result<f64> {
    let x = sample.values();
    let n = x.len();
    check_size(n, 4)?;

    let mut count: i64 = 0;
    for i in 0..n {
        for j in (i + 1)..n {
            let lower = x[j] / x[i];
            for k in (j + 1)..n {
                let upper = x[k] / x[j];
                for &xl in &x[k + 1..] {
                    count += i64::from(lower <= xl) - i64::from(upper <= xl);
                }
            }
        }
    }
    Ok(count as f64 / binomial(n, 4))
}

/// U-statistic with kernel averaged over which of the `k + 1` subset
/// members is held out:
/// `I{min(others) ≤ x_h} − I{max(others) ≥ 1/x_h}`.
pub fn stat_minmax_u(sample: &PositiveSample, k: usize) -> Result<f64> {
    if k < 2 {
        return Err(Error::Parameter("minmax subset size k must be >= 2".into()));
    }
    let x = sample.values();
    let n = x.len();
    check_size(n, k + 1)?;

    let size = k + 1;
    let mut idx: Vec<usize> = (0..size).collect();
    let mut count: i64 = 0;
    loop {
        // Subset members are ascending, so the min and max of "all but h"
        // are the first/last members unless h is one of them.
        let first = x[idx[0]];
        let second = x[idx[1]];
        let last = x[idx[size - 1]];
        let second_last = x[idx[size - 2]];
        for (pos, &h) in idx.iter().enumerate() {
            let xh = x[h];
            let min_others = if pos == 0 { second } else { first };
            let max_others = if pos == size - 1 { second_last } else { last };
            count += i64::from(min_others <= xh) - i64::from(max_others >= 1.0 / xh);
        }

        // Next combination in lexicographic order.
        let mut p = size;
        while p > 0 && idx[p - 1] == n - size + p - 1 {
            p -= 1;
        }
        if p == 0 {
            break;
        }
        idx[p - 1] += 1;
        for q in p..size {
            idx[q] = idx[q - 1] + 1;
        }
    }
    Ok(count as f64 / (binomial(n, size) * size as f64))
}
