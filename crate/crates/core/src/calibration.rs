//! Bootstrap calibration: warp-speed rejection rates for simulation
//! studies and parametric-bootstrap p-values for a single data set.
//!
//! Every replication owns its random stream, keyed by its index, so
//! results are identical whatever the number of worker threads.

use rayon::prelude::*;
use serde::Serialize;

use crate::distributions::{DistributionSpec, RngStream};
use crate::error::{Error, Result};
use crate::procedure::{GeometricMeanRescaled, Procedure, RejectionSide, Statistic};
use crate::sample::PositiveSample;

/// Smallest replication count accepted for Monte Carlo or bootstrap loops.
pub const MIN_REPLICATIONS: usize = 100;

/// Order-statistic (type 1) quantile: the `⌈qM⌉`-th smallest value.
pub fn empirical_quantile(values: &[f64], q: f64) -> Result<f64> {
    if values.is_empty() {
        return Err(Error::Config("quantile of an empty list".into()));
    }
    if !(q > 0.0 && q < 1.0) {
        return Err(Error::Config(format!(
            "quantile level must be in (0, 1), got {q}"
        )));
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    Ok(quantile_sorted(&sorted, q))
}

fn quantile_sorted(sorted: &[f64], q: f64) -> f64 {
    let m = sorted.len();
    // The epsilon absorbs representation error in products like 0.95 * 100.
    let rank = ((q * m as f64) - 1e-9).ceil().max(1.0) as usize;
    sorted[rank.min(m) - 1]
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CalibrationConfig {
    pub mc_replications: usize,
    /// Distribution the bootstrap samples are drawn from.
    pub bootstrap_null: DistributionSpec,
    pub alphas: Vec<f64>,
    pub rejection_side: RejectionSide,
}

impl CalibrationConfig {
    pub fn new(bootstrap_null: DistributionSpec, rejection_side: RejectionSide) -> Self {
        Self {
            mc_replications: 10_000,
            bootstrap_null,
            alphas: vec![0.05, 0.01],
            rejection_side,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.mc_replications < MIN_REPLICATIONS {
            return Err(Error::Config(format!(
                "at least {MIN_REPLICATIONS} Monte Carlo replications are required, got {}",
                self.mc_replications
            )));
        }
        if self.alphas.is_empty() {
            return Err(Error::Config("no significance levels given".into()));
        }
        for &alpha in &self.alphas {
            if !(alpha > 0.0 && alpha < 1.0) {
                return Err(Error::Config(format!(
                    "alpha must be in (0, 1), got {alpha}"
                )));
            }
            if (self.mc_replications as f64) * alpha < 5.0 {
                return Err(Error::Config(format!(
                    "{} replications cannot resolve the {} quantile (need MC * alpha >= 5)",
                    self.mc_replications,
                    1.0 - alpha
                )));
            }
        }
        self.bootstrap_null.validate()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RateEstimate {
    pub alpha: f64,
    pub critical_value: f64,
    pub rate: f64,
}

/// Paired draws of one warp-speed run: the statistic on each data sample
/// and on its companion bootstrap sample, already mapped through the
/// rejection side.
#[derive(Debug, Clone, PartialEq)]
pub struct WarpSpeedDraws {
    pub data_scores: Vec<f64>,
    pub bootstrap_scores: Vec<f64>,
}

impl WarpSpeedDraws {
    /// Rejection rate `(1/MC) Σ I(T_j > c*_α)` at each level, where `c*_α`
    /// is the `(1 − α)` quantile of the pooled bootstrap statistics.
    pub fn rates(&self, alphas: &[f64]) -> Vec<RateEstimate> {
        let mut sorted = self.bootstrap_scores.clone();
        sorted.sort_by(f64::total_cmp);
        let mc = self.data_scores.len() as f64;
        alphas
            .iter()
            .map(|&alpha| {
                let critical_value = quantile_sorted(&sorted, 1.0 - alpha);
                let exceed = self
                    .data_scores
                    .iter()
                    .filter(|&&t| t > critical_value)
                    .count();
                RateEstimate {
                    alpha,
                    critical_value,
                    rate: exceed as f64 / mc,
                }
            })
            .collect()
    }
}

/// Runs the warp-speed loop: replication `j` draws a data sample on stream
/// `2j` and a single bootstrap sample on stream `2j + 1`.
pub fn warp_speed_draws<S: Statistic + ?Sized>(
    data_source: &DistributionSpec,
    statistic: &S,
    n: usize,
    config: &CalibrationConfig,
    seed: u64,
) -> Result<WarpSpeedDraws> {
    config.validate()?;
    data_source.validate()?;
    let side = config.rejection_side;
    let pairs = (0..config.mc_replications as u64)
        .into_par_iter()
        .map(|j| -> Result<(f64, f64)> {
            let mut rng = RngStream::new(seed, 2 * j).rng();
            let data = data_source.sample(n, &mut rng)?;
            let mut rng = RngStream::new(seed, 2 * j + 1).rng();
            let boot = config.bootstrap_null.sample(n, &mut rng)?;
            Ok((
                side.score(statistic.evaluate(&data)?),
                side.score(statistic.evaluate(&boot)?),
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    let (data_scores, bootstrap_scores) = pairs.into_iter().unzip();
    Ok(WarpSpeedDraws {
        data_scores,
        bootstrap_scores,
    })
}

/// Warp-speed rejection rate at each configured level.
pub fn warp_speed_rate<S: Statistic + ?Sized>(
    data_source: &DistributionSpec,
    statistic: &S,
    n: usize,
    config: &CalibrationConfig,
    seed: u64,
) -> Result<Vec<RateEstimate>> {
    let draws = warp_speed_draws(data_source, statistic, n, config, seed)?;
    Ok(draws.rates(&config.alphas))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Decision {
    Reject,
    FailToReject,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BootstrapSettings {
    pub replications: usize,
    pub null: DistributionSpec,
    pub alpha: f64,
    pub seed: u64,
    /// Divide the observed sample and every bootstrap sample by its own
    /// geometric mean before evaluating the statistic.
    pub rescale_geometric_mean: bool,
}

impl BootstrapSettings {
    pub fn new(null: DistributionSpec, seed: u64) -> Self {
        Self {
            replications: 1000,
            null,
            alpha: 0.05,
            seed,
            rescale_geometric_mean: false,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.replications < MIN_REPLICATIONS {
            return Err(Error::Config(format!(
                "at least {MIN_REPLICATIONS} bootstrap replications are required, got {}",
                self.replications
            )));
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(Error::Config(format!(
                "alpha must be in (0, 1), got {}",
                self.alpha
            )));
        }
        self.null.validate()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BootstrapOutcome {
    pub statistic: f64,
    pub p_value: f64,
    pub critical_value: f64,
    pub decision: Decision,
}

/// Parametric bootstrap for one sample with an arbitrary statistic.
///
/// `p = (1 + #{s(T*_b) ≥ s(T_obs)}) / (B + 1)` where `s` is the rejection
/// side's score; the decision compares `s(T_obs)` against the `(1 − α)`
/// quantile of the bootstrap scores.
pub fn bootstrap_pvalue_with<S: Statistic + ?Sized>(
    sample: &PositiveSample,
    statistic: &S,
    side: RejectionSide,
    settings: &BootstrapSettings,
) -> Result<BootstrapOutcome> {
    settings.validate()?;
    let n = sample.len();
    let observed = statistic.evaluate(sample)?;
    let observed_score = side.score(observed);

    let mut scores = (0..settings.replications as u64)
        .into_par_iter()
        .map(|b| -> Result<f64> {
            let mut rng = RngStream::new(settings.seed, b).rng();
            let boot = settings.null.sample(n, &mut rng)?;
            Ok(side.score(statistic.evaluate(&boot)?))
        })
        .collect::<Result<Vec<_>>>()?;

    let at_least = scores.iter().filter(|&&s| s >= observed_score).count();
    let p_value = (1 + at_least) as f64 / (settings.replications + 1) as f64;
    scores.sort_by(f64::total_cmp);
    let critical_value = quantile_sorted(&scores, 1.0 - settings.alpha);
    let decision = if observed_score > critical_value {
        Decision::Reject
    } else {
        Decision::FailToReject
    };
    Ok(BootstrapOutcome {
        statistic: observed,
        p_value,
        critical_value,
        decision,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TestResult {
    pub test: String,
    pub a: Option<f64>,
    pub n: usize,
    pub statistic: f64,
    pub p_value: f64,
    pub critical_value: f64,
    pub alpha: f64,
    pub decision: Decision,
    pub rejection_side: RejectionSide,
    pub null: DistributionSpec,
    pub bootstrap_replications: usize,
    pub seed: u64,
    pub rescaled_geometric_mean: bool,
}

/// Bootstrap p-value and decision for one of the catalogued procedures.
pub fn bootstrap_pvalue(
    sample: &PositiveSample,
    procedure: &Procedure,
    settings: &BootstrapSettings,
) -> Result<TestResult> {
    if sample.len() < procedure.min_sample_size() {
        return Err(Error::SampleTooSmall {
            n: sample.len(),
            min: procedure.min_sample_size(),
        });
    }
    let side = procedure.rejection_side();
    let outcome = if settings.rescale_geometric_mean {
        bootstrap_pvalue_with(sample, &GeometricMeanRescaled(*procedure), side, settings)?
    } else {
        bootstrap_pvalue_with(sample, procedure, side, settings)?
    };
    Ok(TestResult {
        test: procedure.name(),
        a: procedure.tuning(),
        n: sample.len(),
        statistic: outcome.statistic,
        p_value: outcome.p_value,
        critical_value: outcome.critical_value,
        alpha: settings.alpha,
        decision: outcome.decision,
        rejection_side: side,
        null: settings.null,
        bootstrap_replications: settings.replications,
        seed: settings.seed,
        rescaled_geometric_mean: settings.rescale_geometric_mean,
    })
}
