//! The catalogue of test procedures and the `Statistic` abstraction the
//! calibration routines are generic over.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::competitors::CompetitorSpec;
use crate::error::{Error, Result};
use crate::sample::PositiveSample;
use crate::statistic::{statistic, KernelFamily, KernelSpec};

/// Which tail of the statistic's null distribution leads to rejection.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RejectionSide {
    /// Reject for large values.
    UpperTail,
    /// Reject for large absolute values.
    TwoSidedAbsolute,
}

impl RejectionSide {
    #[inline]
    pub fn score(&self, value: f64) -> f64 {
        match self {
            RejectionSide::UpperTail => value,
            RejectionSide::TwoSidedAbsolute => value.abs(),
        }
    }
}

/// Anything that maps a sample to a real number.
pub trait Statistic: Sync {
    fn evaluate(&self, sample: &PositiveSample) -> Result<f64>;
}

impl<F> Statistic for F
where
    F: Fn(&PositiveSample) -> Result<f64> + Sync,
{
    fn evaluate(&self, sample: &PositiveSample) -> Result<f64> {
        self(sample)
    }
}

/// Evaluates the inner statistic on the sample divided by its geometric
/// mean.
#[derive(Debug, Clone, Copy)]
pub struct GeometricMeanRescaled<S>(pub S);

impl<S: Statistic> Statistic for GeometricMeanRescaled<S> {
    fn evaluate(&self, sample: &PositiveSample) -> Result<f64> {
        self.0.evaluate(&sample.rescaled_by_geometric_mean())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Procedure {
    /// `T^(1)` or `T^(2)`, depending on the kernel family.
    Fourier(KernelSpec),
    Competitor(CompetitorSpec),
}

impl Procedure {
    pub fn t1(a: f64) -> Result<Self> {
        Ok(Self::Fourier(KernelSpec::laplace(a)?))
    }

    pub fn t2(a: f64) -> Result<Self> {
        Ok(Self::Fourier(KernelSpec::gaussian(a)?))
    }

    pub fn pwm(beta: usize) -> Self {
        Self::Competitor(CompetitorSpec::Pwm { beta })
    }

    pub fn ratio() -> Self {
        Self::Competitor(CompetitorSpec::RatioU)
    }

    pub fn minmax(k: usize) -> Self {
        Self::Competitor(CompetitorSpec::MinMaxU { k })
    }

    /// The fourteen-column line-up of the simulation tables, minus the
    /// JEL/AJEL variants that share a point statistic.
    pub fn standard_lineup() -> Vec<Self> {
        let mut out = Vec::new();
        for a in [0.5, 1.0, 1.5, 3.0] {
            out.push(Self::t1(a).expect("valid a"));
        }
        for a in [0.5, 1.0, 1.5, 3.0] {
            out.push(Self::t2(a).expect("valid a"));
        }
        out.push(Self::pwm(CompetitorSpec::DEFAULT_PWM_BETA));
        out.push(Self::ratio());
        out.push(Self::minmax(CompetitorSpec::DEFAULT_MINMAX_K));
        out
    }

    /// Short name without the tuning parameter: `t1`, `t2`, `pwm(3)`, ...
    pub fn name(&self) -> String {
        match self {
            Self::Fourier(k) => match k.family() {
                KernelFamily::Laplace => "t1".into(),
                KernelFamily::Gaussian => "t2".into(),
            },
            Self::Competitor(c) => c.to_string(),
        }
    }

    pub fn tuning(&self) -> Option<f64> {
        match self {
            Self::Fourier(k) => Some(k.a()),
            Self::Competitor(_) => None,
        }
    }

    pub fn rejection_side(&self) -> RejectionSide {
        match self {
            Self::Fourier(_) => RejectionSide::UpperTail,
            Self::Competitor(_) => RejectionSide::TwoSidedAbsolute,
        }
    }

    pub fn min_sample_size(&self) -> usize {
        match self {
            Self::Fourier(_) => 2,
            Self::Competitor(c) => c.min_sample_size(),
        }
    }
}

impl Statistic for Procedure {
    fn evaluate(&self, sample: &PositiveSample) -> Result<f64> {
        match self {
            Self::Fourier(k) => Ok(statistic(sample, k)),
            Self::Competitor(c) => c.evaluate(sample),
        }
    }
}

impl fmt::Display for Procedure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.tuning() {
            Some(a) => write!(f, "{}:{}", self.name(), a),
            None => f.write_str(&self.name()),
        }
    }
}

impl FromStr for Procedure {
    type Err = Error;

    /// `t1:1`, `t2:0.5`, `pwm`, `pwm:3`, `ratio`, `minmax`, `minmax:4`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().to_ascii_lowercase();
        // `pwm(3)` is accepted as a synonym of `pwm:3`.
        let (name, arg) = match s.split_once(':') {
            Some((n, a)) => (n.trim(), Some(a.trim())),
            None => match s.strip_suffix(')').and_then(|r| r.split_once('(')) {
                Some((n, a)) => (n.trim(), Some(a.trim())),
                None => (s.as_str(), None),
            },
        };
        let float_arg = |default: f64| -> Result<f64> {
            arg.map_or(Ok(default), |a| {
                a.parse()
                    .map_err(|_| Error::Parameter(format!("bad tuning parameter `{a}` in `{s}`")))
            })
        };
        let int_arg = |default: usize| -> Result<usize> {
            arg.map_or(Ok(default), |a| {
                a.parse()
                    .map_err(|_| Error::Parameter(format!("bad integer parameter `{a}` in `{s}`")))
            })
        };
        match name {
            "t1" => Self::t1(float_arg(1.0)?),
            "t2" => Self::t2(float_arg(1.0)?),
            "pwm" => {
                let beta = int_arg(CompetitorSpec::DEFAULT_PWM_BETA)?;
                if beta == 0 {
                    return Err(Error::Parameter("pwm order must be >= 1".into()));
                }
                Ok(Self::pwm(beta))
            }
            "ratio" => match arg {
                None => Ok(Self::ratio()),
                Some(_) => Err(Error::Parameter("ratio takes no parameter".into())),
            },
            "minmax" => {
                let k = int_arg(CompetitorSpec::DEFAULT_MINMAX_K)?;
                if k < 2 {
                    return Err(Error::Parameter("minmax k must be >= 2".into()));
                }
                Ok(Self::minmax(k))
            }
            other => Err(Error::Parameter(format!(
                "unknown test `{other}` (expected t1, t2, pwm, ratio or minmax)"
            ))),
        }
    }
}
