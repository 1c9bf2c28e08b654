//! Seedable variate generation for the null (log-symmetric) and alternative
//! families used in the simulation studies.
//!
//! Specs parse from strings of the form `name(p1,p2)`, case-insensitively.
//! A bare name selects the family's standard parameters.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use rand::distr::Open01;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Beta, ChiSquared, Distribution, Gamma, StandardNormal, StudentT};
use serde::{Serialize, Serializer};
use statrs::distribution::{ContinuousCDF, StudentsT};
use statrs::function::beta::beta_reg;
use statrs::function::erf::{erf, erfc};
use statrs::function::gamma::{gamma_lr, gamma_ur};

use crate::error::{Error, Result};
use crate::sample::PositiveSample;

/// Log-variates beyond this magnitude are redrawn so that `exp` stays
/// finite and nonzero. The truncation is symmetric, so log-symmetry about 1
/// is preserved exactly.
const MAX_ABS_LOG: f64 = 700.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DistributionSpec {
    LogNormal {
        mu: f64,
        sigma: f64,
    },
    LogLaplace {
        mu: f64,
        b: f64,
    },
    LogLogistic {
        mu: f64,
        s: f64,
    },
    LogT {
        df: f64,
    },
    LogCauchy {
        mu: f64,
        gamma: f64,
    },
    /// Shape and rate.
    Gamma {
        shape: f64,
        rate: f64,
    },
    /// Reciprocal of a `Gamma(shape, rate)` variate.
    InverseGamma {
        shape: f64,
        rate: f64,
    },
    ChiSquare {
        df: f64,
    },
    /// Lévy with location 0: density ∝ x^{−3/2} e^{−c/(2x)}.
    Levy {
        scale: f64,
    },
    Weibull {
        shape: f64,
        scale: f64,
    },
    /// Maxwell–Boltzmann: density ∝ x² e^{−x²/(2σ²)}.
    Maxwell {
        scale: f64,
    },
    /// Survival `x^{−shape}` on `[1, ∞)`.
    Pareto {
        shape: f64,
    },
    /// Reciprocal of a `Beta(alpha, beta)` variate, supported on `[1, ∞)`.
    InverseBeta {
        alpha: f64,
        beta: f64,
    },
    /// Survival `exp(−α ln x − β (ln x)²)` on `[1, ∞)`.
    Benini {
        alpha: f64,
        beta: f64,
    },
    /// Survival `(1 + θ)/(θ + x)` on `[1, ∞)`.
    TiltedPareto {
        theta: f64,
    },
}

impl DistributionSpec {
    pub const STANDARD_LOG_NORMAL: Self = Self::LogNormal {
        mu: 0.0,
        sigma: 1.0,
    };
    pub const STANDARD_LOG_LOGISTIC: Self = Self::LogLogistic { mu: 0.0, s: 1.0 };

    /// The five log-symmetric families with standard parameters.
    pub fn null_families() -> Vec<Self> {
        vec![
            Self::LogNormal {
                mu: 0.0,
                sigma: 1.0,
            },
            Self::LogLaplace { mu: 0.0, b: 1.0 },
            Self::LogLogistic { mu: 0.0, s: 1.0 },
            Self::LogT { df: 5.0 },
            Self::LogCauchy {
                mu: 0.0,
                gamma: 1.0,
            },
        ]
    }

    /// The ten alternatives with the parameters of the power tables.
    pub fn alternative_families() -> Vec<Self> {
        vec![
            Self::Gamma {
                shape: 2.0,
                rate: 1.0,
            },
            Self::InverseGamma {
                shape: 2.0,
                rate: 1.0,
            },
            Self::ChiSquare { df: 3.0 },
            Self::Levy { scale: 2.0 },
            Self::Weibull {
                shape: 2.0,
                scale: 1.0,
            },
            Self::Maxwell { scale: 2.0 },
            Self::Pareto { shape: 1.0 },
            Self::InverseBeta {
                alpha: 0.6,
                beta: 1.0,
            },
            Self::Benini {
                alpha: 1.0,
                beta: 0.1,
            },
            Self::TiltedPareto { theta: 1.0 },
        ]
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::LogNormal { .. } => "lognormal",
            Self::LogLaplace { .. } => "loglaplace",
            Self::LogLogistic { .. } => "loglogistic",
            Self::LogT { .. } => "logt",
            Self::LogCauchy { .. } => "logcauchy",
            Self::Gamma { .. } => "gamma",
            Self::InverseGamma { .. } => "invgamma",
            Self::ChiSquare { .. } => "chisq",
            Self::Levy { .. } => "levy",
            Self::Weibull { .. } => "weibull",
            Self::Maxwell { .. } => "maxwell",
            Self::Pareto { .. } => "pareto",
            Self::InverseBeta { .. } => "invbeta",
            Self::Benini { .. } => "benini",
            Self::TiltedPareto { .. } => "tiltedpareto",
        }
    }

    pub fn params(&self) -> Vec<f64> {
        match *self {
            Self::LogNormal { mu, sigma } => vec![mu, sigma],
            Self::LogLaplace { mu, b } => vec![mu, b],
            Self::LogLogistic { mu, s } => vec![mu, s],
            Self::LogT { df } => vec![df],
            Self::LogCauchy { mu, gamma } => vec![mu, gamma],
            Self::Gamma { shape, rate } | Self::InverseGamma { shape, rate } => vec![shape, rate],
            Self::ChiSquare { df } => vec![df],
            Self::Levy { scale } | Self::Maxwell { scale } => vec![scale],
            Self::Weibull { shape, scale } => vec![shape, scale],
            Self::Pareto { shape } => vec![shape],
            Self::InverseBeta { alpha, beta } | Self::Benini { alpha, beta } => vec![alpha, beta],
            Self::TiltedPareto { theta } => vec![theta],
        }
    }

    /// Comma-separated parameter list, as it appears inside the parentheses.
    pub fn params_string(&self) -> String {
        self.params()
            .iter()
            .map(|p| p.to_string())
            .collect::<Vec<_>>()
            .join(",")
    }

    pub fn is_log_symmetric(&self) -> bool {
        matches!(
            self,
            Self::LogNormal { .. }
                | Self::LogLaplace { .. }
                | Self::LogLogistic { .. }
                | Self::LogT { .. }
                | Self::LogCauchy { .. }
        )
    }

    fn from_parts(name: &str, p: &[f64]) -> Result<Self> {
        let want = |count: usize| -> Result<()> {
            if p.len() == count {
                Ok(())
            } else {
                Err(Error::Parameter(format!(
                    "{name} takes {count} parameter(s), got {}",
                    p.len()
                )))
            }
        };
        let spec = match name {
            "lognormal" | "ln" => {
                want(2)?;
                Self::LogNormal {
                    mu: p[0],
                    sigma: p[1],
                }
            }
            "loglaplace" => {
                want(2)?;
                Self::LogLaplace { mu: p[0], b: p[1] }
            }
            "loglogistic" | "ll" => {
                want(2)?;
                Self::LogLogistic { mu: p[0], s: p[1] }
            }
            "logt" => {
                want(1)?;
                Self::LogT { df: p[0] }
            }
            "logcauchy" => {
                want(2)?;
                Self::LogCauchy {
                    mu: p[0],
                    gamma: p[1],
                }
            }
            "gamma" => {
                want(2)?;
                Self::Gamma {
                    shape: p[0],
                    rate: p[1],
                }
            }
            "invgamma" | "inversegamma" => {
                want(2)?;
                Self::InverseGamma {
                    shape: p[0],
                    rate: p[1],
                }
            }
            "chisq" | "chisquare" | "chi2" => {
                want(1)?;
                Self::ChiSquare { df: p[0] }
            }
            "levy" => {
                want(1)?;
                Self::Levy { scale: p[0] }
            }
            "weibull" => {
                want(2)?;
                Self::Weibull {
                    shape: p[0],
                    scale: p[1],
                }
            }
            "maxwell" => {
                want(1)?;
                Self::Maxwell { scale: p[0] }
            }
            "pareto" => {
                want(1)?;
                Self::Pareto { shape: p[0] }
            }
            "invbeta" | "inversebeta" => {
                want(2)?;
                Self::InverseBeta {
                    alpha: p[0],
                    beta: p[1],
                }
            }
            "benini" => {
                want(2)?;
                Self::Benini {
                    alpha: p[0],
                    beta: p[1],
                }
            }
            "tiltedpareto" | "tp" => {
                want(1)?;
                Self::TiltedPareto { theta: p[0] }
            }
            other => {
                return Err(Error::Parameter(format!(
                    "unknown distribution family `{other}`"
                )))
            }
        };
        spec.validate()?;
        Ok(spec)
    }

    fn standard(name: &str) -> Result<Self> {
        let all = Self::null_families()
            .into_iter()
            .chain(Self::alternative_families());
        for spec in all {
            if spec.name() == name {
                return Ok(spec);
            }
        }
        // Aliases resolve through from_parts with the canonical parameters.
        let probe = Self::from_parts(name, &[]).err();
        match probe {
            Some(Error::Parameter(msg)) if msg.starts_with("unknown") => Err(Error::Parameter(msg)),
            _ => Err(Error::Parameter(format!(
                "`{name}` needs explicit parameters, e.g. {name}(...)"
            ))),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |label: &str, v: f64| -> Result<()> {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(Error::Parameter(format!(
                    "{}: {label} must be finite and > 0, got {v}",
                    self.name()
                )))
            }
        };
        let finite = |label: &str, v: f64| -> Result<()> {
            if v.is_finite() {
                Ok(())
            } else {
                Err(Error::Parameter(format!(
                    "{}: {label} must be finite, got {v}",
                    self.name()
                )))
            }
        };
        match *self {
            Self::LogNormal { mu, sigma } => {
                finite("mu", mu)?;
                positive("sigma", sigma)
            }
            Self::LogLaplace { mu, b } => {
                finite("mu", mu)?;
                positive("b", b)
            }
            Self::LogLogistic { mu, s } => {
                finite("mu", mu)?;
                positive("s", s)
            }
            Self::LogT { df } => positive("df", df),
            Self::LogCauchy { mu, gamma } => {
                finite("mu", mu)?;
                positive("gamma", gamma)
            }
            Self::Gamma { shape, rate } | Self::InverseGamma { shape, rate } => {
                positive("shape", shape)?;
                positive("rate", rate)
            }
            Self::ChiSquare { df } => positive("df", df),
            Self::Levy { scale } | Self::Maxwell { scale } => positive("scale", scale),
            Self::Weibull { shape, scale } => {
                positive("shape", shape)?;
                positive("scale", scale)
            }
            Self::Pareto { shape } => positive("shape", shape),
            Self::InverseBeta { alpha, beta } => {
                positive("alpha", alpha)?;
                positive("beta", beta)
            }
            Self::Benini { alpha, beta } => {
                positive("alpha", alpha)?;
                positive("beta", beta)
            }
            Self::TiltedPareto { theta } => positive("theta", theta),
        }
    }

    /// One variate; redraws until it is finite and strictly positive.
    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        loop {
            let v = self.draw_once(rng);
            if v.is_finite() && v > 0.0 {
                return v;
            }
        }
    }

    fn draw_once<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let open = |rng: &mut R| -> f64 { rng.sample(Open01) };
        match *self {
            Self::LogNormal { mu, sigma } => {
                let z: f64 = rng.sample(StandardNormal);
                exp_log_variate(mu + sigma * z)
            }
            Self::LogLaplace { mu, b } => {
                let u = open(rng) - 0.5;
                exp_log_variate(mu - b * u.signum() * (1.0 - 2.0 * u.abs()).ln())
            }
            Self::LogLogistic { mu, s } => {
                let u = open(rng);
                exp_log_variate(mu + s * (u / (1.0 - u)).ln())
            }
            Self::LogT { df } => {
                let t: f64 = StudentT::new(df).expect("validated df").sample(rng);
                exp_log_variate(t)
            }
            Self::LogCauchy { mu, gamma } => {
                let u = open(rng);
                exp_log_variate(mu + gamma * (PI * (u - 0.5)).tan())
            }
            Self::Gamma { shape, rate } => Gamma::new(shape, 1.0 / rate)
                .expect("validated gamma")
                .sample(rng),
            Self::InverseGamma { shape, rate } => {
                1.0 / Gamma::new(shape, 1.0 / rate)
                    .expect("validated gamma")
                    .sample(rng)
            }
            Self::ChiSquare { df } => ChiSquared::new(df).expect("validated df").sample(rng),
            Self::Levy { scale } => {
                let z: f64 = rng.sample(StandardNormal);
                scale / (z * z)
            }
            Self::Weibull { shape, scale } => scale * (-open(rng).ln()).powf(1.0 / shape),
            Self::Maxwell { scale } => {
                let sum_sq: f64 = (0..3)
                    .map(|_| {
                        let z: f64 = rng.sample(StandardNormal);
                        z * z
                    })
                    .sum();
                scale * sum_sq.sqrt()
            }
            Self::Pareto { shape } => open(rng).powf(-1.0 / shape),
            Self::InverseBeta { alpha, beta } => {
                1.0 / Beta::new(alpha, beta).expect("validated beta").sample(rng)
            }
            Self::Benini { alpha, beta } => {
                // Solve β y² + α y = −ln U for y = ln x ≥ 0.
                let e = -open(rng).ln();
                let y = 2.0 * e / (alpha + (alpha * alpha + 4.0 * beta * e).sqrt());
                y.exp()
            }
            Self::TiltedPareto { theta } => (1.0 + theta) / open(rng) - theta,
        }
    }

    /// `n` i.i.d. variates as a sorted sample.
    pub fn sample<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> Result<PositiveSample> {
        self.validate()?;
        if n < PositiveSample::MIN_LEN {
            return Err(Error::SampleTooSmall {
                n,
                min: PositiveSample::MIN_LEN,
            });
        }
        let values = (0..n).map(|_| self.draw(rng)).collect();
        PositiveSample::new(values)
    }

    /// Distribution function, for overlays and goodness-of-fit distances.
    pub fn cdf(&self, x: f64) -> Result<f64> {
        if x.is_nan() {
            return Err(Error::Domain("cdf argument is NaN".into()));
        }
        if x <= 0.0 {
            return Ok(0.0);
        }
        if x == f64::INFINITY {
            return Ok(1.0);
        }
        let lx = x.ln();
        let p = match *self {
            Self::LogNormal { mu, sigma } => 0.5 * erfc(-(lx - mu) / (sigma * 2f64.sqrt())),
            Self::LogLaplace { mu, b } => {
                let z = (lx - mu) / b;
                if z < 0.0 {
                    0.5 * z.exp()
                } else {
                    1.0 - 0.5 * (-z).exp()
                }
            }
            Self::LogLogistic { mu, s } => logistic((lx - mu) / s),
            Self::LogT { df } => StudentsT::new(0.0, 1.0, df)
                .map_err(|e| Error::Parameter(e.to_string()))?
                .cdf(lx),
            Self::LogCauchy { mu, gamma } => 0.5 + ((lx - mu) / gamma).atan() / PI,
            Self::Gamma { shape, rate } => gamma_lr(shape, rate * x),
            Self::InverseGamma { shape, rate } => gamma_ur(shape, rate / x),
            Self::ChiSquare { df } => gamma_lr(0.5 * df, 0.5 * x),
            Self::Levy { scale } => erfc((scale / (2.0 * x)).sqrt()),
            Self::Weibull { shape, scale } => -(-(x / scale).powf(shape)).exp_m1(),
            Self::Maxwell { scale } => {
                let z = x / scale;
                erf(z / 2f64.sqrt()) - (2.0 / PI).sqrt() * z * (-0.5 * z * z).exp()
            }
            Self::Pareto { shape } => {
                if x < 1.0 {
                    0.0
                } else {
                    1.0 - x.powf(-shape)
                }
            }
            Self::InverseBeta { alpha, beta } => {
                if x <= 1.0 {
                    0.0
                } else {
                    // P(1/B ≤ x) = P(B ≥ 1/x)
                    1.0 - beta_reg(alpha, beta, 1.0 / x)
                }
            }
            Self::Benini { alpha, beta } => {
                if x < 1.0 {
                    0.0
                } else {
                    1.0 - (-alpha * lx - beta * lx * lx).exp()
                }
            }
            Self::TiltedPareto { theta } => {
                if x < 1.0 {
                    0.0
                } else {
                    1.0 - (1.0 + theta) / (theta + x)
                }
            }
        };
        Ok(p.clamp(0.0, 1.0))
    }
}

fn exp_log_variate(y: f64) -> f64 {
    if y.abs() > MAX_ABS_LOG {
        // Rejected by `draw`.
        f64::NAN
    } else {
        y.exp()
    }
}

fn logistic(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

/// Log-logistic distribution function `1/(1 + exp(−(ln x − μ)/s))`.
pub fn log_logistic_cdf(x: f64, mu: f64, s: f64) -> Result<f64> {
    if x.is_nan() || x <= 0.0 {
        return Err(Error::Domain(format!(
            "log-logistic cdf needs x > 0, got {x}"
        )));
    }
    if !(s.is_finite() && s > 0.0) || !mu.is_finite() {
        return Err(Error::Parameter(format!(
            "invalid log-logistic parameters ({mu}, {s})"
        )));
    }
    Ok(logistic((x.ln() - mu) / s))
}

impl fmt::Display for DistributionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({})", self.name(), self.params_string())
    }
}

impl FromStr for DistributionSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().to_ascii_lowercase();
        let Some(open) = s.find('(') else {
            return Self::standard(s.trim());
        };
        let name = s[..open].trim();
        let rest = s[open + 1..].trim_end();
        let Some(body) = rest.strip_suffix(')') else {
            return Err(Error::Parameter(format!(
                "missing `)` in distribution `{s}`"
            )));
        };
        let params = if body.trim().is_empty() {
            Vec::new()
        } else {
            body.split(',')
                .map(|t| {
                    t.trim().parse::<f64>().map_err(|_| {
                        Error::Parameter(format!("bad parameter `{}` in `{s}`", t.trim()))
                    })
                })
                .collect::<Result<Vec<_>>>()?
        };
        Self::from_parts(name, &params)
    }
}

impl Serialize for DistributionSpec {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// An independent random stream: one ChaCha8 generator per `(seed, stream)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RngStream {
    pub seed: u64,
    pub stream: u64,
}

impl RngStream {
    pub fn new(seed: u64, stream: u64) -> Self {
        Self { seed, stream }
    }

    pub fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream);
        rng
    }
}
