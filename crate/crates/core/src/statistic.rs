//! Weighted L² distance between the empirical characteristic functions of
//! the sample minimum and the reciprocal sample maximum.
//!
//! For a sorted sample `x_(1) ≤ … ≤ x_(n)` the ordered weights
//!
//! ```text
//! β_m = ((n − m)/(n − 1))^(n−1),    γ_m = ((m − 1)/(n − 1))^(n−1)
//! ```
//!
//! estimate the characteristic functions of `X_(1)` and `1/X_(n)`:
//!
//! ```text
//! D_n(t) = (1/n) Σ β_m e^{i t x_(m)} − (1/n) Σ γ_l e^{i t / x_(l)}
//! ```
//!
//! and the test statistic is `T = n ∫₀^∞ |D_n(t)|² w_a(t) dt`. Expanding
//! `|D_n|²` and integrating term by term gives a double sum over kernel
//! integrals `I(b) = ∫₀^∞ cos(bt) w_a(t) dt`, which is closed-form for the
//! Laplace (`e^{−a|t|}`) and Gaussian (`e^{−at²}`) weights.

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sample::PositiveSample;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum KernelFamily {
    /// Weight `e^{−a|t|}`.
    Laplace,
    /// Weight `e^{−at²}`.
    Gaussian,
}

impl fmt::Display for KernelFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KernelFamily::Laplace => f.write_str("laplace"),
            KernelFamily::Gaussian => f.write_str("gaussian"),
        }
    }
}

/// Weight function family together with its tuning parameter `a > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelSpec {
    family: KernelFamily,
    a: f64,
}

impl KernelSpec {
    pub fn new(family: KernelFamily, a: f64) -> Result<Self> {
        if !(a.is_finite() && a > 0.0) {
            return Err(Error::Parameter(format!(
                "tuning parameter a must be finite and > 0, got {a}"
            )));
        }
        Ok(Self { family, a })
    }

    pub fn laplace(a: f64) -> Result<Self> {
        Self::new(KernelFamily::Laplace, a)
    }

    pub fn gaussian(a: f64) -> Result<Self> {
        Self::new(KernelFamily::Gaussian, a)
    }

    pub fn family(&self) -> KernelFamily {
        self.family
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    /// The weight `w_a(t)`.
    pub fn weight(&self, t: f64) -> f64 {
        match self.family {
            KernelFamily::Laplace => (-self.a * t.abs()).exp(),
            KernelFamily::Gaussian => (-self.a * t * t).exp(),
        }
    }

    /// `∫_T^∞ w_a(t) dt`, or an upper bound on it when no closed form is used.
    pub(crate) fn weight_tail_bound(&self, t: f64) -> f64 {
        match self.family {
            KernelFamily::Laplace => (-self.a * t).exp() / self.a,
            // Mills-ratio bound, valid for t > 0.
            KernelFamily::Gaussian => (-self.a * t * t).exp() / (2.0 * self.a * t),
        }
    }

    #[inline]
    fn integral_unchecked(&self, b: f64) -> f64 {
        let a = self.a;
        match self.family {
            KernelFamily::Laplace => a / (a * a + b * b),
            KernelFamily::Gaussian => 0.5 * (PI / a).sqrt() * (-b * b / (4.0 * a)).exp(),
        }
    }
}

/// `I(b) = ∫₀^∞ cos(bt) w_a(t) dt` in closed form.
pub fn kernel_integral(kernel: &KernelSpec, b: f64) -> Result<f64> {
    if !b.is_finite() {
        return Err(Error::Domain(format!(
            "kernel argument must be finite, got {b}"
        )));
    }
    Ok(kernel.integral_unchecked(b))
}

/// Ordered weights attached to `x_(m)` (beta) and to `1/x_(m)` (gamma).
#[derive(Debug, Clone, PartialEq)]
pub struct OrderedWeights {
    pub beta: Vec<f64>,
    pub gamma: Vec<f64>,
}

impl OrderedWeights {
    pub fn len(&self) -> usize {
        self.beta.len()
    }

    pub fn is_empty(&self) -> bool {
        self.beta.is_empty()
    }
}

// Shared by both weight vectors so that beta_m and gamma_{n+1-m} are the
// same floating-point expression.
#[inline]
fn ratio_power(k: usize, n: usize) -> f64 {
    let denom = (n - 1) as f64;
    (k as f64 / denom).powi((n - 1) as i32)
}

pub fn ordered_weights(n: usize) -> Result<OrderedWeights> {
    if n < 2 {
        return Err(Error::SampleTooSmall { n, min: 2 });
    }
    let beta = (1..=n).map(|m| ratio_power(n - m, n)).collect();
    let gamma = (1..=n).map(|m| ratio_power(m - 1, n)).collect();
    Ok(OrderedWeights { beta, gamma })
}

/// `D_n(t) = A_n(t) − B_n(t)`.
pub fn ecf_difference(sample: &PositiveSample, t: f64) -> Complex64 {
    let n = sample.len();
    // n >= 2 is guaranteed by PositiveSample.
    let w = ordered_weights(n).expect("valid sample size");
    ecf_difference_with(sample.values(), &w, t)
}

pub(crate) fn ecf_difference_with(x: &[f64], w: &OrderedWeights, t: f64) -> Complex64 {
    let n = x.len() as f64;
    let mut acc = Complex64::new(0.0, 0.0);
    for ((&v, &b), &g) in x.iter().zip(&w.beta).zip(&w.gamma) {
        let (s1, c1) = (t * v).sin_cos();
        let (s2, c2) = (t / v).sin_cos();
        acc.re += b * c1 - g * c2;
        acc.im += b * s1 - g * s2;
    }
    acc / n
}

/// Closed-form `T = n ∫ |D_n|² w_a` for either kernel family.
pub fn statistic(sample: &PositiveSample, kernel: &KernelSpec) -> f64 {
    let x = sample.values();
    let n = x.len();
    let w = ordered_weights(n).expect("valid sample size");
    let inv: Vec<f64> = x.iter().map(|v| 1.0 / v).collect();

    let k = |b: f64| kernel.integral_unchecked(b);

    let symmetric_sum = |weights: &[f64], pts: &[f64]| -> f64 {
        let mut diag = 0.0;
        let mut off = 0.0;
        for m in 0..n {
            let wm = weights[m];
            if wm == 0.0 {
                continue;
            }
            diag += wm * wm * k(0.0);
            for l in (m + 1)..n {
                off += wm * weights[l] * k(pts[m] - pts[l]);
            }
        }
        diag + 2.0 * off
    };

    let same_beta = symmetric_sum(&w.beta, x);
    let same_gamma = symmetric_sum(&w.gamma, &inv);

    let mut cross = 0.0;
    for (&bm, &xm) in w.beta.iter().zip(x) {
        if bm == 0.0 {
            continue;
        }
        for (&gl, &yl) in w.gamma.iter().zip(&inv) {
            cross += bm * gl * k(xm - yl);
        }
    }

    (same_beta + same_gamma - 2.0 * cross) / n as f64
}

/// `T^(1)`: Laplace weight `e^{−a|t|}`.
pub fn statistic_t1(sample: &PositiveSample, a: f64) -> Result<f64> {
    Ok(statistic(sample, &KernelSpec::laplace(a)?))
}

/// `T^(2)`: Gaussian weight `e^{−at²}`, including the `½√(π/a)` factor of
/// the kernel integral.
pub fn statistic_t2(sample: &PositiveSample, a: f64) -> Result<f64> {
    Ok(statistic(sample, &KernelSpec::gaussian(a)?))
}
