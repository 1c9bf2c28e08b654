//! Numerical evaluation of `n ∫₀^∞ |D_n(t)|² w_a(t) dt`.
//!
//! Used as a reference for the closed-form statistics. The integral is
//! truncated at a point where the weight tail, times the bound
//! `|D_n|² ≤ 4`, is below half the absolute tolerance, and the remaining
//! finite range is integrated with globally adaptive 15-point
//! Gauss–Kronrod.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::sample::PositiveSample;
use crate::statistic::{ecf_difference_with, ordered_weights, KernelSpec};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSettings {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_subdivisions: usize,
}

impl Default for QuadratureSettings {
    fn default() -> Self {
        Self {
            abs_tol: 1e-10,
            rel_tol: 1e-12,
            max_subdivisions: 200_000,
        }
    }
}

// Kronrod abscissae (descending, the last one is the centre) and weights,
// plus the weights of the embedded 7-point Gauss rule (odd Kronrod nodes).
#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

fn gauss_kronrod_15<F: Fn(f64) -> f64>(f: &F, lo: f64, hi: f64) -> (f64, f64) {
    let centre = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let fc = f(centre);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = half * XGK[j];
        let pair = f(centre - dx) + f(centre + dx);
        kronrod += WGK[j] * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    (kronrod * half, ((kronrod - gauss) * half).abs())
}

struct Panel {
    lo: f64,
    hi: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// Globally adaptive Gauss–Kronrod integration of `f` over `[lo, hi]`,
/// starting from `initial_panels` equal-width panels.
pub fn integrate<F: Fn(f64) -> f64>(
    f: F,
    lo: f64,
    hi: f64,
    initial_panels: usize,
    settings: &QuadratureSettings,
) -> Result<f64> {
    let panels = initial_panels.max(1);
    let width = (hi - lo) / panels as f64;
    let mut heap = BinaryHeap::with_capacity(panels * 2);
    let (mut total, mut total_err) = (0.0, 0.0);
    for i in 0..panels {
        let a = lo + i as f64 * width;
        let b = if i + 1 == panels { hi } else { a + width };
        let (value, error) = gauss_kronrod_15(&f, a, b);
        total += value;
        total_err += error;
        heap.push(Panel {
            lo: a,
            hi: b,
            value,
            error,
        });
    }

    let mut subdivisions = 0;
    while total_err > settings.abs_tol.max(settings.rel_tol * total.abs()) {
        if subdivisions >= settings.max_subdivisions {
            return Err(Error::Quadrature {
                error: total_err,
                subdivisions,
            });
        }
        let worst = heap.pop().expect("heap is never empty");
        let mid = 0.5 * (worst.lo + worst.hi);
        let (lv, le) = gauss_kronrod_15(&f, worst.lo, mid);
        let (rv, re) = gauss_kronrod_15(&f, mid, worst.hi);
        total += lv + rv - worst.value;
        total_err += le + re - worst.error;
        heap.push(Panel {
            lo: worst.lo,
            hi: mid,
            value: lv,
            error: le,
        });
        heap.push(Panel {
            lo: mid,
            hi: worst.hi,
            value: rv,
            error: re,
        });
        subdivisions += 1;
    }
    // Re-sum to shed the drift of the running updates.
    Ok(heap.iter().map(|p| p.value).sum())
}

/// Truncation point `T` such that `4n ∫_T^∞ w_a ≤ budget`.
fn truncation_point(kernel: &KernelSpec, n: usize, budget: f64) -> f64 {
    let a = kernel.a();
    let scale = 4.0 * n as f64;
    let mut t = match kernel.family() {
        crate::statistic::KernelFamily::Laplace => (scale / (a * budget)).ln() / a,
        crate::statistic::KernelFamily::Gaussian => {
            ((scale / budget).ln() / a).sqrt().max(1.0 / (2.0 * a))
        }
    };
    // Guard against rounding in the closed-form inversions.
    while scale * kernel.weight_tail_bound(t) > budget {
        t *= 1.05;
    }
    t
}

/// Reference value of the statistic by direct numerical integration of
/// `n |D_n(t)|² w_a(t)`.
pub fn statistic_quadrature(
    sample: &PositiveSample,
    kernel: &KernelSpec,
    settings: &QuadratureSettings,
) -> Result<f64> {
    if !(settings.abs_tol > 0.0 && settings.rel_tol >= 0.0) {
        return Err(Error::Parameter(
            "quadrature tolerances must be positive".into(),
        ));
    }
    let x = sample.values();
    let n = x.len();
    let weights = ordered_weights(n)?;
    let t_max = truncation_point(kernel, n, 0.5 * settings.abs_tol);

    // Highest angular frequency in |D_n|²; panels span at most half a period.
    let freq = sample.max().max(1.0 / sample.min());
    let initial = ((t_max * 2.0 * freq / PI).ceil() as usize + 1).min(1_000_000);

    let inner = QuadratureSettings {
        abs_tol: 0.5 * settings.abs_tol,
        ..*settings
    };
    let nf = n as f64;
    integrate(
        |t| nf * ecf_difference_with(x, &weights, t).norm_sqr() * kernel.weight(t),
        0.0,
        t_max,
        initial,
        &inner,
    )
}
