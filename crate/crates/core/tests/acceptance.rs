//! Acceptance gate. Prints one `[PASS]`/`[FAIL]` line per criterion (and
//! per sub-criterion where a criterion bundles several checks) and exits
//! non-zero if anything failed.

mod common;

use std::f64::consts::PI;
use std::time::Instant;

use logsym::calibration::warp_speed_draws;
use logsym::experiments::DEFAULT_MASTER_SEED;
use logsym::{
    bootstrap_pvalue, builtin_dataset, ordered_weights, run_benchmark, run_rate_table, statistic,
    statistic_quadrature, statistic_t1, statistic_t2, BootstrapSettings, CalibrationConfig,
    Decision, DistributionSpec, KernelSpec, PositiveSample, Procedure, QuadratureSettings,
    SimulationPlan, Statistic, StudyMode,
};
use rand::seq::SliceRandom;
use rand::Rng;

const TUNING: [f64; 4] = [0.5, 1.0, 1.5, 3.0];

// Criterion 1: |closed − quadrature| ≤ max(1e-8, 1e-6·|closed|), under a minute.
const ORACLE_ABS: f64 = 1e-8;
const ORACLE_REL: f64 = 1e-6;
const ORACLE_SECONDS: f64 = 60.0;
// Criterion 2.
const HAND_TOL: f64 = 1e-12;
const RECIPROCAL_TOL: f64 = 1e-10;
// Criterion 3.
const TYPE1_BAND: (f64, f64) = (0.040, 0.065);
const TYPE1_SECONDS: f64 = 120.0;
// Criterion 4.
const STRONG_POWER_MIN: f64 = 0.995;
const WEIBULL_POWER_MIN: f64 = 0.98;
// Criterion 5.
const GAMMA_BAND: (f64, f64) = (0.45, 0.63);
// Criterion 7.
const RATIO_SPEEDUP: f64 = 100.0;
const MINMAX_SPEEDUP: f64 = 20.0;
// Criterion 8.
const PROPERTY_CASES: usize = 1000;
const NONNEGATIVE_TOL: f64 = -1e-10;
const ANTISYMMETRY_TOL: f64 = 1e-12;

const MC: usize = 10_000;
const ALPHA: f64 = 0.05;

struct Report {
    failed: Vec<String>,
}

impl Report {
    fn line(&mut self, id: &str, pass: bool, detail: impl AsRef<str>) {
        println!(
            "[{}] {id}: {}",
            if pass { "PASS" } else { "FAIL" },
            detail.as_ref()
        );
        if !pass {
            self.failed.push(id.to_string());
        }
    }
}

fn t1() -> Procedure {
    Procedure::t1(1.0).unwrap()
}

fn rate_table(
    mode: StudyMode,
    dists: Vec<DistributionSpec>,
    sizes: Vec<usize>,
) -> logsym::ResultTable {
    let mut plan = SimulationPlan::new(vec![t1()], sizes, vec![ALPHA], dists);
    plan.mc_replications = MC;
    plan.master_seed = DEFAULT_MASTER_SEED;
    run_rate_table(&plan, mode).expect("rate table")
}

fn c1_oracle(r: &mut Report) {
    let start = Instant::now();
    let mut rng = common::rng(101);
    let q = QuadratureSettings::default();
    let (mut worst, mut failures, mut cases) = (0.0f64, 0, 0);
    for _ in 0..100 {
        let n = rng.random_range(2..=20);
        let s = PositiveSample::new(common::uniform_values(&mut rng, n, 0.05, 20.0)).unwrap();
        for a in TUNING {
            for k in [
                KernelSpec::laplace(a).unwrap(),
                KernelSpec::gaussian(a).unwrap(),
            ] {
                let closed = statistic(&s, &k);
                let quad = statistic_quadrature(&s, &k, &q).expect("quadrature");
                let diff = (closed - quad).abs();
                let allowed = ORACLE_ABS.max(ORACLE_REL * closed.abs());
                worst = worst.max(diff / allowed);
                failures += usize::from(diff > allowed);
                cases += 1;
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    r.line(
        "C1 closed form vs quadrature",
        failures == 0 && secs < ORACLE_SECONDS,
        format!("{cases} comparisons, {failures} outside tolerance, worst error/tolerance {worst:.3e}, {secs:.1} s"),
    );
}

fn c2_hand_cases(r: &mut Report) {
    let s = PositiveSample::from_slice(&[1.0, 2.0]).unwrap();
    let v1 = statistic_t1(&s, 1.0).unwrap();
    let v2 = statistic_t2(&s, 1.0).unwrap();
    let e2 = 0.5 * PI.sqrt() * (1.0 - (-1.0f64 / 16.0).exp());
    r.line(
        "C2 hand cases",
        (v1 - 0.2).abs() <= HAND_TOL && (v2 - e2).abs() <= HAND_TOL,
        format!("T1({{1,2}},1) = {v1:.15}, T2({{1,2}},1) = {v2:.15} (expected {e2:.15})"),
    );

    let mut rng = common::rng(102);
    let mut worst = 0.0f64;
    let mut fixed = vec![PositiveSample::from_slice(&[0.5, 1.0, 2.0]).unwrap()];
    fixed.extend((0..200).map(|i| common::reciprocal_symmetric(&mut rng, 1 + i % 10, i % 2 == 0)));
    for s in &fixed {
        for a in TUNING {
            worst = worst
                .max(statistic_t1(s, a).unwrap().abs())
                .max(statistic_t2(s, a).unwrap().abs());
        }
    }
    r.line(
        "C2 zero on reciprocal-symmetric samples",
        worst <= RECIPROCAL_TOL,
        format!(
            "{} samples x 4 tuning values x 2 kernels, max |T| = {worst:.3e}",
            fixed.len()
        ),
    );
}

fn c3_type1(r: &mut Report) {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .unwrap();
    let start = Instant::now();
    let ln = DistributionSpec::STANDARD_LOG_NORMAL;
    let table = pool.install(|| rate_table(StudyMode::Type1, vec![ln], vec![25]));
    let secs = start.elapsed().as_secs_f64();
    let rate = table.value(&ln, 25, Some(ALPHA), &t1()).unwrap();
    r.line(
        "C3 type I error, T1(a=1), lognormal(0,1), n=25",
        (TYPE1_BAND.0..=TYPE1_BAND.1).contains(&rate) && secs < TYPE1_SECONDS,
        format!(
            "rate {rate:.4} in [{}, {}], single-threaded {secs:.1} s",
            TYPE1_BAND.0, TYPE1_BAND.1
        ),
    );
}

fn c4_strong_power(r: &mut Report) {
    let pareto = DistributionSpec::Pareto { shape: 1.0 };
    let invbeta = DistributionSpec::InverseBeta {
        alpha: 0.6,
        beta: 1.0,
    };
    let weibull = DistributionSpec::Weibull {
        shape: 2.0,
        scale: 1.0,
    };
    let table = rate_table(StudyMode::Power, vec![pareto, invbeta, weibull], vec![25]);
    for (d, min) in [
        (pareto, STRONG_POWER_MIN),
        (invbeta, STRONG_POWER_MIN),
        (weibull, WEIBULL_POWER_MIN),
    ] {
        let rate = table.value(&d, 25, Some(ALPHA), &t1()).unwrap();
        r.line(
            &format!("C4 power {d}, n=25"),
            rate >= min,
            format!("rate {rate:.4} (need >= {min})"),
        );
    }
}

fn c5_moderate_power(r: &mut Report) {
    let gamma = DistributionSpec::Gamma {
        shape: 2.0,
        rate: 1.0,
    };
    let table = rate_table(StudyMode::Power, vec![gamma], vec![50]);
    let rate = table.value(&gamma, 50, Some(ALPHA), &t1()).unwrap();
    r.line(
        "C5 power gamma(2,1), n=50",
        (GAMMA_BAND.0..=GAMMA_BAND.1).contains(&rate),
        format!("rate {rate:.4} in [{}, {}]", GAMMA_BAND.0, GAMMA_BAND.1),
    );

    let soft = vec![
        DistributionSpec::Levy { scale: 2.0 },
        DistributionSpec::Maxwell { scale: 2.0 },
        DistributionSpec::Benini {
            alpha: 1.0,
            beta: 0.1,
        },
        DistributionSpec::TiltedPareto { theta: 1.0 },
        DistributionSpec::InverseBeta {
            alpha: 0.6,
            beta: 1.0,
        },
    ];
    let table = rate_table(StudyMode::Power, soft.clone(), vec![10, 50]);
    for d in soft {
        let r10 = table.value(&d, 10, Some(ALPHA), &t1()).unwrap();
        let r50 = table.value(&d, 50, Some(ALPHA), &t1()).unwrap();
        r.line(
            &format!("C5 power ordering {d}"),
            r50 >= r10,
            format!("rate n=10 {r10:.4}, n=50 {r50:.4}"),
        );
    }
}

fn c6_real_data(r: &mut Report) {
    let tests: Vec<Procedure> = [
        "t1:0.5", "t1:1", "t2:0.5", "t2:1", "pwm:3", "ratio", "minmax:3",
    ]
    .iter()
    .map(|t| t.parse().unwrap())
    .collect();
    for name in ["insulating-fluid", "repair-times"] {
        let sample = builtin_dataset(name).unwrap();
        let mut all_accept = true;
        let (mut rescaled, mut raw) = (Vec::new(), Vec::new());
        for t in &tests {
            let mut settings = BootstrapSettings::new(
                DistributionSpec::STANDARD_LOG_LOGISTIC,
                DEFAULT_MASTER_SEED,
            );
            settings.rescale_geometric_mean = true;
            let res = bootstrap_pvalue(&sample, t, &settings).unwrap();
            all_accept &= res.decision == Decision::FailToReject;
            rescaled.push(format!("{t}={:.3}", res.p_value));
            settings.rescale_geometric_mean = false;
            raw.push(format!(
                "{t}={:.3}",
                bootstrap_pvalue(&sample, t, &settings).unwrap().p_value
            ));
        }
        r.line(
            &format!("C6 fail-to-reject on {name}"),
            all_accept,
            format!("p-values {}", rescaled.join(" ")),
        );
        println!("       without geometric-mean rescaling: {}", raw.join(" "));
    }
}

fn c7_timing(r: &mut Report) {
    let tests = [t1(), Procedure::ratio(), Procedure::minmax(3)];
    let table = run_benchmark(&tests, 50, 20, DEFAULT_MASTER_SEED).unwrap();
    let secs: Vec<f64> = table
        .rows
        .iter()
        .map(|row| row.value.clone().unwrap())
        .collect();
    let (t, ratio, minmax) = (secs[0], secs[1], secs[2]);
    r.line(
        "C7 timing ratio/T1 at n=50",
        ratio / t >= RATIO_SPEEDUP,
        format!(
            "T1 {t:.3e} s, ratio {ratio:.3e} s, factor {:.1} (need >= {RATIO_SPEEDUP})",
            ratio / t
        ),
    );
    r.line(
        "C7 timing minmax/T1 at n=50",
        minmax / t >= MINMAX_SPEEDUP,
        format!(
            "minmax {minmax:.3e} s, factor {:.1} (need >= {MINMAX_SPEEDUP})",
            minmax / t
        ),
    );
}

fn c8_properties(r: &mut Report) {
    // Weight mirror over n = 2..=1001.
    let mut bad = 0;
    for n in 2..2 + PROPERTY_CASES {
        let w = ordered_weights(n).unwrap();
        bad += (0..n).filter(|&m| w.beta[m] != w.gamma[n - 1 - m]).count();
    }
    r.line(
        "C8 weight mirror",
        bad == 0,
        format!("{PROPERTY_CASES} sizes, {bad} mismatching entries"),
    );

    let mut rng = common::rng(108);
    let families = DistributionSpec::null_families()
        .into_iter()
        .chain(DistributionSpec::alternative_families())
        .collect::<Vec<_>>();
    let random_sample = |rng: &mut rand_chacha::ChaCha8Rng, lo: usize, hi: usize| {
        let d = families[rng.random_range(0..families.len())];
        let n = rng.random_range(lo..=hi);
        d.sample(n, rng).unwrap()
    };

    let mut min_t = f64::INFINITY;
    for _ in 0..PROPERTY_CASES {
        let s = random_sample(&mut rng, 2, 50);
        let a = TUNING[rng.random_range(0..4)];
        min_t = min_t
            .min(statistic_t1(&s, a).unwrap())
            .min(statistic_t2(&s, a).unwrap());
    }
    r.line(
        "C8 nonnegativity",
        min_t >= NONNEGATIVE_TOL,
        format!("minimum statistic {min_t:.3e}"),
    );

    let lineup = Procedure::standard_lineup();
    let mut bad = 0;
    for i in 0..PROPERTY_CASES {
        let mut v = random_sample(&mut rng, 4, 30).into_vec();
        let p = lineup[i % lineup.len()];
        let before = p
            .evaluate(&PositiveSample::new(v.clone()).unwrap())
            .unwrap();
        v.shuffle(&mut rng);
        let after = p.evaluate(&PositiveSample::new(v).unwrap()).unwrap();
        bad += usize::from(before.to_bits() != after.to_bits());
    }
    r.line(
        "C8 permutation invariance",
        bad == 0,
        format!("{PROPERTY_CASES} shuffles, {bad} differ"),
    );

    for p in [Procedure::pwm(3), Procedure::ratio(), Procedure::minmax(3)] {
        let mut bad = 0;
        let mut example = String::new();
        for _ in 0..PROPERTY_CASES {
            let s = random_sample(&mut rng, 4, 20);
            let v = p.evaluate(&s).unwrap();
            let w = p.evaluate(&s.reciprocals()).unwrap();
            if (v + w).abs() > ANTISYMMETRY_TOL * v.abs().max(1.0) {
                bad += 1;
                if example.is_empty() {
                    example = format!("; e.g. n={} gives {v:.4} and {w:.4}", s.len());
                }
            }
        }
        r.line(
            &format!("C8 reciprocal antisymmetry {p}"),
            bad == 0,
            format!("{bad}/{PROPERTY_CASES} samples not negated{example}"),
        );
    }

    let mut worst = 0.0f64;
    for i in 0..PROPERTY_CASES {
        let k = 2 + i % 2;
        let n = rng.random_range(k + 1..=8);
        let s = common::log_uniform_sample(&mut rng, n);
        let fast = Procedure::minmax(k).evaluate(&s).unwrap();
        worst = worst.max((fast - common::minmax_full_permutation(s.values(), k)).abs());
    }
    r.line(
        "C8 minmax reduction vs full permutation",
        worst <= 1e-12,
        format!("{PROPERTY_CASES} samples with n <= 8, k in {{2,3}}, max difference {worst:.3e}"),
    );

    let one = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .unwrap();
    let four = rayon::ThreadPoolBuilder::new()
        .num_threads(4)
        .build()
        .unwrap();
    let mut bad = 0;
    for i in 0..PROPERTY_CASES {
        let p = lineup[i % lineup.len()];
        let seed = rng.random::<u64>();
        let config =
            CalibrationConfig::new(DistributionSpec::STANDARD_LOG_NORMAL, p.rejection_side());
        let config = CalibrationConfig {
            mc_replications: 100,
            alphas: vec![ALPHA],
            ..config
        };
        let dist = families[i % families.len()];
        let run = || {
            let draws = warp_speed_draws(&dist, &p, 10, &config, seed).unwrap();
            let mut b = BootstrapSettings::new(DistributionSpec::STANDARD_LOG_LOGISTIC, seed);
            b.replications = 100;
            let sample = dist
                .sample(10, &mut logsym::RngStream::new(seed, u64::MAX).rng())
                .unwrap();
            let test = bootstrap_pvalue(&sample, &p, &b).unwrap();
            (draws, test.p_value.to_bits(), test.critical_value.to_bits())
        };
        bad += usize::from(one.install(run) != four.install(run));
    }
    r.line(
        "C8 seed determinism across thread counts",
        bad == 0,
        format!("{PROPERTY_CASES} seeds, 1 vs 4 threads, {bad} differ"),
    );
}

fn main() {
    let mut r = Report { failed: Vec::new() };
    let start = Instant::now();
    c1_oracle(&mut r);
    c2_hand_cases(&mut r);
    c3_type1(&mut r);
    c4_strong_power(&mut r);
    c5_moderate_power(&mut r);
    c6_real_data(&mut r);
    c7_timing(&mut r);
    c8_properties(&mut r);
    println!(
        "acceptance: {} failed ({:.0} s): {}",
        r.failed.len(),
        start.elapsed().as_secs_f64(),
        r.failed.join(", ")
    );
    if !r.failed.is_empty() {
        std::process::exit(1);
    }
}
