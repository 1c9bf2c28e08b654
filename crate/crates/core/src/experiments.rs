//! Monte Carlo studies: type-I error and power tables, and timing.

use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::calibration::{warp_speed_rate, CalibrationConfig};
use crate::distributions::{DistributionSpec, RngStream};
use crate::error::{Error, Result};
use crate::procedure::{Procedure, Statistic};
use crate::sample::PositiveSample;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum StudyMode {
    /// Bootstrap samples come from the data-generating distribution itself.
    Type1,
    /// Bootstrap samples come from the plan's power null.
    Power,
}

impl std::str::FromStr for StudyMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "type1" | "size" => Ok(Self::Type1),
            "power" => Ok(Self::Power),
            other => Err(Error::Parameter(format!(
                "unknown mode `{other}` (type1 or power)"
            ))),
        }
    }
}

pub const DEFAULT_MASTER_SEED: u64 = 20_250_101;

#[derive(Debug, Clone, PartialEq)]
pub struct SimulationPlan {
    pub tests: Vec<Procedure>,
    pub sample_sizes: Vec<usize>,
    pub alphas: Vec<f64>,
    pub distributions: Vec<DistributionSpec>,
    pub mc_replications: usize,
    pub master_seed: u64,
    /// Bootstrap null of power studies.
    pub power_null: DistributionSpec,
}

impl SimulationPlan {
    pub fn new(
        tests: Vec<Procedure>,
        sample_sizes: Vec<usize>,
        alphas: Vec<f64>,
        distributions: Vec<DistributionSpec>,
    ) -> Self {
        Self {
            tests,
            sample_sizes,
            alphas,
            distributions,
            mc_replications: 10_000,
            master_seed: DEFAULT_MASTER_SEED,
            power_null: DistributionSpec::STANDARD_LOG_NORMAL,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let empty = |what: &str| Err(Error::Config(format!("simulation plan has no {what}")));
        if self.tests.is_empty() {
            return empty("tests");
        }
        if self.sample_sizes.is_empty() {
            return empty("sample sizes");
        }
        if self.alphas.is_empty() {
            return empty("significance levels");
        }
        if self.distributions.is_empty() {
            return empty("distributions");
        }
        if let Some(&n) = self.sample_sizes.iter().find(|&&n| n < 2) {
            return Err(Error::Config(format!("sample size {n} is below 2")));
        }
        let probe = CalibrationConfig {
            mc_replications: self.mc_replications,
            bootstrap_null: self.power_null,
            alphas: self.alphas.clone(),
            rejection_side: crate::procedure::RejectionSide::UpperTail,
        };
        probe.validate()?;
        for d in &self.distributions {
            d.validate()?;
        }
        Ok(())
    }
}

/// Seed of one `(distribution, n, test)` cell, independent of plan order.
pub fn cell_seed(
    master_seed: u64,
    distribution: &DistributionSpec,
    n: usize,
    test: &Procedure,
) -> u64 {
    let key = format!("{master_seed}|{distribution}|{n}|{test}");
    let digest = Sha256::digest(key.as_bytes());
    let mut bytes = [0u8; 8];
    bytes.copy_from_slice(&digest[..8]);
    u64::from_le_bytes(bytes)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResultRow {
    pub distribution: DistributionSpec,
    pub n: usize,
    pub alpha: Option<f64>,
    pub test: String,
    pub a: Option<f64>,
    /// Rejection rate or mean seconds; the error message for a failed cell.
    pub value: std::result::Result<f64, String>,
    /// Standard deviation of the timing, for benchmark rows.
    pub std_dev: Option<f64>,
    pub mc: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TableKind {
    Rates(StudyMode),
    Timing,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Provenance {
    pub master_seed: u64,
    pub mc_replications: usize,
    pub software: String,
    pub bootstrap_null: Option<String>,
    pub note: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResultTable {
    pub kind: TableKind,
    pub columns: Vec<String>,
    pub rows: Vec<ResultRow>,
    pub provenance: Provenance,
}

fn software_version() -> String {
    format!("{} {}", env!("CARGO_PKG_NAME"), env!("CARGO_PKG_VERSION"))
}

/// One warp-speed run per `(distribution, n, test)` cell, reported at each
/// significance level. Failed cells are kept with their error message.
pub fn run_rate_table(plan: &SimulationPlan, mode: StudyMode) -> Result<ResultTable> {
    plan.validate()?;

    let mut cells = Vec::new();
    for d in &plan.distributions {
        for &n in &plan.sample_sizes {
            for t in &plan.tests {
                cells.push((*d, n, *t));
            }
        }
    }

    let results: Vec<Vec<ResultRow>> = cells
        .par_iter()
        .map(|&(dist, n, test)| {
            let seed = cell_seed(plan.master_seed, &dist, n, &test);
            let config = CalibrationConfig {
                mc_replications: plan.mc_replications,
                bootstrap_null: match mode {
                    StudyMode::Type1 => dist,
                    StudyMode::Power => plan.power_null,
                },
                alphas: plan.alphas.clone(),
                rejection_side: test.rejection_side(),
            };
            let outcome = warp_speed_rate(&dist, &test, n, &config, seed);
            plan.alphas
                .iter()
                .enumerate()
                .map(|(i, &alpha)| ResultRow {
                    distribution: dist,
                    n,
                    alpha: Some(alpha),
                    test: test.name(),
                    a: test.tuning(),
                    value: match &outcome {
                        Ok(rates) => Ok(rates[i].rate),
                        Err(e) => Err(e.to_string()),
                    },
                    std_dev: None,
                    mc: plan.mc_replications,
                    seed,
                })
                .collect()
        })
        .collect();

    Ok(ResultTable {
        kind: TableKind::Rates(mode),
        columns: plan.tests.iter().map(|t| t.to_string()).collect(),
        rows: results.into_iter().flatten().collect(),
        provenance: Provenance {
            master_seed: plan.master_seed,
            mc_replications: plan.mc_replications,
            software: software_version(),
            bootstrap_null: match mode {
                StudyMode::Type1 => None,
                StudyMode::Power => Some(plan.power_null.to_string()),
            },
            note: "warp-speed bootstrap calibration for every test; competitor statistics \
                   are two-sided on |statistic|"
                .into(),
        },
    })
}

const WARM_UP: usize = 3;

/// Mean and standard deviation of the wall-clock time of one statistic
/// evaluation, on fresh standard log-normal samples of size `n`. Sampling
/// is done before the clock starts.
pub fn run_benchmark(
    tests: &[Procedure],
    n: usize,
    repetitions: usize,
    seed: u64,
) -> Result<ResultTable> {
    if repetitions < 10 {
        return Err(Error::Config(format!(
            "benchmark needs at least 10 repetitions, got {repetitions}"
        )));
    }
    if tests.is_empty() {
        return Err(Error::Config("no tests to benchmark".into()));
    }
    let dist = DistributionSpec::STANDARD_LOG_NORMAL;
    let mut rows = Vec::with_capacity(tests.len());
    for (i, test) in tests.iter().enumerate() {
        if n < test.min_sample_size() {
            return Err(Error::SampleTooSmall {
                n,
                min: test.min_sample_size(),
            });
        }
        let mut rng = RngStream::new(seed, i as u64).rng();
        let samples: Vec<PositiveSample> = (0..repetitions + WARM_UP)
            .map(|_| dist.sample(n, &mut rng))
            .collect::<Result<_>>()?;
        for s in &samples[..WARM_UP] {
            std::hint::black_box(test.evaluate(s)?);
        }
        let mut times = Vec::with_capacity(repetitions);
        for s in &samples[WARM_UP..] {
            let start = Instant::now();
            let v = test.evaluate(std::hint::black_box(s))?;
            times.push(start.elapsed().as_secs_f64());
            std::hint::black_box(v);
        }
        let mean = times.iter().sum::<f64>() / repetitions as f64;
        let var = times.iter().map(|t| (t - mean).powi(2)).sum::<f64>() / (repetitions - 1) as f64;
        rows.push(ResultRow {
            distribution: dist,
            n,
            alpha: None,
            test: test.name(),
            a: test.tuning(),
            value: Ok(mean),
            std_dev: Some(var.sqrt()),
            mc: repetitions,
            seed,
        });
    }
    Ok(ResultTable {
        kind: TableKind::Timing,
        columns: tests.iter().map(|t| t.to_string()).collect(),
        rows,
        provenance: Provenance {
            master_seed: seed,
            mc_replications: repetitions,
            software: software_version(),
            bootstrap_null: None,
            note: "seconds per statistic evaluation, random-number generation excluded".into(),
        },
    })
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

impl ResultTable {
    pub const CSV_HEADER: [&'static str; 9] = [
        "distribution",
        "family_params",
        "n",
        "alpha",
        "test",
        "a",
        "rate_or_seconds",
        "mc",
        "seed",
    ];

    /// Looks up the value of one cell.
    pub fn value(
        &self,
        distribution: &DistributionSpec,
        n: usize,
        alpha: Option<f64>,
        test: &Procedure,
    ) -> Option<f64> {
        self.rows
            .iter()
            .find(|r| {
                r.distribution == *distribution
                    && r.n == n
                    && r.alpha == alpha
                    && r.test == test.name()
                    && r.a == test.tuning()
            })
            .and_then(|r| r.value.clone().ok())
    }

    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(Self::CSV_HEADER)?;
        for r in &self.rows {
            let value = match &r.value {
                Ok(v) => v.to_string(),
                Err(_) => "NaN".into(),
            };
            w.write_record([
                r.distribution.name().to_string(),
                r.distribution.params_string(),
                r.n.to_string(),
                fmt_opt(r.alpha),
                r.test.clone(),
                fmt_opt(r.a),
                value,
                r.mc.to_string(),
                r.seed.to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_markdown(&self) -> String {
        let mut out = String::new();
        let p = &self.provenance;
        match self.kind {
            TableKind::Rates(StudyMode::Type1) => {
                out.push_str("# Empirical type I error rates\n\n")
            }
            TableKind::Rates(StudyMode::Power) => out.push_str("# Empirical powers\n\n"),
            TableKind::Timing => out.push_str("# Mean time per statistic evaluation\n\n"),
        }
        let _ = writeln!(out, "- software: {}", p.software);
        let _ = writeln!(out, "- seed: {}", p.master_seed);
        match self.kind {
            TableKind::Timing => {
                let _ = writeln!(out, "- repetitions: {}", p.mc_replications);
            }
            TableKind::Rates(_) => {
                let _ = writeln!(out, "- Monte Carlo replications: {}", p.mc_replications);
            }
        }
        if let Some(null) = &p.bootstrap_null {
            let _ = writeln!(out, "- bootstrap null: {null}");
        }
        let _ = writeln!(out, "- {}\n", p.note);

        match self.kind {
            TableKind::Timing => {
                out.push_str("| test | n | mean (s) | sd (s) |\n|---|---:|---:|---:|\n");
                for r in &self.rows {
                    let label = match r.a {
                        Some(a) => format!("{}:{}", r.test, a),
                        None => r.test.clone(),
                    };
                    let mean = r
                        .value
                        .as_ref()
                        .map(|v| format!("{v:.3e}"))
                        .unwrap_or_else(|e| e.clone());
                    let sd = r.std_dev.map(|v| format!("{v:.3e}")).unwrap_or_default();
                    let _ = writeln!(out, "| {label} | {} | {mean} | {sd} |", r.n);
                }
            }
            TableKind::Rates(_) => {
                let _ = write!(out, "| distribution | α | n |");
                for c in &self.columns {
                    let _ = write!(out, " {c} |");
                }
                out.push_str("\n|---|---:|---:|");
                out.push_str(&"---:|".repeat(self.columns.len()));
                out.push('\n');

                // Row groups in first-seen order.
                let mut keys: Vec<(DistributionSpec, f64, usize)> = Vec::new();
                for r in &self.rows {
                    let key = (r.distribution, r.alpha.unwrap_or(f64::NAN), r.n);
                    if !keys
                        .iter()
                        .any(|k| k.0 == key.0 && k.1 == key.1 && k.2 == key.2)
                    {
                        keys.push(key);
                    }
                }
                keys.sort_by(|x, y| {
                    let dx = self.rows.iter().position(|r| r.distribution == x.0);
                    let dy = self.rows.iter().position(|r| r.distribution == y.0);
                    dx.cmp(&dy).then(y.1.total_cmp(&x.1)).then(x.2.cmp(&y.2))
                });
                for (dist, alpha, n) in keys {
                    let _ = write!(out, "| {dist} | {alpha} | {n} |");
                    for c in &self.columns {
                        let cell = self.rows.iter().find(|r| {
                            r.distribution == dist
                                && r.alpha == Some(alpha)
                                && r.n == n
                                && column_label(r) == *c
                        });
                        let text = match cell.map(|r| &r.value) {
                            Some(Ok(v)) => format!("{v:.4}"),
                            Some(Err(_)) => "failed".into(),
                            None => String::new(),
                        };
                        let _ = write!(out, " {text} |");
                    }
                    out.push('\n');
                }
                let failures: Vec<&ResultRow> =
                    self.rows.iter().filter(|r| r.value.is_err()).collect();
                if !failures.is_empty() {
                    out.push_str("\nFailed cells:\n\n");
                    for r in failures {
                        let _ = writeln!(
                            out,
                            "- {} n={} {}: {}",
                            r.distribution,
                            r.n,
                            column_label(r),
                            r.value.as_ref().unwrap_err()
                        );
                    }
                }
            }
        }
        out
    }

    /// Writes `<prefix>.csv` and `<prefix>.md`; returns both paths.
    pub fn write_files(&self, prefix: &Path) -> Result<(PathBuf, PathBuf)> {
        if let Some(parent) = prefix.parent().filter(|p| !p.as_os_str().is_empty()) {
            fs::create_dir_all(parent)?;
        }
        let csv_path = prefix.with_extension("csv");
        let md_path = prefix.with_extension("md");
        self.write_csv(fs::File::create(&csv_path)?)?;
        fs::write(&md_path, self.to_markdown())?;
        Ok((csv_path, md_path))
    }
}

fn column_label(r: &ResultRow) -> String {
    match r.a {
        Some(a) => format!("{}:{}", r.test, a),
        None => r.test.clone(),
    }
}
