//! Reading samples from disk, the two embedded illustration datasets, and
//! descriptive summaries for plotting.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::distributions::DistributionSpec;
use crate::error::{Error, Result};
use crate::sample::PositiveSample;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DataFormat {
    /// Comma-separated values, one or several per line.
    Csv,
    /// Values separated by any whitespace.
    Whitespace,
}

impl std::str::FromStr for DataFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "csv" => Ok(Self::Csv),
            "whitespace" | "ws" | "txt" => Ok(Self::Whitespace),
            other => Err(Error::Parameter(format!(
                "unknown data format `{other}` (csv or whitespace)"
            ))),
        }
    }
}

/// Time to breakdown of an insulating fluid, in minutes.
pub const INSULATING_FLUID: [f64; 19] = [
    0.96, 4.15, 0.19, 0.78, 8.01, 31.75, 7.35, 6.50, 8.27, 33.91, 32.52, 3.16, 4.85, 2.78, 4.67,
    1.31, 12.06, 36.71, 72.89,
];

/// Active repair times of an airborne transceiver, in hours.
pub const REPAIR_TIMES: [f64; 45] = [
    0.2, 0.3, 0.5, 0.5, 0.5, 0.5, 0.6, 0.6, 0.7, 0.7, 0.7, 0.8, 0.8, 1.0, 1.0, 1.0, 1.0, 1.1, 1.3,
    1.5, 1.5, 1.5, 1.5, 2.0, 2.0, 2.2, 2.5, 3.0, 3.0, 3.3, 3.3, 4.0, 4.0, 4.5, 4.7, 5.0, 5.4, 5.4,
    7.0, 7.5, 8.8, 9.0, 10.3, 22.0, 24.5,
];

pub const BUILTIN_DATASETS: [&str; 2] = ["insulating-fluid", "repair-times"];

pub fn builtin_dataset(name: &str) -> Result<PositiveSample> {
    let values: &[f64] = match name.trim().to_ascii_lowercase().as_str() {
        "insulating-fluid" => &INSULATING_FLUID,
        "repair-times" => &REPAIR_TIMES,
        _ => {
            return Err(Error::UnknownDataset {
                name: name.to_string(),
                valid: BUILTIN_DATASETS.join(", "),
            })
        }
    };
    PositiveSample::from_slice(values)
}

/// Parses a sample. Blank lines and lines starting with `#` are skipped.
pub fn parse_dataset(text: &str, format: DataFormat, path: &Path) -> Result<PositiveSample> {
    let mut values = Vec::new();
    for (line_no, line) in text.lines().enumerate() {
        if line.trim().is_empty() || line.trim_start().starts_with('#') {
            continue;
        }
        for (column, token) in tokens(line, format) {
            let err = |message: String| Error::Parse {
                path: path.to_path_buf(),
                line: line_no + 1,
                column,
                message,
            };
            let value: f64 = token
                .parse()
                .map_err(|_| err(format!("`{token}` is not a number")))?;
            if !value.is_finite() || value <= 0.0 {
                return Err(err(format!("`{token}` is not a finite positive number")));
            }
            values.push(value);
        }
    }
    PositiveSample::new(values)
}

/// Non-empty tokens with their 1-based starting column.
fn tokens(line: &str, format: DataFormat) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    match format {
        DataFormat::Csv => {
            let mut start = 0;
            for field in line.split(',') {
                let lead = field.len() - field.trim_start().len();
                let t = field.trim();
                if !t.is_empty() {
                    out.push((start + lead + 1, t));
                }
                start += field.len() + 1;
            }
        }
        DataFormat::Whitespace => {
            let mut rest = line;
            let mut offset = 0;
            while let Some(begin) = rest.find(|c: char| !c.is_whitespace()) {
                let after = &rest[begin..];
                let len = after.find(char::is_whitespace).unwrap_or(after.len());
                out.push((offset + begin + 1, &after[..len]));
                offset += begin + len;
                rest = &after[len..];
            }
        }
    }
    out
}

pub fn load_dataset(path: &Path, format: DataFormat) -> Result<PositiveSample> {
    let text = fs::read_to_string(path)?;
    parse_dataset(&text, format, path)
}

/// One value per row, no header. Reloading with [`DataFormat::Csv`] gives
/// back the same bits.
pub fn write_sample_csv<W: Write>(sample: &PositiveSample, writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    for v in sample.values() {
        w.write_record([v.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Histogram {
    pub edges: Vec<f64>,
    pub counts: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EcdfPoint {
    pub x: f64,
    pub height: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CdfPoint {
    pub x: f64,
    pub cdf: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Overlay {
    pub distribution: DistributionSpec,
    pub points: Vec<CdfPoint>,
    /// `sup |F_n − F|` over the real line.
    pub ks_distance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DatasetSummary {
    pub n: usize,
    pub min: f64,
    pub q1: f64,
    pub median: f64,
    pub q3: f64,
    pub max: f64,
    pub histogram: Histogram,
    pub ecdf: Vec<EcdfPoint>,
    pub overlay: Option<Overlay>,
}

/// Linear interpolation between order statistics (the usual "type 7").
fn quantile_sorted(x: &[f64], p: f64) -> f64 {
    let h = (x.len() - 1) as f64 * p;
    let lo = h.floor() as usize;
    let hi = (lo + 1).min(x.len() - 1);
    x[lo] + (h - lo as f64) * (x[hi] - x[lo])
}

pub fn default_bins(n: usize) -> usize {
    ((n as f64).sqrt().ceil() as usize).max(1)
}

pub fn summarize(
    sample: &PositiveSample,
    overlay: Option<DistributionSpec>,
    bins: Option<usize>,
) -> Result<DatasetSummary> {
    let x = sample.values();
    let n = x.len();
    let bins = bins.unwrap_or_else(|| default_bins(n));
    if bins == 0 {
        return Err(Error::Parameter("histogram needs at least one bin".into()));
    }

    let (lo, hi) = (sample.min(), sample.max());
    let width = (hi - lo) / bins as f64;
    let mut edges: Vec<f64> = (0..bins).map(|i| lo + i as f64 * width).collect();
    edges.push(hi);
    let mut counts = vec![0usize; bins];
    for &v in x {
        let idx = if width > 0.0 {
            ((v - lo) / width) as usize
        } else {
            0
        };
        counts[idx.min(bins - 1)] += 1;
    }

    let ecdf = x
        .iter()
        .enumerate()
        .map(|(i, &v)| EcdfPoint {
            x: v,
            height: (i + 1) as f64 / n as f64,
        })
        .collect();

    let overlay = match overlay {
        None => None,
        Some(dist) => {
            dist.validate()?;
            let mut points = Vec::with_capacity(n);
            let mut ks: f64 = 0.0;
            for (i, &v) in x.iter().enumerate() {
                let f = dist.cdf(v)?;
                ks = ks
                    .max((f - i as f64 / n as f64).abs())
                    .max(((i + 1) as f64 / n as f64 - f).abs());
                points.push(CdfPoint { x: v, cdf: f });
            }
            Some(Overlay {
                distribution: dist,
                points,
                ks_distance: ks,
            })
        }
    };

    Ok(DatasetSummary {
        n,
        min: lo,
        q1: quantile_sorted(x, 0.25),
        median: quantile_sorted(x, 0.5),
        q3: quantile_sorted(x, 0.75),
        max: hi,
        histogram: Histogram { edges, counts },
        ecdf,
        overlay,
    })
}

/// Writes `ecdf.csv` (`x,F`) and `hist.csv` (`left,right,count`) into `dir`.
pub fn write_plot_data(summary: &DatasetSummary, dir: &Path) -> Result<(PathBuf, PathBuf)> {
    fs::create_dir_all(dir)?;
    let ecdf_path = dir.join("ecdf.csv");
    let hist_path = dir.join("hist.csv");

    let mut w = csv::Writer::from_path(&ecdf_path)?;
    w.write_record(["x", "F"])?;
    for p in &summary.ecdf {
        w.write_record([p.x.to_string(), p.height.to_string()])?;
    }
    w.flush()?;

    let mut w = csv::Writer::from_path(&hist_path)?;
    w.write_record(["left", "right", "count"])?;
    let h = &summary.histogram;
    for (i, c) in h.counts.iter().enumerate() {
        w.write_record([
            h.edges[i].to_string(),
            h.edges[i + 1].to_string(),
            c.to_string(),
        ])?;
    }
    w.flush()?;
    Ok((ecdf_path, hist_path))
}
