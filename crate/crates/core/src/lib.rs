//! Goodness-of-fit tests for log-symmetric distributions based on weighted
//! integrals of the difference between two empirical characteristic
//! functions, with the order-statistic competitors, bootstrap calibration
//! and Monte Carlo drivers needed to study them.
//!
//! ```
//! use logsym::{statistic_t1, PositiveSample};
//!
//! let x = PositiveSample::from_slice(&[0.5, 1.0, 2.0]).unwrap();
//! assert!(statistic_t1(&x, 1.0).unwrap().abs() < 1e-12);
//! ```

pub mod calibration;
pub mod competitors;
pub mod dataset;
pub mod distributions;
pub mod error;
pub mod experiments;
pub mod procedure;
pub mod quadrature;
pub mod sample;
pub mod statistic;

pub use calibration::{
    bootstrap_pvalue, bootstrap_pvalue_with, warp_speed_rate, BootstrapSettings, CalibrationConfig,
    Decision, RateEstimate, TestResult,
};
pub use competitors::{stat_minmax_u, stat_pwm, stat_ratio_u, CompetitorSpec};
pub use dataset::{builtin_dataset, load_dataset, summarize, DataFormat, DatasetSummary};
pub use distributions::{DistributionSpec, RngStream};
pub use error::{Error, Result};
pub use experiments::{run_benchmark, run_rate_table, ResultTable, SimulationPlan, StudyMode};
pub use procedure::{GeometricMeanRescaled, Procedure, RejectionSide, Statistic};
pub use quadrature::{statistic_quadrature, QuadratureSettings};
pub use sample::PositiveSample;
pub use statistic::{
    ecf_difference, kernel_integral, ordered_weights, statistic, statistic_t1, statistic_t2,
    KernelFamily, KernelSpec, OrderedWeights,
};
