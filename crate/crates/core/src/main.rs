use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{ArgAction, Args, Parser, Subcommand};

use logsym::dataset::{write_plot_data, DataFormat};
use logsym::{
    bootstrap_pvalue, builtin_dataset, load_dataset, run_benchmark, run_rate_table, summarize,
    BootstrapSettings, DistributionSpec, Error, PositiveSample, Procedure, SimulationPlan,
    StudyMode,
};

const DEFAULT_SEED: u64 = logsym::experiments::DEFAULT_MASTER_SEED;

#[derive(Parser, Debug)]
#[command(
    name = "logsym",
    version,
    about = "Goodness-of-fit tests for log-symmetric distributions"
)]
struct Cli {
    /// Worker threads (0 = all cores)
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Bootstrap test of one data set; prints the result as JSON
    Test(TestArgs),
    /// Monte Carlo type I error or power table; writes CSV and Markdown
    Simulate(SimulateArgs),
    /// Time the statistics; writes CSV and Markdown
    Bench(BenchArgs),
    /// Five-number summary, histogram and ECDF as JSON, plus plot CSVs
    Summarize(SummarizeArgs),
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct DataSource {
    /// Data file, csv or whitespace separated
    #[arg(long)]
    data: Option<PathBuf>,

    /// Built-in data set: insulating-fluid or repair-times
    #[arg(long)]
    builtin: Option<String>,
}

#[derive(Args, Debug)]
struct DataArgs {
    #[command(flatten)]
    source: DataSource,

    /// Input format of --data: csv, whitespace, or auto (by file extension)
    #[arg(long, default_value = "auto")]
    format: String,
}

#[derive(Args, Debug)]
struct TestArgs {
    #[command(flatten)]
    data: DataArgs,

    /// Test: t1, t2, pwm, ratio or minmax
    #[arg(long, default_value = "t1")]
    test: String,

    /// Tuning parameter of t1/t2
    #[arg(long, default_value_t = 1.0, value_parser = positive_f64)]
    a: f64,

    /// Order of the pwm test
    #[arg(long, default_value_t = 3)]
    beta: usize,

    /// Subset size of the minmax test
    #[arg(long, default_value_t = 3)]
    k: usize,

    /// Null distribution of the parametric bootstrap
    #[arg(long, default_value = "loglogistic(0,1)", value_parser = parse_distribution)]
    null: DistributionSpec,

    /// Bootstrap replications
    #[arg(long = "B", default_value_t = 1000)]
    b: usize,

    /// Significance level
    #[arg(long, default_value_t = 0.05)]
    alpha: f64,

    /// Seed of the bootstrap random streams
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,

    /// Divide the data and every bootstrap sample by its geometric mean
    #[arg(long, default_value_t = true, num_args = 0..=1, default_missing_value = "true", action = ArgAction::Set)]
    rescale_geometric_mean: bool,
}

#[derive(Args, Debug)]
struct SimulateArgs {
    /// type1 (bootstrap from the generating law) or power (bootstrap from --null)
    #[arg(long, default_value = "type1")]
    mode: String,

    /// Comma-separated tests, e.g. t1:0.5,t2:1,pwm:3,ratio,minmax:3
    #[arg(long, default_value = "t1:1")]
    tests: String,

    /// Comma-separated sample sizes
    #[arg(long, value_delimiter = ',', default_value = "10,25,50")]
    n: Vec<usize>,

    /// Comma-separated significance levels
    #[arg(long, value_delimiter = ',', default_value = "0.05,0.01")]
    alpha: Vec<f64>,

    /// Comma-separated distributions, e.g. lognormal(0,1),pareto(1)
    #[arg(long, default_value = "lognormal(0,1)")]
    dist: String,

    /// Bootstrap null of power studies
    #[arg(long, default_value = "lognormal(0,1)", value_parser = parse_distribution)]
    null: DistributionSpec,

    /// Monte Carlo replications per cell
    #[arg(long, default_value_t = 10_000)]
    mc: usize,

    /// Master seed; each cell derives its own seed from it
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,

    /// Output prefix; .csv and .md are appended
    #[arg(long, default_value = "results/simulate")]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct BenchArgs {
    /// Comma-separated tests
    #[arg(long, default_value = "t1:1,t2:1,pwm:3,ratio,minmax:3")]
    tests: String,

    /// Sample size
    #[arg(long, default_value_t = 50)]
    n: usize,

    /// Timed evaluations per test
    #[arg(long, default_value_t = 20)]
    repetitions: usize,

    /// Seed of the generated samples
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,

    /// Output prefix; .csv and .md are appended
    #[arg(long, default_value = "results/bench")]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct SummarizeArgs {
    #[command(flatten)]
    data: DataArgs,

    /// Distribution whose CDF is overlaid on the ECDF
    #[arg(long, value_parser = parse_distribution)]
    overlay: Option<DistributionSpec>,

    /// Histogram bins (default: ceil(sqrt(n)))
    #[arg(long)]
    bins: Option<usize>,

    /// Directory for ecdf.csv and hist.csv (not written when absent)
    #[arg(long)]
    out_dir: Option<PathBuf>,
}

fn positive_f64(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(v) if v.is_finite() && v > 0.0 => Ok(v),
        Ok(v) => Err(format!("must be a finite positive number, got {v}")),
        Err(e) => Err(e.to_string()),
    }
}

fn parse_distribution(s: &str) -> Result<DistributionSpec, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// Splits on commas that are not inside parentheses.
fn split_list(s: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let (mut depth, mut start) = (0i32, 0);
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                out.push(s[start..i].trim());
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(s[start..].trim());
    out.retain(|t| !t.is_empty());
    out
}

fn parse_tests(s: &str) -> logsym::Result<Vec<Procedure>> {
    split_list(s).into_iter().map(str::parse).collect()
}

fn load(args: &DataArgs) -> logsym::Result<PositiveSample> {
    if let Some(name) = &args.source.builtin {
        return builtin_dataset(name);
    }
    let path = args
        .source
        .data
        .as_deref()
        .expect("clap enforces one data source");
    let format = match args.format.as_str() {
        "auto" => auto_format(path),
        other => other.parse()?,
    };
    load_dataset(path, format)
}

fn auto_format(path: &Path) -> DataFormat {
    match path.extension().and_then(|e| e.to_str()) {
        Some(ext) if ext.eq_ignore_ascii_case("csv") => DataFormat::Csv,
        _ => DataFormat::Whitespace,
    }
}

fn cmd_test(args: TestArgs) -> logsym::Result<()> {
    let sample = load(&args.data)?;
    let procedure = match args.test.trim().to_ascii_lowercase().as_str() {
        "t1" => Procedure::t1(args.a)?,
        "t2" => Procedure::t2(args.a)?,
        "pwm" => format!("pwm:{}", args.beta).parse()?,
        "ratio" => Procedure::ratio(),
        "minmax" => format!("minmax:{}", args.k).parse()?,
        other => other.parse()?,
    };
    let settings = BootstrapSettings {
        replications: args.b,
        null: args.null,
        alpha: args.alpha,
        seed: args.seed,
        rescale_geometric_mean: args.rescale_geometric_mean,
    };
    let result = bootstrap_pvalue(&sample, &procedure, &settings)?;
    println!("{}", serde_json::to_string_pretty(&result)?);
    Ok(())
}

fn cmd_simulate(args: SimulateArgs) -> logsym::Result<()> {
    let mode: StudyMode = args.mode.parse()?;
    let distributions = split_list(&args.dist)
        .into_iter()
        .map(str::parse)
        .collect::<logsym::Result<Vec<DistributionSpec>>>()?;
    let mut plan =
        SimulationPlan::new(parse_tests(&args.tests)?, args.n, args.alpha, distributions);
    plan.mc_replications = args.mc;
    plan.master_seed = args.seed;
    plan.power_null = args.null;
    let table = run_rate_table(&plan, mode)?;
    let (csv, md) = table.write_files(&args.out)?;
    println!("{}\n{}", csv.display(), md.display());
    Ok(())
}

fn cmd_bench(args: BenchArgs) -> logsym::Result<()> {
    let table = run_benchmark(
        &parse_tests(&args.tests)?,
        args.n,
        args.repetitions,
        args.seed,
    )?;
    let (csv, md) = table.write_files(&args.out)?;
    println!("{}\n{}", csv.display(), md.display());
    Ok(())
}

fn cmd_summarize(args: SummarizeArgs) -> logsym::Result<()> {
    let sample = load(&args.data)?;
    let summary = summarize(&sample, args.overlay, args.bins)?;
    if let Some(dir) = &args.out_dir {
        write_plot_data(&summary, dir)?;
    }
    println!("{}", serde_json::to_string_pretty(&summary)?);
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };

    if cli.threads > 0 {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(cli.threads)
            .build_global()
        {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }

    let outcome = match cli.command {
        Command::Test(a) => cmd_test(a),
        Command::Simulate(a) => cmd_simulate(a),
        Command::Bench(a) => cmd_bench(a),
        Command::Summarize(a) => cmd_summarize(a),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_user_error() {
                ExitCode::from(1)
            } else {
                ExitCode::from(2)
            }
        }
    }
}
