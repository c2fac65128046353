//! Command-line front end: cross-validated evaluation, metric comparison,
//! pairwise distances, probability-landscape export, learning curves, and
//! per-attribute distance summaries.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};

use hetdist_core::classifier::FitConfig;
use hetdist_core::dataset::{parse_data, parse_schema, AttributeKind};
use hetdist_core::eval;
use hetdist_core::metrics::{self, HvdmNorm, MetricKind, PreparedMetric};
use hetdist_core::vdm_stats::{self, DiscretizationConfig};
use hetdist_core::Dataset64;

#[derive(Parser)]
#[command(
    name = "hetdist",
    version,
    about = "Distance functions for mixed nominal/continuous data, \
             nearest-neighbor classification, and evaluation tools"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Csv,
}

#[derive(Args)]
struct CommonArgs {
    /// CSV data file; the last field of each row is the class label and `?`
    /// marks an unknown value
    #[arg(long, value_name = "FILE")]
    data: PathBuf,

    /// Schema file: one `attribute <name> <continuous|discrete|nominal>`
    /// line per attribute plus a final `class <name> [label...]` line
    #[arg(long, value_name = "FILE")]
    schema: PathBuf,

    /// Seed for fold assignment and training-set subsampling
    #[arg(long, value_name = "INT", default_value_t = 0)]
    seed: u64,

    /// Number of equal-width intervals for continuous attributes
    /// (default: max(5, number of classes))
    #[arg(long, value_name = "INT")]
    s: Option<u32>,

    /// Write the report here instead of standard output
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,

    /// Output format
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

impl CommonArgs {
    fn discretization(&self) -> Result<DiscretizationConfig, AppError> {
        if self.s == Some(0) {
            return Err(AppError::Usage(
                "--s must be a positive interval count".to_string(),
            ));
        }
        Ok(DiscretizationConfig {
            interval_override: self.s,
        })
    }
}

#[derive(Subcommand)]
enum Command {
    /// Cross-validated accuracy of one or more metrics
    Eval {
        #[command(flatten)]
        common: CommonArgs,
        /// Comma-separated metric names
        #[arg(
            long,
            value_name = "NAME[,NAME...]",
            value_delimiter = ',',
            default_value = "hvdm"
        )]
        metric: Vec<String>,
        /// Number of cross-validation folds
        #[arg(long, value_name = "INT", default_value_t = 10)]
        folds: usize,
        /// Neighbors consulted per classification
        #[arg(long, value_name = "INT", default_value_t = 1)]
        k: usize,
    },
    /// Fold-by-fold accuracy table for several metrics with paired
    /// significance tests against the last metric listed
    Compare {
        #[command(flatten)]
        common: CommonArgs,
        /// Comma-separated metric names; the last one is the reference column
        #[arg(
            long,
            value_name = "NAME[,NAME...]",
            value_delimiter = ',',
            default_value = "euclid,heom,hvdm,dvdm,ivdm,wvdm"
        )]
        metric: Vec<String>,
        /// Number of cross-validation folds
        #[arg(long, value_name = "INT", default_value_t = 10)]
        folds: usize,
        /// Neighbors consulted per classification
        #[arg(long, value_name = "INT", default_value_t = 1)]
        k: usize,
    },
    /// Distance between two instances of the data file (square-rooted for
    /// display)
    Dist {
        #[command(flatten)]
        common: CommonArgs,
        /// Metric name
        #[arg(long, value_name = "NAME", default_value = "hvdm")]
        metric: String,
        /// Zero-based row index of the first instance
        #[arg(long, value_name = "INDEX")]
        from: usize,
        /// Zero-based row index of the second instance
        #[arg(long, value_name = "INDEX")]
        to: usize,
    },
    /// Class-probability landscape of one continuous attribute, as
    /// comma-separated `x,p_1,...,p_C` rows on a uniform grid
    Probmap {
        #[command(flatten)]
        common: CommonArgs,
        /// Probability metric: dvdm, ivdm, or wvdm
        #[arg(long, value_name = "NAME", default_value = "ivdm")]
        metric: String,
        /// Zero-based attribute index (must be continuous)
        #[arg(long, value_name = "INDEX", default_value_t = 0)]
        attr: usize,
        /// Number of grid points
        #[arg(long, value_name = "INT", default_value_t = 256)]
        grid: usize,
    },
    /// Accuracy as a function of the percentage of training data used
    Curve {
        #[command(flatten)]
        common: CommonArgs,
        /// Comma-separated metric names
        #[arg(
            long,
            value_name = "NAME[,NAME...]",
            value_delimiter = ',',
            default_value = "hvdm"
        )]
        metric: Vec<String>,
        /// Number of cross-validation folds
        #[arg(long, value_name = "INT", default_value_t = 10)]
        folds: usize,
        /// Neighbors consulted per classification
        #[arg(long, value_name = "INT", default_value_t = 1)]
        k: usize,
        /// Comma-separated training-set percentages in (0, 100]
        #[arg(
            long,
            value_name = "LIST",
            value_delimiter = ',',
            default_value = "10,20,30,40,50,60,70,80,90,100"
        )]
        percent: Vec<f64>,
    },
    /// Average per-attribute distance under the N1/N2/N3 normalizations,
    /// with linear and nominal summary rows
    Stats {
        #[command(flatten)]
        common: CommonArgs,
        /// Number of cross-validation folds
        #[arg(long, value_name = "INT", default_value_t = 5)]
        folds: usize,
    },
}

/// Failures split by exit code: usage errors (1) versus file/data errors (2).
enum AppError {
    Usage(String),
    Data(String),
}

impl From<hetdist_core::Error> for AppError {
    fn from(e: hetdist_core::Error) -> Self {
        use hetdist_core::Error;
        match e {
            Error::UnknownMetric { .. }
            | Error::TooFewFolds { .. }
            | Error::ZeroNeighbors
            | Error::PercentOutOfRange { .. } => AppError::Usage(e.to_string()),
            _ => AppError::Data(e.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(AppError::Usage(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(1)
        }
        Err(AppError::Data(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}

fn load(common: &CommonArgs) -> Result<Dataset64, AppError> {
    let schema_text = fs::read_to_string(&common.schema)
        .map_err(|e| AppError::Data(format!("{}: {e}", common.schema.display())))?;
    let schema = parse_schema(&schema_text)?;
    let data_text = fs::read_to_string(&common.data)
        .map_err(|e| AppError::Data(format!("{}: {e}", common.data.display())))?;
    Ok(parse_data(&data_text, &schema)?)
}

fn parse_metrics(names: &[String]) -> Result<Vec<MetricKind>, AppError> {
    names
        .iter()
        .map(|name| Ok(name.parse::<MetricKind>()?))
        .collect()
}

fn finish(common: &CommonArgs, report: &str) -> Result<(), AppError> {
    match &common.out {
        Some(path) => {
            fs::write(path, report).map_err(|e| AppError::Data(format!("{}: {e}", path.display())))
        }
        None => {
            print!("{report}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<(), AppError> {
    match cli.command {
        Command::Eval {
            common,
            metric,
            folds,
            k,
        } => {
            let kinds = parse_metrics(&metric)?;
            let fit = FitConfig {
                k,
                discretization: common.discretization()?,
            };
            let data = load(&common)?;
            let plan = eval::make_folds(data.instance_count(), folds, common.seed)?;
            let report = eval::cross_validate(&data, &kinds, &plan, &fit)?;
            let rendered = match common.format {
                Format::Text => report
                    .results
                    .iter()
                    .map(|r| format!("mean accuracy ({}): {:.4}\n", r.kind, r.mean_accuracy))
                    .collect::<String>(),
                Format::Csv => eval::render_report_csv(&report),
            };
            finish(&common, &rendered)
        }
        Command::Compare {
            common,
            metric,
            folds,
            k,
        } => {
            let kinds = parse_metrics(&metric)?;
            let fit = FitConfig {
                k,
                discretization: common.discretization()?,
            };
            let data = load(&common)?;
            let plan = eval::make_folds(data.instance_count(), folds, common.seed)?;
            let report = eval::cross_validate(&data, &kinds, &plan, &fit)?;
            let rendered = match common.format {
                Format::Text => eval::render_report_text(&report),
                Format::Csv => eval::render_report_csv(&report),
            };
            finish(&common, &rendered)
        }
        Command::Dist {
            common,
            metric,
            from,
            to,
        } => {
            let kind: MetricKind = metric.parse().map_err(AppError::from)?;
            let config = common.discretization()?;
            let data = load(&common)?;
            let n = data.instance_count();
            for index in [from, to] {
                if index >= n {
                    return Err(AppError::Data(format!(
                        "instance index {index} out of range: the data file has {n} instances"
                    )));
                }
            }
            let prepared = PreparedMetric::prepare(&data, kind, &config);
            let d = prepared.distance(&data.instances[from], &data.instances[to])?;
            finish(&common, &format!("{}\n", metrics::present_distance(d)))
        }
        Command::Probmap {
            common,
            metric,
            attr,
            grid,
        } => {
            let kind: MetricKind = metric.parse().map_err(AppError::from)?;
            if !matches!(kind, MetricKind::Dvdm | MetricKind::Ivdm | MetricKind::Wvdm) {
                return Err(AppError::Usage(format!(
                    "probmap requires a probability metric (dvdm, ivdm, or wvdm), got {kind}"
                )));
            }
            if grid < 2 {
                return Err(AppError::Usage(
                    "--grid must be at least 2 points".to_string(),
                ));
            }
            let config = common.discretization()?;
            let data = load(&common)?;
            if attr >= data.schema.attribute_count() {
                return Err(AppError::Usage(format!(
                    "--attr {attr} out of range: the schema has {} attributes",
                    data.schema.attribute_count()
                )));
            }
            if data.schema.attributes[attr].kind != AttributeKind::Continuous {
                return Err(AppError::Usage(format!(
                    "--attr {attr} ({}) is not continuous",
                    data.schema.attributes[attr].name
                )));
            }
            let prepared = PreparedMetric::prepare(&data, kind, &config);
            let stats = &data.stats[attr];
            let width =
                vdm_stats::interval_width(stats, config.intervals(data.schema.class_count()));
            let mut rendered = String::new();
            for x in vdm_stats::uniform_grid(stats.min - width, stats.max + width, grid) {
                let probs = prepared
                    .class_probabilities(attr, x)
                    .expect("probability metrics define class probabilities");
                rendered.push_str(&format!("{x}"));
                for p in probs {
                    rendered.push_str(&format!(",{p}"));
                }
                rendered.push('\n');
            }
            finish(&common, &rendered)
        }
        Command::Curve {
            common,
            metric,
            folds,
            k,
            percent,
        } => {
            let kinds = parse_metrics(&metric)?;
            let fit = FitConfig {
                k,
                discretization: common.discretization()?,
            };
            let data = load(&common)?;
            let plan = eval::make_folds(data.instance_count(), folds, common.seed)?;
            let curve = eval::learning_curve(&data, &kinds, &percent, &plan, &fit, common.seed)?;
            let rendered = match common.format {
                Format::Text => eval::render_curve_text(&curve),
                Format::Csv => eval::render_curve_csv(&curve),
            };
            finish(&common, &rendered)
        }
        Command::Stats { common, folds } => {
            let config = common.discretization()?;
            let data = load(&common)?;
            let plan = eval::make_folds(data.instance_count(), folds, common.seed)?;
            let reports = [HvdmNorm::N1, HvdmNorm::N2, HvdmNorm::N3]
                .iter()
                .map(|&norm| eval::avg_attribute_distance(&data, &plan, norm, &config))
                .collect::<hetdist_core::Result<Vec<_>>>()?;
            let rendered = match common.format {
                Format::Text => eval::render_attribute_distance_text(&reports, &data.schema),
                Format::Csv => eval::render_attribute_distance_csv(&reports, &data.schema),
            };
            finish(&common, &rendered)
        }
    }
}
