//! Cross-validated evaluation: fold construction, accuracy estimation with
//! paired significance tests, per-attribute distance summaries, learning
//! curves, and text/CSV renderers for all of them.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::classifier::{FitConfig, Model};
use crate::dataset::{Dataset, Schema};
use crate::error::{Error, Result};
use crate::metrics::{HvdmNorm, MetricKind, PreparedMetric};
use crate::real::Real;
use crate::vdm_stats::DiscretizationConfig;

/// A reproducible assignment of instances to cross-validation folds.
///
/// Instances are shuffled once with a seeded generator and dealt round-robin,
/// so fold sizes differ by at most one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FoldPlan {
    seed: u64,
    fold_count: usize,
    assignment: Vec<usize>,
}

impl FoldPlan {
    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn fold_count(&self) -> usize {
        self.fold_count
    }

    /// Number of instances the plan covers.
    pub fn len(&self) -> usize {
        self.assignment.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assignment.is_empty()
    }

    /// Instance indices held out for testing in `fold`, ascending.
    pub fn test_indices(&self, fold: usize) -> Vec<usize> {
        (0..self.assignment.len())
            .filter(|&i| self.assignment[i] == fold)
            .collect()
    }

    /// Instance indices available for training in `fold`, ascending.
    pub fn train_indices(&self, fold: usize) -> Vec<usize> {
        (0..self.assignment.len())
            .filter(|&i| self.assignment[i] != fold)
            .collect()
    }
}

/// Shuffles `n` instance indices with the seeded generator and deals them
/// round-robin into `fold_count` folds.
pub fn make_folds(n: usize, fold_count: usize, seed: u64) -> Result<FoldPlan> {
    if fold_count < 2 {
        return Err(Error::TooFewFolds { folds: fold_count });
    }
    if fold_count > n {
        return Err(Error::TooManyFolds {
            folds: fold_count,
            n,
        });
    }
    let mut order: Vec<usize> = (0..n).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    order.shuffle(&mut rng);
    let mut assignment = vec![0usize; n];
    for (pos, &index) in order.iter().enumerate() {
        assignment[index] = pos % fold_count;
    }
    Ok(FoldPlan {
        seed,
        fold_count,
        assignment,
    })
}

/// Per-metric accuracy across the folds of one evaluation.
#[derive(Clone, Debug, PartialEq)]
pub struct MetricResult<T> {
    pub kind: MetricKind,
    pub fold_accuracies: Vec<T>,
    pub mean_accuracy: T,
}

/// Paired t-test between the fold accuracies of two metrics.
#[derive(Clone, Debug, PartialEq)]
pub struct PairedComparison<T> {
    pub left: MetricKind,
    pub right: MetricKind,
    pub t: T,
    pub significant: bool,
}

/// Everything produced by [`cross_validate`].
#[derive(Clone, Debug, PartialEq)]
pub struct EvalReport<T> {
    pub fold_count: usize,
    pub results: Vec<MetricResult<T>>,
    /// One comparison per unordered metric pair, in `(i, j)` order with
    /// `i < j` over the metric list.
    pub comparisons: Vec<PairedComparison<T>>,
}

/// Confidence level for the two-tailed paired t-test.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Confidence {
    P90,
    P95,
    P99,
}

/// Two-tailed critical values of Student's t distribution for 1..=30 degrees
/// of freedom at 90%, 95%, and 99% confidence.
const T_TABLE: [[f64; 3]; 30] = [
    [6.314, 12.706, 63.657],
    [2.920, 4.303, 9.925],
    [2.353, 3.182, 5.841],
    [2.132, 2.776, 4.604],
    [2.015, 2.571, 4.032],
    [1.943, 2.447, 3.707],
    [1.895, 2.365, 3.499],
    [1.860, 2.306, 3.355],
    [1.833, 2.262, 3.250],
    [1.812, 2.228, 3.169],
    [1.796, 2.201, 3.106],
    [1.782, 2.179, 3.055],
    [1.771, 2.160, 3.012],
    [1.761, 2.145, 2.977],
    [1.753, 2.131, 2.947],
    [1.746, 2.120, 2.921],
    [1.740, 2.110, 2.898],
    [1.734, 2.101, 2.878],
    [1.729, 2.093, 2.861],
    [1.725, 2.086, 2.845],
    [1.721, 2.080, 2.831],
    [1.717, 2.074, 2.819],
    [1.714, 2.069, 2.807],
    [1.711, 2.064, 2.797],
    [1.708, 2.060, 2.787],
    [1.706, 2.056, 2.779],
    [1.703, 2.052, 2.771],
    [1.701, 2.048, 2.763],
    [1.697, 2.045, 2.756],
    [1.697, 2.042, 2.750],
];

impl Confidence {
    /// Critical value for `df` degrees of freedom; `df` outside 1..=30 is
    /// clamped to the nearest tabulated row.
    pub fn critical_value(self, df: usize) -> f64 {
        let row = df.clamp(1, T_TABLE.len()) - 1;
        let column = match self {
            Confidence::P90 => 0,
            Confidence::P95 => 1,
            Confidence::P99 => 2,
        };
        T_TABLE[row][column]
    }
}

/// Two-tailed paired t-test on matched accuracy vectors.
///
/// Returns the t statistic and whether it exceeds the critical value at the
/// requested confidence. A zero-variance difference yields `(0, false)` when
/// the means agree and `(±∞, true)` when they do not.
pub fn paired_t_test<T: Real>(
    left: &[T],
    right: &[T],
    confidence: Confidence,
) -> Result<(T, bool)> {
    if left.len() != right.len() {
        return Err(Error::FoldLengthMismatch {
            left: left.len(),
            right: right.len(),
        });
    }
    if left.len() < 2 {
        return Err(Error::TooFewSamples { found: left.len() });
    }
    let n = left.len();
    let diffs: Vec<T> = left.iter().zip(right).map(|(&a, &b)| a - b).collect();
    let mean = diffs.iter().copied().sum::<T>() / T::from_count(n);
    let variance = diffs.iter().map(|&d| (d - mean) * (d - mean)).sum::<T>() / T::from_count(n - 1);
    let sd = variance.sqrt();
    if sd == T::zero() {
        return Ok(if mean == T::zero() {
            (T::zero(), false)
        } else if mean > T::zero() {
            (T::infinity(), true)
        } else {
            (T::neg_infinity(), true)
        });
    }
    let t = mean / (sd / T::from_count(n).sqrt());
    let critical = T::from_constant(confidence.critical_value(n - 1));
    Ok((t, t.abs() > critical))
}

fn check_plan<T: Real>(data: &Dataset<T>, plan: &FoldPlan) -> Result<()> {
    if plan.len() != data.instance_count() {
        return Err(Error::PlanMismatch {
            expected: plan.len(),
            found: data.instance_count(),
        });
    }
    Ok(())
}

fn fold_accuracy<T: Real>(
    model: &Model<T>,
    data: &Dataset<T>,
    test_indices: &[usize],
) -> Result<T> {
    let mut correct = 0usize;
    for &ti in test_indices {
        let instance = &data.instances[ti];
        if model.classify(instance)? == instance.class_index {
            correct += 1;
        }
    }
    Ok(T::from_count(correct) / T::from_count(test_indices.len()))
}

/// Cross-validates every metric on the same folds and compares all metric
/// pairs with a two-tailed 90% paired t-test.
pub fn cross_validate<T: Real>(
    data: &Dataset<T>,
    kinds: &[MetricKind],
    plan: &FoldPlan,
    fit: &FitConfig,
) -> Result<EvalReport<T>> {
    check_plan(data, plan)?;
    let mut fold_accuracies: Vec<Vec<T>> = vec![Vec::with_capacity(plan.fold_count); kinds.len()];
    for fold in 0..plan.fold_count {
        let test_indices = plan.test_indices(fold);
        let train = data.subset(&plan.train_indices(fold));
        for (mi, &kind) in kinds.iter().enumerate() {
            let model = Model::fit(train.clone(), kind, fit)?;
            fold_accuracies[mi].push(fold_accuracy(&model, data, &test_indices)?);
        }
    }
    let results: Vec<MetricResult<T>> = kinds
        .iter()
        .zip(fold_accuracies)
        .map(|(&kind, accs)| {
            let mean = accs.iter().copied().sum::<T>() / T::from_count(plan.fold_count);
            MetricResult {
                kind,
                fold_accuracies: accs,
                mean_accuracy: mean,
            }
        })
        .collect();
    let mut comparisons = Vec::new();
    for i in 0..results.len() {
        for j in (i + 1)..results.len() {
            let (t, significant) = paired_t_test(
                &results[i].fold_accuracies,
                &results[j].fold_accuracies,
                Confidence::P90,
            )?;
            comparisons.push(PairedComparison {
                left: results[i].kind,
                right: results[j].kind,
                t,
                significant,
            });
        }
    }
    Ok(EvalReport {
        fold_count: plan.fold_count,
        results,
        comparisons,
    })
}

/// Average per-attribute distances under one normalization, measured over
/// every (test instance, training instance) pair of every fold.
#[derive(Clone, Debug, PartialEq)]
pub struct AttributeDistanceReport<T> {
    pub norm: HvdmNorm,
    pub per_attribute: Vec<T>,
    /// Mean over continuous and discrete attributes; `None` if there are none.
    pub avg_linear: Option<T>,
    /// Mean over nominal attributes; `None` if there are none.
    pub avg_nominal: Option<T>,
}

/// Measures how large each attribute's contribution to the heterogeneous
/// distance is on average, under the given normalization.
pub fn avg_attribute_distance<T: Real>(
    data: &Dataset<T>,
    plan: &FoldPlan,
    norm: HvdmNorm,
    config: &DiscretizationConfig,
) -> Result<AttributeDistanceReport<T>> {
    check_plan(data, plan)?;
    let m = data.schema.attribute_count();
    let mut sums = vec![T::zero(); m];
    let mut pairs = 0usize;
    for fold in 0..plan.fold_count {
        let test_indices = plan.test_indices(fold);
        let train = data.subset(&plan.train_indices(fold));
        let metric = PreparedMetric::prepare(&train, MetricKind::Hvdm(norm), config);
        for &ti in &test_indices {
            let x = &data.instances[ti];
            for y in &train.instances {
                for (a, sum) in sums.iter_mut().enumerate() {
                    *sum = *sum + metric.attribute_distance(a, x.values[a], y.values[a]);
                }
                pairs += 1;
            }
        }
    }
    let per_attribute: Vec<T> = sums.into_iter().map(|s| s / T::from_count(pairs)).collect();
    let average_of = |linear: bool| {
        let selected: Vec<T> = data
            .schema
            .attributes
            .iter()
            .zip(&per_attribute)
            .filter(|(attr, _)| attr.kind.is_linear() == linear)
            .map(|(_, &d)| d)
            .collect();
        (!selected.is_empty())
            .then(|| selected.iter().copied().sum::<T>() / T::from_count(selected.len()))
    };
    Ok(AttributeDistanceReport {
        norm,
        avg_linear: average_of(true),
        avg_nominal: average_of(false),
        per_attribute,
    })
}

/// One metric's accuracy at each training-set percentage; `None` marks
/// percentages whose rounded training size was zero in some fold.
#[derive(Clone, Debug, PartialEq)]
pub struct CurveSeries<T> {
    pub kind: MetricKind,
    pub accuracies: Vec<Option<T>>,
}

/// Accuracy as a function of the fraction of the training set used.
#[derive(Clone, Debug, PartialEq)]
pub struct LearningCurve<T> {
    pub percents: Vec<f64>,
    pub series: Vec<CurveSeries<T>>,
}

/// For each percentage, trains on that share of each fold's training split
/// (a random but seed-reproducible prefix; larger percentages extend smaller
/// ones) and evaluates on the untouched test split.
///
/// At 100% this reproduces [`cross_validate`] exactly. The neighbor count is
/// capped at the reduced training size.
pub fn learning_curve<T: Real>(
    data: &Dataset<T>,
    kinds: &[MetricKind],
    percents: &[f64],
    plan: &FoldPlan,
    fit: &FitConfig,
    seed: u64,
) -> Result<LearningCurve<T>> {
    for &p in percents {
        if !(p > 0.0 && p <= 100.0) {
            return Err(Error::PercentOutOfRange { value: p });
        }
    }
    check_plan(data, plan)?;
    let mut sums = vec![vec![T::zero(); percents.len()]; kinds.len()];
    let mut absent = vec![false; percents.len()];
    for fold in 0..plan.fold_count {
        let test_indices = plan.test_indices(fold);
        let mut order = plan.train_indices(fold);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(fold as u64);
        order.shuffle(&mut rng);
        for (pi, &p) in percents.iter().enumerate() {
            let size = ((p / 100.0) * order.len() as f64).round() as usize;
            if size == 0 {
                absent[pi] = true;
                continue;
            }
            let mut chosen = order[..size].to_vec();
            chosen.sort_unstable();
            let train = data.subset(&chosen);
            let config = FitConfig {
                k: fit.k.min(size),
                discretization: fit.discretization,
            };
            for (mi, &kind) in kinds.iter().enumerate() {
                let model = Model::fit(train.clone(), kind, &config)?;
                sums[mi][pi] = sums[mi][pi] + fold_accuracy(&model, data, &test_indices)?;
            }
        }
    }
    let series = kinds
        .iter()
        .zip(sums)
        .map(|(&kind, metric_sums)| CurveSeries {
            kind,
            accuracies: metric_sums
                .into_iter()
                .zip(&absent)
                .map(|(sum, &missing)| (!missing).then(|| sum / T::from_count(plan.fold_count)))
                .collect(),
        })
        .collect();
    Ok(LearningCurve {
        percents: percents.to_vec(),
        series,
    })
}

/// Significance marks for the mean row: compared against the last metric
/// column, `*` means significantly higher and `<` significantly lower.
fn reference_marks<T: Real>(report: &EvalReport<T>) -> Vec<&'static str> {
    let m = report.results.len();
    let mut marks = vec![""; m];
    if m < 2 {
        return marks;
    }
    let mut index = 0;
    for (i, mark) in marks.iter_mut().enumerate() {
        for j in (i + 1)..m {
            let comparison = &report.comparisons[index];
            index += 1;
            if j == m - 1 && comparison.significant {
                *mark = if report.results[i].mean_accuracy > report.results[m - 1].mean_accuracy {
                    "*"
                } else {
                    "<"
                };
            }
        }
    }
    marks
}

/// Fixed-width table of fold accuracies plus the paired-test summary.
pub fn render_report_text<T: Real>(report: &EvalReport<T>) -> String {
    let mut out = String::new();
    out.push_str(&format!("{:<4}", "fold"));
    for result in &report.results {
        out.push_str(&format!("{:>10}", result.kind.name()));
    }
    out.push('\n');
    for fold in 0..report.fold_count {
        out.push_str(&format!("{:<4}", fold + 1));
        for result in &report.results {
            out.push_str(&format!(
                "{:>10}",
                format!("{:.4}", result.fold_accuracies[fold])
            ));
        }
        out.push('\n');
    }
    let marks = reference_marks(report);
    out.push_str(&format!("{:<4}", "mean"));
    for (result, mark) in report.results.iter().zip(&marks) {
        out.push_str(&format!(
            "{:>10}",
            format!("{:.4}{}", result.mean_accuracy, mark)
        ));
    }
    out.push('\n');
    if !report.comparisons.is_empty() {
        let df = report.fold_count - 1;
        out.push_str(&format!(
            "\nreference column: {} (* significantly higher, < significantly lower)\n",
            report.results.last().expect("at least one metric").kind
        ));
        out.push_str(&format!(
            "paired t-tests, two-tailed 90% confidence, df = {}, critical value = {:.3}\n",
            df,
            Confidence::P90.critical_value(df)
        ));
        for comparison in &report.comparisons {
            out.push_str(&format!(
                "{} vs {}: t = {:.3}, {}\n",
                comparison.left,
                comparison.right,
                comparison.t,
                if comparison.significant {
                    "significant"
                } else {
                    "not significant"
                }
            ));
        }
    }
    out
}

/// Machine-readable report: an accuracy section and, when present, a
/// comparison section separated by a blank line.
pub fn render_report_csv<T: Real>(report: &EvalReport<T>) -> String {
    let mut out = String::from("metric,mean");
    for fold in 0..report.fold_count {
        out.push_str(&format!(",fold_{}", fold + 1));
    }
    out.push('\n');
    for result in &report.results {
        out.push_str(&format!("{},{}", result.kind, result.mean_accuracy));
        for accuracy in &result.fold_accuracies {
            out.push_str(&format!(",{accuracy}"));
        }
        out.push('\n');
    }
    if !report.comparisons.is_empty() {
        out.push_str("\nleft,right,t,significant\n");
        for comparison in &report.comparisons {
            out.push_str(&format!(
                "{},{},{},{}\n",
                comparison.left, comparison.right, comparison.t, comparison.significant
            ));
        }
    }
    out
}

fn format_percent(p: f64) -> String {
    if (p - p.round()).abs() < 1e-9 {
        format!("{:.0}", p)
    } else {
        p.to_string()
    }
}

/// Fixed-width learning-curve table; `-` marks percentages with no value.
pub fn render_curve_text<T: Real>(curve: &LearningCurve<T>) -> String {
    let mut out = String::new();
    out.push_str(&format!("{:>7}", "percent"));
    for series in &curve.series {
        out.push_str(&format!("{:>10}", series.kind.name()));
    }
    out.push('\n');
    for (pi, &p) in curve.percents.iter().enumerate() {
        out.push_str(&format!("{:>7}", format_percent(p)));
        for series in &curve.series {
            let cell = match series.accuracies[pi] {
                Some(accuracy) => format!("{accuracy:.4}"),
                None => "-".to_string(),
            };
            out.push_str(&format!("{cell:>10}"));
        }
        out.push('\n');
    }
    out
}

/// Machine-readable learning curve; absent values are empty fields.
pub fn render_curve_csv<T: Real>(curve: &LearningCurve<T>) -> String {
    let mut out = String::from("percent");
    for series in &curve.series {
        out.push_str(&format!(",{}", series.kind));
    }
    out.push('\n');
    for (pi, &p) in curve.percents.iter().enumerate() {
        out.push_str(&format_percent(p));
        for series in &curve.series {
            match series.accuracies[pi] {
                Some(accuracy) => out.push_str(&format!(",{accuracy}")),
                None => out.push(','),
            }
        }
        out.push('\n');
    }
    out
}

const LINEAR_SUMMARY_LABEL: &str = "average linear";
const NOMINAL_SUMMARY_LABEL: &str = "average nominal";

/// Fixed-width per-attribute distance table with one column per
/// normalization and summary rows for linear and nominal attributes.
pub fn render_attribute_distance_text<T: Real>(
    reports: &[AttributeDistanceReport<T>],
    schema: &Schema,
) -> String {
    let name_width = schema
        .attributes
        .iter()
        .map(|a| a.name.len())
        .chain([
            "attribute".len(),
            LINEAR_SUMMARY_LABEL.len(),
            NOMINAL_SUMMARY_LABEL.len(),
        ])
        .max()
        .expect("width candidates are non-empty");
    let mut out = String::new();
    out.push_str(&format!("{:<name_width$}  {:<11}", "attribute", "kind"));
    for report in reports {
        out.push_str(&format!("{:>10}", report.norm.name()));
    }
    out.push('\n');
    for (a, attribute) in schema.attributes.iter().enumerate() {
        out.push_str(&format!(
            "{:<name_width$}  {:<11}",
            attribute.name,
            attribute.kind.keyword()
        ));
        for report in reports {
            out.push_str(&format!(
                "{:>10}",
                format!("{:.4}", report.per_attribute[a])
            ));
        }
        out.push('\n');
    }
    let mut summary_row = |label: &str, pick: fn(&AttributeDistanceReport<T>) -> Option<T>| {
        out.push_str(&format!("{label:<name_width$}  {:<11}", ""));
        for report in reports {
            let cell = match pick(report) {
                Some(value) => format!("{value:.4}"),
                None => "-".to_string(),
            };
            out.push_str(&format!("{cell:>10}"));
        }
        out.push('\n');
    };
    summary_row(LINEAR_SUMMARY_LABEL, |r| r.avg_linear);
    summary_row(NOMINAL_SUMMARY_LABEL, |r| r.avg_nominal);
    out
}

/// Machine-readable per-attribute distance table; summary rows leave the
/// kind column empty and absent averages are empty fields.
pub fn render_attribute_distance_csv<T: Real>(
    reports: &[AttributeDistanceReport<T>],
    schema: &Schema,
) -> String {
    let mut out = String::from("attribute,kind");
    for report in reports {
        out.push_str(&format!(",{}", report.norm.name()));
    }
    out.push('\n');
    for (a, attribute) in schema.attributes.iter().enumerate() {
        out.push_str(&format!("{},{}", attribute.name, attribute.kind.keyword()));
        for report in reports {
            out.push_str(&format!(",{}", report.per_attribute[a]));
        }
        out.push('\n');
    }
    let mut summary_row = |label: &str, pick: fn(&AttributeDistanceReport<T>) -> Option<T>| {
        out.push_str(&format!("{label},"));
        for report in reports {
            match pick(report) {
                Some(value) => out.push_str(&format!(",{value}")),
                None => out.push(','),
            }
        }
        out.push('\n');
    };
    summary_row("average_linear", |r| r.avg_linear);
    summary_row("average_nominal", |r| r.avg_nominal);
    out
}
