//! The six distance functions and their attribute-level kernels.
//!
//! Every metric reports a squared-sum distance: per-attribute distances are
//! combined without the final square root, which leaves nearest-neighbor
//! ordering untouched. [`present_distance`] applies the root for display.

use std::fmt;
use std::str::FromStr;

use crate::dataset::{AttributeKind, AttributeStats, Dataset, Instance, Schema, Value};
use crate::error::{Error, Result};
use crate::real::Real;
use crate::vdm_stats::{self, DiscretizationConfig, VdmTable, WindowTable};

/// Normalization applied to class-probability difference vectors of nominal
/// attributes inside the heterogeneous value-difference metric.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum HvdmNorm {
    /// Sum of absolute per-class differences.
    N1,
    /// Euclidean norm of the per-class differences (the default).
    N2,
    /// Euclidean norm scaled by the square root of the class count.
    N3,
}

impl HvdmNorm {
    pub fn name(self) -> &'static str {
        match self {
            HvdmNorm::N1 => "N1",
            HvdmNorm::N2 => "N2",
            HvdmNorm::N3 => "N3",
        }
    }
}

/// Which distance function to use.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MetricKind {
    /// Difference divided by the attribute's standard deviation, applied to
    /// every attribute (nominal values via their integer codes).
    EuclideanSigma,
    /// Range-normalized difference for linear attributes, 0/1 overlap for
    /// nominal ones.
    Heom,
    /// Four-σ-normalized difference for linear attributes, normalized
    /// class-probability difference for nominal ones.
    Hvdm(HvdmNorm),
    /// Class-probability difference over equal-width-binned values.
    Dvdm,
    /// Like [`Dvdm`](MetricKind::Dvdm), with probabilities interpolated
    /// between bin centers.
    Ivdm,
    /// Like [`Ivdm`](MetricKind::Ivdm), with per-value sliding-window
    /// probabilities.
    Wvdm,
}

impl MetricKind {
    /// The canonical names accepted by [`FromStr`].
    pub const NAMES: [&'static str; 8] = [
        "euclid", "heom", "hvdm", "hvdm-n1", "hvdm-n3", "dvdm", "ivdm", "wvdm",
    ];

    /// Canonical name of this metric.
    pub fn name(self) -> &'static str {
        match self {
            MetricKind::EuclideanSigma => "euclid",
            MetricKind::Heom => "heom",
            MetricKind::Hvdm(HvdmNorm::N1) => "hvdm-n1",
            MetricKind::Hvdm(HvdmNorm::N2) => "hvdm",
            MetricKind::Hvdm(HvdmNorm::N3) => "hvdm-n3",
            MetricKind::Dvdm => "dvdm",
            MetricKind::Ivdm => "ivdm",
            MetricKind::Wvdm => "wvdm",
        }
    }

    /// Whether the metric needs the binned class-probability table.
    fn needs_probability_table(self) -> bool {
        !matches!(self, MetricKind::EuclideanSigma | MetricKind::Heom)
    }
}

impl FromStr for MetricKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "euclid" => Ok(MetricKind::EuclideanSigma),
            "heom" => Ok(MetricKind::Heom),
            "hvdm" | "hvdm-n2" => Ok(MetricKind::Hvdm(HvdmNorm::N2)),
            "hvdm-n1" => Ok(MetricKind::Hvdm(HvdmNorm::N1)),
            "hvdm-n3" => Ok(MetricKind::Hvdm(HvdmNorm::N3)),
            "dvdm" => Ok(MetricKind::Dvdm),
            "ivdm" => Ok(MetricKind::Ivdm),
            "wvdm" => Ok(MetricKind::Wvdm),
            other => Err(Error::UnknownMetric {
                name: other.to_string(),
            }),
        }
    }
}

impl fmt::Display for MetricKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// 0/1 equality distance between nominal codes.
pub fn overlap<T: Real>(x: u32, y: u32) -> T {
    if x == y {
        T::zero()
    } else {
        T::one()
    }
}

fn scaled_diff<T: Real>(x: T, y: T, denominator: T) -> T {
    if denominator <= T::zero() {
        // Degenerate normalizer: keep the distance bounded and symmetric.
        return if x == y { T::zero() } else { T::one() };
    }
    (x - y).abs() / denominator
}

/// Absolute difference scaled by the attribute range; 0/1 equality when the
/// range is degenerate.
pub fn rn_diff<T: Real>(x: T, y: T, range: T) -> T {
    scaled_diff(x, y, range)
}

/// Absolute difference scaled by four standard deviations; 0/1 equality when
/// the deviation is degenerate.
pub fn normalized_diff<T: Real>(x: T, y: T, sigma: T) -> T {
    scaled_diff(x, y, T::from_constant(4.0) * sigma)
}

/// Sum of squared per-class probability differences.
pub fn vdm_a<T: Real>(px: &[T], py: &[T]) -> T {
    assert_eq!(
        px.len(),
        py.len(),
        "probability vectors must match in length"
    );
    px.iter().zip(py).map(|(&a, &b)| (a - b) * (a - b)).sum()
}

/// Normalized distance between two class-probability vectors.
pub fn normalized_vdm<T: Real>(px: &[T], py: &[T], norm: HvdmNorm) -> T {
    assert_eq!(
        px.len(),
        py.len(),
        "probability vectors must match in length"
    );
    match norm {
        HvdmNorm::N1 => px.iter().zip(py).map(|(&a, &b)| (a - b).abs()).sum(),
        HvdmNorm::N2 => vdm_a(px, py).sqrt(),
        HvdmNorm::N3 => (T::from_count(px.len()) * vdm_a(px, py)).sqrt(),
    }
}

/// Square root applied for display and for callers that need a true
/// distance; neighbor ranking keeps the squared-sum form.
pub fn present_distance<T: Real>(d_squared_sum: T) -> T {
    d_squared_sum.sqrt()
}

/// A distance function bound to the training-set structures it needs:
/// per-attribute statistics, and probability tables where applicable.
/// Immutable once prepared; queries are pure and thread-safe.
#[derive(Clone, Debug)]
pub struct PreparedMetric<T> {
    kind: MetricKind,
    schema: Schema,
    stats: Vec<AttributeStats<T>>,
    vdm: Option<VdmTable<T>>,
    window: Option<WindowTable<T>>,
}

impl<T: Real> PreparedMetric<T> {
    /// Builds everything the metric needs from the training data alone;
    /// query data never influences statistics or probabilities.
    pub fn prepare(train: &Dataset<T>, kind: MetricKind, config: &DiscretizationConfig) -> Self {
        let vdm = kind
            .needs_probability_table()
            .then(|| vdm_stats::learn_p(train, config));
        let window = matches!(kind, MetricKind::Wvdm).then(|| vdm_stats::learn_wvdm(train, config));
        PreparedMetric {
            kind,
            schema: train.schema.clone(),
            stats: train.stats.clone(),
            vdm,
            window,
        }
    }

    pub fn kind(&self) -> MetricKind {
        self.kind
    }

    pub fn schema(&self) -> &Schema {
        &self.schema
    }

    /// Squared-sum distance between two instances, used for ranking.
    pub fn distance(&self, x: &Instance<T>, y: &Instance<T>) -> Result<T> {
        let m = self.schema.attribute_count();
        for inst in [x, y] {
            if inst.values.len() != m {
                return Err(Error::SchemaMismatch {
                    expected: m,
                    found: inst.values.len(),
                });
            }
        }
        let mut total = T::zero();
        for a in 0..m {
            let d = self.attribute_distance(a, x.values[a], y.values[a]);
            total = total
                + match self.kind {
                    MetricKind::EuclideanSigma | MetricKind::Heom | MetricKind::Hvdm(_) => d * d,
                    // Value-difference contributions are already sums of
                    // squared probability differences; they compose by plain
                    // summation.
                    MetricKind::Dvdm | MetricKind::Ivdm | MetricKind::Wvdm => d,
                };
        }
        Ok(total)
    }

    /// Per-attribute distance before composition: a scalar difference for
    /// the euclidean/overlap family (squared by [`distance`](Self::distance))
    /// or an already-squared probability-difference sum for the
    /// value-difference family (added as-is).
    pub fn attribute_distance(&self, attr: usize, x: Value<T>, y: Value<T>) -> T {
        let kind = self.schema.attributes[attr].kind;
        let stats = &self.stats[attr];
        match self.kind {
            MetricKind::EuclideanSigma => match (x, y) {
                (Value::Unknown, _) | (_, Value::Unknown) => T::one(),
                _ => scaled_diff(numeric_view(x), numeric_view(y), stats.sigma),
            },
            MetricKind::Heom => match (x, y) {
                (Value::Unknown, _) | (_, Value::Unknown) => T::one(),
                _ if kind == AttributeKind::Nominal => overlap(code_of(x), code_of(y)),
                _ => rn_diff(numeric_view(x), numeric_view(y), stats.range),
            },
            MetricKind::Hvdm(norm) => match (x, y) {
                (Value::Unknown, _) | (_, Value::Unknown) => T::one(),
                _ if kind == AttributeKind::Nominal => {
                    let px = self.cell_probabilities(attr, x);
                    let py = self.cell_probabilities(attr, y);
                    normalized_vdm(px, py, norm)
                }
                _ => normalized_diff(numeric_view(x), numeric_view(y), stats.sigma),
            },
            MetricKind::Dvdm => vdm_a(
                self.cell_probabilities(attr, x),
                self.cell_probabilities(attr, y),
            ),
            MetricKind::Ivdm => match (x, y) {
                (Value::Number(xv), Value::Number(yv)) if kind == AttributeKind::Continuous => {
                    let table = self.vdm.as_ref().expect("probability table prepared");
                    let px = vdm_stats::interpolate_probs(xv, attr, table, stats);
                    let py = vdm_stats::interpolate_probs(yv, attr, table, stats);
                    vdm_a(&px, &py)
                }
                // Missing values (and all non-continuous attributes) go
                // through the binned cells, including the missing bucket.
                _ => vdm_a(
                    self.cell_probabilities(attr, x),
                    self.cell_probabilities(attr, y),
                ),
            },
            MetricKind::Wvdm => match (x, y) {
                (Value::Number(xv), Value::Number(yv)) if kind == AttributeKind::Continuous => {
                    let window = self.window.as_ref().expect("window table prepared");
                    let px = vdm_stats::wvdm_find_p(xv, attr, window);
                    let py = vdm_stats::wvdm_find_p(yv, attr, window);
                    vdm_a(&px, &py)
                }
                _ => vdm_a(
                    self.cell_probabilities(attr, x),
                    self.cell_probabilities(attr, y),
                ),
            },
        }
    }

    /// Class-probability vector the metric assigns to a value `x` of a
    /// continuous attribute; `None` for metrics without a probability model
    /// over continuous values.
    pub fn class_probabilities(&self, attr: usize, x: T) -> Option<Vec<T>> {
        let stats = &self.stats[attr];
        let kind = self.schema.attributes[attr].kind;
        match self.kind {
            MetricKind::Dvdm => {
                let table = self.vdm.as_ref()?;
                let key = table.cell_key(attr, kind, stats, Value::Number(x));
                Some(table.probabilities(attr, key).to_vec())
            }
            MetricKind::Ivdm => {
                let table = self.vdm.as_ref()?;
                Some(vdm_stats::interpolate_probs(x, attr, table, stats))
            }
            MetricKind::Wvdm => Some(vdm_stats::wvdm_find_p(x, attr, self.window.as_ref()?)),
            _ => None,
        }
    }

    fn cell_probabilities(&self, attr: usize, value: Value<T>) -> &[T] {
        let table = self.vdm.as_ref().expect("probability table prepared");
        let kind = self.schema.attributes[attr].kind;
        table.probabilities(attr, table.cell_key(attr, kind, &self.stats[attr], value))
    }
}

/// Numeric view of a known value: numbers as themselves, nominal codes as
/// their integer value (for the plain-Euclidean baseline).
fn numeric_view<T: Real>(value: Value<T>) -> T {
    match value {
        Value::Number(x) => x,
        Value::Code(c) => T::from_u32(c).expect("code fits in scalar type"),
        Value::Unknown => unreachable!("unknown values are handled before numeric conversion"),
    }
}

fn code_of<T: Real>(value: Value<T>) -> u32 {
    value
        .as_code()
        .expect("nominal attribute values are codes when known")
}
