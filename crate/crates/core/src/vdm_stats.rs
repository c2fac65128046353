//! Class-probability structures behind the value-difference metrics:
//! equal-width binned class counts, midpoint interpolation between bins, and
//! sliding-window per-value estimates.

use std::collections::BTreeMap;

use ordered_float::OrderedFloat;

use crate::dataset::{AttributeKind, AttributeStats, Dataset, Value};
use crate::real::Real;

/// Controls how many equal-width intervals continuous attributes are split
/// into when accumulating class counts.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct DiscretizationConfig {
    /// Fixed interval count; when absent, `max(5, class_count)` is used.
    pub interval_override: Option<u32>,
}

impl DiscretizationConfig {
    /// The interval count in effect for a dataset with `class_count` classes.
    pub fn intervals(&self, class_count: usize) -> u32 {
        self.interval_override
            .unwrap_or_else(|| 5u32.max(class_count as u32))
    }
}

/// Key of one discrete statistics cell within an attribute.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CellKey {
    /// Equal-width interval id (1-based) of a continuous value.
    Interval(u32),
    /// Raw value of a linear-discrete attribute, used as its own bin.
    Exact(OrderedFloat<f64>),
    /// Code of a nominal value.
    Code(u32),
    /// Reserved bucket for missing values, counted like any other cell.
    Missing,
}

#[derive(Clone, Debug)]
struct Cell<T> {
    counts: Vec<u32>,
    total: u32,
    probs: Vec<T>,
}

/// Class-count and class-probability tables for every attribute, keyed by
/// statistics cell: equal-width intervals for continuous attributes, raw
/// values for linear-discrete ones, codes for nominal ones, plus a shared
/// bucket for missing values. Cells never observed report probability zero
/// for every class.
#[derive(Clone, Debug)]
pub struct VdmTable<T> {
    intervals: u32,
    class_count: usize,
    widths: Vec<T>,
    cells: Vec<BTreeMap<CellKey, Cell<T>>>,
    zeros: Vec<T>,
}

impl<T: Real> VdmTable<T> {
    /// Interval count used for continuous attributes.
    pub fn intervals(&self) -> u32 {
        self.intervals
    }

    /// Number of classes the probability vectors cover.
    pub fn class_count(&self) -> usize {
        self.class_count
    }

    /// Equal-interval width of a continuous attribute (0 for other kinds and
    /// for constant attributes).
    pub fn width(&self, attr: usize) -> T {
        self.widths[attr]
    }

    /// Class-probability vector of a cell; all zeros when never observed.
    pub fn probabilities(&self, attr: usize, key: CellKey) -> &[T] {
        self.cells[attr].get(&key).map_or(&self.zeros, |c| &c.probs)
    }

    /// Observation count of a cell for one class.
    pub fn count(&self, attr: usize, key: CellKey, class: usize) -> u32 {
        self.cells[attr].get(&key).map_or(0, |c| c.counts[class])
    }

    /// Total observation count of a cell.
    pub fn total(&self, attr: usize, key: CellKey) -> u32 {
        self.cells[attr].get(&key).map_or(0, |c| c.total)
    }

    /// Keys observed for an attribute, in deterministic ascending order.
    pub fn keys(&self, attr: usize) -> impl Iterator<Item = CellKey> + '_ {
        self.cells[attr].keys().copied()
    }

    /// The statistics cell a value of this attribute falls into.
    pub fn cell_key(
        &self,
        attr: usize,
        kind: AttributeKind,
        stats: &AttributeStats<T>,
        value: Value<T>,
    ) -> CellKey {
        cell_key(kind, stats, self.intervals, self.widths[attr], value)
    }
}

/// Width of one of `s` equal intervals spanning the attribute's range;
/// 0 when the range is empty.
pub fn interval_width<T: Real>(stats: &AttributeStats<T>, s: u32) -> T {
    assert!(s >= 1, "interval count must be positive");
    (stats.max - stats.min).abs() / T::from_count(s as usize)
}

/// Equal-width interval id (1-based, in `[1, s]`) of a known continuous
/// value. The top interval is closed at the maximum; values outside the
/// training range clamp to the nearest interval; a zero width maps every
/// value to interval 1.
pub fn discretize<T: Real>(x: T, stats: &AttributeStats<T>, s: u32, width: T) -> u32 {
    if width <= T::zero() {
        return 1;
    }
    if x >= stats.max {
        return s;
    }
    let raw = ((x - stats.min) / width).floor();
    let top = T::from_count((s - 1) as usize);
    let clamped = raw.max(T::zero()).min(top);
    clamped.to_u32().expect("interval id fits in u32") + 1
}

/// The statistics cell a value falls into: interval for continuous values,
/// the raw value for linear-discrete ones, the code for nominal ones, and
/// the shared missing bucket for unknowns.
pub fn cell_key<T: Real>(
    kind: AttributeKind,
    stats: &AttributeStats<T>,
    s: u32,
    width: T,
    value: Value<T>,
) -> CellKey {
    match (value, kind) {
        (Value::Unknown, _) => CellKey::Missing,
        (Value::Number(x), AttributeKind::Continuous) => {
            CellKey::Interval(discretize(x, stats, s, width))
        }
        (Value::Number(x), _) => {
            CellKey::Exact(OrderedFloat(x.to_f64().expect("value convertible to f64")))
        }
        (Value::Code(c), _) => CellKey::Code(c),
    }
}

/// Accumulates class counts per attribute cell over the training instances
/// and converts them into class-conditional probabilities `count / total`.
pub fn learn_p<T: Real>(train: &Dataset<T>, config: &DiscretizationConfig) -> VdmTable<T> {
    let class_count = train.schema.class_count();
    let s = config.intervals(class_count);
    let m = train.schema.attribute_count();
    let mut widths = Vec::with_capacity(m);
    let mut cells: Vec<BTreeMap<CellKey, Cell<T>>> = vec![BTreeMap::new(); m];
    for (a, attribute_cells) in cells.iter_mut().enumerate() {
        let kind = train.schema.attributes[a].kind;
        let width = if kind == AttributeKind::Continuous {
            interval_width(&train.stats[a], s)
        } else {
            T::zero()
        };
        widths.push(width);
        for inst in &train.instances {
            let key = cell_key(kind, &train.stats[a], s, width, inst.values[a]);
            let cell = attribute_cells.entry(key).or_insert_with(|| Cell {
                counts: vec![0; class_count],
                total: 0,
                probs: vec![T::zero(); class_count],
            });
            cell.counts[inst.class_index] += 1;
            cell.total += 1;
        }
        for cell in attribute_cells.values_mut() {
            let total = T::from_count(cell.total as usize);
            for (p, &n) in cell.probs.iter_mut().zip(&cell.counts) {
                *p = T::from_count(n as usize) / total;
            }
        }
    }
    VdmTable {
        intervals: s,
        class_count,
        widths,
        cells,
        zeros: vec![T::zero(); class_count],
    }
}

/// Center of interval `u`; `u = 0` and `u = s + 1` address the virtual outer
/// intervals that carry probability zero.
pub fn midpoint<T: Real>(stats: &AttributeStats<T>, width: T, u: u32) -> T {
    stats.min + width * (T::from_count(u as usize) - T::from_constant(0.5))
}

/// Class-probability vector at `x`, linearly interpolated between the centers
/// of the two nearest intervals. Beyond the outermost centers the vector
/// fades to zero at the virtual neighbors half an interval outside the range;
/// past those it stays zero. A zero width degenerates to a plain lookup.
pub fn interpolate_probs<T: Real>(
    x: T,
    attr: usize,
    table: &VdmTable<T>,
    stats: &AttributeStats<T>,
) -> Vec<T> {
    let width = table.width(attr);
    let c = table.class_count();
    if width <= T::zero() {
        return table.probabilities(attr, CellKey::Interval(1)).to_vec();
    }
    let mut u = discretize(x, stats, table.intervals(), width);
    if x < midpoint(stats, width, u) {
        u -= 1;
    }
    let lo_mid = midpoint(stats, width, u);
    let hi_mid = midpoint(stats, width, u + 1);
    let t = ((x - lo_mid) / (hi_mid - lo_mid))
        .max(T::zero())
        .min(T::one());
    // Interval ids 0 and s + 1 are never stored, so these lookups return the
    // all-zero vector exactly when a virtual neighbor is addressed.
    let lo = table.probabilities(attr, CellKey::Interval(u));
    let hi = table.probabilities(attr, CellKey::Interval(u + 1));
    (0..c).map(|i| lo[i] + t * (hi[i] - lo[i])).collect()
}

/// Single-class view of [`interpolate_probs`].
pub fn interpolate_p<T: Real>(
    x: T,
    attr: usize,
    class: usize,
    table: &VdmTable<T>,
    stats: &AttributeStats<T>,
) -> T {
    interpolate_probs(x, attr, table, stats)[class]
}

#[derive(Clone, Debug)]
struct WindowEntry<T> {
    width: T,
    min: T,
    max: T,
    /// Strictly ascending distinct known values.
    values: Vec<T>,
    /// Probability vectors parallel to `values`.
    probs: Vec<Vec<T>>,
}

/// Per-value class probabilities of continuous attributes, estimated by a
/// sliding window centered on each distinct training value. Non-continuous
/// attributes (and continuous ones with no known values) have no entry.
#[derive(Clone, Debug)]
pub struct WindowTable<T> {
    class_count: usize,
    attrs: Vec<Option<WindowEntry<T>>>,
    zeros: Vec<T>,
}

impl<T: Real> WindowTable<T> {
    /// Number of classes the probability vectors cover.
    pub fn class_count(&self) -> usize {
        self.class_count
    }

    /// Whether the attribute has a window estimate.
    pub fn has_attribute(&self, attr: usize) -> bool {
        self.attrs[attr].is_some()
    }

    /// Window width of the attribute (0 when absent or constant).
    pub fn width(&self, attr: usize) -> T {
        self.attrs[attr].as_ref().map_or(T::zero(), |e| e.width)
    }

    /// Sorted distinct training values of the attribute (empty when absent).
    pub fn stored_values(&self, attr: usize) -> &[T] {
        self.attrs[attr].as_ref().map_or(&[], |e| &e.values)
    }

    /// Probability vectors parallel to [`stored_values`](Self::stored_values).
    pub fn stored_probs(&self, attr: usize) -> &[Vec<T>] {
        self.attrs[attr].as_ref().map_or(&[], |e| &e.probs)
    }
}

/// Estimates, for every distinct known value `x` of every continuous
/// attribute, the class distribution of training instances falling in the
/// half-open window `[x − w/2, x + w/2)`, where `w` is the equal-interval
/// width. One sorted sweep per attribute; duplicate values share one stored
/// vector. A zero width (constant attribute) counts exactly the instances
/// equal to the center.
pub fn learn_wvdm<T: Real>(train: &Dataset<T>, config: &DiscretizationConfig) -> WindowTable<T> {
    let class_count = train.schema.class_count();
    let s = config.intervals(class_count);
    let m = train.schema.attribute_count();
    let mut attrs: Vec<Option<WindowEntry<T>>> = Vec::with_capacity(m);
    for a in 0..m {
        if train.schema.attributes[a].kind != AttributeKind::Continuous {
            attrs.push(None);
            continue;
        }
        let mut pairs: Vec<(T, usize)> = train
            .instances
            .iter()
            .filter_map(|inst| inst.values[a].as_number().map(|x| (x, inst.class_index)))
            .collect();
        if pairs.is_empty() {
            attrs.push(None);
            continue;
        }
        pairs.sort_by(|p, q| p.0.partial_cmp(&q.0).expect("values are not NaN"));
        let width = interval_width(&train.stats[a], s);
        let half = width / T::from_constant(2.0);
        let n = pairs.len();
        let mut values = Vec::new();
        let mut probs = Vec::new();
        let mut counts = vec![0u32; class_count];
        let (mut lo, mut hi) = (0usize, 0usize);
        let mut i = 0;
        while i < n {
            let x = pairs[i].0;
            if width > T::zero() {
                let upper = x + half;
                let lower = x - half;
                while hi < n && pairs[hi].0 < upper {
                    counts[pairs[hi].1] += 1;
                    hi += 1;
                }
                while lo < hi && pairs[lo].0 < lower {
                    counts[pairs[lo].1] -= 1;
                    lo += 1;
                }
            } else {
                while hi < n && pairs[hi].0 <= x {
                    counts[pairs[hi].1] += 1;
                    hi += 1;
                }
                while lo < hi && pairs[lo].0 < x {
                    counts[pairs[lo].1] -= 1;
                    lo += 1;
                }
            }
            let total = T::from_count(hi - lo);
            values.push(x);
            probs.push(
                counts
                    .iter()
                    .map(|&c| T::from_count(c as usize) / total)
                    .collect(),
            );
            while i < n && pairs[i].0 == x {
                i += 1;
            }
        }
        attrs.push(Some(WindowEntry {
            width,
            min: train.stats[a].min,
            max: train.stats[a].max,
            values,
            probs,
        }));
    }
    WindowTable {
        class_count,
        attrs,
        zeros: vec![T::zero(); class_count],
    }
}

/// Probability vector at `x`: the stored vector at training values, linear
/// interpolation between adjacent ones, fading to zero half a window beyond
/// the extremes, and staying zero past that. Lookup is a binary search.
pub fn wvdm_find_p<T: Real>(x: T, attr: usize, table: &WindowTable<T>) -> Vec<T> {
    let Some(entry) = table.attrs[attr].as_ref() else {
        return table.zeros.clone();
    };
    let vals = &entry.values;
    let i = vals.partition_point(|v| *v < x);
    if i < vals.len() && vals[i] == x {
        return entry.probs[i].clone();
    }
    let half = entry.width / T::from_constant(2.0);
    let (x1, p1, x2, p2): (T, Option<&Vec<T>>, T, Option<&Vec<T>>) = if i == 0 {
        (entry.min - half, None, vals[0], Some(&entry.probs[0]))
    } else if i == vals.len() {
        (
            vals[i - 1],
            Some(&entry.probs[i - 1]),
            entry.max + half,
            None,
        )
    } else {
        (
            vals[i - 1],
            Some(&entry.probs[i - 1]),
            vals[i],
            Some(&entry.probs[i]),
        )
    };
    if x2 <= x1 {
        return table.zeros.clone();
    }
    let t = ((x - x1) / (x2 - x1)).max(T::zero()).min(T::one());
    (0..table.class_count)
        .map(|c| {
            let a = p1.map_or(T::zero(), |p| p[c]);
            let b = p2.map_or(T::zero(), |p| p[c]);
            a + t * (b - a)
        })
        .collect()
}

/// `points` evenly spaced values covering `[lo, hi]`, endpoints included.
pub fn uniform_grid<T: Real>(lo: T, hi: T, points: usize) -> Vec<T> {
    assert!(points >= 2, "grid needs at least two points");
    let last = T::from_count(points - 1);
    (0..points)
        .map(|i| lo + (hi - lo) * T::from_count(i) / last)
        .collect()
}
