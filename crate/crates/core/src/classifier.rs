//! Nearest-neighbor classification over a prepared distance function.

use crate::dataset::{Dataset, Instance};
use crate::error::{Error, Result};
use crate::metrics::{MetricKind, PreparedMetric};
use crate::real::Real;
use crate::vdm_stats::DiscretizationConfig;

/// Training options for [`Model::fit`].
#[derive(Clone, Debug)]
pub struct FitConfig {
    /// Number of neighbors consulted per query.
    pub k: usize,
    /// Binning options forwarded to the probability tables.
    pub discretization: DiscretizationConfig,
}

impl Default for FitConfig {
    fn default() -> Self {
        FitConfig {
            k: 1,
            discretization: DiscretizationConfig::default(),
        }
    }
}

/// A fitted nearest-neighbor classifier: the training instances plus the
/// distance function prepared from them.
#[derive(Clone, Debug)]
pub struct Model<T> {
    train: Dataset<T>,
    metric: PreparedMetric<T>,
    k: usize,
}

impl<T: Real> Model<T> {
    /// Stores the training set and learns whatever the metric needs from it.
    pub fn fit(train: Dataset<T>, kind: MetricKind, config: &FitConfig) -> Result<Self> {
        let n = train.instance_count();
        if n == 0 {
            return Err(Error::EmptyDataset);
        }
        if config.k == 0 {
            return Err(Error::ZeroNeighbors);
        }
        if config.k > n {
            return Err(Error::TooManyNeighbors { count: config.k, n });
        }
        let metric = PreparedMetric::prepare(&train, kind, &config.discretization);
        Ok(Model {
            train,
            metric,
            k: config.k,
        })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn metric(&self) -> &PreparedMetric<T> {
        &self.metric
    }

    pub fn train(&self) -> &Dataset<T> {
        &self.train
    }

    /// The `count` training instances closest to `x`, as
    /// `(train_index, squared_sum_distance)` pairs ordered by ascending
    /// distance with ties broken by ascending index. Returns all instances
    /// when `count` exceeds the training size.
    pub fn nearest(&self, x: &Instance<T>, count: usize) -> Result<Vec<(usize, T)>> {
        let mut ranked: Vec<(usize, T)> = self
            .train
            .instances
            .iter()
            .enumerate()
            .map(|(i, y)| Ok((i, self.metric.distance(x, y)?)))
            .collect::<Result<_>>()?;
        ranked.sort_by(|a, b| {
            a.1.partial_cmp(&b.1)
                .expect("distances are not NaN")
                .then(a.0.cmp(&b.0))
        });
        ranked.truncate(count);
        Ok(ranked)
    }

    /// Predicted class index for `x` by majority vote among the `k` nearest
    /// training instances. Vote ties go to the class of the closest tied
    /// neighbor.
    pub fn classify(&self, x: &Instance<T>) -> Result<usize> {
        let neighbors = self.nearest(x, self.k)?;
        let class_count = self.train.schema.class_count();
        let mut votes = vec![0usize; class_count];
        let mut first_rank = vec![usize::MAX; class_count];
        for (rank, &(index, _)) in neighbors.iter().enumerate() {
            let class = self.train.instances[index].class_index;
            votes[class] += 1;
            if first_rank[class] == usize::MAX {
                first_rank[class] = rank;
            }
        }
        let mut best = None;
        for c in 0..class_count {
            if votes[c] == 0 {
                continue;
            }
            best = Some(match best {
                None => c,
                Some(b) => {
                    if votes[c] > votes[b]
                        || (votes[c] == votes[b] && first_rank[c] < first_rank[b])
                    {
                        c
                    } else {
                        b
                    }
                }
            });
        }
        Ok(best.expect("at least one neighbor voted"))
    }
}
