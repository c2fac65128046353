//! Distance functions for data that mixes nominal and continuous attributes,
//! a nearest-neighbor classifier built on them, and a cross-validated
//! evaluation harness with paired significance testing.
//!
//! The distance functions range from a per-attribute normalized Euclidean
//! baseline through overlap- and deviation-normalized hybrids to a family of
//! class-probability metrics that compare values by the class distributions
//! they predict (binned, interpolated, or estimated with a sliding window).
//! All of them handle missing values and are learned from training data only.
//!
//! Everything is generic over the float width; the `*64`/`*32` aliases pick
//! a concrete scalar type.
//!
//! ```
//! use hetdist_core::classifier::{FitConfig, Model};
//! use hetdist_core::dataset::{parse_data, parse_schema};
//! use hetdist_core::metrics::MetricKind;
//!
//! let schema = parse_schema(
//!     "attribute temp continuous\nattribute coating nominal\nclass quality",
//! )?;
//! let data: hetdist_core::Dataset64 = parse_data(
//!     "18.2,red,good\n19.5,red,good\n22.4,green,bad\n23.8,green,bad",
//!     &schema,
//! )?;
//! let query = data.instances[0].clone();
//! let model = Model::fit(data, MetricKind::Ivdm, &FitConfig::default())?;
//! assert_eq!(model.classify(&query)?, 0);
//! # Ok::<(), hetdist_core::Error>(())
//! ```

pub mod classifier;
pub mod dataset;
pub mod error;
pub mod eval;
pub mod metrics;
pub mod real;
pub mod vdm_stats;

pub use error::{Error, Result};
pub use real::Real;

/// [`dataset::Dataset`] over `f64`.
pub type Dataset64 = dataset::Dataset<f64>;
/// [`dataset::Instance`] over `f64`.
pub type Instance64 = dataset::Instance<f64>;
/// [`metrics::PreparedMetric`] over `f64`.
pub type PreparedMetric64 = metrics::PreparedMetric<f64>;
/// [`classifier::Model`] over `f64`.
pub type Model64 = classifier::Model<f64>;
/// [`eval::EvalReport`] over `f64`.
pub type EvalReport64 = eval::EvalReport<f64>;

/// [`dataset::Dataset`] over `f32`.
pub type Dataset32 = dataset::Dataset<f32>;
/// [`dataset::Instance`] over `f32`.
pub type Instance32 = dataset::Instance<f32>;
/// [`metrics::PreparedMetric`] over `f32`.
pub type PreparedMetric32 = metrics::PreparedMetric<f32>;
/// [`classifier::Model`] over `f32`.
pub type Model32 = classifier::Model<f32>;
/// [`eval::EvalReport`] over `f32`.
pub type EvalReport32 = eval::EvalReport<f32>;
