//! Error type shared by parsing, metric preparation, and evaluation.

use thiserror::Error;

/// Everything that can go wrong while parsing files, preparing metrics, or
/// running evaluations. Line numbers are 1-based positions in the input file.
#[derive(Debug, Error, PartialEq)]
pub enum Error {
    #[error("line {line}: cannot parse schema line `{text}`")]
    SchemaSyntax { line: usize, text: String },
    #[error(
        "line {line}: unknown attribute kind `{kind}` (expected continuous, discrete, or nominal)"
    )]
    UnknownKind { line: usize, kind: String },
    #[error("line {line}: duplicate attribute name `{name}`")]
    DuplicateAttribute { line: usize, name: String },
    #[error("line {line}: repeated `class` declaration")]
    RepeatedClass { line: usize },
    #[error("line {line}: duplicate class label `{label}`")]
    DuplicateClassLabel { line: usize, label: String },
    #[error("schema is missing the `class` declaration")]
    MissingClass,
    #[error("schema declares no attributes")]
    NoAttributes,
    #[error("line {line}: expected {expected} comma-separated fields, found {found}")]
    RowArity {
        line: usize,
        expected: usize,
        found: usize,
    },
    #[error("line {line}: `{token}` is not a finite number (attribute `{attribute}`)")]
    NotANumber {
        line: usize,
        token: String,
        attribute: String,
    },
    #[error("line {line}: the class column may not be unknown (`?`)")]
    UnknownClass { line: usize },
    #[error("line {line}: class label `{label}` is not in the declared set")]
    UndeclaredClassLabel { line: usize, label: String },
    #[error("dataset has no instances")]
    EmptyDataset,
    #[error("dataset defines {found} class label(s); at least 2 are required")]
    TooFewClasses { found: usize },
    #[error("`{name}` is not a metric name (expected euclid, heom, hvdm, hvdm-n1, hvdm-n3, dvdm, ivdm, or wvdm)")]
    UnknownMetric { name: String },
    #[error("instance has {found} values but the schema declares {expected} attributes")]
    SchemaMismatch { expected: usize, found: usize },
    #[error("neighbor count must be at least 1")]
    ZeroNeighbors,
    #[error("neighbor count {count} exceeds training-set size {n}")]
    TooManyNeighbors { count: usize, n: usize },
    #[error("fold count must be at least 2, got {folds}")]
    TooFewFolds { folds: usize },
    #[error("fold count {folds} exceeds instance count {n}")]
    TooManyFolds { folds: usize, n: usize },
    #[error("fold plan covers {expected} instances but the dataset has {found}")]
    PlanMismatch { expected: usize, found: usize },
    #[error("paired test needs at least 2 folds, got {found}")]
    TooFewSamples { found: usize },
    #[error("fold accuracy vectors differ in length: {left} vs {right}")]
    FoldLengthMismatch { left: usize, right: usize },
    #[error("training percentage must be in (0, 100], got {value}")]
    PercentOutOfRange { value: f64 },
}

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
