//! Schema/data parsing, value encoding, and per-attribute statistics.
//!
//! Schema files are line-oriented UTF-8: one `attribute <name> <kind>` line
//! per column (kinds: `continuous`, `discrete`, `nominal`), one
//! `class <name> [label ...]` line, and `#` comment lines. Data files are
//! comma-separated with no header, one instance per line, the class label in
//! the last column, and `?` marking unknown values.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::real::Real;

/// How an attribute's values behave: continuous measurements, ordered
/// integers, or unordered symbols.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum AttributeKind {
    /// Real-valued measurement (e.g. a length in centimeters).
    Continuous,
    /// Integer-valued with meaningful order (e.g. a count or a grade).
    LinearDiscrete,
    /// Symbolic with no inherent order (e.g. a color).
    Nominal,
}

impl AttributeKind {
    /// Whether values of this kind are numbers with meaningful order.
    pub fn is_linear(self) -> bool {
        matches!(
            self,
            AttributeKind::Continuous | AttributeKind::LinearDiscrete
        )
    }

    /// The keyword used for this kind in schema files.
    pub fn keyword(self) -> &'static str {
        match self {
            AttributeKind::Continuous => "continuous",
            AttributeKind::LinearDiscrete => "discrete",
            AttributeKind::Nominal => "nominal",
        }
    }
}

/// A named, typed column of the data file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Attribute {
    pub name: String,
    pub kind: AttributeKind,
}

/// Declares the attribute columns and the class labels of a dataset.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Schema {
    /// Input attributes, in column order.
    pub attributes: Vec<Attribute>,
    /// Name of the class column (always the last column of a data row).
    pub class_name: String,
    /// Class labels in declaration or discovery order; positions define the
    /// class indices. Empty until data is parsed when the schema file does
    /// not enumerate labels.
    pub class_labels: Vec<String>,
}

impl Schema {
    /// Number of input attributes.
    pub fn attribute_count(&self) -> usize {
        self.attributes.len()
    }

    /// Number of classes.
    pub fn class_count(&self) -> usize {
        self.class_labels.len()
    }

    /// Index of a class label, if present.
    pub fn class_index(&self, label: &str) -> Option<usize> {
        self.class_labels.iter().position(|l| l == label)
    }
}

/// One cell of a data row.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Value<T> {
    /// Known numeric value of a continuous or linear-discrete attribute.
    Number(T),
    /// Known nominal value, encoded as a dense code assigned in
    /// first-appearance order.
    Code(u32),
    /// Missing value (`?` in the data file).
    Unknown,
}

impl<T: Copy> Value<T> {
    pub fn is_unknown(&self) -> bool {
        matches!(self, Value::Unknown)
    }

    pub fn as_number(&self) -> Option<T> {
        match self {
            Value::Number(x) => Some(*x),
            _ => None,
        }
    }

    pub fn as_code(&self) -> Option<u32> {
        match self {
            Value::Code(c) => Some(*c),
            _ => None,
        }
    }
}

/// One data row: encoded attribute values plus the class index.
#[derive(Clone, Debug, PartialEq)]
pub struct Instance<T> {
    pub values: Vec<Value<T>>,
    pub class_index: usize,
}

/// Summary statistics of one attribute over the known values of a dataset.
/// Nominal attributes are summarized over their integer codes, which gives
/// the plain-Euclidean baseline something to normalize by.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AttributeStats<T> {
    pub min: T,
    pub max: T,
    /// `max - min`; 0 for constant or degenerate attributes.
    pub range: T,
    pub mean: T,
    /// Population standard deviation (divides by the count, not count − 1).
    pub sigma: T,
    /// Distinct nominal codes observed (0 for numeric attributes).
    pub observed_codes: u32,
    /// Known (non-missing) values covered; 0 marks a degenerate attribute
    /// whose numeric fields are all zero.
    pub known: usize,
}

/// A parsed dataset: schema, encoded instances, and per-attribute statistics.
///
/// Immutable after construction; share freely across threads.
#[derive(Clone, Debug)]
pub struct Dataset<T> {
    pub schema: Schema,
    pub instances: Vec<Instance<T>>,
    pub stats: Vec<AttributeStats<T>>,
    /// Per attribute: code → original token, for nominal attributes.
    nominal_tokens: Vec<Vec<String>>,
}

impl<T: Real> Dataset<T> {
    /// Number of instances.
    pub fn instance_count(&self) -> usize {
        self.instances.len()
    }

    /// Original text token behind a nominal code, if known.
    pub fn nominal_token(&self, attr: usize, code: u32) -> Option<&str> {
        self.nominal_tokens
            .get(attr)?
            .get(code as usize)
            .map(String::as_str)
    }

    /// Serializes the instances back into the comma-separated data-file
    /// format. Re-parsing the result against the same schema reproduces
    /// identical codes, statistics, and instance order.
    pub fn to_data_text(&self) -> String {
        let mut out = String::new();
        for inst in &self.instances {
            for (a, v) in inst.values.iter().enumerate() {
                match v {
                    Value::Number(x) => out.push_str(&format!("{x}")),
                    Value::Code(c) => match self.nominal_token(a, *c) {
                        Some(token) => out.push_str(token),
                        None => out.push_str(&format!("v{c}")),
                    },
                    Value::Unknown => out.push('?'),
                }
                out.push(',');
            }
            out.push_str(&self.schema.class_labels[inst.class_index]);
            out.push('\n');
        }
        out
    }

    /// New dataset over the selected instances, with statistics recomputed
    /// from the selection only (so held-out data never leaks into them).
    pub fn subset(&self, indices: &[usize]) -> Dataset<T> {
        let instances: Vec<Instance<T>> =
            indices.iter().map(|&i| self.instances[i].clone()).collect();
        let stats = compute_stats(&self.schema, &instances);
        Dataset {
            schema: self.schema.clone(),
            instances,
            stats,
            nominal_tokens: self.nominal_tokens.clone(),
        }
    }
}

/// Parses a schema file. Attributes keep file order; the `class` line may
/// enumerate the labels or leave them to be discovered from the data.
pub fn parse_schema(text: &str) -> Result<Schema> {
    let mut attributes: Vec<Attribute> = Vec::new();
    let mut class: Option<(String, Vec<String>)> = None;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let tokens: Vec<&str> = trimmed.split_whitespace().collect();
        match tokens[0] {
            "attribute" => {
                if tokens.len() != 3 {
                    return Err(Error::SchemaSyntax {
                        line,
                        text: trimmed.to_string(),
                    });
                }
                let kind = match tokens[2] {
                    "continuous" => AttributeKind::Continuous,
                    "discrete" => AttributeKind::LinearDiscrete,
                    "nominal" => AttributeKind::Nominal,
                    other => {
                        return Err(Error::UnknownKind {
                            line,
                            kind: other.to_string(),
                        })
                    }
                };
                let name = tokens[1].to_string();
                if attributes.iter().any(|a| a.name == name) {
                    return Err(Error::DuplicateAttribute { line, name });
                }
                attributes.push(Attribute { name, kind });
            }
            "class" => {
                if tokens.len() < 2 {
                    return Err(Error::SchemaSyntax {
                        line,
                        text: trimmed.to_string(),
                    });
                }
                if class.is_some() {
                    return Err(Error::RepeatedClass { line });
                }
                let labels: Vec<String> = tokens[2..].iter().map(|s| s.to_string()).collect();
                for (j, label) in labels.iter().enumerate() {
                    if labels[..j].contains(label) {
                        return Err(Error::DuplicateClassLabel {
                            line,
                            label: label.clone(),
                        });
                    }
                }
                class = Some((tokens[1].to_string(), labels));
            }
            other => {
                return Err(Error::SchemaSyntax {
                    line,
                    text: other.to_string(),
                })
            }
        }
    }
    let (class_name, class_labels) = class.ok_or(Error::MissingClass)?;
    if attributes.is_empty() {
        return Err(Error::NoAttributes);
    }
    Ok(Schema {
        attributes,
        class_name,
        class_labels,
    })
}

/// Parses a data file against a schema. Nominal codes are assigned in
/// first-appearance order; class labels are matched against the schema's
/// enumeration when present, otherwise collected in discovery order.
pub fn parse_data<T: Real>(text: &str, schema: &Schema) -> Result<Dataset<T>> {
    let m = schema.attribute_count();
    let enumerated = !schema.class_labels.is_empty();
    let mut class_labels = schema.class_labels.clone();
    let mut nominal_tokens: Vec<Vec<String>> = vec![Vec::new(); m];
    let mut instances: Vec<Instance<T>> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() {
            continue;
        }
        let fields: Vec<&str> = trimmed.split(',').map(str::trim).collect();
        if fields.len() != m + 1 {
            return Err(Error::RowArity {
                line,
                expected: m + 1,
                found: fields.len(),
            });
        }
        let mut values = Vec::with_capacity(m);
        for (a, field) in fields[..m].iter().enumerate() {
            let attr = &schema.attributes[a];
            let value = if *field == "?" {
                Value::Unknown
            } else if attr.kind.is_linear() {
                let parsed: T = field
                    .parse()
                    .ok()
                    .filter(|x: &T| x.is_finite())
                    .ok_or_else(|| Error::NotANumber {
                        line,
                        token: field.to_string(),
                        attribute: attr.name.clone(),
                    })?;
                Value::Number(parsed)
            } else {
                let tokens = &mut nominal_tokens[a];
                let code = tokens.iter().position(|t| t == field).unwrap_or_else(|| {
                    tokens.push(field.to_string());
                    tokens.len() - 1
                });
                Value::Code(code as u32)
            };
            values.push(value);
        }
        let label = fields[m];
        if label == "?" {
            return Err(Error::UnknownClass { line });
        }
        let class_index = match class_labels.iter().position(|l| l == label) {
            Some(idx) => idx,
            None if enumerated => {
                return Err(Error::UndeclaredClassLabel {
                    line,
                    label: label.to_string(),
                })
            }
            None => {
                class_labels.push(label.to_string());
                class_labels.len() - 1
            }
        };
        instances.push(Instance {
            values,
            class_index,
        });
    }
    if instances.is_empty() {
        return Err(Error::EmptyDataset);
    }
    if class_labels.len() < 2 {
        return Err(Error::TooFewClasses {
            found: class_labels.len(),
        });
    }
    let schema = Schema {
        attributes: schema.attributes.clone(),
        class_name: schema.class_name.clone(),
        class_labels,
    };
    let stats = compute_stats(&schema, &instances);
    Ok(Dataset {
        schema,
        instances,
        stats,
        nominal_tokens,
    })
}

/// Per-attribute min/max/range/mean/σ over known values (σ is the population
/// form). Attributes with no known value come back degenerate: all zeros.
pub fn compute_stats<T: Real>(
    schema: &Schema,
    instances: &[Instance<T>],
) -> Vec<AttributeStats<T>> {
    (0..schema.attribute_count())
        .map(|a| {
            let mut known_values: Vec<T> = Vec::new();
            let mut codes: BTreeSet<u32> = BTreeSet::new();
            for inst in instances {
                match inst.values[a] {
                    Value::Number(x) => known_values.push(x),
                    Value::Code(c) => {
                        codes.insert(c);
                        known_values.push(T::from_u32(c).expect("code fits in scalar type"));
                    }
                    Value::Unknown => {}
                }
            }
            let known = known_values.len();
            if known == 0 {
                return AttributeStats {
                    min: T::zero(),
                    max: T::zero(),
                    range: T::zero(),
                    mean: T::zero(),
                    sigma: T::zero(),
                    observed_codes: 0,
                    known: 0,
                };
            }
            let mut min = known_values[0];
            let mut max = known_values[0];
            for &x in &known_values[1..] {
                if x < min {
                    min = x;
                }
                if x > max {
                    max = x;
                }
            }
            let count = T::from_count(known);
            // Clamp the mean into [min, max]: mathematically it always is, but
            // naive summation can place it a few ulps outside.
            let mean = (known_values.iter().copied().sum::<T>() / count)
                .max(min)
                .min(max);
            let variance = known_values
                .iter()
                .map(|&x| (x - mean) * (x - mean))
                .sum::<T>()
                / count;
            AttributeStats {
                min,
                max,
                range: max - min,
                mean,
                sigma: variance.sqrt(),
                observed_codes: codes.len() as u32,
                known,
            }
        })
        .collect()
}
