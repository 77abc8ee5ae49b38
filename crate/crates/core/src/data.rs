//! Schemas, weighted datasets and the C4.5 `.names` / `.data` file formats.
//!
//! A [`Dataset`] is immutable once built. Induction works on [`CaseSet`]s,
//! lists of `(case index, weight)` pairs into a dataset, so that cases with
//! unknown values can be split fractionally across the outcomes of a test
//! without copying the cases themselves.

use std::collections::{HashMap, HashSet};
use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum AttributeKind {
    Continuous,
    /// Unordered nominal values, in declaration order.
    Discrete(Vec<String>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AttributeDecl {
    pub name: String,
    pub kind: AttributeKind,
}

impl AttributeDecl {
    pub fn continuous(name: impl Into<String>) -> Self {
        AttributeDecl {
            name: name.into(),
            kind: AttributeKind::Continuous,
        }
    }

    pub fn discrete<S: Into<String>>(
        name: impl Into<String>,
        values: impl IntoIterator<Item = S>,
    ) -> Self {
        AttributeDecl {
            name: name.into(),
            kind: AttributeKind::Discrete(values.into_iter().map(Into::into).collect()),
        }
    }

    pub fn is_continuous(&self) -> bool {
        matches!(self.kind, AttributeKind::Continuous)
    }

    /// Number of declared values of a discrete attribute.
    pub fn arity(&self) -> Option<usize> {
        match &self.kind {
            AttributeKind::Continuous => None,
            AttributeKind::Discrete(values) => Some(values.len()),
        }
    }

    pub fn values(&self) -> &[String] {
        match &self.kind {
            AttributeKind::Continuous => &[],
            AttributeKind::Discrete(values) => values,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Schema {
    attributes: Vec<AttributeDecl>,
    classes: Vec<String>,
}

impl Schema {
    pub fn new(attributes: Vec<AttributeDecl>, classes: Vec<String>) -> Result<Self> {
        if classes.is_empty() {
            return Err(Error::Schema("empty class list".into()));
        }
        let mut seen = HashSet::new();
        for class in &classes {
            if class.is_empty() {
                return Err(Error::Schema("empty class label".into()));
            }
            if !seen.insert(class.as_str()) {
                return Err(Error::Schema(format!("duplicate class label {class:?}")));
            }
        }
        let mut names = HashSet::new();
        for attr in &attributes {
            if attr.name.is_empty() {
                return Err(Error::Schema("empty attribute name".into()));
            }
            if !names.insert(attr.name.as_str()) {
                return Err(Error::Schema(format!(
                    "duplicate attribute name {:?}",
                    attr.name
                )));
            }
            if let AttributeKind::Discrete(values) = &attr.kind {
                if values.is_empty() {
                    return Err(Error::Schema(format!(
                        "attribute {:?} has no values",
                        attr.name
                    )));
                }
                let mut vs = HashSet::new();
                for v in values {
                    if v.is_empty() {
                        return Err(Error::Schema(format!(
                            "attribute {:?} has an empty value",
                            attr.name
                        )));
                    }
                    if !vs.insert(v.as_str()) {
                        return Err(Error::Schema(format!(
                            "attribute {:?} declares value {v:?} twice",
                            attr.name
                        )));
                    }
                }
            }
        }
        Ok(Schema {
            attributes,
            classes,
        })
    }

    pub fn attributes(&self) -> &[AttributeDecl] {
        &self.attributes
    }

    pub fn attribute(&self, index: usize) -> &AttributeDecl {
        &self.attributes[index]
    }

    pub fn attribute_index(&self, name: &str) -> Option<usize> {
        self.attributes.iter().position(|a| a.name == name)
    }

    pub fn classes(&self) -> &[String] {
        &self.classes
    }

    pub fn num_classes(&self) -> usize {
        self.classes.len()
    }

    pub fn class_index(&self, label: &str) -> Option<usize> {
        self.classes.iter().position(|c| c == label)
    }

    pub fn has_continuous(&self) -> bool {
        self.attributes.iter().any(AttributeDecl::is_continuous)
    }
}

/// One attribute value of a case.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum Value {
    Number(f64),
    /// Index into the attribute's declared value list.
    Category(usize),
    Unknown,
}

impl Value {
    pub fn is_unknown(&self) -> bool {
        matches!(self, Value::Unknown)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Case {
    pub values: Vec<Value>,
    pub class: usize,
    pub weight: f64,
}

impl Case {
    pub fn new(values: Vec<Value>, class: usize) -> Self {
        Case {
            values,
            class,
            weight: 1.0,
        }
    }
}

/// A reference to a case of a dataset together with the weight it carries in
/// the current working set.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WeightedCase {
    pub index: usize,
    pub weight: f64,
}

pub type CaseSet = Vec<WeightedCase>;

#[derive(Clone, Debug, PartialEq)]
pub struct Dataset {
    schema: Arc<Schema>,
    cases: Vec<Case>,
}

impl Dataset {
    pub fn new(schema: impl Into<Arc<Schema>>, cases: Vec<Case>) -> Result<Self> {
        let schema = schema.into();
        for (i, case) in cases.iter().enumerate() {
            check_case(&schema, case).map_err(|m| Error::Dataset(format!("case {i}: {m}")))?;
        }
        Ok(Dataset { schema, cases })
    }

    pub fn schema(&self) -> &Schema {
        &self.schema
    }

    pub fn shared_schema(&self) -> Arc<Schema> {
        Arc::clone(&self.schema)
    }

    pub fn cases(&self) -> &[Case] {
        &self.cases
    }

    pub fn case(&self, index: usize) -> &Case {
        &self.cases[index]
    }

    pub fn len(&self) -> usize {
        self.cases.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cases.is_empty()
    }

    /// Every case, at its own weight.
    pub fn case_set(&self) -> CaseSet {
        self.cases
            .iter()
            .enumerate()
            .map(|(index, c)| WeightedCase {
                index,
                weight: c.weight,
            })
            .collect()
    }

    /// The given cases, at their own weights.
    pub fn case_set_of(&self, indices: &[usize]) -> CaseSet {
        indices
            .iter()
            .map(|&index| WeightedCase {
                index,
                weight: self.cases[index].weight,
            })
            .collect()
    }

    /// A new dataset holding copies of the selected cases, in the given order.
    pub fn select(&self, indices: &[usize]) -> Dataset {
        Dataset {
            schema: Arc::clone(&self.schema),
            cases: indices.iter().map(|&i| self.cases[i].clone()).collect(),
        }
    }

    pub fn total_weight(&self) -> f64 {
        self.cases.iter().map(|c| c.weight).sum()
    }

    pub fn class_distribution(&self) -> Vec<f64> {
        class_distribution(self, &self.case_set())
    }
}

fn check_case(schema: &Schema, case: &Case) -> std::result::Result<(), String> {
    if case.values.len() != schema.attributes.len() {
        return Err(format!(
            "{} values for {} attributes",
            case.values.len(),
            schema.attributes.len()
        ));
    }
    if case.class >= schema.num_classes() {
        return Err(format!("class index {} out of range", case.class));
    }
    if !(case.weight > 0.0 && case.weight.is_finite()) {
        return Err(format!("weight {} is not positive", case.weight));
    }
    for (attr, value) in schema.attributes.iter().zip(&case.values) {
        match (&attr.kind, value) {
            (_, Value::Unknown) => {}
            (AttributeKind::Continuous, Value::Number(x)) if x.is_finite() => {}
            (AttributeKind::Discrete(vs), Value::Category(i)) if *i < vs.len() => {}
            _ => return Err(format!("bad value {value:?} for attribute {:?}", attr.name)),
        }
    }
    Ok(())
}

/// Summed case weight per class.
pub fn class_distribution(dataset: &Dataset, cases: &[WeightedCase]) -> Vec<f64> {
    let mut dist = vec![0.0; dataset.schema.num_classes()];
    for wc in cases {
        dist[dataset.cases[wc.index].class] += wc.weight;
    }
    dist
}

pub fn total_weight(cases: &[WeightedCase]) -> f64 {
    cases.iter().map(|c| c.weight).sum()
}

/// Index of the largest entry; ties go to the lowest index.
pub fn argmax(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, &v) in values.iter().enumerate() {
        if v > values[best] {
            best = i;
        }
    }
    best
}

/// A test on a single attribute.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum Test {
    /// `A = ?`, one outcome per declared value.
    Discrete { attribute: usize, arity: usize },
    /// `A <= threshold`; outcome 0 is true, outcome 1 is false.
    Threshold { attribute: usize, threshold: f64 },
}

impl Test {
    pub fn attribute(&self) -> usize {
        match *self {
            Test::Discrete { attribute, .. } | Test::Threshold { attribute, .. } => attribute,
        }
    }

    pub fn outcomes(&self) -> usize {
        match *self {
            Test::Discrete { arity, .. } => arity,
            Test::Threshold { .. } => 2,
        }
    }

    pub fn threshold(&self) -> Option<f64> {
        match *self {
            Test::Threshold { threshold, .. } => Some(threshold),
            Test::Discrete { .. } => None,
        }
    }

    /// Outcome taken by a case, or `None` when the tested value is unknown.
    pub fn outcome(&self, case: &Case) -> Option<usize> {
        match (*self, case.values[self.attribute()]) {
            (_, Value::Unknown) => None,
            (Test::Discrete { .. }, Value::Category(v)) => Some(v),
            (Test::Threshold { threshold, .. }, Value::Number(x)) => {
                Some(if x <= threshold { 0 } else { 1 })
            }
            (test, value) => panic!("test {test:?} applied to incompatible value {value:?}"),
        }
    }
}

/// Splits `cases` by the outcome of `test`.
///
/// A case whose tested value is unknown goes down every outcome, its weight
/// scaled by that outcome's share of the known-value weight. Zero-weight
/// fragments are dropped.
pub fn partition_by_test(dataset: &Dataset, cases: &[WeightedCase], test: &Test) -> Vec<CaseSet> {
    let k = test.outcomes();
    let mut subsets: Vec<CaseSet> = vec![Vec::new(); k];
    let mut known = vec![0.0; k];
    let mut unknown = Vec::new();
    for wc in cases {
        match test.outcome(&dataset.cases[wc.index]) {
            Some(o) => {
                known[o] += wc.weight;
                subsets[o].push(*wc);
            }
            None => unknown.push(*wc),
        }
    }
    if unknown.is_empty() {
        return subsets;
    }
    let known_total: f64 = known.iter().sum();
    let shares: Vec<f64> = if known_total > 0.0 {
        known.iter().map(|w| w / known_total).collect()
    } else {
        vec![1.0 / k as f64; k]
    };
    for wc in unknown {
        for (subset, &share) in subsets.iter_mut().zip(&shares) {
            let weight = wc.weight * share;
            if weight > 0.0 {
                subset.push(WeightedCase {
                    index: wc.index,
                    weight,
                });
            }
        }
    }
    subsets
}

/// Removes a `|` comment and surrounding whitespace.
fn strip_comment(line: &str) -> &str {
    match line.find('|') {
        Some(p) => line[..p].trim(),
        None => line.trim(),
    }
}

fn strip_period(s: &str) -> &str {
    s.strip_suffix('.').unwrap_or(s).trim_end()
}

fn split_list(s: &str) -> Vec<String> {
    s.split(',').map(|v| v.trim().to_string()).collect()
}

/// Parses a C4.5 `.names` file.
pub fn parse_names(text: &str) -> Result<Schema> {
    let mut classes: Option<Vec<String>> = None;
    let mut attributes = Vec::new();
    let mut names = HashSet::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = strip_comment(raw);
        if line.is_empty() {
            continue;
        }
        if classes.is_none() {
            let labels = split_list(strip_period(line));
            if labels.iter().all(|l| l.is_empty()) {
                return Err(Error::parse(line_no, "empty class list"));
            }
            if let Some(l) = labels.iter().find(|l| l.is_empty()) {
                return Err(Error::parse(line_no, format!("empty class label in {l:?}")));
            }
            let mut seen = HashSet::new();
            for l in &labels {
                if !seen.insert(l.as_str()) {
                    return Err(Error::parse(
                        line_no,
                        format!("duplicate class label {l:?}"),
                    ));
                }
            }
            classes = Some(labels);
            continue;
        }
        let (name, rest) = line.split_once(':').ok_or_else(|| {
            Error::parse(line_no, format!("expected `name: type.`, got {line:?}"))
        })?;
        let name = name.trim();
        if name.is_empty() {
            return Err(Error::parse(line_no, "missing attribute name"));
        }
        if !names.insert(name.to_string()) {
            return Err(Error::parse(
                line_no,
                format!("duplicate attribute name {name:?}"),
            ));
        }
        let rest = strip_period(rest.trim());
        if rest.is_empty() {
            return Err(Error::parse(
                line_no,
                format!("attribute {name:?} has no type"),
            ));
        }
        let decl = if rest == "continuous" {
            AttributeDecl::continuous(name)
        } else {
            let values = split_list(rest);
            let mut seen = HashSet::new();
            for v in &values {
                if v.is_empty() {
                    return Err(Error::parse(line_no, format!("empty value for {name:?}")));
                }
                if !seen.insert(v.as_str()) {
                    return Err(Error::parse(
                        line_no,
                        format!("duplicate value {v:?} for {name:?}"),
                    ));
                }
            }
            AttributeDecl::discrete(name, values)
        };
        attributes.push(decl);
    }
    let classes = classes.ok_or_else(|| Error::parse(1, "empty class list"))?;
    Schema::new(attributes, classes)
}

/// Parses a C4.5 `.data` file against `schema`: one case per line, values in
/// attribute order, class label last, `?` for unknown.
pub fn parse_data(text: &str, schema: impl Into<Arc<Schema>>) -> Result<Dataset> {
    let schema = schema.into();
    let lookups: Vec<Option<HashMap<&str, usize>>> = schema
        .attributes
        .iter()
        .map(|a| match &a.kind {
            AttributeKind::Continuous => None,
            AttributeKind::Discrete(vs) => Some(
                vs.iter()
                    .enumerate()
                    .map(|(i, v)| (v.as_str(), i))
                    .collect(),
            ),
        })
        .collect();
    let n_fields = schema.attributes.len() + 1;
    let mut cases = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = strip_comment(raw);
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if fields.len() != n_fields {
            return Err(Error::parse(
                line_no,
                format!("expected {n_fields} fields, found {}", fields.len()),
            ));
        }
        let mut values = Vec::with_capacity(n_fields - 1);
        for ((field, attr), lookup) in fields.iter().zip(&schema.attributes).zip(&lookups) {
            let value = if *field == "?" {
                Value::Unknown
            } else {
                match lookup {
                    None => {
                        let x: f64 = field.parse().map_err(|_| {
                            Error::parse(
                                line_no,
                                format!(
                                    "unparseable number {field:?} for attribute {:?}",
                                    attr.name
                                ),
                            )
                        })?;
                        if !x.is_finite() {
                            return Err(Error::parse(
                                line_no,
                                format!(
                                    "non-finite number {field:?} for attribute {:?}",
                                    attr.name
                                ),
                            ));
                        }
                        Value::Number(x)
                    }
                    Some(map) => Value::Category(*map.get(field).ok_or_else(|| {
                        Error::parse(
                            line_no,
                            format!(
                                "value {field:?} is not declared for attribute {:?}",
                                attr.name
                            ),
                        )
                    })?),
                }
            };
            values.push(value);
        }
        let label = fields[n_fields - 1];
        let class = schema
            .class_index(label)
            .ok_or_else(|| Error::parse(line_no, format!("unknown class label {label:?}")))?;
        cases.push(Case::new(values, class));
    }
    Dataset::new(schema, cases)
}

pub fn serialize_names(schema: &Schema) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{}.", schema.classes.join(", "));
    out.push('\n');
    for attr in &schema.attributes {
        match &attr.kind {
            AttributeKind::Continuous => {
                let _ = writeln!(out, "{}: continuous.", attr.name);
            }
            AttributeKind::Discrete(vs) => {
                let _ = writeln!(out, "{}: {}.", attr.name, vs.join(", "));
            }
        }
    }
    out
}

/// Writes cases in `.data` format. Numbers use the shortest decimal form that
/// parses back to the same `f64`. Case weights are not written.
pub fn serialize_data(dataset: &Dataset) -> String {
    let schema = &dataset.schema;
    let mut out = String::new();
    for case in &dataset.cases {
        for (attr, value) in schema.attributes.iter().zip(&case.values) {
            match value {
                Value::Unknown => out.push('?'),
                Value::Number(x) => {
                    let _ = write!(out, "{x}");
                }
                Value::Category(i) => out.push_str(&attr.values()[*i]),
            }
            out.push(',');
        }
        out.push_str(&schema.classes[case.class]);
        out.push('\n');
    }
    out
}

/// Parses a CSV file with a header row. `class_column` names the class
/// column; every other column becomes an attribute. A column is continuous
/// when all of its non-missing entries parse as finite numbers, otherwise
/// discrete with values in order of first appearance. Empty fields and `?`
/// are unknown.
pub fn parse_csv(text: &str, class_column: &str) -> Result<Dataset> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let header: Vec<String> = reader
        .headers()
        .map_err(|e| Error::parse(1, e.to_string()))?
        .iter()
        .map(str::to_string)
        .collect();
    let class_col = header
        .iter()
        .position(|h| h == class_column)
        .ok_or_else(|| Error::parse(1, format!("no column named {class_column:?}")))?;
    let mut rows: Vec<(usize, Vec<String>)> = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line() as usize);
            Error::parse(line, e.to_string())
        })?;
        let line = record.position().map_or(0, |p| p.line() as usize);
        if record.iter().all(str::is_empty) {
            continue;
        }
        rows.push((line, record.iter().map(str::to_string).collect()));
    }
    let missing = |s: &str| s.is_empty() || s == "?";
    let mut attributes = Vec::new();
    let mut columns = Vec::new();
    for (c, name) in header.iter().enumerate() {
        if c == class_col {
            continue;
        }
        let numeric = rows
            .iter()
            .filter(|(_, r)| !missing(&r[c]))
            .all(|(_, r)| r[c].parse::<f64>().is_ok_and(f64::is_finite));
        if numeric {
            attributes.push(AttributeDecl::continuous(name.clone()));
        } else {
            let mut values: Vec<String> = Vec::new();
            for (_, r) in &rows {
                if !missing(&r[c]) && !values.contains(&r[c]) {
                    values.push(r[c].clone());
                }
            }
            attributes.push(AttributeDecl::discrete(name.clone(), values));
        }
        columns.push(c);
    }
    let mut classes: Vec<String> = Vec::new();
    for (line, r) in &rows {
        let label = &r[class_col];
        if missing(label) {
            return Err(Error::parse(*line, "missing class label"));
        }
        if !classes.contains(label) {
            classes.push(label.clone());
        }
    }
    let schema = Schema::new(attributes, classes)?;
    let mut cases = Vec::with_capacity(rows.len());
    for (line, r) in &rows {
        let values = columns
            .iter()
            .zip(schema.attributes())
            .map(|(&c, attr)| {
                let s = r[c].as_str();
                if missing(s) {
                    Value::Unknown
                } else if attr.is_continuous() {
                    Value::Number(s.parse().expect("checked numeric"))
                } else {
                    Value::Category(
                        attr.values()
                            .iter()
                            .position(|v| v == s)
                            .expect("collected"),
                    )
                }
            })
            .collect();
        let class = schema
            .class_index(&r[class_col])
            .ok_or_else(|| Error::parse(*line, "class label not collected"))?;
        cases.push(Case::new(values, class));
    }
    Dataset::new(schema, cases)
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Loads `<stem>.names` and `<stem>.data`.
pub fn load_stem(stem: impl AsRef<Path>) -> Result<Dataset> {
    let stem = stem.as_ref();
    let names_path = stem.with_extension("names");
    let data_path = stem.with_extension("data");
    let schema = parse_names(&read(&names_path)?).map_err(|e| e.in_file(&names_path))?;
    parse_data(&read(&data_path)?, schema).map_err(|e| e.in_file(&data_path))
}

pub fn load_csv(path: impl AsRef<Path>, class_column: &str) -> Result<Dataset> {
    let path = path.as_ref();
    parse_csv(&read(path)?, class_column).map_err(|e| e.in_file(path))
}
