//! Tabular datasets: schema inference, CSV loading, preprocessing recipes and
//! seeded train/test splits.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::io::{Read, Write};
use std::path::Path;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Index into a feature's categorical value list, or into the class list.
pub type ClassId = u32;

/// One cell of an instance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Value {
    Cat(u32),
    Num(f64),
}

/// An instance is a row of non-target values, one per schema feature.
pub type Instance = [Value];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum FeatureKind {
    Categorical { values: Vec<String> },
    Numeric { min: f64, max: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureDomain {
    pub name: String,
    #[serde(flatten)]
    pub kind: FeatureKind,
}

impl FeatureDomain {
    pub fn categorical(name: impl Into<String>, values: Vec<String>) -> Self {
        FeatureDomain {
            name: name.into(),
            kind: FeatureKind::Categorical { values },
        }
    }

    pub fn numeric(name: impl Into<String>, min: f64, max: f64) -> Self {
        FeatureDomain {
            name: name.into(),
            kind: FeatureKind::Numeric { min, max },
        }
    }

    pub fn is_categorical(&self) -> bool {
        matches!(self.kind, FeatureKind::Categorical { .. })
    }

    /// Number of categorical values, zero for numeric features.
    pub fn cardinality(&self) -> u32 {
        match &self.kind {
            FeatureKind::Categorical { values } => values.len() as u32,
            FeatureKind::Numeric { .. } => 0,
        }
    }

    pub fn value_index(&self, label: &str) -> Option<u32> {
        match &self.kind {
            FeatureKind::Categorical { values } => {
                values.iter().position(|v| v == label).map(|i| i as u32)
            }
            FeatureKind::Numeric { .. } => None,
        }
    }

    pub fn value_label(&self, index: u32) -> &str {
        match &self.kind {
            FeatureKind::Categorical { values } => &values[index as usize],
            FeatureKind::Numeric { .. } => "",
        }
    }

    /// The region covering the whole domain of this feature.
    pub fn full_region(&self) -> crate::region::Region {
        match &self.kind {
            FeatureKind::Categorical { values } => {
                crate::region::Region::all_values(values.len() as u32)
            }
            FeatureKind::Numeric { .. } => crate::region::Region::real_line(),
        }
    }

    pub fn format_value(&self, value: &Value) -> String {
        match value {
            Value::Cat(i) => self.value_label(*i).to_string(),
            Value::Num(x) => format!("{x}"),
        }
    }
}

/// Feature domains plus the categorical target.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Schema {
    pub features: Vec<FeatureDomain>,
    pub target: String,
    pub classes: Vec<String>,
}

impl Schema {
    pub fn feature_index(&self, name: &str) -> Option<usize> {
        self.features.iter().position(|f| f.name == name)
    }

    pub fn class_index(&self, label: &str) -> Option<ClassId> {
        self.classes
            .iter()
            .position(|c| c == label)
            .map(|i| i as ClassId)
    }

    pub fn class_label(&self, class: ClassId) -> &str {
        &self.classes[class as usize]
    }

    /// Parses a row of raw strings (non-target columns, schema order).
    pub fn parse_instance(&self, cells: &[&str]) -> Result<Vec<Value>> {
        if cells.len() != self.features.len() {
            return Err(Error::InvalidDataset(format!(
                "expected {} feature values, got {}",
                self.features.len(),
                cells.len()
            )));
        }
        self.features
            .iter()
            .zip(cells)
            .map(|(f, cell)| parse_cell(f, cell))
            .collect()
    }
}

fn parse_cell(feature: &FeatureDomain, cell: &str) -> Result<Value> {
    match &feature.kind {
        FeatureKind::Categorical { .. } => {
            feature
                .value_index(cell)
                .map(Value::Cat)
                .ok_or_else(|| Error::UnknownValue {
                    feature: feature.name.clone(),
                    value: cell.to_string(),
                })
        }
        FeatureKind::Numeric { .. } => cell
            .trim()
            .parse::<f64>()
            .ok()
            .filter(|x| x.is_finite())
            .map(Value::Num)
            .ok_or_else(|| Error::UnknownValue {
                feature: feature.name.clone(),
                value: cell.to_string(),
            }),
    }
}

/// What happened while cleaning a raw table.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct LoadReport {
    pub rows_read: usize,
    pub rows_dropped: usize,
    pub features_dropped: Vec<String>,
}

/// An immutable, fully observed tabular dataset.
#[derive(Debug, Clone)]
pub struct Dataset {
    schema: Schema,
    rows: Vec<Vec<Value>>,
    labels: Vec<ClassId>,
    report: LoadReport,
}

impl PartialEq for Dataset {
    fn eq(&self, other: &Self) -> bool {
        self.schema == other.schema && self.rows == other.rows && self.labels == other.labels
    }
}

impl Dataset {
    /// Validates and assembles a dataset from already-typed rows.
    pub fn new(schema: Schema, rows: Vec<Vec<Value>>, labels: Vec<ClassId>) -> Result<Self> {
        if rows.len() != labels.len() {
            return Err(Error::InvalidDataset("row/label count mismatch".into()));
        }
        if schema.classes.len() < 2 {
            return Err(Error::InvalidDataset(format!(
                "target `{}` needs at least two classes",
                schema.target
            )));
        }
        for (i, row) in rows.iter().enumerate() {
            if row.len() != schema.features.len() {
                return Err(Error::InvalidDataset(format!("row {i} has wrong arity")));
            }
            for (f, v) in schema.features.iter().zip(row) {
                let ok = match (&f.kind, v) {
                    (FeatureKind::Categorical { values }, Value::Cat(c)) => {
                        (*c as usize) < values.len()
                    }
                    (FeatureKind::Numeric { .. }, Value::Num(x)) => x.is_finite(),
                    _ => false,
                };
                if !ok {
                    return Err(Error::InvalidDataset(format!(
                        "row {i}: value outside domain of `{}`",
                        f.name
                    )));
                }
            }
        }
        if labels.iter().any(|&c| c as usize >= schema.classes.len()) {
            return Err(Error::InvalidDataset("label outside class list".into()));
        }
        Ok(Dataset {
            schema,
            rows,
            labels,
            report: LoadReport::default(),
        })
    }

    pub fn schema(&self) -> &Schema {
        &self.schema
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn rows(&self) -> &[Vec<Value>] {
        &self.rows
    }

    pub fn instance(&self, i: usize) -> &Instance {
        &self.rows[i]
    }

    pub fn labels(&self) -> &[ClassId] {
        &self.labels
    }

    pub fn report(&self) -> &LoadReport {
        &self.report
    }

    pub fn class_counts(&self) -> Vec<usize> {
        let mut counts = vec![0; self.schema.classes.len()];
        for &c in &self.labels {
            counts[c as usize] += 1;
        }
        counts
    }

    /// Most frequent class; ties go to the lower class index.
    pub fn majority_class(&self) -> ClassId {
        argmax(&self.class_counts())
    }

    /// Rows at `indices`, same schema.
    pub fn select(&self, indices: &[usize]) -> Dataset {
        Dataset {
            schema: self.schema.clone(),
            rows: indices.iter().map(|&i| self.rows[i].clone()).collect(),
            labels: indices.iter().map(|&i| self.labels[i]).collect(),
            report: self.report.clone(),
        }
    }

    /// Writes the dataset as CSV with a header row, target last.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        let mut header: Vec<&str> = self
            .schema
            .features
            .iter()
            .map(|f| f.name.as_str())
            .collect();
        header.push(&self.schema.target);
        w.write_record(&header)?;
        for (row, &label) in self.rows.iter().zip(&self.labels) {
            let mut record: Vec<String> = self
                .schema
                .features
                .iter()
                .zip(row)
                .map(|(f, v)| f.format_value(v))
                .collect();
            record.push(self.schema.class_label(label).to_string());
            w.write_record(&record)?;
        }
        w.flush().map_err(|e| Error::io("<csv writer>", e))?;
        Ok(())
    }

    pub fn save_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let file = fs::File::create(path).map_err(|e| Error::io(path, e))?;
        self.write_csv(file)
    }
}

pub(crate) fn argmax(counts: &[usize]) -> ClassId {
    let mut best = 0;
    for (i, &c) in counts.iter().enumerate() {
        if c > counts[best] {
            best = i;
        }
    }
    best as ClassId
}

/// CSV parsing options.
#[derive(Debug, Clone, PartialEq)]
pub struct LoadOptions {
    pub delimiter: u8,
    pub missing: Vec<String>,
}

impl Default for LoadOptions {
    fn default() -> Self {
        LoadOptions {
            delimiter: b',',
            missing: vec![String::new(), "?".into(), "NA".into()],
        }
    }
}

/// Header plus raw cells; `None` marks a missing value.
#[derive(Debug, Clone)]
pub struct RawTable {
    pub header: Vec<String>,
    pub rows: Vec<Vec<Option<String>>>,
}

impl RawTable {
    pub fn read<R: Read>(reader: R, options: &LoadOptions) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .delimiter(options.delimiter)
            .has_headers(true)
            .trim(csv::Trim::All)
            .from_reader(reader);
        let header: Vec<String> = rdr.headers()?.iter().map(str::to_string).collect();
        if header.is_empty() {
            return Err(Error::InvalidDataset("missing header row".into()));
        }
        let mut rows = Vec::new();
        for record in rdr.records() {
            let record = record?;
            rows.push(
                record
                    .iter()
                    .map(|cell| {
                        if options.missing.iter().any(|m| m == cell) {
                            None
                        } else {
                            Some(cell.to_string())
                        }
                    })
                    .collect(),
            );
        }
        Ok(RawTable { header, rows })
    }

    pub fn from_path(path: impl AsRef<Path>, options: &LoadOptions) -> Result<Self> {
        let path = path.as_ref();
        let file = fs::File::open(path).map_err(|e| Error::io(path, e))?;
        RawTable::read(file, options)
    }

    fn column(&self, name: &str) -> Result<usize> {
        self.header
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| Error::UnknownFeature(name.to_string()))
    }

    /// Feature values of every row, read by column name against `schema`.
    /// Extra columns (such as the target) are ignored.
    pub fn instances(&self, schema: &Schema) -> Result<Vec<Vec<Value>>> {
        let cols = schema
            .features
            .iter()
            .map(|f| self.column(&f.name))
            .collect::<Result<Vec<_>>>()?;
        self.rows
            .iter()
            .enumerate()
            .map(|(i, row)| {
                cols.iter()
                    .zip(&schema.features)
                    .map(|(&c, f)| match &row[c] {
                        Some(cell) => parse_cell(f, cell),
                        None => Err(Error::InvalidDataset(format!(
                            "row {}: missing value for `{}`",
                            i + 1,
                            f.name
                        ))),
                    })
                    .collect()
            })
            .collect()
    }

    /// Fraction of missing cells in column `col`.
    pub fn missing_fraction(&self, col: usize) -> f64 {
        if self.rows.is_empty() {
            return 0.0;
        }
        let missing = self.rows.iter().filter(|r| r[col].is_none()).count();
        missing as f64 / self.rows.len() as f64
    }

    /// Drops columns, then rows with any missing value, then infers types.
    ///
    /// A column is numeric iff every non-missing cell parses as a finite
    /// number. Categorical values and classes are sorted lexicographically.
    pub fn into_dataset(
        self,
        target: &str,
        drop_columns: &BTreeSet<String>,
        max_missing_fraction: Option<f64>,
    ) -> Result<Dataset> {
        let target_col = self.column(target)?;
        for name in drop_columns {
            if name == target {
                return Err(Error::Config("cannot drop the target column".into()));
            }
            self.column(name)?;
        }
        let mut report = LoadReport {
            rows_read: self.rows.len(),
            ..LoadReport::default()
        };

        let mut keep: Vec<usize> = Vec::new();
        for (col, name) in self.header.iter().enumerate() {
            if col == target_col {
                continue;
            }
            let too_sparse = max_missing_fraction
                .map(|limit| self.missing_fraction(col) > limit)
                .unwrap_or(false);
            if drop_columns.contains(name) || too_sparse {
                report.features_dropped.push(name.clone());
            } else {
                keep.push(col);
            }
        }

        let clean: Vec<&Vec<Option<String>>> = self
            .rows
            .iter()
            .filter(|r| r.len() == self.header.len())
            .filter(|r| r[target_col].is_some() && keep.iter().all(|&c| r[c].is_some()))
            .collect();
        report.rows_dropped = self.rows.len() - clean.len();
        if clean.is_empty() {
            return Err(Error::InvalidDataset("no rows left after cleaning".into()));
        }

        let cell = |r: &Vec<Option<String>>, c: usize| r[c].clone().unwrap_or_default();
        let mut features = Vec::with_capacity(keep.len());
        for &col in &keep {
            let parsed: Option<Vec<f64>> = clean
                .iter()
                .map(|r| cell(r, col).parse::<f64>().ok().filter(|x| x.is_finite()))
                .collect();
            let name = self.header[col].clone();
            features.push(match parsed {
                Some(xs) => {
                    let min = xs.iter().copied().fold(f64::INFINITY, f64::min);
                    let max = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                    FeatureDomain::numeric(name, min, max)
                }
                None => {
                    let values: BTreeSet<String> = clean.iter().map(|r| cell(r, col)).collect();
                    FeatureDomain::categorical(name, values.into_iter().collect())
                }
            });
        }
        let classes: BTreeSet<String> = clean.iter().map(|r| cell(r, target_col)).collect();
        let schema = Schema {
            features,
            target: target.to_string(),
            classes: classes.into_iter().collect(),
        };

        let mut rows = Vec::with_capacity(clean.len());
        let mut labels = Vec::with_capacity(clean.len());
        for r in &clean {
            let cells: Vec<String> = keep.iter().map(|&c| cell(r, c)).collect();
            let refs: Vec<&str> = cells.iter().map(String::as_str).collect();
            rows.push(schema.parse_instance(&refs)?);
            labels.push(
                schema
                    .class_index(&cell(r, target_col))
                    .expect("class collected above"),
            );
        }
        let mut ds = Dataset::new(schema, rows, labels)?;
        ds.report = report;
        Ok(ds)
    }
}

/// Loads a CSV file, dropping rows with a missing value.
pub fn load_csv(path: impl AsRef<Path>, target: &str, options: &LoadOptions) -> Result<Dataset> {
    RawTable::from_path(path, options)?.into_dataset(target, &BTreeSet::new(), None)
}

/// Declarative preprocessing, read from TOML.
///
/// ```toml
/// target = "class"
/// delimiter = ","
/// missing = ["", "?", "NA"]
/// max_missing_fraction = 0.05
/// drop = ["id"]
///
/// [[group]]
/// into = "acc"
/// from = ["acc", "good", "vgood"]
/// ```
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Recipe {
    pub target: Option<String>,
    pub delimiter: Option<char>,
    pub missing: Option<Vec<String>>,
    /// Columns with a strictly larger missing fraction are dropped before rows.
    pub max_missing_fraction: Option<f64>,
    #[serde(default)]
    pub drop: Vec<String>,
    #[serde(default)]
    pub group: Vec<ClassGroup>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassGroup {
    pub into: String,
    pub from: Vec<String>,
}

impl Recipe {
    pub fn from_toml(text: &str) -> Result<Self> {
        let recipe: Recipe = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        if let Some(f) = recipe.max_missing_fraction {
            if !(0.0..=1.0).contains(&f) {
                return Err(Error::Config(format!(
                    "max_missing_fraction {f} outside [0, 1]"
                )));
            }
        }
        Ok(recipe)
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Recipe::from_toml(&text)
    }

    pub fn load_options(&self) -> LoadOptions {
        let mut options = LoadOptions::default();
        if let Some(d) = self.delimiter {
            options.delimiter = d as u8;
        }
        if let Some(m) = &self.missing {
            options.missing = m.clone();
        }
        options
    }

    /// Loads and cleans a CSV: column drops happen before row drops.
    pub fn load(&self, path: impl AsRef<Path>, target: Option<&str>) -> Result<Dataset> {
        let target = target
            .map(str::to_string)
            .or_else(|| self.target.clone())
            .ok_or_else(|| Error::Config("no target column given".into()))?;
        let raw = RawTable::from_path(path, &self.load_options())?;
        let drop: BTreeSet<String> = self.drop.iter().cloned().collect();
        let ds = raw.into_dataset(&target, &drop, self.max_missing_fraction)?;
        let report = ds.report.clone();
        let mut out = preprocess(
            &ds,
            &Recipe {
                drop: Vec::new(),
                ..self.clone()
            },
        )?;
        out.report = report;
        Ok(out)
    }
}

/// Applies feature drops and class grouping to an already-clean dataset.
///
/// The missing-value threshold only matters while loading; clean datasets
/// have no missing cells.
pub fn preprocess(ds: &Dataset, recipe: &Recipe) -> Result<Dataset> {
    let schema = ds.schema();
    for name in &recipe.drop {
        if schema.feature_index(name).is_none() {
            return Err(Error::UnknownFeature(name.clone()));
        }
    }
    let mut mapping: BTreeMap<&str, &str> = BTreeMap::new();
    for group in &recipe.group {
        for from in &group.from {
            if schema.class_index(from).is_none() {
                return Err(Error::UnknownClass(from.clone()));
            }
            mapping.insert(from, &group.into);
        }
    }

    let keep: Vec<usize> = (0..schema.features.len())
        .filter(|&i| !recipe.drop.contains(&schema.features[i].name))
        .collect();
    let mapped: Vec<&str> = schema
        .classes
        .iter()
        .map(|c| mapping.get(c.as_str()).copied().unwrap_or(c.as_str()))
        .collect();
    let classes: Vec<String> = mapped
        .iter()
        .map(|s| s.to_string())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let remap: Vec<ClassId> = mapped
        .iter()
        .map(|m| classes.iter().position(|c| c == m).unwrap() as ClassId)
        .collect();

    let new_schema = Schema {
        features: keep.iter().map(|&i| schema.features[i].clone()).collect(),
        target: schema.target.clone(),
        classes,
    };
    let rows = ds
        .rows
        .iter()
        .map(|r| keep.iter().map(|&i| r[i]).collect())
        .collect();
    let labels = ds.labels.iter().map(|&c| remap[c as usize]).collect();
    let mut out = Dataset::new(new_schema, rows, labels)?;
    out.report = ds.report.clone();
    out.report
        .features_dropped
        .extend(recipe.drop.iter().cloned());
    Ok(out)
}

/// Seeded uniform permutation, first `floor(n * train_fraction)` rows train.
pub fn split(ds: &Dataset, train_fraction: f64, seed: u64) -> Result<(Dataset, Dataset)> {
    if !(train_fraction > 0.0 && train_fraction < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "train fraction {train_fraction} not in (0, 1)"
        )));
    }
    let mut order: Vec<usize> = (0..ds.len()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    order.shuffle(&mut rng);
    let n_train = (ds.len() as f64 * train_fraction).floor() as usize;
    let (train, test) = order.split_at(n_train);
    Ok((ds.select(train), ds.select(test)))
}

#[cfg(test)]
mod tests {
    use super::*;

    const TOY: &str = "color,size,label\nred,1.5,yes\nblue,2,no\n?,3,no\ngreen,4,yes\n";

    fn toy() -> Dataset {
        RawTable::read(TOY.as_bytes(), &LoadOptions::default())
            .unwrap()
            .into_dataset("label", &BTreeSet::new(), None)
            .unwrap()
    }

    #[test]
    fn infers_types_and_drops_missing_rows() {
        let ds = toy();
        assert_eq!(ds.len(), 3);
        assert_eq!(ds.report().rows_dropped, 1);
        assert!(ds.schema().features[0].is_categorical());
        assert_eq!(
            ds.schema().features[1].kind,
            FeatureKind::Numeric { min: 1.5, max: 4.0 }
        );
        assert_eq!(ds.schema().classes, vec!["no", "yes"]);
    }

    #[test]
    fn single_class_target_is_rejected() {
        let csv = "a,t\nx,1\ny,1\n";
        let err = RawTable::read(csv.as_bytes(), &LoadOptions::default())
            .unwrap()
            .into_dataset("t", &BTreeSet::new(), None)
            .unwrap_err();
        assert!(matches!(err, Error::InvalidDataset(_)));
    }

    #[test]
    fn missing_target_column_is_an_error() {
        let err = RawTable::read(TOY.as_bytes(), &LoadOptions::default())
            .unwrap()
            .into_dataset("nope", &BTreeSet::new(), None)
            .unwrap_err();
        assert!(matches!(err, Error::UnknownFeature(_)));
    }

    #[test]
    fn all_rows_missing_is_an_error() {
        let csv = "a,t\n?,x\nNA,y\n";
        let err = RawTable::read(csv.as_bytes(), &LoadOptions::default())
            .unwrap()
            .into_dataset("t", &BTreeSet::new(), None)
            .unwrap_err();
        assert!(matches!(err, Error::InvalidDataset(_)));
    }

    #[test]
    fn sparse_column_dropped_before_rows() {
        // color is 25% missing; with a 5% limit the column goes and all rows stay
        let ds = RawTable::read(TOY.as_bytes(), &LoadOptions::default())
            .unwrap()
            .into_dataset("label", &BTreeSet::new(), Some(0.05))
            .unwrap();
        assert_eq!(ds.len(), 4);
        assert_eq!(ds.report().features_dropped, vec!["color"]);
    }

    #[test]
    fn empty_recipe_is_identity() {
        let ds = toy();
        assert_eq!(preprocess(&ds, &Recipe::default()).unwrap(), ds);
    }

    #[test]
    fn grouping_unknown_class_fails() {
        let recipe = Recipe {
            group: vec![ClassGroup {
                into: "x".into(),
                from: vec!["maybe".into()],
            }],
            ..Recipe::default()
        };
        assert!(matches!(
            preprocess(&toy(), &recipe),
            Err(Error::UnknownClass(_))
        ));
    }

    #[test]
    fn split_sizes_use_floor() {
        let rows: Vec<Vec<Value>> = (0..10).map(|i| vec![Value::Num(i as f64)]).collect();
        let labels = (0..10).map(|i| (i % 2) as ClassId).collect();
        let schema = Schema {
            features: vec![FeatureDomain::numeric("x", 0.0, 9.0)],
            target: "y".into(),
            classes: vec!["a".into(), "b".into()],
        };
        let ds = Dataset::new(schema, rows, labels).unwrap();
        let (train, test) = split(&ds, 0.8, 42).unwrap();
        assert_eq!((train.len(), test.len()), (8, 2));
        let (train2, _) = split(&ds, 0.8, 42).unwrap();
        assert_eq!(train, train2);
        assert!(split(&ds, 1.0, 0).is_err());
        assert!(split(&ds, 0.0, 0).is_err());
    }
}
