//! Repeated split / fit / compact / evaluate runs with 95% intervals.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dataset::{split, ClassId, Dataset};
use crate::dtree::TreeStats;
use crate::error::{Error, Result};
use crate::inference::{classify_all, Status};
use crate::xadg::{build_xadg, support_stats, PipelineConfig, SupportStats};

/// Mean recall over the classes that occur in `truth`.
pub fn balanced_accuracy(predictions: &[ClassId], truth: &[ClassId]) -> Result<f64> {
    let mut classes: Vec<ClassId> = truth.to_vec();
    classes.sort_unstable();
    classes.dedup();
    balanced_accuracy_over(predictions, truth, &classes)
}

/// Mean recall over `classes`; each must occur in `truth`.
pub fn balanced_accuracy_over(
    predictions: &[ClassId],
    truth: &[ClassId],
    classes: &[ClassId],
) -> Result<f64> {
    if predictions.len() != truth.len() {
        return Err(Error::InvalidArgument(format!(
            "{} predictions for {} labels",
            predictions.len(),
            truth.len()
        )));
    }
    if classes.is_empty() {
        return Err(Error::InvalidArgument("no classes".into()));
    }
    let mut total = 0.0;
    for &c in classes {
        let (mut hit, mut n) = (0usize, 0usize);
        for (&p, &t) in predictions.iter().zip(truth) {
            if t == c {
                n += 1;
                hit += (p == c) as usize;
            }
        }
        if n == 0 {
            return Err(Error::InvalidArgument(format!(
                "class {c} absent from truth"
            )));
        }
        total += hit as f64 / n as f64;
    }
    Ok(total / classes.len() as f64)
}

pub fn accuracy(predictions: &[ClassId], truth: &[ClassId]) -> f64 {
    if truth.is_empty() {
        return 0.0;
    }
    let hits = predictions
        .iter()
        .zip(truth)
        .filter(|(p, t)| p == t)
        .count();
    hits as f64 / truth.len() as f64
}

/// Mean with a normal-approximation 95% interval, `mean ± 1.96 sd / sqrt(n)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub mean: f64,
    pub lo: f64,
    pub hi: f64,
}

pub fn confidence_interval(values: &[f64]) -> Interval {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return Interval {
            mean,
            lo: mean,
            hi: mean,
        };
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    let half = 1.96 * var.sqrt() / n.sqrt();
    Interval {
        mean,
        lo: mean - half,
        hi: mean + half,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub max_depth: usize,
    #[serde(default = "default_runs")]
    pub runs: usize,
    #[serde(default = "default_fraction")]
    pub train_fraction: f64,
    #[serde(default)]
    pub base_seed: u64,
    #[serde(default)]
    pub max_supports: Option<usize>,
    #[serde(default)]
    pub allow_attacked_m1: bool,
    #[serde(default)]
    pub prune_disjoint: bool,
}

fn default_runs() -> usize {
    100
}

fn default_fraction() -> f64 {
    0.8
}

impl ExperimentConfig {
    pub fn new(max_depth: usize, runs: usize) -> Self {
        ExperimentConfig {
            max_depth,
            runs,
            train_fraction: default_fraction(),
            base_seed: 0,
            max_supports: None,
            allow_attacked_m1: false,
            prune_disjoint: false,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.runs < 2 {
            return Err(Error::Config("runs must be at least 2".into()));
        }
        if self.max_depth < 1 {
            return Err(Error::Config("max_depth must be at least 1".into()));
        }
        if !(self.train_fraction > 0.0 && self.train_fraction < 1.0) {
            return Err(Error::Config("train_fraction must be in (0, 1)".into()));
        }
        Ok(())
    }
}

/// Experiment file: dataset location plus the run settings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentFile {
    pub data: PathBuf,
    #[serde(default)]
    pub recipe: Option<PathBuf>,
    #[serde(default)]
    pub target: Option<String>,
    #[serde(default)]
    pub baseline: Option<String>,
    pub max_depth: usize,
    #[serde(default = "default_runs")]
    pub runs: usize,
    #[serde(default = "default_fraction")]
    pub train_fraction: f64,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub max_supports: Option<usize>,
    #[serde(default)]
    pub allow_attacked_m1: bool,
    #[serde(default)]
    pub prune_disjoint: bool,
}

impl ExperimentFile {
    /// Relative paths are resolved against the file's directory.
    pub fn from_path(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut file: ExperimentFile =
            toml::from_str(&text).map_err(|e| Error::Config(e.to_string()))?;
        let base = path.parent().unwrap_or(Path::new("."));
        file.data = base.join(&file.data);
        file.recipe = file.recipe.map(|r| base.join(r));
        Ok(file)
    }

    pub fn config(&self) -> ExperimentConfig {
        ExperimentConfig {
            max_depth: self.max_depth,
            runs: self.runs,
            train_fraction: self.train_fraction,
            base_seed: self.seed,
            max_supports: self.max_supports,
            allow_attacked_m1: self.allow_attacked_m1,
            prune_disjoint: self.prune_disjoint,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub seed: u64,
    pub accuracy: f64,
    pub balanced_accuracy: f64,
    pub undecided_rate: f64,
    pub tree: TreeStats,
    pub arguments: usize,
    pub attacks: usize,
    pub adg_arguments: usize,
    pub adg_attacks: usize,
    pub supports: SupportStats,
    /// Rewrites undone by the equivalence guard.
    pub rolled_back: usize,
    pub wall_ms: f64,
}

/// Split with `seed`, build the graph on the train part, score the test part.
pub fn run_once(ds: &Dataset, config: &ExperimentConfig, seed: u64) -> Result<RunRecord> {
    let start = Instant::now();
    let (train, test) = split(ds, config.train_fraction, seed)?;
    let pipeline = build_xadg(
        &train,
        &PipelineConfig {
            max_depth: config.max_depth,
            seed,
            max_supports: config.max_supports,
            allow_attacked_m1: config.allow_attacked_m1,
            guard: true,
            prune_disjoint: config.prune_disjoint,
        },
    )?;
    let g = &pipeline.xadg;
    let fallback = train.majority_class();
    let results = classify_all(g, test.rows(), fallback);
    let predictions: Vec<ClassId> = results.iter().map(|r| r.class).collect();
    let undecided = results
        .iter()
        .filter(|r| r.status == Status::UndecidedFallback)
        .count();
    let mut classes: Vec<ClassId> = test.labels().to_vec();
    classes.sort_unstable();
    classes.dedup();
    Ok(RunRecord {
        seed,
        accuracy: accuracy(&predictions, test.labels()),
        balanced_accuracy: balanced_accuracy_over(&predictions, test.labels(), &classes)?,
        undecided_rate: undecided as f64 / test.len().max(1) as f64,
        tree: pipeline.tree.stats(),
        arguments: g.len(),
        attacks: g.attacks().len(),
        adg_arguments: pipeline.adg.len(),
        adg_attacks: pipeline.adg.attacks().len(),
        supports: support_stats(g)?,
        rolled_back: g.log().iter().filter(|e| e.rolled_back.is_some()).count(),
        wall_ms: start.elapsed().as_secs_f64() * 1e3,
    })
}

/// Metric name and extractor, in report order.
type Metric = (&'static str, fn(&RunRecord) -> f64);

const METRICS: &[Metric] = &[
    ("accuracy", |r| r.accuracy),
    ("balanced_accuracy", |r| r.balanced_accuracy),
    ("undecided_rate", |r| r.undecided_rate),
    ("tree_nodes", |r| r.tree.nodes as f64),
    ("tree_edges", |r| r.tree.edges as f64),
    ("tree_depth", |r| r.tree.depth as f64),
    ("avg_path_length", |r| r.tree.avg_path_length),
    ("adg_arguments", |r| r.adg_arguments as f64),
    ("adg_attacks", |r| r.adg_attacks as f64),
    ("arguments", |r| r.arguments as f64),
    ("attacks", |r| r.attacks as f64),
    ("supports_min", |r| r.supports.min as f64),
    ("supports_max", |r| r.supports.max as f64),
    ("supports_avg", |r| r.supports.avg),
    ("clauses_min", |r| r.supports.clauses_min as f64),
    ("clauses_max", |r| r.supports.clauses_max as f64),
    ("clauses_avg", |r| r.supports.clauses_avg),
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub runs: usize,
    pub metrics: BTreeMap<String, Interval>,
}

impl Summary {
    pub fn from_records(records: &[RunRecord]) -> Summary {
        let metrics = METRICS
            .iter()
            .map(|(name, get)| {
                let values: Vec<f64> = records.iter().map(get).collect();
                (name.to_string(), confidence_interval(&values))
            })
            .collect();
        Summary {
            runs: records.len(),
            metrics,
        }
    }

    pub fn get(&self, metric: &str) -> Option<Interval> {
        self.metrics.get(metric).copied()
    }

    pub fn mean(&self, metric: &str) -> f64 {
        self.metrics[metric].mean
    }

    /// One row per metric: name, mean, interval.
    pub fn table(&self) -> String {
        let mut out = format!("{:<20} {:>10} {:>22}\n", "metric", "mean", "95% CI");
        for (name, _) in METRICS {
            let i = self.metrics[*name];
            writeln!(
                out,
                "{name:<20} {:>10.3} {:>22}",
                i.mean,
                format!("[{:.3}, {:.3}]", i.lo, i.hi)
            )
            .unwrap();
        }
        writeln!(out, "runs: {}; CI = mean +/- 1.96 sd / sqrt(runs); supports count predicates, clauses listed separately", self.runs).unwrap();
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentResult {
    pub config: ExperimentConfig,
    pub records: Vec<RunRecord>,
    pub summary: Summary,
}

/// Run `i` uses seed `base_seed + i`; runs execute in parallel and are
/// reported in seed order.
pub fn run_experiment(ds: &Dataset, config: &ExperimentConfig) -> Result<ExperimentResult> {
    config.validate()?;
    let records = (0..config.runs as u64)
        .into_par_iter()
        .map(|i| run_once(ds, config, config.base_seed + i))
        .collect::<Result<Vec<_>>>()?;
    let summary = Summary::from_records(&records);
    Ok(ExperimentResult {
        config: config.clone(),
        records,
        summary,
    })
}

/// Reference numbers for graphs built directly from data by earlier work.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Baseline {
    pub name: &'static str,
    pub accuracy: f64,
    pub balanced_accuracy: f64,
    pub arguments: f64,
    pub attacks: f64,
    pub supports_min: f64,
    pub supports_max: f64,
    pub supports_avg: f64,
}

pub const BASELINES: &[Baseline] = &[
    Baseline {
        name: "cars-prior",
        accuracy: 0.88,
        balanced_accuracy: 0.88,
        arguments: 8.0,
        attacks: 11.0,
        supports_min: 1.0,
        supports_max: 1.0,
        supports_avg: 1.0,
    },
    Baseline {
        name: "census-prior",
        accuracy: 0.83,
        balanced_accuracy: 0.75,
        arguments: 21.0,
        attacks: 78.0,
        supports_min: 1.0,
        supports_max: 1.0,
        supports_avg: 1.0,
    },
];

pub fn baseline(name: &str) -> Result<Baseline> {
    BASELINES
        .iter()
        .find(|b| b.name == name)
        .copied()
        .ok_or_else(|| Error::InvalidArgument(format!("unknown baseline `{name}`")))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonRow {
    pub metric: &'static str,
    pub baseline: f64,
    pub reproduced: Interval,
    /// Reproduced mean minus baseline.
    pub delta: f64,
}

pub fn compare_baseline(summary: &Summary, b: &Baseline) -> Vec<ComparisonRow> {
    [
        ("accuracy", b.accuracy),
        ("balanced_accuracy", b.balanced_accuracy),
        ("arguments", b.arguments),
        ("attacks", b.attacks),
        ("supports_min", b.supports_min),
        ("supports_max", b.supports_max),
        ("supports_avg", b.supports_avg),
    ]
    .into_iter()
    .map(|(metric, value)| {
        let reproduced = summary.metrics[metric];
        ComparisonRow {
            metric,
            baseline: value,
            reproduced,
            delta: reproduced.mean - value,
        }
    })
    .collect()
}

pub fn comparison_table(name: &str, rows: &[ComparisonRow]) -> String {
    let mut out = format!(
        "{:<20} {:>10} {:>22} {:>10}\n",
        "metric", name, "reproduced", "delta"
    );
    for r in rows {
        writeln!(
            out,
            "{:<20} {:>10.3} {:>22} {:>+10.3}",
            r.metric,
            r.baseline,
            format!("[{:.3}, {:.3}]", r.reproduced.lo, r.reproduced.hi),
            r.delta
        )
        .unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn balanced_accuracy_examples() {
        assert_eq!(balanced_accuracy(&[0, 1, 1], &[0, 1, 1]).unwrap(), 1.0);
        assert_eq!(
            balanced_accuracy(&[1, 0, 0, 0], &[1, 1, 0, 0]).unwrap(),
            0.75
        );
        assert!(balanced_accuracy(&[0], &[0, 1]).is_err());
        assert!(balanced_accuracy_over(&[0, 0], &[0, 0], &[0, 1]).is_err());
    }

    #[test]
    fn interval_of_constant_values_has_zero_width() {
        let i = confidence_interval(&[0.5; 10]);
        assert_eq!((i.mean, i.lo, i.hi), (0.5, 0.5, 0.5));
    }

    #[test]
    fn interval_matches_hand_computation() {
        // mean 2.5, sample sd sqrt(5/3)
        let i = confidence_interval(&[1.0, 2.0, 3.0, 4.0]);
        let half = 1.96 * (5.0f64 / 3.0).sqrt() / 2.0;
        assert!((i.lo - (2.5 - half)).abs() < 1e-12);
        assert!((i.hi - (2.5 + half)).abs() < 1e-12);
    }

    #[test]
    fn unknown_baseline() {
        assert!(baseline("iris-prior").is_err());
        assert_eq!(baseline("census-prior").unwrap().attacks, 78.0);
    }

    #[test]
    fn config_validation() {
        assert!(ExperimentConfig::new(3, 1).validate().is_err());
        assert!(ExperimentConfig::new(0, 5).validate().is_err());
        assert!(ExperimentConfig::new(3, 5).validate().is_ok());
    }
}
