//! Classification with grounded semantics over the arguments an instance
//! activates.

use std::collections::BTreeSet;
use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;

use crate::adg::ArgId;
use crate::af::{grounded_labelling, Framework, Label};
use crate::dataset::{ClassId, Dataset, Instance, Schema};
use crate::dnf::DnfSupport;
use crate::dtree::DecisionTree;
use crate::error::Result;
use crate::xadg::Xadg;

pub fn eval_support(s: &DnfSupport, x: &Instance) -> bool {
    s.eval(x)
}

/// Arguments whose support holds on an instance, with the attacks among them.
#[derive(Debug, Clone, PartialEq)]
pub struct Activated {
    /// Graph argument id of each framework position.
    pub ids: Vec<ArgId>,
    pub framework: Framework,
}

pub fn activated_subframework(g: &Xadg, x: &Instance) -> Activated {
    let ids: Vec<ArgId> = g
        .arguments()
        .filter(|a| a.support.eval(x))
        .map(|a| a.id)
        .collect();
    let attacks = g
        .attacks()
        .iter()
        .filter_map(|&(a, b)| Some((ids.binary_search(&a).ok()?, ids.binary_search(&b).ok()?)));
    let names = ids.iter().map(|id| format!("a{id}")).collect();
    let framework = Framework::with_names(names, attacks).unwrap();
    Activated { ids, framework }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Decided,
    UndecidedFallback,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClassificationResult {
    pub class: ClassId,
    pub status: Status,
    /// Arguments labelled `in`.
    pub accepted: Vec<ArgId>,
    /// Label of every activated argument.
    pub labelling: Vec<(ArgId, Label)>,
}

/// Decided when the accepted predictive arguments agree on one class;
/// otherwise `fallback` is returned.
pub fn classify(g: &Xadg, x: &Instance, fallback: ClassId) -> ClassificationResult {
    let act = activated_subframework(g, x);
    let lab = grounded_labelling(&act.framework);
    let accepted: Vec<ArgId> = lab.in_set().into_iter().map(|i| act.ids[i]).collect();
    let conclusions: BTreeSet<ClassId> = accepted
        .iter()
        .filter_map(|&id| g.argument(id).ok()?.conclusion)
        .collect();
    let (class, status) = match conclusions.len() {
        1 => (*conclusions.iter().next().unwrap(), Status::Decided),
        _ => (fallback, Status::UndecidedFallback),
    };
    ClassificationResult {
        class,
        status,
        accepted,
        labelling: act.ids.iter().copied().zip(lab.0).collect(),
    }
}

pub fn classify_all(
    g: &Xadg,
    rows: &[Vec<crate::dataset::Value>],
    fallback: ClassId,
) -> Vec<ClassificationResult> {
    rows.par_iter().map(|x| classify(g, x, fallback)).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Disagreement {
    pub index: usize,
    pub tree: ClassId,
    /// `None` when the graph left the instance undecided.
    pub graph: Option<ClassId>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct EquivalenceReport {
    pub agree: usize,
    pub undecided: usize,
    pub disagree: Vec<Disagreement>,
}

impl EquivalenceReport {
    pub fn total(&self) -> usize {
        self.agree + self.disagree.len()
    }

    pub fn is_equivalent(&self) -> bool {
        self.disagree.is_empty()
    }
}

/// An instance agrees when the graph decides the tree's class.
pub fn equivalence_report(dt: &DecisionTree, g: &Xadg, ds: &Dataset) -> EquivalenceReport {
    let results = classify_all(g, ds.rows(), 0);
    let mut report = EquivalenceReport::default();
    for (index, (x, r)) in ds.rows().iter().zip(results).enumerate() {
        let tree = dt.predict(x);
        let graph = (r.status == Status::Decided).then_some(r.class);
        if graph.is_none() {
            report.undecided += 1;
        }
        if graph == Some(tree) {
            report.agree += 1;
        } else {
            report.disagree.push(Disagreement { index, tree, graph });
        }
    }
    report
}

#[derive(Debug, Serialize)]
struct PredictionRecord<'a> {
    index: usize,
    class: &'a str,
    status: Status,
    accepted: Vec<ArgId>,
}

fn records<'a>(schema: &'a Schema, results: &[ClassificationResult]) -> Vec<PredictionRecord<'a>> {
    results
        .iter()
        .enumerate()
        .map(|(index, r)| PredictionRecord {
            index,
            class: schema.class_label(r.class),
            status: r.status,
            accepted: r.accepted.clone(),
        })
        .collect()
}

/// Columns `index,class,status,accepted`; accepted ids are space separated.
pub fn write_predictions_csv<W: Write>(
    schema: &Schema,
    results: &[ClassificationResult],
    w: W,
) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["index", "class", "status", "accepted"])?;
    for r in records(schema, results) {
        let status = match r.status {
            Status::Decided => "decided",
            Status::UndecidedFallback => "undecided_fallback",
        };
        let accepted = r
            .accepted
            .iter()
            .map(|id| format!("a{id}"))
            .collect::<Vec<_>>()
            .join(" ");
        out.write_record([r.index.to_string(), r.class.into(), status.into(), accepted])?;
    }
    out.flush()
        .map_err(|e| crate::error::Error::io("<output>", e))?;
    Ok(())
}

pub fn predictions_json(schema: &Schema, results: &[ClassificationResult]) -> Result<String> {
    Ok(serde_json::to_string_pretty(&records(schema, results))?)
}
