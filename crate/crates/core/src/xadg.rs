//! Extended graphs whose supports are DNF formulas, the three rewrites
//! m1/m2/m3, and the tree-to-graph pipeline.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::adg::{extract_adg, simplify_adg, Adg, ArgId};
use crate::dataset::{ClassId, Dataset, Schema, Value};
use crate::dnf::{DnfSupport, WellBuiltViolation};
use crate::dtree::{fit, DecisionTree, Node};
use crate::error::{Error, Result};
use crate::inference::{classify, Status};
use crate::predicate::{Predicate, PredicateLiteral};

#[derive(Debug, Clone, PartialEq)]
pub struct XArgument {
    pub id: ArgId,
    pub support: DnfSupport,
    pub conclusion: Option<ClassId>,
}

impl XArgument {
    pub fn is_predictive(&self) -> bool {
        self.conclusion.is_some()
    }
}

/// One pipeline step and the graph size right after it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LogEntry {
    pub step: Step,
    pub arguments: usize,
    pub attacks: usize,
    /// Set when the step was undone; the counts are then those kept.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rolled_back: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Step {
    Extract,
    Simplify,
    Lift,
    M1 { removed: ArgId, targets: Vec<ArgId> },
    M2 { kept: ArgId, merged: ArgId },
    M3 { attacker: ArgId, target: ArgId },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Xadg {
    schema: Schema,
    arguments: BTreeMap<ArgId, XArgument>,
    attacks: BTreeSet<(ArgId, ArgId)>,
    log: Vec<LogEntry>,
    fallback: Option<ClassId>,
}

impl Xadg {
    pub fn new(
        schema: Schema,
        arguments: impl IntoIterator<Item = XArgument>,
        attacks: impl IntoIterator<Item = (ArgId, ArgId)>,
    ) -> Result<Self> {
        let mut map = BTreeMap::new();
        for a in arguments {
            if map.insert(a.id, a).is_some() {
                return Err(Error::InvalidArgument("duplicate argument id".into()));
            }
        }
        let attacks: BTreeSet<_> = attacks.into_iter().collect();
        for &(a, b) in &attacks {
            for id in [a, b] {
                if !map.contains_key(&id) {
                    return Err(Error::UnknownArgument(id));
                }
            }
        }
        Ok(Xadg {
            schema,
            arguments: map,
            attacks,
            log: Vec::new(),
            fallback: None,
        })
    }

    pub fn schema(&self) -> &Schema {
        &self.schema
    }

    /// Arguments in id order.
    pub fn arguments(&self) -> impl ExactSizeIterator<Item = &XArgument> + '_ {
        self.arguments.values()
    }

    pub fn argument(&self, id: ArgId) -> Result<&XArgument> {
        self.arguments.get(&id).ok_or(Error::UnknownArgument(id))
    }

    pub fn attacks(&self) -> &BTreeSet<(ArgId, ArgId)> {
        &self.attacks
    }

    pub fn log(&self) -> &[LogEntry] {
        &self.log
    }

    /// Class to answer when an instance is left undecided.
    pub fn fallback(&self) -> Option<ClassId> {
        self.fallback
    }

    pub fn set_fallback(&mut self, class: Option<ClassId>) {
        self.fallback = class;
    }

    pub fn len(&self) -> usize {
        self.arguments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arguments.is_empty()
    }

    pub fn attackers(&self, id: ArgId) -> BTreeSet<ArgId> {
        self.attacks
            .iter()
            .filter(|&&(_, b)| b == id)
            .map(|&(a, _)| a)
            .collect()
    }

    pub fn targets(&self, id: ArgId) -> BTreeSet<ArgId> {
        self.attacks
            .range((id, 0)..=(id, ArgId::MAX))
            .map(|&(_, b)| b)
            .collect()
    }

    fn record(&mut self, step: Step) {
        self.log.push(LogEntry {
            step,
            arguments: self.len(),
            attacks: self.attacks.len(),
            rolled_back: None,
        });
    }

    fn remove_argument(&mut self, id: ArgId) {
        self.arguments.remove(&id);
        self.attacks.retain(|&(a, b)| a != id && b != id);
    }

    /// Conjoins `extra` to the support of `id`; drops the argument if nothing
    /// satisfiable is left.
    fn restrict(&mut self, id: ArgId, extra: &DnfSupport) {
        let arg = self.arguments.get_mut(&id).unwrap();
        arg.support = arg.support.and(extra);
        if arg.support.is_vacuous() {
            self.remove_argument(id);
        }
    }

    /// Largest predicate count over all supports.
    pub fn max_support_size(&self) -> usize {
        self.arguments()
            .map(|a| a.support.predicate_count())
            .max()
            .unwrap_or(0)
    }
}

/// Every argument becomes a one-clause, one-predicate support.
pub fn lift(adg: &Adg) -> Xadg {
    let arguments = adg.arguments().iter().map(|a| XArgument {
        id: a.id,
        support: DnfSupport::single(a.predicate.clone()).normalized(),
        conclusion: a.conclusion,
    });
    Xadg::new(
        adg.schema().clone(),
        arguments,
        adg.attacks().iter().copied(),
    )
    .expect("ADG attacks reference known arguments")
}

/// Removes an unattacked non-predictive argument `a`, conjoining the
/// negation of its support to every argument it attacks.
pub fn apply_m1(g: &Xadg, a: ArgId) -> Result<Xadg> {
    apply_m1_with(g, a, false)
}

/// As [`apply_m1`]; `allow_attacked` lifts the requirements that `a` be
/// unattacked and attack something.
pub fn apply_m1_with(g: &Xadg, a: ArgId, allow_attacked: bool) -> Result<Xadg> {
    let arg = g.argument(a)?;
    if arg.is_predictive() {
        return Err(Error::Precondition(format!("m1: a{a} is predictive")));
    }
    let targets = g.targets(a);
    if !allow_attacked {
        if !g.attackers(a).is_empty() {
            return Err(Error::Precondition(format!("m1: a{a} is attacked")));
        }
        if targets.is_empty() {
            return Err(Error::Precondition(format!("m1: a{a} attacks nothing")));
        }
    }
    let negated = arg.support.negate();
    let mut out = g.clone();
    out.remove_argument(a);
    for &b in &targets {
        if b != a {
            out.restrict(b, &negated);
        }
    }
    out.record(Step::M1 {
        removed: a,
        targets: targets.into_iter().collect(),
    });
    Ok(out)
}

/// Merges predictive `b` into `a` when both share conclusion, attackers and
/// targets; `a` keeps the disjunction of the two supports.
pub fn apply_m2(g: &Xadg, a: ArgId, b: ArgId) -> Result<Xadg> {
    m2_eligible(g, a, b)?;
    let mut out = g.clone();
    let merged = out.arguments[&a].support.or(&out.arguments[&b].support);
    out.remove_argument(b);
    out.arguments.get_mut(&a).unwrap().support = merged;
    out.record(Step::M2 { kept: a, merged: b });
    Ok(out)
}

fn m2_eligible(g: &Xadg, a: ArgId, b: ArgId) -> Result<()> {
    let (x, y) = (g.argument(a)?, g.argument(b)?);
    let fail = |why: &str| Err(Error::Precondition(format!("m2: a{a}, a{b}: {why}")));
    if a == b {
        return fail("same argument");
    }
    if !x.is_predictive() || !y.is_predictive() {
        return fail("not both predictive");
    }
    if x.conclusion != y.conclusion {
        return fail("different conclusions");
    }
    if g.attackers(a) != g.attackers(b) {
        return fail("different attackers");
    }
    if g.targets(a) != g.targets(b) {
        return fail("different targets");
    }
    Ok(())
}

/// Drops the attack `(a, b)`, conjoining the negation of `a`'s support to `b`.
pub fn apply_m3(g: &Xadg, attack: (ArgId, ArgId)) -> Result<Xadg> {
    let (a, b) = attack;
    if !g.attacks.contains(&attack) {
        return Err(Error::Precondition(format!("m3: no attack a{a} -> a{b}")));
    }
    let negated = g.arguments[&a].support.negate();
    let mut out = g.clone();
    out.attacks.remove(&attack);
    out.restrict(b, &negated);
    out.record(Step::M3 {
        attacker: a,
        target: b,
    });
    Ok(out)
}

/// Drops every attack whose endpoints can never be active together.
///
/// This is m3 in the case where the negated attacker adds nothing to the
/// target's support, so supports are left as they are.
pub fn prune_disjoint_attacks(g: &Xadg) -> Xadg {
    let mut out = g.clone();
    let dead: Vec<(ArgId, ArgId)> = g
        .attacks
        .iter()
        .copied()
        .filter(|&(a, b)| {
            g.arguments[&a]
                .support
                .and(&g.arguments[&b].support)
                .is_vacuous()
        })
        .collect();
    for (a, b) in dead {
        out.attacks.remove(&(a, b));
        out.record(Step::M3 {
            attacker: a,
            target: b,
        });
    }
    out
}

/// Problems with individual supports, keyed by argument id.
pub fn check_well_built(g: &Xadg) -> Vec<(ArgId, WellBuiltViolation)> {
    g.arguments()
        .flat_map(|a| {
            a.support
                .well_built_violations()
                .into_iter()
                .map(move |v| (a.id, v))
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SupportStats {
    /// Predicates per argument.
    pub min: usize,
    pub max: usize,
    pub avg: f64,
    /// Clauses per argument.
    pub clauses_min: usize,
    pub clauses_max: usize,
    pub clauses_avg: f64,
}

pub fn support_stats(g: &Xadg) -> Result<SupportStats> {
    if g.is_empty() {
        return Err(Error::InvalidArgument(
            "support stats of an empty graph".into(),
        ));
    }
    let preds: Vec<usize> = g.arguments().map(|a| a.support.predicate_count()).collect();
    let clauses: Vec<usize> = g.arguments().map(|a| a.support.clause_count()).collect();
    let n = preds.len() as f64;
    Ok(SupportStats {
        min: *preds.iter().min().unwrap(),
        max: *preds.iter().max().unwrap(),
        avg: preds.iter().sum::<usize>() as f64 / n,
        clauses_min: *clauses.iter().min().unwrap(),
        clauses_max: *clauses.iter().max().unwrap(),
        clauses_avg: clauses.iter().sum::<usize>() as f64 / n,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PipelineConfig {
    pub max_depth: usize,
    pub seed: u64,
    /// Reject any rewrite leaving a support with more predicates than this.
    #[serde(default)]
    pub max_supports: Option<usize>,
    /// Let m1 remove non-predictive arguments that are attacked or attack
    /// nothing.
    #[serde(default)]
    pub allow_attacked_m1: bool,
    /// Undo rewrites that change a prediction on the guard data.
    #[serde(default = "default_true")]
    pub guard: bool,
    /// Finally drop attacks between arguments never active together.
    #[serde(default)]
    pub prune_disjoint: bool,
}

fn default_true() -> bool {
    true
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            max_depth: 3,
            seed: 0,
            max_supports: None,
            allow_attacked_m1: false,
            guard: true,
            prune_disjoint: false,
        }
    }
}

/// Every intermediate artifact of one pipeline run.
#[derive(Debug, Clone)]
pub struct Pipeline {
    pub tree: DecisionTree,
    pub adg: Adg,
    pub simplified: Adg,
    pub after_m2: Xadg,
    pub xadg: Xadg,
}

/// Fits a tree on `ds` and runs [`build_from_tree`] with `ds` as guard data.
pub fn build_xadg(ds: &Dataset, config: &PipelineConfig) -> Result<Pipeline> {
    let tree = fit(ds, config.max_depth, config.seed)?;
    let mut p = build_from_tree(tree, ds, config)?;
    p.xadg.fallback = Some(ds.majority_class());
    Ok(p)
}

/// Extract, simplify, lift, then m2 until no pair merges, then m1 until no
/// argument can be removed. m3 is not used.
pub fn build_from_tree(
    tree: DecisionTree,
    guard_data: &Dataset,
    config: &PipelineConfig,
) -> Result<Pipeline> {
    let adg = extract_adg(&tree);
    let simplified = simplify_adg(&tree, &adg);
    let mut g = lift(&simplified);
    g.log.clear();
    g.log.push(LogEntry {
        step: Step::Extract,
        arguments: adg.len(),
        attacks: adg.attacks().len(),
        rolled_back: None,
    });
    g.log.push(LogEntry {
        step: Step::Simplify,
        arguments: simplified.len(),
        attacks: simplified.attacks().len(),
        rolled_back: None,
    });
    g.record(Step::Lift);
    let guard = Guard::new(&tree, guard_data, config);

    let mut rejected = BTreeSet::new();
    'm2: loop {
        let ids: Vec<ArgId> = g.arguments.keys().copied().collect();
        for (i, &a) in ids.iter().enumerate() {
            for &b in &ids[i + 1..] {
                if rejected.contains(&(a, b)) || m2_eligible(&g, a, b).is_err() {
                    continue;
                }
                let next = apply_m2(&g, a, b)?;
                match guard.check(&next) {
                    Ok(()) => g = next,
                    Err(why) => {
                        rejected.insert((a, b));
                        g.reject(Step::M2 { kept: a, merged: b }, why);
                    }
                }
                continue 'm2;
            }
        }
        break;
    }
    let after_m2 = g.clone();

    let mut rejected = BTreeSet::new();
    'm1: loop {
        let ids: Vec<ArgId> = g.arguments.keys().copied().collect();
        for a in ids {
            if rejected.contains(&a) {
                continue;
            }
            let Ok(next) = apply_m1_with(&g, a, config.allow_attacked_m1) else {
                continue;
            };
            match guard.check(&next) {
                Ok(()) => g = next,
                Err(why) => {
                    rejected.insert(a);
                    let targets = g.targets(a).into_iter().collect();
                    g.reject(
                        Step::M1 {
                            removed: a,
                            targets,
                        },
                        why,
                    );
                }
            }
            continue 'm1;
        }
        break;
    }
    if config.prune_disjoint {
        g = prune_disjoint_attacks(&g);
    }
    Ok(Pipeline {
        tree,
        adg,
        simplified,
        after_m2,
        xadg: g,
    })
}

impl Xadg {
    fn reject(&mut self, step: Step, why: String) {
        self.log.push(LogEntry {
            step,
            arguments: self.len(),
            attacks: self.attacks.len(),
            rolled_back: Some(why),
        });
    }
}

/// Checks candidate graphs against the tree.
///
/// Supports are built from the tree's tests, so a graph's answer depends only
/// on which tests an instance passes. One instance per distinct pattern of
/// test outcomes covers the whole guard dataset.
struct Guard {
    cases: Vec<(Vec<Value>, ClassId)>,
    max_supports: Option<usize>,
    enabled: bool,
}

impl Guard {
    fn new(tree: &DecisionTree, data: &Dataset, config: &PipelineConfig) -> Self {
        let tests: Vec<&Predicate> = tree
            .nodes()
            .iter()
            .filter_map(|n| match n {
                Node::Split { predicate, .. } => Some(predicate),
                Node::Leaf { .. } => None,
            })
            .collect();
        let mut seen: HashSet<Vec<bool>> = HashSet::new();
        let mut cases = Vec::new();
        if config.guard {
            for row in data.rows() {
                let key: Vec<bool> = tests.iter().map(|p| p.holds(row)).collect();
                if seen.insert(key) {
                    cases.push((row.clone(), tree.predict(row)));
                }
            }
        }
        Guard {
            cases,
            max_supports: config.max_supports,
            enabled: config.guard,
        }
    }

    fn check(&self, g: &Xadg) -> std::result::Result<(), String> {
        if let Some(cap) = self.max_supports {
            let size = g.max_support_size();
            if size > cap {
                return Err(format!("support of {size} predicates exceeds cap {cap}"));
            }
        }
        if !self.enabled {
            return Ok(());
        }
        for (x, expected) in &self.cases {
            let r = classify(g, x, *expected);
            if r.status != Status::Decided || r.class != *expected {
                return Err("prediction changed on guard data".into());
            }
        }
        Ok(())
    }
}

const XADG_FORMAT: &str = "xadg-graph/1";

#[derive(Debug, Serialize, Deserialize)]
struct XadgFile {
    format: String,
    schema: Schema,
    arguments: Vec<XArgumentRecord>,
    attacks: Vec<[ArgId; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    fallback: Option<String>,
    #[serde(default)]
    log: Vec<LogEntry>,
}

#[derive(Debug, Serialize, Deserialize)]
struct XArgumentRecord {
    id: ArgId,
    /// OR of clauses, each an AND of predicates.
    support: Vec<Vec<PredicateLiteral>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    conclusion: Option<String>,
}

impl Xadg {
    pub fn to_json(&self) -> Result<String> {
        let file = XadgFile {
            format: XADG_FORMAT.into(),
            schema: self.schema.clone(),
            arguments: self
                .arguments()
                .map(|a| XArgumentRecord {
                    id: a.id,
                    support: a.support.to_literal(&self.schema),
                    conclusion: a.conclusion.map(|c| self.schema.class_label(c).to_string()),
                })
                .collect(),
            attacks: self.attacks.iter().map(|&(a, b)| [a, b]).collect(),
            fallback: self
                .fallback
                .map(|c| self.schema.class_label(c).to_string()),
            log: self.log.clone(),
        };
        Ok(serde_json::to_string_pretty(&file)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: XadgFile = serde_json::from_str(text)?;
        if file.format != XADG_FORMAT {
            return Err(Error::Format(format!("expected format {XADG_FORMAT}")));
        }
        let schema = file.schema;
        let arguments = file
            .arguments
            .into_iter()
            .map(|r| {
                Ok(XArgument {
                    id: r.id,
                    support: DnfSupport::from_literal(&r.support, &schema)?,
                    conclusion: r
                        .conclusion
                        .map(|c| schema.class_index(&c).ok_or(Error::UnknownClass(c)))
                        .transpose()?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let mut g = Xadg::new(
            schema,
            arguments,
            file.attacks.into_iter().map(|[a, b]| (a, b)),
        )?;
        g.log = file.log;
        g.fallback = file
            .fallback
            .map(|c| g.schema.class_index(&c).ok_or(Error::UnknownClass(c)))
            .transpose()?;
        Ok(g)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        fs::write(path, self.to_json()?).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Xadg::from_json(&text)
    }

    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph xadg {\n  rankdir=LR;\n");
        for a in self.arguments() {
            let support = a.support.display(&self.schema);
            let (label, style) = match a.conclusion {
                Some(c) => (
                    format!("a{}: {}\n=> {}", a.id, support, self.schema.class_label(c)),
                    "shape=box, style=filled, fillcolor=lightblue",
                ),
                None => (
                    format!("a{}: {}", a.id, support),
                    "shape=ellipse, style=dashed",
                ),
            };
            writeln!(
                out,
                "  a{} [label=\"{}\", {}];",
                a.id,
                crate::export::escape(&label),
                style
            )
            .unwrap();
        }
        for &(a, b) in &self.attacks {
            writeln!(out, "  a{a} -> a{b};").unwrap();
        }
        out.push_str("}\n");
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::FeatureDomain;
    use crate::region::Region;

    fn schema() -> Schema {
        Schema {
            features: (0..3)
                .map(|i| FeatureDomain::categorical(format!("f{i}"), vec!["v".into(), "w".into()]))
                .collect(),
            target: "y".into(),
            classes: vec!["A".into(), "B".into()],
        }
    }

    fn arg(id: ArgId, feature: usize, value: u32, conclusion: Option<ClassId>) -> XArgument {
        XArgument {
            id,
            support: DnfSupport::single(Predicate::new(feature, Region::values(2, [value]))),
            conclusion,
        }
    }

    fn all_instances() -> Vec<Vec<Value>> {
        (0..8u32)
            .map(|m| (0..3).map(|i| Value::Cat((m >> i) & 1)).collect())
            .collect()
    }

    fn same_answers(g: &Xadg, h: &Xadg) -> bool {
        all_instances().iter().all(|x| {
            let (r, s) = (classify(g, x, 0), classify(h, x, 0));
            (r.status, r.class) == (s.status, s.class)
        })
    }

    #[test]
    fn m1_pushes_negation_into_targets() {
        let g = Xadg::new(
            schema(),
            vec![
                arg(0, 0, 0, None),
                arg(1, 1, 0, Some(0)),
                arg(2, 2, 0, Some(1)),
            ],
            [(0, 1), (0, 2)],
        )
        .unwrap();
        let h = apply_m1(&g, 0).unwrap();
        assert_eq!(h.len(), 2);
        assert!(h.attacks().is_empty());
        assert_eq!(h.argument(1).unwrap().support.predicate_count(), 2);
        assert!(same_answers(&g, &h));
    }

    #[test]
    fn m1_preconditions() {
        let g = Xadg::new(
            schema(),
            vec![
                arg(0, 0, 0, None),
                arg(1, 1, 0, Some(0)),
                arg(2, 2, 0, None),
            ],
            [(1, 0), (0, 1)],
        )
        .unwrap();
        assert!(apply_m1(&g, 1).is_err());
        assert!(apply_m1(&g, 0).is_err());
        assert!(apply_m1_with(&g, 0, true).is_ok());
        assert!(apply_m1(&g, 2).is_err());
        assert!(apply_m1(&g, 9).is_err());
    }

    #[test]
    fn m2_merges_unattacked_pair() {
        let g = Xadg::new(
            schema(),
            vec![arg(0, 0, 0, Some(0)), arg(1, 1, 0, Some(0))],
            [],
        )
        .unwrap();
        let h = apply_m2(&g, 0, 1).unwrap();
        assert_eq!(h.len(), 1);
        assert_eq!(h.argument(0).unwrap().support.clause_count(), 2);
        assert!(same_answers(&g, &h));
    }

    #[test]
    fn m2_keeps_attack_sets() {
        let g = Xadg::new(
            schema(),
            vec![
                arg(0, 0, 0, Some(0)),
                arg(1, 1, 0, Some(0)),
                arg(2, 2, 0, Some(1)),
                arg(3, 2, 1, Some(1)),
            ],
            [(2, 0), (2, 1), (0, 3), (1, 3)],
        )
        .unwrap();
        let h = apply_m2(&g, 0, 1).unwrap();
        assert_eq!(h.attackers(0), g.attackers(0));
        assert_eq!(h.targets(0), g.targets(0));
        assert!(same_answers(&g, &h));
        assert!(apply_m2(&g, 0, 2).is_err());
        assert!(apply_m2(&g, 2, 3).is_err());
    }

    #[test]
    fn m3_removes_one_attack() {
        let g = Xadg::new(
            schema(),
            vec![
                arg(0, 0, 0, Some(0)),
                arg(1, 1, 0, Some(1)),
                arg(2, 2, 0, Some(0)),
            ],
            [(0, 1), (2, 1)],
        )
        .unwrap();
        let h = apply_m3(&g, (0, 1)).unwrap();
        assert_eq!(
            h.attacks().iter().copied().collect::<Vec<_>>(),
            vec![(2, 1)]
        );
        assert_eq!(h.argument(1).unwrap().support.predicate_count(), 2);
        assert!(same_answers(&g, &h));
        assert!(apply_m3(&g, (1, 0)).is_err());
    }

    #[test]
    fn support_stats_arithmetic() {
        let mut three = arg(1, 0, 0, Some(0));
        three.support = DnfSupport::from_clauses(vec![
            vec![
                Predicate::new(0, Region::values(2, [0])),
                Predicate::new(1, Region::values(2, [0])),
            ],
            vec![Predicate::new(2, Region::values(2, [0]))],
        ]);
        let g = Xadg::new(schema(), vec![arg(0, 0, 0, Some(0)), three], []).unwrap();
        let s = support_stats(&g).unwrap();
        assert_eq!((s.min, s.max, s.avg), (1, 3, 2.0));
        assert_eq!((s.clauses_min, s.clauses_max), (1, 2));
        let empty = Xadg::new(schema(), vec![], []).unwrap();
        assert!(support_stats(&empty).is_err());
    }

    #[test]
    fn json_round_trip() {
        let g = Xadg::new(
            schema(),
            vec![arg(0, 0, 0, None), arg(1, 1, 0, Some(0))],
            [(0, 1)],
        )
        .unwrap();
        let h = apply_m1(&g, 0).unwrap();
        let back = Xadg::from_json(&h.to_json().unwrap()).unwrap();
        assert_eq!(back, h);
        assert!(h.to_dot().contains("a1"));
    }

    #[test]
    fn empty_adg_lifts_to_empty_graph() {
        let adg = Adg::new(schema(), vec![], []).unwrap();
        assert!(lift(&adg).is_empty());
    }
}
