//! Argumentative decision graphs: arguments with a single-predicate support
//! and an optional class conclusion, built from the edges of a decision tree.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::af::Framework;
use crate::dataset::{ClassId, Schema};
use crate::dtree::{DecisionTree, Node, NodeId};
use crate::error::{Error, Result};
use crate::predicate::{Predicate, PredicateLiteral};
use crate::region::Region;

pub type ArgId = usize;

#[derive(Debug, Clone, PartialEq)]
pub struct AdgArgument {
    pub id: ArgId,
    pub predicate: Predicate,
    /// `None` for non-predictive arguments.
    pub conclusion: Option<ClassId>,
    /// Tree edge `(parent, child)` the argument was read from.
    pub edge: Option<(NodeId, NodeId)>,
}

impl AdgArgument {
    pub fn is_predictive(&self) -> bool {
        self.conclusion.is_some()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Adg {
    schema: Schema,
    arguments: Vec<AdgArgument>,
    attacks: BTreeSet<(ArgId, ArgId)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WellFormedViolation {
    /// An attack between two supports on the same feature.
    SameFeatureAttack { attacker: ArgId, target: ArgId },
    /// An attack between two arguments with the same class conclusion.
    SameConclusionAttack { attacker: ArgId, target: ArgId },
    /// Two predictive arguments with different classes and features, no attack.
    MissingAttack { a: ArgId, b: ArgId },
}

impl Adg {
    /// Arguments sorted by id; attacks must reference existing ids.
    pub fn new(
        schema: Schema,
        mut arguments: Vec<AdgArgument>,
        attacks: impl IntoIterator<Item = (ArgId, ArgId)>,
    ) -> Result<Self> {
        arguments.sort_by_key(|a| a.id);
        if arguments.windows(2).any(|w| w[0].id == w[1].id) {
            return Err(Error::InvalidArgument("duplicate argument id".into()));
        }
        let adg = Adg {
            schema,
            arguments,
            attacks: attacks.into_iter().collect(),
        };
        for &(a, b) in &adg.attacks {
            adg.position(a)?;
            adg.position(b)?;
        }
        Ok(adg)
    }

    pub fn schema(&self) -> &Schema {
        &self.schema
    }

    pub fn arguments(&self) -> &[AdgArgument] {
        &self.arguments
    }

    pub fn attacks(&self) -> &BTreeSet<(ArgId, ArgId)> {
        &self.attacks
    }

    pub fn len(&self) -> usize {
        self.arguments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arguments.is_empty()
    }

    fn position(&self, id: ArgId) -> Result<usize> {
        self.arguments
            .binary_search_by_key(&id, |a| a.id)
            .map_err(|_| Error::UnknownArgument(id))
    }

    pub fn argument(&self, id: ArgId) -> Result<&AdgArgument> {
        Ok(&self.arguments[self.position(id)?])
    }

    /// The attack graph with arguments renumbered by position.
    pub fn framework(&self) -> Framework {
        let names = self
            .arguments
            .iter()
            .map(|a| format!("a{}", a.id))
            .collect();
        let attacks = self
            .attacks
            .iter()
            .map(|&(a, b)| (self.position(a).unwrap(), self.position(b).unwrap()));
        Framework::with_names(names, attacks).expect("attacks reference known arguments")
    }
}

/// Region of `feature` left open at `node` by the tests on its root path.
pub fn admissible_region(dt: &DecisionTree, node: NodeId, feature: usize) -> Region {
    let mut region = dt.schema().features[feature].full_region();
    let mut cur = node;
    while dt.parent(cur).is_some() {
        let p = dt.edge_predicate(cur).unwrap();
        if p.feature == feature {
            region = region.intersect(&p.region);
        }
        cur = dt.parent(cur).unwrap();
    }
    region
}

/// Which directions `a -> b`, `b -> a` are attacks.
///
/// Arguments on nested edges, on the same feature or with equal conclusions
/// never attack. Otherwise the edge leaving the node where the two paths
/// diverge attacks the other one; two deeper predictive arguments attack
/// each other.
fn attack_directions(dt: &DecisionTree, a: &AdgArgument, b: &AdgArgument) -> (bool, bool) {
    let (Some((pa, ca)), Some((pb, cb))) = (a.edge, b.edge) else {
        return (false, false);
    };
    if a.predicate.is_tautology()
        || b.predicate.is_tautology()
        || a.predicate.feature == b.predicate.feature
        || a.conclusion == b.conclusion
        || dt.is_ancestor(ca, cb)
        || dt.is_ancestor(cb, ca)
    {
        return (false, false);
    }
    let d = dt.lca(ca, cb);
    if pa == d {
        (true, false)
    } else if pb == d {
        (false, true)
    } else if a.is_predictive() && b.is_predictive() {
        (true, true)
    } else {
        (false, false)
    }
}

fn attacks_between(dt: &DecisionTree, a: &AdgArgument, b: &AdgArgument) -> Vec<(ArgId, ArgId)> {
    let (ab, ba) = attack_directions(dt, a, b);
    let mut out = Vec::new();
    if ab {
        out.push((a.id, b.id));
    }
    if ba {
        out.push((b.id, a.id));
    }
    out
}

/// One argument per tree edge, with id = child node id - 1.
///
/// Edges into leaves give predictive arguments concluding the leaf class;
/// edges into internal nodes give non-predictive ones. Each support is the
/// edge test narrowed by the earlier tests on the same feature along its
/// path. A single-leaf tree yields one always-true predictive argument.
pub fn extract_adg(dt: &DecisionTree) -> Adg {
    let schema = dt.schema().clone();
    if let Node::Leaf { class, .. } = dt.node(dt.root()) {
        let only = AdgArgument {
            id: 0,
            predicate: Predicate::tautology(&schema),
            conclusion: Some(*class),
            edge: None,
        };
        return Adg::new(schema, vec![only], []).unwrap();
    }
    let arguments: Vec<AdgArgument> = dt
        .edges()
        .into_iter()
        .map(|e| {
            let feature = e.predicate.feature;
            let conclusion = match dt.node(e.child) {
                Node::Leaf { class, .. } => Some(*class),
                Node::Split { .. } => None,
            };
            AdgArgument {
                id: e.child - 1,
                predicate: Predicate::new(feature, admissible_region(dt, e.child, feature)),
                conclusion,
                edge: Some((e.parent, e.child)),
            }
        })
        .collect();
    let mut attacks = BTreeSet::new();
    for (i, a) in arguments.iter().enumerate() {
        for b in &arguments[i + 1..] {
            attacks.extend(attacks_between(dt, a, b));
        }
    }
    Adg::new(schema, arguments, attacks).unwrap()
}

/// Collapses sibling predictive arguments with the same conclusion.
///
/// When both arguments leaving a node `N` conclude the same class and their
/// regions cover what is admissible at `N`, both are removed and the argument
/// on the edge into `N` takes their conclusion; its attacks are then
/// recomputed. Repeats until no pair is left. Collapsing at the root leaves a
/// single always-true argument.
pub fn simplify_adg(dt: &DecisionTree, adg: &Adg) -> Adg {
    let mut g = adg.clone();
    while let Some((x, y)) = find_collapsible(dt, &g) {
        let conclusion = g.arguments[x].conclusion;
        let n = g.arguments[x].edge.unwrap().0;
        let removed: BTreeSet<ArgId> = [g.arguments[x].id, g.arguments[y].id].into();
        g.arguments.retain(|a| !removed.contains(&a.id));
        g.attacks
            .retain(|(a, b)| !removed.contains(a) && !removed.contains(b));
        let Some(k) = g
            .arguments
            .iter()
            .position(|a| a.edge.map(|e| e.1) == Some(n))
        else {
            let only = AdgArgument {
                id: 0,
                predicate: Predicate::tautology(&g.schema),
                conclusion,
                edge: None,
            };
            return Adg::new(g.schema.clone(), vec![only], []).unwrap();
        };
        g.arguments[k].conclusion = conclusion;
        let id = g.arguments[k].id;
        g.attacks.retain(|(a, b)| *a != id && *b != id);
        let updated = g.arguments[k].clone();
        let mut fresh = Vec::new();
        for other in g.arguments.iter().filter(|o| o.id != id) {
            fresh.extend(attacks_between(dt, &updated, other));
        }
        g.attacks.extend(fresh);
    }
    g
}

fn find_collapsible(dt: &DecisionTree, g: &Adg) -> Option<(usize, usize)> {
    for (i, a) in g.arguments.iter().enumerate() {
        for (j, b) in g.arguments.iter().enumerate().skip(i + 1) {
            let (Some((pa, _)), Some((pb, _))) = (a.edge, b.edge) else {
                continue;
            };
            if pa != pb
                || !a.is_predictive()
                || a.conclusion != b.conclusion
                || a.predicate.feature != b.predicate.feature
            {
                continue;
            }
            let open = admissible_region(dt, pa, a.predicate.feature);
            if open.is_subset(&a.predicate.region.union(&b.predicate.region)) {
                return Some((i, j));
            }
        }
    }
    None
}

/// Violations of the three well-formedness constraints, in argument order.
pub fn check_well_formed(adg: &Adg) -> Vec<WellFormedViolation> {
    let mut out = Vec::new();
    for &(a, b) in &adg.attacks {
        let (x, y) = (adg.argument(a).unwrap(), adg.argument(b).unwrap());
        if x.predicate.feature == y.predicate.feature {
            out.push(WellFormedViolation::SameFeatureAttack {
                attacker: a,
                target: b,
            });
        }
        if x.conclusion.is_some() && x.conclusion == y.conclusion {
            out.push(WellFormedViolation::SameConclusionAttack {
                attacker: a,
                target: b,
            });
        }
    }
    for (i, x) in adg.arguments.iter().enumerate() {
        for y in &adg.arguments[i + 1..] {
            let exclusive = matches!((x.conclusion, y.conclusion), (Some(p), Some(q)) if p != q);
            if exclusive
                && x.predicate.feature != y.predicate.feature
                && !adg.attacks.contains(&(x.id, y.id))
                && !adg.attacks.contains(&(y.id, x.id))
            {
                out.push(WellFormedViolation::MissingAttack { a: x.id, b: y.id });
            }
        }
    }
    out
}

const ADG_FORMAT: &str = "xadg-adg/1";

#[derive(Debug, Serialize, Deserialize)]
struct AdgFile {
    format: String,
    schema: Schema,
    arguments: Vec<ArgumentRecord>,
    attacks: Vec<[ArgId; 2]>,
}

#[derive(Debug, Serialize, Deserialize)]
struct ArgumentRecord {
    id: ArgId,
    support: PredicateLiteral,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    conclusion: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    edge: Option<[NodeId; 2]>,
}

impl Adg {
    pub fn to_json(&self) -> Result<String> {
        let file = AdgFile {
            format: ADG_FORMAT.into(),
            schema: self.schema.clone(),
            arguments: self
                .arguments
                .iter()
                .map(|a| ArgumentRecord {
                    id: a.id,
                    support: a.predicate.to_literal(&self.schema),
                    conclusion: a.conclusion.map(|c| self.schema.class_label(c).to_string()),
                    edge: a.edge.map(|(p, c)| [p, c]),
                })
                .collect(),
            attacks: self.attacks.iter().map(|&(a, b)| [a, b]).collect(),
        };
        Ok(serde_json::to_string_pretty(&file)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: AdgFile = serde_json::from_str(text)?;
        if file.format != ADG_FORMAT {
            return Err(Error::Format(format!("expected format {ADG_FORMAT}")));
        }
        let schema = file.schema;
        let arguments = file
            .arguments
            .into_iter()
            .map(|r| {
                Ok(AdgArgument {
                    id: r.id,
                    predicate: Predicate::from_literal(&r.support, &schema)?,
                    conclusion: r
                        .conclusion
                        .map(|c| schema.class_index(&c).ok_or(Error::UnknownClass(c)))
                        .transpose()?,
                    edge: r.edge.map(|[p, c]| (p, c)),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Adg::new(
            schema,
            arguments,
            file.attacks.into_iter().map(|[a, b]| (a, b)),
        )
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        fs::write(path, self.to_json()?).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Adg::from_json(&text)
    }

    /// Predictive arguments as filled boxes, non-predictive as dashed ellipses.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph adg {\n  rankdir=LR;\n");
        for a in &self.arguments {
            let support = a.predicate.display(&self.schema).to_string();
            let (label, style) = match a.conclusion {
                Some(c) => (
                    format!("a{}: {} => {}", a.id, support, self.schema.class_label(c)),
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
    use crate::dataset::{FeatureDomain, Value};

    fn schema(features: usize) -> Schema {
        Schema {
            features: (0..features)
                .map(|i| {
                    FeatureDomain::categorical(
                        format!("f{i}"),
                        vec!["v".into(), "w".into(), "z".into()],
                    )
                })
                .collect(),
            target: "y".into(),
            classes: vec!["A".into(), "B".into()],
        }
    }

    fn split(feature: usize, value: u32, yes: NodeId, no: NodeId) -> Node {
        Node::Split {
            predicate: Predicate::new(feature, Region::values(3, [value])),
            yes,
            no,
            counts: vec![1, 1],
        }
    }

    fn leaf(class: ClassId) -> Node {
        Node::Leaf {
            class,
            counts: vec![1, 1],
        }
    }

    fn tree(features: usize, nodes: Vec<Node>) -> DecisionTree {
        DecisionTree::from_nodes(schema(features), nodes, 4, 0).unwrap()
    }

    #[test]
    fn depth_one_tree_has_no_attacks() {
        let dt = tree(1, vec![split(0, 0, 1, 2), leaf(0), leaf(1)]);
        let adg = extract_adg(&dt);
        assert_eq!(adg.len(), 2);
        assert!(adg.arguments().iter().all(AdgArgument::is_predictive));
        assert!(adg.attacks().is_empty());
        assert!(check_well_formed(&adg).is_empty());
    }

    #[test]
    fn divergence_edge_attacks_the_other_branch() {
        // f0 = v -> A, else f1 = v -> A, else B
        let dt = tree(
            2,
            vec![
                split(0, 0, 1, 2),
                leaf(0),
                split(1, 0, 3, 4),
                leaf(0),
                leaf(1),
            ],
        );
        let adg = extract_adg(&dt);
        assert_eq!(adg.len(), 4);
        let a1 = adg.argument(0).unwrap();
        assert_eq!(a1.conclusion, Some(0));
        assert!(!adg.argument(1).unwrap().is_predictive());
        assert_eq!(
            adg.attacks().iter().copied().collect::<Vec<_>>(),
            vec![(0, 3)]
        );
        assert!(check_well_formed(&adg).is_empty());
    }

    #[test]
    fn supports_are_narrowed_by_the_path() {
        // f0 = v -> ..., else f0 = w -> ...: the deeper "no" edge admits only z
        let dt = tree(
            1,
            vec![
                split(0, 0, 1, 2),
                leaf(0),
                split(0, 1, 3, 4),
                leaf(1),
                leaf(0),
            ],
        );
        let adg = extract_adg(&dt);
        assert_eq!(
            adg.argument(3).unwrap().predicate.region,
            Region::values(3, [2])
        );
    }

    #[test]
    fn simplify_collapses_same_class_leaves() {
        // f0 = v -> A, else (f1 = v -> B, else B)
        let dt = tree(
            2,
            vec![
                split(0, 0, 1, 2),
                leaf(0),
                split(1, 0, 3, 4),
                leaf(1),
                leaf(1),
            ],
        );
        let adg = extract_adg(&dt);
        let s = simplify_adg(&dt, &adg);
        assert_eq!(s.len(), 2);
        assert_eq!(s.argument(1).unwrap().conclusion, Some(1));
        assert!(s.attacks().is_empty());
        assert!(check_well_formed(&s).is_empty());
        assert_eq!(simplify_adg(&dt, &s), s);
    }

    #[test]
    fn simplify_to_the_root_gives_one_argument() {
        let dt = tree(1, vec![split(0, 0, 1, 2), leaf(1), leaf(1)]);
        let s = simplify_adg(&dt, &extract_adg(&dt));
        assert_eq!(s.len(), 1);
        let only = &s.arguments()[0];
        assert!(only.predicate.is_tautology());
        assert_eq!(only.conclusion, Some(1));
    }

    #[test]
    fn simplify_without_pairs_is_identity() {
        let dt = tree(1, vec![split(0, 0, 1, 2), leaf(0), leaf(1)]);
        let adg = extract_adg(&dt);
        assert_eq!(simplify_adg(&dt, &adg), adg);
    }

    #[test]
    fn single_leaf_tree() {
        let dt = tree(1, vec![leaf(1)]);
        let adg = extract_adg(&dt);
        assert_eq!(adg.len(), 1);
        assert!(adg.arguments()[0].predicate.holds(&[Value::Cat(2)]));
    }

    fn arg(id: ArgId, feature: usize, value: u32, conclusion: Option<ClassId>) -> AdgArgument {
        AdgArgument {
            id,
            predicate: Predicate::new(feature, Region::values(3, [value])),
            conclusion,
            edge: None,
        }
    }

    #[test]
    fn missing_attack_is_reported() {
        let adg = Adg::new(
            schema(2),
            vec![arg(0, 0, 0, Some(0)), arg(1, 1, 1, Some(1))],
            [],
        )
        .unwrap();
        assert_eq!(
            check_well_formed(&adg),
            vec![WellFormedViolation::MissingAttack { a: 0, b: 1 }]
        );
    }

    #[test]
    fn same_feature_attack_is_reported() {
        let adg = Adg::new(
            schema(1),
            vec![arg(0, 0, 0, Some(0)), arg(1, 0, 1, Some(1))],
            [(0, 1)],
        )
        .unwrap();
        assert_eq!(
            check_well_formed(&adg),
            vec![WellFormedViolation::SameFeatureAttack {
                attacker: 0,
                target: 1
            }]
        );
    }

    #[test]
    fn json_round_trip_and_dot() {
        let dt = tree(
            2,
            vec![
                split(0, 0, 1, 2),
                leaf(0),
                split(1, 0, 3, 4),
                leaf(0),
                leaf(1),
            ],
        );
        let adg = extract_adg(&dt);
        assert_eq!(Adg::from_json(&adg.to_json().unwrap()).unwrap(), adg);
        let dot = adg.to_dot();
        assert!(dot.contains("a0 -> a3"));
        assert!(dot.contains("style=dashed"));
    }

    #[test]
    fn unknown_attack_endpoint_is_rejected() {
        assert!(Adg::new(schema(1), vec![arg(0, 0, 0, Some(0))], [(0, 7)]).is_err());
    }
}
