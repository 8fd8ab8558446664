//! Binary CART trees whose edges carry predicates.
//!
//! Every internal node holds a split predicate. Its `yes` child is reached
//! through the predicate itself and its `no` child through the complement,
//! so the two edge regions partition the feature's domain.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::dataset::{argmax, ClassId, Dataset, FeatureKind, Instance, Schema, Value};
use crate::error::{Error, Result};
use crate::predicate::{Predicate, PredicateLiteral};
use crate::region::Region;

pub type NodeId = usize;

#[derive(Debug, Clone, PartialEq)]
pub enum Node {
    Split {
        predicate: Predicate,
        yes: NodeId,
        no: NodeId,
        counts: Vec<usize>,
    },
    Leaf {
        class: ClassId,
        counts: Vec<usize>,
    },
}

impl Node {
    pub fn counts(&self) -> &[usize] {
        match self {
            Node::Split { counts, .. } | Node::Leaf { counts, .. } => counts,
        }
    }

    pub fn is_leaf(&self) -> bool {
        matches!(self, Node::Leaf { .. })
    }
}

/// A directed link between a node and one of its children.
#[derive(Debug, Clone, PartialEq)]
pub struct Edge {
    pub parent: NodeId,
    pub child: NodeId,
    pub predicate: Predicate,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecisionTree {
    schema: Schema,
    nodes: Vec<Node>,
    parents: Vec<Option<NodeId>>,
    depths: Vec<usize>,
    max_depth: usize,
    seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TreeStats {
    pub nodes: usize,
    pub edges: usize,
    pub leaves: usize,
    pub depth: usize,
    /// Unweighted mean of leaf depths.
    pub avg_path_length: f64,
}

impl DecisionTree {
    /// Assembles a tree from nodes with the root at index 0.
    pub fn from_nodes(
        schema: Schema,
        nodes: Vec<Node>,
        max_depth: usize,
        seed: u64,
    ) -> Result<Self> {
        if nodes.is_empty() {
            return Err(Error::Format("tree has no nodes".into()));
        }
        let mut parents = vec![None; nodes.len()];
        let mut depths = vec![0; nodes.len()];
        let mut seen = vec![false; nodes.len()];
        let mut stack = vec![0usize];
        seen[0] = true;
        while let Some(id) = stack.pop() {
            if let Node::Split {
                yes, no, predicate, ..
            } = &nodes[id]
            {
                if predicate.feature >= schema.features.len() {
                    return Err(Error::Format(format!("node {id}: feature out of range")));
                }
                for &child in [yes, no] {
                    if child >= nodes.len() || seen[child] {
                        return Err(Error::Format(format!("node {id}: bad child {child}")));
                    }
                    seen[child] = true;
                    parents[child] = Some(id);
                    depths[child] = depths[id] + 1;
                    stack.push(child);
                }
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::Format("tree has unreachable nodes".into()));
        }
        Ok(DecisionTree {
            schema,
            nodes,
            parents,
            depths,
            max_depth,
            seed,
        })
    }

    pub fn schema(&self) -> &Schema {
        &self.schema
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn node(&self, id: NodeId) -> &Node {
        &self.nodes[id]
    }

    pub fn root(&self) -> NodeId {
        0
    }

    pub fn parent(&self, id: NodeId) -> Option<NodeId> {
        self.parents[id]
    }

    pub fn depth_of(&self, id: NodeId) -> usize {
        self.depths[id]
    }

    pub fn max_depth(&self) -> usize {
        self.max_depth
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Predicate on the link entering `child`, `None` for the root.
    pub fn edge_predicate(&self, child: NodeId) -> Option<Predicate> {
        let parent = self.parents[child]?;
        match &self.nodes[parent] {
            Node::Split { predicate, yes, .. } => Some(if *yes == child {
                predicate.clone()
            } else {
                predicate.negate()
            }),
            Node::Leaf { .. } => None,
        }
    }

    /// All links in node order of their children.
    pub fn edges(&self) -> Vec<Edge> {
        (0..self.nodes.len())
            .filter_map(|child| {
                Some(Edge {
                    parent: self.parents[child]?,
                    child,
                    predicate: self.edge_predicate(child)?,
                })
            })
            .collect()
    }

    /// True when `ancestor` lies on the path from the root to `node` (inclusive).
    pub fn is_ancestor(&self, ancestor: NodeId, node: NodeId) -> bool {
        let mut cur = Some(node);
        while let Some(id) = cur {
            if id == ancestor {
                return true;
            }
            cur = self.parents[id];
        }
        false
    }

    /// Lowest common ancestor of two nodes.
    pub fn lca(&self, a: NodeId, b: NodeId) -> NodeId {
        let (mut a, mut b) = (a, b);
        while self.depths[a] > self.depths[b] {
            a = self.parents[a].unwrap();
        }
        while self.depths[b] > self.depths[a] {
            b = self.parents[b].unwrap();
        }
        while a != b {
            a = self.parents[a].unwrap();
            b = self.parents[b].unwrap();
        }
        a
    }

    pub fn leaf_for(&self, x: &Instance) -> NodeId {
        let mut id = self.root();
        loop {
            match &self.nodes[id] {
                Node::Leaf { .. } => return id,
                Node::Split {
                    predicate, yes, no, ..
                } => id = if predicate.holds(x) { *yes } else { *no },
            }
        }
    }

    pub fn predict(&self, x: &Instance) -> ClassId {
        match &self.nodes[self.leaf_for(x)] {
            Node::Leaf { class, .. } => *class,
            Node::Split { .. } => unreachable!(),
        }
    }

    pub fn stats(&self) -> TreeStats {
        let leaf_depths: Vec<usize> = self
            .nodes
            .iter()
            .enumerate()
            .filter(|(_, n)| n.is_leaf())
            .map(|(i, _)| self.depths[i])
            .collect();
        TreeStats {
            nodes: self.nodes.len(),
            edges: self.nodes.len() - 1,
            leaves: leaf_depths.len(),
            depth: leaf_depths.iter().copied().max().unwrap_or(0),
            avg_path_length: leaf_depths.iter().sum::<usize>() as f64 / leaf_depths.len() as f64,
        }
    }
}

/// Grows a CART tree with gini impurity.
///
/// Categorical features are split one-vs-rest (`f = v`), numeric ones on
/// midpoints between consecutive distinct values (`f < t`). Any impure node
/// above `max_depth` with a valid split is split on the candidate with the
/// largest impurity decrease, even when that decrease is zero. Ties go to the
/// lower feature index, then the lower value or threshold.
pub fn fit(train: &Dataset, max_depth: usize, seed: u64) -> Result<DecisionTree> {
    if train.is_empty() {
        return Err(Error::InvalidArgument("empty training set".into()));
    }
    if max_depth == 0 {
        return Err(Error::InvalidArgument(
            "max_depth must be at least 1".into(),
        ));
    }
    let mut builder = Builder {
        ds: train,
        n_classes: train.schema().classes.len(),
        nodes: Vec::new(),
        max_depth,
    };
    let all: Vec<usize> = (0..train.len()).collect();
    builder.grow(all, 0);
    DecisionTree::from_nodes(train.schema().clone(), builder.nodes, max_depth, seed)
}

struct Builder<'a> {
    ds: &'a Dataset,
    n_classes: usize,
    nodes: Vec<Node>,
    max_depth: usize,
}

struct Candidate {
    score: f64,
    predicate: Predicate,
}

impl Builder<'_> {
    fn grow(&mut self, rows: Vec<usize>, depth: usize) -> NodeId {
        let counts = self.counts(&rows);
        let id = self.nodes.len();
        let pure = counts.iter().filter(|&&c| c > 0).count() <= 1;
        let leaf = Node::Leaf {
            class: argmax(&counts),
            counts: counts.clone(),
        };
        self.nodes.push(leaf);
        if pure || depth >= self.max_depth || rows.len() < 2 {
            return id;
        }
        let Some(best) = self.best_split(&rows) else {
            return id;
        };
        let (yes_rows, no_rows): (Vec<usize>, Vec<usize>) = rows
            .iter()
            .partition(|&&r| best.predicate.holds(self.ds.instance(r)));
        let yes = self.grow(yes_rows, depth + 1);
        let no = self.grow(no_rows, depth + 1);
        self.nodes[id] = Node::Split {
            predicate: best.predicate,
            yes,
            no,
            counts,
        };
        id
    }

    fn counts(&self, rows: &[usize]) -> Vec<usize> {
        let mut counts = vec![0; self.n_classes];
        for &r in rows {
            counts[self.ds.labels()[r] as usize] += 1;
        }
        counts
    }

    /// Sum of squared class counts over child size; larger means purer.
    fn purity(counts: &[usize], n: usize) -> f64 {
        if n == 0 {
            return 0.0;
        }
        counts.iter().map(|&c| (c * c) as f64).sum::<f64>() / n as f64
    }

    fn consider(best: &mut Option<Candidate>, score: f64, make: impl FnOnce() -> Predicate) {
        let better = match best {
            None => true,
            Some(b) => score > b.score + 1e-9 * b.score.abs().max(1.0),
        };
        if better {
            *best = Some(Candidate {
                score,
                predicate: make(),
            });
        }
    }

    fn best_split(&self, rows: &[usize]) -> Option<Candidate> {
        let total = self.counts(rows);
        let n = rows.len();
        let mut best: Option<Candidate> = None;
        let labels = self.ds.labels();
        for (j, feature) in self.ds.schema().features.iter().enumerate() {
            match &feature.kind {
                FeatureKind::Categorical { values } => {
                    let k = values.len();
                    let mut table = vec![0usize; k * self.n_classes];
                    for &r in rows {
                        if let Value::Cat(v) = self.ds.instance(r)[j] {
                            table[v as usize * self.n_classes + labels[r] as usize] += 1;
                        }
                    }
                    for v in 0..k {
                        let left = &table[v * self.n_classes..(v + 1) * self.n_classes];
                        let n_left: usize = left.iter().sum();
                        if n_left == 0 || n_left == n {
                            continue;
                        }
                        let right: Vec<usize> =
                            total.iter().zip(left).map(|(t, l)| t - l).collect();
                        let score = Self::purity(left, n_left) + Self::purity(&right, n - n_left);
                        Self::consider(&mut best, score, || {
                            Predicate::new(j, Region::values(k as u32, [v as u32]))
                        });
                    }
                }
                FeatureKind::Numeric { .. } => {
                    let mut sorted: Vec<(f64, ClassId)> = rows
                        .iter()
                        .map(|&r| match self.ds.instance(r)[j] {
                            Value::Num(x) => (x, labels[r]),
                            Value::Cat(_) => unreachable!("numeric feature holds numbers"),
                        })
                        .collect();
                    sorted.sort_by(|a, b| a.0.total_cmp(&b.0));
                    let mut left = vec![0usize; self.n_classes];
                    for i in 0..n - 1 {
                        left[sorted[i].1 as usize] += 1;
                        let (lo, hi) = (sorted[i].0, sorted[i + 1].0);
                        if lo == hi {
                            continue;
                        }
                        let n_left = i + 1;
                        let right: Vec<usize> =
                            total.iter().zip(&left).map(|(t, l)| t - l).collect();
                        let score = Self::purity(&left, n_left) + Self::purity(&right, n - n_left);
                        Self::consider(&mut best, score, || {
                            let mut t = lo + (hi - lo) / 2.0;
                            if t <= lo {
                                t = hi;
                            }
                            Predicate::new(j, Region::below(t))
                        });
                    }
                }
            }
        }
        best
    }
}

// ---- serialization -------------------------------------------------------

const TREE_FORMAT: &str = "xadg-tree/1";

#[derive(Debug, Serialize, Deserialize)]
struct TreeFile {
    format: String,
    schema: Schema,
    max_depth: usize,
    seed: u64,
    nodes: Vec<NodeRecord>,
}

#[derive(Debug, Serialize, Deserialize)]
struct NodeRecord {
    id: NodeId,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    split: Option<PredicateLiteral>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    yes: Option<NodeId>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    no: Option<NodeId>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    class: Option<String>,
    counts: Vec<usize>,
}

impl DecisionTree {
    pub fn to_json(&self) -> Result<String> {
        let nodes = self
            .nodes
            .iter()
            .enumerate()
            .map(|(id, node)| match node {
                Node::Split {
                    predicate,
                    yes,
                    no,
                    counts,
                } => NodeRecord {
                    id,
                    split: Some(predicate.to_literal(&self.schema)),
                    yes: Some(*yes),
                    no: Some(*no),
                    class: None,
                    counts: counts.clone(),
                },
                Node::Leaf { class, counts } => NodeRecord {
                    id,
                    split: None,
                    yes: None,
                    no: None,
                    class: Some(self.schema.class_label(*class).to_string()),
                    counts: counts.clone(),
                },
            })
            .collect();
        let file = TreeFile {
            format: TREE_FORMAT.into(),
            schema: self.schema.clone(),
            max_depth: self.max_depth,
            seed: self.seed,
            nodes,
        };
        Ok(serde_json::to_string_pretty(&file)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: TreeFile = serde_json::from_str(text)?;
        if file.format != TREE_FORMAT {
            return Err(Error::Format(format!("expected format {TREE_FORMAT}")));
        }
        let mut records = file.nodes;
        records.sort_by_key(|r| r.id);
        if records.iter().enumerate().any(|(i, r)| r.id != i) {
            return Err(Error::Format("node ids must be 0..n".into()));
        }
        let schema = file.schema;
        let nodes = records
            .into_iter()
            .map(|r| match (r.split, r.yes, r.no, r.class) {
                (Some(lit), Some(yes), Some(no), None) => Ok(Node::Split {
                    predicate: Predicate::from_literal(&lit, &schema)?,
                    yes,
                    no,
                    counts: r.counts,
                }),
                (None, None, None, Some(label)) => Ok(Node::Leaf {
                    class: schema
                        .class_index(&label)
                        .ok_or_else(|| Error::UnknownClass(label.clone()))?,
                    counts: r.counts,
                }),
                _ => Err(Error::Format(format!(
                    "node {} is neither split nor leaf",
                    r.id
                ))),
            })
            .collect::<Result<Vec<_>>>()?;
        DecisionTree::from_nodes(schema, nodes, file.max_depth, file.seed)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        fs::write(path, self.to_json()?).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        DecisionTree::from_json(&text)
    }
}
