//! DOT output helpers.

use std::fmt::Write as _;

use crate::dtree::{DecisionTree, Node};

/// Escapes a string for use inside a double-quoted DOT label.
pub fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            _ => out.push(c),
        }
    }
    out
}

/// Splits as ellipses labelled with the test, leaves as boxes with the class
/// and training counts; the `yes` link is solid, the `no` link dashed.
pub fn tree_dot(dt: &DecisionTree) -> String {
    let schema = dt.schema();
    let mut out = String::from("digraph tree {\n");
    for (id, node) in dt.nodes().iter().enumerate() {
        match node {
            Node::Split {
                predicate, yes, no, ..
            } => {
                let label = escape(&predicate.display(schema).to_string());
                writeln!(out, "  n{id} [label=\"{label}\", shape=ellipse];").unwrap();
                writeln!(out, "  n{id} -> n{yes} [label=\"yes\"];").unwrap();
                writeln!(out, "  n{id} -> n{no} [label=\"no\", style=dashed];").unwrap();
            }
            Node::Leaf { class, counts } => {
                let label = format!("{} {:?}", schema.class_label(*class), counts);
                writeln!(out, "  n{id} [label=\"{}\", shape=box];", escape(&label)).unwrap();
            }
        }
    }
    out.push_str("}\n");
    out
}
