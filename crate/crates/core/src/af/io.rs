//! Plain-text and DOT forms of a framework.
//!
//! Text format, one statement per line, `#` starts a comment:
//!
//! ```text
//! arg a
//! arg b
//! att a b
//! ```

use std::collections::HashMap;
use std::fmt::Write as _;

use super::Framework;
use crate::error::{Error, Result};

impl Framework {
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for name in &self.names {
            writeln!(out, "arg {name}").unwrap();
        }
        for &(a, b) in &self.attacks {
            writeln!(out, "att {} {}", self.names[a], self.names[b]).unwrap();
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut names: Vec<String> = Vec::new();
        let mut index: HashMap<String, usize> = HashMap::new();
        let mut attacks = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let parts: Vec<&str> = line.split_whitespace().collect();
            match parts.as_slice() {
                ["arg", name] => {
                    if index.insert(name.to_string(), names.len()).is_some() {
                        return Err(Error::Format(format!(
                            "line {}: duplicate argument `{name}`",
                            lineno + 1
                        )));
                    }
                    names.push(name.to_string());
                }
                ["att", a, b] => {
                    let lookup = |n: &str| {
                        index.get(n).copied().ok_or_else(|| {
                            Error::Format(format!("line {}: unknown argument `{n}`", lineno + 1))
                        })
                    };
                    attacks.push((lookup(a)?, lookup(b)?));
                }
                _ => {
                    return Err(Error::Format(format!(
                        "line {}: expected `arg <id>` or `att <id> <id>`",
                        lineno + 1
                    )))
                }
            }
        }
        Framework::with_names(names, attacks)
    }

    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph af {\n");
        for (i, name) in self.names.iter().enumerate() {
            writeln!(out, "  n{i} [label=\"{}\"];", crate::export::escape(name)).unwrap();
        }
        for &(a, b) in &self.attacks {
            writeln!(out, "  n{a} -> n{b};").unwrap();
        }
        out.push_str("}\n");
        out
    }
}
