//! Abstract argumentation frameworks `<Ar, R>` and their labellings.

mod io;
mod semantics;

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};

pub use semantics::{enumerate, grounded_labelling, is_reinstatement, SemanticsKind, DEFAULT_CAP};

/// Arguments are `0..len`; attacks are stored once each with forward and
/// backward adjacency.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Framework {
    names: Vec<String>,
    attacks: BTreeSet<(usize, usize)>,
    targets: Vec<Vec<usize>>,
    attackers: Vec<Vec<usize>>,
}

impl Framework {
    pub fn new(len: usize, attacks: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let names = (0..len).map(|i| i.to_string()).collect();
        Framework::with_names(names, attacks)
    }

    pub fn with_names(
        names: Vec<String>,
        attacks: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self> {
        let len = names.len();
        let attacks: BTreeSet<(usize, usize)> = attacks.into_iter().collect();
        let mut targets = vec![Vec::new(); len];
        let mut attackers = vec![Vec::new(); len];
        for &(a, b) in &attacks {
            if a >= len {
                return Err(Error::UnknownArgument(a));
            }
            if b >= len {
                return Err(Error::UnknownArgument(b));
            }
            targets[a].push(b);
            attackers[b].push(a);
        }
        Ok(Framework {
            names,
            attacks,
            targets,
            attackers,
        })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, a: usize) -> &str {
        &self.names[a]
    }

    pub fn attacks(&self) -> &BTreeSet<(usize, usize)> {
        &self.attacks
    }

    fn check(&self, a: usize) -> Result<()> {
        if a < self.len() {
            Ok(())
        } else {
            Err(Error::UnknownArgument(a))
        }
    }

    /// `a+`: arguments attacked by `a`.
    pub fn attacked_by(&self, a: usize) -> Result<BTreeSet<usize>> {
        self.check(a)?;
        Ok(self.targets[a].iter().copied().collect())
    }

    /// `a-`: arguments attacking `a`.
    pub fn attackers(&self, a: usize) -> Result<BTreeSet<usize>> {
        self.check(a)?;
        Ok(self.attackers[a].iter().copied().collect())
    }

    /// `args+`
    pub fn attacked_by_set(&self, args: &BTreeSet<usize>) -> Result<BTreeSet<usize>> {
        let mut out = BTreeSet::new();
        for &a in args {
            out.extend(self.attacked_by(a)?);
        }
        Ok(out)
    }

    /// `args-`
    pub fn attackers_of_set(&self, args: &BTreeSet<usize>) -> Result<BTreeSet<usize>> {
        let mut out = BTreeSet::new();
        for &a in args {
            out.extend(self.attackers(a)?);
        }
        Ok(out)
    }

    pub(crate) fn targets_slice(&self, a: usize) -> &[usize] {
        &self.targets[a]
    }

    pub(crate) fn attackers_slice(&self, a: usize) -> &[usize] {
        &self.attackers[a]
    }

    /// No attack with both endpoints in `s`.
    pub fn is_conflict_free(&self, s: &BTreeSet<usize>) -> bool {
        s.iter()
            .all(|&a| a < self.len() && self.targets[a].iter().all(|b| !s.contains(b)))
    }

    /// `s` defends `a` iff every attacker of `a` is attacked by a member of `s`.
    pub fn defends(&self, s: &BTreeSet<usize>, a: usize) -> Result<bool> {
        self.check(a)?;
        let hit = self.attacked_by_set(s)?;
        Ok(self.attackers[a].iter().all(|b| hit.contains(b)))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Label {
    In,
    Out,
    Undec,
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Label::In => "in",
            Label::Out => "out",
            Label::Undec => "undec",
        })
    }
}

/// Total map from arguments to labels.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Labelling(pub Vec<Label>);

impl Labelling {
    pub fn get(&self, a: usize) -> Label {
        self.0[a]
    }

    pub fn with(&self, label: Label) -> BTreeSet<usize> {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, &l)| l == label)
            .map(|(i, _)| i)
            .collect()
    }

    pub fn in_set(&self) -> BTreeSet<usize> {
        self.with(Label::In)
    }

    pub fn out_set(&self) -> BTreeSet<usize> {
        self.with(Label::Out)
    }

    pub fn undec_set(&self) -> BTreeSet<usize> {
        self.with(Label::Undec)
    }
}
