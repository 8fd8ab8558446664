//! Supports in disjunctive normal form.
//!
//! A support is an OR of clauses, each clause an AND of predicates. The empty
//! disjunction is `false`; a clause without predicates is `true`.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use crate::dataset::{Instance, Schema};
use crate::error::Result;
use crate::predicate::{Predicate, PredicateLiteral};
use crate::region::Region;

pub type Clause = Vec<Predicate>;

#[derive(Debug, Clone, PartialEq, Default)]
pub struct DnfSupport {
    clauses: Vec<Clause>,
}

/// Why a support is not well-built.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WellBuiltViolation {
    /// A clause mentions the same feature twice.
    RepeatedFeature { clause: usize, feature: usize },
    /// A clause contains an unsatisfiable or trivially true predicate.
    DegeneratePredicate { clause: usize, feature: usize },
    /// Clause `subsumed` is implied by clause `by`.
    Subsumed { subsumed: usize, by: usize },
    /// Two clauses differ only in the region of one feature.
    Mergeable { first: usize, second: usize },
}

impl DnfSupport {
    pub fn from_clauses(clauses: Vec<Clause>) -> Self {
        DnfSupport { clauses }
    }

    pub fn single(p: Predicate) -> Self {
        DnfSupport {
            clauses: vec![vec![p]],
        }
    }

    pub fn always() -> Self {
        DnfSupport {
            clauses: vec![Vec::new()],
        }
    }

    pub fn never() -> Self {
        DnfSupport::default()
    }

    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    /// No satisfiable clause remains.
    pub fn is_vacuous(&self) -> bool {
        self.clauses.is_empty()
    }

    pub fn is_tautology(&self) -> bool {
        self.clauses
            .iter()
            .any(|c| c.iter().all(Predicate::is_tautology))
    }

    pub fn eval(&self, x: &Instance) -> bool {
        self.clauses
            .iter()
            .any(|clause| clause.iter().all(|p| p.holds(x)))
    }

    /// Total number of predicates over all clauses.
    pub fn predicate_count(&self) -> usize {
        self.clauses.iter().map(Vec::len).sum()
    }

    pub fn clause_count(&self) -> usize {
        self.clauses.len()
    }

    pub fn or(&self, other: &DnfSupport) -> DnfSupport {
        let mut clauses = self.clauses.clone();
        clauses.extend(other.clauses.iter().cloned());
        DnfSupport { clauses }.normalized()
    }

    pub fn and(&self, other: &DnfSupport) -> DnfSupport {
        let mut clauses = Vec::with_capacity(self.clauses.len() * other.clauses.len());
        for a in &self.clauses {
            for b in &other.clauses {
                let mut c = a.clone();
                c.extend(b.iter().cloned());
                clauses.push(c);
            }
        }
        DnfSupport { clauses }.normalized()
    }

    /// De Morgan, distributed back into DNF and normalized after each factor.
    pub fn negate(&self) -> DnfSupport {
        let mut acc = DnfSupport::always();
        for clause in &self.clauses {
            let factor = DnfSupport {
                clauses: clause.iter().map(|p| vec![p.negate()]).collect(),
            }
            .normalized();
            acc = acc.and(&factor);
            if acc.is_vacuous() {
                break;
            }
        }
        acc
    }

    /// Well-built form with the same boolean function.
    ///
    /// Same-feature predicates inside a clause are intersected, unsatisfiable
    /// clauses dropped, always-true predicates removed, subsumed clauses
    /// dropped, and clauses differing only in one feature's region merged by
    /// region union, repeated until nothing changes.
    pub fn normalized(&self) -> DnfSupport {
        let mut clauses: Vec<Clause> = self.clauses.iter().filter_map(merge_clause).collect();
        loop {
            clauses.sort_by(cmp_clause);
            clauses.dedup();
            if clauses.iter().any(Vec::is_empty) {
                return DnfSupport::always();
            }
            if let Some(i) = find_subsumed(&clauses) {
                clauses.remove(i);
                continue;
            }
            if let Some((i, j, feature)) = find_mergeable(&clauses) {
                let second = clauses.remove(j);
                let first = &mut clauses[i];
                let k = first.iter().position(|p| p.feature == feature).unwrap();
                let other = second.iter().find(|p| p.feature == feature).unwrap();
                let region = first[k].region.union(&other.region);
                if region.is_full() {
                    first.remove(k);
                } else {
                    first[k].region = region;
                }
                continue;
            }
            return DnfSupport { clauses };
        }
    }

    pub fn well_built_violations(&self) -> Vec<WellBuiltViolation> {
        let mut out = Vec::new();
        for (ci, clause) in self.clauses.iter().enumerate() {
            let mut seen = std::collections::BTreeSet::new();
            for p in clause {
                if !seen.insert(p.feature) {
                    out.push(WellBuiltViolation::RepeatedFeature {
                        clause: ci,
                        feature: p.feature,
                    });
                }
                if p.region.is_empty() || p.region.is_full() {
                    out.push(WellBuiltViolation::DegeneratePredicate {
                        clause: ci,
                        feature: p.feature,
                    });
                }
            }
        }
        for i in 0..self.clauses.len() {
            for j in 0..self.clauses.len() {
                if i != j
                    && subsumes(&self.clauses[j], &self.clauses[i])
                    && (j < i || !subsumes(&self.clauses[i], &self.clauses[j]))
                {
                    out.push(WellBuiltViolation::Subsumed { subsumed: i, by: j });
                }
            }
        }
        for i in 0..self.clauses.len() {
            for j in i + 1..self.clauses.len() {
                if mergeable_feature(&self.clauses[i], &self.clauses[j]).is_some() {
                    out.push(WellBuiltViolation::Mergeable {
                        first: i,
                        second: j,
                    });
                }
            }
        }
        out
    }

    pub fn is_well_built(&self) -> bool {
        self.well_built_violations().is_empty()
    }

    /// Features mentioned anywhere in the support.
    pub fn features(&self) -> std::collections::BTreeSet<usize> {
        self.clauses
            .iter()
            .flat_map(|c| c.iter().map(|p| p.feature))
            .collect()
    }

    pub fn display(&self, schema: &Schema) -> String {
        if self.clauses.is_empty() {
            return "false".into();
        }
        let render = |c: &Clause| -> String {
            if c.is_empty() {
                return "true".into();
            }
            c.iter()
                .map(|p| p.display(schema).to_string())
                .collect::<Vec<_>>()
                .join(" AND ")
        };
        if self.clauses.len() == 1 {
            return render(&self.clauses[0]);
        }
        self.clauses
            .iter()
            .map(|c| {
                if c.len() > 1 {
                    format!("({})", render(c))
                } else {
                    render(c)
                }
            })
            .collect::<Vec<_>>()
            .join(" OR ")
    }

    pub fn to_literal(&self, schema: &Schema) -> Vec<Vec<PredicateLiteral>> {
        self.clauses
            .iter()
            .map(|c| c.iter().map(|p| p.to_literal(schema)).collect())
            .collect()
    }

    pub fn from_literal(lit: &[Vec<PredicateLiteral>], schema: &Schema) -> Result<Self> {
        let clauses = lit
            .iter()
            .map(|c| {
                c.iter()
                    .map(|p| Predicate::from_literal(p, schema))
                    .collect()
            })
            .collect::<Result<Vec<Clause>>>()?;
        Ok(DnfSupport { clauses })
    }
}

/// Intersects same-feature predicates; `None` when the clause is unsatisfiable.
fn merge_clause(clause: &Clause) -> Option<Clause> {
    let mut by_feature: BTreeMap<usize, Region> = BTreeMap::new();
    for p in clause {
        let region = match by_feature.remove(&p.feature) {
            Some(r) => r.intersect(&p.region),
            None => p.region.clone(),
        };
        if region.is_empty() {
            return None;
        }
        by_feature.insert(p.feature, region);
    }
    Some(
        by_feature
            .into_iter()
            .filter(|(_, r)| !r.is_full())
            .map(|(feature, region)| Predicate { feature, region })
            .collect(),
    )
}

/// `general` implies nothing stronger than `specific`: every predicate of
/// `general` is met by a narrower predicate of `specific` on the same feature.
fn subsumes(general: &Clause, specific: &Clause) -> bool {
    general.iter().all(|g| {
        specific
            .iter()
            .any(|s| s.feature == g.feature && s.region.is_subset(&g.region))
    })
}

fn find_subsumed(clauses: &[Clause]) -> Option<usize> {
    for i in 0..clauses.len() {
        for j in 0..clauses.len() {
            if i != j && subsumes(&clauses[j], &clauses[i]) {
                return Some(i);
            }
        }
    }
    None
}

/// Same feature set, identical regions except on exactly one feature.
fn mergeable_feature(a: &Clause, b: &Clause) -> Option<usize> {
    if a.len() != b.len() {
        return None;
    }
    let mut differing = None;
    for (p, q) in a.iter().zip(b) {
        if p.feature != q.feature {
            return None;
        }
        if p.region != q.region {
            if differing.is_some() {
                return None;
            }
            differing = Some(p.feature);
        }
    }
    differing
}

fn find_mergeable(clauses: &[Clause]) -> Option<(usize, usize, usize)> {
    for i in 0..clauses.len() {
        for j in i + 1..clauses.len() {
            if let Some(f) = mergeable_feature(&clauses[i], &clauses[j]) {
                return Some((i, j, f));
            }
        }
    }
    None
}

fn cmp_region(a: &Region, b: &Region) -> Ordering {
    match (a, b) {
        (Region::Values { members: x, .. }, Region::Values { members: y, .. }) => x.cmp(y),
        (Region::Intervals(x), Region::Intervals(y)) => {
            let key = |s: &crate::region::IntervalSet| -> Vec<(f64, f64)> {
                s.intervals().iter().map(|i| (i.lo, i.hi)).collect()
            };
            let (kx, ky) = (key(x), key(y));
            for (p, q) in kx.iter().zip(&ky) {
                let o = p.0.total_cmp(&q.0).then(p.1.total_cmp(&q.1));
                if o != Ordering::Equal {
                    return o;
                }
            }
            kx.len().cmp(&ky.len())
        }
        (Region::Values { .. }, Region::Intervals(_)) => Ordering::Less,
        (Region::Intervals(_), Region::Values { .. }) => Ordering::Greater,
    }
}

fn cmp_clause(a: &Clause, b: &Clause) -> Ordering {
    a.len().cmp(&b.len()).then_with(|| {
        for (p, q) in a.iter().zip(b) {
            let o = p
                .feature
                .cmp(&q.feature)
                .then_with(|| cmp_region(&p.region, &q.region));
            if o != Ordering::Equal {
                return o;
            }
        }
        Ordering::Equal
    })
}
