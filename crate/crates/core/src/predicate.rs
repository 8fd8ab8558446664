//! Feature predicates `f(v)`: a feature index with an admissible region.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::dataset::{FeatureKind, Instance, Schema};
use crate::error::{Error, Result};
use crate::region::{Interval, IntervalSet, Region};

#[derive(Debug, Clone, PartialEq)]
pub struct Predicate {
    pub feature: usize,
    pub region: Region,
}

impl Predicate {
    pub fn new(feature: usize, region: Region) -> Self {
        Predicate { feature, region }
    }

    /// Always-true predicate, used for the degenerate single-leaf graph.
    pub fn tautology(schema: &Schema) -> Self {
        let region = schema
            .features
            .first()
            .map(|f| f.full_region())
            .unwrap_or_else(Region::real_line);
        Predicate { feature: 0, region }
    }

    pub fn is_tautology(&self) -> bool {
        self.region.is_full()
    }

    pub fn holds(&self, x: &Instance) -> bool {
        x.get(self.feature)
            .map(|v| self.region.contains(v))
            .unwrap_or(false)
    }

    pub fn negate(&self) -> Predicate {
        Predicate {
            feature: self.feature,
            region: self.region.complement(),
        }
    }

    pub fn display<'a>(&'a self, schema: &'a Schema) -> PredicateDisplay<'a> {
        PredicateDisplay {
            predicate: self,
            schema,
        }
    }

    pub fn to_literal(&self, schema: &Schema) -> PredicateLiteral {
        let feature = schema.features[self.feature].name.clone();
        match &self.region {
            Region::Values { members, .. } => PredicateLiteral {
                feature,
                values: Some(
                    members
                        .iter()
                        .map(|&v| schema.features[self.feature].value_label(v).to_string())
                        .collect(),
                ),
                intervals: None,
            },
            Region::Intervals(set) => PredicateLiteral {
                feature,
                values: None,
                intervals: Some(
                    set.intervals()
                        .iter()
                        .map(|i| {
                            [
                                Some(i.lo).filter(|x| x.is_finite()),
                                Some(i.hi).filter(|x| x.is_finite()),
                            ]
                        })
                        .collect(),
                ),
            },
        }
    }

    pub fn from_literal(lit: &PredicateLiteral, schema: &Schema) -> Result<Self> {
        let feature = schema
            .feature_index(&lit.feature)
            .ok_or_else(|| Error::UnknownFeature(lit.feature.clone()))?;
        let domain = &schema.features[feature];
        let region = match (&domain.kind, &lit.values, &lit.intervals) {
            (FeatureKind::Categorical { values }, Some(labels), None) => {
                let members = labels
                    .iter()
                    .map(|l| {
                        domain.value_index(l).ok_or_else(|| Error::UnknownValue {
                            feature: domain.name.clone(),
                            value: l.clone(),
                        })
                    })
                    .collect::<Result<Vec<u32>>>()?;
                Region::values(values.len() as u32, members)
            }
            (FeatureKind::Numeric { .. }, None, Some(bounds)) => {
                Region::Intervals(IntervalSet::from_intervals(bounds.iter().map(|[lo, hi]| {
                    Interval::new(lo.unwrap_or(f64::NEG_INFINITY), hi.unwrap_or(f64::INFINITY))
                })))
            }
            _ => {
                return Err(Error::Format(format!(
                    "predicate on `{}` does not match the feature kind",
                    lit.feature
                )))
            }
        };
        Ok(Predicate { feature, region })
    }
}

/// Serialized predicate: `values` for categorical features, `intervals`
/// (half-open, `null` = unbounded) for numeric ones.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PredicateLiteral {
    pub feature: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub values: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub intervals: Option<Vec<[Option<f64>; 2]>>,
}

pub struct PredicateDisplay<'a> {
    predicate: &'a Predicate,
    schema: &'a Schema,
}

impl fmt::Display for PredicateDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = self.predicate;
        if p.region.is_full() {
            return write!(f, "true");
        }
        let domain = &self.schema.features[p.feature];
        match &p.region {
            Region::Values { members, size } => {
                let labels = |set: &mut dyn Iterator<Item = u32>| -> Vec<String> {
                    set.map(|v| domain.value_label(v).to_string()).collect()
                };
                let n = members.len();
                if n == 1 {
                    let v = *members.iter().next().unwrap();
                    write!(f, "{} = {}", domain.name, domain.value_label(v))
                } else if n + 1 == *size as usize {
                    let missing = (0..*size).find(|v| !members.contains(v)).unwrap();
                    write!(f, "{} != {}", domain.name, domain.value_label(missing))
                } else if n * 2 > *size as usize {
                    let out = labels(&mut (0..*size).filter(|v| !members.contains(v)));
                    write!(f, "{} not in {{{}}}", domain.name, out.join(", "))
                } else {
                    let ins = labels(&mut members.iter().copied());
                    write!(f, "{} in {{{}}}", domain.name, ins.join(", "))
                }
            }
            Region::Intervals(set) => match set.intervals() {
                [] => write!(f, "false"),
                [i] if i.lo == f64::NEG_INFINITY => write!(f, "{} < {}", domain.name, i.hi),
                [i] if i.hi == f64::INFINITY => write!(f, "{} >= {}", domain.name, i.lo),
                _ => write!(f, "{} in {}", domain.name, set),
            },
        }
    }
}
