#![allow(dead_code)]

use std::path::PathBuf;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use xadg::af::{Framework, Label};
use xadg::dataset::{Dataset, FeatureDomain, Recipe, Schema, Value};
use xadg::dtree::DecisionTree;
use xadg::inference::{classify, Status};
use xadg::xadg::{lift, Pipeline, Xadg};

pub fn data_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data")
}

pub fn cars() -> Dataset {
    let dir = data_dir();
    Recipe::from_path(dir.join("recipes/cars.toml"))
        .unwrap()
        .load(dir.join("car.csv"), None)
        .unwrap()
}

pub fn census() -> Dataset {
    let dir = data_dir();
    Recipe::from_path(dir.join("recipes/census.toml"))
        .unwrap()
        .load(dir.join("adult.csv"), None)
        .unwrap()
}

/// Random dataset whose label is a lookup on a few features plus noise.
///
/// `numeric` features draw from a small grid so thresholds repeat.
pub fn synthetic(seed: u64, features: usize, rows: usize, numeric: usize) -> Dataset {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let classes = rng.gen_range(2..=3);
    let mut domains = Vec::new();
    for f in 0..features {
        if f < numeric {
            domains.push(FeatureDomain::numeric(format!("x{f}"), 0.0, 9.0));
        } else {
            let k = rng.gen_range(2..=4);
            domains.push(FeatureDomain::categorical(
                format!("c{f}"),
                (0..k).map(|v| format!("v{v}")).collect(),
            ));
        }
    }
    let schema = Schema {
        features: domains,
        target: "y".into(),
        classes: (0..classes).map(|c| format!("k{c}")).collect(),
    };
    let relevant: Vec<usize> = (0..rng.gen_range(1..=features.min(3)))
        .map(|_| rng.gen_range(0..features))
        .collect();
    let table: Vec<u32> = (0..256).map(|_| rng.gen_range(0..classes as u32)).collect();
    let mut data = Vec::with_capacity(rows);
    let mut labels = Vec::with_capacity(rows);
    for _ in 0..rows {
        let row: Vec<Value> = schema
            .features
            .iter()
            .enumerate()
            .map(|(f, d)| {
                if f < numeric {
                    Value::Num(rng.gen_range(0..10) as f64)
                } else {
                    Value::Cat(rng.gen_range(0..d.cardinality()))
                }
            })
            .collect();
        let key = relevant.iter().fold(0usize, |k, &f| {
            let v = match row[f] {
                Value::Cat(c) => c as usize,
                Value::Num(x) => (x >= 5.0) as usize,
            };
            k * 5 + v
        });
        let label = if rng.gen_bool(0.1) {
            rng.gen_range(0..classes as u32)
        } else {
            table[key % table.len()]
        };
        data.push(row);
        labels.push(label);
    }
    // Every class must occur for the schema to stay meaningful.
    for c in 0..classes as u32 {
        if !labels.contains(&c) {
            labels[c as usize] = c;
        }
    }
    Dataset::new(schema, data, labels).unwrap()
}

/// Every instance of a categorical schema, or `None` past `cap`.
pub fn all_instances(schema: &Schema, cap: usize) -> Option<Vec<Vec<Value>>> {
    let mut out = vec![Vec::new()];
    for f in &schema.features {
        if !f.is_categorical() {
            return None;
        }
        let k = f.cardinality();
        if out.len() * k as usize > cap {
            return None;
        }
        out = out
            .into_iter()
            .flat_map(|row: Vec<Value>| {
                (0..k).map(move |v| {
                    let mut r = row.clone();
                    r.push(Value::Cat(v));
                    r
                })
            })
            .collect();
    }
    Some(out)
}

pub fn stages(p: &Pipeline) -> Vec<(&'static str, Xadg)> {
    vec![
        ("extract", lift(&p.adg)),
        ("simplify", lift(&p.simplified)),
        ("m2", p.after_m2.clone()),
        ("m1", p.xadg.clone()),
    ]
}

/// Rows where the graph does not decide the tree's class.
pub fn mismatches(dt: &DecisionTree, g: &Xadg, rows: &[Vec<Value>]) -> usize {
    rows.iter()
        .filter(|x| {
            let r = classify(g, x, 0);
            r.status != Status::Decided || r.class != dt.predict(x)
        })
        .count()
}

/// Every labelling in `{in, out, undec}^n`, written out by hand.
pub fn all_labellings(n: usize) -> impl Iterator<Item = Vec<Label>> {
    (0..3usize.pow(n as u32)).map(move |mut code| {
        (0..n)
            .map(|_| {
                let l = [Label::In, Label::Out, Label::Undec][code % 3];
                code /= 3;
                l
            })
            .collect()
    })
}

/// Out iff an attacker is in, in iff every attacker is out.
pub fn legal(af: &Framework, lab: &[Label]) -> bool {
    (0..af.len()).all(|a| {
        let attackers: Vec<usize> = af
            .attacks()
            .iter()
            .filter(|&&(_, t)| t == a)
            .map(|&(s, _)| s)
            .collect();
        let out = attackers.iter().any(|&b| lab[b] == Label::In);
        let inn = attackers.iter().all(|&b| lab[b] == Label::Out);
        (lab[a] == Label::Out) == out && (lab[a] == Label::In) == inn
    })
}

/// The legal labellings whose undecided set is maximal under inclusion.
pub fn maximal_undecided(af: &Framework) -> Vec<Vec<Label>> {
    let undec = |l: &[Label]| -> Vec<bool> { l.iter().map(|&x| x == Label::Undec).collect() };
    let legal: Vec<Vec<Label>> = all_labellings(af.len()).filter(|l| legal(af, l)).collect();
    let below = |u: &[bool], v: &[bool]| u != v && u.iter().zip(v).all(|(a, b)| !a || *b);
    legal
        .iter()
        .filter(|l| !legal.iter().any(|m| below(&undec(l), &undec(m))))
        .cloned()
        .collect()
}
