mod common;

use common::{all_instances, mismatches, stages, synthetic};
use proptest::prelude::*;
use xadg::adg::{check_well_formed, extract_adg, simplify_adg};
use xadg::dataset::{Dataset, Value};
use xadg::dtree::fit;
use xadg::xadg::{
    apply_m1, apply_m2, apply_m3, build_xadg, check_well_built, lift, PipelineConfig, Step, Xadg,
};

fn config(depth: usize) -> PipelineConfig {
    PipelineConfig {
        max_depth: depth,
        ..PipelineConfig::default()
    }
}

fn relaxed(depth: usize) -> PipelineConfig {
    PipelineConfig {
        max_depth: depth,
        allow_attacked_m1: true,
        prune_disjoint: true,
        ..PipelineConfig::default()
    }
}

/// Training rows plus the full instance space when it is small.
fn probe_rows(ds: &Dataset) -> Vec<Vec<Value>> {
    let mut rows = ds.rows().to_vec();
    if let Some(all) = all_instances(ds.schema(), 4096) {
        rows.extend(all);
    }
    rows
}

fn small_dataset() -> impl Strategy<Value = (u64, usize, usize, usize, usize)> {
    (
        any::<u64>(),
        1usize..=8,
        20usize..=300,
        0usize..=2,
        1usize..=6,
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn every_stage_decides_like_the_tree((seed, f, n, numeric, depth) in small_dataset()) {
        let ds = synthetic(seed, f, n, numeric.min(f));
        let p = build_xadg(&ds, &config(depth)).unwrap();
        let rows = probe_rows(&ds);
        for (stage, g) in stages(&p) {
            prop_assert_eq!(mismatches(&p.tree, &g, &rows), 0, "stage {}", stage);
        }
    }

    #[test]
    fn relaxed_pipeline_decides_like_the_tree((seed, f, n, numeric, depth) in small_dataset()) {
        let ds = synthetic(seed, f, n, numeric.min(f));
        let p = build_xadg(&ds, &relaxed(depth)).unwrap();
        let rows = probe_rows(&ds);
        prop_assert_eq!(mismatches(&p.tree, &p.xadg, &rows), 0);
    }

    #[test]
    fn extracted_graphs_are_well_formed((seed, f, n, numeric, depth) in small_dataset()) {
        let ds = synthetic(seed, f, n, numeric.min(f));
        let p = build_xadg(&ds, &config(depth)).unwrap();
        prop_assert_eq!(check_well_formed(&p.adg), vec![]);
        prop_assert_eq!(check_well_formed(&p.simplified), vec![]);
        prop_assert!(check_well_built(&p.xadg).is_empty());
        prop_assert!(check_well_built(&p.after_m2).is_empty());
    }

    #[test]
    fn counts_never_increase((seed, f, n, numeric, depth) in small_dataset()) {
        let ds = synthetic(seed, f, n, numeric.min(f));
        for cfg in [config(depth), relaxed(depth)] {
            let p = build_xadg(&ds, &cfg).unwrap();
            let applied: Vec<_> = p.xadg.log().iter().filter(|e| e.rolled_back.is_none()).collect();
            prop_assert!(matches!(applied[0].step, Step::Extract));
            for w in applied.windows(2) {
                prop_assert!(w[1].arguments <= w[0].arguments, "{:?} -> {:?}", w[0], w[1]);
                prop_assert!(w[1].attacks <= w[0].attacks, "{:?} -> {:?}", w[0], w[1]);
            }
            let last = applied.last().unwrap();
            prop_assert_eq!(last.arguments, p.xadg.len());
            prop_assert_eq!(last.attacks, p.xadg.attacks().len());
        }
    }

    #[test]
    fn simplify_is_idempotent((seed, f, n, numeric, depth) in small_dataset()) {
        let ds = synthetic(seed, f, n, numeric.min(f));
        let dt = fit(&ds, depth, seed).unwrap();
        let once = simplify_adg(&dt, &extract_adg(&dt));
        prop_assert_eq!(simplify_adg(&dt, &once), once);
    }

    #[test]
    fn legal_modifications_preserve_decisions((seed, f, n, depth) in (any::<u64>(), 2usize..=6, 50usize..=300, 2usize..=5)) {
        let ds = synthetic(seed, f, n, 0);
        let dt = fit(&ds, depth, seed).unwrap();
        let rows = all_instances(ds.schema(), 4096).unwrap();
        let g = lift(&simplify_adg(&dt, &extract_adg(&dt)));
        let ids: Vec<_> = g.arguments().map(|a| a.id).collect();
        let check = |next: &Xadg| mismatches(&dt, next, &rows);
        for &a in &ids {
            if let Ok(next) = apply_m1(&g, a) {
                prop_assert_eq!(check(&next), 0, "m1 a{}", a);
            }
            for &b in &ids {
                if a < b {
                    if let Ok(next) = apply_m2(&g, a, b) {
                        prop_assert_eq!(check(&next), 0, "m2 a{} a{}", a, b);
                    }
                }
            }
        }
        for &(a, b) in g.attacks() {
            if g.attackers(a).is_empty() {
                let next = apply_m3(&g, (a, b)).unwrap();
                prop_assert_eq!(check(&next), 0, "m3 a{} -> a{}", a, b);
            }
        }
    }
}

#[test]
fn synthetic_suite_on_all_stages() {
    for seed in 0..24 {
        let ds = synthetic(seed, 2 + seed as usize % 7, 100 + 15 * seed as usize, 0);
        let p = build_xadg(&ds, &config(1 + seed as usize % 6)).unwrap();
        let rows = probe_rows(&ds);
        for (stage, g) in stages(&p) {
            assert_eq!(
                mismatches(&p.tree, &g, &rows),
                0,
                "seed {seed} stage {stage}"
            );
        }
    }
}

#[test]
fn pure_dataset_gives_one_tautological_argument() {
    let mut ds = synthetic(7, 3, 40, 0);
    let labels = vec![0; ds.len()];
    ds = Dataset::new(ds.schema().clone(), ds.rows().to_vec(), labels).unwrap();
    let p = build_xadg(&ds, &config(4)).unwrap();
    assert_eq!(p.xadg.len(), 1);
    assert!(p.xadg.attacks().is_empty());
    let arg = p.xadg.arguments().next().unwrap();
    assert!(arg.support.is_tautology());
    assert_eq!(arg.conclusion, Some(0));
}

#[test]
fn support_cap_is_respected_and_still_equivalent() {
    for seed in 0..8 {
        let ds = synthetic(seed, 6, 300, 0);
        let cfg = PipelineConfig {
            max_supports: Some(2),
            ..relaxed(5)
        };
        let p = build_xadg(&ds, &cfg).unwrap();
        assert!(p.xadg.max_support_size() <= 2);
        assert_eq!(mismatches(&p.tree, &p.xadg, ds.rows()), 0);
    }
}
