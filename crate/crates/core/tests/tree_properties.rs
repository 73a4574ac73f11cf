mod common;

use common::integer_class;
use proptest::prelude::*;
use shatterkit::calibration::Calibration;
use shatterkit::class::{FunctionClass, Measure};
use shatterkit::lorentz::tower_norm;
use shatterkit::trees::{build_separating_tree, tower_separated, verify_separating_tree, Strategy as TreeStrategy};

fn strategy() -> impl Strategy<Value = TreeStrategy> {
    prop_oneof![
        Just(TreeStrategy::Exhaustive),
        Just(TreeStrategy::Median),
        Just(TreeStrategy::GreedyPotential),
    ]
}

/// Keeps rows in order while they stay 1-separated in the tower norm.
fn tower_separated_part(f: &FunctionClass, alpha: f64) -> FunctionClass {
    let mu = Measure::uniform(f.domain_size());
    let mut kept: Vec<Vec<f64>> = Vec::new();
    for row in f.rows() {
        let far = kept.iter().all(|k| {
            let d: Vec<f64> = k.iter().zip(row).map(|(a, b)| a - b).collect();
            tower_norm(&d, &mu, alpha).unwrap() >= 1.0
        });
        if far {
            kept.push(row.to_vec());
        }
    }
    FunctionClass::new(kept).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn leaves_are_distinguishable(a in integer_class(1..=10, 1..=4, 0, 5), s in strategy(), gap in prop_oneof![Just(1.0), Just(2.0)]) {
        let tree = build_separating_tree(&a, gap, 2.0, s).unwrap();
        prop_assert!(verify_separating_tree(&tree, &a, gap).unwrap());
        let leaves = tree.leaf_sets();
        let mut seen = vec![false; a.len()];
        for l in &leaves {
            for &r in *l {
                prop_assert!(!std::mem::replace(&mut seen[r], true), "row {r} in two leaves");
            }
        }
        for (x, lx) in leaves.iter().enumerate() {
            for ly in &leaves[x + 1..] {
                for &f in *lx {
                    for &g in *ly {
                        let apart = (0..a.domain_size()).any(|i| (a.value(f, i) - a.value(g, i)).abs() >= gap);
                        prop_assert!(apart, "rows {f} and {g} closer than {gap}");
                    }
                }
            }
        }
    }

    #[test]
    fn tower_separated_sets_have_large_trees(f in integer_class(2..=14, 1..=4, -6, 6)) {
        let gap = Calibration::pinned().properties.large_tree_gap;
        let alpha = 2.0;
        let a = tower_separated_part(&f, alpha);
        prop_assert!(tower_separated(&a, alpha).unwrap());
        let tree = build_separating_tree(&a, gap, alpha, TreeStrategy::Exhaustive).unwrap();
        prop_assert!(verify_separating_tree(&tree, &a, gap).unwrap());
        let need = (a.len() as f64).powf(1.0 / alpha);
        prop_assert!(tree.leaves() as f64 >= need, "{} leaves for {} rows", tree.leaves(), a.len());
    }
}
