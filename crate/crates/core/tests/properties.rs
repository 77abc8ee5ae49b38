use std::path::Path;
use std::sync::Arc;

use proptest::prelude::*;

use c45::data::{
    load_stem, parse_data, partition_by_test, serialize_data, AttributeDecl, Case, Dataset, Schema,
    Test, Value,
};
use c45::policy::Policy;
use c45::tree::{grow, misclassified_weight, prune, tree_size, GrowParams, TreeNode};

fn schema() -> Arc<Schema> {
    Arc::new(
        Schema::new(
            vec![
                AttributeDecl::continuous("x"),
                AttributeDecl::continuous("y"),
                AttributeDecl::discrete("c", ["u", "v", "w"]),
            ],
            vec!["a".into(), "b".into(), "c".into()],
        )
        .unwrap(),
    )
}

fn value(kind: usize) -> impl Strategy<Value = Value> {
    let known = if kind < 2 {
        (-50i32..50)
            .prop_map(|v| Value::Number(v as f64 / 4.0))
            .boxed()
    } else {
        (0usize..3).prop_map(Value::Category).boxed()
    };
    prop_oneof![9 => known, 1 => Just(Value::Unknown)]
}

fn dataset() -> impl Strategy<Value = Dataset> {
    let case =
        (value(0), value(1), value(2), 0usize..3, 1u32..4).prop_map(|(x, y, c, class, w)| Case {
            values: vec![x, y, c],
            class,
            weight: w as f64 / 2.0,
        });
    prop::collection::vec(case, 1..60).prop_map(|cases| Dataset::new(schema(), cases).unwrap())
}

/// Continuous-only data with no repeated attribute vectors.
fn consistent_dataset() -> impl Strategy<Value = Dataset> {
    prop::collection::btree_map((-200i32..200, -200i32..200), 0usize..3, 2..80).prop_map(|m| {
        let cases = m
            .into_iter()
            .map(|((x, y), class)| {
                Case::new(
                    vec![
                        Value::Number(x as f64),
                        Value::Number(y as f64),
                        Value::Category((x.rem_euclid(3)) as usize),
                    ],
                    class,
                )
            })
            .collect();
        Dataset::new(schema(), cases).unwrap()
    })
}

fn tests_in(tree: &TreeNode) -> Vec<&c45::metrics::SplitCandidate> {
    let mut out = Vec::new();
    tree.visit(&mut |n| {
        if let Some(t) = n.test() {
            out.push(t);
        }
    });
    out
}

proptest! {
    #[test]
    fn partition_conserves_weight(ds in dataset(), t in -12.0f64..12.0, attr in 0usize..3) {
        let test = if attr < 2 {
            Test::Threshold { attribute: attr, threshold: t }
        } else {
            Test::Discrete { attribute: 2, arity: 3 }
        };
        let cases = ds.case_set();
        let parts = partition_by_test(&ds, &cases, &test);
        let total: f64 = cases.iter().map(|c| c.weight).sum();
        let split: f64 = parts.iter().flatten().map(|c| c.weight).sum();
        let no_empty_fragments = parts.iter().flatten().all(|c| c.weight > 0.0);
        prop_assert!(no_empty_fragments);
        let known_total: f64 = cases
            .iter()
            .filter(|c| !ds.case(c.index).values[test.attribute()].is_unknown())
            .map(|c| c.weight)
            .sum();
        if known_total > 0.0 {
            prop_assert!((split - total).abs() <= 1e-9 * total);
        }
        if attr < 2 {
            for c in &cases {
                if !ds.case(c.index).values[attr].is_unknown() {
                    let homes = parts.iter().filter(|p| p.iter().any(|w| w.index == c.index)).count();
                    prop_assert_eq!(homes, 1);
                }
            }
        }
    }

    #[test]
    fn data_text_round_trips(ds in dataset()) {
        let unit: Vec<Case> = ds.cases().iter().map(|c| Case { weight: 1.0, ..c.clone() }).collect();
        let ds = Dataset::new(ds.shared_schema(), unit).unwrap();
        let back = parse_data(&serialize_data(&ds), ds.shared_schema()).unwrap();
        prop_assert_eq!(back, ds);
    }

    #[test]
    fn unpruned_gain_policies_fit_consistent_data(ds in consistent_dataset()) {
        for policy in [Policy::Rel7, Policy::SevenG] {
            let params = GrowParams { policy, min_split_weight: 1.0, pruning: false, ..Default::default() };
            let tree = grow(&ds, &ds.case_set(), &params);
            prop_assert_eq!(misclassified_weight(&tree, &ds, &ds.case_set()), 0.0);
        }
    }

    #[test]
    fn penalized_policies_only_keep_paying_thresholds(ds in dataset()) {
        for policy in [Policy::SevenGS, Policy::Rel8] {
            let tree = grow(&ds, &ds.case_set(), &GrowParams::with_policy(policy));
            for t in tests_in(&tree) {
                if t.is_continuous() {
                    prop_assert!(t.adjusted_gain > 0.0);
                }
            }
        }
    }

    #[test]
    fn pruning_never_grows_a_tree(ds in dataset(), cf in 0.05f64..0.9) {
        for policy in Policy::ALL {
            let params = GrowParams { policy, prune_confidence: cf, ..Default::default() };
            let tree = grow(&ds, &ds.case_set(), &params);
            let pruned = prune(&tree, &ds, &ds.case_set(), &params);
            prop_assert!(tree_size(&pruned) <= tree_size(&tree));
        }
    }

    #[test]
    fn growth_is_deterministic(ds in dataset()) {
        let params = GrowParams::default();
        prop_assert_eq!(grow(&ds, &ds.case_set(), &params), grow(&ds, &ds.case_set(), &params));
    }
}

#[test]
fn bundled_datasets_load() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("data");
    let iris = load_stem(dir.join("iris")).unwrap();
    assert_eq!(iris.len(), 150);
    assert_eq!(iris.class_distribution(), [50.0, 50.0, 50.0]);
    let pima = load_stem(dir.join("pima")).unwrap();
    assert_eq!(pima.len(), 632);
    assert_eq!(pima.schema().attributes().len(), 7);
    let with_unknowns = pima
        .cases()
        .iter()
        .filter(|c| c.values.iter().any(Value::is_unknown))
        .count();
    assert_eq!(with_unknowns, 100);
}
