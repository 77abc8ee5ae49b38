//! Pessimistic error-based pruning with subtree replacement and raising of
//! the largest branch.

use statrs::distribution::{ContinuousCDF, Normal};

use super::{GrowParams, TreeNode};
use crate::data::{argmax, class_distribution, partition_by_test, Dataset, WeightedCase};

/// Slack, in errors, allowed when comparing a replacement with the subtree.
const TOLERANCE: f64 = 0.1;

/// Extra errors to add to `errors` observed among `n` cases so that the sum is
/// the upper limit of the binomial error rate at confidence `cf`, times `n`.
pub fn added_errors(n: f64, errors: f64, cf: f64) -> f64 {
    if n <= 0.0 {
        return 0.0;
    }
    if errors < 1e-6 {
        return n * (1.0 - (cf.ln() / n).exp());
    }
    if errors < 0.9999 {
        let zero = n * (1.0 - (cf.ln() / n).exp());
        return zero + errors * (added_errors(n, 1.0, cf) - zero);
    }
    if errors + 0.5 >= n {
        return 0.67 * (n - errors);
    }
    let z = Normal::standard().inverse_cdf(1.0 - cf);
    let coeff = z * z;
    let e = errors + 0.5;
    let upper =
        (e + coeff / 2.0 + (coeff * (e * (1.0 - e / n) + coeff / 4.0)).sqrt()) / (n + coeff);
    n * upper - errors
}

/// Prunes `tree` bottom-up against the training cases it was grown from.
///
/// A subtree is replaced by a leaf, or by its most heavily used branch, when
/// the estimated errors of the replacement do not exceed those of the subtree.
pub fn prune(
    tree: &TreeNode,
    dataset: &Dataset,
    cases: &[WeightedCase],
    params: &GrowParams,
) -> TreeNode {
    let mut pruned = tree.clone();
    prune_node(&mut pruned, dataset, cases, params.prune_confidence);
    pruned
}

fn prune_node(node: &mut TreeNode, dataset: &Dataset, cases: &[WeightedCase], cf: f64) -> f64 {
    let dist = class_distribution(dataset, cases);
    let n: f64 = dist.iter().sum();
    match node {
        TreeNode::Leaf {
            class,
            distribution,
            weight,
        } => {
            if n > 0.0 && dist[argmax(&dist)] > dist[*class] {
                *class = argmax(&dist);
            }
            let errors = n - dist[*class];
            *distribution = dist;
            *weight = n;
            errors + added_errors(n, errors, cf)
        }
        TreeNode::Internal { test, children, .. } => {
            let leaf_class = argmax(&dist);
            let leaf_errors = n - dist[leaf_class];
            let leaf_estimate = leaf_errors + added_errors(n, leaf_errors, cf);

            let subsets = partition_by_test(dataset, cases, &test.test);
            let mut subtree_estimate = 0.0;
            for (child, subset) in children.iter_mut().zip(&subsets) {
                subtree_estimate += prune_node(child, dataset, subset, cf);
            }

            let largest = argmax(
                &subsets
                    .iter()
                    .map(|s| s.iter().map(|c| c.weight).sum::<f64>())
                    .collect::<Vec<_>>(),
            );
            let branch_estimate = estimate(&children[largest], dataset, cases, cf);

            if leaf_estimate <= branch_estimate + TOLERANCE
                && leaf_estimate <= subtree_estimate + TOLERANCE
            {
                *node = TreeNode::Leaf {
                    class: leaf_class,
                    distribution: dist,
                    weight: n,
                };
                leaf_estimate
            } else if branch_estimate <= subtree_estimate + TOLERANCE {
                let raised = match node {
                    TreeNode::Internal { children, .. } => children.swap_remove(largest),
                    TreeNode::Leaf { .. } => unreachable!(),
                };
                *node = raised;
                prune_node(node, dataset, cases, cf)
            } else {
                if let TreeNode::Internal {
                    class,
                    distribution,
                    weight,
                    ..
                } = node
                {
                    *class = leaf_class;
                    *distribution = dist;
                    *weight = n;
                }
                subtree_estimate
            }
        }
    }
}

/// Estimated errors of a subtree on `cases`, without modifying it.
fn estimate(node: &TreeNode, dataset: &Dataset, cases: &[WeightedCase], cf: f64) -> f64 {
    match node {
        TreeNode::Leaf { class, .. } => {
            let dist = class_distribution(dataset, cases);
            let n: f64 = dist.iter().sum();
            let best = if n > 0.0 && dist[argmax(&dist)] > dist[*class] {
                argmax(&dist)
            } else {
                *class
            };
            let errors = n - dist[best];
            errors + added_errors(n, errors, cf)
        }
        TreeNode::Internal { test, children, .. } => {
            let subsets = partition_by_test(dataset, cases, &test.test);
            children
                .iter()
                .zip(&subsets)
                .map(|(child, subset)| estimate(child, dataset, subset, cf))
                .sum()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::{parse_data, parse_names, AttributeDecl, Case, Schema, Value};
    use crate::policy::Policy;
    use crate::tree::{grow, tree_size};
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::sync::Arc;

    #[test]
    fn added_errors_reference_points() {
        // No errors: n * (1 - cf^(1/n)).
        assert_abs_diff_eq!(added_errors(2.0, 0.0, 0.25), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(added_errors(1.0, 0.0, 0.25), 0.75, epsilon = 1e-12);
        assert_eq!(added_errors(0.0, 0.0, 0.25), 0.0);
        // Upper bound exceeds the observed rate and shrinks with more data.
        let small = added_errors(10.0, 2.0, 0.25) / 10.0;
        let large = added_errors(1000.0, 200.0, 0.25) / 1000.0;
        assert!(small > large && large > 0.0);
        // Lower confidence means a more pessimistic estimate.
        assert!(added_errors(20.0, 3.0, 0.1) > added_errors(20.0, 3.0, 0.25));
    }

    fn params() -> GrowParams {
        GrowParams {
            policy: Policy::Rel8,
            pruning: true,
            ..Default::default()
        }
    }

    #[test]
    fn same_class_children_collapse() {
        let ds = parse_data(
            "u,a\nu,a\nu,a\nu,b\nv,a\nv,a\nv,a\nv,b\n",
            parse_names("a,b.\nc: u,v.\n").unwrap(),
        )
        .unwrap();
        // Hand-built tree: both children predict class a.
        let cands = crate::metrics::evaluate_discrete_test(&ds, &ds.case_set(), 0);
        let tree = TreeNode::Internal {
            test: cands,
            children: vec![
                TreeNode::leaf(vec![3.0, 1.0]),
                TreeNode::leaf(vec![3.0, 1.0]),
            ],
            class: 0,
            distribution: vec![6.0, 2.0],
            weight: 8.0,
        };
        let pruned = prune(&tree, &ds, &ds.case_set(), &params());
        assert!(pruned.is_leaf());
        assert_eq!(pruned.class(), 0);
    }

    #[test]
    fn noiseless_tree_is_unchanged() {
        let mut data = String::new();
        for i in 0..60 {
            let x = i as f64;
            let class = if !(20.0..40.0).contains(&x) { "a" } else { "b" };
            data.push_str(&format!("{x},{class}\n"));
        }
        let ds = parse_data(&data, parse_names("a,b.\nx: continuous.\n").unwrap()).unwrap();
        let tree = grow(&ds, &ds.case_set(), &params());
        assert_eq!(tree_size(&tree), 5);
        let pruned = prune(&tree, &ds, &ds.case_set(), &params());
        assert_eq!(pruned, tree);
    }

    fn noisy_dataset(seed: u64) -> crate::data::Dataset {
        let schema = Arc::new(
            Schema::new(
                vec![AttributeDecl::continuous("x")],
                vec!["a".into(), "b".into()],
            )
            .unwrap(),
        );
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let cases = (0..100)
            .map(|_| {
                let x: f64 = rng.random();
                let mut class = usize::from(x > 0.5);
                if rng.random::<f64>() < 0.05 {
                    class = 1 - class;
                }
                Case::new(vec![Value::Number(x)], class)
            })
            .collect();
        crate::data::Dataset::new(schema, cases).unwrap()
    }

    #[test]
    fn label_noise_is_pruned_away() {
        let ds = noisy_dataset(11);
        let p = GrowParams {
            policy: Policy::Rel7,
            ..params()
        };
        let tree = grow(&ds, &ds.case_set(), &p);
        let pruned = prune(&tree, &ds, &ds.case_set(), &p);
        assert!(tree_size(&pruned) < tree_size(&tree));
    }

    #[test]
    fn prune_is_idempotent_and_never_grows() {
        for seed in 0..10 {
            let ds = noisy_dataset(seed);
            for policy in Policy::ALL {
                let p = GrowParams { policy, ..params() };
                let tree = grow(&ds, &ds.case_set(), &p);
                let once = prune(&tree, &ds, &ds.case_set(), &p);
                let twice = prune(&once, &ds, &ds.case_set(), &p);
                assert!(tree_size(&once) <= tree_size(&tree));
                assert_eq!(once, twice, "seed {seed} {policy}");
            }
        }
    }
}
