//! Tree induction under a split-selection [`Policy`], pessimistic pruning,
//! classification and size metrics.

mod format;
mod prune;

pub use format::{parse_tree_json, render_text, tree_to_json, TreeFile, TREE_FORMAT_VERSION};
pub use prune::{added_errors, prune};

use serde::{Deserialize, Serialize};

use crate::data::{
    argmax, class_distribution, partition_by_test, total_weight, Case, Dataset, WeightedCase,
};
use crate::metrics::{
    evaluate_continuous_test, evaluate_discrete_test, SplitCandidate, GAIN_EPSILON,
};
pub use crate::policy::Policy;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GrowParams {
    pub policy: Policy,
    /// A split is only accepted when at least two outcomes carry this much
    /// weight; a threshold needs it on both sides.
    pub min_split_weight: f64,
    /// Confidence level of the pessimistic error bound used by pruning.
    pub prune_confidence: f64,
    pub pruning: bool,
}

impl Default for GrowParams {
    fn default() -> Self {
        GrowParams {
            policy: Policy::Rel8,
            min_split_weight: 2.0,
            prune_confidence: 0.25,
            pruning: true,
        }
    }
}

impl GrowParams {
    pub fn with_policy(policy: Policy) -> Self {
        GrowParams {
            policy,
            ..Default::default()
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "node", rename_all = "lowercase")]
pub enum TreeNode {
    Leaf {
        class: usize,
        distribution: Vec<f64>,
        weight: f64,
    },
    Internal {
        test: SplitCandidate,
        children: Vec<TreeNode>,
        /// Majority class of the training cases at this node.
        class: usize,
        distribution: Vec<f64>,
        weight: f64,
    },
}

impl TreeNode {
    pub fn leaf(distribution: Vec<f64>) -> Self {
        let class = argmax(&distribution);
        let weight = distribution.iter().sum();
        TreeNode::Leaf {
            class,
            distribution,
            weight,
        }
    }

    pub fn is_leaf(&self) -> bool {
        matches!(self, TreeNode::Leaf { .. })
    }

    pub fn class(&self) -> usize {
        match self {
            TreeNode::Leaf { class, .. } | TreeNode::Internal { class, .. } => *class,
        }
    }

    pub fn weight(&self) -> f64 {
        match self {
            TreeNode::Leaf { weight, .. } | TreeNode::Internal { weight, .. } => *weight,
        }
    }

    pub fn distribution(&self) -> &[f64] {
        match self {
            TreeNode::Leaf { distribution, .. } | TreeNode::Internal { distribution, .. } => {
                distribution
            }
        }
    }

    pub fn children(&self) -> &[TreeNode] {
        match self {
            TreeNode::Leaf { .. } => &[],
            TreeNode::Internal { children, .. } => children,
        }
    }

    pub fn test(&self) -> Option<&SplitCandidate> {
        match self {
            TreeNode::Leaf { .. } => None,
            TreeNode::Internal { test, .. } => Some(test),
        }
    }

    /// Calls `f` on every node, parents before children.
    pub fn visit<'a>(&'a self, f: &mut impl FnMut(&'a TreeNode)) {
        f(self);
        for child in self.children() {
            child.visit(f);
        }
    }
}

/// Total node count, internal nodes plus leaves.
pub fn tree_size(tree: &TreeNode) -> usize {
    1 + tree.children().iter().map(tree_size).sum::<usize>()
}

pub fn leaf_count(tree: &TreeNode) -> usize {
    match tree {
        TreeNode::Leaf { .. } => 1,
        TreeNode::Internal { children, .. } => children.iter().map(leaf_count).sum(),
    }
}

pub fn depth(tree: &TreeNode) -> usize {
    tree.children().iter().map(depth).max().map_or(0, |d| d + 1)
}

fn admissible(candidate: &SplitCandidate, min_weight: f64) -> bool {
    candidate
        .outcome_weights
        .iter()
        .filter(|&&w| w >= min_weight)
        .count()
        >= 2
}

/// All tests at a node that survive the policy's filters, each with its
/// ranking gain ratio filled in, in attribute order.
pub fn candidate_tests(
    dataset: &Dataset,
    cases: &[WeightedCase],
    params: &GrowParams,
) -> Vec<SplitCandidate> {
    let policy = params.policy;
    let schema = dataset.schema();
    let mut out = Vec::new();
    for (a, attr) in schema.attributes().iter().enumerate() {
        let candidate = if attr.is_continuous() {
            match evaluate_continuous_test(
                dataset,
                cases,
                a,
                policy.threshold_criterion(),
                params.min_split_weight,
            ) {
                Some(c) => c,
                None => continue,
            }
        } else {
            let c = evaluate_discrete_test(dataset, cases, a);
            if c.trivial {
                continue;
            }
            c
        };
        if !admissible(&candidate, params.min_split_weight) || candidate.gain <= GAIN_EPSILON {
            continue;
        }
        if policy.filters_by_penalty()
            && candidate.is_continuous()
            && candidate.adjusted_gain <= 0.0
        {
            continue;
        }
        let mut candidate = candidate;
        let numerator = ranking_gain(&candidate, policy);
        candidate.gain_ratio = if candidate.split_info > 0.0 {
            numerator / candidate.split_info
        } else {
            0.0
        };
        out.push(candidate);
    }
    out
}

fn ranking_gain(candidate: &SplitCandidate, policy: Policy) -> f64 {
    if policy.ranks_by_adjusted_gain() {
        candidate.adjusted_gain
    } else {
        candidate.gain
    }
}

/// Chooses the test for a node, or `None` when no test is worth making.
///
/// Among the surviving tests, those with at least the average ranking gain
/// compete on gain ratio; ties go to the lowest attribute index.
pub fn select_split(
    dataset: &Dataset,
    cases: &[WeightedCase],
    params: &GrowParams,
) -> Option<SplitCandidate> {
    let dist = class_distribution(dataset, cases);
    if dist.iter().filter(|&&w| w > 0.0).count() < 2 {
        return None;
    }
    let candidates = candidate_tests(dataset, cases, params);
    if candidates.is_empty() {
        return None;
    }
    let average = candidates
        .iter()
        .map(|c| ranking_gain(c, params.policy))
        .sum::<f64>()
        / candidates.len() as f64;
    let mut best: Option<SplitCandidate> = None;
    for c in candidates {
        if ranking_gain(&c, params.policy) < average - 1e-9 {
            continue;
        }
        if best
            .as_ref()
            .is_none_or(|b| c.gain_ratio > b.gain_ratio + GAIN_EPSILON)
        {
            best = Some(c);
        }
    }
    best
}

/// Grows an unpruned tree from `cases`.
pub fn grow(dataset: &Dataset, cases: &[WeightedCase], params: &GrowParams) -> TreeNode {
    let dist = class_distribution(dataset, cases);
    let weight = total_weight(cases);
    let classes_present = dist.iter().filter(|&&w| w > 0.0).count();
    if classes_present < 2 || weight < 2.0 * params.min_split_weight {
        return TreeNode::leaf(dist);
    }
    let Some(test) = select_split(dataset, cases, params) else {
        return TreeNode::leaf(dist);
    };
    let class = argmax(&dist);
    let subsets = partition_by_test(dataset, cases, &test.test);
    let children = subsets
        .iter()
        .map(|subset| {
            if total_weight(subset) > 0.0 {
                grow(dataset, subset, params)
            } else {
                TreeNode::Leaf {
                    class,
                    distribution: vec![0.0; dist.len()],
                    weight: 0.0,
                }
            }
        })
        .collect();
    TreeNode::Internal {
        test,
        children,
        class,
        distribution: dist,
        weight,
    }
}

/// Grows a tree on every case of `dataset`, then prunes it if enabled.
pub fn induce(dataset: &Dataset, params: &GrowParams) -> TreeNode {
    induce_on(dataset, &dataset.case_set(), params)
}

pub fn induce_on(dataset: &Dataset, cases: &[WeightedCase], params: &GrowParams) -> TreeNode {
    let tree = grow(dataset, cases, params);
    if params.pruning {
        prune(&tree, dataset, cases, params)
    } else {
        tree
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Prediction {
    pub class: usize,
    pub probabilities: Vec<f64>,
}

/// Classifies a case. An unknown tested value sends the case down every
/// branch, weighted by the branch's share of training weight.
pub fn classify(tree: &TreeNode, case: &Case) -> Prediction {
    let mut probabilities = vec![0.0; tree.distribution().len()];
    accumulate(tree, case, 1.0, &mut probabilities);
    let total: f64 = probabilities.iter().sum();
    if total > 0.0 {
        for p in &mut probabilities {
            *p /= total;
        }
    }
    Prediction {
        class: argmax(&probabilities),
        probabilities,
    }
}

fn accumulate(node: &TreeNode, case: &Case, factor: f64, probs: &mut [f64]) {
    match node {
        TreeNode::Leaf {
            class,
            distribution,
            weight,
        } => {
            if *weight > 0.0 {
                for (p, d) in probs.iter_mut().zip(distribution) {
                    *p += factor * d / weight;
                }
            } else {
                probs[*class] += factor;
            }
        }
        TreeNode::Internal {
            test,
            children,
            class,
            ..
        } => match test.test.outcome(case) {
            Some(o) => accumulate(&children[o], case, factor, probs),
            None => {
                let total: f64 = children.iter().map(TreeNode::weight).sum();
                if total <= 0.0 {
                    probs[*class] += factor;
                    return;
                }
                for child in children {
                    let share = child.weight() / total;
                    if share > 0.0 {
                        accumulate(child, case, factor * share, probs);
                    }
                }
            }
        },
    }
}

/// Misclassified weight over the given cases.
pub fn misclassified_weight(tree: &TreeNode, dataset: &Dataset, cases: &[WeightedCase]) -> f64 {
    cases
        .iter()
        .filter(|wc| {
            let case = dataset.case(wc.index);
            classify(tree, case).class != case.class
        })
        .map(|wc| wc.weight)
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::{parse_data, parse_names, AttributeDecl, Schema, Test, Value};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::sync::Arc;

    fn load(names: &str, data: &str) -> Dataset {
        parse_data(data, parse_names(names).unwrap()).unwrap()
    }

    fn unpruned(policy: Policy) -> GrowParams {
        GrowParams {
            policy,
            pruning: false,
            ..Default::default()
        }
    }

    #[test]
    fn single_class_is_one_leaf() {
        let ds = load("a,b.\nx: continuous.\n", "1,a\n2,a\n3,a\n4,a\n5,a\n");
        let t = grow(&ds, &ds.case_set(), &unpruned(Policy::Rel8));
        assert!(t.is_leaf());
        assert_eq!(tree_size(&t), 1);
        assert_eq!(t.class(), 0);
    }

    #[test]
    fn perfect_threshold_split() {
        let ds = load("a,b.\nx: continuous.\n", "1,a\n2,a\n3,b\n4,b\n");
        for policy in Policy::ALL {
            let t = grow(&ds, &ds.case_set(), &unpruned(policy));
            assert_eq!(tree_size(&t), 3, "{policy}");
            let test = t.test().unwrap();
            assert_eq!(
                test.test,
                Test::Threshold {
                    attribute: 0,
                    threshold: 2.5
                }
            );
            assert_eq!(t.children()[0].class(), 0);
            assert_eq!(t.children()[1].class(), 1);
        }
    }

    #[test]
    fn conflicting_duplicates_become_majority_leaf() {
        let ds = load(
            "a,b.\nx: continuous.\nc: u,v.\n",
            "1,u,a\n1,u,a\n1,u,b\n1,u,a\n",
        );
        let t = grow(&ds, &ds.case_set(), &unpruned(Policy::Rel7));
        assert!(t.is_leaf());
        assert_eq!(t.class(), 0);
        assert_eq!(t.distribution(), [3.0, 1.0]);
    }

    #[test]
    fn zero_gain_everywhere_stops() {
        let ds = load(
            "a,b.\nc: u,v.\nd: p,q.\n",
            "u,p,a\nu,q,b\nv,p,b\nv,q,a\nu,p,a\nu,q,b\nv,p,b\nv,q,a\n",
        );
        assert!(select_split(&ds, &ds.case_set(), &unpruned(Policy::Rel8)).is_none());
        assert!(grow(&ds, &ds.case_set(), &unpruned(Policy::Rel8)).is_leaf());
    }

    #[test]
    fn tree_size_counts_nodes() {
        let leaf = TreeNode::leaf(vec![1.0, 0.0]);
        assert_eq!(tree_size(&leaf), 1);
        let internal = |k: usize| TreeNode::Internal {
            test: crate::metrics::SplitCandidate {
                test: Test::Discrete {
                    attribute: 0,
                    arity: k,
                },
                gain: 0.0,
                split_info: 0.0,
                penalty: 0.0,
                adjusted_gain: 0.0,
                gain_ratio: 0.0,
                distinct_values: None,
                outcome_weights: vec![1.0; k],
                trivial: false,
            },
            children: vec![leaf.clone(); k],
            class: 0,
            distribution: vec![1.0, 0.0],
            weight: 1.0,
        };
        assert_eq!(tree_size(&internal(2)), 3);
        assert_eq!(tree_size(&internal(3)), 4);
        assert_eq!(leaf_count(&internal(3)), 3);
    }

    /// One discrete attribute that separates the classes perfectly and one
    /// continuous attribute whose 20 distinct values are sampled from 100
    /// candidates, labelled so that it also separates the classes except for
    /// two cases.
    fn discrete_vs_random_continuous() -> Dataset {
        let schema = Arc::new(
            Schema::new(
                vec![
                    AttributeDecl::discrete("d", ["p", "q"]),
                    AttributeDecl::continuous("x"),
                ],
                vec!["a".into(), "b".into()],
            )
            .unwrap(),
        );
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut cases = Vec::new();
        for i in 0..20 {
            let class = i % 2;
            let x = rng.random_range(0..100) as f64 + 0.5;
            cases.push(Case::new(
                vec![Value::Category(class), Value::Number(x)],
                class,
            ));
        }
        Dataset::new(schema, cases).unwrap()
    }

    #[test]
    fn rel8_prefers_discrete_test_over_noise() {
        let ds = discrete_vs_random_continuous();
        let chosen = select_split(&ds, &ds.case_set(), &unpruned(Policy::Rel8)).unwrap();
        assert_eq!(chosen.attribute(), 0);
    }

    #[test]
    fn policies_diverge_on_a_constructed_fixture() {
        // The discrete attribute is weakly informative. The continuous one has
        // many distinct values and a gain that beats the discrete test but not
        // its own threshold penalty.
        let mut data = String::new();
        let classes = [
            "a", "a", "b", "a", "a", "a", "b", "a", "a", "b", "b", "a", "b", "b", "b", "a", "b",
            "b", "b", "b",
        ];
        for (i, c) in classes.iter().enumerate() {
            let d = if (i < 10) == (i % 5 != 4) { "p" } else { "q" };
            data.push_str(&format!("{d},{},{c}\n", i as f64 * 3.7));
        }
        let ds = load("a,b.\nd: p,q.\nx: continuous.\n", &data);
        let rel7 = select_split(&ds, &ds.case_set(), &unpruned(Policy::Rel7)).unwrap();
        let rel8 = select_split(&ds, &ds.case_set(), &unpruned(Policy::Rel8)).unwrap();
        assert_eq!(rel7.attribute(), 1);
        assert_eq!(rel8.attribute(), 0);
        assert!(rel7.gain < rel7.penalty);
    }

    #[test]
    fn classify_pure_leaf_and_unknowns() {
        let ds = load("a,b.\nx: continuous.\n", "1,a\n2,a\n3,b\n4,b\n5,b\n6,b\n");
        let t = grow(&ds, &ds.case_set(), &unpruned(Policy::Rel8));
        let p = classify(&t, ds.case(0));
        assert_eq!(p.class, 0);
        assert_eq!(p.probabilities, vec![1.0, 0.0]);

        let unknown = Case::new(vec![Value::Unknown], 0);
        let p = classify(&t, &unknown);
        assert!((p.probabilities[0] - 2.0 / 6.0).abs() < 1e-12);
        assert!((p.probabilities[1] - 4.0 / 6.0).abs() < 1e-12);
        assert_eq!(p.class, 1);

        let leaf = TreeNode::leaf(vec![0.0, 3.0]);
        assert_eq!(classify(&leaf, &unknown).class, 1);
    }

    #[test]
    fn balanced_unknown_follows_branch_weights() {
        let ds = load("a,b.\nx: continuous.\n", "1,a\n2,a\n3,b\n4,b\n");
        let t = grow(&ds, &ds.case_set(), &unpruned(Policy::Rel7));
        let p = classify(&t, &Case::new(vec![Value::Unknown], 0));
        assert_eq!(p.probabilities, vec![0.5, 0.5]);
        assert_eq!(p.class, 0);
    }

    #[test]
    fn empty_branch_predicts_parent_majority() {
        let ds = load("a,b.\nc: u,v,w.\n", "u,a\nu,a\nu,a\nv,b\nv,b\n");
        let t = grow(&ds, &ds.case_set(), &unpruned(Policy::Rel8));
        let empty = &t.children()[2];
        assert!(empty.is_leaf());
        assert_eq!(empty.weight(), 0.0);
        assert_eq!(empty.class(), 0);
        let p = classify(&t, &Case::new(vec![Value::Category(2)], 0));
        assert_eq!(p.class, 0);
        assert_eq!(p.probabilities.iter().sum::<f64>(), 1.0);
    }

    #[test]
    fn grow_is_deterministic() {
        let ds = discrete_vs_random_continuous();
        for policy in Policy::ALL {
            let a = grow(&ds, &ds.case_set(), &unpruned(policy));
            let b = grow(&ds, &ds.case_set(), &unpruned(policy));
            assert_eq!(a, b);
        }
    }
}
