//! Splitting-criterion arithmetic: class entropy, information gain, split
//! information, threshold search over continuous attributes and the coding
//! penalty charged to a threshold test.
//!
//! All quantities are in bits and computed over case weights.

use serde::{Deserialize, Serialize};

use crate::data::{Dataset, Test, Value, WeightedCase};
use crate::error::{Error, Result};
use crate::policy::ThresholdCriterion;

/// Gains closer to zero than this are treated as zero.
pub const GAIN_EPSILON: f64 = 1e-12;

/// Class entropy of a weight distribution. Zero for empty or single-class input.
pub fn info(distribution: &[f64]) -> f64 {
    let total: f64 = distribution.iter().sum();
    if total <= 0.0 {
        return 0.0;
    }
    distribution
        .iter()
        .filter(|&&w| w > 0.0)
        .map(|&w| {
            let p = w / total;
            -p * p.log2()
        })
        .sum()
}

/// Information gained by splitting `parent` into `subsets`.
///
/// The subsets must add up, class by class, to the parent.
pub fn gain(parent: &[f64], subsets: &[Vec<f64>]) -> Result<f64> {
    let total: f64 = parent.iter().sum();
    let scale = total.abs().max(1.0);
    for (j, &p) in parent.iter().enumerate() {
        let mut sum = 0.0;
        for s in subsets {
            if s.len() != parent.len() {
                return Err(Error::MassMismatch(f64::INFINITY));
            }
            sum += s[j];
        }
        let rel = (sum - p).abs() / scale;
        if rel > 1e-6 {
            return Err(Error::MassMismatch(rel));
        }
    }
    if total <= 0.0 {
        return Ok(0.0);
    }
    let residual: f64 = subsets
        .iter()
        .map(|s| s.iter().sum::<f64>() / total * info(s))
        .sum();
    Ok(clamp_gain(info(parent) - residual))
}

fn clamp_gain(g: f64) -> f64 {
    if g.abs() < GAIN_EPSILON {
        0.0
    } else {
        g
    }
}

/// Entropy of the subset sizes of a partition.
pub fn split_info(subset_weights: &[f64]) -> f64 {
    info(subset_weights)
}

/// A known value of a continuous attribute, with the case's class and weight.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Observation {
    pub value: f64,
    pub class: usize,
    pub weight: f64,
}

impl Observation {
    pub fn new(value: f64, class: usize, weight: f64) -> Self {
        Observation {
            value,
            class,
            weight,
        }
    }
}

#[derive(Debug)]
struct ValueGroup {
    value: f64,
    weight: f64,
    dist: Vec<f64>,
    /// `Some(c)` when every case with this value has class `c`.
    pure: Option<usize>,
}

fn sorted(obs: &[Observation]) -> Vec<Observation> {
    let mut obs = obs.to_vec();
    obs.sort_by(|a, b| a.value.total_cmp(&b.value));
    obs
}

fn group_values(obs: &[Observation], num_classes: usize) -> Vec<ValueGroup> {
    let mut groups: Vec<ValueGroup> = Vec::new();
    for o in sorted(obs) {
        match groups.last_mut() {
            Some(g) if g.value == o.value => {
                g.weight += o.weight;
                g.dist[o.class] += o.weight;
                if g.pure != Some(o.class) {
                    g.pure = None;
                }
            }
            _ => {
                let mut dist = vec![0.0; num_classes];
                dist[o.class] += o.weight;
                groups.push(ValueGroup {
                    value: o.value,
                    weight: o.weight,
                    dist,
                    pure: Some(o.class),
                });
            }
        }
    }
    groups
}

fn num_classes_of(obs: &[Observation]) -> usize {
    obs.iter().map(|o| o.class + 1).max().unwrap_or(0)
}

/// Midpoint of two adjacent distinct values, kept strictly below `hi` so that
/// `x <= t` always separates them.
fn midpoint(lo: f64, hi: f64) -> f64 {
    let mid = lo + (hi - lo) / 2.0;
    if mid < hi {
        mid
    } else {
        lo
    }
}

fn is_boundary(left: &ValueGroup, right: &ValueGroup) -> bool {
    !matches!((left.pure, right.pure), (Some(a), Some(b)) if a == b)
}

/// Every candidate threshold: the midpoints between adjacent distinct values.
pub fn enumerate_thresholds(obs: &[Observation]) -> Vec<f64> {
    let groups = group_values(obs, num_classes_of(obs));
    groups
        .windows(2)
        .map(|w| midpoint(w[0].value, w[1].value))
        .collect()
}

/// The midpoints that can maximize a convex criterion: those not lying between
/// two values whose cases all belong to one and the same class.
pub fn boundary_thresholds(obs: &[Observation]) -> Vec<f64> {
    let groups = group_values(obs, num_classes_of(obs));
    groups
        .windows(2)
        .filter(|w| is_boundary(&w[0], &w[1]))
        .map(|w| midpoint(w[0].value, w[1].value))
        .collect()
}

/// Which midpoints a threshold search evaluates.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CandidateSet {
    All,
    Boundary,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ThresholdSearch {
    pub criterion: ThresholdCriterion,
    pub candidates: CandidateSet,
    /// Both sides of an admissible threshold carry at least this much weight.
    pub min_branch_weight: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ThresholdChoice {
    pub threshold: f64,
    pub gain: f64,
    pub split_info: f64,
    /// Number of distinct values among the observations.
    pub distinct_values: usize,
    /// Weight on the `<=` side, then on the `>` side.
    pub branch_weights: [f64; 2],
}

/// Finds the threshold maximizing the search criterion.
///
/// Only thresholds with positive gain compete; ties go to the smallest
/// threshold. When no admissible threshold has positive gain, the smallest
/// admissible one is returned with its (zero) gain so the caller can filter it.
/// `None` when there are fewer than two distinct values or no admissible
/// threshold at all.
pub fn search_threshold(
    obs: &[Observation],
    num_classes: usize,
    search: &ThresholdSearch,
) -> Option<ThresholdChoice> {
    let groups = group_values(obs, num_classes);
    let n = groups.len();
    if n < 2 {
        return None;
    }
    let mut total = vec![0.0; num_classes];
    for g in &groups {
        for (t, d) in total.iter_mut().zip(&g.dist) {
            *t += d;
        }
    }
    let total_weight: f64 = groups.iter().map(|g| g.weight).sum();
    let base = info(&total);

    // Suffix sums keep the right-hand distribution exact.
    let mut suffix = vec![vec![0.0; num_classes]; n + 1];
    for i in (0..n).rev() {
        let next = suffix[i + 1].clone();
        for ((s, d), r) in suffix[i].iter_mut().zip(&groups[i].dist).zip(&next) {
            *s = r + d;
        }
    }

    let mut left = vec![0.0; num_classes];
    let mut left_weight = 0.0;
    let mut best: Option<(f64, ThresholdChoice)> = None;
    let mut fallback_in_set: Option<ThresholdChoice> = None;
    let mut fallback_any: Option<ThresholdChoice> = None;
    for i in 0..n - 1 {
        for (l, d) in left.iter_mut().zip(&groups[i].dist) {
            *l += d;
        }
        left_weight += groups[i].weight;
        let right = &suffix[i + 1];
        let right_weight: f64 = right.iter().sum();
        if left_weight < search.min_branch_weight || right_weight < search.min_branch_weight {
            continue;
        }
        let in_set = match search.candidates {
            CandidateSet::All => true,
            CandidateSet::Boundary => is_boundary(&groups[i], &groups[i + 1]),
        };
        if !in_set && fallback_any.is_some() {
            continue;
        }
        let g = clamp_gain(
            base - (left_weight * info(&left) + right_weight * info(right)) / total_weight,
        );
        let choice = ThresholdChoice {
            threshold: midpoint(groups[i].value, groups[i + 1].value),
            gain: g,
            split_info: split_info(&[left_weight, right_weight]),
            distinct_values: n,
            branch_weights: [left_weight, right_weight],
        };
        if !in_set {
            fallback_any = Some(choice);
            continue;
        }
        if g <= GAIN_EPSILON {
            if fallback_in_set.is_none() {
                fallback_in_set = Some(choice);
            }
            continue;
        }
        let value = match search.criterion {
            ThresholdCriterion::Gain => g,
            ThresholdCriterion::GainRatio => g / choice.split_info,
        };
        if best.as_ref().is_none_or(|(b, _)| value > *b + GAIN_EPSILON) {
            best = Some((value, choice));
        }
    }
    best.map(|(_, c)| c).or(fallback_in_set).or(fallback_any)
}

/// Threshold choice for a policy's criterion over the boundary thresholds.
pub fn best_threshold(
    obs: &[Observation],
    num_classes: usize,
    criterion: ThresholdCriterion,
) -> Option<ThresholdChoice> {
    search_threshold(
        obs,
        num_classes,
        &ThresholdSearch {
            criterion,
            candidates: CandidateSet::Boundary,
            min_branch_weight: 0.0,
        },
    )
}

/// Cost, in bits per case, of naming one of the `N - 1` thresholds of an
/// attribute with `distinct_values` distinct known values. `None` when there
/// is no threshold to name.
pub fn continuous_penalty(distinct_values: usize, known_weight: f64) -> Option<f64> {
    if distinct_values < 2 || known_weight <= 0.0 {
        return None;
    }
    Some(((distinct_values - 1) as f64).log2() / known_weight)
}

/// A fully evaluated test at a node.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SplitCandidate {
    pub test: Test,
    /// Gain over known-value cases, scaled by the known-value weight fraction.
    pub gain: f64,
    pub split_info: f64,
    /// Threshold coding cost; zero for discrete tests.
    pub penalty: f64,
    pub adjusted_gain: f64,
    /// Set by the selecting policy.
    pub gain_ratio: f64,
    /// Distinct known values at the node (continuous tests only).
    pub distinct_values: Option<usize>,
    /// Known-value weight reaching each outcome.
    pub outcome_weights: Vec<f64>,
    /// Fewer than two outcomes receive any cases.
    pub trivial: bool,
}

impl SplitCandidate {
    pub fn attribute(&self) -> usize {
        self.test.attribute()
    }

    pub fn is_continuous(&self) -> bool {
        matches!(self.test, Test::Threshold { .. })
    }
}

fn ratio(gain: f64, split: f64) -> f64 {
    if split > 0.0 {
        gain / split
    } else {
        0.0
    }
}

/// Evaluates `A = ?` for a discrete attribute over the given cases.
pub fn evaluate_discrete_test(
    dataset: &Dataset,
    cases: &[WeightedCase],
    attribute: usize,
) -> SplitCandidate {
    let schema = dataset.schema();
    let arity = schema
        .attribute(attribute)
        .arity()
        .expect("evaluate_discrete_test on a continuous attribute");
    let c = schema.num_classes();
    let mut subsets = vec![vec![0.0; c]; arity];
    let mut unknown = 0.0;
    for wc in cases {
        let case = dataset.case(wc.index);
        match case.values[attribute] {
            Value::Category(v) => subsets[v][case.class] += wc.weight,
            _ => unknown += wc.weight,
        }
    }
    let known_dist: Vec<f64> = (0..c).map(|j| subsets.iter().map(|s| s[j]).sum()).collect();
    let known: f64 = known_dist.iter().sum();
    let outcome_weights: Vec<f64> = subsets.iter().map(|s| s.iter().sum()).collect();
    let nonempty = outcome_weights.iter().filter(|&&w| w > 0.0).count();
    let total = known + unknown;
    let g = if known > 0.0 {
        let raw = gain(&known_dist, &subsets).expect("subsets built from the same cases");
        clamp_gain(known / total * raw)
    } else {
        0.0
    };
    let mut sizes = outcome_weights.clone();
    if unknown > 0.0 {
        sizes.push(unknown);
    }
    let split = split_info(&sizes);
    SplitCandidate {
        test: Test::Discrete { attribute, arity },
        gain: g,
        split_info: split,
        penalty: 0.0,
        adjusted_gain: g,
        gain_ratio: ratio(g, split),
        distinct_values: None,
        outcome_weights,
        trivial: nonempty < 2,
    }
}

/// Known-value observations of a continuous attribute, plus the unknown weight.
pub fn observations(
    dataset: &Dataset,
    cases: &[WeightedCase],
    attribute: usize,
) -> (Vec<Observation>, f64) {
    let mut obs = Vec::with_capacity(cases.len());
    let mut unknown = 0.0;
    for wc in cases {
        let case = dataset.case(wc.index);
        match case.values[attribute] {
            Value::Number(x) => obs.push(Observation::new(x, case.class, wc.weight)),
            _ => unknown += wc.weight,
        }
    }
    (obs, unknown)
}

/// Evaluates the best `A <= t` test for a continuous attribute.
///
/// The threshold is chosen over known values by `criterion`, with both sides
/// carrying at least `min_branch_weight`. The penalty is computed from the
/// number of distinct known values at the node.
pub fn evaluate_continuous_test(
    dataset: &Dataset,
    cases: &[WeightedCase],
    attribute: usize,
    criterion: ThresholdCriterion,
    min_branch_weight: f64,
) -> Option<SplitCandidate> {
    let (obs, unknown) = observations(dataset, cases, attribute);
    let known: f64 = obs.iter().map(|o| o.weight).sum();
    if known <= 0.0 {
        return None;
    }
    let choice = search_threshold(
        &obs,
        dataset.schema().num_classes(),
        &ThresholdSearch {
            criterion,
            candidates: CandidateSet::All,
            min_branch_weight,
        },
    )?;
    let penalty = continuous_penalty(choice.distinct_values, known)?;
    let g = clamp_gain(known / (known + unknown) * choice.gain);
    let split = if unknown > 0.0 {
        split_info(&[choice.branch_weights[0], choice.branch_weights[1], unknown])
    } else {
        choice.split_info
    };
    Some(SplitCandidate {
        test: Test::Threshold {
            attribute,
            threshold: choice.threshold,
        },
        gain: g,
        split_info: split,
        penalty,
        adjusted_gain: g - penalty,
        gain_ratio: ratio(g, split),
        distinct_values: Some(choice.distinct_values),
        outcome_weights: choice.branch_weights.to_vec(),
        trivial: false,
    })
}
