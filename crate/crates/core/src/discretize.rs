//! Global supervised discretization.
//!
//! Each continuous attribute is cut recursively: the gain-maximizing boundary
//! threshold of a segment is accepted when it passes the minimum description
//! length test of Fayyad and Irani (1993), and the two halves are then cut in
//! turn. `w` accepted cuts turn the attribute into a discrete one with `w + 1`
//! interval values.

use std::collections::HashSet;
use std::fmt::Write as _;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::data::{AttributeDecl, AttributeKind, Case, Dataset, Schema, Value};
use crate::error::{Error, Result};
use crate::metrics::{best_threshold, info, observations, Observation};
use crate::policy::ThresholdCriterion;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiscretizationRule {
    pub attribute: usize,
    /// Strictly increasing.
    pub cut_points: Vec<f64>,
}

impl DiscretizationRule {
    pub fn new(attribute: usize, cut_points: Vec<f64>) -> Result<Self> {
        if cut_points.iter().any(|c| !c.is_finite()) {
            return Err(Error::RuleMismatch("non-finite cut point".into()));
        }
        if cut_points.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::RuleMismatch(
                "cut points are not strictly increasing".into(),
            ));
        }
        Ok(DiscretizationRule {
            attribute,
            cut_points,
        })
    }

    pub fn intervals(&self) -> usize {
        self.cut_points.len() + 1
    }

    /// Interval `i` holds `(cut[i-1], cut[i]]`, open-ended at both extremes.
    pub fn interval_of(&self, x: f64) -> usize {
        self.cut_points.partition_point(|&c| c < x)
    }

    /// Labels such as `(-inf..2.5]`, `(2.5..4.1]`, `(4.1..inf)`.
    pub fn interval_names(&self) -> Vec<String> {
        let mut bounds = vec!["-inf".to_string()];
        bounds.extend(self.cut_points.iter().map(|c| c.to_string()));
        bounds.push("inf".to_string());
        bounds
            .windows(2)
            .enumerate()
            .map(|(i, w)| {
                let close = if i == self.cut_points.len() { ')' } else { ']' };
                format!("({}..{}{close}", w[0], w[1])
            })
            .collect()
    }
}

/// Whether splitting `parent` into `left` and `right` pays for itself.
///
/// Accepts iff `Gain > (log2(N - 1) + log2(3^c - 2) - (c*E - c1*E1 - c2*E2)) / N`,
/// where `c`, `c1`, `c2` count the classes present in each set and `E` is class
/// entropy.
pub fn mdl_accepts(parent: &[f64], left: &[f64], right: &[f64]) -> bool {
    let n: f64 = parent.iter().sum();
    if n <= 1.0 {
        return false;
    }
    let nl: f64 = left.iter().sum();
    let nr: f64 = right.iter().sum();
    let (e, el, er) = (info(parent), info(left), info(right));
    let gain = e - (nl * el + nr * er) / n;
    let present = |d: &[f64]| d.iter().filter(|&&w| w > 0.0).count() as f64;
    let (c, c1, c2) = (present(parent), present(left), present(right));
    let delta = (3f64.powf(c) - 2.0).log2() - (c * e - c1 * el - c2 * er);
    gain > ((n - 1.0).log2() + delta) / n
}

fn distribution(obs: &[Observation], num_classes: usize) -> Vec<f64> {
    let mut d = vec![0.0; num_classes];
    for o in obs {
        d[o.class] += o.weight;
    }
    d
}

fn split_segment(segment: &[Observation], num_classes: usize, cuts: &mut Vec<f64>) {
    let Some(choice) = best_threshold(segment, num_classes, ThresholdCriterion::Gain) else {
        return;
    };
    if choice.gain <= 0.0 {
        return;
    }
    let k = segment.partition_point(|o| o.value <= choice.threshold);
    let (left, right) = segment.split_at(k);
    let parent = distribution(segment, num_classes);
    if !mdl_accepts(
        &parent,
        &distribution(left, num_classes),
        &distribution(right, num_classes),
    ) {
        return;
    }
    split_segment(left, num_classes, cuts);
    cuts.push(choice.threshold);
    split_segment(right, num_classes, cuts);
}

/// Fits the cut points for one attribute from its known training values.
pub fn discretize_attribute(
    attribute: usize,
    obs: &[Observation],
    num_classes: usize,
) -> DiscretizationRule {
    let mut sorted = obs.to_vec();
    sorted.sort_by(|a, b| a.value.total_cmp(&b.value));
    let mut cuts = Vec::new();
    split_segment(&sorted, num_classes, &mut cuts);
    DiscretizationRule {
        attribute,
        cut_points: cuts,
    }
}

/// One rule per continuous attribute, fitted on every case of `training`.
pub fn fit_rules(training: &Dataset) -> Vec<DiscretizationRule> {
    let cases = training.case_set();
    let num_classes = training.schema().num_classes();
    training
        .schema()
        .attributes()
        .iter()
        .enumerate()
        .filter(|(_, a)| a.is_continuous())
        .map(|(i, _)| {
            let (obs, _) = observations(training, &cases, i);
            discretize_attribute(i, &obs, num_classes)
        })
        .collect()
}

fn check_rules(schema: &Schema, rules: &[DiscretizationRule]) -> Result<()> {
    let mut covered = HashSet::new();
    for rule in rules {
        let Some(attr) = schema.attributes().get(rule.attribute) else {
            return Err(Error::RuleMismatch(format!(
                "attribute index {} out of range",
                rule.attribute
            )));
        };
        if !attr.is_continuous() {
            return Err(Error::RuleMismatch(format!(
                "attribute {:?} is not continuous",
                attr.name
            )));
        }
        if !covered.insert(rule.attribute) {
            return Err(Error::RuleMismatch(format!(
                "two rules for attribute {:?}",
                attr.name
            )));
        }
    }
    for (i, attr) in schema.attributes().iter().enumerate() {
        if attr.is_continuous() && !covered.contains(&i) {
            return Err(Error::RuleMismatch(format!(
                "no rule for continuous attribute {:?}",
                attr.name
            )));
        }
    }
    Ok(())
}

/// Rewrites every continuous attribute as a discrete interval attribute.
pub fn apply_rules(dataset: &Dataset, rules: &[DiscretizationRule]) -> Result<Dataset> {
    let schema = dataset.schema();
    check_rules(schema, rules)?;
    let mut by_attribute: Vec<Option<&DiscretizationRule>> = vec![None; schema.attributes().len()];
    for rule in rules {
        by_attribute[rule.attribute] = Some(rule);
    }
    let attributes = schema
        .attributes()
        .iter()
        .zip(&by_attribute)
        .map(|(attr, rule)| match rule {
            Some(rule) => AttributeDecl {
                name: attr.name.clone(),
                kind: AttributeKind::Discrete(rule.interval_names()),
            },
            None => attr.clone(),
        })
        .collect();
    let new_schema = Arc::new(Schema::new(attributes, schema.classes().to_vec())?);
    let cases = dataset
        .cases()
        .iter()
        .map(|case| Case {
            values: case
                .values
                .iter()
                .zip(&by_attribute)
                .map(|(v, rule)| match (v, rule) {
                    (Value::Number(x), Some(rule)) => Value::Category(rule.interval_of(*x)),
                    _ => *v,
                })
                .collect(),
            class: case.class,
            weight: case.weight,
        })
        .collect();
    Dataset::new(new_schema, cases)
}

/// Rules as text: `header` as `|` comments, then `attribute: cut, cut, ...`.
pub fn format_rules(schema: &Schema, rules: &[DiscretizationRule], header: &str) -> String {
    let mut out = String::new();
    for line in header.lines() {
        let _ = writeln!(out, "| {line}");
    }
    for rule in rules {
        let cuts: Vec<String> = rule.cut_points.iter().map(|c| c.to_string()).collect();
        let _ = writeln!(
            out,
            "{}: {}",
            schema.attribute(rule.attribute).name,
            cuts.join(", ")
        );
    }
    out
}

pub fn parse_rules(text: &str, schema: &Schema) -> Result<Vec<DiscretizationRule>> {
    let mut rules = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.split('|').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (name, cuts) = line
            .split_once(':')
            .ok_or_else(|| Error::parse(line_no, "expected `attribute: cut, cut, ...`"))?;
        let name = name.trim();
        let attribute = schema
            .attribute_index(name)
            .ok_or_else(|| Error::parse(line_no, format!("unknown attribute {name:?}")))?;
        let cuts = cuts.trim();
        let cut_points = if cuts.is_empty() {
            Vec::new()
        } else {
            cuts.split(',')
                .map(|c| {
                    c.trim()
                        .parse::<f64>()
                        .map_err(|_| Error::parse(line_no, format!("bad cut point {:?}", c.trim())))
                })
                .collect::<Result<Vec<_>>>()?
        };
        rules.push(
            DiscretizationRule::new(attribute, cut_points)
                .map_err(|e| Error::parse(line_no, e.to_string()))?,
        );
    }
    check_rules(schema, &rules)?;
    Ok(rules)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::{parse_data, parse_names};
    use crate::rng::{stream, Purpose};
    use proptest::prelude::*;
    use rand::Rng;

    fn obs(points: &[(f64, usize)]) -> Vec<Observation> {
        points
            .iter()
            .map(|&(v, c)| Observation::new(v, c, 1.0))
            .collect()
    }

    #[test]
    fn single_class_has_no_cuts() {
        let o = obs(&[(1.0, 0), (2.0, 0), (3.0, 0), (4.0, 0)]);
        assert!(discretize_attribute(0, &o, 2).cut_points.is_empty());
    }

    fn two_clusters() -> Vec<Observation> {
        let mut rng = stream(3, Purpose::Synthetic, 0);
        let mut o = Vec::new();
        for _ in 0..50 {
            o.push(Observation::new(rng.random::<f64>() * 0.1, 0, 1.0));
            o.push(Observation::new(1.0 + rng.random::<f64>() * 0.1, 1, 1.0));
        }
        o
    }

    #[test]
    fn two_clusters_give_one_cut() {
        let o = two_clusters();
        let rule = discretize_attribute(0, &o, 2);
        assert_eq!(rule.cut_points.len(), 1);
        let cut = rule.cut_points[0];
        assert!(cut > 0.1 && cut < 1.0);

        // Direct evaluation of the stopping formula: the separating split has
        // gain 1 bit against a cost of (log2(99) + log2(7) - 2) / 100.
        let cost = (99f64.log2() + 7f64.log2() - 2.0) / 100.0;
        assert!(1.0 > cost);
        assert!(mdl_accepts(&[50.0, 50.0], &[50.0, 0.0], &[0.0, 50.0]));
        // Each pure half only admits zero-gain splits, which never pass.
        assert!(!mdl_accepts(&[50.0, 0.0], &[25.0, 0.0], &[25.0, 0.0]));
    }

    #[test]
    fn independent_labels_rarely_cut() {
        let mut zero_cut = 0;
        for trial in 0..100 {
            let mut rng = stream(5, Purpose::Synthetic, trial);
            let o: Vec<_> = (0..100)
                .map(|_| Observation::new(rng.random(), rng.random_range(0..2), 1.0))
                .collect();
            if discretize_attribute(0, &o, 2).cut_points.is_empty() {
                zero_cut += 1;
            }
        }
        assert!(zero_cut >= 95, "{zero_cut} of 100 trials had no cut");
    }

    #[test]
    fn interval_membership() {
        let rule = DiscretizationRule::new(0, vec![2.5]).unwrap();
        assert_eq!(rule.interval_of(1.0), 0);
        assert_eq!(rule.interval_of(3.0), 1);
        assert_eq!(rule.interval_of(2.5), 0);
        assert_eq!(rule.interval_names(), ["(-inf..2.5]", "(2.5..inf)"]);
        let none = DiscretizationRule::new(0, vec![]).unwrap();
        assert_eq!(none.interval_names(), ["(-inf..inf)"]);
        assert!(DiscretizationRule::new(0, vec![2.0, 1.0]).is_err());
    }

    fn mixed() -> Dataset {
        parse_data(
            "1,u,a\n2,v,a\n3,u,b\n?,v,b\n10,u,b\n",
            parse_names("a,b.\nx: continuous.\nc: u,v.\n").unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn apply_rewrites_schema_and_values() {
        let ds = mixed();
        let rules = vec![DiscretizationRule::new(0, vec![2.5]).unwrap()];
        let out = apply_rules(&ds, &rules).unwrap();
        assert!(!out.schema().has_continuous());
        assert_eq!(out.schema().attribute(1), ds.schema().attribute(1));
        let xs: Vec<Value> = out.cases().iter().map(|c| c.values[0]).collect();
        assert_eq!(
            xs,
            [
                Value::Category(0),
                Value::Category(0),
                Value::Category(1),
                Value::Unknown,
                Value::Category(1)
            ]
        );
        // Already discrete: nothing to do.
        assert_eq!(apply_rules(&out, &fit_rules(&out)).unwrap(), out);
    }

    #[test]
    fn apply_rejects_mismatched_rules() {
        let ds = mixed();
        assert!(apply_rules(&ds, &[]).is_err());
        let wrong = DiscretizationRule::new(1, vec![]).unwrap();
        assert!(apply_rules(&ds, &[wrong]).is_err());
    }

    #[test]
    fn rules_text_round_trip() {
        let ds = mixed();
        let rules = vec![DiscretizationRule::new(0, vec![0.1 + 0.2, 7.25]).unwrap()];
        let text = format_rules(ds.schema(), &rules, "generated\nseed=1");
        assert!(text.starts_with("| generated\n| seed=1\n"));
        assert_eq!(parse_rules(&text, ds.schema()).unwrap(), rules);
        assert!(parse_rules("nope: 1\n", ds.schema()).is_err());
        assert!(parse_rules("x: 2, 1\n", ds.schema()).is_err());
    }

    proptest! {
        #[test]
        fn intervals_are_monotone(
            points in prop::collection::vec((0.0f64..10.0, 0usize..3), 2..80),
            probes in prop::collection::vec(-1.0f64..11.0, 2..20),
        ) {
            let o: Vec<_> = points.iter().map(|&(v, c)| Observation::new(v, c, 1.0)).collect();
            let rule = discretize_attribute(0, &o, 3);
            prop_assert!(rule.cut_points.windows(2).all(|w| w[0] < w[1]));
            prop_assert_eq!(&rule, &discretize_attribute(0, &o, 3));
            let mut sorted = probes.clone();
            sorted.sort_by(f64::total_cmp);
            for w in sorted.windows(2) {
                prop_assert!(rule.interval_of(w[0]) <= rule.interval_of(w[1]));
            }
        }
    }
}
