//! Evaluation protocol: stratified repeated cross-validation, irrelevant
//! attribute augmentation, paired policy comparison and report rendering.
//!
//! Every system in one comparison is evaluated on the same fold plans. Fold
//! jobs run in parallel; results are reduced in (repeat, fold) order, so the
//! numbers do not depend on scheduling.

use std::fmt::Write as _;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::data::{AttributeDecl, Case, Dataset, Schema, Value};
use crate::discretize::{apply_rules, fit_rules};
use crate::error::{Error, Result};
use crate::policy::Policy;
use crate::rng::{stream, Purpose};
use crate::tree::{induce, induce_on, misclassified_weight, tree_size, GrowParams};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CvParams {
    pub folds: usize,
    pub repeats: usize,
    pub seed: u64,
}

impl Default for CvParams {
    fn default() -> Self {
        CvParams {
            folds: 10,
            repeats: 10,
            seed: 1,
        }
    }
}

/// Assignment of every case to one of `folds` test blocks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FoldPlan {
    pub seed: u64,
    pub repeat: usize,
    pub folds: usize,
    pub assignments: Vec<usize>,
}

impl FoldPlan {
    pub fn test_indices(&self, fold: usize) -> Vec<usize> {
        (0..self.assignments.len())
            .filter(|&i| self.assignments[i] == fold)
            .collect()
    }

    pub fn train_indices(&self, fold: usize) -> Vec<usize> {
        (0..self.assignments.len())
            .filter(|&i| self.assignments[i] != fold)
            .collect()
    }

    pub fn fold_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.folds];
        for &f in &self.assignments {
            sizes[f] += 1;
        }
        sizes
    }
}

/// Shuffles the cases of each class and deals them round-robin into `folds`
/// blocks. The deal continues across classes, so both the block sizes and the
/// per-class counts of any two blocks differ by at most one.
pub fn stratified_folds(
    dataset: &Dataset,
    folds: usize,
    seed: u64,
    repeat: usize,
) -> Result<FoldPlan> {
    if folds < 2 {
        return Err(Error::Folds(format!("need at least 2 folds, got {folds}")));
    }
    if folds > dataset.len() {
        return Err(Error::Folds(format!(
            "{folds} folds requested for {} cases",
            dataset.len()
        )));
    }
    let mut rng = stream(seed, Purpose::Folds, repeat as u64);
    let mut by_class = vec![Vec::new(); dataset.schema().num_classes()];
    for (i, case) in dataset.cases().iter().enumerate() {
        by_class[case.class].push(i);
    }
    let mut assignments = vec![0; dataset.len()];
    let mut next = 0;
    for mut members in by_class {
        members.shuffle(&mut rng);
        for i in members {
            assignments[i] = next % folds;
            next += 1;
        }
    }
    Ok(FoldPlan {
        seed,
        repeat,
        folds,
        assignments,
    })
}

fn fold_plans(dataset: &Dataset, cv: &CvParams) -> Result<Vec<FoldPlan>> {
    if cv.repeats == 0 {
        return Err(Error::Folds("need at least one repeat".into()));
    }
    let plans = (0..cv.repeats)
        .map(|r| stratified_folds(dataset, cv.folds, cv.seed, r))
        .collect::<Result<Vec<_>>>()?;
    for plan in &plans {
        for (fold, size) in plan.fold_sizes().into_iter().enumerate() {
            if dataset.len() - size < 2 {
                return Err(Error::Folds(format!(
                    "fold {fold} leaves {} training case(s); at least 2 are needed",
                    dataset.len() - size
                )));
            }
        }
    }
    Ok(plans)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RepeatResult {
    /// Misclassified test weight over total test weight, in percent.
    pub error_percent: f64,
    /// Mean size of the trees built in this repeat.
    pub mean_tree_size: f64,
}

struct FoldOutcome {
    errors: f64,
    weight: f64,
    size: usize,
}

fn run_folds<F>(plans: &[FoldPlan], job: F) -> Result<Vec<RepeatResult>>
where
    F: Fn(&FoldPlan, usize) -> Result<FoldOutcome> + Sync,
{
    let jobs: Vec<(usize, usize)> = plans
        .iter()
        .enumerate()
        .flat_map(|(r, p)| (0..p.folds).map(move |f| (r, f)))
        .collect();
    let outcomes = jobs
        .par_iter()
        .map(|&(r, f)| job(&plans[r], f))
        .collect::<Result<Vec<_>>>()?;
    let mut results = Vec::with_capacity(plans.len());
    let mut iter = outcomes.into_iter();
    for plan in plans {
        let (mut errors, mut weight, mut size) = (0.0, 0.0, 0usize);
        for o in iter.by_ref().take(plan.folds) {
            errors += o.errors;
            weight += o.weight;
            size += o.size;
        }
        results.push(RepeatResult {
            error_percent: if weight > 0.0 {
                100.0 * errors / weight
            } else {
                0.0
            },
            mean_tree_size: size as f64 / plan.folds as f64,
        });
    }
    Ok(results)
}

fn local_fold(dataset: &Dataset, params: &GrowParams, plan: &FoldPlan, fold: usize) -> FoldOutcome {
    let train = dataset.case_set_of(&plan.train_indices(fold));
    let test = dataset.case_set_of(&plan.test_indices(fold));
    let tree = induce_on(dataset, &train, params);
    FoldOutcome {
        errors: misclassified_weight(&tree, dataset, &test),
        weight: test.iter().map(|c| c.weight).sum(),
        size: tree_size(&tree),
    }
}

fn evaluate_local(
    dataset: &Dataset,
    params: &GrowParams,
    plans: &[FoldPlan],
) -> Result<Vec<RepeatResult>> {
    run_folds(plans, |plan, fold| {
        Ok(local_fold(dataset, params, plan, fold))
    })
}

/// `cv.repeats` complete `cv.folds`-fold cross-validations of `params`.
pub fn cross_validate(
    dataset: &Dataset,
    params: &GrowParams,
    cv: &CvParams,
) -> Result<Vec<RepeatResult>> {
    evaluate_local(dataset, params, &fold_plans(dataset, cv)?)
}

/// Appends `n_cont` uniform `[0, 1)` attributes and `n_disc` attributes with
/// `card` equiprobable values. Each added attribute draws from its own stream.
pub fn augment_irrelevant(
    dataset: &Dataset,
    n_cont: usize,
    n_disc: usize,
    card: usize,
    seed: u64,
) -> Result<Dataset> {
    if n_disc > 0 && card == 0 {
        return Err(Error::Precondition(
            "irrelevant discrete attributes need at least one value".into(),
        ));
    }
    let schema = dataset.schema();
    let mut attributes = schema.attributes().to_vec();
    attributes.extend((1..=n_cont).map(|j| AttributeDecl::continuous(format!("_irr_c{j}"))));
    let values: Vec<String> = (0..card).map(|v| format!("v{v}")).collect();
    attributes.extend(
        (1..=n_disc).map(|j| AttributeDecl::discrete(format!("_irr_d{j}"), values.clone())),
    );
    let new_schema = Arc::new(Schema::new(attributes, schema.classes().to_vec())?);

    let mut columns: Vec<Vec<Value>> = Vec::with_capacity(n_cont + n_disc);
    for j in 0..n_cont {
        let mut rng = stream(seed, Purpose::ContinuousNoise, j as u64);
        columns.push(
            (0..dataset.len())
                .map(|_| Value::Number(rng.random::<f64>()))
                .collect(),
        );
    }
    for j in 0..n_disc {
        let mut rng = stream(seed, Purpose::DiscreteNoise, j as u64);
        columns.push(
            (0..dataset.len())
                .map(|_| Value::Category(rng.random_range(0..card)))
                .collect(),
        );
    }
    let cases = dataset
        .cases()
        .iter()
        .enumerate()
        .map(|(i, case)| {
            let mut values = case.values.clone();
            values.extend(columns.iter().map(|col| col[i]));
            Case {
                values,
                class: case.class,
                weight: case.weight,
            }
        })
        .collect();
    Dataset::new(new_schema, cases)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SystemSummary {
    pub system: String,
    pub repeats: Vec<RepeatResult>,
    pub mean_error: f64,
    pub se_error: f64,
    pub mean_size: f64,
    pub se_size: f64,
}

impl SystemSummary {
    pub fn new(system: impl Into<String>, repeats: Vec<RepeatResult>) -> Self {
        let errors: Vec<f64> = repeats.iter().map(|r| r.error_percent).collect();
        let sizes: Vec<f64> = repeats.iter().map(|r| r.mean_tree_size).collect();
        let (mean_error, se_error) = mean_and_se(&errors);
        let (mean_size, se_size) = mean_and_se(&sizes);
        SystemSummary {
            system: system.into(),
            repeats,
            mean_error,
            se_error,
            mean_size,
            se_size,
        }
    }
}

/// Mean and standard error of the mean (sample standard deviation / sqrt n).
pub fn mean_and_se(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    if xs.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

/// One system against the baseline. A win is a repeat in which `system` has
/// the lower error; errors are compared after rounding to 4 decimals.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Comparison {
    pub system: String,
    pub baseline: String,
    pub wins: usize,
    pub draws: usize,
    pub losses: usize,
    /// Mean error of `system` over that of `baseline`.
    pub error_ratio: f64,
    pub size_ratio: f64,
}

fn ratio(a: f64, b: f64) -> f64 {
    if a == b {
        1.0
    } else {
        a / b
    }
}

impl Comparison {
    pub fn new(system: &SystemSummary, baseline: &SystemSummary) -> Self {
        let round = |x: f64| (x * 1e4).round();
        let (mut wins, mut draws, mut losses) = (0, 0, 0);
        for (a, b) in system.repeats.iter().zip(&baseline.repeats) {
            let (a, b) = (round(a.error_percent), round(b.error_percent));
            if a < b {
                wins += 1;
            } else if a == b {
                draws += 1;
            } else {
                losses += 1;
            }
        }
        Comparison {
            system: system.system.clone(),
            baseline: baseline.system.clone(),
            wins,
            draws,
            losses,
            error_ratio: ratio(system.mean_error, baseline.mean_error),
            size_ratio: ratio(system.mean_size, baseline.mean_size),
        }
    }
}

/// Results of several systems on one dataset. The first system is the
/// baseline every other system is compared against.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CvReport {
    pub dataset: String,
    pub cases: usize,
    pub systems: Vec<SystemSummary>,
    pub comparisons: Vec<Comparison>,
}

impl CvReport {
    pub fn new(dataset: impl Into<String>, cases: usize, systems: Vec<SystemSummary>) -> Self {
        let comparisons = match systems.split_first() {
            Some((base, rest)) => rest.iter().map(|s| Comparison::new(s, base)).collect(),
            None => Vec::new(),
        };
        CvReport {
            dataset: dataset.into(),
            cases,
            systems,
            comparisons,
        }
    }

    pub fn system(&self, name: &str) -> Option<&SystemSummary> {
        self.systems.iter().find(|s| s.system == name)
    }

    pub fn comparison(&self, name: &str) -> Option<&Comparison> {
        self.comparisons.iter().find(|c| c.system == name)
    }
}

/// Evaluates every policy on the same fold plans. `policies[0]` is the
/// baseline.
pub fn compare_policies(
    dataset: &Dataset,
    name: &str,
    policies: &[Policy],
    base: &GrowParams,
    cv: &CvParams,
) -> Result<CvReport> {
    if policies.len() < 2 {
        return Err(Error::Precondition(
            "a comparison needs at least two policies".into(),
        ));
    }
    let plans = fold_plans(dataset, cv)?;
    let systems = policies
        .iter()
        .map(|&policy| {
            let params = GrowParams { policy, ..*base };
            Ok(SystemSummary::new(
                policy.label(),
                evaluate_local(dataset, &params, &plans)?,
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CvReport::new(name, dataset.len(), systems))
}

pub const DISCRETIZED_SYSTEM: &str = "Discr";

/// Record that a fold's discretization rules never saw the held-out labels.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LeakageAudit {
    pub repeat: usize,
    pub fold: usize,
    pub train_cases: usize,
    pub test_cases: usize,
    /// Held-out cases present in the set the rules were fitted on.
    pub overlap: usize,
    /// Whether refitting after relabeling every held-out case gives the same
    /// rules.
    pub label_invariant: bool,
}

impl LeakageAudit {
    pub fn passed(&self) -> bool {
        self.overlap == 0 && self.label_invariant
    }

    pub fn line(&self) -> String {
        format!(
            "audit repeat={} fold={} train={} test={} overlap={} label_invariant={} {}",
            self.repeat,
            self.fold,
            self.train_cases,
            self.test_cases,
            self.overlap,
            self.label_invariant,
            if self.passed() { "PASS" } else { "FAIL" }
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ScatterPoint {
    pub cases: usize,
    /// Mean error with local thresholds over mean error after discretization.
    pub error_ratio: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DiscretizationReport {
    /// Baseline `Discr`, compared with the local-threshold policy.
    pub report: CvReport,
    pub audits: Vec<LeakageAudit>,
    pub scatter: ScatterPoint,
}

/// Compares `params` with global discretization on shared fold plans. Rules
/// for each fold are fitted on that fold's training portion only.
pub fn discretization_experiment(
    dataset: &Dataset,
    name: &str,
    params: &GrowParams,
    cv: &CvParams,
) -> Result<DiscretizationReport> {
    if !dataset.schema().has_continuous() {
        return Err(Error::Precondition(
            "discretization needs at least one continuous attribute".into(),
        ));
    }
    let plans = fold_plans(dataset, cv)?;
    let num_classes = dataset.schema().num_classes();
    let mut audits = Vec::new();
    let mut outcomes = Vec::new();
    for plan in &plans {
        let per_fold = (0..plan.folds)
            .into_par_iter()
            .map(|fold| -> Result<(LeakageAudit, FoldOutcome)> {
                let train_idx = plan.train_indices(fold);
                let test_idx = plan.test_indices(fold);
                let train = dataset.select(&train_idx);
                let rules = fit_rules(&train);

                let relabeled = relabel(dataset, &test_idx, num_classes)?;
                let audit = LeakageAudit {
                    repeat: plan.repeat,
                    fold,
                    train_cases: train_idx.len(),
                    test_cases: test_idx.len(),
                    overlap: train_idx
                        .iter()
                        .filter(|&&i| plan.assignments[i] == fold)
                        .count(),
                    label_invariant: fit_rules(&relabeled.select(&train_idx)) == rules,
                };

                let train = apply_rules(&train, &rules)?;
                let test = apply_rules(&dataset.select(&test_idx), &rules)?;
                let tree = induce(&train, params);
                Ok((
                    audit,
                    FoldOutcome {
                        errors: misclassified_weight(&tree, &test, &test.case_set()),
                        weight: test.total_weight(),
                        size: tree_size(&tree),
                    },
                ))
            })
            .collect::<Result<Vec<_>>>()?;
        for (audit, outcome) in per_fold {
            audits.push(audit);
            outcomes.push(outcome);
        }
    }
    let discretized = {
        let mut iter = outcomes.into_iter();
        plans
            .iter()
            .map(|plan| {
                let (mut errors, mut weight, mut size) = (0.0, 0.0, 0usize);
                for o in iter.by_ref().take(plan.folds) {
                    errors += o.errors;
                    weight += o.weight;
                    size += o.size;
                }
                RepeatResult {
                    error_percent: if weight > 0.0 {
                        100.0 * errors / weight
                    } else {
                        0.0
                    },
                    mean_tree_size: size as f64 / plan.folds as f64,
                }
            })
            .collect()
    };
    let local = evaluate_local(dataset, params, &plans)?;
    let report = CvReport::new(
        name,
        dataset.len(),
        vec![
            SystemSummary::new(DISCRETIZED_SYSTEM, discretized),
            SystemSummary::new(params.policy.label(), local),
        ],
    );
    let scatter = ScatterPoint {
        cases: dataset.len(),
        error_ratio: report.comparisons[0].error_ratio,
    };
    Ok(DiscretizationReport {
        report,
        audits,
        scatter,
    })
}

/// Copy of `dataset` with the class of each listed case shifted by one.
fn relabel(dataset: &Dataset, indices: &[usize], num_classes: usize) -> Result<Dataset> {
    let mut cases = dataset.cases().to_vec();
    for &i in indices {
        cases[i].class = (cases[i].class + 1) % num_classes;
    }
    Dataset::new(dataset.shared_schema(), cases)
}

fn html_comment(header: &str) -> String {
    format!("<!-- {} -->\n", header.replace("--", "- -"))
}

fn hash_comment(header: &str) -> String {
    header.lines().map(|l| format!("# {l}\n")).collect()
}

fn table(rows: &[Vec<String>]) -> String {
    let widths: Vec<usize> = (0..rows[0].len())
        .map(|c| rows.iter().map(|r| r[c].chars().count()).max().unwrap_or(0))
        .collect();
    let line = |r: &[String]| {
        let cells: Vec<String> = r
            .iter()
            .zip(&widths)
            .map(|(cell, &w)| format!("{cell}{}", " ".repeat(w - cell.chars().count())))
            .collect();
        format!("| {} |\n", cells.join(" | "))
    };
    let mut out = line(&rows[0]);
    let rule: Vec<String> = widths.iter().map(|&w| "-".repeat(w)).collect();
    out.push_str(&format!("|-{}-|\n", rule.join("-|-")));
    for r in &rows[1..] {
        out.push_str(&line(r));
    }
    out
}

/// Aligned Markdown tables: one row per system, then one per comparison.
pub fn render_markdown(reports: &[CvReport], header: &str) -> String {
    let mut out = html_comment(header);
    let mut systems = vec![[
        "dataset", "cases", "system", "error %", "± se", "size", "± se",
    ]
    .map(String::from)
    .to_vec()];
    let mut comparisons = vec![[
        "dataset",
        "system",
        "baseline",
        "w/d/l",
        "error ratio",
        "size ratio",
    ]
    .map(String::from)
    .to_vec()];
    for r in reports {
        for s in &r.systems {
            systems.push(vec![
                r.dataset.clone(),
                r.cases.to_string(),
                s.system.clone(),
                format!("{:.2}", s.mean_error),
                format!("{:.2}", s.se_error),
                format!("{:.1}", s.mean_size),
                format!("{:.1}", s.se_size),
            ]);
        }
        for c in &r.comparisons {
            comparisons.push(vec![
                r.dataset.clone(),
                c.system.clone(),
                c.baseline.clone(),
                format!("{}/{}/{}", c.wins, c.draws, c.losses),
                format!("{:.3}", c.error_ratio),
                format!("{:.3}", c.size_ratio),
            ]);
        }
    }
    out.push('\n');
    out.push_str(&table(&systems));
    if comparisons.len() > 1 {
        out.push('\n');
        out.push_str(&table(&comparisons));
    }
    out
}

fn csv_text(header: &str, rows: Vec<Vec<String>>) -> String {
    let mut writer = csv::Writer::from_writer(Vec::new());
    for row in rows {
        writer.write_record(row).expect("writing to memory");
    }
    let body = String::from_utf8(writer.into_inner().expect("flush to memory"))
        .expect("csv output is UTF-8");
    hash_comment(header) + &body
}

/// One CSV row per (dataset, system, repeat), full precision.
pub fn render_csv(reports: &[CvReport], header: &str) -> String {
    let mut rows = vec![[
        "dataset",
        "cases",
        "system",
        "repeat",
        "error_percent",
        "tree_size",
    ]
    .map(String::from)
    .to_vec()];
    for r in reports {
        for s in &r.systems {
            for (i, rep) in s.repeats.iter().enumerate() {
                rows.push(vec![
                    r.dataset.clone(),
                    r.cases.to_string(),
                    s.system.clone(),
                    i.to_string(),
                    rep.error_percent.to_string(),
                    rep.mean_tree_size.to_string(),
                ]);
            }
        }
    }
    csv_text(header, rows)
}

/// `(dataset, cases, error_ratio)` rows for a ratio-versus-size plot.
pub fn render_scatter_csv(points: &[(String, ScatterPoint)], header: &str) -> String {
    let mut rows = vec![["dataset", "cases", "error_ratio"]
        .map(String::from)
        .to_vec()];
    for (name, p) in points {
        rows.push(vec![
            name.clone(),
            p.cases.to_string(),
            p.error_ratio.to_string(),
        ]);
    }
    csv_text(header, rows)
}

pub fn render_audit(audits: &[LeakageAudit], header: &str) -> String {
    let mut out = hash_comment(header);
    for a in audits {
        let _ = writeln!(out, "{}", a.line());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::{parse_data, parse_names};

    fn balanced(n_per_class: usize) -> Dataset {
        let mut text = String::new();
        for i in 0..n_per_class {
            text.push_str(&format!("{i},a\n{},b\n", i + 1000));
        }
        parse_data(&text, parse_names("a,b.\nx: continuous.\n").unwrap()).unwrap()
    }

    #[test]
    fn folds_are_stratified() {
        let ds = balanced(10);
        let plan = stratified_folds(&ds, 10, 3, 0).unwrap();
        for f in 0..10 {
            let test = plan.test_indices(f);
            assert_eq!(test.len(), 2);
            let classes: Vec<usize> = test.iter().map(|&i| ds.case(i).class).collect();
            assert!(classes.contains(&0) && classes.contains(&1));
        }
        assert_eq!(plan, stratified_folds(&ds, 10, 3, 0).unwrap());
        assert_ne!(plan, stratified_folds(&ds, 10, 3, 1).unwrap());
    }

    #[test]
    fn uneven_folds_differ_by_one() {
        let mut text = String::new();
        for i in 0..15 {
            text.push_str(&format!("{i},a\n"));
        }
        let ds = parse_data(&text, parse_names("a,b.\nx: continuous.\n").unwrap()).unwrap();
        let sizes = stratified_folds(&ds, 10, 0, 0).unwrap().fold_sizes();
        assert!(sizes.iter().all(|&s| s == 1 || s == 2), "{sizes:?}");
        assert_eq!(sizes.iter().sum::<usize>(), 15);
    }

    #[test]
    fn fold_preconditions() {
        let ds = balanced(2);
        assert!(stratified_folds(&ds, 5, 0, 0).is_err());
        assert!(stratified_folds(&ds, 1, 0, 0).is_err());
        let three = parse_data(
            "1,a\n2,b\n3,a\n",
            parse_names("a,b.\nx: continuous.\n").unwrap(),
        )
        .unwrap();
        let cv = CvParams {
            folds: 2,
            repeats: 1,
            seed: 0,
        };
        let err = cross_validate(&three, &GrowParams::default(), &cv).unwrap_err();
        assert!(matches!(err, Error::Folds(_)), "{err}");
    }

    #[test]
    fn separable_data_has_no_errors() {
        let ds = balanced(30);
        let results = cross_validate(&ds, &GrowParams::default(), &CvParams::default()).unwrap();
        assert_eq!(results.len(), 10);
        for r in results {
            assert_eq!(r.error_percent, 0.0);
            assert_eq!(r.mean_tree_size, 3.0);
        }
    }

    #[test]
    fn constant_attributes_give_majority_error() {
        let mut text = String::new();
        for i in 0..100 {
            text.push_str(if i % 10 == 0 { "1,b\n" } else { "1,a\n" });
        }
        let ds = parse_data(&text, parse_names("a,b.\nx: continuous.\n").unwrap()).unwrap();
        for r in cross_validate(&ds, &GrowParams::default(), &CvParams::default()).unwrap() {
            assert!((r.error_percent - 10.0).abs() < 1e-9);
        }
    }

    #[test]
    fn augmentation_shape_and_frequencies() {
        let ds = balanced(500);
        assert_eq!(augment_irrelevant(&ds, 0, 0, 10, 1).unwrap(), ds);
        let aug = augment_irrelevant(&ds, 2, 3, 10, 1).unwrap();
        assert_eq!(aug.schema().attributes().len(), 6);
        assert_eq!(aug.schema().attribute(1).name, "_irr_c1");
        assert_eq!(aug.schema().attribute(5).name, "_irr_d3");
        for (a, b) in ds.cases().iter().zip(aug.cases()) {
            assert_eq!(a.values[0], b.values[0]);
            assert_eq!(a.class, b.class);
            match b.values[1] {
                Value::Number(x) => assert!((0.0..1.0).contains(&x)),
                _ => panic!("expected a number"),
            }
        }
        // 1000 draws with p = 0.1: sigma = sqrt(1000 * 0.1 * 0.9) ~ 9.49.
        let sigma = (1000.0f64 * 0.1 * 0.9).sqrt();
        for attr in 3..6 {
            let mut counts = [0usize; 10];
            for c in aug.cases() {
                if let Value::Category(v) = c.values[attr] {
                    counts[v] += 1;
                }
            }
            for &n in &counts {
                assert!((n as f64 - 100.0).abs() < 5.0 * sigma, "{counts:?}");
            }
        }
        assert_eq!(aug, augment_irrelevant(&ds, 2, 3, 10, 1).unwrap());
    }

    #[test]
    fn self_comparison_is_all_draws() {
        let ds = balanced(20);
        let report = compare_policies(
            &ds,
            "t",
            &[Policy::Rel8, Policy::Rel8],
            &GrowParams::default(),
            &CvParams::default(),
        )
        .unwrap();
        let c = &report.comparisons[0];
        assert_eq!((c.wins, c.draws, c.losses), (0, 10, 0));
        assert_eq!((c.error_ratio, c.size_ratio), (1.0, 1.0));
    }

    #[test]
    fn standard_error() {
        let (m, se) = mean_and_se(&[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(m, 2.5);
        assert!((se - (5.0f64 / 3.0 / 4.0).sqrt()).abs() < 1e-12);
        assert_eq!(mean_and_se(&[7.0]), (7.0, 0.0));
    }

    #[test]
    fn discretization_requires_continuous_attributes() {
        let ds = parse_data(
            "u,a\nv,b\nu,a\nv,b\n",
            parse_names("a,b.\nc: u,v.\n").unwrap(),
        )
        .unwrap();
        let err = discretization_experiment(&ds, "t", &GrowParams::default(), &CvParams::default());
        assert!(matches!(err, Err(Error::Precondition(_))));
    }

    #[test]
    fn renderers_start_with_header() {
        let ds = balanced(20);
        let cv = CvParams {
            repeats: 2,
            ..Default::default()
        };
        let report = compare_policies(&ds, "t", &Policy::ALL, &GrowParams::default(), &cv).unwrap();
        let md = render_markdown(std::slice::from_ref(&report), "c45 0.1.0 seed=1");
        assert!(md.starts_with("<!-- c45 0.1.0 seed=1 -->\n"));
        assert!(md.contains("| 7GS "));
        let csv = render_csv(&[report], "c45 0.1.0 seed=1");
        assert!(csv.starts_with("# c45 0.1.0 seed=1\ndataset,cases,system,repeat,"));
        assert_eq!(csv.lines().count(), 2 + 4 * 2);
    }
}
