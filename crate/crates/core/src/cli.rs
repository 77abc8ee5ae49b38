//! Command-line front end: `grow`, `cv` and `discretize`.
//!
//! All outputs of a run are rendered in memory and written at the end. If any
//! write fails, files already written by the run are removed. Every output
//! starts with a header line naming the program version and the full
//! configuration, including the seed.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::data::{load_csv, load_stem, serialize_data, serialize_names, Dataset};
use crate::discretize::{apply_rules, fit_rules, format_rules, parse_rules};
use crate::error::{Error, Result};
use crate::experiments::{
    augment_irrelevant, compare_policies, discretization_experiment, render_audit, render_csv,
    render_markdown, render_scatter_csv, CvParams,
};
use crate::policy::Policy;
use crate::tree::{
    grow, misclassified_weight, prune, render_text, tree_size, tree_to_json, GrowParams, TreeFile,
};

pub const DEFAULT_SEED: u64 = 1;

#[derive(Debug, Parser)]
#[command(
    name = "c45",
    version,
    about = "Decision tree induction and evaluation"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Grow (and prune) a tree on a whole dataset.
    Grow(GrowArgs),
    /// Repeated stratified cross-validation of one or more policies.
    Cv(CvArgs),
    /// Fit or apply discretization rules, or evaluate discretization.
    Discretize(DiscretizeArgs),
}

#[derive(Debug, Args)]
pub struct DataArgs {
    /// Dataset stem: reads STEM.names and STEM.data.
    #[arg(long, value_name = "STEM", required_unless_present = "csv")]
    pub data: Option<PathBuf>,
    /// CSV file with a header row; overrides --data.
    #[arg(long, value_name = "PATH", requires = "class_column")]
    pub csv: Option<PathBuf>,
    /// Name of the class column in the CSV file.
    #[arg(long, value_name = "NAME")]
    pub class_column: Option<String>,
}

impl DataArgs {
    fn load(&self) -> Result<Dataset> {
        match (&self.csv, &self.data) {
            (Some(path), _) => load_csv(path, self.class_column.as_deref().unwrap_or_default()),
            (None, Some(stem)) => load_stem(stem),
            (None, None) => Err(Error::Precondition("no dataset given".into())),
        }
    }

    fn name(&self) -> String {
        let path = self.csv.as_ref().or(self.data.as_ref());
        path.and_then(|p| p.file_stem())
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default()
    }

    fn describe(&self) -> String {
        match (&self.csv, &self.data) {
            (Some(path), _) => format!(
                "csv={} class_column={}",
                path.display(),
                self.class_column.as_deref().unwrap_or_default()
            ),
            (None, Some(stem)) => format!("data={}", stem.display()),
            (None, None) => String::new(),
        }
    }
}

#[derive(Debug, Args)]
pub struct TreeArgs {
    /// Keep the unpruned tree.
    #[arg(long)]
    pub no_prune: bool,
    /// Pruning confidence level.
    #[arg(long, default_value_t = 0.25, value_name = "CF")]
    pub cf: f64,
    /// Minimum weight in at least two branches of a test.
    #[arg(long, default_value_t = 2.0, value_name = "W")]
    pub min_split: f64,
}

impl TreeArgs {
    fn params(&self, policy: Policy) -> Result<GrowParams> {
        if !(self.cf > 0.0 && self.cf < 1.0) {
            return Err(Error::Precondition(format!(
                "--cf must lie in (0, 1), got {}",
                self.cf
            )));
        }
        if self.min_split.is_nan() || self.min_split <= 0.0 {
            return Err(Error::Precondition(format!(
                "--min-split must be positive, got {}",
                self.min_split
            )));
        }
        Ok(GrowParams {
            policy,
            min_split_weight: self.min_split,
            prune_confidence: self.cf,
            pruning: !self.no_prune,
        })
    }

    fn describe(&self) -> String {
        format!(
            "prune={} cf={} min_split={}",
            !self.no_prune, self.cf, self.min_split
        )
    }
}

#[derive(Debug, Args)]
pub struct CvFlags {
    #[arg(long, default_value_t = 10)]
    pub folds: usize,
    #[arg(long, default_value_t = 10)]
    pub repeats: usize,
    /// Seed for fold assignment and augmentation.
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
}

impl CvFlags {
    fn params(&self) -> CvParams {
        CvParams {
            folds: self.folds,
            repeats: self.repeats,
            seed: self.seed,
        }
    }

    fn describe(&self) -> String {
        format!(
            "folds={} repeats={} seed={}",
            self.folds, self.repeats, self.seed
        )
    }
}

#[derive(Debug, Args)]
pub struct GrowArgs {
    #[command(flatten)]
    pub data: DataArgs,
    #[arg(long, default_value_t = Policy::Rel8)]
    pub policy: Policy,
    #[command(flatten)]
    pub tree: TreeArgs,
    /// Accepted for uniformity; growing a tree uses no randomness.
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Write the tree as JSON.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
    /// Write the tree as indented text.
    #[arg(long, value_name = "PATH")]
    pub text: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CvArgs {
    #[command(flatten)]
    pub data: DataArgs,
    /// Policies to compare; the first is the baseline.
    #[arg(long, value_delimiter = ',', default_value = "rel7,rel8")]
    pub policies: Vec<Policy>,
    #[command(flatten)]
    pub tree: TreeArgs,
    #[command(flatten)]
    pub cv: CvFlags,
    /// Add irrelevant attributes first: CONT,DISC counts.
    #[arg(long, value_name = "CONT,DISC", value_parser = parse_pair)]
    pub augment: Option<(usize, usize)>,
    /// Number of values of each irrelevant discrete attribute.
    #[arg(long, default_value_t = 10)]
    pub augment_card: usize,
    /// Markdown report path (default: standard output).
    #[arg(long, value_name = "PATH")]
    pub report: Option<PathBuf>,
    /// Per-repeat CSV results.
    #[arg(long, value_name = "PATH")]
    pub report_csv: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct DiscretizeArgs {
    #[command(flatten)]
    pub data: DataArgs,
    /// Apply these rules instead of fitting new ones.
    #[arg(long, value_name = "PATH", conflicts_with = "eval")]
    pub rules: Option<PathBuf>,
    /// Where to write the fitted rules (default: standard output).
    #[arg(long, value_name = "PATH")]
    pub rules_out: Option<PathBuf>,
    /// Write the rewritten dataset as STEM.names and STEM.data.
    #[arg(long, value_name = "STEM")]
    pub out: Option<PathBuf>,
    /// Cross-validate discretization against local thresholds.
    #[arg(long)]
    pub eval: bool,
    /// Policy for the local-threshold trees under --eval.
    #[arg(long, default_value_t = Policy::Rel8)]
    pub policy: Policy,
    #[command(flatten)]
    pub tree: TreeArgs,
    #[command(flatten)]
    pub cv: CvFlags,
    /// Markdown report path under --eval (default: standard output).
    #[arg(long, value_name = "PATH")]
    pub report: Option<PathBuf>,
    /// Leakage audit lines under --eval.
    #[arg(long, value_name = "PATH")]
    pub audit: Option<PathBuf>,
    /// (cases, error ratio) CSV under --eval.
    #[arg(long, value_name = "PATH")]
    pub scatter: Option<PathBuf>,
}

fn parse_pair(s: &str) -> std::result::Result<(usize, usize), String> {
    let (a, b) = s
        .split_once(',')
        .ok_or_else(|| format!("expected two counts like 10,10, got {s:?}"))?;
    let parse = |x: &str| {
        x.trim()
            .parse::<usize>()
            .map_err(|_| format!("bad count {x:?}"))
    };
    Ok((parse(a)?, parse(b)?))
}

fn header(command: &str, config: &[String]) -> String {
    let config: Vec<&str> = config
        .iter()
        .map(String::as_str)
        .filter(|s| !s.is_empty())
        .collect();
    format!(
        "c45 {} {command} {}",
        env!("CARGO_PKG_VERSION"),
        config.join(" ")
    )
}

fn pipe_comment(header: &str) -> String {
    format!("| {header}\n")
}

/// Files to be written together at the end of a run.
#[derive(Default)]
struct Outputs(Vec<(PathBuf, String)>);

impl Outputs {
    fn add(&mut self, path: &Path, content: String) {
        self.0.push((path.to_path_buf(), content));
    }

    fn commit(self) -> Result<()> {
        let mut written: Vec<&Path> = Vec::new();
        for (path, content) in &self.0 {
            if let Err(source) = fs::write(path, content) {
                for p in written {
                    let _ = fs::remove_file(p);
                }
                let _ = fs::remove_file(path);
                return Err(Error::Io {
                    path: path.clone(),
                    source,
                });
            }
            written.push(path);
        }
        Ok(())
    }
}

fn emit(out: &mut dyn Write, text: &str) -> Result<()> {
    out.write_all(text.as_bytes()).map_err(|source| Error::Io {
        path: PathBuf::from("<stdout>"),
        source,
    })
}

pub fn run(cli: Cli, out: &mut dyn Write) -> Result<()> {
    match cli.command {
        Command::Grow(args) => cmd_grow(&args, out),
        Command::Cv(args) => cmd_cv(&args, out),
        Command::Discretize(args) => cmd_discretize(&args, out),
    }
}

pub fn cmd_grow(args: &GrowArgs, out: &mut dyn Write) -> Result<()> {
    let dataset = args.data.load()?;
    let params = args.tree.params(args.policy)?;
    let head = header(
        "grow",
        &[
            args.data.describe(),
            format!("policy={}", args.policy),
            args.tree.describe(),
            format!("seed={}", args.seed),
        ],
    );
    let cases = dataset.case_set();
    let unpruned = grow(&dataset, &cases, &params);
    let tree = if params.pruning {
        prune(&unpruned, &dataset, &cases, &params)
    } else {
        unpruned.clone()
    };
    let errors = misclassified_weight(&tree, &dataset, &cases);
    let error_percent = 100.0 * errors / dataset.total_weight();
    let text = render_text(&tree, dataset.schema());

    let mut files = Outputs::default();
    if let Some(path) = &args.out {
        let file = TreeFile::new(&tree, dataset.schema(), Some(args.policy), &head);
        files.add(path, tree_to_json(&file));
    }
    if let Some(path) = &args.text {
        files.add(path, pipe_comment(&head) + &text);
    }
    files.commit()?;
    if args.out.is_none() && args.text.is_none() {
        emit(out, &(pipe_comment(&head) + &text))?;
    }
    emit(
        out,
        &format!(
            "size={} unpruned_size={} error={error_percent:.2}%\n",
            tree_size(&tree),
            tree_size(&unpruned)
        ),
    )
}

pub fn cmd_cv(args: &CvArgs, out: &mut dyn Write) -> Result<()> {
    let mut dataset = args.data.load()?;
    let mut name = args.data.name();
    let mut augment = String::new();
    if let Some((n_cont, n_disc)) = args.augment {
        dataset = augment_irrelevant(&dataset, n_cont, n_disc, args.augment_card, args.cv.seed)?;
        name = format!("{name}+irr({n_cont},{n_disc})");
        augment = format!(
            "augment={n_cont},{n_disc} augment_card={}",
            args.augment_card
        );
    }
    let policies: Vec<String> = args
        .policies
        .iter()
        .map(|p| p.label().to_string())
        .collect();
    let head = header(
        "cv",
        &[
            args.data.describe(),
            format!("policies={}", policies.join(",")),
            args.tree.describe(),
            args.cv.describe(),
            augment,
        ],
    );
    let params = args.tree.params(Policy::Rel8)?;
    let policies = if args.policies.len() == 1 {
        vec![args.policies[0], args.policies[0]]
    } else {
        args.policies.clone()
    };
    let mut report = compare_policies(&dataset, &name, &policies, &params, &args.cv.params())?;
    if args.policies.len() == 1 {
        report.systems.truncate(1);
        report.comparisons.clear();
    }
    let markdown = render_markdown(std::slice::from_ref(&report), &head);

    let mut files = Outputs::default();
    if let Some(path) = &args.report {
        files.add(path, markdown.clone());
    }
    if let Some(path) = &args.report_csv {
        files.add(path, render_csv(std::slice::from_ref(&report), &head));
    }
    files.commit()?;
    if args.report.is_none() {
        emit(out, &markdown)?;
    }
    Ok(())
}

pub fn cmd_discretize(args: &DiscretizeArgs, out: &mut dyn Write) -> Result<()> {
    let dataset = args.data.load()?;
    let mut files = Outputs::default();
    let mut stdout = String::new();

    if args.eval {
        let head = header(
            "discretize",
            &[
                args.data.describe(),
                "eval=true".to_string(),
                format!("policy={}", args.policy),
                args.tree.describe(),
                args.cv.describe(),
            ],
        );
        let params = args.tree.params(args.policy)?;
        let name = args.data.name();
        let result = discretization_experiment(&dataset, &name, &params, &args.cv.params())?;
        let markdown = render_markdown(std::slice::from_ref(&result.report), &head);
        let audit = render_audit(&result.audits, &head);
        match &args.report {
            Some(path) => files.add(path, markdown),
            None => stdout.push_str(&markdown),
        }
        if let Some(path) = &args.audit {
            files.add(path, audit.clone());
        }
        if let Some(path) = &args.scatter {
            files.add(path, render_scatter_csv(&[(name, result.scatter)], &head));
        }
        stdout.push_str(&audit);
        let failed = result.audits.iter().filter(|a| !a.passed()).count();
        if failed > 0 {
            return Err(Error::Precondition(format!(
                "{failed} fold(s) failed the leakage audit"
            )));
        }
    } else {
        let source = args
            .rules
            .as_ref()
            .map(|p| format!("rules={}", p.display()))
            .unwrap_or_default();
        let head = header("discretize", &[args.data.describe(), source]);
        let rules = match &args.rules {
            Some(path) => {
                let text = fs::read_to_string(path).map_err(|source| Error::Io {
                    path: path.clone(),
                    source,
                })?;
                parse_rules(&text, dataset.schema()).map_err(|e| e.in_file(path))?
            }
            None => fit_rules(&dataset),
        };
        let rules_text = format_rules(dataset.schema(), &rules, &head);
        match &args.rules_out {
            Some(path) => files.add(path, rules_text),
            None if args.rules.is_none() => stdout.push_str(&rules_text),
            None => {}
        }
        if let Some(stem) = &args.out {
            let rewritten = apply_rules(&dataset, &rules)?;
            files.add(
                &stem.with_extension("names"),
                pipe_comment(&head) + &serialize_names(rewritten.schema()),
            );
            files.add(
                &stem.with_extension("data"),
                pipe_comment(&head) + &serialize_data(&rewritten),
            );
        }
    }
    files.commit()?;
    emit(out, &stdout)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pair_parser() {
        assert_eq!(parse_pair("10,10"), Ok((10, 10)));
        assert_eq!(parse_pair("3, 0"), Ok((3, 0)));
        assert!(parse_pair("10").is_err());
        assert!(parse_pair("a,1").is_err());
    }

    #[test]
    fn bogus_policy_is_a_usage_error() {
        let err =
            Cli::try_parse_from(["c45", "grow", "--data", "x", "--policy", "bogus"]).unwrap_err();
        assert_eq!(err.kind(), clap::error::ErrorKind::ValueValidation);
    }

    #[test]
    fn policies_list_parses() {
        let cli =
            Cli::try_parse_from(["c45", "cv", "--data", "x", "--policies", "rel7,7g,7gs,rel8"])
                .unwrap();
        let Command::Cv(args) = cli.command else {
            panic!("expected cv")
        };
        assert_eq!(args.policies, Policy::ALL);
    }
}
