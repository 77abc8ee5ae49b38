//! Global discretization: fit rules, rewrite a dataset, and cross-validate
//! against local thresholds with the per-fold leakage audit.

use c45::data::{load_stem, serialize_names};
use c45::discretize::{apply_rules, fit_rules, format_rules};
use c45::experiments::{discretization_experiment, render_markdown, CvParams};
use c45::tree::GrowParams;

fn main() -> c45::Result<()> {
    let iris = load_stem(concat!(env!("CARGO_MANIFEST_DIR"), "/data/iris"))?;
    let rules = fit_rules(&iris);
    print!("{}", format_rules(iris.schema(), &rules, "iris rules"));
    let discrete = apply_rules(&iris, &rules)?;
    print!("{}", serialize_names(discrete.schema()));

    let cv = CvParams {
        repeats: 3,
        ..Default::default()
    };
    let result = discretization_experiment(&iris, "iris", &GrowParams::default(), &cv)?;
    print!("{}", render_markdown(&[result.report], "discretization"));
    let passed = result.audits.iter().filter(|a| a.passed()).count();
    println!(
        "{passed}/{} folds pass the leakage audit",
        result.audits.len()
    );
    println!("first: {}", result.audits[0].line());
    Ok(())
}
