//! Ten ten-fold cross-validations of all four policies on shared folds.

use c45::data::load_stem;
use c45::experiments::{compare_policies, render_markdown, CvParams};
use c45::policy::Policy;
use c45::tree::GrowParams;

fn main() -> c45::Result<()> {
    let root = env!("CARGO_MANIFEST_DIR");
    let cv = CvParams::default();
    let mut reports = Vec::new();
    for name in ["iris", "pima"] {
        let ds = load_stem(format!("{root}/data/{name}"))?;
        reports.push(compare_policies(
            &ds,
            name,
            &Policy::ALL,
            &GrowParams::default(),
            &cv,
        )?);
    }
    print!(
        "{}",
        render_markdown(&reports, &format!("policy comparison seed={}", cv.seed))
    );
    Ok(())
}
