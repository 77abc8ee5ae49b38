//! Add ten random continuous and ten random discrete attributes, then see how
//! each policy copes.

use c45::data::load_stem;
use c45::experiments::{augment_irrelevant, compare_policies, render_markdown, CvParams};
use c45::policy::Policy;
use c45::tree::GrowParams;

fn main() -> c45::Result<()> {
    let iris = load_stem(concat!(env!("CARGO_MANIFEST_DIR"), "/data/iris"))?;
    let cv = CvParams::default();
    let policies = [Policy::Rel7, Policy::Rel8];
    let params = GrowParams::default();
    let augmented = augment_irrelevant(&iris, 10, 10, 10, cv.seed)?;
    let reports = vec![
        compare_policies(&iris, "iris", &policies, &params, &cv)?,
        compare_policies(&augmented, "iris+irr", &policies, &params, &cv)?,
    ];
    print!("{}", render_markdown(&reports, "irrelevant attributes"));
    Ok(())
}
