//! Unpruned versus pruned trees on the diabetes data, across confidence levels.

use c45::data::load_stem;
use c45::tree::{added_errors, grow, prune, tree_size, GrowParams};

fn main() -> c45::Result<()> {
    let pima = load_stem(concat!(env!("CARGO_MANIFEST_DIR"), "/data/pima"))?;
    let cases = pima.case_set();
    let full = grow(&pima, &cases, &GrowParams::default());
    println!("unpruned: {} nodes", tree_size(&full));
    for cf in [0.05, 0.1, 0.25, 0.5] {
        let params = GrowParams {
            prune_confidence: cf,
            ..Default::default()
        };
        let pruned = prune(&full, &pima, &cases, &params);
        println!("cf {cf:<4}: {} nodes", tree_size(&pruned));
    }
    // Pessimistic estimate for a leaf holding 20 cases with 2 errors.
    println!(
        "extra errors for 2/20 at cf 0.25: {:.3}",
        added_errors(20.0, 2.0, 0.25)
    );
    Ok(())
}
