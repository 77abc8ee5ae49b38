//! Grow a pruned tree on iris, print it, and classify one new flower.

use c45::data::{load_stem, Case, Value};
use c45::tree::{classify, induce, misclassified_weight, render_text, tree_size, GrowParams};

fn main() -> c45::Result<()> {
    let iris = load_stem(concat!(env!("CARGO_MANIFEST_DIR"), "/data/iris"))?;
    let tree = induce(&iris, &GrowParams::default());
    print!("{}", render_text(&tree, iris.schema()));

    let errors = misclassified_weight(&tree, &iris, &iris.case_set());
    println!("size {}, training errors {errors}", tree_size(&tree));

    // Petal width unknown: the prediction blends the branches it could take.
    let flower = Case::new(
        vec![
            Value::Number(6.0),
            Value::Number(2.9),
            Value::Number(4.9),
            Value::Unknown,
        ],
        0,
    );
    let p = classify(&tree, &flower);
    println!(
        "predicted {} {:?}",
        iris.schema().classes()[p.class],
        p.probabilities
    );
    Ok(())
}
