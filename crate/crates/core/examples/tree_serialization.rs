//! Save a tree as JSON and read it back bit for bit.

use c45::data::load_stem;
use c45::policy::Policy;
use c45::tree::{induce, parse_tree_json, tree_to_json, GrowParams, TreeFile};

fn main() -> c45::Result<()> {
    let iris = load_stem(concat!(env!("CARGO_MANIFEST_DIR"), "/data/iris"))?;
    let tree = induce(&iris, &GrowParams::default());
    let file = TreeFile::new(&tree, iris.schema(), Some(Policy::Rel8), "example");
    let json = tree_to_json(&file);
    println!("{} bytes of JSON", json.len());

    let back = parse_tree_json(&json)?;
    back.check_schema(iris.schema())?;
    assert_eq!(back.root, tree);
    println!("round trip identical");
    Ok(())
}
