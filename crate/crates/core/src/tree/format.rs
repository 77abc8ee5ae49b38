use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::TreeNode;
use crate::data::{Schema, Test};
use crate::error::{Error, Result};
use crate::policy::Policy;

pub const TREE_FORMAT_VERSION: u32 = 1;
const TREE_FORMAT_NAME: &str = "c45-tree";

/// Structured tree file. Thresholds are written as shortest round-trip
/// decimals, so reading a file back yields a bit-identical tree.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TreeFile {
    pub format: String,
    pub version: u32,
    /// Free-form provenance line (generator version, configuration, seed).
    pub header: String,
    pub policy: Option<Policy>,
    pub attributes: Vec<String>,
    pub classes: Vec<String>,
    pub root: TreeNode,
}

impl TreeFile {
    pub fn new(tree: &TreeNode, schema: &Schema, policy: Option<Policy>, header: &str) -> Self {
        TreeFile {
            format: TREE_FORMAT_NAME.to_string(),
            version: TREE_FORMAT_VERSION,
            header: header.to_string(),
            policy,
            attributes: schema.attributes().iter().map(|a| a.name.clone()).collect(),
            classes: schema.classes().to_vec(),
            root: tree.clone(),
        }
    }

    /// Checks that the tree refers to the attributes and classes of `schema`.
    pub fn check_schema(&self, schema: &Schema) -> Result<()> {
        let names: Vec<&str> = schema
            .attributes()
            .iter()
            .map(|a| a.name.as_str())
            .collect();
        if self.attributes != names || self.classes != schema.classes() {
            return Err(Error::TreeFormat(
                "tree was built for a different schema".into(),
            ));
        }
        Ok(())
    }
}

pub fn tree_to_json(file: &TreeFile) -> String {
    let mut s = serde_json::to_string_pretty(file).expect("tree serializes");
    s.push('\n');
    s
}

pub fn parse_tree_json(text: &str) -> Result<TreeFile> {
    let file: TreeFile =
        serde_json::from_str(text).map_err(|e| Error::TreeFormat(e.to_string()))?;
    if file.format != TREE_FORMAT_NAME {
        return Err(Error::TreeFormat(format!(
            "unexpected format {:?}",
            file.format
        )));
    }
    if file.version != TREE_FORMAT_VERSION {
        return Err(Error::TreeFormat(format!(
            "unsupported version {} (expected {TREE_FORMAT_VERSION})",
            file.version
        )));
    }
    check_node(&file.root, file.attributes.len(), file.classes.len())?;
    Ok(file)
}

fn check_node(node: &TreeNode, attributes: usize, classes: usize) -> Result<()> {
    if node.class() >= classes || node.distribution().len() != classes {
        return Err(Error::TreeFormat("class index out of range".into()));
    }
    if let TreeNode::Internal { test, children, .. } = node {
        if test.attribute() >= attributes {
            return Err(Error::TreeFormat("attribute index out of range".into()));
        }
        if children.len() != test.test.outcomes() || children.len() < 2 {
            return Err(Error::TreeFormat(
                "child count does not match the test".into(),
            ));
        }
        for child in children {
            check_node(child, attributes, classes)?;
        }
    }
    Ok(())
}

/// Renders a tree as indented text, one line per branch.
pub fn render_text(tree: &TreeNode, schema: &Schema) -> String {
    let mut out = String::new();
    match tree {
        TreeNode::Leaf { .. } => {
            let _ = writeln!(out, "{}", leaf_label(tree, schema));
        }
        TreeNode::Internal { .. } => render_branches(tree, schema, 0, &mut out),
    }
    out
}

fn leaf_label(node: &TreeNode, schema: &Schema) -> String {
    let weight = node.weight();
    let errors = weight - node.distribution()[node.class()];
    let class = &schema.classes()[node.class()];
    if errors > 0.05 {
        format!("{class} ({weight:.1}/{errors:.1})")
    } else {
        format!("{class} ({weight:.1})")
    }
}

fn render_branches(node: &TreeNode, schema: &Schema, depth: usize, out: &mut String) {
    let TreeNode::Internal { test, children, .. } = node else {
        return;
    };
    let attr = schema.attribute(test.attribute());
    for (o, child) in children.iter().enumerate() {
        out.push_str(&"|   ".repeat(depth));
        match test.test {
            Test::Threshold { threshold, .. } => {
                let op = if o == 0 { "<=" } else { ">" };
                let _ = write!(out, "{} {op} {threshold}", attr.name);
            }
            Test::Discrete { .. } => {
                let _ = write!(out, "{} = {}", attr.name, attr.values()[o]);
            }
        }
        if child.is_leaf() {
            let _ = writeln!(out, ": {}", leaf_label(child, schema));
        } else {
            out.push_str(":\n");
            render_branches(child, schema, depth + 1, out);
        }
    }
}
