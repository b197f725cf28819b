//! JSON interchange format for in-trees.
//!
//! ```json
//! {"n": 3, "parent": [0, 0, 1], "potential": [...], "edge_length": [...], "cut_flags": [...]}
//! ```
//!
//! Root nodes point at themselves and carry an edge length of 0. Import checks
//! array lengths, parent ranges and acyclicity before handing out an [`InTree`].

use crate::intree::{find_cycle_or_out_of_range, InTree};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SchemaError {
    #[error("malformed document: {0}")]
    Json(#[from] serde_json::Error),
    #[error("field '{field}' has {found} entries, expected {n}")]
    LengthMismatch {
        field: &'static str,
        n: usize,
        found: usize,
    },
    #[error("parent of node {node} is out of range")]
    ParentOutOfRange { node: usize },
    #[error("parent pointers form a cycle through node {node}")]
    Cycle { node: usize },
    #[error("field '{field}' has a non-finite entry at node {node}")]
    NonFinite { field: &'static str, node: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ItDoc {
    pub n: usize,
    pub parent: Vec<usize>,
    pub potential: Vec<f64>,
    pub edge_length: Vec<f64>,
    pub cut_flags: Vec<bool>,
}

impl From<&InTree> for ItDoc {
    fn from(it: &InTree) -> Self {
        ItDoc {
            n: it.len(),
            parent: it.parent.clone(),
            potential: it.potential.clone(),
            edge_length: it.edge_length.clone(),
            cut_flags: it.cut_flags.clone(),
        }
    }
}

impl ItDoc {
    pub fn validate(self) -> Result<InTree, SchemaError> {
        let n = self.n;
        for (field, found) in [
            ("parent", self.parent.len()),
            ("potential", self.potential.len()),
            ("edge_length", self.edge_length.len()),
            ("cut_flags", self.cut_flags.len()),
        ] {
            if found != n {
                return Err(SchemaError::LengthMismatch { field, n, found });
            }
        }
        for (field, v) in [("potential", &self.potential), ("edge_length", &self.edge_length)] {
            if let Some(node) = v.iter().position(|x| !x.is_finite()) {
                return Err(SchemaError::NonFinite { field, node });
            }
        }
        if let Some(node) = find_cycle_or_out_of_range(&self.parent) {
            return Err(if self.parent[node] >= n {
                SchemaError::ParentOutOfRange { node }
            } else {
                SchemaError::Cycle { node }
            });
        }
        Ok(InTree {
            parent: self.parent,
            edge_length: self.edge_length,
            potential: self.potential,
            cut_flags: self.cut_flags,
        })
    }
}

/// Pretty-printed JSON with a trailing newline. Floats are written in
/// shortest round-trip form, so `import(export(it)) == it` bit for bit.
pub fn export(it: &InTree) -> String {
    let mut s = serde_json::to_string_pretty(&ItDoc::from(it)).expect("in-tree serializes");
    s.push('\n');
    s
}

pub fn import(text: &str) -> Result<InTree, SchemaError> {
    serde_json::from_str::<ItDoc>(text)?.validate()
}
