//! Instance files: a tree, its leaf posets and optional weights.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::Weights;
use crate::poset::{Poset, PosetSpec};
use crate::tree::{LeafSet, ShelfTree, TreeSpec};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub tree: TreeSpec,
    pub leaf_posets: BTreeMap<String, PosetSpec>,
    /// E-key to `"p/q"`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<BTreeMap<String, String>>,
}

/// A validated instance.
#[derive(Debug, Clone)]
pub struct Instance {
    pub tree: ShelfTree,
    pub weights: Option<Weights>,
}

impl InstanceFile {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Instance(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Instance(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn from_tree(t: &ShelfTree, weights: Option<&Weights>) -> Self {
        let (tree, posets) = t.to_spec();
        InstanceFile {
            tree,
            leaf_posets: posets.iter().map(|(k, p)| (k.clone(), p.to_spec())).collect(),
            weights: weights.map(|w| w.values().iter().map(|(e, v)| (e.key(), crate::linalg::format_rational(v))).collect()),
        }
    }

    /// Builds the tree; weight keys must be admissible sets of it.
    pub fn build(&self) -> Result<Instance> {
        let posets = self
            .leaf_posets
            .iter()
            .map(|(k, spec)| Ok((k.clone(), Poset::from_spec(spec)?)))
            .collect::<Result<BTreeMap<_, _>>>()?;
        let tree = ShelfTree::new(&self.tree, &posets)?;
        let weights = match &self.weights {
            None => None,
            Some(raw) => {
                let w = Weights::from_strings(raw)?;
                if let Some(e) = w.values().keys().find(|e| !tree.is_admissible(e)) {
                    return Err(Error::InadmissibleSet(e.key()));
                }
                Some(w)
            }
        };
        Ok(Instance { tree, weights })
    }
}

/// Parses `{"E-key": "p/q", ...}`.
pub fn parse_weights(text: &str) -> Result<Weights> {
    let raw: BTreeMap<String, String> =
        serde_json::from_str(text).map_err(|e| Error::Instance(format!("weights: {e}")))?;
    Weights::from_strings(&raw)
}

/// Keys of `A(L)` in canonical order.
pub fn admissible_keys(t: &ShelfTree) -> Vec<String> {
    t.admissible_sets().iter().map(LeafSet::key).collect()
}
