//! Shelf trees: rooted trees whose leaves all sit at depth `d`, with a leaf
//! poset at every inner node of depth `d - 1` (a "shelf").
//!
//! Inner nodes carry string identifiers and leaves carry the integer labels
//! of the leaf posets. Nodes are indexed in natural identifier order (numeric
//! identifiers by value, then the rest lexicographically); children lists and
//! state components follow that order.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use itertools::Itertools;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::poset::{Label, Poset};

pub type NodeIdx = usize;

/// JSON form of the inner tree: `{"root": "7", "children": {"7": ["5","6"], "5": [], "6": []}}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeSpec {
    pub root: String,
    #[serde(default)]
    pub children: BTreeMap<String, Vec<String>>,
}

/// Natural order on node identifiers.
pub fn cmp_node_ids(a: &str, b: &str) -> Ordering {
    match (a.parse::<u64>(), b.parse::<u64>()) {
        (Ok(x), Ok(y)) => x.cmp(&y).then_with(|| a.cmp(b)),
        (Ok(_), Err(_)) => Ordering::Less,
        (Err(_), Ok(_)) => Ordering::Greater,
        (Err(_), Err(_)) => a.cmp(b),
    }
}

/// A set of leaves. Ordered by size, then lexicographically.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct LeafSet(Vec<Label>);

impl LeafSet {
    pub fn new(labels: impl IntoIterator<Item = Label>) -> Self {
        let mut v: Vec<Label> = labels.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        LeafSet(v)
    }

    pub fn empty() -> Self {
        LeafSet(Vec::new())
    }

    pub fn labels(&self) -> &[Label] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, l: Label) -> bool {
        self.0.binary_search(&l).is_ok()
    }

    pub fn is_subset_of(&self, other: &BTreeSet<Label>) -> bool {
        self.0.iter().all(|l| other.contains(l))
    }

    pub fn with(&self, l: Label) -> LeafSet {
        LeafSet::new(self.0.iter().copied().chain(std::iter::once(l)))
    }

    pub fn without(&self, l: Label) -> LeafSet {
        LeafSet(self.0.iter().copied().filter(|&x| x != l).collect())
    }

    /// Comma-joined ascending labels; empty string for ∅.
    pub fn key(&self) -> String {
        self.0.iter().map(|l| l.to_string()).join(",")
    }

    pub fn from_key(key: &str) -> Result<Self> {
        let key = key.trim();
        if key.is_empty() || key == "∅" {
            return Ok(LeafSet::empty());
        }
        key.split(',')
            .map(|s| s.trim().parse::<Label>().map_err(|_| Error::InadmissibleSet(key.to_string())))
            .collect::<Result<Vec<_>>>()
            .map(LeafSet::new)
    }
}

impl Ord for LeafSet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for LeafSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for LeafSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            write!(f, "∅")
        } else if self.0.iter().all(|&l| l < 10) {
            write!(f, "{}", self.0.iter().join(""))
        } else {
            write!(f, "{}", self.key())
        }
    }
}

impl fmt::Debug for LeafSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.key())
    }
}

impl Serialize for LeafSet {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.key())
    }
}

impl<'de> Deserialize<'de> for LeafSet {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        LeafSet::from_key(&s).map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InnerNode {
    pub id: String,
    pub parent: Option<NodeIdx>,
    /// Inner children in index order; empty for shelves.
    pub children: Vec<NodeIdx>,
    pub depth: usize,
    /// All leaves below this node.
    pub leaves: BTreeSet<Label>,
}

/// A child of an inner node: a leaf under a shelf, an inner node otherwise.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Child {
    Leaf(Label),
    Inner(NodeIdx),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShelfTree {
    nodes: Vec<InnerNode>,
    root: NodeIdx,
    depth: usize,
    shelves: Vec<NodeIdx>,
    shelf_posets: Vec<Poset>,
    arrangers: Vec<NodeIdx>,
    leaf_shelf: BTreeMap<Label, usize>,
}

/// One point of `L(T)`: a linear extension per shelf and an ordering of the
/// children of every other inner node.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct State {
    pub shelves: Vec<Vec<Label>>,
    pub arrangements: Vec<Vec<NodeIdx>>,
}

/// A set partition of the children of every non-shelf inner node, aligned
/// with [`ShelfTree::arrangers`]. Blocks hold child node indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct InnerPartition {
    pub blocks: Vec<Vec<Vec<NodeIdx>>>,
}

/// The enumerated state space with its frozen index.
#[derive(Debug, Clone)]
pub struct StateSpace {
    pub states: Vec<State>,
    index: HashMap<State, usize>,
    /// Linear extensions of each shelf, lexicographic.
    pub shelf_extensions: Vec<Vec<Vec<Label>>>,
    /// Orderings of the children of each arranger, lexicographic in child index.
    pub arrangements: Vec<Vec<Vec<NodeIdx>>>,
}

impl StateSpace {
    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn index_of(&self, s: &State) -> Option<usize> {
        self.index.get(s).copied()
    }

    /// Sizes of the component lists, shelves first.
    pub fn radices(&self) -> Vec<usize> {
        self.shelf_extensions
            .iter()
            .map(Vec::len)
            .chain(self.arrangements.iter().map(Vec::len))
            .collect()
    }
}

impl ShelfTree {
    /// Validates and builds a tree from its inner structure and leaf posets.
    pub fn new(spec: &TreeSpec, leaf_posets: &BTreeMap<String, Poset>) -> Result<Self> {
        let mut ids: BTreeSet<&str> = BTreeSet::new();
        ids.insert(&spec.root);
        for (k, cs) in &spec.children {
            ids.insert(k);
            ids.extend(cs.iter().map(String::as_str));
        }
        for k in leaf_posets.keys() {
            if !ids.contains(k.as_str()) {
                return Err(Error::UnknownNode(k.clone()));
            }
        }
        let mut ids: Vec<&str> = ids.into_iter().collect();
        ids.sort_by(|a, b| cmp_node_ids(a, b));
        let index: HashMap<&str, NodeIdx> = ids.iter().enumerate().map(|(i, s)| (*s, i)).collect();

        let mut nodes: Vec<InnerNode> = ids
            .iter()
            .map(|id| InnerNode {
                id: id.to_string(),
                parent: None,
                children: Vec::new(),
                depth: 0,
                leaves: BTreeSet::new(),
            })
            .collect();
        for (k, cs) in &spec.children {
            let p = index[k.as_str()];
            for c in cs {
                let ci = index[c.as_str()];
                if nodes[ci].parent.is_some() || ci == index[spec.root.as_str()] {
                    return Err(Error::MalformedTree(format!("node {c} has more than one parent")));
                }
                nodes[ci].parent = Some(p);
                nodes[p].children.push(ci);
            }
        }
        let root = index[spec.root.as_str()];
        // breadth-first from the root; anything unreached is disconnected
        let mut order = vec![root];
        let mut head = 0;
        while head < order.len() {
            let v = order[head];
            head += 1;
            let mut cs = nodes[v].children.clone();
            cs.sort_unstable();
            for &c in &cs {
                nodes[c].depth = nodes[v].depth + 1;
                order.push(c);
            }
            nodes[v].children = cs;
        }
        if order.len() != nodes.len() {
            let missing = (0..nodes.len()).find(|i| !order.contains(i)).unwrap();
            return Err(Error::MalformedTree(format!(
                "node {} is not reachable from the root",
                nodes[missing].id
            )));
        }

        let shelves: Vec<NodeIdx> = (0..nodes.len()).filter(|&v| nodes[v].children.is_empty()).collect();
        let arrangers: Vec<NodeIdx> = (0..nodes.len()).filter(|&v| !nodes[v].children.is_empty()).collect();
        for &v in &arrangers {
            if leaf_posets.contains_key(&nodes[v].id) {
                return Err(Error::MalformedTree(format!(
                    "node {} has inner children and a leaf poset",
                    nodes[v].id
                )));
            }
        }
        let d1 = nodes[shelves[0]].depth;
        for &v in &shelves {
            if nodes[v].depth != d1 {
                return Err(Error::UnequalDepth(
                    nodes[shelves[0]].id.clone(),
                    d1,
                    nodes[v].id.clone(),
                    nodes[v].depth,
                ));
            }
        }
        let mut shelf_posets = Vec::new();
        let mut leaf_shelf = BTreeMap::new();
        for (pos, &v) in shelves.iter().enumerate() {
            let p = leaf_posets
                .get(&nodes[v].id)
                .ok_or_else(|| Error::MissingLeafPoset(nodes[v].id.clone()))?;
            if p.is_empty() {
                return Err(Error::MalformedTree(format!("leaf poset of node {} is empty", nodes[v].id)));
            }
            for &l in p.elements() {
                if leaf_shelf.insert(l, pos).is_some() {
                    return Err(Error::DuplicateLeafLabel(l));
                }
            }
            shelf_posets.push(p.clone());
        }
        for (pos, &v) in shelves.iter().enumerate() {
            let leaves: BTreeSet<Label> = shelf_posets[pos].elements().iter().copied().collect();
            let mut w = Some(v);
            while let Some(u) = w {
                nodes[u].leaves.extend(leaves.iter().copied());
                w = nodes[u].parent;
            }
        }
        Ok(ShelfTree { nodes, root, depth: d1 + 1, shelves, shelf_posets, arrangers, leaf_shelf })
    }

    /// Depth `d` of the leaves.
    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn root(&self) -> NodeIdx {
        self.root
    }

    pub fn nodes(&self) -> &[InnerNode] {
        &self.nodes
    }

    pub fn node(&self, v: NodeIdx) -> &InnerNode {
        &self.nodes[v]
    }

    pub fn node_index(&self, id: &str) -> Result<NodeIdx> {
        self.nodes
            .iter()
            .position(|n| n.id == id)
            .ok_or_else(|| Error::UnknownNode(id.to_string()))
    }

    /// Leaf-parent nodes in index order.
    pub fn shelves(&self) -> &[NodeIdx] {
        &self.shelves
    }

    pub fn shelf_poset(&self, pos: usize) -> &Poset {
        &self.shelf_posets[pos]
    }

    pub fn shelf_posets(&self) -> &[Poset] {
        &self.shelf_posets
    }

    pub fn shelf_position(&self, v: NodeIdx) -> Option<usize> {
        self.shelves.iter().position(|&s| s == v)
    }

    pub fn shelf_position_by_id(&self, id: &str) -> Result<usize> {
        let v = self.node_index(id)?;
        self.shelf_position(v)
            .ok_or_else(|| Error::MalformedTree(format!("node {id} is not a leaf parent")))
    }

    /// Inner nodes of depth different from `d - 1`, in index order.
    pub fn arrangers(&self) -> &[NodeIdx] {
        &self.arrangers
    }

    /// Shelf position holding leaf `l`.
    pub fn shelf_of_leaf(&self, l: Label) -> Option<usize> {
        self.leaf_shelf.get(&l).copied()
    }

    pub fn leaves(&self) -> impl Iterator<Item = Label> + '_ {
        self.leaf_shelf.keys().copied()
    }

    /// The same tree with the poset of one shelf replaced (same leaves).
    pub fn with_shelf_poset(&self, pos: usize, poset: Poset) -> Result<ShelfTree> {
        if poset.elements() != self.shelf_posets[pos].elements() {
            return Err(Error::MalformedTree("replacement poset has different leaves".into()));
        }
        let mut t = self.clone();
        t.shelf_posets[pos] = poset;
        Ok(t)
    }

    /// Back to the JSON description.
    pub fn to_spec(&self) -> (TreeSpec, BTreeMap<String, Poset>) {
        let children = self
            .nodes
            .iter()
            .map(|n| (n.id.clone(), n.children.iter().map(|&c| self.nodes[c].id.clone()).collect()))
            .collect();
        let posets = self
            .shelves
            .iter()
            .zip(&self.shelf_posets)
            .map(|(&v, p)| (self.nodes[v].id.clone(), p.clone()))
            .collect();
        (TreeSpec { root: self.nodes[self.root].id.clone(), children }, posets)
    }

    /// `A(L)`: leaf sets with at most one leaf per shelf, canonically sorted.
    pub fn admissible_sets(&self) -> Vec<LeafSet> {
        let choices = self.shelf_posets.iter().map(|p| {
            std::iter::once(None)
                .chain(p.elements().iter().copied().map(Some))
                .collect::<Vec<_>>()
        });
        let mut out: Vec<LeafSet> = choices
            .multi_cartesian_product()
            .map(|pick| LeafSet::new(pick.into_iter().flatten()))
            .collect();
        if self.shelf_posets.is_empty() {
            out = vec![LeafSet::empty()];
        }
        out.sort();
        out
    }

    /// Per-shelf choice encoded by an admissible set.
    pub fn shelf_choices(&self, e: &LeafSet) -> Result<Vec<Option<Label>>> {
        let mut picks = vec![None; self.shelves.len()];
        for &l in e.labels() {
            let pos = self.shelf_of_leaf(l).ok_or_else(|| Error::InadmissibleSet(e.key()))?;
            if picks[pos].replace(l).is_some() {
                return Err(Error::InadmissibleSet(e.key()));
            }
        }
        Ok(picks)
    }

    pub fn is_admissible(&self, e: &LeafSet) -> bool {
        self.shelf_choices(e).is_ok()
    }

    /// `C_v^E`: the children of `v` with a descendant in `E`.
    pub fn related_children(&self, e: &LeafSet, v: NodeIdx) -> Vec<Child> {
        let node = &self.nodes[v];
        if node.children.is_empty() {
            e.labels().iter().filter(|l| node.leaves.contains(l)).map(|&l| Child::Leaf(l)).collect()
        } else {
            node.children
                .iter()
                .filter(|&&c| e.labels().iter().any(|l| self.nodes[c].leaves.contains(l)))
                .map(|&c| Child::Inner(c))
                .collect()
        }
    }

    /// Related children of an arranger, as child node indices.
    pub fn related_inner_children(&self, e: &LeafSet, v: NodeIdx) -> BTreeSet<NodeIdx> {
        self.nodes[v]
            .children
            .iter()
            .copied()
            .filter(|&c| e.labels().iter().any(|l| self.nodes[c].leaves.contains(l)))
            .collect()
    }

    /// `L(T)` in canonical lexicographic order.
    pub fn state_space(&self) -> StateSpace {
        let shelf_extensions: Vec<_> = self.shelf_posets.iter().map(Poset::linear_extensions).collect();
        let arrangements: Vec<Vec<Vec<NodeIdx>>> = self
            .arrangers
            .iter()
            .map(|&v| {
                let cs = &self.nodes[v].children;
                cs.iter().copied().permutations(cs.len()).collect()
            })
            .collect();
        let k = shelf_extensions.len();
        let radices: Vec<usize> = shelf_extensions
            .iter()
            .map(Vec::len)
            .chain(arrangements.iter().map(Vec::len))
            .collect();
        let states: Vec<State> = radices
            .iter()
            .map(|&r| 0..r)
            .multi_cartesian_product()
            .map(|digits| State {
                shelves: (0..k).map(|i| shelf_extensions[i][digits[i]].clone()).collect(),
                arrangements: (0..arrangements.len())
                    .map(|j| arrangements[j][digits[k + j]].clone())
                    .collect(),
            })
            .collect();
        // multi_cartesian_product of nothing yields nothing; L(T) is a singleton then
        let states = if radices.is_empty() {
            vec![State { shelves: vec![], arrangements: vec![] }]
        } else {
            states
        };
        let index = states.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect();
        StateSpace { states, index, shelf_extensions, arrangements }
    }

    pub fn state_count(&self) -> u128 {
        let mut n: u128 = self.shelf_posets.iter().map(|p| p.count_linear_extensions()).product();
        for &v in &self.arrangers {
            n *= (1..=self.nodes[v].children.len() as u128).product::<u128>();
        }
        n
    }

    /// Checks membership in `L(T)`.
    pub fn is_state(&self, s: &State) -> bool {
        s.shelves.len() == self.shelves.len()
            && s.arrangements.len() == self.arrangers.len()
            && s.shelves.iter().zip(&self.shelf_posets).all(|(ext, p)| p.is_linear_extension(ext))
            && s.arrangements.iter().zip(&self.arrangers).all(|(perm, &v)| {
                let mut sorted = perm.clone();
                sorted.sort_unstable();
                sorted == self.nodes[v].children
            })
    }

    /// All tuples of set partitions of the children of the arrangers.
    pub fn inner_partitions(&self) -> Vec<InnerPartition> {
        let per_node: Vec<Vec<Vec<Vec<NodeIdx>>>> = self
            .arrangers
            .iter()
            .map(|&v| {
                let cs = &self.nodes[v].children;
                set_partitions(cs.len())
                    .into_iter()
                    .map(|p| p.into_iter().map(|b| b.into_iter().map(|i| cs[i]).collect()).collect())
                    .collect()
            })
            .collect();
        if per_node.is_empty() {
            return vec![InnerPartition { blocks: vec![] }];
        }
        per_node
            .into_iter()
            .multi_cartesian_product()
            .map(|blocks| InnerPartition { blocks })
            .collect()
    }

    /// True iff at every arranger each block of α lies inside `C_v^E` or
    /// outside it.
    pub fn alpha_compatible(&self, e: &LeafSet, alpha: &InnerPartition) -> bool {
        self.arrangers.iter().zip(&alpha.blocks).all(|(&v, blocks)| {
            let related = self.related_inner_children(e, v);
            blocks.iter().all(|b| {
                let inside = b.iter().filter(|c| related.contains(c)).count();
                inside == 0 || inside == b.len()
            })
        })
    }

    pub fn format_partition(&self, alpha: &InnerPartition) -> String {
        if alpha.blocks.is_empty() {
            return "-".into();
        }
        self.arrangers
            .iter()
            .zip(&alpha.blocks)
            .map(|(&v, blocks)| {
                let bs: String = blocks
                    .iter()
                    .map(|b| format!("{{{}}}", b.iter().map(|&c| self.nodes[c].id.as_str()).join(",")))
                    .collect();
                format!("{}:{}", self.nodes[v].id, bs)
            })
            .join(" ")
    }

    /// Components joined by `|`; entries concatenated when every entry of the
    /// component is a single character, comma-separated otherwise.
    pub fn format_state(&self, s: &State) -> String {
        let shelves = s.shelves.iter().map(|c| join_entries(c.iter().map(|l| l.to_string())));
        let arr = s
            .arrangements
            .iter()
            .map(|c| join_entries(c.iter().map(|&v| self.nodes[v].id.clone())));
        shelves.chain(arr).join("|")
    }

    pub fn parse_state(&self, text: &str) -> Result<State> {
        let parts: Vec<&str> = text.split('|').collect();
        let k = self.shelves.len();
        if parts.len() != k + self.arrangers.len() {
            return Err(Error::StateParse(format!(
                "expected {} components, found {}",
                k + self.arrangers.len(),
                parts.len()
            )));
        }
        let mut shelves = Vec::new();
        for (pos, part) in parts[..k].iter().enumerate() {
            let tokens = split_entries(part, self.shelf_posets[pos].len());
            let labels = tokens
                .iter()
                .map(|t| t.parse::<Label>().map_err(|_| Error::StateParse(format!("bad label {t:?}"))))
                .collect::<Result<Vec<_>>>()?;
            shelves.push(labels);
        }
        let mut arrangements = Vec::new();
        for (j, part) in parts[k..].iter().enumerate() {
            let v = self.arrangers[j];
            let tokens = split_entries(part, self.nodes[v].children.len());
            let ids = tokens
                .iter()
                .map(|t| {
                    self.nodes[v]
                        .children
                        .iter()
                        .copied()
                        .find(|&c| self.nodes[c].id == *t)
                        .ok_or_else(|| Error::StateParse(format!("{t:?} is not a child of {}", self.nodes[v].id)))
                })
                .collect::<Result<Vec<_>>>()?;
            arrangements.push(ids);
        }
        let s = State { shelves, arrangements };
        if !self.is_state(&s) {
            return Err(Error::StateParse(format!("{text:?} is not a state of the tree")));
        }
        Ok(s)
    }
}

fn join_entries(entries: impl Iterator<Item = String>) -> String {
    let v: Vec<String> = entries.collect();
    if v.iter().all(|e| e.chars().count() == 1) {
        v.concat()
    } else {
        v.join(",")
    }
}

fn split_entries(part: &str, expected: usize) -> Vec<String> {
    let part = part.trim();
    if part.contains(',') || expected <= 1 {
        part.split(',').map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect()
    } else {
        part.chars().map(|c| c.to_string()).collect()
    }
}

/// Set partitions of `0..n` in restricted-growth-string order, blocks ordered
/// by smallest member.
pub fn set_partitions(n: usize) -> Vec<Vec<Vec<usize>>> {
    let mut out = Vec::new();
    let mut rgs = vec![0usize; n];
    fn go(i: usize, max: usize, rgs: &mut Vec<usize>, out: &mut Vec<Vec<Vec<usize>>>) {
        let n = rgs.len();
        if i == n {
            let blocks = if n == 0 { 0 } else { max + 1 };
            let mut p = vec![Vec::new(); blocks];
            for (x, &b) in rgs.iter().enumerate() {
                p[b].push(x);
            }
            out.push(p);
            return;
        }
        let limit = if i == 0 { 0 } else { max + 1 };
        for b in 0..=limit {
            rgs[i] = b;
            go(i + 1, if i == 0 { 0 } else { max.max(b) }, rgs, out);
        }
    }
    go(0, 0, &mut rgs, &mut out);
    out
}
