//! Moves on linear extensions and on orderings of inner children.
//!
//! Positions are 1-based in the public operators, as in the usual notation
//! for `τ_i` and `∂_i`.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::poset::{Label, Poset};
use crate::tree::{LeafSet, NodeIdx, ShelfTree, State, StateSpace};

fn check_extension(p: &Poset, ext: &[Label]) -> Result<()> {
    if p.is_linear_extension(ext) {
        Ok(())
    } else {
        Err(Error::NotALinearExtension)
    }
}

/// Swaps positions `i` and `i+1` when their entries are incomparable.
pub fn tau(p: &Poset, ext: &[Label], i: usize) -> Result<Vec<Label>> {
    check_extension(p, ext)?;
    let n = ext.len();
    if i == 0 || i >= n {
        return Err(Error::PositionOutOfRange(i, n));
    }
    let mut out = ext.to_vec();
    tau_in_place(p, &mut out, i - 1);
    Ok(out)
}

#[inline]
fn tau_in_place(p: &Poset, seq: &mut [Label], i0: usize) {
    if !p.comparable(seq[i0], seq[i0 + 1]) {
        seq.swap(i0, i0 + 1);
    }
}

/// `∂_i = τ_{n-1} ⋯ τ_{i+1} τ_i`, with `τ_i` applied first.
pub fn promotion(p: &Poset, ext: &[Label], i: usize) -> Result<Vec<Label>> {
    check_extension(p, ext)?;
    let n = ext.len();
    if i == 0 || i > n {
        return Err(Error::PositionOutOfRange(i, n));
    }
    let mut out = ext.to_vec();
    promote_in_place(p, &mut out, i - 1);
    Ok(out)
}

pub(crate) fn promote_in_place(p: &Poset, seq: &mut [Label], start: usize) {
    for k in start..seq.len().saturating_sub(1) {
        tau_in_place(p, seq, k);
    }
}

/// Promotion started at the position currently holding label `j`.
pub fn hat_promotion(p: &Poset, ext: &[Label], j: Label) -> Result<Vec<Label>> {
    check_extension(p, ext)?;
    let pos = ext.iter().position(|&x| x == j).ok_or(Error::UnknownLabel(j))?;
    let mut out = ext.to_vec();
    promote_in_place(p, &mut out, pos);
    Ok(out)
}

/// `∂̂_j` as an index map on the lexicographic list of linear extensions.
pub fn hat_promotion_table(p: &Poset, exts: &[Vec<Label>], j: Label) -> Vec<usize> {
    let index: HashMap<&[Label], usize> = exts.iter().enumerate().map(|(i, e)| (e.as_slice(), i)).collect();
    exts.iter()
        .map(|e| {
            let mut out = e.clone();
            if let Some(pos) = out.iter().position(|&x| x == j) {
                promote_in_place(p, &mut out, pos);
            }
            index[out.as_slice()]
        })
        .collect()
}

/// A set partition whose blocks carry a linear order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OrderedSetPartition<T = Label> {
    blocks: Vec<Vec<T>>,
}

impl<T: Ord + Clone + fmt::Debug> OrderedSetPartition<T> {
    /// Blocks are stored sorted; empty or overlapping blocks are rejected.
    pub fn new(blocks: Vec<Vec<T>>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::with_capacity(blocks.len());
        for mut b in blocks {
            if b.is_empty() {
                return Err(Error::InvalidPartition("empty block".into()));
            }
            b.sort();
            for x in &b {
                if !seen.insert(x.clone()) {
                    return Err(Error::InvalidPartition(format!("{x:?} occurs in two blocks")));
                }
            }
            out.push(b);
        }
        Ok(OrderedSetPartition { blocks: out })
    }

    /// Drops empty blocks before validating.
    pub fn from_nonempty(blocks: Vec<Vec<T>>) -> Result<Self> {
        Self::new(blocks.into_iter().filter(|b| !b.is_empty()).collect())
    }

    pub fn blocks(&self) -> &[Vec<T>] {
        &self.blocks
    }

    pub fn ground_set(&self) -> BTreeSet<T> {
        self.blocks.iter().flatten().cloned().collect()
    }

    /// The underlying unordered partition, blocks sorted by least member.
    pub fn support(&self) -> Vec<Vec<T>> {
        let mut b = self.blocks.clone();
        b.sort();
        b
    }
}

/// Elementary pop shuffle: block 1 to the back, then block 2, and so on,
/// each keeping the relative order of its entries in `seq`.
pub fn pop_shuffle<T: Ord + Clone + fmt::Debug>(b: &OrderedSetPartition<T>, seq: &[T]) -> Result<Vec<T>> {
    let ground: BTreeSet<T> = seq.iter().cloned().collect();
    if ground.len() != seq.len() || ground != b.ground_set() {
        return Err(Error::GroundSetMismatch);
    }
    let mut out = Vec::with_capacity(seq.len());
    for block in b.blocks() {
        out.extend(seq.iter().filter(|x| block.binary_search(x).is_ok()).cloned());
    }
    Ok(out)
}

/// `a ∘ b`: blocks `a_i ∩ b_j` in lexicographic `(i, j)` order.
pub fn osp_compose<T: Ord + Clone + fmt::Debug>(
    a: &OrderedSetPartition<T>,
    b: &OrderedSetPartition<T>,
) -> Result<OrderedSetPartition<T>> {
    if a.ground_set() != b.ground_set() {
        return Err(Error::GroundSetMismatch);
    }
    let mut blocks = Vec::new();
    for ai in a.blocks() {
        for bj in b.blocks() {
            let meet: Vec<T> = ai.iter().filter(|x| bj.binary_search(x).is_ok()).cloned().collect();
            if !meet.is_empty() {
                blocks.push(meet);
            }
        }
    }
    OrderedSetPartition::new(blocks)
}

/// All ordered set partitions of `items`.
pub fn ordered_set_partitions<T: Ord + Clone + fmt::Debug>(items: &[T]) -> Vec<OrderedSetPartition<T>> {
    let mut out = Vec::new();
    for p in crate::tree::set_partitions(items.len()) {
        let k = p.len();
        for order in (0..k).permutations(k) {
            let blocks = order.iter().map(|&i| p[i].iter().map(|&x| items[x].clone()).collect()).collect();
            out.push(OrderedSetPartition::new(blocks).expect("partition blocks are disjoint"));
        }
    }
    out
}

/// `β^E_v = (C_v ∖ C_v^E, C_v^E)` with empty parts dropped.
pub fn move_partition(t: &ShelfTree, e: &LeafSet, v: NodeIdx) -> OrderedSetPartition<NodeIdx> {
    let related = t.related_inner_children(e, v);
    let (inside, outside): (Vec<NodeIdx>, Vec<NodeIdx>) =
        t.node(v).children.iter().partition(|c| related.contains(c));
    OrderedSetPartition::from_nonempty(vec![outside, inside]).expect("two disjoint parts")
}

/// `∂̂_E π`: promotion at the related leaf of each shelf, pop shuffle of the
/// related children at every other inner node.
pub fn apply_move(t: &ShelfTree, s: &State, e: &LeafSet) -> Result<State> {
    let picks = t.shelf_choices(e)?;
    if !t.is_state(s) {
        return Err(Error::StateParse("not a state of the tree".into()));
    }
    Ok(apply_move_unchecked(t, s, e, &picks))
}

fn apply_move_unchecked(t: &ShelfTree, s: &State, e: &LeafSet, picks: &[Option<Label>]) -> State {
    let shelves = s
        .shelves
        .iter()
        .zip(picks)
        .enumerate()
        .map(|(pos, (ext, pick))| {
            let mut out = ext.clone();
            if let Some(j) = pick {
                let i = out.iter().position(|x| x == j).expect("leaf belongs to shelf");
                promote_in_place(t.shelf_poset(pos), &mut out, i);
            }
            out
        })
        .collect();
    let arrangements = s
        .arrangements
        .iter()
        .zip(t.arrangers())
        .map(|(perm, &v)| {
            let related = t.related_inner_children(e, v);
            let mut out: Vec<NodeIdx> = perm.iter().copied().filter(|c| !related.contains(c)).collect();
            out.extend(perm.iter().copied().filter(|c| related.contains(c)));
            out
        })
        .collect();
    State { shelves, arrangements }
}

/// For every admissible set (in the given order) the induced map on state
/// indices.
pub fn move_tables(t: &ShelfTree, ss: &StateSpace, sets: &[LeafSet]) -> Result<Vec<Vec<usize>>> {
    sets.iter()
        .map(|e| {
            let picks = t.shelf_choices(e)?;
            Ok(ss
                .states
                .iter()
                .map(|s| {
                    let image = apply_move_unchecked(t, s, e, &picks);
                    ss.index_of(&image).expect("moves preserve the state space")
                })
                .collect())
        })
        .collect()
}
