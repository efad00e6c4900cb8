//! Finite transformation monoids: closure, Green's relations, maximal
//! subgroups and their characters.

mod characters;
mod doab;

use std::collections::HashMap;
use std::hash::BuildHasher;

use fixedbitset::FixedBitSet;
use hashbrown::{DefaultHashBuilder, HashTable};

use petgraph::algo::tarjan_scc;
use petgraph::graph::{DiGraph, NodeIndex};
use serde::Serialize;

use crate::error::{Error, Result};

pub use characters::{characters, Character};
pub use doab::{
    doab_spectrum, doab_spectrum_with, full_monoid, monoid_report, shelf_monoid, ClassReport, FactorReport,
    MonoidReport,
};

/// Element cap used when none is given.
pub const DEFAULT_CAP: usize = 1_000_000;

/// A total map on `{0, …, n-1}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Transformation(Vec<u32>);

impl Transformation {
    pub fn new(table: Vec<u32>) -> Result<Self> {
        let n = table.len();
        if table.iter().any(|&i| i as usize >= n) {
            return Err(Error::DegreeMismatch);
        }
        Ok(Transformation(table))
    }

    pub fn from_indices(table: &[usize]) -> Result<Self> {
        Self::new(table.iter().map(|&i| i as u32).collect())
    }

    pub fn identity(n: usize) -> Self {
        Transformation((0..n as u32).collect())
    }

    pub fn constant(n: usize, value: usize) -> Self {
        Transformation(vec![value as u32; n])
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn table(&self) -> &[u32] {
        &self.0
    }

    pub fn apply(&self, i: usize) -> usize {
        self.0[i] as usize
    }

    /// `self ∘ inner`: `inner` acts first.
    pub fn compose(&self, inner: &Transformation) -> Transformation {
        Transformation(inner.0.iter().map(|&i| self.0[i as usize]).collect())
    }

    pub fn is_idempotent(&self) -> bool {
        self.0.iter().all(|&i| self.0[i as usize] == i)
    }

    pub fn is_constant(&self) -> bool {
        self.0.windows(2).all(|w| w[0] == w[1])
    }
}

/// Number of points fixed by `s`.
pub fn fix_count(s: &Transformation) -> usize {
    s.0.iter().enumerate().filter(|&(i, &j)| i == j as usize).count()
}

/// A monoid closed under composition, elements in breadth-first order from
/// the identity.
#[derive(Debug, Clone)]
pub struct TransformationMonoid {
    elements: Vec<Transformation>,
    /// Element ids hashed by their tables, so each table is stored once.
    index: HashTable<u32>,
    hasher: DefaultHashBuilder,
    generators: Vec<usize>,
    /// Breadth-first parent and the generator appended to reach each element.
    parent: Vec<Option<(usize, usize)>>,
    /// `right[x][g] = x ∘ g`.
    right: Vec<Vec<usize>>,
    /// `left[x][g] = g ∘ x`.
    left: Vec<Vec<usize>>,
}

fn lookup(index: &HashTable<u32>, hasher: &DefaultHashBuilder, elements: &[Transformation], t: &[u32]) -> Option<usize> {
    index.find(hasher.hash_one(t), |&i| elements[i as usize].0 == t).map(|&i| i as usize)
}

/// Closure of `generators` under composition, identity included.
pub fn generate_monoid(generators: &[Transformation], cap: usize) -> Result<TransformationMonoid> {
    let n = match generators.first() {
        Some(g) => g.degree(),
        None => 0,
    };
    if generators.iter().any(|g| g.degree() != n) {
        return Err(Error::DegreeMismatch);
    }
    let hasher = DefaultHashBuilder::default();
    let mut elements = vec![Transformation::identity(n)];
    let mut index: HashTable<u32> = HashTable::new();
    index.insert_unique(hasher.hash_one(&elements[0].0[..]), 0, |_| unreachable!("empty table"));
    let mut parent = vec![None];
    let mut right: Vec<Vec<usize>> = Vec::new();
    let mut x = 0;
    // elements are appended in breadth-first order, so `x` walks the queue
    while x < elements.len() {
        let mut row = Vec::with_capacity(generators.len());
        for (gi, g) in generators.iter().enumerate() {
            let y = elements[x].compose(g);
            let h = hasher.hash_one(&y.0[..]);
            let id = match index.find(h, |&i| elements[i as usize] == y) {
                Some(&i) => i as usize,
                None => {
                    if elements.len() >= cap {
                        return Err(Error::CapExceeded(cap));
                    }
                    let id = elements.len();
                    index.insert_unique(h, id as u32, |&i| hasher.hash_one(&elements[i as usize].0[..]));
                    elements.push(y);
                    parent.push(Some((x, gi)));
                    id
                }
            };
            row.push(id);
        }
        right.push(row);
        x += 1;
    }
    let gen_ids: Vec<usize> = generators.iter().map(|g| lookup(&index, &hasher, &elements, &g.0).expect("generator is reached")).collect();
    let left = elements
        .iter()
        .map(|x| {
            gen_ids
                .iter()
                .map(|&g| lookup(&index, &hasher, &elements, &elements[g].compose(x).0).expect("closed"))
                .collect()
        })
        .collect();
    Ok(TransformationMonoid { elements, index, hasher, generators: gen_ids, parent, right, left })
}

impl TransformationMonoid {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[Transformation] {
        &self.elements
    }

    pub fn element(&self, x: usize) -> &Transformation {
        &self.elements[x]
    }

    pub fn index_of(&self, t: &Transformation) -> Option<usize> {
        lookup(&self.index, &self.hasher, &self.elements, &t.0)
    }

    /// Element indices of the generators, in the order given.
    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    /// Generator positions whose product (left to right) is `x`.
    pub fn word(&self, mut x: usize) -> Vec<usize> {
        let mut w = Vec::new();
        while let Some((p, g)) = self.parent[x] {
            w.push(g);
            x = p;
        }
        w.reverse();
        w
    }

    /// `x ∘ y`.
    pub fn mul(&self, x: usize, y: usize) -> usize {
        self.index_of(&self.elements[x].compose(&self.elements[y])).expect("closed under composition")
    }

    pub fn right_edges(&self) -> &[Vec<usize>] {
        &self.right
    }

    pub fn left_edges(&self) -> &[Vec<usize>] {
        &self.left
    }

    fn graph(&self, left: bool) -> DiGraph<(), ()> {
        let mut g = DiGraph::with_capacity(self.len(), self.len() * self.generators.len() * 2);
        for _ in 0..self.len() {
            g.add_node(());
        }
        let mut add = |edges: &[Vec<usize>]| {
            for (x, row) in edges.iter().enumerate() {
                for &y in row {
                    if x != y {
                        g.add_edge(NodeIndex::new(x), NodeIndex::new(y), ());
                    }
                }
            }
        };
        add(&self.right);
        if left {
            add(&self.left);
        }
        g
    }
}

/// True iff `xM = yM` forces `x = y`.
pub fn is_r_trivial(m: &TransformationMonoid) -> bool {
    // xM is the set reachable from x along right edges
    tarjan_scc(&m.graph(false)).iter().all(|c| c.len() == 1)
}

/// Which idempotent of a regular class serves as `e_J`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum IdempotentChoice {
    #[default]
    First,
    Last,
}

/// A maximal subgroup with its multiplication table on positions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Group {
    /// Monoid element indices; the identity comes first.
    pub elements: Vec<usize>,
    pub table: Vec<Vec<usize>>,
}

impl Group {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn position(&self, x: usize) -> Option<usize> {
        self.elements.iter().position(|&y| y == x)
    }

    /// Group given by a Cayley table; position 0 must be the identity.
    pub fn from_table(table: Vec<Vec<usize>>) -> Self {
        Group { elements: (0..table.len()).collect(), table }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JClass {
    /// Element indices, ascending.
    pub members: Vec<usize>,
    pub idempotents: Vec<usize>,
    /// `e_J`, for regular classes.
    pub idempotent: Option<usize>,
    /// `H_J`, the units of `e_J M e_J`.
    pub group: Option<Group>,
}

impl JClass {
    pub fn is_regular(&self) -> bool {
        self.idempotent.is_some()
    }
}

/// J-classes ordered by least member.
///
/// Only comparisons against regular classes are tabulated: every class
/// carries the set of regular classes below it. Other comparisons walk the
/// class graph.
#[derive(Debug, Clone)]
pub struct JStructure {
    pub classes: Vec<JClass>,
    pub class_of: Vec<usize>,
    /// Classes `d < c` reached by one left or right multiplication.
    succ: Vec<Vec<usize>>,
    regular: Vec<usize>,
    /// Regular class ids, lower classes first.
    regular_postorder: Vec<usize>,
    /// Position in `regular`, per class.
    regular_pos: Vec<Option<usize>>,
    /// Regular classes (by position) `≤_J` each class.
    below: Vec<FixedBitSet>,
}

impl JStructure {
    /// Regular class ids in class order.
    pub fn regular(&self) -> &[usize] {
        &self.regular
    }

    /// Class `a ≤_J` class `b`.
    pub fn leq(&self, a: usize, b: usize) -> bool {
        if let Some(pos) = self.regular_pos[a] {
            return self.below[b].contains(pos);
        }
        let mut seen = FixedBitSet::with_capacity(self.classes.len());
        let mut stack = vec![b];
        while let Some(c) = stack.pop() {
            if c == a {
                return true;
            }
            for &d in &self.succ[c] {
                if !seen.put(d) {
                    stack.push(d);
                }
            }
        }
        false
    }

    /// `x ≥_J` class `c`.
    pub fn above(&self, x: usize, c: usize) -> bool {
        self.leq(c, self.class_of[x])
    }

    /// Nonzero `μ(J', J)` over the poset of regular classes, for regular `J`.
    pub fn mobius_below(&self, top: usize) -> Vec<(usize, i64)> {
        let set = &self.below[top];
        // top-down, so every class strictly above z within [z, top] is done;
        // zero values never contribute and are not kept
        let mut mu: Vec<(usize, i64)> = Vec::new();
        for &z in self.regular_postorder.iter().rev() {
            let zp = self.regular_pos[z].expect("regular");
            if !set.contains(zp) {
                continue;
            }
            let value = if z == top {
                1
            } else {
                -mu.iter().filter(|(w, _)| self.below[*w].contains(zp)).map(|(_, m)| m).sum::<i64>()
            };
            if value != 0 {
                mu.push((z, value));
            }
        }
        mu.sort_unstable();
        mu
    }

    /// Strict relations `(lower, upper)` among regular classes.
    pub fn regular_order(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for &hi in &self.regular {
            for lo in self.below[hi].ones() {
                if self.regular[lo] != hi {
                    out.push((self.regular[lo], hi));
                }
            }
        }
        out.sort_unstable();
        out
    }
}

pub fn j_order(m: &TransformationMonoid) -> JStructure {
    j_order_with(m, IdempotentChoice::First)
}

pub fn j_order_with(m: &TransformationMonoid, choice: IdempotentChoice) -> JStructure {
    // tarjan_scc lists components after everything they reach
    let postorder: Vec<Vec<usize>> = tarjan_scc(&m.graph(true))
        .into_iter()
        .map(|c| {
            let mut v: Vec<usize> = c.into_iter().map(|n| n.index()).collect();
            v.sort_unstable();
            v
        })
        .collect();
    let mut ids: Vec<usize> = (0..postorder.len()).collect();
    ids.sort_by_key(|&c| postorder[c][0]);
    let mut rank = vec![0; ids.len()];
    for (c, &old) in ids.iter().enumerate() {
        rank[old] = c;
    }
    let k = ids.len();
    let mut class_of = vec![0; m.len()];
    for (old, members) in postorder.iter().enumerate() {
        for &x in members {
            class_of[x] = rank[old];
        }
    }
    // MxM is everything reachable from x through left and right edges
    let mut succ = vec![Vec::new(); k];
    for x in 0..m.len() {
        for &y in m.right[x].iter().chain(&m.left[x]) {
            if class_of[x] != class_of[y] {
                succ[class_of[x]].push(class_of[y]);
            }
        }
    }
    for s in &mut succ {
        s.sort_unstable();
        s.dedup();
    }
    let classes: Vec<JClass> = ids
        .iter()
        .map(|&old| {
            let members = postorder[old].clone();
            let idempotents: Vec<usize> =
                members.iter().copied().filter(|&x| m.elements[x].is_idempotent()).collect();
            let idempotent = match choice {
                IdempotentChoice::First => idempotents.first().copied(),
                IdempotentChoice::Last => idempotents.last().copied(),
            };
            let group = idempotent.map(|e| maximal_subgroup(m, &members, e));
            JClass { members, idempotents, idempotent, group }
        })
        .collect();
    let regular: Vec<usize> = (0..k).filter(|&c| classes[c].is_regular()).collect();
    let mut regular_pos = vec![None; k];
    for (pos, &c) in regular.iter().enumerate() {
        regular_pos[c] = Some(pos);
    }
    let regular_postorder: Vec<usize> =
        (0..k).map(|old| rank[old]).filter(|&c| regular_pos[c].is_some()).collect();
    let mut below = vec![FixedBitSet::with_capacity(regular.len()); k];
    for old in 0..k {
        let c = rank[old];
        let mut set = FixedBitSet::with_capacity(regular.len());
        if let Some(pos) = regular_pos[c] {
            set.insert(pos);
        }
        for &d in &succ[c] {
            set.union_with(&below[d]);
        }
        below[c] = set;
    }
    JStructure { classes, class_of, succ, regular, regular_postorder, regular_pos, below }
}

/// In a finite monoid `e M e ∩ J_e` is the H-class of `e`.
fn maximal_subgroup(m: &TransformationMonoid, members: &[usize], e: usize) -> Group {
    let mut elements = vec![e];
    elements.extend(members.iter().copied().filter(|&x| x != e && m.mul(m.mul(e, x), e) == x));
    let pos: HashMap<usize, usize> = elements.iter().enumerate().map(|(i, &x)| (x, i)).collect();
    let table = elements
        .iter()
        .map(|&x| elements.iter().map(|&y| pos[&m.mul(x, y)]).collect())
        .collect();
    Group { elements, table }
}
