//! Finite naturally-labeled posets.
//!
//! Elements are positive integer labels kept in ascending order; the strict
//! order is stored as a dense boolean matrix over element positions. Every
//! enumeration in this module (linear extensions, upsets, components) has a
//! fixed canonical order because state indexing downstream relies on it.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Label = u32;

/// A finite partial order on positive integer labels with a natural labeling.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poset {
    elements: Vec<Label>,
    covers: BTreeSet<(Label, Label)>,
    /// `less[i][j]` iff `elements[i] ≺ elements[j]`.
    less: Vec<Vec<bool>>,
}

/// JSON form: `{"elements":[...], "covers":[[a,b], ...]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PosetSpec {
    pub elements: Vec<Label>,
    #[serde(default)]
    pub covers: Vec<(Label, Label)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SumKind {
    Direct,
    Ordinal,
}

impl fmt::Debug for Poset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poset({:?}; {:?})", self.elements, self.covers)
    }
}

impl Poset {
    /// Validates `elements` and `covers` and reduces the covers to the Hasse
    /// diagram. Redundant (transitively implied) covers are dropped silently.
    pub fn new(elements: &[Label], covers: &[(Label, Label)]) -> Result<Self> {
        let mut sorted = elements.to_vec();
        sorted.sort_unstable();
        for w in sorted.windows(2) {
            if w[0] == w[1] {
                return Err(Error::DuplicateLabel(w[0]));
            }
        }
        if let Some(&0) = sorted.first() {
            return Err(Error::InvalidLabel(0));
        }
        let n = sorted.len();
        let pos = |l: Label| sorted.binary_search(&l).map_err(|_| Error::UnknownLabel(l));
        let mut adj = vec![Vec::new(); n];
        for &(a, b) in covers {
            let (i, j) = (pos(a)?, pos(b)?);
            if i == j {
                return Err(Error::CycleError(a));
            }
            adj[i].push(j);
        }
        if let Some(i) = find_cycle(&adj) {
            return Err(Error::CycleError(sorted[i]));
        }
        let mut less = vec![vec![false; n]; n];
        for (i, out) in adj.iter().enumerate() {
            for &j in out {
                less[i][j] = true;
            }
        }
        for k in 0..n {
            for i in 0..n {
                if less[i][k] {
                    for j in 0..n {
                        if less[k][j] {
                            less[i][j] = true;
                        }
                    }
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                if less[i][j] && sorted[i] > sorted[j] {
                    return Err(Error::LabelingError(sorted[i], sorted[j]));
                }
            }
        }
        Ok(Self::from_order(sorted, less))
    }

    pub fn from_spec(spec: &PosetSpec) -> Result<Self> {
        Self::new(&spec.elements, &spec.covers)
    }

    pub fn to_spec(&self) -> PosetSpec {
        PosetSpec {
            elements: self.elements.clone(),
            covers: self.covers.iter().copied().collect(),
        }
    }

    /// An antichain on the given labels.
    pub fn antichain(elements: &[Label]) -> Result<Self> {
        Self::new(elements, &[])
    }

    /// The chain `elements[0] ≺ elements[1] ≺ ...`.
    pub fn chain(elements: &[Label]) -> Result<Self> {
        let covers: Vec<_> = elements.windows(2).map(|w| (w[0], w[1])).collect();
        Self::new(elements, &covers)
    }

    /// Builds from a transitively closed strict order.
    fn from_order(elements: Vec<Label>, less: Vec<Vec<bool>>) -> Self {
        let n = elements.len();
        let mut covers = BTreeSet::new();
        for i in 0..n {
            for j in 0..n {
                if less[i][j] && !(0..n).any(|k| less[i][k] && less[k][j]) {
                    covers.insert((elements[i], elements[j]));
                }
            }
        }
        Poset { elements, covers, less }
    }

    pub fn elements(&self) -> &[Label] {
        &self.elements
    }

    pub fn covers(&self) -> &BTreeSet<(Label, Label)> {
        &self.covers
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, label: Label) -> bool {
        self.index_of(label).is_some()
    }

    pub fn index_of(&self, label: Label) -> Option<usize> {
        self.elements.binary_search(&label).ok()
    }

    fn idx(&self, label: Label) -> usize {
        self.index_of(label)
            .unwrap_or_else(|| panic!("label {label} not in poset"))
    }

    /// Strict order `a ≺ b`. Panics on labels outside the poset.
    pub fn lt(&self, a: Label, b: Label) -> bool {
        self.less[self.idx(a)][self.idx(b)]
    }

    pub fn le(&self, a: Label, b: Label) -> bool {
        a == b || self.lt(a, b)
    }

    pub fn comparable(&self, a: Label, b: Label) -> bool {
        self.le(a, b) || self.le(b, a)
    }

    /// Upper covers of `a`.
    pub fn successors(&self, a: Label) -> Vec<Label> {
        self.covers.iter().filter(|c| c.0 == a).map(|c| c.1).collect()
    }

    /// Lower covers of `a`.
    pub fn predecessors(&self, a: Label) -> Vec<Label> {
        self.covers.iter().filter(|c| c.1 == a).map(|c| c.0).collect()
    }

    pub fn maximal_elements(&self) -> Vec<Label> {
        self.elements
            .iter()
            .copied()
            .filter(|&a| self.successors(a).is_empty())
            .collect()
    }

    pub fn minimal_elements(&self) -> Vec<Label> {
        self.elements
            .iter()
            .copied()
            .filter(|&a| self.predecessors(a).is_empty())
            .collect()
    }

    /// True iff every element has at most one successor.
    pub fn is_rooted_forest(&self) -> bool {
        self.elements.iter().all(|&a| self.successors(a).len() <= 1)
    }

    /// The induced subposet on `subset` (labels outside the poset are ignored).
    pub fn induced(&self, subset: &BTreeSet<Label>) -> Poset {
        let keep: Vec<usize> = (0..self.len())
            .filter(|&i| subset.contains(&self.elements[i]))
            .collect();
        let elements = keep.iter().map(|&i| self.elements[i]).collect();
        let less = keep
            .iter()
            .map(|&i| keep.iter().map(|&j| self.less[i][j]).collect())
            .collect();
        Self::from_order(elements, less)
    }

    /// Removes the single relation `a ≺ b`. Only meaningful when the result is
    /// still transitive, which holds whenever `a ≺ b` is a cover.
    pub(crate) fn without_relation(&self, a: Label, b: Label) -> Poset {
        let mut less = self.less.clone();
        less[self.idx(a)][self.idx(b)] = false;
        Self::from_order(self.elements.clone(), less)
    }

    pub fn is_linear_extension(&self, seq: &[Label]) -> bool {
        if seq.len() != self.len() {
            return false;
        }
        let mut seen = vec![false; self.len()];
        let mut positions = Vec::with_capacity(seq.len());
        for &l in seq {
            match self.index_of(l) {
                Some(i) if !seen[i] => {
                    seen[i] = true;
                    positions.push(i);
                }
                _ => return false,
            }
        }
        for (p, &i) in positions.iter().enumerate() {
            for &j in &positions[..p] {
                if self.less[i][j] {
                    return false;
                }
            }
        }
        true
    }

    /// All linear extensions in lexicographic order.
    pub fn linear_extensions(&self) -> Vec<Vec<Label>> {
        let n = self.len();
        let mut out = Vec::new();
        let mut placed = vec![false; n];
        let mut current = Vec::with_capacity(n);
        self.extend_rec(&mut placed, &mut current, &mut out);
        out
    }

    fn extend_rec(&self, placed: &mut [bool], current: &mut Vec<Label>, out: &mut Vec<Vec<Label>>) {
        let n = self.len();
        if current.len() == n {
            out.push(current.clone());
            return;
        }
        for i in 0..n {
            if placed[i] || (0..n).any(|j| !placed[j] && self.less[j][i]) {
                continue;
            }
            placed[i] = true;
            current.push(self.elements[i]);
            self.extend_rec(placed, current, out);
            current.pop();
            placed[i] = false;
        }
    }

    /// Number of linear extensions, by dynamic programming over downsets.
    pub fn count_linear_extensions(&self) -> u128 {
        let n = self.len();
        assert!(n <= 128, "counting is limited to 128 elements");
        let below: Vec<u128> = (0..n)
            .map(|i| (0..n).filter(|&j| self.less[j][i]).fold(0u128, |m, j| m | (1 << j)))
            .collect();
        let mut memo: HashMap<u128, u128> = HashMap::new();
        fn go(placed: u128, n: usize, below: &[u128], memo: &mut HashMap<u128, u128>) -> u128 {
            if placed.count_ones() as usize == n {
                return 1;
            }
            if let Some(&v) = memo.get(&placed) {
                return v;
            }
            let mut total = 0;
            for i in 0..n {
                if placed & (1 << i) == 0 && below[i] & !placed == 0 {
                    total += go(placed | (1 << i), n, below, memo);
                }
            }
            memo.insert(placed, total);
            total
        }
        go(0, n, &below, &mut memo)
    }

    pub fn is_upset(&self, set: &BTreeSet<Label>) -> bool {
        set.iter().all(|&x| {
            self.contains(x)
                && self
                    .elements
                    .iter()
                    .all(|&y| !self.lt(x, y) || set.contains(&y))
        })
    }

    /// All upsets ordered by size, then lexicographically.
    pub fn upsets(&self) -> Vec<BTreeSet<Label>> {
        let n = self.len();
        let mut out = Vec::new();
        let mut chosen = vec![false; n];
        // Descending label order visits every element after everything above it.
        fn go(p: &Poset, k: usize, chosen: &mut Vec<bool>, out: &mut Vec<BTreeSet<Label>>) {
            if k == 0 {
                out.push(
                    (0..p.len())
                        .filter(|&i| chosen[i])
                        .map(|i| p.elements[i])
                        .collect(),
                );
                return;
            }
            let i = k - 1;
            go(p, i, chosen, out);
            if (0..p.len()).all(|j| !p.less[i][j] || chosen[j]) {
                chosen[i] = true;
                go(p, i, chosen, out);
                chosen[i] = false;
            }
        }
        go(self, n, &mut chosen, &mut out);
        out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.iter().cmp(b.iter())));
        out
    }

    /// Connected components of the comparability graph, each sorted, ordered
    /// by smallest label.
    pub fn components(&self) -> Vec<Vec<Label>> {
        let n = self.len();
        let mut comp = vec![usize::MAX; n];
        let mut out: Vec<Vec<Label>> = Vec::new();
        for start in 0..n {
            if comp[start] != usize::MAX {
                continue;
            }
            let id = out.len();
            let mut stack = vec![start];
            comp[start] = id;
            let mut members = Vec::new();
            while let Some(i) = stack.pop() {
                members.push(self.elements[i]);
                for j in 0..n {
                    if comp[j] == usize::MAX && (self.less[i][j] || self.less[j][i]) {
                        comp[j] = id;
                        stack.push(j);
                    }
                }
            }
            members.sort_unstable();
            out.push(members);
        }
        out
    }
}

fn find_cycle(adj: &[Vec<usize>]) -> Option<usize> {
    // 0 = unvisited, 1 = on stack, 2 = done
    let n = adj.len();
    let mut state = vec![0u8; n];
    for s in 0..n {
        if state[s] != 0 {
            continue;
        }
        let mut stack = vec![(s, 0usize)];
        state[s] = 1;
        while let Some(&mut (v, ref mut next)) = stack.last_mut() {
            if *next < adj[v].len() {
                let w = adj[v][*next];
                *next += 1;
                match state[w] {
                    0 => {
                        state[w] = 1;
                        stack.push((w, 0));
                    }
                    1 => return Some(w),
                    _ => {}
                }
            } else {
                state[v] = 2;
                stack.pop();
            }
        }
    }
    None
}

/// Direct or ordinal sum of two posets on disjoint labels.
pub fn poset_sum(p: &Poset, q: &Poset, kind: SumKind) -> Result<Poset> {
    if let Some(&l) = p.elements.iter().find(|l| q.contains(**l)) {
        return Err(Error::LabelClash(l));
    }
    let mut elements = p.elements.clone();
    elements.extend_from_slice(&q.elements);
    let mut covers: Vec<(Label, Label)> = p.covers.iter().chain(q.covers.iter()).copied().collect();
    if kind == SumKind::Ordinal {
        if let (Some(&pmax), Some(&qmin)) = (p.elements.last(), q.elements.first()) {
            if pmax > qmin {
                return Err(Error::LabelingError(pmax, qmin));
            }
        }
        for a in p.maximal_elements() {
            for b in q.minimal_elements() {
                covers.push((a, b));
            }
        }
    }
    Poset::new(&elements, &covers)
}

// ---------------------------------------------------------------------------
// Möbius functions on finite posets.

/// A finite poset given by index-based comparisons.
pub trait FinitePoset {
    fn size(&self) -> usize;
    /// Non-strict order on indices.
    fn leq(&self, x: usize, y: usize) -> bool;
}

/// `μ(x, y)` by the defining recursion, memoized over the interval.
pub fn mobius<P: FinitePoset + ?Sized>(p: &P, x: usize, y: usize) -> Result<i64> {
    if !p.leq(x, y) {
        return Err(Error::NotComparable);
    }
    let mut memo: HashMap<usize, i64> = HashMap::new();
    Ok(mobius_rec(p, x, y, &mut memo))
}

fn mobius_rec<P: FinitePoset + ?Sized>(p: &P, x: usize, y: usize, memo: &mut HashMap<usize, i64>) -> i64 {
    if x == y {
        return 1;
    }
    if let Some(&v) = memo.get(&y) {
        return v;
    }
    let mut sum = 0;
    for z in 0..p.size() {
        if z != y && p.leq(x, z) && p.leq(z, y) {
            sum += mobius_rec(p, x, z, memo);
        }
    }
    memo.insert(y, -sum);
    -sum
}

/// `μ(z, top)` for every `z ≤ top`; `None` elsewhere.
pub fn mobius_to<P: FinitePoset + ?Sized>(p: &P, top: usize) -> Vec<Option<i64>> {
    let n = p.size();
    let mut below: Vec<usize> = (0..n).filter(|&z| p.leq(z, top)).collect();
    // Larger down-interval first is a reverse topological order.
    let down = |z: usize| (0..n).filter(|&w| p.leq(w, z)).count();
    below.sort_by_key(|&z| std::cmp::Reverse(down(z)));
    let mut out = vec![None; n];
    for &z in &below {
        if z == top {
            out[z] = Some(1);
            continue;
        }
        let sum: i64 = below
            .iter()
            .filter(|&&w| w != z && p.leq(z, w))
            .map(|&w| out[w].expect("visited in order"))
            .sum();
        out[z] = Some(-sum);
    }
    out
}

/// The lattice of upsets of a poset, ordered by inclusion.
#[derive(Debug, Clone)]
pub struct UpsetLattice {
    pub upsets: Vec<BTreeSet<Label>>,
    /// `mobius_table[i][j] = μ(upsets[i], upsets[j])`, zero when `i ⊄ j`.
    pub mobius_table: Vec<Vec<i64>>,
}

impl FinitePoset for UpsetLattice {
    fn size(&self) -> usize {
        self.upsets.len()
    }

    fn leq(&self, x: usize, y: usize) -> bool {
        self.upsets[x].is_subset(&self.upsets[y])
    }
}

impl UpsetLattice {
    pub fn index_of(&self, set: &BTreeSet<Label>) -> Option<usize> {
        self.upsets.iter().position(|u| u == set)
    }

    pub fn mobius(&self, x: &BTreeSet<Label>, y: &BTreeSet<Label>) -> Result<i64> {
        let i = self.index_of(x).ok_or_else(|| Error::NotAnUpset(fmt_set(x)))?;
        let j = self.index_of(y).ok_or_else(|| Error::NotAnUpset(fmt_set(y)))?;
        if !self.leq(i, j) {
            return Err(Error::NotComparable);
        }
        Ok(self.mobius_table[i][j])
    }
}

pub fn upset_lattice(p: &Poset) -> UpsetLattice {
    let upsets = p.upsets();
    let n = upsets.len();
    let mut lattice = UpsetLattice { upsets, mobius_table: vec![vec![0; n]; n] };
    for x in 0..n {
        let mut memo = HashMap::new();
        for y in 0..n {
            if lattice.leq(x, y) {
                lattice.mobius_table[x][y] = mobius_rec(&lattice, x, y, &mut memo);
            }
        }
    }
    lattice
}

/// `d_S = Σ_{S' ⊇ S} μ(S, S') · |L(P ∖ S')|` over upsets `S'`.
pub fn derangement_number(p: &Poset, s: &BTreeSet<Label>) -> Result<i64> {
    if !p.is_upset(s) {
        return Err(Error::NotAnUpset(fmt_set(s)));
    }
    let lattice = upset_lattice(p);
    let i = lattice.index_of(s).expect("upset is enumerated");
    Ok(derangement_from(p, &lattice, i))
}

/// Derangement numbers for every upset, aligned with `lattice.upsets`.
pub fn derangement_numbers(p: &Poset, lattice: &UpsetLattice) -> Vec<i64> {
    (0..lattice.size()).map(|i| derangement_from(p, lattice, i)).collect()
}

fn derangement_from(p: &Poset, lattice: &UpsetLattice, i: usize) -> i64 {
    let all: BTreeSet<Label> = p.elements().iter().copied().collect();
    let mut total: i128 = 0;
    for j in 0..lattice.size() {
        let mu = lattice.mobius_table[i][j];
        if mu == 0 || !lattice.leq(i, j) {
            continue;
        }
        let rest: BTreeSet<Label> = all.difference(&lattice.upsets[j]).copied().collect();
        total += mu as i128 * p.induced(&rest).count_linear_extensions() as i128;
    }
    total as i64
}

pub(crate) fn fmt_set(s: &BTreeSet<Label>) -> String {
    let parts: Vec<String> = s.iter().map(|l| l.to_string()).collect();
    format!("{{{}}}", parts.join(","))
}

// ---------------------------------------------------------------------------
// Forest ⊕ ladder decomposition.

/// One connected component written as `forest_part ⊕ rank₁ ⊕ ... ⊕ rank_m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LadderComponent {
    pub forest_part: Poset,
    /// Antichains of size 1 or 2, bottom to top.
    pub ranks: Vec<Vec<Label>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LadderDecomposition {
    pub components: Vec<LadderComponent>,
}

impl LadderDecomposition {
    /// Rebuilds the poset through ordinal and direct sums.
    pub fn reassemble(&self) -> Result<Poset> {
        let mut total = Poset::antichain(&[])?;
        for c in &self.components {
            let mut part = c.forest_part.clone();
            for rank in &c.ranks {
                part = poset_sum(&part, &Poset::antichain(rank)?, SumKind::Ordinal)?;
            }
            total = poset_sum(&total, &part, SumKind::Direct)?;
        }
        Ok(total)
    }
}

/// Splits every component into a rooted-forest lower part and a ladder above
/// it. A component that is already a rooted tree is kept whole with no ranks;
/// otherwise ranks are peeled from the top for as long as possible and the
/// remainder must be a rooted forest.
pub fn decompose_forest_ladder(p: &Poset) -> Result<LadderDecomposition> {
    let mut components = Vec::new();
    for comp in p.components() {
        let set: BTreeSet<Label> = comp.iter().copied().collect();
        let sub = p.induced(&set);
        if sub.is_rooted_forest() {
            components.push(LadderComponent { forest_part: sub, ranks: Vec::new() });
            continue;
        }
        let mut rest = set;
        let mut ranks = Vec::new();
        loop {
            if rest.is_empty() {
                break;
            }
            let current = p.induced(&rest);
            let top = current.maximal_elements();
            let below_all = rest
                .iter()
                .filter(|x| !top.contains(x))
                .all(|&x| top.iter().all(|&t| p.lt(x, t)));
            if top.len() > 2 || !below_all {
                break;
            }
            for t in &top {
                rest.remove(t);
            }
            ranks.push(top);
        }
        ranks.reverse();
        let forest_part = p.induced(&rest);
        if !forest_part.is_rooted_forest() {
            return Err(Error::NotDecomposable(comp[0]));
        }
        components.push(LadderComponent { forest_part, ranks });
    }
    Ok(LadderDecomposition { components })
}
