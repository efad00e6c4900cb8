//! Spectra for forest ⊕ ladder leaf posets: start from a chain-completed
//! forest and split every eigenvalue in two at each broken cover relation.

use crate::error::{Error, Result};
use crate::forest::forest_spectrum;
use crate::linalg::LinForm;
use crate::poset::{decompose_forest_ladder, Label, Poset};
use crate::spectrum::{Spectrum, SpectrumEntry};
use crate::tree::ShelfTree;

/// A cover `a ≺ b` at one shelf (by shelf position).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BreakPair {
    pub shelf: usize,
    pub a: Label,
    pub b: Label,
}

#[derive(Debug, Clone)]
pub struct BreakPlan {
    pub start_tree: ShelfTree,
    pub breaks: Vec<BreakPair>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairClass {
    PropertyA,
    PropertyB,
    Violation,
}

/// Covers `a ⋖ b` such that every other element of their component lies
/// below `a` or above `b`.
pub fn break_pairs(p: &Poset) -> Vec<(Label, Label)> {
    let components = p.components();
    p.covers()
        .iter()
        .copied()
        .filter(|&(a, b)| {
            let comp = components.iter().find(|c| c.contains(&a)).expect("a lies in a component");
            comp.iter().all(|&c| c == a || c == b || p.lt(c, a) || p.lt(b, c))
        })
        .collect()
}

/// Removes the cover `a ≺ b`.
pub fn break_relation(p: &Poset, a: Label, b: Label) -> Result<Poset> {
    if !break_pairs(p).contains(&(a, b)) {
        return Err(Error::PairNotBreakable(a, b, String::new()));
    }
    Ok(p.without_relation(a, b))
}

/// The tree with the pair broken at its shelf.
pub fn break_in_tree(t: &ShelfTree, pair: BreakPair) -> Result<ShelfTree> {
    let p = t.shelf_poset(pair.shelf);
    let node = t.node(t.shelves()[pair.shelf]).id.clone();
    let broken = break_relation(p, pair.a, pair.b).map_err(|_| Error::PairNotBreakable(pair.a, pair.b, node))?;
    t.with_shelf_poset(pair.shelf, broken)
}

/// Replaces every two-element ladder rank `{a, b}` by the chain `a ≺ b`.
/// Returns the completed rooted forest and the pairs to break, bottom-up per
/// component, components by least label.
pub fn chain_completion(p: &Poset) -> Result<(Poset, Vec<(Label, Label)>)> {
    let dec = decompose_forest_ladder(p)?;
    let mut covers: Vec<(Label, Label)> = p.covers().iter().copied().collect();
    let mut breaks = Vec::new();
    for comp in &dec.components {
        for rank in &comp.ranks {
            if let [a, b] = rank[..] {
                covers.push((a, b));
                breaks.push((a, b));
            }
        }
    }
    let completed = Poset::new(p.elements(), &covers)?;
    debug_assert!(completed.is_rooted_forest());
    Ok((completed, breaks))
}

/// Chain-completes every shelf; breaks ordered by shelf, then as in
/// [`chain_completion`].
pub fn break_plan(t: &ShelfTree) -> Result<BreakPlan> {
    let mut start = t.clone();
    let mut breaks = Vec::new();
    for shelf in 0..t.shelves().len() {
        let (completed, pairs) = chain_completion(t.shelf_poset(shelf))?;
        start = start.with_shelf_poset(shelf, completed)?;
        breaks.extend(pairs.into_iter().map(|(a, b)| BreakPair { shelf, a, b }));
    }
    Ok(BreakPlan { start_tree: start, breaks })
}

/// Coefficient patterns of `form` with respect to the pair. `E` ranges over
/// admissible sets missing the pair's shelf.
pub fn classify_pair(form: &LinForm, t: &ShelfTree, pair: BreakPair) -> PairClass {
    let p = t.shelf_poset(pair.shelf);
    let free: Vec<_> = t
        .admissible_sets()
        .into_iter()
        .filter(|e| e.labels().iter().all(|l| !p.contains(*l)))
        .collect();
    let equal = free.iter().all(|e| form.coeff(&e.with(pair.a)) == form.coeff(&e.with(pair.b)));
    if equal {
        return PairClass::PropertyA;
    }
    let below: Vec<Label> = p.elements().iter().copied().filter(|&k| p.le(k, pair.a)).collect();
    let vanish = free.iter().all(|e| below.iter().all(|&k| form.coeff(&e.with(k)) == 0));
    if vanish {
        PairClass::PropertyB
    } else {
        PairClass::Violation
    }
}

/// The companion eigenvalue produced when the pair is broken.
pub fn split_eigenvalue(form: &LinForm, t: &ShelfTree, pair: BreakPair) -> Result<(LinForm, PairClass)> {
    let class = classify_pair(form, t, pair);
    if class == PairClass::Violation {
        return Err(Error::UpsetPropertyViolation { eigenvalue: form.to_string(), a: pair.a, b: pair.b });
    }
    let p = t.shelf_poset(pair.shelf);
    let mut out = LinForm::zero();
    for (e, c) in form.terms() {
        let k = e.labels().iter().copied().find(|l| p.contains(*l));
        match k {
            None => out.add_term(e.clone(), c),
            Some(k) if !p.le(k, pair.a) && !p.le(k, pair.b) => out.add_term(e.clone(), c),
            Some(k) if p.lt(k, pair.a) && class == PairClass::PropertyA => out.add_term(e.clone(), -c),
            Some(k) if k == pair.b && class == PairClass::PropertyB => {
                out.add_term(e.without(pair.b).with(pair.a), c)
            }
            Some(_) => {}
        }
    }
    Ok((out, class))
}

/// Splits each entry into itself and its companion, both with the parent's
/// multiplicity, then merges equal eigenvalues.
pub fn extend_spectrum(spec: &Spectrum, t: &ShelfTree, pair: BreakPair) -> Result<Spectrum> {
    let mut entries = Vec::with_capacity(spec.entries.len() * 2);
    for entry in &spec.entries {
        let (companion, class) = split_eigenvalue(&entry.eigenvalue, t, pair)?;
        let tag = if class == PairClass::PropertyA { "A" } else { "B" };
        entries.push(entry.clone());
        entries.push(SpectrumEntry {
            eigenvalue: companion,
            multiplicity: entry.multiplicity,
            label: format!("{} / break({},{}):{}", entry.label, pair.a, pair.b, tag),
        });
    }
    Ok(Spectrum::new(entries, spec.dimension * 2).merged())
}

/// One step of the ladder pipeline.
#[derive(Debug, Clone)]
pub struct Stage {
    pub tree: ShelfTree,
    pub spectrum: Spectrum,
    /// The pair broken to reach the next stage.
    pub next_break: Option<BreakPair>,
}

/// Forest spectrum of the chain completion followed by every split.
pub fn ladder_stages(t: &ShelfTree) -> Result<Vec<Stage>> {
    let plan = break_plan(t)?;
    let mut tree = plan.start_tree;
    let mut spectrum = forest_spectrum(&tree, false)?;
    let mut stages = Vec::new();
    for &pair in &plan.breaks {
        let next = extend_spectrum(&spectrum, &tree, pair)?;
        let next_tree = break_in_tree(&tree, pair)?;
        stages.push(Stage { tree, spectrum, next_break: Some(pair) });
        tree = next_tree;
        spectrum = next;
    }
    stages.push(Stage { tree, spectrum, next_break: None });
    Ok(stages)
}

pub fn ladder_spectrum(t: &ShelfTree) -> Result<Spectrum> {
    Ok(ladder_stages(t)?.pop().expect("at least one stage").spectrum)
}

/// All break pairs of every shelf of the tree.
pub fn tree_break_pairs(t: &ShelfTree) -> Vec<BreakPair> {
    (0..t.shelves().len())
        .flat_map(|shelf| {
            break_pairs(t.shelf_poset(shelf)).into_iter().map(move |(a, b)| BreakPair { shelf, a, b })
        })
        .collect()
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::parse_linform;
    use crate::tree::TreeSpec;
    use std::collections::BTreeMap;

    fn two_shelf(p5: Poset) -> ShelfTree {
        let spec = TreeSpec {
            root: "7".into(),
            children: [("7".to_string(), vec!["5".to_string(), "6".to_string()])].into_iter().collect(),
        };
        let posets: BTreeMap<String, Poset> =
            [("5".to_string(), p5), ("6".to_string(), Poset::new(&[4], &[]).unwrap())].into_iter().collect();
        ShelfTree::new(&spec, &posets).unwrap()
    }

    fn bowtie() -> Poset {
        Poset::new(&[1, 2, 3, 4, 5], &[(1, 3), (2, 3), (3, 4), (3, 5)]).unwrap()
    }

    const LAMBDA1: &str = "x14 + x24 + x34 + x∅";
    const LAMBDA2: &str = "x14 + x24 + x34 + x1 + x2 + x3 + x4 + x∅";

    #[test]
    fn pairs() {
        let chain_plus = Poset::new(&[1, 2, 3, 4], &[(1, 2), (2, 3)]).unwrap();
        assert_eq!(break_pairs(&chain_plus), vec![(1, 2), (2, 3)]);
        assert!(break_pairs(&Poset::antichain(&[1, 2, 3]).unwrap()).is_empty());
        assert!(break_pairs(&bowtie()).is_empty());
    }

    #[test]
    fn breaking() {
        let chain3 = Poset::new(&[1, 2, 3, 4], &[(1, 2), (2, 3)]).unwrap();
        let broken = break_relation(&chain3, 2, 3).unwrap();
        assert_eq!(broken, Poset::new(&[1, 2, 3, 4], &[(1, 2), (1, 3)]).unwrap());
        let chain2 = Poset::chain(&[1, 2]).unwrap();
        assert_eq!(break_relation(&chain2, 1, 2).unwrap(), Poset::antichain(&[1, 2]).unwrap());
        let anti = Poset::antichain(&[1, 2]).unwrap();
        assert!(matches!(break_relation(&anti, 1, 2), Err(Error::PairNotBreakable(1, 2, _))));
    }

    #[test]
    fn completion() {
        let p5 = Poset::new(&[1, 2, 3], &[(1, 2), (1, 3)]).unwrap();
        let (c, br) = chain_completion(&p5).unwrap();
        assert_eq!(c, Poset::chain(&[1, 2, 3]).unwrap());
        assert_eq!(br, vec![(2, 3)]);

        let tree = Poset::new(&[1, 2, 3], &[(1, 3), (2, 3)]).unwrap();
        assert_eq!(chain_completion(&tree).unwrap(), (tree.clone(), vec![]));

        let (c, br) = chain_completion(&bowtie()).unwrap();
        assert_eq!(c, Poset::chain(&[1, 2, 3, 4, 5]).unwrap());
        assert_eq!(br, vec![(1, 2), (4, 5)]);
        let mut back = c;
        for (a, b) in br {
            back = break_relation(&back, a, b).unwrap();
        }
        assert_eq!(back, bowtie());
    }

    #[test]
    fn classification() {
        let t = two_shelf(Poset::chain(&[1, 2, 3]).unwrap());
        let pair = BreakPair { shelf: 0, a: 2, b: 3 };
        for f in [LAMBDA1, LAMBDA2] {
            assert_eq!(classify_pair(&parse_linform(f).unwrap(), &t, pair), PairClass::PropertyA);
        }
        assert_eq!(classify_pair(&LinForm::zero(), &t, pair), PairClass::PropertyA);
        let bad = parse_linform("x2 + x1").unwrap();
        assert_eq!(classify_pair(&bad, &t, pair), PairClass::Violation);
        let b_only = parse_linform("x3 + x∅").unwrap();
        assert_eq!(classify_pair(&b_only, &t, pair), PairClass::PropertyB);
    }

    #[test]
    fn worked_split() {
        let t = two_shelf(Poset::chain(&[1, 2, 3]).unwrap());
        let pair = BreakPair { shelf: 0, a: 2, b: 3 };
        let (l1, _) = split_eigenvalue(&parse_linform(LAMBDA1).unwrap(), &t, pair).unwrap();
        assert_eq!(l1, parse_linform("-x14 + x∅").unwrap());
        let (l2, _) = split_eigenvalue(&parse_linform(LAMBDA2).unwrap(), &t, pair).unwrap();
        assert_eq!(l2, parse_linform("x4 + x∅ - x1 - x14").unwrap());
    }

    #[test]
    fn vee_pair_ladder_spectrum() {
        let t = two_shelf(Poset::new(&[1, 2, 3], &[(1, 2), (1, 3)]).unwrap());
        let s = ladder_spectrum(&t).unwrap();
        let expected: BTreeMap<LinForm, u64> = [
            LAMBDA1,
            "-x14 + x∅",
            LAMBDA2,
            "-x1 - x14 + x4 + x∅",
        ]
        .iter()
        .map(|f| (parse_linform(f).unwrap(), 1))
        .collect();
        assert_eq!(s.multiset(), expected);
        assert_eq!(s.dimension, 4);
    }

    #[test]
    fn degenerate_split_merges() {
        // a shelf the eigenvalue does not touch: companion equals the parent
        let t = two_shelf(Poset::chain(&[1, 2, 3]).unwrap());
        let s = Spectrum::new(
            vec![SpectrumEntry { eigenvalue: parse_linform("x4 + x∅").unwrap(), multiplicity: 1, label: "s".into() }],
            1,
        );
        let out = extend_spectrum(&s, &t, BreakPair { shelf: 0, a: 2, b: 3 }).unwrap();
        assert_eq!(out.entries.len(), 1);
        assert_eq!(out.entries[0].multiplicity, 2);
    }

    #[test]
    fn forest_trees_have_empty_plans() {
        let t = two_shelf(Poset::new(&[1, 2, 3], &[(1, 2)]).unwrap());
        let plan = break_plan(&t).unwrap();
        assert!(plan.breaks.is_empty());
        assert_eq!(ladder_spectrum(&t).unwrap(), forest_spectrum(&t, false).unwrap());
    }
}
