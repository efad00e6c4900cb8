//! Instance generators shared by the integration tests.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use shelfwalk::poset::{poset_sum, SumKind};
use shelfwalk::tree::TreeSpec;
use shelfwalk::{Label, Poset, ShelfTree};

/// Largest state count in the corpora.
pub const MAX_STATES: u128 = 200;

/// Canonical string of the tree hanging below `v` (children = lower covers).
fn encode(v: usize, parent: &[Option<usize>]) -> String {
    let mut kids: Vec<String> =
        (0..parent.len()).filter(|&c| parent[c] == Some(v)).map(|c| encode(c, parent)).collect();
    kids.sort();
    format!("({})", kids.concat())
}

/// All rooted forests (every element has at most one upper cover) with
/// `1..=max` elements up to isomorphism, labelled `1..=n` naturally.
pub fn forests(max: usize) -> Vec<Poset> {
    let mut out = Vec::new();
    for n in 1..=max {
        let mut seen = BTreeSet::new();
        // element i's parent is a larger element or nothing
        let choices: Vec<Vec<Option<usize>>> =
            (0..n).map(|i| std::iter::once(None).chain((i + 1..n).map(Some)).collect()).collect();
        let mut idx = vec![0usize; n];
        loop {
            let parent: Vec<Option<usize>> = (0..n).map(|i| choices[i][idx[i]]).collect();
            let mut roots: Vec<String> =
                (0..n).filter(|&i| parent[i].is_none()).map(|r| encode(r, &parent)).collect();
            roots.sort();
            if seen.insert(roots.concat()) {
                let elements: Vec<Label> = (1..=n as Label).collect();
                let covers: Vec<(Label, Label)> = (0..n)
                    .filter_map(|i| parent[i].map(|p| (i as Label + 1, p as Label + 1)))
                    .collect();
                out.push(Poset::new(&elements, &covers).expect("parents carry larger labels"));
            }
            // odometer
            let mut k = 0;
            while k < n {
                idx[k] += 1;
                if idx[k] < choices[k].len() {
                    break;
                }
                idx[k] = 0;
                k += 1;
            }
            if k == n {
                break;
            }
        }
    }
    out
}

/// Shifts every label by `offset`.
pub fn relabel(p: &Poset, offset: Label) -> Poset {
    let elements: Vec<Label> = p.elements().iter().map(|l| l + offset).collect();
    let covers: Vec<(Label, Label)> = p.covers().iter().map(|(a, b)| (a + offset, b + offset)).collect();
    Poset::new(&elements, &covers).expect("shift keeps the labeling natural")
}

/// Ranks of sizes 1 or 2 stacked on top of each other.
pub fn ladder(levels: &[usize]) -> Poset {
    let mut next = 1;
    let mut elements = Vec::new();
    let mut covers = Vec::new();
    let mut below: Vec<Label> = Vec::new();
    for &size in levels {
        let level: Vec<Label> = (next..next + size as Label).collect();
        next += size as Label;
        for &a in &below {
            for &b in &level {
                covers.push((a, b));
            }
        }
        elements.extend(&level);
        below = level;
    }
    Poset::new(&elements, &covers).expect("levels are labelled bottom-up")
}

/// Forest ⊕ ladder leaf posets: a forest of at most three elements (or
/// nothing) below a ladder of rank ≤ 3 with at least one rank of size 2,
/// optionally beside a small extra component.
pub fn ladder_posets() -> Vec<Poset> {
    let mut levels: Vec<Vec<usize>> = Vec::new();
    for r in 1..=3 {
        for code in 0..(1 << r) {
            let l: Vec<usize> = (0..r).map(|i| 1 + ((code >> i) & 1)).collect();
            if l.contains(&2) {
                levels.push(l);
            }
        }
    }
    let mut bottoms: Vec<Option<Poset>> = vec![None];
    bottoms.extend(forests(3).into_iter().map(Some));
    let extras = [None, Some(Poset::chain(&[1]).unwrap()), Some(Poset::chain(&[1, 2]).unwrap())];
    let mut out = Vec::new();
    for l in &levels {
        for bottom in &bottoms {
            let core = match bottom {
                None => ladder(l),
                Some(f) => poset_sum(f, &relabel(&ladder(l), f.len() as Label), SumKind::Ordinal).unwrap(),
            };
            for extra in &extras {
                let p = match extra {
                    None => core.clone(),
                    Some(e) => poset_sum(&core, &relabel(e, core.len() as Label), SumKind::Direct).unwrap(),
                };
                if p.count_linear_extensions() <= MAX_STATES {
                    out.push(p);
                }
            }
        }
    }
    out
}

/// Inner-tree shapes as (children map, shelf ids, root).
fn shapes(shelves: usize) -> Vec<(&'static str, Vec<(&'static str, Vec<&'static str>)>, Vec<&'static str>)> {
    match shelves {
        1 => vec![
            ("flat", vec![("a", vec![])], vec!["a"]),
            ("stem", vec![("r", vec!["a"])], vec!["a"]),
            ("stem2", vec![("r", vec!["u"]), ("u", vec!["a"])], vec!["a"]),
        ],
        _ => vec![
            ("fork", vec![("r", vec!["a", "b"])], vec!["a", "b"]),
            ("stemfork", vec![("r", vec!["u"]), ("u", vec!["a", "b"])], vec!["a", "b"]),
            ("twostems", vec![("r", vec!["u", "v"]), ("u", vec!["a"]), ("v", vec!["b"])], vec!["a", "b"]),
        ],
    }
}

/// Assembles a tree; labels of later shelves are shifted past earlier ones.
pub fn build(children: &[(&str, Vec<&str>)], shelves: &[&str], posets: &[&Poset]) -> ShelfTree {
    let spec = TreeSpec {
        root: children[0].0.to_string(),
        children: children
            .iter()
            .map(|(v, cs)| (v.to_string(), cs.iter().map(|c| c.to_string()).collect()))
            .collect(),
    };
    let mut offset = 0;
    let mut map = BTreeMap::new();
    for (id, p) in shelves.iter().zip(posets) {
        map.insert(id.to_string(), relabel(p, offset));
        offset += p.len() as Label;
    }
    ShelfTree::new(&spec, &map).expect("corpus trees are well formed")
}

fn describe(p: &Poset) -> String {
    let covers: Vec<String> = p.covers().iter().map(|(a, b)| format!("{a}<{b}")).collect();
    format!("{}[{}]", p.len(), covers.join(" "))
}

/// Every shape with one shelf per poset in `singles`, and every shape with
/// two shelves over unordered pairs `(first, second)`, kept when `N ≤ 200`.
fn corpus(singles: &[Poset], firsts: &[Poset], seconds: &[Poset]) -> Vec<(String, ShelfTree)> {
    let mut out = Vec::new();
    for (name, children, shelves) in shapes(1) {
        for p in singles {
            let t = build(&children, &shelves, &[p]);
            if t.state_count() <= MAX_STATES {
                out.push((format!("{name} {}", describe(p)), t));
            }
        }
    }
    for (name, children, shelves) in shapes(2) {
        for (i, p) in firsts.iter().enumerate() {
            for (j, q) in seconds.iter().enumerate() {
                if std::ptr::eq(firsts, seconds) && j < i {
                    continue;
                }
                let t = build(&children, &shelves, &[p, q]);
                if t.state_count() <= MAX_STATES {
                    out.push((format!("{name} {} {}", describe(p), describe(q)), t));
                }
            }
        }
    }
    out
}

/// Forest leaf posets with at most five elements on one or two shelves.
pub fn forest_corpus() -> Vec<(String, ShelfTree)> {
    let fs = forests(5);
    corpus(&fs, &fs, &fs)
}

/// Forest ⊕ ladder leaf posets on one shelf, or beside a small forest.
pub fn ladder_corpus() -> Vec<(String, ShelfTree)> {
    let ls = ladder_posets();
    corpus(&ls, &ls, &forests(2))
}

/// `7 → 5, 6` with `P_6 = {4}`.
pub fn two_shelf(p5: Poset) -> ShelfTree {
    let spec = TreeSpec {
        root: "7".into(),
        children: [("7".to_string(), vec!["5".to_string(), "6".to_string()])].into_iter().collect(),
    };
    let posets: BTreeMap<String, Poset> =
        [("5".to_string(), p5), ("6".to_string(), Poset::new(&[4], &[]).unwrap())].into_iter().collect();
    ShelfTree::new(&spec, &posets).unwrap()
}

pub fn bowtie() -> Poset {
    Poset::new(&[1, 2, 3, 4, 5], &[(1, 3), (2, 3), (3, 4), (3, 5)]).unwrap()
}

pub fn forest_pair() -> ShelfTree {
    two_shelf(Poset::new(&[1, 2, 3], &[(1, 2)]).unwrap())
}

pub fn chain_pair() -> ShelfTree {
    two_shelf(Poset::chain(&[1, 2, 3]).unwrap())
}

pub fn vee_pair() -> ShelfTree {
    two_shelf(Poset::new(&[1, 2, 3], &[(1, 2), (1, 3)]).unwrap())
}
