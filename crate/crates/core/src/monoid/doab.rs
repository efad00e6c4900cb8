//! Spectra for leaf posets in the forest⊕ladder class, read off the
//! representation theory of `M_{v1} × ⋯ × M_{vk} × Part^ord`.
//!
//! Both the eigenvalue sum and the multiplicity sum factor over the
//! components: characters, Möbius functions of product posets and fixed-point
//! counts on `L(T) = Π L(P_v) × Π S(C_v)` are all products. Each factor is
//! evaluated on its own monoid and the results multiplied.

use itertools::Itertools;
use serde::Serialize;

use super::characters::angle_strings;
use super::{
    characters, fix_count, generate_monoid, is_r_trivial, j_order_with, Character, IdempotentChoice, JStructure,
    Transformation, TransformationMonoid,
};
use crate::error::{Error, Result};
use crate::linalg::LinForm;
use crate::poset::{mobius_to, FinitePoset, Poset};
use crate::shuffle::{hat_promotion_table, move_tables, osp_compose, pop_shuffle, OrderedSetPartition};
use crate::spectrum::{Spectrum, SpectrumEntry};
use crate::tree::{set_partitions, LeafSet, ShelfTree};

const TOLERANCE: f64 = 1e-9;

/// `M_v`: generated by `∂̂_∅` and `∂̂_j` for each element `j` in order, acting
/// on the lexicographic list of linear extensions.
pub fn shelf_monoid(p: &Poset, cap: usize) -> Result<TransformationMonoid> {
    let exts = p.linear_extensions();
    let mut gens = vec![Transformation::identity(exts.len())];
    for &j in p.elements() {
        gens.push(Transformation::from_indices(&hat_promotion_table(p, &exts, j))?);
    }
    generate_monoid(&gens, cap)
}

/// `M^T`: generated by the moves `∂̂_E`, `E ∈ A(L)`, on `L(T)`.
pub fn full_monoid(t: &ShelfTree, cap: usize) -> Result<TransformationMonoid> {
    let ss = t.state_space();
    let tables = move_tables(t, &ss, &t.admissible_sets())?;
    let gens = tables.iter().map(|m| Transformation::from_indices(m)).collect::<Result<Vec<_>>>()?;
    generate_monoid(&gens, cap)
}

/// Set partitions of `0..n` under refinement, finer below.
struct Refinement(Vec<Vec<Vec<usize>>>);

fn refines(fine: &[Vec<usize>], coarse: &[Vec<usize>]) -> bool {
    fine.iter().all(|b| coarse.iter().any(|c| b.iter().all(|x| c.contains(x))))
}

impl FinitePoset for Refinement {
    fn size(&self) -> usize {
        self.0.len()
    }
    fn leq(&self, x: usize, y: usize) -> bool {
        refines(&self.0[x], &self.0[y])
    }
}

struct Factor {
    monoid: TransformationMonoid,
    j: JStructure,
    regular: Vec<usize>,
    /// Indexed by class id; empty for non-regular classes.
    characters: Vec<Vec<Character>>,
    /// Multiplicity per class id and character, as for `characters`.
    multiplicities: Vec<Vec<(f64, f64)>>,
}

impl Factor {
    fn new(p: &Poset, choice: IdempotentChoice) -> Result<Self> {
        let monoid = shelf_monoid(p, super::DEFAULT_CAP)?;
        let j = j_order_with(&monoid, choice);
        let regular = j.regular().to_vec();
        let characters = j
            .classes
            .iter()
            .map(|c| c.group.as_ref().map_or(Ok(vec![]), characters))
            .collect::<Result<Vec<_>>>()?;
        let mut f = Factor { monoid, j, regular, characters, multiplicities: vec![] };
        f.multiplicities = (0..f.j.classes.len())
            .map(|c| {
                if !f.j.classes[c].is_regular() {
                    return vec![];
                }
                let fixed = f.fixed_sums(c);
                f.characters[c].iter().map(|chi| Self::multiplicity(&fixed, chi)).collect()
            })
            .collect();
        Ok(f)
    }

    /// Element acting as `∂̂` for a shelf choice.
    fn move_element(&self, p: &Poset, pick: Option<u32>) -> usize {
        let g = match pick {
            None => 0,
            Some(l) => 1 + p.index_of(l).expect("leaf of this shelf"),
        };
        self.monoid.generators()[g]
    }

    /// `Σ_{J' ≤ J} |Fix(e' x e')| μ(J', J)` over regular `J'`, for each `x`
    /// of `H_J` in group order.
    fn fixed_sums(&self, class: usize) -> Vec<i64> {
        let mu = self.j.mobius_below(class);
        let h = self.j.classes[class].group.as_ref().expect("regular class");
        let m = &self.monoid;
        h.elements
            .iter()
            .map(|&x| {
                let x = m.element(x);
                mu.iter()
                    .map(|&(c, mu)| {
                        let e = m.element(self.j.classes[c].idempotent.expect("regular class"));
                        fix_count(&e.compose(x).compose(e)) as i64 * mu
                    })
                    .sum()
            })
            .collect()
    }

    /// `(1/|H|) Σ_{x∈H} χ(x⁻¹) · fixed[x]`.
    fn multiplicity(fixed: &[i64], chi: &Character) -> (f64, f64) {
        let (mut re, mut im) = (0.0, 0.0);
        for (xp, &inner) in fixed.iter().enumerate() {
            let (cr, ci) = chi.value(xp);
            re += cr * inner as f64;
            im -= ci * inner as f64;
        }
        let n = fixed.len() as f64;
        (re / n, im / n)
    }
}

/// Multiplicity factor of every set partition of `n` children, in
/// [`set_partitions`] order, counting fixed permutations of the children.
fn arranger_multiplicities(n: usize) -> Vec<(f64, f64)> {
    let parts = Refinement(set_partitions(n));
    let items: Vec<usize> = (0..n).collect();
    let perms: Vec<Vec<usize>> = items.iter().copied().permutations(n).collect();
    let osp = |b: &[Vec<usize>]| OrderedSetPartition::new(b.to_vec()).expect("set partition");
    let fixed = |s: &OrderedSetPartition<usize>| {
        perms.iter().filter(|p| pop_shuffle(s, p).expect("same ground set") == **p).count() as i64
    };
    (0..parts.size())
        .map(|top| {
            let e = osp(&parts.0[top]);
            let mu = mobius_to(&parts, top);
            let sum: i64 = (0..parts.size())
                .filter_map(|k| mu[k].map(|mu| (k, mu)))
                .map(|(k, mu)| {
                    let f = osp(&parts.0[k]);
                    let s = osp_compose(&osp_compose(&f, &e).unwrap(), &f).unwrap();
                    fixed(&s) * mu
                })
                .sum();
            (sum as f64, 0.0)
        })
        .collect()
}

fn to_count(value: (f64, f64), what: &str) -> Result<u64> {
    let r = value.0.round();
    if value.1.abs() >= TOLERANCE || (value.0 - r).abs() >= TOLERANCE || r < 0.0 {
        return Err(Error::NonIntegerMultiplicity(format!("{:.6}{:+.6}i for {what}", value.0, value.1)));
    }
    Ok(r as u64)
}

pub fn doab_spectrum(t: &ShelfTree, keep_zero: bool) -> Result<Spectrum> {
    doab_spectrum_with(t, keep_zero, IdempotentChoice::First)
}

/// One entry per regular J-class `J` of the product monoid, character `χ` of
/// `H_J` and inner partition `α`, in that nesting order.
pub fn doab_spectrum_with(t: &ShelfTree, keep_zero: bool, choice: IdempotentChoice) -> Result<Spectrum> {
    let posets = t.shelf_posets();
    let factors = posets.iter().map(|p| Factor::new(p, choice)).collect::<Result<Vec<_>>>()?;

    let partitions = t.inner_partitions();
    let arranger_parts: Vec<(Vec<Vec<Vec<usize>>>, Vec<u64>)> = t
        .arrangers()
        .iter()
        .map(|&v| {
            let cs = &t.node(v).children;
            let parts = set_partitions(cs.len())
                .into_iter()
                .map(|p| p.into_iter().map(|b| b.into_iter().map(|i| cs[i]).collect()).collect())
                .collect();
            let mults = arranger_multiplicities(cs.len())
                .into_iter()
                .map(|m| to_count(m, &format!("partitions at {}", t.node(v).id)))
                .collect::<Result<_>>()?;
            Ok((parts, mults))
        })
        .collect::<Result<_>>()?;
    let alpha_mult: Vec<u64> = partitions
        .iter()
        .map(|alpha| {
            alpha
                .blocks
                .iter()
                .zip(&arranger_parts)
                .map(|(b, (parts, mults))| mults[parts.iter().position(|p| p == b).expect("listed partition")])
                .product()
        })
        .collect();

    let sets = t.admissible_sets();
    let picks: Vec<Vec<Option<u32>>> = sets.iter().map(|e| t.shelf_choices(e)).collect::<Result<_>>()?;
    let compatible: Vec<Vec<bool>> = partitions
        .iter()
        .map(|alpha| sets.iter().map(|e| t.alpha_compatible(e, alpha)).collect())
        .collect();

    let mut entries = Vec::new();
    for classes in factors.iter().map(|f| f.regular.iter().copied()).multi_cartesian_product() {
        let char_lists: Vec<&Vec<Character>> =
            factors.iter().zip(&classes).map(|(f, &c)| &f.characters[c]).collect();
        for chis in char_lists.iter().map(|l| 0..l.len()).multi_cartesian_product() {
            let mut shelf_mult = 1u64;
            for (i, f) in factors.iter().enumerate() {
                let m = f.multiplicities[classes[i]][chis[i]];
                shelf_mult *= to_count(m, &format!("class {} of shelf {}", classes[i], t.node(t.shelves()[i]).id))?;
            }
            // terms with ∂̂_E ≥_J J and their character values
            let mut terms: Vec<(usize, Result<i64>)> = Vec::new();
            for (k, pick) in picks.iter().enumerate() {
                let xs: Vec<usize> =
                    factors.iter().zip(posets).zip(pick).map(|((f, p), &l)| f.move_element(p, l)).collect();
                if !factors.iter().zip(&classes).zip(&xs).all(|((f, &c), &x)| f.j.above(x, c)) {
                    continue;
                }
                terms.push((k, character_sign(&factors, &classes, &chis, &xs, &sets[k])));
            }
            for (a, alpha) in partitions.iter().enumerate() {
                let multiplicity = shelf_mult * alpha_mult[a];
                if multiplicity == 0 && !keep_zero {
                    continue;
                }
                let mut eigenvalue = LinForm::zero();
                for (k, sign) in terms.iter().filter(|(k, _)| compatible[a][*k]) {
                    eigenvalue.add_term(sets[*k].clone(), sign.clone()?);
                }
                entries.push(SpectrumEntry {
                    eigenvalue,
                    multiplicity,
                    label: format!(
                        "(J{}, χ{}, {})",
                        classes.iter().join("."),
                        chis.iter().join("."),
                        t.format_partition(alpha)
                    ),
                });
            }
        }
    }
    Ok(Spectrum::new(entries, t.state_count() as usize))
}

/// `χ(e_J x e_J)` as `±1`.
fn character_sign(
    factors: &[Factor],
    classes: &[usize],
    chis: &[usize],
    xs: &[usize],
    e: &LeafSet,
) -> Result<i64> {
    let mut angle = num_rational::Ratio::from_integer(0i64);
    for (i, f) in factors.iter().enumerate() {
        let class = &f.j.classes[classes[i]];
        let id = class.idempotent.expect("regular class");
        let m = &f.monoid;
        let y = m.mul(m.mul(id, xs[i]), id);
        let pos = class
            .group
            .as_ref()
            .and_then(|h| h.position(y))
            .ok_or_else(|| Error::CharacterDomainError(e.key()))?;
        angle += f.characters[classes[i]][chis[i]].angle(pos);
    }
    let angle = angle - angle.floor();
    let chi = Character { angles: vec![angle] };
    chi.sign(0).ok_or_else(|| Error::NonRealCharacter(angle.to_string(), e.key()))
}

#[derive(Debug, Clone, Serialize)]
pub struct ClassReport {
    pub id: usize,
    pub size: usize,
    pub regular: bool,
    /// Generator word of `e_J`; generators are named by leaf, `∅` for the
    /// identity move.
    pub idempotent: Option<String>,
    pub group_order: usize,
    /// One row per character: angles `k/n` of `χ(h) = exp(2πi·k/n)`.
    pub characters: Vec<Vec<String>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct FactorReport {
    pub shelf: String,
    pub extensions: usize,
    pub elements: usize,
    pub r_trivial: bool,
    pub classes: Vec<ClassReport>,
    /// Strict relations `(lower, upper)` between regular class ids.
    pub order: Vec<(usize, usize)>,
}

#[derive(Debug, Clone, Serialize)]
pub struct MonoidReport {
    pub states: usize,
    /// Size of the monoid generated by the moves on `L(T)`.
    pub elements: usize,
    pub r_trivial: bool,
    pub factors: Vec<FactorReport>,
}

pub fn monoid_report(t: &ShelfTree, cap: usize) -> Result<MonoidReport> {
    let full = full_monoid(t, cap)?;
    let mut factors = Vec::new();
    for (pos, p) in t.shelf_posets().iter().enumerate() {
        let m = shelf_monoid(p, cap)?;
        let j = j_order_with(&m, IdempotentChoice::First);
        let name = |x: usize| {
            let w = m.word(x);
            if w.is_empty() {
                return "id".to_string();
            }
            w.iter()
                .map(|&g| if g == 0 { "∂̂∅".to_string() } else { format!("∂̂{}", p.elements()[g - 1]) })
                .join("·")
        };
        let classes = j
            .classes
            .iter()
            .enumerate()
            .map(|(id, c)| {
                let characters = match &c.group {
                    Some(h) => characters(h)?.iter().map(angle_strings).collect(),
                    None => vec![],
                };
                Ok(ClassReport {
                    id,
                    size: c.members.len(),
                    regular: c.is_regular(),
                    idempotent: c.idempotent.map(name),
                    group_order: c.group.as_ref().map_or(0, |h| h.order()),
                    characters,
                })
            })
            .collect::<Result<_>>()?;
        let order = j.regular_order();
        factors.push(FactorReport {
            shelf: t.node(t.shelves()[pos]).id.clone(),
            extensions: m.element(0).degree(),
            elements: m.len(),
            r_trivial: is_r_trivial(&m),
            classes,
            order,
        });
    }
    Ok(MonoidReport {
        states: full.element(0).degree(),
        elements: full.len(),
        r_trivial: is_r_trivial(&full),
        factors,
    })
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeMap;

    use super::*;
    use crate::extend::ladder_spectrum;
    use crate::forest::forest_spectrum;
    use crate::linalg::parse_linform;
    use crate::monoid::j_order;
    use crate::tree::TreeSpec;

    fn tree(children: &[(&str, &[&str])], posets: Vec<(&str, Poset)>) -> ShelfTree {
        let spec = TreeSpec {
            root: children[0].0.into(),
            children: children
                .iter()
                .map(|(v, cs)| (v.to_string(), cs.iter().map(|c| c.to_string()).collect()))
                .collect(),
        };
        let posets: BTreeMap<String, Poset> = posets.into_iter().map(|(v, p)| (v.to_string(), p)).collect();
        ShelfTree::new(&spec, &posets).unwrap()
    }

    fn two_shelf(p5: Poset) -> ShelfTree {
        tree(&[("7", &["5", "6"])], vec![("5", p5), ("6", Poset::new(&[4], &[]).unwrap())])
    }

    fn vee_pair() -> ShelfTree {
        two_shelf(Poset::new(&[1, 2, 3], &[(1, 2), (1, 3)]).unwrap())
    }

    fn forest_pair() -> ShelfTree {
        two_shelf(Poset::new(&[1, 2, 3], &[(1, 2)]).unwrap())
    }

    #[test]
    fn example_monoid_structure() {
        let p5 = Poset::new(&[1, 2, 3], &[(1, 2), (1, 3)]).unwrap();
        let m = shelf_monoid(&p5, 100).unwrap();
        // generators ∂̂∅, ∂̂1, ∂̂2, ∂̂3 on the extensions 123, 132
        let g = m.generators().to_vec();
        assert_eq!(m.element(g[1]).table(), &[1, 0]);
        assert_eq!(m.element(g[2]).table(), &[1, 1]);
        assert_eq!(m.element(g[3]).table(), &[0, 0]);
        assert_eq!(m.len(), 4);
        assert!(!is_r_trivial(&m));
        let j = j_order(&m);
        assert_eq!(j.classes.len(), 2);
        assert_eq!(j.classes[0].members, vec![g[0], g[1]]);
        assert_eq!(j.classes[1].members, vec![g[2], g[3]]);
        assert!(j.leq(1, 0) && !j.leq(0, 1));
        let h = j.classes[0].group.as_ref().unwrap();
        assert_eq!(j.classes[0].idempotent, Some(g[0]));
        assert_eq!(h.elements, vec![g[0], g[1]]);
        assert_eq!(j.classes[1].idempotent, Some(g[2]));
        assert_eq!(j.classes[1].group.as_ref().unwrap().elements, vec![g[2]]);
        let signs: Vec<Vec<i64>> =
            characters(h).unwrap().iter().map(|c| (0..2).map(|x| c.sign(x).unwrap()).collect()).collect();
        assert_eq!(signs, vec![vec![1, 1], vec![1, -1]]);
        assert_eq!(characters(j.classes[1].group.as_ref().unwrap()).unwrap().len(), 1);

        let m6 = shelf_monoid(&Poset::new(&[4], &[]).unwrap(), 100).unwrap();
        assert_eq!(m6.len(), 1);
    }

    #[test]
    fn example_spectrum() {
        let s = doab_spectrum(&vee_pair(), true).unwrap();
        let got: Vec<(LinForm, u64)> = s.entries.iter().map(|e| (e.eigenvalue.clone(), e.multiplicity)).collect();
        let expected: Vec<(LinForm, u64)> = [
            ("x14 + x∅", 0),
            ("x14 + x1 + x4 + x∅", 0),
            ("-x14 + x∅", 1),
            ("-x1 - x14 + x4 + x∅", 1),
            ("x14 + x24 + x34 + x∅", 1),
            ("x1 + x2 + x3 + x4 + x14 + x24 + x34 + x∅", 1),
        ]
        .iter()
        .map(|(f, m)| (parse_linform(f).unwrap(), *m))
        .collect();
        assert_eq!(got, expected);
        assert_eq!(s.entries[3].label, "(J0.0, χ1.0, 7:{5}{6})");
        s.check_dimension().unwrap();
        assert_eq!(doab_spectrum(&vee_pair(), false).unwrap().entries.len(), 4);
        assert_eq!(s.multiset(), ladder_spectrum(&vee_pair()).unwrap().multiset());
    }

    #[test]
    fn forest_agrees() {
        let t = forest_pair();
        let s = doab_spectrum(&t, false).unwrap();
        assert_eq!(s.multiset(), forest_spectrum(&t, false).unwrap().multiset());
        assert!(is_r_trivial(&full_monoid(&t, 10_000).unwrap()));

        let deep = tree(
            &[("9", &["7", "8"]), ("7", &["5", "6"]), ("8", &["10"])],
            vec![
                ("5", Poset::new(&[1, 2], &[(1, 2)]).unwrap()),
                ("6", Poset::new(&[3], &[]).unwrap()),
                ("10", Poset::new(&[4, 5], &[]).unwrap()),
            ],
        );
        let s = doab_spectrum(&deep, false).unwrap();
        s.check_dimension().unwrap();
        assert_eq!(s.multiset(), forest_spectrum(&deep, false).unwrap().multiset());
    }

    #[test]
    fn vee_pair_full_monoid() {
        let m = full_monoid(&vee_pair(), 10_000).unwrap();
        assert!(!is_r_trivial(&m));
        assert!(m.elements().iter().any(Transformation::is_constant));
        let m2 = full_monoid(&forest_pair(), 10_000).unwrap();
        assert!(m2.elements().iter().any(Transformation::is_constant));
    }

    #[test]
    fn idempotent_choice_irrelevant() {
        let three = tree(
            &[("9", &["5", "6", "8"])],
            vec![
                ("5", Poset::new(&[1, 2, 3], &[(1, 2), (1, 3)]).unwrap()),
                ("6", Poset::new(&[4], &[]).unwrap()),
                ("8", Poset::new(&[5, 6], &[]).unwrap()),
            ],
        );
        for t in [vee_pair(), forest_pair(), three] {
            let a = doab_spectrum_with(&t, true, IdempotentChoice::First).unwrap();
            let b = doab_spectrum_with(&t, true, IdempotentChoice::Last).unwrap();
            assert_eq!(a.multiset(), b.multiset());
            a.check_dimension().unwrap();
            assert_eq!(a.multiset(), ladder_spectrum(&t).unwrap().multiset());
        }
    }

    #[test]
    fn report() {
        let r = monoid_report(&vee_pair(), 10_000).unwrap();
        assert_eq!(r.states, 4);
        assert!(!r.r_trivial);
        let f = &r.factors[0];
        assert_eq!((f.elements, f.classes.len()), (4, 2));
        assert_eq!(f.classes[0].characters, vec![vec!["0", "0"], vec!["0", "1/2"]]);
        assert_eq!(f.classes[1].idempotent.as_deref(), Some("∂̂2"));
        assert_eq!(f.order, vec![(1, 0)]);
    }

    /// Product poset of regular classes of every shelf and set partitions of
    /// every arranger, ordered componentwise.
    struct ProductOrder {
        points: Vec<Vec<usize>>,
        leqs: Vec<Box<dyn Fn(usize, usize) -> bool>>,
    }

    impl FinitePoset for ProductOrder {
        fn size(&self) -> usize {
            self.points.len()
        }
        fn leq(&self, x: usize, y: usize) -> bool {
            self.leqs.iter().enumerate().all(|(i, f)| f(self.points[x][i], self.points[y][i]))
        }
    }

    /// Multiplicities evaluated without factoring: elements of the full
    /// product act on `L(T)`, Möbius on the product poset.
    fn brute_force_multiplicities(t: &ShelfTree) -> Vec<u64> {
        let ss = t.state_space();
        let factors: Vec<Factor> =
            t.shelf_posets().iter().map(|p| Factor::new(p, IdempotentChoice::First).unwrap()).collect();
        let arr_parts: Vec<Vec<Vec<Vec<usize>>>> = t
            .arrangers()
            .iter()
            .map(|&v| {
                let cs = &t.node(v).children;
                set_partitions(cs.len())
                    .into_iter()
                    .map(|p| p.into_iter().map(|b| b.into_iter().map(|i| cs[i]).collect()).collect())
                    .collect()
            })
            .collect();
        let mut leqs: Vec<Box<dyn Fn(usize, usize) -> bool>> = Vec::new();
        let mut axes: Vec<Vec<usize>> = Vec::new();
        for f in &factors {
            let j = f.j.clone();
            leqs.push(Box::new(move |a, b| j.leq(a, b)));
            axes.push(f.regular.clone());
        }
        for parts in &arr_parts {
            let parts = parts.clone();
            axes.push((0..parts.len()).collect());
            leqs.push(Box::new(move |a, b| refines(&parts[a], &parts[b])));
        }
        let points: Vec<Vec<usize>> = axes.iter().map(|a| a.iter().copied()).multi_cartesian_product().collect();
        let order = ProductOrder { points: points.clone(), leqs };
        let k = factors.len();
        let osp = |b: &Vec<Vec<usize>>| OrderedSetPartition::new(b.clone()).unwrap();
        let ext_pos = |i: usize, ext: &Vec<u32>| ss.shelf_extensions[i].iter().position(|e| e == ext).unwrap();

        let mut out = Vec::new();
        for shelf_point in factors.iter().map(|f| f.regular.iter().copied()).multi_cartesian_product() {
            let groups: Vec<_> =
                factors.iter().zip(&shelf_point).map(|(f, &c)| f.j.classes[c].group.clone().unwrap()).collect();
            for chis in factors
                .iter()
                .zip(&shelf_point)
                .map(|(f, &c)| 0..f.characters[c].len())
                .multi_cartesian_product()
            {
                for alpha in arr_parts.iter().map(|p| 0..p.len()).multi_cartesian_product() {
                    let top_point: Vec<usize> = shelf_point.iter().chain(&alpha).copied().collect();
                    let top = points.iter().position(|p| *p == top_point).unwrap();
                    let mu = mobius_to(&order, top);
                    let (mut re, mut im) = (0.0, 0.0);
                    for hs in groups.iter().map(|h| 0..h.order()).multi_cartesian_product() {
                        let mut inner = 0i64;
                        for (q, point) in points.iter().enumerate() {
                            let Some(mu) = mu[q] else { continue };
                            let maps: Vec<&Transformation> = (0..k)
                                .map(|i| {
                                    let f = &factors[i];
                                    let e = f.j.classes[point[i]].idempotent.unwrap();
                                    let x = groups[i].elements[hs[i]];
                                    f.monoid.element(f.monoid.mul(f.monoid.mul(e, x), e))
                                })
                                .collect();
                            let shuffles: Vec<OrderedSetPartition<usize>> = (0..arr_parts.len())
                                .map(|v| {
                                    let f = osp(&arr_parts[v][point[k + v]]);
                                    let e = osp(&arr_parts[v][alpha[v]]);
                                    osp_compose(&osp_compose(&f, &e).unwrap(), &f).unwrap()
                                })
                                .collect();
                            let fixed = ss
                                .states
                                .iter()
                                .filter(|s| {
                                    s.shelves.iter().enumerate().all(|(i, ext)| {
                                        let p = ext_pos(i, ext);
                                        maps[i].apply(p) == p
                                    }) && s
                                        .arrangements
                                        .iter()
                                        .zip(&shuffles)
                                        .all(|(a, b)| pop_shuffle(b, a).unwrap() == *a)
                                })
                                .count() as i64;
                            inner += fixed * mu;
                        }
                        let mut angle = num_rational::Ratio::from_integer(0i64);
                        for i in 0..k {
                            angle += factors[i].characters[shelf_point[i]][chis[i]].angle(hs[i]);
                        }
                        let (c, s) = Character { angles: vec![angle] }.value(0);
                        re += c * inner as f64;
                        im -= s * inner as f64;
                    }
                    let n: usize = groups.iter().map(|h| h.order()).product();
                    out.push(to_count((re / n as f64, im / n as f64), "brute force").unwrap());
                }
            }
        }
        out
    }

    #[test]
    fn factored_multiplicities_match_brute_force() {
        let three = tree(
            &[("9", &["5", "6", "8"])],
            vec![
                ("5", Poset::new(&[1, 2, 3], &[(1, 2), (1, 3)]).unwrap()),
                ("6", Poset::new(&[4], &[]).unwrap()),
                ("8", Poset::new(&[5, 6], &[]).unwrap()),
            ],
        );
        for t in [vee_pair(), forest_pair(), three] {
            let s = doab_spectrum(&t, true).unwrap();
            let got: Vec<u64> = s.entries.iter().map(|e| e.multiplicity).collect();
            assert_eq!(got, brute_force_multiplicities(&t));
        }
    }
}
