//! Closed-form spectrum when every leaf poset is a rooted forest.

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::linalg::LinForm;
use crate::poset::{derangement_numbers, upset_lattice};
use crate::spectrum::{Spectrum, SpectrumEntry};
use crate::tree::{InnerPartition, LeafSet, ShelfTree};

fn factorial(n: usize) -> u64 {
    (1..=n as u64).product()
}

/// `Π_v Π_{B ∈ α_v} (|B| - 1)!`.
pub fn m_alpha(alpha: &InnerPartition) -> u64 {
    alpha.blocks.iter().flatten().map(|b| factorial(b.len() - 1)).product()
}

/// One eigenvalue per pair (tuple of upsets, inner partition): the sum of
/// `x_E` over admissible α-compatible `E` inside the upsets, with
/// multiplicity `Π d_{S_i} · m_α`.
pub fn forest_spectrum(t: &ShelfTree, keep_zero: bool) -> Result<Spectrum> {
    for (pos, &v) in t.shelves().iter().enumerate() {
        if !t.shelf_poset(pos).is_rooted_forest() {
            return Err(Error::NotAForest(t.node(v).id.clone()));
        }
    }
    let per_shelf: Vec<Vec<(LeafSet, i64)>> = t
        .shelf_posets()
        .iter()
        .map(|p| {
            let lattice = upset_lattice(p);
            let d = derangement_numbers(p, &lattice);
            lattice.upsets.iter().map(|u| LeafSet::new(u.iter().copied())).zip(d).collect()
        })
        .collect();
    let sets = t.admissible_sets();
    let partitions = t.inner_partitions();
    let compatible: Vec<Vec<bool>> = partitions
        .iter()
        .map(|alpha| sets.iter().map(|e| t.alpha_compatible(e, alpha)).collect())
        .collect();

    let mut entries = Vec::new();
    for combo in per_shelf.iter().map(|v| v.iter()).multi_cartesian_product() {
        let upset = LeafSet::new(combo.iter().flat_map(|(s, _)| s.labels().iter().copied()));
        let d: i64 = combo.iter().map(|(_, d)| *d).product();
        for (alpha, compat) in partitions.iter().zip(&compatible) {
            let mult = d.max(0) as u64 * m_alpha(alpha);
            if mult == 0 && !keep_zero {
                continue;
            }
            let eigenvalue = LinForm::from_terms(
                sets.iter()
                    .zip(compat)
                    .filter(|(e, &ok)| ok && e.labels().iter().all(|l| upset.contains(*l)))
                    .map(|(e, _)| (e.clone(), 1)),
            );
            entries.push(SpectrumEntry {
                eigenvalue,
                multiplicity: mult,
                label: format!("({}, {})", upset, t.format_partition(alpha)),
            });
        }
    }
    Ok(Spectrum::new(entries, t.state_count() as usize))
}
