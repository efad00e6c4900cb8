//! Spectra as lists of linear-form eigenvalues with multiplicities.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::LinForm;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpectrumEntry {
    pub eigenvalue: LinForm,
    pub multiplicity: u64,
    pub label: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Spectrum {
    pub entries: Vec<SpectrumEntry>,
    pub dimension: usize,
}

impl Spectrum {
    pub fn new(entries: Vec<SpectrumEntry>, dimension: usize) -> Self {
        Spectrum { entries, dimension }
    }

    pub fn total_multiplicity(&self) -> u64 {
        self.entries.iter().map(|e| e.multiplicity).sum()
    }

    /// Fails unless the multiplicities add up to the dimension.
    pub fn check_dimension(&self) -> Result<()> {
        let total = self.total_multiplicity();
        if total as usize != self.dimension {
            return Err(Error::DimensionMismatch(total, self.dimension));
        }
        Ok(())
    }

    /// Drops zero-multiplicity entries.
    pub fn nonzero(&self) -> Spectrum {
        Spectrum {
            entries: self.entries.iter().filter(|e| e.multiplicity > 0).cloned().collect(),
            dimension: self.dimension,
        }
    }

    /// Combines entries with equal eigenvalues, keeping the first label and
    /// first-occurrence order.
    pub fn merged(&self) -> Spectrum {
        let mut order: Vec<SpectrumEntry> = Vec::new();
        let mut pos: BTreeMap<LinForm, usize> = BTreeMap::new();
        for e in &self.entries {
            match pos.get(&e.eigenvalue) {
                Some(&i) => order[i].multiplicity += e.multiplicity,
                None => {
                    pos.insert(e.eigenvalue.clone(), order.len());
                    order.push(e.clone());
                }
            }
        }
        Spectrum { entries: order, dimension: self.dimension }
    }

    /// Eigenvalue → multiplicity over nonzero entries.
    pub fn multiset(&self) -> BTreeMap<LinForm, u64> {
        let mut m = BTreeMap::new();
        for e in self.entries.iter().filter(|e| e.multiplicity > 0) {
            *m.entry(e.eigenvalue.clone()).or_insert(0) += e.multiplicity;
        }
        m
    }

    pub fn same_eigenvalues(&self, other: &Spectrum) -> bool {
        self.multiset() == other.multiset()
    }

    /// Largest absolute coefficient over all eigenvalues.
    pub fn max_abs_coeff(&self) -> i64 {
        self.entries.iter().map(|e| e.eigenvalue.max_abs_coeff()).max().unwrap_or(0)
    }

    pub fn table(&self) -> String {
        let width = self.entries.iter().map(|e| e.label.chars().count()).max().unwrap_or(5).max(5);
        let mut out = String::new();
        let _ = writeln!(out, "{:<width$}  {:>4}  eigenvalue", "label", "mult");
        for e in &self.entries {
            let _ = writeln!(out, "{:<width$}  {:>4}  {}", e.label, e.multiplicity, e.eigenvalue);
        }
        let _ = writeln!(out, "total multiplicity {} of dimension {}", self.total_multiplicity(), self.dimension);
        out
    }
}
