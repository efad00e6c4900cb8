use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::linalg::{LinForm, RationalMatrix, Weights};
use crate::shuffle::move_tables;
use crate::tree::{LeafSet, ShelfTree, State};

/// Square matrix of linear forms indexed by a fixed list of states.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymbolicMatrix {
    pub states: Vec<State>,
    pub entries: Vec<Vec<LinForm>>,
}

impl SymbolicMatrix {
    pub fn zeros(states: Vec<State>) -> Self {
        let n = states.len();
        SymbolicMatrix { states, entries: vec![vec![LinForm::zero(); n]; n] }
    }

    pub fn dim(&self) -> usize {
        self.states.len()
    }

    pub fn entry(&self, i: usize, j: usize) -> &LinForm {
        &self.entries[i][j]
    }

    pub fn row_sum(&self, i: usize) -> LinForm {
        let mut acc = LinForm::zero();
        for f in &self.entries[i] {
            acc += f;
        }
        acc
    }

    /// Sets used anywhere in the matrix.
    pub fn support(&self) -> Vec<LeafSet> {
        let mut s: std::collections::BTreeSet<LeafSet> = Default::default();
        for row in &self.entries {
            for f in row {
                s.extend(f.terms().map(|(e, _)| e.clone()));
            }
        }
        s.into_iter().collect()
    }

    /// Numeric matrix at the given weights.
    pub fn substitute(&self, w: &Weights) -> Result<RationalMatrix> {
        let rows = self
            .entries
            .iter()
            .map(|row| row.iter().map(|f| f.eval(w)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        RationalMatrix::new(rows)
    }

    /// `(D, D·M(w))` with `D` the common denominator of the weights.
    pub fn substitute_scaled(&self, w: &Weights) -> Result<(BigInt, Vec<Vec<BigInt>>)> {
        let d = w.common_denominator();
        let scaled: std::collections::BTreeMap<&LeafSet, BigInt> = w
            .values()
            .iter()
            .map(|(e, v)| (e, v.numer() * (&d / v.denom())))
            .collect();
        let rows = self
            .entries
            .iter()
            .map(|row| {
                row.iter()
                    .map(|f| {
                        let mut acc = BigInt::zero();
                        for (e, c) in f.terms() {
                            let v = scaled.get(e).ok_or_else(|| Error::MissingWeight(e.key()))?;
                            acc += v * BigInt::from(c);
                        }
                        Ok(acc)
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Ok((d, rows))
    }

    /// Reorders rows and columns: new index `i` is old index `order[i]`.
    pub fn permuted(&self, order: &[usize]) -> SymbolicMatrix {
        SymbolicMatrix {
            states: order.iter().map(|&i| self.states[i].clone()).collect(),
            entries: order
                .iter()
                .map(|&i| order.iter().map(|&j| self.entries[i][j].clone()).collect())
                .collect(),
        }
    }

    /// `{"states": [...], "entries": [[{E-key: coeff}, ...], ...]}`.
    pub fn to_json(&self, t: &ShelfTree) -> Value {
        json!({
            "states": self.states.iter().map(|s| t.format_state(s)).collect::<Vec<_>>(),
            "entries": self.entries,
        })
    }
}

/// `M(π, π') = Σ x_E` over admissible `E` with `∂̂_E π = π'`.
pub fn build_transition_matrix(t: &ShelfTree) -> Result<SymbolicMatrix> {
    let ss = t.state_space();
    let sets = t.admissible_sets();
    let tables = move_tables(t, &ss, &sets)?;
    let mut m = SymbolicMatrix::zeros(ss.states.clone());
    for (e, table) in sets.iter().zip(&tables) {
        for (i, &j) in table.iter().enumerate() {
            m.entries[i][j].add_term(e.clone(), 1);
        }
    }
    Ok(m)
}

/// `Σ_E x_E` over the admissible sets.
pub fn total_form(t: &ShelfTree) -> LinForm {
    LinForm::from_terms(t.admissible_sets().into_iter().map(|e| (e, 1)))
}

pub fn rational_row_sums(a: &RationalMatrix) -> Vec<BigRational> {
    a.rows().iter().map(|r| r.iter().fold(BigRational::zero(), |x, y| x + y)).collect()
}
