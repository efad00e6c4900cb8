//! Brute-force checks of claimed spectra against the transition matrix.
//!
//! A spectrum is accepted when `det(tI - M(w))` equals `Π (t - λ(w))^m` at
//! every weight vector tried. Agreement at a handful of fixed vectors is
//! evidence, not proof, of the polynomial identity in the `x_E`; small
//! instances can also be checked symbolically with [`verify_symbolic`].

use std::collections::HashMap;
use std::fmt::Write as _;
use std::thread;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::extend::{break_in_tree, BreakPair};
use crate::linalg::{
    build_transition_matrix, char_poly, dab_double, integer_char_poly, linear_product, symbolic_char_poly,
    RationalMatrix, RationalPolynomial, SymbolicMatrix, Weights,
};
use crate::spectrum::Spectrum;
use crate::tree::{ShelfTree, State};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    /// `det(tI - M) - Π (t - λ)^m` when the check fails.
    pub residual: Option<String>,
}

impl Check {
    pub fn pass(name: impl Into<String>) -> Self {
        Check { name: name.into(), passed: true, residual: None }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub instance: String,
    pub weights: Vec<Weights>,
    pub checks: Vec<Check>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn table(&self) -> String {
        let mut out = format!("instance: {}\n", self.instance);
        let width = self.checks.iter().map(|c| c.name.chars().count()).max().unwrap_or(0);
        for c in &self.checks {
            let _ = writeln!(out, "{:<width$}  {}", c.name, if c.passed { "PASS" } else { "FAIL" });
            if let Some(r) = &c.residual {
                let _ = writeln!(out, "{:<width$}  residual: {r}", "");
            }
        }
        let _ = write!(out, "overall: {}", if self.passed() { "PASS" } else { "FAIL" });
        out
    }
}

/// Ascending coefficients of `Π (t - r)`.
fn integer_product(roots: &[(BigInt, u64)]) -> Vec<BigInt> {
    let mut p = vec![BigInt::one()];
    for (r, m) in roots {
        for _ in 0..*m {
            let mut next = vec![BigInt::zero(); p.len() + 1];
            for (i, c) in p.iter().enumerate() {
                next[i + 1] += c;
                next[i] -= c * r;
            }
            p = next;
        }
    }
    p
}

/// One weight vector: compares `det(tI - D·M(w))` with `Π (t - D·λ(w))^m`,
/// `D` the common denominator of `w`, so both sides are integral.
fn check_weights(m: &SymbolicMatrix, spec: &Spectrum, w: &Weights, name: String) -> Result<Check> {
    let (d, b) = m.substitute_scaled(w)?;
    let lhs = integer_char_poly(&b);
    let mut roots = Vec::new();
    for e in spec.entries.iter().filter(|e| e.multiplicity > 0) {
        let lam = e.eigenvalue.eval(w)? * BigRational::from_integer(d.clone());
        if !lam.is_integer() {
            return Err(Error::MissingWeight(format!("denominator of {}", e.eigenvalue)));
        }
        roots.push((lam.to_integer(), e.multiplicity));
    }
    if lhs == integer_product(&roots) {
        return Ok(Check::pass(name));
    }
    let actual = char_poly(&m.substitute(w)?)?;
    let mut claimed = RationalPolynomial::one();
    for e in spec.entries.iter().filter(|e| e.multiplicity > 0) {
        let lam = e.eigenvalue.eval(w)?;
        for _ in 0..e.multiplicity {
            claimed.mul_linear(&lam);
        }
    }
    Ok(Check { name, passed: false, residual: Some(actual.sub(&claimed).to_string()) })
}

/// Exact characteristic-polynomial comparison at every weight vector.
pub fn verify_spectrum(t: &ShelfTree, spec: &Spectrum, ws: &[Weights]) -> Result<VerificationReport> {
    spec.check_dimension()?;
    for w in ws {
        w.check_against(t)?;
    }
    let m = build_transition_matrix(t)?;
    let checks = thread::scope(|s| {
        let handles: Vec<_> = ws
            .iter()
            .enumerate()
            .map(|(i, w)| {
                let m = &m;
                s.spawn(move || check_weights(m, spec, w, format!("charpoly[w{i}]")))
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("worker panicked")).collect::<Result<Vec<_>>>()
    })?;
    Ok(VerificationReport { instance: describe(t), weights: ws.to_vec(), checks })
}

/// `det(tI - M)` against `Π (t - λ)^m` as polynomials in `t` and every `x_E`.
pub fn verify_symbolic(t: &ShelfTree, spec: &Spectrum) -> Result<Check> {
    spec.check_dimension()?;
    let m = build_transition_matrix(t)?;
    let vars = t.admissible_sets();
    let lhs = symbolic_char_poly(&m, &vars)?;
    let rhs = linear_product(spec.entries.iter().map(|e| (&e.eigenvalue, e.multiplicity)), &vars)?;
    let diff = lhs.sub(&rhs);
    Ok(Check {
        name: "symbolic".into(),
        passed: diff.is_zero(),
        residual: (!diff.is_zero()).then(|| format!("{diff:?}")),
    })
}

/// The doubled matrix of `T_P` against the matrix of `T_{P'}`, entrywise,
/// matching states by value.
pub fn cross_check_dab(t: &ShelfTree, pair: BreakPair) -> Result<bool> {
    let doubled = dab_double(&build_transition_matrix(t)?, t, pair)?;
    let broken = build_transition_matrix(&break_in_tree(t, pair)?)?;
    if doubled.dim() != broken.dim() {
        return Ok(false);
    }
    let index: HashMap<&State, usize> = broken.states.iter().enumerate().map(|(i, s)| (s, i)).collect();
    let Some(map) = doubled.states.iter().map(|s| index.get(s).copied()).collect::<Option<Vec<_>>>() else {
        return Ok(false);
    };
    Ok((0..doubled.dim())
        .all(|i| (0..doubled.dim()).all(|j| doubled.entry(i, j) == broken.entry(map[i], map[j]))))
}

/// The left fixed vector summing to one, by exact elimination with the last
/// balance equation replaced by the normalization.
pub fn stationary_distribution(a: &RationalMatrix) -> Result<Vec<BigRational>> {
    if !a.is_row_stochastic() {
        return Err(Error::NotStochastic);
    }
    let n = a.dim();
    // row j of the system: Σ_i π_i (A_ij - δ_ij) = 0
    let mut sys: Vec<Vec<BigRational>> = (0..n)
        .map(|j| {
            let mut row: Vec<BigRational> = (0..n)
                .map(|i| if i == j { a.get(i, j) - BigRational::one() } else { a.get(i, j).clone() })
                .collect();
            row.push(BigRational::zero());
            row
        })
        .collect();
    if let Some(last) = sys.last_mut() {
        *last = vec![BigRational::one(); n + 1];
    }
    for col in 0..n {
        let pivot = (col..n).find(|&r| !sys[r][col].is_zero()).ok_or(Error::Reducible)?;
        sys.swap(col, pivot);
        let inv = sys[col][col].recip();
        for x in sys[col].iter_mut() {
            *x *= &inv;
        }
        for r in 0..n {
            if r != col && !sys[r][col].is_zero() {
                let f = sys[r][col].clone();
                for c in col..=n {
                    let delta = &f * &sys[col][c];
                    sys[r][c] -= delta;
                }
            }
        }
    }
    Ok(sys.into_iter().map(|row| row[n].clone()).collect())
}

fn describe(t: &ShelfTree) -> String {
    let shelves: Vec<String> = t
        .shelves()
        .iter()
        .zip(t.shelf_posets())
        .map(|(&v, p)| format!("{}:{}", t.node(v).id, p.elements().len()))
        .collect();
    format!("root {}, shelves [{}], {} states", t.node(t.root()).id, shelves.join(" "), t.state_count())
}
