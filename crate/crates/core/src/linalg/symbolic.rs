//! Multivariate integer polynomials in `t` and the `x_E`, for expanding
//! characteristic polynomials symbolically on small matrices.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::linalg::{LinForm, SymbolicMatrix};
use crate::tree::LeafSet;

/// Largest dimension accepted by [`symbolic_char_poly`].
pub const SYMBOLIC_LIMIT: usize = 8;

/// Variable 0 is `t`; variable `i + 1` is the `i`-th set of `vars`.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct MPoly {
    terms: BTreeMap<Vec<u8>, i128>,
    nvars: usize,
}

impl MPoly {
    pub fn constant(c: i128, nvars: usize) -> Self {
        let mut p = MPoly { terms: BTreeMap::new(), nvars };
        p.add_mono(vec![0; nvars], c);
        p
    }

    fn add_mono(&mut self, exps: Vec<u8>, c: i128) {
        if c == 0 {
            return;
        }
        let slot = self.terms.entry(exps.clone()).or_insert(0);
        *slot += c;
        if *slot == 0 {
            self.terms.remove(&exps);
        }
    }

    /// `t·[with_t] - f` as a polynomial.
    pub fn from_linform(f: &LinForm, vars: &[LeafSet], with_t: bool, sign: i128) -> Result<Self> {
        let nvars = vars.len() + 1;
        let mut p = MPoly { terms: BTreeMap::new(), nvars };
        for (e, c) in f.terms() {
            let idx = vars.binary_search(e).map_err(|_| Error::MissingWeight(e.key()))?;
            let mut exps = vec![0u8; nvars];
            exps[idx + 1] = 1;
            p.add_mono(exps, sign * c as i128);
        }
        if with_t {
            let mut exps = vec![0u8; nvars];
            exps[0] = 1;
            p.add_mono(exps, 1);
        }
        Ok(p)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    #[allow(clippy::len_without_is_empty)] // is_zero plays that role
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn add_assign(&mut self, other: &MPoly) {
        for (e, &c) in &other.terms {
            self.add_mono(e.clone(), c);
        }
    }

    pub fn sub(&self, other: &MPoly) -> MPoly {
        let mut out = self.clone();
        for (e, &c) in &other.terms {
            out.add_mono(e.clone(), -c);
        }
        out
    }

    pub fn mul(&self, other: &MPoly) -> MPoly {
        let mut out = MPoly { terms: BTreeMap::new(), nvars: self.nvars.max(other.nvars) };
        for (ea, &ca) in &self.terms {
            for (eb, &cb) in &other.terms {
                let exps: Vec<u8> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_mono(exps, ca * cb);
            }
        }
        out
    }

    pub fn scale(&self, k: i128) -> MPoly {
        MPoly {
            terms: self.terms.iter().map(|(e, &c)| (e.clone(), c * k)).filter(|(_, c)| *c != 0).collect(),
            nvars: self.nvars,
        }
    }
}

impl fmt::Debug for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MPoly[{} terms]", self.terms.len())?;
        for (e, c) in self.terms.iter().take(6) {
            write!(f, " {c}*{e:?}")?;
        }
        Ok(())
    }
}

/// `det(tI - M)` expanded over the integers, for `dim ≤ 8`.
pub fn symbolic_char_poly(m: &SymbolicMatrix, vars: &[LeafSet]) -> Result<MPoly> {
    let n = m.dim();
    if n > SYMBOLIC_LIMIT {
        return Err(Error::TooLarge(n, SYMBOLIC_LIMIT));
    }
    let nvars = vars.len() + 1;
    // (tI - M)[r][c]
    let cell = |r: usize, c: usize| MPoly::from_linform(m.entry(r, c), vars, r == c, -1);
    // dp over the set of columns used by the first popcount(mask) rows
    let mut dp: Vec<Option<MPoly>> = vec![None; 1 << n];
    dp[0] = Some(MPoly::constant(1, nvars));
    for mask in 0usize..(1 << n) {
        let Some(cur) = dp[mask].take() else { continue };
        let r = mask.count_ones() as usize;
        if r == n {
            dp[mask] = Some(cur);
            continue;
        }
        for c in 0..n {
            if mask & (1 << c) != 0 {
                continue;
            }
            let entry = cell(r, c)?;
            if entry.is_zero() {
                continue;
            }
            let inversions = (mask >> (c + 1)).count_ones();
            let mut term = cur.mul(&entry);
            if inversions % 2 == 1 {
                term = term.scale(-1);
            }
            let slot = &mut dp[mask | (1 << c)];
            match slot {
                Some(p) => p.add_assign(&term),
                None => *slot = Some(term),
            }
        }
    }
    Ok(dp[(1 << n) - 1].take().unwrap_or_else(|| MPoly::constant(0, nvars)))
}

/// `Π (t - λ)^m`.
pub fn linear_product<'a>(
    factors: impl IntoIterator<Item = (&'a LinForm, u64)>,
    vars: &[LeafSet],
) -> Result<MPoly> {
    let mut p = MPoly::constant(1, vars.len() + 1);
    for (f, m) in factors {
        let lin = MPoly::from_linform(f, vars, true, -1)?;
        for _ in 0..m {
            p = p.mul(&lin);
        }
    }
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::parse_linform;
    use crate::tree::State;

    fn states(n: usize) -> Vec<State> {
        (0..n).map(|i| State { shelves: vec![vec![i as u32 + 1]], arrangements: vec![] }).collect()
    }

    #[test]
    fn triangular_matrix_expands_to_diagonal_product() {
        let vars = vec![LeafSet::empty(), LeafSet::new([1])];
        let mut m = SymbolicMatrix::zeros(states(2));
        m.entries[0][0] = parse_linform("x∅ + x1").unwrap();
        m.entries[0][1] = parse_linform("x1").unwrap();
        m.entries[1][1] = parse_linform("x∅").unwrap();
        let cp = symbolic_char_poly(&m, &vars).unwrap();
        let prod = linear_product([(m.entry(0, 0), 1), (m.entry(1, 1), 1)], &vars).unwrap();
        assert_eq!(cp, prod);
    }

    #[test]
    fn swap_matrix() {
        // [[0, x1], [x1, 0]] has char poly t^2 - x1^2
        let vars = vec![LeafSet::new([1])];
        let mut m = SymbolicMatrix::zeros(states(2));
        m.entries[0][1] = parse_linform("x1").unwrap();
        m.entries[1][0] = parse_linform("x1").unwrap();
        let cp = symbolic_char_poly(&m, &vars).unwrap();
        let mut expect = MPoly::constant(0, 2);
        expect.add_mono(vec![2, 0], 1);
        expect.add_mono(vec![0, 2], -1);
        assert_eq!(cp, expect);
    }

    #[test]
    fn size_limit() {
        let m = SymbolicMatrix::zeros(states(9));
        assert_eq!(symbolic_char_poly(&m, &[]), Err(Error::TooLarge(9, 8)));
    }
}
