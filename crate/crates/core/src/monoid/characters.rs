//! Characters of finite abelian groups as angle fractions.

use num_rational::Ratio;
use num_traits::{ToPrimitive, Zero};

use super::Group;
use crate::error::{Error, Result};

/// `χ(g) = exp(2πi · angle[g])`, angles in `[0, 1)`, indexed by group position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Character {
    pub angles: Vec<Ratio<i64>>,
}

impl Character {
    pub fn angle(&self, g: usize) -> Ratio<i64> {
        self.angles[g]
    }

    /// `(re, im)` of `χ(g)`.
    pub fn value(&self, g: usize) -> (f64, f64) {
        let t = 2.0 * std::f64::consts::PI * self.angles[g].to_f64().expect("small fraction");
        (t.cos(), t.sin())
    }

    /// `±1` when the value is real.
    pub fn sign(&self, g: usize) -> Option<i64> {
        let a = self.angles[g];
        if a.is_zero() {
            Some(1)
        } else if a == Ratio::new(1, 2) {
            Some(-1)
        } else {
            None
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.angles.iter().all(Zero::is_zero)
    }
}

fn frac(r: Ratio<i64>) -> Ratio<i64> {
    r - r.floor()
}

/// All `|G|` characters, trivial first, built by adjoining one element at a
/// time: if `g^k` is the first power inside the current subgroup `S` then
/// each character of `S` has `k` extensions to `⟨S, g⟩`.
pub fn characters(g: &Group) -> Result<Vec<Character>> {
    let n = g.order();
    let t = &g.table;
    for a in 0..n {
        for b in 0..a {
            if t[a][b] != t[b][a] {
                return Err(Error::NonAbelian);
            }
        }
    }
    let mut inside = vec![false; n];
    inside[0] = true;
    let mut members = vec![0usize];
    let mut chars: Vec<Vec<Option<Ratio<i64>>>> = vec![{
        let mut v = vec![None; n];
        v[0] = Some(Ratio::zero());
        v
    }];
    for x in 1..n {
        if inside[x] {
            continue;
        }
        let mut powers = vec![0usize, x];
        while !inside[*powers.last().unwrap()] {
            let p = t[*powers.last().unwrap()][x];
            powers.push(p);
        }
        let k = powers.len() - 1;
        let xk = powers[k];
        let mut next = Vec::with_capacity(chars.len() * k);
        for c in &chars {
            let base = c[xk].expect("x^k lies in the subgroup");
            for j in 0..k as i64 {
                let step = (base + Ratio::from_integer(j)) / Ratio::from_integer(k as i64);
                let mut v = c.clone();
                for (i, &p) in powers.iter().enumerate().take(k).skip(1) {
                    for &s in &members {
                        let a = frac(c[s].unwrap() + step * Ratio::from_integer(i as i64));
                        v[t[p][s]] = Some(a);
                    }
                }
                next.push(v);
            }
        }
        let mut grown = members.clone();
        for &p in powers.iter().take(k).skip(1) {
            for &s in &members {
                grown.push(t[p][s]);
            }
        }
        for &y in &grown {
            inside[y] = true;
        }
        members = grown;
        chars = next;
    }
    Ok(chars
        .into_iter()
        .map(|c| Character { angles: c.into_iter().map(|a| a.expect("group exhausted")).collect() })
        .collect())
}

/// Angles as `"p/q"` strings, for reports.
pub(crate) fn angle_strings(c: &Character) -> Vec<String> {
    c.angles.iter().map(ToString::to_string).collect()
}
