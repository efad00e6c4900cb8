use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::tree::{LeafSet, ShelfTree};

/// Parses `"p/q"` or an integer.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let bad = || Error::RationalParse(s.to_string());
    let t = s.trim();
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let n: BigInt = num.parse().map_err(|_| bad())?;
    let d: BigInt = den.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(n, d))
}

/// `"p/q"`, or `"p"` for integers.
pub fn format_rational(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Exact nonnegative values for the `x_E`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Weights {
    values: BTreeMap<LeafSet, BigRational>,
}

impl Weights {
    pub fn new(values: BTreeMap<LeafSet, BigRational>) -> Result<Self> {
        if let Some((e, _)) = values.iter().find(|(_, v)| v.is_negative()) {
            return Err(Error::NegativeWeight(e.key()));
        }
        Ok(Weights { values })
    }

    pub fn from_strings(raw: &BTreeMap<String, String>) -> Result<Self> {
        let values = raw
            .iter()
            .map(|(k, v)| Ok((LeafSet::from_key(k)?, parse_rational(v)?)))
            .collect::<Result<_>>()?;
        Weights::new(values)
    }

    /// Weights proportional to `raw`, normalized to sum 1.
    pub fn proportional(sets: &[LeafSet], raw: impl IntoIterator<Item = u64>) -> Self {
        let raw: Vec<BigInt> = raw.into_iter().map(BigInt::from).collect();
        let total: BigInt = raw.iter().sum();
        let values = sets
            .iter()
            .cloned()
            .zip(raw)
            .map(|(e, r)| (e, BigRational::new(r, total.clone())))
            .collect();
        Weights { values }
    }

    pub fn uniform(sets: &[LeafSet]) -> Self {
        Weights::proportional(sets, std::iter::repeat_n(1, sets.len()))
    }

    /// Three fixed stochastic vectors with pairwise distinct entries:
    /// proportional to the first primes, to `1..=n`, and to
    /// `(n - i)^2 + i` for `i = 0..n`.
    pub fn standard(sets: &[LeafSet]) -> Vec<Weights> {
        let n = sets.len() as u64;
        vec![
            Weights::proportional(sets, primes(sets.len())),
            Weights::proportional(sets, 1..=n),
            Weights::proportional(sets, (0..n).map(|i| (n - i) * (n - i) + i)),
        ]
    }

    pub fn get(&self, e: &LeafSet) -> Result<&BigRational> {
        self.values.get(e).ok_or_else(|| Error::MissingWeight(e.key()))
    }

    pub fn values(&self) -> &BTreeMap<LeafSet, BigRational> {
        &self.values
    }

    pub fn total(&self) -> BigRational {
        self.values.values().fold(BigRational::zero(), |a, b| a + b)
    }

    /// Every admissible set has a weight and no other key is present.
    pub fn check_against(&self, t: &ShelfTree) -> Result<()> {
        let sets = t.admissible_sets();
        for e in &sets {
            self.get(e)?;
        }
        for e in self.values.keys() {
            if !t.is_admissible(e) {
                return Err(Error::InadmissibleSet(e.key()));
            }
        }
        Ok(())
    }

    /// Least common denominator of all values.
    pub fn common_denominator(&self) -> BigInt {
        self.values.values().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()))
    }
}

impl Serialize for Weights {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut m = s.serialize_map(Some(self.values.len()))?;
        for (e, v) in &self.values {
            m.serialize_entry(&e.key(), &format_rational(v))?;
        }
        m.end()
    }
}

impl<'de> Deserialize<'de> for Weights {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = BTreeMap::<String, String>::deserialize(d)?;
        Weights::from_strings(&raw).map_err(serde::de::Error::custom)
    }
}

fn primes(count: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(count);
    let mut c = 2u64;
    while out.len() < count {
        if out.iter().take_while(|&&p| p * p <= c).all(|&p| !c.is_multiple_of(p)) {
            out.push(c);
        }
        c += 1;
    }
    out
}

/// Dense square matrix of exact rationals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalMatrix {
    rows: Vec<Vec<BigRational>>,
}

impl RationalMatrix {
    pub fn new(rows: Vec<Vec<BigRational>>) -> Result<Self> {
        let n = rows.len();
        if let Some(r) = rows.iter().find(|r| r.len() != n) {
            return Err(Error::NotSquare(n, r.len()));
        }
        Ok(RationalMatrix { rows })
    }

    pub fn from_integers(rows: &[Vec<i64>]) -> Result<Self> {
        RationalMatrix::new(
            rows.iter()
                .map(|r| r.iter().map(|&x| BigRational::from_integer(x.into())).collect())
                .collect(),
        )
    }

    pub fn identity(n: usize) -> Self {
        let rows = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| if i == j { BigRational::one() } else { BigRational::zero() })
                    .collect()
            })
            .collect();
        RationalMatrix { rows }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<BigRational>] {
        &self.rows
    }

    pub fn get(&self, i: usize, j: usize) -> &BigRational {
        &self.rows[i][j]
    }

    pub fn is_row_stochastic(&self) -> bool {
        self.rows.iter().all(|r| {
            r.iter().all(|x| !x.is_negative()) && r.iter().fold(BigRational::zero(), |a, b| a + b).is_one()
        })
    }

    /// Row vector times matrix.
    pub fn left_mul(&self, v: &[BigRational]) -> Vec<BigRational> {
        let n = self.dim();
        let mut out = vec![BigRational::zero(); n];
        for (i, row) in self.rows.iter().enumerate() {
            if v[i].is_zero() {
                continue;
            }
            for (j, x) in row.iter().enumerate() {
                if !x.is_zero() {
                    out[j] += &v[i] * x;
                }
            }
        }
        out
    }

    pub fn mul(&self, other: &RationalMatrix) -> RationalMatrix {
        let n = self.dim();
        let mut rows = vec![vec![BigRational::zero(); n]; n];
        for i in 0..n {
            for k in 0..n {
                let a = &self.rows[i][k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = &other.rows[k][j];
                    if !b.is_zero() {
                        rows[i][j] += a * b;
                    }
                }
            }
        }
        RationalMatrix { rows }
    }

    /// Determinant by Gaussian elimination over the rationals.
    pub fn determinant(&self) -> BigRational {
        let n = self.dim();
        let mut a = self.rows.clone();
        let mut det = BigRational::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&r| !a[r][c].is_zero()) else {
                return BigRational::zero();
            };
            if p != c {
                a.swap(p, c);
                det = -det;
            }
            let pivot = a[c][c].clone();
            det *= &pivot;
            for r in c + 1..n {
                if a[r][c].is_zero() {
                    continue;
                }
                let f = &a[r][c] / &pivot;
                for k in c..n {
                    let sub = &f * &a[c][k];
                    a[r][k] -= sub;
                }
            }
        }
        det
    }
}

/// Polynomial in `t` with exact rational coefficients, lowest degree first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalPolynomial {
    coeffs: Vec<BigRational>,
}

impl RationalPolynomial {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        RationalPolynomial { coeffs }
    }

    pub fn one() -> Self {
        RationalPolynomial { coeffs: vec![BigRational::one()] }
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().is_some_and(One::is_one)
    }

    pub fn eval(&self, t: &BigRational) -> BigRational {
        self.coeffs.iter().rev().fold(BigRational::zero(), |acc, c| acc * t + c)
    }

    /// Multiplies in place by `(t - r)`.
    pub fn mul_linear(&mut self, r: &BigRational) {
        let mut next = vec![BigRational::zero(); self.coeffs.len() + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            next[i + 1] += c;
            next[i] -= c * r;
        }
        *self = RationalPolynomial::new(next);
    }

    /// `Π (t - r)^m`.
    pub fn from_roots<'a>(roots: impl IntoIterator<Item = (&'a BigRational, u64)>) -> Self {
        let mut p = RationalPolynomial::one();
        for (r, m) in roots {
            for _ in 0..m {
                p.mul_linear(r);
            }
        }
        p
    }

    pub fn sub(&self, other: &RationalPolynomial) -> RationalPolynomial {
        let n = self.coeffs.len().max(other.coeffs.len());
        let zero = BigRational::zero();
        RationalPolynomial::new(
            (0..n)
                .map(|i| self.coeffs.get(i).unwrap_or(&zero) - other.coeffs.get(i).unwrap_or(&zero))
                .collect(),
        )
    }
}

impl fmt::Display for RationalPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            let mono = match k {
                0 => String::new(),
                1 => "t".to_string(),
                _ => format!("t^{k}"),
            };
            let body = if mag.is_one() && k > 0 {
                mono
            } else if k == 0 {
                format_rational(&mag)
            } else {
                format!("{}*{}", format_rational(&mag), mono)
            };
            match (first, c.is_negative()) {
                (true, false) => write!(f, "{body}")?,
                (true, true) => write!(f, "-{body}")?,
                (false, false) => write!(f, " + {body}")?,
                (false, true) => write!(f, " - {body}")?,
            }
            first = false;
        }
        Ok(())
    }
}
