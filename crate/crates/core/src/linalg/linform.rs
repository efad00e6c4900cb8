use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Neg, Sub};

use num_rational::BigRational;
use num_traits::Zero;
use serde::ser::SerializeMap;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::linalg::Weights;
use crate::tree::LeafSet;

/// Integer combination of the indeterminates `x_E`. Zero coefficients are
/// never stored.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LinForm {
    terms: BTreeMap<LeafSet, i64>,
}

impl LinForm {
    pub fn zero() -> Self {
        LinForm::default()
    }

    /// The single indeterminate `x_E`.
    pub fn var(e: LeafSet) -> Self {
        LinForm::term(e, 1)
    }

    pub fn term(e: LeafSet, c: i64) -> Self {
        let mut f = LinForm::zero();
        f.add_term(e, c);
        f
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (LeafSet, i64)>) -> Self {
        let mut f = LinForm::zero();
        for (e, c) in terms {
            f.add_term(e, c);
        }
        f
    }

    pub fn add_term(&mut self, e: LeafSet, c: i64) {
        if c == 0 {
            return;
        }
        match self.terms.entry(e) {
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if *o.get() == 0 {
                    o.remove();
                }
            }
            Entry::Vacant(v) => {
                v.insert(c);
            }
        }
    }

    pub fn coeff(&self, e: &LeafSet) -> i64 {
        self.terms.get(e).copied().unwrap_or(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&LeafSet, i64)> {
        self.terms.iter().map(|(k, &v)| (k, v))
    }

    #[allow(clippy::len_without_is_empty)] // is_zero plays that role
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Value at the given weights.
    pub fn eval(&self, w: &Weights) -> Result<BigRational> {
        let mut acc = BigRational::zero();
        for (e, c) in self.terms() {
            acc += w.get(e)? * BigRational::from_integer(c.into());
        }
        Ok(acc)
    }

    pub fn scale(&self, k: i64) -> LinForm {
        LinForm::from_terms(self.terms().map(|(e, c)| (e.clone(), c * k)))
    }

    /// Canonical key → coefficient map.
    pub fn to_key_map(&self) -> BTreeMap<String, i64> {
        self.terms().map(|(e, c)| (e.key(), c)).collect()
    }

    pub fn from_key_map(m: &BTreeMap<String, i64>) -> Result<Self> {
        m.iter()
            .map(|(k, &c)| LeafSet::from_key(k).map(|e| (e, c)))
            .collect::<Result<Vec<_>>>()
            .map(LinForm::from_terms)
    }

    pub fn max_abs_coeff(&self) -> i64 {
        self.terms.values().map(|c| c.abs()).max().unwrap_or(0)
    }
}

impl AddAssign<&LinForm> for LinForm {
    fn add_assign(&mut self, rhs: &LinForm) {
        for (e, c) in rhs.terms() {
            self.add_term(e.clone(), c);
        }
    }
}

impl Add<&LinForm> for &LinForm {
    type Output = LinForm;
    fn add(self, rhs: &LinForm) -> LinForm {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Neg for &LinForm {
    type Output = LinForm;
    fn neg(self) -> LinForm {
        self.scale(-1)
    }
}

impl Sub<&LinForm> for &LinForm {
    type Output = LinForm;
    fn sub(self, rhs: &LinForm) -> LinForm {
        self + &(-rhs)
    }
}

fn var_name(e: &LeafSet) -> String {
    let shown = e.to_string();
    if shown.contains(',') {
        format!("x{{{shown}}}")
    } else {
        format!("x{shown}")
    }
}

impl fmt::Display for LinForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms().enumerate() {
            let name = var_name(e);
            let mag = c.unsigned_abs();
            let body = if mag == 1 { name } else { format!("{mag}{name}") };
            match (i, c < 0) {
                (0, false) => write!(f, "{body}")?,
                (0, true) => write!(f, "-{body}")?,
                (_, false) => write!(f, " + {body}")?,
                (_, true) => write!(f, " - {body}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for LinForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LinForm({self})")
    }
}

impl Serialize for LinForm {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(self.terms.len()))?;
        for (e, c) in self.terms() {
            m.serialize_entry(&e.key(), &c)?;
        }
        m.end()
    }
}

impl<'de> Deserialize<'de> for LinForm {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let m = BTreeMap::<String, i64>::deserialize(d)?;
        LinForm::from_key_map(&m).map_err(serde::de::Error::custom)
    }
}

/// Parses `"x14 + x24 - x1 + x∅"` style text; used by tests and fixtures.
pub fn parse_linform(text: &str) -> Result<LinForm> {
    let bad = || Error::Instance(format!("cannot parse linear form {text:?}"));
    let cleaned = text.replace('−', "-").replace(' ', "");
    let mut f = LinForm::zero();
    let mut rest = cleaned.as_str();
    while !rest.is_empty() {
        let (sign, body) = match rest.as_bytes()[0] {
            b'+' => (1, &rest[1..]),
            b'-' => (-1, &rest[1..]),
            _ => (1, rest),
        };
        let end = body[1..].find(['+', '-']).map(|i| i + 1).unwrap_or(body.len());
        let term = &body[..end];
        rest = &body[end..];
        let xpos = term.find('x').ok_or_else(bad)?;
        let coeff: i64 = if xpos == 0 { 1 } else { term[..xpos].parse().map_err(|_| bad())? };
        let name = term[xpos + 1..].trim_start_matches('_');
        let name = name.trim_start_matches('{').trim_end_matches('}');
        let e = if name == "∅" || name.is_empty() {
            LeafSet::empty()
        } else if name.contains(',') {
            LeafSet::from_key(name)?
        } else {
            LeafSet::new(name.chars().map(|c| c.to_digit(10).ok_or_else(bad)).collect::<Result<Vec<_>>>()?)
        };
        f.add_term(e, sign * coeff);
    }
    Ok(f)
}
