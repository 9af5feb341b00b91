use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num::{One, Zero};

use super::{fmt_rational, parse_rational, Rational};
use crate::error::{Error, Result};

/// A finitely supported rational vector over an ordered key set.
///
/// Zero coefficients are never stored, so two vectors are equal exactly when
/// their maps are equal.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SparseVec<K: Ord> {
    entries: BTreeMap<K, Rational>,
}

/// An element of `V` or `V_*` in the coordinates `e_i` / `e^i`.
pub type FinVec = SparseVec<usize>;

impl<K: Ord> Default for SparseVec<K> {
    fn default() -> Self {
        SparseVec {
            entries: BTreeMap::new(),
        }
    }
}

impl<K: Ord + Clone> SparseVec<K> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn single(key: K, coeff: Rational) -> Self {
        let mut v = Self::zero();
        v.add_term(key, coeff);
        v
    }

    /// Sums repeated keys and drops zeros.
    pub fn from_terms(terms: impl IntoIterator<Item = (K, Rational)>) -> Self {
        let mut v = Self::zero();
        for (k, c) in terms {
            v.add_term(k, c);
        }
        v
    }

    pub fn add_term(&mut self, key: K, coeff: Rational) {
        if coeff.is_zero() {
            return;
        }
        match self.entries.entry(key) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += coeff;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn get(&self, key: &K) -> Option<&Rational> {
        self.entries.get(key)
    }

    pub fn coeff(&self, key: &K) -> Rational {
        self.entries
            .get(key)
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn remove(&mut self, key: &K) -> Option<Rational> {
        self.entries.remove(key)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    /// Number of stored (nonzero) coefficients.
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&K, &Rational)> + '_ {
        self.entries.iter()
    }

    pub fn keys(&self) -> impl Iterator<Item = &K> + '_ {
        self.entries.keys()
    }

    pub fn range_from<'a>(&'a self, key: &K) -> impl Iterator<Item = (&'a K, &'a Rational)> + 'a {
        self.entries.range((
            std::ops::Bound::Excluded(key.clone()),
            std::ops::Bound::Unbounded,
        ))
    }

    pub fn leading(&self) -> Option<(&K, &Rational)> {
        self.entries.iter().next()
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        SparseVec {
            entries: self
                .entries
                .iter()
                .map(|(k, v)| (k.clone(), v * c))
                .collect(),
        }
    }

    /// `self += c * other`.
    pub fn add_scaled(&mut self, other: &Self, c: &Rational) {
        if c.is_zero() {
            return;
        }
        for (k, v) in &other.entries {
            self.add_term(k.clone(), v * c);
        }
    }

    /// The coordinate dot product `sum_k self[k] * other[k]`.
    pub fn dot(&self, other: &Self) -> Rational {
        let (small, large) = if self.len() <= other.len() {
            (self, other)
        } else {
            (other, self)
        };
        small
            .entries
            .iter()
            .filter_map(|(k, v)| large.entries.get(k).map(|w| v * w))
            .fold(Rational::zero(), |acc, x| acc + x)
    }

    pub fn map_keys<L: Ord + Clone>(&self, mut f: impl FnMut(&K) -> L) -> SparseVec<L> {
        SparseVec::from_terms(self.entries.iter().map(|(k, v)| (f(k), v.clone())))
    }
}

impl FinVec {
    /// The basis vector `e_i` (or `e^i`).
    pub fn basis(i: usize) -> Self {
        assert!(i >= 1, "basis indices are 1-based");
        Self::single(i, Rational::one())
    }

    pub fn from_pairs(pairs: &[(usize, i64)]) -> Self {
        Self::from_terms(pairs.iter().map(|&(i, c)| (i, super::rat(c))))
    }

    /// Largest index in the support, or 0 for the zero vector.
    pub fn max_index(&self) -> usize {
        self.entries.keys().next_back().copied().unwrap_or(0)
    }

    pub fn within(&self, n: usize) -> bool {
        self.max_index() <= n
    }

    /// Dense coordinates `1..=n`; entries beyond `n` are dropped.
    pub fn to_dense(&self, n: usize) -> Vec<Rational> {
        (1..=n).map(|i| self.coeff(&i)).collect()
    }

    pub fn from_dense(coords: &[Rational]) -> Self {
        Self::from_terms(coords.iter().enumerate().map(|(i, c)| (i + 1, c.clone())))
    }
}

/// The standard pairing of `V` with `V_*`, `e^i(e_j) = δ_ij`.
pub fn vec_pair_std(v: &FinVec, f: &FinVec) -> Rational {
    v.dot(f)
}

impl<K: Ord + Clone> AddAssign<&SparseVec<K>> for SparseVec<K> {
    fn add_assign(&mut self, rhs: &SparseVec<K>) {
        self.add_scaled(rhs, &Rational::one());
    }
}

impl<K: Ord + Clone> SubAssign<&SparseVec<K>> for SparseVec<K> {
    fn sub_assign(&mut self, rhs: &SparseVec<K>) {
        self.add_scaled(rhs, &-Rational::one());
    }
}

impl<K: Ord + Clone> Add for &SparseVec<K> {
    type Output = SparseVec<K>;
    fn add(self, rhs: Self) -> SparseVec<K> {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl<K: Ord + Clone> Sub for &SparseVec<K> {
    type Output = SparseVec<K>;
    fn sub(self, rhs: Self) -> SparseVec<K> {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl<K: Ord + Clone> Neg for &SparseVec<K> {
    type Output = SparseVec<K>;
    fn neg(self) -> SparseVec<K> {
        self.scale(&-Rational::one())
    }
}

impl<K: Ord + fmt::Debug> fmt::Debug for SparseVec<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map()
            .entries(self.entries.iter().map(|(k, v)| (k, fmt_rational(v))))
            .finish()
    }
}

/// `index:rational` pairs separated by single spaces, sorted by index.
impl fmt::Display for FinVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (n, (i, c)) in self.entries.iter().enumerate() {
            if n > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{}:{}", i, fmt_rational(c))?;
        }
        Ok(())
    }
}

impl FromStr for FinVec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut v = FinVec::zero();
        for (column, token) in super::tokens(s) {
            let (i, c) = token.split_once(':').ok_or_else(|| {
                Error::parse(
                    1,
                    column,
                    format!("expected `index:rational`, got `{token}`"),
                )
            })?;
            let i: usize = i
                .parse()
                .map_err(|_| Error::parse(1, column, format!("bad index `{i}`")))?;
            if i == 0 {
                return Err(Error::parse(1, column, "indices are 1-based"));
            }
            let c = parse_rational(c)
                .ok_or_else(|| Error::parse(1, column, format!("bad rational `{c}`")))?;
            v.add_term(i, c);
        }
        Ok(v)
    }
}
