//! Finite formal linear combinations with rational coefficients.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Neg, Sub, SubAssign};

use num_traits::{One, Zero};

use crate::linalg::QRational;

/// A finitely supported map `T -> Q` with no zero coefficients stored.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QCombo<T: Ord> {
    terms: BTreeMap<T, QRational>,
}

impl<T: Ord> Default for QCombo<T> {
    fn default() -> Self {
        Self { terms: BTreeMap::new() }
    }
}

impl<T: Ord + Clone> QCombo<T> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn term(key: T, coeff: QRational) -> Self {
        let mut c = Self::zero();
        c.add_term(key, coeff);
        c
    }

    pub fn unit(key: T) -> Self {
        Self::term(key, QRational::one())
    }

    pub fn add_term(&mut self, key: T, coeff: QRational) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(key) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += coeff;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &QCombo<T>, factor: &QRational) {
        if factor.is_zero() {
            return;
        }
        for (k, v) in &other.terms {
            self.add_term(k.clone(), v * factor);
        }
    }

    pub fn coeff(&self, key: &T) -> QRational {
        self.terms.get(key).cloned().unwrap_or_else(QRational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&T, &QRational)> {
        self.terms.iter()
    }

    pub fn keys(&self) -> impl Iterator<Item = &T> {
        self.terms.keys()
    }

    pub fn scaled(&self, factor: &QRational) -> Self {
        let mut out = Self::zero();
        out.add_scaled(self, factor);
        out
    }

    /// Applies `f` to every key and sums the images with the original coefficients.
    pub fn map_linear<U: Ord + Clone>(&self, mut f: impl FnMut(&T) -> QCombo<U>) -> QCombo<U> {
        let mut out = QCombo::zero();
        for (k, v) in &self.terms {
            out.add_scaled(&f(k), v);
        }
        out
    }

    /// Relabels keys; coefficients of colliding images are summed.
    pub fn map_keys<U: Ord + Clone>(&self, mut f: impl FnMut(&T) -> U) -> QCombo<U> {
        let mut out = QCombo::zero();
        for (k, v) in &self.terms {
            out.add_term(f(k), v.clone());
        }
        out
    }

    pub fn into_terms(self) -> BTreeMap<T, QRational> {
        self.terms
    }
}

impl<T: Ord + Clone> FromIterator<(T, QRational)> for QCombo<T> {
    fn from_iter<I: IntoIterator<Item = (T, QRational)>>(iter: I) -> Self {
        let mut out = Self::zero();
        for (k, v) in iter {
            out.add_term(k, v);
        }
        out
    }
}

impl<T: Ord + Clone> AddAssign<&QCombo<T>> for QCombo<T> {
    fn add_assign(&mut self, rhs: &QCombo<T>) {
        self.add_scaled(rhs, &QRational::one());
    }
}

impl<T: Ord + Clone> SubAssign<&QCombo<T>> for QCombo<T> {
    fn sub_assign(&mut self, rhs: &QCombo<T>) {
        self.add_scaled(rhs, &-QRational::one());
    }
}

impl<T: Ord + Clone> Add for &QCombo<T> {
    type Output = QCombo<T>;
    fn add(self, rhs: &QCombo<T>) -> QCombo<T> {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl<T: Ord + Clone> Sub for &QCombo<T> {
    type Output = QCombo<T>;
    fn sub(self, rhs: &QCombo<T>) -> QCombo<T> {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl<T: Ord + Clone> Neg for &QCombo<T> {
    type Output = QCombo<T>;
    fn neg(self) -> QCombo<T> {
        self.scaled(&-QRational::one())
    }
}

impl<T: Ord + fmt::Debug> fmt::Debug for QCombo<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.terms.iter().map(|(k, v)| (k, v.to_string()))).finish()
    }
}
