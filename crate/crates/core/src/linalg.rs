//! Exact linear algebra over the rationals.
//!
//! Matrices are stored as sparse rows. Elimination is incremental: rows are
//! reduced one at a time against a growing echelon form whose pivot entries are
//! normalised to 1, so intermediate values stay exact and the result does not
//! depend on anything but the input row order.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::combo::QCombo;

pub type QRational = BigRational;

pub fn q(n: i64, d: i64) -> QRational {
    QRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn qi(n: i64) -> QRational {
    QRational::from_integer(BigInt::from(n))
}

/// Renders a rational as `"p/q"` (or `"p"` for integers).
pub fn q_to_string(x: &QRational) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinalgError {
    #[error("right-hand side is not in the column span")]
    NoSolution,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("index ({row}, {col}) out of bounds for a {rows}x{cols} matrix")]
    OutOfBounds { row: usize, col: usize, rows: usize, cols: usize },
}

/// Sparse row: sorted `(column, value)` pairs without zeros.
pub type SparseRow = Vec<(usize, QRational)>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BTreeMap<usize, QRational>>,
}

impl QMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![BTreeMap::new(); rows] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i].insert(i, QRational::one());
        }
        m
    }

    pub fn from_rows(rows: &[Vec<QRational>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        let mut m = Self::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), cols, "ragged matrix");
            for (j, v) in r.iter().enumerate() {
                if !v.is_zero() {
                    m.data[i].insert(j, v.clone());
                }
            }
        }
        m
    }

    pub fn from_i64(rows: &[Vec<i64>]) -> Self {
        let conv: Vec<Vec<QRational>> = rows.iter().map(|r| r.iter().map(|&x| qi(x)).collect()).collect();
        Self::from_rows(&conv)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, row: usize, col: usize) -> QRational {
        self.data[row].get(&col).cloned().unwrap_or_else(QRational::zero)
    }

    pub fn set(&mut self, row: usize, col: usize, value: QRational) -> Result<(), LinalgError> {
        if row >= self.rows || col >= self.cols {
            return Err(LinalgError::OutOfBounds { row, col, rows: self.rows, cols: self.cols });
        }
        if value.is_zero() {
            self.data[row].remove(&col);
        } else {
            self.data[row].insert(col, value);
        }
        Ok(())
    }

    /// Appends a sparse row; entries beyond `cols` are rejected.
    pub fn push_row(&mut self, row: impl IntoIterator<Item = (usize, QRational)>) -> Result<(), LinalgError> {
        let mut map = BTreeMap::new();
        for (c, v) in row {
            if c >= self.cols {
                return Err(LinalgError::OutOfBounds { row: self.rows, col: c, rows: self.rows + 1, cols: self.cols });
            }
            if !v.is_zero() {
                *map.entry(c).or_insert_with(QRational::zero) += v;
            }
        }
        map.retain(|_, v: &mut QRational| !v.is_zero());
        self.data.push(map);
        self.rows += 1;
        Ok(())
    }

    pub fn row_entries(&self, row: usize) -> impl Iterator<Item = (usize, &QRational)> {
        self.data[row].iter().map(|(c, v)| (*c, v))
    }

    pub fn to_dense(&self) -> Vec<Vec<QRational>> {
        (0..self.rows).map(|i| (0..self.cols).map(|j| self.get(i, j)).collect()).collect()
    }

    pub fn mul(&self, other: &QMatrix) -> Result<QMatrix, LinalgError> {
        if self.cols != other.rows {
            return Err(LinalgError::DimensionMismatch { expected: self.cols, got: other.rows });
        }
        let mut out = QMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            let mut acc: BTreeMap<usize, QRational> = BTreeMap::new();
            for (k, a) in &self.data[i] {
                for (j, b) in &other.data[*k] {
                    *acc.entry(*j).or_insert_with(QRational::zero) += a * b;
                }
            }
            acc.retain(|_, v| !v.is_zero());
            out.data[i] = acc;
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[QRational]) -> Result<Vec<QRational>, LinalgError> {
        if v.len() != self.cols {
            return Err(LinalgError::DimensionMismatch { expected: self.cols, got: v.len() });
        }
        Ok(self
            .data
            .iter()
            .map(|r| r.iter().fold(QRational::zero(), |acc, (c, x)| acc + x * &v[*c]))
            .collect())
    }

    fn echelon(&self) -> Echelon {
        let mut e = Echelon::new();
        for r in &self.data {
            e.insert(r.iter().map(|(c, v)| (*c, v.clone())).collect());
        }
        e
    }

    pub fn rank(&self) -> usize {
        self.echelon().rank()
    }

    /// Basis of the right kernel, one vector per free column.
    pub fn nullspace(&self) -> Vec<QCombo<usize>> {
        let mut e = self.echelon();
        e.make_reduced();
        let pivots: Vec<usize> = e.pivot_columns();
        let pivot_set: std::collections::BTreeSet<usize> = pivots.iter().copied().collect();
        let mut out = Vec::new();
        for free in (0..self.cols).filter(|c| !pivot_set.contains(c)) {
            let mut v = QCombo::unit(free);
            for &p in &pivots {
                let row = e.row_for_pivot(p);
                if let Some(x) = row.get(&free) {
                    v.add_term(p, -x.clone());
                }
            }
            out.push(v);
        }
        out
    }

    /// One exact solution of `self * x = b`, with free variables set to zero.
    pub fn solve(&self, b: &[QRational]) -> Result<Vec<QRational>, LinalgError> {
        if b.len() != self.rows {
            return Err(LinalgError::DimensionMismatch { expected: self.rows, got: b.len() });
        }
        let aug = self.cols;
        let mut e = Echelon::new();
        for (r, rhs) in self.data.iter().zip(b) {
            let mut row: BTreeMap<usize, QRational> = r.clone();
            if !rhs.is_zero() {
                row.insert(aug, rhs.clone());
            }
            e.insert(row);
        }
        if e.has_pivot(aug) {
            return Err(LinalgError::NoSolution);
        }
        e.make_reduced();
        let mut x = vec![QRational::zero(); self.cols];
        for p in e.pivot_columns() {
            x[p] = e.row_for_pivot(p).get(&aug).cloned().unwrap_or_else(QRational::zero);
        }
        Ok(x)
    }
}

/// Row echelon form built one row at a time; each stored row is monic at its pivot
/// and has no entries left of it.
#[derive(Clone, Debug, Default)]
pub struct Echelon {
    rows: Vec<BTreeMap<usize, QRational>>,
    pivot_of_col: BTreeMap<usize, usize>,
}

impl Echelon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn has_pivot(&self, col: usize) -> bool {
        self.pivot_of_col.contains_key(&col)
    }

    pub fn pivot_columns(&self) -> Vec<usize> {
        self.pivot_of_col.keys().copied().collect()
    }

    pub fn row_for_pivot(&self, col: usize) -> &BTreeMap<usize, QRational> {
        &self.rows[self.pivot_of_col[&col]]
    }

    /// Eliminates all pivot columns from `row`; returns the factors used.
    pub fn reduce(&self, row: &mut BTreeMap<usize, QRational>) -> Vec<(usize, QRational)> {
        let mut used = Vec::new();
        let mut cursor = 0usize;
        loop {
            let next = row
                .range(cursor..)
                .find(|(c, _)| self.pivot_of_col.contains_key(c))
                .map(|(c, v)| (*c, v.clone()));
            let Some((col, factor)) = next else { break };
            let ridx = self.pivot_of_col[&col];
            for (c, v) in &self.rows[ridx] {
                let entry = row.entry(*c).or_insert_with(QRational::zero);
                *entry -= &factor * v;
                if entry.is_zero() {
                    row.remove(c);
                }
            }
            used.push((ridx, factor));
            cursor = col + 1;
        }
        used
    }

    /// Inserts a row; returns its pivot column if it was independent.
    pub fn insert(&mut self, mut row: BTreeMap<usize, QRational>) -> Option<usize> {
        row.retain(|_, v| !v.is_zero());
        self.reduce(&mut row);
        let (&pivot, lead) = row.iter().next()?;
        let inv = lead.recip();
        for v in row.values_mut() {
            *v *= &inv;
        }
        self.pivot_of_col.insert(pivot, self.rows.len());
        self.rows.push(row);
        Some(pivot)
    }

    pub fn contains(&self, row: &BTreeMap<usize, QRational>) -> bool {
        let mut r = row.clone();
        r.retain(|_, v| !v.is_zero());
        self.reduce(&mut r);
        r.is_empty()
    }

    /// Clears every pivot column above its pivot (reduced row echelon form).
    pub fn make_reduced(&mut self) {
        let order: Vec<(usize, usize)> = self.pivot_of_col.iter().rev().map(|(c, r)| (*c, *r)).collect();
        for (col, ridx) in order {
            let pivot_row = self.rows[ridx].clone();
            for (other, row) in self.rows.iter_mut().enumerate() {
                if other == ridx {
                    continue;
                }
                if let Some(f) = row.get(&col).cloned() {
                    for (c, v) in &pivot_row {
                        let e = row.entry(*c).or_insert_with(QRational::zero);
                        *e -= &f * v;
                        if e.is_zero() {
                            row.remove(c);
                        }
                    }
                }
            }
        }
    }
}

/// Coordinates with respect to a fixed spanning family of sparse vectors.
///
/// Vectors are inserted in order; a vector already in the span of its
/// predecessors is recorded as dependent and receives no coordinate role.
#[derive(Clone, Debug, Default)]
pub struct SubspaceCoords {
    echelon: Echelon,
    combos: Vec<BTreeMap<usize, QRational>>,
    dependent: Vec<usize>,
    count: usize,
}

impl SubspaceCoords {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_vectors<I>(vectors: I) -> Self
    where
        I: IntoIterator<Item = BTreeMap<usize, QRational>>,
    {
        let mut s = Self::new();
        for v in vectors {
            s.push(v);
        }
        s
    }

    /// Adds the next spanning vector; returns false if it was dependent.
    pub fn push(&mut self, mut v: BTreeMap<usize, QRational>) -> bool {
        let index = self.count;
        self.count += 1;
        v.retain(|_, x| !x.is_zero());
        let used = self.echelon.reduce(&mut v);
        let Some((&pivot, lead)) = v.iter().next() else {
            self.dependent.push(index);
            return false;
        };
        let inv = lead.recip();
        let mut combo: BTreeMap<usize, QRational> = BTreeMap::new();
        combo.insert(index, QRational::one());
        for (ridx, f) in used {
            for (i, c) in &self.combos[ridx] {
                let e = combo.entry(*i).or_insert_with(QRational::zero);
                *e -= &f * c;
            }
        }
        combo.retain(|_, x| !x.is_zero());
        for x in combo.values_mut() {
            *x *= &inv;
        }
        for x in v.values_mut() {
            *x *= &inv;
        }
        self.echelon.pivot_of_col.insert(pivot, self.echelon.rows.len());
        self.echelon.rows.push(v);
        self.combos.push(combo);
        true
    }

    pub fn rank(&self) -> usize {
        self.echelon.rank()
    }

    pub fn len(&self) -> usize {
        self.count
    }

    pub fn is_empty(&self) -> bool {
        self.count == 0
    }

    pub fn dependent(&self) -> &[usize] {
        &self.dependent
    }

    /// Coordinates of `target` in the spanning family, or `None` if outside the span.
    pub fn coords(&self, target: &BTreeMap<usize, QRational>) -> Option<BTreeMap<usize, QRational>> {
        let mut r = target.clone();
        r.retain(|_, x| !x.is_zero());
        let used = self.echelon.reduce(&mut r);
        if !r.is_empty() {
            return None;
        }
        let mut out: BTreeMap<usize, QRational> = BTreeMap::new();
        for (ridx, f) in used {
            for (i, c) in &self.combos[ridx] {
                let e = out.entry(*i).or_insert_with(QRational::zero);
                *e += &f * c;
            }
        }
        out.retain(|_, x| !x.is_zero());
        Some(out)
    }
}

/// Binomial coefficient with the convention C(a, b) = 0 unless 0 <= b <= a.
pub fn binom(a: i64, b: i64) -> BigInt {
    if b < 0 || a < 0 || b > a {
        return BigInt::zero();
    }
    let b = b.min(a - b);
    let mut r = BigInt::one();
    for i in 0..b {
        r = r * BigInt::from(a - i) / BigInt::from(i + 1);
    }
    r
}

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_rank_and_kernel() {
        let m = QMatrix::identity(3);
        assert_eq!(m.rank(), 3);
        assert!(m.nullspace().is_empty());
        assert_eq!(QMatrix::zeros(4, 7).rank(), 0);
    }

    #[test]
    fn one_by_two_kernel() {
        let m = QMatrix::from_i64(&[vec![1, 1]]);
        let k = m.nullspace();
        assert_eq!(k.len(), 1);
        assert_eq!(k[0].coeff(&0), -k[0].coeff(&1));
    }

    #[test]
    fn solve_inconsistent() {
        let m = QMatrix::zeros(1, 1);
        assert_eq!(m.solve(&[qi(1)]), Err(LinalgError::NoSolution));
        let id = QMatrix::identity(2);
        assert_eq!(id.solve(&[q(1, 2), qi(3)]).unwrap(), vec![q(1, 2), qi(3)]);
    }

    #[test]
    fn coords_roundtrip() {
        let v0: BTreeMap<usize, QRational> = [(0, qi(1)), (1, qi(2))].into_iter().collect();
        let v1: BTreeMap<usize, QRational> = [(1, qi(1)), (2, qi(1))].into_iter().collect();
        let s = SubspaceCoords::from_vectors([v0, v1]);
        let t: BTreeMap<usize, QRational> = [(0, qi(3)), (1, qi(5)), (2, qi(-1))].into_iter().collect();
        let c = s.coords(&t).unwrap();
        assert_eq!(c[&0], qi(3));
        assert_eq!(c[&1], qi(-1));
        let bad: BTreeMap<usize, QRational> = [(2, qi(1)), (0, qi(1))].into_iter().collect();
        assert!(s.coords(&bad).is_none());
    }

    #[test]
    fn binomials() {
        assert_eq!(binom(5, 2), BigInt::from(10));
        assert_eq!(binom(3, -1), BigInt::zero());
        assert_eq!(binom(-1, 0), BigInt::zero());
        assert_eq!(binom(2, 3), BigInt::zero());
    }
}
