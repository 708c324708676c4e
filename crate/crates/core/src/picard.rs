//! Boundary divisors of the compactified moduli space, non-adjacent bases of
//! its Picard group and the expansion of a boundary divisor in such a basis.
//!
//! Points are `z_1..z_n`, stored as bits `1..=n` of a mask.

use std::fmt;

use thiserror::Error;

use crate::combo::QCombo;
use crate::linalg::{qi, QRational};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PicardError {
    #[error("subset of size {size} does not define a boundary divisor on {n} points")]
    NotStable { size: usize, n: usize },
    #[error("order must be a permutation of 1..={0}")]
    BadOrder(usize),
    #[error("point {0} is out of range")]
    BadPoint(usize),
}

/// A boundary divisor `d_A = d_{complement}`, stored as the side without `z_n`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Divisor {
    pub mask: u64,
    pub n: usize,
}

fn full(n: usize) -> u64 {
    ((1u64 << n) - 1) << 1
}

impl Divisor {
    pub fn new(mask: u64, n: usize) -> Result<Self, PicardError> {
        let size = mask.count_ones() as usize;
        if mask & !full(n) != 0 || size < 2 || size + 2 > n {
            return Err(PicardError::NotStable { size, n });
        }
        let mask = if mask >> n & 1 == 1 { full(n) & !mask } else { mask };
        Ok(Self { mask, n })
    }

    pub fn from_points(points: &[usize], n: usize) -> Result<Self, PicardError> {
        let mut m = 0u64;
        for &p in points {
            if p == 0 || p > n {
                return Err(PicardError::BadPoint(p));
            }
            m |= 1 << p;
        }
        Self::new(m, n)
    }

    pub fn points(&self) -> Vec<usize> {
        (1..=self.n).filter(|i| self.mask >> i & 1 == 1).collect()
    }

    pub fn complement(&self) -> u64 {
        full(self.n) & !self.mask
    }
}

impl fmt::Display for Divisor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p: Vec<String> = self.points().iter().map(|x| x.to_string()).collect();
        write!(f, "d_{{{}}}", p.join(","))
    }
}

pub fn all_divisors(n: usize) -> Vec<Divisor> {
    let mut out = Vec::new();
    // Subsets of z_1..z_{n-1}; the side without z_n represents each divisor once.
    for m in 0u64..(1u64 << (n - 1)) {
        let mask = m << 1;
        let size = mask.count_ones() as usize;
        if size >= 2 && size + 2 <= n {
            out.push(Divisor { mask, n });
        }
    }
    out.sort();
    out
}

/// A dihedral order of the points, used to define a non-adjacent basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Order(pub Vec<usize>);

impl Order {
    pub fn standard(n: usize) -> Self {
        Order((1..=n).collect())
    }

    pub fn new(points: Vec<usize>) -> Result<Self, PicardError> {
        let n = points.len();
        let mut seen = vec![false; n + 1];
        for &p in &points {
            if p == 0 || p > n || seen[p] {
                return Err(PicardError::BadOrder(n));
            }
            seen[p] = true;
        }
        Ok(Order(points))
    }

    pub fn n(&self) -> usize {
        self.0.len()
    }

    /// The alternating parts `(B_1, G_1, ..., B_N, G_N)` of a subset: maximal runs
    /// of the subset and of its complement around the cycle, starting with a run of the subset.
    pub fn parts(&self, mask: u64) -> Vec<u64> {
        let n = self.n();
        let inside = |i: usize| mask >> self.0[i % n] & 1 == 1;
        let Some(start) = (0..n).find(|&i| inside(i) && !inside(i + n - 1)) else {
            return vec![mask];
        };
        let mut parts = Vec::new();
        let mut cur = 0u64;
        let mut state = true;
        for k in 0..n {
            let i = (start + k) % n;
            if inside(i) != state {
                parts.push(cur);
                cur = 0;
                state = !state;
            }
            cur |= 1 << self.0[i];
        }
        parts.push(cur);
        parts
    }

    pub fn is_consecutive(&self, d: &Divisor) -> bool {
        self.parts(d.mask).len() == 2
    }
}

/// The non-adjacent basis: divisors whose subset is not consecutive for the order.
pub fn non_adjacent_basis(order: &Order) -> Vec<Divisor> {
    all_divisors(order.n()).into_iter().filter(|d| !order.is_consecutive(d)).collect()
}

/// `(-1)^m` when `I` (or its complement) is the union of `m` cyclically
/// consecutive parts of `(B_1, G_1, ..., B_N, G_N)`, else 0.
pub fn parity_coeff(i_mask: u64, parts: &[u64]) -> i64 {
    let total: u64 = parts.iter().fold(0, |a, b| a | b);
    let targets = [i_mask, total & !i_mask];
    let len = parts.len();
    for start in 0..len {
        let mut acc = 0u64;
        for m in 1..len {
            acc |= parts[(start + m - 1) % len];
            if targets.contains(&acc) {
                return if m % 2 == 0 { 1 } else { -1 };
            }
        }
    }
    0
}

fn base_coeff(i_mask: u64, parts: &[u64]) -> i64 {
    let total: u64 = parts.iter().fold(0, |a, b| a | b);
    let (b, g) = ([parts[0], parts[2]], [parts[1], parts[3]]);
    for target in [i_mask, total & !i_mask] {
        for bi in b {
            for gj in g {
                if target == bi | gj {
                    return 1;
                }
            }
        }
        if b.contains(&target) || g.contains(&target) {
            return -1;
        }
    }
    0
}

/// The coefficient by the merge recursion `C = T_1 + T_2 + T_3 - T_4`, with the
/// two-block formula as base case.
pub fn gibney_coeff(i_mask: u64, parts: &[u64]) -> i64 {
    let nb = parts.len() / 2;
    if nb == 2 {
        return base_coeff(i_mask, parts);
    }
    let b = |k: usize| parts[2 * k];
    let g = |k: usize| parts[2 * k + 1];
    let union = |f: &dyn Fn(usize) -> u64, r: std::ops::Range<usize>| r.fold(0u64, |a, k| a | f(k));
    let last = nb - 1;
    let t1 = base_coeff(i_mask, &[union(&b, 0..last), union(&g, 0..last), b(last), g(last)]);
    let mut p2 = Vec::with_capacity(2 * last);
    for k in 0..last {
        p2.push(b(k));
        p2.push(if k + 1 == last { g(k) | b(last) | g(last) } else { g(k) });
    }
    let mut p3 = Vec::with_capacity(2 * last);
    for k in 0..last {
        p3.push(g(k));
        p3.push(if k + 1 == last { b(last) | g(last) | b(0) } else { b(k + 1) });
    }
    let mut p4 = Vec::with_capacity(2 * last);
    p4.push(g(last) | b(0));
    for k in 0..last {
        if k > 0 {
            p4.push(b(k));
        }
        p4.push(if k + 1 == last { g(k) | b(last) } else { g(k) });
    }
    t1 + gibney_coeff(i_mask, &p2) + gibney_coeff(i_mask, &p3) - gibney_coeff(i_mask, &p4)
}

/// Expansion of a boundary divisor in the non-adjacent basis of `order`. A
/// divisor that is already non-consecutive is a basis element.
pub fn expand(d: &Divisor, order: &Order) -> QCombo<Divisor> {
    if !order.is_consecutive(d) {
        return QCombo::unit(*d);
    }
    let mut out = QCombo::zero();
    for j in non_adjacent_basis(order) {
        let c = parity_coeff(d.mask, &order.parts(j.mask));
        out.add_term(j, qi(c));
    }
    out
}

/// Same as [`expand`] with coefficients from [`gibney_coeff`].
pub fn expand_gibney(d: &Divisor, order: &Order) -> QCombo<Divisor> {
    if !order.is_consecutive(d) {
        return QCombo::unit(*d);
    }
    let mut out = QCombo::zero();
    for j in non_adjacent_basis(order) {
        let c = gibney_coeff(d.mask, &order.parts(j.mask));
        out.add_term(j, qi(c));
    }
    out
}

/// Checks the three-way four-point relations
/// `sum_{i,j in I; k,l notin I} d_I = sum_{i,k in I; j,l notin I} d_I = sum_{i,l in I; j,k notin I} d_I`
/// after expansion; returns the quadruples that fail.
pub fn verify_keel(order: &Order) -> Vec<[usize; 4]> {
    let n = order.n();
    let divisors = all_divisors(n);
    let expansions: Vec<QCombo<Divisor>> = divisors.iter().map(|d| expand(d, order)).collect();
    let side_sum = |a: usize, b: usize, c: usize, e: usize| -> QCombo<Divisor> {
        let mut s = QCombo::zero();
        for (d, ex) in divisors.iter().zip(&expansions) {
            for m in [d.mask, d.complement()] {
                let has = |p: usize| m >> p & 1 == 1;
                if has(a) && has(b) && !has(c) && !has(e) {
                    s.add_scaled(ex, &QRational::from_integer(1.into()));
                }
            }
        }
        s
    };
    let mut bad = Vec::new();
    for i in 1..=n {
        for j in i + 1..=n {
            for k in j + 1..=n {
                for l in k + 1..=n {
                    let s1 = side_sum(i, j, k, l);
                    let s2 = side_sum(i, k, j, l);
                    let s3 = side_sum(i, l, j, k);
                    if s1 != s2 || s2 != s3 {
                        bad.push([i, j, k, l]);
                    }
                }
            }
        }
    }
    bad
}

pub fn format_expansion(e: &QCombo<Divisor>) -> String {
    let mut out = String::new();
    for (d, c) in e.iter() {
        let neg = c < &QRational::from_integer(0.into());
        let abs = if neg { -c.clone() } else { c.clone() };
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        if abs != QRational::from_integer(1.into()) {
            out.push_str(&format!("{abs}*"));
        }
        out.push_str(&d.to_string());
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basis_sizes() {
        assert_eq!(non_adjacent_basis(&Order::standard(5)).len(), 5);
        assert_eq!(non_adjacent_basis(&Order::standard(6)).len(), 16);
    }

    #[test]
    fn delta_234_recursion() {
        let order = Order::standard(6);
        let i = Divisor::from_points(&[2, 3, 4], 6).unwrap();
        let j = Divisor::from_points(&[1, 3, 5], 6).unwrap();
        assert_eq!(gibney_coeff(i.mask, &order.parts(j.mask)), -1);
        assert_eq!(parity_coeff(i.mask, &order.parts(j.mask)), -1);
    }
}
