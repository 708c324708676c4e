//! Depth-graded pieces of the double shuffle Lie algebra in depths 1 and 2.
//!
//! Matrix indices follow the 1-based formulas: `build_m(n).get(i - 1, j - 1)`
//! is the entry `M(i, j)`.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::linalg::{binom, qi, QMatrix, QRational};
use crate::words::{
    compositions, lyndon_lie, lyndon_words_xy, pi_y, stuffle, IntComposition, Poly, WordXY, WordY,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DepthError {
    #[error("i + j = {0} is even; no depth-two reduction exists in even weight")]
    ParityError(u32),
    #[error("indices must satisfy i, j >= 2")]
    BadIndex,
    #[error("weight {0} is below the supported range")]
    WeightTooSmall(u32),
    #[error("depth-two dimension from the nullity of M ({nullity}) disagrees with the closed formula ({formula})")]
    Disagreement { nullity: usize, formula: usize },
}

fn c(a: i64, b: i64) -> BigInt {
    binom(a, b)
}

/// Coefficient of `X^{n-i} Y^i T^j` in `P = (1+YT^2)/((1-(XT+YT^2))(1-(X+Y)))`.
///
/// Uses the closed-form cases where they apply; the remaining `(n, i, j)`
/// are computed from the product expansion of `P`.
pub fn p_coeff(n: u32, i: u32, j: u32) -> QRational {
    match p_closed_form(n as i64, i as i64, j as i64) {
        Some(v) => QRational::from_integer(v),
        None => QRational::from_integer(p_convolution(n as i64, i as i64, j as i64)),
    }
}

fn p_closed_form(n: i64, i: i64, j: i64) -> Option<BigInt> {
    if i > n {
        return Some(BigInt::zero());
    }
    let cn = c(n, i);
    if j == 0 || (i < j && j <= n) {
        return Some(cn);
    }
    if j == n + 1 && i < n {
        return Some(if i % 2 == 0 { cn - 1 } else { cn + 1 });
    }
    if j == i && i > 0 && i < n {
        return Some(if i % 2 == 0 { cn + 1 } else { cn - 1 });
    }
    if i == n && j > 0 && j <= n {
        return Some(if j % 2 == 1 { BigInt::zero() } else { BigInt::from(2) });
    }
    None
}

/// `(P | X^{n-i} Y^i T^j)` from `P = (1 + Y T^2) F G` with
/// `(F | X^a Y^b T^{a+2b}) = C(a+b, a)` and `(G | X^a Y^b) = C(a+b, a)`.
fn p_convolution(n: i64, i: i64, j: i64) -> BigInt {
    let part = |n: i64, i: i64, j: i64| -> BigInt {
        let mut total = BigInt::zero();
        if n < 0 || i < 0 || j < 0 || i > n {
            return total;
        }
        for b in 0..=i {
            let a = j - 2 * b;
            if a < 0 || a > n - i {
                continue;
            }
            total += c(a + b, a) * c(n - a - b, i - b);
        }
        total
    };
    part(n, i, j) + part(n - 1, i - 1, j - 2)
}

/// Coefficient of `X^{n-i} Y^i T^j` in `Q = (1+X) P`.
pub fn q_coeff(n: u32, i: u32, j: u32) -> QRational {
    let (n, i, j) = (n as i64, i as i64, j as i64);
    let closed = if i > n {
        Some(BigInt::zero())
    } else if i < j && j < n {
        Some(c(n, i) + c(n - 1, i))
    } else if j == n && i < n {
        let base = c(n, i) + c(n - 1, i);
        Some(if i % 2 == 0 { base - 1 } else { base + 1 })
    } else if i == n && j <= n && j > 0 {
        Some(if j % 2 == 0 { BigInt::from(2) } else { BigInt::zero() })
    } else {
        None
    };
    let v = closed.unwrap_or_else(|| p_convolution(n, i, j) + p_convolution(n - 1, i, j));
    QRational::from_integer(v)
}

/// `Lambda_n^k = C(n, k) + C(n-1, k)`, with `Lambda_0^0 = 1`.
pub fn lambda(n: i64, k: i64) -> BigInt {
    if n < 0 || k < 0 || k > n {
        return BigInt::zero();
    }
    c(n, k) + c(n - 1, k)
}

pub fn lambda_row(n: i64) -> Vec<BigInt> {
    (0..=n).map(|k| lambda(n, k)).collect()
}

/// A commutative monomial `coeff * X^x Y^y T^t`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Monomial {
    pub coeff: BigInt,
    pub x: i64,
    pub y: i64,
    pub t: i64,
}

/// The descending vector `D_{j,z}`: `z` zeroes followed by the diagonal of `Lambda_D`.
/// A negative `z` drops the first `-z` entries of the diagonal.
pub fn d_vector(j: i64, z: i64) -> Vec<Monomial> {
    let half = j / 2;
    let par = j - 2 * half;
    let mut out = Vec::new();
    for _ in 0..z.max(0) {
        out.push(Monomial { coeff: BigInt::zero(), x: 0, y: 0, t: j });
    }
    for l in (-z).max(0)..=half {
        out.push(Monomial {
            coeff: lambda((j + 1) / 2 + l, par + 2 * l),
            x: par + 2 * l,
            y: half - l,
            t: j,
        });
    }
    out
}

/// The ascending vector `A_k = (Lambda_{k-m}^m Y^m X^{k-2m})_{m=0..k/2}`.
pub fn a_vector(k: i64) -> Vec<Monomial> {
    (0..=k / 2).map(|m| Monomial { coeff: lambda(k - m, m), x: k - 2 * m, y: m, t: 0 }).collect()
}

/// Scalar product `A_k . D_{j,z}` as a single monomial.
pub fn scalar_product(k: i64, j: i64, z: i64) -> Monomial {
    let a = a_vector(k);
    let half = j / 2;
    let par = j - 2 * half;
    let mut coeff = BigInt::zero();
    for m in z.max(0)..=k / 2 {
        let l = m - z;
        if l < 0 || l > half {
            continue;
        }
        coeff += &a[m as usize].coeff * lambda((j + 1) / 2 + l, par + 2 * l);
    }
    Monomial { coeff, x: k + j - 2 * half - 2 * z, y: half + z, t: j }
}

/// `M(i, j)` for weight `n`, `1 <= i, j <= floor((n-1)/2)`.
pub fn m_entry(n: i64, i: i64, j: i64) -> BigInt {
    let s1 = if (i - j).rem_euclid(2) == 0 { BigInt::one() } else { -BigInt::one() };
    let s2 = if (n - i - j).rem_euclid(2) == 0 { BigInt::one() } else { -BigInt::one() };
    s1 * (c(j, i - j) + c(j - 1, i - j - 1)) + s2 * (c(j, n - i - j) + c(j - 1, n - 1 - i - j))
}

pub fn system_size(n: u32) -> usize {
    ((n as usize).saturating_sub(1)) / 2
}

pub fn build_m(n: u32) -> QMatrix {
    let h = system_size(n);
    let rows: Vec<Vec<QRational>> = (1..=h as i64)
        .map(|i| (1..=h as i64).map(|j| QRational::from_integer(m_entry(n as i64, i, j))).collect())
        .collect();
    QMatrix::from_rows(&rows)
}

/// The triangularising matrix `N` with `M N` lower triangular.
pub fn build_n(n: u32) -> QMatrix {
    let h = system_size(n);
    let mut m = QMatrix::identity(h);
    let ni = n as i64;
    let (kmax, offset, kbase): (i64, i64, i64) = if ni % 2 == 1 {
        ((ni - 5).div_euclid(6), 0, (ni - 3) / 2)
    } else {
        ((ni - 8).div_euclid(6), 1, (ni - 6) / 2)
    };
    for k in 0..=kmax {
        let col = h as i64 - k;
        let kk = kbase - 3 * k;
        for (mi, mono) in a_vector(kk).iter().enumerate() {
            let row = 2 * k + offset + 1 + mi as i64;
            if row == col {
                continue;
            }
            let exponent = if ni % 2 == 1 { row + col } else { row + col - 1 };
            let sign = if exponent % 2 == 0 { BigInt::one() } else { -BigInt::one() };
            m.set((row - 1) as usize, (col - 1) as usize, QRational::from_integer(sign * &mono.coeff))
                .expect("column of N within bounds");
        }
    }
    m
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DepthDims {
    pub d1: usize,
    pub d2: usize,
}

/// Dimensions of the depth 1 and depth 2 graded pieces in weight `n`.
/// The depth-2 value is the nullity of `M` and is checked against the closed formula.
pub fn depth_graded_dims(n: u32) -> Result<DepthDims, DepthError> {
    if n < 3 {
        return Err(DepthError::WeightTooSmall(n));
    }
    let d1 = usize::from(n % 2 == 1);
    let m = build_m(n);
    let nullity = m.cols() - m.rank();
    let formula = if n % 2 == 1 { 0 } else { ((n - 2) / 6) as usize };
    if nullity != formula {
        return Err(DepthError::Disagreement { nullity, formula });
    }
    Ok(DepthDims { d1, d2: nullity })
}

/// Coefficient of the depth-one value in the depth-two reduction:
/// `((-1)^{j-1} C(i+j, j) - 1) / 2`.
pub fn depth_two_reduction(i: u32, j: u32) -> Result<QRational, DepthError> {
    if i < 2 || j < 2 {
        return Err(DepthError::BadIndex);
    }
    if (i + j).is_multiple_of(2) {
        return Err(DepthError::ParityError(i + j));
    }
    let sign = if (j - 1).is_multiple_of(2) { BigInt::one() } else { -BigInt::one() };
    let num = sign * c((i + j) as i64, j as i64) - BigInt::one();
    Ok(QRational::new(num, BigInt::from(2)))
}

/// The proposed solution `a_i = (-1)^i / 2 * C(n-i-1, i+1)` of `M a = -(1, ..., 1)`.
pub fn odd_solution(n: u32) -> Vec<QRational> {
    (0..system_size(n) as i64)
        .map(|i| {
            let sign = if i % 2 == 0 { BigInt::one() } else { -BigInt::one() };
            QRational::new(sign * c(n as i64 - i - 1, i + 1), BigInt::from(2))
        })
        .collect()
}

/// The depth-two Lyndon-Lie coefficient vector `a` combined with `A [x^{n-1} y]`:
/// `A [x^{n-1}y] + sum_s a_s [x^{n-2-s} y x^s y]`.
pub fn depth_two_candidate(n: u32, a_depth_one: &QRational, a: &[QRational]) -> Poly<WordXY> {
    let n = n as usize;
    let mut f = lyndon_lie(&WordXY::x_pow_y(n - 1)).expect("x^{n-1}y is Lyndon").scaled(a_depth_one);
    for (s, coeff) in a.iter().enumerate() {
        let r = n - 2 - s;
        let mut w = WordXY::x_pow_y(r);
        w = w.concat(&WordXY::x_pow_y(s));
        let l = lyndon_lie(&w).expect("x^r y x^s y with r > s is Lyndon");
        f.add_scaled(&l, coeff);
    }
    f
}

/// Linear conditions `(pi_y f | a * b) = 0` for all nonempty composition pairs of weight `n`.
fn stuffle_pairs(n: u32) -> Vec<Poly<IntComposition>> {
    let comps: Vec<Vec<IntComposition>> = (0..=n).map(compositions).collect();
    let mut out = Vec::new();
    for wa in 1..n {
        let wb = n - wa;
        if wa > wb {
            break;
        }
        for a in &comps[wa as usize] {
            for b in &comps[wb as usize] {
                if wa == wb && a > b {
                    continue;
                }
                out.push(stuffle(a, b));
            }
        }
    }
    out
}

/// Basis of the weight-`n` Lie elements whose `pi_y` image satisfies every stuffle
/// condition (the weight-`n` part of the double shuffle Lie algebra).
pub fn ds_space(n: u32) -> Vec<Poly<WordXY>> {
    let basis: Vec<Poly<WordXY>> =
        lyndon_words_xy(n as usize).iter().map(|w| lyndon_lie(w).expect("generated Lyndon")).collect();
    let images: Vec<Poly<WordY>> = basis.iter().map(pi_y).collect();
    let mut mat = QMatrix::zeros(0, basis.len());
    for st in stuffle_pairs(n) {
        let row: Vec<(usize, QRational)> = images
            .iter()
            .enumerate()
            .map(|(col, img)| {
                let v = st.iter().fold(QRational::zero(), |acc, (k, c)| acc + c * img.coeff(&WordY::from(k)));
                (col, v)
            })
            .collect();
        mat.push_row(row).expect("row within bounds");
    }
    mat.nullspace()
        .into_iter()
        .map(|v| {
            let mut f = Poly::zero();
            for (col, coeff) in v.iter() {
                f.add_scaled(&basis[*col], coeff);
            }
            f
        })
        .collect()
}

/// The weight-`n` double shuffle element normalised by `(f | x^{n-1} y) = 1`,
/// when that element is unique.
pub fn ds_depth_one_element(n: u32) -> Option<Poly<WordXY>> {
    let space = ds_space(n);
    if space.len() != 1 {
        return None;
    }
    let lead = space[0].coeff(&WordXY::x_pow_y(n as usize - 1));
    if lead.is_zero() {
        return None;
    }
    Some(space[0].scaled(&lead.recip()))
}

/// Coefficient `b_i` of `x^{n-2-i} y x^i y`.
pub fn depth_two_coeff(f: &Poly<WordXY>, n: u32, i: usize) -> QRational {
    let w = WordXY::x_pow_y(n as usize - 2 - i).concat(&WordXY::x_pow_y(i));
    f.coeff(&w)
}

pub fn minus_ones(len: usize) -> Vec<QRational> {
    vec![qi(-1); len]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lambda_row_four() {
        let row: Vec<i64> = lambda_row(4).iter().map(|b| b.try_into().unwrap()).collect();
        assert_eq!(row, vec![2, 7, 9, 5, 1]);
    }

    #[test]
    fn m_for_eleven() {
        let expected = QMatrix::from_i64(&[
            vec![1, 0, 0, 0, -2],
            vec![-2, 1, 0, 0, 9],
            vec![0, -3, 1, 2, -16],
            vec![0, 2, -4, -6, 14],
            vec![0, 0, 3, 4, -5],
        ]);
        assert_eq!(build_m(11), expected);
        assert_eq!(expected.rank(), 5);
    }

    #[test]
    fn small_dims() {
        assert_eq!(depth_graded_dims(9).unwrap(), DepthDims { d1: 1, d2: 0 });
        assert_eq!(depth_graded_dims(8).unwrap(), DepthDims { d1: 0, d2: 1 });
        assert_eq!(depth_graded_dims(4).unwrap(), DepthDims { d1: 0, d2: 0 });
    }

    #[test]
    fn reduction_values() {
        assert_eq!(depth_two_reduction(3, 2).unwrap(), QRational::new((-11).into(), 2.into()));
        assert_eq!(depth_two_reduction(2, 3).unwrap(), QRational::new(9.into(), 2.into()));
        assert_eq!(depth_two_reduction(2, 2), Err(DepthError::ParityError(4)));
    }

    #[test]
    fn p_special_cases() {
        for n in 1..8 {
            for j in 0..=n {
                assert_eq!(p_coeff(n, 0, j), qi(1));
            }
            for j in (1..=n).filter(|j| j % 2 == 1) {
                assert_eq!(p_coeff(n, n, j), qi(0));
            }
        }
    }
}
