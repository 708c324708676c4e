//! Formal cell-zeta values: standard pairs, dihedral and product-map
//! relations, exact reduction of each weight, and a numeric oracle.
//!
//! Integrals are Lebesgue integrals in the gauge `z_0 = 0, z_{n-2} = 1,
//! z_{n-1} = inf`. The period of a standard pair `(delta, eta)` is
//! `(-1)^l int_{0 < t_1 < ... < t_l < 1} f_eta(t) dt` with `f_eta` the cell function;
//! with this orientation the standard multizeta form of `k` has period `zeta(k)`.
//! The sign is multiplicative, so relations hold for either convention.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::combo::QCombo;
use crate::insertion::{insertion_basis, is_convergent_sum, words_to_forms, InsertionElement};
use crate::linalg::{q, qi, Echelon, QRational, SubspaceCoords};
use crate::polygons::{
    eval_cell, label_name, permutations, poly, relabel, restrict, rewrite_01, shuffle_relative, Basis01, Label,
    PolySum, PolygonError,
};
use crate::words::{composition_to_word, for_each_interleaving, IntComposition, Letter};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CellZetaError {
    #[error("form does not converge on the standard cell")]
    NotConvergent,
    #[error("gluing needs exactly three common labels, found {0}")]
    IntersectionNotThree(usize),
    #[error("gluing does not cover all {0} labels")]
    BadGluing(usize),
    #[error("variance estimate is not finite")]
    NumericUnstable,
    #[error("composition {0} is not convergent")]
    DivergentComposition(String),
    #[error("cannot parse composition {0:?}")]
    BadComposition(String),
    #[error("n = {0} is out of range")]
    OutOfRange(usize),
    #[error(transparent)]
    Polygon(#[from] PolygonError),
}

/// A combination of standard pairs `(delta, eta)` on `M_{0,n}`, forms in the 01-basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairSum {
    pub n: usize,
    pub form: PolySum,
}

impl PairSum {
    pub fn new(n: usize, form: &PolySum) -> Self {
        Self { n, form: rewrite_01(form, n) }
    }

    pub fn zero(n: usize) -> Self {
        Self { n, form: PolySum::zero() }
    }

    pub fn is_convergent(&self) -> bool {
        is_convergent_sum(&self.form, self.n)
    }
}

#[derive(Clone, Debug)]
pub struct RelationSet {
    pub weight: usize,
    pub generators: Vec<PairSum>,
}

// ---------------------------------------------------------------------------
// Transport of cells

#[derive(Clone, Debug)]
struct Dual {
    v: QRational,
    d: Vec<QRational>,
}

impl Dual {
    fn constant(v: QRational, l: usize) -> Self {
        Self { v, d: vec![QRational::zero(); l] }
    }

    fn var(v: QRational, i: usize, l: usize) -> Self {
        let mut d = vec![QRational::zero(); l];
        d[i] = QRational::one();
        Self { v, d }
    }

    fn sub(&self, o: &Dual) -> Dual {
        Dual { v: &self.v - &o.v, d: self.d.iter().zip(&o.d).map(|(a, b)| a - b).collect() }
    }

    fn mul(&self, o: &Dual) -> Dual {
        Dual { v: &self.v * &o.v, d: self.d.iter().zip(&o.d).map(|(a, b)| a * &o.v + &self.v * b).collect() }
    }

    fn div(&self, o: &Dual) -> Dual {
        let denom = &o.v * &o.v;
        Dual { v: &self.v / &o.v, d: self.d.iter().zip(&o.d).map(|(a, b)| (a * &o.v - &self.v * b) / &denom).collect() }
    }
}

/// The Moebius map sending `a, b, c` to `0, 1, inf`, applied to `x`.
fn mobius(x: &Option<Dual>, a: &Option<Dual>, b: &Option<Dual>, c: &Option<Dual>) -> Dual {
    match (x, a, b, c) {
        (None, Some(a), Some(b), Some(c)) => b.sub(c).div(&b.sub(a)),
        (Some(x), Some(a), Some(b), None) => x.sub(a).div(&b.sub(a)),
        (Some(x), None, Some(b), Some(c)) => b.sub(c).div(&x.sub(c)),
        (Some(x), Some(a), None, Some(c)) => x.sub(a).div(&x.sub(c)),
        (Some(x), Some(a), Some(b), Some(c)) => x.sub(a).mul(&b.sub(c)).div(&x.sub(c).mul(&b.sub(a))),
        _ => unreachable!("exactly one point is at infinity"),
    }
}

fn determinant(mut m: Vec<Vec<QRational>>) -> QRational {
    let k = m.len();
    let mut det = QRational::one();
    for col in 0..k {
        let Some(p) = (col..k).find(|&r| !m[r][col].is_zero()) else { return QRational::zero() };
        if p != col {
            m.swap(p, col);
            det = -det;
        }
        let pivot = m[col][col].clone();
        det *= &pivot;
        for r in col + 1..k {
            if m[r][col].is_zero() {
                continue;
            }
            let f = &m[r][col] / &pivot;
            for c in col..k {
                let v = &f * &m[col][c];
                m[r][c] -= v;
            }
        }
    }
    det
}

/// How to move an integral over the cell `gamma` to the standard cell:
/// `int_{X_gamma} f_eta = sign * int_{X_delta} f_{rho(eta)}` for every `eta`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Transport {
    pub rho: Vec<Label>,
    pub sign: i32,
}

/// Points of the standard configuration with `t_1..t_l` and `z_{m-1} = inf`.
fn gauge_points(vals: &[QRational]) -> Vec<Option<QRational>> {
    let mut p = vec![Some(QRational::zero())];
    p.extend(vals.iter().cloned().map(Some));
    p.push(Some(QRational::one()));
    p.push(None);
    p
}

fn inverse_order(gamma: &[Label]) -> Vec<Label> {
    let mut pi = vec![0; gamma.len()];
    for (k, &g) in gamma.iter().enumerate() {
        pi[g] = k;
    }
    pi
}

/// The Moebius map taking `X_delta` onto `X_gamma`, read backwards: at the point `t`
/// of the standard cell, the coordinates of its image and the Jacobian determinant.
fn pull_back(gamma: &[Label], t: &[QRational]) -> (Vec<QRational>, QRational) {
    let m = gamma.len();
    let l = m - 3;
    let pi = inverse_order(gamma);
    let z: Vec<Option<Dual>> = (0..m)
        .map(|i| {
            if i == 0 {
                Some(Dual::constant(QRational::zero(), l))
            } else if i == m - 2 {
                Some(Dual::constant(QRational::one(), l))
            } else if i == m - 1 {
                None
            } else {
                Some(Dual::var(t[i - 1].clone(), i - 1, l))
            }
        })
        .collect();
    let w: Vec<Option<Dual>> = (0..m).map(|j| z[pi[j]].clone()).collect();
    let image: Vec<Dual> = (1..=l).map(|j| mobius(&w[j], &w[0], &w[m - 2], &w[m - 1])).collect();
    let det = determinant(image.iter().map(|d| d.d.clone()).collect());
    (image.into_iter().map(|d| d.v).collect(), det)
}

/// Computes the transport of the cell read as `gamma` (a sequence of all `m` labels).
pub fn cell_transport(m: usize, gamma: &[Label]) -> Transport {
    let l = m - 3;
    let pi = inverse_order(gamma);
    let t: Vec<QRational> = (1..=l).map(|i| q(i as i64, (l + 1) as i64)).collect();
    let (image, det) = pull_back(gamma, &t);
    let delta: Vec<Label> = (0..m).collect();
    let moved: Vec<Label> = delta.iter().map(|&x| pi[x]).collect();
    let f_new = eval_cell(&delta, &gauge_points(&image)).expect("generic point");
    let f_old = eval_cell(&moved, &gauge_points(&t)).expect("generic point");
    let c = f_new * det.abs() / f_old;
    let sign = if c == QRational::one() {
        1
    } else if c == -QRational::one() {
        -1
    } else {
        panic!("transport constant {c} is not a sign")
    };
    Transport { rho: pi, sign }
}

/// The `2m` readings of the standard cell.
pub fn dihedral_sequences(m: usize) -> Vec<Vec<Label>> {
    let mut out = Vec::with_capacity(2 * m);
    for k in 0..m {
        out.push((0..m).map(|i| (i + k) % m).collect());
    }
    for k in 0..m {
        out.push((0..m).map(|i| (k + m - i) % m).collect());
    }
    out
}

#[derive(Default)]
struct TransportCache {
    map: HashMap<(usize, Vec<Label>), Transport>,
}

impl TransportCache {
    fn get(&mut self, m: usize, gamma: &[Label]) -> Transport {
        self.map.entry((m, gamma.to_vec())).or_insert_with(|| cell_transport(m, gamma)).clone()
    }
}

fn apply(form: &PolySum, t: &Transport) -> PolySum {
    relabel(form, |l| t.rho[l]).scaled(&qi(t.sign as i64))
}

/// `(delta, eta) - sign * (delta, rho(eta))` for every reading of the standard cell.
pub fn dihedral_orbit(p: &PairSum) -> Result<RelationSet, CellZetaError> {
    if !p.is_convergent() {
        return Err(CellZetaError::NotConvergent);
    }
    let n = p.n;
    let generators = dihedral_sequences(n)
        .iter()
        .map(|g| {
            let t = cell_transport(n, g);
            let mut r = p.form.clone();
            r -= &rewrite_01(&apply(&p.form, &t), n);
            PairSum { n, form: r }
        })
        .collect();
    Ok(RelationSet { weight: n - 3, generators })
}

/// Image of a standard pair under one reading of the standard cell.
pub fn dihedral_image(p: &PairSum, reading: &[Label]) -> PairSum {
    let t = cell_transport(p.n, reading);
    PairSum::new(p.n, &apply(&p.form, &t))
}

// ---------------------------------------------------------------------------
// Product maps

/// Two cells on label sets meeting in exactly three labels and covering `0..n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Gluing {
    pub n: usize,
    pub gamma1: Vec<Label>,
    pub gamma2: Vec<Label>,
}

/// Rotates to start at `0` and orients so that `1` comes before `inf`; returns the three arcs.
fn arcs(seq: &[Label], one: Label, inf: Label) -> [Vec<Label>; 3] {
    let start = seq.iter().position(|&l| l == 0).expect("0 present");
    let mut r: Vec<Label> = seq[start..].iter().chain(&seq[..start]).copied().collect();
    let p1 = r.iter().position(|&l| l == one).unwrap();
    let pi = r.iter().position(|&l| l == inf).unwrap();
    if pi < p1 {
        r[1..].reverse();
    }
    let p1 = r.iter().position(|&l| l == one).unwrap();
    let pi = r.iter().position(|&l| l == inf).unwrap();
    [r[1..p1].to_vec(), r[p1 + 1..pi].to_vec(), r[pi + 1..].to_vec()]
}

/// Cells of `M_{0,n}` lying over the product of cells `gamma1 x gamma2`, with
/// common points `0, 1, inf`.
fn product_cells(n: usize, gamma1: &[Label], gamma2: &[Label]) -> Vec<Vec<Label>> {
    let (one, inf) = (n - 2, n - 1);
    let a = arcs(gamma1, one, inf);
    let b = arcs(gamma2, one, inf);
    let pieces: Vec<Vec<Vec<Label>>> = (0..3)
        .map(|i| {
            let mut v = Vec::new();
            for_each_interleaving(&a[i], &b[i], &mut |w: &[Label]| v.push(w.to_vec()));
            v
        })
        .collect();
    let mut out = Vec::new();
    for x in &pieces[0] {
        for y in &pieces[1] {
            for z in &pieces[2] {
                let mut s = vec![0];
                s.extend_from_slice(x);
                s.push(one);
                s.extend_from_slice(y);
                s.push(inf);
                s.extend_from_slice(z);
                out.push(s);
            }
        }
    }
    out
}

/// The sign `f_{p1} f_{p2} = kappa * f_{p1 sh p2}` in the gauge, from the order `p1` induces on `0, 1, inf`.
fn gauge_shuffle_sign(p1: &[Label], n: usize) -> i64 {
    let e = restrict(p1, 1 << 0 | 1 << (n - 2) | 1 << (n - 1));
    let pos = |l: Label| e.iter().position(|&x| x == l).unwrap();
    if (pos(n - 2) + 3 - pos(0)) % 3 == 1 {
        1
    } else {
        -1
    }
}

/// `f_{eta1} f_{eta2}` as a sum of polygons on the union of labels (common labels `0, 1, inf`).
fn gauge_product(eta1: &PolySum, eta2: &PolySum, n: usize) -> PolySum {
    let mut out = PolySum::zero();
    for (p1, c1) in eta1.iter() {
        let k = gauge_shuffle_sign(p1.labels(), n);
        for (p2, c2) in eta2.iter() {
            let s = shuffle_relative(p1.labels(), p2.labels()).expect("three common labels");
            out.add_scaled(&s, &(c1 * c2 * qi(k)));
        }
    }
    out
}

/// Data of one product map with common points `0, 1, inf`, independent of the forms.
struct ProductFrame {
    n: usize,
    m1: usize,
    m2: usize,
    pull1: Vec<Label>,
    pull2: Vec<Label>,
    sign: i32,
    cells: Vec<Transport>,
}

impl ProductFrame {
    fn new(n: usize, gamma1: &[Label], gamma2: &[Label], cache: &mut TransportCache) -> Self {
        let (m1, pull1, s1) = Self::factor(n, gamma1, cache);
        let (m2, pull2, s2) = Self::factor(n, gamma2, cache);
        let cells = product_cells(n, gamma1, gamma2).iter().map(|g| cache.get(n, g)).collect();
        Self { n, m1, m2, pull1, pull2, sign: s1 * s2, cells }
    }

    /// For a cell on `T = {0, 1, inf} + S`, the map from labels of `M_{0,|T|}` to `T`
    /// realising `int_{X_gamma} f_{pull(A)} = sign * int_delta A`.
    fn factor(n: usize, gamma: &[Label], cache: &mut TransportCache) -> (usize, Vec<Label>, i32) {
        let m = gamma.len();
        let mut inner: Vec<Label> = gamma.iter().copied().filter(|&l| l != 0 && l < n - 2).collect();
        inner.sort_unstable();
        let mut beta_inv = vec![0];
        beta_inv.extend(&inner);
        beta_inv.push(n - 2);
        beta_inv.push(n - 1);
        let beta = |l: Label| beta_inv.iter().position(|&x| x == l).unwrap();
        let local: Vec<Label> = gamma.iter().map(|&l| beta(l)).collect();
        let t = cache.get(m, &local);
        let mut rho_inv = vec![0; m];
        for (i, &r) in t.rho.iter().enumerate() {
            rho_inv[r] = i;
        }
        let pull: Vec<Label> = (0..m).map(|a| beta_inv[rho_inv[a]]).collect();
        (m, pull, t.sign)
    }

    /// `int A * int B` as a combination of standard pairs on `M_{0,n}` (not yet rewritten).
    fn expand(&self, a: &PolySum, b: &PolySum) -> PolySum {
        let eta1 = relabel(a, |l| self.pull1[l]);
        let eta2 = relabel(b, |l| self.pull2[l]);
        let zeta = gauge_product(&eta1, &eta2, self.n);
        let mut out = PolySum::zero();
        for t in &self.cells {
            out += &apply(&zeta, t);
        }
        out.scaled(&qi(self.sign as i64))
    }
}

/// `(delta_1, A) x (delta_2, B)` through the product map given by `gluing`, as a
/// standard pair on `M_{0,n}` with the same period as the product.
pub fn product_map(a: &PairSum, b: &PairSum, gluing: &Gluing) -> Result<PairSum, CellZetaError> {
    let n = gluing.n;
    let m1 = crate::polygons::mask_of(&gluing.gamma1);
    let m2 = crate::polygons::mask_of(&gluing.gamma2);
    let common = (m1 & m2).count_ones() as usize;
    if common != 3 {
        return Err(CellZetaError::IntersectionNotThree(common));
    }
    if m1 | m2 != (1u64 << n) - 1 || gluing.gamma1.len() != a.n || gluing.gamma2.len() != b.n {
        return Err(CellZetaError::BadGluing(n));
    }
    // Relabel so that the common points are 0, 1, inf.
    let e: Vec<Label> = (0..n).filter(|&l| (m1 & m2) >> l & 1 == 1).collect();
    let rest: Vec<Label> = (0..n).filter(|&l| (m1 & m2) >> l & 1 == 0).collect();
    let mut g = vec![0; n];
    g[e[0]] = 0;
    g[e[1]] = n - 2;
    g[e[2]] = n - 1;
    for (i, &l) in rest.iter().enumerate() {
        g[l] = i + 1;
    }
    let mut g_inv = vec![0; n];
    for (i, &x) in g.iter().enumerate() {
        g_inv[x] = i;
    }
    let gamma1: Vec<Label> = gluing.gamma1.iter().map(|&l| g[l]).collect();
    let gamma2: Vec<Label> = gluing.gamma2.iter().map(|&l| g[l]).collect();
    let mut cache = TransportCache::default();
    let frame = ProductFrame::new(n, &gamma1, &gamma2, &mut cache);
    let sum = frame.expand(&a.form, &b.form);
    // Back to the caller's labels, then onto the standard cell again.
    if g.iter().enumerate().all(|(i, &x)| i == x) {
        return Ok(PairSum::new(n, &sum));
    }
    let back: Vec<Label> = (0..n).map(|i| g_inv[i]).collect();
    let t = cell_transport(n, &back);
    Ok(PairSum::new(n, &apply(&sum, &t)))
}

// ---------------------------------------------------------------------------
// Reduction of one weight

/// A generator of the period algebra: insertion element `index` on `M_{0,n}`.
pub type Generator = (usize, usize);
/// A product of generators, sorted.
pub type Monomial = Vec<Generator>;

pub fn format_monomial(m: &Monomial) -> String {
    if m.is_empty() {
        return "1".into();
    }
    m.iter().map(|(n, i)| format!("P{n}_{i}")).collect::<Vec<_>>().join("*")
}

pub fn format_class(c: &QCombo<Monomial>) -> String {
    let mut out = String::new();
    for (m, v) in c.iter() {
        let neg = v.is_negative();
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let a = v.abs();
        if !a.is_one() {
            out.push_str(&format!("{a}*"));
        }
        out.push_str(&format_monomial(m));
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

fn mul_classes(a: &QCombo<Monomial>, b: &QCombo<Monomial>) -> QCombo<Monomial> {
    let mut out = QCombo::zero();
    for (x, c) in a.iter() {
        for (y, d) in b.iter() {
            let mut m = x.clone();
            m.extend(y.iter().copied());
            m.sort_unstable();
            out.add_term(m, c * d);
        }
    }
    out
}

/// Result of reducing the periods of `M_{0,n}`.
pub struct Reduction {
    pub n: usize,
    pub dim: usize,
    pub insertion: Vec<InsertionElement>,
    pub forms: Vec<PolySum>,
    pub basis: Vec<Monomial>,
    /// Class of each insertion element in terms of `basis`.
    pub table: Vec<QCombo<Monomial>>,
    pub dihedral_relations: usize,
    pub product_relations: usize,
    pub product_types: usize,
    basis01: Basis01,
    coords: SubspaceCoords,
    columns: BTreeMap<Monomial, usize>,
    monomial_of: Vec<Monomial>,
    echelon: Echelon,
}

impl Reduction {
    /// Coordinates of a convergent 01-form in the insertion basis.
    pub fn insertion_coords(&self, form: &PolySum) -> Result<BTreeMap<usize, QRational>, CellZetaError> {
        self.coords.coords(&self.basis01.coords(form)).ok_or(CellZetaError::NotConvergent)
    }

    /// Reduces a combination of monomials of weight `n - 3` to the basis.
    pub fn reduce_class(&self, c: &QCombo<Monomial>) -> QCombo<Monomial> {
        let mut row = BTreeMap::new();
        let mut extra = QCombo::zero();
        for (m, v) in c.iter() {
            match self.columns.get(m) {
                Some(&col) => {
                    row.insert(col, v.clone());
                }
                None => extra.add_term(m.clone(), v.clone()),
            }
        }
        self.echelon.reduce(&mut row);
        for (col, v) in row {
            extra.add_term(self.monomial_of[col].clone(), v);
        }
        extra
    }

    /// Class of the period of a standard pair.
    pub fn class_of(&self, form: &PolySum) -> Result<QCombo<Monomial>, CellZetaError> {
        let coords = self.insertion_coords(form)?;
        let mut out = QCombo::zero();
        for (i, c) in coords {
            out.add_scaled(&self.table[i], &c);
        }
        Ok(out)
    }
}

/// Orbit representatives of pairs of arc distributions under permutations of
/// `0, 1, inf` (and exchange of the factors when they have equal size).
pub fn product_types(s1: usize, s2: usize) -> Vec<([usize; 3], [usize; 3])> {
    let comps = |s: usize| -> Vec<[usize; 3]> {
        let mut v = Vec::new();
        for a in 0..=s {
            for b in 0..=s - a {
                v.push([a, b, s - a - b]);
            }
        }
        v
    };
    const PERMS: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
    let mut reps = std::collections::BTreeSet::new();
    for a in comps(s1) {
        for b in comps(s2) {
            let mut best = (a, b);
            for p in PERMS {
                let pa = [a[p[0]], a[p[1]], a[p[2]]];
                let pb = [b[p[0]], b[p[1]], b[p[2]]];
                best = best.min((pa, pb));
                if s1 == s2 {
                    best = best.min((pb, pa));
                }
            }
            reps.insert(best);
        }
    }
    reps.into_iter().collect()
}

fn type_cells(n: usize, s1: usize, a: [usize; 3], b: [usize; 3]) -> (Vec<Label>, Vec<Label>) {
    let build = |mut labels: std::ops::RangeInclusive<Label>, parts: [usize; 3]| -> Vec<Label> {
        let mut s = vec![0];
        s.extend(labels.by_ref().take(parts[0]));
        s.push(n - 2);
        s.extend(labels.by_ref().take(parts[1]));
        s.push(n - 1);
        s.extend(labels.by_ref().take(parts[2]));
        s
    };
    let l = n - 3;
    let g1 = build(1..=s1, a);
    let g2 = build(s1 + 1..=l, b);
    (g1, g2)
}

/// Computes and caches reductions of all weights.
#[derive(Default)]
pub struct Reducer {
    cache: BTreeMap<usize, Reduction>,
    transports: TransportCache,
}

impl Reducer {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn reduce(&mut self, n: usize) -> Result<&Reduction, CellZetaError> {
        if !(5..=10).contains(&n) {
            return Err(CellZetaError::OutOfRange(n));
        }
        if !self.cache.contains_key(&n) {
            for m in 5..n - 1 {
                self.reduce(m)?;
            }
            let r = self.compute(n)?;
            self.cache.insert(n, r);
        }
        Ok(&self.cache[&n])
    }

    fn compute(&mut self, n: usize) -> Result<Reduction, CellZetaError> {
        let insertion = insertion_basis(n);
        let forms: Vec<PolySum> = insertion.iter().map(|e| rewrite_01(&words_to_forms(&e.expand(), n - 1), n)).collect();
        let basis01 = Basis01::new(n);
        let coords = SubspaceCoords::from_vectors(forms.iter().map(|f| basis01.coords(f)));
        let count = forms.len();
        let mut columns: BTreeMap<Monomial, usize> = BTreeMap::new();
        let mut monomial_of: Vec<Monomial> = Vec::new();
        // Insertion elements in reverse order, so that low indices survive as basis elements.
        for i in (0..count).rev() {
            columns.insert(vec![(n, i)], monomial_of.len());
            monomial_of.push(vec![(n, i)]);
        }
        let mut rows: Vec<BTreeMap<usize, QRational>> = Vec::new();
        let to_row = |c: &BTreeMap<usize, QRational>| -> BTreeMap<usize, QRational> {
            c.iter().map(|(i, v)| (count - 1 - i, v.clone())).collect()
        };
        // Rotation and reflection generate the dihedral relations.
        let generators = [(0..n).map(|i| (i + 1) % n).collect::<Vec<_>>(), (0..n).map(|i| (n - i) % n).collect()];
        let mut dihedral = 0;
        for g in &generators {
            let t = self.transports.get(n, g);
            for (i, f) in forms.iter().enumerate() {
                let image = rewrite_01(&apply(f, &t), n);
                let c = coords.coords(&basis01.coords(&image)).ok_or(CellZetaError::NotConvergent)?;
                let mut row = to_row(&c);
                let e = row.entry(count - 1 - i).or_insert_with(QRational::zero);
                *e -= QRational::one();
                rows.push(row);
                dihedral += 1;
            }
        }
        let mut product = 0;
        let mut type_count = 0;
        let l = n - 3;
        for s1 in 2..=l / 2 {
            let s2 = l - s1;
            if s2 < 2 {
                continue;
            }
            let lower1 = &self.cache[&(s1 + 3)];
            let lower2 = &self.cache[&(s2 + 3)];
            for (a, b) in product_types(s1, s2) {
                type_count += 1;
                let (g1, g2) = type_cells(n, s1, a, b);
                let frame = ProductFrame::new(n, &g1, &g2, &mut self.transports);
                debug_assert_eq!((frame.m1, frame.m2), (s1 + 3, s2 + 3));
                for (ia, fa) in lower1.forms.iter().enumerate() {
                    for (ib, fb) in lower2.forms.iter().enumerate() {
                        let sum = rewrite_01(&frame.expand(fa, fb), n);
                        let c = coords.coords(&basis01.coords(&sum)).ok_or(CellZetaError::NotConvergent)?;
                        let mut row = to_row(&c);
                        let class = mul_classes(&lower1.table[ia], &lower2.table[ib]);
                        for (m, v) in class.iter() {
                            let col = *columns.entry(m.clone()).or_insert_with(|| {
                                monomial_of.push(m.clone());
                                monomial_of.len() - 1
                            });
                            let e = row.entry(col).or_insert_with(QRational::zero);
                            *e -= v;
                        }
                        rows.push(row);
                        product += 1;
                    }
                }
            }
        }
        let mut echelon = Echelon::new();
        for r in rows {
            echelon.insert(r);
        }
        echelon.make_reduced();
        let basis: Vec<Monomial> =
            (0..monomial_of.len()).filter(|c| !echelon.has_pivot(*c)).map(|c| monomial_of[c].clone()).collect();
        let table: Vec<QCombo<Monomial>> = (0..count)
            .map(|i| {
                let mut row = BTreeMap::from([(count - 1 - i, QRational::one())]);
                echelon.reduce(&mut row);
                row.into_iter().map(|(c, v)| (monomial_of[c].clone(), v)).collect()
            })
            .collect();
        Ok(Reduction {
            n,
            dim: basis.len(),
            insertion,
            forms,
            basis,
            table,
            dihedral_relations: dihedral,
            product_relations: product,
            product_types: type_count,
            basis01,
            coords,
            columns,
            monomial_of,
            echelon,
        })
    }

    /// Class of a product of multizeta values, reduced in its weight.
    pub fn mzv_class(&mut self, factors: &[IntComposition]) -> Result<QCombo<Monomial>, CellZetaError> {
        let mut acc = QCombo::unit(Vec::new());
        let mut weight = 0usize;
        for k in factors {
            let p = mzv_form(k)?;
            let c = self.reduce(p.n)?.class_of(&p.form)?;
            acc = mul_classes(&acc, &c);
            weight += p.n - 3;
        }
        if factors.len() > 1 {
            acc = self.reduce(weight + 3)?.reduce_class(&acc);
        }
        Ok(acc)
    }

    /// `Some(r)` when `class(lhs) = r * class(rhs)`.
    pub fn identity_ratio(
        &mut self,
        lhs: &[IntComposition],
        rhs: &[IntComposition],
    ) -> Result<Option<QRational>, CellZetaError> {
        let a = self.mzv_class(lhs)?;
        let b = self.mzv_class(rhs)?;
        Ok(ratio(&a, &b))
    }
}

/// `Some(r)` with `a = r * b`, when `b` is non-zero and the two are proportional.
pub fn ratio(a: &QCombo<Monomial>, b: &QCombo<Monomial>) -> Option<QRational> {
    let (m, v) = b.iter().next()?;
    let r = a.coeff(m) / v;
    let mut diff = a.clone();
    diff.add_scaled(b, &-r.clone());
    diff.is_zero().then_some(r)
}

/// Dimension of the weight `n - 3` periods in the formal algebra.
pub fn reduce_weight(n: usize) -> Result<usize, CellZetaError> {
    Ok(Reducer::new().reduce(n)?.dim)
}

/// `d_k = d_{k-2} + d_{k-3}`, `d_0 = 1, d_1 = 0, d_2 = 1`.
pub fn zagier_dim(k: usize) -> u64 {
    let mut d = vec![1u64, 0, 1];
    while d.len() <= k {
        let j = d.len();
        d.push(d[j - 2] + d[j - 3]);
    }
    d[k]
}

// ---------------------------------------------------------------------------
// Multizeta forms

pub fn check_convergent(k: &IntComposition) -> Result<(), CellZetaError> {
    if k.0.is_empty() || k.0[0] < 2 || k.0.contains(&0) {
        return Err(CellZetaError::DivergentComposition(k.to_string()));
    }
    Ok(())
}

/// The standard multizeta form `[0, 1, t_{i_1} sh ... sh t_{i_r}, inf, t_{j_1} sh ... sh t_{j_s}]`
/// on `M_{0,w+3}`: `t_i` carries the letter `w_{l+1-i}` of the word of `k`.
pub fn mzv_form(k: &IntComposition) -> Result<PairSum, CellZetaError> {
    check_convergent(k)?;
    let w = composition_to_word(k).0;
    let l = w.len();
    let n = l + 3;
    let mut ys = Vec::new();
    let mut xs = Vec::new();
    for i in 1..=l {
        match w[l - i] {
            Letter::Y => ys.push(i),
            Letter::X => xs.push(i),
        }
    }
    let mut out = PolySum::zero();
    permutations(&ys, &mut |py: &[Label]| {
        permutations(&xs, &mut |px: &[Label]| {
            let mut seq = vec![0, n - 2];
            seq.extend_from_slice(py);
            seq.push(n - 1);
            seq.extend_from_slice(px);
            out += &poly(&seq);
        });
    });
    Ok(PairSum::new(n, &out))
}

/// Parses `"2,1"` or a product `"2*2"` of compositions.
pub fn parse_mzv_product(s: &str) -> Result<Vec<IntComposition>, CellZetaError> {
    s.split('*')
        .map(|part| {
            let k: IntComposition = part.trim().parse().map_err(|_| CellZetaError::BadComposition(part.to_string()))?;
            check_convergent(&k)?;
            Ok(k)
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Numeric oracle

/// `Li_{a_1..a_d}(z) = sum_{n_1 > ... > n_d >= 1} z^{n_1} / (n_1^{a_1} ... n_d^{a_d})`, truncated at `n_1 <= terms`.
pub fn multiple_polylog(a: &[u32], z: f64, terms: usize) -> f64 {
    if a.is_empty() {
        return 1.0;
    }
    let d = a.len();
    // acc[j] = sum over n_j < current n of the inner nested sum starting at depth j.
    let mut acc = vec![0.0f64; d + 1];
    acc[d] = 1.0;
    let mut total = 0.0;
    let mut zp = 1.0;
    for m in 1..=terms {
        zp *= z;
        let mf = m as f64;
        let mut new = acc.clone();
        for j in (0..d).rev() {
            let term = acc[j + 1] / mf.powi(a[j] as i32);
            if j == 0 {
                total += zp * term;
            } else {
                new[j] += term;
            }
        }
        acc = new;
    }
    total
}

/// Bound on the tail of [`multiple_polylog`] at `z = 1/2` beyond `terms` (valid for `terms >= 2 d`).
pub fn polylog_tail_bound(depth: usize, terms: usize) -> f64 {
    4.0 * ((terms + 1) as f64).powi(depth as i32 - 1) * 0.5f64.powi(terms as i32 + 1)
}

/// Bottom-up word (`true` for `dt/(1-t)`) to the indices of a multiple polylog; the word starts with `true`.
fn word_to_indices(word: &[bool]) -> Vec<u32> {
    let mut blocks: Vec<u32> = Vec::new();
    for &b in word {
        if b {
            blocks.push(1);
        } else {
            *blocks.last_mut().expect("word starts with dt/(1-t)") += 1;
        }
    }
    blocks.reverse();
    blocks
}

pub const SERIES_TERMS: usize = 120;

/// `zeta(k)` by splitting the iterated integral at `1/2`; returns the value and an error bound.
pub fn zeta_value(k: &IntComposition) -> Result<(f64, f64), CellZetaError> {
    check_convergent(k)?;
    let mut word = Vec::new();
    for &p in k.0.iter().rev() {
        word.push(true);
        word.extend(std::iter::repeat_n(false, p as usize - 1));
    }
    let w = word.len();
    let mut total = 0.0;
    let mut bound = 0.0;
    for j in 0..=w {
        let left = word_to_indices(&word[..j]);
        let right_word: Vec<bool> = word[j..].iter().rev().map(|b| !b).collect();
        let right = word_to_indices(&right_word);
        total += multiple_polylog(&left, 0.5, SERIES_TERMS) * multiple_polylog(&right, 0.5, SERIES_TERMS);
        bound += 2.0 * (polylog_tail_bound(left.len(), SERIES_TERMS) + polylog_tail_bound(right.len(), SERIES_TERMS));
    }
    Ok((total, bound))
}

pub fn zeta_product_value(ks: &[IntComposition]) -> Result<f64, CellZetaError> {
    let mut v = 1.0;
    for k in ks {
        v *= zeta_value(k)?.0;
    }
    Ok(v)
}

fn eval_cell_f64(seq: &[Label], points: &[Option<f64>]) -> f64 {
    let k = seq.len();
    let mut prod = 1.0;
    for i in 0..k {
        if let (Some(x), Some(y)) = (points[seq[i]], points[seq[(i + 1) % k]]) {
            prod *= y - x;
        }
    }
    1.0 / prod
}

#[derive(Clone, Debug, PartialEq)]
pub struct NumericVerdict {
    pub estimate: f64,
    pub std_error: f64,
    pub expected: f64,
    pub samples: usize,
    pub pass: bool,
}

impl fmt::Display for NumericVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} estimate {:.6} +- {:.6}, expected {:.9} ({} samples)",
            if self.pass { "PASS" } else { "FAIL" },
            self.estimate,
            self.std_error,
            self.expected,
            self.samples
        )
    }
}

/// Monte Carlo estimate of the period, from sorted uniform samples on the standard cell.
pub fn monte_carlo(p: &PairSum, samples: usize, seed: u64) -> (f64, f64) {
    let n = p.n;
    let l = n - 3;
    let terms: Vec<(f64, Vec<Label>)> =
        p.form.iter().map(|(poly, c)| (c.to_f64().unwrap_or(f64::NAN), poly.labels().to_vec())).collect();
    if terms.is_empty() || samples == 0 {
        return (0.0, 0.0);
    }
    let orientation = if l.is_multiple_of(2) { 1.0 } else { -1.0 };
    let volume: f64 = orientation / (1..=l).map(|i| i as f64).product::<f64>();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pts: Vec<Option<f64>> = vec![Some(0.0); n];
    pts[n - 2] = Some(1.0);
    pts[n - 1] = None;
    let mut t = vec![0.0f64; l];
    let (mut sum, mut sum_sq) = (0.0f64, 0.0f64);
    for _ in 0..samples {
        for x in t.iter_mut() {
            *x = rng.gen::<f64>();
        }
        t.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for i in 0..l {
            pts[i + 1] = Some(t[i]);
        }
        let v: f64 = terms.iter().map(|(c, s)| c * eval_cell_f64(s, &pts)).sum::<f64>() * volume;
        sum += v;
        sum_sq += v * v;
    }
    let m = samples as f64;
    let mean = sum / m;
    let var = (sum_sq / m - mean * mean).max(0.0) * m / (m - 1.0).max(1.0);
    (mean, (var / m).sqrt())
}

/// Compares the Monte Carlo integral with `expected`; passes within three standard errors.
pub fn numeric_check(p: &PairSum, expected: f64, samples: usize, seed: u64) -> Result<NumericVerdict, CellZetaError> {
    if !p.is_convergent() {
        return Err(CellZetaError::NotConvergent);
    }
    let (estimate, std_error) = monte_carlo(p, samples, seed);
    if !estimate.is_finite() || !std_error.is_finite() {
        return Err(CellZetaError::NumericUnstable);
    }
    let diff = (estimate - expected).abs();
    let pass = if std_error == 0.0 { diff < 1e-12 } else { diff < 3.0 * std_error };
    Ok(NumericVerdict { estimate, std_error, expected, samples, pass })
}

pub fn format_pair(p: &PairSum) -> String {
    let cell: Vec<String> = (0..p.n).map(|l| label_name(l, p.n)).collect();
    format!("(({}), {})", cell.join(","), crate::polygons::format_forms(&p.form, p.n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polygons::{eval_sum, random_points};
    use rand::seq::SliceRandom;

    fn random_cell_point(rng: &mut ChaCha8Rng, l: usize) -> Vec<QRational> {
        let mut v: Vec<QRational> = Vec::new();
        while v.len() < l {
            let x = q(rng.gen_range(1..1000), 1000);
            if !v.contains(&x) {
                v.push(x);
            }
        }
        v.sort();
        v
    }

    #[test]
    fn transport_holds_for_every_form() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for m in 5..=8 {
            for _ in 0..20 {
                let mut gamma: Vec<Label> = (0..m).collect();
                gamma.shuffle(&mut rng);
                let tr = cell_transport(m, &gamma);
                let t = random_cell_point(&mut rng, m - 3);
                let (image, det) = pull_back(&gamma, &t);
                for _ in 0..5 {
                    let mut eta: Vec<Label> = (0..m).collect();
                    eta.shuffle(&mut rng);
                    let moved: Vec<Label> = eta.iter().map(|&x| tr.rho[x]).collect();
                    let lhs = eval_cell(&eta, &gauge_points(&image)).unwrap() * det.abs();
                    let rhs = eval_cell(&moved, &gauge_points(&t)).unwrap() * qi(tr.sign as i64);
                    assert_eq!(lhs, rhs, "gamma {gamma:?} eta {eta:?}");
                }
            }
        }
    }

    #[test]
    fn identity_reading_is_trivial() {
        for m in 5..=8 {
            let delta: Vec<Label> = (0..m).collect();
            assert_eq!(cell_transport(m, &delta), Transport { rho: delta.clone(), sign: 1 });
        }
    }

    #[test]
    fn gauge_product_is_pointwise_product() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let n = 8;
        let s1 = [1usize, 2];
        let s2 = [3usize, 4, 5];
        for _ in 0..30 {
            let mut p1 = vec![0, n - 2, n - 1];
            p1.extend(s1);
            p1.shuffle(&mut rng);
            let mut p2 = vec![0, n - 2, n - 1];
            p2.extend(s2);
            p2.shuffle(&mut rng);
            let prod = gauge_product(&poly(&p1), &poly(&p2), n);
            let mut pts = random_points(&mut rng, n, Some(n - 1));
            pts[0] = Some(QRational::zero());
            pts[n - 2] = Some(QRational::one());
            let lhs = eval_cell(&p1, &pts).unwrap() * eval_cell(&p2, &pts).unwrap();
            assert_eq!(Some(lhs), eval_sum(&prod, &pts), "{p1:?} {p2:?}");
        }
    }

    #[test]
    fn product_types_at_weight_four() {
        assert_eq!(product_types(2, 2).len(), 6);
    }

    #[test]
    fn zeta_values() {
        let z = |s: &str| zeta_value(&s.parse().unwrap()).unwrap();
        let (z2, e) = z("2");
        assert!((z2 - std::f64::consts::PI.powi(2) / 6.0).abs() < 1e-12 && e < 1e-9);
        assert!((z("2,1").0 - z("3").0).abs() < 1e-12);
        assert!((z("3,1").0 - std::f64::consts::PI.powi(4) / 360.0).abs() < 1e-12);
    }
}
