//! Polygons (signed dihedral structures), cell-functions, chords, polygon
//! residues and the 01-basis.
//!
//! Labels are plain integers. For `M_{0,n}` the convention is
//! `0 -> "0"`, `1..=n-3 -> t_1..t_{n-3}`, `n-2 -> "1"`, `n-1 -> "inf"`,
//! so the standard cell is `(0, 1, ..., n-1)`.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::Rng;
use thiserror::Error;

use crate::combo::QCombo;
use crate::linalg::{q_to_string, QRational};
use crate::words::for_each_interleaving;

pub type Label = usize;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolygonError {
    #[error("label {0} appears twice")]
    DuplicateLabel(Label),
    #[error("the two polygons share {0} labels; exactly 3 are required")]
    IntersectionNotThree(usize),
    #[error("cannot parse label '{0}'")]
    BadLabel(String),
    #[error("block of size {size} is not a stable partition of {total} labels")]
    NotStable { size: usize, total: usize },
    #[error("cannot parse polygon '{0}'")]
    Parse(String),
}

/// A dihedral structure in canonical form: least label first, and the
/// lexicographically smaller of the two reading directions.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Polygon(Vec<Label>);

pub type PolySum = QCombo<Polygon>;

impl Polygon {
    /// Canonical form of the cyclic sequence together with the sign
    /// `(-1)^{|S|}` picked up when the reading direction is reversed.
    pub fn canonical(seq: &[Label]) -> Result<(Polygon, i32), PolygonError> {
        let mut seen = BTreeSet::new();
        for &l in seq {
            if !seen.insert(l) {
                return Err(PolygonError::DuplicateLabel(l));
            }
        }
        Ok(Self::canonical_unchecked(seq))
    }

    pub(crate) fn canonical_unchecked(seq: &[Label]) -> (Polygon, i32) {
        let k = seq.len();
        if k == 0 {
            return (Polygon(Vec::new()), 1);
        }
        let start = (0..k).min_by_key(|&i| seq[i]).unwrap();
        let fwd: Vec<Label> = (0..k).map(|i| seq[(start + i) % k]).collect();
        let rev: Vec<Label> = (0..k).map(|i| seq[(start + k - i) % k]).collect();
        if rev < fwd {
            (Polygon(rev), if k.is_multiple_of(2) { 1 } else { -1 })
        } else {
            (Polygon(fwd), 1)
        }
    }

    pub fn labels(&self) -> &[Label] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn mask(&self) -> u64 {
        mask_of(&self.0)
    }

    /// The cyclic sequence read from `start` in the stored direction.
    pub fn rotated_to(&self, start: Label) -> Option<Vec<Label>> {
        let pos = self.0.iter().position(|&l| l == start)?;
        Some(rotate(&self.0, pos))
    }
}

pub fn rotate(seq: &[Label], pos: usize) -> Vec<Label> {
    let k = seq.len();
    (0..k).map(|i| seq[(pos + i) % k]).collect()
}

pub fn mask_of(labels: &[Label]) -> u64 {
    labels.iter().fold(0u64, |m, &l| m | (1u64 << l))
}

pub fn labels_of(mask: u64) -> Vec<Label> {
    (0..64).filter(|i| mask >> i & 1 == 1).collect()
}

/// The signed polygon as a one-term sum.
pub fn poly(seq: &[Label]) -> PolySum {
    let (p, s) = Polygon::canonical_unchecked(seq);
    PolySum::term(p, QRational::from_integer(s.into()))
}

pub fn poly_checked(seq: &[Label]) -> Result<PolySum, PolygonError> {
    let (p, s) = Polygon::canonical(seq)?;
    Ok(PolySum::term(p, QRational::from_integer(s.into())))
}

/// Applies a relabelling to every polygon.
pub fn relabel(sum: &PolySum, f: impl Fn(Label) -> Label) -> PolySum {
    sum.map_linear(|p| {
        let seq: Vec<Label> = p.labels().iter().map(|&l| f(l)).collect();
        poly(&seq)
    })
}

// ---------------------------------------------------------------------------
// Labels of M_{0,n}

pub fn label_name(l: Label, n: usize) -> String {
    if l == 0 {
        "0".to_string()
    } else if l + 2 == n {
        "1".to_string()
    } else if l + 1 == n {
        "inf".to_string()
    } else {
        format!("t{l}")
    }
}

pub fn parse_label(s: &str, n: usize) -> Result<Label, PolygonError> {
    let bad = || PolygonError::BadLabel(s.to_string());
    match s {
        "0" => Ok(0),
        "1" => Ok(n - 2),
        "inf" | "∞" => Ok(n - 1),
        _ => {
            let i: usize = s.strip_prefix('t').ok_or_else(bad)?.parse().map_err(|_| bad())?;
            if i == 0 || i + 3 > n {
                return Err(bad());
            }
            Ok(i)
        }
    }
}

/// Parses `"(0 t1 1 t3 inf)"` or `"[0 1 t1 inf t2]"` (the bracket style is ignored).
pub fn parse_labels(s: &str, n: usize) -> Result<Vec<Label>, PolygonError> {
    let inner = s
        .trim()
        .trim_start_matches(['(', '['])
        .trim_end_matches([')', ']'])
        .replace(',', " ");
    let labels: Vec<Label> = inner.split_whitespace().map(|t| parse_label(t, n)).collect::<Result<_, _>>()?;
    if labels.len() != n {
        return Err(PolygonError::Parse(s.to_string()));
    }
    Polygon::canonical(&labels)?;
    Ok(labels)
}

pub fn format_labels(seq: &[Label], n: usize, open: char, close: char) -> String {
    let body: Vec<String> = seq.iter().map(|&l| label_name(l, n)).collect();
    format!("{open}{}{close}", body.join(" "))
}

/// Writes a sum of forms as `2*[0 1 t1 inf t2] - [0 1 t2 inf t1]`.
pub fn format_forms(sum: &PolySum, n: usize) -> String {
    let mut out = String::new();
    for (p, c) in sum.iter() {
        let body = format_labels(p.labels(), n, '[', ']');
        let neg = c < &QRational::zero();
        let abs = if neg { -c.clone() } else { c.clone() };
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        if !abs.is_one() {
            out.push_str(&q_to_string(&abs));
            out.push('*');
        }
        out.push_str(&body);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

impl fmt::Display for Polygon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let body: Vec<String> = self.0.iter().map(|l| l.to_string()).collect();
        write!(f, "({})", body.join(" "))
    }
}

/// Denominator of the cell-form, e.g. `(t3-t1)(0-t3)(1-0)(t2-1)(t4-t2)`.
pub fn cell_form_denominator(seq: &[Label], n: usize) -> String {
    let inf = n - 1;
    let k = seq.len();
    let mut out = String::new();
    for i in 0..k {
        let (a, b) = (seq[i], seq[(i + 1) % k]);
        if a == inf || b == inf {
            continue;
        }
        out.push_str(&format!("({}-{})", label_name(b, n), label_name(a, n)));
    }
    out
}

// ---------------------------------------------------------------------------
// Cell-functions

/// `1 / prod (v_{k+1} - v_k)` around the polygon; a `None` point is infinity
/// and both of its adjacent factors are omitted. Returns `None` at a pole.
pub fn eval_cell(seq: &[Label], points: &[Option<QRational>]) -> Option<QRational> {
    let k = seq.len();
    let mut prod = QRational::one();
    for i in 0..k {
        let (a, b) = (seq[i], seq[(i + 1) % k]);
        match (&points[a], &points[b]) {
            (Some(x), Some(y)) => {
                let d = y - x;
                if d.is_zero() {
                    return None;
                }
                prod *= d;
            }
            _ => continue,
        }
    }
    Some(prod.recip())
}

pub fn eval_sum(sum: &PolySum, points: &[Option<QRational>]) -> Option<QRational> {
    let mut total = QRational::zero();
    for (p, c) in sum.iter() {
        total += c * eval_cell(p.labels(), points)?;
    }
    Some(total)
}

/// Distinct random rationals for labels `0..count`; the label `infinity`, if any, gets `None`.
pub fn random_points<R: Rng>(rng: &mut R, count: usize, infinity: Option<Label>) -> Vec<Option<QRational>> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::with_capacity(count);
    for l in 0..count {
        if Some(l) == infinity {
            out.push(None);
            continue;
        }
        loop {
            let num: i64 = rng.gen_range(-500..=500);
            let den: i64 = rng.gen_range(1..=37);
            let v = QRational::new(num.into(), den.into());
            if seen.insert(v.clone()) {
                out.push(Some(v));
                break;
            }
        }
    }
    out
}

/// A uniformly random cyclic sequence on the given labels.
pub fn random_polygon<R: Rng>(rng: &mut R, labels: &[Label]) -> Vec<Label> {
    let mut v = labels.to_vec();
    v.shuffle(rng);
    v
}

// ---------------------------------------------------------------------------
// Chords and residues

/// A two-block partition of a label set; stored as the side not containing
/// the greatest label of the universe.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct StablePartition {
    pub block: u64,
    pub universe: u64,
}

impl StablePartition {
    pub fn new(block: u64, universe: u64) -> Result<Self, PolygonError> {
        let size = block.count_ones() as usize;
        let total = universe.count_ones() as usize;
        if block & !universe != 0 || size < 2 || size + 2 > total {
            return Err(PolygonError::NotStable { size, total });
        }
        let top = 63 - universe.leading_zeros();
        let block = if block >> top & 1 == 1 { universe & !block } else { block };
        Ok(Self { block, universe })
    }

    pub fn other(&self) -> u64 {
        self.universe & !self.block
    }

    pub fn contains_side(&self, side: u64) -> bool {
        side == self.block || side == self.other()
    }
}

/// Splits the cyclic sequence into `(block, rest)`, both read in polygon order,
/// when the labels of `block` are consecutive.
pub fn split_consecutive(seq: &[Label], block: u64) -> Option<(Vec<Label>, Vec<Label>)> {
    let k = seq.len();
    let inside = |l: Label| block >> l & 1 == 1;
    let size = seq.iter().filter(|&&l| inside(l)).count();
    if size == 0 || size == k || size != block.count_ones() as usize {
        return None;
    }
    let start = (0..k).find(|&i| inside(seq[i]) && !inside(seq[(i + k - 1) % k]))?;
    let r = rotate(seq, start);
    if r[..size].iter().all(|&l| inside(l)) {
        Some((r[..size].to_vec(), r[size..].to_vec()))
    } else {
        None
    }
}

/// All chords of a polygon: consecutive blocks of size `2..=k-2`.
pub fn chords(seq: &[Label]) -> BTreeSet<StablePartition> {
    let k = seq.len();
    let universe = mask_of(seq);
    let mut out = BTreeSet::new();
    for start in 0..k {
        let mut m = 0u64;
        for len in 1..=k.saturating_sub(2) {
            m |= 1u64 << seq[(start + len - 1) % k];
            if len >= 2 {
                out.insert(StablePartition::new(m, universe).expect("chord sizes are stable"));
            }
        }
    }
    out
}

pub fn is_chord(seq: &[Label], block: u64) -> bool {
    split_consecutive(seq, block).is_some()
}

pub type PairKey = (Polygon, Polygon);

/// Polygon residue along the partition `block | rest`: a term whose polygon
/// has `block` consecutive maps to `(block, e) (x) (e, rest)`, other terms vanish.
pub fn residue_p(eta: &PolySum, block: u64, e: Label) -> QCombo<PairKey> {
    let mut out = QCombo::zero();
    for (p, c) in eta.iter() {
        let Some((a, b)) = split_consecutive(p.labels(), block) else { continue };
        let mut left = a;
        left.push(e);
        let mut right = vec![e];
        right.extend(b);
        let (pl, sl) = Polygon::canonical_unchecked(&left);
        let (pr, sr) = Polygon::canonical_unchecked(&right);
        out.add_term((pl, pr), c * QRational::from_integer((sl * sr).into()));
    }
    out
}

/// Residue along `block` with the left factor taken modulo shuffles with
/// respect to `e` (written in the basis `(e, lead, ...)`).
pub fn residue_mod_left(eta: &PolySum, block: u64, e: Label, lead: Label) -> QCombo<PairKey> {
    let res = residue_p(eta, block, e);
    let mut by_right: BTreeMap<Polygon, PolySum> = BTreeMap::new();
    for ((l, r), c) in res.iter() {
        by_right.entry(r.clone()).or_default().add_term(l.clone(), c.clone());
    }
    let mut out = QCombo::zero();
    for (r, left) in by_right {
        for (l, c) in reduce_mod_shuffles(&left, e, lead).iter() {
            out.add_term((l.clone(), r.clone()), c.clone());
        }
    }
    out
}

/// Residue along `block` with both factors taken modulo shuffles with respect to `e`.
pub fn residue_mod_both(eta: &PolySum, block: u64, e: Label, lead_left: Label, lead_right: Label) -> QCombo<PairKey> {
    let left = residue_mod_left(eta, block, e, lead_left);
    let mut by_left: BTreeMap<Polygon, PolySum> = BTreeMap::new();
    for ((l, r), c) in left.iter() {
        by_left.entry(l.clone()).or_default().add_term(r.clone(), c.clone());
    }
    let mut out = QCombo::zero();
    for (l, right) in by_left {
        for (r, c) in reduce_mod_shuffles(&right, e, lead_right).iter() {
            out.add_term((l.clone(), r.clone()), c.clone());
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Shuffles

/// `sum_{W in A sh B} (W, e)`.
pub fn shuffle_wrt_point(a: &[Label], b: &[Label], e: Label) -> PolySum {
    let mut out = PolySum::zero();
    for_each_interleaving(a, b, &mut |w: &[Label]| {
        let mut seq = w.to_vec();
        seq.push(e);
        out += &poly(&seq);
    });
    out
}

/// Rewrites every polygon as a combination of polygons `(anchor, lead, ...)`
/// modulo shuffles with respect to `anchor`, using
/// `(anchor, u lead v) = (-1)^{|u|} (anchor, lead (rev(u) sh v))`.
pub fn reduce_mod_shuffles(sum: &PolySum, anchor: Label, lead: Label) -> PolySum {
    let mut out = PolySum::zero();
    for (p, c) in sum.iter() {
        let r = p.rotated_to(anchor).expect("anchor label present");
        let word = &r[1..];
        let pos = word.iter().position(|&l| l == lead).expect("lead label present");
        let mut u: Vec<Label> = word[..pos].to_vec();
        u.reverse();
        let v = &word[pos + 1..];
        let sign = if pos % 2 == 0 { c.clone() } else { -c.clone() };
        let mut acc = PolySum::zero();
        for_each_interleaving(&u, v, &mut |x: &[Label]| {
            let mut seq = Vec::with_capacity(r.len());
            seq.push(anchor);
            seq.push(lead);
            seq.extend_from_slice(x);
            acc += &poly(&seq);
        });
        out.add_scaled(&acc, &sign);
    }
    out
}

/// Rewrites a sum of forms on `M_{0,n}` in the 01-basis.
pub fn rewrite_01(sum: &PolySum, n: usize) -> PolySum {
    reduce_mod_shuffles(sum, 0, n - 2)
}

/// The cyclic order induced on a subset of labels.
pub fn restrict(seq: &[Label], keep: u64) -> Vec<Label> {
    seq.iter().copied().filter(|&l| keep >> l & 1 == 1).collect()
}

/// Shuffle of two polygons relative to their common labels (two or three of them).
/// With three common labels the second polygon is first oriented to induce the
/// same cyclic order, at the cost of `(-1)^{|T2|}` when it must be reversed.
pub fn shuffle_relative(g1: &[Label], g2: &[Label]) -> Result<PolySum, PolygonError> {
    let m1 = mask_of(g1);
    let m2 = mask_of(g2);
    let common = m1 & m2;
    let k = common.count_ones() as usize;
    if !(2..=3).contains(&k) {
        return Err(PolygonError::IntersectionNotThree(k));
    }
    let c1 = restrict(g1, common);
    let mut g2 = g2.to_vec();
    let mut sign = 1i64;
    if k == 3 {
        let c2 = restrict(&g2, common);
        let (_, s1) = Polygon::canonical_unchecked(&c1);
        let (_, s2) = Polygon::canonical_unchecked(&c2);
        if s1 != s2 {
            g2.reverse();
            if g2.len() % 2 == 1 {
                sign = -1;
            }
        }
    }
    let start = c1[0];
    let r1 = rotate(g1, g1.iter().position(|&l| l == start).unwrap());
    let r2 = rotate(&g2, g2.iter().position(|&l| l == start).unwrap());
    // Gaps after each common label, in the order c1[0], c1[1], ...
    let split = |r: &[Label]| -> Vec<Vec<Label>> {
        let mut gaps_v = vec![Vec::new(); k];
        let mut idx = 0usize;
        for &l in &r[1..] {
            if common >> l & 1 == 1 {
                idx += 1;
            } else {
                gaps_v[idx].push(l);
            }
        }
        gaps_v
    };
    let x1 = split(&r1);
    let x2 = split(&r2);
    let order: Vec<Label> = std::iter::once(start).chain(r1[1..].iter().copied().filter(|l| common >> l & 1 == 1)).collect();
    let mut pieces: Vec<Vec<Vec<Label>>> = Vec::with_capacity(k);
    for gi in 0..k {
        let mut ws = Vec::new();
        for_each_interleaving(&x1[gi], &x2[gi], &mut |w: &[Label]| ws.push(w.to_vec()));
        pieces.push(ws);
    }
    let mut out = PolySum::zero();
    let mut choice = vec![0usize; k];
    loop {
        let mut seq = Vec::with_capacity(g1.len() + g2.len() - k);
        for gi in 0..k {
            seq.push(order[gi]);
            seq.extend_from_slice(&pieces[gi][choice[gi]]);
        }
        out += &poly(&seq);
        let mut i = 0;
        while i < k {
            choice[i] += 1;
            if choice[i] < pieces[i].len() {
                break;
            }
            choice[i] = 0;
            i += 1;
        }
        if i == k {
            break;
        }
    }
    Ok(out.scaled(&QRational::from_integer(sign.into())))
}

/// Shuffle of two polygons relative to exactly three common labels.
pub fn shuffle_cyclic(g1: &[Label], g2: &[Label]) -> Result<PolySum, PolygonError> {
    let k = (mask_of(g1) & mask_of(g2)).count_ones() as usize;
    if k != 3 {
        return Err(PolygonError::IntersectionNotThree(k));
    }
    shuffle_relative(g1, g2)
}

// ---------------------------------------------------------------------------
// 01-basis

/// All polygons `(0, 1, sigma)` on `M_{0,n}`, as label sequences.
pub fn basis_01(n: usize) -> Vec<Vec<Label>> {
    let rest: Vec<Label> = (1..n).filter(|&l| l != n - 2).collect();
    let mut out = Vec::new();
    permutations(&rest, &mut |p: &[Label]| {
        let mut seq = vec![0, n - 2];
        seq.extend_from_slice(p);
        out.push(seq);
    });
    out
}

/// Calls `f` on every permutation of `items` in lexicographic order of positions.
pub fn permutations<T: Clone>(items: &[T], f: &mut impl FnMut(&[T])) {
    fn rec<T: Clone>(rest: &mut Vec<T>, cur: &mut Vec<T>, f: &mut impl FnMut(&[T])) {
        if rest.is_empty() {
            f(cur);
            return;
        }
        for i in 0..rest.len() {
            let x = rest.remove(i);
            cur.push(x.clone());
            rec(rest, cur, f);
            cur.pop();
            rest.insert(i, x);
        }
    }
    let mut rest = items.to_vec();
    let mut cur = Vec::with_capacity(items.len());
    rec(&mut rest, &mut cur, f);
}

/// Coordinates in the 01-basis of `M_{0,n}`.
#[derive(Clone, Debug)]
pub struct Basis01 {
    pub n: usize,
    pub elements: Vec<Vec<Label>>,
    index: HashMap<Polygon, (usize, i32)>,
}

impl Basis01 {
    pub fn new(n: usize) -> Self {
        let elements = basis_01(n);
        let index = elements
            .iter()
            .enumerate()
            .map(|(i, seq)| {
                let (p, s) = Polygon::canonical_unchecked(seq);
                (p, (i, s))
            })
            .collect();
        Self { n, elements, index }
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Index and sign of a canonical polygon that is a 01-polygon.
    pub fn lookup(&self, p: &Polygon) -> Option<(usize, i32)> {
        self.index.get(p).copied()
    }

    /// Rewrites `sum` in the 01-basis and returns its coordinate vector.
    pub fn coords(&self, sum: &PolySum) -> BTreeMap<usize, QRational> {
        let reduced = rewrite_01(sum, self.n);
        let mut out = BTreeMap::new();
        for (p, c) in reduced.iter() {
            let (i, s) = self.lookup(p).expect("rewritten polygon is a 01-polygon");
            let v = if s == 1 { c.clone() } else { -c.clone() };
            out.insert(i, v);
        }
        out
    }

    /// The form with the given coordinates.
    pub fn form(&self, coords: &BTreeMap<usize, QRational>) -> PolySum {
        let mut out = PolySum::zero();
        for (i, c) in coords {
            out.add_scaled(&poly(&self.elements[*i]), c);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn reversal_sign() {
        let a = poly(&[0, 1, 2, 3, 4]);
        let b = poly(&[4, 3, 2, 1, 0]);
        assert_eq!(a, -&b);
        let c = poly(&[0, 1, 2, 3]);
        assert_eq!(c, poly(&[3, 2, 1, 0]));
    }

    #[test]
    fn pentagon_chords() {
        let ch = chords(&[1, 2, 3, 4, 5]);
        assert_eq!(ch.len(), 5);
        let universe = mask_of(&[1, 2, 3, 4, 5]);
        assert!(!ch.contains(&StablePartition::new(mask_of(&[1, 3]), universe).unwrap()));
        let oct = [2, 4, 1, 3, 6, 8, 5, 7];
        assert!(is_chord(&oct, mask_of(&[1, 2, 3, 4])));
        assert_eq!(chords(&oct).len(), 8 * 5 / 2);
    }

    #[test]
    fn one_point_shuffle_vanishes() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let s = shuffle_wrt_point(&[0, 2], &[1, 3, 5], 4);
        for _ in 0..20 {
            let pts = random_points(&mut rng, 6, Some(5));
            assert_eq!(eval_sum(&s, &pts).unwrap(), QRational::zero());
        }
    }

    #[test]
    fn cyclic_example() {
        // (0,t1,1,t3,inf) sh (0,1,t2,inf,t4) on M_{0,7}: 1 = 5, inf = 6
        let g1 = [0, 1, 5, 3, 6];
        let g2 = [0, 5, 2, 6, 4];
        let got = shuffle_cyclic(&g1, &g2).unwrap();
        let want = &poly(&[0, 1, 5, 2, 3, 6, 4]) + &poly(&[0, 1, 5, 3, 2, 6, 4]);
        assert_eq!(got, want);
        assert!(shuffle_cyclic(&[0, 1, 2, 3], &[0, 1, 4, 5]).is_err());
    }

    #[test]
    fn rewrite_is_projection() {
        let n = 6;
        let s = &poly(&[2, 0, 3, 1, 5, 4]) + &poly(&[0, 5, 1, 2, 3, 4]);
        let once = rewrite_01(&s, n);
        assert_eq!(rewrite_01(&once, n), once);
    }
}
