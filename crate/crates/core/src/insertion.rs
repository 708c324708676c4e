//! Convergent words, Lyndon insertion shuffles and words, and the insertion
//! basis of the convergent top cohomology of `M_{0,n}`.
//!
//! Words here use the letters `1..=n` of the alphabet `S`; the extra point is `d`.
//! The map to cell-forms sends letter `i` to label `i - 1` and `d` to `n`, so
//! `(1, ..., n, d)` becomes the standard cell on `M_{0,n+1}`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::combo::QCombo;
use crate::linalg::{QMatrix, QRational};
use crate::polygons::{
    mask_of, permutations, poly, residue_mod_left, split_consecutive, Basis01, Label, PolySum,
};
use crate::words::shuffle;

pub type Word = Vec<usize>;
pub type WordSum = QCombo<Word>;

/// A symbolic element built from letters by concatenation and shuffle.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Expr {
    Letter(usize),
    Concat(Vec<Expr>),
    Shuffle(Vec<Expr>),
}

impl Expr {
    pub fn word(letters: &[usize]) -> Expr {
        if letters.len() == 1 {
            Expr::Letter(letters[0])
        } else {
            Expr::Concat(letters.iter().map(|&l| Expr::Letter(l)).collect())
        }
    }

    pub fn expand(&self) -> WordSum {
        match self {
            Expr::Letter(l) => WordSum::unit(vec![*l]),
            Expr::Concat(parts) => {
                let mut acc = WordSum::unit(Vec::new());
                for p in parts {
                    let e = p.expand();
                    let mut next = WordSum::zero();
                    for (a, ca) in acc.iter() {
                        for (b, cb) in e.iter() {
                            let mut w = a.clone();
                            w.extend_from_slice(b);
                            next.add_term(w, ca * cb);
                        }
                    }
                    acc = next;
                }
                acc
            }
            Expr::Shuffle(parts) => {
                let mut acc = WordSum::unit(Vec::new());
                for p in parts {
                    let e = p.expand();
                    let mut next = WordSum::zero();
                    for (a, ca) in acc.iter() {
                        for (b, cb) in e.iter() {
                            next.add_scaled(&shuffle(a, b), &(ca * cb));
                        }
                    }
                    acc = next;
                }
                acc
            }
        }
    }

    pub fn shift(&self, by: usize) -> Expr {
        match self {
            Expr::Letter(l) => Expr::Letter(l + by),
            Expr::Concat(p) => Expr::Concat(p.iter().map(|e| e.shift(by)).collect()),
            Expr::Shuffle(p) => Expr::Shuffle(p.iter().map(|e| e.shift(by)).collect()),
        }
    }

    fn fmt_inner(&self, f: &mut fmt::Formatter<'_>, nested: bool) -> fmt::Result {
        match self {
            Expr::Letter(l) if *l < 10 => write!(f, "{l}"),
            Expr::Letter(l) => write!(f, "{{{l}}}"),
            Expr::Concat(p) => {
                for e in p {
                    e.fmt_inner(f, true)?;
                }
                Ok(())
            }
            Expr::Shuffle(p) => {
                if nested {
                    write!(f, "(")?;
                }
                for (i, e) in p.iter().enumerate() {
                    if i > 0 {
                        write!(f, "ш")?;
                    }
                    e.fmt_inner(f, false)?;
                }
                if nested {
                    write!(f, ")")?;
                }
                Ok(())
            }
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_inner(f, false)
    }
}

/// An element of `L_S` or `W_S` together with its fixed structure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InsertionElement {
    pub expr: Expr,
    pub framing: Expr,
    pub profile: Vec<usize>,
}

impl InsertionElement {
    pub fn expand(&self) -> WordSum {
        self.expr.expand()
    }
}

// ---------------------------------------------------------------------------
// Convergence of words and polygons

fn is_interval(letters: &[usize]) -> bool {
    let lo = *letters.iter().min().unwrap();
    let hi = *letters.iter().max().unwrap();
    hi - lo + 1 == letters.len()
}

/// No subword of length `2..=min(|w|, k-1)` is a set of consecutive letters,
/// where `k` is the size of the alphabet `1..=k`.
pub fn is_convergent_in(w: &[usize], k: usize) -> bool {
    let max_len = w.len().min(k.saturating_sub(1));
    for len in 2..=max_len {
        for start in 0..=w.len() - len {
            if is_interval(&w[start..start + len]) {
                return false;
            }
        }
    }
    true
}

/// A convergent word on the full alphabet `1..=|w|`.
pub fn is_convergent_word(w: &[usize]) -> bool {
    is_convergent_in(w, w.len())
}

/// A special convergent word: the polygon `(w, d)` has no chord in common
/// with `(1, ..., n, d)`. For a word using every letter this is exactly
/// [`is_convergent_word`].
pub fn is_special_convergent(w: &[usize]) -> bool {
    is_convergent_word(w)
}

/// `1` stands immediately to the left of `n`.
pub fn is_one_n_word(w: &[usize]) -> bool {
    let n = w.len();
    w.windows(2).any(|p| p[0] == 1 && p[1] == n)
}

/// A polygon on labels `0..m` is convergent if it shares no chord with the
/// standard cyclic order `(0, 1, ..., m-1)`.
pub fn is_convergent_polygon(seq: &[Label]) -> bool {
    let m = seq.len();
    for start in 0..m {
        let mut mask = 0u64;
        for len in 1..=m.saturating_sub(2) {
            mask |= 1u64 << seq[(start + len - 1) % m];
            if len >= 2 && is_cyclic_interval(mask, m) {
                return false;
            }
        }
    }
    true
}

fn is_cyclic_interval(mask: u64, m: usize) -> bool {
    let inside = |i: usize| mask >> (i % m) & 1 == 1;
    (0..m).filter(|&i| inside(i) && !inside(i + 1)).count() == 1
}

/// Convergent polygons on `m` labels, one per dihedral structure up to sign.
pub fn convergent_polygons(m: usize) -> Vec<Vec<Label>> {
    let rest: Vec<Label> = (1..m).collect();
    let mut out = Vec::new();
    permutations(&rest, &mut |p: &[Label]| {
        if m > 2 && p[0] > p[p.len() - 1] {
            return;
        }
        let mut seq = vec![0];
        seq.extend_from_slice(p);
        if is_convergent_polygon(&seq) {
            out.push(seq);
        }
    });
    out
}

/// Special convergent `1n`-words on `1..=n`.
pub fn special_convergent_one_n_words(n: usize) -> Vec<Word> {
    if n < 2 {
        return Vec::new();
    }
    let letters: Vec<usize> = (2..n).collect();
    let mut out = Vec::new();
    // Place the pair "1 n" as a single unit among the other letters.
    for pos in 0..=letters.len() {
        permutations(&letters, &mut |p: &[usize]| {
            let mut w = Vec::with_capacity(n);
            w.extend_from_slice(&p[..pos]);
            w.push(1);
            w.push(n);
            w.extend_from_slice(&p[pos..]);
            if is_special_convergent(&w) {
                out.push(w);
            }
        });
    }
    out.sort();
    out
}

/// `c_0(m)`: the number of convergent 01 cell-forms on `M_{0,m}`.
pub fn count_special_convergent(m: usize) -> usize {
    if m < 4 {
        return 0;
    }
    special_convergent_one_n_words(m - 1).len()
}

// ---------------------------------------------------------------------------
// Lyndon insertion shuffles and words

fn set_partitions(k: usize, f: &mut impl FnMut(&[Vec<usize>])) {
    fn rec(i: usize, k: usize, blocks: &mut Vec<Vec<usize>>, f: &mut impl FnMut(&[Vec<usize>])) {
        if i > k {
            f(blocks);
            return;
        }
        for b in 0..blocks.len() {
            blocks[b].push(i);
            rec(i + 1, k, blocks, f);
            blocks[b].pop();
        }
        blocks.push(vec![i]);
        rec(i + 1, k, blocks, f);
        blocks.pop();
    }
    let mut blocks = Vec::new();
    rec(1, k, &mut blocks, f);
}

/// Convergent Lyndon shuffles with at least two factors on `1..=k`, each
/// given by its factors ordered by first letter.
pub fn convergent_lyndon_shuffles(k: usize) -> Vec<Vec<Word>> {
    let mut out = Vec::new();
    set_partitions(k, &mut |blocks: &[Vec<usize>]| {
        if blocks.len() < 2 {
            return;
        }
        let mut choices: Vec<Vec<Word>> = Vec::new();
        for b in blocks {
            let mut words = Vec::new();
            permutations(&b[1..], &mut |p: &[usize]| {
                let mut w = vec![b[0]];
                w.extend_from_slice(p);
                if is_convergent_in(&w, k) {
                    words.push(w);
                }
            });
            if words.is_empty() {
                return;
            }
            choices.push(words);
        }
        let mut idx = vec![0usize; choices.len()];
        loop {
            let mut factors: Vec<Word> = idx.iter().zip(&choices).map(|(&i, c)| c[i].clone()).collect();
            factors.sort();
            out.push(factors);
            let mut j = 0;
            while j < idx.len() {
                idx[j] += 1;
                if idx[j] < choices[j].len() {
                    break;
                }
                idx[j] = 0;
                j += 1;
            }
            if j == idx.len() {
                break;
            }
        }
    });
    out.sort();
    out
}

/// Compositions of `total` into `parts` positive integers, with the positions in
/// `fixed_one` forced to 1, in lexicographic order.
fn profiles(total: usize, parts: usize, fixed_one: &BTreeSet<usize>) -> Vec<Vec<usize>> {
    fn rec(i: usize, left: usize, parts: usize, fixed: &BTreeSet<usize>, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if i == parts {
            if left == 0 {
                out.push(cur.clone());
            }
            return;
        }
        let remaining = parts - i - 1;
        if left < 1 + remaining {
            return;
        }
        let hi = if fixed.contains(&i) { 1 } else { left - remaining };
        for v in 1..=hi {
            cur.push(v);
            rec(i + 1, left - v, parts, fixed, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, total, parts, fixed_one, &mut Vec::new(), &mut out);
    out
}

/// Cached `L_{1..m}` for every `m` up to a bound.
#[derive(Clone, Debug, Default)]
pub struct InsertionTables {
    shuffles: Vec<Vec<InsertionElement>>,
}

impl InsertionTables {
    pub fn new() -> Self {
        Self { shuffles: vec![Vec::new(), Vec::new()] }
    }

    /// `L_{1..m}`.
    pub fn lyndon_insertion_shuffles(&mut self, m: usize) -> &[InsertionElement] {
        while self.shuffles.len() <= m {
            let next = self.shuffles.len();
            let built = self.build_shuffles(next);
            self.shuffles.push(built);
        }
        &self.shuffles[m]
    }

    fn build_shuffles(&mut self, n: usize) -> Vec<InsertionElement> {
        if n == 2 {
            let e = Expr::Shuffle(vec![Expr::Letter(1), Expr::Letter(2)]);
            return vec![InsertionElement { expr: e.clone(), framing: e, profile: vec![1, 1] }];
        }
        let mut out = Vec::new();
        for k in 3..=n {
            for factors in convergent_lyndon_shuffles(k) {
                let leftmost: BTreeSet<usize> = factors.iter().map(|f| f[0] - 1).collect();
                let framing = Expr::Shuffle(factors.iter().map(|f| Expr::word(f)).collect());
                for profile in profiles(n, k, &leftmost) {
                    let build = |slots: &[Expr]| {
                        Expr::Shuffle(
                            factors
                                .iter()
                                .map(|f| {
                                    let parts: Vec<Expr> = f.iter().map(|&a| slots[a - 1].clone()).collect();
                                    if parts.len() == 1 {
                                        parts.into_iter().next().unwrap()
                                    } else {
                                        Expr::Concat(parts)
                                    }
                                })
                                .collect(),
                        )
                    };
                    for slots in self.slot_choices(&profile) {
                        out.push(InsertionElement { expr: build(&slots), framing: framing.clone(), profile: profile.clone() });
                    }
                }
            }
        }
        out
    }

    /// Every way of filling the letters `a_i` with `b^i_1` (when `v_i = 1`) or an
    /// element of `L_{D_i}` (when `v_i > 1`), renumbered by `D_1, ..., D_k`.
    fn slot_choices(&mut self, profile: &[usize]) -> Vec<Vec<Expr>> {
        let mut options: Vec<Vec<Expr>> = Vec::with_capacity(profile.len());
        let mut offset = 0;
        for &v in profile {
            if v == 1 {
                options.push(vec![Expr::Letter(offset + 1)]);
            } else {
                let inner: Vec<Expr> =
                    self.lyndon_insertion_shuffles(v).iter().map(|e| e.expr.shift(offset)).collect();
                options.push(inner);
            }
            offset += v;
        }
        let mut out = Vec::new();
        if options.iter().any(|o| o.is_empty()) {
            return out;
        }
        let mut idx = vec![0usize; options.len()];
        loop {
            out.push(idx.iter().zip(&options).map(|(&i, o)| o[i].clone()).collect());
            let mut j = options.len();
            loop {
                if j == 0 {
                    return out;
                }
                j -= 1;
                idx[j] += 1;
                if idx[j] < options[j].len() {
                    break;
                }
                idx[j] = 0;
            }
        }
    }

    /// `W_{1..n}`: special convergent `1n`-words, then Lyndon insertion words.
    pub fn lyndon_insertion_words(&mut self, n: usize) -> Vec<InsertionElement> {
        let mut out: Vec<InsertionElement> = special_convergent_one_n_words(n)
            .into_iter()
            .map(|w| InsertionElement { expr: Expr::word(&w), framing: Expr::word(&w), profile: vec![1; n] })
            .collect();
        for k in 4..n {
            for w in special_convergent_one_n_words(k) {
                let fixed: BTreeSet<usize> = [0, k - 1].into_iter().collect();
                for profile in profiles(n, k, &fixed) {
                    for slots in self.slot_choices(&profile) {
                        let parts: Vec<Expr> = w.iter().map(|&a| slots[a - 1].clone()).collect();
                        out.push(InsertionElement {
                            expr: Expr::Concat(parts),
                            framing: Expr::word(&w),
                            profile: profile.clone(),
                        });
                    }
                }
            }
        }
        out
    }
}

pub fn lyndon_insertion_shuffles(m: usize) -> Vec<InsertionElement> {
    InsertionTables::new().lyndon_insertion_shuffles(m).to_vec()
}

pub fn lyndon_insertion_words(n: usize) -> Vec<InsertionElement> {
    InsertionTables::new().lyndon_insertion_words(n)
}

// ---------------------------------------------------------------------------
// Insertion basis on M_{0,n}

/// The cell-form sum of a word sum on `1..=n`, on `M_{0,n+1}`.
pub fn words_to_forms(ws: &WordSum, n: usize) -> PolySum {
    let mut out = PolySum::zero();
    for (w, c) in ws.iter() {
        let mut seq: Vec<Label> = w.iter().map(|&l| l - 1).collect();
        seq.push(n);
        out.add_scaled(&poly(&seq), c);
    }
    out
}

/// Insertion basis of the convergent top cohomology of `M_{0,n}`.
pub fn insertion_basis(n: usize) -> Vec<InsertionElement> {
    if n < 5 {
        return Vec::new();
    }
    lyndon_insertion_words(n - 1)
}

pub fn insertion_forms(n: usize) -> Vec<PolySum> {
    insertion_basis(n).iter().map(|e| words_to_forms(&e.expand(), n - 1)).collect()
}

/// `dim H^{n-3}(M_{0,n}^delta)` by enumerating the insertion basis.
pub fn dim_delta(n: usize) -> usize {
    insertion_basis(n).len()
}

/// `d_n = sum_{r=5}^{n} sum_{i_1+...+i_{r-3} = n-3} I_{i_1} ... I_{i_{r-3}} c_0(r)`.
pub fn dim_delta_formula(n: usize) -> BigInt {
    let mut tables = InsertionTables::new();
    let big_i = |t: &mut InsertionTables, i: usize| -> BigInt {
        if i == 1 {
            BigInt::from(1)
        } else {
            BigInt::from(t.lyndon_insertion_shuffles(i).len())
        }
    };
    let mut total = BigInt::zero();
    for r in 5..=n {
        let c0 = BigInt::from(count_special_convergent(r));
        for comp in profiles(n - 3, r - 3, &BTreeSet::new()) {
            let mut term = c0.clone();
            for &i in &comp {
                term *= big_i(&mut tables, i);
            }
            total += term;
        }
    }
    total
}

/// Intervals `T` of `S = {0, ..., n-2}` (labels of `M_{0,n}` other than infinity)
/// with `2 <= |T| <= n-2`, as bit masks.
pub fn bad_chords(n: usize) -> Vec<u64> {
    let s = n - 1;
    let mut out = Vec::new();
    for len in 2..s {
        for start in 0..=s - len {
            out.push(mask_of(&(start..start + len).collect::<Vec<_>>()));
        }
    }
    out
}

/// Convergence of a sum of forms on `M_{0,n}` along every bad chord: each
/// residue has its left factor in the shuffle ideal.
pub fn is_convergent_sum(eta: &PolySum, n: usize) -> bool {
    let e = n;
    bad_chords(n).into_iter().all(|t| {
        let lead = t.trailing_zeros() as Label;
        residue_mod_left(eta, t, e, lead).is_zero()
    })
}

/// Linear conditions, in 01-coordinates, for a form to have every residue
/// along `blocks` in `I (x) P` (left factor on the block side).
pub fn residue_condition_matrix(basis: &Basis01, blocks: &[u64]) -> QMatrix {
    let n = basis.n;
    let e = n;
    let mut rows: BTreeMap<(usize, crate::polygons::PairKey), Vec<(usize, QRational)>> = BTreeMap::new();
    for (col, seq) in basis.elements.iter().enumerate() {
        let f = poly(seq);
        for (bi, &t) in blocks.iter().enumerate() {
            let lead = t.trailing_zeros() as Label;
            for (key, c) in residue_mod_left(&f, t, e, lead).iter() {
                rows.entry((bi, key.clone())).or_default().push((col, c.clone()));
            }
        }
    }
    let mut m = QMatrix::zeros(0, basis.len());
    for (_, r) in rows {
        m.push_row(r).expect("columns within bounds");
    }
    m
}

/// Dimension of the convergent subspace of the 01-forms on `M_{0,n}`, by
/// direct kernel computation.
pub fn convergent_kernel_dim(n: usize) -> usize {
    let basis = Basis01::new(n);
    let m = residue_condition_matrix(&basis, &bad_chords(n));
    basis.len() - m.rank()
}

/// Rank of the span of the convergent cell-forms on `M_{0,n}` in the 01-basis.
pub fn convergent_forms_rank(n: usize) -> (usize, usize) {
    let basis = Basis01::new(n);
    let polys = convergent_polygons(n);
    let mut ech = crate::linalg::Echelon::new();
    for seq in &polys {
        ech.insert(basis.coords(&poly(seq)));
    }
    (polys.len(), ech.rank())
}

/// Whether the polygon `(w, d)` has `block` (letters) as a chord.
pub fn word_has_chord(w: &[usize], block: &[usize]) -> bool {
    let mut seq: Vec<Label> = w.to_vec();
    seq.push(0);
    split_consecutive(&seq, mask_of(block)).is_some()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_shuffle_sets() {
        let l3: Vec<String> = lyndon_insertion_shuffles(3).iter().map(|e| e.expr.to_string()).collect();
        assert_eq!(l3, vec!["1ш2ш3", "13ш2"]);
        assert_eq!(lyndon_insertion_shuffles(4).len(), 7);
    }

    #[test]
    fn small_word_sets() {
        let w4: Vec<String> = lyndon_insertion_words(4).iter().map(|e| e.expr.to_string()).collect();
        assert_eq!(w4, vec!["3142"]);
    }

    #[test]
    fn polygon_convergence() {
        assert!(is_convergent_polygon(&[0, 2, 4, 1, 3]));
        assert_eq!(convergent_polygons(5).len(), 1);
        assert_eq!(convergent_polygons(6).len(), 3);
        assert!(!is_convergent_polygon(&[1, 3, 0, 2, 5, 7, 4, 6]));
    }
}
