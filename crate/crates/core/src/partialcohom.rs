//! Top cohomology of partial compactifications `M_{0,n}^gamma` for small
//! admissible sets of boundary divisors.
//!
//! Divisors are given by one of their sides as a label mask (labels as in
//! [`crate::polygons`]). A form lies in the cohomology when each of its
//! polygon residues vanishes modulo one-point shuffles on both sides.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use thiserror::Error;

use crate::combo::QCombo;
use crate::linalg::{factorial, Echelon, QMatrix, QRational};
use crate::polygons::{
    label_name, labels_of, mask_of, parse_label, permutations, poly, relabel, residue_mod_both,
    rewrite_01, split_consecutive, Basis01, Label, PairKey, PolySum, PolygonError,
};
use crate::words::for_each_interleaving;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PartialError {
    #[error("divisor set is not one of the admissible cases: {0}")]
    NotAdmissible(String),
    #[error(transparent)]
    Label(#[from] PolygonError),
    #[error("cannot parse divisor '{0}'")]
    Parse(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Admissibility {
    Single,
    Pair,
    TripleWithIntersection,
    DeltaFull,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DivisorSet {
    pub n: usize,
    pub sides: Vec<u64>,
    pub kind: Admissibility,
}

/// One basis element: a sum of 01-forms with a short description of how it was built.
#[derive(Clone, Debug)]
pub struct PartialBasisElement {
    pub family: &'static str,
    pub description: String,
    pub form: PolySum,
}

fn all_labels(n: usize) -> u64 {
    (1u64 << n) - 1
}

/// Parses `"t1=t2;t2=t3;t1=t2=t3"`; the word `delta` gives the boundary of the standard cell.
pub fn parse_divisors(spec: &str, n: usize) -> Result<Vec<u64>, PartialError> {
    if spec.trim() == "delta" {
        return Ok(delta_sides(n));
    }
    let mut out = Vec::new();
    for part in spec.split(';').map(str::trim).filter(|s| !s.is_empty()) {
        let labels: Vec<Label> = part.split('=').map(|s| parse_label(s.trim(), n)).collect::<Result<_, _>>()?;
        let m = mask_of(&labels);
        if m.count_ones() as usize != labels.len() || labels.len() < 2 || labels.len() + 2 > n {
            return Err(PartialError::Parse(part.to_string()));
        }
        out.push(m);
    }
    if out.is_empty() {
        return Err(PartialError::Parse(spec.to_string()));
    }
    Ok(out)
}

/// Sides of the boundary divisors of the standard cell: intervals of `0..n-1`
/// avoiding infinity, of size `2..=n-2`.
pub fn delta_sides(n: usize) -> Vec<u64> {
    crate::insertion::bad_chords(n)
}

fn same_divisor(a: u64, b: u64, n: usize) -> bool {
    a == b || a == all_labels(n) & !b
}

/// Two divisors cross as chords when all four regions are non-empty.
pub fn crossing(a: u64, b: u64, n: usize) -> bool {
    let z = all_labels(n);
    a & b != 0 && a & !b != 0 && b & !a != 0 && z & !(a | b) != 0
}

pub fn classify(n: usize, sides: &[u64]) -> Result<DivisorSet, PartialError> {
    let mut uniq: Vec<u64> = Vec::new();
    for &s in sides {
        if !uniq.iter().any(|&u| same_divisor(u, s, n)) {
            uniq.push(s);
        }
    }
    let delta = delta_sides(n);
    if uniq.len() == delta.len() && n >= 5 && delta.iter().all(|d| uniq.iter().any(|&u| same_divisor(u, *d, n))) && uniq.len() > 3 {
        return Ok(DivisorSet { n, sides: uniq, kind: Admissibility::DeltaFull });
    }
    let kind = match uniq.len() {
        1 => Admissibility::Single,
        2 => Admissibility::Pair,
        3 => {
            let mut ok = true;
            for i in 0..3 {
                for j in i + 1..3 {
                    if crossing(uniq[i], uniq[j], n) {
                        let third = uniq[3 - i - j];
                        let z = all_labels(n);
                        let mut found = false;
                        for a in [uniq[i], z & !uniq[i]] {
                            for b in [uniq[j], z & !uniq[j]] {
                                if crossing(a, b, n) && same_divisor(a | b, third, n) {
                                    found = true;
                                }
                            }
                        }
                        ok &= found;
                    }
                }
            }
            if !ok {
                return Err(PartialError::NotAdmissible("two divisors cross and the third is not their intersection-divisor".into()));
            }
            Admissibility::TripleWithIntersection
        }
        k => return Err(PartialError::NotAdmissible(format!("{k} divisors"))),
    };
    Ok(DivisorSet { n, sides: uniq, kind })
}

// ---------------------------------------------------------------------------
// Ground truth by kernel computation

/// Residue conditions for every side, in 01-coordinates.
pub fn condition_matrix(basis: &Basis01, sides: &[u64]) -> QMatrix {
    let n = basis.n;
    let e = n;
    let z = all_labels(n);
    let mut rows: BTreeMap<(usize, PairKey), Vec<(usize, QRational)>> = BTreeMap::new();
    for (col, seq) in basis.elements.iter().enumerate() {
        let f = poly(seq);
        for (si, &side) in sides.iter().enumerate() {
            let lead_l = side.trailing_zeros() as Label;
            let lead_r = (z & !side).trailing_zeros() as Label;
            for (key, c) in residue_mod_both(&f, side, e, lead_l, lead_r).iter() {
                rows.entry((si, key.clone())).or_default().push((col, c.clone()));
            }
        }
    }
    let mut m = QMatrix::zeros(0, basis.len());
    for (_, r) in rows {
        m.push_row(r).expect("columns within bounds");
    }
    m
}

pub fn is_in_cohomology(form: &PolySum, n: usize, sides: &[u64]) -> bool {
    let z = all_labels(n);
    sides.iter().all(|&side| {
        let lead_l = side.trailing_zeros() as Label;
        let lead_r = (z & !side).trailing_zeros() as Label;
        residue_mod_both(form, side, n, lead_l, lead_r).is_zero()
    })
}

pub fn kernel_dim(n: usize, sides: &[u64]) -> usize {
    let basis = Basis01::new(n);
    basis.len() - condition_matrix(&basis, sides).rank()
}

/// A kernel basis, one form per free column.
pub fn kernel_basis(n: usize, sides: &[u64]) -> Vec<PolySum> {
    let basis = Basis01::new(n);
    condition_matrix(&basis, sides)
        .nullspace()
        .into_iter()
        .map(|v| {
            let coords: BTreeMap<usize, QRational> = v.iter().map(|(k, c)| (*k, c.clone())).collect();
            basis.form(&coords)
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Closed formulas

fn f(n: i64) -> BigInt {
    if n < 0 {
        BigInt::from(0)
    } else {
        factorial(n as u64)
    }
}

/// Case 1: `(n-2)! - (n-r-1)!(r-1)!`.
pub fn case1_formula(n: usize, r: usize) -> BigInt {
    let (n, r) = (n as i64, r as i64);
    f(n - 2) - f(n - r - 1) * f(r - 1)
}

/// Case 2, two disjoint sides of sizes `r` and `s`.
pub fn case2_formula(n: usize, r: usize, s: usize) -> BigInt {
    let (n, r, s) = (n as i64, r as i64, s as i64);
    let rm = BigInt::from(r - 1);
    let sm = BigInt::from(s - 1);
    f(n - 2) - f(n - r - 1) * f(r) - f(n - s - 1) * f(s) + f(n - r - s) * f(r) * f(s)
        + f(n - r - 1) * f(r - 1) * &rm
        - f(n - r - s) * f(r - 1) * &rm * f(s)
        + f(n - s - 1) * f(s - 1) * &sm
        - f(n - r - s) * f(s - 1) * &sm * f(r)
        + f(n - r - s) * f(r - 1) * &rm * f(s - 1) * &sm
}

/// Case 3, sides `R`, `S` crossing with `|R cap S| = k`, plus `R cup S`.
pub fn case3_formula(n: usize, r: usize, s: usize, k: usize) -> BigInt {
    let (n, r, s, k) = (n as i64, r as i64, s as i64, k as i64);
    f(n - 2) + f(n - 1 - (r + s - k)) * (f(r - 1) * f(s - k) + f(s - 1) * f(r - k) - f(r + s - k - 1))
        - f(n - 1 - r) * f(r - 1)
        - f(n - 1 - s) * f(s - 1)
}

/// Sizes of the five Case 3 families.
pub fn case3_family_sizes(n: usize, r: usize, s: usize, k: usize) -> [BigInt; 5] {
    let (n, r, s, k) = (n as i64, r as i64, s as i64, k as i64);
    let w0 = f(n - 2)
        - (f(n - 1 - s - r + k) * f(r + s - k)
            + f(r) * (f(n - 1 - r) - f(n - 1 - s - r + k) * f(s - k + 1))
            + f(s) * (f(n - 1 - s) - f(n - 1 - s - r + k) * f(r - k + 1)));
    let wr = f(r - 1) * BigInt::from(r - 1) * (f(n - r - 1) - f(s - k + 1) * f(n - r - s + k - 1));
    let ws = f(s - 1) * BigInt::from(s - 1) * (f(n - s - 1) - f(r - k + 1) * f(n - r - s + k - 1));
    let wrs = f(n - 1 - r - s + k)
        * (f(r + s - k - 1) * BigInt::from(r + s - k - 1)
            - f(r - 1) * f(s - k) * BigInt::from(s - k)
            - ((f(r - k) * BigInt::from(r - k) - f(r - k)) * f(s) + f(r - k) * f(s - 1)));
    let wrss = f(n - 1 - r - s + k) * f(s - 1) * BigInt::from(s - 1) * (f(r - k) * BigInt::from(r - k) - f(r - k));
    [w0, wr, ws, wrs, wrss]
}

/// Normalized sides: disjoint for pairs, `R, S` with `R cup S` for triples; all avoiding two labels.
fn choose_sides(set: &DivisorSet) -> Option<Vec<u64>> {
    let n = set.n;
    let z = all_labels(n);
    let flip = |m: u64| z & !m;
    match set.kind {
        Admissibility::Single => {
            let s = set.sides[0];
            Some(vec![if s.count_ones() <= flip(s).count_ones() { s } else { flip(s) }])
        }
        Admissibility::Pair => {
            let (a, b) = (set.sides[0], set.sides[1]);
            if crossing(a, b, n) {
                return None;
            }
            for x in [a, flip(a)] {
                for y in [b, flip(b)] {
                    if x & y == 0 && (z & !(x | y)).count_ones() >= 2 {
                        return Some(vec![x, y]);
                    }
                }
            }
            None
        }
        Admissibility::TripleWithIntersection => {
            let sides = &set.sides;
            for i in 0..3 {
                for j in 0..3 {
                    if i == j || !crossing(sides[i], sides[j], n) {
                        continue;
                    }
                    let third = sides[3 - i - j];
                    for a in [sides[i], flip(sides[i])] {
                        for b in [sides[j], flip(sides[j])] {
                            if crossing(a, b, n) && same_divisor(a | b, third, n) && (z & !(a | b)).count_ones() >= 2 {
                                return Some(vec![a, b]);
                            }
                        }
                    }
                }
            }
            None
        }
        Admissibility::DeltaFull => None,
    }
}

/// Closed-form dimension for the case, when one is known.
pub fn case_formula(set: &DivisorSet) -> Option<BigInt> {
    let n = set.n;
    match set.kind {
        Admissibility::Single => Some(case1_formula(n, set.sides[0].count_ones() as usize)),
        Admissibility::Pair => {
            let s = choose_sides(set)?;
            Some(case2_formula(n, s[0].count_ones() as usize, s[1].count_ones() as usize))
        }
        Admissibility::TripleWithIntersection => {
            let s = choose_sides(set)?;
            let (r, ss, k) = (s[0].count_ones(), s[1].count_ones(), (s[0] & s[1]).count_ones());
            Some(case3_formula(n, r as usize, ss as usize, k as usize))
        }
        Admissibility::DeltaFull => Some(BigInt::from(crate::insertion::dim_delta(n))),
    }
}

// ---------------------------------------------------------------------------
// Constructive bases

type WordSum = QCombo<Vec<Label>>;

/// Lyndon shuffles of degree `>= 2` on the letters in the given order; each is a
/// list of factors, a factor starting with its least letter.
pub fn lyndon_shuffles_ge2(order: &[Label]) -> Vec<Vec<Vec<Label>>> {
    let k = order.len();
    let mut out = Vec::new();
    let mut assign = vec![0usize; k];
    fn rec(i: usize, nblocks: usize, assign: &mut Vec<usize>, order: &[Label], out: &mut Vec<Vec<Vec<Label>>>) {
        let k = order.len();
        if i == k {
            if nblocks < 2 {
                return;
            }
            let blocks: Vec<Vec<Label>> =
                (0..nblocks).map(|b| (0..k).filter(|&j| assign[j] == b).map(|j| order[j]).collect()).collect();
            let mut choices: Vec<Vec<Vec<Label>>> = Vec::new();
            for b in &blocks {
                let mut ws = Vec::new();
                permutations(&b[1..], &mut |p: &[Label]| {
                    let mut w = vec![b[0]];
                    w.extend_from_slice(p);
                    ws.push(w);
                });
                choices.push(ws);
            }
            let mut idx = vec![0usize; choices.len()];
            loop {
                out.push(idx.iter().zip(&choices).map(|(&i, c)| c[i].clone()).collect());
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
                    return;
                }
            }
        }
        for b in 0..=nblocks {
            assign[i] = b;
            rec(i + 1, nblocks.max(b + 1), assign, order, out);
        }
    }
    if k >= 2 {
        rec(0, 0, &mut assign, order, &mut out);
    }
    out
}

fn expand_shuffle(factors: &[Vec<Label>]) -> WordSum {
    let mut acc = WordSum::unit(Vec::new());
    for fac in factors {
        let mut next = WordSum::zero();
        for (w, c) in acc.iter() {
            for_each_interleaving(w, fac, &mut |x: &[Label]| next.add_term(x.to_vec(), c.clone()));
        }
        acc = next;
    }
    acc
}

/// Replaces the letter `slot` in every word by the words of `inner`.
fn substitute(ws: &WordSum, slot: Label, inner: &WordSum) -> WordSum {
    let mut out = WordSum::zero();
    for (w, c) in ws.iter() {
        let pos = w.iter().position(|&l| l == slot).expect("slot letter present");
        for (x, d) in inner.iter() {
            let mut v = w[..pos].to_vec();
            v.extend_from_slice(x);
            v.extend_from_slice(&w[pos + 1..]);
            out.add_term(v, c * d);
        }
    }
    out
}

/// All 01-structures `(0, 1, sigma)` on the given extra labels.
fn structures(n: usize, rest: &[Label]) -> Vec<Vec<Label>> {
    let mut out = Vec::new();
    permutations(rest, &mut |p: &[Label]| {
        let mut s = vec![0, n - 2];
        s.extend_from_slice(p);
        out.push(s);
    });
    out
}

fn fill(structure: &[Label], slots: &[(Label, &WordSum)]) -> PolySum {
    let mut ws = WordSum::unit(structure.to_vec());
    for (slot, inner) in slots {
        ws = substitute(&ws, *slot, inner);
    }
    let mut out = PolySum::zero();
    for (w, c) in ws.iter() {
        out.add_scaled(&poly(w), c);
    }
    out
}

struct Namer {
    n: usize,
    extra: BTreeMap<Label, String>,
}

impl Namer {
    fn name(&self, l: Label) -> String {
        self.extra.get(&l).cloned().unwrap_or_else(|| label_name(l, self.n))
    }

    fn word(&self, w: &[Label]) -> String {
        w.iter().map(|&l| self.name(l)).collect::<Vec<_>>().join("")
    }

    fn shuffle(&self, factors: &[Vec<Label>]) -> String {
        let parts: Vec<String> = factors.iter().map(|f| self.word(f)).collect();
        format!("({})", parts.join("ш"))
    }

    fn structure(&self, s: &[Label], fills: &BTreeMap<Label, String>) -> String {
        let parts: Vec<String> = s.iter().map(|l| fills.get(l).cloned().unwrap_or_else(|| self.name(*l))).collect();
        format!("[{}]", parts.join(" "))
    }
}

fn rest_labels(n: usize, exclude: u64) -> Vec<Label> {
    (1..n - 2).chain(std::iter::once(n - 1)).filter(|&l| exclude >> l & 1 == 0).collect()
}

fn sorted_order(groups: &[u64]) -> Vec<Label> {
    groups.iter().flat_map(|&g| labels_of(g)).collect()
}

/// Builds the case basis for sides avoiding `0` and `1`.
fn construct_normalized(n: usize, kind: Admissibility, sides: &[u64]) -> Vec<PartialBasisElement> {
    let e = n;
    let e2 = n + 1;
    let namer = Namer { n, extra: [(e, "e".to_string()), (e2, "f".to_string())].into_iter().collect() };
    let consecutive = |s: &[Label], m: u64| split_consecutive(s, m).is_some();
    let mut out = Vec::new();
    let push = |out: &mut Vec<PartialBasisElement>, family: &'static str, description: String, form: PolySum| {
        out.push(PartialBasisElement { family, description, form });
    };
    let block_free = |blocks: &[u64]| -> Vec<Vec<Label>> {
        structures(n, &rest_labels(n, 0)).into_iter().filter(|s| blocks.iter().all(|&b| !consecutive(s, b))).collect()
    };
    let single_insertions = |out: &mut Vec<PartialBasisElement>,
                             family: &'static str,
                             side: u64,
                             order: &[Label],
                             avoid: Option<u64>| {
        let shuffles = lyndon_shuffles_ge2(order);
        let mut rest = rest_labels(n, side);
        rest.push(e);
        for s in structures(n, &rest) {
            if let Some(m) = avoid {
                if consecutive(&s, m) {
                    continue;
                }
            }
            for sh in &shuffles {
                let ws = expand_shuffle(sh);
                let fills: BTreeMap<Label, String> = [(e, namer.shuffle(sh))].into_iter().collect();
                push(out, family, namer.structure(&s, &fills), fill(&s, &[(e, &ws)]));
            }
        }
    };
    match kind {
        Admissibility::Single => {
            let r = sides[0];
            for s in block_free(&[r]) {
                push(&mut out, "W0", namer.structure(&s, &BTreeMap::new()), poly(&s));
            }
            single_insertions(&mut out, "Wsh", r, &labels_of(r), None);
        }
        Admissibility::Pair => {
            let (r, s_) = (sides[0], sides[1]);
            for s in block_free(&[r, s_]) {
                push(&mut out, "W0", namer.structure(&s, &BTreeMap::new()), poly(&s));
            }
            single_insertions(&mut out, "W_R", r, &labels_of(r), Some(s_));
            single_insertions(&mut out, "W_S", s_, &labels_of(s_), Some(r));
            let shr = lyndon_shuffles_ge2(&labels_of(r));
            let shs = lyndon_shuffles_ge2(&labels_of(s_));
            let mut rest = rest_labels(n, r | s_);
            rest.push(e);
            rest.push(e2);
            for st in structures(n, &rest) {
                for a in &shr {
                    for b in &shs {
                        let (wa, wb) = (expand_shuffle(a), expand_shuffle(b));
                        let fills: BTreeMap<Label, String> =
                            [(e, namer.shuffle(a)), (e2, namer.shuffle(b))].into_iter().collect();
                        push(&mut out, "W_RS", namer.structure(&st, &fills), fill(&st, &[(e, &wa), (e2, &wb)]));
                    }
                }
            }
        }
        Admissibility::TripleWithIntersection => {
            let (r, s_) = (sides[0], sides[1]);
            let (r_only, both, s_only) = (r & !s_, r & s_, s_ & !r);
            for s in block_free(&[r, s_, r | s_]) {
                push(&mut out, "W0", namer.structure(&s, &BTreeMap::new()), poly(&s));
            }
            single_insertions(&mut out, "W_dR", r, &sorted_order(&[r_only, both]), Some(s_only | 1 << e));
            single_insertions(&mut out, "W_dS", s_, &sorted_order(&[both, s_only]), Some(r_only | 1 << e));
            let union_order = sorted_order(&[r_only, both, s_only]);
            let mut rest = rest_labels(n, r | s_);
            rest.push(e);
            let outer = structures(n, &rest);
            let union_shuffles: Vec<Vec<Vec<Label>>> = lyndon_shuffles_ge2(&union_order)
                .into_iter()
                .filter(|sh| sh.iter().all(|fac| !has_block(fac, r) && !has_block(fac, s_)))
                .collect();
            for st in &outer {
                for sh in &union_shuffles {
                    let ws = expand_shuffle(sh);
                    let fills: BTreeMap<Label, String> = [(e, namer.shuffle(sh))].into_iter().collect();
                    push(&mut out, "W_dRS", namer.structure(st, &fills), fill(st, &[(e, &ws)]));
                }
            }
            // Second level: words on R cup S at `e` completing the single-level family.
            let z = all_labels(n);
            for st in &outer {
                let known: Vec<WordSum> = union_shuffles.iter().map(|sh| expand_shuffle(sh)).collect();
                for ws in level_two_completion(n, st, e, &union_order, &known, &[r, s_, r | s_], z) {
                    let fills: BTreeMap<Label, String> = [(e, format!("<{}>", format_word_sum(&ws, &namer)))].into_iter().collect();
                    push(&mut out, "W_dRS_S", namer.structure(st, &fills), fill(st, &[(e, &ws)]));
                }
            }
        }
        Admissibility::DeltaFull => {}
    }
    out
}

fn format_word_sum(ws: &WordSum, namer: &Namer) -> String {
    let mut out = String::new();
    for (w, c) in ws.iter() {
        let neg = c < &QRational::from_integer(0.into());
        if !out.is_empty() || neg {
            out.push_str(if neg { "-" } else { "+" });
        }
        let abs = if neg { -c.clone() } else { c.clone() };
        if abs != QRational::from_integer(1.into()) {
            out.push_str(&format!("{abs}*"));
        }
        out.push_str(&namer.word(w));
    }
    out
}

/// Word sums `X` on `letters` with `structure[e := X]` in the cohomology,
/// chosen to extend the span of `known` to all such sums.
fn level_two_completion(
    n: usize,
    structure: &[Label],
    e: Label,
    letters: &[Label],
    known: &[WordSum],
    sides: &[u64],
    z: u64,
) -> Vec<WordSum> {
    let mut words: Vec<Vec<Label>> = Vec::new();
    permutations(letters, &mut |p: &[Label]| words.push(p.to_vec()));
    let index: BTreeMap<Vec<Label>, usize> = words.iter().cloned().enumerate().map(|(i, w)| (w, i)).collect();
    let mut rows: BTreeMap<(usize, PairKey), Vec<(usize, QRational)>> = BTreeMap::new();
    for (col, w) in words.iter().enumerate() {
        let form = fill(structure, &[(e, &WordSum::unit(w.clone()))]);
        for (si, &side) in sides.iter().enumerate() {
            let lead_l = side.trailing_zeros() as Label;
            let lead_r = (z & !side).trailing_zeros() as Label;
            for (key, c) in residue_mod_both(&form, side, n, lead_l, lead_r).iter() {
                rows.entry((si, key.clone())).or_default().push((col, c.clone()));
            }
        }
    }
    let mut m = QMatrix::zeros(0, words.len());
    for (_, r) in rows {
        m.push_row(r).expect("columns within bounds");
    }
    let to_vec = |ws: &WordSum| -> BTreeMap<usize, QRational> { ws.iter().map(|(w, c)| (index[w], c.clone())).collect() };
    let mut ech = Echelon::new();
    for k in known {
        ech.insert(to_vec(k));
    }
    let mut out = Vec::new();
    for v in m.nullspace() {
        let coords: BTreeMap<usize, QRational> = v.iter().map(|(k, c)| (*k, c.clone())).collect();
        if ech.insert(coords).is_some() {
            out.push(v.iter().map(|(k, c)| (words[*k].clone(), c.clone())).collect());
        }
    }
    out
}

fn has_block(w: &[Label], m: u64) -> bool {
    let size = m.count_ones() as usize;
    w.windows(size).any(|x| mask_of(x) == m)
}

/// A permutation of labels sending two labels outside `avoid` to `0` and `1`.
fn normalizing_permutation(n: usize, avoid: u64) -> Vec<Label> {
    let z = all_labels(n);
    let free = labels_of(z & !avoid);
    let (a, b) = if free.contains(&0) && free.contains(&(n - 2)) {
        (0, n - 2)
    } else if free.contains(&0) {
        (0, *free.iter().find(|&&l| l != 0).unwrap())
    } else if free.contains(&(n - 2)) {
        (*free.iter().find(|&&l| l != n - 2).unwrap(), n - 2)
    } else {
        (free[0], free[1])
    };
    let mut sigma: Vec<Label> = (0..n).collect();
    // Transpositions a <-> 0 then b <-> n-2, tracked on images.
    let swap = |sigma: &mut Vec<Label>, x: Label, y: Label| {
        for v in sigma.iter_mut() {
            if *v == x {
                *v = y;
            } else if *v == y {
                *v = x;
            }
        }
    };
    swap(&mut sigma, a, 0);
    let b_img = sigma[b];
    swap(&mut sigma, b_img, n - 2);
    sigma
}

/// Basis of `H^{n-3}(M_{0,n}^gamma)` as 01-form sums.
pub fn cohom_basis(set: &DivisorSet) -> Result<Vec<PartialBasisElement>, PartialError> {
    let n = set.n;
    if set.kind == Admissibility::DeltaFull {
        return Ok(crate::insertion::insertion_basis(n)
            .into_iter()
            .map(|e| PartialBasisElement {
                family: "insertion",
                description: e.expr.to_string(),
                form: crate::insertion::words_to_forms(&e.expand(), n - 1),
            })
            .collect());
    }
    let Some(sides) = choose_sides(set) else {
        return Ok(kernel_basis(n, &set.sides)
            .into_iter()
            .map(|form| PartialBasisElement { family: "kernel", description: String::new(), form })
            .collect());
    };
    let avoid = sides.iter().fold(0u64, |a, b| a | b);
    let sigma = normalizing_permutation(n, avoid);
    let mut inverse = vec![0; n];
    for (i, &s) in sigma.iter().enumerate() {
        inverse[s] = i;
    }
    let normalized: Vec<u64> = sides.iter().map(|&m| mask_of(&labels_of(m).iter().map(|&l| sigma[l]).collect::<Vec<_>>())).collect();
    let identity = sigma.iter().enumerate().all(|(i, &s)| i == s);
    let built = construct_normalized(n, set.kind, &normalized);
    Ok(built
        .into_iter()
        .map(|mut el| {
            if !identity {
                let back = relabel(&el.form, |l| if l < n { inverse[l] } else { l });
                el.form = rewrite_01(&back, n);
                el.description = format!("relabelled {}", el.description);
            }
            el
        })
        .collect())
}

pub fn cohom_dim(set: &DivisorSet) -> Result<usize, PartialError> {
    Ok(cohom_basis(set)?.len())
}

/// Rank of the basis in 01-coordinates.
pub fn basis_rank(n: usize, basis: &[PartialBasisElement]) -> usize {
    let b = Basis01::new(n);
    let mut ech = Echelon::new();
    for el in basis {
        ech.insert(b.coords(&el.form));
    }
    ech.rank()
}

/// Side masks of every divisor of `M_{0,n}` (one side each).
pub fn all_divisor_sides(n: usize) -> Vec<u64> {
    let top = n - 1;
    let mut out = Vec::new();
    for m in 0u64..(1u64 << top) {
        let size = m.count_ones() as usize;
        if size >= 2 && size + 2 <= n {
            out.push(m);
        }
    }
    out
}

pub fn describe_sides(n: usize, sides: &[u64]) -> String {
    sides
        .iter()
        .map(|&m| labels_of(m).iter().map(|&l| label_name(l, n)).collect::<Vec<_>>().join("="))
        .collect::<Vec<_>>()
        .join(";")
}

