//! Noncommutative words in `x, y` and in `y_1, y_2, ...`: shuffle, stuffle,
//! the projection `pi_y`, Lyndon words and their Lie brackets, the Poisson
//! bracket, and the double-shuffle membership test.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::combo::QCombo;
use crate::linalg::{q_to_string, qi, QRational};

pub type Poly<W> = QCombo<W>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WordsError {
    #[error("word `{0}` ends in x and has no composition")]
    NotConvergentShape(String),
    #[error("word `{0}` is not a Lyndon word")]
    NotLyndon(String),
    #[error("polynomial is not homogeneous")]
    NotHomogeneous,
    #[error("cannot parse `{0}`")]
    Parse(String),
    #[error("composition parts must be at least 1")]
    ZeroPart,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Letter {
    X,
    Y,
}

fn len_then_lex<T: Ord>(a: &[T], b: &[T]) -> Ordering {
    a.len().cmp(&b.len()).then_with(|| a.cmp(b))
}

/// A monomial in noncommuting `x < y`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct WordXY(pub Vec<Letter>);

impl Ord for WordXY {
    fn cmp(&self, other: &Self) -> Ordering {
        len_then_lex(&self.0, &other.0)
    }
}

impl PartialOrd for WordXY {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl WordXY {
    pub fn empty() -> Self {
        Self(Vec::new())
    }

    pub fn weight(&self) -> usize {
        self.0.len()
    }

    pub fn depth(&self) -> usize {
        self.0.iter().filter(|l| **l == Letter::Y).count()
    }

    pub fn concat(&self, other: &WordXY) -> WordXY {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        WordXY(v)
    }

    pub fn reversed(&self) -> WordXY {
        WordXY(self.0.iter().rev().copied().collect())
    }

    /// `x^{a} y`.
    pub fn x_pow_y(a: usize) -> WordXY {
        let mut v = vec![Letter::X; a];
        v.push(Letter::Y);
        WordXY(v)
    }
}

impl fmt::Display for WordXY {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for l in &self.0 {
            write!(f, "{}", if *l == Letter::X { 'x' } else { 'y' })?;
        }
        Ok(())
    }
}

impl FromStr for WordXY {
    type Err = WordsError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s == "1" || s.is_empty() {
            return Ok(WordXY::empty());
        }
        s.chars()
            .map(|c| match c {
                'x' => Ok(Letter::X),
                'y' => Ok(Letter::Y),
                _ => Err(WordsError::Parse(s.to_string())),
            })
            .collect::<Result<Vec<_>, _>>()
            .map(WordXY)
    }
}

/// A sequence of positive integers `(k_1, ..., k_d)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct IntComposition(pub Vec<u32>);

impl Ord for IntComposition {
    fn cmp(&self, other: &Self) -> Ordering {
        len_then_lex(&self.0, &other.0)
    }
}

impl PartialOrd for IntComposition {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl IntComposition {
    pub fn new(parts: Vec<u32>) -> Result<Self, WordsError> {
        if parts.contains(&0) {
            return Err(WordsError::ZeroPart);
        }
        Ok(Self(parts))
    }

    pub fn weight(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn depth(&self) -> usize {
        self.0.len()
    }

    pub fn is_convergent(&self) -> bool {
        self.0.first().is_some_and(|&k| k >= 2)
    }
}

impl fmt::Display for IntComposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(u32::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl FromStr for IntComposition {
    type Err = WordsError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim().trim_start_matches('(').trim_end_matches(')');
        if t.trim().is_empty() {
            return Ok(IntComposition(Vec::new()));
        }
        let parts = t
            .split(',')
            .map(|p| p.trim().parse::<u32>().map_err(|_| WordsError::Parse(s.to_string())))
            .collect::<Result<Vec<_>, _>>()?;
        IntComposition::new(parts)
    }
}

/// A monomial `y_{i_1} ... y_{i_d}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct WordY(pub Vec<u32>);

impl Ord for WordY {
    fn cmp(&self, other: &Self) -> Ordering {
        len_then_lex(&self.0, &other.0)
    }
}

impl PartialOrd for WordY {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl WordY {
    pub fn weight(&self) -> u32 {
        self.0.iter().sum()
    }
}

impl From<&IntComposition> for WordY {
    fn from(k: &IntComposition) -> Self {
        WordY(k.0.clone())
    }
}

impl fmt::Display for WordY {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self.0.iter().map(|i| format!("y{i}")).collect();
        write!(f, "{}", parts.join(" "))
    }
}

impl FromStr for WordY {
    type Err = WordsError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s == "1" || s.is_empty() {
            return Ok(WordY(Vec::new()));
        }
        s.split_whitespace()
            .map(|tok| {
                tok.strip_prefix('y')
                    .and_then(|d| d.parse::<u32>().ok())
                    .filter(|&i| i >= 1)
                    .ok_or_else(|| WordsError::Parse(s.to_string()))
            })
            .collect::<Result<Vec<_>, _>>()
            .map(WordY)
    }
}

/// Renders a polynomial as `2*xxy - 1/4*yxy`, terms in length-then-lex order.
pub fn format_poly<W: Ord + Clone + fmt::Display>(p: &Poly<W>) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (i, (w, c)) in p.iter().enumerate() {
        let neg = c.is_negative();
        let abs = c.abs();
        if i == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        if abs.is_one() {
            out.push_str(&w.to_string());
        } else {
            out.push_str(&format!("{}*{}", q_to_string(&abs), w));
        }
    }
    out
}

/// Parses `2*xxy - 1/4*yxy` (also accepts a bare coefficient for the empty word).
pub fn parse_poly_xy(s: &str) -> Result<Poly<WordXY>, WordsError> {
    parse_poly_with(s, |t| t.parse::<WordXY>())
}

/// Parses a polynomial in the `y_i`, terms like `3*y2 y1 + y3`.
pub fn parse_poly_y(s: &str) -> Result<Poly<WordY>, WordsError> {
    parse_poly_with(s, |t| t.parse::<WordY>())
}

fn parse_rational(s: &str) -> Option<QRational> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        Some(QRational::new(n, d))
    } else {
        s.parse::<BigInt>().ok().map(QRational::from_integer)
    }
}

fn parse_poly_with<W: Ord + Clone>(
    s: &str,
    word: impl Fn(&str) -> Result<W, WordsError>,
) -> Result<Poly<W>, WordsError> {
    let err = || WordsError::Parse(s.to_string());
    let mut out = Poly::zero();
    let mut chunks: Vec<(bool, String)> = Vec::new();
    let mut sign = false;
    let mut cur = String::new();
    for ch in s.chars() {
        if ch == '+' || ch == '-' {
            if !cur.trim().is_empty() {
                chunks.push((sign, cur.trim().to_string()));
            } else if sign && ch == '-' {
                return Err(err());
            }
            cur.clear();
            sign = ch == '-';
        } else {
            cur.push(ch);
        }
    }
    if !cur.trim().is_empty() {
        chunks.push((sign, cur.trim().to_string()));
    }
    if chunks.is_empty() {
        return Err(err());
    }
    for (neg, body) in chunks {
        let (coeff, w) = match body.split_once('*') {
            Some((c, w)) => (parse_rational(c).ok_or_else(err)?, word(w.trim())?),
            None => match parse_rational(&body) {
                Some(c) if body.chars().all(|c| c.is_ascii_digit() || c == '/' || c.is_whitespace()) => {
                    if c.is_zero() {
                        continue;
                    }
                    (c, word("1")?)
                }
                _ => (QRational::one(), word(&body)?),
            },
        };
        out.add_term(w, if neg { -coeff } else { coeff });
    }
    Ok(out)
}

/// `(k_1, ..., k_d) -> x^{k_1-1} y ... x^{k_d-1} y`.
pub fn composition_to_word(k: &IntComposition) -> WordXY {
    let mut v = Vec::new();
    for &p in &k.0 {
        v.extend(std::iter::repeat_n(Letter::X, p as usize - 1));
        v.push(Letter::Y);
    }
    WordXY(v)
}

pub fn word_to_composition(w: &WordXY) -> Result<IntComposition, WordsError> {
    if w.0.last() == Some(&Letter::X) {
        return Err(WordsError::NotConvergentShape(w.to_string()));
    }
    let mut parts = Vec::new();
    let mut run = 1u32;
    for l in &w.0 {
        match l {
            Letter::X => run += 1,
            Letter::Y => {
                parts.push(run);
                run = 1;
            }
        }
    }
    Ok(IntComposition(parts))
}

/// Shuffle of two sequences, with multiplicities.
pub fn shuffle<T: Ord + Clone>(a: &[T], b: &[T]) -> QCombo<Vec<T>> {
    let mut counts: BTreeMap<Vec<T>, u64> = BTreeMap::new();
    let mut buf = Vec::with_capacity(a.len() + b.len());
    shuffle_rec(a, b, &mut buf, &mut counts);
    counts.into_iter().map(|(w, c)| (w, qi(c as i64))).collect()
}

fn shuffle_rec<T: Ord + Clone>(a: &[T], b: &[T], buf: &mut Vec<T>, out: &mut BTreeMap<Vec<T>, u64>) {
    if a.is_empty() || b.is_empty() {
        let mut w = buf.clone();
        w.extend_from_slice(a);
        w.extend_from_slice(b);
        *out.entry(w).or_insert(0) += 1;
        return;
    }
    buf.push(a[0].clone());
    shuffle_rec(&a[1..], b, buf, out);
    buf.pop();
    buf.push(b[0].clone());
    shuffle_rec(a, &b[1..], buf, out);
    buf.pop();
}

/// Visits every interleaving of `a` and `b` once (no multiplicity merging).
pub fn for_each_interleaving<T: Clone>(a: &[T], b: &[T], f: &mut impl FnMut(&[T])) {
    fn rec<T: Clone>(a: &[T], b: &[T], buf: &mut Vec<T>, f: &mut impl FnMut(&[T])) {
        if a.is_empty() || b.is_empty() {
            let start = buf.len();
            buf.extend_from_slice(a);
            buf.extend_from_slice(b);
            f(buf);
            buf.truncate(start);
            return;
        }
        buf.push(a[0].clone());
        rec(&a[1..], b, buf, f);
        buf.pop();
        buf.push(b[0].clone());
        rec(a, &b[1..], buf, f);
        buf.pop();
    }
    let mut buf = Vec::with_capacity(a.len() + b.len());
    rec(a, b, &mut buf, f);
}

pub fn shuffle_words(a: &WordXY, b: &WordXY) -> Poly<WordXY> {
    shuffle(&a.0, &b.0).map_keys(|w| WordXY(w.clone()))
}

pub fn shuffle_poly(f: &Poly<WordXY>, g: &Poly<WordXY>) -> Poly<WordXY> {
    let mut out = Poly::zero();
    for (u, cu) in f.iter() {
        for (v, cv) in g.iter() {
            out.add_scaled(&shuffle_words(u, v), &(cu * cv));
        }
    }
    out
}

/// Stuffle (quasi-shuffle) of compositions.
pub fn stuffle(a: &IntComposition, b: &IntComposition) -> Poly<IntComposition> {
    let mut counts: BTreeMap<Vec<u32>, i64> = BTreeMap::new();
    let mut buf = Vec::new();
    stuffle_rec(&a.0, &b.0, &mut buf, &mut counts);
    counts.into_iter().map(|(w, c)| (IntComposition(w), qi(c))).collect()
}

fn stuffle_rec(a: &[u32], b: &[u32], buf: &mut Vec<u32>, out: &mut BTreeMap<Vec<u32>, i64>) {
    if a.is_empty() || b.is_empty() {
        let mut w = buf.clone();
        w.extend_from_slice(a);
        w.extend_from_slice(b);
        *out.entry(w).or_insert(0) += 1;
        return;
    }
    buf.push(a[0]);
    stuffle_rec(&a[1..], b, buf, out);
    buf.pop();
    buf.push(b[0]);
    stuffle_rec(a, &b[1..], buf, out);
    buf.pop();
    buf.push(a[0] + b[0]);
    stuffle_rec(&a[1..], &b[1..], buf, out);
    buf.pop();
}

pub fn stuffle_poly(f: &Poly<IntComposition>, g: &Poly<IntComposition>) -> Poly<IntComposition> {
    let mut out = Poly::zero();
    for (u, cu) in f.iter() {
        for (v, cv) in g.iter() {
            out.add_scaled(&stuffle(u, v), &(cu * cv));
        }
    }
    out
}

/// Projection to the `y_i` words, with the depth-one correction terms
/// `(f | x^{n-1} y) (-1)^{n-1} / n * y_1^n`.
pub fn pi_y(f: &Poly<WordXY>) -> Poly<WordY> {
    let mut out = Poly::zero();
    for (w, c) in f.iter() {
        if let Ok(k) = word_to_composition(w) {
            if w.0.is_empty() {
                continue;
            }
            out.add_term(WordY::from(&k), c.clone());
            let n = w.weight();
            if n >= 2 && w.depth() == 1 {
                let sign = if (n - 1) % 2 == 0 { 1 } else { -1 };
                out.add_term(WordY(vec![1; n]), c * QRational::new(BigInt::from(sign), BigInt::from(n)));
            }
        }
    }
    out
}

pub fn is_lyndon<T: Ord>(w: &[T]) -> bool {
    !w.is_empty() && (1..w.len()).all(|i| w < &w[i..])
}

/// Standard factorisation `w = u v` with `v` the longest proper Lyndon suffix.
pub fn standard_factorization<T: Ord>(w: &[T]) -> Option<(&[T], &[T])> {
    if w.len() < 2 {
        return None;
    }
    (1..w.len()).find(|&i| is_lyndon(&w[i..])).map(|i| (&w[..i], &w[i..]))
}

pub fn poly_mul(f: &Poly<WordXY>, g: &Poly<WordXY>) -> Poly<WordXY> {
    let mut out = Poly::zero();
    for (u, cu) in f.iter() {
        for (v, cv) in g.iter() {
            out.add_term(u.concat(v), cu * cv);
        }
    }
    out
}

/// Commutator `[f, g] = fg - gf`.
pub fn bracket(f: &Poly<WordXY>, g: &Poly<WordXY>) -> Poly<WordXY> {
    let mut out = poly_mul(f, g);
    out -= &poly_mul(g, f);
    out
}

pub fn letter_poly(l: Letter) -> Poly<WordXY> {
    Poly::unit(WordXY(vec![l]))
}

/// Recursive bracketing of a Lyndon word along its standard factorisation.
pub fn lyndon_lie(w: &WordXY) -> Result<Poly<WordXY>, WordsError> {
    if !is_lyndon(&w.0) {
        return Err(WordsError::NotLyndon(w.to_string()));
    }
    Ok(lyndon_lie_unchecked(&w.0))
}

fn lyndon_lie_unchecked(w: &[Letter]) -> Poly<WordXY> {
    match standard_factorization(w) {
        None => letter_poly(w[0]),
        Some((u, v)) => bracket(&lyndon_lie_unchecked(u), &lyndon_lie_unchecked(v)),
    }
}

/// All Lyndon words of length exactly `n` over `0..k` (Duval's generation order).
pub fn lyndon_words(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if n == 0 || k == 0 {
        return out;
    }
    let mut w: Vec<usize> = vec![0];
    loop {
        if w.len() == n {
            out.push(w.clone());
        }
        // extend periodically to length n, then increment
        let m = w.len();
        while w.len() < n {
            let c = w[w.len() - m];
            w.push(c);
        }
        while let Some(&last) = w.last() {
            if last + 1 == k {
                w.pop();
            } else {
                break;
            }
        }
        match w.last_mut() {
            None => break,
            Some(last) => *last += 1,
        }
    }
    out
}

pub fn lyndon_words_xy(n: usize) -> Vec<WordXY> {
    lyndon_words(n, 2)
        .into_iter()
        .map(|w| WordXY(w.into_iter().map(|c| if c == 0 { Letter::X } else { Letter::Y }).collect()))
        .collect()
}

fn mobius(mut n: u64) -> i64 {
    let mut result = 1i64;
    let mut p = 2u64;
    while p * p <= n {
        if n.is_multiple_of(p) {
            n /= p;
            if n.is_multiple_of(p) {
                return 0;
            }
            result = -result;
        }
        p += 1;
    }
    if n > 1 {
        result = -result;
    }
    result
}

/// Witt's formula `(1/n) sum_{d | n} mu(d) r^{n/d}`.
pub fn witt_dim(n: u64, r: u64) -> BigInt {
    let mut total = BigInt::zero();
    for d in (1..=n).filter(|d| n.is_multiple_of(*d)) {
        total += BigInt::from(mobius(d)) * num_traits::pow(BigInt::from(r), (n / d) as usize);
    }
    total / BigInt::from(n)
}

/// Derivation with `D_f(x) = 0`, `D_f(y) = [y, f]`.
pub fn derivation(f: &Poly<WordXY>, g: &Poly<WordXY>) -> Poly<WordXY> {
    let yf = bracket(&letter_poly(Letter::Y), f);
    let mut out = Poly::zero();
    for (w, c) in g.iter() {
        for (i, l) in w.0.iter().enumerate() {
            if *l != Letter::Y {
                continue;
            }
            let pre = Poly::unit(WordXY(w.0[..i].to_vec()));
            let post = Poly::unit(WordXY(w.0[i + 1..].to_vec()));
            out.add_scaled(&poly_mul(&poly_mul(&pre, &yf), &post), c);
        }
    }
    out
}

/// `{f, g} = [f, g] + D_f(g) - D_g(f)`.
pub fn poisson_bracket(f: &Poly<WordXY>, g: &Poly<WordXY>) -> Poly<WordXY> {
    let mut out = bracket(f, g);
    out += &derivation(f, g);
    out -= &derivation(g, f);
    out
}

/// All words of length `n` in `x, y`.
pub fn all_words_xy(n: usize) -> Vec<WordXY> {
    (0..1u64 << n)
        .map(|bits| WordXY((0..n).map(|i| if bits >> (n - 1 - i) & 1 == 1 { Letter::Y } else { Letter::X }).collect()))
        .collect()
}

/// All compositions of `n`.
pub fn compositions(n: u32) -> Vec<IntComposition> {
    if n == 0 {
        return vec![IntComposition(Vec::new())];
    }
    let mut out = Vec::new();
    for bits in 0..1u64 << (n - 1) {
        let mut parts = Vec::new();
        let mut run = 1u32;
        for i in 0..n - 1 {
            if bits >> i & 1 == 1 {
                parts.push(run);
                run = 1;
            } else {
                run += 1;
            }
        }
        parts.push(run);
        out.push(IntComposition(parts));
    }
    out.sort();
    out
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DoubleShuffleReport {
    pub shuffle_violations: Vec<(WordXY, WordXY)>,
    pub stuffle_violations: Vec<(IntComposition, IntComposition)>,
}

impl DoubleShuffleReport {
    pub fn passes(&self) -> bool {
        self.shuffle_violations.is_empty() && self.stuffle_violations.is_empty()
    }
}

/// Checks `(f | u ш v) = 0` for all nonempty word pairs and
/// `(pi_y f | a * b) = 0` for all nonempty composition pairs of the weight of `f`.
pub fn check_double_shuffle(f: &Poly<WordXY>, max_weight: usize) -> Result<DoubleShuffleReport, WordsError> {
    let mut report = DoubleShuffleReport::default();
    let Some(weight) = f.keys().next().map(WordXY::weight) else {
        return Ok(report);
    };
    if f.keys().any(|w| w.weight() != weight) {
        return Err(WordsError::NotHomogeneous);
    }
    if weight > max_weight {
        return Ok(report);
    }
    let words_by_len: Vec<Vec<WordXY>> = (0..=weight).map(all_words_xy).collect();
    for lu in 1..weight {
        let lv = weight - lu;
        if lu > lv {
            break;
        }
        for u in &words_by_len[lu] {
            for v in &words_by_len[lv] {
                if lu == lv && u > v {
                    continue;
                }
                let mut s = QRational::zero();
                let mut visit = |w: &[Letter]| {
                    s += f.coeff(&WordXY(w.to_vec()));
                };
                for_each_interleaving(&u.0, &v.0, &mut visit);
                if !s.is_zero() {
                    report.shuffle_violations.push((u.clone(), v.clone()));
                }
            }
        }
    }
    let py = pi_y(f);
    let w = weight as u32;
    let comps: Vec<Vec<IntComposition>> = (0..=w).map(compositions).collect();
    for wa in 1..w {
        let wb = w - wa;
        if wa > wb {
            break;
        }
        for a in &comps[wa as usize] {
            for b in &comps[wb as usize] {
                if wa == wb && a > b {
                    continue;
                }
                let st = stuffle(a, b);
                let s = st.iter().fold(QRational::zero(), |acc, (k, c)| acc + c * py.coeff(&WordY::from(k)));
                if !s.is_zero() {
                    report.stuffle_violations.push((a.clone(), b.clone()));
                }
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::q;

    fn xy(s: &str) -> WordXY {
        s.parse().unwrap()
    }

    fn comp(v: &[u32]) -> IntComposition {
        IntComposition(v.to_vec())
    }

    #[test]
    fn composition_word_roundtrip() {
        assert_eq!(composition_to_word(&comp(&[2, 1])), xy("xyy"));
        assert_eq!(composition_to_word(&comp(&[1])), xy("y"));
        assert_eq!(word_to_composition(&xy("xxyxy")).unwrap(), comp(&[3, 2]));
        assert!(word_to_composition(&xy("yx")).is_err());
    }

    #[test]
    fn shuffle_example() {
        let s = shuffle(&[0, 1], &[0, 1]);
        assert_eq!(s.coeff(&vec![0, 1, 0, 1]), qi(2));
        assert_eq!(s.coeff(&vec![0, 0, 1, 1]), qi(4));
        assert_eq!(s.len(), 2);
        assert_eq!(shuffle(&[1, 2], &[]).coeff(&vec![1, 2]), qi(1));
    }

    #[test]
    fn stuffle_examples() {
        let s = stuffle(&comp(&[2, 1]), &comp(&[3]));
        let expected: Poly<IntComposition> =
            [[2, 1, 3].as_slice(), &[2, 3, 1], &[3, 2, 1], &[2, 4], &[5, 1]].iter().map(|p| (comp(p), qi(1))).collect();
        assert_eq!(s, expected);
        let s = stuffle(&comp(&[2]), &comp(&[2]));
        assert_eq!(s.coeff(&comp(&[2, 2])), qi(2));
        assert_eq!(s.coeff(&comp(&[4])), qi(1));
    }

    #[test]
    fn pi_y_example() {
        let f = parse_poly_xy("2*xxy + xxxy + 4*xyy - 8*yxy + 4*yyx").unwrap();
        let g = pi_y(&f);
        let expected = parse_poly_y("2*y3 + y4 + 4*y2 y1 - 8*y1 y2 + 2/3*y1 y1 y1 - 1/4*y1 y1 y1 y1").unwrap();
        assert_eq!(g, expected);
        assert!(pi_y(&parse_poly_xy("yx").unwrap()).is_zero());
    }

    #[test]
    fn lyndon_depth_one() {
        let l = lyndon_lie(&xy("xxy")).unwrap();
        assert_eq!(l, parse_poly_xy("xxy - 2*xyx + yxx").unwrap());
        assert!(lyndon_lie(&xy("yx")).is_err());
    }

    #[test]
    fn witt_values() {
        assert_eq!(witt_dim(3, 2), BigInt::from(2));
        assert_eq!(witt_dim(1, 2), BigInt::from(2));
        assert_eq!(witt_dim(6, 2), BigInt::from(9));
    }

    #[test]
    fn poisson_x_y_vanishes() {
        let x = letter_poly(Letter::X);
        let y = letter_poly(Letter::Y);
        assert!(poisson_bracket(&x, &y).is_zero());
    }

    #[test]
    fn poly_text_roundtrip() {
        let p = parse_poly_xy("2*xxy - 1/4*yxy").unwrap();
        assert_eq!(format_poly(&p), "2*xxy - 1/4*yxy");
        assert_eq!(p.coeff(&xy("yxy")), q(-1, 4));
        let p = parse_poly_xy("-xy + 3").unwrap();
        assert_eq!(p.coeff(&WordXY::empty()), qi(3));
        assert_eq!(p.coeff(&xy("xy")), qi(-1));
    }

    #[test]
    fn non_lie_fails_shuffle() {
        let f = parse_poly_xy("xxy").unwrap();
        let r = check_double_shuffle(&f, 10).unwrap();
        assert!(r.shuffle_violations.contains(&(xy("x"), xy("xy"))));
        assert!(check_double_shuffle(&Poly::zero(), 5).unwrap().passes());
    }
}
