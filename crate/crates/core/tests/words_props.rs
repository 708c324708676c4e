use mzv_core::linalg::QRational;
use mzv_core::verify::{backwards_word_law, poisson_brackets};
use mzv_core::words::{
    composition_to_word, is_lyndon, lyndon_words, shuffle_poly, shuffle_words, stuffle, stuffle_poly, witt_dim,
    word_to_composition, IntComposition, Letter, Poly, WordXY,
};
use num_bigint::BigInt;
use proptest::prelude::*;

fn word() -> impl Strategy<Value = WordXY> {
    prop::collection::vec(prop::bool::ANY, 0..5)
        .prop_map(|v| WordXY(v.into_iter().map(|b| if b { Letter::Y } else { Letter::X }).collect()))
}

fn composition() -> impl Strategy<Value = IntComposition> {
    prop::collection::vec(1u32..=3, 1..4).prop_map(IntComposition)
}

fn binomial(n: usize, k: usize) -> QRational {
    let mut b = BigInt::from(1);
    for i in 0..k {
        b = b * (n - i) / (i + 1);
    }
    QRational::from_integer(b)
}

fn total(p: &Poly<impl Ord + Clone>) -> QRational {
    p.iter().fold(QRational::from_integer(0.into()), |acc, (_, c)| acc + c)
}

proptest! {
    #[test]
    fn shuffle_is_commutative_and_associative(a in word(), b in word(), c in word()) {
        let (pa, pb, pc) = (Poly::unit(a), Poly::unit(b), Poly::unit(c));
        prop_assert_eq!(shuffle_poly(&pa, &pb), shuffle_poly(&pb, &pa));
        prop_assert_eq!(
            shuffle_poly(&shuffle_poly(&pa, &pb), &pc),
            shuffle_poly(&pa, &shuffle_poly(&pb, &pc))
        );
    }

    #[test]
    fn shuffle_counts_interleavings(a in word(), b in word()) {
        let s = shuffle_words(&a, &b);
        prop_assert_eq!(total(&s), binomial(a.0.len() + b.0.len(), a.0.len()));
        for (w, _) in s.iter() {
            prop_assert_eq!(w.0.len(), a.0.len() + b.0.len());
            prop_assert_eq!(w.depth(), a.depth() + b.depth());
        }
    }

    #[test]
    fn empty_word_is_the_unit(a in word()) {
        prop_assert_eq!(shuffle_words(&a, &WordXY::empty()), Poly::unit(a));
    }

    #[test]
    fn stuffle_is_commutative_and_associative(a in composition(), b in composition(), c in composition()) {
        let (pa, pb, pc) = (Poly::unit(a), Poly::unit(b), Poly::unit(c));
        prop_assert_eq!(stuffle_poly(&pa, &pb), stuffle_poly(&pb, &pa));
        prop_assert_eq!(
            stuffle_poly(&stuffle_poly(&pa, &pb), &pc),
            stuffle_poly(&pa, &stuffle_poly(&pb, &pc))
        );
    }

    #[test]
    fn stuffle_top_depth_is_the_shuffle(a in composition(), b in composition()) {
        let st = stuffle(&a, &b);
        let depth = a.depth() + b.depth();
        let top: QRational = st.iter().filter(|(k, _)| k.depth() == depth).fold(QRational::from_integer(0.into()), |acc, (_, c)| acc + c);
        prop_assert_eq!(top, binomial(depth, a.depth()));
        for (k, _) in st.iter() {
            prop_assert_eq!(k.weight(), a.weight() + b.weight());
        }
    }

    #[test]
    fn words_and_compositions_round_trip(a in composition()) {
        let w = composition_to_word(&a);
        prop_assert_eq!(w.0.len() as u32, a.weight());
        prop_assert_eq!(word_to_composition(&w).unwrap(), a);
    }
}

#[test]
fn lyndon_counts_match_witt() {
    for n in 1..=12 {
        for k in 2..=3 {
            let words = lyndon_words(n, k);
            assert!(words.iter().all(|w| is_lyndon(w)));
            assert_eq!(BigInt::from(words.len()), witt_dim(n as u64, k as u64), "n = {n}, k = {k}");
        }
    }
}

#[test]
fn backwards_words() {
    backwards_word_law(11, 300).unwrap();
}

#[test]
fn poisson_brackets_satisfy_double_shuffle() {
    assert_eq!(poisson_brackets(10).unwrap(), 2);
}
