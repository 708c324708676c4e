use mzv_core::insertion::dim_delta;
use mzv_core::partialcohom::{
    basis_rank, case_formula, classify, cohom_basis, delta_sides, describe_sides, kernel_dim, parse_divisors,
    Admissibility,
};
use mzv_core::picard::{expand, expand_gibney, non_adjacent_basis, verify_keel, Divisor, Order};
use num_bigint::BigInt;

fn agree(n: usize, sides: &[u64]) {
    let set = classify(n, sides).unwrap();
    let basis = cohom_basis(&set).unwrap();
    let name = describe_sides(n, &set.sides);
    assert_eq!(basis.len(), kernel_dim(n, &set.sides), "{name} on M_0,{n}");
    assert_eq!(basis_rank(n, &basis), basis.len(), "{name} on M_0,{n}");
    if let Some(f) = case_formula(&set) {
        assert_eq!(f, BigInt::from(basis.len()), "{name} on M_0,{n}");
    }
}

#[test]
fn single_and_pair_divisors_up_to_six_points() {
    for n in 4..=6 {
        let sides = delta_sides(n);
        for (i, &a) in sides.iter().enumerate() {
            agree(n, &[a]);
            for &b in &sides[i + 1..] {
                if classify(n, &[a, b]).map(|s| s.kind == Admissibility::Pair).unwrap_or(false) {
                    agree(n, &[a, b]);
                }
            }
        }
    }
}

#[test]
fn triples_with_intersection() {
    for (spec, n) in [("t1=t2;t2=t3;t1=t2=t3", 6), ("0=t1;t1=t2;0=t1=t2", 6), ("t1=t2;t2=t3;t1=t2=t3", 7)] {
        let sides = parse_divisors(spec, n).unwrap();
        let set = classify(n, &sides).unwrap();
        assert_eq!(set.kind, Admissibility::TripleWithIntersection);
        agree(n, &sides);
    }
}

#[test]
fn full_boundary_gives_convergent_forms() {
    for n in 5..=7 {
        let set = classify(n, &delta_sides(n)).unwrap();
        assert_eq!(set.kind, Admissibility::DeltaFull);
        let basis = cohom_basis(&set).unwrap();
        assert_eq!(basis.len(), dim_delta(n), "n = {n}");
    }
}

#[test]
fn crossing_pair_without_intersection_is_rejected() {
    let sides = parse_divisors("t1=t2;t2=t3;0=t1", 6).unwrap();
    assert!(classify(6, &sides).is_err());
}

#[test]
fn expansions_agree_with_gibney_and_keel() {
    for n in 5..=8 {
        let order = Order::standard(n);
        let basis = non_adjacent_basis(&order);
        for start in 1..=n {
            for len in 2..=n - 2 {
                let pts: Vec<usize> = (0..len).map(|k| (start - 1 + k) % n + 1).collect();
                let d = Divisor::from_points(&pts, n).unwrap();
                let e = expand(&d, &order);
                assert_eq!(e, expand_gibney(&d, &order), "{d} on {n} points");
                assert!(e.keys().all(|k| basis.contains(k)), "{d} on {n} points");
            }
        }
    }
    for n in 5..=6 {
        assert!(verify_keel(&Order::standard(n)).is_empty());
    }
}
