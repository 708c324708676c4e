use mzv_core::insertion::{
    convergent_forms_rank, convergent_kernel_dim, count_special_convergent, dim_delta, dim_delta_formula,
    insertion_forms, is_convergent_sum,
};
use mzv_core::verify::cell_function_shuffles;
use num_bigint::BigInt;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]
    #[test]
    fn cell_functions_multiply_by_shuffles(seed in any::<u64>()) {
        prop_assert_eq!(cell_function_shuffles(seed, 1), Ok(()));
    }
}

#[test]
fn special_convergent_counts() {
    let got: Vec<usize> = (4..=8).map(count_special_convergent).collect();
    assert_eq!(got, [0, 1, 2, 11, 64]);
}

#[test]
fn insertion_basis_spans_the_convergent_forms() {
    for n in 5..=7 {
        let forms = insertion_forms(n);
        assert!(forms.iter().all(|f| is_convergent_sum(f, n)));
        assert_eq!(forms.len(), dim_delta(n));
        assert_eq!(convergent_kernel_dim(n), dim_delta(n), "n = {n}");
        assert_eq!(BigInt::from(dim_delta(n)), dim_delta_formula(n));
    }
}

// Single convergent polygons already fail to span at n = 6: the three Hamiltonian
// cycles of the complement of the standard hexagon give rank 3 of 4.
#[test]
fn rank_of_single_convergent_polygons() {
    let got: Vec<(usize, usize, usize)> = (5..=8)
        .map(|n| {
            let (count, rank) = convergent_forms_rank(n);
            (count, rank, dim_delta(n))
        })
        .collect();
    assert_eq!(got, [(1, 1, 1), (3, 3, 4), (23, 22, 22), (169, 144, 144)]);
}
