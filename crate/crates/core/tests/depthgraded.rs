use std::collections::HashMap;

use mzv_core::depthgraded::{
    build_m, build_n, depth_graded_dims, depth_two_reduction, lambda_row, odd_solution, p_coeff, q_coeff, DepthError,
};
use mzv_core::linalg::{q, qi};
use num_bigint::BigInt;

type Series = HashMap<(u32, u32, u32), i64>;

const MAX_DEG: u32 = 8;

fn mul(a: &Series, b: &Series) -> Series {
    let mut out = Series::new();
    for (&(x1, y1, t1), c1) in a {
        for (&(x2, y2, t2), c2) in b {
            if x1 + x2 + y1 + y2 <= MAX_DEG {
                *out.entry((x1 + x2, y1 + y2, t1 + t2)).or_default() += c1 * c2;
            }
        }
    }
    out
}

fn geometric(u: &Series) -> Series {
    let mut total: Series = [((0, 0, 0), 1)].into();
    let mut power = total.clone();
    for _ in 0..MAX_DEG {
        power = mul(&power, u);
        for (k, c) in &power {
            *total.entry(*k).or_default() += c;
        }
    }
    total
}

/// Truncated expansions of `P` and `Q = (1 + X) P` in commuting variables.
fn series() -> (Series, Series) {
    let numerator: Series = [((0, 0, 0), 1), ((0, 1, 2), 1)].into();
    let first = geometric(&[((1, 0, 1), 1), ((0, 1, 2), 1)].into());
    let second = geometric(&[((1, 0, 0), 1), ((0, 1, 0), 1)].into());
    let p = mul(&mul(&numerator, &first), &second);
    let qs = mul(&[((0, 0, 0), 1), ((1, 0, 0), 1)].into(), &p);
    (p, qs)
}

#[test]
fn closed_forms_match_the_series() {
    let (p, qs) = series();
    for n in 0..=MAX_DEG {
        for i in 0..=n {
            for j in 0..=2 * n + 2 {
                let key = (n - i, i, j);
                let want_p = qi(*p.get(&key).unwrap_or(&0));
                let want_q = qi(*qs.get(&key).unwrap_or(&0));
                assert_eq!(p_coeff(n, i, j), want_p, "P at n={n} i={i} j={j}");
                assert_eq!(q_coeff(n, i, j), want_q, "Q at n={n} i={i} j={j}");
            }
        }
    }
}

#[test]
fn lambda_rows() {
    let row: Vec<BigInt> = lambda_row(4);
    assert_eq!(row, [2, 7, 9, 5, 1].map(BigInt::from));
}

#[test]
fn m_ranks_by_parity() {
    for n in 5..=20u32 {
        let m = build_m(n);
        let nullity = m.cols() - m.rank();
        let want = if n % 2 == 1 { 0 } else { ((n - 2) / 6) as usize };
        assert_eq!(nullity, want, "n = {n}");
    }
}

#[test]
fn mn_is_lower_triangular() {
    for n in 7..=19u32 {
        let mn = build_m(n).mul(&build_n(n)).unwrap();
        for r in 0..mn.rows() {
            for c in r + 1..mn.cols() {
                assert_eq!(mn.get(r, c), qi(0), "n = {n} at ({r}, {c})");
            }
        }
        if n % 2 == 1 {
            for d in 0..mn.rows() {
                let v = mn.get(d, d);
                assert!([qi(1), qi(-1), qi(2), qi(-2)].contains(&v), "n = {n}: diagonal {v}");
            }
        }
    }
}

#[test]
fn odd_solution_solves_the_system() {
    for n in (5..=15u32).step_by(2) {
        let m = build_m(n);
        let lhs = m.mul_vec(&odd_solution(n)).unwrap();
        assert!(lhs.iter().all(|x| *x == qi(-1)), "n = {n}");
        let solved = m.solve(&vec![qi(-1); m.rows()]).unwrap();
        assert_eq!(solved, odd_solution(n));
    }
}

#[test]
fn depth_dims_examples() {
    let d = |n| depth_graded_dims(n).map(|d| (d.d1, d.d2)).unwrap();
    assert_eq!(d(9), (1, 0));
    assert_eq!(d(8), (0, 1));
    assert_eq!(d(4), (0, 0));
    assert_eq!(d(14), (0, 2));
}

#[test]
fn depth_two_reduction_values() {
    assert_eq!(depth_two_reduction(3, 2).unwrap(), q(-11, 2));
    assert_eq!(depth_two_reduction(2, 3).unwrap(), q(9, 2));
    assert!(matches!(depth_two_reduction(2, 2), Err(DepthError::ParityError(4))));
}
