use floerkit::exactalg::linalg::{determinant, inverse, is_identity, kernel, rank, solve};
use floerkit::exactalg::smith::{smith, IntMatrix};
use floerkit::exactalg::{int, Coefficients, Matrix};
use num_bigint::BigInt;
use num_traits::Zero;
use proptest::prelude::*;

fn small_matrix(max: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1..=max, 1..=max).prop_flat_map(|(r, c)| prop::collection::vec(prop::collection::vec(-4i64..=4, c), r))
}

fn square(max: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1..=max).prop_flat_map(|n| prop::collection::vec(prop::collection::vec(-3i64..=3, n), n))
}

fn mat(rows: &[Vec<i64>]) -> Matrix {
    Matrix::from_i64_rows(rows, rows[0].len()).unwrap()
}

fn coefficient_rings() -> impl Strategy<Value = Coefficients> {
    prop_oneof![
        Just(Coefficients::Rationals),
        Just(Coefficients::prime_field(2).unwrap()),
        Just(Coefficients::prime_field(3).unwrap()),
        Just(Coefficients::prime_field(7).unwrap()),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rank_nullity(rows in small_matrix(6), k in coefficient_rings()) {
        let a = mat(&rows).normalized(&k);
        let ker = kernel(&a, &k).unwrap();
        prop_assert_eq!(rank(&a, &k) + ker.cols(), a.cols());
        prop_assert!(a.mm(&ker, &k).is_zero());
        prop_assert_eq!(rank(&ker, &k), ker.cols());
    }

    #[test]
    fn rank_of_transpose(rows in small_matrix(6), k in coefficient_rings()) {
        let a = mat(&rows).normalized(&k);
        prop_assert_eq!(rank(&a, &k), rank(&a.transpose(), &k));
    }

    #[test]
    fn inverse_when_nonsingular(rows in square(5), k in coefficient_rings()) {
        let a = mat(&rows).normalized(&k);
        let det = determinant(&a, &k).unwrap();
        match inverse(&a, &k) {
            Ok(b) => {
                prop_assert!(!det.is_zero());
                prop_assert!(is_identity(&a.mm(&b, &k)));
                prop_assert!(is_identity(&b.mm(&a, &k)));
            }
            Err(_) => prop_assert!(det.is_zero()),
        }
    }

    #[test]
    fn determinant_is_multiplicative(a in square(4), seed in any::<u64>()) {
        let n = a.len();
        let b: Vec<Vec<i64>> = (0..n)
            .map(|i| (0..n).map(|j| ((seed >> ((i * n + j) % 60)) & 3) as i64 - 1).collect())
            .collect();
        let k = Coefficients::Rationals;
        let (a, b) = (mat(&a), mat(&b));
        let lhs = determinant(&a.mm(&b, &k), &k).unwrap();
        let rhs = determinant(&a, &k).unwrap() * determinant(&b, &k).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn solve_recovers_a_solution(rows in small_matrix(5), x in prop::collection::vec(-3i64..=3, 5)) {
        let k = Coefficients::Rationals;
        let a = mat(&rows);
        let x = Matrix::from_fn(a.cols(), 1, |i, _| int(x[i]));
        let b = a.mm(&x, &k);
        let y = solve(&a, &b, &k).unwrap().expect("consistent system");
        prop_assert_eq!(a.mm(&y, &k), b);
    }

    #[test]
    fn smith_normal_form(rows in small_matrix(5)) {
        let a = IntMatrix::from_matrix(&mat(&rows)).unwrap();
        let s = smith(&a);
        prop_assert_eq!(s.u.mul(&a).mul(&s.v), s.d.clone());
        prop_assert_eq!(s.u.mul(&s.u_inv), IntMatrix::identity(a.rows));
        prop_assert_eq!(s.v.mul(&s.v_inv), IntMatrix::identity(a.cols));
        let f = s.invariant_factors();
        prop_assert_eq!(f.len(), rank(&mat(&rows), &Coefficients::Rationals));
        for w in f.windows(2) {
            prop_assert!(w[0] > BigInt::zero());
            prop_assert!((&w[1] % &w[0]).is_zero());
        }
        for i in 0..a.rows {
            for j in 0..a.cols {
                if i != j || i >= s.rank {
                    prop_assert!(s.d.data[i][j].is_zero());
                }
            }
        }
    }

    #[test]
    fn prime_field_inverses(p in prop::sample::select(vec![2u64, 3, 5, 7, 11, 13]), x in 1i64..1000) {
        let k = Coefficients::prime_field(p).unwrap();
        let a = k.normalize(int(x));
        match k.inverse(&a) {
            Ok(b) => prop_assert_eq!(k.mul(&a, &b), int(1)),
            Err(_) => prop_assert_eq!(x % p as i64, 0),
        }
    }
}

#[test]
fn composite_modulus_is_rejected() {
    assert!(Coefficients::prime_field(4).is_err());
    assert!(Coefficients::prime_field(1).is_err());
    assert!(Coefficients::prime_field(9).is_err());
}

#[test]
fn torsion_example() {
    let a = IntMatrix::from_matrix(&Matrix::from_i64_rows(&[vec![2, 0], vec![0, 6]], 2).unwrap()).unwrap();
    let f: Vec<i64> = smith(&a).invariant_factors().iter().map(|x| x.try_into().unwrap()).collect();
    assert_eq!(f, vec![2, 6]);
}
