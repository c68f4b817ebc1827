use floerkit::chambers::up_shift;
use floerkit::cobord::{
    compose, cross_pairing, functoriality_holds, induced_maps, lefschetz, trace_window_equal, validate_cobordism,
    CobordismData, Mod2GradedEndo, Topology, TowerRule,
};
use floerkit::deltacx::{Degree, DeltaComplex};
use floerkit::exactalg::linalg::is_identity;
use floerkit::exactalg::{int, Coefficients, Matrix};
use floerkit::oracle::{generate_random_delta, random_bplus_cobordism, random_conjugation, RandomParams};
use proptest::prelude::*;

fn field() -> impl Strategy<Value = Coefficients> {
    prop_oneof![
        Just(Coefficients::Rationals),
        Just(Coefficients::prime_field(2).unwrap()),
        Just(Coefficients::prime_field(5).unwrap()),
    ]
}

fn complex(size: usize) -> impl Strategy<Value = DeltaComplex> {
    (any::<u64>(), field()).prop_map(move |(seed, k)| {
        let params = RandomParams { max_generators: size, coeff: k, ..RandomParams::default() };
        generate_random_delta(seed, &params).unwrap().complex
    })
}

fn shift(c: &DeltaComplex) -> CobordismData {
    let (up, j) = up_shift(c);
    let n = c.len();
    let mut dwp = vec![int(0); n + 1];
    dwp[n] = int(1);
    CobordismData::new(c.clone(), up, j, vec![int(0); n], dwp, Matrix::zeros(n + 1, n), Topology::cylinder()).unwrap()
}

fn square(max: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1..=max).prop_flat_map(|n| prop::collection::vec(prop::collection::vec(-2i64..=2, n), n))
}

fn mat(rows: &[Vec<i64>]) -> Matrix {
    Matrix::from_i64_rows(rows, rows.len()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn identity_induces_identity(c in complex(16)) {
        let im = induced_maps(&CobordismData::identity(&c)).unwrap();
        prop_assert!(im.passed());
        for maps in [&im.hf, &im.reduced, &im.over, &im.under] {
            prop_assert!(maps.values().all(is_identity));
        }
    }

    #[test]
    fn conjugations_compose(c in complex(14), s1 in any::<u64>(), s2 in any::<u64>()) {
        let w1 = random_conjugation(&c, s1).unwrap();
        let w2 = random_conjugation(&w1.target, s2).unwrap();
        prop_assert!(validate_cobordism(&w1).passed());
        prop_assert!(validate_cobordism(&compose(&w1, &w2).unwrap()).passed());
        prop_assert!(functoriality_holds(&w1, &w2).unwrap());
    }

    #[test]
    fn shifts_compose(c in complex(14), s in any::<u64>()) {
        let w1 = shift(&c);
        let r1 = validate_cobordism(&w1);
        prop_assert!(r1.passed(), "{:?}", r1.checks);
        prop_assert_eq!(w1.k(), Degree::from_integer(1));
        let w2 = compose(&w1, &shift(&w1.target)).unwrap();
        prop_assert_eq!(w2.k(), Degree::from_integer(2));
        let r2 = validate_cobordism(&w2);
        prop_assert!(r2.passed() && r2.tower_rule == TowerRule::Shift, "{:?}", r2.checks);
        let g = random_conjugation(&w1.target, s).unwrap();
        prop_assert!(validate_cobordism(&compose(&w1, &g).unwrap()).passed());
        prop_assert!(functoriality_holds(&w1, &g).unwrap());
        let g0 = random_conjugation(&c, s).unwrap();
        let w = shift(&g0.target);
        prop_assert!(validate_cobordism(&compose(&g0, &w).unwrap()).passed());
        prop_assert!(functoriality_holds(&g0, &w).unwrap());
    }

    #[test]
    fn positive_bplus_kills_towers(seed in any::<u64>(), k in field()) {
        let w = random_bplus_cobordism(seed, &k).unwrap();
        let r = validate_cobordism(&w);
        prop_assert!(r.tower_rule == TowerRule::Vanishing);
        prop_assert!(r.passed(), "{:?}", r.checks);
        prop_assert!(induced_maps(&w).unwrap().passed());
    }

    #[test]
    fn similar_matrices_share_trace_windows(a in square(4), ops in prop::collection::vec((0usize..4, 0usize..4, -1i64..=1), 0..8), m in 1u32..=3) {
        let n = a.len();
        let mut p: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
        let mut pinv = p.clone();
        for (i, j, c) in ops {
            let (i, j) = (i % n, j % n);
            if i == j {
                continue;
            }
            for col in 0..n {
                p[i][col] += c * p[j][col];
            }
            for row in pinv.iter_mut() {
                row[j] -= c * row[i];
            }
        }
        let k = Coefficients::Rationals;
        let (a, p, pinv) = (mat(&a), mat(&p), mat(&pinv));
        prop_assert!(is_identity(&p.mm(&pinv, &k)));
        let b = p.mm(&a, &k).mm(&pinv, &k);
        let w = trace_window_equal(&a, &b, m).unwrap();
        prop_assert!(w.equal);
        let f = Mod2GradedEndo::new(k.clone(), a.clone(), Matrix::zeros(0, 0)).unwrap();
        let g = Mod2GradedEndo::new(k.clone(), b.clone(), Matrix::zeros(0, 0)).unwrap();
        prop_assert_eq!(lefschetz(&f), a.trace(&k));
        prop_assert!(cross_pairing(&f, &g, m).unwrap().reconstructed);
    }

    #[test]
    fn shifted_matrices_are_separated(a in square(4), lambda in prop::sample::select(vec![-2i64, -1, 1, 2])) {
        let k = Coefficients::Rationals;
        let a = mat(&a);
        let n = a.rows();
        let b = a.add(&Matrix::identity(n).scale(&int(lambda), &k), &k).unwrap();
        prop_assert!(!trace_window_equal(&a, &b, 1).unwrap().equal);
    }
}

#[test]
fn identity_on_empty_complex_has_zero_lefschetz() {
    let c = DeltaComplex::empty(Coefficients::Rationals, Degree::from_integer(0));
    let w = CobordismData::identity(&c);
    assert_eq!(floerkit::cobord::sw_trace(&w, 0).unwrap(), int(0));
}

#[test]
fn mismatched_cobordisms_do_not_compose() {
    let a = DeltaComplex::empty(Coefficients::Rationals, Degree::from_integer(0));
    let b = DeltaComplex::empty(Coefficients::Rationals, Degree::from_integer(1));
    assert!(compose(&CobordismData::identity(&a), &CobordismData::identity(&b)).is_err());
}
