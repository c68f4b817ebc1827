use floerkit::chambers::{derive_chamber, down_shift, fundamental_sequence, h_invariant, j_map, up_shift};
use floerkit::deltacx::{Degree, DeltaComplex, Generator};
use floerkit::exactalg::{int, Coefficients, Matrix};
use floerkit::oracle::{generate_random_delta, RandomInstance, RandomParams};
use proptest::prelude::*;

fn field() -> impl Strategy<Value = Coefficients> {
    prop_oneof![
        Just(Coefficients::Rationals),
        Just(Coefficients::prime_field(2).unwrap()),
        Just(Coefficients::prime_field(3).unwrap()),
    ]
}

fn instance(size: usize) -> impl Strategy<Value = RandomInstance> {
    (any::<u64>(), field()).prop_map(move |(seed, k)| {
        let params = RandomParams { max_generators: size, coeff: k, ..RandomParams::default() };
        generate_random_delta(seed, &params).unwrap()
    })
}

fn s3(m: i64) -> DeltaComplex {
    DeltaComplex::empty(Coefficients::Rationals, Degree::from_integer(m))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn generated_invariants_hold(inst in instance(20)) {
        let c = &inst.complex;
        prop_assert!(c.validate().passed());
        let p = c.cohomology().unwrap();
        prop_assert_eq!(p.zeta().unwrap(), inst.zeta);
        prop_assert_eq!(p.h().unwrap(), inst.h);
        prop_assert_eq!(h_invariant(&p).unwrap(), inst.h);
        prop_assert_eq!(Degree::from_integer(inst.zeta), c.chamber - inst.h);
        for (r, d) in &inst.hf_dims {
            prop_assert_eq!(p.dim(*r), *d);
        }
        for (r, d) in &inst.reduced_dims {
            prop_assert_eq!(p.reduced_dim(*r), *d);
        }
    }

    #[test]
    fn dual_negates_and_is_involutive(inst in instance(20)) {
        let d = inst.complex.dualize();
        prop_assert!(d.validate().passed());
        let p = d.cohomology().unwrap();
        prop_assert_eq!(p.zeta().unwrap(), -inst.zeta);
        prop_assert_eq!(p.h().unwrap(), -inst.h);
        prop_assert!(d.dualize().same_up_to_relabeling(&inst.complex));
    }

    #[test]
    fn h_is_chamber_independent(inst in instance(16), off in -3i64..=3) {
        let p = inst.complex.cohomology().unwrap();
        let m2 = inst.complex.chamber + off;
        let p2 = derive_chamber(&p, m2).unwrap();
        prop_assert_eq!(p2.chamber(), m2);
        prop_assert_eq!(p2.h().unwrap(), inst.h);
        prop_assert_eq!(p2.euler().unwrap().lambda_tilde, p.euler().unwrap().lambda_tilde);
        let t = p2.towers().unwrap();
        prop_assert!(t.delta_len() == 0 || t.delta_prime_len() == 0);
    }

    #[test]
    fn shifts_are_valid_and_move_zeta(inst in instance(16)) {
        let c = &inst.complex;
        let (up, j) = up_shift(c);
        prop_assert!(up.validate().passed());
        prop_assert_eq!(up.chamber, c.chamber + 1);
        prop_assert_eq!(j.shape(), (c.len() + 1, c.len()));
        let pu = up.cohomology().unwrap();
        prop_assert_eq!(pu.zeta().unwrap(), inst.zeta + 1);
        prop_assert_eq!(pu.h().unwrap(), inst.h);
        let (down, _) = down_shift(c);
        prop_assert!(down.validate().passed());
        let pd = down.cohomology().unwrap();
        prop_assert_eq!(pd.zeta().unwrap(), inst.zeta - 1);
        prop_assert_eq!(pd.h().unwrap(), inst.h);
    }

    #[test]
    fn fundamental_sequence_is_exact(inst in instance(10)) {
        let p = inst.complex.cohomology().unwrap();
        let two_h = (inst.h * 2).to_integer();
        let fs = fundamental_sequence(&p, (two_h.min(0) - 6, two_h.max(0) + 6)).unwrap();
        prop_assert!(fs.exact(), "{:?}", fs.failures);
        prop_assert_eq!(fs.lowest_d, Some(inst.h * 2));
    }

    #[test]
    fn j_map_is_iso_outside_the_window(inst in instance(12), lo in -2i64..=1, len in 0i64..=3) {
        let p = inst.complex.cohomology().unwrap();
        let m1 = inst.complex.chamber + lo;
        let m2 = m1 + len;
        let j = j_map(&p, m1, m2).unwrap();
        prop_assert!(j.consistent());
        for d in &j.degrees {
            if d.q < m1 * 2 || d.q >= m2 * 2 {
                prop_assert_eq!(d.dim_source, d.dim_target);
                prop_assert_eq!(d.kernel.cols(), 0);
            }
        }
    }
}

#[test]
fn s3_chamber_pattern() {
    for m in -4..=4 {
        let p = s3(0).cohomology().unwrap();
        let p2 = derive_chamber(&p, Degree::from_integer(m)).unwrap();
        assert_eq!(p2.zeta().unwrap(), m);
        assert_eq!(p2.h().unwrap(), Degree::from_integer(0));
        let c = p2.complex();
        let total: usize = p2.support().into_iter().map(|r| p2.dim(r)).sum();
        assert_eq!(total, m.unsigned_abs() as usize);
        for r in p2.support() {
            if p2.dim(r) > 0 {
                let q = c.abs_degree(r);
                assert!(if m > 0 { q >= Degree::from_integer(0) } else { q < Degree::from_integer(0) });
            }
        }
    }
}

#[test]
fn s3_at_one() {
    let c = DeltaComplex::new(
        Coefficients::Rationals,
        Degree::from_integer(1),
        vec![Generator::new("a", Degree::from_integer(0))],
        Matrix::zeros(1, 1),
        Matrix::zeros(1, 1),
        vec![int(1)],
        vec![int(0)],
    )
    .unwrap();
    let p = c.cohomology().unwrap();
    assert_eq!(p.zeta().unwrap(), 1);
    assert_eq!(p.h().unwrap(), Degree::from_integer(0));
    assert!(!p.delta0().unwrap().is_zero());
    assert_eq!(p.reduced_dim(c.rel(Degree::from_integer(0))), 0);
    let d = c.dualize().cohomology().unwrap();
    assert_eq!(d.zeta().unwrap(), -1);
    assert_eq!(d.chamber(), Degree::from_integer(-1));
}


#[test]
fn broken_relation_is_reported() {
    let c = DeltaComplex::new(
        Coefficients::Rationals,
        Degree::from_integer(0),
        vec![Generator::new("a", Degree::from_integer(-2)), Generator::new("b", Degree::from_integer(1))],
        Matrix::zeros(2, 2),
        Matrix::zeros(2, 2),
        vec![int(1), int(0)],
        vec![int(0), int(1)],
    )
    .unwrap();
    let report = c.validate();
    assert!(!report.passed());
    assert!(!report.failures().is_empty());
}
