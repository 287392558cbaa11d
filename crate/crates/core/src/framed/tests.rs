use super::*;
use crate::qarith::{Rationals, ZMod};
use num_bigint::BigInt;
use proptest::prelude::*;

const N: usize = 4;

fn ring() -> SeriesRing<Integers> {
    SeriesRing::new(Integers, N).unwrap()
}

fn series(c: &[i64]) -> QSeries<Integers> {
    QSeries::from_t_coeffs(Integers, N, c.iter().map(|&x| BigInt::from(x)).collect())
}

fn element(
    framing: &Framing,
    terms: &[(Vec<i64>, Vec<i64>)],
) -> AlgebraElement<SeriesRing<Integers>> {
    AlgebraElement::from_terms(
        framing,
        &ring(),
        terms.iter().map(|(e, c)| (e.clone(), series(c))),
    )
    .unwrap()
}

fn arb_framing() -> impl Strategy<Value = Framing> {
    prop_oneof![
        prop::collection::vec(-2i64..3, 1..3).prop_map(|s| Framing::shifted(&s)),
        (1usize..3).prop_map(Framing::laurent),
    ]
}

fn arb_element(framing: Framing) -> impl Strategy<Value = AlgebraElement<SeriesRing<Integers>>> {
    let d = framing.d();
    let lo = if framing.is_laurent() { -2 } else { 0 };
    prop::collection::vec(
        (
            prop::collection::vec(lo..3i64, d),
            prop::collection::vec(-3i64..4, N),
        ),
        0..4,
    )
    .prop_map(move |t| element(&framing, &t))
}

fn arb_pair() -> impl Strategy<
    Value = (
        AlgebraElement<SeriesRing<Integers>>,
        AlgebraElement<SeriesRing<Integers>>,
    ),
> {
    arb_framing().prop_flat_map(|f| (arb_element(f.clone()), arb_element(f)))
}

#[test]
fn nabla_of_powers_of_t() {
    let f = Framing::polynomial(1);
    let t = AlgebraElement::coordinate(&f, &ring(), 0);
    let got = t.pow(3).nabla(0);
    let want = t.pow(2).scale(&ring().q_int(3));
    assert_eq!(got, want);
}

#[test]
fn shifted_coordinate_behaves_like_t() {
    let f = Framing::shifted(&[3]);
    let t = AlgebraElement::coordinate(&f, &ring(), 0);
    assert_eq!(t.gamma(0), t.scale(&ring().q_pow(1)));
    assert_eq!(t.pow(4).nabla(0), t.pow(3).scale(&ring().q_int(4)));
    assert_eq!(t.frobenius(2).unwrap(), t.pow(2));
}

#[test]
fn laurent_negative_powers() {
    let f = Framing::laurent(1);
    let r = ring();
    let x_inv = AlgebraElement::monomial(&f, &r, vec![-1], r.one()).unwrap();
    let want = AlgebraElement::monomial(&f, &r, vec![-2], r.q_int(-1)).unwrap();
    assert_eq!(x_inv.nabla(0), want);
    assert_eq!(x_inv.nabla_quotient(0).unwrap(), want);
}

#[test]
fn quotient_route_detects_non_polynomial_input() {
    let f = Framing::polynomial(1);
    let r = ring();
    let e = AlgebraElement::one(&f, &r);
    assert!(e.divide_by_coordinate(0).is_err());
}

#[test]
fn framing_json_round_trip() {
    let f = Framing::shifted(&[0, -2]);
    let v = f.to_json();
    assert_eq!(v["d"], 2);
    assert_eq!(Framing::from_json(&v).unwrap(), f);
    let bad = serde_json::json!({"d": 1, "vars": [{"kind": "laurent", "shift": 1}]});
    assert!(matches!(Framing::from_json(&bad), Err(Error::Parse(_))));
    assert!(matches!(
        Framing::new(vec![VarSpec {
            kind: VarKind::Laurent,
            shift: 1
        }]),
        Err(Error::IncompatibleFramings(_))
    ));
}

#[test]
fn element_json_round_trip() {
    let f = Framing::shifted(&[1, 0]);
    let e = element(
        &f,
        &[
            (vec![2, 1], vec![1, -1, 0, 2]),
            (vec![0, 0], vec![5, 0, 0, 0]),
        ],
    );
    let back = AlgebraElement::from_json(&f, &ring(), &e.to_json()).unwrap();
    assert_eq!(back, e);
}

#[test]
fn d_q_of_function_and_square_zero() {
    let f = Framing::polynomial(2);
    let r = ring();
    let e = element(&f, &[(vec![2, 3], vec![1, 0, 0, 0])]);
    let w = DifferentialForm::function(&e).d_q();
    assert_eq!(w.component(&[0]), e.nabla(0));
    assert_eq!(w.component(&[1]), e.nabla(1));
    assert!(w.d_q().is_zero());
    let _ = r;
}

#[test]
fn dlog_rescaling() {
    let f = Framing::laurent(1);
    let r = ring();
    let e = AlgebraElement::monomial(&f, &r, vec![-1], r.one()).unwrap();
    let w = DifferentialForm::term(&e, vec![0]).unwrap();
    assert_eq!(
        w.dlog_components().unwrap()[&vec![0]],
        AlgebraElement::one(&f, &r)
    );
    let p =
        DifferentialForm::term(&AlgebraElement::one(&Framing::polynomial(1), &r), vec![0]).unwrap();
    assert!(p.dlog_components().is_err());
}

#[test]
fn works_over_other_q_algebras() {
    let base = ZMod::new(3, 2).unwrap();
    let r = SeriesRing::new(base, 3).unwrap();
    let f = Framing::shifted(&[1]);
    let t = AlgebraElement::coordinate(&f, &r, 0);
    assert_eq!(t.pow(3).nabla(0), t.pow(2).scale(&r.q_int(3)));
    let rq = SeriesRing::new(Rationals, 3).unwrap();
    let t = AlgebraElement::coordinate(&f, &rq, 0);
    assert_eq!(t.pow(2).nabla_quotient(0).unwrap(), t.scale(&rq.q_int(2)));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn closed_form_matches_quotient((f, _) in arb_pair()) {
        for i in 0..f.framing().d() {
            prop_assert_eq!(f.nabla(i), f.nabla_quotient(i).unwrap());
        }
    }

    #[test]
    fn q_leibniz((f, g) in arb_pair()) {
        for i in 0..f.framing().d() {
            let lhs = f.mul(&g).nabla(i);
            let rhs = f.gamma(i).mul(&g.nabla(i)).add(&f.nabla(i).mul(&g));
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn gamma_is_identity_plus_t_nabla((f, _) in arb_pair()) {
        let t = ring().t();
        for i in 0..f.framing().d() {
            prop_assert_eq!(f.gamma(i), f.add(&f.t_nabla(i).scale(&t)));
            prop_assert_eq!(f.gamma(i).gamma_inv(i), f.clone());
        }
    }

    #[test]
    fn operators_commute((f, _) in arb_pair()) {
        let d = f.framing().d();
        for i in 0..d {
            for j in 0..d {
                prop_assert_eq!(f.gamma(i).gamma(j), f.gamma(j).gamma(i));
                prop_assert_eq!(f.nabla(i).nabla(j), f.nabla(j).nabla(i));
                if i == j {
                    let q = f.ring().q_pow(1);
                    prop_assert_eq!(f.gamma(i).nabla(i), f.nabla(i).gamma(i).scale(&q));
                } else {
                    prop_assert_eq!(f.nabla(i).gamma(j), f.gamma(j).nabla(i));
                }
            }
        }
    }

    #[test]
    fn reduces_to_classical_derivative((f, _) in arb_pair()) {
        for i in 0..f.framing().d() {
            prop_assert_eq!(f.nabla(i).at_q_equals_one(), f.derivative(i).at_q_equals_one());
        }
    }

    #[test]
    fn frobenius_commutes_with_gamma((f, _) in arb_pair(), p in prop::sample::select(vec![2u64, 3])) {
        for i in 0..f.framing().d() {
            prop_assert_eq!(f.gamma(i).frobenius(p).unwrap(), f.frobenius(p).unwrap().gamma(i));
            // ∇ φ = [p]_q T^{p-1} φ ∇
            let t = AlgebraElement::coordinate(f.framing(), f.ring(), i);
            let lhs = f.frobenius(p).unwrap().nabla(i);
            let rhs = f.nabla(i).frobenius(p).unwrap().mul(&t.pow(p as u32 - 1)).scale(&f.ring().q_int(p as i64));
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn frobenius_is_multiplicative((f, g) in arb_pair()) {
        prop_assert_eq!(f.mul(&g).frobenius(3).unwrap(), f.frobenius(3).unwrap().mul(&g.frobenius(3).unwrap()));
    }

    #[test]
    fn d_q_squares_to_zero(f in arb_framing().prop_flat_map(arb_element)) {
        let w = DifferentialForm::function(&f).d_q();
        prop_assert!(w.d_q().is_zero());
    }
}
