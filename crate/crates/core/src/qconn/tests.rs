use super::*;
use crate::qarith::{SeriesRing, ZMod};
use crate::qderham::build_q_de_rham;
use proptest::prelude::*;

fn s() -> SeriesRing<ZMod> {
    SeriesRing::new(ZMod::new(5, 2).unwrap(), 3).unwrap()
}

fn mono(
    f: &Framing,
    r: &SeriesRing<ZMod>,
    exp: Vec<i64>,
    c: i64,
) -> AlgebraElement<SeriesRing<ZMod>> {
    AlgebraElement::monomial(f, r, exp, r.from_i64(c)).unwrap()
}

/// `∇_i e = T_i^{-1} e` on every Laurent variable.
fn dlog_twist(f: &Framing, r: &SeriesRing<ZMod>) -> QConnectionModule<SeriesRing<ZMod>> {
    let d = f.d();
    let mats = (0..d)
        .map(|i| {
            let mut e = vec![0; d];
            e[i] = -1;
            vec![vec![mono(f, r, e, 1)]]
        })
        .collect();
    make_qconnection(f, r, 1, mats).unwrap()
}

#[test]
fn unit_object_reproduces_the_model() {
    let r = s();
    for f in [
        Framing::laurent(1),
        Framing::laurent(2),
        Framing::polynomial(2),
        Framing::shifted(&[1, 0]),
    ] {
        let u = QConnectionModule::unit(&f, &r);
        let ours = qconn_de_rham(&u, 2).unwrap();
        let model = build_q_de_rham(&f, 2, &r).unwrap();
        assert_eq!(ours.complex.diffs(), model.complex.diffs(), "{f:?}");
        assert_eq!(ours.complex.labels(1), model.complex.labels(1));
    }
}

#[test]
fn dlog_twist_shifts_the_lines() {
    let r = s();
    let f = Framing::laurent(1);
    let m = dlog_twist(&f, &r);
    let e = m.basis_element(0, AlgebraElement::one(&f, &r));
    let q = r.q_pow(1);
    assert_eq!(
        m.gamma_module(0, &e),
        m.basis_element(0, AlgebraElement::constant(&f, &r, q))
    );
    let c = qconn_de_rham(&m, 3).unwrap();
    let d0 = c.complex.diff(0);
    for (k, b) in c.bases[0].iter().enumerate() {
        assert_eq!(d0.get(k, k), &r.q_int(b.exp[0] + 1));
    }
    let h = c.complex.cohomology().unwrap();
    assert!(h[0].free_rank >= r.precision());
}

#[test]
fn unit_tensor_is_identity() {
    let r = s();
    let f = Framing::laurent(2);
    let m = dlog_twist(&f, &r);
    let u = QConnectionModule::unit(&f, &r);
    assert_eq!(tensor_product(&u, &m).unwrap(), m);
    assert_eq!(tensor_product(&m, &u).unwrap(), m);
    let sq = tensor_product(&m, &m).unwrap();
    assert_eq!(sq.rank(), 1);
    assert!(matches!(
        tensor_product(&m, &QConnectionModule::unit(&Framing::polynomial(2), &r)),
        Err(Error::MismatchedAlgebra)
    ));
}

#[test]
fn non_flat_is_rejected() {
    let r = s();
    let f = Framing::laurent(2);
    let zero = AlgebraElement::zero(&f, &r);
    let mats = vec![vec![vec![mono(&f, &r, vec![0, 1], 1)]], vec![vec![zero]]];
    assert_eq!(
        make_qconnection(&f, &r, 1, mats).unwrap_err(),
        Error::NotFlat {
            i: 0,
            j: 1,
            basis: 0
        }
    );
    let consts = vec![
        vec![vec![mono(&f, &r, vec![0, 0], 2)]],
        vec![vec![mono(&f, &r, vec![0, 0], 3)]],
    ];
    assert!(make_qconnection(&f, &r, 1, consts).is_ok());
}

#[test]
fn window_guard() {
    let r = s();
    let f = Framing::laurent(1);
    let mats = vec![vec![vec![mono(&f, &r, vec![4], 1)]]];
    let m = make_qconnection(&f, &r, 1, mats).unwrap();
    assert!(matches!(
        qconn_de_rham(&m, 2),
        Err(Error::WindowTooSmall(_))
    ));
}

#[test]
fn basis_change_preserves_cohomology() {
    let r = s();
    let f = Framing::laurent(1);
    let mats = vec![vec![
        vec![mono(&f, &r, vec![-1], 1), mono(&f, &r, vec![-1], 0)],
        vec![mono(&f, &r, vec![-1], 2), mono(&f, &r, vec![-1], 1)],
    ]];
    let m = make_qconnection(&f, &r, 2, mats).unwrap();
    let p = Matrix::from_rows(vec![vec![r.one(), r.from_i64(3)], vec![r.zero(), r.one()]]);
    let p_inv = Matrix::from_rows(vec![vec![r.one(), r.from_i64(-3)], vec![r.zero(), r.one()]]);
    let m2 = m.change_basis(&p, &p_inv).unwrap();
    assert_ne!(m2, m);
    let a = qconn_de_rham(&m, 2).unwrap().complex.cohomology().unwrap();
    let b = qconn_de_rham(&m2, 2).unwrap().complex.cohomology().unwrap();
    assert_eq!(a, b);
}

#[test]
fn tensor_of_flat_is_flat_in_two_variables() {
    let r = s();
    let f = Framing::laurent(2);
    let twist = dlog_twist(&f, &r);
    let consts = vec![
        vec![vec![mono(&f, &r, vec![-1, 0], 2)]],
        vec![vec![mono(&f, &r, vec![0, -1], 3)]],
    ];
    let c = make_qconnection(&f, &r, 1, consts).unwrap();
    let t = tensor_product(&twist, &c).unwrap();
    qconn_de_rham(&t, 2).unwrap().complex.validate().unwrap();
}

fn elem(
    f: &Framing,
    r: &SeriesRing<ZMod>,
    coeffs: &[(i64, i64)],
) -> AlgebraElement<SeriesRing<ZMod>> {
    AlgebraElement::from_terms(f, r, coeffs.iter().map(|&(e, c)| (vec![e], r.from_i64(c)))).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn leibniz_and_balancing(
        n1 in proptest::collection::vec((-2i64..3, -3i64..4), 4),
        n2 in proptest::collection::vec((-2i64..3, -3i64..4), 1),
        fs in proptest::collection::vec((-2i64..3, -3i64..4), 3),
        ms in proptest::collection::vec((-2i64..3, -3i64..4), 2),
        ns in (-2i64..3, -3i64..4),
    ) {
        let r = s();
        let f = Framing::laurent(1);
        let m1 = make_qconnection(&f, &r, 2, vec![vec![
            vec![elem(&f, &r, &n1[0..1]), elem(&f, &r, &n1[1..2])],
            vec![elem(&f, &r, &n1[2..3]), elem(&f, &r, &n1[3..4])],
        ]]).unwrap();
        let m2 = make_qconnection(&f, &r, 1, vec![vec![vec![elem(&f, &r, &n2)]]]).unwrap();
        let g = elem(&f, &r, &fs);
        let m: ModuleElement<_> = ms.iter().map(|&t| elem(&f, &r, &[t])).collect();
        let n = vec![elem(&f, &r, &[ns])];

        let lhs = m1.nabla(0, &m1.scale(&g, &m));
        let rhs: ModuleElement<_> = m1.nabla(0, &m).iter().zip(&m)
            .map(|(a, x)| g.gamma(0).mul(a).add(&g.nabla(0).mul(x))).collect();
        prop_assert_eq!(lhs, rhs);

        prop_assert_eq!(m1.gamma_module(0, &m1.scale(&g, &m)), m1.scale(&g.gamma(0), &m1.gamma_module(0, &m)));

        prop_assert!(balancing_defect(&m1, &m2, 0, &g, &m, &n).iter().all(AlgebraElement::is_zero));

        let t = tensor_product(&m1, &m2).unwrap();
        let mn = QConnectionModule::tensor_elements(&m, &n);
        prop_assert_eq!(t.nabla(0, &mn), tensor_rule(&m1, &m2, 0, &m, &n));
    }
}

#[test]
fn report_verifies() {
    let t = TruncationParams::new(3, 2, 3, 2, 1).unwrap();
    let r = qconn_report(&t, 2, 2, 20, 7).unwrap();
    assert_eq!(
        r.verdict,
        crate::qderham::Verdict::Verified,
        "{:?}",
        r.checks
    );
    assert_eq!(
        r.to_json(),
        qconn_report(&t, 2, 2, 20, 7).unwrap().to_json()
    );
    assert_eq!(
        qconn_report(&t, 1, 3, 1, 0).unwrap_err(),
        Error::NonUnitA { a: 3 }
    );
}
