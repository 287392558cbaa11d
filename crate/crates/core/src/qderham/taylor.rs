//! Over `Q[[q-1]]` the Jackson derivative is a power series in the
//! classical one: `∇_q = Σ_{n ≥ 1} log(q)^n / (n! (q-1)) · ∇ (T∇)^{n-1}`.

use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::json;

use super::{Check, ExperimentReport};
use crate::error::{Error, Result};
use crate::framed::{AlgebraElement, ExponentVector, Framing, VarKind};
use crate::qarith::{log_q_in, CoeffRingSpec, QSeries, Rationals, SeriesRing};

type QS = SeriesRing<Rationals>;

/// `log(q)^n / (n! (q-1))` for `n = 1..=N` at precision `N`. Since
/// `log(q)^n ∈ (q-1)^n`, the terms with `n > N` vanish; the `n = N` term
/// contributes to the top coefficient.
pub fn taylor_coefficients(n: usize) -> Result<Vec<QSeries<Rationals>>> {
    let log = log_q_in(&Rationals, n + 1)?;
    let mut out = Vec::with_capacity(n);
    let mut pow = QSeries::one(Rationals, n + 1);
    let mut fact = BigInt::from(1);
    for k in 1..=n {
        pow = pow.mul(&log);
        fact *= k;
        let c = pow
            .scale(&BigRational::new(1.into(), fact.clone()))
            .div_t()?;
        out.push(c.truncate(n));
    }
    Ok(out)
}

/// The right-hand side of the expansion applied to `f` in direction `i`.
pub fn taylor_operator(f: &AlgebraElement<QS>, i: usize) -> Result<AlgebraElement<QS>> {
    let n = f.ring().precision();
    let coeffs = taylor_coefficients(n)?;
    let t = AlgebraElement::coordinate(f.framing(), f.ring(), i);
    let mut acc = AlgebraElement::zero(f.framing(), f.ring());
    // g runs through (T∇)^{k-1} f.
    let mut g = f.clone();
    for c in &coeffs {
        acc = acc.add(&g.derivative(i).scale(c));
        g = t.mul(&g.derivative(i));
    }
    Ok(acc)
}

fn monomials(framing: &Framing, dmax: i64) -> Vec<ExponentVector> {
    let mut out = vec![Vec::new()];
    for j in 0..framing.d() {
        let lo = if framing.kind(j) == VarKind::Laurent {
            -dmax
        } else {
            0
        };
        out = out
            .into_iter()
            .flat_map(|e: Vec<i64>| {
                (lo..=dmax).filter_map(move |x| {
                    let mut f = e.clone();
                    f.push(x);
                    (f.iter().map(|v| v.abs()).sum::<i64>() <= dmax).then_some(f)
                })
            })
            .collect();
    }
    out
}

/// Compares the expansion with `∇_{q,i}` on every monomial of total degree
/// at most `dmax` at precision `n`. Only rational coefficients are allowed.
pub fn taylor_comparison(
    framing: &Framing,
    n: usize,
    dmax: i64,
    coeffs: CoeffRingSpec,
) -> Result<ExperimentReport> {
    if coeffs != CoeffRingSpec::Rat {
        return Err(Error::UnsupportedRing(format!(
            "the expansion needs rational coefficients, not {coeffs:?}"
        )));
    }
    let ring = SeriesRing::new(Rationals, n)?;
    let mut r = ExperimentReport::new(
        "taylor",
        json!({"N": n, "Dmax": dmax, "framing": framing.to_json()}),
    );
    let mut failures = Vec::new();
    let mons = monomials(framing, dmax);
    for e in &mons {
        let f = AlgebraElement::monomial(framing, &ring, e.clone(), QSeries::one(Rationals, n))?;
        for i in 0..framing.d() {
            if taylor_operator(&f, i)? != f.nabla(i) {
                failures.push(json!({"exp": e, "i": i}));
            }
        }
    }
    r.checks.push(Check::with_detail(
        "expansion_equals_jackson_derivative",
        failures.is_empty(),
        json!({"monomials": mons.len(), "failures": failures}),
    ));
    r.verdict_from_checks();
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qarith::{QAlgebra, Ring};
    use crate::qderham::Verdict;

    #[test]
    fn first_term_is_classical() {
        let c = taylor_coefficients(2).unwrap();
        // log(q)/(q-1) = 1 - t/2 + ...
        assert_eq!(c[0].coeffs()[0], BigRational::from_integer(1.into()));
        let ring = SeriesRing::new(Rationals, 1).unwrap();
        let f = Framing::polynomial(1);
        let x3 = AlgebraElement::monomial(&f, &ring, vec![3], ring.one()).unwrap();
        assert_eq!(x3.nabla(0), x3.derivative(0));
    }

    #[test]
    fn square_at_precision_four() {
        let ring = SeriesRing::new(Rationals, 4).unwrap();
        let f = Framing::polynomial(1);
        let t2 = AlgebraElement::monomial(&f, &ring, vec![2], ring.one()).unwrap();
        let t1 = AlgebraElement::monomial(&f, &ring, vec![1], ring.q_int(2)).unwrap();
        assert_eq!(taylor_operator(&t2, 0).unwrap(), t1);
    }

    #[test]
    fn rejects_other_rings() {
        let e = taylor_comparison(
            &Framing::polynomial(1),
            2,
            2,
            CoeffRingSpec::Zmod { p: 3, m: 2 },
        )
        .unwrap_err();
        assert!(matches!(e, Error::UnsupportedRing(_)));
        let r = taylor_comparison(&Framing::laurent(1), 5, 4, CoeffRingSpec::Rat).unwrap();
        assert_eq!(r.verdict, Verdict::Verified);
    }
}
