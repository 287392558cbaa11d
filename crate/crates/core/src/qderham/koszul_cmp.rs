//! The q-de Rham complex of a torus against the Koszul complex of the
//! `γ_j`: multiplication by `(q-1)^i` is a chain map with cone killed by
//! `(q-1)^d`, and over `F_p[q^{±1}]` the décalage `η_{q-1}` of the Koszul
//! complex recovers q-de Rham cohomology.

use serde_json::json;

use super::model::build_q_de_rham;
use super::{Check, ExperimentReport, TruncationParams};
use crate::error::{Error, Result};
use crate::framed::{AlgebraElement, Framing};
use crate::homalg::{
    check_chain_map, eta_f, koszul_complex, mapping_cone, solve, FreeComplex, HomologyRing, Matrix,
};
use crate::qarith::{LaurentPolyRing, QAlgebra, Ring, ZMod};

/// Matrices of `γ_1, ..., γ_d` on the window monomials, computed by
/// applying `γ_j` to each monomial in the framed algebra.
fn gamma_operators<C: QAlgebra>(
    framing: &Framing,
    window: i64,
    ring: &C,
) -> Result<Vec<Matrix<C>>> {
    let model = build_q_de_rham(framing, window, ring)?;
    let basis = &model.bases[0];
    let mut ops = Vec::new();
    for j in 0..framing.d() {
        let mut m = Matrix::zeros(ring, basis.len(), basis.len());
        for (col, b) in basis.iter().enumerate() {
            let g = AlgebraElement::monomial(framing, ring, b.exp.clone(), ring.one())?.gamma(j);
            for (e, c) in g.terms() {
                let row = basis
                    .iter()
                    .position(|x| &x.exp == e)
                    .ok_or_else(|| Error::WindowTooSmall("γ leaves the window".into()))?;
                m.set(row, col, c.clone());
            }
        }
        ops.push(m);
    }
    Ok(ops)
}

fn scalar_maps<R: Ring>(c: &FreeComplex<R>, f: &R::Elem) -> Vec<Matrix<R>> {
    let ring = c.ring();
    c.degrees()
        .map(|i| Matrix::scalar(ring, c.rank(i), &ring.pow(f, i as u64)))
        .collect()
}

/// Koszul comparison over `S = (Z/p^M)[q]/(q-1)^N` on the `d`-torus with
/// window `[-w, w]`.
pub fn koszul_vs_qderham(d: usize, t: &TruncationParams, w: i64) -> Result<ExperimentReport> {
    let s = t.series();
    let framing = Framing::laurent(d);
    let model = build_q_de_rham(&framing, w, &s)?;
    let k = koszul_complex(&s, &gamma_operators(&framing, w, &s)?)?;
    let u = scalar_maps(&model.complex, &s.t());
    let mut r = ExperimentReport::new(
        "koszul",
        json!({"p": t.p, "M": t.m, "N": t.n, "d": d, "W": w}),
    );
    let chain = check_chain_map(&model.complex, &k, &u);
    r.checks.push(Check::new(
        "multiplication_by_powers_of_q_minus_1_is_chain_map",
        chain.is_ok(),
    ));
    chain?;
    let cone = mapping_cone(&model.complex, &k, &u)?;
    let ann = s.pow(&s.t(), d as u64);
    r.checks.push(Check::new(
        "cone_killed_by_q_minus_1_to_the_d",
        cone.annihilator_check(&ann)?,
    ));
    r.push_degrees(0, &model.complex.cohomology()?, Some("q-omega"));
    r.push_degrees(0, &k.cohomology()?, Some("koszul"));
    r.push_degrees(cone.start(), &cone.cohomology()?, Some("cone"));
    r.verdict_from_checks();
    Ok(r)
}

/// `η_{q-1}` of the Koszul complex over `F_p[q^{±1}]` against the windowed
/// q-de Rham complex; needs `M = 1`.
pub fn eta_koszul_check(d: usize, t: &TruncationParams, w: i64) -> Result<ExperimentReport> {
    if t.m != 1 {
        return Err(Error::UnsupportedRing(format!(
            "décalage needs coefficients in F_p, got M = {}",
            t.m
        )));
    }
    let a = LaurentPolyRing::over_field(ZMod::field(t.p)?)?;
    let framing = Framing::laurent(d);
    let model = build_q_de_rham(&framing, w, &a)?;
    let k = koszul_complex(&a, &gamma_operators(&framing, w, &a)?)?;
    let q_minus_1 = a.sub(&a.q_pow(1), &a.one());
    let eta = eta_f(&k, &q_minus_1)?;
    let mut r = ExperimentReport::new("eta-koszul", json!({"p": t.p, "M": t.m, "d": d, "W": w}));
    let h_omega = model.complex.cohomology()?;
    let h_eta = eta.complex.cohomology()?;
    r.push_degrees(0, &h_omega, Some("q-omega"));
    r.push_degrees(0, &h_eta, Some("eta-koszul"));
    r.checks
        .push(Check::new("invariants_match", h_omega == h_eta));

    // (q-1)^i lands in (η K)^i = (q-1)^i Y_i; in the basis of η K that is
    // the solution X of B_i X = id.
    let mut maps = Vec::new();
    for (idx, b) in eta.bases.iter().enumerate() {
        let id = Matrix::identity(&a, b.rows());
        match solve(&a, b, &id) {
            Some(x) => maps.push(x),
            None => {
                r.checks.push(Check::with_detail(
                    "map_factors_through_eta",
                    false,
                    json!({"degree": idx}),
                ));
                r.verdict_from_checks();
                return Ok(r);
            }
        }
    }
    r.checks.push(Check::new("map_factors_through_eta", true));
    let chain = check_chain_map(&model.complex, &eta.complex, &maps);
    r.checks
        .push(Check::new("induced_map_is_chain_map", chain.is_ok()));
    if chain.is_ok() {
        let cone = mapping_cone(&model.complex, &eta.complex, &maps)?;
        let acyclic = a.cohomology_all(&cone)?.iter().all(|h| h.is_zero());
        r.checks
            .push(Check::new("induced_map_is_quasi_isomorphism", acyclic));
    }
    r.verdict_from_checks();
    Ok(r)
}
