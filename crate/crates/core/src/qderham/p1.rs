//! The projective line over `Z[[q-1]]` as the total complex of the Čech
//! double complex for the cover `U_0 = Spec Z[t]`, `U_1 = Spec Z[t^{-1}]`,
//! `U_01 = Spec Z[t^{±1}]`, with the global `γ: t ↦ qt`.
//!
//! Forms are written in the `dlog t` normalization: `d(t^n) = [n]_q t^n dlog t`
//! on every chart. The windowed total complex is
//!
//! * `Tot^0 = O(U_0) ⊕ O(U_1)`: `t^n`, `0 ≤ n ≤ D` and `t^{-n}`, `0 ≤ n ≤ D`;
//! * `Tot^1 = O(U_01) ⊕ Ω(U_0) ⊕ Ω(U_1)`: `t^n` for `|n| ≤ D`, then
//!   `t^n dlog t` for `1 ≤ n ≤ D` and `t^{-n} dlog t` for `1 ≤ n ≤ D`;
//! * `Tot^2 = Ω(U_01)`: `t^n dlog t` for `|n| ≤ D`,
//!
//! with `D(f_0, f_1) = (f_1 - f_0, df_0, df_1)` and
//! `D(g, ω_0, ω_1) = -dg + ω_1 - ω_0`.

use serde_json::json;

use super::{Check, ExperimentReport, TruncationParams};
use crate::error::{Error, Result};
use crate::homalg::{AbGroupInvariants, FreeComplex, Matrix};
use crate::qarith::{QAlgebra, Ring};
use crate::semilinear::{
    gamma_multiplier, random_series_scalar, tate_twist_action, verify_semilinear_chain_map,
    SemilinearChainMap,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Chart {
    U0,
    U1,
    U01,
}

/// A basis vector `t^exp` (or `t^exp dlog t` when `form`) on a chart.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CechBasis {
    pub chart: Chart,
    pub form: bool,
    pub exp: i64,
}

impl CechBasis {
    pub fn label(&self) -> String {
        let chart = match self.chart {
            Chart::U0 => "U0",
            Chart::U1 => "U1",
            Chart::U01 => "U01",
        };
        if self.form {
            format!("{chart}:t^{} dlog t", self.exp)
        } else {
            format!("{chart}:t^{}", self.exp)
        }
    }
}

/// The windowed Čech total complex of `P^1`.
#[derive(Clone, Debug)]
pub struct P1Model<C: QAlgebra> {
    pub window: i64,
    pub bases: [Vec<CechBasis>; 3],
    pub complex: FreeComplex<C>,
}

fn cech_bases(w: i64) -> [Vec<CechBasis>; 3] {
    let b = |chart, form, exp| CechBasis { chart, form, exp };
    let tot0 = (0..=w)
        .map(|n| b(Chart::U0, false, n))
        .chain((0..=w).map(|n| b(Chart::U1, false, -n)))
        .collect();
    let tot1 = (-w..=w)
        .map(|n| b(Chart::U01, false, n))
        .chain((1..=w).map(|n| b(Chart::U0, true, n)))
        .chain((1..=w).map(|n| b(Chart::U1, true, -n)))
        .collect();
    let tot2 = (-w..=w).map(|n| b(Chart::U01, true, n)).collect();
    [tot0, tot1, tot2]
}

impl<C: QAlgebra> P1Model<C> {
    pub fn build(window: i64, ring: &C) -> Result<Self> {
        if window < 1 {
            return Err(Error::WindowTooSmall(format!("window {window} < 1")));
        }
        let bases = cech_bases(window);
        let index = |k: usize, b: CechBasis| {
            bases[k]
                .iter()
                .position(|x| *x == b)
                .expect("window-closed")
        };
        let one = ring.one();
        let minus = ring.neg(&one);
        let mut d0 = Matrix::zeros(ring, bases[1].len(), bases[0].len());
        for (col, b) in bases[0].iter().enumerate() {
            let sign = if b.chart == Chart::U0 { &minus } else { &one };
            d0.set(
                index(
                    1,
                    CechBasis {
                        chart: Chart::U01,
                        form: false,
                        exp: b.exp,
                    },
                ),
                col,
                sign.clone(),
            );
            if b.exp != 0 {
                d0.set(
                    index(1, CechBasis { form: true, ..*b }),
                    col,
                    ring.q_int(b.exp),
                );
            }
        }
        let mut d1 = Matrix::zeros(ring, bases[2].len(), bases[1].len());
        for (col, b) in bases[1].iter().enumerate() {
            let row = index(
                2,
                CechBasis {
                    chart: Chart::U01,
                    form: true,
                    exp: b.exp,
                },
            );
            let entry = match (b.chart, b.form) {
                (Chart::U01, false) => ring.neg(&ring.q_int(b.exp)),
                (Chart::U0, true) => minus.clone(),
                _ => one.clone(),
            };
            d1.set(row, col, entry);
        }
        let labels = bases
            .iter()
            .map(|v| v.iter().map(CechBasis::label).collect())
            .collect();
        let complex = FreeComplex::checked(
            ring.clone(),
            0,
            bases.iter().map(Vec::len).collect(),
            vec![d0, d1],
        )?
        .with_labels(labels)?;
        Ok(P1Model {
            window,
            bases,
            complex,
        })
    }

    fn index(&self, k: usize, b: &CechBasis) -> Option<usize> {
        self.bases[k].iter().position(|x| x == b)
    }

    /// `φ_p: t ↦ t^p` into a model with window at least `p` times larger;
    /// forms pick up `[p]_q`.
    pub fn frobenius(&self, target: &P1Model<C>, p: u64) -> Result<SemilinearChainMap<C>> {
        let ring = self.complex.ring();
        let qp = ring.q_int(p as i64);
        let mut maps = Vec::new();
        for k in 0..3 {
            let mut m = Matrix::zeros(ring, target.bases[k].len(), self.bases[k].len());
            for (col, b) in self.bases[k].iter().enumerate() {
                let img = CechBasis {
                    exp: b.exp * p as i64,
                    ..*b
                };
                let row = target.index(k, &img).ok_or_else(|| {
                    Error::WindowTooSmall(format!("{} leaves the target window", img.label()))
                })?;
                m.set(row, col, if b.form { qp.clone() } else { ring.one() });
            }
            maps.push(m);
        }
        Ok(SemilinearChainMap {
            sigma_a: p as i64,
            maps,
            source: self.complex.clone(),
            target: target.complex.clone(),
        })
    }

    /// `γ_a: q ↦ q^a`, acting on `t^n dlog t` by `[a]_q/[a]_{q^n}`.
    pub fn gamma(&self, a: i64) -> Result<SemilinearChainMap<C>> {
        let ring = self.complex.ring();
        let mut maps = Vec::new();
        for basis in &self.bases {
            let diag = basis
                .iter()
                .map(|b| {
                    if b.form {
                        gamma_multiplier(ring, a, b.exp)
                    } else {
                        Ok(ring.one())
                    }
                })
                .collect::<Result<Vec<_>>>()?;
            maps.push(Matrix::diagonal(ring, diag.len(), diag.len(), &diag));
        }
        Ok(SemilinearChainMap {
            sigma_a: a,
            maps,
            source: self.complex.clone(),
            target: self.complex.clone(),
        })
    }

    /// Position of the generator `dlog t` on `U_01` in degree 2.
    pub fn generator(&self) -> usize {
        self.index(
            2,
            &CechBasis {
                chart: Chart::U01,
                form: true,
                exp: 0,
            },
        )
        .expect("generator in window")
    }
}

/// `H^*(P^1)` over `S` with the actions of `φ_p` and `γ_a` on the class of
/// `dlog t` in `H^2`, compared with the Tate twist `{-1}`.
pub fn p1_cohomology(t: &TruncationParams, a_list: &[i64]) -> Result<ExperimentReport> {
    t.validate()?;
    let s = t.series();
    let model = P1Model::build(t.d, &s)?;
    let h = model.complex.cohomology()?;
    let mut r = ExperimentReport::new(
        "p1",
        json!({"p": t.p, "M": t.m, "N": t.n, "D": t.d, "a": a_list}),
    );
    r.push_degrees(0, &h, None);
    let free = AbGroupInvariants::free(t.n);
    r.checks
        .push(Check::new("h0_is_free_of_rank_one", h[0] == free));
    r.checks.push(Check::new("h1_vanishes", h[1].is_zero()));
    r.checks
        .push(Check::new("h2_is_free_of_rank_one", h[2] == free));
    let g = model.generator();
    let d1 = model.complex.diff(1);
    let cocycle_only = (0..d1.cols()).all(|c| s.is_zero(d1.get(g, c)));
    r.checks
        .push(Check::new("generator_not_a_boundary", cocycle_only));

    let scalar = random_series_scalar(&s);
    let source_window = t.d / t.p as i64;
    if source_window >= 1 {
        let small = P1Model::build(source_window, &s)?;
        let phi = small.frobenius(&model, t.p)?;
        let ver = verify_semilinear_chain_map(&phi, 2, 0, &scalar)?;
        r.checks.push(Check::with_detail(
            "frobenius_is_chain_map",
            ver.passed(),
            json!(ver.failures),
        ));
        let tate = tate_twist_action(-1, t.p, 1, &s)?;
        let got = phi.maps[2].get(g, small.generator());
        let expected = tate.phi.expect("k = -1 has a Frobenius multiplier");
        r.checks.push(Check::with_detail(
            "frobenius_on_generator_matches_tate_twist",
            *got == expected,
            json!({"multiplier": s.elem_json(got)}),
        ));
    } else {
        r.checks.push(Check::with_detail(
            "frobenius_is_chain_map",
            false,
            json!(format!("window {} is below p = {}", t.d, t.p)),
        ));
    }
    for &a in a_list {
        let gamma = model.gamma(a)?;
        let ver = verify_semilinear_chain_map(&gamma, 2, a as u64, &scalar)?;
        r.checks.push(Check::with_detail(
            &format!("gamma_{a}_is_chain_map"),
            ver.passed(),
            json!(ver.failures),
        ));
        let tate = tate_twist_action(-1, t.p, a, &s)?;
        let got = gamma.maps[2].get(g, g);
        r.checks.push(Check::with_detail(
            &format!("gamma_{a}_on_generator_matches_tate_twist"),
            *got == tate.gamma,
            json!({"multiplier": s.elem_json(got)}),
        ));
    }
    r.verdict_from_checks();
    Ok(r)
}
