//! Construction of windowed q-de Rham models.

use std::collections::HashMap;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::framed::{nabla_coeffs, ExponentVector, Framing, VarKind};
use crate::homalg::{index_sets, insert_index, wedge_sign, FreeComplex, Matrix};
use crate::qarith::{zq_ring, CoeffRing, Integers, LaurentPolyRing, QAlgebra, Ring, SeriesRing};

/// `x^exp` times the basis form indexed by `forms` (`dT_j` for polynomial,
/// `dlog T_j` for Laurent variables).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BasisElement {
    pub forms: Vec<usize>,
    pub exp: ExponentVector,
}

impl BasisElement {
    pub fn label(&self) -> String {
        format!("{:?}:x^{:?}", self.forms, self.exp)
    }
}

/// Exponent range of variable `j` when the form index set is `forms`.
pub fn exponent_range(
    framing: &Framing,
    forms: &[usize],
    window: i64,
    j: usize,
) -> std::ops::RangeInclusive<i64> {
    match framing.kind(j) {
        VarKind::Laurent => -window..=window,
        VarKind::Poly if forms.contains(&j) => 0..=window - 1,
        VarKind::Poly => 0..=window,
    }
}

/// Window monomials for a form index set, in lexicographic order.
pub fn window_exponents(framing: &Framing, forms: &[usize], window: i64) -> Vec<ExponentVector> {
    let mut out = vec![Vec::new()];
    for j in 0..framing.d() {
        let r = exponent_range(framing, forms, window, j);
        out = out
            .into_iter()
            .flat_map(|e| {
                r.clone().map(move |x| {
                    let mut f = e.clone();
                    f.push(x);
                    f
                })
            })
            .collect();
    }
    out
}

/// Basis of degree `i`: index sets first, then monomials.
pub fn degree_basis(framing: &Framing, i: usize, window: i64) -> Vec<BasisElement> {
    index_sets(framing.d(), i)
        .into_iter()
        .flat_map(|forms| {
            window_exponents(framing, &forms, window)
                .into_iter()
                .map(move |exp| BasisElement {
                    forms: forms.clone(),
                    exp,
                })
        })
        .collect()
}

fn check_window(window: i64) -> Result<()> {
    if window < 1 {
        return Err(Error::WindowTooSmall(format!(
            "window {window} must be at least 1"
        )));
    }
    Ok(())
}

fn build_with<R: Ring>(
    framing: &Framing,
    window: i64,
    ring: &R,
    component: impl Fn(VarKind, i64, i64) -> Vec<(i64, R::Elem)>,
) -> Result<(Vec<Vec<BasisElement>>, FreeComplex<R>)> {
    check_window(window)?;
    let d = framing.d();
    let bases: Vec<Vec<BasisElement>> = (0..=d).map(|i| degree_basis(framing, i, window)).collect();
    let index: Vec<HashMap<&BasisElement, usize>> = bases
        .iter()
        .map(|b| b.iter().enumerate().map(|(k, x)| (x, k)).collect())
        .collect();
    let mut diffs = Vec::new();
    for i in 0..d {
        let mut m = Matrix::zeros(ring, bases[i + 1].len(), bases[i].len());
        for (col, be) in bases[i].iter().enumerate() {
            for j in (0..d).filter(|j| !be.forms.contains(j)) {
                let forms = insert_index(&be.forms, j);
                let neg = wedge_sign(&be.forms, j) < 0;
                for (k, v) in component(framing.kind(j), framing.shift(j), be.exp[j]) {
                    let mut exp = be.exp.clone();
                    exp[j] = k;
                    let target = BasisElement {
                        forms: forms.clone(),
                        exp,
                    };
                    let row = *index[i + 1].get(&target).ok_or_else(|| {
                        Error::WindowTooSmall(format!("image {} leaves the window", target.label()))
                    })?;
                    let v = if neg { ring.neg(&v) } else { v };
                    let sum = ring.add(m.get(row, col), &v);
                    m.set(row, col, sum);
                }
            }
        }
        diffs.push(m);
    }
    let ranks = bases.iter().map(Vec::len).collect();
    let labels = bases
        .iter()
        .map(|b| b.iter().map(BasisElement::label).collect())
        .collect();
    let complex = FreeComplex::checked(ring.clone(), 0, ranks, diffs)?.with_labels(labels)?;
    Ok((bases, complex))
}

/// The model with exact entries in `Z[q^{±1}]`.
#[derive(Clone, Debug)]
pub struct ExactModel {
    pub framing: Framing,
    pub window: i64,
    pub bases: Vec<Vec<BasisElement>>,
    pub complex: FreeComplex<LaurentPolyRing<Integers>>,
}

/// A windowed q-de Rham complex over a q-algebra `C`.
#[derive(Clone, Debug)]
pub struct QDeRhamModel<C: Ring> {
    pub framing: Framing,
    pub window: i64,
    pub bases: Vec<Vec<BasisElement>>,
    pub complex: FreeComplex<C>,
}

pub fn build_exact(framing: &Framing, window: i64) -> Result<ExactModel> {
    let (bases, complex) = build_with(framing, window, &zq_ring(), |kind, c, e| match kind {
        VarKind::Laurent => {
            let v = crate::framed::zq_int(e);
            if v.is_zero() {
                Vec::new()
            } else {
                vec![(e, v)]
            }
        }
        VarKind::Poly => nabla_coeffs(kind, c, e),
    })?;
    Ok(ExactModel {
        framing: framing.clone(),
        window,
        bases,
        complex,
    })
}

impl ExactModel {
    pub fn specialize<C: QAlgebra>(&self, ring: &C) -> QDeRhamModel<C> {
        let zq = zq_ring();
        let complex = self.complex.map_ring(ring.clone(), |x| {
            if zq.is_zero(x) {
                ring.zero()
            } else {
                ring.from_zq(x)
            }
        });
        QDeRhamModel {
            framing: self.framing.clone(),
            window: self.window,
            bases: self.bases.clone(),
            complex,
        }
    }
}

/// `q-Ω^•` of the framed algebra, truncated to the window, over `ring`.
pub fn build_q_de_rham<C: QAlgebra>(
    framing: &Framing,
    window: i64,
    ring: &C,
) -> Result<QDeRhamModel<C>> {
    Ok(build_exact(framing, window)?.specialize(ring))
}

/// The classical de Rham complex on the same window and basis, built
/// directly from `∂/∂x_j` (and `x_j ∂/∂x_j` on Laurent variables).
pub fn classical_model(framing: &Framing, window: i64) -> Result<FreeComplex<Integers>> {
    let (_, c) = build_with(framing, window, &Integers, |kind, _c, e| {
        if e == 0 {
            return Vec::new();
        }
        match kind {
            VarKind::Laurent => vec![(e, BigInt::from(e))],
            VarKind::Poly => vec![(e - 1, BigInt::from(e))],
        }
    })?;
    Ok(c)
}

impl<C: Ring> QDeRhamModel<C> {
    pub fn index_of(&self, i: usize, b: &BasisElement) -> Option<usize> {
        self.bases.get(i)?.iter().position(|x| x == b)
    }
}

impl<R: CoeffRing> QDeRhamModel<SeriesRing<R>> {
    /// Coefficients reduced modulo `q - 1`.
    pub fn reduce_mod_t(&self) -> FreeComplex<R> {
        let base = self.complex.ring().base().clone();
        self.complex.map_ring(base, |x| x.eval_at_one())
    }
}
