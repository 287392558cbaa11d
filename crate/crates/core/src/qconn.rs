//! Finite free modules with a flat q-connection over a framed algebra.
//!
//! On a basis `e_1, ..., e_r`, `∇_{q,i}` is the matrix `N_i` with
//! `∇_{q,i}(e_k) = Σ_l N_i[l][k] e_l`, extended by the q-Leibniz rule
//! `∇_{q,i}(f m) = γ_i(f) ∇_{q,i}(m) + ∇_{q,i}(f) m`.

use std::collections::HashMap;

use rand::{Rng as _, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::framed::{AlgebraElement, Framing, VarKind};
use crate::homalg::{FreeComplex, Matrix};
use crate::qarith::{QAlgebra, Ring};
use crate::qarith::{SeriesRing, ZMod};
use crate::qderham::{
    build_q_de_rham, model::degree_basis, BasisElement, Check, ExperimentReport, TruncationParams,
};
use crate::semilinear::{coprime, random_series_scalar, tate_twist_action};

/// An element `Σ_k f_k e_k` of a module of rank `r`.
pub type ModuleElement<C> = Vec<AlgebraElement<C>>;

/// Square matrix of algebra elements, `m[l][k]` = coefficient of `e_l` in
/// the image of `e_k`.
pub type ConnectionMatrix<C> = Vec<Vec<AlgebraElement<C>>>;

#[derive(Clone, Debug, PartialEq)]
pub struct QConnectionModule<C: QAlgebra> {
    framing: Framing,
    ring: C,
    rank: usize,
    nablas: Vec<ConnectionMatrix<C>>,
}

/// Builds a module with connection matrices `matrices[i]`, checking shapes
/// and flatness `∇_i ∇_j e_k = ∇_j ∇_i e_k` on the basis.
pub fn make_qconnection<C: QAlgebra>(
    framing: &Framing,
    ring: &C,
    rank: usize,
    matrices: Vec<ConnectionMatrix<C>>,
) -> Result<QConnectionModule<C>> {
    if matrices.len() != framing.d() {
        return Err(Error::InvalidArgument(format!(
            "{} matrices for {} variables",
            matrices.len(),
            framing.d()
        )));
    }
    for m in &matrices {
        if m.len() != rank || m.iter().any(|row| row.len() != rank) {
            return Err(Error::InvalidArgument(format!(
                "connection matrices must be {rank} x {rank}"
            )));
        }
        if m.iter()
            .flatten()
            .any(|f| f.framing() != framing || f.ring() != ring)
        {
            return Err(Error::MismatchedAlgebra);
        }
    }
    let module = QConnectionModule {
        framing: framing.clone(),
        ring: ring.clone(),
        rank,
        nablas: matrices,
    };
    module.check_flat()?;
    Ok(module)
}

impl<C: QAlgebra> QConnectionModule<C> {
    /// The rank-one module with `∇ = 0`.
    pub fn unit(framing: &Framing, ring: &C) -> Self {
        let zero = AlgebraElement::zero(framing, ring);
        QConnectionModule {
            framing: framing.clone(),
            ring: ring.clone(),
            rank: 1,
            nablas: vec![vec![vec![zero]]; framing.d()],
        }
    }

    pub fn framing(&self) -> &Framing {
        &self.framing
    }

    pub fn ring(&self) -> &C {
        &self.ring
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn matrix(&self, i: usize) -> &ConnectionMatrix<C> {
        &self.nablas[i]
    }

    pub fn zero_element(&self) -> ModuleElement<C> {
        vec![AlgebraElement::zero(&self.framing, &self.ring); self.rank]
    }

    /// `f e_k`.
    pub fn basis_element(&self, k: usize, f: AlgebraElement<C>) -> ModuleElement<C> {
        let mut m = self.zero_element();
        m[k] = f;
        m
    }

    /// `∇_{q,i}` via the q-Leibniz rule.
    pub fn nabla(&self, i: usize, m: &[AlgebraElement<C>]) -> ModuleElement<C> {
        let mut out = self.zero_element();
        for (k, f) in m.iter().enumerate() {
            if f.is_zero() {
                continue;
            }
            let gf = f.gamma(i);
            for (l, o) in out.iter_mut().enumerate() {
                let n = &self.nablas[i][l][k];
                if !n.is_zero() {
                    *o = o.add(&gf.mul(n));
                }
            }
            out[k] = out[k].add(&f.nabla(i));
        }
        out
    }

    /// `γ_i^M = id + (q T_i - T_i) ∇_{q,i}`.
    pub fn gamma_module(&self, i: usize, m: &[AlgebraElement<C>]) -> ModuleElement<C> {
        let qm1 = self.ring.sub(&self.ring.q_pow(1), &self.ring.one());
        let t = AlgebraElement::coordinate(&self.framing, &self.ring, i).scale(&qm1);
        self.nabla(i, m)
            .iter()
            .zip(m)
            .map(|(n, x)| x.add(&t.mul(n)))
            .collect()
    }

    /// Matrix of `γ_i^M` on the basis.
    pub fn gamma_matrix(&self, i: usize) -> ConnectionMatrix<C> {
        let one = AlgebraElement::one(&self.framing, &self.ring);
        let cols: Vec<ModuleElement<C>> = (0..self.rank)
            .map(|k| self.gamma_module(i, &self.basis_element(k, one.clone())))
            .collect();
        (0..self.rank)
            .map(|l| (0..self.rank).map(|k| cols[k][l].clone()).collect())
            .collect()
    }

    /// Multiplication by a scalar.
    pub fn scale(&self, f: &AlgebraElement<C>, m: &[AlgebraElement<C>]) -> ModuleElement<C> {
        m.iter().map(|x| f.mul(x)).collect()
    }

    fn check_flat(&self) -> Result<()> {
        let one = AlgebraElement::one(&self.framing, &self.ring);
        for k in 0..self.rank {
            let e = self.basis_element(k, one.clone());
            for i in 0..self.framing.d() {
                for j in i + 1..self.framing.d() {
                    let ij = self.nabla(i, &self.nabla(j, &e));
                    let ji = self.nabla(j, &self.nabla(i, &e));
                    if ij != ji {
                        return Err(Error::NotFlat { i, j, basis: k });
                    }
                }
            }
        }
        Ok(())
    }

    /// The module with basis `e' = e P`, where `p_inv` inverts the
    /// constant matrix `p`: `N_i' = P^{-1} N_i P`.
    pub fn change_basis(&self, p: &Matrix<C>, p_inv: &Matrix<C>) -> Result<Self> {
        let r = self.rank;
        let ring = &self.ring;
        if p.rows() != r || p.cols() != r || p.mul(ring, p_inv) != Matrix::identity(ring, r) {
            return Err(Error::InvalidArgument(
                "basis change must be an invertible r x r matrix".into(),
            ));
        }
        let c = |x: &C::Elem| AlgebraElement::constant(&self.framing, ring, x.clone());
        let mul = |a: &ConnectionMatrix<C>, b: &ConnectionMatrix<C>| -> ConnectionMatrix<C> {
            (0..r)
                .map(|l| {
                    (0..r)
                        .map(|k| {
                            (0..r).fold(AlgebraElement::zero(&self.framing, ring), |acc, s| {
                                acc.add(&a[l][s].mul(&b[s][k]))
                            })
                        })
                        .collect()
                })
                .collect()
        };
        let lift = |m: &Matrix<C>| -> ConnectionMatrix<C> {
            (0..r)
                .map(|l| (0..r).map(|k| c(m.get(l, k))).collect())
                .collect()
        };
        let (pl, pil) = (lift(p), lift(p_inv));
        let nablas = self
            .nablas
            .iter()
            .map(|n| mul(&pil, &mul(n, &pl)))
            .collect();
        make_qconnection(&self.framing, ring, r, nablas)
    }

    /// `m ⊗ n` in the tensor basis `e_k ⊗ e'_l` (index `k r_2 + l`).
    pub fn tensor_elements(m: &[AlgebraElement<C>], n: &[AlgebraElement<C>]) -> ModuleElement<C> {
        m.iter()
            .flat_map(|f| n.iter().map(move |g| f.mul(g)))
            .collect()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "framing": self.framing.to_json(),
            "rank": self.rank,
            "nabla": self.nablas.iter().map(|m| json!({
                "rows": self.rank,
                "cols": self.rank,
                "entries": m.iter().map(|row| row.iter().map(AlgebraElement::to_json).collect::<Vec<_>>()).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
        })
    }
}

/// `∇_{q,i}(m ⊗ n) = ∇_{q,i}(m) ⊗ n + γ_i^{M_1}(m) ⊗ ∇_{q,i}(n)`,
/// evaluated directly from the factors.
pub fn tensor_rule<C: QAlgebra>(
    m1: &QConnectionModule<C>,
    m2: &QConnectionModule<C>,
    i: usize,
    m: &[AlgebraElement<C>],
    n: &[AlgebraElement<C>],
) -> ModuleElement<C> {
    let a = QConnectionModule::tensor_elements(&m1.nabla(i, m), n);
    let b = QConnectionModule::tensor_elements(&m1.gamma_module(i, m), &m2.nabla(i, n));
    a.iter().zip(&b).map(|(x, y)| x.add(y)).collect()
}

/// `M_1 ⊗ M_2` with the connection of [`tensor_rule`] on basis tensors.
pub fn tensor_product<C: QAlgebra>(
    m1: &QConnectionModule<C>,
    m2: &QConnectionModule<C>,
) -> Result<QConnectionModule<C>> {
    if m1.framing != m2.framing || m1.ring != m2.ring {
        return Err(Error::MismatchedAlgebra);
    }
    let one = AlgebraElement::one(&m1.framing, &m1.ring);
    let r = m1.rank * m2.rank;
    let mut nablas = Vec::new();
    for i in 0..m1.framing.d() {
        let mut cols = Vec::with_capacity(r);
        for k in 0..m1.rank {
            for l in 0..m2.rank {
                let e = m1.basis_element(k, one.clone());
                let f = m2.basis_element(l, one.clone());
                cols.push(tensor_rule(m1, m2, i, &e, &f));
            }
        }
        nablas.push(
            (0..r)
                .map(|row| (0..r).map(|col| cols[col][row].clone()).collect())
                .collect(),
        );
    }
    make_qconnection(&m1.framing, &m1.ring, r, nablas)
}

/// `∇((f m) ⊗ n) - ∇(m ⊗ (f n))` through [`tensor_rule`]; zero when the
/// rule is balanced over the scalars.
pub fn balancing_defect<C: QAlgebra>(
    m1: &QConnectionModule<C>,
    m2: &QConnectionModule<C>,
    i: usize,
    f: &AlgebraElement<C>,
    m: &[AlgebraElement<C>],
    n: &[AlgebraElement<C>],
) -> ModuleElement<C> {
    let lhs = tensor_rule(m1, m2, i, &m1.scale(f, m), n);
    let rhs = tensor_rule(m1, m2, i, m, &m2.scale(f, n));
    lhs.iter().zip(&rhs).map(|(x, y)| x.sub(y)).collect()
}

/// The windowed q-de Rham complex `M ⊗ q-Ω^•` with basis
/// `x^e ω_J ⊗ e_k` (index `model_index · r + k`), differential
/// `Σ_{j ∉ J} ±∇_{q,j}` in the same form normalization as
/// [`crate::qderham::build_q_de_rham`].
#[derive(Clone, Debug)]
pub struct QConnDeRham<C: QAlgebra> {
    pub bases: Vec<Vec<BasisElement>>,
    pub complex: FreeComplex<C>,
}

pub fn qconn_de_rham<C: QAlgebra>(
    mq: &QConnectionModule<C>,
    window: i64,
) -> Result<QConnDeRham<C>> {
    if window < 1 {
        return Err(Error::WindowTooSmall(format!(
            "window {window} must be at least 1"
        )));
    }
    let framing = &mq.framing;
    let ring = &mq.ring;
    let d = framing.d();
    let r = mq.rank;
    let bases: Vec<Vec<BasisElement>> = (0..=d).map(|i| degree_basis(framing, i, window)).collect();
    let index: Vec<HashMap<&BasisElement, usize>> = bases
        .iter()
        .map(|b| b.iter().enumerate().map(|(k, x)| (x, k)).collect())
        .collect();
    // ∇_j of (x^e e_k), normalized for the form dT_j or dlog T_j.
    let component = |j: usize, exp: &[i64], k: usize| -> Result<ModuleElement<C>> {
        let f = AlgebraElement::monomial(framing, ring, exp.to_vec(), ring.one())?;
        let v = mq.nabla(j, &mq.basis_element(k, f));
        Ok(match framing.kind(j) {
            VarKind::Laurent => {
                let t = AlgebraElement::coordinate(framing, ring, j);
                v.iter().map(|x| t.mul(x)).collect()
            }
            VarKind::Poly => v,
        })
    };
    let mut diffs = Vec::new();
    for i in 0..d {
        let mut m = Matrix::zeros(ring, bases[i + 1].len() * r, bases[i].len() * r);
        for (b, be) in bases[i].iter().enumerate() {
            for k in 0..r {
                let col = b * r + k;
                for j in (0..d).filter(|j| !be.forms.contains(j)) {
                    let forms = crate::homalg::insert_index(&be.forms, j);
                    let neg = crate::homalg::wedge_sign(&be.forms, j) < 0;
                    for (l, coeff) in component(j, &be.exp, k)?.iter().enumerate() {
                        for (exp, v) in coeff.terms() {
                            let target = BasisElement {
                                forms: forms.clone(),
                                exp: exp.clone(),
                            };
                            let row = *index[i + 1].get(&target).ok_or_else(|| {
                                Error::WindowTooSmall(format!(
                                    "image {} ⊗ e{l} leaves the window",
                                    target.label()
                                ))
                            })?;
                            let v = if neg { ring.neg(v) } else { v.clone() };
                            let row = row * r + l;
                            let sum = ring.add(m.get(row, col), &v);
                            m.set(row, col, sum);
                        }
                    }
                }
            }
        }
        diffs.push(m);
    }
    let labels = bases
        .iter()
        .map(|bs| {
            bs.iter()
                .flat_map(|b| {
                    (0..r).map(move |k| {
                        if r == 1 {
                            b.label()
                        } else {
                            format!("{}⊗e{k}", b.label())
                        }
                    })
                })
                .collect()
        })
        .collect();
    let ranks = bases.iter().map(|b| b.len() * r).collect();
    let complex = FreeComplex::checked(ring.clone(), 0, ranks, diffs)?.with_labels(labels)?;
    Ok(QConnDeRham { bases, complex })
}

fn random_element(
    framing: &Framing,
    ring: &SeriesRing<ZMod>,
    rng: &mut ChaCha8Rng,
    terms: usize,
) -> AlgebraElement<SeriesRing<ZMod>> {
    let scalar = random_series_scalar(ring);
    let t = (0..terms)
        .map(|_| {
            let e = (0..framing.d()).map(|_| rng.gen_range(-2..=2)).collect();
            (e, scalar(rng))
        })
        .collect::<Vec<_>>();
    AlgebraElement::from_terms(framing, ring, t).expect("Laurent exponents")
}

/// The q-connection checks over `S`: the unit object against the ambient
/// model of `Z[T_1^{±1}, ..., T_d^{±1}]`, the balancing identity of the
/// tensor rule on `samples` random triples (`d = 1`, random rank-2 module),
/// the Tate-twist tensor square, and `H^*` of the `dlog`-twist.
pub fn qconn_report(
    t: &TruncationParams,
    d: usize,
    a: i64,
    samples: usize,
    seed: u64,
) -> Result<ExperimentReport> {
    t.validate()?;
    if !coprime(a, t.p) {
        return Err(Error::NonUnitA { a });
    }
    let s = t.series();
    let mut r = ExperimentReport::new(
        "qconn",
        json!({"p": t.p, "M": t.m, "N": t.n, "D": t.d, "d": d, "a": a, "samples": samples, "seed": seed}),
    );

    let f = Framing::laurent(d);
    let unit = QConnectionModule::unit(&f, &s);
    let ours = qconn_de_rham(&unit, t.d)?;
    let model = build_q_de_rham(&f, t.d, &s)?;
    r.checks.push(Check::new(
        "unit_object_reproduces_model",
        ours.complex.diffs() == model.complex.diffs(),
    ));

    let mats = (0..d)
        .map(|i| {
            let mut e = vec![0; d];
            e[i] = -1;
            AlgebraElement::monomial(&f, &s, e, s.one()).map(|x| vec![vec![x]])
        })
        .collect::<Result<Vec<_>>>()?;
    let twist = make_qconnection(&f, &s, 1, mats)?;
    let h = qconn_de_rham(&twist, t.d)?.complex.cohomology()?;
    r.push_degrees(0, &h, Some("dlog-twist"));

    let f1 = Framing::laurent(1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = Vec::new();
    for k in 0..samples {
        let n1 = vec![(0..2)
            .map(|_| {
                (0..2)
                    .map(|_| random_element(&f1, &s, &mut rng, 1))
                    .collect()
            })
            .collect()];
        let m1 = make_qconnection(&f1, &s, 2, n1)?;
        let m2 = make_qconnection(
            &f1,
            &s,
            1,
            vec![vec![vec![random_element(&f1, &s, &mut rng, 2)]]],
        )?;
        let g = random_element(&f1, &s, &mut rng, 2);
        let m: ModuleElement<_> = (0..2)
            .map(|_| random_element(&f1, &s, &mut rng, 2))
            .collect();
        let n = vec![random_element(&f1, &s, &mut rng, 2)];
        if !balancing_defect(&m1, &m2, 0, &g, &m, &n)
            .iter()
            .all(AlgebraElement::is_zero)
        {
            failures.push(k);
        }
    }
    r.checks.push(Check::with_detail(
        "tensor_balancing",
        failures.is_empty(),
        json!({"failed_samples": failures}),
    ));

    let one = tate_twist_action(-1, t.p, a, &s)?;
    let square = one.tensor(&one)?;
    let direct = tate_twist_action(-2, t.p, a, &s)?;
    let expected_gamma = s.pow(&one.gamma, 2);
    let expected_phi = s.pow(&s.q_int(t.p as i64), 2);
    r.checks.push(Check::with_detail(
        "tate_square_multipliers",
        square == direct && square.gamma == expected_gamma && square.phi == Some(expected_phi),
        square.to_json(),
    ));
    r.verdict_from_checks();
    Ok(r)
}

#[cfg(test)]
mod tests;
