//! Semilinear chain maps on q-de Rham models: the Frobenius `φ_p`
//! (`T ↦ T^p`, `q ↦ q^p`), the operators `γ_a` (`q ↦ q^a`), and the Tate
//! twist.
//!
//! A map `u` with matrix `U` and substitution `σ = (q ↦ q^a)` acts by
//! `u(v) = U σ(v)`; it is a chain map iff `d U_i = U_{i+1} σ(d)`.

use std::collections::{BTreeMap, VecDeque};

use num_integer::Integer;
use rand::{Rng as _, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::framed::VarKind;
use crate::homalg::{FreeComplex, Matrix};
use crate::qarith::{
    q_integer_laurent, CoeffRing, Integers, QAlgebra, QSeries, Rationals, Ring, SeriesRing, ZMod,
};
use crate::qderham::{BasisElement, ExactModel, QDeRhamModel};

/// A `σ_a`-semilinear map between two complexes over the same ring.
#[derive(Clone, Debug)]
pub struct SemilinearChainMap<C: QAlgebra> {
    pub sigma_a: i64,
    pub maps: Vec<Matrix<C>>,
    pub source: FreeComplex<C>,
    pub target: FreeComplex<C>,
}

/// Outcome of [`verify_semilinear_chain_map`]; failures carry witnesses.
#[derive(Clone, Debug, PartialEq)]
pub struct VerificationReport {
    pub additive: bool,
    pub semilinear: bool,
    pub chain_map: bool,
    pub failures: Vec<Value>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.additive && self.semilinear && self.chain_map
    }
}

impl<C: QAlgebra> SemilinearChainMap<C> {
    pub fn ring(&self) -> &C {
        self.source.ring()
    }

    fn sigma_vec(&self, v: &[C::Elem]) -> Result<Vec<C::Elem>> {
        v.iter()
            .map(|x| self.ring().sigma(x, self.sigma_a))
            .collect()
    }

    fn sigma_matrix(&self, m: &Matrix<C>) -> Result<Matrix<C>> {
        let ring = self.ring();
        let data = m
            .data()
            .iter()
            .map(|x| {
                if ring.is_zero(x) {
                    Ok(ring.zero())
                } else {
                    ring.sigma(x, self.sigma_a)
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Matrix::from_vec(m.rows(), m.cols(), data))
    }

    /// `u(v)` in degree `i` (relative to the source start).
    pub fn apply(&self, k: usize, v: &[C::Elem]) -> Result<Vec<C::Elem>> {
        Ok(self.maps[k].mul_vec(self.ring(), &self.sigma_vec(v)?))
    }

    /// `self ∘ other`, with substitution `q ↦ q^{ab}`.
    pub fn compose(&self, other: &SemilinearChainMap<C>) -> Result<SemilinearChainMap<C>> {
        let ring = self.ring();
        let maps = self
            .maps
            .iter()
            .zip(&other.maps)
            .map(|(a, b)| Ok(a.mul(ring, &self.sigma_matrix(b)?)))
            .collect::<Result<Vec<_>>>()?;
        Ok(SemilinearChainMap {
            sigma_a: self.sigma_a * other.sigma_a,
            maps,
            source: other.source.clone(),
            target: self.target.clone(),
        })
    }

    pub fn to_json(&self) -> Value {
        let ring = self.ring();
        json!({
            "sigma": {"kind": "q_power", "a": self.sigma_a},
            "maps": self.maps.iter().map(|m| m.to_sparse_json(ring, |x| ring.elem_json(x))).collect::<Vec<_>>(),
        })
    }
}

/// Checks additivity and `σ`-semilinearity on random vectors and scalars,
/// and `d U_i = U_{i+1} σ(d)` column by column.
pub fn verify_semilinear_chain_map<C: QAlgebra>(
    u: &SemilinearChainMap<C>,
    samples: usize,
    seed: u64,
    random_scalar: impl Fn(&mut ChaCha8Rng) -> C::Elem,
) -> Result<VerificationReport> {
    let ring = u.ring();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = VerificationReport {
        additive: true,
        semilinear: true,
        chain_map: true,
        failures: Vec::new(),
    };
    for (k, m) in u.maps.iter().enumerate() {
        let n = m.cols();
        if n == 0 {
            continue;
        }
        for _ in 0..samples {
            let v: Vec<C::Elem> = (0..n)
                .map(|_| {
                    if rng.gen_bool(0.3) {
                        random_scalar(&mut rng)
                    } else {
                        ring.zero()
                    }
                })
                .collect();
            let w: Vec<C::Elem> = (0..n)
                .map(|_| {
                    if rng.gen_bool(0.3) {
                        random_scalar(&mut rng)
                    } else {
                        ring.zero()
                    }
                })
                .collect();
            let s = random_scalar(&mut rng);
            let sum: Vec<C::Elem> = v.iter().zip(&w).map(|(a, b)| ring.add(a, b)).collect();
            let lhs = u.apply(k, &sum)?;
            let rhs: Vec<C::Elem> = u
                .apply(k, &v)?
                .iter()
                .zip(u.apply(k, &w)?)
                .map(|(a, b)| ring.add(a, &b))
                .collect();
            if lhs != rhs {
                report.additive = false;
                report
                    .failures
                    .push(json!({"check": "additive", "degree": k}));
            }
            let scaled: Vec<C::Elem> = v.iter().map(|x| ring.mul(&s, x)).collect();
            let sigma_s = ring.sigma(&s, u.sigma_a)?;
            let lhs = u.apply(k, &scaled)?;
            let rhs: Vec<C::Elem> = u
                .apply(k, &v)?
                .iter()
                .map(|x| ring.mul(&sigma_s, x))
                .collect();
            if lhs != rhs {
                report.semilinear = false;
                report
                    .failures
                    .push(json!({"check": "semilinear", "degree": k}));
            }
        }
    }
    for k in 0..u.maps.len().saturating_sub(1) {
        let i = u.source.start() + k as i64;
        let lhs = u.target.diff(i).mul(ring, &u.maps[k]);
        let rhs = u.maps[k + 1].mul(ring, &u.sigma_matrix(&u.source.diff(i))?);
        for c in 0..lhs.cols() {
            if lhs.column(c) != rhs.column(c) {
                report.chain_map = false;
                let label = u
                    .source
                    .labels(i)
                    .map(|l| l[c].clone())
                    .unwrap_or_else(|| c.to_string());
                report
                    .failures
                    .push(json!({"check": "chain_map", "degree": i, "column": label}));
            }
        }
    }
    Ok(report)
}

/// Uniform random elements of `S = (Z/p^M)[q]/(q-1)^N`.
pub fn random_series_scalar(ring: &SeriesRing<ZMod>) -> impl Fn(&mut ChaCha8Rng) -> QSeries<ZMod> {
    let base = *ring.base();
    let n = ring.precision();
    move |rng| {
        QSeries::from_t_coeffs(
            base,
            n,
            (0..n).map(|_| rng.gen_range(0..base.modulus())).collect(),
        )
    }
}

/// `[a]_{q^m} = (q^{am} - 1)/(q^m - 1)`, equal to `a` when `m = 0`.
pub fn q_int_at_power<C: QAlgebra>(ring: &C, a: i64, m: i64) -> C::Elem {
    if m == 0 {
        ring.from_i64(a)
    } else {
        ring.from_zq(&q_integer_laurent(Integers, a).substitute_q_power(m))
    }
}

/// `[a]_q / [a]_{q^m}`, the multiplier of `γ_a` on the line `T^m dlog T`.
pub fn gamma_multiplier<C: QAlgebra>(ring: &C, a: i64, m: i64) -> Result<C::Elem> {
    let den = ring
        .inv(&q_int_at_power(ring, a, m))
        .ok_or(Error::NonUnitA { a })?;
    Ok(ring.mul(&ring.q_int(a), &den))
}

fn check_unit_a<C: QAlgebra>(ring: &C, a: i64) -> Result<()> {
    if a == 0 || ring.inv(&ring.from_i64(a)).is_none() {
        return Err(Error::NonUnitA { a });
    }
    Ok(())
}

/// Exponent of the line `T_j^m` on which `γ_a` acts through the form
/// `dT_j` or `dlog T_j`.
fn line_exponent(kind: VarKind, shift: i64, e: i64) -> Option<i64> {
    match kind {
        VarKind::Laurent => Some(e),
        VarKind::Poly if shift == 0 => Some(e + 1),
        VarKind::Poly => None,
    }
}

/// `γ_a` on a model in closed form: identity on functions, and on
/// `T^e dT_J` (resp. `dlog`) multiplication by `Π_{j ∈ J} [a]_q/[a]_{q^{m_j}}`.
/// Shifted polynomial framings go through [`solve_diagonal_gamma`].
pub fn gamma_a_chain_map<C: QAlgebra>(
    model: &QDeRhamModel<C>,
    a: i64,
) -> Result<SemilinearChainMap<C>> {
    let ring = model.complex.ring();
    check_unit_a(ring, a)?;
    let f = &model.framing;
    let mut cache: BTreeMap<i64, C::Elem> = BTreeMap::new();
    let mut maps = Vec::new();
    for basis in &model.bases {
        let mut diag = Vec::with_capacity(basis.len());
        for b in basis {
            let mut mult = ring.one();
            for &j in &b.forms {
                let m = line_exponent(f.kind(j), f.shift(j), b.exp[j]).ok_or_else(|| {
                    Error::NonDiagonalRequired(
                        "shifted framings need the line-by-line solver".into(),
                    )
                })?;
                let x = match cache.get(&m) {
                    Some(x) => x.clone(),
                    None => {
                        let x = gamma_multiplier(ring, a, m)?;
                        cache.insert(m, x.clone());
                        x
                    }
                };
                mult = ring.mul(&mult, &x);
            }
            diag.push(mult);
        }
        maps.push(Matrix::diagonal(ring, diag.len(), diag.len(), &diag));
    }
    Ok(SemilinearChainMap {
        sigma_a: a,
        maps,
        source: model.complex.clone(),
        target: model.complex.clone(),
    })
}

/// `φ_p` from a model to one with a window at least `p` times larger:
/// `T^e dlog T_J ↦ [p]_q^{|J|} T^{pe} dlog T_J`, and on unshifted polynomial
/// variables `T^e dT_J ↦ [p]_q^{|J|} T^{pe + (p-1)1_J} dT_J`.
pub fn phi_p_chain_map<C: QAlgebra>(
    source: &QDeRhamModel<C>,
    target: &QDeRhamModel<C>,
    p: u64,
) -> Result<SemilinearChainMap<C>> {
    if source.framing != target.framing {
        return Err(Error::InvalidArgument(
            "φ_p needs the same framing on both sides".into(),
        ));
    }
    let f = &source.framing;
    if (0..f.d()).any(|j| f.kind(j) == VarKind::Poly && f.shift(j) != 0) {
        return Err(Error::InvalidArgument(
            "φ_p is monomial only on unshifted coordinates".into(),
        ));
    }
    if target.window < p as i64 * source.window {
        return Err(Error::WindowTooSmall(format!(
            "target window {} is below {} × source window {}",
            target.window, p, source.window
        )));
    }
    let ring = source.complex.ring();
    let qp = ring.q_int(p as i64);
    let pi = p as i64;
    let mut maps = Vec::new();
    for (i, basis) in source.bases.iter().enumerate() {
        let mult = ring.pow(&qp, i as u64);
        let index: BTreeMap<&BasisElement, usize> = target.bases[i]
            .iter()
            .enumerate()
            .map(|(k, b)| (b, k))
            .collect();
        let mut m = Matrix::zeros(ring, target.bases[i].len(), basis.len());
        for (col, b) in basis.iter().enumerate() {
            let exp = (0..f.d())
                .map(|j| {
                    let extra = if f.kind(j) == VarKind::Poly && b.forms.contains(&j) {
                        pi - 1
                    } else {
                        0
                    };
                    pi * b.exp[j] + extra
                })
                .collect();
            let img = BasisElement {
                forms: b.forms.clone(),
                exp,
            };
            let row = *index.get(&img).ok_or_else(|| {
                Error::WindowTooSmall(format!("{} leaves the window", img.label()))
            })?;
            m.set(row, col, mult.clone());
        }
        maps.push(m);
    }
    Ok(SemilinearChainMap {
        sigma_a: p as i64,
        maps,
        source: source.complex.clone(),
        target: target.complex.clone(),
    })
}

/// Forces a diagonal `γ_a` line by line over `Q[[q-1]]/(q-1)^N`: starting
/// from the identity in degree 0, every non-zero entry of `d` determines
/// `u_r = d_{rc} u_c / σ_a(d_{rc})`. Lines no entry reaches get the Tate
/// normalization `([a]_q/a)^{|J|}`. Any conflict means no diagonal solution
/// exists.
pub fn solve_diagonal_gamma(
    model: &ExactModel,
    a: i64,
    n: usize,
) -> Result<Vec<Vec<QSeries<Rationals>>>> {
    let ring = SeriesRing::new(Rationals, n)?;
    check_unit_a(&ring, a)?;
    let qm = model.specialize(&ring);
    let c = &qm.complex;
    let d = model.framing.d();
    let mut u: Vec<Vec<Option<QSeries<Rationals>>>> =
        qm.bases.iter().map(|b| vec![None; b.len()]).collect();
    for x in u[0].iter_mut() {
        *x = Some(ring.one());
    }
    // Edges (degree, row, col, d_rc, σ(d_rc)).
    let mut edges = Vec::new();
    for i in 0..d {
        let m = c.diff(i as i64);
        for (r, col) in m.nonzeros(&ring).collect::<Vec<_>>() {
            let v = m.get(r, col).clone();
            let sv = ring.sigma(&v, a)?;
            edges.push((i, r, col, v, sv));
        }
    }
    let tate = gamma_multiplier(&ring, a, 0)?;
    let conflict = |i: usize, col: usize| {
        Error::NonDiagonalRequired(format!(
            "no diagonal solution through {}",
            qm.bases[i][col].label()
        ))
    };
    let mut pending: VecDeque<usize> = (0..edges.len()).collect();
    let mut stalled = 0;
    while let Some(k) = pending.pop_front() {
        let (i, r, col, ref v, ref sv) = edges[k];
        match (u[i][col].clone(), u[i + 1][r].clone()) {
            (Some(uc), None) => match ring.inv(sv) {
                Some(inv) => {
                    u[i + 1][r] = Some(ring.mul(&ring.mul(v, &uc), &inv));
                    stalled = 0;
                }
                None => {
                    pending.push_back(k);
                    stalled += 1;
                }
            },
            (None, Some(ur)) => match ring.inv(v) {
                Some(inv) => {
                    u[i][col] = Some(ring.mul(&ring.mul(sv, &ur), &inv));
                    stalled = 0;
                }
                None => {
                    pending.push_back(k);
                    stalled += 1;
                }
            },
            (Some(uc), Some(ur)) => {
                if ring.mul(v, &uc) != ring.mul(&ur, sv) {
                    return Err(conflict(i, col));
                }
                stalled = 0;
            }
            (None, None) => {
                pending.push_back(k);
                stalled += 1;
            }
        }
        if stalled > pending.len() && !pending.is_empty() {
            // Seed one undetermined line with the Tate normalization.
            let seeded = u.iter_mut().enumerate().find_map(|(i, row)| {
                row.iter_mut()
                    .enumerate()
                    .find(|(_, x)| x.is_none())
                    .map(|(k, x)| {
                        *x = Some(ring.pow(&tate, qm.bases[i][k].forms.len() as u64));
                    })
            });
            if seeded.is_none() {
                break;
            }
            stalled = 0;
        }
    }
    Ok(u.into_iter()
        .enumerate()
        .map(|(i, row)| {
            row.into_iter()
                .enumerate()
                .map(|(k, x)| {
                    x.unwrap_or_else(|| ring.pow(&tate, qm.bases[i][k].forms.len() as u64))
                })
                .collect()
        })
        .collect())
}

/// Image of a `p`-integral rational in `Z/p^M`.
pub fn rational_to_zmod(base: &ZMod, x: &num_rational::BigRational) -> Option<u64> {
    let den = base.inv(&base.from_bigint(x.denom()))?;
    Some(base.mul(&base.from_bigint(x.numer()), &den))
}

/// [`solve_diagonal_gamma`] transported to `S = (Z/p^M)[q]/(q-1)^N`.
pub fn gamma_a_chain_map_solved(
    model: &ExactModel,
    s: &SeriesRing<ZMod>,
    a: i64,
) -> Result<SemilinearChainMap<SeriesRing<ZMod>>> {
    check_unit_a(s, a)?;
    let diag = solve_diagonal_gamma(model, a, s.precision())?;
    let base = *s.base();
    let qm = model.specialize(s);
    let maps = diag
        .iter()
        .map(|row| {
            let entries = row
                .iter()
                .map(|x| {
                    let c = x
                        .coeffs()
                        .iter()
                        .map(|v| rational_to_zmod(&base, v).ok_or(Error::NonUnitA { a }))
                        .collect::<Result<Vec<_>>>()?;
                    Ok(QSeries::from_t_coeffs(base, s.precision(), c))
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(Matrix::diagonal(s, entries.len(), entries.len(), &entries))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SemilinearChainMap {
        sigma_a: a,
        maps,
        source: qm.complex.clone(),
        target: qm.complex,
    })
}

/// The rank-one object `Z[[q-1]]{k}` with generator `e`: `φ_p(e) =
/// [p]_q^{-k} e` and `γ_a(e) = ([a]_q/a)^{-k} e`. The Frobenius multiplier
/// is absent when `k > 0` and `[p]_q` is not a unit.
#[derive(Clone, Debug, PartialEq)]
pub struct TateTwistObject<R: CoeffRing> {
    pub k: i64,
    pub p: u64,
    pub a: i64,
    pub phi: Option<QSeries<R>>,
    pub gamma: QSeries<R>,
}

fn signed_pow<C: Ring>(ring: &C, x: &C::Elem, e: i64) -> Option<C::Elem> {
    if e >= 0 {
        Some(ring.pow(x, e as u64))
    } else {
        ring.inv(x).map(|y| ring.pow(&y, e.unsigned_abs()))
    }
}

pub fn tate_twist_action<R: CoeffRing>(
    k: i64,
    p: u64,
    a: i64,
    ring: &SeriesRing<R>,
) -> Result<TateTwistObject<R>> {
    check_unit_a(ring, a)?;
    let phi = signed_pow(ring, &ring.q_int(p as i64), -k);
    let g = gamma_multiplier(ring, a, 0)?;
    let gamma = signed_pow(ring, &g, -k).ok_or(Error::NonUnitA { a })?;
    Ok(TateTwistObject {
        k,
        p,
        a,
        phi,
        gamma,
    })
}

impl<R: CoeffRing> TateTwistObject<R> {
    /// `Z[[q-1]]{k} ⊗ Z[[q-1]]{l} = Z[[q-1]]{k + l}` with multiplied actions.
    pub fn tensor(&self, o: &Self) -> Result<Self> {
        if (self.p, self.a) != (o.p, o.a) {
            return Err(Error::InvalidArgument(
                "Tate twists with different (p, a)".into(),
            ));
        }
        let phi = match (&self.phi, &o.phi) {
            (Some(x), Some(y)) => Some(x.mul(y)),
            _ => None,
        };
        Ok(TateTwistObject {
            k: self.k + o.k,
            p: self.p,
            a: self.a,
            phi,
            gamma: self.gamma.mul(&o.gamma),
        })
    }

    pub fn to_json(&self) -> Value {
        json!({
            "k": self.k, "p": self.p, "a": self.a,
            "phi": self.phi.as_ref().map(QSeries::to_json),
            "gamma": self.gamma.to_json(),
        })
    }
}

/// `gcd(a, p) = 1` for integers; used by callers validating parameters.
pub fn coprime(a: i64, p: u64) -> bool {
    a != 0 && a.unsigned_abs().gcd(&p) == 1
}
