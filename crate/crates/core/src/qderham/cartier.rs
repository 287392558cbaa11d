//! The q-de Rham complex modulo `Φ_p(q)` on Laurent framings: the Frobenius
//! image is killed by `∇_q`, the integral monomial lines carry all of the
//! cohomology, and the boundary map of `Φ_p^2 -> Φ_p` is a derivation.

use std::collections::BTreeMap;

use rand::{Rng as _, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use super::model::{build_q_de_rham, degree_basis, BasisElement, QDeRhamModel};
use super::{Check, ExperimentReport, TruncationParams};
use crate::error::{Error, Result};
use crate::framed::{AlgebraElement, Framing};
use crate::homalg::{smith_normal_form, AbGroupInvariants, FreeComplex, Matrix};
use crate::qarith::{binomial, QuotientRing, Ring, ZMod};

type Q = QuotientRing<ZMod>;

fn n_choose(d: usize, i: usize) -> usize {
    binomial(d as i64, i as u64)
        .try_into()
        .expect("small binomial")
}

fn check_window(t: &TruncationParams, w: i64) -> Result<()> {
    if w < 1 || w % t.p as i64 != 0 {
        return Err(Error::WindowNotDivisibleByP { window: w, p: t.p });
    }
    Ok(())
}

fn is_integral(b: &BasisElement, p: u64) -> bool {
    b.exp.iter().all(|e| e.rem_euclid(p as i64) == 0)
}

/// Restriction of a complex to the basis elements selected by `keep`, which
/// must span a subcomplex.
fn subcomplex<R: Ring>(
    c: &FreeComplex<R>,
    bases: &[Vec<BasisElement>],
    keep: impl Fn(&BasisElement) -> bool,
) -> Result<FreeComplex<R>> {
    let idx: Vec<Vec<usize>> = bases
        .iter()
        .map(|b| {
            b.iter()
                .enumerate()
                .filter(|(_, x)| keep(x))
                .map(|(k, _)| k)
                .collect()
        })
        .collect();
    let diffs = (0..bases.len() - 1)
        .map(|i| c.diff(i as i64).submatrix(&idx[i + 1], &idx[i]))
        .collect();
    FreeComplex::checked(
        c.ring().clone(),
        0,
        idx.iter().map(Vec::len).collect(),
        diffs,
    )
}

/// Invariants of a free module of rank `r` over `(Z/p^M)[q]/Φ_p(q)`,
/// flattened: `Z/p^M` of rank `r (p - 1)`.
fn truncated_cyclotomic_free(t: &TruncationParams, r: usize) -> AbGroupInvariants {
    AbGroupInvariants::free(r * (t.p as usize - 1))
}

fn integral_count(d: usize, t: &TruncationParams, w: i64) -> usize {
    ((2 * (w / t.p as i64) + 1) as usize).pow(d as u32)
}

/// Runs the checks of the Cartier isomorphism modulo `Φ_p(q)` on the
/// `d`-dimensional torus with window `[-w, w]`.
pub fn cartier_check(d: usize, t: &TruncationParams, w: i64) -> Result<ExperimentReport> {
    check_window(t, w)?;
    let q1 = Q::mod_cyclotomic(t.base(), t.p)?;
    let framing = Framing::laurent(d);
    let model = build_q_de_rham(&framing, w, &q1)?;
    let mut r = ExperimentReport::new("cartier", json!({"p": t.p, "M": t.m, "d": d, "W": w}));

    // ∇_q ∘ φ = 0 on every monomial whose Frobenius image lies in the window,
    // read off the model and recomputed in the algebra.
    let p = t.p as i64;
    let d0 = model.complex.diff(0);
    let mut model_ok = true;
    let mut algebra_ok = true;
    for b in degree_basis(&framing, 0, w / p) {
        let img = BasisElement {
            forms: vec![],
            exp: b.exp.iter().map(|e| e * p).collect(),
        };
        let col = model.index_of(0, &img).expect("image in window");
        model_ok &= d0.column(col).iter().all(|x| q1.is_zero(x));
        let mono = AlgebraElement::monomial(&framing, &q1, b.exp.clone(), q1.one())?;
        let phi = frobenius_untwisted(&mono, t.p);
        algebra_ok &= (0..d).all(|j| phi.nabla(j).is_zero());
    }
    r.checks
        .push(Check::new("nabla_of_frobenius_vanishes_in_model", model_ok));
    r.checks.push(Check::new(
        "nabla_of_frobenius_vanishes_in_algebra",
        algebra_ok,
    ));

    let h = model.complex.cohomology()?;
    r.push_degrees(0, &h, None);
    let count = integral_count(d, t, w);
    let expected: Vec<AbGroupInvariants> = (0..=d)
        .map(|i| truncated_cyclotomic_free(t, count * n_choose(d, i)))
        .collect();
    r.checks.push(Check::with_detail(
        "h_matches_forms_over_cyclotomic_ring",
        h == expected,
        json!({"expected": expected}),
    ));
    r.checks.push(Check::new(
        "h0_matches_frobenius_image",
        h[0] == truncated_cyclotomic_free(t, count),
    ));

    let nonint = subcomplex(&model.complex, &model.bases, |b| !is_integral(b, t.p))?;
    let acyclic = nonint.cohomology()?.iter().all(AbGroupInvariants::is_zero);
    r.checks
        .push(Check::new("non_integral_summands_acyclic", acyclic));
    let integral = subcomplex(&model.complex, &model.bases, |b| is_integral(b, t.p))?;
    r.checks.push(Check::new(
        "integral_summand_has_zero_differential",
        integral.diffs().iter().all(|m| m.is_zero(&q1)),
    ));
    r.verdict_from_checks();
    Ok(r)
}

/// `T^e ↦ T^{pe}` without touching coefficients (monomials have coefficient
/// 1 here, so no `q ↦ q^p` is needed).
fn frobenius_untwisted(f: &AlgebraElement<Q>, p: u64) -> AlgebraElement<Q> {
    let terms = f
        .terms()
        .iter()
        .map(|(e, c)| (e.iter().map(|x| x * p as i64).collect(), c.clone()));
    AlgebraElement::from_terms(f.framing(), f.ring(), terms).expect("laurent exponents")
}

/// Exact division of a `t`-polynomial by the monic `phi`.
fn divide_exact(base: &ZMod, x: &[u64], phi: &[u64]) -> Result<Vec<u64>> {
    let n = phi.len() - 1;
    let mut rem = x.to_vec();
    if rem.len() < n {
        return if rem.iter().all(|&c| c == 0) {
            Ok(Vec::new())
        } else {
            Err(Error::DivisionNotExact("by Φ_p".into()))
        };
    }
    let mut quo = vec![0u64; rem.len() - n];
    for k in (0..quo.len()).rev() {
        let c = rem[k + n];
        quo[k] = c;
        if c != 0 {
            for (j, &g) in phi.iter().enumerate() {
                rem[k + j] = base.sub(&rem[k + j], &base.mul(&c, &g));
            }
        }
    }
    if rem.iter().any(|&c| c != 0) {
        return Err(Error::DivisionNotExact("by Φ_p".into()));
    }
    Ok(quo)
}

struct Boundary {
    q1: Q,
    q2: Q,
    phi: Vec<u64>,
    m1: QDeRhamModel<Q>,
    m2: QDeRhamModel<Q>,
    framing: Framing,
}

impl Boundary {
    fn new(d: usize, t: &TruncationParams, w: i64) -> Result<Self> {
        let base = t.base();
        let q1 = Q::mod_cyclotomic(base, t.p)?;
        let q2 = Q::mod_cyclotomic_power(base, t.p, 2)?;
        let framing = Framing::laurent(d);
        let m1 = build_q_de_rham(&framing, w, &q1)?;
        let m2 = build_q_de_rham(&framing, w, &q2)?;
        let phi = (0..t.p)
            .map(|k| base.from_bigint(&binomial(t.p as i64, k + 1)))
            .collect();
        Ok(Boundary {
            q1,
            q2,
            phi,
            m1,
            m2,
            framing,
        })
    }

    fn to_vec(&self, f: &AlgebraElement<Q>) -> Result<Vec<Vec<u64>>> {
        let mut v = vec![self.q1.zero(); self.m1.bases[0].len()];
        for (e, c) in f.terms() {
            let k = self
                .m1
                .index_of(
                    0,
                    &BasisElement {
                        forms: vec![],
                        exp: e.clone(),
                    },
                )
                .ok_or_else(|| Error::WindowTooSmall(format!("x^{e:?} outside the window")))?;
            v[k] = c.clone();
        }
        Ok(v)
    }

    /// Lift to `Φ_p^2`, apply `d`, divide by `Φ_p`.
    fn boundary(&self, f: &AlgebraElement<Q>) -> Result<Vec<Vec<u64>>> {
        let lifted: Vec<Vec<u64>> = self
            .to_vec(f)?
            .iter()
            .map(|c| self.q2.lift_from(c))
            .collect();
        let dv = self.m2.complex.diff(0).mul_vec(&self.q2, &lifted);
        dv.iter()
            .map(|c| divide_exact(self.q1.base(), c, &self.phi).map(|x| self.q1.reduce(&x)))
            .collect()
    }

    /// `f · ω` for a function `f` and a 1-form vector `ω`.
    fn times_form(&self, f: &AlgebraElement<Q>, w: &[Vec<u64>]) -> Result<Vec<Vec<u64>>> {
        let mut comps: BTreeMap<Vec<usize>, AlgebraElement<Q>> = BTreeMap::new();
        for (b, c) in self.m1.bases[1].iter().zip(w) {
            if self.q1.is_zero(c) {
                continue;
            }
            let mono = AlgebraElement::monomial(&self.framing, &self.q1, b.exp.clone(), c.clone())?;
            let e = comps
                .entry(b.forms.clone())
                .or_insert_with(|| AlgebraElement::zero(&self.framing, &self.q1));
            *e = e.add(&f.mul(&mono));
        }
        let mut out = vec![self.q1.zero(); w.len()];
        for (forms, g) in comps {
            for (e, c) in g.terms() {
                let k = self
                    .m1
                    .index_of(
                        1,
                        &BasisElement {
                            forms: forms.clone(),
                            exp: e.clone(),
                        },
                    )
                    .ok_or_else(|| Error::WindowTooSmall(format!("x^{e:?} outside the window")))?;
                out[k] = self.q1.add(&out[k], c);
            }
        }
        Ok(out)
    }

    /// Projection onto the integral lines, which represent `H^1` faithfully.
    fn class(&self, w: &[Vec<u64>], p: u64) -> Vec<Vec<u64>> {
        self.m1.bases[1]
            .iter()
            .zip(w)
            .map(|(b, c)| {
                if is_integral(b, p) {
                    c.clone()
                } else {
                    self.q1.zero()
                }
            })
            .collect()
    }

    fn add(&self, a: &[Vec<u64>], b: &[Vec<u64>]) -> Vec<Vec<u64>> {
        a.iter().zip(b).map(|(x, y)| self.q1.add(x, y)).collect()
    }

    fn random_frobenius_image(
        &self,
        rng: &mut ChaCha8Rng,
        p: u64,
        radius: i64,
    ) -> AlgebraElement<Q> {
        let modulus = self.q1.base().modulus();
        let small = degree_basis(&self.framing, 0, radius.max(0));
        let mut terms = Vec::new();
        for b in small {
            if rng.gen_bool(0.5) {
                let c: Vec<u64> = (0..self.q1.degree())
                    .map(|_| rng.gen_range(0..modulus))
                    .collect();
                terms.push((b.exp.iter().map(|e| e * p as i64).collect(), c));
            }
        }
        AlgebraElement::from_terms(&self.framing, &self.q1, terms).expect("laurent exponents")
    }
}

/// Checks that the connecting map `∂` of `0 -> Φ_p/Φ_p^2 -> q-Ω/Φ_p^2 ->
/// q-Ω/Φ_p -> 0` restricted to the Frobenius image is a derivation into
/// `H^1`, and that `T^e dlog T_j ↦ φ(T^e) ∂(φ(T_j)) / φ(T_j)` identifies
/// `Ω^1` with `H^1` on the window.
pub fn cartier_boundary_check(
    d: usize,
    t: &TruncationParams,
    w: i64,
    samples: usize,
    seed: u64,
) -> Result<ExperimentReport> {
    check_window(t, w)?;
    let needed = 2 * (t.p as usize - 1);
    if t.n < needed {
        return Err(Error::PrecisionTooLow(format!(
            "N = {} but Φ_p^2 needs {needed}",
            t.n
        )));
    }
    let bd = Boundary::new(d, t, w)?;
    let p = t.p;
    let mut r = ExperimentReport::new(
        "cartier-boundary",
        json!({"p": t.p, "M": t.m, "N": t.n, "d": d, "W": w, "samples": samples, "seed": seed}),
    );
    let one = AlgebraElement::one(&bd.framing, &bd.q1);
    let zero_form = vec![bd.q1.zero(); bd.m1.bases[1].len()];
    r.checks.push(Check::new(
        "boundary_of_one_vanishes",
        bd.class(&bd.boundary(&one)?, p) == zero_form,
    ));

    // ∂(φ(T)^2) = 2 φ(T) ∂(φ(T)) on the first coordinate.
    let mut e = vec![0; d];
    e[0] = p as i64;
    let phi_t = AlgebraElement::monomial(&bd.framing, &bd.q1, e, bd.q1.one())?;
    let lhs = bd.class(&bd.boundary(&phi_t.mul(&phi_t))?, p);
    let two_phi = phi_t.scale(&bd.q1.from_i64(2));
    let rhs = bd.class(&bd.times_form(&two_phi, &bd.boundary(&phi_t)?)?, p);
    r.checks.push(Check::new("boundary_of_square", lhs == rhs));

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let radius = w / (2 * p as i64);
    let (mut additive, mut leibniz) = (0usize, 0usize);
    for _ in 0..samples {
        let x = bd.random_frobenius_image(&mut rng, p, radius);
        let y = bd.random_frobenius_image(&mut rng, p, radius);
        let (dx, dy) = (bd.boundary(&x)?, bd.boundary(&y)?);
        if bd.class(&bd.boundary(&x.add(&y))?, p) == bd.class(&bd.add(&dx, &dy), p) {
            additive += 1;
        }
        let lhs = bd.class(&bd.boundary(&x.mul(&y))?, p);
        let rhs = bd.class(
            &bd.add(&bd.times_form(&x, &dy)?, &bd.times_form(&y, &dx)?),
            p,
        );
        if lhs == rhs {
            leibniz += 1;
        }
    }
    r.checks.push(Check::with_detail(
        "boundary_additive",
        additive == samples,
        json!({"passed": additive, "samples": samples}),
    ));
    r.checks.push(Check::with_detail(
        "boundary_leibniz",
        leibniz == samples,
        json!({"passed": leibniz, "samples": samples}),
    ));

    // Ω^1 -> H^1 on the window of Frobenius preimages.
    let small = degree_basis(&bd.framing, 1, w / p as i64);
    let integral_rows: Vec<usize> = bd.m1.bases[1]
        .iter()
        .enumerate()
        .filter(|(_, b)| is_integral(b, p))
        .map(|(k, _)| k)
        .collect();
    let mut images = Matrix::zeros(&bd.q1, integral_rows.len(), small.len());
    for (col, b) in small.iter().enumerate() {
        let j = b.forms[0];
        let mut tj = vec![0; d];
        tj[j] = p as i64;
        let phi_tj = AlgebraElement::monomial(&bd.framing, &bd.q1, tj.clone(), bd.q1.one())?;
        let inv_tj = AlgebraElement::monomial(
            &bd.framing,
            &bd.q1,
            tj.iter().map(|x| -x).collect(),
            bd.q1.one(),
        )?;
        let f = AlgebraElement::monomial(
            &bd.framing,
            &bd.q1,
            b.exp.iter().map(|x| x * p as i64).collect(),
            bd.q1.one(),
        )?;
        let v = bd.class(&bd.times_form(&f.mul(&inv_tj), &bd.boundary(&phi_tj)?)?, p);
        for (row, &k) in integral_rows.iter().enumerate() {
            images.set(row, col, v[k].clone());
        }
    }
    let square = images.rows() == images.cols();
    let flat = images.flatten(&bd.q1);
    let snf = smith_normal_form(bd.q1.base(), &flat, false, false);
    let invertible =
        square && snf.rank == flat.rows() && snf.diag.iter().all(|x| bd.q1.base().is_unit(x));
    r.checks
        .push(Check::new("omega1_to_h1_isomorphism", invertible));

    let h = bd.m1.complex.cohomology()?;
    r.push_degrees(0, &h, None);
    let expected = truncated_cyclotomic_free(t, integral_count(d, t, w) * d);
    r.checks.push(Check::with_detail(
        "h1_matches_omega1",
        h[1] == expected,
        json!({"expected": expected}),
    ));
    r.verdict_from_checks();
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qderham::Verdict;

    #[test]
    fn window_must_be_divisible() {
        let t = TruncationParams::new(3, 1, 4, 4, 1).unwrap();
        assert_eq!(
            cartier_check(1, &t, 4).unwrap_err(),
            Error::WindowNotDivisibleByP { window: 4, p: 3 }
        );
    }

    #[test]
    fn precision_guard() {
        let t = TruncationParams::new(3, 1, 3, 4, 1).unwrap();
        assert!(matches!(
            cartier_boundary_check(1, &t, 6, 1, 0),
            Err(Error::PrecisionTooLow(_))
        ));
    }

    #[test]
    fn p2_small() {
        let t = TruncationParams::new(2, 2, 2, 4, 1).unwrap();
        let r = cartier_check(1, &t, 4).unwrap();
        assert_eq!(r.verdict, Verdict::Verified, "{:?}", r.checks);
        let r = cartier_boundary_check(1, &t, 4, 10, 7).unwrap();
        assert_eq!(r.verdict, Verdict::Verified, "{:?}", r.checks);
    }

    #[test]
    fn divide_exact_works() {
        let z = ZMod::new(3, 1).unwrap();
        // (t^2 + 3t + 3)(t + 1) = t^3 + 4t^2 + 6t + 3 ≡ t^3 + t^2 mod 3
        let phi = vec![0, 0, 1];
        assert_eq!(divide_exact(&z, &[0, 0, 1, 1], &phi).unwrap(), vec![1, 1]);
        assert!(divide_exact(&z, &[1, 0, 1, 1], &phi).is_err());
    }
}
