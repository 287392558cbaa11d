//! Framed polynomial and Laurent algebras over a q-algebra, with the
//! automorphisms `γ_i`, the Jackson derivatives `∇_{q,i}`, the Frobenius
//! lift `φ_p` and q-differential forms.
//!
//! Elements are stored in the coordinates `x_i`; the framing coordinate is
//! `T_i = x_i + c_i` for a fixed integer shift `c_i`, and `γ_i` sends `T_i`
//! to `q T_i`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::homalg::{insert_index, wedge_sign};
use crate::qarith::{
    binomial, q_integer_laurent, CoeffRing, Integers, QAlgebra, QSeries, Ring, SeriesRing, Zq,
};

pub mod coeffs;

pub use coeffs::{frobenius_coeffs, gamma_coeffs, nabla_coeffs};

/// Exponents of a monomial `x_1^{e_1} ... x_d^{e_d}`.
pub type ExponentVector = Vec<i64>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VarKind {
    Poly,
    Laurent,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct VarSpec {
    pub kind: VarKind,
    #[serde(default)]
    pub shift: i64,
}

/// Coordinates `T_i = x_i + c_i` on `Z[x_1, ...]` or `Z[x_1^{±1}, ...]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawFraming", into = "RawFraming")]
pub struct Framing {
    vars: Vec<VarSpec>,
}

#[derive(Serialize, Deserialize)]
struct RawFraming {
    d: usize,
    vars: Vec<VarSpec>,
}

impl TryFrom<RawFraming> for Framing {
    type Error = Error;
    fn try_from(r: RawFraming) -> Result<Self> {
        if r.vars.len() != r.d {
            return Err(Error::Parse(format!(
                "framing declares d = {} but lists {} variables",
                r.d,
                r.vars.len()
            )));
        }
        Framing::new(r.vars)
    }
}

impl From<Framing> for RawFraming {
    fn from(f: Framing) -> Self {
        RawFraming {
            d: f.vars.len(),
            vars: f.vars,
        }
    }
}

impl Framing {
    pub fn new(vars: Vec<VarSpec>) -> Result<Self> {
        if vars.is_empty() {
            return Err(Error::InvalidArgument(
                "a framing needs at least one variable".into(),
            ));
        }
        if vars
            .iter()
            .any(|v| v.kind == VarKind::Laurent && v.shift != 0)
        {
            return Err(Error::IncompatibleFramings(
                "Laurent variables cannot be shifted".into(),
            ));
        }
        Ok(Framing { vars })
    }

    /// `Z[T_1, ..., T_d]` with `T_i = x_i`.
    pub fn polynomial(d: usize) -> Self {
        Self::shifted(&vec![0; d])
    }

    /// `Z[x_1, ..., x_d]` framed by `T_i = x_i + c_i`.
    pub fn shifted(shifts: &[i64]) -> Self {
        Self::new(
            shifts
                .iter()
                .map(|&c| VarSpec {
                    kind: VarKind::Poly,
                    shift: c,
                })
                .collect(),
        )
        .expect("polynomial framing")
    }

    /// `Z[T_1^{±1}, ..., T_d^{±1}]`.
    pub fn laurent(d: usize) -> Self {
        Self::new(vec![
            VarSpec {
                kind: VarKind::Laurent,
                shift: 0
            };
            d
        ])
        .expect("laurent framing")
    }

    pub fn d(&self) -> usize {
        self.vars.len()
    }
    pub fn vars(&self) -> &[VarSpec] {
        &self.vars
    }
    pub fn kind(&self, i: usize) -> VarKind {
        self.vars[i].kind
    }
    pub fn shift(&self, i: usize) -> i64 {
        self.vars[i].shift
    }
    pub fn is_laurent(&self) -> bool {
        self.vars.iter().all(|v| v.kind == VarKind::Laurent)
    }

    /// Whether two framings describe the same underlying ring.
    pub fn same_ring(&self, o: &Framing) -> bool {
        self.d() == o.d() && self.vars.iter().zip(&o.vars).all(|(a, b)| a.kind == b.kind)
    }

    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("framing serializes")
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        serde_json::from_value(v.clone()).map_err(|e| Error::Parse(format!("framing: {e}")))
    }

    fn check_exponents(&self, e: &[i64]) -> Result<()> {
        if e.len() != self.d() {
            return Err(Error::InvalidArgument(format!(
                "exponent vector of length {} for d = {}",
                e.len(),
                self.d()
            )));
        }
        for (i, &x) in e.iter().enumerate() {
            if x < 0 && self.kind(i) == VarKind::Poly {
                return Err(Error::InvalidArgument(format!(
                    "negative exponent on polynomial variable {i}"
                )));
            }
        }
        Ok(())
    }
}

/// A finite sum `Σ a_e x^e` with coefficients in a q-algebra `C`.
#[derive(Clone, Debug, PartialEq)]
pub struct AlgebraElement<C: QAlgebra> {
    framing: Framing,
    ring: C,
    terms: BTreeMap<ExponentVector, C::Elem>,
}

impl<C: QAlgebra> AlgebraElement<C> {
    pub fn zero(framing: &Framing, ring: &C) -> Self {
        AlgebraElement {
            framing: framing.clone(),
            ring: ring.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(framing: &Framing, ring: &C, c: C::Elem) -> Self {
        Self::monomial(framing, ring, vec![0; framing.d()], c).expect("constant monomial")
    }

    pub fn one(framing: &Framing, ring: &C) -> Self {
        Self::constant(framing, ring, ring.one())
    }

    pub fn monomial(framing: &Framing, ring: &C, exp: ExponentVector, c: C::Elem) -> Result<Self> {
        framing.check_exponents(&exp)?;
        let mut out = Self::zero(framing, ring);
        out.add_term(exp, c);
        Ok(out)
    }

    /// The coordinate function `x_i`.
    pub fn x(framing: &Framing, ring: &C, i: usize) -> Self {
        let mut e = vec![0; framing.d()];
        e[i] = 1;
        Self::monomial(framing, ring, e, ring.one()).expect("coordinate")
    }

    /// The framing coordinate `T_i = x_i + c_i`.
    pub fn coordinate(framing: &Framing, ring: &C, i: usize) -> Self {
        let c = ring.from_i64(framing.shift(i));
        Self::x(framing, ring, i).add(&Self::constant(framing, ring, c))
    }

    /// Builds from `(exponent, coefficient)` pairs, summing repeats.
    pub fn from_terms(
        framing: &Framing,
        ring: &C,
        terms: impl IntoIterator<Item = (ExponentVector, C::Elem)>,
    ) -> Result<Self> {
        let mut out = Self::zero(framing, ring);
        for (e, c) in terms {
            framing.check_exponents(&e)?;
            out.add_term(e, c);
        }
        Ok(out)
    }

    pub fn framing(&self) -> &Framing {
        &self.framing
    }
    pub fn ring(&self) -> &C {
        &self.ring
    }
    pub fn terms(&self) -> &BTreeMap<ExponentVector, C::Elem> {
        &self.terms
    }
    pub fn coeff(&self, e: &[i64]) -> C::Elem {
        self.terms
            .get(e)
            .cloned()
            .unwrap_or_else(|| self.ring.zero())
    }
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_term(&mut self, e: ExponentVector, c: C::Elem) {
        if self.ring.is_zero(&c) {
            return;
        }
        match self.terms.get_mut(&e) {
            Some(x) => {
                let s = self.ring.add(x, &c);
                if self.ring.is_zero(&s) {
                    self.terms.remove(&e);
                } else {
                    *x = s;
                }
            }
            None => {
                self.terms.insert(e, c);
            }
        }
    }

    fn check_same(&self, o: &Self) {
        assert_eq!(
            self.framing, o.framing,
            "elements of different framed algebras"
        );
    }

    pub fn add(&self, o: &Self) -> Self {
        self.check_same(o);
        let mut out = self.clone();
        for (e, c) in &o.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        self.map_coeffs(|c| self.ring.neg(c))
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        self.check_same(o);
        let mut out = Self::zero(&self.framing, &self.ring);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &o.terms {
                let e = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, self.ring.mul(ca, cb));
            }
        }
        out
    }

    pub fn scale(&self, s: &C::Elem) -> Self {
        self.map_coeffs(|c| self.ring.mul(s, c))
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::one(&self.framing, &self.ring), |acc, _| acc.mul(self))
    }

    fn map_coeffs(&self, f: impl Fn(&C::Elem) -> C::Elem) -> Self {
        let mut out = Self::zero(&self.framing, &self.ring);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), f(c));
        }
        out
    }

    /// Applies `x_i^e ↦ Σ_j coeffs(e)[j] x_i^{j + offset(e)}` to every term.
    fn substitute_var(&self, i: usize, image: impl Fn(i64) -> Vec<(i64, Zq)>) -> Self {
        let mut cache: BTreeMap<i64, Vec<(i64, C::Elem)>> = BTreeMap::new();
        let mut out = Self::zero(&self.framing, &self.ring);
        for (e, c) in &self.terms {
            let img = cache.entry(e[i]).or_insert_with(|| {
                image(e[i])
                    .into_iter()
                    .map(|(k, z)| (k, self.ring.from_zq(&z)))
                    .collect()
            });
            for (k, z) in img.iter() {
                let mut f = e.clone();
                f[i] = *k;
                out.add_term(f, self.ring.mul(c, z));
            }
        }
        out
    }

    /// `γ_i`: `T_i ↦ q T_i`, i.e. `x_i ↦ q x_i + (q - 1) c_i`.
    pub fn gamma(&self, i: usize) -> Self {
        let (kind, c) = (self.framing.kind(i), self.framing.shift(i));
        self.substitute_var(i, |e| gamma_coeffs(kind, c, e, 1))
    }

    /// `γ_i^{-1}`: `T_i ↦ q^{-1} T_i`.
    pub fn gamma_inv(&self, i: usize) -> Self {
        let (kind, c) = (self.framing.kind(i), self.framing.shift(i));
        self.substitute_var(i, |e| gamma_coeffs(kind, c, e, -1))
    }

    /// `∇_{q,i} f = (γ_i f - f) / (q T_i - T_i)`, from the closed form on
    /// monomials.
    pub fn nabla(&self, i: usize) -> Self {
        let (kind, c) = (self.framing.kind(i), self.framing.shift(i));
        self.substitute_var(i, |e| nabla_coeffs(kind, c, e))
    }

    /// `T_i ∇_{q,i} f`, the coefficient of `dlog T_i`.
    pub fn t_nabla(&self, i: usize) -> Self {
        Self::coordinate(&self.framing, &self.ring, i).mul(&self.nabla(i))
    }

    /// The classical partial derivative `∂f/∂T_i = ∂f/∂x_i`.
    pub fn derivative(&self, i: usize) -> Self {
        let mut out = Self::zero(&self.framing, &self.ring);
        for (e, c) in &self.terms {
            if e[i] == 0 {
                continue;
            }
            let mut f = e.clone();
            f[i] -= 1;
            out.add_term(f, self.ring.mul(&self.ring.from_i64(e[i]), c));
        }
        out
    }

    /// `φ_p`: `T_i ↦ T_i^p` on every variable and `q ↦ q^p` on coefficients.
    pub fn frobenius(&self, p: u64) -> Result<Self> {
        let mut f = self.map_coeffs_result(|c| self.ring.sigma(c, p as i64))?;
        for i in 0..self.framing.d() {
            let (kind, c) = (self.framing.kind(i), self.framing.shift(i));
            f = f.substitute_var(i, |e| frobenius_coeffs(kind, c, e, p));
        }
        Ok(f)
    }

    /// `q ↦ q^a` on coefficients.
    pub fn sigma(&self, a: i64) -> Result<Self> {
        self.map_coeffs_result(|c| self.ring.sigma(c, a))
    }

    fn map_coeffs_result(&self, f: impl Fn(&C::Elem) -> Result<C::Elem>) -> Result<Self> {
        let mut out = Self::zero(&self.framing, &self.ring);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), f(c)?);
        }
        Ok(out)
    }

    /// `{"exp": [...], "coeff": ...}` list.
    pub fn to_json(&self) -> Value {
        Value::Array(
            self.terms
                .iter()
                .map(|(e, c)| json!({"exp": e, "coeff": self.ring.elem_json(c)}))
                .collect(),
        )
    }
}

impl<R: CoeffRing> AlgebraElement<SeriesRing<R>> {
    /// `∇_{q,i}` computed directly as the difference quotient: `γ_i f - f` is
    /// formed at one extra order of `q - 1`, divided by `q - 1`, then divided
    /// by `x_i + c_i` exactly.
    pub fn nabla_quotient(&self, i: usize) -> Result<Self> {
        let s = &self.ring;
        let n = s.precision();
        let big = SeriesRing::new(s.base().clone(), n + 1)?;
        let lift =
            |x: &QSeries<R>| QSeries::from_t_coeffs(s.base().clone(), n + 1, x.coeffs().to_vec());
        let f = AlgebraElement::from_terms(
            &self.framing,
            &big,
            self.terms.iter().map(|(e, c)| (e.clone(), lift(c))),
        )?;
        let diff = f.gamma(i).sub(&f);
        let mut divided: BTreeMap<ExponentVector, QSeries<R>> = BTreeMap::new();
        for (e, c) in diff.terms {
            divided.insert(e, c.div_t()?);
        }
        let quotient = AlgebraElement::from_terms(&self.framing, s, divided)?;
        quotient.divide_by_coordinate(i)
    }

    /// Exact division by `T_i = x_i + c_i`.
    pub fn divide_by_coordinate(&self, i: usize) -> Result<Self> {
        let s = &self.ring;
        let c = self.framing.shift(i);
        if self.framing.kind(i) == VarKind::Laurent {
            let shifted = self.terms.iter().map(|(e, v)| {
                let mut f = e.clone();
                f[i] -= 1;
                (f, v.clone())
            });
            return Self::from_terms(&self.framing, s, shifted);
        }
        // Group by the other exponents, divide each univariate polynomial in
        // x_i by (x_i + c) synthetically.
        let mut groups: BTreeMap<ExponentVector, BTreeMap<i64, QSeries<R>>> = BTreeMap::new();
        for (e, v) in &self.terms {
            let mut key = e.clone();
            key[i] = 0;
            groups.entry(key).or_default().insert(e[i], v.clone());
        }
        let cc = s.from_i64(c);
        let mut out = Self::zero(&self.framing, s);
        for (key, poly) in groups {
            let deg = *poly.keys().next_back().expect("non-empty group");
            let mut carry = s.zero();
            for k in (1..=deg).rev() {
                let a = poly.get(&k).cloned().unwrap_or_else(|| s.zero());
                carry = s.sub(&a, &s.mul(&cc, &carry));
                let mut e = key.clone();
                e[i] = k - 1;
                out.add_term(e, carry.clone());
            }
            let a0 = poly.get(&0).cloned().unwrap_or_else(|| s.zero());
            let rem = s.sub(&a0, &s.mul(&cc, &carry));
            if !s.is_zero(&rem) {
                return Err(Error::DivisionNotExact(format!(
                    "not divisible by x_{i} + {c}"
                )));
            }
        }
        Ok(out)
    }

    /// Reduction modulo `q - 1`: the classical element over the base ring.
    pub fn at_q_equals_one(&self) -> BTreeMap<ExponentVector, R::Elem> {
        self.terms
            .iter()
            .map(|(e, c)| (e.clone(), c.eval_at_one()))
            .filter(|(_, c)| !self.ring.base().is_zero(c))
            .collect()
    }

    pub fn from_json(framing: &Framing, ring: &SeriesRing<R>, v: &Value) -> Result<Self> {
        let arr = v
            .as_array()
            .ok_or_else(|| Error::Parse("element must be a list of terms".into()))?;
        let mut terms = Vec::new();
        for t in arr {
            let exp: ExponentVector =
                serde_json::from_value(t.get("exp").cloned().unwrap_or(Value::Null))
                    .map_err(|e| Error::Parse(format!("exponent: {e}")))?;
            let raw = t.get("coeff").and_then(Value::as_array).ok_or_else(|| {
                Error::Parse("coefficient must be a list of (q-1)-adic digits".into())
            })?;
            if raw.len() != ring.precision() {
                return Err(Error::Parse(
                    "coefficient precision differs from the ring".into(),
                ));
            }
            let digits = raw
                .iter()
                .map(|d| match d {
                    Value::String(s) => ring.base().parse_elem(s),
                    Value::Number(n) => ring.base().parse_elem(&n.to_string()),
                    _ => Err(Error::Parse(
                        "coefficient digit must be a string or integer".into(),
                    )),
                })
                .collect::<Result<Vec<_>>>()?;
            let c = QSeries::from_t_coeffs(ring.base().clone(), ring.precision(), digits);
            terms.push((exp, c));
        }
        Self::from_terms(framing, ring, terms)
    }
}

/// A q-differential form `Σ_J f_J dT_J` with `J` strictly increasing.
#[derive(Clone, Debug, PartialEq)]
pub struct DifferentialForm<C: QAlgebra> {
    framing: Framing,
    ring: C,
    degree: usize,
    comps: BTreeMap<Vec<usize>, AlgebraElement<C>>,
}

impl<C: QAlgebra> DifferentialForm<C> {
    pub fn zero(framing: &Framing, ring: &C, degree: usize) -> Self {
        DifferentialForm {
            framing: framing.clone(),
            ring: ring.clone(),
            degree,
            comps: BTreeMap::new(),
        }
    }

    /// `f` as a 0-form.
    pub fn function(f: &AlgebraElement<C>) -> Self {
        let mut w = Self::zero(&f.framing, &f.ring, 0);
        w.add_component(Vec::new(), f.clone());
        w
    }

    /// `f dT_J`.
    pub fn term(f: &AlgebraElement<C>, set: Vec<usize>) -> Result<Self> {
        if set.windows(2).any(|w| w[0] >= w[1]) || set.iter().any(|&j| j >= f.framing.d()) {
            return Err(Error::InvalidArgument(format!(
                "index set {set:?} is not strictly increasing in range"
            )));
        }
        let mut w = Self::zero(&f.framing, &f.ring, set.len());
        w.add_component(set, f.clone());
        Ok(w)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }
    pub fn components(&self) -> &BTreeMap<Vec<usize>, AlgebraElement<C>> {
        &self.comps
    }
    pub fn component(&self, set: &[usize]) -> AlgebraElement<C> {
        self.comps
            .get(set)
            .cloned()
            .unwrap_or_else(|| AlgebraElement::zero(&self.framing, &self.ring))
    }
    pub fn is_zero(&self) -> bool {
        self.comps.is_empty()
    }

    fn add_component(&mut self, set: Vec<usize>, f: AlgebraElement<C>) {
        let sum = match self.comps.remove(&set) {
            Some(g) => g.add(&f),
            None => f,
        };
        if !sum.is_zero() {
            self.comps.insert(set, sum);
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        assert_eq!(self.degree, o.degree, "forms of different degree");
        let mut out = self.clone();
        for (s, f) in &o.comps {
            out.add_component(s.clone(), f.clone());
        }
        out
    }

    /// `d_q(f dT_J) = Σ_{j ∉ J} ∇_{q,j}(f) dT_j ∧ dT_J`.
    pub fn d_q(&self) -> Self {
        let d = self.framing.d();
        let mut out = Self::zero(&self.framing, &self.ring, self.degree + 1);
        for (set, f) in &self.comps {
            for j in (0..d).filter(|j| !set.contains(j)) {
                let mut g = f.nabla(j);
                if wedge_sign(set, j) < 0 {
                    g = g.neg();
                }
                out.add_component(insert_index(set, j), g);
            }
        }
        out
    }

    /// Components in the `dlog T_J` basis: `f dT_J = (f T_J) dlog T_J`.
    /// Only defined when every index involved is a Laurent variable.
    pub fn dlog_components(&self) -> Result<BTreeMap<Vec<usize>, AlgebraElement<C>>> {
        let mut out = BTreeMap::new();
        for (set, f) in &self.comps {
            let mut g = f.clone();
            for &j in set {
                if self.framing.kind(j) != VarKind::Laurent {
                    return Err(Error::InvalidArgument(format!("variable {j} has no dlog")));
                }
                g = g.mul(&AlgebraElement::x(&self.framing, &self.ring, j));
            }
            out.insert(set.clone(), g);
        }
        Ok(out)
    }
}

/// `[n]_q` as an exact element of `Z[q^{±1}]`.
pub fn zq_int(n: i64) -> Zq {
    q_integer_laurent(Integers, n)
}

/// Exact integer binomial as an element of `Z[q^{±1}]`.
pub(crate) fn zq_const(n: &num_bigint::BigInt) -> Zq {
    Zq::monomial(Integers, n.clone(), 0)
}

pub(crate) fn zq_binomial(n: i64, k: u64) -> Zq {
    zq_const(&binomial(n, k))
}

#[cfg(test)]
mod tests;
