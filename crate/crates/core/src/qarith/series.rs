//! Truncated power series in `t = q - 1`: the ring `S = R[q]/((q-1)^N)`.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;

use super::laurent::Zq;
use super::poly::{add_coeffs, format_coeffs, mul_coeffs, QPolynomial};
use super::ring::{binomial, CoeffRing, Rationals, Ring};
use super::{FiniteFree, QAlgebra};
use crate::error::{Error, Result};

/// A power series `sum c_k (q-1)^k` known modulo `(q-1)^N`.
/// The coefficient vector always has length exactly `N`.
#[derive(Clone, PartialEq, Debug)]
pub struct QSeries<R: Ring> {
    ring: R,
    coeffs: Vec<R::Elem>,
}

impl<R: Ring> QSeries<R> {
    /// Builds a series from `t`-coefficients, truncating or zero-padding to
    /// precision `n`.
    pub fn from_t_coeffs(ring: R, n: usize, mut coeffs: Vec<R::Elem>) -> Self {
        coeffs.resize(n, ring.zero());
        QSeries { ring, coeffs }
    }

    pub fn zero(ring: R, n: usize) -> Self {
        let z = ring.zero();
        QSeries {
            ring,
            coeffs: vec![z; n],
        }
    }

    pub fn one(ring: R, n: usize) -> Self {
        Self::constant(ring.clone(), n, ring.one())
    }

    pub fn constant(ring: R, n: usize, c: R::Elem) -> Self {
        Self::from_t_coeffs(ring, n, vec![c])
    }

    pub fn from_i64(ring: R, n: usize, c: i64) -> Self {
        let c = ring.from_i64(c);
        Self::constant(ring, n, c)
    }

    /// The element `t = q - 1`.
    pub fn t(ring: R, n: usize) -> Self {
        let v = vec![ring.zero(), ring.one()];
        Self::from_t_coeffs(ring, n, v)
    }

    /// `q^a = (1 + t)^a` for any integer `a`.
    pub fn q_pow(ring: R, n: usize, a: i64) -> Self {
        let v = (0..n as u64)
            .map(|k| ring.from_bigint(&binomial(a, k)))
            .collect();
        QSeries { ring, coeffs: v }
    }

    pub fn q(ring: R, n: usize) -> Self {
        Self::q_pow(ring, n, 1)
    }

    /// `(q - 1)`-expansion of an exact polynomial in `q`.
    pub fn from_poly(p: &QPolynomial<R>, n: usize) -> Self {
        Self::from_t_coeffs(p.ring().clone(), n, p.to_t_coeffs())
    }

    /// Image of an exact Laurent polynomial over `Z`.
    pub fn from_zq(ring: R, n: usize, f: &Zq) -> Self {
        let mut acc = Self::zero(ring.clone(), n);
        for (e, c) in f.terms() {
            let c = ring.from_bigint(c);
            acc = acc.add(&Self::q_pow(ring.clone(), n, e).scale(&c));
        }
        acc
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }
    pub fn precision(&self) -> usize {
        self.coeffs.len()
    }
    /// Coefficients of `1, t, t^2, ...`.
    pub fn coeffs(&self) -> &[R::Elem] {
        &self.coeffs
    }
    pub fn coeff(&self, k: usize) -> &R::Elem {
        &self.coeffs[k]
    }
    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| self.ring.is_zero(c))
    }
    /// Value at `q = 1`.
    pub fn eval_at_one(&self) -> R::Elem {
        self.coeffs
            .first()
            .cloned()
            .unwrap_or_else(|| self.ring.zero())
    }
    /// Largest `k` with `t^k | self`; the precision for zero.
    pub fn t_valuation(&self) -> usize {
        self.coeffs
            .iter()
            .position(|c| !self.ring.is_zero(c))
            .unwrap_or(self.coeffs.len())
    }

    fn same(&self, o: &Self) {
        assert_eq!(self.precision(), o.precision(), "precision mismatch");
    }

    pub fn add(&self, o: &Self) -> Self {
        self.same(o);
        QSeries {
            ring: self.ring.clone(),
            coeffs: add_coeffs(&self.ring, &self.coeffs, &o.coeffs),
        }
    }
    pub fn neg(&self) -> Self {
        let c = self.coeffs.iter().map(|x| self.ring.neg(x)).collect();
        QSeries {
            ring: self.ring.clone(),
            coeffs: c,
        }
    }
    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }
    pub fn mul(&self, o: &Self) -> Self {
        self.same(o);
        let n = self.precision();
        Self::from_t_coeffs(
            self.ring.clone(),
            n,
            mul_coeffs(&self.ring, &self.coeffs, &o.coeffs, n),
        )
    }
    pub fn scale(&self, c: &R::Elem) -> Self {
        let v = self.coeffs.iter().map(|x| self.ring.mul(x, c)).collect();
        QSeries {
            ring: self.ring.clone(),
            coeffs: v,
        }
    }
    pub fn pow(&self, e: u64) -> Self {
        let mut acc = Self::one(self.ring.clone(), self.precision());
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse; the value at `q = 1` must be a unit.
    pub fn invert(&self) -> Result<Self> {
        let r = &self.ring;
        let c0 = self.eval_at_one();
        let inv0 = r.inv(&c0).ok_or_else(|| {
            Error::NotInvertible(format!(
                "constant term {} is not a unit in {}",
                r.format(&c0),
                r.name()
            ))
        })?;
        let n = self.precision();
        let mut out = vec![r.zero(); n];
        if n == 0 {
            return Ok(self.clone());
        }
        out[0] = inv0.clone();
        for k in 1..n {
            let mut s = r.zero();
            for j in 1..=k {
                s = r.add(&s, &r.mul(&self.coeffs[j], &out[k - j]));
            }
            out[k] = r.neg(&r.mul(&s, &inv0));
        }
        Ok(QSeries {
            ring: r.clone(),
            coeffs: out,
        })
    }

    /// `t * self`, dropping the coefficient that falls off.
    pub fn mul_t(&self) -> Self {
        let mut v = vec![self.ring.zero()];
        v.extend(
            self.coeffs
                .iter()
                .take(self.precision().saturating_sub(1))
                .cloned(),
        );
        QSeries {
            ring: self.ring.clone(),
            coeffs: v,
        }
    }

    /// Exact division by `t`, losing one order of precision.
    pub fn div_t(&self) -> Result<Self> {
        if !self.coeffs.is_empty() && !self.ring.is_zero(&self.coeffs[0]) {
            return Err(Error::DivisionNotExact(
                "series is not divisible by q - 1".into(),
            ));
        }
        Ok(QSeries {
            ring: self.ring.clone(),
            coeffs: self.coeffs.iter().skip(1).cloned().collect(),
        })
    }

    /// Truncates to a lower precision.
    pub fn truncate(&self, n: usize) -> Self {
        assert!(n <= self.precision());
        QSeries {
            ring: self.ring.clone(),
            coeffs: self.coeffs[..n].to_vec(),
        }
    }

    /// The ring endomorphism `q -> q^a`, `a != 0`.
    pub fn substitute_q_power(&self, a: i64) -> Result<Self> {
        if a == 0 {
            return Err(Error::InvalidArgument("q -> q^0 is not allowed".into()));
        }
        let n = self.precision();
        let one = Self::one(self.ring.clone(), n);
        let u = Self::q_pow(self.ring.clone(), n, a).sub(&one);
        let mut acc = Self::zero(self.ring.clone(), n);
        for c in self.coeffs.iter().rev() {
            acc = acc
                .mul(&u)
                .add(&Self::constant(self.ring.clone(), n, c.clone()));
        }
        Ok(acc)
    }

    pub fn map_ring<S: Ring>(&self, target: S, f: impl Fn(&R::Elem) -> S::Elem) -> QSeries<S> {
        let c = self.coeffs.iter().map(f).collect();
        QSeries {
            ring: target,
            coeffs: c,
        }
    }
}

impl<R: CoeffRing> QSeries<R> {
    pub fn to_json(&self) -> serde_json::Value {
        super::json::coeffs_to_json(&self.ring, &self.coeffs)
    }
}

impl QSeries<Rationals> {
    /// `exp(self)` for a series without constant term.
    pub fn exp(&self) -> Result<Self> {
        if !self.coeffs.is_empty() && !self.coeffs[0].eq(&Rationals.zero()) {
            return Err(Error::InvalidArgument(
                "exp needs a series in (q - 1)".into(),
            ));
        }
        let n = self.precision();
        let mut acc = Self::one(Rationals, n);
        let mut term = Self::one(Rationals, n);
        for k in 1..n {
            term = term
                .mul(self)
                .scale(&BigRational::new(1.into(), BigInt::from(k)));
            acc = acc.add(&term);
        }
        Ok(acc)
    }
}

/// `log(q) = sum_{n >= 1} (-1)^(n+1) (q-1)^n / n` to precision `n`.
pub fn log_q(n: usize) -> QSeries<Rationals> {
    let v = (0..n)
        .map(|k| {
            if k == 0 {
                BigRational::from_integer(0.into())
            } else {
                let sign = if k % 2 == 1 { 1 } else { -1 };
                BigRational::new(sign.into(), BigInt::from(k))
            }
        })
        .collect();
    QSeries::from_t_coeffs(Rationals, n, v)
}

/// `log(q)` over an arbitrary coefficient ring: only the rationals qualify.
pub fn log_q_in<R: CoeffRing>(ring: &R, n: usize) -> Result<QSeries<Rationals>> {
    match ring.spec() {
        super::CoeffRingSpec::Rat => Ok(log_q(n)),
        _ => Err(Error::UnsupportedRing(format!(
            "log(q) needs rational coefficients, not {}",
            ring.name()
        ))),
    }
}

impl<R: Ring> fmt::Display for QSeries<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} + O(t^{})",
            format_coeffs(&self.ring, &self.coeffs, "t", 0),
            self.precision()
        )
    }
}

/// The truncated ring `S = R[q]/((q-1)^N)` as a ring context.
#[derive(Clone, Debug, PartialEq)]
pub struct SeriesRing<R: Ring> {
    base: R,
    n: usize,
}

impl<R: Ring> SeriesRing<R> {
    pub fn new(base: R, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument(
                "precision N must be at least 1".into(),
            ));
        }
        Ok(SeriesRing { base, n })
    }
    pub fn base(&self) -> &R {
        &self.base
    }
    pub fn precision(&self) -> usize {
        self.n
    }
    pub fn t(&self) -> QSeries<R> {
        QSeries::t(self.base.clone(), self.n)
    }
    pub fn t_pow(&self, k: usize) -> QSeries<R> {
        let mut v = vec![self.base.zero(); k];
        v.push(self.base.one());
        QSeries::from_t_coeffs(self.base.clone(), self.n, v)
    }
}

impl<R: Ring> Ring for SeriesRing<R> {
    type Elem = QSeries<R>;

    fn zero(&self) -> Self::Elem {
        QSeries::zero(self.base.clone(), self.n)
    }
    fn one(&self) -> Self::Elem {
        QSeries::one(self.base.clone(), self.n)
    }
    fn from_bigint(&self, n: &BigInt) -> Self::Elem {
        QSeries::constant(self.base.clone(), self.n, self.base.from_bigint(n))
    }
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        a.add(b)
    }
    fn neg(&self, a: &Self::Elem) -> Self::Elem {
        a.neg()
    }
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        a.mul(b)
    }
    fn is_zero(&self, a: &Self::Elem) -> bool {
        a.is_zero()
    }
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem> {
        a.invert().ok()
    }
    fn format(&self, a: &Self::Elem) -> String {
        format_coeffs(&self.base, &a.coeffs, "t", 0)
    }
    fn name(&self) -> String {
        format!("{}[q]/(q-1)^{}", self.base.name(), self.n)
    }
}

impl<R: CoeffRing> QAlgebra for SeriesRing<R> {
    fn q_pow(&self, e: i64) -> Self::Elem {
        QSeries::q_pow(self.base.clone(), self.n, e)
    }
    fn from_zq(&self, f: &Zq) -> Self::Elem {
        QSeries::from_zq(self.base.clone(), self.n, f)
    }
    fn sigma(&self, x: &Self::Elem, a: i64) -> Result<Self::Elem> {
        x.substitute_q_power(a)
    }
    fn elem_json(&self, x: &Self::Elem) -> serde_json::Value {
        serde_json::Value::Array(x.coeffs.iter().map(|c| self.base.elem_to_json(c)).collect())
    }
}

impl<R: CoeffRing> FiniteFree for SeriesRing<R> {
    type Base = R;

    fn base_ring(&self) -> &R {
        &self.base
    }
    fn rank(&self) -> usize {
        self.n
    }
    fn coords(&self, x: &Self::Elem) -> Vec<R::Elem> {
        x.coeffs.clone()
    }
    fn from_coords(&self, c: &[R::Elem]) -> Self::Elem {
        QSeries::from_t_coeffs(self.base.clone(), self.n, c.to_vec())
    }
    fn mult_matrix(&self, x: &Self::Elem) -> Vec<R::Elem> {
        // Column j holds the coordinates of x * t^j: a lower-triangular
        // Toeplitz matrix.
        let n = self.n;
        let mut m = vec![self.base.zero(); n * n];
        for j in 0..n {
            for i in j..n {
                m[i * n + j] = x.coeffs[i - j].clone();
            }
        }
        m
    }
}
