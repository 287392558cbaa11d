//! Exact polynomials in `q`.

use std::fmt;

use num_bigint::BigInt;

use super::ring::{CoeffRing, EuclideanRing, Integers, Rationals, Ring, ZMod};
use crate::error::{Error, Result};

pub(crate) fn trim<R: Ring>(ring: &R, v: &mut Vec<R::Elem>) {
    while v.last().is_some_and(|c| ring.is_zero(c)) {
        v.pop();
    }
}

pub(crate) fn add_coeffs<R: Ring>(ring: &R, a: &[R::Elem], b: &[R::Elem]) -> Vec<R::Elem> {
    let n = a.len().max(b.len());
    (0..n)
        .map(|i| match (a.get(i), b.get(i)) {
            (Some(x), Some(y)) => ring.add(x, y),
            (Some(x), None) | (None, Some(x)) => x.clone(),
            (None, None) => unreachable!(),
        })
        .collect()
}

/// Convolution, keeping at most `limit` coefficients.
pub(crate) fn mul_coeffs<R: Ring>(
    ring: &R,
    a: &[R::Elem],
    b: &[R::Elem],
    limit: usize,
) -> Vec<R::Elem> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let n = (a.len() + b.len() - 1).min(limit);
    let mut out = vec![ring.zero(); n];
    for (i, x) in a.iter().enumerate() {
        if i >= n || ring.is_zero(x) {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(n - i) {
            let prod = ring.mul(x, y);
            out[i + j] = ring.add(&out[i + j], &prod);
        }
    }
    out
}

/// Writes `sum c_k x^k` with `x` rendered by `var`.
pub(crate) fn format_coeffs<R: Ring>(ring: &R, c: &[R::Elem], var: &str, shift: i64) -> String {
    let mut parts = Vec::new();
    for (k, x) in c.iter().enumerate() {
        if ring.is_zero(x) {
            continue;
        }
        let e = k as i64 + shift;
        let coeff = ring.format(x);
        let mono = match e {
            0 => String::new(),
            1 => var.to_string(),
            _ => format!("{var}^{e}"),
        };
        parts.push(if mono.is_empty() {
            coeff
        } else if coeff == "1" {
            mono
        } else if coeff == "-1" {
            format!("-{mono}")
        } else {
            format!("{coeff}*{mono}")
        });
    }
    if parts.is_empty() {
        return "0".into();
    }
    parts.join(" + ").replace("+ -", "- ")
}

/// A polynomial in `q` with coefficients in `R`, lowest degree first,
/// trailing zeros trimmed.
#[derive(Clone, PartialEq, Debug)]
pub struct QPolynomial<R: Ring> {
    ring: R,
    coeffs: Vec<R::Elem>,
}

impl<R: Ring> QPolynomial<R> {
    pub fn new(ring: R, mut coeffs: Vec<R::Elem>) -> Self {
        trim(&ring, &mut coeffs);
        QPolynomial { ring, coeffs }
    }

    pub fn from_i64s(ring: R, c: &[i64]) -> Self {
        let coeffs = c.iter().map(|&x| ring.from_i64(x)).collect();
        Self::new(ring, coeffs)
    }

    pub fn zero(ring: R) -> Self {
        QPolynomial {
            ring,
            coeffs: Vec::new(),
        }
    }

    pub fn one(ring: R) -> Self {
        let one = ring.one();
        Self::new(ring, vec![one])
    }

    pub fn constant(ring: R, c: R::Elem) -> Self {
        Self::new(ring, vec![c])
    }

    /// `c * q^k`.
    pub fn monomial(ring: R, c: R::Elem, k: usize) -> Self {
        let mut v = vec![ring.zero(); k];
        v.push(c);
        Self::new(ring, v)
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }
    pub fn coeffs(&self) -> &[R::Elem] {
        &self.coeffs
    }
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
    /// Degree, with `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }
    pub fn coeff(&self, k: usize) -> R::Elem {
        self.coeffs
            .get(k)
            .cloned()
            .unwrap_or_else(|| self.ring.zero())
    }
    pub fn leading(&self) -> Option<&R::Elem> {
        self.coeffs.last()
    }

    pub fn add(&self, o: &Self) -> Self {
        Self::new(
            self.ring.clone(),
            add_coeffs(&self.ring, &self.coeffs, &o.coeffs),
        )
    }
    pub fn neg(&self) -> Self {
        let c = self.coeffs.iter().map(|x| self.ring.neg(x)).collect();
        Self::new(self.ring.clone(), c)
    }
    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }
    pub fn mul(&self, o: &Self) -> Self {
        Self::new(
            self.ring.clone(),
            mul_coeffs(&self.ring, &self.coeffs, &o.coeffs, usize::MAX),
        )
    }
    pub fn scale(&self, c: &R::Elem) -> Self {
        let v = self.coeffs.iter().map(|x| self.ring.mul(x, c)).collect();
        Self::new(self.ring.clone(), v)
    }
    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(self.ring.clone());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Value at `q = 1`: the sum of the coefficients.
    pub fn eval_at_one(&self) -> R::Elem {
        self.coeffs
            .iter()
            .fold(self.ring.zero(), |acc, c| self.ring.add(&acc, c))
    }

    pub fn eval(&self, x: &R::Elem) -> R::Elem {
        self.coeffs.iter().rev().fold(self.ring.zero(), |acc, c| {
            self.ring.add(&self.ring.mul(&acc, x), c)
        })
    }

    /// The substitution `q -> q^a` for `a >= 1`.
    pub fn substitute_q_power(&self, a: i64) -> Result<Self> {
        if a <= 0 {
            return Err(Error::InvalidArgument(format!(
                "q -> q^{a} does not preserve polynomials in q"
            )));
        }
        let a = a as usize;
        let mut v = vec![self.ring.zero(); self.coeffs.len().saturating_sub(1) * a + 1];
        for (k, c) in self.coeffs.iter().enumerate() {
            v[k * a] = c.clone();
        }
        Ok(Self::new(self.ring.clone(), v))
    }

    /// Rewrites the polynomial in powers of `t = q - 1`.
    pub fn to_t_coeffs(&self) -> Vec<R::Elem> {
        // Horner in q = 1 + t.
        let r = &self.ring;
        let mut acc: Vec<R::Elem> = Vec::new();
        for c in self.coeffs.iter().rev() {
            // acc <- acc * (1 + t) + c
            let mut next = vec![r.zero(); acc.len() + 1];
            for (i, x) in acc.iter().enumerate() {
                next[i] = r.add(&next[i], x);
                next[i + 1] = r.add(&next[i + 1], x);
            }
            if next.is_empty() {
                next.push(r.zero());
            }
            next[0] = r.add(&next[0], c);
            acc = next;
        }
        trim(r, &mut acc);
        acc
    }

    /// Inverse of [`to_t_coeffs`](Self::to_t_coeffs).
    pub fn from_t_coeffs(ring: R, t: &[R::Elem]) -> Self {
        // Horner in t = q - 1.
        let mut acc = Self::zero(ring.clone());
        let t_poly = Self::from_i64s(ring.clone(), &[-1, 1]);
        for c in t.iter().rev() {
            acc = acc
                .mul(&t_poly)
                .add(&Self::constant(ring.clone(), c.clone()));
        }
        acc
    }

    /// Reduces coefficients into another ring.
    pub fn map_ring<S: Ring>(&self, target: S, f: impl Fn(&R::Elem) -> S::Elem) -> QPolynomial<S> {
        let c = self.coeffs.iter().map(f).collect();
        QPolynomial::new(target, c)
    }
}

impl<R: EuclideanRing> QPolynomial<R> {
    /// Division by a polynomial whose leading coefficient is a unit.
    pub fn div_rem(&self, d: &Self) -> Result<(Self, Self)> {
        let r = &self.ring;
        let lead = d
            .leading()
            .ok_or_else(|| Error::InvalidArgument("division by zero".into()))?;
        let inv = r.inv(lead).ok_or_else(|| {
            Error::NotInvertible(format!("leading coefficient {}", r.format(lead)))
        })?;
        let dd = d.coeffs.len() - 1;
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok((Self::zero(r.clone()), self.clone()));
        }
        let mut quot = vec![r.zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = r.mul(&rem[k + dd], &inv);
            if r.is_zero(&c) {
                continue;
            }
            for (j, y) in d.coeffs.iter().enumerate() {
                rem[k + j] = r.sub(&rem[k + j], &r.mul(&c, y));
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        Ok((Self::new(r.clone(), quot), Self::new(r.clone(), rem)))
    }

    /// Exact division; fails with `DivisionNotExact` on a non-zero remainder.
    pub fn div_exact(&self, d: &Self) -> Result<Self> {
        let (q, r) = self.div_rem(d)?;
        if r.is_zero() {
            Ok(q)
        } else {
            Err(Error::DivisionNotExact(format!("({self}) / ({d})")))
        }
    }
}

impl<R: Ring> fmt::Display for QPolynomial<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_coeffs(&self.ring, &self.coeffs, "q", 0))
    }
}

impl<R: CoeffRing> QPolynomial<R> {
    pub fn to_json(&self) -> serde_json::Value {
        super::json::coeffs_to_json(&self.ring, &self.coeffs)
    }
}

/// The polynomial ring `R[q]` as a ring context.
#[derive(Clone, Debug, PartialEq)]
pub struct PolyRing<R: Ring> {
    base: R,
}

impl<R: Ring> PolyRing<R> {
    pub fn new(base: R) -> Self {
        PolyRing { base }
    }
    pub fn base(&self) -> &R {
        &self.base
    }
    pub fn q(&self) -> QPolynomial<R> {
        QPolynomial::monomial(self.base.clone(), self.base.one(), 1)
    }
}

impl<R: Ring> Ring for PolyRing<R> {
    type Elem = QPolynomial<R>;

    fn zero(&self) -> Self::Elem {
        QPolynomial::zero(self.base.clone())
    }
    fn one(&self) -> Self::Elem {
        QPolynomial::one(self.base.clone())
    }
    fn from_bigint(&self, n: &BigInt) -> Self::Elem {
        QPolynomial::constant(self.base.clone(), self.base.from_bigint(n))
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
        if a.degree() == Some(0) {
            self.base
                .inv(&a.coeffs[0])
                .map(|c| QPolynomial::constant(self.base.clone(), c))
        } else {
            None
        }
    }
    fn format(&self, a: &Self::Elem) -> String {
        a.to_string()
    }
    fn name(&self) -> String {
        format!("{}[q]", self.base.name())
    }
}

/// Coefficient rings over which `K[q]` is Euclidean.
pub trait Field: EuclideanRing {
    /// `Z/p^M` is only a field for `M = 1`.
    fn is_field(&self) -> bool;
}

impl Field for Rationals {
    fn is_field(&self) -> bool {
        true
    }
}

impl Field for ZMod {
    fn is_field(&self) -> bool {
        self.exponent() == 1
    }
}

pub(crate) fn check_field<F: Field>(base: &F) -> Result<()> {
    if base.is_field() {
        Ok(())
    } else {
        Err(Error::UnsupportedRing(format!(
            "{}[q] is not a principal ideal domain",
            base.name()
        )))
    }
}

impl<F: Field> PolyRing<F> {
    /// `K[q]` over a field; rejects `Z/p^M` with `M > 1`.
    pub fn over_field(base: F) -> Result<Self> {
        check_field(&base)?;
        Ok(PolyRing { base })
    }
}

impl<F: Field> EuclideanRing for PolyRing<F> {
    type Norm = usize;

    fn norm(&self, a: &Self::Elem) -> usize {
        a.degree().unwrap_or(0)
    }
    fn div_rem(&self, a: &Self::Elem, b: &Self::Elem) -> (Self::Elem, Self::Elem) {
        a.div_rem(b).expect("field coefficients")
    }
    fn normalize(&self, a: &Self::Elem) -> (Self::Elem, Self::Elem) {
        match a.leading() {
            None => (a.clone(), self.one()),
            Some(l) => {
                let inv = self.base.inv(l).expect("field coefficients");
                (
                    a.scale(&inv),
                    QPolynomial::constant(self.base.clone(), l.clone()),
                )
            }
        }
    }
    fn annihilator(&self, a: &Self::Elem) -> Option<Self::Elem> {
        a.is_zero().then(|| self.one())
    }
}

/// `[n]_q = 1 + q + ... + q^(n-1)` over `ring`.
pub fn q_integer<R: Ring>(ring: R, n: u64) -> QPolynomial<R> {
    let one = ring.one();
    QPolynomial::new(ring, vec![one; n as usize])
}

/// `[n]_q! = [1]_q [2]_q ... [n]_q`.
pub fn q_factorial<R: Ring>(ring: R, n: u64) -> QPolynomial<R> {
    (1..=n).fold(QPolynomial::one(ring.clone()), |acc, k| {
        acc.mul(&q_integer(ring.clone(), k))
    })
}

/// Gaussian binomial coefficient, computed as a quotient of q-factorials
/// over `Z`.
pub fn q_binomial(n: u64, k: u64) -> Result<QPolynomial<Integers>> {
    if k > n {
        return Err(Error::InvalidArgument(format!("k = {k} exceeds n = {n}")));
    }
    let num = q_factorial(Integers, n);
    let den = q_factorial(Integers, k).mul(&q_factorial(Integers, n - k));
    num.div_exact(&den)
}

/// The cyclotomic polynomial `Φ_p(q) = [p]_q` for a prime `p`.
pub fn cyclotomic_p<R: Ring>(ring: R, p: u64) -> Result<QPolynomial<R>> {
    if !super::ring::is_prime(p) {
        return Err(Error::InvalidArgument(format!("{p} is not prime")));
    }
    Ok(q_integer(ring, p))
}
