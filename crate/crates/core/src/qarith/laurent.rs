//! Laurent polynomials in `q`: the ring `R[q, q^-1]`.

use std::fmt;

use num_bigint::BigInt;

use super::poly::{add_coeffs, check_field, format_coeffs, mul_coeffs, Field, QPolynomial};
use super::ring::{EuclideanRing, Integers, Ring};
use crate::error::Result;

/// `q^shift * (c_0 + c_1 q + ...)` with `c_0` and the last coefficient
/// non-zero (the zero element has no coefficients and shift 0).
#[derive(Clone, PartialEq, Debug)]
pub struct LaurentPoly<R: Ring> {
    ring: R,
    shift: i64,
    coeffs: Vec<R::Elem>,
}

impl<R: Ring> LaurentPoly<R> {
    pub fn new(ring: R, shift: i64, mut coeffs: Vec<R::Elem>) -> Self {
        super::poly::trim(&ring, &mut coeffs);
        let lead = coeffs.iter().take_while(|c| ring.is_zero(c)).count();
        if lead == coeffs.len() {
            return LaurentPoly {
                ring,
                shift: 0,
                coeffs: Vec::new(),
            };
        }
        coeffs.drain(..lead);
        LaurentPoly {
            ring,
            shift: shift + lead as i64,
            coeffs,
        }
    }

    pub fn zero(ring: R) -> Self {
        LaurentPoly {
            ring,
            shift: 0,
            coeffs: Vec::new(),
        }
    }

    pub fn one(ring: R) -> Self {
        Self::monomial(ring.clone(), ring.one(), 0)
    }

    /// `c * q^e`.
    pub fn monomial(ring: R, c: R::Elem, e: i64) -> Self {
        Self::new(ring, e, vec![c])
    }

    pub fn from_poly(p: &QPolynomial<R>) -> Self {
        Self::new(p.ring().clone(), 0, p.coeffs().to_vec())
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }
    /// Lowest exponent present (0 for the zero element).
    pub fn shift(&self) -> i64 {
        self.shift
    }
    pub fn coeffs(&self) -> &[R::Elem] {
        &self.coeffs
    }
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
    /// `(exponent, coefficient)` pairs with non-zero coefficient.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &R::Elem)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !self.ring.is_zero(c))
            .map(|(k, c)| (self.shift + k as i64, c))
    }

    pub fn add(&self, o: &Self) -> Self {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        let s = self.shift.min(o.shift);
        let pad = |x: &Self| {
            let mut v = vec![self.ring.zero(); (x.shift - s) as usize];
            v.extend(x.coeffs.iter().cloned());
            v
        };
        Self::new(
            self.ring.clone(),
            s,
            add_coeffs(&self.ring, &pad(self), &pad(o)),
        )
    }
    pub fn neg(&self) -> Self {
        let c = self.coeffs.iter().map(|x| self.ring.neg(x)).collect();
        Self::new(self.ring.clone(), self.shift, c)
    }
    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }
    pub fn mul(&self, o: &Self) -> Self {
        Self::new(
            self.ring.clone(),
            self.shift + o.shift,
            mul_coeffs(&self.ring, &self.coeffs, &o.coeffs, usize::MAX),
        )
    }
    pub fn scale(&self, c: &R::Elem) -> Self {
        let v = self.coeffs.iter().map(|x| self.ring.mul(x, c)).collect();
        Self::new(self.ring.clone(), self.shift, v)
    }
    pub fn mul_q_power(&self, e: i64) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        LaurentPoly {
            ring: self.ring.clone(),
            shift: self.shift + e,
            coeffs: self.coeffs.clone(),
        }
    }

    /// The substitution `q -> q^a`, `a != 0`.
    pub fn substitute_q_power(&self, a: i64) -> Self {
        assert!(a != 0, "q -> q^0 is not an automorphism");
        self.terms()
            .fold(Self::zero(self.ring.clone()), |acc, (e, c)| {
                acc.add(&Self::monomial(self.ring.clone(), c.clone(), e * a))
            })
    }

    pub fn eval_at_one(&self) -> R::Elem {
        self.coeffs
            .iter()
            .fold(self.ring.zero(), |acc, c| self.ring.add(&acc, c))
    }

    pub fn map_ring<S: Ring>(&self, target: S, f: impl Fn(&R::Elem) -> S::Elem) -> LaurentPoly<S> {
        let c = self.coeffs.iter().map(f).collect();
        LaurentPoly::new(target, self.shift, c)
    }

    /// The polynomial part when no negative exponents occur.
    pub fn to_poly(&self) -> Option<QPolynomial<R>> {
        if self.shift < 0 {
            return None;
        }
        let mut v = vec![self.ring.zero(); self.shift as usize];
        v.extend(self.coeffs.iter().cloned());
        Some(QPolynomial::new(self.ring.clone(), v))
    }

    /// Evaluates with `q -> x`, given `x` and an inverse for it.
    pub fn eval_with<T: Ring>(
        &self,
        target: &T,
        embed: impl Fn(&R::Elem) -> T::Elem,
        x: &T::Elem,
        x_inv: &T::Elem,
    ) -> T::Elem {
        let mut acc = target.zero();
        for (e, c) in self.terms() {
            let base = if e >= 0 { x } else { x_inv };
            let term = target.mul(&embed(c), &target.pow(base, e.unsigned_abs()));
            acc = target.add(&acc, &term);
        }
        acc
    }
}

impl<R: Ring> fmt::Display for LaurentPoly<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_coeffs(&self.ring, &self.coeffs, "q", self.shift))
    }
}

/// `[n]_q` for any integer `n`; for `n < 0` this is `-q^n [-n]_q`.
pub fn q_integer_laurent<R: Ring>(ring: R, n: i64) -> LaurentPoly<R> {
    if n >= 0 {
        LaurentPoly::new(ring.clone(), 0, vec![ring.one(); n as usize])
    } else {
        let minus = ring.neg(&ring.one());
        LaurentPoly::new(ring, n, vec![minus; n.unsigned_abs() as usize])
    }
}

/// Exact scalars `Z[q, q^-1]` in which every coordinate formula is first
/// evaluated before being specialized.
pub type Zq = LaurentPoly<Integers>;

/// The ring `Z[q, q^-1]`.
pub fn zq_ring() -> LaurentPolyRing<Integers> {
    LaurentPolyRing::new(Integers)
}

/// `R[q, q^-1]` as a ring context.
#[derive(Clone, Debug, PartialEq)]
pub struct LaurentPolyRing<R: Ring> {
    base: R,
}

impl<R: Ring> LaurentPolyRing<R> {
    pub fn new(base: R) -> Self {
        LaurentPolyRing { base }
    }
    pub fn base(&self) -> &R {
        &self.base
    }
    pub fn q_pow(&self, e: i64) -> LaurentPoly<R> {
        LaurentPoly::monomial(self.base.clone(), self.base.one(), e)
    }
}

impl<F: Field> LaurentPolyRing<F> {
    /// `K[q, q^-1]` over a field; rejects `Z/p^M` with `M > 1`.
    pub fn over_field(base: F) -> Result<Self> {
        check_field(&base)?;
        Ok(LaurentPolyRing { base })
    }
}

impl<R: Ring> Ring for LaurentPolyRing<R> {
    type Elem = LaurentPoly<R>;

    fn zero(&self) -> Self::Elem {
        LaurentPoly::zero(self.base.clone())
    }
    fn one(&self) -> Self::Elem {
        LaurentPoly::one(self.base.clone())
    }
    fn from_bigint(&self, n: &BigInt) -> Self::Elem {
        LaurentPoly::monomial(self.base.clone(), self.base.from_bigint(n), 0)
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
        if a.coeffs.len() == 1 {
            let c = self.base.inv(&a.coeffs[0])?;
            Some(LaurentPoly::monomial(self.base.clone(), c, -a.shift))
        } else {
            None
        }
    }
    fn format(&self, a: &Self::Elem) -> String {
        a.to_string()
    }
    fn name(&self) -> String {
        format!("{}[q,q^-1]", self.base.name())
    }
}

impl<F: Field> EuclideanRing for LaurentPolyRing<F> {
    type Norm = usize;

    /// The span `max exponent - min exponent`; units have span 0.
    fn norm(&self, a: &Self::Elem) -> usize {
        a.coeffs.len().saturating_sub(1)
    }
    fn div_rem(&self, a: &Self::Elem, b: &Self::Elem) -> (Self::Elem, Self::Elem) {
        let pa = QPolynomial::new(self.base.clone(), a.coeffs.clone());
        let pb = QPolynomial::new(self.base.clone(), b.coeffs.clone());
        let (q, r) = pa.div_rem(&pb).expect("field coefficients");
        (
            LaurentPoly::from_poly(&q).mul_q_power(a.shift - b.shift),
            LaurentPoly::from_poly(&r).mul_q_power(a.shift),
        )
    }
    fn normalize(&self, a: &Self::Elem) -> (Self::Elem, Self::Elem) {
        match a.coeffs.last() {
            None => (a.clone(), self.one()),
            Some(l) => {
                let inv = self.base.inv(l).expect("field coefficients");
                let canon = LaurentPoly::new(self.base.clone(), 0, a.coeffs.clone()).scale(&inv);
                (
                    canon,
                    LaurentPoly::monomial(self.base.clone(), l.clone(), a.shift),
                )
            }
        }
    }
    fn annihilator(&self, a: &Self::Elem) -> Option<Self::Elem> {
        a.is_zero().then(|| self.one())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qarith::ring::ZMod;

    #[test]
    fn negative_q_integers() {
        // [-2]_q = -q^-1 - q^-2
        let m2 = q_integer_laurent(Integers, -2);
        assert_eq!(m2.shift(), -2);
        assert_eq!(m2.eval_at_one(), BigInt::from(-2));
        // (q - 1)[n]_q = q^n - 1 for negative n as well
        let t = LaurentPoly::new(Integers, 0, vec![(-1).into(), 1.into()]);
        let lhs = t.mul(&m2);
        let rhs = LaurentPoly::monomial(Integers, 1.into(), -2).sub(&LaurentPoly::one(Integers));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn euclidean_structure() {
        let f = ZMod::field(2).unwrap();
        let r = LaurentPolyRing::over_field(f).unwrap();
        let a = LaurentPoly::new(f, -3, vec![1, 0, 1, 1]);
        let b = LaurentPoly::new(f, 2, vec![1, 1]);
        let (q, rem) = r.div_rem(&a, &b);
        assert_eq!(r.add(&r.mul(&q, &b), &rem), a);
        assert!(r.norm(&rem) < r.norm(&b));
        let (c, u) = r.normalize(&a);
        assert_eq!(c.shift(), 0);
        assert_eq!(r.mul(&c, &u), a);
        assert!(r.is_unit(&u));
    }

    #[test]
    fn substitution() {
        let x = LaurentPoly::new(Integers, -1, vec![1.into(), 2.into()]);
        let y = x.substitute_q_power(-2);
        assert_eq!(y.to_string(), "2 + q^2");
    }
}
