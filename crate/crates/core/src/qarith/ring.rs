//! Exact coefficient rings.
//!
//! Rings carry their parameters at runtime (`ZMod` knows its modulus), so
//! every operation goes through a ring value: `ring.mul(&a, &b)`.

use std::fmt::Debug;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub trait Ring: Clone + Debug + PartialEq + Send + Sync {
    type Elem: Clone + Debug + PartialEq + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_bigint(&self, n: &BigInt) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    /// Multiplicative inverse, `None` for non-units.
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn format(&self, a: &Self::Elem) -> String;
    /// Short human-readable name, e.g. `Z/9`.
    fn name(&self) -> String;

    fn from_i64(&self, n: i64) -> Self::Elem {
        self.from_bigint(&BigInt::from(n))
    }

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }

    fn is_unit(&self, a: &Self::Elem) -> bool {
        self.inv(a).is_some()
    }

    fn pow(&self, a: &Self::Elem, mut e: u64) -> Self::Elem {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    fn elem_to_json(&self, a: &Self::Elem) -> serde_json::Value {
        serde_json::Value::String(self.format(a))
    }
}

/// Rings admitting a Euclidean-style division, which is all Smith normal
/// form needs. `Z/p^M` qualifies with the p-adic valuation as norm even
/// though it has zero divisors.
pub trait EuclideanRing: Ring {
    type Norm: Ord + Clone + Debug;

    /// Size of a non-zero element; remainders are strictly smaller.
    fn norm(&self, a: &Self::Elem) -> Self::Norm;
    /// `a = q*b + r` with `r = 0` or `norm(r) < norm(b)`. `b` must be non-zero.
    fn div_rem(&self, a: &Self::Elem, b: &Self::Elem) -> (Self::Elem, Self::Elem);
    /// Canonical associate `c` of `a` and a unit `u` with `a = u*c`.
    fn normalize(&self, a: &Self::Elem) -> (Self::Elem, Self::Elem);
    /// Generator of the annihilator ideal of `a`; `None` if it is zero.
    fn annihilator(&self, a: &Self::Elem) -> Option<Self::Elem>;

    fn divides(&self, b: &Self::Elem, a: &Self::Elem) -> bool {
        if self.is_zero(b) {
            return self.is_zero(a);
        }
        self.is_zero(&self.div_rem(a, b).1)
    }

    /// Exact quotient `a / b`, if `b` divides `a`.
    fn div_exact(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Self::Elem> {
        if self.is_zero(b) {
            return if self.is_zero(a) {
                Some(self.zero())
            } else {
                None
            };
        }
        let (q, r) = self.div_rem(a, b);
        self.is_zero(&r).then_some(q)
    }

    fn gcd(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        let (mut x, mut y) = (a.clone(), b.clone());
        while !self.is_zero(&y) {
            let r = self.div_rem(&x, &y).1;
            x = y;
            y = r;
        }
        if self.is_zero(&x) {
            x
        } else {
            self.normalize(&x).0
        }
    }
}

/// Coefficient rings for q-series: Z, Z/p^M and Q.
pub trait CoeffRing: EuclideanRing {
    fn spec(&self) -> CoeffRingSpec;
    fn parse_elem(&self, s: &str) -> Result<Self::Elem>;
}

/// Serializable descriptor of a coefficient ring.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum CoeffRingSpec {
    Int,
    Zmod {
        p: u64,
        #[serde(rename = "M")]
        m: u32,
    },
    Rat,
}

impl CoeffRingSpec {
    pub fn validate(&self) -> Result<()> {
        if let CoeffRingSpec::Zmod { p, m } = *self {
            if !is_prime(p) {
                return Err(Error::InvalidArgument(format!("{p} is not prime")));
            }
            if m == 0 {
                return Err(Error::InvalidArgument("M must be at least 1".into()));
            }
            if p.checked_pow(m).map_or(true, |q| q > u32::MAX as u64) {
                return Err(Error::InvalidArgument(format!("{p}^{m} is too large")));
            }
        }
        Ok(())
    }
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

// ---------------------------------------------------------------------------
// Z

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Integers;

impl Ring for Integers {
    type Elem = BigInt;

    fn zero(&self) -> BigInt {
        BigInt::zero()
    }
    fn one(&self) -> BigInt {
        BigInt::one()
    }
    fn from_bigint(&self, n: &BigInt) -> BigInt {
        n.clone()
    }
    fn add(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a + b
    }
    fn neg(&self, a: &BigInt) -> BigInt {
        -a
    }
    fn mul(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a * b
    }
    fn is_zero(&self, a: &BigInt) -> bool {
        a.is_zero()
    }
    fn inv(&self, a: &BigInt) -> Option<BigInt> {
        (a.abs() == BigInt::one()).then(|| a.clone())
    }
    fn format(&self, a: &BigInt) -> String {
        a.to_string()
    }
    fn name(&self) -> String {
        "Z".into()
    }
}

impl EuclideanRing for Integers {
    type Norm = BigUint;

    fn norm(&self, a: &BigInt) -> BigUint {
        a.magnitude().clone()
    }
    fn div_rem(&self, a: &BigInt, b: &BigInt) -> (BigInt, BigInt) {
        a.div_rem(b)
    }
    fn normalize(&self, a: &BigInt) -> (BigInt, BigInt) {
        if a.sign() == Sign::Minus {
            (-a, -BigInt::one())
        } else {
            (a.clone(), BigInt::one())
        }
    }
    fn annihilator(&self, a: &BigInt) -> Option<BigInt> {
        a.is_zero().then(BigInt::one)
    }
}

impl CoeffRing for Integers {
    fn spec(&self) -> CoeffRingSpec {
        CoeffRingSpec::Int
    }
    fn parse_elem(&self, s: &str) -> Result<BigInt> {
        s.trim()
            .parse()
            .map_err(|_| Error::Parse(format!("not an integer: {s:?}")))
    }
}

// ---------------------------------------------------------------------------
// Z/p^M

/// The ring `Z/p^M`. With `M = 1` this is the prime field `F_p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ZMod {
    p: u64,
    m: u32,
    modulus: u64,
}

impl ZMod {
    pub fn new(p: u64, m: u32) -> Result<Self> {
        CoeffRingSpec::Zmod { p, m }.validate()?;
        Ok(ZMod {
            p,
            m,
            modulus: p.pow(m),
        })
    }

    pub fn field(p: u64) -> Result<Self> {
        Self::new(p, 1)
    }

    pub fn p(&self) -> u64 {
        self.p
    }
    pub fn exponent(&self) -> u32 {
        self.m
    }
    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// p-adic valuation of a residue; `M` for zero.
    pub fn valuation(&self, a: u64) -> u32 {
        if a == 0 {
            return self.m;
        }
        let mut v = 0;
        let mut x = a;
        while x % self.p == 0 {
            x /= self.p;
            v += 1;
        }
        v
    }

    fn reduce_i128(&self, a: i128) -> u64 {
        a.rem_euclid(self.modulus as i128) as u64
    }
}

impl Ring for ZMod {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1 % self.modulus
    }
    fn from_bigint(&self, n: &BigInt) -> u64 {
        let r = n.mod_floor(&BigInt::from(self.modulus));
        r.to_u64().expect("residue fits in u64")
    }
    fn from_i64(&self, n: i64) -> u64 {
        self.reduce_i128(n as i128)
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        let s = a + b;
        if s >= self.modulus {
            s - self.modulus
        } else {
            s
        }
    }
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.modulus - a
        }
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.modulus - b
        }
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 * *b as u128) % self.modulus as u128) as u64
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn inv(&self, a: &u64) -> Option<u64> {
        if a % self.p == 0 {
            return None;
        }
        let e = (*a as i128).extended_gcd(&(self.modulus as i128));
        Some(self.reduce_i128(e.x))
    }
    fn format(&self, a: &u64) -> String {
        a.to_string()
    }
    fn name(&self) -> String {
        if self.m == 1 {
            format!("F_{}", self.p)
        } else {
            format!("Z/{}^{}", self.p, self.m)
        }
    }
}

impl EuclideanRing for ZMod {
    type Norm = u32;

    fn norm(&self, a: &u64) -> u32 {
        self.valuation(*a)
    }
    fn div_rem(&self, a: &u64, b: &u64) -> (u64, u64) {
        let (va, vb) = (self.valuation(*a), self.valuation(*b));
        if *a != 0 && va < vb {
            return (0, *a);
        }
        if *a == 0 {
            return (0, 0);
        }
        // a = p^va * ua, b = p^vb * ub with vb <= va.
        let pv = self.p.pow(vb);
        let ub = b / pv;
        let ua_shift = a / pv;
        let q = self.mul(&ua_shift, &self.inv(&ub).expect("unit part"));
        (q, 0)
    }
    fn normalize(&self, a: &u64) -> (u64, u64) {
        if *a == 0 {
            return (0, self.one());
        }
        let v = self.valuation(*a);
        let pv = self.p.pow(v);
        (pv % self.modulus, (a / pv) % self.modulus)
    }
    fn annihilator(&self, a: &u64) -> Option<u64> {
        let v = self.valuation(*a);
        if v == 0 {
            None
        } else {
            Some(self.p.pow(self.m - v) % self.modulus)
        }
    }
}

impl CoeffRing for ZMod {
    fn spec(&self) -> CoeffRingSpec {
        CoeffRingSpec::Zmod {
            p: self.p,
            m: self.m,
        }
    }
    fn parse_elem(&self, s: &str) -> Result<u64> {
        let n: BigInt = s
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("not an integer: {s:?}")))?;
        Ok(self.from_bigint(&n))
    }
}

// ---------------------------------------------------------------------------
// Q

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Rationals;

impl Ring for Rationals {
    type Elem = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn from_bigint(&self, n: &BigInt) -> BigRational {
        BigRational::from_integer(n.clone())
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn inv(&self, a: &BigRational) -> Option<BigRational> {
        (!a.is_zero()).then(|| a.recip())
    }
    fn format(&self, a: &BigRational) -> String {
        a.to_string()
    }
    fn name(&self) -> String {
        "Q".into()
    }
}

impl EuclideanRing for Rationals {
    type Norm = u8;

    fn norm(&self, _a: &BigRational) -> u8 {
        0
    }
    fn div_rem(&self, a: &BigRational, b: &BigRational) -> (BigRational, BigRational) {
        (a / b, BigRational::zero())
    }
    fn normalize(&self, a: &BigRational) -> (BigRational, BigRational) {
        if a.is_zero() {
            (a.clone(), BigRational::one())
        } else {
            (BigRational::one(), a.clone())
        }
    }
    fn annihilator(&self, a: &BigRational) -> Option<BigRational> {
        a.is_zero().then(BigRational::one)
    }
}

impl CoeffRing for Rationals {
    fn spec(&self) -> CoeffRingSpec {
        CoeffRingSpec::Rat
    }
    fn parse_elem(&self, s: &str) -> Result<BigRational> {
        let s = s.trim();
        let bad = || Error::Parse(format!("not a rational: {s:?}"));
        match s.split_once('/') {
            Some((n, d)) => {
                let n: BigInt = n.trim().parse().map_err(|_| bad())?;
                let d: BigInt = d.trim().parse().map_err(|_| bad())?;
                if d.is_zero() {
                    return Err(bad());
                }
                Ok(BigRational::new(n, d))
            }
            None => Ok(BigRational::from_integer(s.parse().map_err(|_| bad())?)),
        }
    }
}

/// Binomial coefficient `C(n, k)` for any integer `n` and `k >= 0`
/// (generalized: `C(-1, k) = (-1)^k`).
pub fn binomial(n: i64, k: u64) -> BigInt {
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..k {
        num *= BigInt::from(n) - BigInt::from(i);
        den *= BigInt::from(i + 1);
    }
    num / den
}
