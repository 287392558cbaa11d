//! Quotients `R[t]/(g(t))` by a monic polynomial in `t = q - 1`, such as
//! `(Z/p^M)[q]/(Φ_p(q))` and `(Z/p^M)[q]/(Φ_p(q)^2)`.

use num_bigint::BigInt;

use super::laurent::Zq;
use super::poly::{format_coeffs, mul_coeffs, q_integer, QPolynomial};
use super::ring::{is_prime, CoeffRing, Ring};
use super::{FiniteFree, QAlgebra};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct QuotientRing<R: Ring> {
    base: R,
    /// Monic modulus in `t`, lowest coefficient first; length `rank + 1`.
    modulus: Vec<R::Elem>,
    q_inv: Vec<R::Elem>,
    label: String,
}

impl<R: Ring> QuotientRing<R> {
    /// `R[t]/(g)` for a monic `g` with `g(-1)` a unit (so that `q` is a unit).
    pub fn new(base: R, modulus_t: Vec<R::Elem>, label: impl Into<String>) -> Result<Self> {
        let n = modulus_t
            .len()
            .checked_sub(1)
            .filter(|&n| n > 0)
            .ok_or_else(|| Error::InvalidArgument("modulus must have positive degree".into()))?;
        if !base.is_one(&modulus_t[n]) {
            return Err(Error::InvalidArgument("modulus must be monic".into()));
        }
        // g(t) = g(-1) + (t + 1) h(t); then q^-1 = -h / g(-1).
        let mut h = vec![base.zero(); n];
        let mut carry = base.zero();
        for k in (0..n).rev() {
            carry = base.add(&modulus_t[k + 1], &base.neg(&carry));
            // synthetic division by (t + 1): coefficients of h from the top
            h[k] = carry.clone();
        }
        // remainder g(-1) = g_0 - h_0
        let g_at = base.sub(&modulus_t[0], &h[0]);
        let inv = base
            .inv(&g_at)
            .ok_or_else(|| Error::NotInvertible("q is not a unit in this quotient".into()))?;
        let factor = base.neg(&inv);
        let q_inv = h.iter().map(|c| base.mul(c, &factor)).collect();
        Ok(QuotientRing {
            base,
            modulus: modulus_t,
            q_inv,
            label: label.into(),
        })
    }

    /// `R[q]/(Φ_p(q))`.
    pub fn mod_cyclotomic(base: R, p: u64) -> Result<Self> {
        Self::mod_cyclotomic_power(base, p, 1)
    }

    /// `R[q]/(Φ_p(q)^k)`.
    pub fn mod_cyclotomic_power(base: R, p: u64, k: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::InvalidArgument(format!("{p} is not prime")));
        }
        let phi = q_integer(base.clone(), p).pow(k);
        let label = if k == 1 {
            format!("Φ_{p}")
        } else {
            format!("Φ_{p}^{k}")
        };
        let name = format!("{}[q]/({label})", base.name());
        Self::new(base, phi.to_t_coeffs(), name)
    }

    pub fn base(&self) -> &R {
        &self.base
    }
    pub fn degree(&self) -> usize {
        self.modulus.len() - 1
    }
    /// Reduces an arbitrary `t`-polynomial.
    pub fn reduce(&self, c: &[R::Elem]) -> Vec<R::Elem> {
        let n = self.degree();
        let r = &self.base;
        let mut v = c.to_vec();
        for k in (n..v.len()).rev() {
            let lead = v[k].clone();
            if r.is_zero(&lead) {
                continue;
            }
            for j in 0..n {
                let prod = r.mul(&lead, &self.modulus[j]);
                v[k - n + j] = r.sub(&v[k - n + j], &prod);
            }
            v[k] = r.zero();
        }
        v.resize(n, r.zero());
        v
    }

    /// Image of a polynomial in `q`.
    pub fn from_poly(&self, p: &QPolynomial<R>) -> Vec<R::Elem> {
        self.reduce(&p.to_t_coeffs())
    }

    /// Lifts along `R[t]/(g h) -> R[t]/(g)`, keeping the same `t`-polynomial.
    pub fn lift_from(&self, x: &[R::Elem]) -> Vec<R::Elem> {
        self.reduce(x)
    }

    fn q_elem(&self) -> Vec<R::Elem> {
        self.reduce(&[self.base.one(), self.base.one()])
    }
}

impl<R: Ring> Ring for QuotientRing<R> {
    type Elem = Vec<R::Elem>;

    fn zero(&self) -> Self::Elem {
        vec![self.base.zero(); self.degree()]
    }
    fn one(&self) -> Self::Elem {
        self.reduce(&[self.base.one()])
    }
    fn from_bigint(&self, n: &BigInt) -> Self::Elem {
        self.reduce(&[self.base.from_bigint(n)])
    }
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        a.iter().zip(b).map(|(x, y)| self.base.add(x, y)).collect()
    }
    fn neg(&self, a: &Self::Elem) -> Self::Elem {
        a.iter().map(|x| self.base.neg(x)).collect()
    }
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.reduce(&mul_coeffs(&self.base, a, b, usize::MAX))
    }
    fn is_zero(&self, a: &Self::Elem) -> bool {
        a.iter().all(|x| self.base.is_zero(x))
    }
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem> {
        // Solve a * x = 1 through the multiplication matrix.
        let n = self.degree();
        let cols: Vec<Vec<R::Elem>> = (0..n)
            .map(|j| {
                let mut e = vec![self.base.zero(); n];
                e[j] = self.base.one();
                self.mul(a, &e)
            })
            .collect();
        // a is a unit iff this matrix is invertible, and over a local base
        // that means unit pivots always exist.
        let one = self.one();
        let mut m: Vec<Vec<R::Elem>> = (0..n)
            .map(|i| {
                let mut row: Vec<R::Elem> = (0..n).map(|j| cols[j][i].clone()).collect();
                row.push(one[i].clone());
                row
            })
            .collect();
        let r = &self.base;
        for col in 0..n {
            let piv = (col..n).find(|&i| r.is_unit(&m[i][col]))?;
            m.swap(col, piv);
            let inv = r.inv(&m[col][col])?;
            for x in m[col].iter_mut() {
                *x = r.mul(x, &inv);
            }
            for i in 0..n {
                if i != col && !r.is_zero(&m[i][col]) {
                    let f = m[i][col].clone();
                    for j in 0..=n {
                        let v = r.mul(&f, &m[col][j]);
                        m[i][j] = r.sub(&m[i][j], &v);
                    }
                }
            }
        }
        Some(m.into_iter().map(|row| row[n].clone()).collect())
    }
    fn format(&self, a: &Self::Elem) -> String {
        format_coeffs(&self.base, a, "t", 0)
    }
    fn name(&self) -> String {
        self.label.clone()
    }
}

impl<R: CoeffRing> QAlgebra for QuotientRing<R> {
    fn q_pow(&self, e: i64) -> Self::Elem {
        let b = if e >= 0 {
            self.q_elem()
        } else {
            self.q_inv.clone()
        };
        self.pow(&b, e.unsigned_abs())
    }
    fn from_zq(&self, f: &Zq) -> Self::Elem {
        let mut acc = self.zero();
        for (e, c) in f.terms() {
            let term: Vec<_> = self
                .q_pow(e)
                .iter()
                .map(|x| self.base.mul(x, &self.base.from_bigint(c)))
                .collect();
            acc = self.add(&acc, &term);
        }
        acc
    }
    fn elem_json(&self, x: &Self::Elem) -> serde_json::Value {
        serde_json::Value::Array(x.iter().map(|c| self.base.elem_to_json(c)).collect())
    }
}

impl<R: CoeffRing> FiniteFree for QuotientRing<R> {
    type Base = R;

    fn base_ring(&self) -> &R {
        &self.base
    }
    fn rank(&self) -> usize {
        self.degree()
    }
    fn coords(&self, x: &Self::Elem) -> Vec<R::Elem> {
        x.clone()
    }
    fn from_coords(&self, c: &[R::Elem]) -> Self::Elem {
        self.reduce(c)
    }
    fn mult_matrix(&self, x: &Self::Elem) -> Vec<R::Elem> {
        let n = self.degree();
        let mut m = vec![self.base.zero(); n * n];
        for j in 0..n {
            let mut e = vec![self.base.zero(); n];
            e[j] = self.base.one();
            let col = self.mul(x, &e);
            for i in 0..n {
                m[i * n + j] = col[i].clone();
            }
        }
        m
    }
}
