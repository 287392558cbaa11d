//! Exact images of a single monomial `x^e` under `γ`, `∇_q` and `φ_p`, as
//! lists of `(exponent, coefficient in Z[q^{±1}])`.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{zq_binomial, zq_const, zq_int, VarKind};
use crate::qarith::{binomial, Integers, Zq};

fn zq_q(e: i64) -> Zq {
    Zq::monomial(Integers, BigInt::one(), e)
}

fn big_pow(c: i64, e: u64) -> BigInt {
    num_traits::pow(BigInt::from(c), e as usize)
}

/// `γ^s(x^e)` where `γ(x) = q x + (q - 1) c` (Laurent: `q^e x^e`).
pub fn gamma_coeffs(kind: VarKind, c: i64, e: i64, s: i64) -> Vec<(i64, Zq)> {
    if kind == VarKind::Laurent || c == 0 {
        return vec![(e, zq_q(s * e))];
    }
    let shift = zq_q(s).sub(&zq_q(0));
    let mut out = Vec::with_capacity(e as usize + 1);
    let mut shift_pow = Zq::one(Integers);
    // j runs downward so (q^s - 1)^{e-j} grows incrementally.
    for j in (0..=e).rev() {
        let k = (e - j) as u64;
        let coeff = zq_binomial(e, j as u64)
            .mul(&zq_const(&big_pow(c, k)))
            .mul(&zq_q(s * j))
            .mul(&shift_pow);
        if !coeff.is_zero() {
            out.push((j, coeff));
        }
        shift_pow = shift_pow.mul(&shift);
    }
    out
}

/// `∇_q(x^e)` for the coordinate `T = x + c`.
pub fn nabla_coeffs(kind: VarKind, c: i64, e: i64) -> Vec<(i64, Zq)> {
    if kind == VarKind::Laurent || c == 0 {
        return if e == 0 {
            Vec::new()
        } else {
            vec![(e - 1, zq_int(e))]
        };
    }
    let mut out = Vec::new();
    for j in 0..e {
        let mut acc = Zq::zero(Integers);
        for k in (j + 1)..=e {
            let n = binomial(e, k as u64)
                * binomial(k - 1, j as u64)
                * big_pow(-c, (e - k) as u64)
                * big_pow(c, (k - 1 - j) as u64);
            if !n.is_zero() {
                acc = acc.add(&zq_int(k).scale(&n));
            }
        }
        if !acc.is_zero() {
            out.push((j, acc));
        }
    }
    out
}

/// `φ_p(x^e)` where `φ_p(x) = (x + c)^p - c` (Laurent: `x^{pe}`). The
/// coefficients are integers.
pub fn frobenius_coeffs(kind: VarKind, c: i64, e: i64, p: u64) -> Vec<(i64, Zq)> {
    if kind == VarKind::Laurent || c == 0 {
        return vec![(p as i64 * e, Zq::one(Integers))];
    }
    let mut base: Vec<BigInt> = (0..=p)
        .map(|j| binomial(p as i64, j) * big_pow(c, p - j))
        .collect();
    base[0] -= BigInt::from(c);
    let mut acc = vec![BigInt::one()];
    for _ in 0..e {
        let mut next = vec![BigInt::zero(); acc.len() + base.len() - 1];
        for (i, a) in acc.iter().enumerate() {
            for (j, b) in base.iter().enumerate() {
                next[i + j] += a * b;
            }
        }
        acc = next;
    }
    acc.into_iter()
        .enumerate()
        .filter(|(_, v)| !v.is_zero())
        .map(|(j, v)| (j as i64, zq_const(&v)))
        .collect()
}
