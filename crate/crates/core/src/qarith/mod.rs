//! Exact coefficient rings, polynomials and truncated series in `q`, and
//! the q-analogues built from them.

pub mod json;
pub mod laurent;
pub mod poly;
pub mod quotient;
pub mod ring;
pub mod series;

pub use laurent::{q_integer_laurent, zq_ring, LaurentPoly, LaurentPolyRing, Zq};
pub use poly::{cyclotomic_p, q_binomial, q_factorial, q_integer, Field, PolyRing, QPolynomial};
pub use quotient::QuotientRing;
pub use ring::{
    binomial, is_prime, CoeffRing, CoeffRingSpec, EuclideanRing, Integers, Rationals, Ring, ZMod,
};
pub use series::{log_q, log_q_in, QSeries, SeriesRing};

use crate::error::{Error, Result};

/// Rings containing `q` as a unit, where q-analogues can be evaluated.
pub trait QAlgebra: Ring {
    /// `q^e` for any integer `e`.
    fn q_pow(&self, e: i64) -> Self::Elem;

    /// Image of an exact element of `Z[q, q^-1]`.
    fn from_zq(&self, f: &Zq) -> Self::Elem {
        f.terms().fold(self.zero(), |acc, (e, c)| {
            self.add(&acc, &self.mul(&self.from_bigint(c), &self.q_pow(e)))
        })
    }

    /// `[e]_q` for any integer `e`.
    fn q_int(&self, e: i64) -> Self::Elem {
        self.from_zq(&q_integer_laurent(Integers, e))
    }

    /// The ring endomorphism `q -> q^a`.
    fn sigma(&self, _x: &Self::Elem, a: i64) -> Result<Self::Elem> {
        Err(Error::UnsupportedRing(format!(
            "q -> q^{a} is not defined on {}",
            self.name()
        )))
    }

    fn elem_json(&self, x: &Self::Elem) -> serde_json::Value {
        serde_json::Value::String(self.format(x))
    }
}

impl<R: Ring> QAlgebra for LaurentPolyRing<R> {
    fn q_pow(&self, e: i64) -> Self::Elem {
        LaurentPolyRing::q_pow(self, e)
    }
    fn sigma(&self, x: &Self::Elem, a: i64) -> Result<Self::Elem> {
        if a == 0 {
            return Err(Error::InvalidArgument("q -> q^0 is not allowed".into()));
        }
        Ok(x.substitute_q_power(a))
    }
}

/// Rings that are free of finite rank over a Euclidean base, so that
/// complexes over them can be flattened for homology.
pub trait FiniteFree: Ring {
    type Base: EuclideanRing;

    fn base_ring(&self) -> &Self::Base;
    fn rank(&self) -> usize;
    fn coords(&self, x: &Self::Elem) -> Vec<<Self::Base as Ring>::Elem>;
    fn from_coords(&self, c: &[<Self::Base as Ring>::Elem]) -> Self::Elem;
    /// Row-major `rank x rank` matrix of multiplication by `x`.
    fn mult_matrix(&self, x: &Self::Elem) -> Vec<<Self::Base as Ring>::Elem>;
}
