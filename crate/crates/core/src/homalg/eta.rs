//! The décalage functor `η_f`:
//! `(η_f C)^i = {x ∈ f^i C^i : dx ∈ f^{i+1} C^{i+1}}`.

use super::complex::FreeComplex;
use super::matrix::Matrix;
use super::snf::{smith_normal_form, solve};
use crate::error::{Error, Result};
use crate::qarith::EuclideanRing;

/// `η_f C` with explicit bases.
#[derive(Clone, Debug)]
pub struct Decalage<E: EuclideanRing> {
    /// The complex in the chosen bases.
    pub complex: FreeComplex<E>,
    /// Columns of `bases[k]` form a basis of `Y = {y ∈ C^i : dy ∈ f C^{i+1}}`
    /// in degree `i = start + k`; then `(η_f C)^i = f^i Y`.
    pub bases: Vec<Matrix<E>>,
    f: E::Elem,
}

impl<E: EuclideanRing> Decalage<E> {
    /// Inclusion `(η_f C)^i -> C^i` as the matrix `f^i B_i`, for `i >= 0`.
    pub fn embedding(&self, i: i64) -> Option<Matrix<E>> {
        let k = usize::try_from(i - self.complex.start()).ok()?;
        let b = self.bases.get(k)?;
        let ring = self.complex.ring();
        let e = u64::try_from(i).ok()?;
        Some(b.scale(ring, &ring.pow(&self.f, e)))
    }
}

/// Computes `η_f C` for a complex of free modules over a domain.
pub fn eta_f<E: EuclideanRing>(c: &FreeComplex<E>, f: &E::Elem) -> Result<Decalage<E>> {
    let ring = c.ring();
    if ring.is_zero(f) || ring.annihilator(f).is_some() {
        return Err(Error::InvalidF);
    }
    let mut bases = Vec::new();
    for i in c.degrees() {
        let n = c.rank(i);
        let m = c.rank(i + 1);
        if m == 0 {
            bases.push(Matrix::identity(ring, n));
            continue;
        }
        // Kernel of [d | f I], projected to the first block.
        let a = c.diff(i).hstack(&Matrix::scalar(ring, m, f));
        let s = smith_normal_form(ring, &a, false, true);
        let v = s.v.expect("column transform");
        let cols: Vec<usize> = (s.rank..n + m).collect();
        debug_assert_eq!(cols.len(), n);
        let rows: Vec<usize> = (0..n).collect();
        bases.push(v.submatrix(&rows, &cols));
    }
    let mut diffs = Vec::new();
    for (k, i) in c.degrees().enumerate().take(bases.len() - 1) {
        let db = c.diff(i).mul(ring, &bases[k]);
        let divided = Matrix::from_fn(db.rows(), db.cols(), |r, col| {
            ring.div_exact(db.get(r, col), f)
                .expect("dy is divisible by f")
        });
        let e = solve(ring, &bases[k + 1], &divided).expect("d(Y_i) / f lies in Y_{i+1}");
        diffs.push(e);
    }
    let complex = FreeComplex::checked(ring.clone(), c.start(), c.ranks().to_vec(), diffs)?;
    Ok(Decalage {
        complex,
        bases,
        f: f.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homalg::complex::cohomology_euclid;
    use crate::homalg::invariants::ModuleInvariants;
    use crate::homalg::AbGroupInvariants;
    use crate::qarith::{Integers, PolyRing, QPolynomial, Ring, ZMod};
    use num_bigint::BigInt;
    use proptest::prelude::*;

    #[test]
    fn multiplication_by_f_becomes_identity() {
        let f = BigInt::from(3);
        let c = FreeComplex::checked(
            Integers,
            0,
            vec![1, 1],
            vec![Matrix::from_rows(vec![vec![f.clone()]])],
        )
        .unwrap();
        let e = eta_f(&c, &f).unwrap();
        assert!(e
            .complex
            .cohomology()
            .unwrap()
            .iter()
            .all(AbGroupInvariants::is_zero));
        assert_eq!(
            e.complex.diff(0).get(0, 0).magnitude(),
            BigInt::from(1).magnitude()
        );
    }

    #[test]
    fn zero_differentials() {
        let c = FreeComplex::checked(
            Integers,
            0,
            vec![2, 1],
            vec![Matrix::zeros(&Integers, 1, 2)],
        )
        .unwrap();
        let e = eta_f(&c, &BigInt::from(5)).unwrap();
        assert_eq!(e.complex.homology(0).unwrap(), AbGroupInvariants::free(2));
        assert_eq!(e.complex.homology(1).unwrap(), AbGroupInvariants::free(1));
        assert_eq!(
            e.embedding(1).unwrap(),
            Matrix::scalar(&Integers, 1, &BigInt::from(5))
        );
    }

    #[test]
    fn rejects_zero_divisors() {
        let r = ZMod::new(3, 2).unwrap();
        let c = FreeComplex::checked(r, 0, vec![1], vec![]).unwrap();
        assert_eq!(eta_f(&c, &3).unwrap_err(), Error::InvalidF);
        let c = FreeComplex::checked(Integers, 0, vec![1], vec![]).unwrap();
        assert_eq!(eta_f(&c, &BigInt::from(0)).unwrap_err(), Error::InvalidF);
    }

    /// `H(η_f C) ≅ H(C) / H(C)[f]`: each torsion summand `R/τ` becomes
    /// `R/(τ / gcd(τ, f))`.
    fn quotient_by_f_torsion<E: EuclideanRing>(
        ring: &E,
        h: &ModuleInvariants<E>,
        f: &E::Elem,
    ) -> ModuleInvariants<E> {
        let gens: Vec<E::Elem> = h
            .torsion
            .iter()
            .map(|t| ring.div_exact(t, &ring.gcd(t, f)).unwrap())
            .chain(std::iter::repeat(ring.zero()).take(h.free_rank))
            .collect();
        ModuleInvariants::from_cyclic(ring, &gens)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]
        #[test]
        fn eta_kills_f_torsion_over_fp_q(entries in proptest::collection::vec((0u64..3, 0u64..3, 0u64..3), 6)) {
            let fp = ZMod::field(3).unwrap();
            let r = PolyRing::over_field(fp).unwrap();
            let poly = |(a, b, c): (u64, u64, u64)| QPolynomial::new(fp, vec![a, b, c]);
            // d0 = x * y^T style rank-one maps keep d1 d0 = 0 when d1 kills x.
            let x = [poly(entries[0]), poly(entries[1])];
            let y = [poly(entries[2]), poly(entries[3])];
            let d0 = Matrix::from_fn(2, 2, |i, j| r.mul(&x[i], &y[j]));
            let w = [r.neg(&x[1]), x[0].clone()];
            let scale = poly(entries[4]);
            let d1 = Matrix::from_fn(1, 2, |_, j| r.mul(&w[j], &scale));
            let c = FreeComplex::checked(r.clone(), 0, vec![2, 2, 1], vec![d0, d1]).unwrap();
            let f = QPolynomial::from_i64s(fp, &[-1, 1]);
            let e = eta_f(&c, &f).unwrap();
            let h = cohomology_euclid(&c);
            let he = cohomology_euclid(&e.complex);
            for (a, b) in h.iter().zip(&he) {
                let expected = quotient_by_f_torsion(&r, a, &f).to_ab(&r);
                prop_assert_eq!(expected, b.to_ab(&r));
            }
        }
    }
}
