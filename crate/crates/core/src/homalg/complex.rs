//! Cochain complexes of finite free modules and their cohomology.

use super::invariants::{AbGroupInvariants, ModuleInvariants};
use super::matrix::Matrix;
use super::snf::{smith_normal_form, solve_with, Smith};
use crate::error::{Error, Result};
use crate::qarith::{
    CoeffRing, EuclideanRing, Field, FiniteFree, Integers, LaurentPolyRing, PolyRing, QuotientRing,
    Rationals, Ring, SeriesRing, ZMod,
};

/// `C^a -> C^{a+1} -> ... -> C^b` with `C^i` free of rank `ranks[i - a]`.
#[derive(Clone, Debug)]
pub struct FreeComplex<R: Ring> {
    ring: R,
    start: i64,
    ranks: Vec<usize>,
    diffs: Vec<Matrix<R>>,
    labels: Option<Vec<Vec<String>>>,
}

impl<R: Ring> FreeComplex<R> {
    /// `diffs[k]` maps degree `start + k` to `start + k + 1`. Shapes are
    /// checked here; `d∘d = 0` is checked by [`validate`](Self::validate).
    pub fn new(ring: R, start: i64, ranks: Vec<usize>, diffs: Vec<Matrix<R>>) -> Result<Self> {
        if ranks.is_empty() || diffs.len() + 1 != ranks.len() {
            return Err(Error::InvalidArgument(
                "need one differential between consecutive degrees".into(),
            ));
        }
        for (k, d) in diffs.iter().enumerate() {
            if d.rows() != ranks[k + 1] || d.cols() != ranks[k] {
                return Err(Error::InvalidArgument(format!(
                    "differential in degree {} has shape {}x{}, expected {}x{}",
                    start + k as i64,
                    d.rows(),
                    d.cols(),
                    ranks[k + 1],
                    ranks[k]
                )));
            }
        }
        Ok(FreeComplex {
            ring,
            start,
            ranks,
            diffs,
            labels: None,
        })
    }

    /// A complex that is checked to satisfy `d∘d = 0`.
    pub fn checked(ring: R, start: i64, ranks: Vec<usize>, diffs: Vec<Matrix<R>>) -> Result<Self> {
        let c = Self::new(ring, start, ranks, diffs)?;
        c.validate()?;
        Ok(c)
    }

    pub fn with_labels(mut self, labels: Vec<Vec<String>>) -> Result<Self> {
        if labels.len() != self.ranks.len()
            || labels.iter().zip(&self.ranks).any(|(l, &r)| l.len() != r)
        {
            return Err(Error::InvalidArgument("labels do not match ranks".into()));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }
    pub fn start(&self) -> i64 {
        self.start
    }
    /// Top degree.
    pub fn end(&self) -> i64 {
        self.start + self.ranks.len() as i64 - 1
    }
    pub fn degrees(&self) -> std::ops::RangeInclusive<i64> {
        self.start..=self.end()
    }
    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }
    pub fn rank(&self, i: i64) -> usize {
        self.index(i).map_or(0, |k| self.ranks[k])
    }
    pub fn labels(&self, i: i64) -> Option<&[String]> {
        let k = self.index(i)?;
        self.labels.as_ref().map(|l| l[k].as_slice())
    }
    fn index(&self, i: i64) -> Option<usize> {
        (self.start..=self.end())
            .contains(&i)
            .then(|| (i - self.start) as usize)
    }

    /// The differential `C^i -> C^{i+1}` (a zero matrix outside the range).
    pub fn diff(&self, i: i64) -> Matrix<R> {
        match self.index(i) {
            Some(k) if k < self.diffs.len() => self.diffs[k].clone(),
            _ => Matrix::zeros(&self.ring, self.rank(i + 1), self.rank(i)),
        }
    }
    pub fn diffs(&self) -> &[Matrix<R>] {
        &self.diffs
    }

    /// Checks `d∘d = 0` in every degree.
    pub fn validate(&self) -> Result<()> {
        for k in 1..self.diffs.len() {
            let dd = self.diffs[k].mul(&self.ring, &self.diffs[k - 1]);
            if !dd.is_zero(&self.ring) {
                return Err(Error::NotAComplex {
                    degree: self.start + k as i64 - 1,
                });
            }
        }
        Ok(())
    }

    pub fn map_ring<S: Ring>(&self, target: S, f: impl Fn(&R::Elem) -> S::Elem) -> FreeComplex<S> {
        FreeComplex {
            diffs: self.diffs.iter().map(|d| d.map(&f)).collect(),
            ring: target,
            start: self.start,
            ranks: self.ranks.clone(),
            labels: self.labels.clone(),
        }
    }
}

impl<F: FiniteFree> FreeComplex<F> {
    /// The same complex viewed over the base ring.
    pub fn flatten(&self) -> FreeComplex<F::Base> {
        let n = self.ring.rank();
        FreeComplex {
            ring: self.ring.base_ring().clone(),
            start: self.start,
            ranks: self.ranks.iter().map(|r| r * n).collect(),
            diffs: self.diffs.iter().map(|d| d.flatten(&self.ring)).collect(),
            labels: None,
        }
    }
}

/// Rings over which complex cohomology can be computed.
pub trait HomologyRing: Ring {
    /// Invariants of `H^i` for every degree of the complex, in order.
    fn cohomology_all(&self, c: &FreeComplex<Self>) -> Result<Vec<AbGroupInvariants>>;
    /// Whether `s` kills every cohomology group.
    fn annihilates(&self, c: &FreeComplex<Self>, s: &Self::Elem) -> Result<bool>;
}

impl<R: HomologyRing> FreeComplex<R> {
    pub fn cohomology(&self) -> Result<Vec<AbGroupInvariants>> {
        self.ring.cohomology_all(self)
    }

    pub fn homology(&self, i: i64) -> Result<AbGroupInvariants> {
        match self.index(i) {
            Some(k) => Ok(self.cohomology()?.swap_remove(k)),
            None => Ok(AbGroupInvariants::zero()),
        }
    }

    /// True iff `s * H^i = 0` for all `i`.
    pub fn annihilator_check(&self, s: &R::Elem) -> Result<bool> {
        self.ring.annihilates(self, s)
    }
}

// ---------------------------------------------------------------------------
// Euclidean engine

/// Connected components of the graph on basis vectors whose edges are the
/// non-zero entries of the differentials and of the extra endomorphisms.
fn components<E: EuclideanRing>(c: &FreeComplex<E>, endos: &[Matrix<E>]) -> Vec<Vec<Vec<usize>>> {
    let offsets: Vec<usize> = c
        .ranks
        .iter()
        .scan(0, |acc, r| {
            let o = *acc;
            *acc += r;
            Some(o)
        })
        .collect();
    let total: usize = c.ranks.iter().sum();
    let mut parent: Vec<usize> = (0..total).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        let mut y = x;
        while p[y] != r {
            let next = p[y];
            p[y] = r;
            y = next;
        }
        r
    }
    let union = |p: &mut Vec<usize>, a: usize, b: usize| {
        let (ra, rb) = (find(p, a), find(p, b));
        if ra != rb {
            p[ra.max(rb)] = ra.min(rb);
        }
    };
    for (k, d) in c.diffs.iter().enumerate() {
        for (i, j) in d.nonzeros(&c.ring) {
            union(&mut parent, offsets[k + 1] + i, offsets[k] + j);
        }
    }
    for (k, m) in endos.iter().enumerate() {
        for (i, j) in m.nonzeros(&c.ring) {
            union(&mut parent, offsets[k] + i, offsets[k] + j);
        }
    }
    let mut by_root: std::collections::BTreeMap<usize, Vec<Vec<usize>>> = Default::default();
    for (k, &r) in c.ranks.iter().enumerate() {
        for i in 0..r {
            let root = find(&mut parent, offsets[k] + i);
            by_root
                .entry(root)
                .or_insert_with(|| vec![Vec::new(); c.ranks.len()])[k]
                .push(i);
        }
    }
    by_root.into_values().collect()
}

fn restrict<E: EuclideanRing>(c: &FreeComplex<E>, idx: &[Vec<usize>]) -> FreeComplex<E> {
    let diffs = c
        .diffs
        .iter()
        .enumerate()
        .map(|(k, d)| d.submatrix(&idx[k + 1], &idx[k]))
        .collect();
    FreeComplex {
        ring: c.ring.clone(),
        start: c.start,
        ranks: idx.iter().map(Vec::len).collect(),
        diffs,
        labels: None,
    }
}

/// Kernel of `d_out` presented through a Smith form of `d_out`.
struct Kernel<E: EuclideanRing> {
    /// Generators as columns, in the original coordinates.
    gens: Matrix<E>,
    /// `V^{-1}` of `d_out` and, per generator, the coordinate it occupies
    /// and the scalar `a_j` it is a multiple of.
    v_inv: Matrix<E>,
    slots: Vec<(usize, E::Elem)>,
    /// Annihilator of each generator.
    orders: Vec<Option<E::Elem>>,
}

fn kernel<E: EuclideanRing>(ring: &E, d_out: &Matrix<E>) -> Kernel<E> {
    let n = d_out.cols();
    let s = smith_normal_form(ring, d_out, false, true);
    let v = s.v.as_ref().expect("column transform");
    let mut slots = Vec::new();
    for j in 0..n {
        let dj = if j < s.diag.len() {
            s.diag[j].clone()
        } else {
            ring.zero()
        };
        if let Some(a) = ring.annihilator(&dj) {
            slots.push((j, a));
        }
    }
    let gens = Matrix::from_fn(n, slots.len(), |i, k| {
        let (j, a) = &slots[k];
        ring.mul(v.get(i, *j), a)
    });
    let orders = slots.iter().map(|(_, a)| ring.annihilator(a)).collect();
    Kernel {
        gens,
        v_inv: s.v_inv.expect("column transform"),
        slots,
        orders,
    }
}

fn homology_block<E: EuclideanRing>(
    ring: &E,
    d_in: &Matrix<E>,
    d_out: &Matrix<E>,
) -> ModuleInvariants<E> {
    let k = kernel(ring, d_out);
    let ngen = k.slots.len();
    if ngen == 0 {
        return ModuleInvariants::zero();
    }
    // Image of d_in in kernel-generator coordinates.
    let y = k.v_inv.mul(ring, d_in);
    let mut rel_cols: Vec<Vec<E::Elem>> = Vec::new();
    for col in 0..y.cols() {
        let c: Vec<E::Elem> = k
            .slots
            .iter()
            .map(|(j, a)| {
                ring.div_exact(y.get(*j, col), a)
                    .expect("image lies in the kernel")
            })
            .collect();
        if c.iter().any(|x| !ring.is_zero(x)) {
            rel_cols.push(c);
        }
    }
    for (g, ord) in k.orders.iter().enumerate() {
        if let Some(o) = ord {
            let mut c = vec![ring.zero(); ngen];
            c[g] = o.clone();
            rel_cols.push(c);
        }
    }
    let rel = Matrix::from_fn(ngen, rel_cols.len(), |i, j| rel_cols[j][i].clone());
    let s = smith_normal_form(ring, &rel, false, false);
    let mut gens: Vec<E::Elem> = s.diag.clone();
    gens.resize(ngen, ring.zero());
    ModuleInvariants::from_cyclic(ring, &gens)
}

/// Cohomology invariants over a Euclidean ring, degree by degree.
pub fn cohomology_euclid<E: EuclideanRing>(c: &FreeComplex<E>) -> Vec<ModuleInvariants<E>> {
    let ring = &c.ring;
    let mut out = vec![ModuleInvariants::zero(); c.ranks.len()];
    for comp in components(c, &[]) {
        let sub = restrict(c, &comp);
        for (k, i) in sub.degrees().enumerate() {
            if sub.ranks[k] == 0 {
                continue;
            }
            let h = homology_block(ring, &sub.diff(i - 1), &sub.diff(i));
            out[k] = out[k].sum(ring, &h);
        }
    }
    out
}

/// Whether the given degreewise endomorphisms (commuting with `d`) act by
/// zero on cohomology.
pub fn annihilated_by_endos<E: EuclideanRing>(c: &FreeComplex<E>, endos: &[Matrix<E>]) -> bool {
    let ring = &c.ring;
    for comp in components(c, endos) {
        let sub = restrict(c, &comp);
        for (k, i) in sub.degrees().enumerate() {
            if sub.ranks[k] == 0 {
                continue;
            }
            let e = endos[k].submatrix(&comp[k], &comp[k]);
            let ker = kernel(ring, &sub.diff(i));
            let target = e.mul(ring, &ker.gens);
            let d_in = sub.diff(i - 1);
            if d_in.cols() == 0 {
                if !target.is_zero(ring) {
                    return false;
                }
                continue;
            }
            let s: Smith<E> = smith_normal_form(ring, &d_in, true, true);
            if solve_with(ring, &s, d_in.rows(), d_in.cols(), &target).is_none() {
                return false;
            }
        }
    }
    true
}

fn direct_cohomology<E: EuclideanRing>(c: &FreeComplex<E>) -> Vec<AbGroupInvariants> {
    cohomology_euclid(c)
        .iter()
        .map(|m| m.to_ab(&c.ring))
        .collect()
}

fn direct_annihilates<E: EuclideanRing>(c: &FreeComplex<E>, s: &E::Elem) -> bool {
    let endos: Vec<Matrix<E>> = c
        .ranks
        .iter()
        .map(|&r| Matrix::scalar(&c.ring, r, s))
        .collect();
    annihilated_by_endos(c, &endos)
}

macro_rules! direct_homology {
    ($($t:ty),*) => {$(
        impl HomologyRing for $t {
            fn cohomology_all(&self, c: &FreeComplex<Self>) -> Result<Vec<AbGroupInvariants>> {
                Ok(direct_cohomology(c))
            }
            fn annihilates(&self, c: &FreeComplex<Self>, s: &Self::Elem) -> Result<bool> {
                Ok(direct_annihilates(c, s))
            }
        }
    )*};
}

direct_homology!(Integers, ZMod, Rationals);

macro_rules! field_poly_homology {
    ($($t:ident),*) => {$(
        impl<F: Field> HomologyRing for $t<F> {
            fn cohomology_all(&self, c: &FreeComplex<Self>) -> Result<Vec<AbGroupInvariants>> {
                require_field(self.base())?;
                Ok(direct_cohomology(c))
            }
            fn annihilates(&self, c: &FreeComplex<Self>, s: &Self::Elem) -> Result<bool> {
                require_field(self.base())?;
                Ok(direct_annihilates(c, s))
            }
        }
    )*};
}

field_poly_homology!(PolyRing, LaurentPolyRing);

fn require_field<F: Field>(f: &F) -> Result<()> {
    if f.is_field() {
        Ok(())
    } else {
        Err(Error::UnsupportedRing(format!(
            "{}: polynomial rings need field coefficients",
            f.name()
        )))
    }
}

fn flat_endos<F: FiniteFree>(c: &FreeComplex<F>, s: &F::Elem) -> Vec<Matrix<F::Base>> {
    let ring = c.ring();
    let n = ring.rank();
    let m = ring.mult_matrix(s);
    c.ranks
        .iter()
        .map(|&r| {
            let mut e = Matrix::zeros(ring.base_ring(), r * n, r * n);
            for b in 0..r {
                for i in 0..n {
                    for j in 0..n {
                        e.set(b * n + i, b * n + j, m[i * n + j].clone());
                    }
                }
            }
            e
        })
        .collect()
}

macro_rules! flattened_homology {
    ($($t:ident),*) => {$(
        impl<R: CoeffRing> HomologyRing for $t<R> {
            fn cohomology_all(&self, c: &FreeComplex<Self>) -> Result<Vec<AbGroupInvariants>> {
                Ok(direct_cohomology(&c.flatten()))
            }
            fn annihilates(&self, c: &FreeComplex<Self>, s: &Self::Elem) -> Result<bool> {
                Ok(annihilated_by_endos(&c.flatten(), &flat_endos(c, s)))
            }
        }
    )*};
}

flattened_homology!(SeriesRing, QuotientRing);

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qarith::{QPolynomial, QSeries};
    use num_bigint::BigInt;
    use proptest::prelude::*;

    fn zm(rows: Vec<Vec<i64>>) -> Matrix<Integers> {
        Matrix::from_rows(
            rows.into_iter()
                .map(|r| r.into_iter().map(BigInt::from).collect())
                .collect(),
        )
    }

    #[test]
    fn validation() {
        let c = FreeComplex::new(
            Integers,
            0,
            vec![1, 1, 1],
            vec![zm(vec![vec![2]]), zm(vec![vec![3]])],
        )
        .unwrap();
        assert_eq!(c.validate(), Err(Error::NotAComplex { degree: 0 }));
        let ok = FreeComplex::checked(Integers, 0, vec![1, 1], vec![zm(vec![vec![6]])]).unwrap();
        assert_eq!(ok.homology(0).unwrap(), AbGroupInvariants::zero());
        assert_eq!(ok.homology(1).unwrap().divisors, vec!["6"]);
        let zero =
            FreeComplex::checked(Integers, 0, vec![2, 1], vec![zm(vec![vec![0, 0]])]).unwrap();
        assert_eq!(zero.homology(0).unwrap(), AbGroupInvariants::free(2));
    }

    #[test]
    fn acyclic() {
        let c = FreeComplex::checked(
            Integers,
            0,
            vec![1, 2, 1],
            vec![zm(vec![vec![1], vec![0]]), zm(vec![vec![0, 1]])],
        )
        .unwrap();
        assert!(c
            .cohomology()
            .unwrap()
            .iter()
            .all(AbGroupInvariants::is_zero));
    }

    #[test]
    fn truncated_multiplication_by_t() {
        // 0 -> S --(q-1)--> S -> 0 over S = (Z/4)[q]/(q-1)^2
        let base = ZMod::new(2, 2).unwrap();
        let s = SeriesRing::new(base, 2).unwrap();
        let c = FreeComplex::checked(
            s.clone(),
            0,
            vec![1, 1],
            vec![Matrix::from_rows(vec![vec![QSeries::t(base, 2)]])],
        )
        .unwrap();
        let h = c.cohomology().unwrap();
        assert_eq!(h[0], AbGroupInvariants::free(1));
        assert_eq!(h[1], AbGroupInvariants::free(1));
        assert!(c.annihilator_check(&s.t()).unwrap());
        assert!(!c.annihilator_check(&s.one()).unwrap());
    }

    #[test]
    fn zmod_torsion_in_kernel() {
        // Z/9 --3--> Z/9: kernel 3Z/9 ≅ Z/3, cokernel Z/3.
        let r = ZMod::new(3, 2).unwrap();
        let c =
            FreeComplex::checked(r, 0, vec![1, 1], vec![Matrix::from_rows(vec![vec![3]])]).unwrap();
        let h = c.cohomology().unwrap();
        assert_eq!(h[0].divisors, vec!["3"]);
        assert_eq!(h[1].divisors, vec!["3"]);
        assert!(c.annihilator_check(&3).unwrap());
    }

    #[test]
    fn polynomial_rings_need_fields() {
        let r = PolyRing::new(ZMod::new(2, 2).unwrap());
        let c = FreeComplex::checked(r.clone(), 0, vec![1], vec![]).unwrap();
        assert!(matches!(c.cohomology(), Err(Error::UnsupportedRing(_))));
        let f = PolyRing::over_field(ZMod::field(2).unwrap()).unwrap();
        let t = QPolynomial::from_i64s(ZMod::field(2).unwrap(), &[1, 1]);
        let c =
            FreeComplex::checked(f, 0, vec![1, 1], vec![Matrix::from_rows(vec![vec![t]])]).unwrap();
        assert_eq!(c.homology(1).unwrap().divisors, vec!["1 + q"]);
    }

    proptest! {
        /// Over a field, the Euler characteristic of the complex equals that
        /// of its cohomology.
        #[test]
        fn euler_characteristic(a in proptest::collection::vec(0u64..5, 12), b in proptest::collection::vec(0u64..5, 12)) {
            let f = ZMod::field(5).unwrap();
            let d0 = Matrix::from_fn(3, 4, |i, j| a[i * 4 + j]);
            // Make d1 vanish on the image of d0 by composing with a
            // left annihilator computed from the cokernel.
            let x = Matrix::from_fn(2, 3, |i, j| b[i * 3 + j]);
            let s = smith_normal_form(&f, &d0, true, false);
            let u = s.u.unwrap();
            let mut kill = Matrix::zeros(&f, 3, 3);
            for i in s.rank..3 { kill.set(i, i, 1); }
            let d1 = x.mul(&f, &kill).mul(&f, &u);
            let c = FreeComplex::checked(f, 0, vec![4, 3, 2], vec![d0, d1]).unwrap();
            let h = c.cohomology().unwrap();
            prop_assert!(h.iter().all(|x| x.divisors.is_empty()));
            let chi_c = 4i64 - 3 + 2;
            let chi_h = h[0].free_rank as i64 - h[1].free_rank as i64 + h[2].free_rank as i64;
            prop_assert_eq!(chi_c, chi_h);
        }
    }
}
