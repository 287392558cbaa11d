//! Smith normal form over Euclidean rings (including `Z/p^M`).

use super::matrix::Matrix;
use crate::qarith::EuclideanRing;

/// `U A V = D` with `D` diagonal, `d_1 | d_2 | ...`, each `d_i` normalized.
/// Transforms are only recorded when requested.
#[derive(Clone, Debug)]
pub struct Smith<E: EuclideanRing> {
    pub diag: Vec<E::Elem>,
    /// Number of non-zero diagonal entries; they come first.
    pub rank: usize,
    pub u: Option<Matrix<E>>,
    pub u_inv: Option<Matrix<E>>,
    pub v: Option<Matrix<E>>,
    pub v_inv: Option<Matrix<E>>,
}

impl<E: EuclideanRing> Smith<E> {
    pub fn d(&self, ring: &E, rows: usize, cols: usize) -> Matrix<E> {
        Matrix::diagonal(ring, rows, cols, &self.diag)
    }
}

struct Work<'a, E: EuclideanRing> {
    ring: &'a E,
    a: Matrix<E>,
    u: Option<(Matrix<E>, Matrix<E>)>,
    v: Option<(Matrix<E>, Matrix<E>)>,
}

impl<E: EuclideanRing> Work<'_, E> {
    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        swap_rows(&mut self.a, i, j);
        if let Some((u, ui)) = &mut self.u {
            swap_rows(u, i, j);
            swap_cols(ui, i, j);
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        swap_cols(&mut self.a, i, j);
        if let Some((v, vi)) = &mut self.v {
            swap_cols(v, i, j);
            swap_rows(vi, i, j);
        }
    }

    /// row_dst += c * row_src
    fn add_row(&mut self, dst: usize, src: usize, c: &E::Elem) {
        let r = self.ring;
        add_row(r, &mut self.a, dst, src, c);
        if let Some((u, ui)) = &mut self.u {
            add_row(r, u, dst, src, c);
            add_col(r, ui, src, dst, &r.neg(c));
        }
    }

    /// col_dst += c * col_src
    fn add_col(&mut self, dst: usize, src: usize, c: &E::Elem) {
        let r = self.ring;
        add_col(r, &mut self.a, dst, src, c);
        if let Some((v, vi)) = &mut self.v {
            add_col(r, v, dst, src, c);
            add_row(r, vi, src, dst, &r.neg(c));
        }
    }

    fn scale_row(&mut self, i: usize, unit: &E::Elem, unit_inv: &E::Elem) {
        let r = self.ring;
        scale_row(r, &mut self.a, i, unit);
        if let Some((u, ui)) = &mut self.u {
            scale_row(r, u, i, unit);
            scale_col(r, ui, i, unit_inv);
        }
    }

    fn min_norm(
        &self,
        rows: std::ops::Range<usize>,
        cols: std::ops::Range<usize>,
    ) -> Option<(usize, usize)> {
        let mut best: Option<(E::Norm, usize, usize)> = None;
        for i in rows {
            for j in cols.clone() {
                let x = self.a.get(i, j);
                if self.ring.is_zero(x) {
                    continue;
                }
                let n = self.ring.norm(x);
                if best.as_ref().is_none_or(|(b, _, _)| n < *b) {
                    best = Some((n, i, j));
                }
            }
        }
        best.map(|(_, i, j)| (i, j))
    }
}

fn swap_rows<E: EuclideanRing>(m: &mut Matrix<E>, i: usize, j: usize) {
    for k in 0..m.cols() {
        let a = m.get(i, k).clone();
        let b = m.get(j, k).clone();
        m.set(i, k, b);
        m.set(j, k, a);
    }
}

fn swap_cols<E: EuclideanRing>(m: &mut Matrix<E>, i: usize, j: usize) {
    for k in 0..m.rows() {
        let a = m.get(k, i).clone();
        let b = m.get(k, j).clone();
        m.set(k, i, b);
        m.set(k, j, a);
    }
}

fn add_row<E: EuclideanRing>(r: &E, m: &mut Matrix<E>, dst: usize, src: usize, c: &E::Elem) {
    for k in 0..m.cols() {
        let s = m.get(src, k);
        if r.is_zero(s) {
            continue;
        }
        let v = r.add(m.get(dst, k), &r.mul(c, s));
        m.set(dst, k, v);
    }
}

fn add_col<E: EuclideanRing>(r: &E, m: &mut Matrix<E>, dst: usize, src: usize, c: &E::Elem) {
    for k in 0..m.rows() {
        let s = m.get(k, src);
        if r.is_zero(s) {
            continue;
        }
        let v = r.add(m.get(k, dst), &r.mul(s, c));
        m.set(k, dst, v);
    }
}

fn scale_row<E: EuclideanRing>(r: &E, m: &mut Matrix<E>, i: usize, c: &E::Elem) {
    for k in 0..m.cols() {
        let v = r.mul(c, m.get(i, k));
        m.set(i, k, v);
    }
}

fn scale_col<E: EuclideanRing>(r: &E, m: &mut Matrix<E>, j: usize, c: &E::Elem) {
    for k in 0..m.rows() {
        let v = r.mul(m.get(k, j), c);
        m.set(k, j, v);
    }
}

/// Computes the Smith normal form of `a`, optionally recording the row
/// transform `U` (with inverse) and column transform `V` (with inverse).
pub fn smith_normal_form<E: EuclideanRing>(
    ring: &E,
    a: &Matrix<E>,
    track_u: bool,
    track_v: bool,
) -> Smith<E> {
    let (rows, cols) = (a.rows(), a.cols());
    let mut w = Work {
        ring,
        a: a.clone(),
        u: track_u.then(|| (Matrix::identity(ring, rows), Matrix::identity(ring, rows))),
        v: track_v.then(|| (Matrix::identity(ring, cols), Matrix::identity(ring, cols))),
    };
    let n = rows.min(cols);
    let mut rank = 0;
    for t in 0..n {
        let Some((pi, pj)) = w.min_norm(t..rows, t..cols) else {
            break;
        };
        w.swap_rows(t, pi);
        w.swap_cols(t, pj);
        loop {
            let mut smaller = None;
            for i in t + 1..rows {
                if ring.is_zero(w.a.get(i, t)) {
                    continue;
                }
                let (q, r) = ring.div_rem(w.a.get(i, t), w.a.get(t, t));
                w.add_row(i, t, &ring.neg(&q));
                if !ring.is_zero(&r) {
                    smaller = Some(i);
                }
            }
            if smaller.is_some() {
                let (i, _) = w.min_norm(t..rows, t..t + 1).expect("non-zero remainder");
                w.swap_rows(t, i);
                continue;
            }
            for j in t + 1..cols {
                if ring.is_zero(w.a.get(t, j)) {
                    continue;
                }
                let (q, r) = ring.div_rem(w.a.get(t, j), w.a.get(t, t));
                w.add_col(j, t, &ring.neg(&q));
                if !ring.is_zero(&r) {
                    smaller = Some(j);
                }
            }
            if smaller.is_some() {
                let (_, j) = w.min_norm(t..t + 1, t..cols).expect("non-zero remainder");
                w.swap_cols(t, j);
                continue;
            }
            let pivot = w.a.get(t, t).clone();
            let bad = (t + 1..rows)
                .find(|&i| (t + 1..cols).any(|j| !ring.divides(&pivot, w.a.get(i, j))));
            match bad {
                Some(i) => w.add_row(t, i, &ring.one()),
                None => break,
            }
        }
        let (_, unit) = ring.normalize(w.a.get(t, t));
        let unit_inv = ring.inv(&unit).expect("normalization unit");
        w.scale_row(t, &unit_inv, &unit);
        rank += 1;
    }
    let diag = (0..n).map(|i| w.a.get(i, i).clone()).collect();
    let (u, u_inv) = match w.u {
        Some((u, ui)) => (Some(u), Some(ui)),
        None => (None, None),
    };
    let (v, v_inv) = match w.v {
        Some((v, vi)) => (Some(v), Some(vi)),
        None => (None, None),
    };
    Smith {
        diag,
        rank,
        u,
        u_inv,
        v,
        v_inv,
    }
}

/// Solves `a x = b` for every column of `b`; `None` if some column has no
/// solution.
pub fn solve<E: EuclideanRing>(ring: &E, a: &Matrix<E>, b: &Matrix<E>) -> Option<Matrix<E>> {
    let s = smith_normal_form(ring, a, true, true);
    solve_with(ring, &s, a.rows(), a.cols(), b)
}

/// As [`solve`], reusing a Smith form computed with both transforms.
pub fn solve_with<E: EuclideanRing>(
    ring: &E,
    s: &Smith<E>,
    rows: usize,
    cols: usize,
    b: &Matrix<E>,
) -> Option<Matrix<E>> {
    let u = s.u.as_ref().expect("row transform");
    let v = s.v.as_ref().expect("column transform");
    let ub = u.mul(ring, b);
    let mut y = Matrix::zeros(ring, cols, b.cols());
    for k in 0..b.cols() {
        for i in 0..rows {
            let rhs = ub.get(i, k);
            if i < s.rank {
                y.set(i, k, ring.div_exact(rhs, &s.diag[i])?);
            } else if !ring.is_zero(rhs) {
                return None;
            }
        }
    }
    Some(v.mul(ring, &y))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qarith::{Integers, PolyRing, QPolynomial, Ring, ZMod};
    use num_bigint::BigInt;
    use proptest::prelude::*;

    fn z(rows: Vec<Vec<i64>>) -> Matrix<Integers> {
        Matrix::from_rows(
            rows.into_iter()
                .map(|r| r.into_iter().map(BigInt::from).collect())
                .collect(),
        )
    }

    fn check<E: EuclideanRing>(ring: &E, a: &Matrix<E>) -> Smith<E> {
        let s = smith_normal_form(ring, a, true, true);
        let d = s.d(ring, a.rows(), a.cols());
        let (u, ui, v, vi) = (
            s.u.as_ref().unwrap(),
            s.u_inv.as_ref().unwrap(),
            s.v.as_ref().unwrap(),
            s.v_inv.as_ref().unwrap(),
        );
        assert_eq!(u.mul(ring, a).mul(ring, v), d);
        assert_eq!(ui.mul(ring, &d).mul(ring, vi), *a);
        assert_eq!(u.mul(ring, ui), Matrix::identity(ring, a.rows()));
        assert_eq!(v.mul(ring, vi), Matrix::identity(ring, a.cols()));
        for w in s.diag.windows(2) {
            assert!(ring.divides(&w[0], &w[1]), "divisibility chain");
        }
        s
    }

    #[test]
    fn diag_two_three() {
        let s = check(&Integers, &z(vec![vec![2, 0], vec![0, 3]]));
        assert_eq!(s.diag, vec![BigInt::from(1), BigInt::from(6)]);
    }

    #[test]
    fn zero_matrix() {
        let s = check(&Integers, &z(vec![vec![0, 0, 0], vec![0, 0, 0]]));
        assert_eq!(s.rank, 0);
    }

    #[test]
    fn polynomial_entry() {
        let f = ZMod::field(3).unwrap();
        let r = PolyRing::over_field(f).unwrap();
        let t = QPolynomial::from_i64s(f, &[-1, 1]);
        let s = check(&r, &Matrix::from_rows(vec![vec![t.clone()]]));
        assert_eq!(s.diag, vec![t]);
    }

    #[test]
    fn solving() {
        let a = z(vec![vec![2, 4], vec![6, 8]]);
        let b = z(vec![vec![2], vec![2]]);
        let x = solve(&Integers, &a, &b).unwrap();
        assert_eq!(a.mul(&Integers, &x), b);
        assert!(solve(&Integers, &a, &z(vec![vec![1], vec![0]])).is_none());
    }

    proptest! {
        #[test]
        fn random_integer_matrices(rows in 1usize..5, cols in 1usize..5, seed in proptest::collection::vec(-9i64..10, 16)) {
            let a = Matrix::from_fn(rows, cols, |i, j| BigInt::from(seed[i * 4 + j]));
            check(&Integers, &a);
        }

        #[test]
        fn random_zmod_matrices(rows in 1usize..6, cols in 1usize..6, seed in proptest::collection::vec(0u64..27, 25)) {
            let r = ZMod::new(3, 3).unwrap();
            let a = Matrix::from_fn(rows, cols, |i, j| seed[i * 5 + j]);
            let s = check(&r, &a);
            for d in &s.diag[..s.rank] {
                let (c, _) = r.normalize(d);
                prop_assert_eq!(&c, d);
            }
            prop_assert!(s.diag[s.rank..].iter().all(|x| r.is_zero(x)));
        }
    }
}
