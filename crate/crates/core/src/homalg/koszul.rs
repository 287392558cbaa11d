//! Koszul complexes of commuting endomorphisms `g_1, ..., g_d`.
//!
//! Degree `k` is `⊕_{|J| = k} M e_J`, ordered by `J` (lexicographic) and
//! then by the basis of `M`. The differential is
//! `m e_J ↦ Σ_{j ∉ J} (-1)^{#{i ∈ J : i < j}} (g_j - 1) m e_{J ∪ {j}}`.

use super::complex::FreeComplex;
use super::matrix::Matrix;
use crate::error::{Error, Result};
use crate::qarith::Ring;

/// Subsets of `{0, ..., d-1}` of size `k` in lexicographic order.
pub fn index_sets(d: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, d: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for j in start..d {
            cur.push(j);
            go(j + 1, d, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, d, k, &mut Vec::new(), &mut out);
    out
}

/// `(-1)^{#{i ∈ J : i < j}}`, the sign of `dT_j ∧ dT_J` against the sorted
/// basis vector `dT_{J ∪ {j}}`.
pub fn wedge_sign(set: &[usize], j: usize) -> i64 {
    if set.iter().filter(|&&i| i < j).count() % 2 == 0 {
        1
    } else {
        -1
    }
}

/// `J ∪ {j}`, sorted.
pub fn insert_index(set: &[usize], j: usize) -> Vec<usize> {
    let mut v = set.to_vec();
    let pos = v.partition_point(|&i| i < j);
    v.insert(pos, j);
    v
}

/// Builds the Koszul complex of `ops` acting on a free module of rank `r`.
pub fn koszul_complex<R: Ring>(ring: &R, ops: &[Matrix<R>]) -> Result<FreeComplex<R>> {
    let d = ops.len();
    let r = ops.first().map_or(0, Matrix::rows);
    if ops.iter().any(|g| g.rows() != r || g.cols() != r) {
        return Err(Error::InvalidArgument(
            "operators must be square of equal size".into(),
        ));
    }
    for i in 0..d {
        for j in i + 1..d {
            let a = ops[i].mul(ring, &ops[j]);
            let b = ops[j].mul(ring, &ops[i]);
            if a != b {
                return Err(Error::NonCommuting { i, j });
            }
        }
    }
    let minus_one: Vec<Matrix<R>> = ops
        .iter()
        .map(|g| g.sub(ring, &Matrix::identity(ring, r)))
        .collect();
    let sets: Vec<Vec<Vec<usize>>> = (0..=d).map(|k| index_sets(d, k)).collect();
    let mut diffs = Vec::new();
    for k in 0..d {
        let (src, tgt) = (&sets[k], &sets[k + 1]);
        let mut m = Matrix::zeros(ring, tgt.len() * r, src.len() * r);
        for (a, set) in src.iter().enumerate() {
            for j in (0..d).filter(|j| !set.contains(j)) {
                let b = tgt
                    .iter()
                    .position(|s| *s == insert_index(set, j))
                    .expect("index set");
                let sign = ring.from_i64(wedge_sign(set, j));
                let g = &minus_one[j];
                for x in 0..r {
                    for y in 0..r {
                        let v = g.get(x, y);
                        if !ring.is_zero(v) {
                            m.set(b * r + x, a * r + y, ring.mul(&sign, v));
                        }
                    }
                }
            }
        }
        diffs.push(m);
    }
    let ranks = sets.iter().map(|s| s.len() * r).collect();
    let labels = sets
        .iter()
        .map(|ss| {
            ss.iter()
                .flat_map(|s| (0..r).map(move |x| format!("{s:?}:{x}")))
                .collect()
        })
        .collect();
    FreeComplex::checked(ring.clone(), 0, ranks, diffs)?.with_labels(labels)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homalg::AbGroupInvariants;
    use crate::qarith::{LaurentPoly, LaurentPolyRing, ZMod};

    #[test]
    fn lexicographic_sets() {
        assert_eq!(index_sets(3, 2), vec![vec![0, 1], vec![0, 2], vec![1, 2]]);
        assert_eq!(index_sets(2, 0), vec![Vec::<usize>::new()]);
        assert_eq!(wedge_sign(&[0, 2], 1), -1);
        assert_eq!(insert_index(&[0, 2], 1), vec![0, 1, 2]);
    }

    #[test]
    fn one_operator() {
        let f = ZMod::field(3).unwrap();
        let g = Matrix::from_rows(vec![vec![2u64]]);
        let k = koszul_complex(&f, &[g]).unwrap();
        assert_eq!(k.diff(0), Matrix::from_rows(vec![vec![1u64]]));
    }

    #[test]
    fn identities_give_zero_differentials() {
        let f = ZMod::field(5).unwrap();
        let id = Matrix::identity(&f, 2);
        let k = koszul_complex(&f, &[id.clone(), id.clone(), id]).unwrap();
        assert!(k.diffs().iter().all(|d| d.is_zero(&f)));
        assert_eq!(k.ranks(), &[2, 6, 6, 2]);
    }

    #[test]
    fn non_commuting() {
        let f = ZMod::field(2).unwrap();
        let a = Matrix::from_rows(vec![vec![1u64, 1], vec![0, 1]]);
        let b = Matrix::from_rows(vec![vec![1u64, 0], vec![1, 1]]);
        assert_eq!(
            koszul_complex(&f, &[a, b]).unwrap_err(),
            Error::NonCommuting { i: 0, j: 1 }
        );
    }

    #[test]
    fn scalar_q_powers() {
        // g_i = q^{a_i} on F_3[q^±1]: H^0 is the common kernel of q^{a_i} - 1,
        // which is zero unless all a_i vanish.
        let f = ZMod::field(3).unwrap();
        let r = LaurentPolyRing::over_field(f).unwrap();
        let q = |e| Matrix::from_rows(vec![vec![LaurentPoly::monomial(f, 1, e)]]);
        let k = koszul_complex(&r, &[q(2), q(3)]).unwrap();
        let h = k.cohomology().unwrap();
        assert_eq!(h[0], AbGroupInvariants::zero());
        // gcd(q^2 - 1, q^3 - 1) = q - 1: H^2 = R/(q - 1), H^1 = R/(q - 1).
        assert_eq!(h[2].divisors, vec!["2 + q"]);
        assert_eq!(h[1].divisors, vec!["2 + q"]);
        let k0 = koszul_complex(&r, &[q(0), q(0)]).unwrap();
        assert_eq!(k0.homology(0).unwrap(), AbGroupInvariants::free(1));
    }
}
