//! Chain maps and mapping cones.

use super::complex::FreeComplex;
use super::matrix::Matrix;
use crate::error::{Error, Result};
use crate::qarith::Ring;

/// Checks `u_{i+1} d_C = d_D u_i` in every degree; `maps[k]` acts in degree
/// `source.start() + k`, and degrees outside either complex count as zero.
pub fn check_chain_map<R: Ring>(
    source: &FreeComplex<R>,
    target: &FreeComplex<R>,
    maps: &[Matrix<R>],
) -> Result<()> {
    let ring = source.ring();
    if maps.len() != source.ranks().len() {
        return Err(Error::InvalidArgument(
            "one matrix per source degree is required".into(),
        ));
    }
    let u = |i: i64| -> Matrix<R> {
        let k = i - source.start();
        if k >= 0 && (k as usize) < maps.len() {
            maps[k as usize].clone()
        } else {
            Matrix::zeros(ring, target.rank(i), source.rank(i))
        }
    };
    for (k, m) in maps.iter().enumerate() {
        let i = source.start() + k as i64;
        if m.rows() != target.rank(i) || m.cols() != source.rank(i) {
            return Err(Error::InvalidArgument(format!(
                "chain map has wrong shape in degree {i}"
            )));
        }
    }
    for i in source.start() - 1..=source.end() {
        let lhs = u(i + 1).mul(ring, &source.diff(i));
        let rhs = target.diff(i).mul(ring, &u(i));
        if lhs != rhs {
            return Err(Error::NotChainMap { degree: i });
        }
    }
    Ok(())
}

/// `cone(u)^i = C^{i+1} ⊕ D^i` with `d(c, x) = (-d_C c, u c + d_D x)`.
pub fn mapping_cone<R: Ring>(
    source: &FreeComplex<R>,
    target: &FreeComplex<R>,
    maps: &[Matrix<R>],
) -> Result<FreeComplex<R>> {
    check_chain_map(source, target, maps)?;
    let ring = source.ring();
    let lo = (source.start() - 1).min(target.start());
    let hi = (source.end() - 1).max(target.end());
    let u = |i: i64| -> Matrix<R> {
        let k = i - source.start();
        if k >= 0 && (k as usize) < maps.len() {
            maps[k as usize].clone()
        } else {
            Matrix::zeros(ring, target.rank(i), source.rank(i))
        }
    };
    let ranks: Vec<usize> = (lo..=hi)
        .map(|i| source.rank(i + 1) + target.rank(i))
        .collect();
    let mut diffs = Vec::new();
    for i in lo..hi {
        let rows = [source.rank(i + 2), target.rank(i + 1)];
        let cols = [source.rank(i + 1), target.rank(i)];
        let dc = source.diff(i + 1).neg(ring);
        let ui = u(i + 1);
        let dd = target.diff(i);
        diffs.push(Matrix::block(
            ring,
            &rows,
            &cols,
            &[(0, 0, &dc), (1, 0, &ui), (1, 1, &dd)],
        ));
    }
    FreeComplex::checked(ring.clone(), lo, ranks, diffs)
}
