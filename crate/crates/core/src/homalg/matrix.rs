//! Dense matrices over a ring context.

use serde_json::Value;

use crate::qarith::{FiniteFree, Ring};

#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<R: Ring> {
    rows: usize,
    cols: usize,
    data: Vec<R::Elem>,
}

impl<R: Ring> Matrix<R> {
    pub fn zeros(ring: &R, rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![ring.zero(); rows * cols],
        }
    }

    pub fn identity(ring: &R, n: usize) -> Self {
        Self::scalar(ring, n, &ring.one())
    }

    pub fn scalar(ring: &R, n: usize, s: &R::Elem) -> Self {
        let mut m = Self::zeros(ring, n, n);
        for i in 0..n {
            m.set(i, i, s.clone());
        }
        m
    }

    /// Builds from row-major data.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<R::Elem>) -> Self {
        assert_eq!(data.len(), rows * cols, "matrix data has wrong length");
        Matrix { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<R::Elem>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|x| x.len() == c), "ragged rows");
        Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> R::Elem) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn diagonal(ring: &R, rows: usize, cols: usize, diag: &[R::Elem]) -> Self {
        let mut m = Self::zeros(ring, rows, cols);
        for (i, d) in diag.iter().enumerate() {
            m.set(i, i, d.clone());
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }
    pub fn get(&self, i: usize, j: usize) -> &R::Elem {
        &self.data[i * self.cols + j]
    }
    pub fn set(&mut self, i: usize, j: usize, v: R::Elem) {
        self.data[i * self.cols + j] = v;
    }
    pub fn data(&self) -> &[R::Elem] {
        &self.data
    }
    pub fn row(&self, i: usize) -> &[R::Elem] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }
    pub fn column(&self, j: usize) -> Vec<R::Elem> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn is_zero(&self, ring: &R) -> bool {
        self.data.iter().all(|x| ring.is_zero(x))
    }

    /// Positions of non-zero entries.
    pub fn nonzeros<'a>(&'a self, ring: &'a R) -> impl Iterator<Item = (usize, usize)> + 'a {
        self.data
            .iter()
            .enumerate()
            .filter(|(_, x)| !ring.is_zero(x))
            .map(|(k, _)| (k / self.cols, k % self.cols))
    }

    pub fn mul(&self, ring: &R, o: &Self) -> Self {
        assert_eq!(self.cols, o.rows, "dimension mismatch in product");
        let mut out = Self::zeros(ring, self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if ring.is_zero(a) {
                    continue;
                }
                for j in 0..o.cols {
                    let b = o.get(k, j);
                    if ring.is_zero(b) {
                        continue;
                    }
                    let idx = i * o.cols + j;
                    out.data[idx] = ring.add(&out.data[idx], &ring.mul(a, b));
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, ring: &R, v: &[R::Elem]) -> Vec<R::Elem> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                self.row(i).iter().zip(v).fold(ring.zero(), |acc, (a, b)| {
                    if ring.is_zero(a) || ring.is_zero(b) {
                        acc
                    } else {
                        ring.add(&acc, &ring.mul(a, b))
                    }
                })
            })
            .collect()
    }

    pub fn add(&self, ring: &R, o: &Self) -> Self {
        assert_eq!(
            (self.rows, self.cols),
            (o.rows, o.cols),
            "dimension mismatch in sum"
        );
        let data = self
            .data
            .iter()
            .zip(&o.data)
            .map(|(a, b)| ring.add(a, b))
            .collect();
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn sub(&self, ring: &R, o: &Self) -> Self {
        self.add(ring, &o.neg(ring))
    }

    pub fn neg(&self, ring: &R) -> Self {
        self.map_entries(|x| ring.neg(x))
    }

    pub fn scale(&self, ring: &R, s: &R::Elem) -> Self {
        self.map_entries(|x| ring.mul(s, x))
    }

    pub fn map_entries(&self, f: impl Fn(&R::Elem) -> R::Elem) -> Self {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn map<S: Ring>(&self, f: impl Fn(&R::Elem) -> S::Elem) -> Matrix<S> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn transpose(&self) -> Self {
        Matrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        Matrix::from_fn(rows.len(), cols.len(), |i, j| {
            self.get(rows[i], cols[j]).clone()
        })
    }

    /// `[self | o]`.
    pub fn hstack(&self, o: &Self) -> Self {
        assert_eq!(self.rows, o.rows);
        Matrix::from_fn(self.rows, self.cols + o.cols, |i, j| {
            if j < self.cols {
                self.get(i, j).clone()
            } else {
                o.get(i, j - self.cols).clone()
            }
        })
    }

    /// `[self; o]`.
    pub fn vstack(&self, o: &Self) -> Self {
        assert_eq!(self.cols, o.cols);
        let mut data = self.data.clone();
        data.extend(o.data.iter().cloned());
        Matrix {
            rows: self.rows + o.rows,
            cols: self.cols,
            data,
        }
    }

    /// Places `blocks[(i, j)]` in a grid with the given row/column sizes.
    pub fn block(
        ring: &R,
        row_sizes: &[usize],
        col_sizes: &[usize],
        blocks: &[(usize, usize, &Matrix<R>)],
    ) -> Self {
        let r: usize = row_sizes.iter().sum();
        let c: usize = col_sizes.iter().sum();
        let mut m = Self::zeros(ring, r, c);
        for &(bi, bj, b) in blocks {
            let r0: usize = row_sizes[..bi].iter().sum();
            let c0: usize = col_sizes[..bj].iter().sum();
            assert_eq!(
                (b.rows, b.cols),
                (row_sizes[bi], col_sizes[bj]),
                "block size mismatch"
            );
            for i in 0..b.rows {
                for j in 0..b.cols {
                    m.set(r0 + i, c0 + j, b.get(i, j).clone());
                }
            }
        }
        m
    }

    /// Entrywise JSON, row-major.
    pub fn to_json(&self, f: impl Fn(&R::Elem) -> Value) -> Value {
        Value::Array(
            (0..self.rows)
                .map(|i| Value::Array(self.row(i).iter().map(&f).collect()))
                .collect(),
        )
    }

    /// Sparse JSON: `{"rows", "cols", "entries": [[i, j, value], ...]}`.
    pub fn to_sparse_json(&self, ring: &R, f: impl Fn(&R::Elem) -> Value) -> Value {
        let entries: Vec<Value> = self
            .nonzeros(ring)
            .map(|(i, j)| serde_json::json!([i, j, f(self.get(i, j))]))
            .collect();
        serde_json::json!({"rows": self.rows, "cols": self.cols, "entries": entries})
    }
}

impl<F: FiniteFree> Matrix<F> {
    /// Expands each entry into its multiplication matrix over the base.
    pub fn flatten(&self, ring: &F) -> Matrix<F::Base> {
        let n = ring.rank();
        let base = ring.base_ring();
        let mut out = Matrix::zeros(base, self.rows * n, self.cols * n);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let x = self.get(i, j);
                if ring.is_zero(x) {
                    continue;
                }
                let m = ring.mult_matrix(x);
                for a in 0..n {
                    for b in 0..n {
                        out.set(i * n + a, j * n + b, m[a * n + b].clone());
                    }
                }
            }
        }
        out
    }
}
