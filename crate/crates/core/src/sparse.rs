//! Compressed sparse row storage for complex matrices.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Add, Mul, Sub};

use nalgebra::DMatrix;
use num_complex::Complex64;
#[cfg(not(feature = "std"))]
use num_traits::Float;

use crate::error::{Error, Result};

pub(crate) const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub(crate) const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Complex sparse matrix in CSR layout. Column indices within each row are
/// strictly increasing and explicit zeros are never stored.
#[derive(Debug, Clone, PartialEq)]
pub struct CsrMatrix {
    nrows: usize,
    ncols: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    values: Vec<Complex64>,
}

impl CsrMatrix {
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        Self {
            nrows,
            ncols,
            row_ptr: vec![0; nrows + 1],
            col_idx: Vec::new(),
            values: Vec::new(),
        }
    }

    pub fn identity(n: usize) -> Self {
        Self {
            nrows: n,
            ncols: n,
            row_ptr: (0..=n).collect(),
            col_idx: (0..n).collect(),
            values: vec![ONE; n],
        }
    }

    /// Builds a matrix from `(row, col, value)` entries. Duplicates are summed in a
    /// fixed order (sorted by position, then by input order), so the result does not
    /// depend on how the caller interleaved independent contributions beyond that.
    pub fn from_triplets(nrows: usize, ncols: usize, mut triplets: Vec<(usize, usize, Complex64)>) -> Self {
        debug_assert!(triplets.iter().all(|&(r, c, _)| r < nrows && c < ncols));
        triplets.sort_by_key(|&(r, c, _)| (r, c));
        let mut row_ptr = vec![0usize; nrows + 1];
        let mut col_idx = Vec::with_capacity(triplets.len());
        let mut values: Vec<Complex64> = Vec::with_capacity(triplets.len());
        let mut rows = Vec::with_capacity(triplets.len());
        let mut iter = triplets.into_iter().peekable();
        while let Some((r, c, mut v)) = iter.next() {
            while let Some(&(r2, c2, v2)) = iter.peek() {
                if r2 != r || c2 != c {
                    break;
                }
                v += v2;
                iter.next();
            }
            if v != ZERO {
                rows.push(r);
                col_idx.push(c);
                values.push(v);
            }
        }
        for r in rows {
            row_ptr[r + 1] += 1;
        }
        for i in 0..nrows {
            row_ptr[i + 1] += row_ptr[i];
        }
        Self {
            nrows,
            ncols,
            row_ptr,
            col_idx,
            values,
        }
    }

    pub fn from_dense(m: &DMatrix<Complex64>) -> Self {
        let mut triplets = Vec::new();
        for i in 0..m.nrows() {
            for j in 0..m.ncols() {
                let v = m[(i, j)];
                if v != ZERO {
                    triplets.push((i, j, v));
                }
            }
        }
        Self::from_triplets(m.nrows(), m.ncols(), triplets)
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub(crate) fn row_ptr(&self) -> &[usize] {
        &self.row_ptr
    }

    pub(crate) fn col_idx(&self) -> &[usize] {
        &self.col_idx
    }

    pub(crate) fn values(&self) -> &[Complex64] {
        &self.values
    }

    /// Non-zero entries of row `i` as `(column, value)`.
    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, Complex64)> + '_ {
        let range = self.row_ptr[i]..self.row_ptr[i + 1];
        self.col_idx[range.clone()]
            .iter()
            .copied()
            .zip(self.values[range].iter().copied())
    }

    /// All stored entries in row-major order.
    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, Complex64)> + '_ {
        (0..self.nrows).flat_map(move |i| self.row(i).map(move |(j, v)| (i, j, v)))
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        let range = self.row_ptr[i]..self.row_ptr[i + 1];
        match self.col_idx[range.clone()].binary_search(&j) {
            Ok(k) => self.values[range.start + k],
            Err(_) => ZERO,
        }
    }

    /// `y = A x`
    pub fn matvec_into(&self, x: &[Complex64], y: &mut [Complex64]) {
        debug_assert_eq!(x.len(), self.ncols);
        debug_assert_eq!(y.len(), self.nrows);
        for (i, yi) in y.iter_mut().enumerate() {
            let mut acc = ZERO;
            for k in self.row_ptr[i]..self.row_ptr[i + 1] {
                acc += self.values[k] * x[self.col_idx[k]];
            }
            *yi = acc;
        }
    }

    pub fn matvec(&self, x: &[Complex64]) -> Result<Vec<Complex64>> {
        if x.len() != self.ncols {
            return Err(Error::Shape {
                expected: self.ncols,
                found: x.len(),
            });
        }
        let mut y = vec![ZERO; self.nrows];
        self.matvec_into(x, &mut y);
        Ok(y)
    }

    /// `y = x† A` returned as a row vector (conjugated back, i.e. `A† x`).
    pub fn adjoint_matvec(&self, x: &[Complex64]) -> Vec<Complex64> {
        let mut y = vec![ZERO; self.ncols];
        for (i, xi) in x.iter().enumerate() {
            for (j, v) in self.row(i) {
                y[j] += v.conj() * xi;
            }
        }
        y
    }

    pub fn map_values(&self, f: impl Fn(Complex64) -> Complex64) -> Self {
        let triplets = self.triplets().map(|(i, j, v)| (i, j, f(v))).collect();
        Self::from_triplets(self.nrows, self.ncols, triplets)
    }

    pub fn transpose(&self) -> Self {
        let triplets = self.triplets().map(|(i, j, v)| (j, i, v)).collect();
        Self::from_triplets(self.ncols, self.nrows, triplets)
    }

    pub fn conj(&self) -> Self {
        self.map_values(|v| v.conj())
    }

    pub fn adjoint(&self) -> Self {
        let triplets = self.triplets().map(|(i, j, v)| (j, i, v.conj())).collect();
        Self::from_triplets(self.ncols, self.nrows, triplets)
    }

    /// Sparse product `self · rhs`.
    pub fn matmul(&self, rhs: &CsrMatrix) -> Result<Self> {
        if self.ncols != rhs.nrows {
            return Err(Error::Shape {
                expected: self.ncols,
                found: rhs.nrows,
            });
        }
        let mut triplets = Vec::new();
        for i in 0..self.nrows {
            for (k, a) in self.row(i) {
                for (j, b) in rhs.row(k) {
                    triplets.push((i, j, a * b));
                }
            }
        }
        Ok(Self::from_triplets(self.nrows, rhs.ncols, triplets))
    }

    pub fn to_dense(&self) -> DMatrix<Complex64> {
        let mut m = DMatrix::zeros(self.nrows, self.ncols);
        for (i, j, v) in self.triplets() {
            m[(i, j)] = v;
        }
        m
    }

    /// Maximum absolute column sum.
    pub fn norm_one(&self) -> f64 {
        let mut sums = vec![0.0; self.ncols];
        for (_, j, v) in self.triplets() {
            sums[j] += v.norm();
        }
        sums.into_iter().fold(0.0, f64::max)
    }

    /// Maximum absolute row sum.
    pub fn norm_inf(&self) -> f64 {
        (0..self.nrows)
            .map(|i| self.row(i).map(|(_, v)| v.norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    /// Cheap upper bound on the spectral norm, `sqrt(‖A‖₁‖A‖∞)`.
    pub fn norm_bound(&self) -> f64 {
        (self.norm_one() * self.norm_inf()).sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Restriction to the rows and columns listed in `indices` (ascending).
    pub fn principal_submatrix(&self, indices: &[usize]) -> Self {
        let mut local = vec![usize::MAX; self.ncols];
        for (k, &g) in indices.iter().enumerate() {
            local[g] = k;
        }
        let mut triplets = Vec::new();
        for (k, &g) in indices.iter().enumerate() {
            for (j, v) in self.row(g) {
                if local[j] != usize::MAX {
                    triplets.push((k, local[j], v));
                }
            }
        }
        Self::from_triplets(indices.len(), indices.len(), triplets)
    }

    /// Connected components of the undirected graph whose edges are the stored
    /// off-diagonal entries. Components are listed by their smallest index and
    /// each is sorted ascending. A block-diagonal permutation of the matrix is read
    /// straight off this partition.
    pub fn connected_components(&self) -> Vec<Vec<usize>> {
        assert_eq!(self.nrows, self.ncols, "components need a square matrix");
        let n = self.nrows;
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for (i, j, _) in self.triplets() {
            if i != j {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a != b {
                    let (lo, hi) = if a < b { (a, b) } else { (b, a) };
                    parent[hi] = lo;
                }
            }
        }
        let mut label = vec![usize::MAX; n];
        let mut components: Vec<Vec<usize>> = Vec::new();
        for i in 0..n {
            let root = find(&mut parent, i);
            if label[root] == usize::MAX {
                label[root] = components.len();
                components.push(Vec::new());
            }
            components[label[root]].push(i);
        }
        components
    }
}

impl Add for &CsrMatrix {
    type Output = CsrMatrix;

    fn add(self, rhs: &CsrMatrix) -> CsrMatrix {
        assert_eq!((self.nrows, self.ncols), (rhs.nrows, rhs.ncols));
        let triplets = self.triplets().chain(rhs.triplets()).collect();
        CsrMatrix::from_triplets(self.nrows, self.ncols, triplets)
    }
}

impl Sub for &CsrMatrix {
    type Output = CsrMatrix;

    fn sub(self, rhs: &CsrMatrix) -> CsrMatrix {
        assert_eq!((self.nrows, self.ncols), (rhs.nrows, rhs.ncols));
        let triplets = self
            .triplets()
            .chain(rhs.triplets().map(|(i, j, v)| (i, j, -v)))
            .collect();
        CsrMatrix::from_triplets(self.nrows, self.ncols, triplets)
    }
}

impl Mul<Complex64> for &CsrMatrix {
    type Output = CsrMatrix;

    fn mul(self, rhs: Complex64) -> CsrMatrix {
        self.map_values(|v| v * rhs)
    }
}

impl Mul<f64> for &CsrMatrix {
    type Output = CsrMatrix;

    fn mul(self, rhs: f64) -> CsrMatrix {
        self.map_values(|v| v * rhs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn duplicates_are_summed_and_zeros_dropped() {
        let m = CsrMatrix::from_triplets(
            2,
            2,
            vec![
                (1, 1, c(1.0, 0.0)),
                (0, 1, c(2.0, 1.0)),
                (1, 1, c(-1.0, 0.0)),
                (0, 1, c(1.0, 0.0)),
            ],
        );
        assert_eq!(m.nnz(), 1);
        assert_eq!(m.get(0, 1), c(3.0, 1.0));
        assert_eq!(m.get(1, 1), ZERO);
    }

    #[test]
    fn product_matches_dense() {
        let a = CsrMatrix::from_triplets(
            2,
            3,
            vec![(0, 0, c(1.0, 1.0)), (0, 2, c(2.0, 0.0)), (1, 1, c(0.0, -1.0))],
        );
        let b = CsrMatrix::from_triplets(
            3,
            2,
            vec![(0, 1, c(1.0, 0.0)), (1, 0, c(3.0, 0.0)), (2, 1, c(0.0, 1.0))],
        );
        let sparse = a.matmul(&b).unwrap().to_dense();
        let dense = a.to_dense() * b.to_dense();
        assert_eq!(sparse, dense);
        assert!(b.matmul(&b).is_err());
    }

    #[test]
    fn adjoint_conjugates_and_transposes() {
        let a = CsrMatrix::from_triplets(2, 2, vec![(0, 1, c(1.0, 2.0))]);
        assert_eq!(a.adjoint().get(1, 0), c(1.0, -2.0));
        assert_eq!(a.transpose().get(1, 0), c(1.0, 2.0));
    }

    #[test]
    fn components_of_block_matrix() {
        // {0, 2} coupled, {1} isolated, {3, 4} coupled one-way.
        let m = CsrMatrix::from_triplets(5, 5, vec![(0, 2, ONE), (1, 1, ONE), (4, 3, ONE), (3, 3, ONE)]);
        assert_eq!(m.connected_components(), vec![vec![0, 2], vec![1], vec![3, 4]]);
        let sub = m.principal_submatrix(&[3, 4]);
        assert_eq!(sub.get(1, 0), ONE);
        assert_eq!(sub.get(0, 0), ONE);
    }

    #[test]
    fn norms() {
        let m = CsrMatrix::from_triplets(
            2,
            2,
            vec![(0, 0, c(3.0, 4.0)), (0, 1, c(1.0, 0.0)), (1, 1, c(-2.0, 0.0))],
        );
        assert_eq!(m.norm_inf(), 6.0);
        assert_eq!(m.norm_one(), 5.0);
        assert_eq!(m.max_abs(), 5.0);
    }
}
