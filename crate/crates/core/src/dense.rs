//! Dense kernels: rank-revealing LU with complete pivoting and null-space extraction.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
#[cfg(not(feature = "std"))]
use num_traits::Float;

use crate::sparse::{CsrMatrix, ZERO};

/// `P A Q = L U` with complete pivoting, stopped once the largest remaining
/// entry falls below `rank_tolerance` times the first pivot.
#[derive(Debug, Clone)]
pub struct FullPivLu {
    n: usize,
    /// Row-major; strict lower part holds `L` (unit diagonal implied), upper part `U`.
    lu: Vec<Complex64>,
    col_perm: Vec<usize>,
    rank: usize,
    pivots: Vec<f64>,
}

impl FullPivLu {
    /// Factors the square row-major matrix `a` of order `n`.
    pub fn new(mut a: Vec<Complex64>, n: usize, rank_tolerance: f64) -> Self {
        assert_eq!(a.len(), n * n);
        let mut col_perm: Vec<usize> = (0..n).collect();
        let mut pivots = Vec::with_capacity(n);
        let mut rank = n;
        let mut scale = 0.0;
        for k in 0..n {
            let (mut p, mut q, mut best) = (k, k, -1.0);
            for i in k..n {
                let row = &a[i * n..(i + 1) * n];
                for (j, v) in row.iter().enumerate().skip(k) {
                    let m = v.norm_sqr();
                    if m > best {
                        best = m;
                        p = i;
                        q = j;
                    }
                }
            }
            let magnitude = best.sqrt();
            if k == 0 {
                scale = magnitude;
            }
            if magnitude == 0.0 || magnitude <= rank_tolerance * scale {
                rank = k;
                break;
            }
            pivots.push(magnitude);
            if p != k {
                for j in 0..n {
                    a.swap(p * n + j, k * n + j);
                }
            }
            if q != k {
                for i in 0..n {
                    a.swap(i * n + q, i * n + k);
                }
                col_perm.swap(q, k);
            }
            let (head, tail) = a.split_at_mut((k + 1) * n);
            let pivot_row = &head[k * n..];
            let inv = pivot_row[k].inv();
            for row in tail.chunks_exact_mut(n) {
                if row[k] == ZERO {
                    continue;
                }
                let l = row[k] * inv;
                row[k] = l;
                for (x, u) in row[k + 1..].iter_mut().zip(&pivot_row[k + 1..]) {
                    *x -= l * u;
                }
            }
        }
        Self {
            n,
            lu: a,
            col_perm,
            rank,
            pivots,
        }
    }

    pub fn from_sparse(m: &CsrMatrix, rank_tolerance: f64) -> Self {
        let n = m.nrows();
        let mut a = vec![ZERO; n * n];
        for (i, j, v) in m.triplets() {
            a[i * n + j] = v;
        }
        Self::new(a, n, rank_tolerance)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn nullity(&self) -> usize {
        self.n - self.rank
    }

    /// Magnitudes of the accepted pivots, in elimination order.
    pub fn pivots(&self) -> &[f64] {
        &self.pivots
    }

    /// One basis vector of the right null space per free column.
    pub fn null_space(&self) -> Vec<Vec<Complex64>> {
        let (n, r) = (self.n, self.rank);
        (r..n)
            .map(|free| {
                let mut y = vec![ZERO; n];
                y[free] = Complex64::new(1.0, 0.0);
                for i in (0..r).rev() {
                    let row = &self.lu[i * n..(i + 1) * n];
                    let mut acc = row[free];
                    for j in i + 1..r {
                        acc += row[j] * y[j];
                    }
                    y[i] = -acc / row[i];
                }
                let mut x = vec![ZERO; n];
                for (pos, &col) in self.col_perm.iter().enumerate() {
                    x[col] = y[pos];
                }
                x
            })
            .collect()
    }
}
