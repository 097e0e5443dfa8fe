//! Preconditioned restarted GMRES for the square nonsingular systems produced by
//! the replaced-row steady-state formulation.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
#[cfg(not(feature = "std"))]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::sparse::{CsrMatrix, ZERO};

/// Incomplete LU factorisation with zero fill-in, sharing the sparsity pattern of `A`.
#[derive(Debug, Clone)]
pub struct Ilu0 {
    factors: CsrMatrix,
    diag_pos: Vec<usize>,
    factor_values: Vec<Complex64>,
}

impl Ilu0 {
    /// Tiny pivots are lifted to `pivot_floor · max|A|` (keeping their phase) instead of failing.
    pub fn new(a: &CsrMatrix) -> Result<Self> {
        let n = a.nrows();
        if n != a.ncols() {
            return Err(Error::Shape {
                expected: n,
                found: a.ncols(),
            });
        }
        let row_ptr = a.row_ptr();
        let col_idx = a.col_idx();
        let mut vals = a.values().to_vec();
        let mut diag_pos = vec![usize::MAX; n];
        for i in 0..n {
            if let Some(off) = col_idx[row_ptr[i]..row_ptr[i + 1]].iter().position(|&c| c == i) {
                diag_pos[i] = row_ptr[i] + off;
            }
            if diag_pos[i] == usize::MAX {
                return Err(Error::Singular);
            }
        }
        let floor = 1e-12 * a.max_abs();
        let mut marker = vec![usize::MAX; n];
        for i in 0..n {
            let (start, end) = (row_ptr[i], row_ptr[i + 1]);
            for k in start..end {
                marker[col_idx[k]] = k;
            }
            for kk in start..end {
                let k = col_idx[kk];
                if k >= i {
                    break;
                }
                let pivot = vals[diag_pos[k]];
                let l = vals[kk] / pivot;
                vals[kk] = l;
                for kj in diag_pos[k] + 1..row_ptr[k + 1] {
                    let m = marker[col_idx[kj]];
                    if m != usize::MAX {
                        let u = vals[kj];
                        vals[m] -= l * u;
                    }
                }
            }
            let d = vals[diag_pos[i]];
            if d.norm() < floor {
                vals[diag_pos[i]] = if d == ZERO {
                    Complex64::new(floor, 0.0)
                } else {
                    d / d.norm() * floor
                };
            }
            for k in start..end {
                marker[col_idx[k]] = usize::MAX;
            }
        }
        Ok(Self {
            factors: a.clone(),
            diag_pos,
            factor_values: vals,
        })
    }

    /// Solves `L U z = r` in place.
    pub fn apply(&self, z: &mut [Complex64]) {
        let row_ptr = self.factors.row_ptr();
        let col_idx = self.factors.col_idx();
        let vals = &self.factor_values;
        let n = z.len();
        for i in 0..n {
            let mut acc = z[i];
            for k in row_ptr[i]..self.diag_pos[i] {
                acc -= vals[k] * z[col_idx[k]];
            }
            z[i] = acc;
        }
        for i in (0..n).rev() {
            let mut acc = z[i];
            for k in self.diag_pos[i] + 1..row_ptr[i + 1] {
                acc -= vals[k] * z[col_idx[k]];
            }
            z[i] = acc / vals[self.diag_pos[i]];
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GmresOptions {
    pub restart: usize,
    pub max_iterations: usize,
    /// Target for `‖b − A x‖ / ‖b‖`.
    pub tolerance: f64,
}

impl Default for GmresOptions {
    fn default() -> Self {
        Self {
            restart: 60,
            max_iterations: 5000,
            tolerance: 1e-13,
        }
    }
}

#[derive(Debug, Clone)]
pub struct GmresOutcome {
    pub solution: Vec<Complex64>,
    pub iterations: usize,
    pub relative_residual: f64,
}

fn norm(v: &[Complex64]) -> f64 {
    v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

fn dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// Relative residual beyond which the iteration is abandoned.
const DIVERGENCE_FACTOR: f64 = 1e6;

/// Right-preconditioned GMRES(m). The residual tracked is the true residual of
/// the unpreconditioned system, recomputed explicitly at every restart.
pub fn gmres(a: &CsrMatrix, b: &[Complex64], precond: Option<&Ilu0>, opts: &GmresOptions) -> Result<GmresOutcome> {
    let n = a.nrows();
    if b.len() != n {
        return Err(Error::Shape {
            expected: n,
            found: b.len(),
        });
    }
    let b_norm = norm(b);
    let mut x = vec![ZERO; n];
    if b_norm == 0.0 {
        return Ok(GmresOutcome {
            solution: x,
            iterations: 0,
            relative_residual: 0.0,
        });
    }
    let m = opts.restart.max(1);
    let precondition = |v: &mut [Complex64]| {
        if let Some(p) = precond {
            p.apply(v);
        }
    };

    let mut iterations = 0;
    let mut r = vec![ZERO; n];
    let mut w = vec![ZERO; n];
    let mut z = vec![ZERO; n];
    loop {
        a.matvec_into(&x, &mut r);
        for (ri, bi) in r.iter_mut().zip(b) {
            *ri = bi - *ri;
        }
        let beta = norm(&r);
        let rel = beta / b_norm;
        // an unstable preconditioner shows up as a growing true residual
        let diverged = !rel.is_finite() || rel > DIVERGENCE_FACTOR;
        if rel <= opts.tolerance || iterations >= opts.max_iterations || diverged {
            if rel <= opts.tolerance {
                return Ok(GmresOutcome {
                    solution: x,
                    iterations,
                    relative_residual: rel,
                });
            }
            return Err(Error::NonConvergence {
                residual: rel,
                iterations,
            });
        }

        let mut basis: Vec<Vec<Complex64>> = Vec::with_capacity(m + 1);
        basis.push(r.iter().map(|v| v / beta).collect());
        // Hessenberg columns, already rotated.
        let mut h: Vec<Vec<Complex64>> = Vec::with_capacity(m);
        let mut cs: Vec<f64> = Vec::with_capacity(m);
        let mut sn: Vec<Complex64> = Vec::with_capacity(m);
        let mut g = vec![ZERO; m + 1];
        g[0] = Complex64::new(beta, 0.0);
        let mut k = 0;
        while k < m && iterations < opts.max_iterations {
            z.copy_from_slice(&basis[k]);
            precondition(&mut z);
            a.matvec_into(&z, &mut w);
            let mut col = vec![ZERO; k + 2];
            for (j, v) in basis.iter().enumerate() {
                let hj = dot(v, &w);
                for (wi, vi) in w.iter_mut().zip(v) {
                    *wi -= hj * vi;
                }
                col[j] = hj;
            }
            let h_next = norm(&w);
            col[k + 1] = Complex64::new(h_next, 0.0);

            for j in 0..k {
                let (c, s) = (cs[j], sn[j]);
                let t = c * col[j] + s * col[j + 1];
                col[j + 1] = -s.conj() * col[j] + c * col[j + 1];
                col[j] = t;
            }
            let (c, s, rr) = givens(col[k], col[k + 1]);
            col[k] = rr;
            col[k + 1] = ZERO;
            cs.push(c);
            sn.push(s);
            g[k + 1] = -s.conj() * g[k];
            g[k] *= c;
            h.push(col);
            iterations += 1;
            k += 1;

            let estimate = g[k].norm() / b_norm;
            if h_next == 0.0 || estimate <= opts.tolerance * 0.1 {
                break;
            }
            basis.push(w.iter().map(|v| v / h_next).collect());
        }

        // Back-substitute the k×k triangular system and update x.
        let mut y = vec![ZERO; k];
        for i in (0..k).rev() {
            let mut acc = g[i];
            for j in i + 1..k {
                acc -= h[j][i] * y[j];
            }
            y[i] = acc / h[i][i];
        }
        z.iter_mut().for_each(|v| *v = ZERO);
        for (j, yj) in y.iter().enumerate() {
            for (zi, vi) in z.iter_mut().zip(&basis[j]) {
                *zi += yj * vi;
            }
        }
        precondition(&mut z);
        for (xi, zi) in x.iter_mut().zip(&z) {
            *xi += zi;
        }
    }
}

/// Complex Givens rotation zeroing `b` in `(a, b)`; returns `(c, s, r)` with
/// `[c s; -s̄ c]·[a; b] = [r; 0]`.
fn givens(a: Complex64, b: Complex64) -> (f64, Complex64, Complex64) {
    let (na, nb) = (a.norm(), b.norm());
    if nb == 0.0 {
        return (1.0, ZERO, a);
    }
    if na == 0.0 {
        return (0.0, b.conj() / nb, Complex64::new(nb, 0.0));
    }
    let r = na.hypot(nb);
    let phase = a / na;
    (na / r, phase * b.conj() / r, phase * r)
}
