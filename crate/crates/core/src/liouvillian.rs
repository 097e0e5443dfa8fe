//! Lindblad generator as a sparse superoperator on column-stacked density matrices.
//!
//! Vectorisation stacks columns: element `ρ[i, j]` of a `D × D` matrix sits at
//! position `i + D·j`, so that `vec(A ρ B) = (Bᵀ ⊗ A) vec(ρ)`.

use alloc::vec::Vec;

use nalgebra::DMatrix;
use num_complex::Complex64;
#[cfg(not(feature = "std"))]
use num_traits::Float;

use crate::chain::ChainSpec;
use crate::error::{Error, Result};
use crate::operators::{build_hamiltonian, build_jump_operators, HilbertOperator, JumpOperator};
use crate::sparse::CsrMatrix;

/// Position of `ρ[row, col]` in the vectorised state.
#[inline]
pub fn vec_index(row: usize, col: usize, dim: usize) -> usize {
    row + dim * col
}

/// Column-stacked copy of a square matrix.
pub fn vectorize(rho: &DMatrix<Complex64>) -> Result<Vec<Complex64>> {
    if rho.nrows() != rho.ncols() {
        return Err(Error::Shape {
            expected: rho.nrows(),
            found: rho.ncols(),
        });
    }
    // nalgebra stores column-major, which is exactly column stacking.
    Ok(rho.as_slice().to_vec())
}

/// Inverse of [`vectorize`]; the length must be a perfect square.
pub fn devectorize(v: &[Complex64]) -> Result<DMatrix<Complex64>> {
    let dim = (v.len() as f64).sqrt().round() as usize;
    if dim * dim != v.len() {
        return Err(Error::Shape {
            expected: dim * dim,
            found: v.len(),
        });
    }
    Ok(DMatrix::from_column_slice(dim, dim, v))
}

/// Lindblad generator `L` with `d vec(ρ)/dt = L vec(ρ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Superoperator {
    matrix: CsrMatrix,
    n_sites: usize,
}

impl Superoperator {
    pub fn from_matrix(matrix: CsrMatrix, n_sites: usize) -> Result<Self> {
        let expected = 1usize << (2 * n_sites);
        if matrix.nrows() != expected || matrix.ncols() != expected {
            return Err(Error::Shape {
                expected,
                found: matrix.nrows(),
            });
        }
        Ok(Self { matrix, n_sites })
    }

    pub fn matrix(&self) -> &CsrMatrix {
        &self.matrix
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    /// Hilbert-space dimension `D = 2^N`.
    pub fn hilbert_dim(&self) -> usize {
        1 << self.n_sites
    }

    /// Liouville-space dimension `D² = 4^N`.
    pub fn dimension(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn nnz(&self) -> usize {
        self.matrix.nnz()
    }

    /// Positions of the diagonal elements `ρ[i, i]` in the vectorised state.
    pub fn diagonal_positions(&self) -> impl Iterator<Item = usize> {
        let dim = self.hilbert_dim();
        (0..dim).map(move |i| vec_index(i, i, dim))
    }

    /// `max |vec(I)† L|`, zero for a trace-preserving generator.
    pub fn trace_defect(&self) -> f64 {
        let dim = self.hilbert_dim();
        let mut row_sum = alloc::vec![Complex64::new(0.0, 0.0); self.dimension()];
        for i in 0..dim {
            for (j, v) in self.matrix.row(vec_index(i, i, dim)) {
                row_sum[j] += v;
            }
        }
        row_sum.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }
}

/// Appends the triplets of `scale · (I ⊗ x)`.
fn push_left_identity(triplets: &mut Vec<(usize, usize, Complex64)>, x: &CsrMatrix, scale: Complex64) {
    let dim = x.nrows();
    for (i, k, v) in x.triplets() {
        for j in 0..dim {
            triplets.push((vec_index(i, j, dim), vec_index(k, j, dim), scale * v));
        }
    }
}

/// Appends the triplets of `scale · (xᵀ ⊗ I)`.
fn push_right_transpose(triplets: &mut Vec<(usize, usize, Complex64)>, x: &CsrMatrix, scale: Complex64) {
    let dim = x.nrows();
    for (l, j, v) in x.triplets() {
        for i in 0..dim {
            triplets.push((vec_index(i, j, dim), vec_index(i, l, dim), scale * v));
        }
    }
}

fn push_dissipator(triplets: &mut Vec<(usize, usize, Complex64)>, jump: &JumpOperator) {
    let a = &jump.operator;
    let dim = a.nrows();
    let rate = Complex64::new(jump.rate, 0.0);
    // conj(A) ⊗ A  ↔  A ρ A†
    for (j, l, outer) in a.triplets() {
        for (i, k, inner) in a.triplets() {
            triplets.push((vec_index(i, j, dim), vec_index(k, l, dim), rate * outer.conj() * inner));
        }
    }
    let ada = a.adjoint().matmul(a).expect("square jump operator");
    let half = rate * -0.5;
    push_left_identity(triplets, &ada, half);
    push_right_transpose(triplets, &ada, half);
}

/// `L = −i(I⊗H − Hᵀ⊗I) + Σⱼ rⱼ (Āⱼ⊗Aⱼ − ½ I⊗Aⱼ†Aⱼ − ½ (Aⱼ†Aⱼ)ᵀ⊗I)`.
pub fn assemble_from_parts(hamiltonian: &HilbertOperator, jumps: &[JumpOperator]) -> Result<Superoperator> {
    let dim = hamiltonian.nrows();
    if !dim.is_power_of_two() || hamiltonian.ncols() != dim {
        return Err(Error::Shape {
            expected: dim.next_power_of_two(),
            found: dim,
        });
    }
    if let Some(bad) = jumps.iter().find(|j| j.operator.nrows() != dim) {
        return Err(Error::Shape {
            expected: dim,
            found: bad.operator.nrows(),
        });
    }
    let mut triplets = Vec::new();
    let minus_i = Complex64::new(0.0, -1.0);
    push_left_identity(&mut triplets, hamiltonian, minus_i);
    push_right_transpose(&mut triplets, hamiltonian, -minus_i);
    for jump in jumps {
        push_dissipator(&mut triplets, jump);
    }
    let n_sites = dim.trailing_zeros() as usize;
    Superoperator::from_matrix(CsrMatrix::from_triplets(dim * dim, dim * dim, triplets), n_sites)
}

/// Full generator of the chain: coherent part, both baths and dephasing.
pub fn assemble_liouvillian(spec: &ChainSpec) -> Superoperator {
    let h = build_hamiltonian(spec);
    let jumps = build_jump_operators(spec);
    assemble_from_parts(&h, &jumps).expect("operators built from one spec share a dimension")
}

/// `devectorize(L · vectorize(ρ))`.
pub fn apply_liouvillian(l: &Superoperator, rho: &DMatrix<Complex64>) -> Result<DMatrix<Complex64>> {
    if rho.nrows() != l.hilbert_dim() {
        return Err(Error::Shape {
            expected: l.hilbert_dim(),
            found: rho.nrows(),
        });
    }
    let v = vectorize(rho)?;
    devectorize(&l.matrix.matvec(&v)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::BathSpec;
    use alloc::vec;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn identity_vectorizes_column_stacked() {
        let v = vectorize(&DMatrix::identity(2, 2)).unwrap();
        assert_eq!(v, vec![c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]);
        let m = DMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(2.0, 0.0), c(3.0, 0.0), c(4.0, 0.0)]);
        // column stacking: (ρ00, ρ10, ρ01, ρ11)
        assert_eq!(vectorize(&m).unwrap()[1], c(3.0, 0.0));
        assert_eq!(devectorize(&vectorize(&m).unwrap()).unwrap(), m);
    }

    #[test]
    fn devectorize_rejects_non_square_length() {
        assert!(matches!(devectorize(&[c(0.0, 0.0); 3]), Err(Error::Shape { .. })));
        assert!(vectorize(&DMatrix::zeros(2, 3)).is_err());
    }

    #[test]
    fn single_site_decay_rates() {
        // two cold baths of rate 1/2 on the same site: total emission rate 1
        let bath = BathSpec::with_occupation(0.5, 0.0).unwrap();
        let spec = ChainSpec::uniform(1, 1.0, 0.0, bath, bath, 0.0).unwrap();
        let l = assemble_liouvillian(&spec);
        let d = l.matrix().to_dense();
        // vec positions: 0 = ρ_ee, 1 = ρ_ge, 2 = ρ_eg, 3 = ρ_gg
        assert!((d[(0, 0)] - c(-1.0, 0.0)).norm() < 1e-15);
        assert!((d[(3, 0)] - c(1.0, 0.0)).norm() < 1e-15);
        assert_eq!(d[(3, 3)], c(0.0, 0.0));
        // coherence decays at half the population rate and rotates at ω
        assert!((d[(1, 1)] - c(-0.5, 1.0)).norm() < 1e-15);
        assert!((d[(2, 2)] - c(-0.5, -1.0)).norm() < 1e-15);
        assert!(l.trace_defect() < 1e-15);
    }

    #[test]
    fn wrong_dimension_is_a_shape_error() {
        let bath = BathSpec::with_occupation(1.0, 0.0).unwrap();
        let spec = ChainSpec::uniform(2, 1.0, 1.0, bath, bath, 0.0).unwrap();
        let l = assemble_liouvillian(&spec);
        assert!(apply_liouvillian(&l, &DMatrix::identity(2, 2)).is_err());
    }
}
