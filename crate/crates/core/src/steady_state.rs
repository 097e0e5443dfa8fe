//! Stationary states `L ρ = 0`, `Tr ρ = 1`.
//!
//! Both solver paths first split `L` into the connected components of its
//! sparsity graph; `L` is block diagonal in that partition, so each block can be
//! treated on its own.
//!
//! * Dense: every block is factored with complete pivoting and its numerical
//!   rank read off the pivots. The total null-space dimension must be exactly one.
//! * Sparse: only the block carrying the diagonal of ρ is solved. One of its
//!   population rows is replaced by the trace constraint, which makes the system
//!   square and regular when the steady state is unique, and the result is found
//!   with ILU(0)-preconditioned GMRES.
//!
//! Post-processing is fixed: scale to unit trace, Hermitise `(ρ + ρ†)/2`, then
//! renormalise the trace.

use alloc::vec;
use alloc::vec::Vec;

use nalgebra::DMatrix;
use num_complex::Complex64;
#[cfg(not(feature = "std"))]
use num_traits::Float;

use crate::chain::ChainSpec;
use crate::dense::FullPivLu;
use crate::error::{Error, Result};
use crate::iterative::{gmres, GmresOptions, Ilu0};
use crate::liouvillian::{assemble_liouvillian, devectorize, vectorize, Superoperator};
use crate::sparse::{CsrMatrix, ONE, ZERO};

/// Chains up to this many sites use the dense path under [`SolverMethod::Auto`].
pub const DENSE_SITE_LIMIT: usize = 6;

/// A density matrix on the chain Hilbert space. Construction only checks the
/// shape; the physical invariants are checked by [`DensityMatrix::validate`].
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: DMatrix<Complex64>,
    n_sites: usize,
}

impl DensityMatrix {
    pub fn new(matrix: DMatrix<Complex64>) -> Result<Self> {
        let dim = matrix.nrows();
        if matrix.ncols() != dim {
            return Err(Error::Shape {
                expected: dim,
                found: matrix.ncols(),
            });
        }
        if !dim.is_power_of_two() {
            return Err(Error::Shape {
                expected: dim.next_power_of_two(),
                found: dim,
            });
        }
        Ok(Self {
            n_sites: dim.trailing_zeros() as usize,
            matrix,
        })
    }

    /// Pure state `|ψ⟩⟨ψ|` (not normalised for you).
    pub fn from_pure(psi: &[Complex64]) -> Result<Self> {
        let v = nalgebra::DVector::from_column_slice(psi);
        Self::new(&v * v.adjoint())
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn into_matrix(self) -> DMatrix<Complex64> {
        self.matrix
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn dimension(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn trace(&self) -> Complex64 {
        self.matrix.trace()
    }

    /// `Tr(A ρ)`.
    pub fn expectation(&self, op: &CsrMatrix) -> Complex64 {
        op.triplets().map(|(i, j, a)| a * self.matrix[(j, i)]).sum()
    }

    /// `max |ρ − ρ†|`.
    pub fn hermiticity_error(&self) -> f64 {
        let m = &self.matrix;
        let mut worst: f64 = 0.0;
        for i in 0..m.nrows() {
            for j in i..m.ncols() {
                worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
            }
        }
        worst
    }

    /// Eigenvalues of the Hermitian part, ascending.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let herm = (&self.matrix + self.matrix.adjoint()) * Complex64::new(0.5, 0.0);
        let mut ev: Vec<f64> = herm.symmetric_eigenvalues().iter().copied().collect();
        ev.sort_by(|a, b| a.partial_cmp(b).expect("finite eigenvalues"));
        ev
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues()[0]
    }

    /// Checks Hermiticity, unit trace and positivity at the given tolerances.
    pub fn validate(&self, tolerances: &StateTolerances) -> Result<()> {
        if self.hermiticity_error() >= tolerances.hermiticity {
            return Err(Error::InvalidSpec("density matrix is not Hermitian"));
        }
        if (self.trace() - ONE).norm() >= tolerances.trace {
            return Err(Error::InvalidSpec("density matrix does not have unit trace"));
        }
        if self.min_eigenvalue() <= -tolerances.positivity {
            return Err(Error::InvalidSpec("density matrix has a negative eigenvalue"));
        }
        Ok(())
    }
}

/// Acceptance thresholds for [`DensityMatrix::validate`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateTolerances {
    pub hermiticity: f64,
    pub trace: f64,
    pub positivity: f64,
}

impl Default for StateTolerances {
    fn default() -> Self {
        Self {
            hermiticity: 1e-10,
            trace: 1e-12,
            positivity: 1e-10,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolverMethod {
    /// Dense up to [`DENSE_SITE_LIMIT`] sites, sparse above.
    Auto,
    DenseNullspace,
    SparseIterative,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions {
    pub method: SolverMethod,
    /// Accept ρ when `‖L vec ρ‖ ≤ tol · ‖L‖ · ‖vec ρ‖`.
    pub residual_tolerance: f64,
    /// Pivots below this fraction of the largest one count as zero (dense path).
    pub rank_tolerance: f64,
    /// GMRES iteration budget (sparse path).
    pub max_iterations: usize,
    pub restart: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            method: SolverMethod::Auto,
            residual_tolerance: 1e-12,
            rank_tolerance: 1e-10,
            max_iterations: 20_000,
            restart: 80,
        }
    }
}

impl SolverOptions {
    pub fn with_method(method: SolverMethod) -> Self {
        Self {
            method,
            ..Self::default()
        }
    }
}

/// Diagnostics of a successful solve.
#[derive(Debug, Clone, PartialEq)]
pub struct SolveInfo {
    pub method: SolverMethod,
    /// `‖L vec ρ‖ / (‖L‖ ‖vec ρ‖)` of the returned state.
    pub relative_residual: f64,
    pub components: usize,
    /// Size of the block holding the populations.
    pub population_block: usize,
    pub iterations: usize,
    /// Whether the accepted sparse solve used the ILU(0) preconditioner.
    pub preconditioned: bool,
}

pub fn solve_steady_state(l: &Superoperator, opts: &SolverOptions) -> Result<DensityMatrix> {
    solve_steady_state_with_info(l, opts).map(|(rho, _)| rho)
}

/// Assembles the generator of `spec` and solves it.
pub fn steady_state(spec: &ChainSpec, opts: &SolverOptions) -> Result<DensityMatrix> {
    solve_steady_state(&assemble_liouvillian(spec), opts)
}

pub fn solve_steady_state_with_info(l: &Superoperator, opts: &SolverOptions) -> Result<(DensityMatrix, SolveInfo)> {
    if opts.residual_tolerance <= 0.0 || opts.rank_tolerance <= 0.0 {
        return Err(Error::InvalidSpec("solver tolerances must be positive"));
    }
    let method = match opts.method {
        SolverMethod::Auto if l.n_sites() <= DENSE_SITE_LIMIT => SolverMethod::DenseNullspace,
        SolverMethod::Auto => SolverMethod::SparseIterative,
        m => m,
    };
    let components = l.matrix().connected_components();
    let mut component_of = vec![0usize; l.dimension()];
    for (c, members) in components.iter().enumerate() {
        for &i in members {
            component_of[i] = c;
        }
    }
    let mut population_components: Vec<usize> = l.diagonal_positions().map(|p| component_of[p]).collect();
    population_components.sort_unstable();
    population_components.dedup();

    let (vector, iterations, block, preconditioned) = match method {
        SolverMethod::DenseNullspace => {
            let (v, its, block) = dense_null_vector(l, &components, opts)?;
            (v, its, block, false)
        }
        _ => {
            if population_components.len() > 1 {
                return Err(Error::DegenerateNullspace {
                    dimension: population_components.len(),
                });
            }
            let members = &components[population_components[0]];
            let (v, its, pre) = sparse_population_solve(l, members, opts)?;
            (v, its, members.len(), pre)
        }
    };

    let rho = finish(&vector)?;
    let relative_residual = relative_residual(l, &rho)?;
    if relative_residual.is_nan() || relative_residual > opts.residual_tolerance {
        return Err(Error::NonConvergence {
            residual: relative_residual,
            iterations,
        });
    }
    let info = SolveInfo {
        method,
        relative_residual,
        components: components.len(),
        population_block: block,
        iterations,
        preconditioned,
    };
    Ok((rho, info))
}

/// `‖L vec ρ‖₂ / (‖L‖ ‖vec ρ‖₂)` with `‖L‖` bounded by `sqrt(‖L‖₁‖L‖∞)`.
pub fn relative_residual(l: &Superoperator, rho: &DensityMatrix) -> Result<f64> {
    let v = vectorize(rho.matrix())?;
    let lv = l.matrix().matvec(&v)?;
    let num = lv.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
    let den = l.matrix().norm_bound() * v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
    Ok(if den == 0.0 { num } else { num / den })
}

fn finish(vector: &[Complex64]) -> Result<DensityMatrix> {
    let mut m = devectorize(vector)?;
    let tr = m.trace();
    if tr.norm() == 0.0 || !tr.norm().is_finite() {
        return Err(Error::Singular);
    }
    m /= tr;
    let mut m = (&m + m.adjoint()) * Complex64::new(0.5, 0.0);
    let tr = m.trace().re;
    m /= Complex64::new(tr, 0.0);
    DensityMatrix::new(m)
}

fn dense_null_vector(
    l: &Superoperator,
    components: &[Vec<usize>],
    opts: &SolverOptions,
) -> Result<(Vec<Complex64>, usize, usize)> {
    let mut nullity = 0;
    let mut found: Option<(Vec<Complex64>, usize)> = None;
    for members in components {
        let block = l.matrix().principal_submatrix(members);
        let lu = FullPivLu::from_sparse(&block, opts.rank_tolerance);
        nullity += lu.nullity();
        if nullity > 1 {
            return Err(Error::DegenerateNullspace { dimension: nullity });
        }
        if lu.nullity() == 1 {
            let local = lu.null_space().pop().expect("one null vector");
            let mut full = vec![ZERO; l.dimension()];
            for (&g, v) in members.iter().zip(local) {
                full[g] = v;
            }
            found = Some((full, members.len()));
        }
    }
    match found {
        Some((v, size)) => Ok((v, 0, size)),
        None => Err(Error::DegenerateNullspace { dimension: 0 }),
    }
}

fn sparse_population_solve(
    l: &Superoperator,
    members: &[usize],
    opts: &SolverOptions,
) -> Result<(Vec<Complex64>, usize, bool)> {
    let dim = l.hilbert_dim();
    let block = l.matrix().principal_submatrix(members);
    let diagonal_local: Vec<usize> = members
        .iter()
        .enumerate()
        .filter(|(_, &g)| g % (dim + 1) == 0)
        .map(|(k, _)| k)
        .collect();
    let replaced = diagonal_local[0];
    let mut triplets: Vec<(usize, usize, Complex64)> = block.triplets().filter(|&(i, _, _)| i != replaced).collect();
    triplets.extend(diagonal_local.iter().map(|&k| (replaced, k, ONE)));
    let system = CsrMatrix::from_triplets(block.nrows(), block.ncols(), triplets);
    let mut rhs = vec![ZERO; block.nrows()];
    rhs[replaced] = ONE;

    let tolerance = 0.1 * opts.residual_tolerance;
    // ILU(0) is fast when it works but can be unstable for weakly damped
    // chains; it gets a short budget before plain GMRES takes over.
    let mut used = 0;
    if let Ok(ilu) = Ilu0::new(&system) {
        let budget = opts.max_iterations.min(ILU_ATTEMPT_RESTARTS * opts.restart.max(1));
        let attempt = GmresOptions {
            restart: opts.restart,
            max_iterations: budget,
            tolerance,
        };
        match gmres(&system, &rhs, Some(&ilu), &attempt) {
            Ok(outcome) => return Ok((scatter(l, members, outcome.solution), outcome.iterations, true)),
            Err(Error::NonConvergence { iterations, .. }) => used = iterations,
            Err(e) => return Err(e),
        }
    }
    let plain = GmresOptions {
        restart: opts.restart,
        max_iterations: opts.max_iterations.saturating_sub(used),
        tolerance,
    };
    let outcome = gmres(&system, &rhs, None, &plain).map_err(|e| match e {
        Error::NonConvergence { residual, iterations } => Error::NonConvergence {
            residual,
            iterations: iterations + used,
        },
        e => e,
    })?;
    Ok((scatter(l, members, outcome.solution), outcome.iterations + used, false))
}

/// Restart cycles granted to the preconditioned attempt.
const ILU_ATTEMPT_RESTARTS: usize = 10;

fn scatter(l: &Superoperator, members: &[usize], local: Vec<Complex64>) -> Vec<Complex64> {
    let mut full = vec![ZERO; l.dimension()];
    for (&g, v) in members.iter().zip(local) {
        full[g] = v;
    }
    full
}
