//! Negativity, two-qubit concurrence and the two-site entanglement region over
//! the bath populations `(s₁, s_N)` at equal effective rates `γ₁ = γ_N`.

use alloc::vec;
use alloc::vec::Vec;

use nalgebra::DMatrix;
use num_complex::Complex64;
#[cfg(not(feature = "std"))]
use num_traits::Float;

use crate::chain::{BathSpec, ChainSpec};
use crate::error::{Error, Result};
use crate::liouvillian::assemble_liouvillian;
use crate::steady_state::{solve_steady_state, DensityMatrix, SolverMethod, SolverOptions};

/// Negativity above this value counts as entangled.
pub const ENTANGLEMENT_THRESHOLD: f64 = 1e-9;

fn site_mask(sites: &[usize], n_sites: usize) -> Result<usize> {
    let mut mask = 0usize;
    for &k in sites {
        if k >= n_sites {
            return Err(Error::InvalidBipartition);
        }
        let bit = 1 << (n_sites - 1 - k);
        if mask & bit != 0 {
            return Err(Error::InvalidBipartition);
        }
        mask |= bit;
    }
    if mask == 0 || mask == (1 << n_sites) - 1 {
        return Err(Error::InvalidBipartition);
    }
    Ok(mask)
}

/// Partial transpose with respect to the listed sites.
pub fn partial_transpose(rho: &DensityMatrix, sites: &[usize]) -> Result<DMatrix<Complex64>> {
    let mask = site_mask(sites, rho.n_sites())?;
    let m = rho.matrix();
    let dim = m.nrows();
    Ok(DMatrix::from_fn(dim, dim, |i, j| {
        let si = (i & !mask) | (j & mask);
        let sj = (j & !mask) | (i & mask);
        m[(si, sj)]
    }))
}

fn hermitian_eigenvalues(m: &DMatrix<Complex64>) -> Vec<f64> {
    let herm = (m + m.adjoint()) * Complex64::new(0.5, 0.0);
    herm.symmetric_eigenvalues().iter().copied().collect()
}

/// Smallest eigenvalue of the partial transpose; negative iff the state is
/// detected as entangled.
pub fn min_partial_transpose_eigenvalue(rho: &DensityMatrix, sites: &[usize]) -> Result<f64> {
    let ev = hermitian_eigenvalues(&partial_transpose(rho, sites)?);
    Ok(ev.into_iter().fold(f64::INFINITY, f64::min))
}

/// Sum of the magnitudes of the negative eigenvalues of the partial transpose
/// with respect to `sites`.
pub fn negativity(rho: &DensityMatrix, sites: &[usize]) -> Result<f64> {
    let ev = hermitian_eigenvalues(&partial_transpose(rho, sites)?);
    Ok(ev.into_iter().filter(|&x| x < 0.0).fold(0.0, |acc, x| acc - x))
}

/// Wootters concurrence of a two-qubit state.
pub fn concurrence(rho: &DensityMatrix) -> Result<f64> {
    if rho.n_sites() != 2 {
        return Err(Error::Shape {
            expected: 4,
            found: rho.dimension(),
        });
    }
    let m = rho.matrix();
    let herm = (m + m.adjoint()) * Complex64::new(0.5, 0.0);
    let eig = herm.clone().symmetric_eigen();
    let roots = eig.eigenvalues.map(|x| Complex64::new(x.max(0.0).sqrt(), 0.0));
    let sqrt_rho = &eig.eigenvectors * DMatrix::from_diagonal(&roots) * eig.eigenvectors.adjoint();
    // σʸ⊗σʸ is the real anti-diagonal (−1, 1, 1, −1) in any product basis of this form
    let flip = DMatrix::from_fn(4, 4, |i, j| match (i, j) {
        (0, 3) | (3, 0) => Complex64::new(-1.0, 0.0),
        (1, 2) | (2, 1) => Complex64::new(1.0, 0.0),
        _ => Complex64::new(0.0, 0.0),
    });
    let tilde = &flip * herm.map(|z| z.conj()) * &flip;
    let product = &sqrt_rho * tilde * &sqrt_rho;
    let mut lambdas: Vec<f64> = hermitian_eigenvalues(&product)
        .into_iter()
        .map(|x| x.max(0.0).sqrt())
        .collect();
    lambdas.sort_by(|a, b| b.partial_cmp(a).expect("finite eigenvalues"));
    Ok((lambdas[0] - lambdas[1] - lambdas[2] - lambdas[3]).max(0.0))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntanglementResult {
    pub negativity: f64,
    /// Only for two-site states.
    pub concurrence: Option<f64>,
    pub entangled: bool,
}

/// Negativity across the cut after the first site, with concurrence for two sites.
pub fn analyze(rho: &DensityMatrix, threshold: f64) -> Result<EntanglementResult> {
    let negativity = negativity(rho, &[0])?;
    let concurrence = if rho.n_sites() == 2 {
        Some(concurrence(rho)?)
    } else {
        None
    };
    Ok(EntanglementResult {
        negativity,
        concurrence,
        entangled: negativity > threshold,
    })
}

/// Search over coupling `g` and effective bath rate `γ` for a region scan.
#[derive(Debug, Clone, PartialEq)]
pub struct EntanglementSearch {
    pub g_range: (f64, f64),
    pub gamma_range: (f64, f64),
    /// Logarithmic grid points per axis.
    pub grid_points: usize,
    /// Repeat the search once on a finer grid around the most negative
    /// partial-transpose eigenvalue.
    pub refine: bool,
    pub threshold: f64,
    pub omega: f64,
}

impl Default for EntanglementSearch {
    fn default() -> Self {
        Self {
            g_range: (1e-2, 1e2),
            gamma_range: (1e-2, 1e2),
            grid_points: 25,
            refine: true,
            threshold: ENTANGLEMENT_THRESHOLD,
            omega: 1.0,
        }
    }
}

/// Outcome of the search at one `(s₁, s_N)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegionCell {
    pub s_left: f64,
    pub s_right: f64,
    pub entangled: bool,
    pub max_negativity: f64,
    /// Parameters of the most negative partial-transpose eigenvalue found.
    pub best_g: f64,
    pub best_gamma: f64,
}

/// Two-site steady state with `γ₁ = γ_N = gamma` and bath populations `s_left`, `s_right`.
pub fn two_site_state(g: f64, gamma: f64, s_left: f64, s_right: f64, omega: f64) -> Result<DensityMatrix> {
    let spec = ChainSpec::uniform(
        2,
        omega,
        g,
        BathSpec::from_effective(gamma, s_left)?,
        BathSpec::from_effective(gamma, s_right)?,
        0.0,
    )?;
    solve_steady_state(
        &assemble_liouvillian(&spec),
        &SolverOptions::with_method(SolverMethod::DenseNullspace),
    )
}

fn log_grid(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    if points == 1 {
        return vec![(lo * hi).sqrt()];
    }
    let (a, b) = (lo.ln(), hi.ln());
    (0..points)
        .map(|i| (a + (b - a) * i as f64 / (points - 1) as f64).exp())
        .collect()
}

struct SearchState {
    /// (most negative partial-transpose eigenvalue, g, γ)
    best: (f64, f64, f64),
    max_negativity: f64,
}

impl SearchState {
    fn visit(&mut self, gs: &[f64], gammas: &[f64], s_left: f64, s_right: f64, omega: f64) -> Result<()> {
        for &g in gs {
            for &gamma in gammas {
                let rho = two_site_state(g, gamma, s_left, s_right, omega)?;
                let ev = hermitian_eigenvalues(&partial_transpose(&rho, &[0])?);
                let min = ev.iter().copied().fold(f64::INFINITY, f64::min);
                let neg: f64 = ev.iter().filter(|&&x| x < 0.0).map(|x| -x).sum();
                self.max_negativity = self.max_negativity.max(neg);
                if min < self.best.0 {
                    self.best = (min, g, gamma);
                }
            }
        }
        Ok(())
    }
}

pub fn entanglement_cell(s_left: f64, s_right: f64, search: &EntanglementSearch) -> Result<RegionCell> {
    let valid = |s: f64| (0.0..0.5).contains(&s);
    if !valid(s_left) || !valid(s_right) {
        return Err(Error::InvalidSpec("bath populations must lie in [0, 1/2)"));
    }
    if search.grid_points == 0 || search.g_range.0 <= 0.0 || search.gamma_range.0 <= 0.0 {
        return Err(Error::InvalidSpec("search grid must be non-empty and positive"));
    }
    let mut search_state = SearchState {
        best: (f64::INFINITY, search.g_range.0, search.gamma_range.0),
        max_negativity: 0.0,
    };
    let gs = log_grid(search.g_range.0, search.g_range.1, search.grid_points);
    let gammas = log_grid(search.gamma_range.0, search.gamma_range.1, search.grid_points);
    search_state.visit(&gs, &gammas, s_left, s_right, search.omega)?;
    if search.refine && search.grid_points > 1 {
        let steps = (search.grid_points - 1) as f64;
        let step_g = (search.g_range.1 / search.g_range.0).powf(1.0 / steps);
        let step_gamma = (search.gamma_range.1 / search.gamma_range.0).powf(1.0 / steps);
        let (_, g0, gamma0) = search_state.best;
        let fine_g = log_grid(g0 / step_g, g0 * step_g, search.grid_points);
        let fine_gamma = log_grid(gamma0 / step_gamma, gamma0 * step_gamma, search.grid_points);
        search_state.visit(&fine_g, &fine_gamma, s_left, s_right, search.omega)?;
    }
    let SearchState { best, max_negativity } = search_state;
    Ok(RegionCell {
        s_left,
        s_right,
        entangled: max_negativity > search.threshold,
        max_negativity,
        best_g: best.1,
        best_gamma: best.2,
    })
}

/// Scan over the square `s_values × s_values`; cells are stored with `s₁`
/// varying slowest.
#[derive(Debug, Clone, PartialEq)]
pub struct RegionMap {
    s_values: Vec<f64>,
    cells: Vec<RegionCell>,
}

impl RegionMap {
    pub fn from_cells(s_values: Vec<f64>, cells: Vec<RegionCell>) -> Result<Self> {
        if cells.len() != s_values.len() * s_values.len() {
            return Err(Error::Shape {
                expected: s_values.len() * s_values.len(),
                found: cells.len(),
            });
        }
        Ok(Self { s_values, cells })
    }

    pub fn s_values(&self) -> &[f64] {
        &self.s_values
    }

    pub fn cells(&self) -> &[RegionCell] {
        &self.cells
    }

    /// Cell at `(s_values[i], s_values[j])` for `(s₁, s_N)`.
    pub fn cell(&self, i: usize, j: usize) -> &RegionCell {
        &self.cells[i * self.s_values.len() + j]
    }

    pub fn entangled_count(&self) -> usize {
        self.cells.iter().filter(|c| c.entangled).count()
    }

    /// Entangled cells with at least one separable horizontal or vertical neighbour.
    pub fn boundary(&self) -> Vec<RegionCell> {
        let n = self.s_values.len();
        let mut out = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if !self.cell(i, j).entangled {
                    continue;
                }
                let neighbours = [(i.wrapping_sub(1), j), (i + 1, j), (i, j.wrapping_sub(1)), (i, j + 1)];
                let edge = neighbours
                    .iter()
                    .any(|&(a, b)| a < n && b < n && !self.cell(a, b).entangled);
                if edge {
                    out.push(*self.cell(i, j));
                }
            }
        }
        out
    }
}

/// Sequential scan; see [`entanglement_cell`] for one cell.
pub fn scan_entanglement_region(s_values: &[f64], search: &EntanglementSearch) -> Result<RegionMap> {
    let mut cells = Vec::with_capacity(s_values.len() * s_values.len());
    for &s1 in s_values {
        for &sn in s_values {
            cells.push(entanglement_cell(s1, sn, search)?);
        }
    }
    RegionMap::from_cells(s_values.to_vec(), cells)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn bell() -> DensityMatrix {
        let h = core::f64::consts::FRAC_1_SQRT_2;
        DensityMatrix::from_pure(&[c(0.0), c(h), c(h), c(0.0)]).unwrap()
    }

    #[test]
    fn bell_state_values() {
        assert_relative_eq!(negativity(&bell(), &[0]).unwrap(), 0.5, epsilon = 1e-14);
        assert_relative_eq!(negativity(&bell(), &[1]).unwrap(), 0.5, epsilon = 1e-14);
        assert_relative_eq!(concurrence(&bell()).unwrap(), 1.0, epsilon = 1e-7);
    }

    #[test]
    fn mixed_and_product_states_are_separable() {
        let mixed = DensityMatrix::new(DMatrix::identity(4, 4) * c(0.25)).unwrap();
        assert!(negativity(&mixed, &[0]).unwrap() < 1e-15);
        assert!(concurrence(&mixed).unwrap() < 1e-12);
        let product = DensityMatrix::from_pure(&[c(0.6), c(0.8), c(0.0), c(0.0)]).unwrap();
        assert!(negativity(&product, &[0]).unwrap() < 1e-14);
    }

    #[test]
    fn bipartition_validation() {
        let rho = bell();
        assert_eq!(negativity(&rho, &[]), Err(Error::InvalidBipartition));
        assert_eq!(negativity(&rho, &[0, 1]), Err(Error::InvalidBipartition));
        assert_eq!(negativity(&rho, &[2]), Err(Error::InvalidBipartition));
        assert_eq!(negativity(&rho, &[0, 0]), Err(Error::InvalidBipartition));
        let three = DensityMatrix::new(DMatrix::identity(8, 8) * c(0.125)).unwrap();
        assert!(concurrence(&three).is_err());
        assert!(negativity(&three, &[0, 2]).is_ok());
    }

    #[test]
    fn diagonal_cell_is_separable() {
        let search = EntanglementSearch {
            grid_points: 5,
            ..EntanglementSearch::default()
        };
        let cell = entanglement_cell(0.2, 0.2, &search).unwrap();
        assert!(!cell.entangled);
        assert!(entanglement_cell(0.5, 0.1, &search).is_err());
    }

    #[test]
    fn log_grid_endpoints() {
        let g = log_grid(1e-2, 1e2, 5);
        assert_relative_eq!(g[0], 1e-2, max_relative = 1e-12);
        assert_relative_eq!(g[2], 1.0, max_relative = 1e-12);
        assert_relative_eq!(g[4], 1e2, max_relative = 1e-12);
    }
}
