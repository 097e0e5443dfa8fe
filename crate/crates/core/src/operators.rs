//! Hilbert-space operators of the chain.
//!
//! Basis convention: a basis index is an `N`-bit number with site 1 as the most
//! significant bit (tensor order site 1 ⊗ site 2 ⊗ … ⊗ site N). Within a site,
//! bit value 0 is the excited state and 1 the ground state, so for `N = 2` the
//! basis reads `|ee⟩, |eg⟩, |ge⟩, |gg⟩`.
//!
//! Sites are 0-based in code; site `k` here is site `k + 1` in physics notation.

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::chain::{ChainSpec, Side};
use crate::sparse::{CsrMatrix, ONE};

/// Operators on the `2^N` chain Hilbert space are small enough to keep sparse
/// at every size the solver handles; use [`CsrMatrix::to_dense`] when needed.
pub type HilbertOperator = CsrMatrix;

#[inline]
fn shift(site: usize, n_sites: usize) -> usize {
    n_sites - 1 - site
}

/// True if `site` is excited in basis state `index`.
#[inline]
pub fn is_excited(index: usize, site: usize, n_sites: usize) -> bool {
    (index >> shift(site, n_sites)) & 1 == 0
}

/// Number of excited sites in basis state `index`.
#[inline]
pub fn excitation_count(index: usize, n_sites: usize) -> usize {
    n_sites - index.count_ones() as usize
}

fn single_site(site: usize, n_sites: usize, f: impl Fn(usize) -> Option<(usize, Complex64)>) -> CsrMatrix {
    assert!(site < n_sites, "site {site} out of range for {n_sites} sites");
    let dim = 1 << n_sites;
    let triplets = (0..dim)
        .filter_map(|col| f(col).map(|(row, v)| (row, col, v)))
        .collect();
    CsrMatrix::from_triplets(dim, dim, triplets)
}

/// Lowering operator σ⁻ on `site`: |e⟩ → |g⟩.
pub fn sigma_minus(site: usize, n_sites: usize) -> CsrMatrix {
    let bit = 1 << shift(site, n_sites);
    single_site(site, n_sites, |col| {
        is_excited(col, site, n_sites).then_some((col | bit, ONE))
    })
}

/// Raising operator σ⁺ on `site`: |g⟩ → |e⟩.
pub fn sigma_plus(site: usize, n_sites: usize) -> CsrMatrix {
    let bit = 1 << shift(site, n_sites);
    single_site(site, n_sites, |col| {
        (!is_excited(col, site, n_sites)).then_some((col & !bit, ONE))
    })
}

/// Excited-state projector σ⁺σ⁻ on `site`.
pub fn excited_projector(site: usize, n_sites: usize) -> CsrMatrix {
    single_site(site, n_sites, |col| {
        is_excited(col, site, n_sites).then_some((col, ONE))
    })
}

/// Pauli σᶻ on `site` (+1 on the excited state).
pub fn sigma_z(site: usize, n_sites: usize) -> CsrMatrix {
    single_site(site, n_sites, |col| {
        let v = if is_excited(col, site, n_sites) { 1.0 } else { -1.0 };
        Some((col, Complex64::new(v, 0.0)))
    })
}

/// Total excitation number Σₖ σₖ⁺σₖ⁻.
pub fn total_excitation(n_sites: usize) -> CsrMatrix {
    let dim = 1 << n_sites;
    let triplets = (0..dim)
        .filter_map(|i| {
            let count = excitation_count(i, n_sites);
            (count > 0).then(|| (i, i, Complex64::new(count as f64, 0.0)))
        })
        .collect();
    CsrMatrix::from_triplets(dim, dim, triplets)
}

/// `H = Σₖ (ωₖ/2) σₖᶻ + Σₖ gₖ (σₖ⁺σₖ₊₁⁻ + σₖ⁻σₖ₊₁⁺)`.
pub fn build_hamiltonian(spec: &ChainSpec) -> HilbertOperator {
    let n = spec.n_sites();
    let dim = spec.dimension();
    let mut triplets = Vec::new();
    for i in 0..dim {
        let diag: f64 = spec
            .site_energies()
            .iter()
            .enumerate()
            .map(|(k, w)| if is_excited(i, k, n) { 0.5 * w } else { -0.5 * w })
            .sum();
        triplets.push((i, i, Complex64::new(diag, 0.0)));
        for (k, &g) in spec.couplings().iter().enumerate() {
            if g == 0.0 {
                continue;
            }
            // exchange an excitation between sites k and k+1
            if is_excited(i, k, n) != is_excited(i, k + 1, n) {
                let flipped = i ^ (1 << shift(k, n)) ^ (1 << shift(k + 1, n));
                triplets.push((flipped, i, Complex64::new(g, 0.0)));
            }
        }
    }
    CsrMatrix::from_triplets(dim, dim, triplets)
}

/// Origin of a dissipative channel.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum JumpKind {
    Emission(Side),
    Absorption(Side),
    Dephasing(usize),
}

/// Lindblad operator `A` with its (strictly positive) rate `r`, entering as
/// `r (A ρ A† − ½{A†A, ρ})`.
#[derive(Debug, Clone, PartialEq)]
pub struct JumpOperator {
    pub operator: HilbertOperator,
    pub rate: f64,
    pub kind: JumpKind,
}

/// Jump operators of one terminal bath. Zero-rate channels are omitted.
pub fn bath_jump_operators(spec: &ChainSpec, side: Side) -> Vec<JumpOperator> {
    let n = spec.n_sites();
    let site = spec.terminal_site(side);
    let bath = spec.bath(side);
    let mut jumps = Vec::with_capacity(2);
    if bath.emission_rate() > 0.0 {
        jumps.push(JumpOperator {
            operator: sigma_minus(site, n),
            rate: bath.emission_rate(),
            kind: JumpKind::Emission(side),
        });
    }
    if bath.absorption_rate() > 0.0 {
        jumps.push(JumpOperator {
            operator: sigma_plus(site, n),
            rate: bath.absorption_rate(),
            kind: JumpKind::Absorption(side),
        });
    }
    jumps
}

/// Weighted jump set: emission and absorption at both terminal sites, then one
/// excited-state projector per site when the dephasing rate is positive.
pub fn build_jump_operators(spec: &ChainSpec) -> Vec<JumpOperator> {
    let mut jumps = bath_jump_operators(spec, Side::Left);
    jumps.extend(bath_jump_operators(spec, Side::Right));
    let gamma = spec.dephasing_rate();
    if gamma > 0.0 {
        let n = spec.n_sites();
        jumps.extend((0..n).map(|k| JumpOperator {
            operator: excited_projector(k, n),
            rate: gamma,
            kind: JumpKind::Dephasing(k),
        }));
    }
    jumps
}
