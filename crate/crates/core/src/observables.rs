//! Heat currents, populations and coherences of a chain state, plus the closed
//! form for the uniform chain without dephasing.
//!
//! Currents are signed: the current of a bath is the energy per unit time it
//! delivers to the chain, so a hot left bath gives a positive left current and
//! the reported heat current is the left one.

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::chain::{ChainSpec, Side};
use crate::error::{Error, Result};
use crate::operators::{bath_jump_operators, build_hamiltonian, excited_projector, sigma_minus, sigma_plus};
use crate::sparse::CsrMatrix;
use crate::steady_state::DensityMatrix;

fn check_dimension(rho: &DensityMatrix, spec: &ChainSpec) -> Result<()> {
    if rho.n_sites() != spec.n_sites() {
        return Err(Error::Shape {
            expected: spec.dimension(),
            found: rho.dimension(),
        });
    }
    Ok(())
}

/// `⟨σₖ⁺σₖ⁻⟩` for every site.
pub fn populations(rho: &DensityMatrix) -> Vec<f64> {
    let n = rho.n_sites();
    (0..n).map(|k| rho.expectation(&excited_projector(k, n)).re).collect()
}

/// `⟨σₖ⁺σₖ₊₁⁻⟩` for every bond.
pub fn bond_coherences(rho: &DensityMatrix) -> Vec<Complex64> {
    let n = rho.n_sites();
    (0..n.saturating_sub(1))
        .map(|k| {
            let op = sigma_plus(k, n).matmul(&sigma_minus(k + 1, n)).expect("same dimension");
            rho.expectation(&op)
        })
        .collect()
}

/// Energy per unit time delivered by one bath: `Σⱼ rⱼ Tr(H Dⱼ[ρ])`, evaluated
/// in the Heisenberg form `Σⱼ rⱼ Tr((Aⱼ†HAⱼ − ½{Aⱼ†Aⱼ, H}) ρ)`.
pub fn bath_current(rho: &DensityMatrix, spec: &ChainSpec, side: Side) -> Result<f64> {
    check_dimension(rho, spec)?;
    let h = build_hamiltonian(spec);
    let mut total = 0.0;
    for jump in bath_jump_operators(spec, side) {
        let a = &jump.operator;
        let ad = a.adjoint();
        let ada = ad.matmul(a)?;
        let sandwich = ad.matmul(&h)?.matmul(a)?;
        let anti = &ada.matmul(&h)? + &h.matmul(&ada)?;
        let op: CsrMatrix = &sandwich - &(&anti * 0.5);
        total += jump.rate * rho.expectation(&op).re;
    }
    Ok(total)
}

/// Energy per unit time exchanged with the dephasing environment,
/// `γ Σₖ Tr((nₖHnₖ − ½{nₖ, H}) ρ)`. Vanishes for uniform site energies in the
/// steady state; otherwise `J_left + J_right + J_dephasing = 0`.
pub fn dephasing_current(rho: &DensityMatrix, spec: &ChainSpec) -> Result<f64> {
    check_dimension(rho, spec)?;
    let gamma = spec.dephasing_rate();
    if gamma == 0.0 {
        return Ok(0.0);
    }
    let n = spec.n_sites();
    let h = build_hamiltonian(spec);
    let mut total = 0.0;
    for k in 0..n {
        let p = excited_projector(k, n);
        let sandwich = p.matmul(&h)?.matmul(&p)?;
        let anti = &p.matmul(&h)? + &h.matmul(&p)?;
        total += gamma * rho.expectation(&(&sandwich - &(&anti * 0.5))).re;
    }
    Ok(total)
}

/// Bath current from the terminal population and the adjacent bond coherence:
/// `γ ω (s − ⟨n⟩) − (γ g / 2)(⟨σ⁺σ⁻⟩ + c.c.)` on the terminal site of `side`.
///
/// Only defined for uniform chains with at least two sites.
pub fn heat_current_structural(rho: &DensityMatrix, spec: &ChainSpec, side: Side) -> Result<f64> {
    check_dimension(rho, spec)?;
    if !spec.is_uniform() {
        return Err(Error::UnsupportedFormula("structural current needs a uniform chain"));
    }
    let n = spec.n_sites();
    if n < 2 {
        return Err(Error::UnsupportedFormula("structural current needs at least two sites"));
    }
    let omega = spec.site_energies()[0];
    let g = spec.couplings()[0];
    let bath = spec.bath(side).derived();
    let site = spec.terminal_site(side);
    let population = rho.expectation(&excited_projector(site, n)).re;
    let bond = match side {
        Side::Left => 0,
        Side::Right => n - 2,
    };
    let coherence = bond_coherences(rho)[bond];
    Ok(bath.gamma * omega * (bath.s - population) - 0.5 * bath.gamma * g * 2.0 * coherence.re)
}

/// `−2 ω g Im⟨σ₁⁺σ₂⁻⟩`, the current carried by the first bond of a uniform chain.
pub fn heat_current_coherence(rho: &DensityMatrix, spec: &ChainSpec) -> Result<f64> {
    check_dimension(rho, spec)?;
    if !spec.is_uniform() || spec.n_sites() < 2 {
        return Err(Error::UnsupportedFormula(
            "coherence current needs a uniform chain of two or more sites",
        ));
    }
    let c = bond_coherences(rho)[0];
    Ok(-2.0 * spec.site_energies()[0] * spec.couplings()[0] * c.im)
}

/// Population shift `Δ = 4g²γ₁γ_N(s₁ − s_N) / ((γ₁ + γ_N)(4g² + γ₁γ_N))` of the
/// uniform, dephasing-free chain. Independent of the chain length.
pub fn analytic_delta(spec: &ChainSpec) -> Result<f64> {
    if !spec.is_uniform() {
        return Err(Error::UnsupportedFormula("closed form holds for uniform chains only"));
    }
    if spec.dephasing_rate() != 0.0 {
        return Err(Error::UnsupportedFormula("closed form holds without dephasing only"));
    }
    if spec.n_sites() < 2 {
        return Err(Error::UnsupportedFormula("closed form needs at least two sites"));
    }
    let g = spec.couplings()[0];
    let left = spec.bath_left().derived();
    let right = spec.bath_right().derived();
    let g2 = 4.0 * g * g;
    let prod = left.gamma * right.gamma;
    Ok(g2 * prod * (left.s - right.s) / ((left.gamma + right.gamma) * (g2 + prod)))
}

/// `ω Δ`, see [`analytic_delta`].
pub fn heat_current_analytic(spec: &ChainSpec) -> Result<f64> {
    Ok(spec.site_energies()[0] * analytic_delta(spec)?)
}

/// Observables of a stationary state.
#[derive(Debug, Clone, PartialEq)]
pub struct SteadyStateReport {
    pub current_left: f64,
    pub current_right: f64,
    /// Energy exchanged with the dephasing environment.
    pub current_dephasing: f64,
    /// Signed left-bath current, positive for flow from left to right.
    pub heat_current: f64,
    pub populations: Vec<f64>,
    pub bond_coherences: Vec<Complex64>,
    /// `i g₁(⟨σ₁⁺σ₂⁻⟩ − ⟨σ₁⁻σ₂⁺⟩) = −2 g₁ Im⟨σ₁⁺σ₂⁻⟩`; zero for a single site.
    pub delta: f64,
}

impl SteadyStateReport {
    /// `|J_left + J_right|`, zero in a stationary state unless dephasing
    /// exchanges energy (non-uniform site energies).
    pub fn current_imbalance(&self) -> f64 {
        (self.current_left + self.current_right).abs()
    }

    /// `|J_left + J_right + J_dephasing|`, zero in every stationary state.
    pub fn energy_imbalance(&self) -> f64 {
        (self.current_left + self.current_right + self.current_dephasing).abs()
    }
}

pub fn extract_observables(rho: &DensityMatrix, spec: &ChainSpec) -> Result<SteadyStateReport> {
    check_dimension(rho, spec)?;
    let current_left = bath_current(rho, spec, Side::Left)?;
    let current_right = bath_current(rho, spec, Side::Right)?;
    let coherences = bond_coherences(rho);
    let delta = match (coherences.first(), spec.couplings().first()) {
        (Some(c), Some(g)) => -2.0 * g * c.im,
        _ => 0.0,
    };
    Ok(SteadyStateReport {
        current_left,
        current_right,
        current_dephasing: dephasing_current(rho, spec)?,
        heat_current: current_left,
        populations: populations(rho),
        bond_coherences: coherences,
        delta,
    })
}
