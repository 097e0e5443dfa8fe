//! Classical comparator: symmetric exclusion hopping with rate `V` between
//! neighbours and the same boundary baths as the quantum chain.
//!
//! The stationary mean occupations solve a tridiagonal system
//!
//! ```text
//! −(γ₁ + V) P₁ + V P₂            = −γ₁ s₁
//!  V P_{k−1} − 2V P_k + V P_{k+1} = 0
//!  V P_{N−1} − (γ_N + V) P_N      = −γ_N s_N
//! ```
//!
//! where `γ s = Γ n` is the absorption rate of a bath. Currents count excitations
//! per unit time; multiply by the site energy for energy units.

use alloc::vec;
use alloc::vec::Vec;

use crate::chain::BathSpec;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct ClassicalChainSpec {
    n_sites: usize,
    hop_rate: f64,
    bath_left: BathSpec,
    bath_right: BathSpec,
}

impl ClassicalChainSpec {
    pub fn new(n_sites: usize, hop_rate: f64, bath_left: BathSpec, bath_right: BathSpec) -> Result<Self> {
        if n_sites < 2 {
            return Err(Error::InvalidSpec("classical chain needs at least two sites"));
        }
        if !hop_rate.is_finite() || hop_rate <= 0.0 {
            return Err(Error::InvalidSpec("hop rate must be positive"));
        }
        Ok(Self {
            n_sites,
            hop_rate,
            bath_left,
            bath_right,
        })
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn hop_rate(&self) -> f64 {
        self.hop_rate
    }

    pub fn bath_left(&self) -> &BathSpec {
        &self.bath_left
    }

    pub fn bath_right(&self) -> &BathSpec {
        &self.bath_right
    }
}

/// Stationary excitation probabilities `P_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct OccupationProfile {
    values: Vec<f64>,
}

impl OccupationProfile {
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// `V (P_k − P_{k+1})` on every bond.
    pub fn bond_currents(&self, hop_rate: f64) -> Vec<f64> {
        self.values.windows(2).map(|w| hop_rate * (w[0] - w[1])).collect()
    }
}

/// Solves the rate equations with the Thomas algorithm.
pub fn solve_classical_steady_state(spec: &ClassicalChainSpec) -> Result<OccupationProfile> {
    let n = spec.n_sites;
    let v = spec.hop_rate;
    let left = spec.bath_left.derived();
    let right = spec.bath_right.derived();

    let mut diag = vec![-2.0 * v; n];
    let off = v;
    let mut rhs = vec![0.0; n];
    diag[0] = -(left.gamma + v);
    diag[n - 1] = -(right.gamma + v);
    rhs[0] = -left.gamma * left.s;
    rhs[n - 1] = -right.gamma * right.s;

    // forward sweep with a constant off-diagonal
    for k in 1..n {
        if diag[k - 1] == 0.0 {
            return Err(Error::Singular);
        }
        let m = off / diag[k - 1];
        diag[k] -= m * off;
        rhs[k] -= m * rhs[k - 1];
    }
    if diag[n - 1] == 0.0 {
        return Err(Error::Singular);
    }
    let mut p = vec![0.0; n];
    p[n - 1] = rhs[n - 1] / diag[n - 1];
    for k in (0..n - 1).rev() {
        p[k] = (rhs[k] - off * p[k + 1]) / diag[k];
    }
    Ok(OccupationProfile { values: p })
}

/// Current on the first bond, positive from left to right.
pub fn classical_current(profile: &OccupationProfile, spec: &ClassicalChainSpec) -> f64 {
    spec.hop_rate * (profile.values[0] - profile.values[1])
}

/// `γ₁γ_N V (s₁ − s_N) / (V(γ₁ + γ_N) + γ₁γ_N (N − 1))`.
pub fn classical_current_analytic(spec: &ClassicalChainSpec) -> f64 {
    let left = spec.bath_left.derived();
    let right = spec.bath_right.derived();
    let v = spec.hop_rate;
    let prod = left.gamma * right.gamma;
    prod * v * (left.s - right.s) / (v * (left.gamma + right.gamma) + prod * (spec.n_sites - 1) as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn benchmark(n: usize) -> ClassicalChainSpec {
        let hot = BathSpec::thermal(1.0, 1.0, 1.0).unwrap();
        let cold = BathSpec::thermal(1.0, 0.0, 1.0).unwrap();
        ClassicalChainSpec::new(n, 1.0, hot, cold).unwrap()
    }

    #[test]
    fn equal_baths_give_flat_profile() {
        let bath = BathSpec::with_occupation(0.3, 0.8).unwrap();
        let spec = ClassicalChainSpec::new(6, 2.0, bath, bath).unwrap();
        let profile = solve_classical_steady_state(&spec).unwrap();
        for p in profile.values() {
            assert_relative_eq!(*p, bath.derived().s, epsilon = 1e-14);
        }
        assert_eq!(classical_current_analytic(&spec), 0.0);
    }

    #[test]
    fn four_site_benchmark() {
        let spec = benchmark(4);
        assert_relative_eq!(classical_current_analytic(&spec), 0.060_272, epsilon = 1e-6);
        let profile = solve_classical_steady_state(&spec).unwrap();
        assert_relative_eq!(
            classical_current(&profile, &spec),
            classical_current_analytic(&spec),
            max_relative = 1e-12
        );
    }

    #[test]
    fn bonds_carry_equal_current_and_profile_is_affine() {
        let spec = benchmark(9);
        let profile = solve_classical_steady_state(&spec).unwrap();
        let currents = profile.bond_currents(spec.hop_rate());
        for j in &currents {
            assert_relative_eq!(*j, currents[0], epsilon = 1e-14);
        }
        let p = profile.values();
        for k in 1..p.len() - 1 {
            assert!((p[k - 1] - 2.0 * p[k] + p[k + 1]).abs() < 1e-14);
        }
        assert!(p.windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn rejects_short_chain() {
        let bath = BathSpec::with_occupation(1.0, 0.0).unwrap();
        assert!(ClassicalChainSpec::new(1, 1.0, bath, bath).is_err());
        assert!(ClassicalChainSpec::new(3, 0.0, bath, bath).is_err());
    }
}
