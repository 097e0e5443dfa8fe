//! Physical description of a boundary-driven chain of two-level systems.
//!
//! Units are ħ = k_B = 1 throughout: site energies are angular frequencies,
//! temperatures are energies, and currents are energy per unit time.

use alloc::vec;
use alloc::vec::Vec;

#[cfg(not(feature = "std"))]
use num_traits::Float;

use crate::error::{Error, Result};

/// Bose–Einstein occupation `1 / (exp(ω/T) − 1)` of a bath mode at frequency `omega`.
///
/// `temperature == 0` yields exactly zero without going through the exponential.
pub fn thermal_occupation(omega: f64, temperature: f64) -> Result<f64> {
    if !omega.is_finite() || omega <= 0.0 {
        return Err(Error::InvalidSpec("bath occupation needs a positive site energy"));
    }
    if !temperature.is_finite() || temperature < 0.0 {
        return Err(Error::InvalidSpec("temperature must be finite and non-negative"));
    }
    if temperature == 0.0 {
        return Ok(0.0);
    }
    Ok(1.0 / (omega / temperature).exp_m1())
}

/// A bosonic reservoir attached to a terminal site, stored by its mean occupation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BathSpec {
    interaction_rate: f64,
    occupation: f64,
}

/// Effective coupling `γ = Γ(2n+1)` and equilibrium excited population `s = n/(2n+1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BathQuantities {
    pub gamma: f64,
    pub s: f64,
}

impl BathSpec {
    pub fn with_occupation(interaction_rate: f64, occupation: f64) -> Result<Self> {
        if !interaction_rate.is_finite() || interaction_rate <= 0.0 {
            return Err(Error::InvalidSpec("bath interaction rate must be positive"));
        }
        if !occupation.is_finite() || occupation < 0.0 {
            return Err(Error::InvalidSpec("bath occupation must be finite and non-negative"));
        }
        Ok(Self {
            interaction_rate,
            occupation,
        })
    }

    /// Bath at `temperature`, resonant with a terminal site of energy `omega`.
    pub fn thermal(interaction_rate: f64, temperature: f64, omega: f64) -> Result<Self> {
        Self::with_occupation(interaction_rate, thermal_occupation(omega, temperature)?)
    }

    /// Inverse of [`BathSpec::derived`]: the bath whose effective rate is `gamma`
    /// and whose equilibrium population is `s ∈ [0, 1/2)`.
    pub fn from_effective(gamma: f64, s: f64) -> Result<Self> {
        if !(0.0..0.5).contains(&s) {
            return Err(Error::InvalidSpec("equilibrium population must lie in [0, 1/2)"));
        }
        let occupation = s / (1.0 - 2.0 * s);
        Self::with_occupation(gamma * (1.0 - 2.0 * s), occupation)
    }

    pub fn interaction_rate(&self) -> f64 {
        self.interaction_rate
    }

    pub fn occupation(&self) -> f64 {
        self.occupation
    }

    /// Emission rate `Γ(n+1)`.
    pub fn emission_rate(&self) -> f64 {
        self.interaction_rate * (self.occupation + 1.0)
    }

    /// Absorption rate `Γn`.
    pub fn absorption_rate(&self) -> f64 {
        self.interaction_rate * self.occupation
    }

    pub fn derived(&self) -> BathQuantities {
        let n = self.occupation;
        BathQuantities {
            gamma: self.interaction_rate * (2.0 * n + 1.0),
            s: n / (2.0 * n + 1.0),
        }
    }
}

/// Which terminal bath.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Left,
    Right,
}

/// Full physical specification of a chain: on-site energies, nearest-neighbour
/// flip-flop couplings, the two terminal baths and a uniform dephasing rate.
#[derive(Debug, Clone, PartialEq)]
pub struct ChainSpec {
    site_energies: Vec<f64>,
    couplings: Vec<f64>,
    bath_left: BathSpec,
    bath_right: BathSpec,
    dephasing_rate: f64,
}

impl ChainSpec {
    pub fn new(
        site_energies: Vec<f64>,
        couplings: Vec<f64>,
        bath_left: BathSpec,
        bath_right: BathSpec,
        dephasing_rate: f64,
    ) -> Result<Self> {
        let n = site_energies.len();
        if n == 0 {
            return Err(Error::InvalidSpec("a chain needs at least one site"));
        }
        if couplings.len() != n - 1 {
            return Err(Error::InvalidSpec("a chain of N sites needs N-1 couplings"));
        }
        if site_energies.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(Error::InvalidSpec("site energies must be finite and non-negative"));
        }
        if couplings.iter().any(|g| !g.is_finite()) {
            return Err(Error::InvalidSpec("couplings must be finite"));
        }
        if !dephasing_rate.is_finite() || dephasing_rate < 0.0 {
            return Err(Error::InvalidSpec("dephasing rate must be finite and non-negative"));
        }
        Ok(Self {
            site_energies,
            couplings,
            bath_left,
            bath_right,
            dephasing_rate,
        })
    }

    /// Homogeneous chain with energy `omega` on every site and coupling `g` on every bond.
    pub fn uniform(
        n_sites: usize,
        omega: f64,
        g: f64,
        bath_left: BathSpec,
        bath_right: BathSpec,
        dephasing_rate: f64,
    ) -> Result<Self> {
        Self::new(
            vec![omega; n_sites],
            vec![g; n_sites.saturating_sub(1)],
            bath_left,
            bath_right,
            dephasing_rate,
        )
    }

    pub fn n_sites(&self) -> usize {
        self.site_energies.len()
    }

    /// Hilbert-space dimension `2^N`.
    pub fn dimension(&self) -> usize {
        1 << self.n_sites()
    }

    pub fn site_energies(&self) -> &[f64] {
        &self.site_energies
    }

    pub fn couplings(&self) -> &[f64] {
        &self.couplings
    }

    pub fn bath(&self, side: Side) -> &BathSpec {
        match side {
            Side::Left => &self.bath_left,
            Side::Right => &self.bath_right,
        }
    }

    pub fn bath_left(&self) -> &BathSpec {
        &self.bath_left
    }

    pub fn bath_right(&self) -> &BathSpec {
        &self.bath_right
    }

    pub fn dephasing_rate(&self) -> f64 {
        self.dephasing_rate
    }

    /// Index of the site a bath is attached to.
    pub fn terminal_site(&self, side: Side) -> usize {
        match side {
            Side::Left => 0,
            Side::Right => self.n_sites() - 1,
        }
    }

    /// Same chain with a different dephasing rate.
    pub fn with_dephasing(&self, dephasing_rate: f64) -> Result<Self> {
        Self::new(
            self.site_energies.clone(),
            self.couplings.clone(),
            self.bath_left,
            self.bath_right,
            dephasing_rate,
        )
    }

    /// All site energies equal and all couplings equal.
    pub fn is_uniform(&self) -> bool {
        let w0 = self.site_energies[0];
        let energies = self.site_energies.iter().all(|w| *w == w0);
        let couplings = match self.couplings.first() {
            Some(g0) => self.couplings.iter().all(|g| g == g0),
            None => true,
        };
        energies && couplings
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn zero_temperature_is_exactly_empty() {
        assert_eq!(thermal_occupation(1.0, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn occupation_at_unit_temperature() {
        let e = core::f64::consts::E;
        assert_relative_eq!(thermal_occupation(1.0, 1.0).unwrap(), 1.0 / (e - 1.0), epsilon = 1e-15);
        assert_relative_eq!(thermal_occupation(1.0, 1.0).unwrap(), 0.5819767, epsilon = 1e-7);
    }

    #[test]
    fn high_temperature_matches_classical_limit() {
        // n ≈ T/ω − 1/2 + ω/(12T)
        let n = thermal_occupation(1.0, 1000.0).unwrap();
        let expansion = 1000.0 - 0.5;
        assert!((n - expansion).abs() / expansion < 1e-3);
    }

    #[test]
    fn non_positive_energy_is_rejected() {
        assert!(matches!(thermal_occupation(0.0, 1.0), Err(Error::InvalidSpec(_))));
        assert!(matches!(thermal_occupation(-1.0, 1.0), Err(Error::InvalidSpec(_))));
        assert!(thermal_occupation(1.0, -0.1).is_err());
    }

    #[test]
    fn derived_bath_quantities() {
        let cold = BathSpec::thermal(1.0, 0.0, 1.0).unwrap().derived();
        assert_eq!(cold.gamma, 1.0);
        assert_eq!(cold.s, 0.0);

        let hot = BathSpec::thermal(1.0, 1.0, 1.0).unwrap().derived();
        assert_relative_eq!(hot.gamma, 2.1639534, epsilon = 1e-7);
        let e = core::f64::consts::E;
        assert_relative_eq!(hot.s, 1.0 / (e + 1.0), epsilon = 1e-15);

        let exact = BathSpec::with_occupation(2.0, 0.5).unwrap().derived();
        assert_eq!(exact.gamma, 4.0);
        assert_eq!(exact.s, 0.25);
    }

    #[test]
    fn effective_parametrisation_round_trips() {
        let bath = BathSpec::from_effective(3.0, 0.3).unwrap();
        let d = bath.derived();
        assert_relative_eq!(d.gamma, 3.0, epsilon = 1e-14);
        assert_relative_eq!(d.s, 0.3, epsilon = 1e-14);
        assert!(BathSpec::from_effective(1.0, 0.5).is_err());
    }

    #[test]
    fn spec_validation() {
        let bath = BathSpec::with_occupation(1.0, 0.0).unwrap();
        assert!(ChainSpec::new(vec![1.0, 1.0], vec![], bath, bath, 0.0).is_err());
        assert!(ChainSpec::new(vec![], vec![], bath, bath, 0.0).is_err());
        assert!(ChainSpec::uniform(3, 1.0, 1.0, bath, bath, -1.0).is_err());
        assert!(ChainSpec::uniform(3, f64::NAN, 1.0, bath, bath, 0.0).is_err());
        assert!(BathSpec::with_occupation(0.0, 1.0).is_err());
        let single = ChainSpec::uniform(1, 1.0, 1.0, bath, bath, 0.0).unwrap();
        assert_eq!(single.couplings().len(), 0);
        assert!(single.is_uniform());
    }
}
