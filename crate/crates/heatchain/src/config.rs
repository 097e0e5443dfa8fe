//! Plain-text (TOML) description of a chain.
//!
//! ```toml
//! n_sites = 4          # or give site_energies explicitly
//! omega = 1.0
//! g = 1.0              # or couplings = [...]
//! dephasing = 0.0
//!
//! [left]
//! rate = 1.0           # Γ
//! temperature = 1.0    # or occupation = n
//!
//! [right]
//! rate = 1.0
//! temperature = 0.0
//! ```
//!
//! A bath temperature is converted to an occupation at the energy of the site
//! the bath is attached to. Nothing has a default: every physical quantity
//! must be given.

use heatchain_core::{BathSpec, ChainSpec, ClassicalChainSpec};
use serde::{Deserialize, Serialize};

use crate::error::{config_error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BathConfig {
    pub rate: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub temperature: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub occupation: Option<f64>,
}

impl BathConfig {
    pub fn thermal(rate: f64, temperature: f64) -> Self {
        Self {
            rate,
            temperature: Some(temperature),
            occupation: None,
        }
    }

    pub fn occupied(rate: f64, occupation: f64) -> Self {
        Self {
            rate,
            temperature: None,
            occupation: Some(occupation),
        }
    }

    /// Bath coupled to a site of energy `omega`.
    pub fn to_bath(&self, omega: f64) -> Result<BathSpec> {
        match (self.temperature, self.occupation) {
            (Some(t), None) => Ok(BathSpec::thermal(self.rate, t, omega)?),
            (None, Some(n)) => Ok(BathSpec::with_occupation(self.rate, n)?),
            (Some(_), Some(_)) => Err(config_error(
                "give either temperature or occupation for a bath, not both",
            )),
            (None, None) => Err(config_error("a bath needs a temperature or an occupation")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChainConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_sites: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub site_energies: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub couplings: Option<Vec<f64>>,
    pub dephasing: f64,
    pub left: BathConfig,
    pub right: BathConfig,
}

impl ChainConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        Ok(toml::from_str(text)?)
    }

    pub fn to_toml(&self) -> Result<String> {
        Ok(toml::to_string(self)?)
    }

    pub fn to_spec(&self) -> Result<ChainSpec> {
        let energies = match (&self.site_energies, self.omega, self.n_sites) {
            (Some(w), None, n) => {
                if n.is_some_and(|n| n != w.len()) {
                    return Err(config_error("n_sites disagrees with the length of site_energies"));
                }
                w.clone()
            }
            (None, Some(omega), Some(n)) => vec![omega; n],
            (Some(_), Some(_), _) => return Err(config_error("give either omega or site_energies, not both")),
            (None, Some(_), None) => return Err(config_error("a uniform chain needs n_sites")),
            (None, None, _) => return Err(config_error("site energies missing: give omega or site_energies")),
        };
        let n = energies.len();
        let couplings = match (&self.couplings, self.g) {
            (Some(c), None) => c.clone(),
            (None, Some(g)) => vec![g; n.saturating_sub(1)],
            (Some(_), Some(_)) => return Err(config_error("give either g or couplings, not both")),
            (None, None) if n == 1 => Vec::new(),
            (None, None) => return Err(config_error("couplings missing: give g or couplings")),
        };
        if energies.is_empty() {
            return Err(config_error("a chain needs at least one site"));
        }
        let left = self.left.to_bath(energies[0])?;
        let right = self.right.to_bath(energies[n - 1])?;
        Ok(ChainSpec::new(energies, couplings, left, right, self.dephasing)?)
    }

    /// Explicit form of `spec`, with baths stored by occupation.
    pub fn from_spec(spec: &ChainSpec) -> Self {
        let bath = |b: &BathSpec| BathConfig::occupied(b.interaction_rate(), b.occupation());
        Self {
            n_sites: Some(spec.n_sites()),
            omega: None,
            site_energies: Some(spec.site_energies().to_vec()),
            g: None,
            couplings: Some(spec.couplings().to_vec()),
            dephasing: spec.dephasing_rate(),
            left: bath(spec.bath_left()),
            right: bath(spec.bath_right()),
        }
    }
}

/// Homogeneous chain parameters shared by the sweeps; the number of sites and
/// the dephasing rate are supplied per point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UniformChain {
    pub omega: f64,
    pub g: f64,
    pub left: BathConfig,
    pub right: BathConfig,
}

impl UniformChain {
    pub fn spec(&self, n_sites: usize, dephasing: f64) -> Result<ChainSpec> {
        ChainConfig {
            n_sites: Some(n_sites),
            omega: Some(self.omega),
            site_energies: None,
            g: Some(self.g),
            couplings: None,
            dephasing,
            left: self.left.clone(),
            right: self.right.clone(),
        }
        .to_spec()
    }

    /// Classical chain with the same baths.
    pub fn classical(&self, n_sites: usize, hop_rate: f64) -> Result<ClassicalChainSpec> {
        Ok(ClassicalChainSpec::new(
            n_sites,
            hop_rate,
            self.left.to_bath(self.omega)?,
            self.right.to_bath(self.omega)?,
        )?)
    }

    pub fn with_left_temperature(&self, temperature: f64) -> Self {
        Self {
            left: BathConfig::thermal(self.left.rate, temperature),
            ..self.clone()
        }
    }
}

impl TryFrom<&ChainConfig> for UniformChain {
    type Error = crate::error::AppError;

    fn try_from(c: &ChainConfig) -> Result<Self> {
        match (c.omega, c.g, &c.site_energies, &c.couplings) {
            (Some(omega), Some(g), None, None) => Ok(Self {
                omega,
                g,
                left: c.left.clone(),
                right: c.right.clone(),
            }),
            _ => Err(config_error("sweeps need a uniform chain given by omega and g")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const EXAMPLE: &str = r#"
n_sites = 3
omega = 1.0
g = 0.5
dephasing = 0.25

[left]
rate = 1.0
temperature = 1.0

[right]
rate = 2.0
occupation = 0.5
"#;

    #[test]
    fn parses_documented_example() {
        let spec = ChainConfig::from_toml(EXAMPLE).unwrap().to_spec().unwrap();
        assert_eq!(spec.n_sites(), 3);
        assert_eq!(spec.couplings(), &[0.5, 0.5]);
        assert_eq!(spec.dephasing_rate(), 0.25);
        assert!((spec.bath_left().occupation() - 1.0 / (1f64.exp() - 1.0)).abs() < 1e-15);
        assert_eq!(spec.bath_right().occupation(), 0.5);
        assert_eq!(spec.bath_right().interaction_rate(), 2.0);
    }

    #[test]
    fn round_trip_through_text() {
        let spec = ChainConfig::from_toml(EXAMPLE).unwrap().to_spec().unwrap();
        let text = ChainConfig::from_spec(&spec).to_toml().unwrap();
        let back = ChainConfig::from_toml(&text).unwrap().to_spec().unwrap();
        assert_eq!(spec, back);
    }

    #[test]
    fn missing_or_conflicting_fields_are_errors() {
        let no_dephasing = EXAMPLE.replace("dephasing = 0.25", "");
        assert!(ChainConfig::from_toml(&no_dephasing).is_err());
        let both = EXAMPLE.replace("occupation = 0.5", "occupation = 0.5\ntemperature = 2.0");
        assert!(ChainConfig::from_toml(&both).unwrap().to_spec().is_err());
        let no_g = EXAMPLE.replace("g = 0.5", "");
        assert!(ChainConfig::from_toml(&no_g).unwrap().to_spec().is_err());
        let unknown = format!("{EXAMPLE}\n[extra]\nx = 1\n");
        assert!(ChainConfig::from_toml(&unknown).is_err());
    }

    #[test]
    fn temperature_uses_terminal_site_energy() {
        let cfg = ChainConfig {
            n_sites: None,
            omega: None,
            site_energies: Some(vec![0.5, 1.0, 2.0]),
            g: Some(1.0),
            couplings: None,
            dephasing: 0.0,
            left: BathConfig::thermal(1.0, 1.0),
            right: BathConfig::thermal(1.0, 1.0),
        };
        let spec = cfg.to_spec().unwrap();
        assert!((spec.bath_left().occupation() - 1.0 / (0.5f64.exp() - 1.0)).abs() < 1e-14);
        assert!((spec.bath_right().occupation() - 1.0 / (2f64.exp() - 1.0)).abs() < 1e-14);
    }
}
