//! Physical rates and the scalar quantities derived from them.
//!
//! Conventions, fixed once here and relied on everywhere else:
//!
//! * `kappa` is the cavity *field* decay rate — photon number decays at 2κ;
//! * `gamma` is the atomic *population* decay rate — the coherence decays
//!   at γ/2;
//! * all three are angular frequencies in rad/µs.

use crate::error::{Error, Result};

#[allow(unused_imports)]
use num_traits::Float;

use core::f64::consts::TAU;

fn check_rate(name: &'static str, value: f64) -> Result<f64> {
    if value > 0.0 && value.is_finite() {
        Ok(value)
    } else {
        Err(Error::InvalidRate { name, value })
    }
}

/// The rate triple (g, κ, γ) plus the atom number N.
///
/// Single source of truth for every formula in the crate. Constructed
/// only through the validating constructors, so a `SystemRates` in hand
/// is always physical (all rates strictly positive and finite).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemRates {
    g: f64,
    kappa: f64,
    gamma: f64,
    n_atoms: u32,
}

impl SystemRates {
    /// Rates as angular frequencies (rad/µs).
    pub fn new(g: f64, kappa: f64, gamma: f64, n_atoms: u32) -> Result<Self> {
        Ok(Self {
            g: check_rate("g", g)?,
            kappa: check_rate("kappa", kappa)?,
            gamma: check_rate("gamma", gamma)?,
            n_atoms,
        })
    }

    /// Rates as linear frequencies in MHz (ν = ω/2π), the form they are
    /// quoted in; converted to angular rad/µs exactly once, here.
    pub fn from_linear_mhz(g: f64, kappa: f64, gamma: f64, n_atoms: u32) -> Result<Self> {
        Self::new(TAU * g, TAU * kappa, TAU * gamma, n_atoms)
    }

    pub fn g(&self) -> f64 {
        self.g
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn n_atoms(&self) -> u32 {
        self.n_atoms
    }

    /// Same rate triple with a different atom number.
    pub fn with_atoms(&self, n_atoms: u32) -> Self {
        Self { n_atoms, ..*self }
    }

    /// Collective coupling g√N, the normal-mode splitting scale.
    pub fn collective_coupling(&self) -> f64 {
        self.g * (self.n_atoms as f64).sqrt()
    }

    /// Single-atom cooperativity C₁ = g²/(κγ).
    pub fn cooperativity_single(&self) -> f64 {
        self.g * self.g / (self.kappa * self.gamma)
    }

    /// N-atom cooperativity C = N·C₁.
    pub fn cooperativity(&self) -> f64 {
        self.n_atoms as f64 * self.cooperativity_single()
    }

    /// Saturation photon number n₀ = γ²/(8g²).
    pub fn saturation_photons(&self) -> f64 {
        self.gamma * self.gamma / (8.0 * self.g * self.g)
    }
}

/// Classical drive: amplitude ε and detuning Ω = ω_l − ω_c.
///
/// The atomic and cavity resonances coincide by construction (ω_a = ω_c),
/// so the single detuning Ω is all the model ever carries; absolute
/// optical frequencies never appear.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DriveSpec {
    epsilon: f64,
    omega: f64,
}

impl DriveSpec {
    pub fn new(epsilon: f64, omega: f64) -> Result<Self> {
        if !(epsilon >= 0.0 && epsilon.is_finite()) {
            return Err(Error::InvalidDrive { value: epsilon });
        }
        if !omega.is_finite() {
            return Err(Error::NonFinite { what: "drive detuning" });
        }
        Ok(Self { epsilon, omega })
    }

    /// Drive given as the flux-normalized amplitude y = ε/(κ√n₀).
    pub fn from_normalized(y: f64, rates: &SystemRates, omega: f64) -> Result<Self> {
        if !(y >= 0.0 && y.is_finite()) {
            return Err(Error::InvalidDrive { value: y });
        }
        let epsilon = y * rates.kappa() * rates.saturation_photons().sqrt();
        Self::new(epsilon, omega)
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    /// Normalized amplitude y = ε/(κ√n₀) for the given rates.
    pub fn normalized(&self, rates: &SystemRates) -> f64 {
        self.epsilon / (rates.kappa() * rates.saturation_photons().sqrt())
    }
}

/// The dimensionless numbers characterizing the coupled system.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivedParams {
    /// Single-atom cooperativity C₁ = g²/(κγ).
    pub c1: f64,
    /// N-atom cooperativity C = N·C₁.
    pub c: f64,
    /// Saturation photon number n₀ = γ²/(8g²).
    pub n_sat: f64,
    /// Drive normalized to photon flux units, y = ε/(κ√n₀).
    pub y: f64,
}

/// Compute all derived scalars for a rate set and drive.
pub fn derive_params(rates: &SystemRates, drive: &DriveSpec) -> DerivedParams {
    DerivedParams {
        c1: rates.cooperativity_single(),
        c: rates.cooperativity(),
        n_sat: rates.saturation_photons(),
        y: drive.normalized(rates),
    }
}

/// Resonant spontaneous-emission rate γ(1 + 2C₁) of one intracavity atom.
///
/// The enhancement formula holds in the bad-cavity regime (κ ≫ g, γ); the
/// value is returned unconditionally and the caller judges applicability.
pub fn enhanced_emission_rate(rates: &SystemRates) -> f64 {
    rates.gamma() * (1.0 + 2.0 * rates.cooperativity_single())
}

/// Fraction of spontaneous photons leaving through the cavity mode.
///
/// Returns `(C₁′, 2κ/(γ+2κ))`: the escape-weighted cooperativity
/// C₁′ = C₁·2κ/(γ+2κ) and the bare escape fraction itself.
pub fn cavity_emission_fraction(rates: &SystemRates) -> (f64, f64) {
    let fraction = 2.0 * rates.kappa() / (rates.gamma() + 2.0 * rates.kappa());
    (rates.cooperativity_single() * fraction, fraction)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn apparatus(n: u32) -> SystemRates {
        SystemRates::from_linear_mhz(2.0, 2.6, 6.0, n).unwrap()
    }

    #[test]
    fn rejects_nonpositive_rates() {
        assert!(matches!(
            SystemRates::new(0.0, 1.0, 1.0, 1),
            Err(Error::InvalidRate { name: "g", .. })
        ));
        assert!(matches!(
            SystemRates::from_linear_mhz(2.0, -2.6, 6.0, 1),
            Err(Error::InvalidRate { name: "kappa", .. })
        ));
        assert!(SystemRates::new(1.0, 1.0, f64::NAN, 1).is_err());
    }

    #[test]
    fn apparatus_cooperativity_and_saturation() {
        let rates = apparatus(1);
        let drive = DriveSpec::new(0.0, 0.0).unwrap();
        let p = derive_params(&rates, &drive);
        // 4/15.6 and 36/32; the quoted lab values 0.25 and 1.1 are rounded.
        assert_relative_eq!(p.c1, 4.0 / 15.6, max_relative = 1e-14);
        assert_relative_eq!(p.n_sat, 1.125, max_relative = 1e-14);
        assert_eq!(p.c, p.c1);
        assert_eq!(p.y, 0.0);
    }

    #[test]
    fn four_atoms_fig1_rates() {
        let rates = SystemRates::from_linear_mhz(2.0, 2.65, 6.0, 4).unwrap();
        let c = rates.cooperativity();
        assert_relative_eq!(c, 4.0 * 4.0 / 15.9, max_relative = 1e-14);
        assert_relative_eq!(c, 1.0062893081761006, max_relative = 1e-12);
    }

    #[test]
    fn decoupled_atom_limit() {
        // g → 0⁺: cooperativity vanishes, saturation scale diverges.
        let rates = SystemRates::new(1e-8, 16.336, 37.699, 1).unwrap();
        assert!(rates.cooperativity_single() < 1e-12);
        assert!(rates.saturation_photons() > 1e12);
    }

    #[test]
    fn normalized_drive_round_trip() {
        let rates = apparatus(1);
        let drive = DriveSpec::from_normalized(0.05, &rates, 1.3).unwrap();
        assert_relative_eq!(drive.normalized(&rates), 0.05, max_relative = 1e-14);
        assert_relative_eq!(
            drive.epsilon(),
            0.05 * rates.kappa() * 1.125_f64.sqrt(),
            max_relative = 1e-14
        );
        assert!(DriveSpec::new(-1.0, 0.0).is_err());
    }

    #[test]
    fn enhanced_rate_values() {
        let rates = apparatus(1);
        // γ(1 + 2·0.25641) = 2π·9.0769 MHz
        assert_relative_eq!(
            enhanced_emission_rate(&rates),
            TAU * 9.076923076923077,
            max_relative = 1e-12
        );
        // C₁ = 0.5 doubles the free-space rate.
        let doubling = SystemRates::new(1.0, 1.0, 2.0, 1).unwrap();
        assert_relative_eq!(doubling.cooperativity_single(), 0.5, max_relative = 1e-15);
        assert_relative_eq!(
            enhanced_emission_rate(&doubling),
            2.0 * doubling.gamma(),
            max_relative = 1e-15
        );
    }

    #[test]
    fn emission_fraction_values() {
        let rates = apparatus(1);
        let (c1p, fraction) = cavity_emission_fraction(&rates);
        assert_relative_eq!(fraction, 5.2 / 11.2, max_relative = 1e-14);
        assert_relative_eq!(c1p, (4.0 / 15.6) * (5.2 / 11.2), max_relative = 1e-14);
        // Bad-cavity limit: everything leaves through the mirror.
        let bad = SystemRates::new(1.0, 1e12, 1.0, 1).unwrap();
        let (c1p, fraction) = cavity_emission_fraction(&bad);
        assert_relative_eq!(fraction, 1.0, epsilon = 1e-10);
        assert_relative_eq!(c1p, bad.cooperativity_single(), max_relative = 1e-10);
        // γ → 0⁺ limit.
        let slow = SystemRates::new(1.0, 1.0, 1e-12, 1).unwrap();
        assert_relative_eq!(cavity_emission_fraction(&slow).1, 1.0, epsilon = 1e-10);
    }

    #[test]
    fn enhanced_rate_strictly_above_gamma() {
        for (g, k, ga) in [(0.3, 11.0, 2.0), (5.0, 0.7, 0.9), (1e-6, 1.0, 1.0)] {
            let r = SystemRates::new(g, k, ga, 1).unwrap();
            assert!(enhanced_emission_rate(&r) > r.gamma());
        }
    }
}
