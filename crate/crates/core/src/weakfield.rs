//! Closed-form weak-field steady-state response of the driven system.
//!
//! In the weak-field limit the normalized intracavity field x and the
//! collective atomic polarization p at probe detuning Ω obey
//!
//! ```text
//! x/y = 1 / [ (1 − iΩ/κ) + 2C/(1 − i2Ω/γ) ],     p/y = 2C·(x/y)/(1 − i2Ω/γ)
//! ```
//!
//! with y the incident amplitude in photon flux units. On resonance the
//! state equation y = x(1 + 2C) holds and the incident energy splits
//! exactly into transmission X = |x|² and fluorescence F = 2Re(x̄p) + |p|²
//! (all normalized to Y = |y|²). Off resonance the cavity's reactive
//! response breaks the split; the residual 1 − (X + F) is reported rather
//! than asserted zero.
//!
//! The polarization is stored with the +2C sign so that y = x + p on
//! resonance. Physically p opposes the drive and nearly cancels it in the
//! low-intensity limit; that phase relationship is carried by the complex
//! values, not an extra sign convention.
//!
//! Only κ, γ and the cooperativity C enter these forms; C may come from an
//! integer atom number (C = N·C₁) or directly as a real effective value.
//! The two routes are never mixed in one computation.

use alloc::vec::Vec;

use num_complex::Complex64;

#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::params::SystemRates;
use crate::peakfind::{find_local_maxima, Peak};

/// Parameters of the weak-field response: κ, γ and the cooperativity C.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeakFieldSystem {
    kappa: f64,
    gamma: f64,
    c: f64,
}

impl WeakFieldSystem {
    /// Effective-cooperativity constructor; C is real and may be zero
    /// (atom number is continuous in the lab, where C is set by loading).
    pub fn from_cooperativity(kappa: f64, gamma: f64, c: f64) -> Result<Self> {
        if !(kappa > 0.0 && kappa.is_finite()) {
            return Err(Error::InvalidRate { name: "kappa", value: kappa });
        }
        if !(gamma > 0.0 && gamma.is_finite()) {
            return Err(Error::InvalidRate { name: "gamma", value: gamma });
        }
        if !(c >= 0.0 && c.is_finite()) {
            return Err(Error::InvalidRate { name: "c", value: c });
        }
        Ok(Self { kappa, gamma, c })
    }

    /// Integer-atom constructor, C = N·C₁; matches the oracle's model.
    pub fn from_rates(rates: &SystemRates) -> Self {
        Self {
            kappa: rates.kappa(),
            gamma: rates.gamma(),
            c: rates.cooperativity(),
        }
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn cooperativity(&self) -> f64 {
        self.c
    }

    /// g²N expressed through the cooperativity: g²N = Cκγ.
    pub fn coupling_sq(&self) -> f64 {
        self.c * self.kappa * self.gamma
    }

    /// Collective coupling scale g√N = √(Cκγ).
    pub fn coupling_scale(&self) -> f64 {
        self.coupling_sq().sqrt()
    }

    /// Response at one detuning (rad/µs).
    pub fn response(&self, omega: f64) -> WeakFieldPoint {
        // u = cavity denominator, v = atomic denominator.
        let u = Complex64::new(1.0, -omega / self.kappa);
        let v = Complex64::new(1.0, -2.0 * omega / self.gamma);
        let w = u * v + 2.0 * self.c;
        let x_over_y = v / w;
        let p_over_y = Complex64::new(2.0 * self.c, 0.0) / w;
        let transmission = x_over_y.norm_sqr();
        let cross_term = 2.0 * (x_over_y.conj() * p_over_y).re;
        let polarization_sq = p_over_y.norm_sqr();
        WeakFieldPoint {
            omega,
            x_over_y,
            p_over_y,
            transmission,
            cross_term,
            polarization_sq,
            fluorescence: cross_term + polarization_sq,
        }
    }

    /// Response on a strictly increasing detuning grid, with the doublet
    /// report attached.
    pub fn spectrum(&self, grid: &[f64]) -> Result<SpectrumResult> {
        if grid.is_empty() {
            return Err(Error::EmptyGrid);
        }
        if grid.iter().any(|om| !om.is_finite()) {
            return Err(Error::NonFinite { what: "detuning grid" });
        }
        if grid.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::UnsortedGrid);
        }
        let points: Vec<WeakFieldPoint> = grid.iter().map(|&om| self.response(om)).collect();
        for p in &points {
            debug_assert!(p.transmission >= 0.0 && p.polarization_sq >= 0.0);
            // Nonnegative for coincident atomic and cavity resonances.
            debug_assert!(p.cross_term >= 0.0);
        }
        Ok(SpectrumResult {
            grid: grid.to_vec(),
            points,
            peaks: self.peak_report(),
        })
    }

    /// Positive detuning of the fluorescence (cross-term) doublet,
    /// √(g²N − (κ² + (γ/2)²)/2), when the spectrum has split.
    pub fn emission_peak_detuning(&self) -> Option<f64> {
        let half_gamma = 0.5 * self.gamma;
        let s = self.coupling_sq() - 0.5 * (self.kappa * self.kappa + half_gamma * half_gamma);
        (s > 0.0).then(|| s.sqrt())
    }

    /// Positive detuning of the transmission doublet,
    /// √(√(g⁴N² + g²Nγ(γ/2 + κ)) − (γ/2)²), when the spectrum has split.
    ///
    /// The radicand is positive exactly when the stationary point is a true
    /// interior maximum of X(Ω), so no separate second-order check is
    /// needed: below threshold X decreases monotonically from Ω = 0.
    pub fn transmission_peak_detuning(&self) -> Option<f64> {
        let gn2 = self.coupling_sq();
        let half_gamma = 0.5 * self.gamma;
        let inner = gn2 * gn2 + gn2 * self.gamma * (half_gamma + self.kappa);
        let s = inner.sqrt() - half_gamma * half_gamma;
        (s > 0.0).then(|| s.sqrt())
    }

    /// Doublet positions, heights and split flags from the closed forms.
    ///
    /// Heights are the spectrum values at the doublet detuning, or at Ω = 0
    /// while the spectrum is still single-peaked.
    pub fn peak_report(&self) -> PeakReport {
        let emission_detuning = self.emission_peak_detuning();
        let transmission_detuning = self.transmission_peak_detuning();
        let emission_height = self.response(emission_detuning.unwrap_or(0.0)).cross_term;
        let transmission_height =
            self.response(transmission_detuning.unwrap_or(0.0)).transmission;
        PeakReport {
            transmission_detuning,
            emission_detuning,
            transmission_height,
            emission_height,
            transmission_split: transmission_detuning.is_some(),
            emission_split: emission_detuning.is_some(),
        }
    }

    /// Default search interval for numeric peak hunting: all spectral
    /// structure sits within a few normal-mode widths of the origin.
    pub fn search_interval(&self) -> (f64, f64) {
        let scale = self.coupling_scale().max(self.kappa).max(self.gamma);
        (0.0, 5.0 * scale)
    }

    /// Numeric argmax of the transmission spectrum on Ω ≥ 0.
    pub fn transmission_peak_numeric(&self) -> Result<Vec<Peak>> {
        find_local_maxima(|om| self.response(om).transmission, self.search_interval())
    }

    /// Numeric argmax of the cross-term spectrum on Ω ≥ 0.
    pub fn emission_peak_numeric(&self) -> Result<Vec<Peak>> {
        find_local_maxima(|om| self.response(om).cross_term, self.search_interval())
    }
}

/// Complex response and normalized intensities at one detuning.
///
/// All intensity fields are divided by the incident intensity Y = |y|².
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeakFieldPoint {
    /// Detuning Ω (rad/µs).
    pub omega: f64,
    /// Normalized intracavity field x/y.
    pub x_over_y: Complex64,
    /// Normalized collective polarization p/y.
    pub p_over_y: Complex64,
    /// Transmission X = |x|²/Y.
    pub transmission: f64,
    /// Field–polarization cross term 2Re(x̄p)/Y; tracks the atomic
    /// inversion and is nonnegative for coincident resonances.
    pub cross_term: f64,
    /// Polarization intensity |p|²/Y.
    pub polarization_sq: f64,
    /// Total fluorescence F = cross_term + polarization_sq.
    pub fluorescence: f64,
}

impl WeakFieldPoint {
    /// Residual of the resonant energy split, 1 − (X + F). Zero at Ω = 0;
    /// off resonance the cavity's reactive term makes it nonzero.
    pub fn energy_residual(&self) -> f64 {
        1.0 - (self.transmission + self.fluorescence)
    }
}

/// A sampled spectrum in one-to-one order with its detuning grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumResult {
    pub grid: Vec<f64>,
    pub points: Vec<WeakFieldPoint>,
    pub peaks: PeakReport,
}

/// Closed-form doublet summary of one parameter set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeakReport {
    /// Positive detuning of the transmission doublet, absent below threshold.
    pub transmission_detuning: Option<f64>,
    /// Positive detuning of the fluorescence doublet, absent below threshold.
    pub emission_detuning: Option<f64>,
    /// X at its maximum (doublet position or Ω = 0).
    pub transmission_height: f64,
    /// Cross term at its maximum (doublet position or Ω = 0).
    pub emission_height: f64,
    pub transmission_split: bool,
    pub emission_split: bool,
}

/// Cooperativities at which the two spectra bifurcate away from Ω = 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SplitThresholds {
    /// Transmission spectrum threshold (the smaller of the two).
    pub transmission: f64,
    /// Cross-term spectrum threshold, (κ² + γ²/4)/(2κγ).
    pub emission: f64,
}

/// Splitting thresholds for a rate pair (κ, γ); independent of g and N
/// since both enter only through C.
///
/// Both are exact closed forms. They diverge as γ → 0⁺ (the spectra stay
/// single-peaked at any finite C), which is out of the intended domain.
pub fn split_thresholds(kappa: f64, gamma: f64) -> Result<SplitThresholds> {
    if !(kappa > 0.0 && kappa.is_finite()) {
        return Err(Error::InvalidRate { name: "kappa", value: kappa });
    }
    if !(gamma > 0.0 && gamma.is_finite()) {
        return Err(Error::InvalidRate { name: "gamma", value: gamma });
    }
    let kg = kappa * gamma;
    let m = 0.25 * gamma * gamma;
    let b_sq = (kappa + 0.5 * gamma) * (kappa + 0.5 * gamma);
    // Interior-maximum condition of X(Ω) turns on at A² + 2mA − mB² = 0
    // with A = κγ(C + 1/2).
    let a_crit = -m + (m * (m + b_sq)).sqrt();
    let transmission = a_crit / kg - 0.5;
    let emission = (kappa * kappa + m) / (2.0 * kg);
    Ok(SplitThresholds { transmission, emission })
}

/// One row of the resonant-response table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResonantPoint {
    pub c: f64,
    /// X(0) = 1/(1+2C)².
    pub transmission: f64,
    /// 2Re(x̄p)(0) = 4C/(1+2C)².
    pub cross_term: f64,
    /// |p|²(0) = 4C²/(1+2C)².
    pub polarization_sq: f64,
}

impl ResonantPoint {
    /// X + F; identically 1 on resonance.
    pub fn total(&self) -> f64 {
        self.transmission + self.cross_term + self.polarization_sq
    }
}

/// Resonant (Ω = 0) response versus cooperativity.
///
/// The values depend on no rate but C itself: the transmitted fraction
/// falls monotonically while the cross term rises to its global maximum
/// 1/2 at C = 1/2 and decays again.
pub fn resonant_response(c_grid: &[f64]) -> Result<Vec<ResonantPoint>> {
    let mut rows = Vec::with_capacity(c_grid.len());
    for &c in c_grid {
        if !(c >= 0.0 && c.is_finite()) {
            return Err(Error::InvalidRate { name: "c", value: c });
        }
        let denom = (1.0 + 2.0 * c) * (1.0 + 2.0 * c);
        rows.push(ResonantPoint {
            c,
            transmission: 1.0 / denom,
            cross_term: 4.0 * c / denom,
            polarization_sq: 4.0 * c * c / denom,
        });
    }
    Ok(rows)
}
