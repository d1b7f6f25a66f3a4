//! Spectroscopy engine for a driven cavity QED system: N two-level atoms
//! coupled to one mode of a lossy optical resonator.
//!
//! Two independent computation routes live here:
//!
//! * [`weakfield`] — closed-form weak-field steady-state response. The
//!   normalized intracavity field and atomic polarization as a function of
//!   probe detuning, the transmission / fluorescence energy split, doublet
//!   peak positions and splitting thresholds.
//! * [`oracle`] — a brute-force Lindblad master-equation solver on a
//!   truncated Fock ⊗ spin Hilbert space. It knows nothing about the closed
//!   forms and is used to cross-check every one of their claims.
//!
//! [`params`] holds the rate bookkeeping shared by both: coupling `g`,
//! cavity field decay `kappa`, atomic population decay `gamma`, and the
//! dimensionless numbers derived from them (cooperativity, saturation
//! photon number, normalized drive).
//!
//! All rates are angular frequencies in rad/µs. Quoted laboratory values
//! are linear MHz; conversion (ω = 2π·ν) is the caller's job and the
//! constructors provide a `from_linear_mhz` entry point for it.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod error;
pub mod oracle;
pub mod params;
pub mod peakfind;
pub mod weakfield;

pub use error::{Error, Result};
pub use params::{
    cavity_emission_fraction, derive_params, enhanced_emission_rate, DerivedParams, DriveSpec,
    SystemRates,
};
pub use weakfield::{
    resonant_response, split_thresholds, PeakReport, ResonantPoint, SpectrumResult,
    SplitThresholds, WeakFieldPoint, WeakFieldSystem,
};
